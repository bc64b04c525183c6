"""dif: semantic merge-conflict detection for MiniTalk codebases.

A merge can be textually clean and still wrong: the origin branch wrote
a change against one version of the code, the destination branch has
drifted, and the merged program behaves differently than either author
intended. dif detects this by mining the static dependency set of each
snapshot, computing the impact of the change (the signed dependency
edges it adds or removes) in both branches, and reporting the
delta-impact: the symmetric difference of the two impacts. Empty means
no indication of a conflict; non-empty lists exactly the dependency
changes that differ between the branches.

Typical library use::

    from dif import parse, diff, delta_impact

    origin = parse(origin_text, "a.mt")
    head = parse(head_text, "a-feature.mt")
    dest = parse(dest_text, "b.mt")
    report = delta_impact(diff(origin, head), origin, dest)
    if not report.is_clean:
        for entry in report.entries:
            print(entry.render(report.dest_label))
"""

from dif.delta import (
    AddClass,
    AddMethod,
    AddTrait,
    ApplyConflict,
    ChangeClassHeader,
    ChangeTraitHeader,
    ConflictReason,
    Delta,
    EntityOp,
    ModifyMethod,
    RemoveClass,
    RemoveMethod,
    RemoveTrait,
    apply_delta,
    diff,
    from_json as delta_from_json,
    invert,
    to_json as delta_to_json,
)
from dif.errors import (
    ApplyConflictError,
    DifError,
    ImpactUndefinedError,
    InvalidCodebaseError,
    InvalidDeltaError,
    InvertUndefinedError,
    MiniTalkSyntaxError,
    UnknownEntityError,
)
from dif.impact import (
    DeltaImpactEntry,
    DeltaImpactReport,
    ImpactEntry,
    ImpactSet,
    Polarity,
    Presence,
    bisect,
    delta_impact,
    impact,
    report_to_doc,
    report_to_json,
)
from dif.minitalk import (
    ClassDef,
    Codebase,
    Diagnostic,
    MethodDef,
    OwnerKind,
    Severity,
    Side,
    TraitDef,
    canonical_serialize,
    merge_sources,
    model_equal,
    parse,
    validate,
)
from dif.mining import (
    ClassRef,
    Dependency,
    DependencyKind,
    DependencyMiner,
    DependencySet,
    EffectiveMethodTable,
    EntityRef,
    MethodRef,
    TraitRef,
    VarKind,
    VarRef,
    descendants,
    effective_table,
    implementors,
    lookup,
    mine,
)

__version__ = "0.1.0"

__all__ = [
    "AddClass",
    "AddMethod",
    "AddTrait",
    "ApplyConflict",
    "ApplyConflictError",
    "ChangeClassHeader",
    "ChangeTraitHeader",
    "ClassDef",
    "ClassRef",
    "Codebase",
    "ConflictReason",
    "Delta",
    "DeltaImpactEntry",
    "DeltaImpactReport",
    "Dependency",
    "DependencyKind",
    "DependencyMiner",
    "DependencySet",
    "Diagnostic",
    "DifError",
    "EffectiveMethodTable",
    "EntityOp",
    "EntityRef",
    "ImpactEntry",
    "ImpactSet",
    "ImpactUndefinedError",
    "InvalidCodebaseError",
    "InvalidDeltaError",
    "InvertUndefinedError",
    "MethodDef",
    "MethodRef",
    "MiniTalkSyntaxError",
    "ModifyMethod",
    "OwnerKind",
    "Polarity",
    "Presence",
    "RemoveClass",
    "RemoveMethod",
    "RemoveTrait",
    "Severity",
    "Side",
    "TraitDef",
    "TraitRef",
    "UnknownEntityError",
    "VarKind",
    "VarRef",
    "apply_delta",
    "bisect",
    "canonical_serialize",
    "delta_from_json",
    "delta_impact",
    "delta_to_json",
    "descendants",
    "diff",
    "effective_table",
    "impact",
    "implementors",
    "invert",
    "lookup",
    "merge_sources",
    "mine",
    "model_equal",
    "parse",
    "report_to_doc",
    "report_to_json",
    "validate",
]
