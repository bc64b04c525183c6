"""Exception hierarchy for the dif analyses.

Operational failures (malformed source, syntactic merge conflicts,
violated preconditions) are raised as exceptions; findings a caller is
meant to inspect (warnings, suspect reports) travel as ordinary data.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from dif.delta import ApplyConflict
    from dif.minitalk.nodes import Diagnostic, Loc


class DifError(Exception):
    """Base class for every error raised by this package."""


class MiniTalkSyntaxError(DifError):
    """Token- or grammar-level violation. Parsing aborts; there is no
    partial codebase for a file with a syntax error."""

    def __init__(self, message: str, loc: "Loc") -> None:
        super().__init__(f"{loc}: {message}")
        self.message = message
        self.loc = loc


class InvalidCodebaseError(DifError):
    """The codebase carries error diagnostics and cannot be analyzed."""

    def __init__(self, diagnostics: Sequence["Diagnostic"]) -> None:
        errors = [d for d in diagnostics if d.severity.value == "error"]
        head = errors[0].render() if errors else "codebase has errors"
        suffix = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        super().__init__(head + suffix)
        self.diagnostics = tuple(diagnostics)


class UnknownEntityError(DifError):
    """A class, trait, or method reference does not resolve in the codebase."""


class InvalidDeltaError(DifError):
    """A delta violates its structural invariants (bad op payload,
    duplicate targets, unparseable JSON)."""


class ApplyConflictError(DifError):
    """Replaying a delta failed; carries the full conflict list. The
    target codebase is left untouched."""

    def __init__(self, conflicts: Sequence["ApplyConflict"]) -> None:
        noun = "conflict" if len(conflicts) == 1 else "conflicts"
        super().__init__(f"delta does not apply: {len(conflicts)} {noun}")
        self.conflicts = tuple(conflicts)


class InvertUndefinedError(DifError):
    """invert() was handed a delta that diff() could not have produced
    against the given base codebase."""


class ImpactUndefinedError(DifError):
    """The delta does not apply cleanly, so its impact (and any
    delta-impact built on it) is undefined for this codebase."""

    def __init__(
        self,
        conflicts: Sequence["ApplyConflict"],
        label: Optional[str] = None,
        position: Optional[int] = None,
    ) -> None:
        where = f" on '{label}'" if label else ""
        super().__init__(f"impact undefined{where}: delta does not apply")
        self.conflicts = tuple(conflicts)
        self.label = label
        self.position = position
