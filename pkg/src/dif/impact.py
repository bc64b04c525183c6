"""Impact and delta-impact computation.

The impact of a delta on a codebase C is the signed set of dependency
changes it causes: edges present in the mined set of C+delta but not C
(Added) and edges present in C but not C+delta (Removed). The
delta-impact between an origin branch and a destination branch is the
symmetric difference of the two impacts, classified by which side each
entry is missing from. An empty delta-impact gives no indication of a
semantic merge conflict; a non-empty one marks the merge as suspect and
lists the entries to inspect.

Both computations re-mine full snapshots rather than updating dependency
sets incrementally; at the codebase sizes this package targets that is
well inside interactive time and trivially correct.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence

from dif.delta import Delta, apply_delta
from dif.errors import ApplyConflictError, ImpactUndefinedError
from dif.minitalk.model import Codebase
from dif.minitalk.nodes import Diagnostic
from dif.mining import Dependency, DependencyMiner


class Polarity(str, Enum):
    ADDED = "added"
    REMOVED = "removed"


class Presence(str, Enum):
    MISSING = "missing"
    EXTRA = "extra"


@dataclass(frozen=True, slots=True)
class ImpactEntry:
    polarity: Polarity
    dependency: Dependency

    @property
    def sort_key(self):
        return (self.polarity.value, self.dependency.sort_key)

    def render(self) -> str:
        sign = "+" if self.polarity is Polarity.ADDED else "-"
        return f"{sign} {self.dependency.render()}"


@dataclass(frozen=True)
class ImpactSet:
    """Deduplicated impact entries in canonical (polarity, dependency) order."""

    entries: tuple[ImpactEntry, ...]

    @classmethod
    def of(cls, entries: Iterable[ImpactEntry]) -> "ImpactSet":
        return cls(tuple(sorted(set(entries), key=lambda e: e.sort_key)))

    def as_set(self) -> frozenset[ImpactEntry]:
        return frozenset(self.entries)

    def added(self) -> frozenset[Dependency]:
        return frozenset(e.dependency for e in self.entries if e.polarity is Polarity.ADDED)

    def removed(self) -> frozenset[Dependency]:
        return frozenset(e.dependency for e in self.entries if e.polarity is Polarity.REMOVED)

    def render_lines(self) -> list[str]:
        return [e.render() for e in self.entries]

    def __iter__(self) -> Iterator[ImpactEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, entry: object) -> bool:
        return entry in self.entries


@dataclass(frozen=True, slots=True)
class DeltaImpactEntry:
    presence: Presence
    entry: ImpactEntry

    def render(self, dest_label: str = "dest") -> str:
        word = "MISSING" if self.presence is Presence.MISSING else "EXTRA"
        return f"{word} in {dest_label}: {self.entry.render()}"


@dataclass(frozen=True)
class DeltaImpactReport:
    """Classified symmetric difference of the origin and destination
    impacts. Clean means empty; anything else is a suspect merge, not a
    proven conflict."""

    origin_label: str
    dest_label: str
    entries: tuple[DeltaImpactEntry, ...]
    diagnostics: tuple[Diagnostic, ...]

    @property
    def is_clean(self) -> bool:
        return not self.entries

    @property
    def verdict(self) -> str:
        return "clean" if self.is_clean else "suspect"


def impact(delta: Delta, codebase: Codebase) -> ImpactSet:
    """Signed dependency changes caused by applying `delta` to `codebase`.

    Raises ImpactUndefinedError when the delta does not apply cleanly:
    a merge with syntactic conflicts has no defined impact.
    """
    result, _ = _impact_with_diagnostics(delta, codebase)
    return result


def delta_impact(
    delta: Delta,
    origin: Codebase,
    dest: Codebase,
    origin_label: str = "origin",
    dest_label: str = "dest",
) -> DeltaImpactReport:
    """Compare the impact of `delta` on both branches."""
    origin_impact, origin_diags = _impact_with_diagnostics(delta, origin, origin_label)
    dest_impact, dest_diags = _impact_with_diagnostics(delta, dest, dest_label)
    return _build_report(
        origin_impact, dest_impact, origin_label, dest_label, origin_diags + dest_diags
    )


def bisect(
    delta: Delta,
    origin: Codebase,
    destinations: Sequence[Codebase],
    origin_label: str = "origin",
    dest_labels: Sequence[str] | None = None,
) -> Optional[tuple[int, DeltaImpactReport]]:
    """First destination snapshot (oldest first) whose delta-impact is
    suspect, with its report; None when every snapshot is clean."""
    labels = list(dest_labels) if dest_labels is not None else [
        f"dest[{i}]" for i in range(len(destinations))
    ]
    origin_impact, origin_diags = _impact_with_diagnostics(delta, origin, origin_label)
    for index, dest in enumerate(destinations):
        try:
            dest_impact, dest_diags = _impact_with_diagnostics(delta, dest, labels[index])
        except ImpactUndefinedError as exc:
            exc.position = index
            raise
        report = _build_report(
            origin_impact, dest_impact, origin_label, labels[index], origin_diags + dest_diags
        )
        if not report.is_clean:
            return index, report
    return None


def _impact_with_diagnostics(
    delta: Delta, codebase: Codebase, label: str | None = None
) -> tuple[ImpactSet, tuple[Diagnostic, ...]]:
    try:
        applied = apply_delta(delta, codebase)
    except ApplyConflictError as exc:
        raise ImpactUndefinedError(exc.conflicts, label=label) from exc
    before_miner = DependencyMiner(codebase)
    before = before_miner.mine().as_set()
    after_miner = DependencyMiner(applied)
    after = after_miner.mine().as_set()
    entries = [ImpactEntry(Polarity.ADDED, d) for d in after - before]
    entries += [ImpactEntry(Polarity.REMOVED, d) for d in before - after]
    diags = _dedup(
        before_miner.diagnostics + after_miner.diagnostics + list(applied.diagnostics)
    )
    return ImpactSet.of(entries), diags


def _build_report(
    origin_impact: ImpactSet,
    dest_impact: ImpactSet,
    origin_label: str,
    dest_label: str,
    diagnostics: tuple[Diagnostic, ...],
) -> DeltaImpactReport:
    origin_set = origin_impact.as_set()
    dest_set = dest_impact.as_set()
    entries = [DeltaImpactEntry(Presence.MISSING, e) for e in origin_set - dest_set]
    entries += [DeltaImpactEntry(Presence.EXTRA, e) for e in dest_set - origin_set]
    entries.sort(key=lambda d: d.entry.sort_key)
    return DeltaImpactReport(
        origin_label, dest_label, tuple(entries), _dedup(diagnostics)
    )


def _dedup(diagnostics: Iterable[Diagnostic]) -> tuple[Diagnostic, ...]:
    seen: set[Diagnostic] = set()
    out: list[Diagnostic] = []
    for diag in diagnostics:
        if diag not in seen:
            seen.add(diag)
            out.append(diag)
    return tuple(out)


# --- rendering --------------------------------------------------------------


def report_to_doc(report: DeltaImpactReport) -> dict:
    return {
        "verdict": report.verdict,
        "origin": report.origin_label,
        "dest": report.dest_label,
        "entries": [
            {
                "presence": e.presence.value,
                "polarity": e.entry.polarity.value,
                "source": e.entry.dependency.source.render(),
                "kind": e.entry.dependency.kind.value,
                "target": e.entry.dependency.target.render(),
            }
            for e in report.entries
        ],
    }


def report_to_json(report: DeltaImpactReport) -> str:
    return json.dumps(report_to_doc(report), indent=2, sort_keys=True)


def render_report_text(report: DeltaImpactReport, color: bool = False) -> list[str]:
    verdict = report.verdict
    if color:
        code = "32" if report.is_clean else "31"
        verdict = f"\x1b[{code}m{verdict}\x1b[0m"
    lines = [
        f"verdict: {verdict}",
        f"origin: {report.origin_label}",
        f"dest: {report.dest_label}",
    ]
    for entry in report.entries:
        line = entry.render(report.dest_label)
        if color:
            word, rest = line.split(" ", 1)
            line = f"\x1b[33m{word}\x1b[0m {rest}"
        lines.append(line)
    return lines


def impact_to_json(impact_set: ImpactSet) -> str:
    doc = {
        "entries": [
            {
                "polarity": e.polarity.value,
                "source": e.dependency.source.render(),
                "kind": e.dependency.kind.value,
                "target": e.dependency.target.render(),
            }
            for e in impact_set
        ]
    }
    return json.dumps(doc, indent=2, sort_keys=True)
