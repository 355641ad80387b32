"""Thresholding final weights into a mapping, and remaining-ambiguity stats."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping as MappingABC

from .candidates import CandidateTable
from .errors import ConfigError, InputError
from .relaxation import Assignment

MAPPING_FORMAT_VERSION = "1"


@dataclass
class Mapping:
    """Proposed links per source synset.

    ``links`` holds an entry for every variable the mapping speaks about,
    including variables with no proposal (an empty dict), so that
    covered-but-unproposed stays distinguishable from uncovered.
    """

    links: dict[str, dict[str, float]]
    delta: float | None = None
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def variables(self) -> list[str]:
        return sorted(self.links)

    def targets(self, source: str) -> set[str]:
        return set(self.links.get(source, ()))

    def proposed(self) -> dict[str, set[str]]:
        return {s: set(ts) for s, ts in self.links.items() if ts}

    def link_count(self) -> int:
        return sum(len(ts) for ts in self.links.values())

    def restricted_to(self, variables: Iterable[str]) -> Mapping:
        """Copy whose variable space is exactly ``variables``."""
        links = {s: dict(self.links.get(s, {})) for s in variables}
        return Mapping(links, self.delta, dict(self.provenance))


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 < delta <= 1.0:
        raise ConfigError(f"delta must lie in (0, 1], got {delta}")
    return delta


def extract_mapping(a: Assignment, delta: float, provenance=None) -> Mapping:
    """Keep every label whose weight reaches ``delta`` (ties retained)."""
    delta = _check_delta(delta)
    table = a.table
    links: dict[str, dict[str, float]] = {}
    for s, (lo, hi) in table.variable_slices().items():
        links[s] = {
            t: float(w)
            for t, w in zip(table.by_variable[s], a.weights[lo:hi])
            if w >= delta
        }
    return Mapping(links, delta, dict(provenance or {}))


@dataclass(frozen=True)
class AmbiguityRow:
    size: int          # variables in the group
    proposing: int     # of which retained at least one target
    links: int

    @property
    def average(self) -> float | None:
        return self.links / self.proposing if self.proposing else None


def _row(mapping: Mapping, variables) -> AmbiguityRow:
    sizes = [len(mapping.links.get(s, ())) for s in variables]
    return AmbiguityRow(len(sizes), sum(1 for n in sizes if n), sum(sizes))


def ambiguity_stats(m: Mapping, table: CandidateTable | None = None,
                    variables: Iterable[str] | None = None) -> dict[str, AmbiguityRow]:
    """Average retained targets per proposing variable.

    With a candidate table the result is split into monosemous and
    ambiguous variables; ``"total"`` is always present. ``variables`` fixes
    the population, which is how to compare one run across thresholds: the
    plain average is over proposing variables only, so a variable dropping
    out at a higher threshold can raise it.
    """
    variables = m.variables if variables is None else sorted(variables)
    report = {}
    if table is not None:
        variables = [s for s in variables if table.candidates(s)]
        report["monosemous"] = _row(m, [s for s in variables if not table.is_ambiguous(s)])
        report["ambiguous"] = _row(m, [s for s in variables if table.is_ambiguous(s)])
    report["total"] = _row(m, variables)
    return report


def grouped_ambiguity(m: Mapping, groups: MappingABC[str, str],
                      default_group: str = "ungrouped") -> dict[str, AmbiguityRow]:
    buckets: dict[str, list[str]] = {}
    for s in m.variables:
        buckets.setdefault(groups.get(s, default_group), []).append(s)
    report = {g: _row(m, vs) for g, vs in sorted(buckets.items())}
    report["total"] = _row(m, m.variables)
    return report


# -- TSV format ---------------------------------------------------------------


def format_mapping(m: Mapping) -> str:
    header = {"format": MAPPING_FORMAT_VERSION}
    if m.delta is not None:
        header["delta"] = f"{m.delta:g}"
    header.update(m.provenance)
    lines = [f"# {k}={v}\n" for k, v in header.items()]
    for s in m.variables:
        for t in sorted(m.links[s]):
            lines.append(f"{s}\t{t}\t{m.links[s][t]:.6f}\n")
    return "".join(lines)


def write_mapping(m: Mapping, path) -> None:
    Path(path).write_text(format_mapping(m), encoding="utf-8")


def parse_mapping(lines: Iterable[str], path=None) -> Mapping:
    """Read a mapping TSV; the weight column is optional (defaults to 1)."""
    links: dict[str, dict[str, float]] = {}
    provenance: dict[str, str] = {}
    delta = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                continue
            if key == "delta":
                delta = float(value)
            elif key != "format":
                provenance[key] = value
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3) or not fields[0] or not fields[1]:
            raise InputError("expected '<source> TAB <target> [TAB <weight>]'",
                             path, lineno)
        try:
            weight = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise InputError(f"bad weight {fields[2]!r}", path, lineno) from None
        links.setdefault(fields[0], {})[fields[1]] = weight
    return Mapping(links, delta, provenance)


def load_mapping(path) -> Mapping:
    with Path(path).open(encoding="utf-8") as fh:
        return parse_mapping(fh, path=path)
