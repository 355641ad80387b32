"""Metrics for comparing mappings: coverage, precision/recall, agreement.

Also converts a variant-level (sense) mapping into a synset mapping so that
an external sense mapping can be compared on equal terms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping as MappingABC

from .candidates import CandidateTable
from .errors import InputError
from .extraction import Mapping

logger = logging.getLogger(__name__)


@dataclass
class GoldSample:
    entries: dict[str, set[str]]
    groups: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for s, ts in self.entries.items():
            if not ts:
                raise ValueError(f"gold entry {s!r} has no targets")
        unknown = set(self.groups) - set(self.entries)
        if unknown:
            raise ValueError(f"group labels for ids outside the sample: {sorted(unknown)[:5]}")

    @classmethod
    def from_mapping(cls, m: Mapping) -> GoldSample:
        return cls({s: set(ts) for s, ts in m.proposed().items()})

    def __len__(self) -> int:
        return len(self.entries)


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


# -- coverage -----------------------------------------------------------------


@dataclass(frozen=True)
class CoverageRow:
    variables: int
    proposing: int       # at least one target proposed
    disambiguated: int   # proposing, and not every candidate kept

    @property
    def coverage(self) -> float | None:
        return _ratio(self.disambiguated, self.variables)

    @property
    def proposing_fraction(self) -> float | None:
        return _ratio(self.proposing, self.variables)


def coverage(m: Mapping, table: CandidateTable) -> dict[str, CoverageRow]:
    """Coverage over variables with at least one candidate.

    An ambiguous variable counts when its proposal set is non-empty and
    drops at least one candidate; a monosemous one counts when it proposes.
    """
    rows = {}
    for name, ambiguous in (("ambiguous", True), ("monosemous", False)):
        variables = [s for s in table.variables if table.is_ambiguous(s) == ambiguous]
        proposing = disamb = 0
        for s in variables:
            proposed = m.targets(s)
            if not proposed:
                continue
            proposing += 1
            if not ambiguous or not set(table.candidates(s)) <= proposed:
                disamb += 1
        rows[name] = CoverageRow(len(variables), proposing, disamb)
    amb, mono = rows["ambiguous"], rows["monosemous"]
    rows["overall"] = CoverageRow(
        amb.variables + mono.variables,
        amb.proposing + mono.proposing,
        amb.disambiguated + mono.disambiguated,
    )
    return rows


# -- precision / recall ------------------------------------------------------


@dataclass(frozen=True)
class PrecisionRow:
    gold_variables: int
    proposing: int
    proposed_links: int
    correct_links: int
    correct_variables: int

    @property
    def precision(self) -> float | None:
        """Per-link precision."""
        return _ratio(self.correct_links, self.proposed_links)

    @property
    def variable_precision(self) -> float | None:
        return _ratio(self.correct_variables, self.proposing)

    @property
    def recall(self) -> float | None:
        return _ratio(self.correct_variables, self.gold_variables)


@dataclass
class PrecisionReport:
    rows: dict[str, PrecisionRow]
    excluded: int = 0

    @property
    def precision(self) -> float | None:
        return self.rows["overall"].precision

    @property
    def recall(self) -> float | None:
        return self.rows["overall"].recall


def _precision_row(m: Mapping, gold: GoldSample, variables) -> PrecisionRow:
    proposing = proposed = correct = correct_vars = 0
    for s in variables:
        targets = m.targets(s)
        if targets:
            proposing += 1
        hits = len(targets & gold.entries[s])
        proposed += len(targets)
        correct += hits
        correct_vars += hits > 0
    return PrecisionRow(len(variables), proposing, proposed, correct, correct_vars)


def precision_recall(m: Mapping, gold: GoldSample,
                     table: CandidateTable | None = None) -> PrecisionReport:
    """Score ``m`` against ``gold``.

    With a candidate table, gold entries for synsets that are not covered
    variables are excluded (and counted), and an ``ambiguous`` row is added.
    Without one every gold entry is scored.
    """
    if table is not None:
        universe = set(table.variables)
        known = sorted(s for s in gold.entries if s in universe)
    else:
        known = sorted(gold.entries)
    excluded = len(gold.entries) - len(known)
    if excluded:
        logger.warning("%d gold entries reference variables outside the candidate table",
                       excluded)
    rows = {"overall": _precision_row(m, gold, known)}
    if table is not None:
        rows["ambiguous"] = _precision_row(
            m, gold, [s for s in known if table.is_ambiguous(s)])
    return PrecisionReport(rows, excluded)


# -- agreement ---------------------------------------------------------------


@dataclass(frozen=True)
class AgreementRow:
    size: int
    hard_sum: float
    soft_count: int

    @property
    def hard(self) -> float | None:
        return _ratio(self.hard_sum, self.size)

    @property
    def soft(self) -> float | None:
        return _ratio(self.soft_count, self.size)


def agreement(m1: Mapping, m2: Mapping, groups: MappingABC[str, str] | None = None,
              default_group: str = "ungrouped") -> dict[str, AgreementRow]:
    """Hard and soft agreement of ``m1`` with ``m2``.

    Computed over the variables for which ``m1`` proposes something. Soft is
    the share of those variables with at least one target in common; hard
    averages, per variable, the share of ``m1``'s targets also in ``m2``.
    """
    per_var = {}
    for s, targets in m1.proposed().items():
        shared = len(targets & m2.targets(s))
        per_var[s] = (shared / len(targets), shared > 0)

    def row(variables):
        return AgreementRow(
            len(variables),
            sum(per_var[s][0] for s in variables),
            sum(per_var[s][1] for s in variables),
        )

    report = {}
    if groups is not None:
        buckets: dict[str, list[str]] = {}
        for s in sorted(per_var):
            buckets.setdefault(groups.get(s, default_group), []).append(s)
        report = {g: row(vs) for g, vs in sorted(buckets.items())}
    report["total"] = row(sorted(per_var))
    return report


# -- sense mapping conversion --------------------------------------------------


def sense_to_synset(sense_map: Iterable[tuple[str, str]],
                    src_senses: MappingABC[str, str],
                    tgt_senses: MappingABC[str, str]) -> Mapping:
    """Lift a variant-to-variant mapping to a synset-to-synset one.

    Each source synset receives the union of the target synsets its mapped
    variants land in; when its variants disagree every target is kept.
    Pairs whose variants cannot be resolved are skipped and counted in
    ``provenance["unresolved"]``.
    """
    links: dict[str, dict[str, float]] = {}
    unresolved = 0
    for sv, tv in sense_map:
        s = src_senses.get(sv)
        t = tgt_senses.get(tv)
        if s is None or t is None:
            unresolved += 1
            continue
        links.setdefault(s, {})[t] = 1.0
    if unresolved:
        logger.warning("%d variant pairs could not be resolved to synsets", unresolved)
    return Mapping(links, provenance={"unresolved": str(unresolved)})


# -- file formats --------------------------------------------------------------


def _tsv_rows(path, min_fields, max_fields):
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = [f.strip() for f in line.split("\t")]
            if not min_fields <= len(fields) <= max_fields or not all(fields[:min_fields]):
                raise InputError(
                    f"expected {min_fields}-{max_fields} tab-separated fields", path, lineno)
            yield lineno, fields


def load_gold(path) -> GoldSample:
    entries: dict[str, set[str]] = {}
    groups: dict[str, str] = {}
    for lineno, fields in _tsv_rows(path, 2, 3):
        targets = {t.strip() for t in fields[1].split(",") if t.strip()}
        if not targets:
            raise InputError("gold entry without targets", path, lineno)
        entries.setdefault(fields[0], set()).update(targets)
        if len(fields) == 3 and fields[2]:
            groups[fields[0]] = fields[2]
    return GoldSample(entries, groups)


def load_groups(path) -> dict[str, str]:
    """Read ``id TAB group`` lines, or the group column of a gold file."""
    groups = {}
    for _, fields in _tsv_rows(path, 2, 3):
        label = fields[-1]
        if label:
            groups[fields[0]] = label
    return groups


def load_variant_index(path) -> dict[str, str]:
    index = {}
    for lineno, fields in _tsv_rows(path, 2, 2):
        if fields[0] in index and index[fields[0]] != fields[1]:
            raise InputError(f"variant {fields[0]!r} listed in two synsets", path, lineno)
        index[fields[0]] = fields[1]
    return index


def load_variant_mapping(path) -> list[tuple[str, str]]:
    return [(f[0], f[1]) for _, f in _tsv_rows(path, 2, 2)]


def format_gold(gold: GoldSample) -> str:
    lines = []
    for s in sorted(gold.entries):
        group = gold.groups.get(s)
        tail = f"\t{group}" if group else ""
        lines.append(f"{s}\t{','.join(sorted(gold.entries[s]))}{tail}\n")
    return "".join(lines)


# -- report rendering ----------------------------------------------------------


def fmt_fraction(value: float | None, digits: int = 4) -> str:
    return "N/A" if value is None else f"{value:.{digits}f}"


def render_table(headers: list[str], rows: list[list[str]], fmt: str = "text") -> str:
    if fmt == "tsv":
        return "".join("\t".join(r) + "\n" for r in [headers, *rows])
    widths = [max(len(str(r[i])) for r in [headers, *rows]) for i in range(len(headers))]
    out = []
    for k, r in enumerate([headers, *rows]):
        out.append("  ".join(str(c).rjust(w) if i else str(c).ljust(w)
                             for i, (c, w) in enumerate(zip(r, widths))).rstrip() + "\n")
        if k == 0:
            out.append("  ".join("-" * w for w in widths) + "\n")
    return "".join(out)
