"""Variables and labels of the relaxation problem.

Every source synset is a variable; its labels are the target synsets that
share at least one normalized lemma with it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import InputError
from .taxonomy import Taxonomy


class Connection(NamedTuple):
    source: str
    target: str


@dataclass(frozen=True)
class CandidateStats:
    total: int
    covered: int
    uncovered: int
    monosemous: int
    ambiguous: int

    @property
    def coverage(self) -> float:
        return self.covered / self.total if self.total else 0.0


@dataclass
class CandidateTable:
    """Candidate labels per source synset, plus a flat connection index.

    ``by_variable`` has an entry for every source synset (uncovered ones map
    to an empty list). Connections of covered variables are numbered in
    lexicographic ``(source, target)`` order; that numbering is what the
    relaxation arrays are laid out on.
    """

    by_variable: dict[str, list[str]]
    connections: list[Connection] = field(init=False)
    index: dict[Connection, int] = field(init=False)

    def __post_init__(self):
        self.by_variable = {
            s: sorted(set(ts)) for s, ts in sorted(self.by_variable.items())
        }
        self.connections = [
            Connection(s, t) for s, ts in self.by_variable.items() for t in ts
        ]
        self.index = {c: i for i, c in enumerate(self.connections)}

    def __len__(self) -> int:
        return len(self.connections)

    def __contains__(self, conn: object) -> bool:
        return conn in self.index

    def candidates(self, source: str) -> list[str]:
        return self.by_variable.get(source, [])

    @property
    def variables(self) -> list[str]:
        """Covered variables, i.e. those that take part in relaxation."""
        return [s for s, ts in self.by_variable.items() if ts]

    @property
    def uncovered(self) -> list[str]:
        return [s for s, ts in self.by_variable.items() if not ts]

    def is_ambiguous(self, source: str) -> bool:
        return len(self.candidates(source)) > 1

    @property
    def stats(self) -> CandidateStats:
        sizes = [len(ts) for ts in self.by_variable.values()]
        mono = sum(1 for n in sizes if n == 1)
        amb = sum(1 for n in sizes if n > 1)
        return CandidateStats(
            total=len(sizes),
            covered=mono + amb,
            uncovered=len(sizes) - mono - amb,
            monosemous=mono,
            ambiguous=amb,
        )

    def variable_slices(self) -> dict[str, tuple[int, int]]:
        """``source -> (start, stop)`` range of its connections in the index."""
        out = {}
        pos = 0
        for s, ts in self.by_variable.items():
            if ts:
                out[s] = (pos, pos + len(ts))
                pos += len(ts)
        return out


def generate_candidates(src: Taxonomy, tgt: Taxonomy) -> CandidateTable:
    by_variable = {}
    for sid, syn in src.synsets.items():
        targets: set[str] = set()
        for w in syn.words:
            targets |= tgt.lemma_index.get(w, frozenset())
        by_variable[sid] = targets
    return CandidateTable(by_variable)


def format_candidates(table: CandidateTable) -> str:
    return "".join(
        f"{s}\t{','.join(ts)}\n" for s, ts in table.by_variable.items()
    )


def write_candidates(table: CandidateTable, path) -> None:
    Path(path).write_text(format_candidates(table), encoding="utf-8")


def parse_candidates(lines: Iterable[str], path=None) -> CandidateTable:
    by_variable: dict[str, list[str]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) > 2 or not fields[0].strip():
            raise InputError("expected '<source> TAB <targets>'", path, lineno)
        src = fields[0].strip()
        if src in by_variable:
            raise InputError(f"duplicate source id {src!r}", path, lineno)
        targets = fields[1] if len(fields) == 2 else ""
        by_variable[src] = [t.strip() for t in targets.split(",") if t.strip()]
    return CandidateTable(by_variable)


def load_candidates(path) -> CandidateTable:
    with Path(path).open(encoding="utf-8") as fh:
        return parse_candidates(fh, path=path)
