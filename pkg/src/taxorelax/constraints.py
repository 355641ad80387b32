"""Structural constraints over hyper/hyponymy.

A constraint is named by a three-letter code XYZ:

* X -- source side scope: ``i`` immediate neighbours only, ``a`` any
  ancestor/descendant;
* Y -- the same for the target side;
* Z -- ``e`` a connected hypernym pair, ``o`` a connected hyponym pair,
  ``b`` both at once.

A connection (s, t) is supported under ``xye`` by every candidate
connection (s', t') with s' above s in scope X and t' above t in scope Y;
``xyo`` is the mirror image going down, and ``xyb`` pairs one hypernym-side
supporter with one hyponym-side supporter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .candidates import CandidateTable, Connection
from .errors import ConfigError
from .taxonomy import Taxonomy

SCOPES = ("i", "a")
DIRECTIONS = ("e", "o", "b")
PACK_NAMES = ("ii", "ai", "ia", "aa")


@dataclass(frozen=True, order=True)
class ConstraintCode:
    source_scope: str
    target_scope: str
    direction: str

    def __post_init__(self):
        if (self.source_scope not in SCOPES or self.target_scope not in SCOPES
                or self.direction not in DIRECTIONS):
            raise ConfigError(f"invalid constraint code {str(self)!r}")

    @classmethod
    def parse(cls, text: str) -> ConstraintCode:
        text = text.strip().lower()
        if len(text) != 3:
            raise ConfigError(f"invalid constraint code {text!r}")
        return cls(text[0], text[1], text[2])

    @property
    def scopes(self) -> str:
        return self.source_scope + self.target_scope

    def __str__(self) -> str:
        return self.source_scope + self.target_scope + self.direction


ALL_CODES = tuple(
    ConstraintCode(x, y, z) for x in SCOPES for y in SCOPES for z in DIRECTIONS
)
_CODE_RANK = {c: i for i, c in enumerate(ALL_CODES)}


@dataclass(frozen=True)
class ConstraintPack:
    """A set of constraint codes combined additively, each with a strength."""

    name: str
    codes: tuple[ConstraintCode, ...]
    strengths: Mapping[ConstraintCode, float] = field(default_factory=dict)

    def __post_init__(self):
        codes = tuple(sorted(set(self.codes), key=_CODE_RANK.__getitem__))
        if not codes:
            raise ConfigError("a constraint pack needs at least one code")
        strengths = {c: 1.0 for c in codes}
        for c, value in dict(self.strengths).items():
            if c not in strengths:
                raise ConfigError(f"strength given for code {c} not in the pack")
            if not value > 0:
                raise ConfigError(f"strength for {c} must be positive, got {value}")
            strengths[c] = float(value)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "strengths", strengths)

    def strength(self, code: ConstraintCode) -> float:
        return self.strengths[code]

    def with_strengths(self, strengths: Mapping) -> ConstraintPack:
        merged = dict(self.strengths)
        for key, value in strengths.items():
            code = ConstraintCode.parse(key) if isinstance(key, str) else key
            merged[code] = value
        return ConstraintPack(self.name, self.codes, merged)

    def __str__(self) -> str:
        return self.name


def expand_pack(name: str, strengths: Mapping | None = None) -> ConstraintPack:
    """Turn ``"ii"``/``"ai"``/``"ia"``/``"aa"`` or a code list into a pack.

    >>> [str(c) for c in expand_pack("aa").codes]
    ['aae', 'aao', 'aab']
    >>> [str(c) for c in expand_pack("aie,aio").codes]
    ['aie', 'aio']
    """
    name = name.strip().lower()
    if name in PACK_NAMES:
        codes = tuple(ConstraintCode(name[0], name[1], d) for d in DIRECTIONS)
    else:
        parts = [p for p in name.split(",") if p.strip()]
        if not parts:
            raise ConfigError("empty constraint list")
        codes = tuple(ConstraintCode.parse(p) for p in parts)
        name = ",".join(str(c) for c in sorted(set(codes), key=_CODE_RANK.__getitem__))
    pack = ConstraintPack(name, codes)
    if strengths:
        pack = pack.with_strengths(strengths)
    return pack


@dataclass(frozen=True)
class Evidence:
    """One supporting instance for ``connection`` under ``code``.

    ``supporters`` holds one connection for ``e``/``o`` codes and a
    (hypernym-side, hyponym-side) pair for ``b`` codes.
    """

    connection: Connection
    code: ConstraintCode
    supporters: tuple[Connection, ...]


def _up(tax: Taxonomy, sid: str, scope: str) -> frozenset[str]:
    return tax.immediate_hypernyms(sid) if scope == "i" else tax.ancestors(sid)


def _down(tax: Taxonomy, sid: str, scope: str) -> frozenset[str]:
    return tax.immediate_hyponyms(sid) if scope == "i" else tax.descendants(sid)


def side_supporters(conn: Connection, side: str, scopes: str, table: CandidateTable,
                    src: Taxonomy, tgt: Taxonomy) -> list[Connection]:
    """Candidate connections related to ``conn`` on one side (``e`` or ``o``).

    Returned in lexicographic order, each distinct connection once.
    """
    step = _up if side == "e" else _down
    related_src = step(src, conn.source, scopes[0])
    related_tgt = step(tgt, conn.target, scopes[1])
    if not related_src or not related_tgt:
        return []
    found = []
    for s2 in sorted(related_src):
        cands = table.candidates(s2)
        if len(cands) <= len(related_tgt):
            found.extend(Connection(s2, t2) for t2 in cands if t2 in related_tgt)
        else:
            found.extend(Connection(s2, t2) for t2 in sorted(related_tgt)
                         if Connection(s2, t2) in table.index)
    return found


def enumerate_support(code: ConstraintCode, conn: Connection, table: CandidateTable,
                      src: Taxonomy, tgt: Taxonomy) -> list[Evidence]:
    if isinstance(code, str):
        code = ConstraintCode.parse(code)
    conn = Connection(*conn)
    if code.direction in ("e", "o"):
        return [Evidence(conn, code, (s,)) for s in
                side_supporters(conn, code.direction, code.scopes, table, src, tgt)]
    above = side_supporters(conn, "e", code.scopes, table, src, tgt)
    below = side_supporters(conn, "o", code.scopes, table, src, tgt)
    return [Evidence(conn, code, pair) for pair in itertools.product(above, below)]
