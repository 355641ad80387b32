"""Hypernym hierarchies: loading, validation and navigation.

A taxonomy is a DAG of synsets. Each synset carries a non-empty set of
normalized lemmas and zero or more hypernym ids. Transitive closures are
computed lazily and memoized per synset; a taxonomy is immutable once
loaded, so concurrent readers only ever observe idempotent cache fills.
"""

from __future__ import annotations

import graphlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    CycleError,
    DanglingHypernymError,
    DuplicateSynsetError,
    EmptySynsetError,
    InputError,
    MalformedLineError,
)

logger = logging.getLogger(__name__)

ROLES = ("source", "target")


def normalize_lemma(word: str) -> str:
    """Lowercase ``word`` and join internal whitespace with underscores."""
    return "_".join(word.strip().lower().split())


def _check_id(value: str) -> None:
    if not value:
        raise ValueError("synset id must be non-empty")
    if any(ch in value for ch in "\t\n\r,"):
        raise ValueError(f"synset id contains a reserved character: {value!r}")


@dataclass(frozen=True)
class Synset:
    id: str
    words: frozenset[str]
    hypernyms: frozenset[str] = frozenset()

    def __post_init__(self):
        _check_id(self.id)
        if not self.words:
            raise EmptySynsetError(f"synset {self.id!r} has no words")
        words = frozenset(normalize_lemma(w) for w in self.words)
        if "" in words:
            raise EmptySynsetError(f"synset {self.id!r} has an empty lemma")
        if any(("\t" in w or "," in w) for w in words):
            raise ValueError(f"synset {self.id!r} has a lemma with a tab or comma")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "hypernyms", frozenset(self.hypernyms))


class Taxonomy:
    """An immutable, validated hypernym DAG.

    Use :func:`load_taxonomy` to read one from disk or
    :meth:`from_synsets` to build one in memory.
    """

    def __init__(self, synsets: Mapping[str, Synset], role: str = "source"):
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {role!r}")
        self.role = role
        self._synsets = dict(synsets)
        self._hyponyms: dict[str, set[str]] = {sid: set() for sid in self._synsets}
        for sid, syn in self._synsets.items():
            for h in syn.hypernyms:
                if h not in self._synsets:
                    raise DanglingHypernymError(
                        f"synset {sid!r} names unknown hypernym {h!r}"
                    )
                self._hyponyms[h].add(sid)
        self._hyponyms_frozen = {k: frozenset(v) for k, v in self._hyponyms.items()}
        self._check_acyclic()

        index: dict[str, set[str]] = {}
        for sid, syn in self._synsets.items():
            for w in syn.words:
                index.setdefault(w, set()).add(sid)
        self.lemma_index: dict[str, frozenset[str]] = {
            w: frozenset(ids) for w, ids in index.items()
        }
        self._ancestors: dict[str, frozenset[str]] = {}
        self._descendants: dict[str, frozenset[str]] = {}

    @classmethod
    def from_synsets(cls, synsets: Iterable[Synset], role: str = "source") -> Taxonomy:
        table: dict[str, Synset] = {}
        for syn in synsets:
            if syn.id in table:
                raise DuplicateSynsetError(f"duplicate synset id {syn.id!r}")
            table[syn.id] = syn
        return cls(table, role=role)

    @classmethod
    def from_edges(cls, words: Mapping[str, Iterable[str]],
                   hypernyms: Mapping[str, Iterable[str]] | None = None,
                   role: str = "source") -> Taxonomy:
        """Build from ``{id: words}`` and ``{id: hypernym ids}`` dicts."""
        hypernyms = hypernyms or {}
        return cls.from_synsets(
            (Synset(sid, frozenset(ws), frozenset(hypernyms.get(sid, ())))
             for sid, ws in words.items()),
            role=role,
        )

    def _check_acyclic(self) -> None:
        sorter = graphlib.TopologicalSorter(
            {sid: syn.hypernyms for sid, syn in self._synsets.items()}
        )
        try:
            order = tuple(sorter.static_order())
        except graphlib.CycleError as exc:
            raise CycleError(exc.args[1]) from None
        self._topological = order

    # -- collection protocol -------------------------------------------------

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, sid: object) -> bool:
        return sid in self._synsets

    def __iter__(self):
        return iter(self._synsets)

    def __getitem__(self, sid: str) -> Synset:
        try:
            return self._synsets[sid]
        except KeyError:
            raise KeyError(f"unknown synset id {sid!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Taxonomy):
            return NotImplemented
        return self._synsets == other._synsets

    def __repr__(self) -> str:
        return f"<Taxonomy role={self.role} synsets={len(self)}>"

    @property
    def synsets(self) -> Mapping[str, Synset]:
        return self._synsets

    def ids(self) -> list[str]:
        return sorted(self._synsets)

    def words(self, sid: str) -> frozenset[str]:
        return self[sid].words

    def roots(self) -> list[str]:
        return sorted(sid for sid, syn in self._synsets.items() if not syn.hypernyms)

    def topological_order(self) -> tuple[str, ...]:
        """Ids ordered so that every hypernym precedes its hyponyms."""
        return self._topological

    # -- navigation ----------------------------------------------------------

    def immediate_hypernyms(self, sid: str) -> frozenset[str]:
        return self[sid].hypernyms

    def immediate_hyponyms(self, sid: str) -> frozenset[str]:
        self[sid]
        return self._hyponyms_frozen[sid]

    def ancestors(self, sid: str) -> frozenset[str]:
        """All transitive hypernyms of ``sid``, excluding ``sid`` itself."""
        return self._closure(sid, self._ancestors, self.immediate_hypernyms)

    def descendants(self, sid: str) -> frozenset[str]:
        """All transitive hyponyms of ``sid``, excluding ``sid`` itself."""
        return self._closure(sid, self._descendants, self.immediate_hyponyms)

    def _closure(self, sid, memo, step) -> frozenset[str]:
        if sid in memo:
            return memo[sid]
        self[sid]
        # iterative post-order so that deep chains do not hit the recursion limit
        stack = [(sid, False)]
        while stack:
            node, expanded = stack.pop()
            if node in memo:
                continue
            nexts = step(node)
            if expanded:
                acc = set(nexts)
                for n in nexts:
                    acc |= memo[n]
                memo[node] = frozenset(acc)
            else:
                stack.append((node, True))
                stack.extend((n, False) for n in nexts if n not in memo)
        return memo[sid]


# -- TSV format ---------------------------------------------------------------


def _split_list(field: str) -> list[str]:
    return [item.strip() for item in field.split(",") if item.strip()]


def parse_taxonomy(lines: Iterable[str], role: str = "source", path=None) -> Taxonomy:
    """Parse taxonomy TSV lines (``id TAB lemmas TAB hypernyms``)."""
    synsets: dict[str, Synset] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise MalformedLineError(
                f"expected 3 tab-separated fields, got {len(fields)}", path, lineno
            )
        sid = fields[0].strip()
        if not sid:
            raise MalformedLineError("empty synset id", path, lineno)
        if sid in synsets:
            raise DuplicateSynsetError(f"duplicate synset id {sid!r}", path, lineno)
        words = _split_list(fields[1])
        if not words:
            raise EmptySynsetError(f"synset {sid!r} has no words", path, lineno)
        hypers = _split_list(fields[2]) if len(fields) == 3 else []
        try:
            synsets[sid] = Synset(sid, frozenset(words), frozenset(hypers))
        except InputError:
            raise
        except ValueError as exc:
            raise MalformedLineError(str(exc), path, lineno) from None
    try:
        return Taxonomy(synsets, role=role)
    except CycleError as exc:
        raise CycleError(exc.cycle, path=path) from None
    except InputError as exc:
        raise type(exc)(str(exc), path=path) from None


def load_taxonomy(path, role: str = "source") -> Taxonomy:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        tax = parse_taxonomy(fh, role=role, path=path)
    logger.info("loaded %s taxonomy %s: %d synsets", role, path, len(tax))
    return tax


def format_taxonomy(tax: Taxonomy) -> str:
    lines = []
    for sid in tax.ids():
        syn = tax[sid]
        lines.append(
            f"{sid}\t{','.join(sorted(syn.words))}\t{','.join(sorted(syn.hypernyms))}\n"
        )
    return "".join(lines)


def write_taxonomy(tax: Taxonomy, path) -> None:
    Path(path).write_text(format_taxonomy(tax), encoding="utf-8")
