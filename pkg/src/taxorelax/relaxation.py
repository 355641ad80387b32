"""Relaxation labeling over candidate connections.

Weights live in a flat array laid out on ``CandidateTable.connections``;
the labels of one variable occupy a contiguous slice. Each iteration
computes every connection's support from a frozen copy of the previous
weights, then applies the normalized multiplicative update

    w'(l) = w(l) * (1 + S(l)) / sum_k w(k) * (1 + S(k))

to all variables at once.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .candidates import CandidateTable
from .constraints import ConstraintPack, expand_pack, side_supporters
from .errors import ConfigError
from .taxonomy import Taxonomy

logger = logging.getLogger(__name__)

INIT_MODES = ("uniform", "random")


@dataclass
class RelaxationConfig:
    pack: ConstraintPack = field(default_factory=lambda: expand_pack("aa"))
    max_iterations: int = 100
    epsilon: float = 1e-4
    init: str = "uniform"
    seed: int | None = None

    def __post_init__(self):
        if isinstance(self.pack, str):
            self.pack = expand_pack(self.pack)
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.init not in INIT_MODES:
            raise ConfigError(f"init must be one of {INIT_MODES}, got {self.init!r}")
        if self.init == "random" and self.seed is None:
            raise ConfigError("random init requires a seed")


@dataclass
class Assignment:
    table: CandidateTable
    weights: np.ndarray
    iteration: int = 0
    converged: bool = False

    def weight(self, source: str, target: str) -> float:
        return float(self.weights[self.table.index[(source, target)]])

    def label_weights(self, source: str) -> dict[str, float]:
        idx = self.table.index
        return {t: float(self.weights[idx[(source, t)]])
                for t in self.table.candidates(source)}

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {s: self.label_weights(s) for s in self.table.variables}

    def variable_sums(self) -> np.ndarray:
        return _segment_sums(self.weights, self.table)


@dataclass
class IterationRecord:
    iteration: int
    max_delta: float
    mean_support: float
    max_support: float
    seconds: float


def _segment_bounds(table: CandidateTable):
    counts = np.array([len(table.candidates(s)) for s in table.variables], dtype=np.intp)
    starts = np.zeros(len(counts), dtype=np.intp)
    if len(counts):
        starts[1:] = np.cumsum(counts)[:-1]
    return starts, counts


def _segment_sums(values: np.ndarray, table: CandidateTable) -> np.ndarray:
    starts, counts = _segment_bounds(table)
    if not len(starts):
        return np.zeros(0)
    return np.add.reduceat(values, starts)


def init_weights(table: CandidateTable, config: RelaxationConfig | None = None) -> Assignment:
    config = config or RelaxationConfig()
    starts, counts = _segment_bounds(table)
    if config.init == "uniform":
        weights = np.repeat(1.0 / counts, counts) if len(counts) else np.zeros(0)
    else:
        rng = np.random.default_rng(config.seed)
        raw = 1.0 - rng.random(len(table))  # in (0, 1]
        weights = raw / np.repeat(np.add.reduceat(raw, starts), counts)
    return Assignment(table, weights.astype(float))


class SupportModel:
    """Support operator for one pack, precompiled into sparse matrices.

    For each (scopes, side) in use, row ``i`` of the matrix lists the
    connections that support connection ``i`` on that side. Column indices
    are sorted, so the row sums accumulate supporters in lexicographic order.
    """

    def __init__(self, table: CandidateTable, pack: ConstraintPack,
                 src: Taxonomy, tgt: Taxonomy):
        self.table = table
        self.pack = pack
        self._matrices: dict[tuple[str, str], sparse.csr_matrix] = {}
        for code in pack.codes:
            sides = ("e", "o") if code.direction == "b" else (code.direction,)
            for side in sides:
                key = (code.scopes, side)
                if key not in self._matrices:
                    self._matrices[key] = self._compile(code.scopes, side, src, tgt)

    def _compile(self, scopes, side, src, tgt) -> sparse.csr_matrix:
        table = self.table
        indptr = [0]
        indices: list[int] = []
        for conn in table.connections:
            cols = [table.index[c] for c in side_supporters(conn, side, scopes, table, src, tgt)]
            cols.sort()
            indices.extend(cols)
            indptr.append(len(indices))
        n = len(table)
        return sparse.csr_matrix(
            (np.ones(len(indices)), np.array(indices, dtype=np.int64), np.array(indptr)),
            shape=(n, n),
        )

    @property
    def evidence_count(self) -> int:
        """Total supporter entries across all compiled operators."""
        return sum(m.nnz for m in self._matrices.values())

    def __call__(self, weights: np.ndarray) -> np.ndarray:
        total = np.zeros(len(self.table))
        sides: dict[tuple[str, str], np.ndarray] = {}

        def side(scopes, direction):
            key = (scopes, direction)
            if key not in sides:
                sides[key] = self._matrices[key] @ weights
            return sides[key]

        for code in self.pack.codes:
            if code.direction == "b":
                part = side(code.scopes, "e") * side(code.scopes, "o")
            else:
                part = side(code.scopes, code.direction)
            total += self.pack.strength(code) * part
        return total


def compute_support(a: Assignment, table: CandidateTable, pack: ConstraintPack,
                    src: Taxonomy, tgt: Taxonomy) -> np.ndarray:
    """Support for every connection of ``table`` under the current weights.

    Builds a fresh :class:`SupportModel`; callers iterating many times
    should build one and reuse it, as :func:`run` does.
    """
    return SupportModel(table, pack, src, tgt)(a.weights)


def update_weights(a: Assignment, support: np.ndarray) -> Assignment:
    support = np.asarray(support, dtype=float)
    if support.shape != a.weights.shape:
        raise ValueError("support vector does not match the assignment")
    if (support < 0).any():
        raise ValueError("support values must be non-negative")
    starts, counts = _segment_bounds(a.table)
    scaled = a.weights * (1.0 + support)
    if not len(starts):
        return Assignment(a.table, scaled, a.iteration + 1, a.converged)
    denom = np.add.reduceat(scaled, starts)
    assert (denom > 0).all(), "all label weights of a variable collapsed to zero"
    return Assignment(a.table, scaled / np.repeat(denom, counts), a.iteration + 1)


@dataclass
class RelaxationResult:
    assignment: Assignment
    trace: list[IterationRecord]
    evidence_count: int


def run(table: CandidateTable, config: RelaxationConfig,
        src: Taxonomy, tgt: Taxonomy) -> RelaxationResult:
    """Iterate support/update until the largest weight change is below epsilon."""
    model = SupportModel(table, config.pack, src, tgt)
    logger.info("relaxation: %d variables, %d connections, %d evidence entries",
                len(table.variables), len(table), model.evidence_count)
    current = init_weights(table, config)
    trace: list[IterationRecord] = []
    for _ in range(config.max_iterations):
        t0 = time.perf_counter()
        support = model(current.weights)
        updated = update_weights(current, support)
        delta = float(np.max(np.abs(updated.weights - current.weights))) if len(table) else 0.0
        record = IterationRecord(
            iteration=updated.iteration,
            max_delta=delta,
            mean_support=float(support.mean()) if len(support) else 0.0,
            max_support=float(support.max()) if len(support) else 0.0,
            seconds=time.perf_counter() - t0,
        )
        trace.append(record)
        logger.debug("iteration %d: max-delta %.3g, mean support %.4g",
                     record.iteration, record.max_delta, record.mean_support)
        current = updated
        if delta < config.epsilon:
            current.converged = True
            break
    if not current.converged:
        logger.warning("relaxation did not converge within %d iterations",
                       config.max_iterations)
    return RelaxationResult(current, trace, model.evidence_count)


def format_trace(trace: list[IterationRecord]) -> str:
    lines = ["iteration\tmax_delta\tmean_support\tmax_support\n"]
    for r in trace:
        lines.append(f"{r.iteration}\t{r.max_delta:.6e}\t{r.mean_support:.6e}\t"
                     f"{r.max_support:.6e}\n")
    return "".join(lines)
