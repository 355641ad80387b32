"""Structural taxonomy alignment by relaxation labeling."""

from .taxonomy import Synset, Taxonomy, load_taxonomy, normalize_lemma
from .candidates import CandidateTable, Connection, generate_candidates
from .constraints import ConstraintCode, ConstraintPack, Evidence, enumerate_support, expand_pack
from .relaxation import (
    Assignment,
    RelaxationConfig,
    compute_support,
    init_weights,
    run,
    update_weights,
)
from .extraction import Mapping, ambiguity_stats, extract_mapping
from .evaluation import (
    GoldSample,
    agreement,
    coverage,
    precision_recall,
    sense_to_synset,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CandidateTable",
    "Connection",
    "ConstraintCode",
    "ConstraintPack",
    "Evidence",
    "GoldSample",
    "Mapping",
    "RelaxationConfig",
    "Synset",
    "Taxonomy",
    "agreement",
    "ambiguity_stats",
    "compute_support",
    "coverage",
    "enumerate_support",
    "expand_pack",
    "extract_mapping",
    "generate_candidates",
    "init_weights",
    "load_taxonomy",
    "normalize_lemma",
    "precision_recall",
    "run",
    "sense_to_synset",
    "update_weights",
]
