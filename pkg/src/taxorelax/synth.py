"""Synthetic taxonomy pairs with a known identity alignment.

The source is a random tree whose nodes each own a unique word. A share of
the nodes is partitioned into homonym groups that additionally share one
word, which makes every member a candidate of every other member. The
target is a renamed copy with a share of its hypernym edges rewired.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ConfigError
from .evaluation import GoldSample
from .taxonomy import Synset, Taxonomy


@dataclass
class SyntheticPair:
    source: Taxonomy
    target: Taxonomy
    gold: GoldSample


def _sid(prefix: str, i: int, width: int) -> str:
    return f"{prefix}{i:0{width}d}"


def generate_pair(nodes: int = 100, branching: int = 4, ambiguity: float = 1.0,
                  group_size: int = 3, perturbation: float = 0.0,
                  seed: int = 0) -> SyntheticPair:
    """Build a source/target pair and the identity gold mapping.

    ``ambiguity`` is the fraction of nodes placed in homonym groups of
    ``group_size`` members; with 1.0 and groups of 3 nearly every variable
    has three candidates. ``perturbation`` is the probability that a
    non-root target node is re-attached under a different earlier node.
    """
    if nodes < 1:
        raise ConfigError("nodes must be >= 1")
    if branching < 1:
        raise ConfigError("branching must be >= 1")
    if not 0.0 <= ambiguity <= 1.0 or not 0.0 <= perturbation <= 1.0:
        raise ConfigError("ambiguity and perturbation must lie in [0, 1]")
    if group_size < 2:
        raise ConfigError("group_size must be >= 2")

    rng = random.Random(seed)
    width = len(str(nodes - 1))

    parent = [-1] * nodes
    children = [0] * nodes
    open_nodes = [0]
    for i in range(1, nodes):
        k = rng.randrange(len(open_nodes))
        p = open_nodes[k]
        parent[i] = p
        children[p] += 1
        if children[p] >= branching:
            open_nodes[k] = open_nodes[-1]
            open_nodes.pop()
        open_nodes.append(i)

    words = [{f"w{i:0{width}d}"} for i in range(nodes)]
    members = list(range(nodes))
    rng.shuffle(members)
    members = members[:round(ambiguity * nodes)]
    for g, start in enumerate(range(0, len(members), group_size)):
        group = members[start:start + group_size]
        if len(group) < 2:
            break
        for i in group:
            words[i].add(f"h{g:0{width}d}")

    target_parent = list(parent)
    for i in range(2, nodes):
        if rng.random() < perturbation:
            choices = [j for j in range(i) if j != parent[i]]
            target_parent[i] = rng.choice(choices)

    def build(prefix, parents, role):
        return Taxonomy.from_synsets(
            (Synset(_sid(prefix, i, width), frozenset(words[i]),
                    frozenset() if parents[i] < 0 else
                    frozenset({_sid(prefix, parents[i], width)}))
             for i in range(nodes)),
            role=role,
        )

    source = build("s", parent, "source")
    target = build("t", target_parent, "target")
    gold = GoldSample({_sid("s", i, width): {_sid("t", i, width)} for i in range(nodes)})
    return SyntheticPair(source, target, gold)
