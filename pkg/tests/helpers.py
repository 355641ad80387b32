"""Independent reference implementations and instance builders for tests.

Nothing in here calls the library's navigation or evidence code: closures
are recomputed by plain BFS over parent dicts and candidates by brute-force
word intersection, so the oracles stay independent of the paths they check.
"""

import random
from collections import deque

from taxorelax.taxonomy import Taxonomy


def bfs_closure(start, step):
    seen = set()
    queue = deque(step(start))
    while queue:
        n = queue.popleft()
        if n not in seen:
            seen.add(n)
            queue.extend(step(n))
    return seen


class RawDag:
    """Parent dict plus words; the oracle's own view of a taxonomy."""

    def __init__(self, words, parents):
        self.words = {k: set(v) for k, v in words.items()}
        self.parents = {k: set(parents.get(k, ())) for k in words}
        self.children = {k: set() for k in words}
        for k, ps in self.parents.items():
            for p in ps:
                self.children[p].add(k)

    def up(self, sid, scope):
        if scope == "i":
            return set(self.parents[sid])
        return bfs_closure(sid, lambda n: self.parents[n])

    def down(self, sid, scope):
        if scope == "i":
            return set(self.children[sid])
        return bfs_closure(sid, lambda n: self.children[n])

    def taxonomy(self, role="source"):
        return Taxonomy.from_edges(self.words, self.parents, role=role)


def brute_candidates(src: RawDag, tgt: RawDag):
    return {(s, t) for s in src.words for t in tgt.words if src.words[s] & tgt.words[t]}


def naive_evidence(code, conn, src: RawDag, tgt: RawDag, cands):
    """Supporter tuples for ``conn`` under ``code`` by scanning all node pairs."""
    s, t = conn

    def side(direction):
        rel = src.up if direction == "e" else src.down
        rel_t = tgt.up if direction == "e" else tgt.down
        rs, rt = rel(s, code[0]), rel_t(t, code[1])
        return [(s2, t2) for s2 in sorted(src.words) for t2 in sorted(tgt.words)
                if s2 in rs and t2 in rt and (s2, t2) in cands]

    if code[2] in "eo":
        return {(c,) for c in side(code[2])}
    return {(a, b) for a in side("e") for b in side("o")}


def naive_support(weights, connections, codes, strengths, src: RawDag, tgt: RawDag, cands):
    """Quadruple-loop support: for each (s, t), scan every (s', t') node pair.

    Supporters are accumulated in lexicographic (s', t') order, code
    contributions in the order given, matching the documented summation order.
    """
    out = []
    src_ids, tgt_ids = sorted(src.words), sorted(tgt.words)
    for s, t in connections:
        total = 0.0
        for code in codes:
            def side(direction):
                rs = (src.up if direction == "e" else src.down)(s, code[0])
                rt = (tgt.up if direction == "e" else tgt.down)(t, code[1])
                acc = 0.0
                for s2 in src_ids:
                    if s2 not in rs:
                        continue
                    for t2 in tgt_ids:
                        if t2 in rt and (s2, t2) in cands:
                            acc += weights[(s2, t2)]
                return acc

            if code[2] == "b":
                part = side("e") * side("o")
            else:
                part = side(code[2])
            total += strengths[code] * part
        out.append(total)
    return out


def random_dag(rng, n, vocab, prefix, max_parents=2, words_per_node=(1, 2)):
    ids = [f"{prefix}{i:03d}" for i in range(n)]
    words, parents = {}, {}
    for i, sid in enumerate(ids):
        k = rng.randint(*words_per_node)
        words[sid] = set(rng.sample(vocab, k))
        if i:
            parents[sid] = set(rng.sample(ids[:i], rng.randint(0, min(max_parents, i))))
    return RawDag(words, parents)


def perturbed_copy(rng, dag: RawDag, prefix, rewire=0.2):
    order = sorted(dag.words)
    rename = {s: prefix + s[1:] for s in order}
    words = {rename[s]: set(ws) for s, ws in dag.words.items()}
    parents = {}
    for i, s in enumerate(order):
        ps = {rename[p] for p in dag.parents[s]}
        if i and rng.random() < rewire:
            ps = {rename[rng.choice(order[:i])]}
        parents[rename[s]] = ps
    return RawDag(words, parents)


def random_pair(seed, max_nodes=50):
    rng = random.Random(seed)
    n = rng.randint(5, max_nodes)
    vocab = [f"v{i}" for i in range(max(3, n // 2))]
    src = random_dag(rng, n, vocab, "s")
    if rng.random() < 0.5:
        tgt = perturbed_copy(rng, src, "t", rewire=rng.random() * 0.5)
    else:
        tgt = random_dag(rng, rng.randint(5, max_nodes), vocab, "t")
    return src, tgt


def worked_example_instance():
    """Encoded version of the canonical competing-connections picture.

    Source node ``s1`` has three candidates ``t2``, ``t3``, ``t4`` (the
    connections C2, C3, C4). ``t4`` sits in a target neighbourhood that
    mirrors ``s1``'s: its hypernym is connected to ``s1``'s hypernym (C1)
    and its two hyponyms are connected to ``s1``'s hyponyms (C5, C6).
    ``t2`` and ``t3`` live in unrelated parts of the target taxonomy.
    """
    src = RawDag(
        {"s0": {"entity"}, "s1": {"bank"}, "s5": {"branch"}, "s6": {"vault"}},
        {"s1": {"s0"}, "s5": {"s1"}, "s6": {"s1"}},
    )
    tgt = RawDag(
        {"t0": {"entity"}, "t4": {"bank"}, "t5": {"branch"}, "t6": {"vault"},
         "t2": {"bank", "slope"}, "t3": {"bank", "row"},
         "t7": {"terrain"}, "t8": {"arrangement"}},
        {"t4": {"t0"}, "t5": {"t4"}, "t6": {"t4"}, "t2": {"t7"}, "t3": {"t8"}},
    )
    names = {"C1": ("s0", "t0"), "C2": ("s1", "t2"), "C3": ("s1", "t3"),
             "C4": ("s1", "t4"), "C5": ("s5", "t5"), "C6": ("s6", "t6")}
    return src, tgt, names
