import random
from fractions import Fraction

import numpy as np
import pytest

from taxorelax.candidates import generate_candidates
from taxorelax.constraints import expand_pack
from taxorelax.errors import ConfigError
from taxorelax.relaxation import (
    Assignment,
    RelaxationConfig,
    SupportModel,
    compute_support,
    init_weights,
    run,
    update_weights,
)
from taxorelax.taxonomy import Taxonomy

from helpers import RawDag, brute_candidates, naive_support, random_pair


def table_of(by_variable):
    from taxorelax.candidates import CandidateTable

    return CandidateTable(by_variable)


def test_uniform_init():
    a = init_weights(table_of({"v": ["t1", "t2", "t3"], "m": ["x"], "u": []}))
    assert a.label_weights("v") == pytest.approx({"t1": 1 / 3, "t2": 1 / 3, "t3": 1 / 3})
    assert a.label_weights("m") == {"x": 1.0}
    assert "u" not in a.as_dict()


def test_seeded_random_init_is_reproducible():
    table = table_of({f"v{i}": [f"t{j}" for j in range(i % 4 + 1)] for i in range(30)})
    cfg = RelaxationConfig(init="random", seed=42)
    a, b = init_weights(table, cfg), init_weights(table, cfg)
    assert np.array_equal(a.weights, b.weights)
    assert (a.weights > 0).all()
    np.testing.assert_allclose(a.variable_sums(), 1.0, atol=1e-12)
    assert a.label_weights("v0") == {"t0": 1.0}
    other = init_weights(table, RelaxationConfig(init="random", seed=43))
    assert not np.array_equal(a.weights, other.weights)


@pytest.mark.parametrize("kwargs", [
    {"max_iterations": 0}, {"epsilon": 0.0}, {"init": "zeros"}, {"init": "random"},
])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        RelaxationConfig(**kwargs)


def test_update_rule_one_step():
    table = table_of({"v": ["t1", "t2"]})
    a = Assignment(table, np.array([0.5, 0.5]))
    out = update_weights(a, np.array([1.0, 0.0]))
    # independent exact evaluation of w(1+S)/sum
    w, s = [Fraction(1, 2)] * 2, [Fraction(1), Fraction(0)]
    num = [wi * (1 + si) for wi, si in zip(w, s)]
    expected = [float(x / sum(num)) for x in num]
    assert expected == pytest.approx([2 / 3, 1 / 3], abs=1e-15)
    np.testing.assert_allclose(out.weights, expected, rtol=0, atol=1e-15)
    assert out.iteration == 1


def test_equal_support_leaves_weights_unchanged():
    table = table_of({"v": ["t1", "t2", "t3"]})
    a = Assignment(table, np.array([0.2, 0.3, 0.5]))
    out = update_weights(a, np.array([4.0, 4.0, 4.0]))
    np.testing.assert_allclose(out.weights, a.weights, rtol=1e-15)
    out = update_weights(a, np.zeros(3))
    np.testing.assert_allclose(out.weights, a.weights, rtol=1e-15)


def test_monosemous_stays_one_and_zero_stays_zero():
    table = table_of({"m": ["x"], "v": ["t1", "t2"]})
    a = Assignment(table, np.array([1.0, 0.0, 1.0]))
    out = update_weights(a, np.array([123.0, 50.0, 0.0]))
    assert out.weights.tolist() == [1.0, 0.0, 1.0]


def test_update_rejects_negative_support():
    a = init_weights(table_of({"v": ["t1", "t2"]}))
    with pytest.raises(ValueError):
        update_weights(a, np.array([-1.0, 0.0]))


def test_no_evidence_gives_zero_support_and_immediate_convergence():
    src = Taxonomy.from_edges({"a": {"w"}, "b": {"x"}})
    tgt = Taxonomy.from_edges({"t1": {"w"}, "t2": {"w"}, "t3": {"x"}}, role="target")
    table = generate_candidates(src, tgt)
    a0 = init_weights(table)
    assert not compute_support(a0, table, expand_pack("aa"), src, tgt).any()
    result = run(table, RelaxationConfig(), src, tgt)
    assert result.assignment.iteration == 1 and result.assignment.converged
    assert np.array_equal(result.assignment.weights, a0.weights)


def test_chain_support_value(chain3):
    src, tgt = chain3
    table = generate_candidates(src, tgt)
    a = init_weights(table)
    support = compute_support(a, table, expand_pack("ii"), src, tgt)
    got = dict(zip(table.connections, support))
    # frozen from helpers.naive_support on this instance
    assert got[("c", "c'")] == 1.0
    assert got[("b", "b'")] == 3.0   # iie 1 + iio 1 + iib 1*1
    assert got[("a", "a'")] == 1.0
    raw_s = RawDag({"a": {"x"}, "b": {"y"}, "c": {"z"}}, {"b": {"a"}, "c": {"b"}})
    raw_t = RawDag({"a'": {"x"}, "b'": {"y"}, "c'": {"z"}}, {"b'": {"a'"}, "c'": {"b'"}})
    pack = expand_pack("ii")
    oracle = naive_support(dict(zip(table.connections, a.weights)), table.connections,
                           [str(c) for c in pack.codes], {str(c): 1.0 for c in pack.codes},
                           raw_s, raw_t, brute_candidates(raw_s, raw_t))
    assert oracle == support.tolist()


def test_strength_linearity(worked_example):
    src, tgt, _ = worked_example
    table = generate_candidates(src, tgt)
    a = init_weights(table, RelaxationConfig(init="random", seed=1))
    pack = expand_pack("aa")
    base = compute_support(a, table, pack, src, tgt)
    doubled = compute_support(a, table, pack.with_strengths(
        {c: 2.0 for c in pack.codes}), src, tgt)
    np.testing.assert_allclose(doubled, 2 * base, rtol=1e-15)


@pytest.mark.parametrize("seed", range(12))
def test_support_matches_naive_reference(seed):
    raw_s, raw_t = random_pair(seed, max_nodes=35)
    src, tgt = raw_s.taxonomy(), raw_t.taxonomy("target")
    table = generate_candidates(src, tgt)
    a = init_weights(table, RelaxationConfig(init="random", seed=seed))
    w = dict(zip(table.connections, a.weights))
    cands = brute_candidates(raw_s, raw_t)
    rng = random.Random(seed)
    for pack in ("ii", "ai", "ia", "aa", "iie,aao,iab"):
        pack = expand_pack(pack, {c: rng.choice([0.5, 1.0, 3.0]) for c in
                                  [str(x) for x in expand_pack(pack).codes]})
        got = compute_support(a, table, pack, src, tgt)
        ref = naive_support(w, table.connections, [str(c) for c in pack.codes],
                            {str(c): pack.strength(c) for c in pack.codes},
                            raw_s, raw_t, cands)
        assert got.tolist() == ref


def test_worked_example_final_weights(worked_example):
    src, tgt, names = worked_example
    table = generate_candidates(src, tgt)
    for pack in ("ii", "ai", "ia", "aa"):
        result = run(table, RelaxationConfig(pack=pack), src, tgt)
        w = result.assignment
        c4, c2, c3 = (w.weight(*names[k]) for k in ("C4", "C2", "C3"))
        assert c4 > c2 and c4 > c3
        assert c2 < 1 / 3 and c3 < 1 / 3


def test_sibling_ambiguity_is_resolved_where_structure_allows():
    # identical source/target trees; pairs of siblings share an extra word
    parents = {"r": set(), "p": {"r"}, "q": {"r"}, "p1": {"p"}, "p2": {"p"},
               "q1": {"q"}, "q2": {"q"}, "x": {"r"}, "y": {"r"}}
    words = {n: {n} for n in parents}
    for a, b in (("p", "q"), ("x", "y")):
        words[a].add(f"{a}{b}")
        words[b].add(f"{a}{b}")
    src = Taxonomy.from_edges(words, parents)
    tgt = Taxonomy.from_edges({f"T{k}": v for k, v in words.items()},
                              {f"T{k}": {f"T{p}" for p in v} for k, v in parents.items()},
                              role="target")
    table = generate_candidates(src, tgt)
    result = run(table, RelaxationConfig(pack="aa"), src, tgt)
    w = result.assignment
    # p and q have distinct children, so their neighbourhoods disambiguate them
    for s in ("p", "q"):
        labels = w.label_weights(s)
        assert max(labels, key=labels.get) == f"T{s}"
        assert labels[f"T{s}"] > 0.99
    # x and y are structurally interchangeable leaves: no evidence can split them
    assert w.weight("x", "Tx") == pytest.approx(w.weight("x", "Ty"))


def test_order_invariance(tmp_path):
    from taxorelax.taxonomy import format_taxonomy, parse_taxonomy

    raw_s, raw_t = random_pair(7, max_nodes=40)
    src, tgt = raw_s.taxonomy(), raw_t.taxonomy("target")
    lines_s = format_taxonomy(src).splitlines(keepends=True)
    lines_t = format_taxonomy(tgt).splitlines(keepends=True)
    rng = random.Random(0)
    rng.shuffle(lines_s)
    rng.shuffle(lines_t)
    src2 = parse_taxonomy(lines_s)
    tgt2 = parse_taxonomy(lines_t, role="target")
    r1 = run(generate_candidates(src, tgt), RelaxationConfig(), src, tgt)
    r2 = run(generate_candidates(src2, tgt2), RelaxationConfig(), src2, tgt2)
    assert r1.assignment.as_dict() == r2.assignment.as_dict()


def test_trace_and_invariants_during_run():
    raw_s, raw_t = random_pair(11, max_nodes=50)
    src, tgt = raw_s.taxonomy(), raw_t.taxonomy("target")
    table = generate_candidates(src, tgt)
    model = SupportModel(table, expand_pack("aa"), src, tgt)
    a = init_weights(table, RelaxationConfig(init="random", seed=3))
    for _ in range(30):
        support = model(a.weights)
        assert (support >= 0).all()
        b = update_weights(a, support)
        assert np.all(np.abs(b.variable_sums() - 1.0) <= 1e-9)
        assert ((b.weights >= 0) & (b.weights <= 1)).all()
        assert not (b.weights[a.weights == 0]).any()
        a = b
    result = run(table, RelaxationConfig(max_iterations=3, epsilon=1e-300), src, tgt)
    assert len(result.trace) == 3 and not result.assignment.converged
    assert [r.iteration for r in result.trace] == [1, 2, 3]
