import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import enumerate_correlation_clustering
from densecsp import (
    DenseCspError,
    DenseGraph,
    SignedGraph,
    brute_force_csp,
    encode_correlation_clustering,
    encode_maxcut_as_csp,
    gen_gnp,
    gen_planted_hard,
    gen_random_rcsp,
    gen_signed_graph,
    planted_value_expectation,
)
from densecsp.generators import planted_dense_probability


# -- G(n, p) ------------------------------------------------------------------


def test_gnp_extremes():
    assert gen_gnp(9, 1.0, 0).edge_count() == 36
    assert gen_gnp(9, 0.0, 0).edge_count() == 0
    with pytest.raises(DenseCspError):
        gen_gnp(5, 1.5, 0)


def test_gnp_edge_count_concentration():
    n = 200
    mean, band = n * (n - 1) / 4, 4 * math.sqrt(n * n / 8)
    inside = sum(abs(gen_gnp(n, 0.5, s).edge_count() - mean) <= band for s in range(100))
    assert inside >= 95


def test_gnp_is_a_valid_simple_graph_and_deterministic():
    g = gen_gnp(300, 0.3, 4)  # spans two row blocks
    a = g.adjacency
    assert np.array_equal(a, a.T) and not a.diagonal().any()
    DenseGraph(a)  # full validation
    assert np.array_equal(a, gen_gnp(300, 0.3, 4).adjacency)
    assert not np.array_equal(a, gen_gnp(300, 0.3, 5).adjacency)


# -- planted family -----------------------------------------------------------


def test_planted_small_structure():
    inst = gen_planted_hard(18, 0.25, 3)
    v0, v1, v2 = inst.parts
    assert (len(v0), len(v1), len(v2)) == (8, 8, 2)
    core = np.concatenate([v0, v1])
    a = inst.graph.adjacency
    assert int(a[np.ix_(core, core)].sum()) // 2 == 64


@pytest.mark.parametrize("seed", range(5))
def test_planted_invariants(seed):
    inst = gen_planted_hard(45, 0.2, seed)
    a = inst.graph.adjacency
    v0, v1, v2 = inst.parts
    assert sorted(np.concatenate(inst.parts).tolist()) == list(range(45))
    assert a[np.ix_(v0, v1)].all()
    assert not a[np.ix_(v0, v0)].any() and not a[np.ix_(v1, v1)].any()
    assert not a[np.ix_(v2, v2)].any()
    # planted cut value is 16n^2/81 plus each V2 vertex's edges to its dense side
    halves = (v0, v1)
    extra = sum(int(a[v, halves[s]].sum()) for v, s in zip(v2, inst.planted_sides))
    assert inst.planted_value() == len(v0) * len(v1) + extra


def test_planted_errors():
    with pytest.raises(DenseCspError, match="divisible by 9"):
        gen_planted_hard(20, 0.1, 0)
    with pytest.raises(DenseCspError):
        gen_planted_hard(18, 0.6, 0)


def test_planted_expectation_formula():
    # relative bias: 16n^2/81 + (n/9)(4n/9)(1+eps)/2 = 18n^2/81 + 2 eps n^2/81
    n, eps = 900, 0.1
    mean, sd = planted_value_expectation(n, eps)
    assert math.isclose(mean, 18 * n**2 / 81 + 2 * eps * n**2 / 81)
    assert math.isclose(mean, 182000.0)
    p = (1 + eps) / 2
    assert math.isclose(sd, math.sqrt(100 * 400 * p * (1 - p)))
    assert planted_dense_probability(0.1, "additive") == pytest.approx(0.6)
    mean_add, _ = planted_value_expectation(n, eps, "additive")
    assert math.isclose(mean_add, 160000 + 100 * 400 * 0.6)


def test_planted_sidecar_round_trips():
    inst = gen_planted_hard(27, 0.1, 1)
    side = inst.sidecar()
    assert side["planted_value"] == inst.planted_value()
    assert [len(p) for p in side["parts"]] == [12, 12, 3]
    assert len(side["planted_sides"]) == 3


# -- random r-CSPs ------------------------------------------------------------


def test_density_zero_has_no_constraints():
    assert len(gen_random_rcsp(10, 2, 3, 0.0, "parity", 0)) == 0


def test_cut_generalization_on_k8_is_the_maxcut_encoding():
    inst = gen_random_rcsp(8, 2, 2, 1.0, "cut-generalization", 0)
    enc = encode_maxcut_as_csp(DenseGraph.complete(8))
    assert set(inst.constraints) == set(enc.constraints)
    for key, table in enc.constraints.items():
        assert inst.constraints[key].tolist() == table.tolist()


def test_constraint_count_concentration():
    # Binomial(120, 1/2): mean 60, sd sqrt(30)
    sd = math.sqrt(120 * 0.25)
    counts = [len(gen_random_rcsp(10, 2, 3, 0.5, "random-table", s)) for s in range(100)]
    assert all(abs(c - 60) <= 3 * sd for c in counts)


def test_parity_tables():
    inst = gen_random_rcsp(6, 2, 3, 1.0, "parity", 2)
    for table in inst.constraints.values():
        bits = table.tolist()
        sums = [sum(t) % 2 for t in itertools.product((0, 1), repeat=3)]
        target = sums[bits.index(1)]
        assert bits == [int(s == target) for s in sums]


def test_rcsp_generator_errors():
    with pytest.raises(DenseCspError, match="k = 2"):
        gen_random_rcsp(6, 3, 2, 1.0, "parity", 0)
    with pytest.raises(DenseCspError):
        gen_random_rcsp(2, 2, 3, 1.0, "parity", 0)
    with pytest.raises(DenseCspError):
        gen_random_rcsp(5, 2, 2, 1.0, "nope", 0)


# -- correlation clustering ---------------------------------------------------


def test_all_positive_pairs_fit_one_cluster():
    n = 5
    sg = SignedGraph(n, {pair: "+" for pair in itertools.combinations(range(n), 2)})
    assert brute_force_csp(encode_correlation_clustering(sg, 2))[1] == 10


def test_all_negative_pairs_on_kn_with_n_clusters():
    n = 4
    sg = SignedGraph(n, {pair: "-" for pair in itertools.combinations(range(n), 2)})
    assert brute_force_csp(encode_correlation_clustering(sg, n))[1] == 6


@pytest.mark.parametrize("seed", range(4))
def test_mixed_signs_match_direct_enumerator(seed):
    sg = gen_signed_graph(8, 0.8, 0.5, seed)
    assert brute_force_csp(encode_correlation_clustering(sg, 2))[1] == enumerate_correlation_clustering(8, sg.labels, 2)


def test_correlation_tables_and_errors():
    inst = encode_correlation_clustering(SignedGraph(3, {(0, 1): "+", (1, 2): "-"}), 3)
    assert inst.constraints[(0, 1)].tolist() == np.eye(3, dtype=int).reshape(-1).tolist()
    assert inst.constraints[(1, 2)].tolist() == (1 - np.eye(3, dtype=int)).reshape(-1).tolist()
    with pytest.raises(DenseCspError):
        encode_correlation_clustering(SignedGraph(2, {(0, 1): "?"}), 2)
    with pytest.raises(DenseCspError):
        encode_correlation_clustering(SignedGraph(2, {(0, 1): "+"}), 1)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_generators_are_deterministic(seed):
    assert np.array_equal(gen_gnp(20, 0.5, seed).adjacency, gen_gnp(20, 0.5, seed).adjacency)
    a, b = gen_planted_hard(18, 0.2, seed), gen_planted_hard(18, 0.2, seed)
    assert np.array_equal(a.graph.adjacency, b.graph.adjacency)
    c, d = gen_random_rcsp(7, 2, 3, 0.5, "parity", seed), gen_random_rcsp(7, 2, 3, 0.5, "parity", seed)
    assert {k: v.tolist() for k, v in c.constraints.items()} == {k: v.tolist() for k, v in d.constraints.items()}
    assert gen_signed_graph(7, 0.5, 0.5, seed).labels == gen_signed_graph(7, 0.5, 0.5, seed).labels
