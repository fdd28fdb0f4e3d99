"""Brute-force enumeration, and its agreement with compositional evaluation."""
import itertools

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from conftest import COSTS, PROBS, TEN_LABELS, attack_trees, term_graphs
from src.channels import evaluate
from src.decomposition import decompose, decomposition_width
from src.errors import EnumerationCapExceeded, ShapeMismatch
from src.matrices import (
    BasWeights,
    metric_value,
    minsuc_semantics,
    propositional_interpretation,
    stoch_interpretation,
    unreliability_interpretation,
)
from src.oracle import (
    iter_attacks,
    label_attacks,
    matrix_by_formula,
    minsuc,
    prop_metric_by_formula,
    structure_function,
    suc,
    suc_metric_by_formula,
    unreliability_by_enumeration,
)
from src.semirings import antichain_semiring, is_antichain, metric_semiring
from src.term_graph import COPY, atomic, par_compose, seq_compose

MINCOST = metric_semiring("mincost")
LABELS = ("a", "b", "c")


def test_attacks_count_in_binary_with_the_first_step_high(server_room):
    attacks = list(iter_attacks(server_room.graph))
    assert len(attacks) == 8
    assert attacks[1] == {0: 0, 1: 0, 2: 1}
    assert attacks[4] == {0: 1, 1: 0, 2: 0}
    with pytest.raises(EnumerationCapExceeded):
        list(iter_attacks(server_room.graph, cap=2))


def test_structure_function(server_room):
    graph = server_room.graph
    assert structure_function(graph, {0: 1, 1: 0, 2: 1}) == (1,)
    assert structure_function(graph, {0: 1, 1: 0, 2: 0}) == (0,)
    with pytest.raises(ShapeMismatch):
        structure_function(graph, {0: 1, 1: 0, 2: 0}, x=(1,))


def test_successful_attacks(server_room):
    graph = server_room.graph
    assert len(suc(graph)) == 5
    assert label_attacks(graph, minsuc(graph)) == frozenset({frozenset({"F"}), frozenset({"D", "S"})})
    assert label_attacks(graph, minsuc(graph)) == minsuc_semantics(graph)


def test_formula_metrics(server_room, server_room_sub):
    graph = server_room.graph
    assert prop_metric_by_formula(graph, MINCOST, COSTS) == 100.0
    assert suc_metric_by_formula(graph, MINCOST, COSTS) == 100.0
    assert unreliability_by_enumeration(graph, PROBS) == pytest.approx(0.54, abs=1e-12)

    weights = BasWeights({b: 0.0 for b in COSTS}, COSTS)
    assert matrix_by_formula(server_room_sub.graph, MINCOST, weights).rows() == [[0.0], [80.0], [30.0], [100.0]]


def _stochastic_weights(name, semiring, rng):
    """A weight pair per label whose sum is the semiring's one."""
    alpha0, alpha1 = {}, {}
    for b in LABELS:
        if name == "unrel":
            p = rng.randint(0, 16) / 16
            pair = (1.0 - p, p)
        else:
            pair = (semiring.one, semiring.sample(rng))
            if rng.random() < 0.5:
                pair = pair[::-1]
        alpha0[b], alpha1[b] = pair
    return BasWeights(alpha0, alpha1)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(
    term_graphs(max_inputs=3, max_outputs=3, max_nodes=10, labels=LABELS, max_bas=8),
    st.sampled_from(["mincost", "antichain", "unrel", "maxprob"]),
    st.randoms(use_true_random=False),
)
def test_compositional_matrix_equals_the_attack_sum(graph, name, rng):
    semiring = antichain_semiring(LABELS) if name == "antichain" else metric_semiring(name)
    if name == "antichain":
        assume(decomposition_width(decompose(graph)) <= 6)
    weights = _stochastic_weights(name, semiring, rng)
    interpretation = stoch_interpretation(semiring, weights, graph.signature)
    compositional = evaluate(graph, interpretation)
    backend = interpretation.backend
    assert backend.equal(compositional, matrix_by_formula(graph, semiring, weights))


@settings(max_examples=50, deadline=None)
@given(attack_trees(max_bas=10, max_gates=6, labels=TEN_LABELS), st.randoms(use_true_random=False))
def test_unreliability_matches_enumeration(tree, rng):
    p = {b: rng.randint(0, 20) / 20 for b in tree.signature.labels}
    value = metric_value(evaluate(tree, unreliability_interpretation(p, tree.signature)))
    assert value == pytest.approx(unreliability_by_enumeration(tree, p), abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(attack_trees(), st.randoms(use_true_random=False))
def test_absorbing_sum_over_all_attacks_collapses_to_minimal_ones(tree, rng):
    alpha = {b: MINCOST.sample(rng) for b in tree.signature.labels}
    assert suc_metric_by_formula(tree, MINCOST, alpha) == prop_metric_by_formula(tree, MINCOST, alpha)
    vector = evaluate(tree, propositional_interpretation(MINCOST, alpha, tree.signature))
    assert metric_value(vector) == prop_metric_by_formula(tree, MINCOST, alpha)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(attack_trees(max_bas=8, labels=TEN_LABELS, unique=True))
def test_minsuc_through_antichains_matches_enumeration(tree):
    assume(decomposition_width(decompose(tree)) <= 10)
    assert minsuc_semantics(tree) == label_attacks(tree, minsuc(tree))


def _product(semiring, G, F):
    """``G · F`` on row lists, summing over the shared index."""
    return [
        [semiring.sum(semiring.times(G[y][k], F[k][x]) for k in range(len(F))) for x in range(len(F[0]))]
        for y in range(len(G))
    ]


def _kronecker(semiring, A, B):
    return [
        [semiring.times(A[ya][xa], B[yb][xb]) for xa in range(len(A[0])) for xb in range(len(B[0]))]
        for ya in range(len(A))
        for yb in range(len(B))
    ]


def _same_rows(semiring, left, right):
    return len(left) == len(right) and all(
        len(a) == len(b) and all(semiring.eq(u, v) for u, v in zip(a, b)) for a, b in zip(left, right)
    )


FORMULA_SEMIRINGS = ["mincost", "maxprob", "unrel", "antichain"]


@settings(max_examples=100, deadline=None)
@given(st.data(), st.sampled_from(FORMULA_SEMIRINGS), st.randoms(use_true_random=False))
def test_enumerated_matrix_of_a_sequence_is_the_product(data, name, rng):
    semiring = antichain_semiring(LABELS) if name == "antichain" else metric_semiring(name)
    i, j, k = (data.draw(st.integers(0, 2)) for _ in range(3))
    s = data.draw(term_graphs(n_inputs=i, n_outputs=j, max_nodes=6, labels=LABELS, max_bas=4))
    t = data.draw(term_graphs(n_inputs=j, n_outputs=k, max_nodes=6, labels=LABELS, max_bas=4))
    weights = _stochastic_weights(name, semiring, rng)
    whole = matrix_by_formula(seq_compose(s, t), semiring, weights).rows()
    first, second = (matrix_by_formula(g, semiring, weights).rows() for g in (s, t))
    parts = _product(semiring, second, first)
    assert _same_rows(semiring, whole, parts)


@settings(max_examples=100, deadline=None)
@given(
    term_graphs(max_inputs=2, max_outputs=2, max_nodes=6, labels=LABELS, max_bas=4),
    term_graphs(max_inputs=2, max_outputs=2, max_nodes=6, labels=LABELS, max_bas=4),
    st.sampled_from(FORMULA_SEMIRINGS),
    st.randoms(use_true_random=False),
)
def test_enumerated_matrix_of_a_parallel_pair_is_the_kronecker_product(s, t, name, rng):
    semiring = antichain_semiring(LABELS) if name == "antichain" else metric_semiring(name)
    weights = _stochastic_weights(name, semiring, rng)
    whole = matrix_by_formula(par_compose(s, t), semiring, weights).rows()
    high, low = (matrix_by_formula(g, semiring, weights).rows() for g in (s, t))
    parts = _kronecker(semiring, high, low)
    assert _same_rows(semiring, whole, parts)


@settings(max_examples=100, deadline=None)
@given(attack_trees())
def test_minimal_attacks_form_an_antichain_inside_the_successful_ones(tree):
    successful, minimal = suc(tree), minsuc(tree)
    assert is_antichain(minimal)
    assert minimal <= successful
    assert all(any(m <= attack for m in minimal) for attack in successful)


@settings(max_examples=100, deadline=None)
@given(term_graphs(n_outputs=1, max_nodes=8, labels=LABELS), st.randoms(use_true_random=False))
def test_repeated_outputs_carry_equal_bits(graph, rng):
    shared = seq_compose(graph, atomic(COPY))
    for candidate in (graph, shared):
        attack = {node: rng.randint(0, 1) for node in candidate.bas_nodes}
        x = [rng.randint(0, 1) for _ in range(candidate.n_inputs)]
        bits = structure_function(candidate, attack, x)
        for p, q in itertools.combinations(range(candidate.n_outputs), 2):
            if candidate.outputs[p] == candidate.outputs[q]:
                assert bits[p] == bits[q]
    assert shared.outputs[0] == shared.outputs[1]
