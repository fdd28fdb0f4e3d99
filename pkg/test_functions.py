"""Function channels: Boolean and bottom-up semantics."""
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import COSTS, attack_trees
from src.channels import evaluate
from src.dsl import parse_component
from src.errors import MissingLabel, NotAnAttackTree, ShapeMismatch, ValueParseError
from src.functions import (
    BOOL,
    FunctionsBackend,
    boolean_interpretation,
    bottom_up_interpretation,
    bottom_up_outputs,
    eval_bottom_up_recursive,
    is_deterministic,
    multiset_semantics,
    semiring_carrier,
    singleton_multisets,
)
from src.oracle import structure_function
from src.semirings import AttackMultiset, metric_semiring, multiset_semiring
from src.term_graph import at_signature, make_term_graph

MINCOST = metric_semiring("mincost")


def test_wiring_channels():
    backend = FunctionsBackend()
    assert backend.copy_ch()((5,)) == (5, 5)
    assert backend.del_ch()((1,)) == ()
    assert backend.swap_ch(1, 2)((1, 2, 3)) == (2, 3, 1)
    assert backend.ident(2)((0, 1)) == (0, 1)
    assert backend.copy_block(2)((0, 1)) == (0, 1, 0, 1)
    with pytest.raises(ShapeMismatch):
        backend.copy_ch()((1, 2))
    with pytest.raises(ShapeMismatch):
        backend.compose(backend.copy_ch(), backend.copy_ch())


def test_tensor_splits_the_input():
    backend = FunctionsBackend()
    rng = random.Random(4)
    f, g = backend.random_channel(1, 2, rng), backend.random_channel(2, 1, rng)
    both = backend.tensor(f, g)
    for x in itertools.product((0, 1), repeat=3):
        assert both(x) == f(x[:1]) + g(x[1:])


def test_tabulate():
    backend = FunctionsBackend()
    assert backend.tabulate(backend.copy_ch()) == [(0, 0), (1, 1)]
    with pytest.raises(ShapeMismatch):
        FunctionsBackend(semiring_carrier(MINCOST)).tabulate(backend.copy_ch())


def test_boolean_semantics_of_the_worked_example(server_room):
    graph = server_room.graph
    interpretation = boolean_interpretation({"D": 1, "F": 0, "S": 1}, graph.signature)
    assert evaluate(graph, interpretation)(()) == (1,)


def test_boolean_semantics_agrees_with_the_structure_function(server_room):
    graph = server_room.graph
    for bits in itertools.product((0, 1), repeat=3):
        t = dict(zip("DFS", bits))
        attack = {node: t[graph.label[node]] for node in graph.bas_nodes}
        channel = evaluate(graph, boolean_interpretation(t, graph.signature))
        assert channel(()) == structure_function(graph, attack)


def test_boolean_interpretation_errors(server_room):
    signature = server_room.graph.signature
    with pytest.raises(MissingLabel):
        boolean_interpretation({"D": 1}, signature)
    with pytest.raises(ValueParseError):
        boolean_interpretation({"D": 1, "F": 2, "S": 0}, signature)


def test_gate_channels_are_deterministic(server_room):
    interpretation = boolean_interpretation({"D": 1, "F": 0, "S": 1}, server_room.graph.signature)
    backend = interpretation.backend
    for name in ("AND_2", "OR_3", "D"):
        assert is_deterministic(backend, interpretation.image(name))
    assert is_deterministic(backend, backend.copy_ch())


def test_bottom_up_mincost(server_room, server_room_dup):
    graph = server_room.graph
    assert eval_bottom_up_recursive(graph, MINCOST, COSTS) == 110.0
    assert evaluate(graph, bottom_up_interpretation(MINCOST, COSTS, graph.signature))(()) == (110.0,)
    assert eval_bottom_up_recursive(server_room_dup.graph, MINCOST, COSTS) == 110.0


def test_bottom_up_outputs_of_a_two_output_component(server_room_sub):
    assert bottom_up_outputs(server_room_sub.graph, MINCOST, COSTS) == (30.0, 80.0)
    with pytest.raises(NotAnAttackTree):
        eval_bottom_up_recursive(server_room_sub.graph, MINCOST, COSTS)


def test_bottom_up_needs_a_closed_component(data_dir):
    copy = parse_component((data_dir / "copy.at").read_text(encoding="utf-8"))
    with pytest.raises(ShapeMismatch):
        bottom_up_outputs(copy.graph, MINCOST, {})


def test_bottom_up_missing_label(server_room):
    with pytest.raises(MissingLabel):
        eval_bottom_up_recursive(server_room.graph, MINCOST, {"D": 1.0})


def test_multiset_semantics(server_room):
    expected = AttackMultiset(
        {
            frozenset({"D", "F"}): 1,
            frozenset({"D", "S"}): 1,
            frozenset({"F"}): 1,
            frozenset({"F", "S"}): 1,
        }
    )
    graph = server_room.graph
    assert multiset_semantics(graph) == expected
    labels = graph.signature.labels
    interpretation = bottom_up_interpretation(multiset_semiring(labels), singleton_multisets(labels), graph.signature)
    assert evaluate(graph, interpretation)(()) == (expected,)


def test_multiset_of_a_shared_step_counts_once():
    doc = parse_component("bas b\ngate g = AND(b, b)\noutputs [g]")
    assert multiset_semantics(doc.graph) == AttackMultiset({frozenset({"b"}): 1})


@settings(max_examples=200, deadline=None)
@given(attack_trees(), st.sampled_from(["mincost", "maxprob", "mintime-par"]), st.randoms(use_true_random=False))
def test_functorial_bottom_up_matches_the_recursion(tree, name, rng):
    R = metric_semiring(name)
    alpha = {b: R.sample(rng) for b in tree.signature.labels}
    via_channels = evaluate(tree, bottom_up_interpretation(R, alpha, tree.signature))(())[0]
    assert R.eq(via_channels, eval_bottom_up_recursive(tree, R, alpha))


def test_bool_carrier_is_exhaustive():
    backend = FunctionsBackend(BOOL)
    assert len(list(backend.points(3))) == 8


def _or_chain(depth):
    """One BAS under ``depth`` stacked ``OR_1`` gates."""
    return make_term_graph(
        range(depth + 1),
        [],
        [depth],
        {0: "a", **{n: "OR_1" for n in range(1, depth + 1)}},
        {n: [n - 1] for n in range(1, depth + 1)},
        at_signature(["a"]),
    )


def test_deep_chain_evaluates_without_recursion():
    chain = _or_chain(2000)
    assert evaluate(chain, bottom_up_interpretation(MINCOST, {"a": 7.0}, chain.signature))(()) == (7.0,)
    assert evaluate(chain, boolean_interpretation({"a": 1}, chain.signature))(()) == (1,)
    assert eval_bottom_up_recursive(chain, MINCOST, {"a": 7.0}) == 7.0


def test_layered_composition_matches_plain_tensor():
    backend = FunctionsBackend()
    rng = random.Random(11)
    result = backend.random_channel(2, 3, rng)
    images = [backend.copy_ch(), backend.random_channel(2, 1, rng)]
    layered = backend.compose_layer(result, images)
    plain = backend.compose(result, backend.tensor(*images))
    assert layered.n_outputs == 3
    assert backend.equal(layered, plain)
