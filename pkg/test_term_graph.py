"""Term graph construction, composition and isomorphism."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import term_graphs
from src.errors import (
    ArityMismatch,
    CycleDetected,
    DanglingReference,
    DuplicateInput,
    LabelOnInput,
    UnknownSymbol,
    UnlabelledNode,
)
from src.term_graph import (
    COPY,
    DEL,
    SWAP,
    Atom,
    at_signature,
    atomic,
    identity,
    iso_equal,
    make_term_graph,
    par_compose,
    seq_compose,
    swap_block,
)

SIG = at_signature(["a", "b"])


def test_missing_child_lists_read_as_empty():
    graph = make_term_graph([0], [], [0], {0: "a"}, signature=SIG)
    assert graph.children[0] == ()
    assert graph.bas_nodes == (0,)
    assert graph.arity == (0, 1)


@pytest.mark.parametrize(
    "args, error, node",
    [
        (([0], [0, 0], [], {}), DuplicateInput, 0),
        (([0], [], [1], {0: "a"}), DanglingReference, 1),
        (([0], [0], [0], {0: "a"}), LabelOnInput, 0),
        (([0, 1], [0], [1], {}), UnlabelledNode, 1),
        (([0], [], [0], {0: "z"}), UnknownSymbol, 0),
        (([0, 1], [], [1], {0: "a", 1: "AND_2"}, {1: [0]}), ArityMismatch, 1),
        (([0], [], [0], {0: "OR_1"}, {0: [0]}), CycleDetected, 0),
    ],
)
def test_invalid_graphs_name_the_offending_node(args, error, node):
    with pytest.raises(error) as excinfo:
        make_term_graph(*args, signature=SIG)
    assert excinfo.value.node == node


def test_two_node_cycle_is_rejected():
    with pytest.raises(CycleDetected) as excinfo:
        make_term_graph([0, 1], [], [0], {0: "OR_1", 1: "OR_1"}, {0: [1], 1: [0]}, SIG)
    assert excinfo.value.node in (0, 1)


def test_reserved_names_cannot_be_labels():
    for name in ("copy", "swap", "AND_2", "OR_1"):
        with pytest.raises(ValueError):
            at_signature([name])
    assert "OR_5" in SIG
    assert "c" not in SIG


def test_atomic_shapes():
    assert atomic(COPY).outputs == (0, 0)
    assert atomic(DEL).arity == (1, 0)
    assert atomic("swap").outputs == (1, 0)
    assert atomic(Atom.of("AND_3")).arity == (3, 1)
    assert atomic(Atom.of("a"), SIG).arity == (0, 1)
    with pytest.raises(UnknownSymbol):
        atomic(Atom.of("AND_0"))


def test_copy_then_swap_is_copy():
    assert iso_equal(seq_compose(atomic(COPY), atomic(SWAP)), atomic(COPY))


def test_seq_compose_collapses_inputs_glued_to_one_node():
    graph = seq_compose(atomic(COPY), atomic(Atom.of("AND_2")))
    assert graph.nodes == (0, 1)
    assert graph.children[1] == (0, 0)
    assert graph.outputs == (1,)


def test_seq_compose_checks_arity():
    with pytest.raises(ArityMismatch):
        seq_compose(atomic(COPY), identity(1))


def test_par_compose_puts_first_wires_first():
    graph = par_compose(atomic(Atom.of("a"), SIG), atomic(DEL, SIG))
    assert graph.arity == (1, 1)
    assert graph.label[graph.outputs[0]] == "a"
    assert graph.inputs[0] not in graph.label
    assert iso_equal(par_compose(identity(1), identity(2)), identity(3))


def test_swap_block_moves_leading_wires_last():
    assert swap_block(1, 2).outputs == (1, 2, 0)
    assert not iso_equal(swap_block(1, 1), identity(2))


def test_iso_equal_respects_child_order_and_sharing():
    g1 = make_term_graph([0, 1, 2], [], [2], {0: "a", 1: "b", 2: "AND_2"}, {2: [0, 1]}, SIG)
    g2 = make_term_graph([0, 1, 2], [], [2], {0: "a", 1: "b", 2: "AND_2"}, {2: [1, 0]}, SIG)
    g3 = make_term_graph([0, 1, 2], [], [0], {0: "AND_2", 1: "a", 2: "b"}, {0: [1, 2]}, SIG)
    assert not iso_equal(g1, g2)
    assert iso_equal(g1, g3)

    shared = make_term_graph([0, 1], [], [1], {0: "a", 1: "AND_2"}, {1: [0, 0]}, SIG)
    duplicated = make_term_graph([0, 1, 2], [], [2], {0: "a", 1: "a", 2: "AND_2"}, {2: [0, 1]}, SIG)
    assert not iso_equal(shared, duplicated)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_seq_compose_is_associative_up_to_isomorphism(data):
    i, j, k, l = (data.draw(st.integers(0, 2)) for _ in range(4))
    s = data.draw(term_graphs(n_inputs=i, n_outputs=j, max_nodes=6))
    t = data.draw(term_graphs(n_inputs=j, n_outputs=k, max_nodes=6))
    u = data.draw(term_graphs(n_inputs=k, n_outputs=l, max_nodes=6))
    assert iso_equal(seq_compose(seq_compose(s, t), u), seq_compose(s, seq_compose(t, u)))


@settings(max_examples=50, deadline=None)
@given(term_graphs(max_nodes=5), term_graphs(max_nodes=5), term_graphs(max_nodes=5))
def test_par_compose_is_associative_up_to_isomorphism(s, t, u):
    assert iso_equal(par_compose(par_compose(s, t), u), par_compose(s, par_compose(t, u)))


@settings(max_examples=50, deadline=None)
@given(term_graphs())
def test_identity_is_a_unit_for_seq_compose(graph):
    assert iso_equal(seq_compose(identity(graph.n_inputs), graph), graph)
    assert iso_equal(seq_compose(graph, identity(graph.n_outputs)), graph)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_interchange_of_seq_and_par(data):
    a1, b1, c1, a2, b2, c2 = (data.draw(st.integers(0, 2)) for _ in range(6))
    f1 = data.draw(term_graphs(n_inputs=a1, n_outputs=b1, max_nodes=5))
    g1 = data.draw(term_graphs(n_inputs=b1, n_outputs=c1, max_nodes=5))
    f2 = data.draw(term_graphs(n_inputs=a2, n_outputs=b2, max_nodes=5))
    g2 = data.draw(term_graphs(n_inputs=b2, n_outputs=c2, max_nodes=5))
    assert iso_equal(
        par_compose(seq_compose(f1, g1), seq_compose(f2, g2)),
        seq_compose(par_compose(f1, f2), par_compose(g1, g2)),
    )


def test_copy_is_coassociative():
    copy, id1 = atomic(COPY), identity(1)
    left = seq_compose(copy, par_compose(copy, id1))
    right = seq_compose(copy, par_compose(id1, copy))
    assert left.arity == (1, 3)
    assert iso_equal(left, right)


def test_delete_is_a_counit_for_copy():
    copy, delete, id1 = atomic(COPY), atomic(DEL), identity(1)
    assert iso_equal(seq_compose(copy, par_compose(delete, id1)), id1)
    assert iso_equal(seq_compose(copy, par_compose(id1, delete)), id1)


@settings(max_examples=50, deadline=None)
@given(term_graphs())
def test_empty_identity_is_a_unit_for_par_compose(graph):
    assert iso_equal(par_compose(identity(0), graph), graph)
    assert iso_equal(par_compose(graph, identity(0)), graph)
