"""Term graphs over the attack-tree signature.

A term graph ``T: i -> j`` is a DAG with an ordered list of ``i`` input nodes,
an ordered list of ``j`` output nodes (which may repeat), and a symbol label and
ordered child list on every non-input node.

``par_compose(F, G)`` places F's wires first. The algebraic notation
``T ⊗ S`` lists S's inputs first, so it corresponds to ``par_compose(S, T)``.
"""
import logging
import operator
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

import networkx as nx

from .errors import (
    ArityMismatch,
    CycleDetected,
    DanglingReference,
    DuplicateInput,
    LabelOnInput,
    TermGraphError,
    UnknownSymbol,
    UnlabelledNode,
)

logger = logging.getLogger(__name__)

GATE_PATTERN = re.compile(r"^(AND|OR)_([1-9][0-9]*)$")
RESERVED_NAMES = frozenset({"id0", "id1", "copy", "del", "swap"})


class SymbolKind(str, Enum):
    AND = "AND"
    OR = "OR"
    LABEL = "label"


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: SymbolKind

    @property
    def is_label(self) -> bool:
        return self.kind is SymbolKind.LABEL


def gate_name(kind: str, arity: int) -> str:
    """Name of the ``arity``-ary AND or OR symbol, e.g. ``AND_2``."""
    return f"{kind}_{arity}"


def symbol_arity(name: str) -> int:
    """Arity of a symbol read off its name: ``AND_k``/``OR_k`` have k, labels 0."""
    match = GATE_PATTERN.match(name)
    return int(match.group(2)) if match else 0


@dataclass(frozen=True)
class Signature:
    """The attack-tree signature AT(B).

    Holds the finite label set B. The gate symbols ``AND_i`` and ``OR_i``
    (i >= 1) belong to every signature and are resolved from their names.
    """

    labels: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "labels", frozenset(self.labels))
        for name in self.labels:
            if not isinstance(name, str) or not name:
                raise ValueError(f"label {name!r} must be a non-empty string")
            if GATE_PATTERN.match(name) or name in RESERVED_NAMES:
                raise ValueError(f"label {name!r} clashes with a reserved symbol name")

    def symbol(self, name: str) -> Symbol:
        match = GATE_PATTERN.match(name)
        if match:
            return Symbol(name, int(match.group(2)), SymbolKind(match.group(1)))
        if name in self.labels:
            return Symbol(name, 0, SymbolKind.LABEL)
        raise UnknownSymbol(f"symbol {name!r} is not in the signature")

    def __contains__(self, name: str) -> bool:
        try:
            self.symbol(name)
        except UnknownSymbol:
            return False
        return True

    def union(self, other: "Signature") -> "Signature":
        if other.labels <= self.labels:
            return self
        return Signature(self.labels | other.labels)


EMPTY_SIGNATURE = Signature()


def at_signature(labels: Iterable[str]) -> Signature:
    """Build AT(B) for the label set ``labels``."""
    return Signature(frozenset(labels))


class Arity(NamedTuple):
    n_inputs: int
    n_outputs: int


def _child_digraph(nodes: Iterable[int], children: Mapping[int, Sequence[int]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from((parent, child) for parent, kids in children.items() for child in kids)
    return graph


@dataclass(frozen=True)
class TermGraph:
    """A validated term graph. Build with :func:`make_term_graph`."""

    nodes: tuple
    inputs: tuple
    outputs: tuple
    label: Mapping[int, str]
    children: Mapping[int, tuple]
    signature: Signature = EMPTY_SIGNATURE

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def arity(self) -> Arity:
        return Arity(len(self.inputs), len(self.outputs))

    def symbol(self, node: int) -> Symbol:
        return self.signature.symbol(self.label[node])

    @cached_property
    def digraph(self) -> nx.DiGraph:
        """Edges point from a node to its children."""
        return _child_digraph(self.nodes, self.children)

    @cached_property
    def bas_nodes(self) -> tuple:
        """Non-input nodes labelled by an arity-0 label symbol, in node order."""
        return tuple(n for n in self.nodes if n in self.label and self.symbol(n).is_label)

    @cached_property
    def _bottom_up(self) -> tuple:
        return tuple(reversed(list(nx.lexicographical_topological_sort(self.digraph))))

    def bottom_up_order(self) -> list:
        """All nodes, every child before its parents."""
        return list(self._bottom_up)

    def __str__(self) -> str:
        return f"TermGraph({self.n_inputs}->{self.n_outputs}, {len(self.nodes)} nodes)"


def make_term_graph(
    nodes: Iterable[int],
    inputs: Sequence[int],
    outputs: Sequence[int],
    label: Mapping[int, str],
    children: Optional[Mapping[int, Sequence[int]]] = None,
    signature: Signature = EMPTY_SIGNATURE,
) -> TermGraph:
    """Validate raw components and return a :class:`TermGraph`.

    Missing child lists are read as empty. Raises a :class:`TermGraphError`
    subclass naming the offending node.
    """
    node_set = set(nodes)
    inputs = tuple(inputs)
    outputs = tuple(outputs)
    children = dict(children or {})

    for node in node_set:
        if not isinstance(node, int) or isinstance(node, bool) or node < 0:
            raise TermGraphError(f"node id {node!r} is not a non-negative integer", node=node)

    seen = set()
    for node in inputs:
        if node in seen:
            raise DuplicateInput(f"input node {node} appears more than once", node=node)
        seen.add(node)

    for node in (*inputs, *outputs, *label, *children):
        if node not in node_set:
            raise DanglingReference(f"node {node} is referenced but not declared", node=node)
    for parent, kids in children.items():
        for child in kids:
            if child not in node_set:
                raise DanglingReference(
                    f"child {child} of node {parent} is not declared", node=child
                )

    for node in inputs:
        if node in label or node in children:
            raise LabelOnInput(f"input node {node} carries a label or children", node=node)

    labels = {}
    kids = {}
    for node in sorted(node_set - seen):
        if node not in label:
            raise UnlabelledNode(f"node {node} has no label", node=node)
        try:
            symbol = signature.symbol(label[node])
        except UnknownSymbol as e:
            raise UnknownSymbol(f"node {node}: {e}", node=node) from e
        child_list = tuple(children.get(node, ()))
        if symbol.arity != len(child_list):
            raise ArityMismatch(
                f"node {node} labelled {symbol.name} has {len(child_list)} children, "
                f"expected {symbol.arity}",
                node=node,
            )
        labels[node] = symbol.name
        kids[node] = child_list

    try:
        cycle = nx.find_cycle(_child_digraph(node_set, kids))
    except nx.NetworkXNoCycle:
        pass
    else:
        node = cycle[0][0]
        raise CycleDetected(f"cycle through node {node}", node=node)

    return TermGraph(
        nodes=tuple(sorted(node_set)),
        inputs=inputs,
        outputs=outputs,
        label=labels,
        children=kids,
        signature=signature,
    )


def _carry(graph: TermGraph, mapping: Mapping[int, int], label: dict, children: dict) -> None:
    """Copy labels and child lists of ``graph`` through the node renaming ``mapping``."""
    for node, name in graph.label.items():
        label[mapping[node]] = name
        children[mapping[node]] = tuple(mapping[c] for c in graph.children[node])


def par_compose(first: TermGraph, second: TermGraph) -> TermGraph:
    """Parallel composite with ``first``'s wires before ``second``'s."""
    offset = len(first.nodes)
    fmap = {n: i for i, n in enumerate(first.nodes)}
    gmap = {n: offset + i for i, n in enumerate(second.nodes)}
    label, children = {}, {}
    _carry(first, fmap, label, children)
    _carry(second, gmap, label, children)
    return make_term_graph(
        nodes=range(offset + len(second.nodes)),
        inputs=[fmap[n] for n in first.inputs] + [gmap[n] for n in second.inputs],
        outputs=[fmap[n] for n in first.outputs] + [gmap[n] for n in second.outputs],
        label=label,
        children=children,
        signature=first.signature.union(second.signature),
    )


def seq_compose(first: TermGraph, second: TermGraph) -> TermGraph:
    """Sequential composite: ``first: i -> j`` then ``second: j -> k``.

    The l-th output of ``first`` is glued to the l-th input of ``second``.
    Inputs of ``second`` glued to the same node collapse into that node.
    """
    if first.n_outputs != second.n_inputs:
        raise ArityMismatch(
            f"cannot compose {first.n_inputs}->{first.n_outputs} "
            f"with {second.n_inputs}->{second.n_outputs}"
        )
    smap = {n: i for i, n in enumerate(first.nodes)}
    glue = {t_in: smap[s_out] for s_out, t_in in zip(first.outputs, second.inputs)}
    rest = [n for n in second.nodes if n not in glue]
    tmap = {n: len(first.nodes) + i for i, n in enumerate(rest)}
    tmap.update(glue)

    label, children = {}, {}
    _carry(first, smap, label, children)
    _carry(second, tmap, label, children)
    return make_term_graph(
        nodes=range(len(first.nodes) + len(rest)),
        inputs=[smap[n] for n in first.inputs],
        outputs=[tmap[n] for n in second.outputs],
        label=label,
        children=children,
        signature=first.signature.union(second.signature),
    )


class AtomKind(str, Enum):
    ID0 = "id0"
    ID1 = "id1"
    COPY = "copy"
    DEL = "del"
    SWAP = "swap"
    SYMBOL = "symbol"


_WIRES = {
    AtomKind.ID0: (0, 0),
    AtomKind.ID1: (1, 1),
    AtomKind.COPY: (1, 2),
    AtomKind.DEL: (1, 0),
    AtomKind.SWAP: (2, 2),
}


@dataclass(frozen=True)
class Atom:
    """Descriptor of an atomic term graph."""

    kind: AtomKind
    symbol: Optional[str] = None

    def __post_init__(self):
        if (self.kind is AtomKind.SYMBOL) != (self.symbol is not None):
            raise ValueError("a symbol name is given exactly for symbol atoms")

    @classmethod
    def of(cls, token: str) -> "Atom":
        """Read ``id0``, ``id1``, ``copy``, ``del``, ``swap`` or a symbol name."""
        if token in RESERVED_NAMES:
            return cls(AtomKind(token))
        return cls(AtomKind.SYMBOL, token)

    @property
    def n_inputs(self) -> int:
        if self.kind is AtomKind.SYMBOL:
            return symbol_arity(self.symbol)
        return _WIRES[self.kind][0]

    @property
    def n_outputs(self) -> int:
        if self.kind is AtomKind.SYMBOL:
            return 1
        return _WIRES[self.kind][1]

    def __str__(self) -> str:
        return self.symbol if self.kind is AtomKind.SYMBOL else self.kind.value


ID0 = Atom(AtomKind.ID0)
ID1 = Atom(AtomKind.ID1)
COPY = Atom(AtomKind.COPY)
DEL = Atom(AtomKind.DEL)
SWAP = Atom(AtomKind.SWAP)


def atomic(
    kind: Union[AtomKind, Atom, str],
    signature: Signature = EMPTY_SIGNATURE,
    symbol: Optional[str] = None,
) -> TermGraph:
    """The canonical atomic term graph of ``kind``."""
    if isinstance(kind, Atom):
        kind, symbol = kind.kind, kind.symbol
    kind = AtomKind(kind)
    if kind is AtomKind.ID0:
        return make_term_graph([], [], [], {}, signature=signature)
    if kind is AtomKind.ID1:
        return make_term_graph([0], [0], [0], {}, signature=signature)
    if kind is AtomKind.COPY:
        return make_term_graph([0], [0], [0, 0], {}, signature=signature)
    if kind is AtomKind.DEL:
        return make_term_graph([0], [0], [], {}, signature=signature)
    if kind is AtomKind.SWAP:
        return make_term_graph([0, 1], [0, 1], [1, 0], {}, signature=signature)

    if symbol is None:
        raise ValueError("symbol atoms need a symbol name")
    arity = signature.symbol(symbol).arity
    return make_term_graph(
        nodes=range(arity + 1),
        inputs=range(arity),
        outputs=[arity],
        label={arity: symbol},
        children={arity: range(arity)},
        signature=signature,
    )


def identity(n: int, signature: Signature = EMPTY_SIGNATURE) -> TermGraph:
    """The n-fold parallel composite of ``id1``."""
    return make_term_graph(range(n), range(n), range(n), {}, signature=signature)


def swap_block(i: int, j: int, signature: Signature = EMPTY_SIGNATURE) -> TermGraph:
    """``(i+j) -> (i+j)`` graph moving the first i wires after the last j."""
    order = list(range(i, i + j)) + list(range(i))
    return make_term_graph(range(i + j), range(i + j), order, {}, signature=signature)


def _anchored(graph: TermGraph) -> nx.DiGraph:
    digraph = nx.DiGraph()
    out_positions = {}
    for pos, node in enumerate(graph.outputs):
        out_positions.setdefault(node, []).append(pos)
    in_positions = {node: pos for pos, node in enumerate(graph.inputs)}
    for node in graph.nodes:
        digraph.add_node(
            node,
            label=graph.label.get(node),
            input=in_positions.get(node),
            outputs=tuple(out_positions.get(node, ())),
        )
    for parent, kids in graph.children.items():
        for pos, child in enumerate(kids):
            if digraph.has_edge(parent, child):
                digraph[parent][child]["positions"] += (pos,)
            else:
                digraph.add_edge(parent, child, positions=(pos,))
    return digraph


def iso_equal(first: TermGraph, second: TermGraph) -> bool:
    """True iff a node bijection preserves inputs, outputs, labels and child order."""
    if first.arity != second.arity or len(first.nodes) != len(second.nodes):
        return False
    if sorted(first.label.values()) != sorted(second.label.values()):
        return False
    return nx.is_isomorphic(
        _anchored(first),
        _anchored(second),
        node_match=operator.eq,
        edge_match=operator.eq,
    )
