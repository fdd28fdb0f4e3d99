"""Brute-force reference semantics by enumerating attacks.

Nothing here goes through decompositions or channels; the functions read the
structure function straight off the term graph.
"""
import logging
import math
from typing import Any, Dict, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import EnumerationCapExceeded, MissingLabel, ShapeMismatch, WidthCapExceeded
from .matrices import (
    BasWeights,
    BoolMatrix,
    bits_to_index,
    check_probabilities,
    index_to_bits,
    require_attack_tree,
    zero_matrix,
)
from .semirings import Semiring, antichain_normalize, sort_attacks
from .term_graph import SymbolKind, TermGraph

logger = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 20

Attack = Dict[int, int]


def bas_nodes(graph: TermGraph) -> list:
    return list(graph.bas_nodes)


def structure_function(graph: TermGraph, attack: Mapping[int, int], x: Sequence[int] = ()) -> tuple:
    """Output bits of ``graph`` for the attack and input bits ``x``."""
    if len(x) != graph.n_inputs:
        raise ShapeMismatch(f"{graph} takes {graph.n_inputs} input bits, got {len(x)}")
    position = {node: k for k, node in enumerate(graph.inputs)}
    value = {}
    for node in graph.bottom_up_order():
        if node in position:
            value[node] = int(x[position[node]])
            continue
        symbol = graph.symbol(node)
        if symbol.kind is SymbolKind.AND:
            value[node] = int(all(value[c] for c in graph.children[node]))
        elif symbol.kind is SymbolKind.OR:
            value[node] = int(any(value[c] for c in graph.children[node]))
        else:
            try:
                value[node] = int(attack[node])
            except KeyError:
                raise ShapeMismatch(f"attack does not cover BAS node {node}") from None
    return tuple(value[o] for o in graph.outputs)


def iter_attacks(graph: TermGraph, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Attack]:
    """All attacks in binary-counter order; the first BAS node is the high bit."""
    nodes = bas_nodes(graph)
    if len(nodes) > cap:
        raise EnumerationCapExceeded(
            f"{len(nodes)} basic attack steps exceed the enumeration cap of {cap}"
        )
    logger.debug("enumerating %d attacks of %s", 2 ** len(nodes), graph)
    for k in range(2 ** len(nodes)):
        yield dict(zip(nodes, index_to_bits(k, len(nodes))))


def performed(attack: Mapping[int, int]) -> frozenset:
    return frozenset(node for node, bit in attack.items() if bit)


def suc(graph: TermGraph, cap: int = DEFAULT_ENUM_CAP) -> frozenset:
    """Successful attacks, each given by the set of BAS nodes it performs."""
    require_attack_tree(graph)
    return frozenset(
        performed(attack) for attack in iter_attacks(graph, cap) if structure_function(graph, attack) == (1,)
    )


def minsuc(graph: TermGraph, cap: int = DEFAULT_ENUM_CAP) -> frozenset:
    return antichain_normalize(suc(graph, cap))


def label_attacks(graph: TermGraph, attacks: Iterable[frozenset]) -> frozenset:
    """Node-set attacks rewritten as label sets."""
    return frozenset(frozenset(graph.label[n] for n in attack) for attack in attacks)


def _attack_weight(graph: TermGraph, semiring: Semiring, weights: BasWeights, attack: Attack) -> Any:
    factors = []
    for node, bit in attack.items():
        v0, v1 = weights.pair(graph.label[node])
        factors.append(v1 if bit else v0)
    return semiring.product(factors)


def matrix_by_formula(
    graph: TermGraph,
    semiring: Semiring,
    weights: BasWeights,
    cap: int = DEFAULT_ENUM_CAP,
    max_width: Optional[int] = DEFAULT_ENUM_CAP,
) -> BoolMatrix:
    """Entry ``(y, x)`` sums the weights of the attacks that map ``x`` to ``y``."""
    i, j = graph.arity
    if max_width is not None and max(i, j) > max_width:
        raise WidthCapExceeded(f"a {max(i, j)}-wire matrix exceeds the cap of {max_width} wires")
    data = zero_matrix(semiring, i, j).data.copy()
    inputs = [index_to_bits(x, i) for x in range(2 ** i)]
    for attack in iter_attacks(graph, cap):
        weight = _attack_weight(graph, semiring, weights, attack)
        for x, bits in enumerate(inputs):
            y = bits_to_index(structure_function(graph, attack, bits))
            data[y, x] = semiring.plus(data[y, x], weight)
    return BoolMatrix(semiring, i, j, data)


def attack_sum(
    graph: TermGraph, semiring: Semiring, alpha: Mapping[str, Any], attacks: Iterable[frozenset]
) -> Any:
    """Sum over ``attacks`` of the product of ``alpha`` over each attack's steps."""
    total = semiring.zero
    for attack in sort_attacks(attacks):
        factors = []
        for node in sorted(attack):
            label = graph.label[node]
            if label not in alpha:
                raise MissingLabel(f"attribution has no value for {label}")
            factors.append(alpha[label])
        total = semiring.plus(total, semiring.product(factors))
    return total


def prop_metric_by_formula(
    graph: TermGraph, semiring: Semiring, alpha: Mapping[str, Any], cap: int = DEFAULT_ENUM_CAP
) -> Any:
    """The propositional metric summed over the minimal successful attacks."""
    return attack_sum(graph, semiring, alpha, minsuc(graph, cap))


def suc_metric_by_formula(
    graph: TermGraph, semiring: Semiring, alpha: Mapping[str, Any], cap: int = DEFAULT_ENUM_CAP
) -> Any:
    """The same product-sum taken over every successful attack."""
    return attack_sum(graph, semiring, alpha, suc(graph, cap))


def unreliability_by_enumeration(
    graph: TermGraph, p: Mapping[str, float], cap: int = DEFAULT_ENUM_CAP
) -> float:
    """Probability that the top event occurs when steps fail independently."""
    require_attack_tree(graph)
    check_probabilities(dict(p))
    terms = []
    for attack in iter_attacks(graph, cap):
        if structure_function(graph, attack) != (1,):
            continue
        term = 1.0
        for node, bit in attack.items():
            label = graph.label[node]
            if label not in p:
                raise MissingLabel(f"no probability for {label}")
            term *= p[label] if bit else 1.0 - p[label]
        terms.append(term)
    return math.fsum(terms)
