"""Layered decomposition of term graphs into atomic term graphs.

``decompose`` rewrites a term graph as a sequential composite of parallel
composites of atoms; ``recompose`` folds the layers back.
"""
import logging
from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence, Union

from .errors import ArityMismatch, DslSyntaxError
from .term_graph import (
    COPY,
    DEL,
    GATE_PATTERN,
    ID0,
    ID1,
    SWAP,
    Atom,
    AtomKind,
    Signature,
    TermGraph,
    at_signature,
    atomic,
    identity,
    par_compose,
    seq_compose,
)

logger = logging.getLogger(__name__)

TENSOR = "⊗"


@dataclass(frozen=True)
class Layers:
    """Layers applied first-to-last; each layer is a parallel list of atoms."""

    layers: tuple

    def __post_init__(self):
        layers = tuple(
            tuple(a if isinstance(a, Atom) else Atom.of(a) for a in layer) or (ID0,)
            for layer in self.layers
        )
        if not layers:
            raise ValueError("a decomposition has at least one layer")
        for k in range(1, len(layers)):
            produced = sum(a.n_outputs for a in layers[k - 1])
            consumed = sum(a.n_inputs for a in layers[k])
            if produced != consumed:
                raise ArityMismatch(
                    f"layer {k} produces {produced} wires but layer {k + 1} consumes {consumed}"
                )
        object.__setattr__(self, "layers", layers)

    def __iter__(self):
        return iter(self.layers)

    def __len__(self) -> int:
        return len(self.layers)

    @property
    def n_inputs(self) -> int:
        return sum(a.n_inputs for a in self.layers[0])

    @property
    def n_outputs(self) -> int:
        return sum(a.n_outputs for a in self.layers[-1])

    def labels(self) -> set:
        """Label symbols (non-gate symbols) used by the layers."""
        return {
            a.symbol
            for layer in self.layers
            for a in layer
            if a.kind is AtomKind.SYMBOL and not GATE_PATTERN.match(a.symbol)
        }

    def to_text(self) -> str:
        return " ; ".join(
            f"L{k}: " + f" {TENSOR} ".join(str(a) for a in layer)
            for k, layer in enumerate(self.layers, start=1)
        )

    def to_json(self) -> dict:
        return {
            "arity": [self.n_inputs, self.n_outputs],
            "width": decomposition_width(self),
            "layers": [[str(a) for a in layer] for layer in self.layers],
        }


def parse_layers(text: str) -> Layers:
    """Read the text form ``L1: a ⊗ b ; L2: ...`` (the ``Lk:`` prefixes are optional)."""
    layers = []
    for k, chunk in enumerate(text.split(";"), start=1):
        chunk = chunk.strip()
        if not chunk:
            continue
        head, sep, body = chunk.partition(":")
        if sep and head.strip().startswith("L") and head.strip()[1:].isdigit():
            chunk = body
        tokens = [t.strip() for t in chunk.replace("*", TENSOR).split(TENSOR)]
        if any(not t for t in tokens):
            raise DslSyntaxError(f"empty atom in layer {k}")
        layers.append(tuple(Atom.of(t) for t in tokens))
    if not layers:
        raise DslSyntaxError("no layers given")
    return Layers(tuple(layers))


class _Router:
    """Emits layers while tracking which node of the source graph each wire carries."""

    def __init__(self, wires: Iterable[int]):
        self.wires = list(wires)
        self.layers = []

    def emit(self, atoms: Sequence[Atom], wires: Sequence[int]) -> None:
        self.layers.append(tuple(atoms))
        self.wires = list(wires)

    def fan_out(self, demand: Counter) -> None:
        """Delete unused wires and grow a balanced copy tree for each shared one."""
        need = [demand[w] for w in self.wires]
        while any(d != 1 for d in need):
            atoms, wires, next_need = [], [], []
            for wire, d in zip(self.wires, need):
                if d == 0:
                    atoms.append(DEL)
                elif d == 1:
                    atoms.append(ID1)
                    wires.append(wire)
                    next_need.append(1)
                else:
                    atoms.append(COPY)
                    wires += [wire, wire]
                    next_need += [(d + 1) // 2, d // 2]
            self.emit(atoms, wires)
            need = next_need

    def permute(self, target: Sequence[int]) -> None:
        """Reorder wires into ``target`` by odd-even transposition passes."""
        slots = defaultdict(deque)
        for pos, node in enumerate(target):
            slots[node].append(pos)
        perm = [slots[w].popleft() for w in self.wires]
        n = len(perm)
        start = 0
        while perm != list(range(n)):
            atoms, wires = [], list(self.wires)
            i = 0
            if start:
                atoms.append(ID1)
                i = 1
            while i + 1 < n:
                if perm[i] > perm[i + 1]:
                    perm[i], perm[i + 1] = perm[i + 1], perm[i]
                    wires[i], wires[i + 1] = wires[i + 1], wires[i]
                    atoms.append(SWAP)
                else:
                    atoms += [ID1, ID1]
                i += 2
            if i < n:
                atoms.append(ID1)
            if SWAP in atoms:
                self.emit(atoms, wires)
            start ^= 1


def _depths(graph: TermGraph) -> dict:
    depth = {}
    for node in graph.bottom_up_order():
        if node in graph.label:
            depth[node] = 1 + max((depth[c] for c in graph.children[node]), default=0)
        else:
            depth[node] = 0
    return depth


def decompose(graph: TermGraph) -> Layers:
    """Stratify ``graph`` by depth into fan-out, permutation and symbol layers."""
    depth = _depths(graph)
    top = max(depth.values(), default=0)
    levels = defaultdict(list)
    for node in graph.nodes:
        if depth[node]:
            levels[depth[node]].append(node)

    # last level at which each node is still consumed; outputs count as level top+1
    last_use = {}
    for parent, kids in graph.children.items():
        for child in kids:
            last_use[child] = max(last_use.get(child, 0), depth[parent])
    for node in graph.outputs:
        last_use[node] = top + 1

    router = _Router(graph.inputs)
    for level in range(1, top + 1):
        gates = levels[level]
        kept = [w for w in router.wires if last_use.get(w, 0) > level]
        demand = Counter(c for g in gates for c in graph.children[g])
        demand.update(kept)
        router.fan_out(demand)
        router.permute([c for g in gates for c in graph.children[g]] + kept)
        router.emit(
            [Atom(AtomKind.SYMBOL, graph.label[g]) for g in gates] + [ID1] * len(kept),
            list(gates) + kept,
        )

    router.fan_out(Counter(graph.outputs))
    router.permute(graph.outputs)

    if not router.layers:
        router.emit([ID1] * graph.n_inputs or [ID0], graph.inputs)
    layers = Layers(tuple(router.layers))
    logger.debug("decomposed %s into %d layers, width %d", graph, len(layers), decomposition_width(layers))
    return layers


def recompose(
    layers: Union[Layers, Sequence[Sequence[Union[Atom, str]]]],
    signature: Optional[Signature] = None,
) -> TermGraph:
    """Fold each layer with ``par_compose`` and the layers with ``seq_compose``."""
    if not isinstance(layers, Layers):
        layers = Layers(tuple(tuple(layer) for layer in layers))
    if signature is None:
        signature = at_signature(layers.labels())
    result = None
    for layer in layers:
        block = reduce(par_compose, (atomic(a, signature) for a in layer), identity(0, signature))
        result = block if result is None else seq_compose(result, block)
    return result


def decomposition_width(layers: Layers) -> int:
    """Largest number of wires at any layer boundary, including the final outputs."""
    entering = max(sum(a.n_inputs for a in layer) for layer in layers)
    return max(entering, layers.n_outputs)
