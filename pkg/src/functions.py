"""Function channels: the category of maps ``X^i -> X^j`` over a carrier X.

Hosts the Boolean interpretation and the bottom-up semiring interpretation,
together with the direct recursive bottom-up evaluator.
"""
import itertools
import logging
import operator
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .channels import ChannelBackend, Interpretation
from .errors import MissingLabel, NotAnAttackTree, ShapeMismatch, ValueParseError
from .semirings import AttackMultiset, Semiring, format_value, multiset_semiring
from .term_graph import Arity, Signature, SymbolKind, TermGraph

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 2 ** 16
SAMPLED_POINTS = 1000


@dataclass(frozen=True)
class Carrier:
    """Values a function channel acts on.

    ``elements`` is set for finite carriers; equality is then checked on
    every point, otherwise on sampled points.
    """

    name: str
    sample: Callable[[random.Random], Any] = field(repr=False)
    eq: Callable[[Any, Any], bool] = field(repr=False, default=operator.eq)
    elements: Optional[Tuple[Any, ...]] = None


BOOL = Carrier("bool", sample=lambda rng: rng.randint(0, 1), elements=(0, 1))


def semiring_carrier(semiring: Semiring) -> Carrier:
    return Carrier(semiring.name, sample=semiring.sample, eq=semiring.eq)


@dataclass(frozen=True)
class FuncChannel:
    """A total map from ``n_inputs``-tuples to ``n_outputs``-tuples."""

    n_inputs: int
    n_outputs: int
    fn: Callable[[tuple], tuple] = field(repr=False)
    name: str = "f"

    def __call__(self, x: tuple) -> tuple:
        x = tuple(x)
        if len(x) != self.n_inputs:
            raise ShapeMismatch(f"{self.name} takes {self.n_inputs} values, got {len(x)}")
        return self.fn(x)


def constant(value: Any, name: str = "const") -> FuncChannel:
    return FuncChannel(0, 1, lambda x: (value,), name)


class _Pipeline:
    """Maps applied one after another in a loop, so call depth stays flat."""

    __slots__ = ("stages",)

    def __init__(self, stages):
        self.stages = tuple(stages)

    def __call__(self, x: tuple) -> tuple:
        for stage in self.stages:
            x = stage(x)
        return x


def _stages(fn: Callable[[tuple], tuple]) -> tuple:
    return fn.stages if isinstance(fn, _Pipeline) else (fn,)


def _checked_pair(first: FuncChannel, second: FuncChannel) -> None:
    if first.n_outputs != second.n_inputs:
        raise ShapeMismatch(
            f"cannot compose {first.n_inputs}->{first.n_outputs} "
            f"with {second.n_inputs}->{second.n_outputs}"
        )


class FunctionsBackend(ChannelBackend):
    """Channel category of functions between powers of a carrier."""

    def __init__(self, carrier: Carrier = BOOL):
        self.carrier = carrier
        self.name = f"functions[{carrier.name}]"

    def compose(self, first: FuncChannel, second: FuncChannel) -> FuncChannel:
        _checked_pair(first, second)
        return FuncChannel(
            first.n_inputs,
            second.n_outputs,
            _Pipeline(_stages(first.fn) + _stages(second.fn)),
            f"{second.name}.{first.name}",
        )

    def tensor(self, first: FuncChannel, second: FuncChannel) -> FuncChannel:
        split = first.n_inputs
        return FuncChannel(
            first.n_inputs + second.n_inputs,
            first.n_outputs + second.n_outputs,
            lambda x: first.fn(x[:split]) + second.fn(x[split:]),
            f"({first.name} x {second.name})",
        )

    def compose_layer(self, result: FuncChannel, images: Sequence[FuncChannel]) -> FuncChannel:
        """Apply every image to its own slice in one flat stage."""
        spans, pos = [], 0
        for image in images:
            spans.append((pos, pos + image.n_inputs, image.fn))
            pos += image.n_inputs

        def layer(x: tuple) -> tuple:
            out = ()
            for start, stop, fn in spans:
                out += fn(x[start:stop])
            return out

        name = "(" + " x ".join(image.name for image in images) + ")"
        return self.compose(result, FuncChannel(pos, sum(image.n_outputs for image in images), layer, name))

    def ident(self, n: int) -> FuncChannel:
        return FuncChannel(n, n, tuple, f"id{n}")

    def swap_ch(self, i: int, j: int) -> FuncChannel:
        return FuncChannel(i + j, i + j, lambda x: x[i:] + x[:i], f"swap{i},{j}")

    def copy_ch(self) -> FuncChannel:
        return FuncChannel(1, 2, lambda x: (x[0], x[0]), "copy")

    def del_ch(self) -> FuncChannel:
        return FuncChannel(1, 0, lambda x: (), "del")

    def copy_block(self, n: int) -> FuncChannel:
        """``n -> 2n``, duplicating the whole input tuple."""
        return FuncChannel(n, 2 * n, lambda x: x + x, f"copy{n}")

    def arity(self, channel: FuncChannel) -> Arity:
        return Arity(channel.n_inputs, channel.n_outputs)

    def points(self, n: int):
        """Inputs on which two ``n``-input channels are compared."""
        elements = self.carrier.elements
        if elements is not None and len(elements) ** n <= EXHAUSTIVE_LIMIT:
            return itertools.product(elements, repeat=n)
        rng = random.Random(0)
        return (tuple(self.carrier.sample(rng) for _ in range(n)) for _ in range(SAMPLED_POINTS))

    def equal(self, first: FuncChannel, second: FuncChannel) -> bool:
        if self.arity(first) != self.arity(second):
            return False
        eq = self.carrier.eq
        for x in self.points(first.n_inputs):
            if not all(eq(a, b) for a, b in zip(first.fn(x), second.fn(x))):
                return False
        return True

    def tabulate(self, channel: FuncChannel) -> list:
        """Outputs on every input of a finite carrier, in binary-integer order."""
        if self.carrier.elements is None:
            raise ShapeMismatch(f"{self.carrier.name} is not finite; cannot tabulate")
        return [channel.fn(x) for x in itertools.product(self.carrier.elements, repeat=channel.n_inputs)]

    def describe(self, channel: FuncChannel) -> str:
        if self.carrier.elements is not None and channel.n_inputs <= 4:
            return f"{channel.name}: " + ", ".join(
                f"{format_value(x)}->{format_value(channel.fn(x))}"
                for x in itertools.product(self.carrier.elements, repeat=channel.n_inputs)
            )
        return f"<{channel.name}: {channel.n_inputs}->{channel.n_outputs}>"

    def random_channel(self, n_inputs: int, n_outputs: int, rng: random.Random) -> FuncChannel:
        sample = self.carrier.sample
        if self.carrier.elements is not None:
            table = {
                x: tuple(sample(rng) for _ in range(n_outputs))
                for x in itertools.product(self.carrier.elements, repeat=n_inputs)
            }
            return FuncChannel(n_inputs, n_outputs, table.__getitem__, "rand")
        seed = rng.getrandbits(32)

        def fn(x):
            point_rng = random.Random(hash((seed, x)))
            return tuple(sample(point_rng) for _ in range(n_outputs))

        return FuncChannel(n_inputs, n_outputs, fn, "rand")


def is_deterministic(backend: FunctionsBackend, channel: FuncChannel) -> bool:
    """``copy`` after ``channel`` equals ``channel`` twice after copying its inputs."""
    lhs = backend.compose(channel, backend.copy_block(channel.n_outputs))
    rhs = backend.compose(backend.copy_block(channel.n_inputs), backend.tensor(channel, channel))
    return backend.equal(lhs, rhs)


def _require_labels(values: Mapping[str, Any], signature: Signature, what: str) -> None:
    missing = sorted(signature.labels - set(values))
    if missing:
        raise MissingLabel(f"{what} has no value for {', '.join(missing)}")


def boolean_interpretation(t: Mapping[str, int], signature: Signature) -> Interpretation:
    """Labels become constant truth values, gates conjunction and disjunction."""
    _require_labels(t, signature, "truth assignment")
    for name, value in t.items():
        if value not in (0, 1):
            raise ValueParseError(f"truth value of {name!r} must be 0 or 1, got {value!r}")

    def assign(symbol):
        if symbol.kind is SymbolKind.AND:
            return FuncChannel(symbol.arity, 1, lambda x: (int(all(x)),), symbol.name)
        if symbol.kind is SymbolKind.OR:
            return FuncChannel(symbol.arity, 1, lambda x: (int(any(x)),), symbol.name)
        return constant(int(t[symbol.name]), symbol.name)

    return Interpretation(FunctionsBackend(BOOL), assign, signature, name="boolean")


def bottom_up_interpretation(
    semiring: Semiring, alpha: Mapping[str, Any], signature: Signature
) -> Interpretation:
    """AND as the semiring product, OR as the sum, labels as ``alpha``."""
    _require_labels(alpha, signature, "attribution")

    def assign(symbol):
        if symbol.kind is SymbolKind.AND:
            return FuncChannel(symbol.arity, 1, lambda x: (semiring.product(x),), symbol.name)
        if symbol.kind is SymbolKind.OR:
            return FuncChannel(symbol.arity, 1, lambda x: (semiring.sum(x),), symbol.name)
        return constant(alpha[symbol.name], symbol.name)

    return Interpretation(
        FunctionsBackend(semiring_carrier(semiring)), assign, signature, name=f"bottom-up[{semiring.name}]"
    )


def bottom_up_outputs(graph: TermGraph, semiring: Semiring, alpha: Mapping[str, Any]) -> tuple:
    """Bottom-up values of the outputs of a component without inputs.

    Only nodes below some output are evaluated, each once.
    """
    if graph.n_inputs:
        raise ShapeMismatch(f"bottom-up evaluation needs a component without inputs, got {graph}")
    wanted = set(graph.outputs)
    for node in graph.outputs:
        wanted |= nx.descendants(graph.digraph, node)

    value = {}
    for node in graph.bottom_up_order():
        if node not in wanted:
            continue
        symbol = graph.symbol(node)
        if symbol.kind is SymbolKind.AND:
            value[node] = semiring.product(value[c] for c in graph.children[node])
        elif symbol.kind is SymbolKind.OR:
            value[node] = semiring.sum(value[c] for c in graph.children[node])
        else:
            try:
                value[node] = alpha[symbol.name]
            except KeyError:
                raise MissingLabel(f"attribution has no value for {symbol.name}") from None
    logger.debug("bottom-up evaluated %d of %d nodes", len(value), len(graph.nodes))
    return tuple(value[o] for o in graph.outputs)


def eval_bottom_up_recursive(graph: TermGraph, semiring: Semiring, alpha: Mapping[str, Any]) -> Any:
    """Bottom-up metric of an attack tree, straight from the node recursion."""
    if tuple(graph.arity) != (0, 1):
        raise NotAnAttackTree(f"an attack tree has 0 inputs and 1 output, got {tuple(graph.arity)}")
    return bottom_up_outputs(graph, semiring, alpha)[0]


def singleton_multisets(labels) -> dict:
    return {b: AttackMultiset({frozenset({b}): 1}) for b in labels}


def multiset_semantics(graph: TermGraph) -> AttackMultiset:
    """Bottom-up semantics over multisets of attacks, each label weighted ``{{b}: 1}``."""
    labels = graph.signature.labels
    return eval_bottom_up_recursive(graph, multiset_semiring(labels), singleton_multisets(labels))
