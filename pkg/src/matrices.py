"""Boolean-indexed matrices over a semiring and the stochastic interpretations.

A channel ``i -> j`` is a ``2^j x 2^i`` matrix. Rows and columns follow the
binary-integer value of the bit vector with the leftmost wire as the most
significant bit; for a vector in ``R^2`` index 1 is the second component.
"""
import logging
import math
import random
import warnings
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, Optional, Sequence

import numpy as np

from .channels import ChannelBackend, Interpretation, evaluate
from .errors import (
    DuplicateBasLabel,
    MissingLabel,
    NotAbsorbingWarning,
    NotAnAttackTree,
    ProbabilityOutOfRange,
    ShapeMismatch,
    WeightNotStochastic,
    WidthCapExceeded,
)
from .semirings import Semiring, antichain_semiring, format_value, metric_semiring
from .term_graph import Arity, Signature, SymbolKind, TermGraph

logger = logging.getLogger(__name__)

DEFAULT_MAX_WIDTH = 20


def bits_to_index(bits: Sequence[int]) -> int:
    index = 0
    for bit in bits:
        index = (index << 1) | int(bit)
    return index


def index_to_bits(index: int, width: int) -> tuple:
    return tuple((index >> (width - 1 - m)) & 1 for m in range(width))


@dataclass(frozen=True, eq=False)
class BoolMatrix:
    semiring: Semiring = field(repr=False)
    n_inputs: int
    n_outputs: int
    data: np.ndarray

    def __post_init__(self):
        shape = (2 ** self.n_outputs, 2 ** self.n_inputs)
        if self.data.shape != shape:
            raise ShapeMismatch(
                f"a {self.n_inputs}->{self.n_outputs} matrix has shape {shape}, got {self.data.shape}"
            )
        self.data.setflags(write=False)

    @cached_property
    def stochastic(self) -> bool:
        return is_stochastic(self)

    def rows(self) -> list:
        return self.data.tolist()

    def __getitem__(self, index):
        return self.data[index]


def _blank(semiring: Semiring, n_inputs: int, n_outputs: int) -> np.ndarray:
    data = np.empty((2 ** n_outputs, 2 ** n_inputs), dtype=semiring.dtype)
    if data.dtype == object:
        for index in np.ndindex(data.shape):
            data[index] = semiring.zero
    else:
        data.fill(semiring.zero)
    return data


def zero_matrix(semiring: Semiring, n_inputs: int, n_outputs: int) -> BoolMatrix:
    return BoolMatrix(semiring, n_inputs, n_outputs, _blank(semiring, n_inputs, n_outputs))


def function_matrix(
    semiring: Semiring, n_inputs: int, n_outputs: int, fn: Callable[[tuple], tuple]
) -> BoolMatrix:
    """0/1 matrix of a Boolean function: entry ``(fn(x), x)`` is one."""
    data = _blank(semiring, n_inputs, n_outputs)
    for x in range(2 ** n_inputs):
        data[bits_to_index(fn(index_to_bits(x, n_inputs))), x] = semiring.one
    return BoolMatrix(semiring, n_inputs, n_outputs, data)


def column_vector(semiring: Semiring, v0: Any, v1: Any) -> BoolMatrix:
    data = _blank(semiring, 0, 1)
    data[0, 0], data[1, 0] = v0, v1
    return BoolMatrix(semiring, 0, 1, data)


def from_rows(semiring: Semiring, rows: Sequence[Sequence[Any]]) -> BoolMatrix:
    n_outputs = int(math.log2(len(rows)))
    n_inputs = int(math.log2(len(rows[0])))
    data = _blank(semiring, n_inputs, n_outputs)
    for y, row in enumerate(rows):
        for x, value in enumerate(row):
            data[y, x] = value
    return BoolMatrix(semiring, n_inputs, n_outputs, data)


def _is_real_probability(semiring: Semiring) -> bool:
    return semiring.np_plus is np.add and semiring.np_times is np.multiply


def _matmul(semiring: Semiring, G: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Semiring product of a (a x b) and (b x c) array."""
    if _is_real_probability(semiring):
        return G @ F
    # accumulate one middle index at a time: sum_y G[:, y] (x) F[y, :]
    data = semiring.vtimes.outer(G[:, 0], F[0, :])
    for y in range(1, F.shape[0]):
        data = semiring.vplus(data, semiring.vtimes.outer(G[:, y], F[y, :]))
    return np.asarray(data, dtype=semiring.dtype)


def is_stochastic(matrix: BoolMatrix) -> bool:
    """Every column sums to the semiring's one."""
    semiring = matrix.semiring
    return all(
        semiring.eq(semiring.sum(matrix.data[:, x]), semiring.one)
        for x in range(matrix.data.shape[1])
    )


class BoolStochBackend(ChannelBackend):
    """Semiring matrix product for composition, Kronecker product for tensor."""

    def __init__(self, semiring: Semiring, max_width: Optional[int] = DEFAULT_MAX_WIDTH):
        self.semiring = semiring
        self.max_width = max_width
        self.name = f"boolstoch[{semiring.name}]"

    def _guard(self, *widths: int) -> None:
        if self.max_width is not None and max(widths) > self.max_width:
            raise WidthCapExceeded(
                f"a {max(widths)}-wire matrix exceeds the cap of {self.max_width} wires"
            )

    def compose(self, first: BoolMatrix, second: BoolMatrix) -> BoolMatrix:
        if first.n_outputs != second.n_inputs:
            raise ShapeMismatch(
                f"cannot compose {first.n_inputs}->{first.n_outputs} "
                f"with {second.n_inputs}->{second.n_outputs}"
            )
        data = _matmul(self.semiring, second.data, first.data)
        return BoolMatrix(self.semiring, first.n_inputs, second.n_outputs, data)

    def compose_layer(self, result: BoolMatrix, images: Sequence[BoolMatrix]) -> BoolMatrix:
        """Apply each atom image to its own wires of ``result``.

        Equal to composing with the tensor of ``images`` but never builds
        that tensor: memory stays at the size of ``result``.
        """
        consumed = sum(image.n_inputs for image in images)
        if consumed != result.n_outputs:
            raise ShapeMismatch(f"layer consumes {consumed} wires, result has {result.n_outputs}")
        produced = sum(image.n_outputs for image in images)
        self._guard(result.n_inputs, produced)
        cols = 2 ** result.n_inputs
        data = result.data.reshape((2,) * result.n_outputs + (cols,))
        pos = 0
        for image in images:
            k, m = image.n_inputs, image.n_outputs
            moved = np.moveaxis(data, list(range(pos, pos + k)), list(range(k)))
            rest = moved.shape[k:]
            block = _matmul(self.semiring, image.data, moved.reshape(2 ** k, -1))
            data = np.moveaxis(block.reshape((2,) * m + rest), list(range(m)), list(range(pos, pos + m)))
            pos += m
        return BoolMatrix(self.semiring, result.n_inputs, produced, data.reshape(2 ** produced, cols))

    def tensor(self, first: BoolMatrix, second: BoolMatrix) -> BoolMatrix:
        n_inputs = first.n_inputs + second.n_inputs
        n_outputs = first.n_outputs + second.n_outputs
        self._guard(n_inputs, n_outputs)
        R = self.semiring
        # first is the high-order factor
        data = R.vtimes.outer(first.data, second.data).transpose(0, 2, 1, 3)
        data = np.asarray(data, dtype=R.dtype).reshape(2 ** n_outputs, 2 ** n_inputs)
        return BoolMatrix(R, n_inputs, n_outputs, data)

    def ident(self, n: int) -> BoolMatrix:
        self._guard(n)
        return function_matrix(self.semiring, n, n, tuple)

    def swap_ch(self, i: int, j: int) -> BoolMatrix:
        self._guard(i + j)
        return function_matrix(self.semiring, i + j, i + j, lambda bits: bits[i:] + bits[:i])

    def copy_ch(self) -> BoolMatrix:
        return function_matrix(self.semiring, 1, 2, lambda bits: (bits[0], bits[0]))

    def del_ch(self) -> BoolMatrix:
        return function_matrix(self.semiring, 1, 0, lambda bits: ())

    def arity(self, channel: BoolMatrix) -> Arity:
        return Arity(channel.n_inputs, channel.n_outputs)

    def equal(self, first: BoolMatrix, second: BoolMatrix) -> bool:
        if self.arity(first) != self.arity(second):
            return False
        R = self.semiring
        if first.data.dtype != object:
            if R.exact:
                return bool(np.array_equal(first.data, second.data))
            return bool(np.allclose(first.data, second.data, rtol=0.0, atol=R.tolerance))
        return all(R.eq(a, b) for a, b in zip(first.data.flat, second.data.flat))

    def describe(self, channel: BoolMatrix) -> str:
        return "[" + "; ".join(" ".join(format_value(v) for v in row) for row in channel.rows()) + "]"

    def random_channel(self, n_inputs: int, n_outputs: int, rng: random.Random) -> BoolMatrix:
        """A random stochastic matrix."""
        R = self.semiring
        data = _blank(R, n_inputs, n_outputs)
        rows = 2 ** n_outputs
        for x in range(2 ** n_inputs):
            hit = rng.randrange(rows)
            if R.is_absorbing:
                # one + r = one in absorbing semirings
                for y in range(rows):
                    data[y, x] = R.sample(rng)
            elif _is_real_probability(R):
                weights = [rng.randint(0, 4) for _ in range(rows)]
                weights[hit] += 1
                total = sum(weights)
                for y in range(rows):
                    data[y, x] = weights[y] / total
                continue
            data[hit, x] = R.one
        return BoolMatrix(R, n_inputs, n_outputs, data)


@dataclass(frozen=True)
class BasWeights:
    """Weights ``alpha0(b)`` (step not performed) and ``alpha1(b)`` (performed)."""

    alpha0: Dict[str, Any]
    alpha1: Dict[str, Any]

    def pair(self, label: str) -> tuple:
        try:
            return self.alpha0[label], self.alpha1[label]
        except KeyError:
            raise MissingLabel(f"no weight pair for label {label!r}") from None

    def validate(self, semiring: Semiring, labels: Iterable[str]) -> None:
        for label in sorted(labels):
            v0, v1 = self.pair(label)
            if not semiring.eq(semiring.plus(v0, v1), semiring.one):
                raise WeightNotStochastic(
                    f"weights of {label!r} sum to {format_value(semiring.plus(v0, v1))} "
                    f"in {semiring.name}, expected {format_value(semiring.one)}"
                )


def _gate_matrix(semiring: Semiring, symbol) -> BoolMatrix:
    test = all if symbol.kind is SymbolKind.AND else any
    return function_matrix(semiring, symbol.arity, 1, lambda bits: (int(test(bits)),))


def stoch_interpretation(
    semiring: Semiring,
    weights: BasWeights,
    signature: Signature,
    max_width: Optional[int] = DEFAULT_MAX_WIDTH,
    check_weights: bool = True,
    name: str = "stochastic",
) -> Interpretation:
    """Gates as 0/1 matrices of their truth functions, labels as weight columns."""
    if check_weights:
        weights.validate(semiring, signature.labels)
    else:
        for label in signature.labels:
            weights.pair(label)

    def assign(symbol):
        if symbol.is_label:
            return column_vector(semiring, *weights.pair(symbol.name))
        return _gate_matrix(semiring, symbol)

    return Interpretation(BoolStochBackend(semiring, max_width), assign, signature, name=f"{name}[{semiring.name}]")


def metric_value(vector: BoolMatrix) -> Any:
    """The second component of a ``0 -> 1`` evaluation."""
    if (vector.n_inputs, vector.n_outputs) != (0, 1):
        raise ShapeMismatch(
            f"a metric is read off a 0->1 vector, got {vector.n_inputs}->{vector.n_outputs}"
        )
    value = vector.data[1, 0]
    return value.item() if isinstance(value, np.generic) else value


def propositional_interpretation(
    semiring: Semiring,
    alpha: Dict[str, Any],
    signature: Signature,
    max_width: Optional[int] = DEFAULT_MAX_WIDTH,
) -> Interpretation:
    """Performed steps weigh ``alpha(b)``, skipped steps weigh one."""
    if not semiring.is_absorbing:
        warnings.warn(
            NotAbsorbingWarning(
                f"{semiring.name} is not absorbing; the propositional value sums over all "
                f"successful attacks, not only the minimal ones"
            ),
            stacklevel=2,
        )
    weights = BasWeights({b: semiring.one for b in alpha}, dict(alpha))
    return stoch_interpretation(
        semiring,
        weights,
        signature,
        max_width,
        check_weights=semiring.is_absorbing,
        name="propositional",
    )


def check_probabilities(p: Dict[str, float]) -> None:
    for label, value in sorted(p.items()):
        if not 0.0 <= value <= 1.0:
            raise ProbabilityOutOfRange(f"probability of {label!r} is {value}, outside [0, 1]")


def unreliability_weights(p: Dict[str, float]) -> BasWeights:
    check_probabilities(p)
    return BasWeights({b: 1.0 - v for b, v in p.items()}, dict(p))


def unreliability_interpretation(
    p: Dict[str, float], signature: Signature, max_width: Optional[int] = DEFAULT_MAX_WIDTH
) -> Interpretation:
    """Failure probabilities over the reals; the metric is the top-event probability."""
    return stoch_interpretation(
        metric_semiring("unrel"), unreliability_weights(p), signature, max_width, name="unreliability"
    )


def require_attack_tree(graph: TermGraph) -> None:
    if tuple(graph.arity) != (0, 1):
        raise NotAnAttackTree(f"an attack tree has 0 inputs and 1 output, got {tuple(graph.arity)}")


def require_unique_labels(graph: TermGraph) -> None:
    counts = Counter(graph.label[n] for n in graph.bas_nodes)
    shared = sorted(b for b, k in counts.items() if k > 1)
    if shared:
        raise DuplicateBasLabel(f"labels used by more than one BAS node: {', '.join(shared)}")


def singleton_antichains(labels) -> dict:
    return {b: frozenset({frozenset({b})}) for b in labels}


def minsuc_semantics(graph: TermGraph, max_width: Optional[int] = DEFAULT_MAX_WIDTH) -> frozenset:
    """Minimal successful attacks, as sets of labels, through the antichain semiring."""
    require_attack_tree(graph)
    require_unique_labels(graph)
    labels = graph.signature.labels
    semiring = antichain_semiring(labels)
    interpretation = propositional_interpretation(
        semiring, singleton_antichains(labels), graph.signature, max_width
    )
    return metric_value(evaluate(graph, interpretation, max_width=max_width))
