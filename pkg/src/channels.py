"""Channel categories and the functorial evaluation of term graphs.

A backend supplies sequential composition, tensor and the wiring channels.
An :class:`Interpretation` assigns a one-output channel to every symbol; it
extends to all term graphs by folding a layered decomposition. Any two
decompositions of the same graph give the same channel.
"""
import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Optional, Sequence

from .cache import ChannelCache
from .decomposition import Layers, decompose, decomposition_width
from .errors import MissingLabel, MissingSymbol, ShapeMismatch, UnknownSymbol, WidthCapExceeded
from .models import AxiomReport
from .term_graph import (
    COPY,
    DEL,
    ID0,
    Arity,
    AtomKind,
    Atom,
    Signature,
    Symbol,
    TermGraph,
    atomic,
    identity,
    par_compose,
    seq_compose,
    swap_block,
)

logger = logging.getLogger(__name__)

SAMPLE_WIRES = 2

AXIOM_GROUPS = {
    "compose-associative": 1,
    "compose-unit": 1,
    "tensor-associative": 2,
    "tensor-unit": 2,
    "ident-tensor": 2,
    "swap-involutive": 3,
    "swap-natural": 3,
    "interchange": 3,
    "copy-coassociative": 4,
    "copy-counit": 4,
    "copy-commutative": 4,
}


class ChannelBackend(ABC):
    """Contract of a channel category with hom-sets indexed by wire counts."""

    name = "backend"
    max_width: Optional[int] = None

    @abstractmethod
    def compose(self, first: Any, second: Any) -> Any:
        """``first: i -> j`` followed by ``second: j -> k``."""

    @abstractmethod
    def tensor(self, first: Any, second: Any) -> Any:
        """Parallel composite with ``first``'s wires first."""

    @abstractmethod
    def ident(self, n: int) -> Any: ...

    @abstractmethod
    def swap_ch(self, i: int, j: int) -> Any: ...

    @abstractmethod
    def copy_ch(self) -> Any: ...

    @abstractmethod
    def del_ch(self) -> Any: ...

    @abstractmethod
    def arity(self, channel: Any) -> Arity: ...

    @abstractmethod
    def equal(self, first: Any, second: Any) -> bool: ...

    def compose_layer(self, result: Any, images: Sequence[Any]) -> Any:
        """``result`` followed by the tensor of ``images``."""
        return self.compose(result, reduce(self.tensor, images))

    def describe(self, channel: Any) -> str:
        return repr(channel)

    def atom_channel(self, atom: Atom) -> Any:
        """Image of a wiring atom; symbol atoms go through an interpretation."""
        if atom.kind is AtomKind.ID0:
            return self.ident(0)
        if atom.kind is AtomKind.ID1:
            return self.ident(1)
        if atom.kind is AtomKind.COPY:
            return self.copy_ch()
        if atom.kind is AtomKind.DEL:
            return self.del_ch()
        if atom.kind is AtomKind.SWAP:
            return self.swap_ch(1, 1)
        raise ValueError(f"{atom} is not a wiring atom")


@dataclass(frozen=True)
class Interpretation:
    """Assigns a channel ``arity(f) -> 1`` of ``backend`` to every symbol f."""

    backend: ChannelBackend
    assign: Callable[[Symbol], Any] = field(repr=False)
    signature: Signature
    name: str = "interpretation"

    def image(self, name: str) -> Any:
        try:
            symbol = self.signature.symbol(name)
        except UnknownSymbol:
            raise MissingSymbol(f"{self.name} interpretation has no symbol {name!r}") from None
        try:
            channel = self.assign(symbol)
        except KeyError:
            raise MissingLabel(f"{self.name} interpretation assigns nothing to {name!r}") from None
        if tuple(self.backend.arity(channel)) != (symbol.arity, 1):
            raise ShapeMismatch(
                f"channel for {name} has arity {tuple(self.backend.arity(channel))}, "
                f"expected ({symbol.arity}, 1)"
            )
        return channel

    def atom_image(self, atom: Atom) -> Any:
        if atom.kind is AtomKind.SYMBOL:
            return self.image(atom.symbol)
        return self.backend.atom_channel(atom)


def evaluate_layers(
    layers: Layers, interpretation: Interpretation, max_width: Optional[int] = None
) -> Any:
    """Fold the layers, each one the tensor of its atom images, onto the identity."""
    backend = interpretation.backend
    cap = max_width if max_width is not None else backend.max_width
    if cap is not None:
        width = decomposition_width(layers)
        if width > cap:
            raise WidthCapExceeded(f"decomposition width {width} exceeds the cap of {cap} wires")

    cache = ChannelCache()
    result = backend.ident(layers.n_inputs)
    for layer in layers:
        images = [cache.get_or_build(atom, lambda a=atom: interpretation.atom_image(a)) for atom in layer]
        result = backend.compose_layer(result, images)
    logger.debug("evaluated %d layers in %s, atom cache %s", len(layers), backend.name, cache.get_stats())
    return result


def evaluate(
    graph: TermGraph,
    interpretation: Interpretation,
    layers: Optional[Layers] = None,
    max_width: Optional[int] = None,
) -> Any:
    """The channel of ``graph`` under ``interpretation``."""
    if layers is None:
        layers = decompose(graph)
    return evaluate_layers(layers, interpretation, max_width)


def check_axioms(
    backend: ChannelBackend,
    sampler: Callable[[int, int, random.Random], Any],
    n_samples: int = 100,
    rng: Optional[random.Random] = None,
) -> AxiomReport:
    """Check the channel-category laws on channels drawn from ``sampler(i, j, rng)``."""
    rng = rng or random.Random(0)
    report = AxiomReport(subject=backend.name)
    C, T, eq = backend.compose, backend.tensor, backend.equal

    def check(axiom, lhs, rhs, *arities):
        ok = eq(lhs, rhs)
        shown = (backend.describe(lhs), backend.describe(rhs)) if not ok else ("", "")
        report.record(axiom, ok, arities, *shown)

    copy, drop, id1 = backend.copy_ch(), backend.del_ch(), backend.ident(1)
    for _ in range(n_samples):
        i, j, k, l, m, n = (rng.randint(0, SAMPLE_WIRES) for _ in range(6))
        f, g, h = sampler(i, j, rng), sampler(j, k, rng), sampler(k, l, rng)
        f2, g2 = sampler(l, m, rng), sampler(m, n, rng)

        check("compose-associative", C(C(f, g), h), C(f, C(g, h)), (i, j), (j, k), (k, l))
        check("compose-unit", C(backend.ident(i), f), f, (i, j))
        check("compose-unit", C(f, backend.ident(j)), f, (i, j))

        check("tensor-associative", T(T(f, g), h), T(f, T(g, h)), (i, j), (j, k), (k, l))
        check("tensor-unit", T(backend.ident(0), f), f, (i, j))
        check("tensor-unit", T(f, backend.ident(0)), f, (i, j))
        check("ident-tensor", T(backend.ident(i), backend.ident(j)), backend.ident(i + j), (i, j))

        check("swap-involutive", C(backend.swap_ch(i, j), backend.swap_ch(j, i)), backend.ident(i + j), (i, j))
        check(
            "swap-natural",
            C(T(f, h), backend.swap_ch(j, l)),
            C(backend.swap_ch(i, k), T(h, f)),
            (i, j), (k, l),
        )
        check("interchange", T(C(f, g), C(f2, g2)), C(T(f, f2), T(g, g2)), (i, j), (j, k), (l, m), (m, n))

        check("copy-coassociative", C(copy, T(copy, id1)), C(copy, T(id1, copy)), (1, 3))
        check("copy-counit", C(copy, T(drop, id1)), id1, (1, 1))
        check("copy-counit", C(copy, T(id1, drop)), id1, (1, 1))
        check("copy-commutative", C(copy, backend.swap_ch(1, 1)), copy, (1, 2))

    if not report.passed:
        logger.warning("%s violates %s", backend.name, ", ".join(sorted(report.failed())))
    return report


def check_functor_laws(
    interpretation: Interpretation,
    sampler: Callable[[int, int, random.Random], TermGraph],
    n_samples: int = 50,
    rng: Optional[random.Random] = None,
) -> AxiomReport:
    """Check that evaluation preserves composition, tensor and the wiring graphs."""
    rng = rng or random.Random(0)
    backend = interpretation.backend
    report = AxiomReport(subject=f"{interpretation.name} -> {backend.name}")

    def F(graph):
        return evaluate(graph, interpretation)

    def check(law, lhs, rhs, *arities):
        ok = backend.equal(lhs, rhs)
        shown = (backend.describe(lhs), backend.describe(rhs)) if not ok else ("", "")
        report.record(law, ok, arities, *shown)

    for _ in range(n_samples):
        i, j, k, l = (rng.randint(0, SAMPLE_WIRES) for _ in range(4))
        s, t, u = sampler(i, j, rng), sampler(j, k, rng), sampler(k, l, rng)
        check("preserves-compose", F(seq_compose(s, t)), backend.compose(F(s), F(t)), (i, j), (j, k))
        check("preserves-tensor", F(par_compose(s, u)), backend.tensor(F(s), F(u)), (i, j), (k, l))
        check("preserves-ident", F(identity(i)), backend.ident(i), (i, i))
        check("preserves-swap", F(swap_block(i, j)), backend.swap_ch(i, j), (i + j, i + j))

    check("preserves-copy", F(atomic(COPY)), backend.copy_ch(), (1, 2))
    check("preserves-del", F(atomic(DEL)), backend.del_ch(), (1, 0))
    check("preserves-ident", F(atomic(ID0)), backend.ident(0), (0, 0))
    return report
