"""Semirings used as metric domains.

Numeric carriers are IEEE floats; ``math.inf`` is the explicit infinity of
``[0, inf]``. Symbolic carriers are antichains of attacks (frozensets of
frozensets of BAS identifiers) and :class:`AttackMultiset`.
"""
import math
import operator
import random
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import UnknownSemiring, ValueParseError

DECIMAL = re.compile(r"^\+?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class Semiring:
    """A commutative semiring ``(R, +, ·, 0, 1)`` with its law flags.

    ``np_plus``/``np_times`` are vectorised forms of the operations; symbolic
    semirings leave them unset and get object-dtype ufuncs instead.
    """

    name: str
    plus: Callable[[Any, Any], Any] = field(repr=False)
    times: Callable[[Any, Any], Any] = field(repr=False)
    zero: Any
    one: Any
    is_absorbing: bool
    is_idempotent_plus: bool
    sample: Callable[[random.Random], Any] = field(repr=False, compare=False)
    exact: bool = True
    tolerance: float = 1e-9
    np_plus: Optional[np.ufunc] = field(default=None, repr=False, compare=False)
    np_times: Optional[np.ufunc] = field(default=None, repr=False, compare=False)
    description: str = ""

    @property
    def dtype(self):
        return float if self.np_plus is not None else object

    @cached_property
    def vplus(self) -> np.ufunc:
        return self.np_plus or np.frompyfunc(self.plus, 2, 1)

    @cached_property
    def vtimes(self) -> np.ufunc:
        return self.np_times or np.frompyfunc(self.times, 2, 1)

    def sum(self, values: Iterable[Any]) -> Any:
        return reduce(self.plus, values, self.zero)

    def product(self, values: Iterable[Any]) -> Any:
        return reduce(self.times, values, self.one)

    def eq(self, a: Any, b: Any) -> bool:
        if self.exact:
            return a == b
        return math.isclose(a, b, rel_tol=0.0, abs_tol=self.tolerance)


def parse_ext_real(token: str) -> float:
    """Read a non-negative decimal literal or ``inf``."""
    text = token.strip()
    if text.lower() == "inf":
        return math.inf
    if not DECIMAL.match(text):
        raise ValueParseError(f"not a non-negative decimal or 'inf': {token!r}")
    return float(text)


def _sample_ext_real(rng: random.Random) -> float:
    if rng.random() < 0.1:
        return math.inf
    return float(rng.randint(0, 100))


def _sample_probability(rng: random.Random) -> float:
    return rng.randint(0, 16) / 16


def _sample_nonneg(rng: random.Random) -> float:
    return rng.randint(0, 40) / 8


def _mincost(name: str) -> Semiring:
    return Semiring(
        name=name,
        plus=min,
        times=operator.add,
        zero=math.inf,
        one=0.0,
        is_absorbing=True,
        is_idempotent_plus=True,
        sample=_sample_ext_real,
        np_plus=np.minimum,
        np_times=np.add,
        description="([0,inf], min, +, inf, 0)",
    )


def _mintime_par() -> Semiring:
    return Semiring(
        name="mintime-par",
        plus=min,
        times=max,
        zero=math.inf,
        one=0.0,
        is_absorbing=True,
        is_idempotent_plus=True,
        sample=_sample_ext_real,
        np_plus=np.minimum,
        np_times=np.maximum,
        description="([0,inf], min, max, inf, 0)",
    )


def _maxchallenge() -> Semiring:
    # 0 is the unit of max on [0, inf]
    return Semiring(
        name="maxchallenge",
        plus=max,
        times=max,
        zero=0.0,
        one=0.0,
        is_absorbing=False,
        is_idempotent_plus=True,
        sample=_sample_ext_real,
        np_plus=np.maximum,
        np_times=np.maximum,
        description="([0,inf], max, max, 0, 0)",
    )


def _maxprob() -> Semiring:
    return Semiring(
        name="maxprob",
        plus=max,
        times=operator.mul,
        zero=0.0,
        one=1.0,
        is_absorbing=True,
        is_idempotent_plus=True,
        sample=_sample_probability,
        exact=False,
        np_plus=np.maximum,
        np_times=np.multiply,
        description="([0,1], max, *, 0, 1)",
    )


def _unrel() -> Semiring:
    return Semiring(
        name="unrel",
        plus=operator.add,
        times=operator.mul,
        zero=0.0,
        one=1.0,
        is_absorbing=False,
        is_idempotent_plus=False,
        sample=_sample_nonneg,
        exact=False,
        np_plus=np.add,
        np_times=np.multiply,
        description="([0,inf), +, *, 0, 1)",
    )


METRIC_SEMIRINGS = {
    "mincost": lambda: _mincost("mincost"),
    "mintime-par": _mintime_par,
    "mintime-seq": lambda: _mincost("mintime-seq"),
    "maxchallenge": _maxchallenge,
    "maxprob": _maxprob,
    "unrel": _unrel,
}


def metric_semiring(name: str) -> Semiring:
    try:
        factory = METRIC_SEMIRINGS[name]
    except KeyError:
        raise UnknownSemiring(
            f"unknown semiring {name!r}; choose from {', '.join(METRIC_SEMIRINGS)}"
        ) from None
    return factory()


# --- antichains of attacks -------------------------------------------------

def antichain_normalize(attacks: Iterable[Iterable]) -> frozenset:
    """The subset-minimal elements of ``attacks``."""
    sets = {frozenset(a) for a in attacks}
    return frozenset(a for a in sets if not any(b < a for b in sets))


def is_antichain(attacks: Iterable[frozenset]) -> bool:
    attacks = list(attacks)
    return not any(a < b for a in attacks for b in attacks)


def _random_attack(universe: Sequence[str], rng: random.Random) -> frozenset:
    return frozenset(b for b in universe if rng.random() < 0.5)


def antichain_semiring(universe: Iterable[str]) -> Semiring:
    """AC over ``universe``: normalised union and normalised pairwise union."""
    universe = sorted(universe)

    def plus(a: frozenset, b: frozenset) -> frozenset:
        return antichain_normalize(a | b)

    def times(a: frozenset, b: frozenset) -> frozenset:
        return antichain_normalize(x | y for x in a for y in b)

    def sample(rng: random.Random) -> frozenset:
        return antichain_normalize(
            _random_attack(universe, rng) for _ in range(rng.randint(0, 3))
        )

    return Semiring(
        name="antichain",
        plus=plus,
        times=times,
        zero=frozenset(),
        one=frozenset({frozenset()}),
        is_absorbing=True,
        is_idempotent_plus=True,
        sample=sample,
        description=f"antichains over {{{', '.join(universe)}}}",
    )


# --- multisets of attacks ---------------------------------------------------

class AttackMultiset(Mapping):
    """Immutable multiset of attacks: attack -> positive multiplicity."""

    __slots__ = ("_counts",)

    def __init__(self, counts=()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        acc = {}
        for attack, mult in items:
            if mult < 0:
                raise ValueError(f"negative multiplicity {mult}")
            if mult:
                key = frozenset(attack)
                acc[key] = acc.get(key, 0) + mult
        self._counts = acc

    def __getitem__(self, attack) -> int:
        return self._counts[frozenset(attack)]

    def __iter__(self):
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def count(self, attack) -> int:
        return self._counts.get(frozenset(attack), 0)

    def __hash__(self) -> int:
        return hash(frozenset(self._counts.items()))

    def __add__(self, other: "AttackMultiset") -> "AttackMultiset":
        return AttackMultiset([*self._counts.items(), *other._counts.items()])

    def __mul__(self, other: "AttackMultiset") -> "AttackMultiset":
        return AttackMultiset(
            (a | b, m * n) for a, m in self._counts.items() for b, n in other._counts.items()
        )

    def __repr__(self) -> str:
        return f"AttackMultiset({format_value(self)})"


def multiset_semiring(universe: Iterable[str]) -> Semiring:
    """Multisets of attacks with multiplicity-adding union and pairwise union."""
    universe = sorted(universe)

    def sample(rng: random.Random) -> AttackMultiset:
        return AttackMultiset(
            (_random_attack(universe, rng), rng.randint(1, 3)) for _ in range(rng.randint(0, 3))
        )

    return Semiring(
        name="multiset",
        plus=operator.add,
        times=operator.mul,
        zero=AttackMultiset(),
        one=AttackMultiset({frozenset(): 1}),
        is_absorbing=False,
        is_idempotent_plus=False,
        sample=sample,
        description=f"multisets of attacks over {{{', '.join(universe)}}}",
    )


# --- law checks -------------------------------------------------------------

def check_laws(semiring: Semiring, rng: random.Random, n_samples: int = 1000) -> list:
    """Names of the semiring laws violated on ``n_samples`` random triples."""
    add, mul, eq = semiring.plus, semiring.times, semiring.eq
    zero, one = semiring.zero, semiring.one
    failed = set()
    for _ in range(n_samples):
        r, s, t = (semiring.sample(rng) for _ in range(3))
        checks = {
            "plus-associative": eq(add(add(r, s), t), add(r, add(s, t))),
            "plus-commutative": eq(add(r, s), add(s, r)),
            "plus-unit": eq(add(r, zero), r),
            "times-associative": eq(mul(mul(r, s), t), mul(r, mul(s, t))),
            "times-commutative": eq(mul(r, s), mul(s, r)),
            "times-unit": eq(mul(r, one), r),
            "distributive": eq(mul(r, add(s, t)), add(mul(r, s), mul(r, t))),
        }
        if semiring.is_absorbing:
            checks["absorbing"] = eq(add(r, mul(r, s)), r)
        failed.update(name for name, ok in checks.items() if not ok)
    return sorted(failed)


def absorbing_counterexample(semiring: Semiring, rng: random.Random, n_samples: int = 1000):
    """A pair ``(r, s)`` with ``r + r·s != r``, or ``None`` if sampling finds none."""
    for _ in range(n_samples):
        r, s = semiring.sample(rng), semiring.sample(rng)
        if not semiring.eq(semiring.plus(r, semiring.times(r, s)), r):
            return r, s
    return None


# --- rendering --------------------------------------------------------------

def sort_attacks(attacks: Iterable[frozenset]) -> list:
    return sorted(attacks, key=lambda a: (len(a), sorted(map(str, a))))


def _format_attack(attack: Iterable) -> str:
    return "{" + ", ".join(sorted(map(str, attack))) + "}"


def format_number(value: float) -> str:
    value = float(value)
    if math.isinf(value):
        return "inf"
    if value.is_integer():
        return str(int(value))
    return format(value, ".12g")


def format_value(value: Any) -> str:
    """Deterministic text rendering of a semiring value or a tuple of them."""
    if isinstance(value, AttackMultiset):
        items = sort_attacks(value)
        return "{" + ", ".join(f"{_format_attack(a)}: {value[a]}" for a in items) + "}"
    if isinstance(value, frozenset):
        return "{" + ", ".join(_format_attack(a) for a in sort_attacks(value)) + "}"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    return format_number(value)


def to_json_value(value: Any) -> Any:
    """JSON-compatible form; infinity becomes the string ``"inf"``."""
    if isinstance(value, AttackMultiset):
        return [{"attack": sorted(map(str, a)), "count": value[a]} for a in sort_attacks(value)]
    if isinstance(value, frozenset):
        return [sorted(map(str, a)) for a in sort_attacks(value)]
    if isinstance(value, np.ndarray):
        return [to_json_value(v) for v in value.tolist()]
    if isinstance(value, (tuple, list)):
        return [to_json_value(v) for v in value]
    value = float(value)
    if math.isinf(value):
        return "inf"
    return int(value) if value.is_integer() else value
