"""Combinatorial primitives, lattice enumeration, and parameter bundles.

All quantities are exact: coordinates and degrees are Python ints,
scalars are backend rationals (see :mod:`mvortho._backend`).  Everything
here is a pure function of its inputs; values are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ._backend import R, ZERO, is_integral


def rising_factorial(a, k: int):
    """Rising factorial a(a+1)...(a+k-1); empty product for k = 0."""
    if k < 0:
        raise ValueError("rising_factorial needs k >= 0")
    out = R(1)
    a = R(a)
    for j in range(k):
        out *= a + j
    return out


def multinomial(N: int, x: Sequence[int]) -> int:
    """N! / (x_1! ... x_n! (N - |x|)!) for a lattice point with |x| <= N."""
    if N < 0:
        raise ValueError("multinomial needs N >= 0")
    if any(c < 0 for c in x):
        raise ValueError("coordinates must be non-negative")
    rest = N - sum(x)
    if rest < 0:
        raise ValueError(f"|x| = {sum(x)} exceeds N = {N}")
    return math.factorial(N) // (
        math.prod(math.factorial(c) for c in x) * math.factorial(rest)
    )


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` non-negative ints summing to `total`, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_lattice(n: int, N: int) -> tuple[tuple[int, ...], ...]:
    """All x in N_0^n with |x| <= N, graded-lexicographic order.

    Points are sorted by total |x| first, then lexicographically; the
    result has binomial(N + n, n) entries.  This fixed order is the
    canonical indexing used by every table and matrix in the package.
    """
    if n < 1 or N < 0:
        raise ValueError("enumerate_lattice needs n >= 1 and N >= 0")
    pts: list[tuple[int, ...]] = []
    for s in range(N + 1):
        pts.extend(compositions(s, n))
    return tuple(pts)


def enumerate_degrees(n: int, max_total: int) -> tuple[tuple[int, ...], ...]:
    """Degree multi-indices with |m| <= max_total, same graded-lex order."""
    return enumerate_lattice(n, max_total)


def tail_sum(x: Sequence[int], i: int) -> int:
    """x_{>i} = x_{i+1} + ... + x_n for 1 <= i <= n-1 (1-based i)."""
    n = len(x)
    if not 1 <= i <= n - 1:
        raise ValueError(f"tail index i = {i} outside [1, {n - 1}]")
    return sum(x[i:])


def tail_param(a: Sequence, i: int):
    """a_{>i} = a_{i+1} + ... + a_n for 1 <= i <= n-1 (1-based i)."""
    n = len(a)
    if not 1 <= i <= n - 1:
        raise ValueError(f"tail index i = {i} outside [1, {n - 1}]")
    return sum((R(v) for v in a[i:]), ZERO)


@dataclass(frozen=True)
class Lattice:
    """Enumerated finite lattice {x in N_0^n : |x| <= bound}.

    For the bounded families the bound is N and the lattice is the exact
    domain.  For Meixner the true domain is all of N_0^n and a lattice
    with ``truncated=True`` is a finite working box.
    """

    n: int
    bound: int
    truncated: bool = False
    points: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = enumerate_lattice(self.n, self.bound)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "index", {p: i for i, p in enumerate(pts)})

    @property
    def size(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class LatticeFunction:
    """Total map from an enumerated lattice to rationals.

    Values are stored in the lattice's canonical order.  An entry may be
    None only to flag a point whose value could not be computed without
    leaving a truncated box (see operators); exact summation helpers
    refuse such entries rather than treating them as zero.
    """

    lattice: Lattice
    values: tuple

    @classmethod
    def from_callable(cls, lattice: Lattice, fn) -> "LatticeFunction":
        return cls(lattice, tuple(fn(x) for x in lattice.points))

    @classmethod
    def constant(cls, lattice: Lattice, c) -> "LatticeFunction":
        c = R(c)
        return cls(lattice, tuple(c for _ in lattice.points))

    @classmethod
    def delta(cls, lattice: Lattice, at) -> "LatticeFunction":
        i = lattice.index[tuple(at)]
        return cls(lattice, tuple(R(1) if j == i else R(0) for j in range(lattice.size)))

    def __call__(self, x):
        return self.values[self.lattice.index[tuple(x)]]

    def valid_points(self):
        """Points whose value is actually defined."""
        return [p for p, v in zip(self.lattice.points, self.values) if v is not None]

    def max_abs(self):
        """Largest |value| over defined points; 0 on an all-None table."""
        out = ZERO
        for v in self.values:
            if v is not None and abs(v) > out:
                out = abs(v)
        return out


def _positive_rational(value, what: str):
    q = R(value)
    if q <= 0:
        raise ValueError(f"{what} must be positive, got {q}")
    return q


@dataclass(frozen=True)
class HahnParams:
    """Hahn family: positive rationals a_1..a_n, b, integer N > n >= 2."""

    a: tuple
    b: object
    N: int

    def __post_init__(self):
        a = tuple(_positive_rational(v, "a_i") for v in self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", _positive_rational(self.b, "b"))
        if len(a) < 2:
            raise ValueError("need n >= 2 variables")
        if not (isinstance(self.N, int) and self.N > len(a)):
            raise ValueError(f"need integer N > n, got N={self.N}, n={len(a)}")

    family = "hahn"

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def a_total(self):
        return sum(self.a, ZERO)

    def a_tail(self, i: int):
        return tail_param(self.a, i)


@dataclass(frozen=True)
class KrawtchoukParams:
    """Krawtchouk family: positive rationals a_1..a_n, integer N > n >= 2."""

    a: tuple
    N: int

    def __post_init__(self):
        a = tuple(_positive_rational(v, "a_i") for v in self.a)
        object.__setattr__(self, "a", a)
        if len(a) < 2:
            raise ValueError("need n >= 2 variables")
        if not (isinstance(self.N, int) and self.N > len(a)):
            raise ValueError(f"need integer N > n, got N={self.N}, n={len(a)}")

    family = "krawtchouk"

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def a_total(self):
        return sum(self.a, ZERO)

    def a_tail(self, i: int):
        return tail_param(self.a, i)


@dataclass(frozen=True)
class MeixnerParams:
    """Meixner family: positive rationals a_1..a_n with |a| < 1, beta > 0."""

    a: tuple
    beta: object

    def __post_init__(self):
        a = tuple(_positive_rational(v, "a_i") for v in self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "beta", _positive_rational(self.beta, "beta"))
        if len(a) < 2:
            raise ValueError("need n >= 2 variables")
        if sum(a, ZERO) >= 1:
            raise ValueError(f"need |a| < 1, got |a| = {sum(a, ZERO)}")

    family = "meixner"

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def a_total(self):
        return sum(self.a, ZERO)

    def a_tail(self, i: int):
        return tail_param(self.a, i)

    @property
    def integral_beta(self) -> bool:
        return is_integral(self.beta)


FamilyParams = (HahnParams, KrawtchoukParams, MeixnerParams)


def family_lattice(params, xmax: int | None = None) -> Lattice:
    """The canonical lattice for a parameter bundle.

    Bounded families get their exact simplex |x| <= N.  Meixner needs a
    caller-supplied truncation bound ``xmax``.
    """
    if isinstance(params, MeixnerParams):
        if xmax is None:
            raise ValueError("Meixner lattice needs an explicit xmax")
        return Lattice(params.n, xmax, truncated=True)
    return Lattice(params.n, params.N)
