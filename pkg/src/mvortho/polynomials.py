"""Closed-form evaluation of the polynomial families.

Single-variable Hahn / Krawtchouk / Meixner polynomials are terminating
hypergeometric sums.  The multivariate eigenpolynomials are products of
two-variable "pair" polynomials in (x_i, x_{>i}) -- where x_{>i} is the
tail sum x_{i+1} + ... + x_n -- chained with degree-dependent argument
shifts, times a single-variable polynomial in |x|.

Degree multi-indices are tuples m = (m_0, m_1, ..., m_{n-1}); m_0 is the
degree of the radial (|x|-dependent) factor and m_i the degree of the
i-th pair factor.  Empty shift sums are zero, so the top pair factor
(i = n-1) carries no shift.

All evaluation is exact rational arithmetic; no rounding ever occurs.
"""

from __future__ import annotations

import math
from typing import Sequence

from ._backend import R, ZERO, ONE
from .core import (
    HahnParams,
    KrawtchoukParams,
    Lattice,
    LatticeFunction,
    MeixnerParams,
    rising_factorial,
    tail_param,
    tail_sum,
)


def _terminating_sum(m: int, num_factors, den_factors, z=None):
    """Sum_{k=0..m} term_k with term ratios built from linear factors.

    ``num_factors``/``den_factors`` are callables giving the k-th new
    factor of each Pochhammer in the numerator/denominator (already
    including the k! slot).  A zero numerator factor terminates the sum
    (the corresponding Pochhammer stays zero from then on); a zero
    denominator factor before that is a genuine pole and raises.
    """
    total = ONE
    term = ONE
    zq = None if z is None else R(z)
    for k in range(1, m + 1):
        num = ONE
        for f in num_factors:
            num *= f(k - 1)
        if num == 0:
            break
        den = ONE
        for f in den_factors:
            den *= f(k - 1)
        if den == 0:
            raise ZeroDivisionError(
                f"lower-parameter Pochhammer vanished at k = {k} "
                "before the series terminated"
            )
        term = term * num / den
        if zq is not None:
            term *= zq
        total += term
    return total


def hahn(m: int, x, a, b, N):
    """Single-variable Hahn polynomial of degree m at x.

    Terminating sum Sum_k (-m)_k (m+a+b-1)_k (-x)_k / ((a)_k (-N)_k k!).
    N may be any rational here: the shifted radial factors of the
    multivariate polynomials call this with non-integer or negative
    degree slots, and termination is enforced by the (-m)_k factor.
    """
    if m < 0:
        raise ValueError("degree m must be >= 0")
    a, b, N, x = R(a), R(b), R(N), R(x)
    return _terminating_sum(
        m,
        num_factors=(
            lambda j: -m + j,
            lambda j: m + a + b - 1 + j,
            lambda j: -x + j,
        ),
        den_factors=(
            lambda j: a + j,
            lambda j: -N + j,
            lambda j: j + 1,
        ),
    )


def krawtchouk(m: int, x, p, N):
    """Single-variable Krawtchouk polynomial: 2F1(-m, -x; -N | 1/p)."""
    if m < 0:
        raise ValueError("degree m must be >= 0")
    p = R(p)
    if p == 0:
        raise ValueError("p must be nonzero")
    x, N = R(x), R(N)
    return _terminating_sum(
        m,
        num_factors=(lambda j: -m + j, lambda j: -x + j),
        den_factors=(lambda j: -N + j, lambda j: j + 1),
        z=1 / p,
    )


def meixner(m: int, x, c, beta):
    """Single-variable Meixner polynomial: 2F1(-m, -x; beta | 1 - 1/c)."""
    if m < 0:
        raise ValueError("degree m must be >= 0")
    c = R(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    x, beta = R(x), R(beta)
    return _terminating_sum(
        m,
        num_factors=(lambda j: -m + j, lambda j: -x + j),
        den_factors=(lambda j: beta + j, lambda j: j + 1),
        z=1 - 1 / c,
    )


def hahn_pair(m: int, u, v, alpha, gamma):
    """Two-variable Hahn-side pair polynomial of degree m.

    Sum_{k=0..m} (-1)^k C(m,k) (gamma+k)_{m-k} (alpha+m-k)_k (-u)_{m-k} (-v)_k.

    Eigenfunction of the exchange operator restricted to the sector
    spanned by (u, v) = (x_i, x_{>i}); degree one gives alpha*v - gamma*u.
    """
    if m < 0:
        raise ValueError("degree m must be >= 0")
    u, v, alpha, gamma = R(u), R(v), R(alpha), R(gamma)
    total = ZERO
    for k in range(m + 1):
        term = (
            R(math.comb(m, k))
            * rising_factorial(gamma + k, m - k)
            * rising_factorial(alpha + m - k, k)
            * rising_factorial(-u, m - k)
            * rising_factorial(-v, k)
        )
        total += -term if k % 2 else term
    return total


def km_pair(m: int, u, v, alpha, gamma):
    """Pair polynomial shared by the Krawtchouk and Meixner systems.

    Sum_{k=0..m} (-1)^k C(m,k) (gamma/alpha)^k (-u)_k (-v)_{m-k}.
    """
    if m < 0:
        raise ValueError("degree m must be >= 0")
    alpha = R(alpha)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    u, v = R(u), R(v)
    ratio = R(gamma) / alpha
    total = ZERO
    for k in range(m + 1):
        term = (
            R(math.comb(m, k))
            * ratio**k
            * rising_factorial(-u, k)
            * rising_factorial(-v, m - k)
        )
        total += -term if k % 2 else term
    return total


def _check_degree_index(m: Sequence[int], params) -> tuple[int, ...]:
    m = tuple(int(d) for d in m)
    if len(m) != params.n:
        raise ValueError(f"degree index needs {params.n} entries, got {len(m)}")
    if any(d < 0 for d in m):
        raise ValueError("degrees must be non-negative")
    if not isinstance(params, MeixnerParams) and sum(m) > params.N:
        raise ValueError(f"|m| = {sum(m)} exceeds N = {params.N}")
    return m


def pair_product(i: int, m: Sequence[int], x: Sequence[int], params):
    """Product of pair factors j = i..n-1 with degree-shifted arguments.

    The j-th factor is evaluated at (x_j, x_{>j} - sum_{k>j} m_k); the
    Hahn family also shifts the tail parameter slot to
    a_{>j} + 2*sum_{k>j} m_k, while Krawtchouk/Meixner keep a_{>j}.
    """
    n = params.n
    if not 1 <= i <= n - 1:
        raise ValueError(f"sector index i = {i} outside [1, {n - 1}]")
    m = _check_degree_index(m, params)
    hahn_family = isinstance(params, HahnParams)
    out = ONE
    for j in range(i, n):
        shift = sum(m[j + 1 :])
        u = x[j - 1]
        v = tail_sum(x, j) - shift
        alpha = params.a[j - 1]
        gamma = params.a_tail(j)
        if hahn_family:
            out *= hahn_pair(m[j], u, v, alpha, gamma + 2 * shift)
        else:
            out *= km_pair(m[j], u, v, alpha, gamma)
    return out


def multi_hahn(m: Sequence[int], x: Sequence[int], params: HahnParams):
    """Multivariate Hahn eigenpolynomial P_m(x)."""
    m = _check_degree_index(m, params)
    s1 = sum(m[1:])
    radial = hahn(
        m[0],
        sum(x) - s1,
        params.a_total + 2 * s1,
        params.b,
        params.N - s1,
    )
    return pair_product(1, m, x, params) * radial


def multi_krawtchouk(m: Sequence[int], x: Sequence[int], params: KrawtchoukParams):
    """Multivariate Krawtchouk eigenpolynomial P_m(x)."""
    m = _check_degree_index(m, params)
    s1 = sum(m[1:])
    A = params.a_total
    radial = krawtchouk(m[0], sum(x) - s1, A / (A + 1), params.N - s1)
    return pair_product(1, m, x, params) * radial


def multi_meixner(m: Sequence[int], x: Sequence[int], params: MeixnerParams):
    """Multivariate Meixner eigenpolynomial P_m(x)."""
    m = _check_degree_index(m, params)
    s1 = sum(m[1:])
    radial = meixner(m[0], sum(x) - s1, params.a_total, params.beta + s1)
    return pair_product(1, m, x, params) * radial


def eigenpoly(m: Sequence[int], x: Sequence[int], params):
    """Family-dispatching evaluator for the eigenpolynomial P_m(x)."""
    if isinstance(params, HahnParams):
        return multi_hahn(m, x, params)
    if isinstance(params, KrawtchoukParams):
        return multi_krawtchouk(m, x, params)
    if isinstance(params, MeixnerParams):
        return multi_meixner(m, x, params)
    raise TypeError(f"unknown parameter bundle {type(params)!r}")


def eigenpoly_table(m: Sequence[int], params, lattice: Lattice) -> LatticeFunction:
    """Value table of P_m over an enumerated lattice."""
    return LatticeFunction.from_callable(lattice, lambda x: eigenpoly(m, x, params))


def eigenvalue(params, kind: str, index: int | None, m: Sequence[int]):
    """Exact eigenvalue of an operator on the eigenpolynomial P_m.

    kind 'total' uses the full degree |m|.  kind 'exchange' with sector
    index i uses only the partial degree S_i = m_i + ... + m_{n-1}: the
    radial factor and the pair factors below sector i are invisible to
    an exchange confined to sites >= i.  kind 'single' is total minus
    the full exchange part (the operators commute and share P_m).
    """
    m = _check_degree_index(m, params)
    total = sum(m)

    def exchange_eig(i: int):
        s_i = sum(m[i:])
        block = params.a[i - 1] + params.a_tail(i)
        if isinstance(params, HahnParams):
            return R(s_i) * (s_i + block - 1)
        if isinstance(params, KrawtchoukParams):
            return R(s_i) * block
        return -R(s_i) * block

    if isinstance(params, HahnParams):
        total_eig = R(total) * (total + params.a_total + params.b - 1)
    elif isinstance(params, KrawtchoukParams):
        total_eig = R(total) * (params.a_total + 1)
    else:
        total_eig = R(total) * (1 - params.a_total)

    if kind == "total":
        return total_eig
    if kind == "single":
        return total_eig - exchange_eig(1)
    if kind == "exchange":
        if index is None or not 1 <= index <= params.n - 1:
            raise ValueError(f"exchange index must be in [1, {params.n - 1}]")
        return exchange_eig(index)
    raise ValueError(f"unknown operator kind {kind!r}")


def pair_backward_table(m: int, alpha, gamma, box: int) -> LatticeFunction:
    """Degree-m pair polynomial table built by iterated backward shifts.

    Starts from the constant 1 at parameters (alpha+m, gamma+m) and
    applies m times the map

        P |-> v (u + a') P(u, v-1; a'+1, g'+1) - u (v + g') P(u-1, v; a'+1, g'+1)

    with the parameters stepping down to (alpha, gamma).  The result
    must equal :func:`hahn_pair` exactly, with the same normalization.
    Boundary reads never occur: the coefficient of each shifted value
    vanishes at u = 0 resp. v = 0.
    """
    if m < 0:
        raise ValueError("degree m must be >= 0")
    alpha, gamma = R(alpha), R(gamma)
    lattice = Lattice(2, box)
    values = {pt: ONE for pt in lattice.points}
    for level in range(1, m + 1):
        al = alpha + m - level
        ga = gamma + m - level
        new = {}
        for (u, v) in lattice.points:
            acc = ZERO
            if v:
                acc += v * (u + al) * values[(u, v - 1)]
            if u:
                acc -= u * (v + ga) * values[(u - 1, v)]
            new[(u, v)] = acc
        values = new
    return LatticeFunction(lattice, tuple(values[pt] for pt in lattice.points))


def rodrigues_pair(i: int, m: int, params: HahnParams) -> LatticeFunction:
    """Backward-shift construction in sector i on the (u, v) box of size N."""
    if not 1 <= i <= params.n - 1:
        raise ValueError(f"sector index i = {i} outside [1, {params.n - 1}]")
    return pair_backward_table(m, params.a[i - 1], params.a_tail(i), params.N)
