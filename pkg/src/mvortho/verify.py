"""Identity verification harness.

Every check is exact: on the bounded families a pass requires the
defect to be exactly zero (no epsilon anywhere).  The only approximate
object in the package is the truncated Meixner box, and there the
tolerance is a rigorously computed tail bound, never an arbitrary
epsilon.  Checks are independent and share no mutable state, so they
may run concurrently.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from ._backend import R, ZERO, ONE
from .core import (
    HahnParams,
    KrawtchoukParams,
    Lattice,
    LatticeFunction,
    MeixnerParams,
    compositions,
    enumerate_degrees,
    family_lattice,
    tail_param,
    tail_sum,
)
from .linalg import rank
from .measures import (
    WeightTable,
    inner_product,
    meixner_weight,
    tail_power_sum,
    weight_table,
)
from .operators import (
    OperatorSpec,
    apply_operator,
    adjointness_defect,
    commutator_defect,
    degree_invariance_check,
    down_rate,
    exchange_coeff,
    up_rate,
)
from .polynomials import (
    eigenpoly,
    eigenpoly_table,
    eigenvalue,
    hahn,
    hahn_pair,
    km_pair,
    krawtchouk,
    meixner,
    multi_krawtchouk,
    multi_meixner,
    pair_backward_table,
    pair_product,
    rising_factorial,
)

PASS, FAIL, SKIP = "pass", "fail", "skipped"


@dataclass
class CheckReport:
    """Outcome of one verification: name, instance, status, exact defect."""

    name: str
    instance: str
    status: str
    max_defect: object = None
    wall_time: float = 0.0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self, with_timing: bool = False) -> dict:
        from .serialize import rational_str

        out = {
            "name": self.name,
            "instance": self.instance,
            "status": self.status,
            "max_defect": None if self.max_defect is None else rational_str(self.max_defect),
            "detail": self.detail,
        }
        if with_timing:
            out["wall_time"] = self.wall_time
        return out

    def text_row(self) -> str:
        from .serialize import rational_str

        defect = "-" if self.max_defect is None else rational_str(self.max_defect)
        if len(defect) > 24:
            defect = f"~{float(self.max_defect):.3e}"
        return (
            f"{self.status.upper():5s} {self.name:22s} {defect:>26s} "
            f"{self.wall_time:8.3f}s  {self.instance}"
            + (f"  [{self.detail}]" if self.detail else "")
        )


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def describe(params) -> str:
    from .serialize import rational_str

    a = ",".join(rational_str(v) for v in params.a)
    if isinstance(params, HahnParams):
        return f"hahn n={params.n} N={params.N} a=({a}) b={rational_str(params.b)}"
    if isinstance(params, KrawtchoukParams):
        return f"krawtchouk n={params.n} N={params.N} a=({a})"
    return f"meixner n={params.n} beta={rational_str(params.beta)} a=({a})"


def random_rational(rng: random.Random, max_part: int = 20):
    """Positive rational with numerator and denominator <= max_part."""
    return R(rng.randint(1, max_part), rng.randint(1, max_part))


def random_params(family: str, n: int, N: int | None = None, rng=None, seed: int = 0):
    """Generic small-rational parameter draw for a family."""
    if rng is None:
        rng = random.Random(seed)
    if family == "hahn":
        return HahnParams(
            tuple(random_rational(rng) for _ in range(n)), random_rational(rng), N
        )
    if family == "krawtchouk":
        return KrawtchoukParams(tuple(random_rational(rng) for _ in range(n)), N)
    if family == "meixner":
        # numerators <= 20 over a denominator large enough that |a| < 1
        a = tuple(R(rng.randint(1, 20), 40 * n) for _ in range(n))
        return MeixnerParams(a, R(rng.randint(1, 20), rng.randint(1, 10)))
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# measure-level checks


def normalization_check(params, xmax: int | None = None) -> CheckReport:
    """Bounded families: the weight sums to 1 exactly.  Meixner: partial
    sums increase with the box and the missing mass obeys the tail bound."""

    def body():
        if isinstance(params, MeixnerParams):
            X = 12 if xmax is None else xmax
            totals = [weight_table(params, xmax=x) for x in (X // 2, X)]
            if not totals[0].total < totals[1].total:
                return FAIL, totals[1].total - totals[0].total, "partial sums not increasing"
            w = totals[1]
            if w.normalized:
                missing = 1 - w.total
                if not (0 < missing <= w.tail_bound):
                    return FAIL, missing, "missing mass outside tail bound"
                return PASS, ZERO, f"1 - sum = {float(missing):.3e} <= bound {float(w.tail_bound):.3e}"
            return PASS, ZERO, "unnormalized weight (non-integer beta); monotone partial sums"
        w = weight_table(params)
        defect = abs(w.total - 1)
        return (PASS if defect == 0 else FAIL), defect, ""

    (status, defect, detail), dt = _timed(body)
    return CheckReport("normalization", describe(params), status, defect, dt, detail)


def compatibility_check(params, xmax: int | None = None) -> CheckReport:
    """Weight-ratio identity and the pairwise compatibility condition.

    W(x+e_j)/W(x) = B_j(x)/D_j(x+e_j) for all interior x and j, and the
    two-step ratio B_j/D_j * B_k/D_k is invariant under swapping j,k.
    """

    def body():
        w = weight_table(params, xmax=xmax)
        lattice = w.lattice
        n = params.n
        worst = ZERO
        for x in lattice.points:
            for j in range(n):
                yj = x[:j] + (x[j] + 1,) + x[j + 1 :]
                if yj not in lattice.index:
                    continue
                lhs = w(yj) * down_rate(params, yj, j)
                rhs = w(x) * up_rate(params, x, j)
                worst = max(worst, abs(lhs - rhs))
                for k in range(j + 1, n):
                    yk = x[:k] + (x[k] + 1,) + x[k + 1 :]
                    yjk = yj[:k] + (yj[k] + 1,) + yj[k + 1 :]
                    if yjk not in lattice.index:
                        continue
                    # B_j(x) B_k(x+e_j) / (D_j(x+e_j) D_k(x+e_j+e_k)) is
                    # symmetric in j,k; compare cross-multiplied.
                    lhs = (
                        up_rate(params, x, j)
                        * up_rate(params, yj, k)
                        * down_rate(params, yk, k)
                        * down_rate(params, yjk, j)
                    )
                    rhs = (
                        up_rate(params, x, k)
                        * up_rate(params, yk, j)
                        * down_rate(params, yj, j)
                        * down_rate(params, yjk, k)
                    )
                    worst = max(worst, abs(lhs - rhs))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    return CheckReport("compatibility", describe(params), status, worst, dt)


def boundary_safety_check(params) -> CheckReport:
    """Every coefficient that would multiply an out-of-lattice shift is 0."""

    def body():
        if isinstance(params, MeixnerParams):
            return SKIP, None, "semi-infinite lattice; frontier entries are flagged instead"
        lattice = family_lattice(params)
        n = params.n
        for x in lattice.points:
            if sum(x) == params.N:
                for j in range(n):
                    if up_rate(params, x, j) != 0:
                        return FAIL, up_rate(params, x, j), f"up rate nonzero at {x}"
            for j in range(n):
                if x[j] == 0:
                    if down_rate(params, x, j) != 0:
                        return FAIL, down_rate(params, x, j), f"down rate nonzero at {x}"
                    for k in range(n):
                        if k != j and exchange_coeff(params, x, j, k) != 0:
                            return FAIL, exchange_coeff(params, x, j, k), f"exchange nonzero at {x}"
        return PASS, ZERO, ""

    (status, defect, detail), dt = _timed(body)
    return CheckReport("boundary-safety", describe(params), status, defect, dt, detail)


# ---------------------------------------------------------------------------
# operator-level checks


def all_operator_specs(params) -> list[OperatorSpec]:
    specs = [OperatorSpec(params, "total"), OperatorSpec(params, "single")]
    specs += [OperatorSpec(params, "exchange", i) for i in range(1, params.n)]
    return specs


def adjointness_check(params, xmax: int | None = None) -> CheckReport:
    def body():
        w = weight_table(params, xmax=xmax)
        worst = ZERO
        for spec in all_operator_specs(params):
            worst = max(worst, adjointness_defect(spec, w))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    return CheckReport("adjointness", describe(params), status, worst, dt)


def commutator_check(params, xmax: int | None = None) -> CheckReport:
    def body():
        lattice = family_lattice(params, xmax=xmax)
        specs = all_operator_specs(params)
        worst = ZERO
        for s1, s2 in combinations(specs, 2):
            worst = max(worst, commutator_defect(s1, s2, lattice))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    detail = "interior-restricted rows" if isinstance(params, MeixnerParams) else ""
    return CheckReport("commutators", describe(params), status, worst, dt, detail)


def degree_invariance_report(params, M: int, xmax: int | None = None) -> CheckReport:
    def body():
        lattice = family_lattice(params, xmax=xmax)
        ok = all(
            degree_invariance_check(spec, M, lattice)
            for spec in all_operator_specs(params)
        )
        return (PASS if ok else FAIL), (ZERO if ok else None)

    (status, defect), dt = _timed(body)
    return CheckReport(
        "degree-invariance", f"{describe(params)} M={M}", status, defect, dt
    )


# ---------------------------------------------------------------------------
# eigen checks


def residual_defect(op: OperatorSpec, table: LatticeFunction, eig) -> tuple:
    """Max |(H f)(x) - eig * f(x)| over points with a defined image."""
    image = apply_operator(op, table)
    worst = ZERO
    checked = 0
    for fv, gv in zip(table.values, image.values):
        if gv is None:
            continue
        checked += 1
        d = abs(gv - eig * fv)
        if d > worst:
            worst = d
    return worst, checked


def eigen_check(params, kind: str, m, index: int | None = None,
                xmax: int | None = None) -> CheckReport:
    """Residual of the eigenvalue equation for P_m under one operator."""

    def body():
        lattice = family_lattice(params, xmax=xmax)
        table = eigenpoly_table(m, params, lattice)
        op = OperatorSpec(params, kind, index)
        eig = eigenvalue(params, kind, index, m)
        worst, checked = residual_defect(op, table, eig)
        from .serialize import rational_str

        detail = f"eigenvalue {rational_str(eig)} on {checked} points"
        return (PASS if worst == 0 else FAIL), worst, detail

    (status, worst, detail), dt = _timed(body)
    op_label = kind if kind != "exchange" else f"exchange{index}"
    inst = f"{describe(params)} m={tuple(m)} op={op_label}"
    return CheckReport("eigen", inst, status, worst, dt, detail)


def eigen_suite(params, m_max: int, xmax: int | None = None) -> list[CheckReport]:
    """Eigen residuals for every |m| <= m_max and every operator."""
    reports = []
    lattice = family_lattice(params, xmax=xmax)
    specs = all_operator_specs(params)
    t0 = time.perf_counter()
    worst = ZERO
    count = 0
    for m in enumerate_degrees(params.n, m_max):
        table = eigenpoly_table(m, params, lattice)
        for spec in specs:
            eig = eigenvalue(params, spec.kind, spec.index, m)
            defect, _ = residual_defect(spec, table, eig)
            worst = max(worst, defect)
            count += 1
    dt = time.perf_counter() - t0
    inst = f"{describe(params)} all |m|<={m_max}"
    reports.append(
        CheckReport(
            "eigen-suite", inst, PASS if worst == 0 else FAIL, worst, dt,
            f"{count} (m, operator) pairs",
        )
    )
    reports.append(eigen_degeneracy_check(params, m_max))
    return reports


def eigen_degeneracy_check(params, m_max: int) -> CheckReport:
    """All P_m of equal total degree share the total-operator eigenvalue."""

    def body():
        by_degree: dict[int, set] = {}
        for m in enumerate_degrees(params.n, m_max):
            by_degree.setdefault(sum(m), set()).add(
                eigenvalue(params, "total", None, m)
            )
        bad = [d for d, vals in by_degree.items() if len(vals) != 1]
        return (PASS if not bad else FAIL), (ZERO if not bad else None)

    (status, defect), dt = _timed(body)
    return CheckReport(
        "eigen-degeneracy", f"{describe(params)} |m|<={m_max}", status, defect, dt
    )


# ---------------------------------------------------------------------------
# type-one checks


def type_one_value(params, J, m: int, x) -> object:
    """Single-variable polynomial in the subset-sum variable x_J."""
    xJ = sum(x[j - 1] for j in J)
    aJ = sum((params.a[j - 1] for j in J), ZERO)
    A = params.a_total
    if isinstance(params, HahnParams):
        return hahn(m, xJ, aJ, A + params.b - aJ, params.N)
    if isinstance(params, KrawtchoukParams):
        return krawtchouk(m, xJ, aJ / (1 + A), params.N)
    return meixner(m, xJ, aJ / (1 - A + aJ), params.beta)


def type_one_eigenvalue(params, m: int):
    if isinstance(params, HahnParams):
        return R(m) * (m + params.a_total + params.b - 1)
    if isinstance(params, KrawtchoukParams):
        return R(m) * (params.a_total + 1)
    return R(m) * (1 - params.a_total)


def type_one_check(params, J, m: int, xmax: int | None = None) -> CheckReport:
    """H_total on the subset polynomial: residual must vanish exactly."""
    J = tuple(sorted(set(J)))
    if not J or any(not 1 <= j <= params.n for j in J):
        raise ValueError(f"J must be a nonempty subset of 1..{params.n}")

    def body():
        lattice = family_lattice(params, xmax=xmax)
        table = LatticeFunction.from_callable(
            lattice, lambda x: type_one_value(params, J, m, x)
        )
        op = OperatorSpec(params, "total")
        worst, _ = residual_defect(op, table, type_one_eigenvalue(params, m))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    inst = f"{describe(params)} J={set(J)} m={m}"
    return CheckReport("type-one", inst, status, worst, dt)


def type_one_suite(params, m_max: int, xmax: int | None = None) -> list[CheckReport]:
    reports = []
    sites = range(1, params.n + 1)
    for size in sites:
        for J in combinations(sites, size):
            for m in range(0, m_max + 1):
                reports.append(type_one_check(params, J, m, xmax=xmax))
    reports.append(same_degree_overlap_check(params, max(1, min(m_max, 2)), xmax=xmax))
    return reports


def same_degree_overlap_check(params, m: int, xmax: int | None = None) -> CheckReport:
    """Same-degree subset polynomials are NOT orthogonal in general.

    Records at least one pair J != J' of equal degree with a nonzero
    inner product; failing to find one on a generic instance is a FAIL.
    """

    def body():
        w = weight_table(params, xmax=xmax)
        lattice = w.lattice
        sites = range(1, params.n + 1)
        subsets = [J for size in sites for J in combinations(sites, size)]
        tables = {
            J: LatticeFunction.from_callable(
                lattice, lambda x, J=J: type_one_value(params, J, m, x)
            )
            for J in subsets
        }
        for J1, J2 in combinations(subsets, 2):
            if inner_product(tables[J1], tables[J2], w) != 0:
                return PASS, f"({set(J1)}, {set(J2)}) overlap at degree {m}"
        return FAIL, "all same-degree pairs orthogonal (unexpected)"

    (status, detail), dt = _timed(body)
    return CheckReport(
        "type-one-overlap", f"{describe(params)} m={m}", status, None, dt, detail
    )


# ---------------------------------------------------------------------------
# shift and recursion identities


def sv_shift_check(a, b, N: int, deg_max: int) -> CheckReport:
    """Single-variable forward and backward shift relations.

    Forward:  H_m(x) - H_m(x+1) = m(m+a+b-1)/(aN) H_{m-1}(x; a+1, b+1, N-1)
    Backward: (N-x)(x+a) H_m(x; a+1,b+1,N-1) - x(N-x+b) H_m(x-1; a+1,b+1,N-1)
              = aN H_{m+1}(x; a, b, N)
    """
    a, b = R(a), R(b)

    def body():
        worst = ZERO
        for m in range(deg_max + 1):
            for x in range(N + 1):
                if m >= 1:
                    lhs = hahn(m, x, a, b, N) - hahn(m, x + 1, a, b, N)
                    rhs = (
                        R(m) * (m + a + b - 1) / (a * N)
                        * hahn(m - 1, x, a + 1, b + 1, N - 1)
                    )
                    worst = max(worst, abs(lhs - rhs))
                lhs = (N - x) * (x + a) * hahn(m, x, a + 1, b + 1, N - 1) - R(x) * (
                    N - x + b
                ) * hahn(m, x - 1, a + 1, b + 1, N - 1)
                rhs = a * N * hahn(m + 1, x, a, b, N)
                worst = max(worst, abs(lhs - rhs))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    from .serialize import rational_str

    inst = f"hahn-1v a={rational_str(a)} b={rational_str(b)} N={N} m<={deg_max}"
    return CheckReport("sv-shifts", inst, status, worst, dt)


def sv_difference_equation_check(a, b, N: int, deg_max: int) -> CheckReport:
    """(N-x)(x+a)(H_m(x)-H_m(x+1)) + x(N-x+b)(H_m(x)-H_m(x-1)) = m(m+a+b-1)H_m."""
    a, b = R(a), R(b)

    def body():
        worst = ZERO
        for m in range(deg_max + 1):
            for x in range(N + 1):
                h = lambda t: hahn(m, t, a, b, N)
                lhs = (N - x) * (x + a) * (h(x) - h(x + 1)) + R(x) * (N - x + b) * (
                    h(x) - h(x - 1)
                )
                worst = max(worst, abs(lhs - R(m) * (m + a + b - 1) * h(x)))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    return CheckReport("sv-difference-eq", f"hahn-1v N={N} m<={deg_max}", status, worst, dt)


def pair_shift_check(alpha, gamma, deg_max: int, box: int, family: str) -> CheckReport:
    """Forward/backward shift relations for the pair polynomials."""
    alpha, gamma = R(alpha), R(gamma)

    def body():
        worst = ZERO
        for m in range(deg_max + 1):
            for u in range(box + 1):
                for v in range(box + 1 - u):
                    if family == "hahn":
                        if m >= 1:
                            lhs = hahn_pair(m, u, v + 1, alpha, gamma) - hahn_pair(
                                m, u + 1, v, alpha, gamma
                            )
                            rhs = (
                                R(m) * (m + alpha + gamma - 1)
                                * hahn_pair(m - 1, u, v, alpha + 1, gamma + 1)
                            )
                            worst = max(worst, abs(lhs - rhs))
                        lhs = R(v) * (u + alpha) * hahn_pair(
                            m, u, v - 1, alpha + 1, gamma + 1
                        ) - R(u) * (v + gamma) * hahn_pair(
                            m, u - 1, v, alpha + 1, gamma + 1
                        )
                        rhs = hahn_pair(m + 1, u, v, alpha, gamma)
                        worst = max(worst, abs(lhs - rhs))
                    else:
                        if m >= 1:
                            lhs = km_pair(m, u, v + 1, alpha, gamma) - km_pair(
                                m, u + 1, v, alpha, gamma
                            )
                            rhs = (
                                -R(m) * (alpha + gamma) / alpha
                                * km_pair(m - 1, u, v, alpha, gamma)
                            )
                            worst = max(worst, abs(lhs - rhs))
                        lhs = R(v) * alpha * km_pair(m, u, v - 1, alpha, gamma) - R(
                            u
                        ) * gamma * km_pair(m, u - 1, v, alpha, gamma)
                        rhs = -alpha * km_pair(m + 1, u, v, alpha, gamma)
                        worst = max(worst, abs(lhs - rhs))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    from .serialize import rational_str

    inst = (
        f"{family}-pair alpha={rational_str(alpha)} gamma={rational_str(gamma)} "
        f"m<={deg_max} box={box}"
    )
    return CheckReport("pair-shifts", inst, status, worst, dt)


def pair_recursion_check(alpha, gamma, deg_max: int, box: int, family: str) -> CheckReport:
    """Forward/backward three-term recursions for the pair polynomials."""
    alpha, gamma = R(alpha), R(gamma)

    def body():
        worst = ZERO
        for m in range(deg_max + 1):
            for u in range(box + 1):
                for v in range(box + 1 - u):
                    if family == "hahn":
                        P = lambda uu, vv: hahn_pair(m, uu, vv, alpha, gamma)
                        fwd = (u + alpha) * P(u + 1, v) + (v + gamma) * P(u, v + 1)
                        worst = max(
                            worst, abs(fwd - (u + v + alpha + gamma + m) * P(u, v))
                        )
                    else:
                        P = lambda uu, vv: km_pair(m, uu, vv, alpha, gamma)
                        fwd = alpha * P(u + 1, v) + gamma * P(u, v + 1)
                        worst = max(worst, abs(fwd - (alpha + gamma) * P(u, v)))
                    bwd = R(u) * P(u - 1, v) + R(v) * P(u, v - 1)
                    worst = max(worst, abs(bwd - (R(u + v) - m) * P(u, v)))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    inst = f"{family}-pair m<={deg_max} box={box}"
    return CheckReport("pair-recursions", inst, status, worst, dt)


def generalized_recursion_check(params, i: int, m, xmax: int | None = None) -> CheckReport:
    """Forward/backward recursions for the chained pair product.

    With R(x) the product of pair factors i..n-1 (degree-shifted) and
    sums over k = i..n (1-based sites):

        Hahn:  sum (x_k+a_k) R(x+e_k) = (sum (x_k+a_k) + sum_{k>=i} m_k) R(x)
        K/M:   sum a_k R(x+e_k)       = (sum a_k) R(x)
        both:  sum x_k R(x-e_k)       = (sum x_k - sum_{k>=i} m_k) R(x)
    """

    def body():
        lattice = family_lattice(params, xmax=xmax)
        n = params.n
        hahn_family = isinstance(params, HahnParams)
        deg = sum(m[i:])
        worst = ZERO
        for x in lattice.points:
            base = pair_product(i, m, x, params)
            fwd = ZERO
            bwd = ZERO
            coeff_fwd = ZERO
            for k in range(i, n + 1):
                xk = x[k - 1]
                ak = params.a[k - 1]
                up = x[: k - 1] + (xk + 1,) + x[k:]
                dn = x[: k - 1] + (xk - 1,) + x[k:]
                cf = (xk + ak) if hahn_family else ak
                coeff_fwd += cf
                fwd += cf * pair_product(i, m, up, params)
                if xk:
                    bwd += xk * pair_product(i, m, dn, params)
            if hahn_family:
                worst = max(worst, abs(fwd - (coeff_fwd + deg) * base))
            else:
                worst = max(worst, abs(fwd - coeff_fwd * base))
            tailx = sum(x[i - 1 :])
            worst = max(worst, abs(bwd - (tailx - deg) * base))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    inst = f"{describe(params)} i={i} m={tuple(m)}"
    return CheckReport("generalized-recursions", inst, status, worst, dt)


def rodrigues_check(m_max: int, alpha, gamma, box: int) -> CheckReport:
    """Backward-shift chain reproduces the closed-form pair polynomial."""

    def body():
        worst = ZERO
        for m in range(m_max + 1):
            built = pair_backward_table(m, alpha, gamma, box)
            for (u, v), got in zip(built.lattice.points, built.values):
                want = hahn_pair(m, u, v, alpha, gamma)
                worst = max(worst, abs(got - want))
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    from .serialize import rational_str

    inst = f"alpha={rational_str(R(alpha))} gamma={rational_str(R(gamma))} m<={m_max} box={box}"
    return CheckReport("rodrigues", inst, status, worst, dt)


def glue_check(params, i: int, m_i: int, m_im1: int, xmax: int | None = None) -> CheckReport:
    """Adjacent pair factors glue into an eigenfunction of exchange(i-1).

    The lower factor is evaluated at (x_{i-1}, x_{>i-1} - m_i) and, for
    Hahn, with its tail parameter shifted to a_{>i-1} + 2 m_i; the glued
    eigenvalue adds the degrees.
    """
    if not 2 <= i <= params.n - 1:
        raise ValueError(f"glue index i = {i} outside [2, {params.n - 1}]")

    def body():
        lattice = family_lattice(params, xmax=xmax)
        hahn_family = isinstance(params, HahnParams)

        def value(x):
            u_hi, v_hi = x[i - 1], tail_sum(x, i)
            u_lo, v_lo = x[i - 2], tail_sum(x, i - 1) - m_i
            if hahn_family:
                hi = hahn_pair(m_i, u_hi, v_hi, params.a[i - 1], params.a_tail(i))
                lo = hahn_pair(
                    m_im1, u_lo, v_lo, params.a[i - 2], params.a_tail(i - 1) + 2 * m_i
                )
            else:
                hi = km_pair(m_i, u_hi, v_hi, params.a[i - 1], params.a_tail(i))
                lo = km_pair(m_im1, u_lo, v_lo, params.a[i - 2], params.a_tail(i - 1))
            return hi * lo

        table = LatticeFunction.from_callable(lattice, value)
        deg = m_i + m_im1
        block = params.a[i - 2] + params.a_tail(i - 1)
        if isinstance(params, HahnParams):
            eig = R(deg) * (deg + block - 1)
        elif isinstance(params, KrawtchoukParams):
            eig = R(deg) * block
        else:
            eig = -R(deg) * block
        op = OperatorSpec(params, "exchange", i - 1)
        worst, _ = residual_defect(op, table, eig)
        return (PASS if worst == 0 else FAIL), worst

    (status, worst), dt = _timed(body)
    inst = f"{describe(params)} i={i} degrees=({m_i},{m_im1})"
    return CheckReport("glue", inst, status, worst, dt)


# ---------------------------------------------------------------------------
# Gram / orthogonality


def _uni_coeffs(values):
    """Monomial coefficients of the poly through (0, v0) .. (d, vd)."""
    d = len(values) - 1
    dd = [R(v) for v in values]
    # divided differences on nodes 0..d (in place)
    for level in range(1, d + 1):
        for idx in range(d, level - 1, -1):
            dd[idx] = (dd[idx] - dd[idx - 1]) / level
    coeffs = [dd[d]]
    for k in range(d - 1, -1, -1):
        # multiply by (x - k), then add dd[k]
        coeffs = [ZERO] + coeffs
        coeffs = [c - k * nxt for c, nxt in zip(coeffs, coeffs[1:] + [ZERO])]
        coeffs[0] += dd[k]
    return coeffs


def poly_coefficients(fn, nvars: int, deg: int) -> dict:
    """Exact monomial coefficients of a polynomial evaluator.

    Interpolates on the grid {0..deg}^nvars, one variable at a time.
    """
    if nvars == 1:
        cs = _uni_coeffs([fn((t,)) for t in range(deg + 1)])
        return {(e,): c for e, c in enumerate(cs) if c != 0}
    slices = [
        poly_coefficients(lambda rest, t=t: fn((t,) + rest), nvars - 1, deg)
        for t in range(deg + 1)
    ]
    keys = set()
    for s in slices:
        keys.update(s.keys())
    out = {}
    for key in keys:
        for e, c in enumerate(_uni_coeffs([s.get(key, ZERO) for s in slices])):
            if c != 0:
                out[(e,) + key] = c
    return out


def coeff_degree_sums(coeffs: dict, deg: int):
    """C_j = sum of |coefficients| of total degree j, for j = 0..deg."""
    out = [ZERO] * (deg + 1)
    for exps, c in coeffs.items():
        out[sum(exps)] += abs(c)
    return out


def meixner_product_tail_bound(params, coeff_p: dict, coeff_q: dict,
                               xmax: int, extend: int = 40):
    """Rigorous bound on |sum_{|x| > xmax} p(x) q(x) W(x)|.

    Exact shell sums of |p q| W are accumulated for xmax < s <= xmax+extend;
    beyond that the product is dominated by sum_j C_j s^j (C_j from the
    absolute coefficients of p*q) and the remaining series has an exact
    closed form for integral beta, or a geometric bound otherwise.
    """
    n = params.n
    # |p*q| coefficient degree sums
    prod: dict = {}
    for e1, c1 in coeff_p.items():
        for e2, c2 in coeff_q.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            prod[key] = prod.get(key, ZERO) + c1 * c2
    deg = max((sum(e) for e in prod), default=0)
    Cj = coeff_degree_sums(prod, deg)

    head = ZERO
    for s in range(xmax + 1, xmax + extend + 1):
        for x in compositions(s, n):
            pv = _eval_coeffs(coeff_p, x)
            qv = _eval_coeffs(coeff_q, x)
            head += abs(pv * qv) * meixner_weight(x, params)

    S = xmax + extend
    A = params.a_total
    tail = ZERO
    if params.integral_beta:
        from ._backend import as_integer

        beta = as_integer(params.beta)
        poly = [ONE]  # coefficients of (beta)_s / s! = prod_{r<beta} (s+r)/r!
        for r in range(1, beta):
            nxt = [ZERO] * (len(poly) + 1)
            for d, c in enumerate(poly):
                nxt[d] += c * r
                nxt[d + 1] += c
            poly = nxt
        fact = R(math.factorial(beta - 1))
        for j, C in enumerate(Cj):
            if C == 0:
                continue
            for d, c in enumerate(poly):
                tail += C * (c / fact) * tail_power_sum(A, S, j + d)
    else:
        for j, C in enumerate(Cj):
            if C == 0:
                continue
            # term ratio <= |a| * max(1, (beta+s)/(s+1)) * ((s+1)/s)^j, decreasing
            q = A * max(ONE, (params.beta + S + 1) / (S + 2)) * (R(S + 2) / (S + 1)) ** j
            if q >= 1:
                raise ValueError("extension too small for a geometric tail bound")
            first = (
                rising_factorial(params.beta, S + 1)
                * A ** (S + 1)
                / math.factorial(S + 1)
                * R(S + 1) ** j
            )
            tail += C * first / (1 - q)
    norm = ONE
    if params.integral_beta:
        from .measures import meixner_normalization

        norm = meixner_normalization(params)
    return head + tail * norm


def _eval_coeffs(coeffs: dict, x):
    out = ZERO
    for exps, c in coeffs.items():
        term = c
        for xi, e in zip(x, exps):
            term *= R(xi) ** e
        out += term
    return out


@dataclass
class GramResult:
    degrees: tuple
    matrix: list
    report: CheckReport
    tolerance: object = None
    bounds: list = field(default_factory=list)


def gram_check(params, m_max: int, xmax: int | None = None,
               extend: int = 40) -> GramResult:
    """Gram matrix of {P_m : |m| <= m_max} under the family weight.

    Bounded families: every off-diagonal entry must be exactly zero and
    every diagonal positive.  Meixner: off-diagonal entries must lie
    within their per-pair truncation-tail bounds; the reported tolerance
    is the largest such bound.
    """
    t0 = time.perf_counter()
    if not isinstance(params, MeixnerParams) and m_max > params.N:
        raise ValueError("need m_max <= N")
    w = weight_table(params, xmax=xmax)
    lattice = w.lattice
    degrees = enumerate_degrees(params.n, m_max)
    tables = [eigenpoly_table(m, params, lattice) for m in degrees]
    size = len(degrees)
    G = [[ZERO] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            val = inner_product(tables[i], tables[j], w)
            G[i][j] = val
            G[j][i] = val

    status = PASS
    detail = ""
    tolerance = None
    bounds: list = []
    worst = ZERO
    if isinstance(params, MeixnerParams):
        coeffs = [
            poly_coefficients(lambda x, m=m: eigenpoly(m, x, params), params.n, m_max)
            for m in degrees
        ]
        tolerance = ZERO
        for i in range(size):
            for j in range(i + 1, size):
                bound = meixner_product_tail_bound(
                    params, coeffs[i], coeffs[j], lattice.bound, extend
                )
                bounds.append(((degrees[i], degrees[j]), bound))
                tolerance = max(tolerance, bound)
                worst = max(worst, abs(G[i][j]))
                if abs(G[i][j]) > bound:
                    status = FAIL
                    detail = f"off-diagonal {degrees[i]},{degrees[j]} beyond tail bound"
        if status == PASS:
            detail = (
                f"max |offdiag| {float(worst):.3e} within tolerance {float(tolerance):.3e}"
            )
    else:
        for i in range(size):
            for j in range(size):
                if i != j and G[i][j] != 0:
                    status = FAIL
                    worst = max(worst, abs(G[i][j]))
    for i in range(size):
        if G[i][i] <= 0:
            status = FAIL
            detail = f"non-positive diagonal at {degrees[i]}"
    dt = time.perf_counter() - t0
    report = CheckReport(
        "gram", f"{describe(params)} |m|<={m_max}", status, worst, dt, detail
    )
    return GramResult(degrees, G, report, tolerance, bounds)


def completeness_check(params, xmax: int | None = None) -> CheckReport:
    """#{m : |m| <= N} equals |lattice| and the Gram matrix is nonsingular."""

    def body():
        if isinstance(params, MeixnerParams):
            return SKIP, None, "unbounded degree set on the semi-infinite lattice"
        lattice = family_lattice(params)
        degrees = enumerate_degrees(params.n, params.N)
        if len(degrees) != lattice.size:
            return FAIL, None, "degree count differs from lattice size"
        result = gram_check(params, params.N)
        r = rank(result.matrix)
        if r != lattice.size:
            return FAIL, None, f"Gram rank {r} < {lattice.size}"
        return PASS, ZERO, f"count {lattice.size}, Gram rank {r}"

    (status, defect, detail), dt = _timed(body)
    return CheckReport("completeness", describe(params), status, defect, dt, detail)


def pair_orthogonality_report(params, m: int, xmax: int | None = None) -> CheckReport:
    """Literal cross-sector orthogonality of the raw pair polynomials.

    Tests (P_m in sector i, P_m in sector j) under the full weight for
    every i < j and reports the outcome.
    """

    def body():
        w = weight_table(params, xmax=xmax)
        lattice = w.lattice
        hahn_family = isinstance(params, HahnParams)

        def sector_value(i, x):
            u, v = x[i - 1], tail_sum(x, i)
            if hahn_family:
                return hahn_pair(m, u, v, params.a[i - 1], params.a_tail(i))
            return km_pair(m, u, v, params.a[i - 1], params.a_tail(i))

        tables = {
            i: LatticeFunction.from_callable(lattice, lambda x, i=i: sector_value(i, x))
            for i in range(1, params.n)
        }
        worst = ZERO
        status = PASS
        for i, j in combinations(range(1, params.n), 2):
            val = abs(inner_product(tables[i], tables[j], w))
            worst = max(worst, val)
            if isinstance(params, MeixnerParams):
                coeff_i = poly_coefficients(
                    lambda pt, i=i: sector_value(i, pt), params.n, m
                )
                coeff_j = poly_coefficients(
                    lambda pt, j=j: sector_value(j, pt), params.n, m
                )
                bound = meixner_product_tail_bound(
                    params, coeff_i, coeff_j, lattice.bound
                )
                if val > bound:
                    status = FAIL
            elif val != 0:
                status = FAIL
        detail = (
            "within truncation tail bounds"
            if isinstance(params, MeixnerParams)
            else "full-weight inner product"
        )
        return status, worst, detail

    (status, worst, detail), dt = _timed(body)
    return CheckReport(
        "pair-orthogonality", f"{describe(params)} m={m}", status, worst, dt, detail
    )


# ---------------------------------------------------------------------------
# limit transitions


def _limit_protocol(deviations, t_values) -> tuple:
    """First-order-in-1/t guard: each step must shrink by t_{k+1}/(2 t_k)."""
    for k in range(len(deviations) - 1):
        d0, d1 = abs(deviations[k]), abs(deviations[k + 1])
        if d0 == 0 and d1 == 0:
            continue
        # |d1| <= |d0| * 2 t_k / t_{k+1}, exactly in rationals
        if d1 * R(t_values[k + 1]) > 2 * d0 * R(t_values[k]):
            return FAIL, max(abs(d) for d in deviations)
    return PASS, abs(deviations[-1])


def rescaled_hahn_limit_value(m, x, a, scale, N, target: str, beta=None):
    """Multivariate Hahn value at blown-up parameters, rescaled per factor.

    Krawtchouk target: a_j -> a_j t, b = t; Meixner target: a_j -> -a_j t,
    b = t, N -> -beta.  Each pair factor is divided by (-1)^{m_i} (alpha_t)_{m_i},
    which keeps it finite and oriented like the limit family's factor.
    """
    t = R(scale)
    n = len(a)
    sign = 1 if target == "krawtchouk" else -1
    A = sum((R(v) for v in a), ZERO)
    s1 = sum(m[1:])
    val = ONE
    for i in range(1, n):
        shift = sum(m[i + 1 :])
        u = x[i - 1]
        v = tail_sum(x, i) - shift
        alpha_t = sign * R(a[i - 1]) * t
        gamma_t = sign * tail_param(a, i) * t + 2 * shift
        fac = hahn_pair(m[i], u, v, alpha_t, gamma_t)
        den = rising_factorial(alpha_t, m[i])
        if m[i] % 2:
            den = -den
        val *= fac / den
    if target == "krawtchouk":
        radial = hahn(m[0], sum(x) - s1, A * t + 2 * s1, t, R(N) - s1)
    else:
        radial = hahn(m[0], sum(x) - s1, -A * t + 2 * s1, t, -R(beta) - s1)
    return val * radial


def limit_check_krawtchouk(t_values, m, x, a, N: int) -> CheckReport:
    """Hahn -> Krawtchouk limit at increasing scales t."""

    def body():
        params = KrawtchoukParams(tuple(R(v) for v in a), N)
        target = multi_krawtchouk(m, x, params)
        devs = [
            rescaled_hahn_limit_value(m, x, params.a, t, N, "krawtchouk") - target
            for t in t_values
        ]
        return _limit_protocol(devs, t_values)

    (status, worst), dt = _timed(body)
    inst = f"krawtchouk-limit n={len(a)} N={N} m={tuple(m)} x={tuple(x)} t={list(t_values)}"
    return CheckReport("limit", inst, status, worst, dt)


def limit_check_meixner(t_values, m, x, a, beta) -> CheckReport:
    """Hahn -> Meixner limit at increasing scales t."""

    def body():
        params = MeixnerParams(tuple(R(v) for v in a), R(beta))
        target = multi_meixner(m, x, params)
        devs = [
            rescaled_hahn_limit_value(m, x, params.a, t, None, "meixner", beta=beta)
            - target
            for t in t_values
        ]
        return _limit_protocol(devs, t_values)

    (status, worst), dt = _timed(body)
    inst = f"meixner-limit n={len(a)} beta={beta} m={tuple(m)} x={tuple(x)} t={list(t_values)}"
    return CheckReport("limit", inst, status, worst, dt)


def limit_suite(family: str, params, count: int = 3, seed: int = 0,
                t_values=(100, 10_000, 1_000_000), xmax: int = 8) -> list[CheckReport]:
    """Random (m, x) draws for the limit transition of one family."""
    rng = random.Random(seed)
    reports = []
    n = params.n
    for _ in range(count):
        m = tuple(rng.randint(0, 2) for _ in range(n))
        if family == "krawtchouk":
            x = _random_point(rng, n, params.N)
            reports.append(limit_check_krawtchouk(t_values, m, x, params.a, params.N))
        else:
            x = _random_point(rng, n, xmax)
            reports.append(limit_check_meixner(t_values, m, x, params.a, params.beta))
    return reports


def _random_point(rng, n: int, bound: int):
    while True:
        x = tuple(rng.randint(0, bound) for _ in range(n))
        if sum(x) <= bound:
            return x


# ---------------------------------------------------------------------------
# the suite


def run_suite(params, m_max: int | None = None, xmax: int | None = None,
              seed: int = 0) -> list[CheckReport]:
    """Run the whole battery for one parameter bundle, in a fixed order.

    Returns every report; overall failure is any report with status FAIL.
    """
    rng = random.Random(seed)
    meixner = isinstance(params, MeixnerParams)
    if meixner and xmax is None:
        xmax = 12
    if m_max is None:
        m_max = 3 if meixner else min(params.N, 3)

    reports: list[CheckReport] = []
    reports.append(normalization_check(params, xmax=xmax))
    reports.append(compatibility_check(params, xmax=xmax))
    reports.append(boundary_safety_check(params))
    reports.append(adjointness_check(params, xmax=xmax))
    reports.append(commutator_check(params, xmax=xmax))
    M = min(2, m_max) if meixner else min(params.N, 2)
    reports.append(degree_invariance_report(params, M, xmax=xmax))
    reports.extend(eigen_suite(params, m_max, xmax=xmax))
    reports.extend(type_one_suite(params, min(m_max, 3), xmax=xmax))

    shift_deg = min(5, m_max + 2)
    box = min(params.N, 6) if not meixner else min(xmax, 6)
    if isinstance(params, HahnParams):
        # the backward shift references degree m+1 at bound N-1
        sv_deg = min(shift_deg, params.N - 2)
        reports.append(sv_shift_check(params.a[0], params.b, params.N, sv_deg))
        reports.append(sv_difference_equation_check(params.a[0], params.b, params.N, sv_deg))
        reports.append(
            pair_shift_check(params.a[0], params.a_tail(1), shift_deg, box, "hahn")
        )
        reports.append(
            pair_recursion_check(params.a[0], params.a_tail(1), shift_deg, box, "hahn")
        )
    else:
        reports.append(
            pair_shift_check(params.a[0], params.a_tail(1), shift_deg, box, "km")
        )
        reports.append(
            pair_recursion_check(params.a[0], params.a_tail(1), shift_deg, box, "km")
        )
    for i in (1, params.n - 1):
        m = tuple(0 for _ in range(params.n))
        m = m[:1] + tuple(rng.randint(0, 2) for _ in range(params.n - 1))
        reports.append(generalized_recursion_check(params, i, m, xmax=xmax))

    if isinstance(params, HahnParams):
        for _ in range(3):
            alpha, gamma = random_rational(rng), random_rational(rng)
            reports.append(rodrigues_check(min(m_max + 2, 6), alpha, gamma, box))
    if params.n >= 3:
        for mi, mim1 in ((1, 1), (2, 1), (1, 2)):
            reports.append(glue_check(params, 2, mi, mim1, xmax=xmax))
    else:
        reports.append(
            CheckReport("glue", describe(params), SKIP, None, 0.0,
                        "adjacent sectors need n >= 3")
        )
    gram_mmax = min(m_max, 1) if meixner else m_max
    reports.append(gram_check(params, gram_mmax, xmax=xmax).report)
    reports.append(pair_orthogonality_report(params, 1, xmax=xmax))
    reports.append(completeness_check(params))
    return reports
