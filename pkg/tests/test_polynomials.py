import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvortho import (
    R,
    HahnParams,
    KrawtchoukParams,
    MeixnerParams,
    eigenpoly,
    eigenvalue,
    hahn,
    hahn_pair,
    km_pair,
    krawtchouk,
    meixner,
    multi_hahn,
    multi_krawtchouk,
    multi_meixner,
    pair_backward_table,
    pair_product,
    rising_factorial,
    rodrigues_pair,
)
from mvortho.core import enumerate_lattice

small_pos = st.integers(1, 10).flatmap(
    lambda p: st.integers(1, 10).map(lambda q: R(p, q))
)


def brute_hahn(m, x, a, b, N):
    """Independent term-by-term oracle for the terminating 3F2 sum."""
    total = R(0)
    for k in range(m + 1):
        den = rising_factorial(a, k) * rising_factorial(-R(N), k) * math.factorial(k)
        if den == 0:
            num = (
                rising_factorial(-R(m), k)
                * rising_factorial(R(m) + a + b - 1, k)
                * rising_factorial(-R(x), k)
            )
            if num == 0:
                continue
            raise ZeroDivisionError
        total += (
            rising_factorial(-R(m), k)
            * rising_factorial(R(m) + a + b - 1, k)
            * rising_factorial(-R(x), k)
        ) / den
    return total


class TestSingleVariable:
    def test_degree_zero(self):
        assert hahn(0, 5, R(1), R(2), 7) == 1
        assert krawtchouk(0, 3, R(1, 2), 7) == 1
        assert meixner(0, 3, R(1, 2), R(2)) == 1

    def test_hahn_degree_one_closed_form(self):
        a, b, N = R(3, 2), R(5, 4), 7
        for x in range(8):
            assert hahn(1, x, a, b, N) == 1 - (a + b) * x / (a * N)

    def test_hahn_frozen_value(self):
        # direct term-by-term evaluation: 1 + (-2)(3)(-1)/(1*(-3)) + 0 = -1
        assert hahn(2, 1, R(1), R(1), 3) == -1

    @given(st.integers(0, 4), st.integers(0, 6), small_pos, small_pos)
    @settings(max_examples=60, deadline=None)
    def test_hahn_matches_brute_force(self, m, x, a, b):
        N = 8
        assert hahn(m, x, a, b, N) == brute_hahn(m, x, a, b, N)

    def test_hahn_accepts_rational_and_negative_degree_slot(self):
        # shifted radial calls use fractional and negative N slots
        assert hahn(2, 3, R(1, 2), R(1, 3), R(17, 2)) == brute_hahn(
            2, 3, R(1, 2), R(1, 3), R(17, 2)
        )
        assert hahn(2, 3, R(1, 2), R(1, 3), R(-7, 2)) == brute_hahn(
            2, 3, R(1, 2), R(1, 3), R(-7, 2)
        )

    def test_hahn_raises_on_premature_pole(self):
        # degree slot N=3 cannot support degree 4
        with pytest.raises(ZeroDivisionError):
            hahn(4, 5, R(1), R(1), 3)

    def test_krawtchouk_degree_one(self):
        p, N = R(2, 5), 6
        for x in range(7):
            assert krawtchouk(1, x, p, N) == 1 - R(x) / (p * N)

    def test_meixner_degree_one(self):
        c, beta = R(1, 3), R(5, 2)
        for x in range(7):
            assert meixner(1, x, c, beta) == 1 + x * (1 - 1 / c) / beta

    def test_hahn_difference_equation(self):
        a, b, N = R(3, 2), R(5, 4), 6
        for m in range(5):
            for x in range(N + 1):
                lhs = (N - x) * (x + a) * (
                    hahn(m, x, a, b, N) - hahn(m, x + 1, a, b, N)
                ) + R(x) * (N - x + b) * (hahn(m, x, a, b, N) - hahn(m, x - 1, a, b, N))
                assert lhs == R(m) * (m + a + b - 1) * hahn(m, x, a, b, N)

    def test_single_variable_forward_shift(self):
        a, b, N = R(3, 2), R(5, 4), 7
        for m in range(1, 6):
            for x in range(N + 1):
                lhs = hahn(m, x, a, b, N) - hahn(m, x + 1, a, b, N)
                rhs = R(m) * (m + a + b - 1) / (a * N) * hahn(
                    m - 1, x, a + 1, b + 1, N - 1
                )
                assert lhs == rhs

    def test_single_variable_backward_shift(self):
        a, b, N = R(3, 2), R(5, 4), 7
        for m in range(0, 6):
            for x in range(N + 1):
                lhs = (N - x) * (x + a) * hahn(m, x, a + 1, b + 1, N - 1) - R(x) * (
                    N - x + b
                ) * hahn(m, x - 1, a + 1, b + 1, N - 1)
                assert lhs == a * N * hahn(m + 1, x, a, b, N)


class TestPairPolynomials:
    def test_degree_zero_and_one(self):
        al, ga = R(1, 2), R(7, 3)
        assert hahn_pair(0, 4, 5, al, ga) == 1
        for u in range(4):
            for v in range(4):
                assert hahn_pair(1, u, v, al, ga) == al * v - ga * u
                assert km_pair(1, u, v, al, ga) == (ga / al) * u - v

    @pytest.mark.parametrize("m", range(9))
    def test_special_value_hahn(self, m):
        al, ga = R(2, 3), R(5, 4)
        want = R(-1) ** m * math.factorial(m) * rising_factorial(ga, m)
        assert hahn_pair(m, m, 0, al, ga) == want

    @pytest.mark.parametrize("m", range(9))
    def test_special_value_km(self, m):
        al, ga = R(2, 3), R(5, 4)
        assert km_pair(m, 0, m, al, ga) == R(-1) ** m * math.factorial(m)

    def test_km_pair_two_term_sum(self):
        al, ga = R(1, 3), R(4, 5)
        for u in range(3):
            for v in range(3):
                assert km_pair(1, u, v, al, ga) == -R(v) + (ga / al) * u

    @pytest.mark.parametrize("family", ["hahn", "km"])
    def test_shift_relations(self, family):
        al, ga = R(1, 2), R(7, 3)
        box = 6
        for m in range(6):
            for u in range(box + 1):
                for v in range(box + 1 - u):
                    if family == "hahn":
                        if m >= 1:
                            lhs = hahn_pair(m, u, v + 1, al, ga) - hahn_pair(
                                m, u + 1, v, al, ga
                            )
                            rhs = R(m) * (m + al + ga - 1) * hahn_pair(
                                m - 1, u, v, al + 1, ga + 1
                            )
                            assert lhs == rhs
                        lhs = R(v) * (u + al) * hahn_pair(
                            m, u, v - 1, al + 1, ga + 1
                        ) - R(u) * (v + ga) * hahn_pair(m, u - 1, v, al + 1, ga + 1)
                        assert lhs == hahn_pair(m + 1, u, v, al, ga)
                    else:
                        if m >= 1:
                            lhs = km_pair(m, u, v + 1, al, ga) - km_pair(
                                m, u + 1, v, al, ga
                            )
                            rhs = -R(m) * (al + ga) / al * km_pair(m - 1, u, v, al, ga)
                            assert lhs == rhs
                        lhs = R(v) * al * km_pair(m, u, v - 1, al, ga) - R(
                            u
                        ) * ga * km_pair(m, u - 1, v, al, ga)
                        assert lhs == -al * km_pair(m + 1, u, v, al, ga)

    @pytest.mark.parametrize("family", ["hahn", "km"])
    def test_recursions(self, family):
        al, ga = R(3, 4), R(5, 3)
        box = 6
        for m in range(6):
            for u in range(box + 1):
                for v in range(box + 1 - u):
                    if family == "hahn":
                        P = lambda uu, vv: hahn_pair(m, uu, vv, al, ga)
                        fwd = (u + al) * P(u + 1, v) + (v + ga) * P(u, v + 1)
                        assert fwd == (u + v + al + ga + m) * P(u, v)
                    else:
                        P = lambda uu, vv: km_pair(m, uu, vv, al, ga)
                        fwd = al * P(u + 1, v) + ga * P(u, v + 1)
                        assert fwd == (al + ga) * P(u, v)
                    bwd = R(u) * P(u - 1, v) + R(v) * P(u, v - 1)
                    assert bwd == (R(u + v) - m) * P(u, v)

    @pytest.mark.parametrize("m", range(5))
    def test_alternative_hahn_form(self, m):
        # documented cross-check: away from the degenerate set u+v < m,
        # the pair polynomial equals (-1)^m (alpha)_m (-u-v)_m times the
        # single-variable Hahn polynomial with degree slot u+v.  The
        # observed constant is exactly (-1)^m.
        al, ga = R(1, 2), R(7, 3)
        for (u, v) in [(2, 3), (3, 1), (4, 2), (5, 0), (0, 5), (1, 3)]:
            if u + v < m:
                continue
            other = (
                rising_factorial(al, m)
                * rising_factorial(R(-(u + v)), m)
                * hahn(m, u, al, ga, u + v)
            )
            assert hahn_pair(m, u, v, al, ga) == R(-1) ** m * other


class TestRodrigues:
    def test_degree_zero_and_one(self):
        al, ga = R(1, 2), R(7, 3)
        t0 = pair_backward_table(0, al, ga, 4)
        assert all(v == 1 for v in t0.values)
        t1 = pair_backward_table(1, al, ga, 4)
        for (u, v), got in zip(t1.lattice.points, t1.values):
            assert got == al * v - ga * u

    @pytest.mark.parametrize(
        "alpha, gamma", [(R(1, 2), R(7, 3)), (R(3), R(1, 5)), (R(9, 7), R(2))]
    )
    def test_matches_closed_form(self, alpha, gamma):
        for m in range(7):
            table = pair_backward_table(m, alpha, gamma, 6)
            for (u, v), got in zip(table.lattice.points, table.values):
                assert got == hahn_pair(m, u, v, alpha, gamma)

    def test_param_bundle_wrapper(self):
        p = HahnParams((R(1), R(2), R(3)), R(2), 4)
        t = rodrigues_pair(2, 3, p)
        for (u, v), got in zip(t.lattice.points, t.values):
            assert got == hahn_pair(3, u, v, R(2), R(3))


class TestMultivariate:
    hahn_params = HahnParams((R(1, 2), R(3, 2), R(2)), R(5, 4), 5)
    kraw_params = KrawtchoukParams((R(1, 3), R(1, 2), R(1, 4)), 5)
    meix_params = MeixnerParams((R(1, 4), R(1, 4)), R(2))

    def test_degree_zero_is_one(self):
        for x in enumerate_lattice(3, 5):
            assert multi_hahn((0, 0, 0), x, self.hahn_params) == 1
            assert multi_krawtchouk((0, 0, 0), x, self.kraw_params) == 1
        for x in enumerate_lattice(2, 6):
            assert multi_meixner((0, 0), x, self.meix_params) == 1

    def test_radial_reduction(self):
        p = self.hahn_params
        A = p.a_total
        for x in enumerate_lattice(3, 5):
            want = hahn(1, sum(x), A, p.b, p.N)
            assert multi_hahn((1, 0, 0), x, p) == want
            assert want == 1 - (A + p.b) * sum(x) / (A * p.N)
        pk = self.kraw_params
        AK = pk.a_total
        for x in enumerate_lattice(3, 5):
            assert multi_krawtchouk((1, 0, 0), x, pk) == krawtchouk(
                1, sum(x), AK / (AK + 1), pk.N
            )
        pm = self.meix_params
        for x in enumerate_lattice(2, 6):
            assert multi_meixner((1, 0), x, pm) == meixner(
                1, sum(x), pm.a_total, pm.beta
            )

    def test_top_sector_degree_one(self):
        # m = (0,...,0,1) is a_{n-1} x_n - a_n x_{n-1}
        p = self.hahn_params
        for x in enumerate_lattice(3, 5):
            assert multi_hahn((0, 0, 1), x, p) == p.a[1] * x[2] - p.a[2] * x[1]

    def test_pair_product_trivial_cases(self):
        p = self.hahn_params
        x = (1, 2, 1)
        assert pair_product(1, (0, 0, 0), x, p) == 1
        # top sector: single factor, empty shift sums
        assert pair_product(2, (0, 0, 2), x, p) == hahn_pair(
            2, x[1], x[2], p.a[1], p.a[2]
        )

    def test_pair_product_composed_shifts(self):
        p = self.hahn_params
        m = (0, 1, 1)
        for x in enumerate_lattice(3, 5):
            inner = hahn_pair(1, x[1], x[2], p.a[1], p.a[2])
            outer = hahn_pair(1, x[0], x[1] + x[2] - 1, p.a[0], p.a_tail(1) + 2)
            assert pair_product(1, m, x, p) == inner * outer

    def test_krawtchouk_pair_product_keeps_parameters(self):
        p = self.kraw_params
        m = (0, 1, 1)
        for x in enumerate_lattice(3, 5):
            inner = km_pair(1, x[1], x[2], p.a[1], p.a[2])
            outer = km_pair(1, x[0], x[1] + x[2] - 1, p.a[0], p.a_tail(1))
            assert pair_product(1, m, x, p) == inner * outer

    def test_rejects_bad_degree_index(self):
        with pytest.raises(ValueError):
            multi_hahn((3, 2, 1), (0, 0, 0), self.hahn_params)  # |m| > N
        with pytest.raises(ValueError):
            multi_hahn((1, 1), (0, 0, 0), self.hahn_params)  # wrong length
        with pytest.raises(ValueError):
            eigenvalue(self.hahn_params, "exchange", 3, (0, 0, 0))

    def test_eigenvalue_formulas(self):
        p = self.hahn_params
        A, b = p.a_total, p.b
        assert eigenvalue(p, "total", None, (1, 1, 0)) == 2 * (2 + A + b - 1)
        # exchange eigenvalues use the partial degree sum only
        assert eigenvalue(p, "exchange", 1, (1, 1, 0)) == 1 * (1 + A - 1)
        assert eigenvalue(p, "exchange", 2, (1, 1, 0)) == 0
        assert eigenvalue(p, "exchange", 2, (0, 1, 2)) == 2 * (
            2 + p.a[1] + p.a[2] - 1
        )
        assert eigenvalue(p, "single", None, (1, 1, 0)) == eigenvalue(
            p, "total", None, (1, 1, 0)
        ) - eigenvalue(p, "exchange", 1, (1, 1, 0))
        pk = self.kraw_params
        assert eigenvalue(pk, "total", None, (2, 0, 1)) == 3 * (pk.a_total + 1)
        assert eigenvalue(pk, "exchange", 2, (2, 0, 1)) == pk.a[1] + pk.a[2]
        pm = self.meix_params
        assert eigenvalue(pm, "total", None, (1, 1)) == 2 * (1 - pm.a_total)
        assert eigenvalue(pm, "exchange", 1, (1, 1)) == -(pm.a[0] + pm.a[1])

    def test_eigenpoly_dispatch(self):
        assert eigenpoly((1, 0, 0), (1, 1, 0), self.hahn_params) == multi_hahn(
            (1, 0, 0), (1, 1, 0), self.hahn_params
        )
        with pytest.raises(TypeError):
            eigenpoly((0, 0), (0, 0), object())
