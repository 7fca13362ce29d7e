import math
from decimal import ROUND_FLOOR, Decimal

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import polynomial as P
from scipy import integrate, special

from sobolev_bounds import bounds_lower
from sobolev_bounds.bounds_lower import (
    BracketStatus,
    PhiRoute,
    bracket,
    closed_form_lambda_star,
    i_integral,
    is_hypergeometric_singular,
    log_i_integral,
    lower_bound,
    phi,
    phi_derivative,
    phi_minimize,
    profile_increment,
    profile_integral,
)
from sobolev_bounds.bounds_upper import upper_bound
from sobolev_bounds.errors import DomainError, RouteError, SingularParameterError
from sobolev_bounds.specfun import e_power

INF = math.inf


def floor4(x):
    return str(Decimal(x).quantize(Decimal("0.0001"), rounding=ROUND_FLOOR))


# --- independent oracles --------------------------------------------------------------


def i_by_integer_r_expansion(r: int, m: int, d: int) -> float:
    """I for n = d/2 + m + 1/2 and integer r.

    t^nu K_nu(t) = sqrt(pi/2) e^-t p(t) with p a degree-m polynomial, so the
    integrand is a finite sum of t^a e^(-r t) terms with Gamma-function integrals.
    """
    p = [math.factorial(2 * m - i) / (math.factorial(i) * math.factorial(m - i)) / 2 ** (m - i)
         for i in range(m + 1)]
    coeffs = P.polypow(p, r)
    total = math.fsum(c * math.gamma(d + j) / r ** (d + j) for j, c in enumerate(coeffs))
    return (math.pi / 2) ** (r / 2) * total


def i_by_simpson(r: float, n: float, d: int, lo: float = 1e-6, hi: float = 60.0,
                 points: int = 400_001) -> float:
    nu = n - d / 2
    t = np.linspace(lo, hi, points)
    f = t ** (d - 1) * (t**nu * special.kv(nu, t)) ** r
    return integrate.simpson(f, x=t)


def s_minus_by_scipy(r: float, n: float, d: int) -> float:
    """S- from scipy's Bessel function, quad and bounded scalar minimiser."""
    nu = n - d / 2

    def log_i():
        def h(x):
            # kv underflows to 0 far in the tail; log(0) = -inf is the intended value there
            with np.errstate(divide="ignore", invalid="ignore"):
                return d * x + r * np.log(np.exp(nu * x) * special.kv(nu, np.exp(x)))

        xs = np.linspace(-60, 5, 6501)
        hs = np.nan_to_num(h(xs), nan=-np.inf)
        top = hs.max()
        val, _ = integrate.quad(lambda x: math.exp(h(x) - top), -200, 8,
                                points=[xs[hs.argmax()]], limit=500, epsabs=0, epsrel=1e-12)
        return top + math.log(val)

    def phi_val(lam):
        f = lambda s: s ** (d - 1) * (1 + lam**2 * s**2) ** n / (1 + s**2) ** (2 * n)  # noqa: E731
        a, _ = integrate.quad(f, 0, 1, epsabs=0, epsrel=1e-13)
        b, _ = integrate.quad(f, 1, np.inf, epsabs=0, epsrel=1e-13, limit=500)
        return (a + b) * lam ** (2 * d / r - d)

    from scipy.optimize import minimize_scalar as scipy_min

    res = scipy_min(lambda y: phi_val(math.exp(y)), bounds=(-8, 8), method="bounded",
                    options={"xatol": 1e-9})
    log_s = ((0.5 - 1 / r) * (math.lgamma(d / 2) - math.log(2) - (d / 2) * math.log(math.pi))
             + log_i() / r - (n - 1) * math.log(2) - math.lgamma(n) - 0.5 * math.log(res.fun))
    return math.exp(log_s)


def sextic_positive_root(r: float) -> float:
    coeffs = [5 + 2 / r, 0, 9 + 6 / r, 0, 7 + 14 / r, 0, -(21 - 42 / r)]
    roots = [z.real for z in np.roots(coeffs) if abs(z.imag) < 1e-12 and z.real > 0]
    assert len(roots) == 1
    return roots[0]


# --- I_{r,n,d} ------------------------------------------------------------------------


class TestIIntegral:
    def test_case_a_closed_form(self):
        assert i_integral(4, 1, 1) == pytest.approx((math.pi / 2) ** 2 / 4, rel=1e-14)

    @pytest.mark.parametrize("r", [2, 3, 4.5, 11])
    def test_case_d_closed_form(self, r):
        assert i_integral(r, 2, 3) == pytest.approx((math.pi / 2) ** (r / 2) * 2 / r**3, rel=1e-14)

    def test_case_d_at_r_two(self):
        assert i_integral(2, 2, 3) == pytest.approx(math.pi / 8, rel=1e-14)

    def test_case_c_against_simpson(self):
        oracle = i_by_simpson(3, 2, 2)
        assert i_integral(3, 2, 2) == pytest.approx(oracle, rel=1e-9)

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("r", [2.5, 4, 10])
    def test_elementary_form_against_quadrature(self, d, r):
        n = d / 2 + 0.5
        closed = log_i_integral(r, n, d)
        quad = log_i_integral(r, n, d, closed_form=False)
        assert closed.closed_form and not quad.closed_form
        assert math.exp(quad.log_value - closed.log_value) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("r", [3, 6, 10, 20])
    @pytest.mark.parametrize("m, d", [(2, 1), (1, 2), (3, 3), (0, 4)])
    def test_integer_r_expansion(self, r, m, d):
        n = d / 2 + m + 0.5
        expected = math.log(i_by_integer_r_expansion(r, m, d))
        got = log_i_integral(r, n, d, closed_form=False)
        assert got.log_value == pytest.approx(expected, abs=1e-9 * max(1.0, abs(expected)))

    @pytest.mark.parametrize("r, n, d", [(3.3, 1.2, 2), (50, 1.05, 2), (515.58, 2.01, 4),
                                         (2.43, 0.55, 1), (1000, 1.51, 3)])
    def test_log_variable_oracle(self, r, n, d):
        nu = n - d / 2
        xs = np.linspace(-700, 5, 400_001)
        with np.errstate(all="ignore"):
            hs = d * xs + r * np.log(np.exp(nu * xs) * special.kv(nu, np.exp(xs)))
        hs[~np.isfinite(hs)] = -np.inf
        top = hs.max()
        expected = top + math.log(integrate.simpson(np.exp(hs - top), x=xs))
        got = log_i_integral(r, n, d)
        assert got.log_value == pytest.approx(expected, abs=1e-10 * max(1.0, abs(expected)))
        assert got.rel_error_estimate < 1e-9

    def test_large_r_stays_in_logs(self):
        res = log_i_integral(1000, 3, 1)
        assert res.log_value > 709 and res.value == INF
        with pytest.raises(OverflowError):
            i_integral(1000, 3, 1)

    def test_elementary_route_refused_elsewhere(self):
        with pytest.raises(RouteError):
            log_i_integral(4, 2, 2, closed_form=True)

    def test_mass_below_double_range(self):
        # nu = 1e-4, r = 1000: the bump sits near t = e^-900. There
        # (t^nu K_nu / peak) = 1 - u with u = A t^(2 nu), which turns the integral into
        # A^(-d/(2 nu)) B(d/(2 nu), r + 1) / (2 nu) times peak^r.
        r, nu, d = 1000, 1e-4, 1
        log_a = math.lgamma(1 - nu) - math.lgamma(1 + nu) - 2 * nu * math.log(2)
        log_peak = (nu - 1) * math.log(2) + math.lgamma(nu)
        a, b = d / (2 * nu), r + 1
        log_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
        expected = r * log_peak - a * log_a + log_beta - math.log(2 * nu)
        got = log_i_integral(r, d / 2 + nu, d).log_value
        assert got == pytest.approx(expected, abs=1e-9 * abs(expected))

    def test_small_order_straddling_the_series_switch(self):
        r, nu, d = 100, 0.05, 1
        mpmath.mp.dps = 40
        peak = mpmath.mpf(2) ** (nu - 1) * mpmath.gamma(nu)

        def f(x):
            t = mpmath.exp(x)
            return mpmath.exp(d * x) * (t**nu * mpmath.besselk(nu, t) / peak) ** r

        total = mpmath.quad(f, [-80, -40, -30, -25, -20, -15, -10, 0, 3])
        expected = float(r * mpmath.log(peak) + mpmath.log(total))
        got = log_i_integral(r, d / 2 + nu, d).log_value
        assert got == pytest.approx(expected, abs=1e-10 * abs(expected))

    @pytest.mark.parametrize("r, n, d", [(1.5, 1, 1), (INF, 1, 1), (4, 0.5, 1), (4, 1, 2)])
    def test_domain(self, r, n, d):
        with pytest.raises(DomainError):
            i_integral(r, n, d)


# --- phi --------------------------------------------------------------------------------


class TestPhi:
    @pytest.mark.parametrize("r", [2.2, 4, 17])
    @pytest.mark.parametrize("lam", [0.2, 1.0, 3.5])
    def test_case_a(self, r, lam):
        expected = math.pi * (lam**2 + 1) / (4 * lam ** (1 - 2 / r))
        for route in (None, PhiRoute.QUADRATURE, PhiRoute.EXAMPLE_CLOSED_FORM):
            assert phi(r, 1, 1, lam, route).value == pytest.approx(expected, rel=1e-10)
        assert phi(4, 1, 1, 1.0).value == pytest.approx(math.pi / 2, rel=1e-15)

    @pytest.mark.parametrize("r", [2.2, 4, 17])
    @pytest.mark.parametrize("lam", [0.2, 1.0, 3.5])
    def test_case_c(self, r, lam):
        expected = (lam**4 + lam**2 + 1) / (6 * lam ** (2 - 4 / r))
        assert phi(r, 2, 2, lam).value == pytest.approx(expected, rel=1e-13)
        assert phi(r, 2, 2, lam, PhiRoute.QUADRATURE).value == pytest.approx(expected, rel=1e-10)
        assert phi(4, 2, 2, 1.0).value == pytest.approx(0.5, rel=1e-15)

    @pytest.mark.parametrize("r", [2.2, 6, 20])
    @pytest.mark.parametrize("lam", [0.3, 0.9, 2.0])
    def test_case_b(self, r, lam):
        expected = 3 * math.pi * (lam**6 + 3 * lam**4 + 7 * lam**2 + 21) / (512 * lam ** (1 - 2 / r))
        for route in (PhiRoute.BINOMIAL, PhiRoute.QUADRATURE, PhiRoute.EXAMPLE_CLOSED_FORM):
            assert phi(r, 3, 1, lam, route).value == pytest.approx(expected, rel=1e-10)

    def test_non_integer_probe(self):
        quad = phi(4, 1.5, 1, 0.5, PhiRoute.QUADRATURE)
        hyp = phi(4, 1.5, 1, 0.5, PhiRoute.HYPERGEOMETRIC)
        assert quad.route is PhiRoute.QUADRATURE and hyp.route is PhiRoute.HYPERGEOMETRIC
        assert quad.value == pytest.approx(hyp.value, rel=1e-8)

    def test_default_route(self):
        assert phi(4, 3, 1, 0.5).route is PhiRoute.BINOMIAL
        assert phi(4, 1.5, 1, 0.5).route is PhiRoute.QUADRATURE

    @settings(max_examples=60)
    @given(st.integers(1, 4), st.floats(0.05, 5), st.floats(2.01, 999), st.floats(0.02, 0.98))
    def test_routes_agree(self, d, excess, r, lam):
        n = d / 2 + excess
        quad = phi(r, n, d, lam, PhiRoute.QUADRATURE)
        assert quad.value > 0
        if not is_hypergeometric_singular(n, d):
            hyp = phi(r, n, d, lam, PhiRoute.HYPERGEOMETRIC)
            assert hyp.value == pytest.approx(quad.value, rel=1e-8)
            assert abs(hyp.value - quad.value) <= 2 * (hyp.abs_error_estimate + quad.abs_error_estimate) + 1e-14 * quad.value

    @settings(max_examples=40)
    @given(st.integers(1, 4), st.integers(1, 6), st.floats(2.01, 999), st.floats(0.01, 50))
    def test_binomial_matches_quadrature(self, d, n, r, lam):
        if not n > d / 2:
            return
        assert phi(r, n, d, lam, PhiRoute.BINOMIAL).value == pytest.approx(
            phi(r, n, d, lam, PhiRoute.QUADRATURE).value, rel=1e-8)

    def test_heavy_tail_stays_finite(self):
        # n barely above d/2: the integrand decays like s^(-1 - 0.02)
        res = phi(515.6, 2.01, 4, 0.9, PhiRoute.QUADRATURE)
        ref = phi(515.6, 2.01, 4, 0.9, PhiRoute.HYPERGEOMETRIC)
        assert res.value == pytest.approx(ref.value, rel=1e-9)

    def test_route_errors(self):
        with pytest.raises(RouteError):
            phi(4, 1.5, 1, 0.5, PhiRoute.BINOMIAL)
        with pytest.raises(DomainError):
            phi(4, 1.5, 1, 1.5, PhiRoute.HYPERGEOMETRIC)
        with pytest.raises(RouteError):
            phi(4, 1.7, 1, 0.5, PhiRoute.EXAMPLE_CLOSED_FORM)

    def test_singular_hypergeometric(self):
        assert is_hypergeometric_singular(1.25, 1)
        assert not is_hypergeometric_singular(1.5, 1)
        with pytest.raises(SingularParameterError):
            phi(4, 1.25, 1, 0.5, PhiRoute.HYPERGEOMETRIC)

    def test_domain(self):
        for args in [(4, 1, 1, 0.0), (2, 1, 1, 0.5), (INF, 1, 1, 0.5), (4, 0.5, 1, 0.5)]:
            with pytest.raises(DomainError):
                phi(*args)

    @pytest.mark.parametrize("r, n, d", [(4, 1, 1), (6, 3, 1), (7.5, 1.7, 2)])
    def test_derivative_matches_central_difference(self, r, n, d):
        for lam in (0.3, 0.8, 1.7):
            h = 1e-5 * lam
            fd = (phi(r, n, d, lam + h).value - phi(r, n, d, lam - h).value) / (2 * h)
            assert phi_derivative(r, n, d, lam) == pytest.approx(fd, rel=1e-6, abs=1e-9)


def q_by_mpmath(n, d, lam, derivative=False):
    """Q or dQ/dlambda in y = log s, with the algebraic tail past the last node in closed form."""
    mpmath.mp.dps = 30
    lam = mpmath.mpf(lam)
    gamma = 2 * n - d
    if derivative:
        f = lambda y: (2 * n * lam * mpmath.exp((d + 2) * y) * (1 + lam**2 * mpmath.exp(2 * y)) ** (n - 1)  # noqa: E731
                       / (1 + mpmath.exp(2 * y)) ** (2 * n))
        limit = 2 * n * lam ** (2 * n - 1)
    else:
        f = lambda y: (mpmath.exp(d * y) * (1 + lam**2 * mpmath.exp(2 * y)) ** n  # noqa: E731
                       / (1 + mpmath.exp(2 * y)) ** (2 * n))
        limit = lam ** (2 * n)
    knee = -mpmath.log(lam)
    nodes = [-200, -20, 0, knee / 2, knee, knee + 20, knee + 200, knee + 2e3, knee + 2e4,
             knee + 2e5, knee + 2e6, knee + 2e7]
    return float(mpmath.quad(f, nodes) + limit * mpmath.exp(-gamma * nodes[-1]) / gamma)


class TestQIntegral:
    @pytest.mark.parametrize("n, d, lam", [
        (0.5 + 1e-5, 1, 1.6e-7), (1 + 1e-3, 2, 1e-3), (1, 1, 0.3), (3, 1, 2.0), (1.2, 2, 50.0),
    ])
    @pytest.mark.parametrize("derivative", [False, True])
    def test_against_log_variable_oracle(self, n, d, lam, derivative):
        got = profile_integral(n, d, lam, 1e-14, 1e-13, derivative=derivative).value
        assert got == pytest.approx(q_by_mpmath(n, d, lam, derivative), rel=1e-12)

    @pytest.mark.parametrize("n, d, lam", [(1, 1, 0.3), (1.5, 2, 1e-8), (0.5 + 1e-5, 1, 1e-7),
                                           (3, 1, 2.0), (2, 3, 1e-3)])
    def test_increment_against_oracle(self, n, d, lam):
        mpmath.mp.dps = 40
        lam_m = mpmath.mpf(lam)
        f = lambda y: (mpmath.exp(d * y) * ((1 + lam_m**2 * mpmath.exp(2 * y)) ** n - 1)  # noqa: E731
                       / (1 + mpmath.exp(2 * y)) ** (2 * n))
        knee, gamma = -mpmath.log(lam_m), 2 * n - d
        nodes = [-200, -20, 0, knee / 2, knee, knee + 20, knee + 200, knee + 2e3, knee + 2e4,
                 knee + 2e5, knee + 2e6, knee + 2e7]
        expected = mpmath.quad(f, nodes) + lam_m ** (2 * n) * mpmath.exp(-gamma * nodes[-1]) / gamma
        got = profile_increment(n, d, math.log(lam), 1e-15, 1e-13).value
        assert got == pytest.approx(float(expected), rel=1e-11)

    def test_increment_matches_difference_where_that_is_safe(self):
        n, d, lam = 2.3, 2, 0.7
        diff = profile_integral(n, d, lam).value - profile_integral(n, d, 0.0).value
        assert profile_increment(n, d, math.log(lam)).value == pytest.approx(diff, rel=1e-10)

    def test_tiny_lambda_matches_beta_value(self):
        # Q(0) = B(d/2, 2n - d/2) / 2
        n, d = 5, 1
        expected = 0.5 * math.exp(math.lgamma(d / 2) + math.lgamma(2 * n - d / 2) - math.lgamma(2 * n))
        assert profile_integral(n, d, 1e-200).value == pytest.approx(expected, rel=1e-13)
        assert profile_integral(n, d, 0.0).value == pytest.approx(expected, rel=1e-13)


# --- minimisation -----------------------------------------------------------------------


class TestPhiMinimize:
    def test_tiny_order_minimum_far_below_one(self):
        # n - d/2 = 1e-5 puts the minimiser near 1.6e-7; neighbours 1% away are worse
        r, n, d = 2.01, 0.5 + 1e-5, 1
        res = phi_minimize(r, n, d)
        assert 1e-7 < res.arg_min < 3e-7
        for factor in (0.99, 1.01):
            lam = res.arg_min * factor
            assert q_by_mpmath(n, d, lam) * lam ** (2 * d / r - d) > res.min_value

    def test_case_a_r6(self):
        res = phi_minimize(6, 1, 1)
        assert res.arg_min == pytest.approx(1 / math.sqrt(2), rel=1e-15)

    def test_case_a_large_r_tends_to_one(self):
        lams = [phi_minimize(r, 1, 1).arg_min for r in (1e2, 1e4, 1e6)]
        assert lams[0] < lams[1] < lams[2] < 1
        assert lams[2] == pytest.approx(1.0, abs=1e-5)

    @pytest.mark.parametrize("r", [2.2, 3, 6, 10, 20])
    def test_case_b_sextic(self, r):
        root = sextic_positive_root(r)
        assert phi_minimize(r, 3, 1).arg_min == pytest.approx(root, rel=1e-10)
        assert phi_minimize(r, 3, 1, numeric=True).arg_min == pytest.approx(root, abs=1e-8)

    @pytest.mark.parametrize("r, n, d", [(r, 1, 1) for r in (2.2, 3, 4, 6, 50, 1000)]
                             + [(r, 2, 2) for r in (2.1, 3, 6, 18, 50, 100)]
                             + [(r, 2, 3) for r in (2.1, 3, 4, 7, 11, 20, 100, 1000)])
    def test_closed_form_is_stationary(self, r, n, d):
        lam, _ = closed_form_lambda_star(r, n, d)
        h = 1e-5 * lam
        fd = (phi(r, n, d, lam + h).value - phi(r, n, d, lam - h).value) / (2 * h)
        assert abs(fd) < 1e-7 * phi(r, n, d, lam).value / lam
        numeric = phi_minimize(r, n, d, numeric=True)
        assert numeric.arg_min == pytest.approx(lam, abs=1e-8)

    def test_no_closed_form_for_general_triples(self):
        assert closed_form_lambda_star(5, 1.7, 2) is None
        res = phi_minimize(5, 1.7, 2)
        assert res.bracket[0] < res.arg_min < res.bracket[1]
        assert res.local_minima == 1


# --- S- and brackets ---------------------------------------------------------------------


class TestLowerBound:
    @pytest.mark.parametrize("r, n, d, table", [(4, 1, 1, "0.6347"), (6, 3, 1, "0.4872"),
                                                 (18, 2, 2, "0.2582"), (7, 2, 3, "0.1486")])
    def test_table_values_round_down(self, r, n, d, table):
        assert floor4(lower_bound(r, n, d).s_minus) == table

    @pytest.mark.parametrize("r", [2.05, 2.2, 3, 4, 6, 13.7, 50, 1000, 1e5])
    def test_case_a_explicit_form(self, r):
        explicit = (e_power(1 / r) / 2 ** (0.5 - 1 / r)
                    * e_power(1 + 2 / r) ** 0.25 * e_power(1 - 2 / r) ** 0.25)
        assert lower_bound(r, 1, 1).s_minus == pytest.approx(explicit, rel=1e-10)

    def test_case_a_r1000_window(self):
        assert 0.7027 <= lower_bound(1000, 1, 1).s_minus <= 0.7072

    @pytest.mark.parametrize("r, n, d", [(4, 1, 1), (6, 3, 1), (18, 2, 2), (7.3, 2.7, 3), (40, 1.2, 2)])
    def test_breakdown_reassembles(self, r, n, d):
        b = lower_bound(r, n, d)
        assembled = ((math.gamma(d / 2) / (2 * math.pi ** (d / 2))) ** (0.5 - 1 / r)
                     * b.i_value ** (1 / r) / (2 ** (n - 1) * math.gamma(n) * math.sqrt(b.phi_min.min_value)))
        assert b.s_minus == pytest.approx(assembled, rel=1e-12)
        assert b.s_minus <= upper_bound(r, n, d)

    @pytest.mark.parametrize("r, n, d", [(7.3, 2.7, 3), (3.3, 1.2, 2), (40, 0.9, 1), (2.5, 2.3, 4)])
    def test_against_scipy_pipeline(self, r, n, d):
        assert lower_bound(r, n, d).s_minus == pytest.approx(s_minus_by_scipy(r, n, d), rel=1e-8)


    @pytest.mark.parametrize("r, n, d", [(2.0005, 1, 1), (2.0009, 1.5, 2), (2.0001, 3, 1),
                                         (2.0009, 2, 3), (2.0005, 0.5 + 1e-5, 1), (2.0009, 2.3, 4)])
    def test_near_two_assembly_matches_direct_route(self, monkeypatch, r, n, d):
        near = lower_bound(r, n, d)
        monkeypatch.setattr(bounds_lower, "_NEAR_L2", 0.0)
        direct = lower_bound(r, n, d)
        # compare the O(r - 2) deficits 1 - S-, not S- itself
        assert 1 - near.s_minus == pytest.approx(1 - direct.s_minus, rel=1e-9)
        assert near.log_i_value == pytest.approx(direct.log_i_value, rel=1e-12)
        assert near.phi_min.min_value == pytest.approx(direct.phi_min.min_value, rel=1e-12)

    @pytest.mark.parametrize("n, d", [(1, 1), (1.5, 2), (3, 1), (2, 3), (2.3, 4)])
    def test_i_at_two_matches_the_unit_ratio_identity(self, n, d):
        # at r = 2 the trial-function ratio is 1: I = 4^(n-1) Gamma(n)^2 Q(0)
        q0 = 0.5 * math.exp(math.lgamma(d / 2) + math.lgamma(2 * n - d / 2) - math.lgamma(2 * n))
        expected = 2 * ((n - 1) * math.log(2) + math.lgamma(n)) + math.log(q0)
        assert log_i_integral(2, n, d).log_value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("gap", [1e-14, 4.440892098500626e-16])
    @pytest.mark.parametrize("n, d", [(1, 1), (1.5, 2), (7, 4)])
    def test_order_holds_at_the_last_doubles_above_two(self, gap, n, d):
        assert lower_bound(2 + gap, n, d).s_minus <= upper_bound(2 + gap, n, d)

    @pytest.mark.parametrize("order", [0.0, 1e-12, 1e-5])
    @pytest.mark.parametrize("r", [2 + 1e-9, 2.01, 999.99])
    @pytest.mark.parametrize("d", [1, 4])
    def test_orders_just_above_critical_stay_below_upper(self, order, r, d):
        # order 0.0 means the next double above d/2
        n = d / 2 + order if order else math.nextafter(d / 2, INF)
        assert 0 < lower_bound(r, n, d).s_minus <= upper_bound(r, n, d)

class TestBracket:
    def test_r2_sharp(self):
        b = bracket(2, 5, 3)
        assert (b.lower, b.upper, b.status, b.sharp) == (1.0, 1.0, BracketStatus.SHARP, True)
        assert b.rel_uncertainty == 0.0

    def test_r_inf_sharp(self):
        b = bracket(INF, 1, 1)
        assert b.lower == b.upper == pytest.approx(1 / math.sqrt(2), rel=1e-15)
        assert b.status is BracketStatus.SHARP

    def test_case_a_r6(self):
        b = bracket(6, 1, 1)
        assert b.status is BracketStatus.ESTIMATED
        assert (floor4(b.lower), str(Decimal(b.upper).quantize(Decimal("0.0001"), rounding="ROUND_CEILING"))) == ("0.6057", "0.6345")
        assert b.rel_uncertainty < 0.05
        assert b.lambda_star == pytest.approx(1 / math.sqrt(2))

    @pytest.mark.parametrize("r, n, d", [(3, 1, 3), (4, 1, 2), (5.5, 0.4, 1)])
    def test_upper_only(self, r, n, d):
        b = bracket(r, n, d)
        assert b.status is BracketStatus.UPPER_ONLY
        assert b.lower is None and b.rel_uncertainty is None
        assert b.upper == pytest.approx(upper_bound(r, n, d))

    def test_inadmissible(self):
        with pytest.raises(DomainError):
            bracket(6, 1, 3)
