"""Trial-function lower bounds S- for n > d/2, 2 < r < inf, and the [S-, S+] bracket.

The trial family is the rescaled kernel G_{2n,d}(lambda x). Its norm ratio
factorises into an r-dependent radial integral I_{r,n,d} of (t^nu K_nu(t))^r,
nu = n - d/2, and a lambda-dependent Fourier-side integral phi(lambda)
which is minimised over lambda > 0.

I_{r,n,d} grows like (2^(nu-1) Gamma(nu))^r, which overflows a double for
large r, so it is carried as a logarithm throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from . import numerics
from .bounds_upper import Admissibility, EmbeddingParams, upper_bound
from .errors import (
    BracketingError,
    ConvergenceError,
    DomainError,
    RouteError,
    SingularParameterError,
)
from .numerics import MinimizationResult, QuadratureResult
from .specfun import (
    EPS,
    beta,
    bessel_k,
    gamma_quotient,
    hyp2f1,
    ln_gamma,
    rho_power_bessel_k,
)


class PhiRoute(enum.Enum):
    QUADRATURE = "quadrature"
    BINOMIAL = "binomial"
    HYPERGEOMETRIC = "hypergeometric"
    EXAMPLE_CLOSED_FORM = "example_closed_form"


class BracketStatus(enum.Enum):
    SHARP = "sharp"
    ESTIMATED = "estimated"
    UPPER_ONLY = "upper_only"


@dataclass(frozen=True)
class PhiEvaluation:
    lam: float
    value: float
    route: PhiRoute
    abs_error_estimate: float


@dataclass(frozen=True)
class IIntegral:
    log_value: float
    rel_error_estimate: float
    closed_form: bool
    subdivisions: int = 0

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value < 709.0 else math.inf


@dataclass(frozen=True)
class LowerBoundBreakdown:
    i_value: float        # I_{r,n,d}; math.inf when it exceeds the double range
    log_i_value: float
    phi_min: MinimizationResult
    s_minus: float

    @property
    def lambda_star(self) -> float:
        return self.phi_min.arg_min


@dataclass(frozen=True)
class BoundBracket:
    r: float
    n: float
    d: int
    lower: float | None
    upper: float
    status: BracketStatus
    lambda_star: float | None = None

    @property
    def sharp(self) -> bool:
        return self.status is BracketStatus.SHARP

    @property
    def rel_uncertainty(self) -> float | None:
        if self.lower is None:
            return None
        return (self.upper - self.lower) / self.lower


def _require_lower_domain(r: float, n: float, d: int, *, allow_r2: bool = False) -> None:
    if d < 1 or d != int(d):
        raise DomainError(f"d must be a positive integer, got {d!r}")
    if not n > d / 2:
        raise DomainError(f"lower bounds need n > d/2, got n={n}, d={d}")
    if allow_r2 and r == 2:
        return
    if not 2 < r < math.inf:
        raise DomainError(f"lower bounds need 2 < r < inf, got r={r}")


def _is_integer(x: float) -> bool:
    return float(x).is_integer()


def is_hypergeometric_singular(n: float, d: int) -> bool:
    """True when 2n - d/2 - 1 is a non-negative integer."""
    k = 2 * n - d / 2 - 1
    return k >= 0 and _is_integer(k)


# --- phi ------------------------------------------------------------------------


def profile_integral(n: float, d: int, lam: float,
                     abs_tol: float = numerics.DEFAULT_ABS_TOL,
                     rel_tol: float = numerics.DEFAULT_REL_TOL, *,
                     derivative: bool = False) -> QuadratureResult:
    """Q(lambda) = int_0^inf s^(d-1) (1 + lambda^2 s^2)^n / (1 + s^2)^(2n) ds by quadrature,
    or dQ/dlambda with ``derivative=True``. Valid for lambda >= 0 and n > d/2.

    s in [0, 1] is integrated directly. Beyond s = 1 the integrand is
    s^-(1 + gamma) G(w) with w = s^-2 and gamma = 2n - d, which in v = log w becomes
    G(e^v) e^(gamma v / 2) / 2 on (-inf, 0]. Below v = 2 log(lambda) - 40, G equals
    G(0) to double precision, and that stretch is added in closed form, so
    slow algebraic decay (small gamma) costs nothing extra.
    """
    lam2 = lam * lam
    gamma = 2 * n - d
    if derivative:
        if lam == 0.0:
            return QuadratureResult(0.0, 0.0, 0)
        scale = 2.0 * n * lam

        def inner(s: float) -> float:
            s2 = s * s
            return scale * s ** (d + 1) * (1.0 + lam2 * s2) ** (n - 1) / (1.0 + s2) ** (2 * n)

        def g(w: float) -> float:
            return scale * (lam2 + w) ** (n - 1) / (1.0 + w) ** (2 * n)
    else:
        def inner(s: float) -> float:
            s2 = s * s
            return s ** (d - 1) * (1.0 + lam2 * s2) ** n / (1.0 + s2) ** (2 * n)

        def g(w: float) -> float:
            return (lam2 + w) ** n / (1.0 + w) ** (2 * n)

    if lam > 0.0:
        v_knee = 2.0 * math.log(lam)
        v_cut = min(v_knee, 0.0) - 40.0
        tail = g(0.0) * math.exp(0.5 * gamma * v_cut) / gamma
    else:
        # G(w) <= w^n: the dropped stretch is below e^-40 / n
        v_knee = 0.0
        v_cut = -40.0 / n
        tail = 0.0

    def outer(v: float) -> float:
        return 0.5 * g(math.exp(v)) * math.exp(0.5 * gamma * v)

    edges = _outer_edges(v_cut, v_knee)
    pieces = [(inner, 0.0, 1.0)]
    pieces += [(outer, lo, hi) for lo, hi in zip(edges, edges[1:])]
    res = numerics.integrate_pieces(pieces, abs_tol, rel_tol)
    return QuadratureResult(res.value + tail, res.abs_error_estimate, res.subdivisions)


def _outer_edges(v_cut: float, v_knee: float) -> list[float]:
    # panels widen geometrically away from v = 0 and from the knee, so no single
    # wide panel hides a feature from the error estimate
    marks = {0.0, v_knee}
    step = 1.0
    while step < -v_cut:
        marks.update((-step, v_knee - step, v_knee + step))
        step *= 4.0
    return [v_cut, *sorted(v for v in marks if v_cut < v < 0.0), 0.0]


def profile_increment(n: float, d: int, log_lam: float,
                      abs_tol: float = numerics.DEFAULT_ABS_TOL,
                      rel_tol: float = numerics.DEFAULT_REL_TOL) -> QuadratureResult:
    """Q(lambda) - Q(0) at lambda = e^log_lam, without forming either term.

    (1 + lambda^2 s^2)^n - 1 is evaluated as expm1(n log1p(lambda^2 s^2)), so
    the result keeps its relative accuracy for tiny lambda. Beyond s = 1 the
    integral runs in v = log(s^-2) as in :func:`profile_integral`.
    """
    gamma = 2 * n - d

    def inner(s: float) -> float:
        z = math.exp(2.0 * (log_lam + math.log(s)))
        return s ** (d - 1) * math.expm1(n * math.log1p(z)) / (1.0 + s * s) ** (2 * n)

    def outer(v: float) -> float:
        # w^(2n - d/2) (1 + w)^(-2n) ((1 + lambda^2/w)^n - 1) / 2 with w = e^v
        log_q = 2.0 * log_lam - v
        base = (2 * n - d / 2) * v - 2 * n * math.log1p(math.exp(v))
        if log_q < 0.0:
            return 0.5 * math.exp(base) * math.expm1(n * math.log1p(math.exp(log_q)))
        grow = n * (log_q + math.log1p(math.exp(-log_q)))
        return -0.5 * math.exp(base + grow) * math.expm1(-grow)

    v_knee = 2.0 * log_lam
    v_cut = min(v_knee, 0.0) - 40.0
    # below v_cut the integrand is lambda^(2n) e^(gamma v / 2) / 2 to double precision
    tail = math.exp(2 * n * log_lam + 0.5 * gamma * v_cut) / gamma
    edges = _outer_edges(v_cut, v_knee)
    pieces = [(inner, 0.0, 1.0)]
    pieces += [(outer, lo, hi) for lo, hi in zip(edges, edges[1:])]
    res = numerics.integrate_pieces(pieces, abs_tol, rel_tol)
    return QuadratureResult(res.value + tail, res.abs_error_estimate, res.subdivisions)


def _binomial_terms(n: float, d: int) -> list[float]:
    """Coefficients of lambda^(2l) in Q(lambda) = 1/2 sum C(n,l) B(l + d/2, 2n - d/2 - l) lambda^(2l)."""
    m = int(n)
    return [0.5 * math.comb(m, ell) * beta(ell + d / 2, 2 * n - d / 2 - ell).value
            for ell in range(m + 1)]


def _q_binomial(n: float, d: int, lam: float) -> tuple[float, float]:
    coeffs = _binomial_terms(n, d)
    lam2 = lam * lam
    q = 0.0
    for c in reversed(coeffs):
        q = q * lam2 + c
    return q, 16 * EPS * q * len(coeffs)


def _dq_binomial(n: float, d: int, lam: float) -> float:
    coeffs = _binomial_terms(n, d)
    return sum(2 * ell * c * lam ** (2 * ell - 1) for ell, c in enumerate(coeffs) if ell)


def _q_hypergeometric(n: float, d: int, lam: float) -> tuple[float, float]:
    if not 0 < lam < 1:
        raise RouteError(f"hypergeometric route needs 0 < lambda < 1, got {lam!r}")
    if is_hypergeometric_singular(n, d):
        raise SingularParameterError(
            f"hypergeometric route is singular for n={n}, d={d} (2n - d/2 - 1 is a non-negative integer)")
    z = lam * lam
    h = d / 2
    b1 = beta(2 * n - h, h).value
    f1 = hyp2f1(h, -n, 1 + h - 2 * n, z)
    b2 = gamma_quotient((n - h, h - 2 * n), (-n,))
    term1 = b1 * f1.value
    err = b1 * f1.abs_error_estimate + 8 * EPS * abs(term1)
    term2 = 0.0
    if b2 != 0.0:
        f2 = hyp2f1(2 * n, n - h, 1 - h + 2 * n, z)
        scale = lam ** (4 * n - d) * b2
        term2 = scale * f2.value
        err += abs(scale) * f2.abs_error_estimate + 8 * EPS * abs(term2)
    q = 0.5 * (term1 + term2)
    # the two terms can cancel; the error is absolute in their magnitudes
    err = 0.5 * err + 4 * EPS * (abs(term1) + abs(term2))
    return q, err


def _example_closed_form(n: float, d: int, lam: float) -> float | None:
    lam2 = lam * lam
    if (n, d) == (1, 1):
        return math.pi * (lam2 + 1.0) / 4.0
    if (n, d) == (3, 1):
        return 3.0 * math.pi * (((lam2 + 3.0) * lam2 + 7.0) * lam2 + 21.0) / 512.0
    if (n, d) == (2, 2):
        return ((lam2 + 1.0) * lam2 + 1.0) / 6.0
    if (n, d) == (2, 3):
        return math.pi * ((5.0 * lam2 + 2.0) * lam2 + 1.0) / 32.0
    return None


def _default_route(n: float) -> PhiRoute:
    return PhiRoute.BINOMIAL if _is_integer(n) else PhiRoute.QUADRATURE


def _q_value(n: float, d: int, lam: float, route: PhiRoute, abs_tol: float,
             rel_tol: float) -> tuple[float, float]:
    if route is PhiRoute.BINOMIAL:
        if not _is_integer(n):
            raise RouteError(f"binomial route needs integer n, got {n!r}")
        return _q_binomial(n, d, lam)
    if route is PhiRoute.HYPERGEOMETRIC:
        return _q_hypergeometric(n, d, lam)
    if route is PhiRoute.EXAMPLE_CLOSED_FORM:
        q = _example_closed_form(n, d, lam)
        if q is None:
            raise RouteError(f"no worked-example closed form for (n, d) = ({n}, {d})")
        return q, 8 * EPS * q
    res = profile_integral(n, d, lam, abs_tol, rel_tol)
    return res.value, res.abs_error_estimate


def phi(r: float, n: float, d: int, lam: float, route: PhiRoute | None = None, *,
        abs_tol: float = numerics.DEFAULT_ABS_TOL,
        rel_tol: float = numerics.DEFAULT_REL_TOL) -> PhiEvaluation:
    """phi_{r,n,d}(lambda) = lambda^(2d/r - d) int_0^inf s^(d-1) (1 + lambda^2 s^2)^n / (1 + s^2)^(2n) ds.

    ``route=None`` picks BINOMIAL for integer n and QUADRATURE otherwise.
    """
    _require_lower_domain(r, n, d)
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    route = route or _default_route(n)
    q, q_err = _q_value(n, d, lam, route, abs_tol, rel_tol)
    scale = lam ** (2 * d / r - d)
    return PhiEvaluation(lam, q * scale, route, q_err * scale)


def phi_derivative(r: float, n: float, d: int, lam: float, *,
                   abs_tol: float = numerics.DEFAULT_ABS_TOL,
                   rel_tol: float = numerics.DEFAULT_REL_TOL) -> float:
    """d phi_{r,n,d} / d lambda, from the binomial sum or by quadrature."""
    _require_lower_domain(r, n, d)
    e = d - 2 * d / r
    if _is_integer(n):
        q, _ = _q_binomial(n, d, lam)
        dq = _dq_binomial(n, d, lam)
    else:
        q = profile_integral(n, d, lam, abs_tol, rel_tol).value
        dq = profile_integral(n, d, lam, abs_tol, rel_tol, derivative=True).value
    return lam ** (-e) * (dq - e * q / lam)


# --- I_{r,n,d} ----------------------------------------------------------------------


def _log_kernel_peak(nu: float) -> float:
    """log of lim_{t->0} t^nu K_nu(t) = 2^(nu-1) Gamma(nu), the maximum of t^nu K_nu(t)."""
    return (nu - 1.0) * math.log(2.0) + ln_gamma(nu).value


def _log_power_tail(alpha: float, r: float, cutoff: float) -> float:
    """log of an upper bound on int_T^inf t^alpha e^(-r t) dt (inf when not yet valid)."""
    if alpha <= 0:
        return alpha * math.log(cutoff) - r * cutoff - math.log(r)
    kappa = r - alpha / cutoff
    if kappa <= 0:
        return math.inf
    return alpha * math.log(cutoff) - r * cutoff - math.log(kappa)


def _log_i_right_tail(r: float, nu: float, d: int, log_peak: float, cutoff: float) -> float:
    """log of a bound on int_T^inf t^(d-1) (t^nu K_nu(t) / peak)^r dt.

    sqrt(t) e^t K_nu(t) is non-increasing for nu >= 1/2 and bounded by
    sqrt(pi/2) for nu <= 1/2, so for t >= T
    K_nu(t) <= c_T t^(-1/2) e^(-t) with c_T = max(sqrt(pi/2), sqrt(T) e^T K_nu(T)).
    """
    alpha = d - 1 + (nu - 0.5) * r
    log_c = 0.5 * math.log(math.pi / 2)
    k_t = bessel_k(nu, cutoff).value
    if k_t > 0.0:
        log_c = max(log_c, 0.5 * math.log(cutoff) + cutoff + math.log(k_t))
    return r * (log_c - log_peak) + _log_power_tail(alpha, r, cutoff)


_LN2 = math.log(2.0)
_SMALL_T_LOG = -20.0  # below this log t, O(t^2) corrections to t^nu K_nu are under 1e-17


def _small_t_log_ratio(nu: float, x: float) -> float:
    """log(t^nu K_nu(t) / peak) at t = e^x for 0 < nu < 1 and tiny t, from
    t^nu K_nu(t) = peak (1 - (t/2)^(2 nu) Gamma(1 - nu) / Gamma(1 + nu)) (1 + O(t^2))."""
    z = 2.0 * nu * (x - _LN2) + math.lgamma(1.0 - nu) - math.lgamma(1.0 + nu)
    return math.log(-math.expm1(z))


def log_i_integral(r: float, n: float, d: int, *, closed_form: bool | None = None,
                   abs_tol: float = numerics.DEFAULT_ABS_TOL,
                   rel_tol: float = numerics.DEFAULT_REL_TOL) -> IIntegral:
    """log I_{r,n,d}, I = int_0^inf t^(d-1) (t^(n-d/2) K_{n-d/2}(t))^r dt.

    For n = d/2 + 1/2 the elementary value (pi/2)^(r/2) Gamma(d) / r^d is used
    (``closed_form=None`` or ``True``); otherwise, or with ``closed_form=False``,
    by quadrature in x = log t of exp(h(x) - max h), where
    h(x) = d x + r log(t^nu K_nu(t) / peak). Both truncated tails carry
    certified bounds. ``abs_tol`` applies to this unit-height integrand.
    The integral is finite at r = 2 as well, which is accepted.
    """
    _require_lower_domain(r, n, d, allow_r2=True)
    nu = n - d / 2
    elementary = nu == 0.5
    if closed_form and not elementary:
        raise RouteError(f"I_{{r,n,d}} has no elementary form for n - d/2 = {nu}")
    if elementary and closed_form is not False:
        log_value = (r / 2) * math.log(math.pi / 2) + ln_gamma(d).value - d * math.log(r)
        return IIntegral(log_value, 16 * EPS * max(1.0, abs(log_value)), True)
    log_peak = _log_kernel_peak(nu)
    h_best, res = _kernel_integral(nu, d, r, log_peak, abs_tol, rel_tol)
    log_value = r * log_peak + h_best + math.log(res.value)
    return IIntegral(log_value, res.abs_error_estimate / res.value, False, res.subdivisions)


def _kernel_log_ratio(nu: float, log_peak: float) -> Callable[[float], float]:
    """x -> log(t^nu K_nu(t) / peak) at t = e^x; never positive, -inf past underflow."""
    small_order = nu < 1.0

    def log_ratio(x: float) -> float:
        if x < _SMALL_T_LOG and small_order:
            return _small_t_log_ratio(nu, x)
        if x < -700.0:
            return 0.0  # t^nu K_nu(t) equals its peak to double precision
        k = rho_power_bessel_k(nu, math.exp(x))
        return math.log(k) - log_peak if k > 0.0 else -math.inf

    return log_ratio


def _kernel_integral(nu: float, d: int, power: float, log_peak: float, abs_tol: float,
                     rel_tol: float, factor: Callable[[float], float] | None = None,
                     tail_power: float | None = None,
                     tail_scale: float = 1.0) -> tuple[float, QuadratureResult]:
    """(H, J) with int_0^inf t^(d-1) kappa^power factor(log kappa) dt = e^H J.

    kappa = t^nu K_nu(t) / peak. The quadrature runs in x = log t on
    exp(h - H) factor, with h = d x + power log kappa and H = max h. The caller
    guarantees kappa^power |factor| <= tail_scale kappa^tail_power, which
    drives the certified tail bounds. ``abs_tol`` applies to the unit-height
    integrand.
    """
    if tail_power is None:
        tail_power = power
    log_ratio = _kernel_log_ratio(nu, log_peak)

    def h(x: float) -> float:
        return d * x + power * log_ratio(x)

    # h is concave (t K_{nu-1}(t) / K_nu(t) increases with t), so a golden
    # search over a window holding the maximum finds it.
    x_low = -60.0 - math.log(power)
    if nu < 1.0:
        # small-t form: maximum where (t/2)^(2 nu) Gamma(1-nu)/Gamma(1+nu) = d / (d + 2 nu power)
        log_u = math.log(d / (d + 2.0 * nu * power))
        x_guess = _LN2 + (log_u - math.lgamma(1.0 - nu) + math.lgamma(1.0 + nu)) / (2.0 * nu)
        x_low = min(x_low, 2.0 * x_guess - 60.0)
    x_high = math.log(4.0 * d + 10.0)
    x_best, neg_h, _ = numerics.golden_section(lambda x: -h(x), x_low, x_high,
                                               1e-9 * (x_high - x_low), 400)
    h_best = -neg_h
    if not math.isfinite(h_best):
        raise ConvergenceError(f"kernel integral (nu={nu}, d={d}): integrand maximum not found")

    if factor is None:
        def integrand(x: float) -> float:
            return math.exp(h(x) - h_best)
    else:
        def integrand(x: float) -> float:
            hx = h(x)
            return math.exp(hx - h_best) * factor(log_ratio(x)) if hx > -math.inf else 0.0

    tail_target = 0.05 * abs_tol
    # left tail: log kappa <= 0, so the integrand is below tail_scale exp(d x - H)
    x_left = (h_best + math.log(tail_target * d / tail_scale)) / d
    left_tail = tail_scale * math.exp(d * x_left - h_best) / d
    cutoff = max(2.0, 2.0 * math.exp(x_best))

    def log_right_tail(t: float) -> float:
        return math.log(tail_scale) + _log_i_right_tail(tail_power, nu, d, log_peak, t) - h_best

    while log_right_tail(cutoff) > math.log(tail_target):
        cutoff *= 2.0
    res = numerics.integrate_interval(
        integrand, x_left, math.log(cutoff), abs_tol, rel_tol,
        points=[x_best - 2.0, x_best, x_best + 2.0],
        extra_error=left_tail + math.exp(log_right_tail(cutoff)))
    return h_best, res


def i_integral(r: float, n: float, d: int, *, closed_form: bool | None = None,
               abs_tol: float = numerics.DEFAULT_ABS_TOL,
               rel_tol: float = numerics.DEFAULT_REL_TOL) -> float:
    """I_{r,n,d}; raises OverflowError when it exceeds the double range (use :func:`log_i_integral`)."""
    res = log_i_integral(r, n, d, closed_form=closed_form, abs_tol=abs_tol, rel_tol=rel_tol)
    if res.log_value >= 709.0:
        raise OverflowError(f"I_(r={r}, n={n}, d={d}) = exp({res.log_value:.6g}) overflows")
    return res.value


# --- minimisation over lambda --------------------------------------------------------


def _sextic_root(r: float, tol: float = 1e-12) -> tuple[float, int]:
    """Positive root of (5 + 2/r) l^6 + (9 + 6/r) l^4 + (7 + 14/r) l^2 - (21 - 42/r)."""
    coeffs = (5 + 2 / r, 9 + 6 / r, 7 + 14 / r, -(21 - 42 / r))
    signs = [c > 0 for c in coeffs]
    # one sign change => exactly one positive root in lambda^2
    if sum(1 for a, b in zip(signs, signs[1:]) if a != b) != 1:
        raise DomainError(f"sextic has no unique positive root at r={r}")

    def p(lam: float) -> float:
        y = lam * lam
        return ((coeffs[0] * y + coeffs[1]) * y + coeffs[2]) * y + coeffs[3]

    lo, hi = 0.0, 2.0
    it = 0
    while hi - lo > tol:
        it += 1
        mid = 0.5 * (lo + hi)
        if p(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), it


def closed_form_lambda_star(r: float, n: float, d: int) -> tuple[float, int] | None:
    """Minimiser of phi from the worked examples, or None outside them.

    Returns (lambda*, iterations); iterations is 1 for the explicit formulas.
    """
    if (n, d) == (1, 1):
        return math.sqrt((1 - 2 / r) / (1 + 2 / r)), 1
    if (n, d) == (2, 2):
        return math.sqrt((-1 / r + math.sqrt(1 - 3 / r**2)) / (1 + 2 / r)), 1
    if (n, d) == (2, 3):
        return math.sqrt((1 - 6 / r + 4 * math.sqrt(1 + 3 / r - 9 / r**2))
                         / (5 * (1 + 6 / r))), 1
    if (n, d) == (3, 1):
        return _sextic_root(r)
    return None


def phi_minimize(r: float, n: float, d: int, *, numeric: bool = False,
                 abs_tol: float = numerics.DEFAULT_ABS_TOL,
                 rel_tol: float = numerics.DEFAULT_REL_TOL,
                 x_tol: float = 1e-10) -> MinimizationResult:
    """(lambda*, Phi) with Phi = inf_{lambda > 0} phi_{r,n,d}(lambda).

    Uses the explicit minimiser when one is known unless ``numeric`` is set;
    otherwise a log grid scan followed by bisection on d phi / d lambda.
    """
    _require_lower_domain(r, n, d)

    def g(lam: float) -> float:
        return phi(r, n, d, lam, abs_tol=abs_tol, rel_tol=rel_tol).value

    known = None if numeric else closed_form_lambda_star(r, n, d)
    if known is not None:
        lam_star, iterations = known
        return MinimizationResult(lam_star, g(lam_star), iterations, (0.0, math.inf))

    def dg(lam: float) -> float:
        return phi_derivative(r, n, d, lam, abs_tol=abs_tol, rel_tol=rel_tol)

    return numerics.minimize_on_halfline(g, x_tol, derivative=dg)


# --- assembly ------------------------------------------------------------------------


def _log_s_minus(r: float, n: float, d: int, log_i: float, phi_min: float) -> float:
    return ((0.5 - 1 / r) * (ln_gamma(d / 2).value - math.log(2) - (d / 2) * math.log(math.pi))
            + log_i / r - (n - 1) * math.log(2) - ln_gamma(n).value - 0.5 * math.log(phi_min))


_NEAR_L2 = 1e-3  # r - 2 below which S- is assembled relative to its r = 2 value of 1


def _log_q_at_zero(n: float, d: int) -> float:
    # Q(0) = B(d/2, 2n - d/2) / 2
    return ln_gamma(d / 2).value + ln_gamma(2 * n - d / 2).value - ln_gamma(2 * n).value - _LN2


def _minimize_on_line(f: Callable[[float], float], lo: float = -40.0, hi: float = 10.0,
                      points: int = 64) -> MinimizationResult:
    """Minimise a unimodal ``f`` on the real line: uniform scan, doubling the window
    towards whichever edge holds the smallest sample, then golden refinement."""
    for _ in range(60):
        xs = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
        ys = [f(x) for x in xs]
        i_min = min(range(points), key=ys.__getitem__)
        if i_min == 0:
            lo -= hi - lo
        elif i_min == points - 1:
            hi += hi - lo
        else:
            res = numerics.minimize_scalar(f, (xs[i_min - 1], xs[i_min + 1]),
                                           1e-10 * max(1.0, abs(xs[i_min])))
            local = sum(1 for i in range(1, points - 1) if ys[i] < ys[i - 1] and ys[i] < ys[i + 1])
            return MinimizationResult(res.arg_min, res.min_value, res.iterations, res.bracket,
                                      max(local, 1))
    raise BracketingError(f"no interior minimum found on [{lo}, {hi}]")


def _near_l2_lower_bound(r: float, n: float, d: int, abs_tol: float,
                         rel_tol: float) -> LowerBoundBreakdown:
    """S- for r just above 2, with log S- built from increments over r = 2.

    At r = 2 the trial-function ratio is exactly 1, which fixes
    log I_(2,n,d) = 2 ((n-1) log 2 + ln Gamma(n)) + log Q(0). What remains is
    O(r - 2): log I_(r) - log I_(2) from the moment of (1 - kappa^(r-2)) / (r-2)
    under the r = 2 weight, and log(Phi / Q(0)) from minimising
    log1p((Q(lambda) - Q(0)) / Q(0)) - 2 d (1/2 - 1/r) log(lambda) over log(lambda).
    Both keep their relative accuracy, so S- stays ordered against S+ down to
    the last double above 2.
    """
    eps = r - 2.0
    half_gap = eps / (2.0 * r)  # 1/2 - 1/r
    nu = n - d / 2
    log_q0 = _log_q_at_zero(n, d)
    log_i2 = 2.0 * ((n - 1) * _LN2 + ln_gamma(n).value) + log_q0
    log_peak = _log_kernel_peak(nu)

    def shortfall(log_kappa: float) -> float:
        # (1 - kappa^eps) / eps <= |log kappa|, and |log kappa| kappa^(1/2) <= 2/e
        return -math.expm1(eps * log_kappa) / eps

    h_best, moment = _kernel_integral(nu, d, 2.0, log_peak, abs_tol, rel_tol, shortfall,
                                      tail_power=1.5, tail_scale=2.0 / math.e)
    log_j2 = log_i2 - 2.0 * log_peak
    log_i_gain = eps * log_peak + math.log1p(-eps * math.exp(h_best - log_j2) * moment.value)

    q0 = math.exp(log_q0)

    def log_phi_over_q0(y: float) -> float:
        rise = profile_increment(n, d, y, abs_tol, rel_tol).value
        return math.log1p(rise / q0) - 2.0 * d * half_gap * y

    best = _minimize_on_line(log_phi_over_q0)
    log_phi_min = log_q0 + best.min_value
    c1 = ln_gamma(d / 2).value - _LN2 - (d / 2) * math.log(math.pi)
    log_s = half_gap * (c1 - log_i2) + log_i_gain / r - 0.5 * best.min_value
    log_i = log_i2 + log_i_gain
    lo, hi = best.bracket
    phi_min = MinimizationResult(math.exp(best.arg_min), math.exp(log_phi_min), best.iterations,
                                 (math.exp(lo), math.exp(hi)), best.local_minima)
    return LowerBoundBreakdown(math.exp(log_i) if log_i < 709.0 else math.inf, log_i, phi_min,
                               math.exp(log_s))


def lower_bound(r: float, n: float, d: int, *,
                abs_tol: float = numerics.DEFAULT_ABS_TOL,
                rel_tol: float = numerics.DEFAULT_REL_TOL) -> LowerBoundBreakdown:
    """S-_{r,n,d} = (Gamma(d/2) / (2 pi^(d/2)))^(1/2 - 1/r) I^(1/r) / (2^(n-1) Gamma(n) sqrt(Phi)).

    For r - 2 below 1e-3 the same quantity is assembled from its increments
    over r = 2, where S- = 1 exactly.
    """
    _require_lower_domain(r, n, d)
    if r - 2.0 < _NEAR_L2:
        return _near_l2_lower_bound(r, n, d, abs_tol, rel_tol)
    i_res = log_i_integral(r, n, d, abs_tol=abs_tol, rel_tol=rel_tol)
    phi_min = phi_minimize(r, n, d, abs_tol=abs_tol, rel_tol=rel_tol)
    s_minus = math.exp(_log_s_minus(r, n, d, i_res.log_value, phi_min.min_value))
    return LowerBoundBreakdown(i_res.value, i_res.log_value, phi_min, s_minus)


def bracket(r: float, n: float, d: int, *,
            abs_tol: float = numerics.DEFAULT_ABS_TOL,
            rel_tol: float = numerics.DEFAULT_REL_TOL) -> BoundBracket:
    """[S-, S+] with its status.

    r = 2, or r = inf with n > d/2: the upper bound is the sharp constant.
    n > d/2, 2 < r < inf: trial-function lower bound, status ESTIMATED.
    n <= d/2, r > 2: upper bound only.
    """
    params = EmbeddingParams(r, n, d).require_admissible()
    upper = upper_bound(r, n, d)
    if r == 2 or (math.isinf(r) and params.admissibility is Admissibility.SUPERCRITICAL):
        return BoundBracket(r, n, d, upper, upper, BracketStatus.SHARP)
    if params.admissibility is not Admissibility.SUPERCRITICAL:
        return BoundBracket(r, n, d, None, upper, BracketStatus.UPPER_ONLY)
    low = lower_bound(r, n, d, abs_tol=abs_tol, rel_tol=rel_tol)
    return BoundBracket(r, n, d, low.s_minus, upper, BracketStatus.ESTIMATED, low.lambda_star)
