"""Adaptive quadrature on the half line and bracketed scalar minimisation."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BracketingError, ConvergenceError, DomainError

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_SUBDIVISIONS = 2000

_EPS = 2.220446049250313e-16
_UFLOW = 2.2250738585072014e-308

# 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights;
# the odd-indexed abscissae are the 7-point Gauss nodes.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    subdivisions: int


@dataclass(frozen=True)
class MinimizationResult:
    arg_min: float
    min_value: float
    iterations: int
    bracket: tuple[float, float]
    local_minima: int = 1  # grid-scan count; > 1 flags a possibly missed basin


Integrand = Callable[[float], float]


def _gk15(f: Integrand, a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7/15 panel with the QUADPACK error heuristic."""
    centr = 0.5 * (a + b)
    hlgth = 0.5 * (b - a)
    fc = f(centr)
    resg = fc * _WG[3]
    resk = fc * _WGK[7]
    resabs = abs(resk)
    fv1 = [0.0] * 7
    fv2 = [0.0] * 7
    for j in range(7):
        absc = hlgth * _XGK[j]
        f1 = f(centr - absc)
        f2 = f(centr + absc)
        fv1[j], fv2[j] = f1, f2
        fsum = f1 + f2
        resk += _WGK[j] * fsum
        resabs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            resg += _WG[j // 2] * fsum
    reskh = 0.5 * resk
    resasc = _WGK[7] * abs(fc - reskh)
    for j in range(7):
        resasc += _WGK[j] * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh))
    result = resk * hlgth
    resabs *= abs(hlgth)
    resasc *= abs(hlgth)
    err = abs((resk - resg) * hlgth)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > _UFLOW / (50.0 * _EPS):
        err = max(50.0 * _EPS * resabs, err)
    if not math.isfinite(result):
        raise ConvergenceError(f"non-finite integrand on [{a}, {b}]")
    return result, err


def _adaptive(panels: Sequence[tuple[Integrand, float, float]], abs_tol: float,
              rel_tol: float, max_subdivisions: int, extra_error: float = 0.0) -> QuadratureResult:
    """Globally adaptive bisection over several panels sharing one error budget."""
    if abs_tol <= 0 or rel_tol <= 0:
        raise DomainError("quadrature tolerances must be positive")
    heap: list[tuple[float, int, float, float, float, Integrand]] = []
    total = 0.0
    total_err = extra_error
    counter = 0
    for f, a, b in panels:
        val, err = _gk15(f, a, b)
        heapq.heappush(heap, (-err, counter, a, b, val, f))
        counter += 1
        total += val
        total_err += err
    subdivisions = len(heap)
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if subdivisions >= max_subdivisions:
            raise ConvergenceError(
                f"quadrature budget of {max_subdivisions} subdivisions exhausted",
                estimate=total, abs_error_estimate=total_err)
        neg_err, _, a, b, val, f = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not a < mid < b:
            raise ConvergenceError("interval too small to bisect further",
                                   estimate=total, abs_error_estimate=total_err)
        v1, e1 = _gk15(f, a, mid)
        v2, e2 = _gk15(f, mid, b)
        heapq.heappush(heap, (-e1, counter, a, mid, v1, f))
        heapq.heappush(heap, (-e2, counter + 1, mid, b, v2, f))
        counter += 2
        subdivisions += 1
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
    # re-sum to shed the drift of the running updates
    total = math.fsum(item[4] for item in heap)
    total_err = math.fsum(-item[0] for item in heap) + extra_error
    return QuadratureResult(total, total_err, subdivisions)


def _panels(f: Integrand, a: float, b: float,
            points: Sequence[float]) -> list[tuple[Integrand, float, float]]:
    edges = [a, *sorted(p for p in points if a < p < b), b]
    return [(f, lo, hi) for lo, hi in zip(edges, edges[1:])]


def integrate_interval(f: Integrand, a: float, b: float, abs_tol: float = DEFAULT_ABS_TOL,
                       rel_tol: float = DEFAULT_REL_TOL,
                       max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS, *,
                       points: Sequence[float] = (),
                       extra_error: float = 0.0) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over the finite interval [a, b].

    ``points`` are interior breakpoints (peaks, kinks) seeded as panel edges;
    ``extra_error`` (e.g. a truncated-tail bound) is added to the error budget.
    """
    if not a < b:
        raise DomainError(f"integrate_interval requires a < b, got [{a}, {b}]")
    return _adaptive(_panels(f, a, b, points), abs_tol, rel_tol, max_subdivisions,
                     extra_error)


def integrate_pieces(pieces: Sequence[tuple[Integrand, float, float]],
                     abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
                     max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS) -> QuadratureResult:
    """Sum of integrals of several ``(f, a, b)`` pieces under one shared error budget."""
    for _, a, b in pieces:
        if not a < b:
            raise DomainError(f"integrate_pieces requires a < b, got [{a}, {b}]")
    return _adaptive(list(pieces), abs_tol, rel_tol, max_subdivisions)


def integrate_semiline(f: Integrand, abs_tol: float = DEFAULT_ABS_TOL,
                       rel_tol: float = DEFAULT_REL_TOL, *, split: float = 1.0,
                       decay: float = 1.0,
                       tail_bound: Callable[[float], float] | None = None,
                       max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS) -> QuadratureResult:
    """Integral of ``f`` over (0, inf).

    Without ``tail_bound`` the range is cut at ``split`` and the upper piece is
    mapped onto (0, 1] by t = split * u**(-1/decay). If f(t) ~ t**(-1 - decay)
    the mapped integrand tends to a constant at u = 0; exponential decay is
    handled for any ``decay``. With ``tail_bound`` (a certified bound on the
    integral of |f| over [T, inf)), a cutoff T is grown geometrically until the
    bound is below 0.1 * abs_tol; the bound is added to the reported error.

    The integrand is never evaluated at 0 or at the cutoff points.
    """
    if split <= 0:
        raise DomainError("split point must be positive")
    if not decay > 0:
        raise DomainError("decay rate must be positive")
    if tail_bound is None:
        inv = 1.0 / decay

        def mapped(u: float) -> float:
            if -inv * math.log(u) > 700.0:
                return 0.0  # t beyond 1e304: decayed below any useful contribution
            t = split * u**-inv
            return f(t) * inv * t / u

        return _adaptive([(f, 0.0, split), (mapped, 0.0, 1.0)], abs_tol, rel_tol,
                         max_subdivisions)
    cutoff = 2.0 * split
    tail = tail_bound(cutoff)
    for _ in range(200):
        if tail <= 0.1 * abs_tol:
            break
        cutoff *= 2.0
        tail = tail_bound(cutoff)
    else:
        raise ConvergenceError("tail bound never fell below the tolerance")
    return _adaptive([(f, 0.0, split), (f, split, cutoff)], abs_tol, rel_tol,
                     max_subdivisions, extra_error=tail)


# --- minimisation ---------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def grid_scan(g: Callable[[float], float], lo: float = 1e-3, hi: float = 1e3,
              points: int = 64) -> tuple[tuple[float, float], int, list[float], list[float]]:
    """Log-spaced scan of ``g`` on [lo, hi].

    Returns the bracket formed by the neighbours of the smallest sample, the
    number of strict interior local minima among the samples, and the samples.
    """
    if not 0 < lo < hi or points < 3:
        raise DomainError("grid_scan needs 0 < lo < hi and at least 3 points")
    ratio = (hi / lo) ** (1.0 / (points - 1))
    xs = [lo * ratio**i for i in range(points)]
    xs[-1] = hi
    ys = [g(x) for x in xs]
    i_min = min(range(points), key=ys.__getitem__)
    local = sum(1 for i in range(1, points - 1) if ys[i] < ys[i - 1] and ys[i] < ys[i + 1])
    lo_i = max(i_min - 1, 0)
    hi_i = min(i_min + 1, points - 1)
    return (xs[lo_i], xs[hi_i]), local, xs, ys


def golden_section(g: Callable[[float], float], a: float, b: float, x_tol: float,
                   max_iter: int) -> tuple[float, float, int]:
    """(arg_min, min_value, iterations) of a unimodal ``g`` on [a, b]; no edge checks."""
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = g(x1), g(x2)
    it = 0
    while b - a > x_tol and it < max_iter:
        it += 1
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = g(x2)
    return (x1, f1, it) if f1 <= f2 else (x2, f2, it)


def minimize_scalar(g: Callable[[float], float], initial_bracket: tuple[float, float],
                    x_tol: float = 1e-10, *, derivative: Callable[[float], float] | None = None,
                    max_iter: int = 500) -> MinimizationResult:
    """Minimise a unimodal ``g`` on ``initial_bracket``.

    Golden-section search by default. When ``derivative`` is supplied and
    changes sign across the bracket, the stationary point is found by
    bisection on the derivative instead, which is not limited by the
    sqrt(machine epsilon) flatness of ``g`` near its minimum.
    """
    a, b = initial_bracket
    if not (a < b) or x_tol <= 0:
        raise DomainError("minimize_scalar needs a < b and x_tol > 0")
    ga, gb = g(a), g(b)
    if derivative is not None:
        da, db = derivative(a), derivative(b)
        if da < 0 < db:
            lo, hi = a, b
            it = 0
            while hi - lo > x_tol and it < max_iter:
                it += 1
                mid = 0.5 * (lo + hi)
                if derivative(mid) < 0:
                    lo = mid
                else:
                    hi = mid
            x = 0.5 * (lo + hi)
            return MinimizationResult(x, g(x), max(it, 1), (a, b))
    x, fx, it = golden_section(g, a, b, x_tol, max_iter)
    edge = min(ga, gb)
    if edge <= fx <= edge + 8 * _EPS * abs(edge):
        # g is flat to rounding across the bracket: the minimum value is known
        # even though its location is not
        x, fx = (a, ga) if ga <= gb else (b, gb)
        return MinimizationResult(x, fx, max(it, 1), (a, b))
    if not fx < edge:
        raise BracketingError(
            f"bracket ({a}, {b}) does not enclose a descent: "
            f"g(a)={ga:.6g}, g(b)={gb:.6g}, best interior value {fx:.6g} at {x:.6g}")
    return MinimizationResult(x, fx, max(it, 1), (a, b))


def minimize_on_halfline(g: Callable[[float], float], x_tol: float = 1e-10, *,
                         derivative: Callable[[float], float] | None = None,
                         lo: float = 1e-3, hi: float = 1e3, points: int = 64,
                         max_widenings: int = 100) -> MinimizationResult:
    """Grid scan on [lo, hi] (widened by 1e3 when the minimum sits on an edge), then refine.

    ``x_tol`` is absolute for minima above 1 and relative below it.
    """
    for _ in range(max_widenings + 1):
        bracket, local, xs, ys = grid_scan(g, lo, hi, points)
        i_min = min(range(len(ys)), key=ys.__getitem__)
        if i_min == 0 and lo > 1e-290:
            lo /= 1e3
            continue
        if i_min == len(xs) - 1 and hi < 1e290:
            hi *= 1e3
            continue
        if 0 < i_min < len(xs) - 1:
            break
        raise BracketingError(f"no interior minimum found on [{lo}, {hi}]")
    else:
        raise BracketingError(f"no interior minimum found on [{lo}, {hi}]")
    res = minimize_scalar(g, bracket, x_tol * min(1.0, bracket[1]), derivative=derivative)
    return MinimizationResult(res.arg_min, res.min_value, res.iterations, res.bracket,
                              max(local, 1))
