"""Hausdorff-Young-Hoelder upper bounds S+ on the imbedding constants.

Exponents run on ``1/r``, so r = inf is the ordinary value ``inv_r = 0``,
and on ``1/2 - 1/r`` formed from ``r - 2``, so S+ keeps full relative
accuracy in ``log S+`` as r -> 2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConsistencyError, DomainError
from .specfun import EPS, ln_gamma_ratio, log_e_power


class Admissibility(enum.Enum):
    R2_ONLY = "r2_only"              # n = 0, r = 2
    SUBCRITICAL = "subcritical"      # 0 < n < d/2, 2 <= r < d/(d/2 - n)
    CRITICAL = "critical"            # n = d/2, 2 <= r < inf
    SUPERCRITICAL = "supercritical"  # n > d/2, 2 <= r <= inf
    INADMISSIBLE = "inadmissible"


def _inadmissibility_reason(r: float, n: float, d: int) -> str | None:
    if d < 1 or d != int(d):
        return f"d must be a positive integer, got {d!r}"
    if math.isnan(r) or r < 2:
        return f"r must lie in [2, inf], got {r!r}"
    if math.isnan(n) or n < 0:
        return f"n must be >= 0, got {n!r}"
    half_d = d / 2
    if n == 0:
        if r != 2:
            return "n = 0 requires r = 2"
    elif n < half_d:
        limit = d / (half_d - n)
        if not r < limit:
            return f"0 < n < d/2 requires 2 <= r < d/(d/2 - n) = {limit:.12g}"
    elif n == half_d:
        if math.isinf(r):
            return "n = d/2 requires r < inf"
    return None


def classify(r: float, n: float, d: int) -> Admissibility:
    """Admissibility class of the triple (r, n, d)."""
    if _inadmissibility_reason(r, n, d) is not None:
        return Admissibility.INADMISSIBLE
    if n == 0:
        return Admissibility.R2_ONLY
    if n < d / 2:
        return Admissibility.SUBCRITICAL
    if n == d / 2:
        return Admissibility.CRITICAL
    return Admissibility.SUPERCRITICAL


@dataclass(frozen=True)
class EmbeddingParams:
    """A triple (r, n, d); ``r`` may be ``math.inf``."""

    r: float
    n: float
    d: int

    @property
    def inv_r(self) -> float:
        return 0.0 if math.isinf(self.r) else 1.0 / self.r

    @property
    def admissibility(self) -> Admissibility:
        return classify(self.r, self.n, self.d)

    @property
    def is_admissible(self) -> bool:
        return self.admissibility is not Admissibility.INADMISSIBLE

    def require_admissible(self) -> EmbeddingParams:
        reason = _inadmissibility_reason(self.r, self.n, self.d)
        if reason is not None:
            raise DomainError(f"inadmissible triple (r={self.r}, n={self.n}, d={self.d}): {reason}")
        return self


@dataclass(frozen=True)
class UpperBoundBreakdown:
    s_conjugate: float     # s = 2 / (1 - 2/r); inf at r = 2
    p_conjugate: float     # Hoelder conjugate of r
    hy_constant: float     # sharp Hausdorff-Young constant C_{r,d}
    weight_integral: float  # int_{R^d} dk (1+|k|^2)^(-n s/2); unused (inf) at r = 2
    s_plus: float


def _inv_r(r: float) -> float:
    if math.isnan(r) or r < 2:
        raise DomainError(f"r must lie in [2, inf], got {r!r}")
    return 0.0 if math.isinf(r) else 1.0 / r


def _half_minus_inv_r(r: float) -> float:
    """1/2 - 1/r, formed from r - 2 so it stays accurate as r -> 2."""
    return 0.5 if math.isinf(r) else (r - 2.0) / (2.0 * r)


def _log_e_ratio(r: float) -> float:
    """log(E(1/r) / E(1 - 1/r)), with E(s) = s^s."""
    delta = _half_minus_inv_r(r)
    if delta < 0.25:
        # 1/r = 1/2 - delta and 1 - 1/r = 1/2 + delta
        return (0.5 * (math.log1p(-2 * delta) - math.log1p(2 * delta))
                - delta * math.log(0.25 - delta * delta))
    inv_r = _inv_r(r)
    return log_e_power(inv_r) - log_e_power(1.0 - inv_r)


def _log_hausdorff_young(r: float, d: int) -> float:
    return -d * _half_minus_inv_r(r) * math.log(2 * math.pi) + (d / 2) * _log_e_ratio(r)


def hausdorff_young_constant(r: float, d: int) -> float:
    """C_{r,d} = (2 pi)^(d/r - d/2) (E(1/r) / E(1 - 1/r))^(d/2)."""
    if d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    _inv_r(r)
    return math.exp(_log_hausdorff_young(r, d))


def _log_radial_weight_integral(mu: float, d: int) -> float:
    if not mu > d:
        raise DomainError(f"weight integral diverges: need mu > d, got mu={mu!r}, d={d}")
    return (d / 2) * math.log(math.pi) + ln_gamma_ratio(mu / 2, d / 2).value


def radial_weight_integral(mu: float, d: int) -> float:
    """int_{R^d} dk (1 + |k|^2)^(-mu/2) = pi^(d/2) Gamma((mu - d)/2) / Gamma(mu/2)."""
    return math.exp(_log_radial_weight_integral(mu, d))


def _log_upper_closed_form(r: float, n: float, d: int) -> float:
    """Logarithm of the closed-form S+ for 2 < r <= inf.

    Every term carries the factor 1/2 - 1/r explicitly, so the result keeps
    its relative accuracy as r -> 2, where S+ -> 1.
    """
    delta = _half_minus_inv_r(r)
    a = n / (2.0 * delta)
    return (delta * (-(d / 2) * math.log(4 * math.pi) + ln_gamma_ratio(a, d / 2).value)
            + (d / 2) * _log_e_ratio(r))


def upper_bound_breakdown(r: float, n: float, d: int) -> UpperBoundBreakdown:
    """S+ together with the exponents and factors it is assembled from.

    The closed form is cross-checked against C_{r,d} * (weight integral)^(1/s);
    a mismatch beyond 1e-12 relative (widened by the conditioning of
    Gamma((ns - d)/2) next to its pole) raises :class:`ConsistencyError`.
    """
    params = EmbeddingParams(r, n, d).require_admissible()
    inv_r = params.inv_r
    if r == 2:
        return UpperBoundBreakdown(math.inf, 2.0, 1.0, math.inf, 1.0)
    s = 1.0 / _half_minus_inv_r(r)
    p = 1.0 / (1.0 - inv_r)
    log_c = _log_hausdorff_young(r, d)
    log_w = _log_radial_weight_integral(n * s, d)
    log_closed = _log_upper_closed_form(r, n, d)
    log_composed = log_c + log_w / s
    # near the subcritical limit ln Gamma((ns - d)/2) amplifies rounding in ns - d
    conditioning = (n * s + d) / (s * (n * s - d))
    tol = 1e-12 * max(1.0, abs(log_closed)) + 64 * EPS * conditioning
    if abs(log_closed - log_composed) > tol:
        raise ConsistencyError(
            f"S+ closed form and Hausdorff-Young composition disagree for "
            f"(r={r}, n={n}, d={d}): {log_closed!r} vs {log_composed!r} (logs)")
    return UpperBoundBreakdown(s, p, math.exp(log_c), math.exp(log_w), math.exp(log_closed))


def upper_bound(r: float, n: float, d: int) -> float:
    """The Hausdorff-Young-Hoelder upper bound S+_{r,n,d}."""
    return upper_bound_breakdown(r, n, d).s_plus
