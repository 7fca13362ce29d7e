"""Bessel-potential kernels G_{nu,d} and the sharpness witnesses built on them.

G_{nu,d} is the inverse Fourier transform of (1 + |k|^2)^(-nu/2) with the
symmetric (2 pi)^(-d/2) convention; every evaluation here is radial.
Norms of the trial functions are always computed on the Fourier side, where
the H^n weight is (1 + |k|^2)^n and the L^2 weight is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from . import numerics
from .bounds_lower import log_i_integral, phi, profile_integral
from .bounds_upper import radial_weight_integral, upper_bound
from .errors import DomainError
from .specfun import bessel_k, ln_gamma


@dataclass(frozen=True)
class KernelSpec:
    nu: float
    d: int

    def __post_init__(self) -> None:
        if not self.nu > 0:
            raise DomainError(f"kernel order must be positive (nu = 0 is a delta), got {self.nu!r}")
        if self.d < 1 or self.d != int(self.d):
            raise DomainError(f"d must be a positive integer, got {self.d!r}")


def g_kernel(spec: KernelSpec, radius: float) -> float:
    """G_{nu,d}(x) at |x| = radius: |x|^(nu/2 - d/2) K_{nu/2 - d/2}(|x|) / (2^(nu/2 - 1) Gamma(nu/2))."""
    if not radius > 0:
        raise DomainError(f"radius must be positive, got {radius!r}")
    order = spec.nu / 2 - spec.d / 2
    k = bessel_k(abs(order), radius).value
    log_norm = (spec.nu / 2 - 1) * math.log(2.0) + ln_gamma(spec.nu / 2).value
    return radius**order * k * math.exp(-log_norm)


def scaled_ratio(r: float, n: float, d: int, lam: float) -> float:
    """||G_{2n,d}(lam .)||_{L^r} / ||G_{2n,d}(lam .)||_{H^n}.

    Every value is a lower bound on the sharp constant; the supremum over
    ``lam`` is the trial-function bound S-.
    """
    i_res = log_i_integral(r, n, d)
    phi_val = phi(r, n, d, lam).value
    log_ratio = ((0.5 - 1 / r) * (ln_gamma(d / 2).value - math.log(2) - (d / 2) * math.log(math.pi))
                 + i_res.log_value / r - (n - 1) * math.log(2) - ln_gamma(n).value
                 - 0.5 * math.log(phi_val))
    return math.exp(log_ratio)


def supnorm_sharpness_residual(n: float, d: int) -> float:
    """Relative gap between ||G_{2n,d}||_inf / ||G_{2n,d}||_{H^n} and S+_{inf,n,d}.

    The ratio is (2 pi)^(-d/2) sqrt(int dk (1 + |k|^2)^(-n)), so G_{2n,d}
    attains the upper bound and the residual sits at rounding level.
    """
    if not n > d / 2:
        raise DomainError(f"G_(2n,d) is bounded only for n > d/2, got n={n}, d={d}")
    ratio = (2 * math.pi) ** (-d / 2) * math.sqrt(radial_weight_integral(2 * n, d))
    s_inf = upper_bound(math.inf, n, d)
    return abs(ratio - s_inf) / s_inf


def l2_scaling_limit(n: float, d: int, lambdas: Iterable[float], *,
                     abs_tol: float = numerics.DEFAULT_ABS_TOL,
                     rel_tol: float = numerics.DEFAULT_REL_TOL) -> list[float]:
    """||f(lam .)||_{L^2} / ||f(lam .)||_{H^n} for f = G_{2n,d}, one value per ``lam``.

    After rescaling k = lam h the ratio squared is
    int s^(d-1) (1+s^2)^(-2n) ds / int s^(d-1) (1 + lam^2 s^2)^n (1+s^2)^(-2n) ds,
    which tends to 1 as lam -> 0.
    """
    if not n > d / 2:
        raise DomainError(f"the trial function needs n > d/2, got n={n}, d={d}")

    def weighted(lam: float) -> float:
        return profile_integral(n, d, lam, abs_tol, rel_tol).value

    l2_sq = weighted(0.0)
    out = []
    for lam in lambdas:
        if not lam > 0:
            raise DomainError(f"scaling parameter must be positive, got {lam!r}")
        out.append(math.sqrt(l2_sq / weighted(lam)))
    return out
