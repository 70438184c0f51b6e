"""Deterministic numerical primitives.

Gamma function, the stable Lévy-density constant, the tempering profile
``psi`` with its closed-form surrogate ``phi``, Bessel functions of the first
kind, and a thin adaptive-quadrature contract used by every other module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")

    def refined(self, factor: float = 2.0) -> "QuadratureSpec":
        """Tighter tolerances and a larger subdivision budget."""
        return QuadratureSpec(self.abs_tol / factor**2, self.rel_tol / factor**2,
                              int(self.max_subdivisions * factor))


DEFAULT_QUAD = QuadratureSpec()


def adaptive_quad(f: Callable[[float], float], a: float, b: float,
                  spec: QuadratureSpec = DEFAULT_QUAD,
                  points: Sequence[float] | None = None) -> tuple[float, float]:
    """Integrate ``f`` over ``[a, b]`` and return ``(value, error_estimate)``.

    Interior ``points`` become forced break points. Raises
    :class:`QuadratureError` when the reported error exceeds
    ``max(abs_tol, rel_tol * |value|)``.
    """
    if points is not None:
        pts = sorted(p for p in points if a < p < b)
    else:
        pts = []
    edges = [a, *pts, b]
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = integrate.quad(f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                              limit=spec.max_subdivisions, full_output=1)[:2]
        total += v
        err += e
    if not math.isfinite(total) or err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        raise QuadratureError(
            f"quadrature on [{a}, {b}] reached error {err:.3e} for value {total:.6e}")
    return total, err


def gamma_fn(x: float) -> float:
    if not x > 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")


def stable_constant(d: int, alpha: float) -> float:
    """Normalising constant A(d, -alpha) of the isotropic alpha-stable Lévy density."""
    _check_alpha(alpha)
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return (alpha * math.gamma((d + alpha) / 2)
            / (2.0 ** (1 - alpha) * math.pi ** (d / 2) * math.gamma(1 - alpha / 2)))


def phi_profile(r: float, d: int, alpha: float) -> float:
    """Closed-form surrogate ``e^{-r} (1 + r^{(d+alpha-1)/2})``."""
    return math.exp(-r) * (1.0 + r ** ((d + alpha - 1) / 2))


def log_psi_profile(r: float, d: int, alpha: float,
                    spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Logarithm of the exact tempering factor ``psi(r)``.

    The s-integrand ``s^{nu-1} exp(-s/4 - r^2/s)`` peaks at ``s = 2r`` with
    value ``exp(-r)``; that factor is pulled out analytically so the
    remaining quadrature is O(1) for every ``r``.
    """
    if r < 0:
        raise ValueError("psi is defined for r >= 0")
    return _log_psi_cached(float(r), int(d), float(alpha), spec)


@lru_cache(maxsize=4096)
def _log_psi_cached(r: float, d: int, alpha: float, spec: QuadratureSpec) -> float:
    nu = (d + alpha) / 2
    lognorm = -(d + alpha) * math.log(2.0) - math.lgamma(nu)
    if r == 0.0:
        return 0.0
    # exponent after removing exp(-r): (s - 2r)^2 / (4s) >= 0
    def integrand(s):
        if s <= 0.0:
            return 0.0
        return math.exp((nu - 1) * math.log(s) - (s - 2 * r) ** 2 / (4 * s))

    peak = 2.0 * r
    width = math.sqrt(8.0 * r) + 1.0
    pts = [peak]
    for k in (1, 3, 8, 20):
        pts.append(peak + k * width)
        if peak - k * width > 0:
            pts.append(peak - k * width)
    upper = peak + 60.0 * width + 40.0 * (nu + 1)
    val, _ = adaptive_quad(integrand, 0.0, upper, spec, points=pts)
    tail, _ = adaptive_quad(integrand, upper, math.inf, spec)
    # psi <= 1 exactly; clip quadrature rounding at tiny r
    return min(0.0, lognorm - r + math.log(val + tail))


def psi_profile(r: float, d: int, alpha: float,
                spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Exact tempering factor of the relativistic Lévy density; ``psi(0) = 1``."""
    return math.exp(log_psi_profile(r, d, alpha, spec))


BESSEL_MAX_ARG = 1e4


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind ``J_nu(x)`` for ``nu >= 0``, ``0 <= x <= 1e4``."""
    if nu < 0 or x < 0:
        raise ValueError("bessel_j requires nu >= 0 and x >= 0")
    if x > BESSEL_MAX_ARG:
        raise OverflowError(f"bessel_j argument {x} outside validated range [0, {BESSEL_MAX_ARG}]")
    return float(special.jv(nu, x))


def bessel_j_zeros(nu: float, count: int) -> np.ndarray:
    """First ``count`` positive zeros of ``J_nu`` (``nu > -1``).

    McMahon's expansion gives starting points that Newton iteration polishes.
    """
    k = np.arange(1, count + 1, dtype=float)
    mu = 4.0 * nu * nu
    b = (k + nu / 2 - 0.25) * math.pi
    z = b - (mu - 1) / (8 * b) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * b) ** 3)
    if nu > 2.5:
        # McMahon is poor for the first zeros at higher order; use the
        # asymptotic of Olver for the leading zero region.
        z = np.maximum(z, nu + 1.8557571 * nu ** (1 / 3) + (k - 1) * math.pi)
    for _ in range(20):
        f = special.jv(nu, z)
        fp = special.jvp(nu, z)
        step = f / fp
        z = z - step
        if np.all(np.abs(step) < 1e-14 * np.abs(z)):
            break
    return z
