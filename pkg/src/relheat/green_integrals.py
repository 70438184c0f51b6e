"""Deterministic pieces of the time integral behind the killed Green function.

Integrating the two-sided heat kernel profile over ``t`` splits into

    J = I1 + (1 ∧ δx)^{α/2} (1 ∧ δy)^{α/2} (I2(r) + m^{d/α-1} I3(m^{1/α} r))

with ``I1`` over ``t <= 1``, ``I2`` over ``1 < t <= 1/m`` and ``I3`` the
rescaled large-time tail. Every integrand is piecewise smooth with kinks at
known places, which are passed to the quadrature as break points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds_catalog import green_display
from .model import ProcessParams
from .special_functions import DEFAULT_QUAD, QuadratureSpec, adaptive_quad, phi_profile

REGIME_NEAR, REGIME_FAR = "near", "far"


@dataclass(frozen=True)
class GreenDecomposition:
    """Components of ``J`` at one ``(δx, δy, r)``.

    ``I3`` holds ``I3(m^{1/α} r)``, the value that enters ``J``. ``display`` is
    the closed-form Green profile at the same point.
    """

    I1: float
    I2: float
    I3: float
    J: float
    regime: str
    display: float

    @property
    def ratio(self) -> float:
        return self.J / self.display


def regime(params: ProcessParams, r: float) -> str:
    """``near`` when ``m^{1/α} r <= 1`` (boundary included), ``far`` otherwise."""
    return REGIME_NEAR if params.m ** (1 / params.alpha) * r <= 1.0 else REGIME_FAR


def _jump_coefficient(params: ProcessParams, r: float, c: float) -> float:
    d, a = params.d, params.alpha
    return phi_profile(params.m ** (1 / a) * r / c, d, a) / r ** (d + a)


def _crossing_time(params: ProcessParams, coef: float) -> float:
    # t^{-d/α} = coef * t  <=>  t = coef^{-α/(d+α)}
    d, a = params.d, params.alpha
    return coef ** (-a / (d + a))


def _clamp(delta: float, t: float, alpha: float) -> float:
    if math.isinf(delta):
        return 1.0
    return min(1.0, delta / t ** (1 / alpha)) ** (alpha / 2)


def compute_I1(params: ProcessParams, delta_x: float, delta_y: float, r: float,
               c: float = 1.0, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Small-time piece ``∫_0^1 clamp_x clamp_y (t^{-d/α} ∧ t φ(m^{1/α} r / c) / r^{d+α}) dt``."""
    if not r > 0:
        raise ValueError("r must be positive")
    if delta_x < 0 or delta_y < 0:
        raise ValueError("boundary distances must be nonnegative")
    d, a = params.d, params.alpha
    coef = _jump_coefficient(params, r, c)

    def f(t):
        if t <= 0.0:
            return 0.0
        return (_clamp(delta_x, t, a) * _clamp(delta_y, t, a)
                * min(t ** (-d / a), coef * t))

    breaks = [_crossing_time(params, coef)]
    breaks += [dl ** a for dl in (delta_x, delta_y) if 0 < dl < math.inf]
    return adaptive_quad(f, 0.0, 1.0, spec, points=breaks)[0]


def compute_I1_usub(params: ProcessParams, delta_x: float, delta_y: float, r: float,
                    c: float = 1.0, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``I1`` through ``u = r^α / t``, valid when the jump term is the minimum on ``(0, 1]``.

    Then ``I1 = φ r^{α-d} ∫_{r^α}^∞ u^{-3} (1 ∧ √u δx^{α/2} / r^{α/2}) (1 ∧ √u δy^{α/2} / r^{α/2}) du``.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    d, a = params.d, params.alpha
    coef = _jump_coefficient(params, r, c)
    if _crossing_time(params, coef) < 1.0:
        raise ValueError("u-substitution form needs the jump term to be the minimum for t <= 1")
    phi = coef * r ** (d + a)
    ra = r ** a

    def side(delta, u):
        if math.isinf(delta):
            return 1.0
        return min(1.0, math.sqrt(u) * delta ** (a / 2) / r ** (a / 2))

    def f(u):
        return u ** -3 * side(delta_x, u) * side(delta_y, u)

    breaks = [ra / dl ** a for dl in (delta_x, delta_y) if 0 < dl < math.inf]
    # the tail beyond the last kink is u^{-3}, integrated exactly
    top = max([ra, *breaks]) * 4.0
    head = adaptive_quad(f, ra, top, spec, points=breaks)[0]
    tail = 0.5 * top ** -2 * side(delta_x, top) * side(delta_y, top)
    return phi / r ** (d - a) * (head + tail)


def compute_I2(params: ProcessParams, r: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Intermediate piece ``∫_1^{1/m} t^{-d/α} ∧ t φ(m^{1/α} r) / r^{d+α} dt`` for ``0 < m <= 1/2``."""
    if not 0 < params.m <= 0.5:
        raise ValueError("I2 is defined for 0 < m <= 1/2")
    if not r > 0:
        raise ValueError("r must be positive")
    d, a = params.d, params.alpha
    coef = _jump_coefficient(params, r, 1.0)

    def f(t):
        return min(t ** (-d / a), coef * t)

    return adaptive_quad(f, 1.0, 1.0 / params.m, spec,
                         points=[_crossing_time(params, coef)])[0]


def compute_I3(r: float, d: int, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Large-time piece ``∫_1^∞ t^{-d/2} exp(-(r ∧ r²/t)) dt``, split at ``t = r``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if d < 3:
        raise ValueError("I3 converges only for d >= 3")
    kink = max(1.0, r)
    total = 0.0
    if kink > 1.0:
        total += adaptive_quad(lambda t: t ** (-d / 2) * math.exp(-r), 1.0, kink, spec)[0]
    if r == 0.0:
        return total + adaptive_quad(lambda t: t ** (-d / 2), 1.0, math.inf, spec)[0]
    # t = r^2 / v^2 maps the tail onto a finite range with a smooth integrand
    top = r / math.sqrt(kink)
    tail = adaptive_quad(lambda v: v ** (d - 3) * math.exp(-v * v), 0.0, top, spec)[0]
    return total + 2.0 * r ** (2 - d) * tail


def assemble_J(params: ProcessParams, delta_x: float, delta_y: float, r: float,
               spec: QuadratureSpec = DEFAULT_QUAD) -> GreenDecomposition:
    if not 0 < params.m <= 0.5:
        raise ValueError("the decomposition is set up for 0 < m <= 1/2")
    d, a, m = params.d, params.alpha, params.m
    i1 = compute_I1(params, delta_x, delta_y, r, 1.0, spec)
    i2 = compute_I2(params, r, spec)
    i3 = compute_I3(m ** (1 / a) * r, d, spec)
    bx = min(1.0, delta_x) ** (a / 2)
    by = min(1.0, delta_y) ** (a / 2)
    j = i1 + bx * by * (i2 + m ** (d / a - 1) * i3)
    return GreenDecomposition(i1, i2, i3, j, regime(params, r),
                              green_display(params, delta_x, delta_y, r))


def g1_display(r: float, d: int) -> float:
    return min(1.0, r ** (2 - d)) if r > 0 else 1.0


def g2_display(params: ProcessParams, r: float) -> float:
    return min(1.0, r ** (params.alpha - params.d))


def g3_display(params: ProcessParams, r: float, keep_polynomial: bool = False) -> float:
    """``e^{-ρ} / (ρ² r^{d-α})`` with ``ρ = m^{1/α} r``.

    The plain form replaces ``φ(ρ)`` by ``e^{-ρ}``; ``keep_polynomial`` restores
    the factor ``1 + ρ^{(d+α-1)/2}`` that this drops.
    """
    d, a = params.d, params.alpha
    rho = params.m ** (1 / a) * r
    out = math.exp(-rho) / (rho * rho * r ** (d - a))
    if keep_polynomial:
        out *= 1.0 + rho ** ((d + a - 1) / 2)
    return out


def ratio_spread(values, displays) -> float:
    """``max(v/g) / min(v/g)``: one window holds every ratio iff this is finite and small."""
    q = np.asarray(values, dtype=float) / np.asarray(displays, dtype=float)
    if np.any(q <= 0) or not np.all(np.isfinite(q)):
        return math.inf
    return float(q.max() / q.min())
