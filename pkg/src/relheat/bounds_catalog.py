"""Comparison profiles for the heat kernel, Green function and hitting probability.

Every profile is returned without its multiplicative constant; the
envelope harness fits that constant. Constants that sit inside an exponent
(the ``c`` of the two-regime profiles) are fixed parameters, because letting
a fit push them to an extreme would make any comparison pass.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .model import ExteriorBallDomain, ProcessParams, SpaceTimePoint, delta_D, levy_density
from .special_functions import phi_profile

LOWER, UPPER = "lower", "upper"


def default_exponent_constant(alpha: float) -> float:
    """Smallest ``C`` with ``Psi_{1/C} <~ p <~ Psi_C`` in both tails.

    The Gaussian regime decays like ``exp(-m^{2/alpha-1} r^2 / (2 alpha t))``
    and the jump regime like ``exp(-m^{1/alpha} r)``.
    """
    return 2.0 * max(1.0, alpha)


def _sep(x, y) -> float:
    return float(np.linalg.norm(np.subtract(np.atleast_1d(x), np.atleast_1d(y))))


def _check_side(side: str) -> None:
    if side not in (LOWER, UPPER):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


def _side_constant(side: str, c: float) -> float:
    return 1.0 / c if side == LOWER else c


def _large_time(d, alpha, m, c, t, r):
    expo = min(m ** (1 / alpha) * r, m ** (2 / alpha - 1) * r * r / t)
    return m ** (d / alpha - d / 2) * t ** (-d / 2) * math.exp(-expo / c)


def _small_time_phi(d, alpha, m, c, t, r):
    head = t ** (-d / alpha)
    if r == 0:
        return head
    return min(head, t * phi_profile(m ** (1 / alpha) * r / c, d, alpha) / r ** (d + alpha))


def profile_Psi(d: int, alpha: float, m: float, b: float, c: float, t: float, x, y) -> float:
    """Two-regime profile with the ``phi`` surrogate, split at ``t = b/m``."""
    if not t > 0:
        raise ValueError("t must be positive")
    r = _sep(x, y)
    if m > 0 and t > b / m:
        return _large_time(d, alpha, m, c, t, r)
    return _small_time_phi(d, alpha, m, c, t, r)


def profile_Psi_tilde(d: int, alpha: float, m: float, c: float, t: float, x, y) -> float:
    """Two-regime profile with the exact Lévy density, split at ``t = 1/m``."""
    if not t > 0:
        raise ValueError("t must be positive")
    r = _sep(x, y)
    if m > 0 and t > 1 / m:
        return _large_time(d, alpha, m, c, t, r)
    head = t ** (-d / alpha)
    if r == 0:
        return head
    return min(head, t * levy_density(ProcessParams(d, alpha, m), r))


def profile_boundary_factor(delta: float, t: float, alpha: float) -> float:
    """``(1 ∧ delta / (1 ∧ t^{1/alpha}))^{alpha/2}``."""
    if not t > 0:
        raise ValueError("t must be positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return min(1.0, delta / min(1.0, t ** (1 / alpha))) ** (alpha / 2)


def profile_thm11_smalltime(params: ProcessParams, domain: ExteriorBallDomain, t: float, x, y,
                            side: str, t_max: float = 1.0) -> float:
    """Small-time product ``(1 ∧ δ_x^{α/2}/√t)(1 ∧ δ_y^{α/2}/√t)(t^{-d/α} ∧ tφ/r^{d+α})``.

    The upper side evaluates ``phi`` at ``m^{1/α} r / 16``.
    """
    _check_side(side)
    if not 0 < t <= t_max:
        raise ValueError(f"small-time profile valid for 0 < t <= {t_max}")
    d, a, m = params.d, params.alpha, params.m
    bx = min(1.0, delta_D(domain, x) ** (a / 2) / math.sqrt(t))
    by = min(1.0, delta_D(domain, y) ** (a / 2) / math.sqrt(t))
    c = 16.0 if side == UPPER else 1.0
    return bx * by * _small_time_phi(d, a, m, c, t, _sep(x, y))


def profile_thm12(params: ProcessParams, domain: ExteriorBallDomain, b: float, t: float, x, y,
                  side: str, c: float | None = None) -> float:
    """Boundary factors times ``Psi``; the lower side uses ``1/c``, the upper ``c``."""
    _check_side(side)
    c = default_exponent_constant(params.alpha) if c is None else c
    a = params.alpha
    bf = (profile_boundary_factor(delta_D(domain, x), t, a)
          * profile_boundary_factor(delta_D(domain, y), t, a))
    return bf * profile_Psi(params.d, a, params.m, b, _side_constant(side, c), t, x, y)


def profile_thm13_green(params: ProcessParams, domain: ExteriorBallDomain, x, y,
                        side: str = UPPER) -> float:
    """``(1 + (m^{1/α} r)^{2-α}) / r^{d-α}`` times the Green boundary factors."""
    _check_side(side)
    r = _sep(x, y)
    if r == 0:
        raise ValueError("Green profile undefined on the diagonal")
    return green_display(params, delta_D(domain, x), delta_D(domain, y), r)


def green_display(params: ProcessParams, delta_x: float, delta_y: float, r: float) -> float:
    """The Green profile written in terms of the two boundary distances and ``r``."""
    d, a, m = params.d, params.alpha, params.m
    cap = min(r, 1.0)
    bx = min(1.0, delta_x / cap) ** (a / 2)
    by = min(1.0, delta_y / cap) ** (a / 2)
    return (1 + (m ** (1 / a) * r) ** (2 - a)) / r ** (d - a) * bx * by


def profile_free_green(params: ProcessParams, r: float, side: str = UPPER) -> float:
    """``r^{α-d} + m^{(2-α)/α} r^{2-d}``."""
    _check_side(side)
    if not r > 0:
        raise ValueError("Green profile needs r > 0")
    d, a, m = params.d, params.alpha, params.m
    return r ** (a - d) + m ** ((2 - a) / a) * r ** (2 - d)


def profile_hitting(params: ProcessParams, R: float, x_mag: float, side: str = UPPER) -> float:
    """``R^d / (R^α + m^{(2-α)/α} R^2) (|x|^{α-d} + m^{(2-α)/α} |x|^{2-d})`` for ``|x| >= 2R``."""
    _check_side(side)
    if not R > 0:
        raise ValueError("R must be positive")
    if x_mag < 2 * R * (1 - 1e-12):
        raise ValueError("hitting profile is valid only for |x| >= 2R")
    d, a, m = params.d, params.alpha, params.m
    k = m ** ((2 - a) / a)
    return R ** d / (R ** a + k * R * R) * (x_mag ** (a - d) + k * x_mag ** (2 - d))


def profile_interior_lower(params: ProcessParams, t: float, r: float, c2: float = 1.0) -> float:
    """``m^{d/α-d/2} t^{-d/2} exp(-c2 (m^{1/α} r ∧ m^{2/α-1} r^2 / t))``."""
    if not t > 0:
        raise ValueError("t must be positive")
    if params.m <= 0:
        raise ValueError("large-time interior profile needs m > 0")
    return _large_time(params.d, params.alpha, params.m, 1.0 / c2, t, r)


# ---------------------------------------------------------------------------
# envelope harness


@dataclass
class ComparisonProfile:
    name: str
    lower: Callable[[float, np.ndarray, np.ndarray], float]
    upper: Callable[[float, np.ndarray, np.ndarray], float]
    params: ProcessParams | None = None
    domain: ExteriorBallDomain | None = None
    free_constants: dict = field(default_factory=dict)
    validity: Callable[[SpaceTimePoint], bool] | None = None

    def is_valid(self, point: SpaceTimePoint) -> bool:
        return True if self.validity is None else bool(self.validity(point))


@dataclass
class EnvelopeReport:
    name: str
    grid: list
    estimates: list
    errors: list
    ratios_lower: list
    ratios_upper: list
    c_star: float
    spread: float
    spread_cap: float
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def pt(p):
            return {"t": p.t if math.isfinite(p.t) else None, "x": list(p.x), "y": list(p.y)}

        return {
            "name": self.name,
            "c_star": self.c_star,
            "spread": self.spread,
            "spread_cap": self.spread_cap,
            "pass": self.passed,
            "points": [
                {**pt(p), "estimate": e, "error": s, "ratio_lower": rl, "ratio_upper": ru}
                for p, e, s, rl, ru in zip(self.grid, self.estimates, self.errors,
                                          self.ratios_lower, self.ratios_upper)
            ],
            "extra": self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True)


def _value_and_error(out) -> tuple[float, float]:
    if hasattr(out, "value"):
        err = getattr(out, "std_error", None)
        if err is None:
            err = getattr(out, "est_error", 0.0)
        return float(out.value), float(err)
    if isinstance(out, tuple):
        return float(out[0]), float(out[1])
    return float(out), 0.0


def verify_envelope(estimator, profile: ComparisonProfile, grid: Sequence[SpaceTimePoint],
                    spread_cap: float, n_sigma: float = 3.0,
                    values: Sequence | None = None) -> EnvelopeReport:
    """Fit the smallest ``c*`` with ``lower/c* <= estimate <= c* upper`` on the grid.

    Each estimate may move by ``n_sigma`` error bars in its own favour.
    ``values`` short-circuits the estimator with precomputed outputs.
    ``spread`` is ``max(est/lower) / min(est/upper)``, the window that a free
    overall scale would leave.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty grid")
    for p in grid:
        if not profile.is_valid(p):
            raise ValueError(f"grid point {p} outside the validity region of {profile.name}")
    outs = list(values) if values is not None else [estimator(p) for p in grid]
    est, err, rl, ru = [], [], [], []
    c_star = 1.0
    for p, out in zip(grid, outs):
        v, e = _value_and_error(out)
        x, y = np.asarray(p.x), np.asarray(p.y)
        lo = profile.lower(p.t, x, y)
        hi = profile.upper(p.t, x, y)
        v_hi = v + n_sigma * e
        v_lo = max(v - n_sigma * e, 0.0)
        if lo > 0:
            c_star = max(c_star, lo / v_hi if v_hi > 0 else math.inf)
        if hi > 0:
            c_star = max(c_star, v_lo / hi)
        elif v_lo > 0:
            c_star = math.inf
        est.append(v)
        err.append(e)
        rl.append(v / lo if lo > 0 else math.inf)
        ru.append(v / hi if hi > 0 else math.inf)
    finite_l = [r for r in rl if math.isfinite(r)]
    finite_u = [r for r in ru if math.isfinite(r) and r > 0]
    if finite_l and finite_u:
        spread = max(finite_l) / min(finite_u)
    else:
        spread = math.inf
    return EnvelopeReport(profile.name, grid, est, err, rl, ru, float(c_star), float(spread),
                          float(spread_cap), bool(c_star <= spread_cap))


# ---------------------------------------------------------------------------
# ready-made comparison profiles


def psi_tilde_comparison(params: ProcessParams, c: float | None = None) -> ComparisonProfile:
    c = default_exponent_constant(params.alpha) if c is None else c
    d, a, m = params.d, params.alpha, params.m
    return ComparisonProfile(
        "psi_tilde",
        lambda t, x, y: profile_Psi_tilde(d, a, m, 1.0 / c, t, x, y),
        lambda t, x, y: profile_Psi_tilde(d, a, m, c, t, x, y),
        params, None, {"c": c})


def thm11_comparison(params: ProcessParams, domain: ExteriorBallDomain,
                     t_max: float = 1.0) -> ComparisonProfile:
    return ComparisonProfile(
        "thm11_smalltime",
        lambda t, x, y: profile_thm11_smalltime(params, domain, t, x, y, LOWER, t_max),
        lambda t, x, y: profile_thm11_smalltime(params, domain, t, x, y, UPPER, t_max),
        params, domain, {"T": t_max},
        lambda p: 0 < p.t <= t_max and domain.contains(p.x) and domain.contains(p.y))


def thm12_comparison(params: ProcessParams, domain: ExteriorBallDomain, b: float = 1.0,
                     c: float | None = None) -> ComparisonProfile:
    c = default_exponent_constant(params.alpha) if c is None else c
    return ComparisonProfile(
        "thm12_full",
        lambda t, x, y: profile_thm12(params, domain, b, t, x, y, LOWER, c),
        lambda t, x, y: profile_thm12(params, domain, b, t, x, y, UPPER, c),
        params, domain, {"b": b, "c": c},
        lambda p: domain.contains(p.x) and domain.contains(p.y))


def thm13_comparison(params: ProcessParams, domain: ExteriorBallDomain) -> ComparisonProfile:
    f = lambda t, x, y: profile_thm13_green(params, domain, x, y)
    return ComparisonProfile(
        "thm13_green", f, f, params, domain, {},
        lambda p: domain.contains(p.x) and domain.contains(p.y) and _sep(p.x, p.y) > 0)


def free_green_comparison(params: ProcessParams) -> ComparisonProfile:
    f = lambda t, x, y: profile_free_green(params, _sep(x, y))
    return ComparisonProfile("free_green", f, f, params, None, {},
                             lambda p: _sep(p.x, p.y) > 0)


def hitting_comparison(params: ProcessParams, R: float) -> ComparisonProfile:
    f = lambda t, x, y: profile_hitting(params, R, float(np.linalg.norm(x)))
    return ComparisonProfile("lemma41_hitting", f, f, params, ExteriorBallDomain(R), {"R": R},
                             lambda p: float(np.linalg.norm(p.x)) >= 2 * R)


def shift_comparability_check(alpha: float, d: int, a: float, lam: float, T: float,
                              grid: Sequence, spread_cap: float = 10.0) -> EnvelopeReport:
    """Compare ``T^{-d/α} ∧ Tφ(a|x-z|)/|x-z|^{d+α}`` with the same at ``x0 = 0``.

    ``x = lam T^{1/α} e_1``; ``grid`` is a list of points ``z``.
    """
    x0 = np.zeros(d)
    x = x0.copy()
    x[0] = lam * T ** (1 / alpha)

    def g(centre, z):
        r = _sep(centre, z)
        head = T ** (-d / alpha)
        if r == 0:
            return head
        return min(head, T * phi_profile(a * r, d, alpha) / r ** (d + alpha))

    pts = [SpaceTimePoint(T, tuple(x), tuple(np.atleast_1d(z).astype(float))) for z in grid]
    prof = ComparisonProfile("shift_comparability", lambda t, u, z: g(x0, z),
                             lambda t, u, z: g(x0, z), None, None,
                             {"a": a, "lambda": lam, "T": T})
    return verify_envelope(lambda p: g(x, np.asarray(p.y)), prof, pts, spread_cap)
