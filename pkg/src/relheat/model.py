"""Process parameters, exterior-ball geometry and the exact scaling maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .special_functions import DEFAULT_QUAD, QuadratureSpec, log_psi_profile, stable_constant


@dataclass(frozen=True)
class ProcessParams:
    """Relativistic alpha-stable process in dimension ``d`` with mass ``m``.

    ``m = 0`` is the isotropic alpha-stable process.
    """

    d: int = 3
    alpha: float = 1.0
    m: float = 0.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.d}")
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (0, 2), got {self.alpha}")
        if not (self.m >= 0.0 and math.isfinite(self.m)):
            raise ValueError(f"mass must be finite and >= 0, got {self.m}")

    @property
    def mu2(self) -> float:
        """Exponential tilt ``m^{2/alpha}`` of the subordinator."""
        return self.m ** (2.0 / self.alpha) if self.m > 0 else 0.0

    def require_transient(self) -> None:
        if self.d < 3:
            raise ValueError("operation requires a transient process (d >= 3)")

    def with_mass(self, m: float) -> "ProcessParams":
        return replace(self, m=m)


@dataclass(frozen=True)
class ExteriorBallDomain:
    """Complement of the closed ball of radius ``radius`` centred at the origin."""

    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("domain radius must be positive")

    def contains(self, x) -> bool:
        return float(np.linalg.norm(x)) > self.radius

    def scaled(self, factor: float) -> "ExteriorBallDomain":
        return ExteriorBallDomain(self.radius * factor)


@dataclass(frozen=True)
class SpaceTimePoint:
    t: float
    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("time must be positive")
        if len(self.x) != len(self.y):
            raise ValueError("x and y must share a dimension")

    @property
    def separation(self) -> float:
        return float(np.linalg.norm(np.subtract(self.x, self.y)))


def as_point(x, d: int | None = None) -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1 or (d is not None and p.shape[0] != d):
        raise ValueError(f"expected a point in R^{d}, got shape {p.shape}")
    return p


def char_exponent(params: ProcessParams, xi_mag):
    """``(rho^2 + m^{2/alpha})^{alpha/2} - m``, computed without cancellation."""
    rho = np.asarray(xi_mag, dtype=float)
    if np.any(rho < 0):
        raise ValueError("xi_mag must be nonnegative")
    a, m = params.alpha, params.m
    mu2 = params.mu2
    if m == 0 or mu2 == 0:
        out = rho ** a
    else:
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            q = rho * rho / mu2
            # m * expm1((a/2) log1p(q)) avoids cancellation at small rho
            small = m * np.expm1(0.5 * a * np.log1p(q))
            large = rho ** a * np.exp(0.5 * a * np.log1p(1.0 / q)) - m
        out = np.where(q <= 1.0, small, large)
    return float(out) if out.ndim == 0 else out


def levy_density(params: ProcessParams, r: float,
                 spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Jump density ``A(d,-alpha) r^{-d-alpha} psi(m^{1/alpha} r)``."""
    return math.exp(log_levy_density(params, r, spec))


def log_levy_density(params: ProcessParams, r: float,
                     spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    if not r > 0:
        raise ValueError("Lévy density is defined for r > 0")
    d, a = params.d, params.alpha
    out = math.log(stable_constant(d, a)) - (d + a) * math.log(r)
    if params.m > 0:
        out += log_psi_profile(params.m ** (1 / a) * r, d, a, spec)
    return out


def delta_D(domain: ExteriorBallDomain, x) -> float:
    return max(float(np.linalg.norm(x)) - domain.radius, 0.0)


@dataclass(frozen=True)
class ScaledTriple:
    params: ProcessParams
    t: float | None
    x: np.ndarray | None
    factor: float
    domain: ExteriorBallDomain | None = None
    y: np.ndarray | None = None


def scale_triple(params: ProcessParams, b: float, t: float | None, x,
                 y=None, domain: ExteriorBallDomain | None = None,
                 kind: str = "kernel") -> ScaledTriple:
    """Map ``(m, t, x)`` to ``(m/b, b t, b^{1/alpha} x)``.

    ``kind="kernel"`` returns the density factor ``b^{d/alpha}``;
    ``kind="green"`` returns ``b^{(d-alpha)/alpha}`` and ignores ``t``.
    A domain, when given, has its radius scaled by ``b^{1/alpha}``.
    """
    if not b > 0:
        raise ValueError("scaling factor must be positive")
    a, d = params.alpha, params.d
    space = b ** (1.0 / a)
    if kind == "kernel":
        factor = b ** (d / a)
        new_t = None if t is None else b * t
    elif kind == "green":
        factor = b ** ((d - a) / a)
        new_t = None
    else:
        raise ValueError(f"unknown scaling kind {kind!r}")
    return ScaledTriple(
        params=params.with_mass(params.m / b),
        t=new_t,
        x=None if x is None else space * as_point(x),
        factor=factor,
        domain=None if domain is None else domain.scaled(space),
        y=None if y is None else space * as_point(y),
    )


def unit_sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def ball_volume(d: int, radius: float) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * radius ** d


def radial_point(d: int, r: float, direction: Sequence[float] | None = None) -> np.ndarray:
    """Point at distance ``r`` from the origin along ``direction`` (default e_1)."""
    e = np.zeros(d)
    if direction is None:
        e[0] = 1.0
    else:
        e = as_point(direction, d)
        e = e / np.linalg.norm(e)
    return r * e
