"""Whole-space transition density and Green function.

Two independent evaluation routes:

``hankel``
    radial Fourier inversion of ``exp(-t Phi(|xi|))``; the oscillatory tail is
    integrated between consecutive Bessel zeros and the partial sums are
    accelerated with Wynn's epsilon algorithm.
``mixture``
    the subordination identity ``p(t, r) = int g_t(s) (4 pi s)^{-d/2}
    exp(-r^2 / 4s) ds`` with ``g_t`` the relativistic subordinator density,
    itself written through Kanter's integral. Every integrand is positive, so
    this route keeps full relative accuracy in the far tail where the Fourier
    integral is lost to cancellation.

``auto`` (the default) runs the Hankel route and falls back to the mixture
route whenever the Hankel error estimate is not small relative to the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special
from scipy.interpolate import CubicSpline, RectBivariateSpline

from .model import ProcessParams, char_exponent, unit_sphere_area
from .special_functions import DEFAULT_QUAD, QuadratureError, QuadratureSpec, bessel_j_zeros

UNDERFLOW_LOG = -700.0
HANKEL_MAX_INTERVALS = 400
HANKEL_MAX_OSCILLATIONS = 300.0
AUTO_REL_TOL = 1e-8


@dataclass(frozen=True)
class KernelValue:
    value: float
    est_error: float
    method: str = ""

    def __post_init__(self):
        if not math.isfinite(self.est_error) or self.est_error < 0:
            raise ValueError("est_error must be finite and nonnegative")


def decay_scale(params: ProcessParams, t: float) -> float:
    """Frequency ``rho`` at which ``t Phi(rho) = 1``."""
    a, m = params.alpha, params.m
    if m == 0:
        return t ** (-1.0 / a)
    return math.sqrt(max((m + 1.0 / t) ** (2.0 / a) - params.mu2, 0.0))


# ---------------------------------------------------------------------------
# Hankel route


def wynn_epsilon(partial_sums: np.ndarray) -> tuple[float, float]:
    """Wynn's epsilon extrapolation of a sequence; returns ``(limit, error_estimate)``."""
    s = np.asarray(partial_sums, dtype=float)
    n = len(s)
    if n < 3:
        return float(s[-1]), float(abs(s[-1] - s[-2])) if n > 1 else math.inf
    e_prev = np.zeros(n + 1)
    e_cur = s.copy()
    estimates = []
    for k in range(1, n):
        diff = e_cur[1:] - e_cur[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            e_next = e_prev[1:len(e_cur)] + 1.0 / diff
        if not np.all(np.isfinite(e_next)):
            break
        e_prev, e_cur = e_cur, e_next
        if k % 2 == 0 and len(e_cur) >= 1:
            estimates.append(e_cur[-1])
        if len(e_cur) < 2:
            break
    if not estimates:
        return float(s[-1]), float(abs(s[-1] - s[-2]))
    best = float(estimates[-1])
    if len(estimates) > 1:
        err = abs(estimates[-1] - estimates[-2])
    else:
        err = abs(best - s[-1])
    return best, float(err)


@lru_cache(maxsize=16)
def _zeros(nu: float, count: int) -> np.ndarray:
    return bessel_j_zeros(nu, count)


def _hankel_cutoff(params: ProcessParams, t: float) -> float:
    upper = decay_scale(params, t) * 200.0
    while t * char_exponent(params, upper) < 745.0:
        upper *= 2.0
    return upper


def _hankel_near_origin(params: ProcessParams, t: float, r: float, upper: float,
                        spec: QuadratureSpec) -> KernelValue:
    """``(2 pi)^{-d/2} int rho^{d-1} e^{-t Phi} (rho r)^{-nu} J_nu(rho r) d rho``.

    Used when ``r * upper`` stays below the first Bessel zero, so the
    integrand does not oscillate; ``r = 0`` is the limit ``1 / (2^nu Gamma(nu+1))``.
    """
    d = params.d
    nu = d / 2 - 1
    rs = decay_scale(params, t)
    head = 1.0 / (2 ** nu * math.gamma(nu + 1))

    def bessel_ratio(z):
        return head if z < 1e-8 else special.jv(nu, z) / z ** nu

    f = lambda rho: rho ** (d - 1) * math.exp(-t * char_exponent(params, rho)) * bessel_ratio(rho * r)
    pts = [rs * c for c in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0)]
    val, err = _quad_pieces(f, 0.0, upper, pts, spec)
    pref = (2 * math.pi) ** (-d / 2)
    return KernelValue(pref * val, pref * err, "hankel")


def _quad_pieces(f, a, b, pts, spec):
    edges = [a, *sorted(p for p in pts if a < p < b), b]
    tot = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=spec.rel_tol,
                              limit=spec.max_subdivisions)
        tot += v
        err += e
    return tot, err


def eval_free_hankel(params: ProcessParams, t: float, r: float,
                     spec: QuadratureSpec = DEFAULT_QUAD) -> KernelValue:
    """Radial Fourier inversion of the characteristic function."""
    if not t > 0 or r < 0:
        raise ValueError("need t > 0 and r >= 0")
    d = params.d
    nu = d / 2 - 1
    upper = _hankel_cutoff(params, t)
    if r * upper < 0.5 * _zeros(nu, 1)[0]:
        return _hankel_near_origin(params, t, r, upper, spec)
    rs = decay_scale(params, t)
    zeros = _zeros(nu, HANKEL_MAX_INTERVALS) / r
    jv = special.jv

    def f(rho):
        return math.exp(-t * char_exponent(params, rho)) * rho ** (d / 2) * jv(nu, rho * r)

    sums = []
    pieces = []
    total = 0.0
    qerr = 0.0
    lo = 0.0
    converged = False
    for k, hi in enumerate(zeros):
        pts = [rs * c for c in (0.1, 0.5, 1.0, 2.0, 5.0)] if k == 0 else []
        v, e = _quad_pieces(f, lo, hi, pts, spec)
        total += v
        qerr += e
        pieces.append(v)
        sums.append(total)
        lo = hi
        if t * char_exponent(params, hi) > 745.0:
            converged = True
            break
        if k >= 3 and max(abs(p) for p in pieces[-3:]) < 1e-17 * abs(total):
            converged = True
            break
    if converged:
        value, xerr = total, 0.0
    else:
        value, xerr = wynn_epsilon(np.array(sums[-60:]))
    roundoff = 64 * np.finfo(float).eps * float(np.max(np.abs(sums)))
    pref = (2 * math.pi) ** (-d / 2) * r ** (1 - d / 2)
    return KernelValue(pref * value, pref * (qerr + xerr + roundoff), "hankel")


# ---------------------------------------------------------------------------
# mixture (subordination) route

@lru_cache(maxsize=8)
def _gl_nodes(n: int):
    return np.polynomial.legendre.leggauss(n)


def _u_nodes(beta: float) -> int:
    # the Kanter integrand sharpens like 1/(1-beta) near u = 0
    if beta <= 0.6:
        return 256
    if beta <= 0.8:
        return 512
    return 1024


def _kanter_log_a(beta: float, u: np.ndarray) -> np.ndarray:
    return ((beta / (1 - beta)) * np.log(np.sin(beta * u)) + np.log(np.sin((1 - beta) * u))
            - (1 / (1 - beta)) * np.log(np.sin(u)))


SERIES_SWITCH = 5.0


def _log_stable_series(beta: float, x: np.ndarray) -> np.ndarray:
    # f(x) = (1/pi) sum_k (-1)^{k+1} Gamma(k beta + 1) / k! sin(pi k beta) x^{-k beta - 1}
    k = np.arange(1, 61, dtype=float)
    lc = special.gammaln(k * beta + 1) - special.gammaln(k + 1)
    sgn = (-1.0) ** (k + 1) * np.sin(math.pi * k * beta)
    ly = -beta * np.log(x)[:, None]
    ratio = np.sum((sgn / sgn[0])[None, :] * np.exp((lc - lc[0])[None, :] + (k - 1)[None, :] * ly),
                   axis=1)
    return (lc[0] + math.log(sgn[0]) - math.log(math.pi) - (beta + 1) * np.log(x)
            + np.log(ratio))


def log_stable_density(beta: float, x: np.ndarray, n_nodes: int | None = None) -> np.ndarray:
    """Log-density of the positive stable law with Laplace transform ``exp(-lam^beta)``."""
    n_nodes = _u_nodes(beta) if n_nodes is None else n_nodes
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape)
    big = x ** beta >= SERIES_SWITCH
    if np.any(big):
        out[big] = _log_stable_series(beta, x[big])
    if np.any(~big):
        out[~big] = _log_stable_kanter(beta, x[~big], n_nodes)
    return out


def _log_stable_kanter(beta: float, x: np.ndarray, n_nodes: int) -> np.ndarray:
    nodes, weights = _gl_nodes(n_nodes)
    u = 0.5 * math.pi * (nodes + 1.0)
    w = 0.5 * math.pi * weights
    la = _kanter_log_a(beta, u)
    kap = beta / (1 - beta)
    lx = np.log(np.asarray(x, dtype=float))[:, None]
    # log of kappa A x^{-kappa-1} exp(-A x^{-kappa})
    expo = math.log(kap) + la[None, :] - (kap + 1) * lx - np.exp(la[None, :] - kap * lx)
    mx = np.max(expo, axis=1, keepdims=True)
    val = np.log(np.sum(w[None, :] * np.exp(expo - mx), axis=1)) + mx[:, 0] - math.log(math.pi)
    return val


def log_subordinator_density(params: ProcessParams, t: float, s: np.ndarray,
                             n_nodes: int | None = None) -> np.ndarray:
    """Log-density of the relativistic subordinator at time ``t``."""
    beta = params.alpha / 2
    s = np.asarray(s, dtype=float)
    scale = t ** (1 / beta)
    return (params.m * t - params.mu2 * s - math.log(scale)
            + log_stable_density(beta, s / scale, n_nodes))


def _mixture_grid(params: ProcessParams, t: float, rmax: float, h: float):
    beta = params.alpha / 2
    lscale = math.log(t) / beta
    lo = lscale
    hi = lscale
    if params.m > 0:
        lmean = math.log(t * beta * params.mu2 ** (beta - 1))
        lo = min(lo, lmean)
        hi = min(hi, lmean + 12.0 + math.log(1.0 + 1.0 / (params.m * t)) / beta)
        hi = max(hi, lmean)
    lo -= 25.0
    hi = max(hi + 45.0, 2 * math.log(max(rmax, 1e-300)) + 40.0)
    if params.m > 0:
        # exp(m t - mu2 s) is negligible once mu2 s > m t + 800
        hi = min(hi, math.log((params.m * t + 800.0) / params.mu2))
        hi = max(hi, lo + 10.0)
    n = int(math.ceil((hi - lo) / h))
    n += n % 2
    return lo + h * np.arange(n + 1)


def mixture_log_density(params: ProcessParams, t: float, r, rel_step: float = 1.0):
    """Log of ``p(t, r)`` for an array of radii via the subordination mixture.

    Returns ``(log_p, rel_err)``. The relative error adds a step-halving
    comparison of the log-space trapezoid rule to a comparison of the inner
    Kanter quadrature against a rule with half as many nodes.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    d = params.d
    h = rel_step * 0.02 / math.sqrt(1.0 + params.m * t / 10.0)
    v = _mixture_grid(params, t, float(np.max(r)) if r.size else 1.0, h)
    s = np.exp(v)
    n_u = _u_nodes(params.alpha / 2)
    lg = log_subordinator_density(params, t, s, n_u)
    lg_half = log_subordinator_density(params, t, s, n_u // 2)
    base = lg + v - 0.5 * d * np.log(4 * math.pi * s)
    expo = base[None, :] - (r[:, None] ** 2) / (4 * s[None, :])
    mx = np.max(expo, axis=1, keepdims=True)
    w = np.exp(expo - mx)
    fine = h * (np.sum(w, axis=1) - 0.5 * (w[:, 0] + w[:, -1]))
    coarse = 2 * h * (np.sum(w[:, ::2], axis=1) - 0.5 * (w[:, 0] + w[:, -1]))
    edge = np.maximum(w[:, 0], w[:, -1]) / np.maximum(np.max(w, axis=1), 1e-300)
    u_err = h * np.abs(w @ np.expm1(lg_half - lg))
    rel = (np.abs(fine - coarse) + u_err) / fine + edge
    return np.log(fine) + mx[:, 0], rel


def eval_free_mixture(params: ProcessParams, t: float, r: float) -> KernelValue:
    if not t > 0 or r < 0:
        raise ValueError("need t > 0 and r >= 0")
    lp, rel = mixture_log_density(params, t, [r])
    lp = float(lp[0])
    if lp < UNDERFLOW_LOG:
        return KernelValue(0.0, math.exp(UNDERFLOW_LOG), "mixture")
    val = math.exp(lp)
    return KernelValue(val, val * (float(rel[0]) + 1e-12), "mixture")


def eval_free(params: ProcessParams, t: float, r: float, method: str = "auto",
              spec: QuadratureSpec = DEFAULT_QUAD) -> KernelValue:
    """Transition density ``p^m(t, x)`` at ``|x| = r``."""
    if not t > 0:
        raise ValueError("t must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    if method == "hankel":
        return eval_free_hankel(params, t, r, spec)
    if method == "mixture":
        return eval_free_mixture(params, t, r)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if r * decay_scale(params, t) <= HANKEL_MAX_OSCILLATIONS:
        try:
            kv = eval_free_hankel(params, t, r, spec)
        except QuadratureError:
            kv = None
        if kv is not None and kv.value > 0 and kv.est_error <= AUTO_REL_TOL * kv.value:
            return kv
    return eval_free_mixture(params, t, r)


# ---------------------------------------------------------------------------
# Green function


def _green_time_nodes(params: ProcessParams, r: np.ndarray, h: float):
    a, m, d = params.alpha, params.m, params.d
    rmin, rmax = float(np.min(r)), float(np.max(r))
    t_lo = 1e-5 * rmin ** a
    if m > 0:
        t_lo = min(t_lo, 1e-5 * m ** (2 / a - 1) * rmin ** 2)
        t_hi = 1e5 * max(1.0 / m, rmax ** a, m ** (2 / a - 1) * rmax ** 2)
    else:
        t_hi = 1e5 * rmax ** a
    lo, hi = math.log(t_lo), math.log(t_hi)
    if m > 0:
        # 1/m is a node: the integrand changes character there
        pivot = -math.log(m)
        n_lo = max(int(math.ceil((pivot - lo) / h)), 1)
        n_hi = max(int(math.ceil((hi - pivot) / h)), 1)
        n_lo += n_lo % 2
        n_hi += n_hi % 2
        return np.concatenate([pivot - h * np.arange(n_lo, 0, -1), pivot + h * np.arange(n_hi + 1)])
    n = int(math.ceil((hi - lo) / h))
    n += n % 2
    return lo + h * np.arange(n + 1)


def _log_mittag_leffler(beta: float, z: np.ndarray) -> np.ndarray:
    """``log E_{beta,beta}(z)`` for ``z >= 0``.

    Positive power series while ``z^{1/beta} <= 40``, otherwise the leading
    exponential asymptotic, whose neglected terms are below ``e^{-40}``
    relative.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty(z.shape)
    w = np.where(z > 0, z, 1.0) ** (1 / beta)
    asym = w > 40.0
    out[asym] = -math.log(beta) + (1 - beta) * np.log(w[asym]) + w[asym]
    ser = ~asym
    if np.any(ser):
        n_max = int(3 * 40.0 / beta + 80)
        n = np.arange(n_max + 1, dtype=float)
        lgam = special.gammaln(beta * n + beta)
        zs = z[ser]
        with np.errstate(divide="ignore"):
            lz = np.log(zs)[:, None]
        terms = np.where(n[None, :] == 0, 0.0, n[None, :] * lz) - lgam[None, :]
        out[ser] = special.logsumexp(terms, axis=1)
    return out


def log_potential_density(params: ProcessParams, s: np.ndarray) -> np.ndarray:
    """Log of the subordinator potential density ``int_0^inf g_t(s) dt``.

    Integrating the subordinator density over time gives the closed form
    ``s^{beta-1} E_{beta,beta}(m s^beta) exp(-m^{2/alpha} s)``.
    """
    beta = params.alpha / 2
    s = np.asarray(s, dtype=float)
    out = (beta - 1) * np.log(s) - params.mu2 * s
    if params.m == 0:
        return out - math.lgamma(beta)
    return out + _log_mittag_leffler(beta, params.m * s ** beta)


def _green_potential(params: ProcessParams, r: np.ndarray, h: float):
    d = params.d
    lo = 2 * math.log(float(np.min(r))) - 8.0
    hi = 2 * math.log(float(np.max(r))) + 14.0
    if params.m > 0:
        hi = max(hi, math.log(1e6 / params.mu2))
    n = int(math.ceil((hi - lo) / h))
    n += n % 2
    v = lo + h * np.arange(n + 1)
    s = np.exp(v)
    lu = log_potential_density(params, s)
    base = lu + v - 0.5 * d * np.log(4 * math.pi * s)
    w = np.exp(base[None, :] - r[:, None] ** 2 / (4 * s[None, :]))
    fine = h * (np.sum(w, axis=1) - 0.5 * (w[:, 0] + w[:, -1]))
    coarse = 2 * h * (np.sum(w[:, ::2], axis=1) - 0.5 * (w[:, 0] + w[:, -1]))
    # beyond the grid u(s) behaves like s^q
    q = (lu[-1] - lu[-2]) / h
    tail = w[:, -1] / (d / 2 - 1 - q)
    return fine + tail, np.abs(fine - coarse) + 1e-6 * tail + 1e-14 * fine


def _green_time(params: ProcessParams, r: np.ndarray, h: float):
    d, a, m = params.d, params.alpha, params.m
    v = _green_time_nodes(params, r, h)
    t = np.exp(v)
    logp = np.empty((len(t), len(r)))
    for i, ti in enumerate(t):
        logp[i], _ = mixture_log_density(params, float(ti), r)
    integrand = np.exp(logp) * t[:, None]
    fine = h * (np.sum(integrand, axis=0) - 0.5 * (integrand[0] + integrand[-1]))
    coarse = 2 * h * (np.sum(integrand[::2], axis=0) - 0.5 * (integrand[0] + integrand[-1]))
    # p ~ t j(r) as t -> 0 and p ~ C t^{-q} as t -> inf
    head = integrand[0] / 2.0
    q = d / 2 if m > 0 else d / a
    tail = integrand[-1] / (q - 1.0)
    return fine + head + tail, np.abs(fine - coarse) + 1e-3 * (head + tail)


def free_green_values(params: ProcessParams, r, method: str = "potential",
                      h: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Whole-space Green function ``int_0^inf p(t, r) dt`` for an array of radii.

    ``method="potential"`` integrates the time variable analytically through
    the subordinator potential density and leaves a single log-space
    quadrature. ``method="time"`` integrates the kernel over a log-time grid
    with a node at ``t = 1/m`` and power-law closures at both ends; it is
    much slower and kept as an independent check.
    Returns ``(values, error_estimates)``.
    """
    params.require_transient()
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise ValueError("Green function needs r > 0")
    if method == "potential":
        return _green_potential(params, r, 0.02 if h is None else h)
    if method == "time":
        return _green_time(params, r, 0.1 if h is None else h)
    raise ValueError(f"unknown method {method!r}")


def eval_free_green(params: ProcessParams, r: float, method: str = "potential") -> KernelValue:
    """Whole-space Green function ``G^m(r)`` (d >= 3)."""
    params.require_transient()
    if not r > 0:
        raise ValueError("Green function needs r > 0")
    val, err = free_green_values(params, [r], method)
    return KernelValue(float(val[0]), float(err[0]), method)


def riesz_green(params: ProcessParams, r: float) -> float:
    """Closed-form ``m = 0`` Green function ``Gamma((d-a)/2) / (2^a pi^{d/2} Gamma(a/2)) r^{a-d}``."""
    d, a = params.d, params.alpha
    return (math.gamma((d - a) / 2) / (2 ** a * math.pi ** (d / 2) * math.gamma(a / 2))
            * r ** (a - d))


def cauchy_kernel(d: int, t: float, r: float) -> float:
    """Closed-form ``alpha = 1, m = 0`` density ``c_d t / (t^2 + r^2)^{(d+1)/2}``."""
    c = math.gamma((d + 1) / 2) / math.pi ** ((d + 1) / 2)
    return c * t / (t * t + r * r) ** ((d + 1) / 2)


# ---------------------------------------------------------------------------
# tabulated kernel for Monte-Carlo post-processing


class FreeKernelTable:
    """Spline of ``log p(s, r)`` on a log-log grid, for bulk evaluation.

    Below ``s_min`` the small-time asymptotic ``p(s, r) ~ s j(r)`` is used.
    """

    def __init__(self, params: ProcessParams, s_max: float, r_min: float, r_max: float,
                 n_s: int = 120, n_r: int = 80, s_min_ratio: float = 1e-7):
        if not (s_max > 0 and 0 < r_min < r_max):
            raise ValueError("invalid table ranges")
        self.params = params
        self.s_min = s_max * s_min_ratio
        self.s_max = s_max
        self.r_min, self.r_max = r_min, r_max
        self.ls = np.linspace(math.log(self.s_min), math.log(s_max), n_s)
        self.lr = np.linspace(math.log(r_min), math.log(r_max), n_r)
        r = np.exp(self.lr)
        table = np.empty((n_s, n_r))
        rel = np.empty((n_s, n_r))
        for i, ls in enumerate(self.ls):
            table[i], rel[i] = mixture_log_density(params, math.exp(ls), r)
        self.max_rel_quadrature_error = float(np.max(rel))
        self._spline = RectBivariateSpline(self.ls, self.lr, table, kx=3, ky=3)

    def __call__(self, s, r) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        r = np.asarray(r, dtype=float)
        if np.any(r < self.r_min * (1 - 1e-12)) or np.any(r > self.r_max * (1 + 1e-12)):
            raise ValueError("radius outside the tabulated range")
        if np.any(s > self.s_max * (1 + 1e-12)):
            raise ValueError("time outside the tabulated range")
        out = np.zeros(np.broadcast(s, r).shape)
        s, r = np.broadcast_arrays(s, r)
        pos = s > 0
        sc = np.clip(s[pos], self.s_min, self.s_max)
        lr = np.clip(np.log(r[pos]), self.lr[0], self.lr[-1])
        lp = self._spline.ev(np.log(sc), lr)
        out[pos] = np.exp(lp) * np.where(s[pos] < self.s_min, s[pos] / self.s_min, 1.0)
        return out


class RadialKernel:
    """Interpolant of ``r -> p(s, r)`` at a fixed time ``s`` on ``[0, r_max]``.

    ``log p`` is splined against ``asinh(r / l)`` with ``l`` a tenth of the
    kernel's length scale, which is smooth both at the origin and in the
    power-law tail.
    """

    def __init__(self, params: ProcessParams, s: float, r_max: float, n: int = 400):
        if not (s > 0 and r_max > 0):
            raise ValueError("need s > 0 and r_max > 0")
        self.params, self.s, self.r_max = params, s, r_max
        self.ell = 0.1 * min(s ** (1 / params.alpha), r_max)
        u = np.linspace(0.0, math.asinh(r_max / self.ell), n)
        r = self.ell * np.sinh(u)
        lp, rel = mixture_log_density(params, s, r)
        self.max_rel_quadrature_error = float(np.max(rel))
        self._spline = CubicSpline(u, lp)

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0) or np.any(r > self.r_max * (1 + 1e-12)):
            raise ValueError("radius outside the interpolation range")
        return np.exp(self._spline(np.arcsinh(r / self.ell)))


def eval_free_array(params: ProcessParams, t: float, r) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised mixture evaluation: ``(values, relative_errors)`` over an array of radii."""
    if not t > 0:
        raise ValueError("t must be positive")
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise ValueError("radii must be nonnegative")
    lp, rel = mixture_log_density(params, t, r)
    return np.exp(np.maximum(lp, UNDERFLOW_LOG)) * (lp >= UNDERFLOW_LOG), rel
