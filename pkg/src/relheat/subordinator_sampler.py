"""Subordinator and process-increment samplers, and the path simulator.

The relativistic process is Brownian motion with generator ``Delta`` (per
coordinate variance ``2s`` at subordinator value ``s``) run by the
subordinator whose Laplace exponent is ``(lam + m^{2/alpha})^{alpha/2} - m``.
That subordinator is the ``exp(-m^{2/alpha} s)`` tilt of the
``alpha/2``-stable one, so increments are produced by

* Kanter's representation for positive stable variates,
* plain rejection against the tilt when ``m dt <= ln 2`` (after
  splitting longer steps into sub-steps), and
* Devroye's double-rejection sampler once a step would need more than
  ``SUBSTEP_LIMIT`` sub-steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import _rng
from ._rng import exponential, new_state, normal, uniform
from .model import ExteriorBallDomain, ProcessParams, as_point

LN2 = math.log(2.0)
SUBSTEP_LIMIT = 8


@dataclass(frozen=True)
class SeedSpec:
    """Root seed plus stream id; each replicate ``i`` of a stream is its own counter range."""

    root_seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        for v in (self.root_seed, self.stream_id):
            if not 0 <= int(v) < 2**64:
                raise ValueError("seeds are unsigned 64-bit integers")

    @property
    def key(self) -> int:
        return _rng.derive_key(int(self.root_seed), int(self.stream_id))

    def child(self, offset: int) -> "SeedSpec":
        return SeedSpec(self.root_seed, (self.stream_id + offset) % 2**64)


@dataclass(frozen=True)
class StepPolicy:
    """Adaptive grid: ``dt = clamp(kappa * tau(delta / lam), dt_min, dt_max)``.

    ``tau(r) = r^alpha`` for the stable scale, extended by
    ``max(r^alpha, m^{2/alpha-1} r^2)`` so far-from-boundary steps follow the
    diffusive scale once it dominates. ``dt_max=None`` means
    ``dt_max_fraction * t_end``.
    """

    kappa: float = 0.05
    lam: float = 1.0
    dt_min: float = 1e-6
    dt_max: float | None = None
    diffusive_scale: bool = True
    dt_max_fraction: float = 0.05

    def __post_init__(self):
        if not (self.kappa > 0 and self.lam > 0 and self.dt_min > 0 and self.dt_max_fraction > 0):
            raise ValueError("step policy parameters must be positive")
        if self.dt_max is not None and not self.dt_max >= self.dt_min:
            raise ValueError("dt_max must be at least dt_min")

    def resolved_dt_max(self, t_end: float) -> float:
        return self.dt_max if self.dt_max is not None else self.dt_max_fraction * t_end

    def halved(self) -> "StepPolicy":
        """Every step-size parameter halved (the grid-bias check)."""
        return StepPolicy(self.kappa / 2, self.lam, self.dt_min / 2,
                          None if self.dt_max is None else self.dt_max / 2,
                          self.diffusive_scale, self.dt_max_fraction / 2)


@dataclass
class Increment:
    dt: float
    s: float
    dx: np.ndarray


@dataclass
class PathSample:
    times: np.ndarray
    positions: np.ndarray
    exited: bool
    exit_bracket: tuple[float, float] | None
    exit_position: np.ndarray | None
    seed: SeedSpec = field(default_factory=SeedSpec)

    @property
    def exit_time(self) -> float | None:
        if self.exit_bracket is None:
            return None
        return 0.5 * (self.exit_bracket[0] + self.exit_bracket[1])


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _stable_unit(beta, st, buf):
    # Kanter: S = (A(U)/E)^{(1-beta)/beta}, Laplace transform exp(-lam^beta)
    u = math.pi * uniform(st, buf)
    e = exponential(st, buf)
    log_a = ((beta / (1.0 - beta)) * math.log(math.sin(beta * u))
             + math.log(math.sin((1.0 - beta) * u))
             - (1.0 / (1.0 - beta)) * math.log(math.sin(u)))
    return math.exp(((1.0 - beta) / beta) * (log_a - math.log(e)))


@njit(cache=True)
def _tilted_rejection(beta, dt, mu2, st, buf):
    """Stable(beta) increment over ``dt`` conditioned by the ``exp(-mu2 s)`` tilt.

    Returns ``(s, proposals)``.
    """
    scale = dt ** (1.0 / beta)
    k = 0
    while True:
        s = scale * _stable_unit(beta, st, buf)
        k += 1
        if mu2 == 0.0 or uniform(st, buf) <= math.exp(-mu2 * s):
            return s, k


@njit(cache=True)
def _sinc(x):
    ax = abs(x)
    if ax == 0.0:
        return 1.0
    if ax < 2e-4:
        return 1.0 - x * x / 6.0
    if ax < 0.006:
        x2 = x * x
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    return math.sin(x) / x


@njit(cache=True)
def _devroye(alpha, lam, st, buf):
    """Exact stable(alpha) variate (Laplace transform ``exp(-s^alpha)``) tilted by ``exp(-lam x)``.

    Double-rejection scheme with bounded expected cost in ``lam``.
    """
    b = (1.0 - alpha) / alpha
    lam_alpha = lam ** alpha
    gam = lam_alpha * alpha * (1.0 - alpha)
    sg = math.sqrt(gam)
    c1 = math.sqrt(math.pi / 2.0)
    c3 = (2.0 + c1) * sg
    xi = (1.0 + math.sqrt(2.0) * c3) / math.pi
    psi = c3 * math.exp(-gam * math.pi * math.pi / 8.0) / math.sqrt(math.pi)
    w1 = c1 * xi / sg
    w2 = 2.0 * math.sqrt(math.pi) * psi
    w3 = xi * math.pi
    while True:
        # auxiliary angle U and its uniform Z
        while True:
            v = uniform(st, buf)
            if gam >= 1.0:
                if v < w1 / (w1 + w2):
                    u = abs(normal(st, buf)) / sg
                else:
                    w = uniform(st, buf)
                    u = math.pi * (1.0 - w * w)
            else:
                w = uniform(st, buf)
                if v < w3 / (w2 + w3):
                    u = math.pi * w
                else:
                    u = math.pi * (1.0 - w * w)
            if u >= math.pi:
                continue
            bdb0 = _sinc(u) / (_sinc(alpha * u) ** alpha * _sinc((1.0 - alpha) * u) ** (1.0 - alpha))
            zeta = math.sqrt(bdb0)
            z = 1.0 / (1.0 - (1.0 + alpha * zeta / sg) ** (-1.0 / alpha))
            rho = (math.pi * math.exp(-lam_alpha * (1.0 - 1.0 / (zeta * zeta)))
                   / ((1.0 + c1) * sg / zeta + z))
            dd = 0.0
            if u >= 0.0 and gam >= 1.0:
                dd += xi * math.exp(-gam * u * u / 2.0)
            if 0.0 < u < math.pi:
                dd += psi / math.sqrt(math.pi - u)
            if 0.0 <= u <= math.pi and gam < 1.0:
                dd += xi
            zz = uniform(st, buf) * rho * dd
            if zz <= 1.0:
                break
        a3f = (((1.0 - alpha) * _sinc((1.0 - alpha) * u)) ** (1.0 - alpha)
               * (alpha * _sinc(alpha * u)) ** alpha / _sinc(u))
        a = a3f ** (1.0 / (1.0 - alpha))
        mm = (b / a) ** alpha * lam_alpha
        delta = math.sqrt(mm * alpha / a)
        a1 = delta * c1
        a3 = z / a
        s = a1 + delta + a3
        v2 = uniform(st, buf)
        nn = 0.0
        e1 = 0.0
        if v2 < a1 / s:
            nn = normal(st, buf)
            x = mm - delta * abs(nn)
        elif v2 < (a1 + delta) / s:
            x = mm + delta * uniform(st, buf)
        else:
            e1 = exponential(st, buf)
            x = mm + delta + e1 * a3
        if x > 0.0:
            e2 = -math.log(zz)
            c = a * (x - mm) + math.exp((1.0 / alpha) * math.log(lam_alpha) - b * math.log(mm)) * ((mm / x) ** b - 1.0)
            if x < mm:
                c -= nn * nn / 2.0
            elif x > mm + delta:
                c -= e1
            if c <= e2:
                return x ** (-b)


@njit(cache=True)
def _relativistic_increment(beta, dt, m, mu2, st, buf):
    md = m * dt
    if md <= LN2:
        s, _props = _tilted_rejection(beta, dt, mu2, st, buf)
        return s
    nsub = int(math.ceil(md / LN2))
    if nsub > SUBSTEP_LIMIT:
        scale = dt ** (1.0 / beta)
        return scale * _devroye(beta, mu2 * scale, st, buf)
    h = dt / nsub
    tot = 0.0
    for _k in range(nsub):
        s, _props = _tilted_rejection(beta, h, mu2, st, buf)
        tot += s
    return tot


@njit(cache=True)
def _norm_cdf(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@njit(cache=True)
def _gammainc_lower(a, x):
    """Regularised lower incomplete gamma P(a, x)."""
    if x <= 0.0:
        return 0.0
    lg = math.lgamma(a)
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        tot = term
        for _ in range(1000):
            ap += 1.0
            term *= x / ap
            tot += term
            if abs(term) < abs(tot) * 1e-16:
                break
        return tot * math.exp(-x + a * math.log(x) - lg)
    # Lentz continued fraction for Q(a, x)
    bb = x + 1.0 - a
    c = 1e300
    dd = 1.0 / bb
    h = dd
    for i in range(1, 1000):
        an = -i * (i - a)
        bb += 2.0
        dd = an * dd + bb
        if abs(dd) < 1e-300:
            dd = 1e-300
        c = bb + an / c
        if abs(c) < 1e-300:
            c = 1e-300
        dd = 1.0 / dd
        de = dd * c
        h *= de
        if abs(de - 1.0) < 1e-16:
            break
    return 1.0 - math.exp(-x + a * math.log(x) - lg) * h


@njit(cache=True)
def gauss_ball_prob(dist, eps, s, d):
    """P(|c + s Z| <= eps) for |c| = dist and Z standard normal in R^d."""
    if s <= 0.0:
        return 1.0 if dist <= eps else 0.0
    if dist - eps > 12.0 * s:
        return 0.0
    if d == 3:
        if dist < 1e-7 * s:
            w = eps / s
            return math.erf(w / math.sqrt(2.0)) - math.sqrt(2.0 / math.pi) * w * math.exp(-0.5 * w * w)
        u = (eps - dist) / s
        v = (eps + dist) / s
        pdf_u = math.exp(-0.5 * u * u) / math.sqrt(2.0 * math.pi)
        pdf_v = math.exp(-0.5 * v * v) / math.sqrt(2.0 * math.pi)
        p = _norm_cdf(u) + _norm_cdf(v) - 1.0 - (s / dist) * (pdf_u - pdf_v)
        return min(max(p, 0.0), 1.0)
    # noncentral chi-square with d degrees of freedom, Poisson mixture
    lam = 0.5 * (dist / s) ** 2
    x = 0.5 * (eps / s) ** 2
    j0 = int(lam)
    tot = 0.0
    logw0 = -lam + j0 * math.log(lam) - math.lgamma(j0 + 1.0) if lam > 0 else 0.0
    # walk outward from the Poisson mode
    logw = logw0
    j = j0
    while True:
        term = math.exp(logw) * _gammainc_lower(0.5 * d + j, x)
        tot += term
        if (term < 1e-17 * tot or math.exp(logw) < 1e-17) and j > j0 + 5:
            break
        j += 1
        logw += math.log(lam) - math.log(j) if lam > 0 else -1e300
        if logw < -745.0:
            break
    if lam > 0:
        logw = logw0
        j = j0
        while j > 0:
            logw += math.log(j) - math.log(lam)
            j -= 1
            term = math.exp(logw) * _gammainc_lower(0.5 * d + j, x)
            tot += term
            if term < 1e-17 * tot and j < j0 - 5:
                break
    return min(max(tot, 0.0), 1.0)


# output row layout of _run_path: the fixed columns, then exit position,
# final position and (with a target) the position before the last step
ST_ALIVE, ST_EXITED, ST_ESCAPED, ST_TIMECAP = 0, 1, 2, 3
C_STATUS, C_TPREV, C_TEXIT, C_EXITNORM, C_OCC, C_BALL, C_NSTEPS, C_FINALNORM, C_ALIVE_PREV = range(9)
N_FIXED = 9


@njit(cache=True)
def _norm(v):
    s = 0.0
    for i in range(v.shape[0]):
        s += v[i] * v[i]
    return math.sqrt(s)


@njit(cache=True)
def _dist(a, b):
    s = 0.0
    for i in range(a.shape[0]):
        q = a[i] - b[i]
        s += q * q
    return math.sqrt(s)


@njit(cache=True)
def _run_path(x0, alpha, m, radius, t_end, finite, kappa, lam, dt_min, dt_max, diffusive,
              esc_radius, has_target, y, eps, final_dt, st, buf, out, record, rec_t, rec_x):
    """Simulate one path; fills ``out`` and returns the number of recorded grid points.

    With a finite horizon and ``final_dt > 0`` the grid is run to
    ``t_end - final_dt`` and closed by one step of exactly ``final_dt``.
    """
    d = x0.shape[0]
    beta = 0.5 * alpha
    mu2 = m ** (2.0 / alpha) if m > 0.0 else 0.0
    gauss_coef = m ** (2.0 / alpha - 1.0) if (m > 0.0 and diffusive) else 0.0
    x = x0.copy()
    t = 0.0
    occ = 0.0
    nsteps = 0
    nrec = 0
    if record:
        rec_t[0] = 0.0
        rec_x[0, :] = x
        nrec = 1
    out[C_STATUS] = ST_ALIVE
    out[C_TPREV] = math.nan
    out[C_TEXIT] = math.nan
    out[C_EXITNORM] = math.nan
    out[C_BALL] = 0.0
    out[C_ALIVE_PREV] = 0.0
    for i in range(d):
        out[N_FIXED + i] = math.nan
        out[N_FIXED + 2 * d + i] = math.nan
    while True:
        rx = _norm(x)
        dist = rx - radius
        if has_target and not finite:
            dt_target = max(_dist(x, y), eps)
            if dt_target < dist:
                dist = dt_target
        q = dist / lam
        scale = q ** alpha
        if gauss_coef > 0.0:
            g = gauss_coef * q * q
            if g > scale:
                scale = g
        dt = kappa * scale
        if dt < dt_min:
            dt = dt_min
        if dt > dt_max:
            dt = dt_max
        final = False
        if finite:
            remaining = t_end - final_dt - t
            if remaining <= 1e-12 * t_end:
                dt = t_end - t
                final = True
            elif remaining <= 2.0 * dt:
                dt = remaining
                final = final_dt <= 0.0
        s = _relativistic_increment(beta, dt, m, mu2, st, buf)
        sd = math.sqrt(2.0 * s)
        if has_target:
            pb = gauss_ball_prob(_dist(x, y), eps, sd, d)
            if final:
                out[C_BALL] = pb
                out[C_ALIVE_PREV] = 1.0
                for i in range(d):
                    out[N_FIXED + 2 * d + i] = x[i]
            if not finite:
                occ += dt * pb
        for i in range(d):
            x[i] += sd * normal(st, buf)
        t_new = t + dt
        nsteps += 1
        if record:
            if nrec < rec_t.shape[0]:
                rec_t[nrec] = t_new
                rec_x[nrec, :] = x
            nrec += 1
        rx = _norm(x)
        if rx <= radius:
            out[C_STATUS] = ST_EXITED
            out[C_TPREV] = t
            out[C_TEXIT] = t_new
            out[C_EXITNORM] = rx
            for i in range(d):
                out[N_FIXED + i] = x[i]
            t = t_new
            break
        t = t_new
        if final:
            break
        if not finite:
            if rx > esc_radius:
                out[C_STATUS] = ST_ESCAPED
                break
            if t >= t_end:
                out[C_STATUS] = ST_TIMECAP
                break
    out[C_OCC] = occ
    out[C_NSTEPS] = nsteps
    out[C_FINALNORM] = _norm(x)
    for i in range(d):
        out[N_FIXED + d + i] = x[i]
    return nrec


@njit(cache=True, nogil=True)
def _simulate_batch(x0, alpha, m, radius, t_end, finite, kappa, lam, dt_min, dt_max, diffusive,
                    esc_radius, has_target, y, eps, final_dt, key, first, n):
    d = x0.shape[0]
    out = np.empty((n, N_FIXED + 3 * d))
    dummy_t = np.empty(1)
    dummy_x = np.empty((1, d))
    for i in range(n):
        st = new_state(key, first + i)
        buf = np.empty(2)
        _run_path(x0, alpha, m, radius, t_end, finite, kappa, lam, dt_min, dt_max, diffusive,
                  esc_radius, has_target, y, eps, final_dt, st, buf, out[i], False, dummy_t,
                  dummy_x)
    return out


@njit(cache=True)
def _record_path(x0, alpha, m, radius, t_end, finite, kappa, lam, dt_min, dt_max, diffusive,
                 esc_radius, key, rep, cap):
    d = x0.shape[0]
    out = np.empty(N_FIXED + 3 * d)
    rec_t = np.empty(cap)
    rec_x = np.empty((cap, d))
    st = new_state(key, rep)
    buf = np.empty(2)
    y = np.zeros(d)
    nrec = _run_path(x0, alpha, m, radius, t_end, finite, kappa, lam, dt_min, dt_max, diffusive,
                     esc_radius, False, y, 1.0, 0.0, st, buf, out, True, rec_t, rec_x)
    return nrec, rec_t, rec_x, out


@njit(cache=True, nogil=True)
def _stable_batch(beta, dt, key, first, n):
    out = np.empty(n)
    scale = dt ** (1.0 / beta)
    for i in range(n):
        st = new_state(key, first + i)
        buf = np.empty(2)
        out[i] = scale * _stable_unit(beta, st, buf)
    return out


@njit(cache=True, nogil=True)
def _rejection_batch(beta, dt, mu2, key, first, n):
    out = np.empty(n)
    props = np.empty(n, dtype=np.int64)
    for i in range(n):
        st = new_state(key, first + i)
        buf = np.empty(2)
        s, k = _tilted_rejection(beta, dt, mu2, st, buf)
        out[i] = s
        props[i] = k
    return out, props


@njit(cache=True, nogil=True)
def _devroye_batch(beta, dt, mu2, key, first, n):
    out = np.empty(n)
    scale = dt ** (1.0 / beta)
    for i in range(n):
        st = new_state(key, first + i)
        buf = np.empty(2)
        out[i] = scale * _devroye(beta, mu2 * scale, st, buf)
    return out


@njit(cache=True, nogil=True)
def _relativistic_batch(beta, dt, m, mu2, key, first, n):
    out = np.empty(n)
    for i in range(n):
        st = new_state(key, first + i)
        buf = np.empty(2)
        out[i] = _relativistic_increment(beta, dt, m, mu2, st, buf)
    return out


@njit(cache=True, nogil=True)
def _process_batch(beta, dt, m, mu2, d, key, first, n):
    s_out = np.empty(n)
    x_out = np.empty((n, d))
    for i in range(n):
        st = new_state(key, first + i)
        buf = np.empty(2)
        s = _relativistic_increment(beta, dt, m, mu2, st, buf)
        sd = math.sqrt(2.0 * s)
        s_out[i] = s
        for j in range(d):
            x_out[i, j] = sd * normal(st, buf)
    return s_out, x_out


# ---------------------------------------------------------------------------
# public API


def _scalar_or_array(arr: np.ndarray, size):
    return float(arr[0]) if size is None else arr


def sample_stable_increment(beta: float, dt: float, seed: SeedSpec, size: int | None = None):
    """Positive ``beta``-stable increment with ``E exp(-lam S) = exp(-dt lam^beta)``.

    Replicate ``i`` of the result uses counter range ``i`` of ``seed``.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    if not dt > 0:
        raise ValueError("dt must be positive")
    n = 1 if size is None else int(size)
    return _scalar_or_array(_stable_batch(beta, dt, np.uint64(seed.key), 0, n), size)


def sample_tilted_rejection(beta: float, dt: float, tilt: float, seed: SeedSpec,
                            size: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-proposal-loop rejection sampler; returns variates and proposals used."""
    return _rejection_batch(beta, dt, tilt, np.uint64(seed.key), 0, int(size))


def sample_tilted_double_rejection(beta: float, dt: float, tilt: float, seed: SeedSpec,
                                   size: int) -> np.ndarray:
    """Tilted stable increment over ``dt`` via Devroye's double rejection."""
    if not tilt > 0:
        raise ValueError("double rejection needs a positive tilt")
    return _devroye_batch(beta, dt, tilt, np.uint64(seed.key), 0, int(size))


def substeps(params: ProcessParams, dt: float) -> int:
    """Number of rejection sub-steps used for a step of length ``dt`` (0 = double rejection)."""
    md = params.m * dt
    if md <= LN2:
        return 1
    k = math.ceil(md / LN2)
    return 0 if k > SUBSTEP_LIMIT else k


def sample_relativistic_increment(params: ProcessParams, dt: float, seed: SeedSpec,
                                  size: int | None = None):
    """Relativistic subordinator increment: ``E exp(-lam T) = exp(-dt((lam+m^{2/a})^{a/2} - m))``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    n = 1 if size is None else int(size)
    out = _relativistic_batch(0.5 * params.alpha, dt, params.m, params.mu2,
                              np.uint64(seed.key), 0, n)
    return _scalar_or_array(out, size)


def sample_process_increment(params: ProcessParams, dt: float, seed: SeedSpec,
                             size: int | None = None, with_subordinator: bool = False):
    """Spatial increment ``N(0, 2T I_d)`` with ``T`` the relativistic subordinator increment."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    n = 1 if size is None else int(size)
    s, x = _process_batch(0.5 * params.alpha, dt, params.m, params.mu2, params.d,
                          np.uint64(seed.key), 0, n)
    if size is None:
        if with_subordinator:
            return Increment(dt, float(s[0]), x[0])
        return x[0]
    return (s, x) if with_subordinator else x


def simulate_path(params: ProcessParams, domain: ExteriorBallDomain, x0, t_end: float,
                  step_policy: StepPolicy = StepPolicy(), seed: SeedSpec = SeedSpec(),
                  replicate: int = 0) -> PathSample:
    """Grid path of the process started at ``x0``, stopped at ``t_end`` or at the first
    grid point outside the domain."""
    x0 = as_point(x0, params.d)
    if not domain.contains(x0):
        raise ValueError("x0 must lie strictly inside the domain")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    cap = 4096
    while True:
        nrec, rec_t, rec_x, out = _record_path(
            x0, params.alpha, params.m, domain.radius, t_end, True,
            step_policy.kappa, step_policy.lam, step_policy.dt_min,
            step_policy.resolved_dt_max(t_end), step_policy.diffusive_scale,
            math.inf, np.uint64(seed.key), replicate, cap)
        if nrec <= cap:
            break
        cap = nrec
    exited = out[C_STATUS] == ST_EXITED
    d = params.d
    return PathSample(
        times=rec_t[:nrec].copy(),
        positions=rec_x[:nrec].copy(),
        exited=bool(exited),
        exit_bracket=(float(out[C_TPREV]), float(out[C_TEXIT])) if exited else None,
        exit_position=out[N_FIXED:N_FIXED + d].copy() if exited else None,
        seed=seed,
    )


def simulate_batch(params: ProcessParams, domain: ExteriorBallDomain, x0, t_end: float,
                   n: int, seed: SeedSpec, step_policy: StepPolicy = StepPolicy(),
                   finite: bool = True, esc_radius: float = math.inf,
                   target=None, eps: float = 1.0, final_dt: float = 0.0,
                   first: int = 0) -> np.ndarray:
    """Summary rows for ``n`` independent paths (replicates ``first .. first+n-1``)."""
    x0 = as_point(x0, params.d)
    has_target = target is not None
    y = as_point(target, params.d) if has_target else np.zeros(params.d)
    dt_max = step_policy.resolved_dt_max(t_end)
    return _simulate_batch(x0, params.alpha, params.m, domain.radius, t_end, finite,
                           step_policy.kappa, step_policy.lam, step_policy.dt_min, dt_max,
                           step_policy.diffusive_scale, esc_radius, has_target, y, eps,
                           float(final_dt), np.uint64(seed.key), first, int(n))
