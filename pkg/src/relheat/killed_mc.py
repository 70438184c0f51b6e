"""Monte-Carlo estimators for the process killed on hitting a closed ball.

Every estimator is a mean over independent replicates. Replicate ``i`` always
uses counter range ``i`` of its stream, and replicates are processed in fixed
blocks whose rows are reassembled in replicate order, so results do not depend
on the number of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import subordinator_sampler as ss
from .free_kernel import FreeKernelTable, RadialKernel, eval_free, eval_free_green
from .model import ExteriorBallDomain, ProcessParams, as_point, ball_volume, delta_D
from .subordinator_sampler import SeedSpec, StepPolicy

BLOCK_SIZE = 4096
DEFAULT_MAX_TIME = 1e12
DEFAULT_MAX_ESCAPE_RADIUS = 1e9


class HorizonError(ValueError):
    """The requested truncation tolerance cannot be met within the configured limits."""


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_replicates: int
    seed: SeedSpec
    bias_note: str = ""
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n_replicates < 1:
            raise ValueError("n_replicates must be positive")
        if not self.std_error >= 0:
            raise ValueError("std_error must be nonnegative")


def resolve_threads(threads: int | None = None) -> int:
    """Explicit count, else ``RELHEAT_THREADS``, else 1."""
    if threads is None:
        env = os.environ.get("RELHEAT_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def run_blocks(fn, n: int, threads: int | None = None, block: int = BLOCK_SIZE) -> np.ndarray:
    """Evaluate ``fn(first, count)`` over fixed replicate blocks and stack rows in order."""
    if n < 1:
        raise ValueError("need at least one replicate")
    starts = list(range(0, n, block))
    jobs = [(s, min(block, n - s)) for s in starts]
    threads = resolve_threads(threads)
    if threads == 1 or len(jobs) == 1:
        parts = [fn(s, c) for s, c in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda j: fn(*j), jobs))
    return np.concatenate(parts, axis=0)


def summarize(samples: np.ndarray) -> tuple[float, float]:
    """Mean and standard error with order-independent compensated sums."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    mean = math.fsum(x) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def _check_interior(domain: ExteriorBallDomain, x, name: str = "x") -> None:
    if not domain.contains(x):
        raise ValueError(f"{name} must lie strictly inside the domain")


def _orient(domain: ExteriorBallDomain, x, y, target: str):
    """Endpoints as ``(start, target, swapped)``.

    ``target="auto"`` uses the symmetry of the killed kernel to put the
    target at the endpoint farther from the obstacle, which is where both
    density estimators have their smallest variance.
    """
    if target == "y":
        return x, y, False
    if target == "auto":
        if delta_D(domain, y) < delta_D(domain, x):
            return y, x, True
        return x, y, False
    raise ValueError(f"target must be 'y' or 'auto', got {target!r}")


def _batch(params, domain, x, t_end, n, seed, policy, threads, **kw) -> np.ndarray:
    x = as_point(x, params.d)

    def fn(first, count):
        return ss.simulate_batch(params, domain, x, t_end, count, seed, policy,
                                 first=first, **kw)

    return run_blocks(fn, n, threads)


# ---------------------------------------------------------------------------
# finite horizon


def simulate_exits(params: ProcessParams, domain: ExteriorBallDomain, x, t: float, n: int,
                   seed: SeedSpec, step_policy: StepPolicy = StepPolicy(),
                   threads: int | None = None) -> np.ndarray:
    """Per-replicate rows of the sampler (see ``subordinator_sampler`` for the columns)."""
    params.require_transient()
    if not t > 0:
        raise ValueError("t must be positive")
    x = as_point(x, params.d)
    _check_interior(domain, x)
    return _batch(params, domain, x, t, n, seed, step_policy, threads)


def survival_prob(params: ProcessParams, domain: ExteriorBallDomain, x, t: float, n: int,
                  seed: SeedSpec, step_policy: StepPolicy = StepPolicy(),
                  threads: int | None = None) -> McEstimate:
    """Fraction of paths not observed inside the obstacle by time ``t``."""
    rows = simulate_exits(params, domain, x, t, n, seed, step_policy, threads)
    alive = (rows[:, ss.C_STATUS] != ss.ST_EXITED).astype(float)
    value, se = summarize(alive)
    return McEstimate(value, se, n, seed,
                      "exits between grid times are missed: biased upward",
                      {"mean_steps": float(np.mean(rows[:, ss.C_NSTEPS]))})


def default_eps(params: ProcessParams, domain: ExteriorBallDomain, t: float, y) -> float:
    return min(0.1 * delta_D(domain, y), 0.2 * min(1.0, t ** (1.0 / params.alpha)))


def killed_density_smallball(params: ProcessParams, domain: ExteriorBallDomain, t: float, x, y,
                             n: int, seed: SeedSpec, eps: float | None = None,
                             step_policy: StepPolicy = StepPolicy(),
                             threads: int | None = None, target: str = "y") -> McEstimate:
    """Killed density at ``(t, x, y)`` by conditioning out the last step.

    Paths are stepped to ``t - h`` with ``h = min(t/2, (2 eps)^alpha)``, where
    ``eps`` is the radius of the small ball the last step is meant to resolve.
    Each path alive at ``t - h`` contributes the free density ``p(h, X_{t-h} - y)``,
    which replaces the ball indicator ``1{X_t in B(y, eps)} / |B(y, eps)|`` by its
    conditional mean and bounds every contribution by ``p(h, 0)``.
    """
    params.require_transient()
    x = as_point(x, params.d)
    y = as_point(y, params.d)
    _check_interior(domain, x)
    _check_interior(domain, y, "y")
    x, y, swapped = _orient(domain, x, y, target)
    if eps is None:
        eps = default_eps(params, domain, t, y)
    if not 0 < eps < 0.5 * delta_D(domain, y):
        raise ValueError("eps must lie in (0, delta_D(y)/2)")
    final_dt = min(0.5 * t, (2.0 * eps) ** params.alpha)
    rows = _batch(params, domain, x, t, n, seed, step_policy, threads,
                  target=y, eps=eps, final_dt=final_dt)
    d = params.d
    alive = rows[:, ss.C_ALIVE_PREV] > 0
    contrib = np.zeros(len(rows))
    if np.any(alive):
        pre = rows[alive, ss.N_FIXED + 2 * d:ss.N_FIXED + 3 * d]
        dist = np.linalg.norm(pre - y, axis=1)
        kernel = RadialKernel(params, final_dt, max(float(dist.max()), 1e-12))
        contrib[alive] = kernel(dist)
    value, se = summarize(contrib)
    return McEstimate(value, se, n, seed,
                      f"exits during the last step of length {final_dt:.3g} are not "
                      "removed and grid exits are missed: biased upward",
                      {"eps": eps, "final_dt": final_dt, "swapped": swapped,
                       "alive_fraction": float(np.mean(alive))})


_TABLE_CACHE: dict = {}


def _kernel_table(params: ProcessParams, t: float, r_min: float, r_max: float) -> FreeKernelTable:
    # tables are reused across estimators with the same kernel and a covering range
    lo = 2.0 ** math.floor(math.log2(r_min))
    hi = 2.0 ** math.ceil(math.log2(r_max))
    key = (params, float(t), lo, hi)
    table = _TABLE_CACHE.get(key)
    if table is None:
        table = FreeKernelTable(params, t, lo, hi)
        if len(_TABLE_CACHE) > 32:
            _TABLE_CACHE.clear()
        _TABLE_CACHE[key] = table
    return table


def killed_density_huntformula(params: ProcessParams, domain: ExteriorBallDomain, t: float, x, y,
                               n: int, seed: SeedSpec, step_policy: StepPolicy = StepPolicy(),
                               threads: int | None = None, target: str = "y") -> McEstimate:
    """``p(t, x - y) - E_x[p(t - tau, X_tau - y); tau < t]``.

    The exit time is the midpoint of the bracketing grid interval and the
    exit position the first grid position inside the obstacle.
    """
    params.require_transient()
    x = as_point(x, params.d)
    y = as_point(y, params.d)
    _check_interior(domain, x)
    _check_interior(domain, y, "y")
    x, y, swapped = _orient(domain, x, y, target)
    free = eval_free(params, t, float(np.linalg.norm(x - y)))
    rows = _batch(params, domain, x, t, n, seed, step_policy, threads)
    d = params.d
    exited = rows[:, ss.C_STATUS] == ss.ST_EXITED
    corr = np.zeros(n)
    if np.any(exited):
        sub = rows[exited]
        tau = 0.5 * (sub[:, ss.C_TPREV] + sub[:, ss.C_TEXIT])
        pos = sub[:, ss.N_FIXED:ss.N_FIXED + d]
        dist = np.linalg.norm(pos - y[None, :], axis=1)
        table = _kernel_table(params, t, float(dist.min()), float(dist.max()))
        corr[exited] = table(t - tau, dist)
    mean_corr, se = summarize(corr)
    return McEstimate(free.value - mean_corr, math.hypot(se, free.est_error), n, seed,
                      "exit time taken at the bracket midpoint; missed grid exits bias upward",
                      {"free_kernel": free.value, "exit_fraction": float(np.mean(exited)),
                       "swapped": swapped})


# ---------------------------------------------------------------------------
# infinite horizon


def escape_radius(params: ProcessParams, radius: float, x_mag: float, horizon_tol: float,
                  max_radius: float = DEFAULT_MAX_ESCAPE_RADIUS) -> float:
    """Smallest doubling of ``50 max(R, |x|)`` at which the hitting profile is below ``horizon_tol``."""
    from .bounds_catalog import profile_hitting

    if not horizon_tol > 0:
        raise ValueError("horizon_tol must be positive")
    r = 50.0 * max(radius, x_mag)
    while profile_hitting(params, radius, r) > horizon_tol:
        r *= 2.0
        if r > max_radius:
            raise HorizonError(
                f"horizon_tol={horizon_tol:g} needs an escape radius beyond {max_radius:g}")
    return r


def hitting_prob_ball(params: ProcessParams, radius: float, x, horizon_tol: float, n: int,
                      seed: SeedSpec, step_policy: StepPolicy = StepPolicy(dt_max=math.inf),
                      max_time: float = DEFAULT_MAX_TIME,
                      max_radius: float = DEFAULT_MAX_ESCAPE_RADIUS,
                      threads: int | None = None) -> McEstimate:
    """Probability that the path ever enters the closed ball of radius ``radius``.

    Paths are followed until they hit, leave the escape radius, or reach
    ``max_time``; the last two count as misses, so the estimate is biased
    downward by at most the hitting profile at the escape radius.
    """
    params.require_transient()
    x = as_point(x, params.d)
    xm = float(np.linalg.norm(x))
    if xm < 2 * radius:
        raise ValueError("hitting_prob_ball requires |x| >= 2R")
    r_esc = escape_radius(params, radius, xm, horizon_tol, max_radius)
    domain = ExteriorBallDomain(radius)
    rows = _batch(params, domain, x, max_time, n, seed, step_policy, threads,
                  finite=False, esc_radius=r_esc)
    status = rows[:, ss.C_STATUS]
    value, se = summarize((status == ss.ST_EXITED).astype(float))
    capped = float(np.mean(status == ss.ST_TIMECAP))
    from .bounds_catalog import profile_hitting

    bound = profile_hitting(params, radius, r_esc)
    return McEstimate(value, se, n, seed,
                      f"underestimate: escaped paths (radius {r_esc:.4g}) counted as misses, "
                      f"post-escape hitting profile {bound:.3g}; {capped:.3g} of paths hit max_time",
                      {"escape_radius": r_esc, "bias_bound": bound, "timecap_fraction": capped})


def killed_green_occupation(params: ProcessParams, domain: ExteriorBallDomain, x, y, n: int,
                            seed: SeedSpec, eps: float | None = None,
                            horizon_tol: float = 1e-3,
                            step_policy: StepPolicy = StepPolicy(dt_max=math.inf),
                            max_time: float = DEFAULT_MAX_TIME,
                            max_radius: float = DEFAULT_MAX_ESCAPE_RADIUS,
                            threads: int | None = None) -> McEstimate:
    """Expected occupation of ``B(y, eps)`` before killing, divided by ``|B(y, eps)|``.

    Each step contributes its length times the exact Gaussian probability
    that the step ends in the ball.
    """
    params.require_transient()
    x = as_point(x, params.d)
    y = as_point(y, params.d)
    _check_interior(domain, x)
    _check_interior(domain, y, "y")
    sep = float(np.linalg.norm(x - y))
    if sep == 0:
        raise ValueError("x and y must differ")
    if eps is None:
        eps = min(0.1 * delta_D(domain, y), 0.2 * min(1.0, sep))
    if not 0 < eps < 0.5 * delta_D(domain, y):
        raise ValueError("eps must lie in (0, delta_D(y)/2)")
    reach = max(float(np.linalg.norm(x)), float(np.linalg.norm(y)))
    r_esc = escape_radius(params, domain.radius, reach, horizon_tol, max_radius)
    rows = _batch(params, domain, x, max_time, n, seed, step_policy, threads,
                  finite=False, esc_radius=r_esc, target=y, eps=eps)
    vol = ball_volume(params.d, eps)
    value, se = summarize(rows[:, ss.C_OCC] / vol)
    bound = eval_free_green(params, r_esc - float(np.linalg.norm(y)) - eps).value
    capped = float(np.mean(rows[:, ss.C_STATUS] == ss.ST_TIMECAP))
    return McEstimate(value, se, n, seed,
                      f"underestimate: occupation after escape radius {r_esc:.4g} dropped "
                      f"(at most {bound:.3g}); ball average over radius {eps:.3g}",
                      {"eps": eps, "escape_radius": r_esc, "bias_bound": bound,
                       "timecap_fraction": capped})
