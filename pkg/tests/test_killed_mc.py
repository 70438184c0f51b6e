import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import gamma

from relheat.free_kernel import eval_free, eval_free_green
from relheat.killed_mc import (
    HorizonError,
    McEstimate,
    hitting_prob_ball,
    killed_density_huntformula,
    killed_density_smallball,
    killed_green_occupation,
    run_blocks,
    summarize,
    survival_prob,
)
from relheat.model import ExteriorBallDomain, ProcessParams
from relheat.subordinator_sampler import SeedSpec, StepPolicy

P = ProcessParams(3, 1.0, 0.5)
DOM = ExteriorBallDomain(1.0)


def stable_hitting_exact(d, alpha, R, x):
    """Ball-hitting probability of the isotropic stable process started at |x| > R."""
    top = R * R / (x * x - R * R)
    c = gamma(d / 2) / (gamma((d - alpha) / 2) * gamma(alpha / 2))
    f = lambda u: u ** ((d - alpha) / 2 - 1) * (1 + u) ** (-d / 2)
    return c * integrate.quad(f, 0, top)[0]


def test_summarize_and_blocks():
    mean, se = summarize(np.array([1.0, 2.0, 3.0, 4.0]))
    assert mean == 2.5 and se == pytest.approx(math.sqrt(5 / 3 / 4))
    rows = run_blocks(lambda s, c: np.arange(s, s + c)[:, None], 10, threads=3, block=3)
    assert rows.ravel().tolist() == list(range(10))
    with pytest.raises(ValueError):
        McEstimate(1.0, -1.0, 10, SeedSpec())


@pytest.mark.parametrize("alpha,x", [(1.0, 2.0), (1.5, 4.0)])
def test_hitting_matches_stable_formula(alpha, x):
    est = hitting_prob_ball(ProcessParams(3, alpha, 0.0), 1.0, [x, 0, 0], 1e-3, 20_000,
                            SeedSpec(0, 1), StepPolicy(kappa=0.025, dt_max=math.inf))
    exact = stable_hitting_exact(3, alpha, 1.0, x)
    assert abs(est.value - exact) < 4 * est.std_error
    assert est.diagnostics["bias_bound"] <= 1e-3


def test_hitting_horizon_error():
    with pytest.raises(HorizonError):
        hitting_prob_ball(ProcessParams(3, 1.0, 0.0), 1.0, [2.0, 0, 0], 1e-12, 10,
                          SeedSpec(), max_radius=1e3)


def test_survival_monotone_and_above_never_hit():
    near = survival_prob(P, DOM, [1.05, 0, 0], 1.0, 8000, SeedSpec(1, 0))
    far = survival_prob(P, DOM, [1.5, 0, 0], 1.0, 8000, SeedSpec(1, 0))
    assert near.value < far.value
    early = survival_prob(P, DOM, [1.05, 0, 0], 0.2, 8000, SeedSpec(1, 0))
    assert early.value > near.value
    never = 1 - hitting_prob_ball(P, 1.0, [2.0, 0, 0], 1e-3, 8000, SeedSpec(1, 0)).value
    later = survival_prob(P, DOM, [2.0, 0, 0], 5.0, 8000, SeedSpec(1, 0))
    assert later.value + 3 * later.std_error > never


def test_density_estimators_agree_and_sit_below_free():
    x, y, t = [1.5, 0, 0], [0, 2.0, 0], 1.0
    hunt = killed_density_huntformula(P, DOM, t, x, y, 20_000, SeedSpec(2, 0))
    sb = killed_density_smallball(P, DOM, t, x, y, 50_000, SeedSpec(3, 0))
    free = eval_free(P, t, math.dist(x, y)).value
    assert hunt.value < free
    assert abs(hunt.value - sb.value) < 4 * math.hypot(hunt.std_error, sb.std_error)
    assert sb.diagnostics["final_dt"] == pytest.approx(min(0.5 * t, (2 * sb.diagnostics["eps"])))


def test_target_auto_uses_symmetry():
    x, y = [1.1, 0, 0], [0, 3.0, 0]
    # auto starts paths at the endpoint nearer the obstacle whichever order is given
    a = killed_density_huntformula(P, DOM, 0.5, y, x, 4000, SeedSpec(4, 0), target="auto")
    b = killed_density_huntformula(P, DOM, 0.5, x, y, 4000, SeedSpec(4, 0), target="y")
    assert a.diagnostics["swapped"] and a.value == b.value
    with pytest.raises(ValueError):
        killed_density_huntformula(P, DOM, 0.5, x, y, 10, SeedSpec(), target="x")


def test_threads_do_not_change_results():
    args = (P, DOM, 1.0, [1.3, 0, 0], [0, 1.6, 0], 9000, SeedSpec(5, 0))
    one = killed_density_huntformula(*args, threads=1)
    many = killed_density_huntformula(*args, threads=4)
    assert one.value == many.value and one.std_error == many.std_error


def test_green_occupation_below_free_green():
    x, y = [2.0, 0, 0], [0, 2.5, 0]
    g = killed_green_occupation(P, DOM, x, y, 4000, SeedSpec(6, 0))
    free = eval_free_green(P, math.dist(x, y)).value
    assert 0 < g.value < free + 3 * g.std_error


def test_rejects_points_outside_domain():
    with pytest.raises(ValueError):
        survival_prob(P, DOM, [0.5, 0, 0], 1.0, 10, SeedSpec())
    with pytest.raises(ValueError):
        survival_prob(ProcessParams(2, 1.0, 0.5), ExteriorBallDomain(1.0), [2, 0], 1.0, 10,
                      SeedSpec())
