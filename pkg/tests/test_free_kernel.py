import math

import numpy as np
import pytest
from scipy.special import kv

from relheat.free_kernel import (
    FreeKernelTable,
    RadialKernel,
    cauchy_kernel,
    eval_free,
    eval_free_array,
    eval_free_green,
    free_green_values,
    log_stable_density,
    riesz_green,
    wynn_epsilon,
)
from relheat.model import ProcessParams, scale_triple


def relativistic_cauchy(m, t, r):
    # alpha = 1, d = 3: 2 t (m / 2 pi)^2 e^{mt} K_2(m s) / s^2 with s^2 = r^2 + t^2
    s = math.hypot(r, t)
    return 2 * t * (m / (2 * math.pi)) ** 2 * math.exp(m * t) * kv(2, m * s) / s ** 2


@pytest.mark.parametrize("method", ["hankel", "mixture", "auto"])
@pytest.mark.parametrize("t,r", [(0.05, 0.0), (0.3, 0.5), (1.0, 2.0), (20.0, 3.0)])
def test_relativistic_cauchy_closed_form(method, t, r):
    v = eval_free(ProcessParams(3, 1.0, 0.5), t, r, method=method)
    assert v.value == pytest.approx(relativistic_cauchy(0.5, t, r), rel=1e-8)


def test_cauchy_m0():
    p = ProcessParams(3, 1.0, 0.0)
    for t, r in [(0.1, 0.0), (1.0, 1.0), (10.0, 50.0)]:
        ref = t / (math.pi ** 2 * (t * t + r * r) ** 2)
        assert cauchy_kernel(3, t, r) == pytest.approx(ref, rel=1e-14)
        assert eval_free(p, t, r).value == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_methods_agree(alpha):
    p = ProcessParams(3, alpha, 0.3)
    for t, r in [(0.2, 0.1), (1.0, 1.5), (5.0, 4.0)]:
        h = eval_free(p, t, r, method="hankel").value
        mx = eval_free(p, t, r, method="mixture").value
        assert h == pytest.approx(mx, rel=1e-7)


def test_scaling_identity():
    p = ProcessParams(3, 1.5, 1.0)
    for b in (0.5, 2.0, 10.0):
        s = scale_triple(p, b, 0.7, [0.8, 0, 0])
        lhs = eval_free(p, 0.7, 0.8).value
        rhs = s.factor * eval_free(s.params, s.t, float(s.x[0])).value
        assert lhs == pytest.approx(rhs, rel=1e-8)


def test_stable_density_half_closed_form():
    # beta = 1/2: density x^{-3/2} e^{-1/(4x)} / (2 sqrt(pi))
    x = np.array([0.01, 0.1, 1.0, 10.0, 1e3])
    ref = np.exp(-1 / (4 * x)) * x ** -1.5 / (2 * math.sqrt(math.pi))
    assert np.allclose(np.exp(log_stable_density(0.5, x)), ref, rtol=1e-9)


def test_green_riesz_and_time_route():
    p0 = ProcessParams(3, 1.0, 0.0)
    for r in (0.1, 1.0, 20.0):
        assert eval_free_green(p0, r).value == pytest.approx(riesz_green(p0, r), rel=1e-6)
    p = ProcessParams(3, 1.0, 0.5)
    pot, _ = free_green_values(p, [0.5, 3.0])
    tim, _ = free_green_values(p, [0.5, 3.0], method="time")
    assert np.allclose(pot, tim, rtol=1e-4)
    # Phi <= |xi|^alpha, so the tempered process is slower and its Green function larger
    assert np.all(pot > [riesz_green(p0, 0.5), riesz_green(p0, 3.0)])


@pytest.mark.parametrize("alpha,m", [(1.0, 0.5), (1.5, 1.0), (0.5, 0.2)])
def test_green_newtonian_far_field(alpha, m):
    # small xi: Phi ~ (alpha/2) m^{1-2/alpha} |xi|^2, so G ~ 2 / (alpha m^{1-2/alpha} 4 pi r)
    r = 1000.0
    g = eval_free_green(ProcessParams(3, alpha, m), r).value
    assert g * 4 * math.pi * r * alpha * m ** (1 - 2 / alpha) / 2 == pytest.approx(1.0, rel=1e-4)
    with pytest.raises(ValueError):
        eval_free_green(ProcessParams(2, 1.0, 0.5), 1.0)


def test_interpolants_match_pointwise():
    p = ProcessParams(3, 1.0, 0.5)
    k = RadialKernel(p, 0.3, 5.0)
    r = np.array([0.0, 0.05, 0.7, 4.9])
    ref = [relativistic_cauchy(0.5, 0.3, x) for x in r]
    assert np.allclose(k(r), ref, rtol=1e-5)
    with pytest.raises(ValueError):
        k(6.0)
    tab = FreeKernelTable(p, 2.0, 0.5, 4.0)
    assert tab(1.0, 2.0) == pytest.approx(relativistic_cauchy(0.5, 1.0, 2.0), rel=1e-4)
    vals, rel = eval_free_array(p, 1.0, [0.0, 2.0])
    assert np.allclose(vals, [relativistic_cauchy(0.5, 1.0, x) for x in (0.0, 2.0)], rtol=1e-8)


def test_wynn_epsilon_accelerates_alternating_series():
    terms = np.array([(-1) ** k / (k + 1) for k in range(12)])
    val, err = wynn_epsilon(np.cumsum(terms))
    assert abs(val - math.log(2)) < 1e-8


def test_invalid_arguments():
    p = ProcessParams()
    with pytest.raises(ValueError):
        eval_free(p, 0.0, 1.0)
    with pytest.raises(ValueError):
        eval_free(p, 1.0, -1.0)
    with pytest.raises(ValueError):
        eval_free(p, 1.0, 1.0, method="fft")
