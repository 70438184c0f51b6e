import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import erf

from relheat.green_integrals import (
    REGIME_FAR,
    REGIME_NEAR,
    assemble_J,
    compute_I1,
    compute_I1_usub,
    compute_I2,
    compute_I3,
    g3_display,
    ratio_spread,
    regime,
)
from relheat.model import ProcessParams
from relheat.special_functions import phi_profile


@pytest.mark.parametrize("d", [3, 4, 5])
def test_I3_at_zero(d):
    assert compute_I3(0.0, d) == pytest.approx(2 / (d - 2), abs=1e-10)


@pytest.mark.parametrize("r", [0.3, 1.0, 4.0, 50.0, 1000.0])
def test_I3_closed_form_d3(r):
    k = max(1.0, r)
    head = 2 * math.exp(-r) * (1 - k ** -0.5)
    tail = math.sqrt(math.pi) * erf(r / math.sqrt(k)) / r
    assert compute_I3(r, 3) == pytest.approx(head + tail, rel=1e-9)


def test_I2_regimes():
    p = ProcessParams(3, 1.0, 0.1)
    # far: the jump term is the minimum on all of [1, 1/m]
    r = 40.0
    coef = phi_profile(0.1 * r, 3, 1.0) / r ** 4
    assert compute_I2(p, r) == pytest.approx(coef * (1 / 0.01 - 1) / 2, rel=1e-10)
    # tiny r: the on-diagonal term is the minimum, int_1^{1/m} t^{-3} dt
    assert compute_I2(p, 1e-3) == pytest.approx((1 - 0.01) / 2, rel=1e-10)
    with pytest.raises(ValueError):
        compute_I2(ProcessParams(3, 1.0, 0.9), 1.0)


def test_regime_boundary():
    p = ProcessParams(3, 0.5, 0.1)
    edge = p.m ** (-1 / p.alpha)
    assert regime(p, edge) == REGIME_NEAR
    assert regime(p, edge * 1.001) == REGIME_FAR


@pytest.mark.parametrize("dx,dy,r", [(0.1, 2.0, 1.5), (0.02, 0.05, 3.0), (math.inf, 0.5, 2.0)])
def test_I1_usub_cross_check(dx, dy, r):
    p = ProcessParams(3, 1.0, 0.1)
    a = compute_I1(p, dx, dy, r)
    b = compute_I1_usub(p, dx, dy, r)
    assert a == pytest.approx(b, rel=1e-6)


def test_I1_usub_rejects_small_r():
    with pytest.raises(ValueError):
        compute_I1_usub(ProcessParams(3, 1.0, 0.1), 1.0, 1.0, 0.2)


def direct_J(p, dx, dy, r):
    d, a, m = p.d, p.alpha, p.m
    rho = m ** (1 / a) * r
    jump = phi_profile(rho, d, a) / r ** (d + a)
    cl = lambda dl, t: 1.0 if math.isinf(dl) else min(1.0, dl / t ** (1 / a)) ** (a / 2)
    bx, by = min(1.0, dx) ** (a / 2), min(1.0, dy) ** (a / 2)

    def f(t):
        if t <= 1:
            return cl(dx, t) * cl(dy, t) * min(t ** (-d / a), t * jump)
        if t <= 1 / m:
            return bx * by * min(t ** (-d / a), t * jump)
        return bx * by * m ** (d / a - d / 2) * t ** (-d / 2) * math.exp(-min(rho, rho ** 2 / (m * t)))

    knots = sorted({1.0, 1 / m, jump ** (-a / (d + a)), rho / m, dx ** a, dy ** a})
    knots = [k for k in knots if 0 < k < math.inf]
    edges = [0.0, *knots, math.inf]
    return sum(integrate.quad(f, lo, hi, epsabs=0, epsrel=1e-11, limit=400)[0]
               for lo, hi in zip(edges[:-1], edges[1:]))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("dx,dy,r", [(0.3, 2.0, 0.7), (5.0, 0.05, 8.0), (1.0, 1.0, 60.0)])
def test_J_is_the_time_integral(alpha, dx, dy, r):
    p = ProcessParams(3, alpha, 0.1)
    dec = assemble_J(p, dx, dy, r)
    assert dec.J == pytest.approx(direct_J(p, dx, dy, r), rel=1e-7)
    assert dec.ratio == pytest.approx(dec.J / dec.display)


def test_g3_polynomial_factor():
    p = ProcessParams(3, 1.0, 0.1)
    r = np.geomspace(10.5, 300, 30)
    vals = [assemble_J(p, 10.0, 10.0, x).I2 for x in r]
    plain = [g3_display(p, x) for x in r]
    full = [g3_display(p, x, keep_polynomial=True) for x in r]
    assert ratio_spread(vals, full) == pytest.approx(1.0, abs=1e-9)
    assert ratio_spread(vals, plain) > 10


def test_ratio_spread():
    assert ratio_spread([2.0, 4.0], [1.0, 1.0]) == 2.0
    assert ratio_spread([1.0, -1.0], [1.0, 1.0]) == math.inf
    assert ratio_spread([1.0, 1.0], [1.0, 0.0]) == math.inf
