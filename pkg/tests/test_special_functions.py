import math

import numpy as np
import pytest
from scipy.special import gamma

from relheat.special_functions import (
    QuadratureError,
    QuadratureSpec,
    adaptive_quad,
    bessel_j,
    bessel_j_zeros,
    phi_profile,
    psi_profile,
    stable_constant,
)


@pytest.mark.parametrize("d", [3, 4])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_psi_at_zero_is_one(d, alpha):
    assert abs(psi_profile(0.0, d, alpha) - 1.0) < 1e-8


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_psi_decreasing_and_comparable_to_phi(alpha):
    r = np.geomspace(1e-3, 100, 60)
    psi = np.array([psi_profile(x, 3, alpha) for x in r])
    assert np.all(np.diff(psi) < 0)
    q = psi / np.array([phi_profile(x, 3, alpha) for x in r])
    assert q.max() / q.min() < 10


def test_stable_constant_closed_form():
    for d, a in [(3, 1.0), (3, 0.5), (4, 1.5)]:
        ref = a * 2 ** (a - 1) * gamma((d + a) / 2) / (math.pi ** (d / 2) * gamma(1 - a / 2))
        assert stable_constant(d, a) == pytest.approx(ref, rel=1e-13)
    assert stable_constant(3, 1.0) == pytest.approx(1 / math.pi ** 2, rel=1e-13)


def test_phi_profile_values():
    assert phi_profile(0.0, 3, 1.0) == pytest.approx(1.0)
    assert phi_profile(4.0, 3, 1.0) == pytest.approx(math.exp(-4) * (1 + 4 ** 1.5))


def test_adaptive_quad_and_failure():
    val, err = adaptive_quad(math.exp, 0.0, 1.0)
    assert val == pytest.approx(math.e - 1, rel=1e-12)
    assert err < 1e-10
    with pytest.raises(QuadratureError):
        adaptive_quad(lambda x: 1.0 / x, 0.0, 1.0, QuadratureSpec(max_subdivisions=5))


def test_bessel_helpers():
    assert bessel_j(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sin(1.0), rel=1e-12)
    z = bessel_j_zeros(0.5, 4)
    assert np.allclose(z, math.pi * np.arange(1, 5))


def test_quadrature_spec_validation_and_refinement():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    fine = QuadratureSpec().refined(2.0)
    assert fine.rel_tol < QuadratureSpec().rel_tol
    assert fine.max_subdivisions == 400
