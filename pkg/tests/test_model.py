import math

import numpy as np
import pytest

from relheat.model import (
    ExteriorBallDomain,
    ProcessParams,
    SpaceTimePoint,
    ball_volume,
    char_exponent,
    delta_D,
    levy_density,
    scale_triple,
    unit_sphere_area,
)
from relheat.special_functions import psi_profile, stable_constant


def test_params_validation():
    with pytest.raises(ValueError):
        ProcessParams(3, 2.0, 0.0)
    with pytest.raises(ValueError):
        ProcessParams(3, 1.0, -1.0)
    with pytest.raises(ValueError):
        ProcessParams(0, 1.0, 0.0)
    assert ProcessParams(3, 0.5, 2.0).mu2 == pytest.approx(16.0)


def test_char_exponent():
    p = ProcessParams(3, 1.0, 0.5)
    xi = np.array([0.0, 1.0, 3.0])
    assert np.allclose(char_exponent(p, xi), np.sqrt(xi ** 2 + 0.25) - 0.5)
    stable = ProcessParams(3, 1.5, 0.0)
    assert np.allclose(char_exponent(stable, xi), xi ** 1.5)


def test_levy_density_tempering():
    p0 = ProcessParams(3, 1.0, 0.0)
    p = ProcessParams(3, 1.0, 1.0)
    r = 2.0
    base = stable_constant(3, 1.0) * r ** -4
    assert levy_density(p0, r) == pytest.approx(base, rel=1e-12)
    assert levy_density(p, r) == pytest.approx(base * psi_profile(r, 3, 1.0), rel=1e-8)


def test_domain_and_distance():
    dom = ExteriorBallDomain(2.0)
    assert dom.contains([3.0, 0, 0]) and not dom.contains([1.0, 1.0, 0])
    assert delta_D(dom, [0, 4.0, 0]) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        ExteriorBallDomain(0.0)


def test_spacetime_point():
    p = SpaceTimePoint(1.0, (0, 0, 3.0), (0, 4.0, 0))
    assert p.separation == pytest.approx(5.0)
    with pytest.raises(ValueError):
        SpaceTimePoint(0.0, (1,), (1,))
    with pytest.raises(ValueError):
        SpaceTimePoint(1.0, (1, 2), (1,))


def test_scale_triple():
    p = ProcessParams(3, 0.5, 1.0)
    s = scale_triple(p, 2.0, 1.0, [1.0, 0, 0], domain=ExteriorBallDomain(1.0))
    assert s.params.m == 0.5 and s.t == 2.0
    assert s.x[0] == pytest.approx(4.0) and s.domain.radius == pytest.approx(4.0)
    assert s.factor == pytest.approx(2.0 ** 6)
    g = scale_triple(p, 2.0, None, [1.0, 0, 0], kind="green")
    assert g.factor == pytest.approx(2.0 ** 5) and g.t is None
    with pytest.raises(ValueError):
        scale_triple(p, -1.0, 1.0, [1, 0, 0])


def test_geometry_constants():
    assert unit_sphere_area(3) == pytest.approx(4 * math.pi)
    assert ball_volume(3, 2.0) == pytest.approx(32 * math.pi / 3)
