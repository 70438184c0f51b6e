import math

import numpy as np
import pytest

from relheat.bounds_catalog import (
    LOWER,
    UPPER,
    ComparisonProfile,
    default_exponent_constant,
    green_display,
    profile_boundary_factor,
    profile_free_green,
    profile_hitting,
    profile_Psi,
    profile_Psi_tilde,
    profile_thm11_smalltime,
    profile_thm12,
    profile_thm13_green,
    shift_comparability_check,
    thm12_comparison,
    verify_envelope,
)
from relheat.model import ExteriorBallDomain, ProcessParams, SpaceTimePoint

P = ProcessParams(3, 1.0, 0.5)
DOM = ExteriorBallDomain(1.0)
O = (0.0, 0.0, 0.0)


def grid():
    return [SpaceTimePoint(t, (2.0, 0, 0), (0, r + 1.5, 0)) for t in (0.5, 2.0) for r in (0, 3)]


def const_profile(lo, hi):
    return ComparisonProfile("const", lambda t, x, y: lo, lambda t, x, y: hi)


def test_envelope_trivial_cases():
    g = grid()
    rep = verify_envelope(lambda p: 1.0, const_profile(1.0, 1.0), g, 10.0)
    assert rep.c_star == 1.0 and rep.passed and rep.spread == pytest.approx(1.0)
    rep = verify_envelope(lambda p: 2.0, const_profile(1.0, 1.0), g, 10.0)
    assert rep.c_star == pytest.approx(2.0)
    rep = verify_envelope(lambda p: 0.05, const_profile(1.0, 1.0), g, 10.0)
    assert rep.c_star == pytest.approx(20.0) and not rep.passed


def test_envelope_error_bars_count_in_favour():
    g = grid()
    rep = verify_envelope(lambda p: (2.0, 0.25), const_profile(1.0, 1.0), g, 10.0, n_sigma=2.0)
    assert rep.c_star == pytest.approx(1.5)
    d = rep.to_dict()
    assert d["c_star"] == rep.c_star and len(d["points"]) == len(g)


def test_envelope_rejects_invalid_points():
    prof = thm12_comparison(P, DOM)
    with pytest.raises(ValueError):
        verify_envelope(lambda p: 1.0, prof, [SpaceTimePoint(1.0, (0.5, 0, 0), (2, 0, 0))], 10)
    with pytest.raises(ValueError):
        verify_envelope(lambda p: 1.0, prof, [], 10)


def test_psi_profiles_regimes():
    # small time, r = 0: on-diagonal t^{-d/alpha}
    assert profile_Psi(3, 1.0, 0.5, 1.0, 1.0, 0.5, O, O) == pytest.approx(0.5 ** -3)
    # large time: m^{d/a - d/2} t^{-d/2} exp(-min(m r, r^2 / t) / c)
    t, r = 10.0, 2.0
    ref = 0.5 ** 1.5 * t ** -1.5 * math.exp(-min(0.5 * r, 0.5 * r * r / t) / 2.0)
    assert profile_Psi(3, 1.0, 0.5, 1.0, 2.0, t, O, (r, 0, 0)) == pytest.approx(ref)
    assert profile_Psi_tilde(3, 1.0, 0.5, 2.0, t, O, (r, 0, 0)) == pytest.approx(ref)
    assert profile_Psi(3, 1.0, 0.0, 1.0, 1.0, 1e3, O, O) == pytest.approx(1e-9)


def test_boundary_factor_and_thm12():
    assert profile_boundary_factor(0.01, 4.0, 1.0) == pytest.approx(0.1)
    assert profile_boundary_factor(0.01, 0.01, 1.0) == 1.0
    x, y = (1.01, 0, 0), (0, 1.04, 0)
    lo = profile_thm12(P, DOM, 1.0, 4.0, x, y, LOWER)
    hi = profile_thm12(P, DOM, 1.0, 4.0, x, y, UPPER)
    assert 0 < lo <= hi
    assert default_exponent_constant(0.5) == 2.0 and default_exponent_constant(1.5) == 3.0
    with pytest.raises(ValueError):
        profile_thm12(P, DOM, 1.0, 4.0, x, y, "middle")


def test_thm11_validity_window():
    x, y = (1.5, 0, 0), (0, 1.5, 0)
    assert profile_thm11_smalltime(P, DOM, 0.5, x, y, UPPER) >= \
        profile_thm11_smalltime(P, DOM, 0.5, x, y, LOWER)
    with pytest.raises(ValueError):
        profile_thm11_smalltime(P, DOM, 2.0, x, y, UPPER)


def test_green_profiles():
    assert profile_free_green(ProcessParams(3, 1.0, 0.0), 2.0) == pytest.approx(0.25)
    assert profile_free_green(P, 2.0) == pytest.approx(0.25 + 0.5 * 0.5)
    r = 3.0
    assert green_display(P, 5.0, 5.0, r) == pytest.approx((1 + 1.5) / r ** 2)
    assert green_display(P, 0.25, 1.0, r) == pytest.approx((1 + 1.5) / r ** 2 * 0.5)
    assert profile_thm13_green(P, DOM, (4.0, 0, 0), (0, 4.0, 0)) == \
        pytest.approx(green_display(P, 3.0, 3.0, 4 * math.sqrt(2)))
    with pytest.raises(ValueError):
        profile_thm13_green(P, DOM, (2, 0, 0), (2, 0, 0))


def test_hitting_profile():
    p0 = ProcessParams(3, 1.0, 0.0)
    assert profile_hitting(p0, 1.0, 4.0) == pytest.approx(1 / 16)
    with pytest.raises(ValueError):
        profile_hitting(p0, 1.0, 1.5)


def test_shift_comparability():
    zs = [np.array([z, 0, 0]) for z in np.linspace(-5, 5, 21)]
    same = shift_comparability_check(1.0, 3, 1.0, 0.0, 1.0, zs)
    assert same.c_star == 1.0 and same.spread == pytest.approx(1.0)
    far = shift_comparability_check(1.0, 3, 1e-3, 1.0, 1.0, [np.array([0, 1e4, 0])])
    assert far.ratios_lower[0] == pytest.approx(1.0, rel=1e-6)
    rep = shift_comparability_check(1.0, 3, 1.0, 1.0, 1.0, zs)
    assert 1.0 < rep.spread < math.inf
