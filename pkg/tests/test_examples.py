"""Hand-checkable values across the modules, evaluated at single points."""

import math

import pytest

from cmclab import background as bg
from cmclab import expansion, sscmc
from cmclab.errors import DomainError
from cmclab.sphere import SphericalField, SphericalGrid, harmonic

M1 = bg.SchwarzschildParams(1.0)
M0 = bg.SchwarzschildParams(0.0)


def test_radial_values():
    d = bg.radial_transforms(M0, 5.0)
    assert (float(d.h), float(d.eta), float(d.s)) == (1.0, 1.0, 0.2)
    assert float(bg.tortoise(0.0, 5.0)) == 5.0
    d = bg.radial_transforms(M1, 2.0001)
    assert math.isclose(float(d.h), 1.0 - 2.0 / 2.0001, rel_tol=1e-12)
    assert math.isclose(float(d.eta), 0.00707089, rel_tol=1e-5)


def test_kruskal_and_penrose_values():
    T, X = bg.kruskal_map(M1, 0.0, 4.0)
    assert float(T) == 0.0 and math.isclose(float(X), math.e, rel_tol=1e-15)
    with pytest.raises(DomainError):
        bg.kruskal_inverse(M1, 1.0, 1.0)
    t, r = bg.kruskal_inverse(M1, *bg.kruskal_map(M1, 3.0, 5.0))
    assert math.isclose(float(t), 3.0, rel_tol=1e-10) and math.isclose(float(r), 5.0, rel_tol=1e-10)
    assert tuple(map(float, bg.penrose_map(0.0, 0.0))) == (0.0, 0.0)
    xi, chi = bg.penrose_map(0.0, 1.0)
    assert float(xi) == 0.0 and math.isclose(float(chi), math.pi / 4, rel_tol=1e-15)
    xi, chi = bg.penrose_map(1e12 - 0.5, 1e12)
    assert math.isclose(float(xi + chi), math.pi / 2, rel_tol=1e-11)


def test_connection_values():
    zero = bg.unphysical_connection(M1, 0.0)
    assert zero.vv == (0.0, 0.0) and zero.sv == (-0.0, 0.0)
    c = bg.unphysical_connection(M0, 1.0)
    assert c.vv == (1.0, 1.0)


def test_slope_values():
    assert math.isclose(float(sscmc.slope(sscmc.SSCMCParams(0.0, 1.0, 0.0), 2.0)), 2.0 / math.sqrt(5.0), rel_tol=1e-14)
    got = float(sscmc.slope(sscmc.SSCMCParams(1.0, 1.0, 0.0), 4.0))
    assert math.isclose(got, 8.0 * math.sqrt(2.0) / math.sqrt(33.0), rel_tol=1e-14)
    assert math.isclose(got, 1.96946, abs_tol=1e-5)


def test_slope_blows_up_like_inverse_square_root_at_horizon():
    p = sscmc.SSCMCParams.horizon_branch(1.0, 1.0)
    ratios = [float(sscmc.slope(p, 2.0 + d)) * math.sqrt(d) for d in (1e-4, 1e-6, 1e-8)]
    assert abs(ratios[-1] - ratios[-2]) < 1e-3 * ratios[-1]


def test_scalar_curvature_value():
    assert float(sscmc.scalar_curvature_profile(sscmc.SSCMCParams(0.5, 1.0, 1.0), 2.0)) == -5.90625
    assert float(sscmc.scalar_curvature_profile(sscmc.SSCMCParams(1.0, 1.0, 0.0), 7.0)) == -6.0


def test_membership_below_tolerance():
    g = SphericalGrid(8)
    f = SphericalField.linear(g, [0.2, 0.5, -0.1]) + 1e-9 * harmonic(g, 3, 2)
    ok, defect = expansion.eigenspace_membership(f, tol=1e-6)
    assert ok and defect < 1e-8
