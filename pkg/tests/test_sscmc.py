import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmclab import sscmc
from cmclab.errors import ConfigurationError, DomainError

CASES = [(1.0, 1.0, 0.0), (1.0, 1.0, 2.0), (0.0, 1.0, 0.0), (1.0, 2.0, 1.0)]


def test_params_validation():
    with pytest.raises(DomainError):
        sscmc.SSCMCParams(-1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        sscmc.SSCMCParams(1.0, 0.0, 0.0)
    p = sscmc.SSCMCParams.horizon_branch(0.5, 2.0)
    assert p.c == -8.0 * 0.125 * 2.0 and p.is_horizon_branch
    assert not sscmc.SSCMCParams(1.0, 1.0, 0.0).is_horizon_branch


@pytest.mark.parametrize("m,H,c", CASES)
def test_expansion_coefficients(m, H, c):
    co = sscmc.expansion_coeffs(sscmc.SSCMCParams(m, H, c))
    expected = (-0.5 / H**2, 0.0, 0.75 / H**4, (6.0 * c * H - 4.5 * m) / H**4)
    assert co.closed == expected
    assert np.allclose(co.series, expected, atol=1e-13)
    assert co.max_disagreement < 1e-5


@given(st.floats(0.0, 2.0), st.floats(0.3, 3.0), st.floats(-2.0, 5.0), st.floats(1.05, 40.0))
def test_ps_two_routes(m, H, c, x):
    """Closed form in s against the slope of the graph t = f(r)."""
    p = sscmc.SSCMCParams(m, H, c)
    r = max(2.0 * m, 1.0) * x
    if H + c / r**3 <= 0.0:
        return
    a = float(sscmc.P_s(p, 1.0 / r))
    b = float(sscmc.P_s_from_slope(p, r))
    assert abs(a - b) < 1e-9 * max(1.0, abs(a))


@given(st.floats(0.0, 2.0), st.floats(0.3, 3.0), st.floats(-2.0, 5.0), st.floats(0.01, 0.2))
def test_pss_is_derivative(m, H, c, s):
    p = sscmc.SSCMCParams(m, H, c)
    h = 1e-5 * s
    if min(H + c * (s - h) ** 3, H + c * (s + h) ** 3) <= 0.0 or s * 2.0 * m >= 1.0:
        return
    fd = (float(sscmc.P_s(p, s + h)) - float(sscmc.P_s(p, s - h))) / (2 * h)
    assert abs(fd - float(sscmc.P_ss(p, s))) < 1e-6 * max(1.0, abs(fd))


def test_series_matches_closed_form_near_zero():
    p = sscmc.SSCMCParams(1.0, 1.3, 0.7)
    coef = sscmc.P_s_series(p, 7)
    s = 1e-3
    approx = sum(coef[k] * s**k for k in range(7))
    assert abs(approx - float(sscmc.P_s(p, s))) < 1e-15


def test_closed_form_domain():
    p = sscmc.SSCMCParams(1.0, 1.0, -8.0)
    with pytest.raises(DomainError):
        sscmc.P_s(p, 0.6)
    with pytest.raises(DomainError):
        sscmc.ell(p, 1.0)


def test_spacelike_and_height_anchors():
    p = sscmc.SSCMCParams(1.0, 1.0, 2.0)
    a = sscmc.height(p, 3.0, 30.0, anchor=("r", None, 0.0), n=257)
    b = sscmc.height(p, 3.0, 30.0, anchor=("P0", 0.0), n=257)
    assert a.spacelike() and b.spacelike()
    # the two anchors differ by a constant shift
    d = a.f - b.f
    assert np.ptp(d) < 1e-8
    # f' against central differences of the sampled heights: second-order convergence
    errs = []
    for n in (129, 257):
        sol = sscmc.height(p, 3.0, 30.0, n=n)
        fd = (sol.f[2:] - sol.f[:-2]) / (sol.r[2:] - sol.r[:-2])
        errs.append(abs(fd - sol.fprime[1:-1])[n // 2])
    assert errs[1] < 1e-5 and 3.9 < errs[0] / errs[1] < 4.1
    with pytest.raises(ConfigurationError):
        sscmc.height(p, 3.0, 30.0, anchor=("x",))
    with pytest.raises(DomainError):
        sscmc.height(p, 2.0, 30.0)


def test_horizon_branch_reaches_horizon():
    p = sscmc.SSCMCParams.horizon_branch(1.0, 1.0)
    sol = sscmc.height(p, 2.0, 10.0, anchor=("r", 2.0, 0.0), n=17)
    assert sol.f[0] == 0.0 and np.all(np.isfinite(sol.f))
    assert np.all(np.diff(sol.f) > 0.0)
    assert sol.spacelike()


@pytest.mark.parametrize("m,H", [(1.0, 1.0), (0.5, 1.0), (1.0, 0.25)])
def test_horizon_slope_closed_form(m, H):
    p = sscmc.SSCMCParams.horizon_branch(m, H)
    assert math.isclose(float(sscmc.horizon_u_eta(p, 0.0)), 24.0 * m * m * H, rel_tol=1e-14)
    eta = np.array([0.05, 0.3, 0.7])
    assert np.allclose(sscmc.general_u_eta(p, eta), sscmc.horizon_u_eta(p, eta), rtol=1e-10)
    h = 1e-6
    fd = (sscmc.horizon_u_eta(p, eta + h) - sscmc.horizon_u_eta(p, eta - h)) / (2 * h)
    assert np.allclose(fd, sscmc.horizon_u_etaeta(p, eta), rtol=1e-7)
    with pytest.raises(ConfigurationError):
        sscmc.horizon_u_eta(sscmc.SSCMCParams(1.0, 1.0, 0.0), 0.1)


def test_scalar_curvature_profile():
    p = sscmc.SSCMCParams(1.0, 1.0, 2.0)
    assert math.isclose(float(sscmc.scalar_curvature_profile(p, 10.0)), -6.0 + 24.0e-6)
    with pytest.raises(ConfigurationError):
        sscmc.scalar_curvature_profile(sscmc.SSCMCParams(1.0, 2.0, 0.0), 10.0)


@pytest.mark.parametrize("m,c", [(1.0, 0.0), (1.0, 1.0), (1.0, 3.0), (0.5, 2.0)])
def test_ah_profile_cubic(m, c):
    prof = sscmc.ah_profile(sscmc.SSCMCParams(m, 1.0, c))
    expected = -2.0 / 3.0 * (c - m)
    assert prof.expected == pytest.approx(expected)
    assert abs(prof.cubic - expected) < 1e-3 * max(1.0, abs(expected))
    assert prof.fit_rms < 1e-10


@pytest.mark.parametrize("m,H,c", [(1.0, 1.0, 2.0), (0.5, 2.0, 0.3), (1.0, 1.0, -8.0)])
def test_general_second_eta_derivative(m, H, c):
    p = sscmc.SSCMCParams(m, H, c)
    eta = np.array([0.1, 0.5, 0.8])
    h = 1e-6
    fd = (sscmc.general_u_eta(p, eta + h) - sscmc.general_u_eta(p, eta - h)) / (2 * h)
    assert np.allclose(fd, sscmc.general_u_etaeta(p, eta), rtol=1e-8)
    if p.is_horizon_branch:
        assert np.allclose(sscmc.general_u_etaeta(p, eta), sscmc.horizon_u_etaeta(p, eta), rtol=1e-12)
