"""Spherically symmetric CMC graphs ``t = f(r)`` in Schwarzschild Region I.

The slope is known in closed form; heights come from adaptive quadrature.
Near null infinity the profile is described by ``P(s) = r_star - f`` with
``s = 1/r``, whose s-derivative has a closed form that is analytic at s = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .background import SchwarzschildParams, r_from_eta, tortoise
from .errors import AccuracyError, ConfigurationError, DomainError
from .numerics import richardson_derivative

QUAD_TOL = 1e-10


@dataclass(frozen=True)
class SSCMCParams:
    """Mass m, mean curvature H > 0 and the slope constant c."""

    m: float = 1.0
    H: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if not self.m >= 0.0:
            raise DomainError("mass must be non-negative")
        if not self.H > 0.0:
            raise DomainError("SSCMC needs H > 0")

    @classmethod
    def horizon_branch(cls, m=1.0, H=1.0):
        """The family through T = X = 0: ``c = -8 m^3 H``."""
        return cls(m=m, H=H, c=-8.0 * m**3 * H)

    @property
    def is_horizon_branch(self):
        return self.m > 0.0 and math.isclose(self.c, -8.0 * self.m**3 * self.H, rel_tol=1e-14, abs_tol=1e-300)

    @property
    def background(self):
        return SchwarzschildParams(self.m)


def _r(params, r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 2.0 * params.m)):
        raise DomainError(f"need r > 2m = {2.0 * params.m:g}")
    return r


def ell(params, r):
    """``(H r + c / r^2) / sqrt(h)``."""
    r = _r(params, r)
    h = 1.0 - 2.0 * params.m / r
    return (params.H * r + params.c / r**2) / np.sqrt(h)


def slope(params, r):
    """``f'(r) = ell / (h sqrt(1 + ell^2))``."""
    r = _r(params, r)
    h = 1.0 - 2.0 * params.m / r
    l = ell(params, r)
    return l / (h * np.sqrt(1.0 + l * l))


def spacelike_margin(params, r, fprime=None):
    """``1/h - h f'^2``; positive on a spacelike graph."""
    r = _r(params, r)
    h = 1.0 - 2.0 * params.m / r
    fp = slope(params, r) if fprime is None else fprime
    return 1.0 / h - h * fp * fp


# --------------------------------------------------------------------------
# closed forms in s


def _D(params, s):
    return params.H + params.c * s**3


def P_s(params, s):
    """Exact ``dP/ds`` with ``P = r_star - f``; requires ``H + c s^3 > 0``.

    ``P_s = -D^-2 / (w (1 + w))``, ``D = H + c s^3``, ``w = sqrt(1 + s^2(1-2ms)/D^2)``.
    """
    s = np.asarray(s, dtype=float)
    D = _D(params, s)
    if np.any(D <= 0.0):
        raise DomainError("P_s closed form needs H + c s^3 > 0")
    q = s * s * (1.0 - 2.0 * params.m * s) / D**2
    w = np.sqrt(1.0 + q)
    return -1.0 / (D * D * w * (1.0 + w))


def P_ss(params, s):
    """Exact s-derivative of :func:`P_s`."""
    s = np.asarray(s, dtype=float)
    m, c = params.m, params.c
    D = _D(params, s)
    if np.any(D <= 0.0):
        raise DomainError("P_s closed form needs H + c s^3 > 0")
    Ds = 3.0 * c * s * s
    k = s * s * (1.0 - 2.0 * m * s)
    q = k / D**2
    qs = (2.0 * s - 6.0 * m * s * s) / D**2 - 2.0 * k * Ds / D**3
    w = np.sqrt(1.0 + q)
    phi = 1.0 / (w * (1.0 + w))
    dphi_dw = -(1.0 + 2.0 * w) / (w * (1.0 + w)) ** 2
    dphi_dq = dphi_dw / (2.0 * w)
    return 2.0 * Ds * phi / D**3 - dphi_dq * qs / D**2


def P_s_from_slope(params, r):
    """``s^-2 (f'(r) - 1/h)``: the same quantity through the slope."""
    r = _r(params, r)
    h = 1.0 - 2.0 * params.m / r
    return r * r * (slope(params, r) - 1.0 / h)


# --------------------------------------------------------------------------
# truncated power series


def _ps_mul(a, b):
    n = len(a)
    return np.convolve(a, b)[:n]


def _ps_inv(a):
    n = len(a)
    out = np.zeros(n)
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        out[k] = -np.dot(a[1 : k + 1], out[k - 1 :: -1][:k]) / a[0]
    return out


def _ps_sqrt(a):
    n = len(a)
    out = np.zeros(n)
    out[0] = math.sqrt(a[0])
    for k in range(1, n):
        acc = a[k] - np.dot(out[1:k], out[k - 1 : 0 : -1])
        out[k] = acc / (2.0 * out[0])
    return out


def P_s_series(params, order=6):
    """Taylor coefficients of ``P_s(s)`` at s = 0, up to ``s^(order-1)``."""
    n = order
    D = np.zeros(n)
    D[0] = params.H
    if n > 3:
        D[3] = params.c
    k = np.zeros(n)
    k[2] = 1.0
    if n > 3:
        k[3] = -2.0 * params.m
    Dinv = _ps_inv(D)
    Dinv2 = _ps_mul(Dinv, Dinv)
    q = _ps_mul(k, Dinv2)
    one_q = q.copy()
    one_q[0] += 1.0
    w = _ps_sqrt(one_q)
    one_w = w.copy()
    one_w[0] += 1.0
    return -_ps_mul(Dinv2, _ps_inv(_ps_mul(w, one_w)))


@dataclass(frozen=True)
class ExpansionCoeffs:
    """``(P_s, P_ss, P_sss, P_ssss)`` at s = 0 by three routes."""

    closed: tuple
    series: tuple
    numeric: tuple
    numeric_error: tuple

    @property
    def max_disagreement(self):
        return max(abs(a - b) for a, b in zip(self.closed, self.numeric))


def expansion_coeffs(params, h0=0.05, levels=6):
    m, H, c = params.m, params.H, params.c
    closed = (-0.5 / H**2, 0.0, 0.75 / H**4, (6.0 * c * H - 4.5 * m) / H**4)
    coef = P_s_series(params, 4)
    series = tuple(float(coef[k] * math.factorial(k)) for k in range(4))
    func = lambda s: float(P_s(params, s))
    num = [func(0.0)]
    err = [0.0]
    for order in (1, 2, 3):
        v, e = richardson_derivative(func, 0.0, order, h0, levels)
        num.append(v)
        err.append(e)
    return ExpansionCoeffs(closed, series, tuple(num), tuple(err))


def scalar_curvature_profile(params, r):
    """``S = -6 + 6 c^2 r^-6`` (derived for H = 1 only)."""
    if params.H != 1.0:
        raise ConfigurationError("closed-form scalar curvature is only available for H = 1")
    r = _r(params, r)
    return -6.0 + 6.0 * params.c**2 * r**-6


# --------------------------------------------------------------------------
# heights


@dataclass(frozen=True)
class SSCMCSolution:
    params: SSCMCParams
    r: np.ndarray
    f: np.ndarray
    fprime: np.ndarray
    s: np.ndarray
    P: np.ndarray
    Ps: np.ndarray
    anchor: tuple
    quad_error: float = 0.0
    meta: dict = field(default_factory=dict)

    def spacelike(self):
        """Spacelike test on the samples with r > 2m (the horizon anchor is excluded)."""
        inside = self.r > 2.0 * self.params.m
        margin = spacelike_margin(self.params, self.r[inside], self.fprime[inside])
        return bool(np.all(margin > 0.0))


def _horizon_integrand(params, w):
    # 2w f'(2m + w^2) with the (r - 2m)^-1/2 singularity divided out
    m, H = params.m, params.H
    r = 2.0 * m + w * w
    eta = w / math.sqrt(r)
    lam = H * (r * r + 2.0 * m * r + 4.0 * m * m) / r
    return 2.0 * lam * math.sqrt(r) / math.sqrt(1.0 + (eta * lam) ** 2)


def _cumulative(func, nodes):
    vals = [0.0]
    err = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        v, e = integrate.quad(func, a, b, epsabs=QUAD_TOL, epsrel=1e-13, limit=200)
        vals.append(vals[-1] + v)
        err += e
    return np.array(vals), err


def height(params, r_lo, r_hi, anchor=("r", None, 0.0), n=65):
    """Sample f on ``[r_lo, r_hi]``.

    ``anchor`` is ``("r", r0, f0)`` fixing ``f(r0) = f0`` (``r0=None`` means
    ``r_lo``; on the horizon branch ``r0 = 2m`` is allowed) or ``("P0", p0)``
    fixing ``P(0) = p0`` at null infinity.
    """
    m = params.m
    r_lo, r_hi = float(r_lo), float(r_hi)
    horizon_ok = params.is_horizon_branch
    if not r_hi > r_lo:
        raise DomainError("need r_lo < r_hi")
    if r_lo < 2.0 * m or (r_lo == 2.0 * m and not horizon_ok) or (m == 0.0 and r_lo < 0.0):
        raise DomainError("r_lo must exceed 2m (or equal 2m on the horizon branch)")
    r = np.linspace(r_lo, r_hi, n)
    kind = anchor[0]
    if kind == "r":
        r0 = r_lo if anchor[1] is None else float(anchor[1])
        f0 = float(anchor[2])
        if r0 < r_lo or r0 > r_hi:
            raise DomainError("anchor radius outside sample range")
        nodes = np.unique(np.concatenate([r, [r0]]))
        if horizon_ok and m > 0.0:
            w_nodes = np.sqrt(nodes - 2.0 * m)
            vals, err = _cumulative(lambda w: _horizon_integrand(params, w), w_nodes)
        else:
            vals, err = _cumulative(lambda x: float(slope(params, x)), nodes)
        vals = vals - vals[np.searchsorted(nodes, r0)]
        f = f0 + vals[np.searchsorted(nodes, r)]
    elif kind == "P0":
        p0 = float(anchor[1])
        s_nodes = np.sort(np.concatenate([[0.0], 1.0 / r]))
        vals, err = _cumulative(lambda x: float(P_s(params, x)), s_nodes)
        P_at = p0 + vals[1:][::-1]
        f = np.asarray(tortoise(m, r)) - P_at
    else:
        raise ConfigurationError(f"unknown anchor kind {kind!r}")
    if err > QUAD_TOL * max(1, len(r)):
        raise AccuracyError(f"height quadrature error {err:.3g} above tolerance", achieved=err)
    inside = r > 2.0 * m
    fp = np.full_like(r, np.inf)
    fp[inside] = slope(params, r[inside])
    s = 1.0 / r
    Pv = np.full_like(r, np.nan)
    Pv[inside] = tortoise(m, r[inside]) - f[inside]
    Ps = np.full_like(r, np.nan)
    ok = params.H + params.c * s**3 > 0.0
    Ps[ok] = P_s(params, s[ok])
    return SSCMCSolution(params, r, f, fp, s, Pv, Ps, tuple(anchor), err)


# --------------------------------------------------------------------------
# asymptotically hyperbolic profile


@dataclass(frozen=True)
class AHProfile:
    s: np.ndarray
    tau: np.ndarray
    w2: np.ndarray
    coefficients: np.ndarray  # fitted a_3..a_8 of w^2 - 1
    cubic: float
    expected: float
    fit_rms: float


def _W(params, lam):
    ps = P_s(params, lam)
    return np.sqrt(-(2.0 * ps + lam * lam * (1.0 - 2.0 * params.m * lam) * ps * ps))


def ah_profile(params, s_max=0.08, n=40, top=8):
    """Build ``tau(s)`` and fit ``w^2(tau) = 1 + a_3 tau^3 + ... + a_top tau^top``."""
    if params.H != 1.0:
        raise ConfigurationError("AH profile is defined for H = 1")
    s = s_max * np.linspace(1.0 / n, 1.0, n)
    integrand = lambda lam: 0.0 if lam == 0.0 else float((_W(params, lam) - 1.0) / lam)
    I, _ = _cumulative(integrand, np.concatenate([[0.0], s]))
    I = I[1:]
    tau = 2.0 * np.arctanh(0.5 * s * np.exp(I))
    w2 = (np.sinh(tau) / s) ** 2
    powers = np.arange(3, top + 1)
    A = tau[:, None] ** powers[None, :]
    coef, *_ = np.linalg.lstsq(A, w2 - 1.0, rcond=None)
    resid = A @ coef - (w2 - 1.0)
    rms = float(np.sqrt(np.mean(resid**2)))
    if rms > 1e-12:
        raise AccuracyError(f"w^2 fit residual {rms:.3g} too large", achieved=rms)
    expected = -2.0 / 3.0 * (params.c - params.m)
    return AHProfile(s, tau, w2, coef, float(coef[0]), expected, rms)


# --------------------------------------------------------------------------
# horizon branch in the eta chart


def horizon_u_eta(params, eta):
    """``du/deta`` of the horizon-branch graph ``t = u(eta)``; equals 24 m^2 H at eta = 0."""
    if not params.is_horizon_branch:
        raise ConfigurationError("u_eta closed form is for the horizon branch")
    m, H = params.m, params.H
    eta = np.asarray(eta, dtype=float)
    r = r_from_eta(m, eta)
    lam = H * (r * r + 2.0 * m * r + 4.0 * m * m) / r
    return H * r * (r * r + 2.0 * m * r + 4.0 * m * m) / (m * np.sqrt(1.0 + (eta * lam) ** 2))


def horizon_u_etaeta(params, eta):
    m, H = params.m, params.H
    eta = np.asarray(eta, dtype=float)
    r = r_from_eta(m, eta)
    r_eta = eta * r * r / m
    g = H * (r**3 + 2.0 * m * r * r + 4.0 * m * m * r) / m
    g_eta = H * (3.0 * r * r + 4.0 * m * r + 4.0 * m * m) * r_eta / m
    lam = H * (r + 2.0 * m + 4.0 * m * m / r)
    lam_eta = H * (1.0 - 4.0 * m * m / (r * r)) * r_eta
    q = (eta * lam) ** 2
    q_eta = 2.0 * eta * lam * lam + 2.0 * eta * eta * lam * lam_eta
    return g_eta / np.sqrt(1.0 + q) - 0.5 * g * q_eta / (1.0 + q) ** 1.5


def general_u_eta(params, eta):
    """``du/deta = ell r^2 / (m eta sqrt(1 + ell^2))`` for any branch (eta > 0)."""
    m = params.m
    eta = np.asarray(eta, dtype=float)
    r = r_from_eta(m, eta)
    l = ell(params, r)
    return l * r * r / (m * eta * np.sqrt(1.0 + l * l))


def general_u_etaeta(params, eta):
    """eta-derivative of :func:`general_u_eta` (eta > 0)."""
    m, H, c = params.m, params.H, params.c
    eta = np.asarray(eta, dtype=float)
    r = r_from_eta(m, eta)
    h = 1.0 - 2.0 * m / r
    l = ell(params, r)
    l_r = (H - 2.0 * c / r**3) / np.sqrt(h) - (H * r + c / r**2) * (m / r**2) / h**1.5
    q = np.sqrt(1.0 + l * l)
    # d/dr of l r^2 / sqrt(1 + l^2)
    g_r = (l_r * r * r + 2.0 * l * r) / q - l * l * l_r * r * r / q**3
    r_eta = eta * r * r / m
    return -general_u_eta(params, eta) / eta + g_r * r_eta / (m * eta)
