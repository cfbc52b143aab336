"""Schwarzschild background: radial functions, Kruskal and Penrose charts,
the unphysical connection near null infinity, and the near-horizon psi map.

Geometric units. ``m = 0`` selects Minkowski conventions (``r_star = r``);
horizon-related transforms are then unavailable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError


@dataclass(frozen=True)
class SchwarzschildParams:
    m: float = 1.0

    def __post_init__(self):
        if not (self.m >= 0.0 and math.isfinite(self.m)):
            raise DomainError(f"mass must be finite and non-negative, got {self.m}")


class Chart(enum.Enum):
    SCHWARZSCHILD = "schwarzschild"
    ETA = "eta"
    NULL_S = "null_s"
    KRUSKAL = "kruskal"
    PENROSE = "penrose"


@dataclass(frozen=True)
class ChartPoint:
    """A Region-I point in one chart; angles suppressed.

    The coordinate pairs are (t, r), (eta, t), (s, vbar), (T, X), (xi, chi).
    """

    chart: Chart
    a: float
    b: float
    m: float = 1.0

    def __post_init__(self):
        m = self.m
        if self.chart is Chart.SCHWARZSCHILD:
            if not self.b > 2.0 * m:
                raise DomainError("need r > 2m")
        elif self.chart is Chart.ETA:
            if not 0.0 < self.a < 1.0:
                raise DomainError("need 0 < eta < 1")
        elif self.chart is Chart.NULL_S:
            if not (self.a > 0.0 and (m == 0.0 or self.a < 1.0 / (2.0 * m))):
                raise DomainError("need 0 < s < 1/2m")
        elif self.chart is Chart.KRUSKAL:
            if not self.b > abs(self.a):
                raise DomainError("need X > |T|")
        elif self.chart is Chart.PENROSE:
            xi, chi = self.a, self.b
            if not (abs(xi) < math.pi / 4 and abs(xi + chi) < math.pi / 2 and abs(xi - chi) < math.pi / 2):
                raise DomainError("outside the compactified strip")


@dataclass(frozen=True)
class RadialData:
    r_star: np.ndarray
    eta: np.ndarray
    s: np.ndarray
    h: np.ndarray


def _check_r(m, r):
    r = np.asarray(r, dtype=float)
    bound = 2.0 * m
    if np.any(~(r > bound)):
        raise DomainError(f"need r > {bound:g}")
    return r


def tortoise(m, r):
    """``r + 2m log|r/2m - 1|``; equal to r when m = 0."""
    r = _check_r(m, r)
    if m == 0.0:
        return r.copy()
    return r + 2.0 * m * np.log(r / (2.0 * m) - 1.0)


def radial_transforms(params, r):
    """``(r_star, eta, s, h)`` at radius r (Region I)."""
    m = params.m
    r = _check_r(m, r)
    h = 1.0 - 2.0 * m / r
    return RadialData(tortoise(m, r), np.sqrt(h), 1.0 / r, h)


def r_from_eta(m, eta):
    eta = np.asarray(eta, dtype=float)
    if np.any((eta < 0.0) | (eta >= 1.0)):
        raise DomainError("need 0 <= eta < 1")
    return 2.0 * m / (1.0 - eta**2)


def _need_mass(params):
    if params.m <= 0.0:
        raise DomainError("Kruskal transforms need m > 0")


def kruskal_map(params, t, r):
    """Region-I Kruskal coordinates ``(T, X)`` of ``(t, r)``."""
    _need_mass(params)
    m = params.m
    rs = tortoise(m, r)
    t = np.asarray(t, dtype=float)
    amp = np.exp(rs / (4.0 * m))
    return amp * np.sinh(t / (4.0 * m)), amp * np.cosh(t / (4.0 * m))


def _solve_exp_plus_linear(K):
    """Solve ``y + exp(y) = K`` (vectorized safeguarded Newton)."""
    K = np.asarray(K, dtype=float)
    big = K > 1.0
    lo = np.where(big, 0.0, K - math.e)
    hi = np.where(big, np.log(np.where(big, K, 1.0)), K)
    y = np.where(big, hi, K)
    for _ in range(100):
        g = y + np.exp(y) - K
        lo = np.where(g < 0.0, y, lo)
        hi = np.where(g > 0.0, y, hi)
        step = g / (1.0 + np.exp(y))
        y_new = y - step
        outside = (y_new <= lo) | (y_new >= hi)
        y_new = np.where(outside, 0.5 * (lo + hi), y_new)
        done = np.abs(y_new - y) <= 1e-15 * np.maximum(1.0, np.abs(y))
        y = y_new
        if np.all(done):
            break
    return y


def kruskal_inverse(params, T, X):
    """Invert the Region-I Kruskal map; returns ``(t, r)``.

    Works with ``r_star = 2m log(X^2 - T^2)`` in log form, so large radii do
    not overflow. With ``x = r/2m - 1 = exp(y)`` the defining relation
    becomes ``y + exp(y) = r_star/2m - 1``.
    """
    _need_mass(params)
    m = params.m
    T = np.asarray(T, dtype=float)
    X = np.asarray(X, dtype=float)
    if np.any(~(X > np.abs(T))):
        raise DomainError("need X > |T| (Region I)")
    log_k = np.log(X - T) + np.log(X + T)
    y = _solve_exp_plus_linear(log_k - 1.0)
    r = 2.0 * m * (1.0 + np.exp(y))
    t = 4.0 * m * np.arctanh(T / X)
    return t, r


def penrose_map(T, X):
    """Compactified coordinates with ``T + X = tan(xi + chi)``, ``T - X = tan(xi - chi)``."""
    T = np.asarray(T, dtype=float)
    X = np.asarray(X, dtype=float)
    p = np.arctan(T + X)
    q = np.arctan(T - X)
    return 0.5 * (p + q), 0.5 * (p - q)


@dataclass(frozen=True)
class ConnectionTable:
    """Nonzero covariant derivatives of the coordinate fields of the unphysical metric.

    ``d_s = d/ds`` and ``d_v = d/dvbar``; each entry is the pair of
    components along ``(d_s, d_v)``. Derivatives involving sphere directions
    vanish in normal coordinates and are handled by the sphere frame.
    """

    s: float
    m: float
    vv: tuple
    sv: tuple
    ss: tuple = (0.0, 0.0)


def unphysical_connection(params, s):
    s = float(s)
    if s < 0.0:
        raise DomainError("need s >= 0")
    m = params.m
    k3 = s**3 * (1.0 - 5.0 * m * s + 6.0 * m * m * s * s)
    k4 = s * (1.0 - 3.0 * m * s)
    return ConnectionTable(s=s, m=m, vv=(k3, k4), sv=(-k4, 0.0))


def unphysical_metric(params, s):
    """Components of ``s^2 g`` in ``(s, vbar)``: ``(g_ss, g_sv, g_vv)``; sphere part is sigma."""
    m = params.m
    return 0.0, 1.0, -(s**2) * (1.0 - 2.0 * m * s)


def schwarzschild_metric(params, r, theta):
    """Diagonal of the metric in ``(t, r, theta, phi)``."""
    m = params.m
    r = _check_r(m, r)
    h = 1.0 - 2.0 * m / r
    return np.array([-h, 1.0 / h, r * r, (r * np.sin(theta)) ** 2])


def christoffel(params, r, theta):
    """``Gamma[a, b, c] = Gamma^a_bc`` in ``(t, r, theta, phi)`` at one point."""
    m = params.m
    r = float(_check_r(m, r))
    h = 1.0 - 2.0 * m / r
    hp = 2.0 * m / (r * r)
    st, ct = math.sin(theta), math.cos(theta)
    G = np.zeros((4, 4, 4))
    G[0, 0, 1] = G[0, 1, 0] = hp / (2.0 * h)
    G[1, 0, 0] = h * hp / 2.0
    G[1, 1, 1] = -hp / (2.0 * h)
    G[1, 2, 2] = -r * h
    G[1, 3, 3] = -r * h * st * st
    G[2, 1, 2] = G[2, 2, 1] = 1.0 / r
    G[2, 3, 3] = -st * ct
    G[3, 1, 3] = G[3, 3, 1] = 1.0 / r
    G[3, 2, 3] = G[3, 3, 2] = ct / st
    return G


# --------------------------------------------------------------------------
# psi map


def psi(eta):
    """``eta (1 - eta^2)^(1/2) exp(-(1/2)/(1 - eta^2))``."""
    eta = np.asarray(eta, dtype=float)
    if np.any((eta < 0.0) | (eta >= 1.0)):
        raise DomainError("need 0 <= eta < 1")
    q = 1.0 - eta**2
    return eta * np.sqrt(q) * np.exp(-0.5 / q)


def psi_prime(eta):
    eta = np.asarray(eta, dtype=float)
    q = 1.0 - eta**2
    return np.exp(-0.5 / q) * (np.sqrt(q) - eta**2 / np.sqrt(q) - eta**2 / q**1.5)


PSI_PRIME_0 = math.exp(-0.5)


def _eta_max():
    return optimize.brentq(lambda e: float(psi_prime(e)), 0.1, 0.99, xtol=1e-15)


ETA_MAX = _eta_max()
PSI_MAX = float(psi(ETA_MAX))


def psi_inverse(w):
    """Solve ``psi(eta) = w`` on the increasing branch ``[0, ETA_MAX]``."""
    w = float(w)
    if not 0.0 <= w <= PSI_MAX:
        raise DomainError(f"psi_inverse needs 0 <= w <= {PSI_MAX:.6g}")
    if w == 0.0:
        return 0.0
    lo, hi = 0.0, ETA_MAX
    eta = min(w * math.exp(0.5), 0.5 * (lo + hi))
    for _ in range(200):
        g = float(psi(eta)) - w
        if g < 0.0:
            lo = eta
        else:
            hi = eta
        d = float(psi_prime(eta))
        nxt = eta - g / d if d > 0.0 else 0.5 * (lo + hi)
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - eta) <= 1e-16 * max(eta, 1e-300):
            eta = nxt
            break
        eta = nxt
    return eta
