"""Near-horizon analysis of graphs ``t = u(eta, y)`` with ``eta = sqrt(1 - 2m/r)``.

In this chart ``g^(eta eta) = m^2 r^-4``, ``g^(tt) = -eta^-2`` and the sphere
part is ``r^-2 sigma``; ``dr/deta = eta r^2 / m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sscmc
from .background import SchwarzschildParams, christoffel, r_from_eta
from .errors import DomainError, NotSpacelikeError, PreconditionError
from .numerics import decay_fit, richardson_limit
from .sphere import SphericalGrid, tangential_derivatives


@dataclass(frozen=True)
class EtaJet:
    """Derivatives of u at one eta, flattened over nodes."""

    eta: float
    u_eta: np.ndarray
    u_etaeta: np.ndarray
    grad: np.ndarray  # (n, 2) frame components
    grad_eta: np.ndarray  # (n, 2)
    hess: np.ndarray  # (n, 2, 2)

    @property
    def lap(self):
        return self.hess[:, 0, 0] + self.hess[:, 1, 1]


class HorizonGraph:
    """A graph ``t = u(eta, y)`` on ``eta in [0, eta_max]``.

    Build it with :meth:`from_sscmc` or :meth:`polynomial`.
    """

    def __init__(self, m, H_target, grid, eta_max, jet_fn, kind, u0=None):
        if not m > 0.0:
            raise DomainError("the near-horizon chart needs m > 0")
        self.m = float(m)
        self.H_target = float(H_target)
        self.grid = grid
        self.eta_max = float(eta_max)
        self._jet_fn = jet_fn
        self.kind = kind
        self._u0 = u0

    @classmethod
    def from_sscmc(cls, params, grid=None, eta_max=0.99):
        """Spherically symmetric graph; ``u_eta`` uses the generic closed form, singular-looking at 0."""
        grid = grid or SphericalGrid(4)
        n = grid.size

        def jet(eta):
            ue = float(sscmc.general_u_eta(params, eta))
            if params.is_horizon_branch:
                uee = float(sscmc.horizon_u_etaeta(params, eta))
            else:
                uee = float(sscmc.general_u_etaeta(params, eta))
            z2 = np.zeros((n, 2))
            return EtaJet(eta, np.full(n, ue), np.full(n, uee), z2, z2.copy(), np.zeros((n, 2, 2)))

        g = cls(params.m, params.H, grid, eta_max, jet, "sscmc")
        g.params = params
        return g

    @classmethod
    def polynomial(cls, coeffs, m, H_target=0.0, eta_max=0.5):
        """``u = sum_k coeffs[k] eta^k`` with :class:`SphericalField` coefficients."""
        coeffs = list(coeffs)
        grid = coeffs[0].grid
        n = grid.size
        vals = np.stack([c.values.ravel() for c in coeffs])
        derivs = [tangential_derivatives(c) for c in coeffs]
        grads = np.stack([d[0].components.reshape(n, 2) for d in derivs])
        hesss = np.stack([d[1].components.reshape(n, 2, 2) for d in derivs])
        K = len(coeffs)

        def w(eta, order):
            out = np.zeros(K)
            for k in range(order, K):
                out[k] = math.factorial(k) / math.factorial(k - order) * eta ** (k - order)
            return out

        def jet(eta):
            w0, w1, w2 = w(eta, 0), w(eta, 1), w(eta, 2)
            return EtaJet(
                eta,
                w1 @ vals,
                w2 @ vals,
                np.tensordot(w0, grads, axes=1),
                np.tensordot(w1, grads, axes=1),
                np.tensordot(w0, hesss, axes=1),
            )

        g = cls(m, H_target, grid, eta_max, jet, "polynomial")
        g.coeffs = coeffs
        return g

    def jet(self, eta):
        eta = float(eta)
        if not 0.0 < eta <= self.eta_max:
            raise DomainError(f"need 0 < eta <= {self.eta_max:g}")
        return self._jet_fn(eta)

    def coordinate_gradient(self, eta):
        """``(u_theta, u_phi)`` coordinate partials at every node."""
        j = self.jet(eta)
        st = np.broadcast_to(self.grid.sin_theta[:, None], self.grid.shape).ravel()
        return j.grad[:, 0], j.grad[:, 1] * st


def _Q(m, r, jet):
    return m * m * r**-4 * jet.u_eta**2 + r**-2 * np.sum(jet.grad**2, axis=-1)


def lorentz_norm_eta(g, eta):
    j = g.jet(eta)
    r = float(r_from_eta(g.m, eta))
    return eta**-2 - _Q(g.m, r, j)


def mean_curvature_eta(g, eta):
    """Mean curvature from the eta-chart identity, at every node."""
    m = g.m
    j = g.jet(eta)
    r = float(r_from_eta(m, eta))
    mr4 = m * m * r**-4
    gu2 = np.sum(j.grad**2, axis=-1)
    L = eta**-2 - mr4 * j.u_eta**2 - r**-2 * gu2
    if np.any(~(L > 0.0)):
        raise NotSpacelikeError(f"L = {L.min():.3g} <= 0 at eta = {eta:g}")
    L_eta = (
        -2.0 * eta**-3
        + 4.0 * m * eta * r**-3 * j.u_eta**2
        - 2.0 * mr4 * j.u_eta * j.u_etaeta
        + 2.0 * eta / (m * r) * gu2
        - 2.0 * r**-2 * np.sum(j.grad_eta * j.grad, axis=-1)
    )
    gradL = -2.0 * mr4 * j.u_eta[:, None] * j.grad_eta - 2.0 * r**-2 * np.einsum("nab,nb->na", j.hess, j.grad)
    rhs = mr4 * (L * j.u_etaeta + (L / eta - 0.5 * L_eta) * j.u_eta) + r**-2 * (
        L * j.lap - 0.5 * np.sum(gradL * j.grad, axis=-1)
    )
    return rhs / (3.0 * L**1.5)


def series_coefficients(g, eta):
    """``a_0..a_4`` at every node (rows) and ``Q = m^2 r^-4 u_eta^2 + r^-2 |grad u|^2``."""
    m = g.m
    j = g.jet(eta)
    r = float(r_from_eta(m, eta))
    mr4 = m * m * r**-4
    Q = _Q(m, r, j)
    gu2 = np.sum(j.grad**2, axis=-1)
    # eta-derivative at fixed r of |grad u|^2, and sphere gradients of u_eta^2 and |grad u|^2
    gu2_eta = 2.0 * np.sum(j.grad_eta * j.grad, axis=-1)
    grad_ue2 = 2.0 * j.u_eta[:, None] * j.grad_eta
    grad_gu2 = 2.0 * np.einsum("nab,nb->na", j.hess, j.grad)
    a0 = 2.0 * mr4 * j.u_eta
    a1 = mr4 * j.u_etaeta + r**-2 * j.lap
    a2 = -mr4 * Q * j.u_eta
    a3 = (
        -mr4 * Q * j.u_etaeta
        - r**-2 * j.lap * Q
        + 0.5 * mr4 * (2.0 * mr4 * j.u_eta * j.u_etaeta + r**-2 * gu2_eta) * j.u_eta
        + 0.5 * r**-2 * np.sum((mr4 * grad_ue2 + r**-2 * grad_gu2) * j.grad, axis=-1)
    )
    a4 = -mr4 * (2.0 * m * r**-3 * j.u_eta**2 + gu2 / (m * r)) * j.u_eta
    return np.stack([a0, a1, a2, a3, a4]), Q


def _b_series(x, tol=1e-14, max_terms=500):
    """``(1 - x)^(3/2) - 1`` summed as ``sum_k b_k``, truncated once terms drop below ``tol``."""
    total = np.zeros_like(x)
    binom = 1.0
    for k in range(1, max_terms + 1):
        binom *= (1.5 - (k - 1)) / k
        term = (-1) ** k * binom * x**k
        total = total + term
        if np.max(np.abs(term)) < tol:
            break
    return total


def eta_series_residual(g, eta, H=None):
    """``eta^3 (LHS - RHS)`` of the expanded mean-curvature identity, at every node.

    ``H`` defaults to :func:`mean_curvature_eta`; the residual then vanishes
    for any spacelike graph.
    """
    if H is None:
        H = mean_curvature_eta(g, eta)
    a, Q = series_coefficients(g, eta)
    x = eta * eta * Q
    if np.any(x >= 1.0):
        raise NotSpacelikeError(f"L <= 0 at eta = {eta:g}")
    lhs = 3.0 * H * (1.0 + _b_series(x))
    rhs = sum(a[k] * eta**k for k in range(5))
    return lhs - rhs


@dataclass(frozen=True)
class SlopeEstimate:
    u_eta0: float
    error: float
    expected: float

    @property
    def deviation(self):
        return abs(self.u_eta0 - self.expected)


def boundary_slope(g, eta0=0.05, levels=6):
    """Richardson extrapolation of ``u_eta(eta_k)``, ``eta_k = eta0 2^-k``, to eta = 0.

    Returns the sup over nodes of the extrapolated value when the graph is
    symmetric, and the node-wise maximum deviation otherwise.
    """
    etas = eta0 * 2.0 ** -np.arange(levels)
    samples = np.stack([g.jet(e).u_eta for e in etas])  # (levels, n)
    est = np.empty(samples.shape[1])
    err = np.empty(samples.shape[1])
    for i in range(samples.shape[1]):
        est[i], err[i] = richardson_limit(samples[:, i], 2.0, 1, 1)
    table_diverging = np.any(~np.isfinite(est))
    if table_diverging:
        raise DomainError("extrapolation diverged (non-smooth u_eta near the horizon)")
    expected = 24.0 * g.m**2 * g.H_target
    j = int(np.argmax(np.abs(est - expected)))
    return SlopeEstimate(float(est[j]), float(err.max()), expected)


def boundary_slope_field(g, eta0=0.05, levels=6):
    """Node-wise extrapolated ``u_eta(0)`` as a flat array."""
    etas = eta0 * 2.0 ** -np.arange(levels)
    samples = np.stack([g.jet(e).u_eta for e in etas])
    return np.array([richardson_limit(samples[:, i], 2.0, 1, 1)[0] for i in range(samples.shape[1])])


@dataclass(frozen=True)
class GeodesicTable:
    r: np.ndarray
    h: np.ndarray
    pairing22: np.ndarray
    pairing23: np.ndarray
    pairing33: np.ndarray
    pairing_t: np.ndarray
    covariant22: np.ndarray
    covariant23: np.ndarray
    covariant33: np.ndarray

    def fits(self, covariant=False):
        names = ("22", "23", "33")
        out = {}
        for n in names:
            vals = getattr(self, ("covariant" if covariant else "pairing") + n)
            out[n] = decay_fit(self.h, vals)
        return out

    def rows(self):
        return [
            (self.r[i], self.pairing22[i], self.pairing23[i], self.pairing33[i]) for i in range(self.r.size)
        ]


def displayed_pairings(m, r, u_theta, u_phi, sin_theta):
    """The three closed-form ``d_rho`` pairings at radius r."""
    h32 = (1.0 - 2.0 * m / r) ** 1.5
    p22 = u_theta * u_theta * m / r**2 * h32 - r * h32
    p23 = u_theta * u_phi * m / r**2 * h32
    p33 = u_phi * u_phi * m / r**2 * h32 - r * sin_theta * sin_theta * h32
    return p22, p23, p33


def _sup_signed(v):
    """Entry of largest magnitude (keeps the sign)."""
    return float(v[np.argmax(np.abs(v))])


def boundary_totally_geodesic(g, r_list, eta0=0.05):
    """The three ``<nabla_(e_i) e_j, d_rho>`` pairings and the ``d_t`` pairings along ``r_list``.

    ``pairing*`` use the displayed closed forms ``u_A u_B m r^-2 h^(3/2) - r h^(3/2) sigma_AB``;
    ``covariant*`` lower the index with ``g_rr = 1/h``, i.e. are the pairings
    computed directly from the Christoffel symbols. Values are sup-norm over
    nodes with sign kept.
    """
    m = g.m
    slope0 = boundary_slope_field(g, eta0=min(eta0, g.eta_max))
    if np.any(np.abs(slope0) < 1e-8):
        raise PreconditionError("u_eta(0) = 0 somewhere: the boundary is not a graph transversal to the horizon")
    r_list = np.asarray(r_list, dtype=float)
    if np.any(r_list <= 2.0 * m) or np.any(r_list > 3.0 * m * (1 + 1e-12)):
        raise DomainError("r_list must lie in (2m, 3m]")
    st = np.broadcast_to(g.grid.sin_theta[:, None], g.grid.shape).ravel()
    bg = SchwarzschildParams(m)
    out = {k: [] for k in ("p22", "p23", "p33", "pt", "c22", "c23", "c33")}
    hs = 1.0 - 2.0 * m / r_list
    for r, h in zip(r_list, hs):
        eta = math.sqrt(h)
        ut, up = g.coordinate_gradient(eta)
        p22, p23, p33 = displayed_pairings(m, r, ut, up, st)
        # Christoffel route: h^(1/2) g_rr (u_A u_B Gamma^r_tt + Gamma^r_AB) in coordinate partials;
        # Gamma^r_phiphi = sin^2(theta) Gamma^r_thetatheta
        Gam = christoffel(bg, r, math.pi / 2.0)
        w = math.sqrt(h) / h
        c22 = w * (ut * ut * Gam[1, 0, 0] + Gam[1, 2, 2])
        c23 = w * (ut * up * Gam[1, 0, 0] + Gam[1, 2, 3])
        c33 = w * (up * up * Gam[1, 0, 0] + Gam[1, 2, 2] * st * st)
        # d_t pairings of the t-slice: g_tt Gamma^t_ij over spatial i, j at every colatitude
        pt = max(h * np.max(np.abs(christoffel(bg, r, float(t))[0, 1:, 1:])) for t in g.grid.theta)
        pt = np.full(ut.shape, pt)
        for key, v in zip(out, (p22, p23, p33, pt, c22, c23, c33)):
            out[key].append(_sup_signed(v))
    a = {k: np.array(v) for k, v in out.items()}
    return GeodesicTable(
        r=r_list, h=hs, pairing22=a["p22"], pairing23=a["p23"], pairing33=a["p33"], pairing_t=a["pt"],
        covariant22=a["c22"], covariant23=a["c23"], covariant33=a["c33"],
    )


def geodesic_window(m, h0=0.1, kmax=8):
    """Radii with ``h = h0 2^-k``, ``k = 0..kmax``."""
    h = h0 * 2.0 ** -np.arange(kmax + 1)
    return 2.0 * m / (1.0 - h)
