"""Extrinsic geometry of graphs ``vbar = -P(y, s)`` near future null infinity.

Everything is expressed in the frame ``(e_theta, e_phi, d_s)`` of the surface
parametrization: sphere directions are orthonormal for the round metric, the
third direction is the coordinate vector along s. Second fundamental forms are
computed exactly from the connection of the unphysical metric; the truncated
forms are kept only as a cross-check.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import ConfigurationError, ConstructionError, NotSpacelikeError, PreconditionError
from .numerics import DecayFit, decay_fit  # noqa: F401  (re-exported)
from .sphere import (
    SphericalField,
    cartesian_to_angles,
    evaluate_jet,
    frame_vectors,
    tangential_derivatives,
)


class PKind(enum.Enum):
    POLY_IN_S = "poly_in_s"
    NUMERIC = "numeric"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class PJet:
    """``P`` and the derivatives the geometry needs, at n points (flat arrays)."""

    s: np.ndarray
    P: np.ndarray
    Ps: np.ndarray
    Pss: np.ndarray
    grad: np.ndarray  # (n, 2)
    grad_s: np.ndarray  # (n, 2)
    hess: np.ndarray  # (n, 2, 2)

    @property
    def lap(self):
        return self.hess[:, 0, 0] + self.hess[:, 1, 1]

    @property
    def size(self):
        return self.P.shape[0]


def worker_count():
    """Worker cap from ``CMC_LAB_THREADS`` (default 1)."""
    raw = os.environ.get("CMC_LAB_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigurationError(f"CMC_LAB_THREADS must be a positive integer, got {raw!r}")
    return n


class GraphFunctionP:
    """Base class: a surface near null infinity described by ``P(y, s)``."""

    kind: PKind

    def __init__(self, grid, m, s_max):
        self.grid = grid
        self.m = float(m)
        self.s_max = float(s_max)

    def jet(self, s):
        """Jet at every grid node (flattened in C order) at a single s."""
        th, ph = self.grid.mesh()
        return self.jet_at(s, th.ravel(), ph.ravel())

    def jet_at(self, s, theta, phi):
        raise NotImplementedError

    def boundary_value(self):
        """``P(., 0)`` as a field on the grid."""
        return SphericalField(self.grid, values=self.jet(0.0).P.reshape(self.grid.shape))

    def check_domain(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s <= 0.0) or np.any(s > self.s_max * (1.0 + 1e-12)):
            raise ConstructionError(f"s outside (0, {self.s_max:g}]")


class PolynomialP(GraphFunctionP):
    """``P = sum_k s^k f_k / k!`` with spectral coefficient fields (exact derivatives)."""

    kind = PKind.POLY_IN_S

    def __init__(self, coeffs, m=0.0, s_max=0.1):
        coeffs = list(coeffs)
        if not coeffs:
            raise ConstructionError("need at least one coefficient field")
        grid = coeffs[0].grid
        super().__init__(grid, m, s_max)
        self.coeffs = coeffs
        derivs = [tangential_derivatives(c) for c in coeffs]
        n = grid.size
        self._val = np.stack([c.values.ravel() for c in coeffs])
        self._grad = np.stack([d[0].components.reshape(n, 2) for d in derivs])
        self._hess = np.stack([d[1].components.reshape(n, 2, 2) for d in derivs])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def _weights(self, s, shift):
        K = len(self.coeffs)
        w = np.zeros(K)
        for k in range(shift, K):
            w[k] = s ** (k - shift) / math.factorial(k - shift)
        return w

    def ds(self, order, s):
        """``d^order P / ds^order`` at s as grid values."""
        w = self._weights(float(s), order)
        return np.tensordot(w, self._val, axes=1).reshape(self.grid.shape)

    def jet(self, s):
        s = float(s)
        w0, w1, w2 = (self._weights(s, k) for k in range(3))
        n = self.grid.size
        return PJet(
            s=np.full(n, s),
            P=w0 @ self._val,
            Ps=w1 @ self._val,
            Pss=w2 @ self._val,
            grad=np.tensordot(w0, self._grad, axes=1),
            grad_s=np.tensordot(w1, self._grad, axes=1),
            hess=np.tensordot(w0, self._hess, axes=1),
        )

    def jet_at(self, s, theta, phi):
        s = float(s)
        ev = [evaluate_jet(c, theta, phi) for c in self.coeffs]
        val = np.stack([e[0] for e in ev])
        grad = np.stack([e[1] for e in ev])
        hess = np.stack([e[2] for e in ev])
        w0, w1, w2 = (self._weights(s, k) for k in range(3))
        return PJet(
            s=np.full(val.shape[1], s),
            P=w0 @ val,
            Ps=w1 @ val,
            Pss=w2 @ val,
            grad=np.tensordot(w0, grad, axes=1),
            grad_s=np.tensordot(w1, grad, axes=1),
            hess=np.tensordot(w0, hess, axes=1),
        )

    def boundary_value(self):
        return self.coeffs[0]


class RadialP(GraphFunctionP):
    """Spherically symmetric P sampled through callables of s.

    ``P_ss`` defaults to a central difference of ``P_s`` with step ``s/10``
    and one Richardson level.
    """

    kind = PKind.NUMERIC

    def __init__(self, Ps, Pss=None, P=None, m=0.0, s_max=0.5, grid=None):
        if grid is None:
            from .sphere import SphericalGrid

            grid = SphericalGrid(0, n_lat=1, n_lon=1)
        super().__init__(grid, m, s_max)
        self._Ps = Ps
        self._Pss = Pss
        self._P = P

    @classmethod
    def from_sscmc(cls, params, grid=None, exact_pss=True, P0=0.0):
        from . import sscmc

        def P(s):
            from scipy import integrate

            v, _ = integrate.quad(lambda x: float(sscmc.P_s(params, x)), 0.0, s, epsabs=1e-13, epsrel=1e-13)
            return P0 + v

        s_max = 0.5 / params.m if params.m > 0 else 10.0
        return cls(
            Ps=lambda s: sscmc.P_s(params, s),
            Pss=(lambda s: sscmc.P_ss(params, s)) if exact_pss else None,
            P=P,
            m=params.m,
            s_max=s_max,
            grid=grid,
        )

    @classmethod
    def from_table(cls, s_table, Ps_table, m=0.0, grid=None):
        """Cubic-spline sampler over tabulated ``P_s``; needs a reasonably dense table."""
        from scipy.interpolate import CubicSpline

        s_table = np.asarray(s_table, dtype=float)
        if s_table.size < 8:
            raise ConstructionError("tabulation too coarse: need at least 8 samples for s-derivatives")
        spline = CubicSpline(s_table, np.asarray(Ps_table, dtype=float))
        return cls(Ps=spline, Pss=spline.derivative(), m=m, s_max=float(s_table.max()), grid=grid)

    def _pss(self, s):
        if self._Pss is not None:
            return float(self._Pss(s))
        h = s / 10.0
        d1 = (float(self._Ps(s + h)) - float(self._Ps(s - h))) / (2.0 * h)
        d2 = (float(self._Ps(s + h / 2)) - float(self._Ps(s - h / 2))) / h
        return (4.0 * d2 - d1) / 3.0

    def jet_at(self, s, theta, phi):
        s = float(s)
        n = np.size(theta)
        Pv = float(self._P(s)) if self._P is not None and s > 0 else 0.0
        return PJet(
            s=np.full(n, s),
            P=np.full(n, Pv),
            Ps=np.full(n, float(self._Ps(s))),
            Pss=np.full(n, self._pss(s) if s > 0 else float("nan")),
            grad=np.zeros((n, 2)),
            grad_s=np.zeros((n, 2)),
            hess=np.zeros((n, 2, 2)),
        )


class HyperboloidP(GraphFunctionP):
    """Closed-form P of the Minkowski hyperboloid ``u = sqrt(1 + |x + a|^2)``.

    With ``q = a.y``, ``A2 = 1 + |a|^2`` and ``R = sqrt(1 + 2 q s + A2 s^2)``,
    ``P = (1 - R)/s = -(2q + A2 s)/(1 + R)``. Its boundary value is ``-a.y``.
    """

    kind = PKind.CLOSED_FORM

    def __init__(self, a, grid, m=0.0, s_max=0.5):
        super().__init__(grid, m, s_max)
        self.a = np.asarray(a, dtype=float)
        self.A2 = 1.0 + float(self.a @ self.a)

    def jet_at(self, s, theta, phi):
        s = float(s)
        theta = np.ravel(theta)
        phi = np.ravel(phi)
        n_vec, e_th, e_ph = frame_vectors(theta, phi)
        a = self.a
        A2 = self.A2
        q = n_vec @ a
        dq = np.stack([e_th @ a, e_ph @ a], axis=-1)
        R = np.sqrt(1.0 + 2.0 * q * s + A2 * s * s)
        N = 2.0 * q + A2 * s
        Rs = (q + A2 * s) / R
        Rss = (A2 - Rs * Rs) / R
        P = -N / (1.0 + R)
        g_s = -A2 / (1.0 + R) + N * Rs / (1.0 + R) ** 2
        g_ss = 2.0 * A2 * Rs / (1.0 + R) ** 2 + N * Rss / (1.0 + R) ** 2 - 2.0 * N * Rs * Rs / (1.0 + R) ** 3
        g_q = -1.0 / R
        g_qs = Rs / R**2
        g_qq = s / R**3
        hess = g_qq[:, None, None] * dq[:, :, None] * dq[:, None, :] - (g_q * q)[:, None, None] * np.eye(2)
        return PJet(
            s=np.full(q.shape[0], s),
            P=P,
            Ps=g_s,
            Pss=g_ss,
            grad=g_q[:, None] * dq,
            grad_s=g_qs[:, None] * dq,
            hess=hess,
        )

    def boundary_jets(self, order=4):
        """``d^k P / ds^k`` at s = 0 for k = 0..order, as grid fields.

        Uses the power series of ``sqrt(1 + 2 q s + A2 s^2) = sum b_n s^n``;
        then ``d^k P/ds^k (0) = -k! b_(k+1)``.
        """
        n_vec, _, _ = self.grid.unit_vectors()
        q = n_vec @ self.a
        c = [np.ones_like(q), 2.0 * q, np.full_like(q, self.A2)]
        b = [np.ones_like(q)]
        for n in range(1, order + 2):
            cn = c[n] if n < 3 else 0.0
            acc = cn - sum(b[k] * b[n - k] for k in range(1, n))
            b.append(acc / 2.0)
        return [SphericalField(self.grid, values=-math.factorial(k) * b[k + 1]) for k in range(order + 1)]


# --------------------------------------------------------------------------
# pointwise geometry


def _ks(s, m):
    k = s * s * (1.0 - 2.0 * m * s)
    kp = 2.0 * s - 6.0 * m * s * s
    return k, kp


def lorentz_norm(jet, m):
    """``L = -(2 P_s + s^2(1 - 2ms) P_s^2 + |grad P|^2)``."""
    k, _ = _ks(jet.s, m)
    return -(2.0 * jet.Ps + k * jet.Ps**2 + np.sum(jet.grad**2, axis=-1))


_SIGN = {}


def _literal_mean_curvature(jet, m):
    s = jet.s
    k, kp = _ks(s, m)
    Ps, Pss = jet.Ps, jet.Pss
    p, ps, hs = jet.grad, jet.grad_s, jet.hess
    L = lorentz_norm(jet, m)
    if np.any(~(L > 0.0)):
        bad = int(np.argmin(L))
        raise NotSpacelikeError(f"L = {L[bad]:.3g} <= 0 at point {bad} (s = {s[bad]:.3g})")
    Ls = -(2.0 * Pss + kp * Ps**2 + 2.0 * k * Ps * Pss + 2.0 * np.sum(ps * p, axis=-1))
    gL = -(2.0 * ps + 2.0 * (k * Ps)[:, None] * ps + 2.0 * np.einsum("nab,nb->na", hs, p))
    rhs = (
        s * L * (k * Pss + jet.lap)
        - 0.5 * s * (Ls * (1.0 + k * Ps) + np.sum(gL * p, axis=-1))
        - s * s * L * Ps
        - 3.0 * L
    )
    # the identity reads  -3 H L^(3/2) = rhs
    return -rhs / (3.0 * L**1.5)


def mean_curvature_sign():
    """+1 if the literal identity already yields H = +1 on the unit hyperboloid, else -1."""
    if "sign" not in _SIGN:
        from .sphere import SphericalGrid

        g = SphericalGrid(2)
        hyp = HyperboloidP([0.0, 0.0, 0.0], g)
        H = _literal_mean_curvature(hyp.jet(0.05), 0.0)
        _SIGN["sign"] = 1.0 if float(np.median(H)) > 0.0 else -1.0
    return _SIGN["sign"]


def mean_curvature_jet(jet, m):
    return mean_curvature_sign() * _literal_mean_curvature(jet, m)


def mean_curvature(P, s, theta=None, phi=None):
    """Mean curvature (future normal, one third of the trace) from the scalar identity.

    Evaluated at every grid node, or at the given points. Returns a flat array.
    """
    P.check_domain(s)
    jet = P.jet(s) if theta is None else P.jet_at(s, theta, phi)
    return mean_curvature_jet(jet, P.m)


def truncated_abar(jet, m):
    """The second fundamental form of the unphysical metric truncated at O(s^3)."""
    s = jet.s
    L = lorentz_norm(jet, m)
    rl = 1.0 / np.sqrt(L)
    p, Ps = jet.grad, jet.Ps
    out = np.empty((jet.size, 3, 3))
    c2 = s - 3.0 * m * s * s
    out[:, :2, :2] = rl[:, None, None] * (c2[:, None, None] * p[:, :, None] * p[:, None, :] - jet.hess)
    out[:, 2, 2] = rl * (-9.0 * m * Ps**2 * s * s + 3.0 * Ps**2 * s - jet.Pss)
    off = rl[:, None] * ((-6.0 * m * Ps * s * s + 2.0 * Ps * s)[:, None] * p - jet.grad_s)
    out[:, 2, :2] = off
    out[:, :2, 2] = off
    return out


def frame_geometry(jet, m):
    """Raw kernel output for one jet; raises if any point is not spacelike."""
    L = lorentz_norm(jet, m)
    if np.any(~(L > 0.0)):
        bad = int(np.argmin(L))
        raise NotSpacelikeError(f"L = {L[bad]:.3g} <= 0 at point {bad} (s = {jet.s[bad]:.3g})")
    return kernels.null_frame_geometry(jet.s, m, jet.Ps, jet.Pss, jet.grad, jet.grad_s, jet.hess)


@dataclass(frozen=True)
class SurfaceGeometry:
    """Per-(s, node) geometric state. Arrays are indexed ``[i_s, node, ...]``."""

    s: np.ndarray
    gbar: np.ndarray
    L: np.ndarray
    abar: np.ndarray
    B: np.ndarray
    H: np.ndarray
    norm_a0: np.ndarray
    tr_a0: np.ndarray
    S: np.ndarray

    @cached_property
    def G(self):
        return self.gbar / self.s[:, None, None, None] ** 2

    @cached_property
    def A(self):
        return (self.abar + self.B[..., None, None] * self.gbar) / self.s[:, None, None, None]

    @cached_property
    def A0(self):
        """Traceless part ``A - H G``."""
        return self.A - self.H[..., None, None] * self.G

    def sup(self, name):
        return np.max(np.abs(getattr(self, name)), axis=1)

    def rows(self):
        """Long-format rows ``(s, node, H, L, normA0, S)``."""
        out = []
        for i, s in enumerate(self.s):
            for j in range(self.H.shape[1]):
                out.append((s, j, self.H[i, j], self.L[i, j], self.norm_a0[i, j], self.S[i, j]))
        return out


def surface_geometry(P, s_list, theta=None, phi=None, workers=None):
    """Assemble :class:`SurfaceGeometry` for every s in ``s_list``."""
    s_list = np.atleast_1d(np.asarray(s_list, dtype=float))
    P.check_domain(s_list)

    def one(s):
        jet = P.jet(s) if theta is None else P.jet_at(s, theta, phi)
        return frame_geometry(jet, P.m)

    n_workers = worker_count() if workers is None else workers
    if n_workers > 1 and len(s_list) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            res = list(ex.map(one, s_list))
    else:
        res = [one(s) for s in s_list]
    stack = lambda key: np.stack([r[key] for r in res])
    sB = stack("sB")
    return SurfaceGeometry(
        s=s_list,
        gbar=stack("gbar"),
        L=stack("L"),
        abar=stack("abar"),
        B=sB / s_list[:, None],
        H=stack("H"),
        norm_a0=stack("norm_a0"),
        tr_a0=stack("tr_a0"),
        S=stack("S"),
    )


# --------------------------------------------------------------------------
# intrinsic curvature by finite differences (Gauss-equation cross-check)


def _coordinate_metric(P, s, theta, phi):
    """Induced metric ``G`` in coordinates (theta, phi, s) at flat arrays of points."""
    jet = P.jet_at(s, theta, phi)
    m = P.m
    k, _ = _ks(jet.s, m)
    st = np.sin(np.ravel(theta))
    # coordinate partials from frame components
    Pth = jet.grad[:, 0]
    Pph = jet.grad[:, 1] * st
    g = np.empty((jet.size, 3, 3))
    g[:, 0, 0] = 1.0 - k * Pth * Pth
    g[:, 1, 1] = st * st - k * Pph * Pph
    g[:, 0, 1] = g[:, 1, 0] = -k * Pth * Pph
    fac = 1.0 + k * jet.Ps
    g[:, 0, 2] = g[:, 2, 0] = -Pth * fac
    g[:, 1, 2] = g[:, 2, 1] = -Pph * fac
    g[:, 2, 2] = -2.0 * jet.Ps - k * jet.Ps**2
    return g / (s * s)


def intrinsic_scalar_curvature(P, s, theta, phi, h=2e-3):
    """Scalar curvature of the induced metric by central differences of its components.

    ``theta``, ``phi`` are flat arrays of sample points away from the poles.
    """
    theta = np.ravel(np.asarray(theta, dtype=float))
    phi = np.ravel(np.asarray(phi, dtype=float))
    n = theta.size
    offs = np.array([-1, 0, 1])
    # metric on a 3x3x3 stencil in (theta, phi, s)
    grid_pts = np.array(np.meshgrid(offs, offs, offs, indexing="ij")).reshape(3, -1).T
    gs = np.empty((27, n, 3, 3))
    for idx, (i, j, l) in enumerate(grid_pts):
        gs[idx] = _coordinate_metric(P, s + l * h * s, theta + i * h, phi + j * h)
    gs = gs.reshape(3, 3, 3, n, 3, 3)
    steps = np.array([h, h, h * s])
    g0 = gs[1, 1, 1]
    dg = np.empty((n, 3, 3, 3))  # [n, c, a, b] = d_c g_ab
    ddg = np.empty((n, 3, 3, 3, 3))  # [n, c, d, a, b]
    unit = np.eye(3, dtype=int)

    def at(o):
        return gs[1 + o[0], 1 + o[1], 1 + o[2]]

    for c in range(3):
        dg[:, c] = (at(unit[c]) - at(-unit[c])) / (2.0 * steps[c])
        for d in range(3):
            if c == d:
                ddg[:, c, c] = (at(unit[c]) - 2.0 * g0 + at(-unit[c])) / steps[c] ** 2
            else:
                e1, e2 = unit[c], unit[d]
                ddg[:, c, d] = (at(e1 + e2) - at(e1 - e2) - at(-e1 + e2) + at(-e1 - e2)) / (
                    4.0 * steps[c] * steps[d]
                )
    gi = np.linalg.inv(g0)
    # Gamma_{k ij} = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij)
    Gam_l = 0.5 * (
        np.einsum("nijk->nkij", dg) + np.einsum("njik->nkij", dg) - dg
    )
    Gam = np.einsum("nkl,nlij->nkij", gi, Gam_l)
    # d_c Gamma_{l ij}
    dGam_l = 0.5 * (
        np.einsum("ncijl->nclij", ddg) + np.einsum("ncjil->nclij", ddg) - ddg
    )
    dgi = -np.einsum("nab,ncbd,nde->ncae", gi, dg, gi)
    dGam = np.einsum("nckl,nlij->nckij", dgi, Gam_l) + np.einsum("nkl,nclij->nckij", gi, dGam_l)
    term1 = np.einsum("nkkij->nij", dGam)
    term2 = np.einsum("njkik->nij", dGam)
    term3 = np.einsum("nkkl,nlij->nij", Gam, Gam)
    term4 = np.einsum("nkjl,nlik->nij", Gam, Gam)
    ric = term1 - term2 + term3 - term4
    return np.einsum("nij,nij->n", gi, ric)


# --------------------------------------------------------------------------
# asymptotically hyperbolic deviation


@dataclass(frozen=True)
class AHDeviation:
    s: np.ndarray
    theta_norm: np.ndarray  # sup over nodes of |theta_bar| in the reference metric
    exp_minus_rho: np.ndarray  # per-s representative e^-rho (max over nodes)
    frame_dev: np.ndarray  # sup over nodes and frame indices of |g(e_i, e_j) - delta_ij|
    theta_fit: DecayFit
    frame_fit: DecayFit


def _pair_norm(Binv, T):
    M = np.einsum("nij,njk->nik", Binv, T)
    return np.sqrt(np.abs(np.einsum("nik,nki->n", M, M)))


def ah_deviation(P, reference_a, s_list, degree_tol=1e-10):
    """Compare the induced metric of P with the hyperbolic metric of a reference hyperboloid.

    The reference is ``u = sqrt(1 + |x + a|^2)``, whose boundary value is
    ``-a.y``. Returns the reference-metric norm of the metric difference and
    the deviation of the induced metric on a reference-orthonormal frame.
    """
    f = P.boundary_value()
    if isinstance(f, SphericalField):
        from .sphere import eigenspace_project

        if f.grid.l_max >= 2:
            low = eigenspace_project(f, 0) + eigenspace_project(f, 1)
            rest = f.values - low.values
            scale = max(np.max(np.abs(f.values)), 1.0)
            if np.max(np.abs(rest)) > degree_tol * scale:
                raise PreconditionError("boundary value is not in the span of degrees 0 and 1")
    a = np.asarray(reference_a, dtype=float)
    ref = HyperboloidP(a, P.grid, m=0.0, s_max=max(P.s_max, 1.0))
    s_list = np.asarray(s_list, dtype=float)
    n_vec, e_th, e_ph = P.grid.unit_vectors()
    n_vec = n_vec.reshape(-1, 3)
    e_th = e_th.reshape(-1, 3)
    e_ph = e_ph.reshape(-1, 3)
    theta_norm = []
    frame_dev = []
    erho = []
    for s in s_list:
        mine = frame_geometry(P.jet(s), P.m)["gbar"]
        theirs = frame_geometry(ref.jet(s), 0.0)["gbar"]
        Binv = np.linalg.inv(theirs)
        theta_norm.append(float(np.max(_pair_norm(Binv, mine - theirs))))
        # hyperbolic frame in the hyperboloid's spatial coordinate z = n/s + a
        z = n_vec / s + a
        zn = np.linalg.norm(z, axis=-1)
        zhat = z / zn[:, None]
        cosh_rho = np.sqrt(1.0 + zn * zn)
        rho = np.arcsinh(zn)
        t1 = e_th - np.sum(e_th * zhat, axis=-1)[:, None] * zhat
        t1 /= np.linalg.norm(t1, axis=-1)[:, None]
        t2 = np.cross(zhat, t1)
        V = np.stack([cosh_rho[:, None] * zhat, t1, t2], axis=1)  # (n, 3 vectors, 3 comps)
        # coordinate components in (e_theta, e_phi, d_s)
        C = np.stack(
            [
                s * np.einsum("nvk,nk->nv", V, e_th),
                s * np.einsum("nvk,nk->nv", V, e_ph),
                -s * s * np.einsum("nvk,nk->nv", V, n_vec),
            ],
            axis=-1,
        )
        Gm = mine / (s * s)
        Gframe = np.einsum("nvi,nij,nwj->nvw", C, Gm, C)
        frame_dev.append(float(np.max(np.abs(Gframe - np.eye(3)))))
        erho.append(float(np.max(np.exp(-rho))))
    theta_norm = np.array(theta_norm)
    frame_dev = np.array(frame_dev)
    erho = np.array(erho)
    return AHDeviation(
        s=s_list,
        theta_norm=theta_norm,
        exp_minus_rho=erho,
        frame_dev=frame_dev,
        theta_fit=decay_fit(s_list, theta_norm),
        frame_fit=decay_fit(erho, frame_dev),
    )


def rotated_points(grid, R):
    """Angles of ``R y`` for every grid node y (flattened)."""
    n, _, _ = grid.unit_vectors()
    pts = n.reshape(-1, 3) @ np.asarray(R).T
    return cartesian_to_angles(pts)
