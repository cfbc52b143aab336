"""Jets at future null infinity: boundary data to ``(P_s, P_ss, P_sss)``,
the fourth-order compatibility residual, barrier surfaces and eigenspace tests.

All sphere calculus runs on a working grid large enough that every product
formed along the way is represented exactly (no aliasing); results are
returned on that working grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ConstructionError, DomainError
from .geometry import PolynomialP, lorentz_norm
from .sphere import (
    SphericalField,
    SphericalGrid,
    grad_dot,
    grad_norm2,
    laplacian,
    resample,
)

MIN_WORK_DEGREE = 8


@dataclass(frozen=True)
class BoundaryData:
    """Boundary value ``f = P(., 0)`` and the limiting mean curvature ``H0``.

    ``H0`` is a positive float or a positive :class:`SphericalField`.
    """

    f: SphericalField
    H0: object = 1.0
    m: float = 1.0
    H_sss: SphericalField | None = None

    def __post_init__(self):
        if isinstance(self.H0, SphericalField):
            if not np.all(self.H0.values > 0.0):
                raise DomainError("H0 must be positive everywhere")
        elif not float(self.H0) > 0.0:
            raise DomainError(f"H0 must be positive, got {self.H0}")
        if self.m < 0.0:
            raise DomainError("mass must be non-negative")

    @property
    def constant_H(self):
        return not isinstance(self.H0, SphericalField)


@dataclass(frozen=True)
class JetResult:
    f: SphericalField
    f1: SphericalField
    f2: SphericalField
    f3: SphericalField
    L0: SphericalField
    L_s: SphericalField
    L_ss: SphericalField
    H0: SphericalField
    compatibility_residual: SphericalField

    @property
    def grid(self):
        return self.f.grid

    def relation_defects(self):
        """Sup-norm gaps between ``L_s``, ``L_ss`` and their reconstruction from the P-jets."""
        f, f1, f2, f3 = self.f, self.f1, self.f2, self.f3
        Ls = -2.0 * f2 - 2.0 * grad_dot(f1, f)
        Lss = -(2.0 * f3 + 2.0 * grad_dot(f2, f) + 2.0 * grad_norm2(f1) + 2.0 * f1 * f1)
        return (Ls - self.L_s).sup(), (Lss - self.L_ss).sup()


def working_grid(data):
    """Grid whose degree covers every jet product (``f3`` has degree ``4 deg f``)."""
    deg = data.f.degree()
    if not data.constant_H:
        deg += data.H0.degree()
    L = max(4 * deg, MIN_WORK_DEGREE, data.f.grid.l_max)
    if data.H_sss is not None:
        L = max(L, data.H_sss.degree())
    return SphericalGrid(L)


def _on(grid, field):
    if field.grid.same_as(grid):
        return field
    return resample(field, grid)


def _constant_jets(f, H0):
    """Jets for constant ``H0``."""
    h2 = H0**-2
    lap = laplacian(f)
    g2 = grad_norm2(f)
    f1 = -0.5 * (h2 + g2)
    L_s = -h2 * lap
    f2 = 0.5 * grad_dot(g2, f) + 0.5 * h2 * lap
    L_ss = (
        -0.5 * h2 * lap * lap
        + 2.0 * h2 * laplacian(g2)
        - 2.0 * h2 * grad_dot(lap, f)
        - 2.0 * h2 * (h2 + g2)
    )
    f3 = (
        0.25 * h2 * lap * lap
        - h2 * laplacian(g2)
        + h2 * grad_dot(lap, f)
        + h2 * (h2 + g2)
        - grad_dot(f2, f)
        - grad_norm2(f1)
        - f1 * f1
    )
    return f1, f2, f3, L_s, L_ss


def _variable_jets(f, H0):
    """Jets for a positive field ``H0``.

    ``f2`` and ``f3`` come from the derivative relations for ``L_s`` and
    ``L_ss``; this keeps the sign of the ``grad H0`` term consistent with the
    ``L_s`` condition.
    """
    h2 = H0 ** -2.0
    lap = laplacian(f)
    g2 = grad_norm2(f)
    f1 = -0.5 * (h2 + g2)
    L_s = -h2 * (lap + grad_dot(H0, f) / H0)
    f2 = -0.5 * L_s - grad_dot(f1, f)
    L_ss = (
        -4.5 * H0 * H0 * L_s * L_s
        - 4.0 * (L_s * lap + h2 * laplacian(f1))
        + 2.0 * grad_dot(L_s, f)
        + 2.0 * grad_dot(h2, f1)
        + 4.0 * h2 * f1
    )
    f3 = -0.5 * L_ss - grad_dot(f2, f) - grad_norm2(f1) - f1 * f1
    return f1, f2, f3, L_s, L_ss


def _residual(f, f1, f2, L_s, L_ss, H0, H_sss):
    """Right-hand side of the fourth-order compatibility condition."""
    if isinstance(H0, SphericalField):
        h2 = H0 ** -2.0
        H4 = H0**4
    else:
        h2 = H0**-2
        H4 = H0**4
    lap = laplacian(f)
    res = (
        2.5 * L_ss * lap
        + 0.75 * H4 * L_s * L_s * L_s
        - 4.0 * L_s * laplacian(f1)
        - 2.0 * h2 * laplacian(f2)
        + 6.0 * L_s * f1
        + grad_dot(L_ss, f)
        + 2.0 * grad_dot(L_s, f1)
    )
    if isinstance(H0, SphericalField):
        res = res + 4.5 * grad_dot(H0, f) * L_ss / H0 + grad_dot(h2, f2)
    if H_sss is not None:
        res = res - 2.0 * H_sss * H0 ** -3.0
    return res


def jet_coefficients(data):
    """``f1, f2, f3`` (= ``P_s, P_ss, P_sss`` at s = 0) and the L-jets."""
    grid = working_grid(data)
    f = _on(grid, data.f)
    if data.constant_H:
        H0 = float(data.H0)
        f1, f2, f3, L_s, L_ss = _constant_jets(f, H0)
        H0f = SphericalField.constant(grid, H0)
    else:
        H0 = _on(grid, data.H0)
        f1, f2, f3, L_s, L_ss = _variable_jets(f, H0)
        H0f = H0
    H_sss = _on(grid, data.H_sss) if data.H_sss is not None else None
    res = _residual(f, f1, f2, L_s, L_ss, H0, H_sss)
    return JetResult(
        f=f,
        f1=f1,
        f2=f2,
        f3=f3,
        L0=H0f ** -2.0,
        L_s=L_s,
        L_ss=L_ss,
        H0=H0f,
        compatibility_residual=res,
    )


def compatibility_residual(data):
    """The compatibility right-hand side as a field (its sup-norm is the defect)."""
    return jet_coefficients(data).compatibility_residual


def _spacelike_on(P, s_max, n_samples=48):
    """Worst ``(L, s, node)`` over samples in ``(0, s_max]``."""
    worst = (np.inf, None, None)
    ss = np.unique(np.concatenate([s_max * np.linspace(1.0 / n_samples, 1.0, n_samples), s_max * 2.0 ** -np.arange(1, 12)]))
    for s in ss:
        L = lorentz_norm(P.jet(s), P.m)
        j = int(np.argmin(L))
        if L[j] < worst[0]:
            worst = (float(L[j]), float(s), j)
    return worst


def build_barrier(data, f4=None, s_max=0.1, min_s_max=1e-4):
    """Polynomial-in-s surface ``f + s f1 + s^2 f2/2 + s^3 f3/6 [+ s^4 f4/24]``.

    ``s_max`` is halved until the graph is spacelike on ``(0, s_max]``.
    """
    jets = jet_coefficients(data)
    grid = jets.grid
    coeffs = [jets.f, jets.f1, jets.f2, jets.f3]
    if f4 is not None:
        if not isinstance(f4, SphericalField):
            f4 = SphericalField.constant(grid, float(f4))
        if f4.degree() > grid.l_max:
            raise ConfigurationError("f4 degree exceeds the working grid")
        coeffs.append(_on(grid, f4))
    if not jets.L0.values.min() > 0.0:
        raise ConstructionError("L0 not positive")
    s = float(s_max)
    while s >= min_s_max:
        P = PolynomialP(coeffs, m=data.m, s_max=s)
        L, s_bad, node = _spacelike_on(P, s)
        if L > 0.0:
            return P
        s *= 0.5
    th, ph = grid.mesh()
    raise ConstructionError(
        f"no s_max >= {min_s_max:g} gives a spacelike barrier; L = {L:.3g} at s = {s_bad:.3g}, "
        f"node {node} (theta = {th.ravel()[node]:.4f}, phi = {ph.ravel()[node]:.4f})"
    )


def eigenspace_membership(f, tol=1e-10):
    """Whether ``f`` lies in degrees {0, 1} up to ``tol``.

    The defect is the L2 norm of the part of degree >= 2 relative to the norm of ``f``.
    """
    e = np.sum(np.abs(f.coeffs) ** 2, axis=1)
    tot = float(e.sum())
    if tot == 0.0:
        return True, 0.0
    defect = float(np.sqrt(e[2:].sum() / tot))
    return defect < tol, defect
