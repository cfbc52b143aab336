"""Spectral calculus on the round unit sphere.

Fields live on a Gauss-Legendre (colatitude) by equispaced (longitude) grid and
carry complex spherical-harmonic coefficients ``c[l, m + l_max]`` with respect
to the orthonormal basis ``Y_lm``. Tangent tensors are stored by their
components in the orthonormal frame ``(e_theta, e_phi)``; Gauss-Legendre nodes
never sit on a pole, so the frame is defined at every node.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError

_EVAL_CHUNK = 2048


class SphericalGrid:
    """Gauss-Legendre x equispaced-longitude grid with band limit ``l_max``."""

    def __init__(self, l_max=15, n_lat=None, n_lon=None):
        l_max = int(l_max)
        if l_max < 0:
            raise ConfigurationError("l_max must be non-negative")
        if n_lat is None:
            n_lat = max(3 * (l_max + 1) // 2, l_max + 1)
        if n_lon is None:
            n_lon = max(3 * (l_max + 1), 2 * l_max + 1)
        n_lat, n_lon = int(n_lat), int(n_lon)
        if n_lon < 2 * l_max + 1:
            raise ConfigurationError(f"n_lon={n_lon} < 2*l_max+1={2 * l_max + 1}")
        if n_lat < l_max + 1:
            raise ConfigurationError(f"n_lat={n_lat} < l_max+1={l_max + 1}")
        self.l_max = l_max
        self.n_lat = n_lat
        self.n_lon = n_lon
        x, w = np.polynomial.legendre.leggauss(n_lat)
        # north to south: theta increasing
        self.cos_theta = x[::-1].copy()
        self.gl_weights = w[::-1].copy()
        self.theta = np.arccos(self.cos_theta)
        self.sin_theta = np.sqrt(1.0 - self.cos_theta**2)
        self.phi = 2.0 * np.pi * np.arange(n_lon) / n_lon
        self.weights = np.outer(self.gl_weights, np.full(n_lon, 2.0 * np.pi / n_lon))
        P, dP = kernels.legendre_table(self.cos_theta, l_max)
        self._ptab = _signed_table(P, l_max)
        self._dptab = _signed_table(dP, l_max)
        self.m_values = np.arange(-l_max, l_max + 1)
        self.l_values = np.arange(l_max + 1)
        for arr in (self.cos_theta, self.gl_weights, self.theta, self.sin_theta,
                    self.phi, self.weights, self._ptab, self._dptab):
            arr.setflags(write=False)

    @property
    def shape(self):
        return (self.n_lat, self.n_lon)

    @property
    def size(self):
        return self.n_lat * self.n_lon

    def mesh(self):
        """Broadcast (theta, phi) arrays of the grid shape."""
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def unit_vectors(self):
        """Cartesian position n, and frame vectors e_theta, e_phi, each (n_lat, n_lon, 3)."""
        th, ph = self.mesh()
        return frame_vectors(th, ph)

    def same_as(self, other):
        return (self.l_max, self.n_lat, self.n_lon) == (other.l_max, other.n_lat, other.n_lon)

    def __repr__(self):
        return f"SphericalGrid(l_max={self.l_max}, n_lat={self.n_lat}, n_lon={self.n_lon})"


def _signed_table(P, l_max):
    """Expand a [node, l, |m|] table to [node, l, m + l_max] with the m<0 sign."""
    n = P.shape[0]
    out = np.zeros((n, l_max + 1, 2 * l_max + 1))
    for m in range(-l_max, l_max + 1):
        sign = (-1.0) ** m if m < 0 else 1.0
        out[:, :, m + l_max] = sign * P[:, :, abs(m)]
    return out


def frame_vectors(theta, phi):
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    n = np.stack([st * cp, st * sp, ct], axis=-1)
    e_th = np.stack([ct * cp, ct * sp, -st], axis=-1)
    e_ph = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
    return n, e_th, e_ph


def cartesian_to_angles(v):
    v = np.asarray(v, dtype=float)
    r = np.linalg.norm(v, axis=-1)
    theta = np.arccos(np.clip(v[..., 2] / r, -1.0, 1.0))
    phi = np.mod(np.arctan2(v[..., 1], v[..., 0]), 2.0 * np.pi)
    return theta, phi


# --------------------------------------------------------------------------
# transforms


def analysis(grid, values):
    """Grid values to coefficients ``c[l, m + l_max]`` (exact for band-limited input)."""
    values = np.asarray(values)
    F = np.fft.fft(values, axis=1) * (2.0 * np.pi / grid.n_lon)
    bins = np.mod(grid.m_values, grid.n_lon)
    Fm = F[:, bins]
    return np.einsum("j,jlm,jm->lm", grid.gl_weights, grid._ptab, Fm)


def _synth_complex(grid, coeffs, table):
    G = np.einsum("lm,jlm->jm", coeffs, table)
    spec = np.zeros((grid.n_lat, grid.n_lon), dtype=complex)
    spec[:, np.mod(grid.m_values, grid.n_lon)] = G
    return np.fft.ifft(spec, axis=1) * grid.n_lon


def synthesis(grid, coeffs, table=None):
    """Coefficients to real grid values."""
    tab = grid._ptab if table is None else table
    return _synth_complex(grid, coeffs, tab).real


def _check_coeffs(grid, coeffs):
    coeffs = np.asarray(coeffs, dtype=complex)
    L = grid.l_max
    if coeffs.shape != (L + 1, 2 * L + 1):
        raise ConfigurationError(
            f"coefficient array shape {coeffs.shape} does not match l_max={L}"
        )
    return coeffs


# --------------------------------------------------------------------------
# fields


class SphericalField:
    """Real scalar field on a :class:`SphericalGrid`.

    Holds grid values and (lazily) spectral coefficients. Immutable; arithmetic
    acts on grid values and returns new fields. Products are only band-limited
    on the grid if the grid's ``l_max`` is large enough for the product degree.
    """

    __array_priority__ = 100

    def __init__(self, grid, values=None, coeffs=None):
        if (values is None) == (coeffs is None):
            raise ConfigurationError("give exactly one of values or coeffs")
        self.grid = grid
        if values is not None:
            v = np.array(values, dtype=float)
            if v.shape == ():
                v = np.full(grid.shape, float(v))
            if v.shape != grid.shape:
                raise ConfigurationError(f"values shape {v.shape} != grid shape {grid.shape}")
            v.setflags(write=False)
            self._values = v
            self._coeffs = None
        else:
            c = _check_coeffs(grid, coeffs).copy()
            c.setflags(write=False)
            self._coeffs = c
            v = synthesis(grid, c)
            v.setflags(write=False)
            self._values = v

    @classmethod
    def constant(cls, grid, value):
        return cls(grid, values=np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func(x, y, z)`` at the grid nodes (unit-vector components)."""
        n, _, _ = grid.unit_vectors()
        return cls(grid, values=func(n[..., 0], n[..., 1], n[..., 2]))

    @classmethod
    def linear(cls, grid, a, const=0.0):
        """The degree-1 field ``const + a . y``."""
        a = np.asarray(a, dtype=float)
        return cls.from_function(grid, lambda x, y, z: const + a[0] * x + a[1] * y + a[2] * z)

    @property
    def values(self):
        return self._values

    @property
    def coeffs(self):
        if self._coeffs is None:
            c = analysis(self.grid, self._values)
            c.setflags(write=False)
            self._coeffs = c
        return self._coeffs

    def coeff(self, l, m):
        return self.coeffs[l, m + self.grid.l_max]

    def degree(self, tol=1e-12):
        """Largest l with non-negligible coefficient energy (relative to the total)."""
        e = np.sum(np.abs(self.coeffs) ** 2, axis=1)
        tot = e.sum()
        if tot == 0.0:
            return 0
        nz = np.nonzero(e > tol * tol * tot)[0]
        return int(nz[-1]) if nz.size else 0

    def band_limited(self, tol=1e-10):
        """True if re-synthesis of the coefficients reproduces the values to ``tol`` relative."""
        back = synthesis(self.grid, self.coeffs)
        scale = max(np.max(np.abs(self._values)), 1.0)
        return float(np.max(np.abs(back - self._values))) <= tol * scale

    def sup(self):
        return float(np.max(np.abs(self._values)))

    def _wrap(self, v):
        return SphericalField(self.grid, values=v)

    def _other(self, o):
        if isinstance(o, SphericalField):
            if not o.grid.same_as(self.grid):
                raise ConfigurationError("fields live on different grids")
            return o._values
        return o

    def __add__(self, o):
        return self._wrap(self._values + self._other(o))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self._values - self._other(o))

    def __rsub__(self, o):
        return self._wrap(self._other(o) - self._values)

    def __mul__(self, o):
        return self._wrap(self._values * self._other(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._wrap(self._values / self._other(o))

    def __rtruediv__(self, o):
        return self._wrap(self._other(o) / self._values)

    def __neg__(self):
        return self._wrap(-self._values)

    def __pow__(self, p):
        return self._wrap(self._values**p)

    def __repr__(self):
        return f"SphericalField({self.grid!r}, sup={self.sup():.3g})"


class TangentTensorField:
    """Rank-1 or rank-2 tangent tensor in the orthonormal (e_theta, e_phi) frame."""

    def __init__(self, grid, components, rank):
        comp = np.array(components, dtype=float)
        expect = grid.shape + (2,) * rank
        if rank not in (1, 2) or comp.shape != expect:
            raise ConfigurationError(f"components shape {comp.shape} != {expect}")
        comp.setflags(write=False)
        self.grid = grid
        self.rank = rank
        self.components = comp

    def is_symmetric(self, tol=1e-13):
        if self.rank != 2:
            return False
        c = self.components
        scale = max(np.max(np.abs(c)), 1.0)
        return bool(np.max(np.abs(c[..., 0, 1] - c[..., 1, 0])) <= tol * scale)

    def trace(self):
        if self.rank != 2:
            raise DomainError("trace needs a rank-2 tensor")
        return SphericalField(self.grid, values=self.components[..., 0, 0] + self.components[..., 1, 1])

    def norm_squared(self):
        c = self.components
        axes = tuple(range(2, 2 + self.rank))
        return SphericalField(self.grid, values=np.sum(c * c, axis=axes))


# --------------------------------------------------------------------------
# calculus


def _partials(field):
    """(f_theta, f_phi, f_thth, f_thph, f_phph) on the grid."""
    g = field.grid
    c = field.coeffs
    im = 1j * g.m_values[None, :]
    l = g.l_values[:, None]
    f_th = synthesis(g, c, g._dptab)
    f_ph = _synth_complex(g, c * im, g._ptab).real
    f_thph = _synth_complex(g, c * im, g._dptab).real
    f_phph = synthesis(g, c * (-(g.m_values[None, :] ** 2)), g._ptab)
    # Legendre ODE: P'' = -cot P' - (l(l+1) - m^2/sin^2) P
    st = g.sin_theta[:, None]
    ct = g.cos_theta[:, None]
    llc = synthesis(g, c * (l * (l + 1.0)), g._ptab)
    f_thth = -(ct / st) * f_th - llc - f_phph / st**2
    return f_th, f_ph, f_thth, f_thph, f_phph


def _frame_derivs(st, ct, f_th, f_ph, f_thth, f_thph, f_phph):
    grad = np.stack([f_th, f_ph / st], axis=-1)
    cot = ct / st
    h00 = f_thth
    h01 = (f_thph - cot * f_ph) / st
    h11 = f_phph / st**2 + cot * f_th
    hess = np.stack([np.stack([h00, h01], axis=-1), np.stack([h01, h11], axis=-1)], axis=-2)
    return grad, hess


def tangential_derivatives(field):
    """Spectral gradient, covariant Hessian and Laplacian of a band-limited field.

    Returns ``(grad, hess, lap)`` where ``grad`` and ``hess`` are
    :class:`TangentTensorField` in the (e_theta, e_phi) frame and ``lap`` is
    the trace of ``hess``.
    """
    g = field.grid
    parts = _partials(field)
    st = g.sin_theta[:, None]
    ct = g.cos_theta[:, None]
    grad, hess = _frame_derivs(st, ct, *parts)
    lap = hess[..., 0, 0] + hess[..., 1, 1]
    return (
        TangentTensorField(g, grad, 1),
        TangentTensorField(g, hess, 2),
        SphericalField(g, values=lap),
    )


def laplacian(field):
    """Spectral Laplacian, ``-l(l+1)`` on each degree."""
    g = field.grid
    l = g.l_values[:, None]
    return SphericalField(g, coeffs=field.coeffs * (-l * (l + 1.0)))


def gradient(field):
    return tangential_derivatives(field)[0]


def grad_dot(f, h):
    """Pointwise ``<grad f, grad h>`` as a field."""
    gf = gradient(f).components
    gh = gf if h is f else gradient(h).components
    return SphericalField(f.grid, values=np.sum(gf * gh, axis=-1))


def grad_norm2(f):
    return grad_dot(f, f)


def eigenspace_project(field, l):
    """Component of ``field`` in the degree-``l`` eigenspace of ``-Laplacian``."""
    g = field.grid
    if not 0 <= l <= g.l_max:
        raise DomainError(f"degree {l} outside 0..{g.l_max}")
    c = np.zeros_like(field.coeffs)
    c[l] = field.coeffs[l]
    return SphericalField(g, coeffs=c)


def sphere_integral(field):
    """Gauss-Legendre quadrature of a field over the unit sphere."""
    return float(np.sum(field.values * field.grid.weights))


def resample(field, grid):
    """Re-synthesize a band-limited field on another grid."""
    src = field.grid
    if grid.l_max < field.degree():
        raise ConfigurationError(
            f"target l_max={grid.l_max} below field degree {field.degree()}"
        )
    c = np.zeros((grid.l_max + 1, 2 * grid.l_max + 1), dtype=complex)
    L = min(src.l_max, grid.l_max)
    c[: L + 1, grid.l_max - L : grid.l_max + L + 1] = field.coeffs[: L + 1, src.l_max - L : src.l_max + L + 1]
    return SphericalField(grid, coeffs=c)


def random_field(grid, degree, rng, decay=0.0, unit_norm=True):
    """Random real band-limited field of the given degree.

    Coefficients of degree l are scaled by ``(1 + l)**-decay``. With
    ``unit_norm`` the result has L2 norm 1 on the sphere.
    """
    if degree > grid.l_max:
        raise ConfigurationError(f"degree {degree} exceeds grid l_max {grid.l_max}")
    L = grid.l_max
    c = np.zeros((L + 1, 2 * L + 1), dtype=complex)
    for l in range(degree + 1):
        amp = (1.0 + l) ** -decay
        c[l, L] = amp * rng.standard_normal()
        for m in range(1, l + 1):
            z = amp * (rng.standard_normal() + 1j * rng.standard_normal()) / math.sqrt(2.0)
            c[l, L + m] = z
            c[l, L - m] = (-1) ** m * np.conj(z)
    if unit_norm:
        c /= np.sqrt(np.sum(np.abs(c) ** 2))
    return SphericalField(grid, coeffs=c)


def harmonic(grid, l, m, real=True):
    """Real orthonormal harmonic of degree l (cos-type for m > 0, sin-type for m < 0)."""
    L = grid.l_max
    c = np.zeros((L + 1, 2 * L + 1), dtype=complex)
    if m == 0:
        c[l, L] = 1.0
    elif m > 0:
        c[l, L + m] = 1.0 / math.sqrt(2.0)
        c[l, L - m] = (-1) ** m / math.sqrt(2.0)
    else:
        k = -m
        c[l, L + k] = -1j / math.sqrt(2.0)
        c[l, L - k] = (-1) ** k * 1j / math.sqrt(2.0)
    return SphericalField(grid, coeffs=c)


# --------------------------------------------------------------------------
# evaluation at arbitrary points


def evaluate_jet(field, theta, phi):
    """Value, frame gradient and covariant Hessian of ``field`` at arbitrary points.

    ``theta`` and ``phi`` are flat arrays; points must avoid the poles. Returns
    ``(value (n,), grad (n, 2), hess (n, 2, 2))``.
    """
    g = field.grid
    theta = np.ravel(np.asarray(theta, dtype=float))
    phi = np.ravel(np.asarray(phi, dtype=float))
    st = np.sin(theta)
    if np.any(st < 1e-12):
        raise DomainError("evaluation point too close to a pole")
    c = field.coeffs
    L = g.l_max
    mv = g.m_values
    lv = g.l_values
    n = theta.size
    out = np.empty((6, n))
    for lo in range(0, n, _EVAL_CHUNK):
        hi = min(n, lo + _EVAL_CHUNK)
        P, dP = kernels.legendre_table(np.cos(theta[lo:hi]), L)
        Ps = _signed_table(P, L)
        dPs = _signed_table(dP, L)
        e = np.exp(1j * np.outer(phi[lo:hi], mv))
        A = np.einsum("lm,jlm->jm", c, Ps)
        dA = np.einsum("lm,jlm->jm", c, dPs)
        llA = np.einsum("lm,jlm->jm", c * (lv[:, None] * (lv[:, None] + 1.0)), Ps)
        out[0, lo:hi] = np.sum(A * e, axis=1).real
        out[1, lo:hi] = np.sum(dA * e, axis=1).real
        out[2, lo:hi] = np.sum(1j * mv * A * e, axis=1).real
        out[3, lo:hi] = np.sum(1j * mv * dA * e, axis=1).real
        out[4, lo:hi] = np.sum(-(mv**2) * A * e, axis=1).real
        out[5, lo:hi] = np.sum(llA * e, axis=1).real
    val, f_th, f_ph, f_thph, f_phph, llc = out
    ct = np.cos(theta)
    f_thth = -(ct / st) * f_th - llc - f_phph / st**2
    grad, hess = _frame_derivs(st, ct, f_th, f_ph, f_thth, f_thph, f_phph)
    return val, grad, hess


def evaluate(field, theta, phi):
    """Field value at arbitrary points (direct synthesis)."""
    g = field.grid
    theta = np.ravel(np.asarray(theta, dtype=float))
    phi = np.ravel(np.asarray(phi, dtype=float))
    out = np.empty(theta.size)
    for lo in range(0, theta.size, _EVAL_CHUNK):
        hi = min(theta.size, lo + _EVAL_CHUNK)
        P, _ = kernels.legendre_table(np.cos(theta[lo:hi]), g.l_max)
        A = np.einsum("lm,jlm->jm", field.coeffs, _signed_table(P, g.l_max))
        out[lo:hi] = np.sum(A * np.exp(1j * np.outer(phi[lo:hi], g.m_values)), axis=1).real
    return out


def rotate_field(field, R):
    """The field ``y -> field(R y)`` sampled on the same grid."""
    n, _, _ = field.grid.unit_vectors()
    pts = n.reshape(-1, 3) @ np.asarray(R).T
    th, ph = cartesian_to_angles(pts)
    return SphericalField(field.grid, values=evaluate(field, th, ph).reshape(field.grid.shape))


def random_rotation(rng):
    """Uniform random rotation matrix."""
    from scipy.spatial.transform import Rotation

    return Rotation.random(random_state=rng).as_matrix()
