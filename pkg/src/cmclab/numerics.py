"""Small numerical helpers: Richardson tables, central differences, log-log fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import AccuracyError, DomainError


def richardson_table(values, ratio=2.0, p=2, q=2):
    """Richardson extrapolation table for a sequence computed with step h/ratio^k.

    ``values[k]`` is an estimate with error expansion in ``h^p, h^(p+q), ...``.
    Returns the full lower-triangular table; ``table[-1][-1]`` is the most
    extrapolated estimate and ``table[-1][-2]`` the one used for error estimates.
    """
    table = [[float(v)] for v in values]
    for k in range(1, len(table)):
        for j in range(1, k + 1):
            power = p + (j - 1) * q
            fac = ratio**power
            prev = table[k][j - 1]
            table[k].append(prev + (prev - table[k - 1][j - 1]) / (fac - 1.0))
    return table


def richardson_limit(values, ratio=2.0, p=2, q=2):
    """Extrapolated value and a crude error estimate from :func:`richardson_table`."""
    table = richardson_table(values, ratio, p, q)
    best = table[-1][-1]
    if len(table) < 2:
        return best, float("inf")
    return best, abs(best - table[-1][-2])


_CENTRAL = {
    1: ([-1, 1], [-0.5, 0.5]),
    2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
    3: ([-2, -1, 1, 2], [-0.5, 1.0, -1.0, 0.5]),
}


def central_difference(func, x, order, h):
    """Second-order accurate central difference of ``func`` at ``x``."""
    offsets, weights = _CENTRAL[order]
    acc = 0.0
    for o, w in zip(offsets, weights):
        acc = acc + w * func(x + o * h)
    return acc / h**order


def richardson_derivative(func, x, order, h0, levels=5):
    """Central differences at h0, h0/2, ... combined by Richardson extrapolation."""
    ests = [central_difference(func, x, order, h0 / 2**k) for k in range(levels)]
    return richardson_limit(ests, 2.0, 2, 2)


def dyadic_window(s0=0.1, kmax=8):
    """The sample window ``s0 * 2**-k`` for ``k = 0..kmax``."""
    return s0 * 2.0 ** -np.arange(kmax + 1)


@dataclass(frozen=True)
class DecayFit:
    """Power-law fit ``value ~ C s^exponent``.

    ``infinite`` is set when every sample is exactly zero; ``exponent`` is
    then ``inf`` and the regression fields are zero.
    """

    exponent: float
    stderr: float
    residual: float
    window: tuple
    infinite: bool = False

    def at_least(self, threshold, max_stderr=None):
        if self.infinite:
            return True
        ok = self.exponent >= threshold
        if max_stderr is not None:
            ok = ok and self.stderr < max_stderr
        return ok


RESIDUAL_LIMIT = 0.05


def decay_fit(s, values, residual_limit=RESIDUAL_LIMIT):
    """Least-squares slope of ``log|value|`` against ``log s``.

    Needs at least five samples. Raises :class:`AccuracyError` when the RMS
    residual of the log-log fit exceeds ``residual_limit``.
    """
    s = np.asarray(s, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    if s.shape != v.shape or s.ndim != 1:
        raise DomainError("decay_fit needs matching 1-d sample arrays")
    if s.size < 5:
        raise DomainError(f"decay_fit needs at least 5 samples, got {s.size}")
    if np.any(s <= 0.0) or np.unique(s).size != s.size:
        raise DomainError("decay_fit needs distinct positive s samples")
    window = (float(s.min()), float(s.max()))
    if np.all(v == 0.0):
        return DecayFit(math.inf, 0.0, 0.0, window, infinite=True)
    if np.any(v == 0.0) or not np.all(np.isfinite(v)):
        raise DomainError("decay_fit samples must be all nonzero or all zero")
    x = np.log(s)
    y = np.log(v)
    res = stats.linregress(x, y)
    resid = y - (res.intercept + res.slope * x)
    rms = float(np.sqrt(np.mean(resid**2)))
    if rms >= residual_limit:
        raise AccuracyError(
            f"log-log fit residual {rms:.3g} exceeds {residual_limit}", achieved=rms
        )
    return DecayFit(float(res.slope), float(res.stderr), rms, window)
