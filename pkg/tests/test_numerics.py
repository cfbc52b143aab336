import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmclab.errors import AccuracyError, DomainError
from cmclab.numerics import (
    central_difference,
    decay_fit,
    dyadic_window,
    richardson_derivative,
    richardson_limit,
)


def test_richardson_removes_polynomial_error():
    # A(h) = 2 + 3 h^2 - h^4 extrapolates exactly after two levels
    vals = [2 + 3 * h**2 - h**4 for h in (0.1, 0.05, 0.025)]
    best, err = richardson_limit(vals, 2.0, 2, 2)
    assert abs(best - 2.0) < 1e-14
    best, err = richardson_limit([1.0])
    assert err == math.inf


def test_richardson_derivatives():
    for order, exact in ((1, math.cos(0.3)), (2, -math.sin(0.3)), (3, -math.cos(0.3))):
        v, e = richardson_derivative(math.sin, 0.3, order, 0.1, 5)
        assert abs(v - exact) < 1e-9
    assert abs(central_difference(math.exp, 0.0, 1, 1e-4) - 1.0) < 1e-8


@given(st.floats(0.5, 6.0), st.floats(0.01, 100.0))
def test_decay_fit_recovers_exponent(p, C):
    s = dyadic_window(0.1, 6)
    fit = decay_fit(s, C * s**p)
    assert abs(fit.exponent - p) < 1e-10
    assert fit.stderr < 1e-6 and fit.at_least(p - 1e-6, 0.1)
    assert fit.window == (s.min(), s.max())


def test_decay_fit_zero_and_errors():
    s = dyadic_window(0.1, 5)
    fit = decay_fit(s, np.zeros_like(s))
    assert fit.infinite and fit.exponent == math.inf and fit.at_least(100.0)
    with pytest.raises(DomainError):
        decay_fit(s[:4], s[:4])
    with pytest.raises(DomainError):
        decay_fit(np.r_[s, s[0]], np.r_[s, s[0]])
    with pytest.raises(DomainError):
        decay_fit(s, np.r_[0.0, s[1:]])
    with pytest.raises(AccuracyError):
        decay_fit(s, s**2 * (1.0 + 0.5 * np.sin(40.0 * np.log(s))))
    noisy = decay_fit(s, s**3 * (1.0 + 0.2 * s / s.max()))
    assert not noisy.at_least(3.0, 1e-6)
