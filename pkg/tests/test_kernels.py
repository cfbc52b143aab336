import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import lpmv

from cmclab import _kernels_py, kernels

try:
    from cmclab import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def frame_inputs(seed, n=64):
    rng = np.random.default_rng(seed)
    s = rng.uniform(0.01, 0.1, n)
    Ps = -0.5 + 0.05 * rng.standard_normal(n)
    Pss = 0.1 * rng.standard_normal(n)
    grad = 0.2 * rng.standard_normal((n, 2))
    grad_s = 0.2 * rng.standard_normal((n, 2))
    h = 0.2 * rng.standard_normal((n, 2, 2))
    return s, float(rng.uniform(0.0, 2.0)), Ps, Pss, grad, grad_s, 0.5 * (h + h.transpose(0, 2, 1))


def test_legendre_against_scipy():
    x = np.linspace(-0.95, 0.95, 9)
    P, _ = _kernels_py.legendre_table(x, 8)
    for l in range(9):
        for m in range(l + 1):
            norm = math.sqrt((2 * l + 1) / (4 * math.pi) * math.factorial(l - m) / math.factorial(l + m))
            assert np.max(np.abs(P[:, l, m] - norm * lpmv(m, l, x))) < 1e-13


def test_legendre_theta_derivative():
    th = np.linspace(0.2, 2.9, 7)
    h = 1e-6
    _, dP = _kernels_py.legendre_table(np.cos(th), 6)
    Pp, _ = _kernels_py.legendre_table(np.cos(th + h), 6)
    Pm, _ = _kernels_py.legendre_table(np.cos(th - h), 6)
    assert np.max(np.abs(dP - (Pp - Pm) / (2 * h))) < 1e-8


@needs_compiled
@given(st.integers(0, 2**32 - 1))
def test_backend_parity_frame(seed):
    args = frame_inputs(seed)
    a = _kernels_py.null_frame_geometry(*args)
    b = compiled.null_frame_geometry(*args)
    assert set(a) == set(b)
    for key in a:
        scale = max(1.0, float(np.max(np.abs(a[key]))))
        assert np.max(np.abs(np.asarray(a[key]) - np.asarray(b[key]))) < 1e-12 * scale, key


@needs_compiled
def test_backend_parity_legendre():
    x = np.cos(np.linspace(0.05, 3.0, 40))
    for A, B in zip(_kernels_py.legendre_table(x, 20), compiled.legendre_table(x, 20)):
        assert np.max(np.abs(A - B)) < 1e-12


@needs_compiled
def test_compiled_accepts_readonly_broadcast_input():
    s, m, Ps, Pss, grad, grad_s, hess = frame_inputs(1)
    s_ro = np.broadcast_to(0.05, Ps.shape)
    out = compiled.null_frame_geometry(s_ro, m, Ps, Pss, grad, grad_s, hess)
    ref = _kernels_py.null_frame_geometry(s_ro, m, Ps, Pss, grad, grad_s, hess)
    assert np.max(np.abs(out["H"] - ref["H"])) < 1e-12


def test_env_forces_fallback():
    env = dict(os.environ, CMC_LAB_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from cmclab import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_backend_reported():
    assert kernels.BACKEND in ("python", "compiled")
    if compiled is not None and os.environ.get("CMC_LAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
        assert kernels.BACKEND == "compiled"
