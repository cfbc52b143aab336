"""Pure-numpy implementations of the hot kernels.

These define the reference semantics; ``_kernels.pyx`` must agree with them to
round-off. Index convention for the 3x3 surface tensors: 0, 1 are the
orthonormal sphere directions (e_theta, e_phi), 2 is the s direction.
"""

import numpy as np


def legendre_table(x, lmax):
    """Orthonormal associated Legendre functions and their theta-derivatives.

    Returns ``(P, dP)`` of shape ``(n, lmax+1, lmax+1)`` indexed ``[i, l, m]``
    with ``P[i, l, m] = N_lm P_l^m(x_i)`` (Condon-Shortley phase, so that
    ``Y_lm = P[.., l, m] exp(i m phi)`` is orthonormal on the sphere) and
    ``dP = d/dtheta`` of the same, where ``x = cos(theta)``.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    L = int(lmax)
    P = np.zeros((n, L + 1, L + 1))
    dP = np.zeros((n, L + 1, L + 1))
    st = np.sqrt(np.maximum(1.0 - x * x, 0.0))
    pmm = np.full(n, np.sqrt(1.0 / (4.0 * np.pi)))
    for m in range(L + 1):
        if m > 0:
            pmm = -np.sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * pmm
        P[:, m, m] = pmm
        if m + 1 <= L:
            P[:, m + 1, m] = np.sqrt(2.0 * m + 3.0) * x * pmm
        for l in range(m + 2, L + 1):
            a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            P[:, l, m] = a * (x * P[:, l - 1, m] - b * P[:, l - 2, m])
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_st = np.where(st > 0.0, 1.0 / st, 0.0)
    for m in range(L + 1):
        for l in range(m, L + 1):
            prev = P[:, l - 1, m] if l > m else 0.0
            c = np.sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * (l * l - m * m)) if l > m else 0.0
            dP[:, l, m] = (l * x * P[:, l, m] - c * prev) * inv_st
    return P, dP


def null_frame_geometry(s, m, Ps, Pss, grad, grad_s, hess):
    """Per-node extrinsic geometry of the graph ``v = -P(y, s)`` near null infinity.

    All inputs are arrays over ``n`` nodes (``s`` may vary per node). Returns a
    dict with the unphysical induced metric ``gbar`` and second fundamental form
    ``abar`` (n, 3, 3), ``L``, ``sB``, the mean curvature ``H`` (one third of the
    G-trace of A), ``norm_a0`` (|traceless A|_G), ``tr_a0`` and the scalar
    curvature ``S`` from the Gauss equation.
    """
    s = np.asarray(s, dtype=np.float64)
    Ps = np.asarray(Ps, dtype=np.float64)
    Pss = np.asarray(Pss, dtype=np.float64)
    p = np.asarray(grad, dtype=np.float64)
    ps = np.asarray(grad_s, dtype=np.float64)
    hs = np.asarray(hess, dtype=np.float64)
    n = Ps.shape[0]
    s = np.broadcast_to(s, (n,))

    k = s * s * (1.0 - 2.0 * m * s)
    k3 = s**3 * (1.0 - 5.0 * m * s + 6.0 * m * m * s * s)
    k4 = s * (1.0 - 3.0 * m * s)
    grad2 = np.einsum("na,na->n", p, p)
    L = -(2.0 * Ps + k * Ps * Ps + grad2)
    rl = 1.0 / np.sqrt(L)

    gbar = np.empty((n, 3, 3))
    gbar[:, :2, :2] = np.eye(2) - k[:, None, None] * p[:, :, None] * p[:, None, :]
    g3a = -p * (1.0 + k * Ps)[:, None]
    gbar[:, 2, :2] = g3a
    gbar[:, :2, 2] = g3a
    gbar[:, 2, 2] = -2.0 * Ps - k * Ps * Ps

    c = k3 * Ps + k4
    abar = np.empty((n, 3, 3))
    abar[:, :2, :2] = rl[:, None, None] * (
        -hs + c[:, None, None] * p[:, :, None] * p[:, None, :]
    )
    a3a = rl[:, None] * (-ps + ((2.0 * k4 * Ps + k3 * Ps * Ps))[:, None] * p)
    abar[:, 2, :2] = a3a
    abar[:, :2, 2] = a3a
    abar[:, 2, 2] = rl * (-Pss + 3.0 * k4 * Ps * Ps + k3 * Ps**3)

    sB = rl * (1.0 + k * Ps)
    ginv = np.linalg.inv(gbar)
    tr_abar = np.einsum("nij,nij->n", ginv, abar)
    H = s * tr_abar / 3.0 + sB
    # s * (traceless part of abar); equals s^2 times the traceless A in G-units
    a0 = s[:, None, None] * (abar - (tr_abar / 3.0)[:, None, None] * gbar)
    mixed = np.einsum("nij,njk->nik", ginv, a0)
    norm2 = np.einsum("nik,nki->n", mixed, mixed)
    tr_a0 = np.einsum("nii->n", mixed)
    norm_a0 = np.sqrt(np.maximum(norm2, 0.0))
    # |A|^2 - (3H)^2 with |A|^2 = |A0|^2 + 3 H^2
    S = norm2 - 6.0 * H * H
    return {
        "gbar": gbar,
        "abar": abar,
        "L": L,
        "sB": sB,
        "H": H,
        "norm_a0": norm_a0,
        "tr_a0": tr_a0,
        "S": S,
    }
