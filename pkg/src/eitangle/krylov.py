"""Lanczos approximation of exp(-i H t) v for large Hermitian sectors."""
from __future__ import annotations

import numpy as np
from scipy.linalg import eigh_tridiagonal

BREAKDOWN = 1e-13


def _lanczos(matvec, v, m):
    n = v.size
    V = np.zeros((m + 1, n), dtype=np.complex128)
    a = np.zeros(m)
    b = np.zeros(m)
    V[0] = v
    for j in range(m):
        w = matvec(V[j])
        a[j] = np.vdot(V[j], w).real
        w = w - a[j] * V[j]
        if j > 0:
            w = w - b[j - 1] * V[j - 1]
        # full reorthogonalization; m is small
        w = w - V[: j + 1].T @ (V[: j + 1].conj() @ w)
        b[j] = np.linalg.norm(w)
        if b[j] < BREAKDOWN:
            return V[: j + 1], a[: j + 1], b[:j], 0.0
        V[j + 1] = w / b[j]
    return V[:m], a, b[: m - 1], b[m - 1]


def expm_multiply_hermitian(H, v, t, tol=1e-10, m_max=30):
    """exp(-i H t) v with adaptive sub-steps.

    Each sub-step builds an ``m_max``-dim Krylov space and shrinks the step
    until the a-posteriori estimate ``b_m |[exp(-i dt T) e_1]_{m-1}| |v|``
    falls below ``tol``.
    """
    w = np.array(v, dtype=np.complex128)
    nrm = np.linalg.norm(w)
    if nrm == 0.0 or t == 0.0:
        return w
    matvec = H.dot
    m = min(m_max, w.size)
    done = 0.0
    dt = t
    while abs(done) < abs(t):
        dt = np.copysign(min(abs(dt), abs(t - done)), t)
        nrm = np.linalg.norm(w)
        V, a, b, beta_m = _lanczos(matvec, w / nrm, m)
        evals, Q = eigh_tridiagonal(a, b) if a.size > 1 else (a, np.ones((1, 1)))
        while True:
            y = Q @ (np.exp(-1j * dt * evals) * Q[0].conj())
            err = beta_m * abs(y[-1]) * nrm
            if err <= tol or abs(dt) < 1e-14 * abs(t):
                break
            dt *= 0.5
        w = nrm * (V.T @ y)
        done += dt
        if err < 0.1 * tol:
            dt *= 2.0
    return w
