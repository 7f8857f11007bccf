"""Hot inner loops, each in two flavours.

``*_jit`` kernels are explicit loops compiled by numba; ``*_np`` kernels are
vectorized numpy. The unsuffixed names dispatch on :data:`eitangle._accel.USE_NUMBA`.
Both flavours must agree to rounding; ``tests/test_kernels.py`` checks that.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# --------------------------------------------------------------------------
# Double Gauss sum for the discrete-superposition coefficients.
#
#   c[r-1, s-1] = N^-2 sum_{n,m=1..N} w^{-(n r + m s - M theta(n, m))},
#   w = exp(2 pi i / N),  theta(n, m) = (1 + K) m + 2 K n m - m^2.
#
# The exponent is an integer, so it is reduced mod N before any floating
# point work happens.


@njit
def gauss_coefficients_jit(M, N, K):
    roots = np.empty(N, dtype=np.complex128)
    for k in range(N):
        roots[k] = np.exp(-2j * np.pi * k / N)
    # inner sum over m first: T[n, s] = sum_m w^{-(m s - M theta(n, m))}
    T = np.zeros((N, N), dtype=np.complex128)
    for n in range(1, N + 1):
        for s in range(1, N + 1):
            acc = 0.0 + 0.0j
            for m in range(1, N + 1):
                theta = (1 + K) * m + 2 * K * n * m - m * m
                acc += roots[(m * s - M * theta) % N]
            T[n - 1, s - 1] = acc
    c = np.zeros((N, N), dtype=np.complex128)
    for r in range(1, N + 1):
        for s in range(1, N + 1):
            acc = 0.0 + 0.0j
            for n in range(1, N + 1):
                acc += roots[(n * r) % N] * T[n - 1, s - 1]
            c[r - 1, s - 1] = acc / (N * N)
    return c


def gauss_coefficients_np(M, N, K):
    idx = np.arange(1, N + 1, dtype=np.int64)
    n = idx[:, None]
    m = idx[None, :]
    theta = (1 + K) * m + 2 * K * n * m - m * m
    # P[n, m] = w^{M theta}; F[r, n] = w^{-n r}
    P = np.exp(2j * np.pi * ((M * theta) % N) / N)
    F = np.exp(-2j * np.pi * (np.outer(idx, idx) % N) / N)
    return F @ P @ F.T / (N * N)


# --------------------------------------------------------------------------
# Diagonal phase map amps[n, m] *= exp(i tau theta(n, m)).


@njit
def phase_evolve_jit(amps, tau, K):
    P, A = amps.shape
    out = np.empty_like(amps)
    for n in range(P):
        for m in range(A):
            theta = (1.0 + K) * m + 2.0 * K * n * m - m * m
            out[n, m] = amps[n, m] * np.exp(1j * tau * theta)
    return out


def phase_evolve_np(amps, tau, K):
    P, A = amps.shape
    n = np.arange(P, dtype=np.float64)[:, None]
    m = np.arange(A, dtype=np.float64)[None, :]
    theta = (1.0 + K) * m + 2.0 * K * n * m - m * m
    return amps * np.exp(1j * tau * theta)


# --------------------------------------------------------------------------
# Matrix elements of the four-mode Hamiltonian on one charge sector.
#
# ``basis`` is (dim, 4) int64 with columns (n_photon, n1, n2, n3);
# ``lookup`` maps the mixed-radix code of a tuple to its row in ``basis`` or -1;
# ``cut2`` is the b2 cutoff (the only index a hop can push upward).
# Returns COO triplets, diagonal first, each hopping emitted with its adjoint.


@njit
def sector_hamiltonian_coo_jit(basis, lookup, strides, cut2, g1, g2, delta1, delta2, lam, lam_cross):
    dim = basis.shape[0]
    cap = dim * 5
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.complex128)
    k = 0
    for i in range(dim):
        occ = basis[i, 1:4]
        d = (delta1 - delta2) * occ[2] + delta1 * occ[1]
        for a in range(3):
            d += lam[a] * occ[a] * (occ[a] - 1)
            for b in range(3):
                if a != b:
                    d += lam_cross[a, b] * occ[a] * occ[b]
        rows[k] = i
        cols[k] = i
        vals[k] = d
        k += 1
    for i in range(dim):
        na = basis[i, 0]
        n1 = basis[i, 1]
        n2 = basis[i, 2]
        n3 = basis[i, 3]
        # -g1 a b2^dag b1
        if na > 0 and n1 > 0 and n2 < cut2:
            code = (na - 1) * strides[0] + (n1 - 1) * strides[1] + (n2 + 1) * strides[2] + n3 * strides[3]
            if code < lookup.shape[0]:
                j = lookup[code]
                if j >= 0:
                    v = -g1 * np.sqrt(na * n1 * (n2 + 1.0))
                    rows[k] = j
                    cols[k] = i
                    vals[k] = v
                    rows[k + 1] = i
                    cols[k + 1] = j
                    vals[k + 1] = np.conj(v)
                    k += 2
        # -g2 b2^dag b3
        if n3 > 0 and n2 < cut2:
            code = na * strides[0] + n1 * strides[1] + (n2 + 1) * strides[2] + (n3 - 1) * strides[3]
            if code < lookup.shape[0]:
                j = lookup[code]
                if j >= 0:
                    v = -g2 * np.sqrt((n2 + 1.0) * n3)
                    rows[k] = j
                    cols[k] = i
                    vals[k] = v
                    rows[k + 1] = i
                    cols[k + 1] = j
                    vals[k + 1] = np.conj(v)
                    k += 2
    return rows[:k], cols[:k], vals[:k]


def sector_hamiltonian_coo_np(basis, lookup, strides, cut2, g1, g2, delta1, delta2, lam, lam_cross):
    dim = basis.shape[0]
    na, n1, n2, n3 = (basis[:, c] for c in range(4))
    occ = basis[:, 1:4].astype(np.float64)
    off = lam_cross - np.diag(np.diag(lam_cross))
    diag = (
        (delta1 - delta2) * n3
        + delta1 * n2
        + (occ * (occ - 1.0)) @ lam
        + np.einsum("ka,ab,kb->k", occ, off, occ)
    )
    rows = [np.arange(dim)]
    cols = [np.arange(dim)]
    vals = [diag.astype(np.complex128)]
    src = np.arange(dim)

    def hop(mask, code, amp):
        code = np.where(mask, code, -1)
        inside = (code >= 0) & (code < lookup.shape[0])
        j = np.full(dim, -1, dtype=np.int64)
        j[inside] = lookup[code[inside]]
        ok = j >= 0
        v = amp[ok]
        rows.extend([j[ok], src[ok]])
        cols.extend([src[ok], j[ok]])
        vals.extend([v, np.conj(v)])

    code1 = (na - 1) * strides[0] + (n1 - 1) * strides[1] + (n2 + 1) * strides[2] + n3 * strides[3]
    hop((na > 0) & (n1 > 0) & (n2 < cut2), code1, -g1 * np.sqrt(na * n1 * (n2 + 1.0)))
    code2 = na * strides[0] + n1 * strides[1] + (n2 + 1) * strides[2] + (n3 - 1) * strides[3]
    hop((n3 > 0) & (n2 < cut2), code2, -g2 * np.sqrt((n2 + 1.0) * n3) + 0j)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


if USE_NUMBA:
    gauss_coefficients = gauss_coefficients_jit
    phase_evolve = phase_evolve_jit
    sector_hamiltonian_coo = sector_hamiltonian_coo_jit
else:
    gauss_coefficients = gauss_coefficients_np
    phase_evolve = phase_evolve_np
    sector_hamiltonian_coo = sector_hamiltonian_coo_np
