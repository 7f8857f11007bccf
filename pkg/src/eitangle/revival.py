"""Fractional revivals at tau = 2 pi M / N for integer K.

The phase exp(i tau theta(n, m)) is N-periodic in n and m, so the evolved
state is a finite sum of N^2 product coherent states with rotated amplitudes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import ContractError, DimensionError
from .fockspace import TwoModeState, coherent_amplitudes, default_cutoff

ZERO_CLAMP = 1e-13


@dataclass(frozen=True)
class RationalTau:
    M: int
    N: int

    def __post_init__(self):
        M, N = int(self.M), int(self.N)
        if M != self.M or N != self.N or M <= 0 or N <= 0:
            raise ContractError(f"M and N must be positive integers, got {self.M}/{self.N}")
        g = math.gcd(M, N)
        object.__setattr__(self, "M", M // g)
        object.__setattr__(self, "N", N // g)

    def value(self) -> float:
        return 2.0 * math.pi * self.M / self.N


@dataclass(frozen=True, eq=False)
class CoefficientGrid:
    """``c[r-1, s-1]``: r labels the photon phase 2 pi r / N, s the atom phase."""

    N: int
    c: np.ndarray

    def __getitem__(self, rs: tuple[int, int]) -> complex:
        r, s = rs
        return complex(self.c[r - 1, s - 1])

    def nonzero(self, clamp: float = ZERO_CLAMP) -> list[tuple[int, int, complex]]:
        """1-based (r, s, c_rs) for entries with modulus above ``clamp``."""
        out = []
        for r in range(1, self.N + 1):
            for s in range(1, self.N + 1):
                z = self[r, s]
                if abs(z) > clamp:
                    out.append((r, s, z))
        return out

    def clamped(self, clamp: float = ZERO_CLAMP) -> np.ndarray:
        c = self.c.copy()
        c[np.abs(c) <= clamp] = 0.0
        return c


def _check_K(K) -> int:
    if isinstance(K, bool) or int(K) != K or K == 0:
        raise ContractError(f"K must be a nonzero integer, got {K!r}")
    return int(K)


def phase_exponent(n: int, m: int, tau: RationalTau, K: int) -> int:
    """M * theta(n, m) reduced mod N, in exact integer arithmetic."""
    theta = (1 + K) * m + 2 * K * n * m - m * m
    return (tau.M * theta) % tau.N


def coefficients(tau: RationalTau, K: int) -> CoefficientGrid:
    K = _check_K(K)
    c = kernels.gauss_coefficients(tau.M, tau.N, K)
    return CoefficientGrid(tau.N, np.asarray(c))


def verify_determining_identity(grid: CoefficientGrid, tau: RationalTau, K: int) -> float:
    """max over (n, m) in {1..N}^2 of |sum_rs c_rs w^(n r + m s - M theta) - 1|."""
    K = _check_K(K)
    N = tau.N
    if grid.N != N or grid.c.shape != (N, N):
        raise DimensionError(f"grid is {grid.c.shape}, tau needs {(N, N)}")
    idx = np.arange(1, N + 1)
    worst = 0.0
    for n in idx:
        for m in idx:
            e = (n * idx[:, None] + m * idx[None, :] - tau.M * int((1 + K) * m + 2 * K * n * m - m * m)) % N
            total = np.sum(grid.c * np.exp(2j * np.pi * e / N))
            worst = max(worst, abs(total - 1.0))
    return float(worst)


def assemble(grid: CoefficientGrid, alpha: complex, beta: complex,
             photon_cutoff: int | None = None, atom_cutoff: int | None = None) -> TwoModeState:
    """sum_rs c_rs |alpha e^{i phi_r}> (x) |beta e^{i phi_s}>, phi_k = 2 pi k / N.

    No renormalization is applied.
    """
    pc = default_cutoff(alpha) if photon_cutoff is None else photon_cutoff
    ac = default_cutoff(beta) if atom_cutoff is None else atom_cutoff
    N = grid.N
    phases = np.exp(2j * np.pi * np.arange(1, N + 1) / N)
    photon = np.array([coherent_amplitudes(alpha * ph, pc).amplitudes for ph in phases])
    atom = np.array([coherent_amplitudes(beta * ph, ac).amplitudes for ph in phases])
    return TwoModeState(photon.T @ grid.c @ atom)
