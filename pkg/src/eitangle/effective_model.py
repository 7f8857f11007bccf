"""Effective photon / ground-state-atom model after eliminating levels 2 and 3.

H_eff = 2 w1' n_b + 4 w1' n_b n_a + lambda1 n_b (n_b - 1) is diagonal in the
Fock basis |n, m> (n photons, m atoms), so evolution is a phase per amplitude.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import DomainError
from .fockspace import TwoModeState, require_normalized


@dataclass(frozen=True)
class EffectiveParams:
    g1: complex
    g2: complex
    delta: float
    lambda1: float
    omega1p: float
    omega3p: float
    gprime: complex
    K: float

    @property
    def coupling_ratio_sq(self) -> float:
        """|g1/g2|^2; infinite when the coupling laser is off."""
        if self.g2 == 0:
            return float("inf")
        return abs(self.g1 / self.g2) ** 2

    @property
    def in_eit_regime(self) -> bool:
        return self.coupling_ratio_sq < 1.0


def derive_params(g1: complex, g2: complex, delta: float, lambda1: float) -> EffectiveParams:
    if delta == 0:
        raise DomainError("two-photon detuning must be nonzero")
    if lambda1 == 0:
        raise DomainError("lambda1 must be nonzero")
    g1, g2 = complex(g1), complex(g2)
    delta, lambda1 = float(delta), float(lambda1)
    return EffectiveParams(
        g1=g1,
        g2=g2,
        delta=delta,
        lambda1=lambda1,
        omega1p=-abs(g1) ** 2 / delta,
        omega3p=-abs(g2) ** 2 / delta,
        gprime=-g1 * g2.conjugate() / delta,
        K=2.0 * abs(g1) ** 2 / (lambda1 * delta),
    )


def theta(n, m, K):
    """Running frequency (1 + K) m + 2 K n m - m^2; broadcasts over arrays."""
    return (1 + K) * m + 2 * K * n * m - m * m


def energy(n, m, p: EffectiveParams):
    return 2 * p.omega1p * m + 4 * p.omega1p * n * m + p.lambda1 * m * (m - 1)


def evolve(initial: TwoModeState, tau: float, K: float) -> TwoModeState:
    """Advance by scaled time ``tau = lambda1 * t``: amplitude (n, m) picks up exp(i tau theta)."""
    require_normalized(initial, "initial state")
    return TwoModeState(kernels.phase_evolve(np.asarray(initial.amplitudes), float(tau), float(K)))


def evolve_time(initial: TwoModeState, t: float, p: EffectiveParams) -> TwoModeState:
    """Advance by physical time ``t`` using exp(-i E(n, m) t) directly."""
    require_normalized(initial, "initial state")
    P, A = initial.shape
    n = np.arange(P)[:, None]
    m = np.arange(A)[None, :]
    return TwoModeState(initial.amplitudes * np.exp(-1j * energy(n, m, p) * t))
