"""Concurrence and Schmidt spectra of pure photon-atom states."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import ContractError, DegeneracyError
from .fockspace import TruncatedMode, TwoModeState, require_normalized, tensor

COMPONENT_NORM_TOL = 1e-10
DEPENDENT_TOL = 1e-12
ILL_CONDITIONED = 1e-6
SPECTRUM_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TwoTermBipartite:
    """mu |eta>|gamma> + nu |xi>|delta> with normalized components."""

    mu: complex
    nu: complex
    eta: TruncatedMode
    xi: TruncatedMode
    gamma: TruncatedMode
    delta: TruncatedMode

    def __post_init__(self):
        for name in ("eta", "xi", "gamma", "delta"):
            nrm = getattr(self, name).norm()
            if abs(nrm - 1.0) > COMPONENT_NORM_TOL:
                raise ContractError(f"component {name} is not normalized (norm={nrm:.12g})")

    @property
    def p1(self) -> complex:
        return self.eta.inner(self.xi)

    @property
    def p2(self) -> complex:
        return self.delta.inner(self.gamma)

    def to_state(self) -> TwoModeState:
        return self.mu * tensor(self.eta, self.gamma) + self.nu * tensor(self.xi, self.delta)


@dataclass(frozen=True)
class ConcurrenceResult:
    p1: complex
    p2: complex
    norm_sq: float
    lambda_plus: float
    lambda_minus: float
    concurrence: float


def _from_concurrence(c: float, p1: complex, p2: complex, norm_sq: float) -> ConcurrenceResult:
    c = min(max(c, 0.0), 1.0)
    root = math.sqrt(max(0.0, 1.0 - c * c))
    return ConcurrenceResult(p1, p2, norm_sq, 0.5 + 0.5 * root, 0.5 - 0.5 * root, c)


def two_term_concurrence(s: TwoTermBipartite) -> ConcurrenceResult:
    """Concurrence from the two overlaps p1 = <eta|xi>, p2 = <delta|gamma>.

    C = 2 |mu| |nu| sqrt((1 - |p1|^2)(1 - |p2|^2)) / N^2 with
    N^2 = |mu|^2 + |nu|^2 + 2 Re(mu* nu p1 p2*), and lambda_+/- = (1 +/- sqrt(1 - C^2)) / 2
    so that C = 2 sqrt(lambda_+ lambda_-).

    Near-degenerate components (|p| > 1 - 1e-6) fall back to the numeric
    Schmidt route with a warning; fully dependent ones raise.
    """
    p1, p2 = s.p1, s.p2
    mu, nu = complex(s.mu), complex(s.nu)
    norm_sq = abs(mu) ** 2 + abs(nu) ** 2 + 2.0 * (mu.conjugate() * nu * p1 * p2.conjugate()).real
    if norm_sq <= 0.0:
        raise ContractError("two-term state has zero norm")
    worst = max(abs(p1), abs(p2))
    if worst >= 1.0 - DEPENDENT_TOL:
        raise DegeneracyError("components are linearly dependent; use schmidt_spectrum")
    if worst > 1.0 - ILL_CONDITIONED:
        warnings.warn("near-degenerate components; concurrence taken from the Schmidt spectrum",
                      RuntimeWarning, stacklevel=2)
        lam = schmidt_spectrum(s.to_state() / math.sqrt(norm_sq))
        return _from_concurrence(schmidt_concurrence(lam), p1, p2, norm_sq)
    c = 2.0 * abs(mu) * abs(nu) / norm_sq * math.sqrt((1.0 - abs(p1) ** 2) * (1.0 - abs(p2) ** 2))
    return _from_concurrence(c, p1, p2, norm_sq)


def closed_form_concurrence(alpha: complex, beta: complex) -> float:
    """sqrt((1 - e^{-4|alpha|^2})(1 - e^{-4|beta|^2})) for the two-branch states."""
    return math.sqrt(-math.expm1(-4.0 * abs(alpha) ** 2) * -math.expm1(-4.0 * abs(beta) ** 2))


def reduced_density(s: TwoModeState, keep: str = "photon") -> np.ndarray:
    A = s.amplitudes
    if keep == "photon":
        return A @ A.conj().T
    if keep == "atom":
        return A.T @ A.conj()
    raise ValueError(f"keep must be 'photon' or 'atom', got {keep!r}")


def schmidt_spectrum(s: TwoModeState, keep: str = "photon") -> np.ndarray:
    """Eigenvalues of the reduced density operator, descending, clamped to [0, 1]."""
    require_normalized(s)
    lam = np.linalg.eigvalsh(reduced_density(s, keep))[::-1]
    lam = np.clip(lam, 0.0, 1.0)
    if abs(lam.sum() - 1.0) > max(SPECTRUM_SUM_TOL, 2 * abs(s.norm() ** 2 - 1.0)):
        raise ContractError(f"Schmidt weights sum to {lam.sum():.15g}")
    return lam


def schmidt_concurrence(spectrum: np.ndarray) -> float:
    """2 sqrt(lambda_1 lambda_2) from the two leading Schmidt weights."""
    if spectrum.size < 2:
        return 0.0
    return 2.0 * math.sqrt(spectrum[0] * spectrum[1])


def entanglement_entropy(s: TwoModeState) -> float:
    """Von Neumann entropy of the reduced state, in bits."""
    lam = schmidt_spectrum(s)
    lam = lam[lam > 0.0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))
