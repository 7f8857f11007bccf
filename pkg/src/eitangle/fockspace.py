"""Truncated Fock-space states for one and two bosonic modes.

States are immutable; every operation returns a new object. Amplitudes are
dense complex arrays indexed by occupation number.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .exceptions import ContractError, DimensionError, DomainError, TruncationWarning

TAIL_TOL = 1e-12
NORMALIZED_TOL = 1e-8


def default_cutoff(alpha: complex) -> int:
    """Cutoff keeping the coherent-state tail below 1e-12 for |alpha| <= 4."""
    a = abs(alpha)
    return max(24, math.ceil(a * a + 8 * a + 10))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TruncatedMode:
    amplitudes: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise DimensionError("single-mode amplitudes must be a non-empty vector")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: TruncatedMode) -> complex:
        if other.cutoff != self.cutoff:
            raise DimensionError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalized(self) -> TruncatedMode:
        nrm = self.norm()
        if nrm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return TruncatedMode(self.amplitudes / nrm)

    def __add__(self, other: TruncatedMode) -> TruncatedMode:
        if not isinstance(other, TruncatedMode):
            return NotImplemented
        if other.cutoff != self.cutoff:
            raise DimensionError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")
        return TruncatedMode(self.amplitudes + other.amplitudes)

    def __sub__(self, other: TruncatedMode) -> TruncatedMode:
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> TruncatedMode:
        return TruncatedMode(complex(scalar) * self.amplitudes)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> TruncatedMode:
        return TruncatedMode(self.amplitudes / complex(scalar))

    def __neg__(self) -> TruncatedMode:
        return (-1.0) * self


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Pure state of (photon, atom); ``amplitudes[n, m]`` is the weight of |n, m>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 2 or 0 in amps.shape:
            raise DimensionError("two-mode amplitudes must be a non-empty matrix")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def photon_cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def atom_cutoff(self) -> int:
        return self.amplitudes.shape[1] - 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.amplitudes.shape

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def photon_distribution(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def atom_distribution(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    def __add__(self, other: TwoModeState) -> TwoModeState:
        if not isinstance(other, TwoModeState):
            return NotImplemented
        _check_shapes(self, other)
        return TwoModeState(self.amplitudes + other.amplitudes)

    def __sub__(self, other: TwoModeState) -> TwoModeState:
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> TwoModeState:
        return TwoModeState(complex(scalar) * self.amplitudes)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> TwoModeState:
        return TwoModeState(self.amplitudes / complex(scalar))

    def __neg__(self) -> TwoModeState:
        return (-1.0) * self


def _check_shapes(a: TwoModeState, b: TwoModeState) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def coherent_amplitudes(alpha: complex, cutoff: int, tail_tol: float = TAIL_TOL) -> TruncatedMode:
    """Truncated coherent state |alpha>.

    The amplitude recurrence c[n] = c[n-1] * alpha / sqrt(n) avoids forming
    n! explicitly. Nothing is renormalized; the lost probability is returned as
    ``tail_mass`` and a :class:`TruncationWarning` is issued above ``tail_tol``.
    """
    if cutoff < 0:
        raise DomainError("cutoff must be non-negative")
    alpha = complex(alpha)
    amps = np.empty(cutoff + 1, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if tail > tail_tol:
        warnings.warn(
            f"coherent state alpha={alpha} loses {tail:.3e} above cutoff {cutoff}",
            TruncationWarning,
            stacklevel=2,
        )
    return TruncatedMode(amps, tail_mass=tail)


def fock_mode(n: int, cutoff: int) -> TruncatedMode:
    if not 0 <= n <= cutoff:
        raise DomainError(f"occupation {n} outside [0, {cutoff}]")
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    amps[n] = 1.0
    return TruncatedMode(amps)


def basis_state(n: int, m: int, photon_cutoff: int, atom_cutoff: int) -> TwoModeState:
    return tensor(fock_mode(n, photon_cutoff), fock_mode(m, atom_cutoff))


def tensor(photon: TruncatedMode, atom: TruncatedMode) -> TwoModeState:
    return TwoModeState(np.outer(photon.amplitudes, atom.amplitudes))


def product_coherent(alpha: complex, beta: complex, photon_cutoff: int | None = None,
                     atom_cutoff: int | None = None) -> TwoModeState:
    """|alpha> (x) |beta> with the default cutoff policy unless overridden."""
    pc = default_cutoff(alpha) if photon_cutoff is None else photon_cutoff
    ac = default_cutoff(beta) if atom_cutoff is None else atom_cutoff
    return tensor(coherent_amplitudes(alpha, pc), coherent_amplitudes(beta, ac))


def inner_product(a: TwoModeState, b: TwoModeState) -> complex:
    _check_shapes(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def is_normalized(s: TwoModeState, tol: float = NORMALIZED_TOL) -> bool:
    return abs(s.norm() - 1.0) <= tol


def require_normalized(s: TwoModeState, what: str = "state", tol: float = NORMALIZED_TOL) -> None:
    if not is_normalized(s, tol):
        raise ContractError(f"{what} is not normalized (norm={s.norm():.12g})")


def fidelity_up_to_global_phase(a: TwoModeState, b: TwoModeState) -> float:
    """|<a|b>|^2 for normalized ``a`` and ``b``."""
    require_normalized(a, "first argument")
    require_normalized(b, "second argument")
    return abs(inner_product(a, b)) ** 2


def normalize(s: TwoModeState) -> TwoModeState:
    nrm = s.norm()
    if nrm == 0.0 or not np.isfinite(nrm):
        raise DomainError("cannot normalize a zero or non-finite state")
    return TwoModeState(s.amplitudes / nrm)


# -- CSV state dump ---------------------------------------------------------


def _fmt(x: float) -> str:
    # repr is the shortest round-trip form (<= 17 significant digits)
    return repr(float(x))


def write_state_csv(s: TwoModeState, fh: TextIO, threshold: float = 0.0) -> None:
    """Write ``# photon_cutoff=..,atom_cutoff=..`` then ``n,m,re,im`` rows.

    Rows with modulus <= ``threshold`` are skipped (all rows at the default 0,
    except exact zeros).
    """
    fh.write(f"# photon_cutoff={s.photon_cutoff},atom_cutoff={s.atom_cutoff}\n")
    fh.write("n,m,re,im\n")
    amps = s.amplitudes
    for n in range(amps.shape[0]):
        for m in range(amps.shape[1]):
            z = amps[n, m]
            if abs(z) > threshold:
                fh.write(f"{n},{m},{_fmt(z.real)},{_fmt(z.imag)}\n")


def read_state_csv(lines: Iterable[str]) -> TwoModeState:
    it = iter(lines)
    header = next(it).strip()
    if not header.startswith("#"):
        raise ValueError("state dump must start with a '# photon_cutoff=..,atom_cutoff=..' line")
    fields = dict(item.split("=") for item in header.lstrip("# ").split(","))
    pc, ac = int(fields["photon_cutoff"]), int(fields["atom_cutoff"])
    amps = np.zeros((pc + 1, ac + 1), dtype=np.complex128)
    for line in it:
        line = line.strip()
        if not line or line.startswith("n,"):
            continue
        n, m, re, im = line.split(",")
        amps[int(n), int(m)] = complex(float(re), float(im))
    return TwoModeState(amps)
