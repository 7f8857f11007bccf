"""Four-mode model: probe photons a and atoms in internal states 1, 2, 3.

H = (D1 - D2) n3 + D1 n2 - [g1 a b2^dag b1 + g2 b2^dag b3 + h.c.]
    + sum_i lam_i b_i^dag^2 b_i^2 + sum_{i != j} lam_ij n_i n_j

The sum over i != j runs over ordered pairs, so each unordered pair counts
twice. Both N_atoms = n1 + n2 + n3 and N_exc = n_a + n2 + n3 commute with H;
every (N_atoms, N_exc) sector is evolved on its own.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp

from . import kernels
from .effective_model import derive_params, evolve_time
from .exceptions import ContractError, RegimeError, ResourceError
from .fockspace import TAIL_TOL, NORMALIZED_TOL, TwoModeState, coherent_amplitudes, default_cutoff, normalize
from .krylov import expm_multiply_hermitian

DENSE_LIMIT = 4000
HARD_LIMIT = 2_000_000
HERMITIAN_TOL = 1e-13


@dataclass(frozen=True)
class FullModelParams:
    g1: complex
    g2: complex
    delta1: float
    delta2: float
    lambdas: tuple[float, float, float] = (0.0, 0.0, 0.0)
    # (lambda_12, lambda_13, lambda_23)
    lambda_cross: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "g1", complex(self.g1))
        object.__setattr__(self, "g2", complex(self.g2))
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        object.__setattr__(self, "lambda_cross", tuple(float(x) for x in self.lambda_cross))
        if len(self.lambdas) != 3 or len(self.lambda_cross) != 3:
            raise ContractError("lambdas and lambda_cross need three entries each")

    @classmethod
    def eit(cls, g1, g2, delta, lambda1, **kw) -> FullModelParams:
        """Two-photon resonant parameters with only lambda1 nonzero by default."""
        lambdas = kw.pop("lambdas", (lambda1, 0.0, 0.0))
        return cls(g1, g2, delta, delta, lambdas=lambdas, **kw)

    @property
    def lambda1(self) -> float:
        return self.lambdas[0]

    @property
    def ideal_eit(self) -> bool:
        return self.delta1 == self.delta2

    def cross_matrix(self) -> np.ndarray:
        l12, l13, l23 = self.lambda_cross
        return np.array([[0.0, l12, l13], [l12, 0.0, l23], [l13, l23, 0.0]])

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("g1", "g2"):
            z = d[k]
            d[k] = [z.real, z.imag]
        d["lambdas"] = list(self.lambdas)
        d["lambda_cross"] = list(self.lambda_cross)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> FullModelParams:
        def cplx(v):
            if isinstance(v, (list, tuple)):
                return complex(v[0], v[1])
            return complex(v)

        delta = d.get("delta")
        return cls(
            g1=cplx(d["g1"]),
            g2=cplx(d["g2"]),
            delta1=float(d.get("delta1", delta)),
            delta2=float(d.get("delta2", delta)),
            lambdas=tuple(d.get("lambdas", (d.get("lambda1", 0.0), 0.0, 0.0))),
            lambda_cross=tuple(d.get("lambda_cross", (0.0, 0.0, 0.0))),
        )


@dataclass(frozen=True)
class Cutoffs:
    photon: int
    b1: int
    b2: int = 2
    b3: int = 2

    def as_array(self) -> np.ndarray:
        return np.array([self.photon, self.b1, self.b2, self.b3], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class ChargeSector:
    n_atoms: int
    n_exc: int
    basis: np.ndarray  # (dim, 4) rows (n_a, n1, n2, n3), lexicographic
    lookup: np.ndarray = field(repr=False)
    strides: np.ndarray = field(repr=False)
    cut2: int = 2

    @property
    def key(self) -> tuple[int, int]:
        return (self.n_atoms, self.n_exc)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


class FullBasis:
    """All occupation tuples within the cutoffs, grouped by charge."""

    def __init__(self, cutoffs: Cutoffs):
        self.cutoffs = cutoffs
        c = cutoffs.as_array()
        radix = c + 1
        self.strides = np.array(
            [radix[1] * radix[2] * radix[3], radix[2] * radix[3], radix[3], 1], dtype=np.int64
        )
        grids = np.meshgrid(*(np.arange(r) for r in radix), indexing="ij")
        tuples = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)  # lexicographic
        n_atoms = tuples[:, 1] + tuples[:, 2] + tuples[:, 3]
        n_exc = tuples[:, 0] + tuples[:, 2] + tuples[:, 3]
        self.lookup = np.full(tuples.shape[0], -1, dtype=np.int64)
        self.sectors: dict[tuple[int, int], ChargeSector] = {}
        order = np.lexsort((n_exc, n_atoms))
        keys = np.stack([n_atoms[order], n_exc[order]], axis=1)
        splits = np.flatnonzero(np.any(np.diff(keys, axis=0) != 0, axis=1)) + 1
        for chunk in np.split(order, splits):
            chunk = np.sort(chunk)  # codes are lexicographic in the tuple
            basis = tuples[chunk]
            self.lookup[chunk] = np.arange(chunk.size)
            key = (int(n_atoms[chunk[0]]), int(n_exc[chunk[0]]))
            self.sectors[key] = ChargeSector(key[0], key[1], basis, self.lookup, self.strides, int(c[2]))

    def sector(self, n_atoms: int, n_exc: int) -> ChargeSector:
        return self.sectors[(n_atoms, n_exc)]

    def code(self, occ) -> int:
        return int(np.dot(np.asarray(occ, dtype=np.int64), self.strides))

    def locate(self, occ) -> tuple[tuple[int, int], int]:
        na, n1, n2, n3 = (int(x) for x in occ)
        return (n1 + n2 + n3, na + n2 + n3), int(self.lookup[self.code(occ)])


def build_sector_hamiltonian(p: FullModelParams, sector: ChargeSector, sparse: bool = False):
    if sector.dim == 0:
        raise ContractError("empty sector")
    rows, cols, vals = kernels.sector_hamiltonian_coo(
        sector.basis, sector.lookup, sector.strides, sector.cut2,
        p.g1, p.g2, float(p.delta1), float(p.delta2),
        np.asarray(p.lambdas, dtype=np.float64), p.cross_matrix(),
    )
    H = sp.coo_matrix((vals, (rows, cols)), shape=(sector.dim, sector.dim)).tocsr()
    H.sum_duplicates()
    if sparse:
        return H
    H = H.toarray()
    if np.max(np.abs(H - H.conj().T), initial=0.0) >= HERMITIAN_TOL:
        raise AssertionError("sector Hamiltonian is not Hermitian")
    return H


@dataclass(eq=False)
class FourModeState:
    basis: FullBasis
    vectors: dict[tuple[int, int], np.ndarray]

    def norm(self) -> float:
        return math.sqrt(sum(float(np.vdot(v, v).real) for v in self.vectors.values()))

    def sector_weights(self) -> dict[tuple[int, int], float]:
        return {k: float(np.vdot(v, v).real) for k, v in self.vectors.items()}

    def expectations(self) -> np.ndarray:
        """<n_a>, <n_1>, <n_2>, <n_3>."""
        out = np.zeros(4)
        for key, v in self.vectors.items():
            out += np.abs(v) ** 2 @ self.basis.sectors[key].basis
        return out

    def charges(self) -> tuple[float, float]:
        na, n1, n2, n3 = self.expectations()
        return n1 + n2 + n3, na + n2 + n3

    def ground_projection(self) -> tuple[TwoModeState, float]:
        """(n_a, n1) amplitudes with n2 = n3 = 0, plus the squared norm kept."""
        c = self.basis.cutoffs
        amps = np.zeros((c.photon + 1, c.b1 + 1), dtype=np.complex128)
        for key, v in self.vectors.items():
            occ = self.basis.sectors[key].basis
            sel = (occ[:, 2] == 0) & (occ[:, 3] == 0)
            amps[occ[sel, 0], occ[sel, 1]] = v[sel]
        kept = float(np.sum(np.abs(amps) ** 2))
        return TwoModeState(amps), kept


def initial_product_state(alpha: complex, beta: complex, cutoffs: Cutoffs | None = None,
                          tail_tol: float = TAIL_TOL) -> FourModeState:
    """Photon |alpha>, b1 |beta>, b2 and b3 empty."""
    if cutoffs is None:
        cutoffs = Cutoffs(default_cutoff(alpha), default_cutoff(beta))
    basis = FullBasis(cutoffs)
    ca = coherent_amplitudes(alpha, cutoffs.photon, tail_tol).amplitudes
    cb = coherent_amplitudes(beta, cutoffs.b1, tail_tol).amplitudes
    vectors = {}
    for n in range(cutoffs.photon + 1):
        for m in range(cutoffs.b1 + 1):
            amp = ca[n] * cb[m]
            if amp == 0:
                continue
            key, row = basis.locate((n, m, 0, 0))
            if key not in vectors:
                vectors[key] = np.zeros(basis.sectors[key].dim, dtype=np.complex128)
            vectors[key][row] = amp
    return FourModeState(basis, vectors)


class Propagator:
    """Caches per-sector eigendecompositions so repeated times are cheap."""

    def __init__(self, p: FullModelParams, basis: FullBasis, dense_limit: int = DENSE_LIMIT,
                 hard_limit: int = HARD_LIMIT, krylov_tol: float = 1e-10):
        self.p = p
        self.basis = basis
        self.dense_limit = dense_limit
        self.hard_limit = hard_limit
        self.krylov_tol = krylov_tol
        self._eig: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
        self._sparse: dict[tuple[int, int], sp.csr_matrix] = {}

    def eig(self, key):
        if key not in self._eig:
            H = build_sector_hamiltonian(self.p, self.basis.sectors[key])
            self._eig[key] = np.linalg.eigh(H)
        return self._eig[key]

    def evolve_sector(self, key, v: np.ndarray, t: float) -> np.ndarray:
        sector = self.basis.sectors[key]
        if sector.dim > self.hard_limit:
            raise ResourceError(f"sector {key} has dimension {sector.dim} > {self.hard_limit}")
        if sector.dim <= self.dense_limit:
            w, U = self.eig(key)
            return U @ (np.exp(-1j * w * t) * (U.conj().T @ v))
        if key not in self._sparse:
            self._sparse[key] = build_sector_hamiltonian(self.p, sector, sparse=True)
        return expm_multiply_hermitian(self._sparse[key], v, t, tol=self.krylov_tol)

    def evolve(self, state: FourModeState, t: float, jobs: int = 1) -> FourModeState:
        keys = sorted(state.vectors)
        if jobs > 1 and len(keys) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                out = list(pool.map(lambda k: self.evolve_sector(k, state.vectors[k], t), keys))
        else:
            out = [self.evolve_sector(k, state.vectors[k], t) for k in keys]
        return FourModeState(state.basis, dict(zip(keys, out)))


def evolve_full(state: FourModeState, p: FullModelParams, t: float, dense_limit: int = DENSE_LIMIT,
                hard_limit: int = HARD_LIMIT, jobs: int = 1) -> FourModeState:
    if abs(state.norm() - 1.0) > 1e-8:
        raise ContractError(f"state is not normalized (norm={state.norm():.12g})")
    return Propagator(p, state.basis, dense_limit, hard_limit).evolve(state, t, jobs=jobs)


# -- validation of the effective two-mode model -----------------------------


@dataclass
class ValidationReport:
    times: np.ndarray
    fidelity: np.ndarray
    leak_n2: np.ndarray
    leak_n3: np.ndarray
    norm: np.ndarray
    n_atoms: np.ndarray
    n_exc: np.ndarray
    fitted_linear: float
    fitted_cross_kerr: float
    model_linear: float
    model_cross_kerr: float
    K: float

    @property
    def infidelity_final(self) -> float:
        return float(1.0 - self.fidelity[-1])

    @property
    def max_leakage(self) -> float:
        return float(np.max(self.leak_n2 + self.leak_n3))

    @property
    def conservation_drift(self) -> dict[str, float]:
        return {
            "norm": float(np.max(np.abs(self.norm - self.norm[0]))),
            "n_atoms": float(np.max(np.abs(self.n_atoms - self.n_atoms[0]))),
            "n_exc": float(np.max(np.abs(self.n_exc - self.n_exc[0]))),
        }

    def summary(self) -> dict:
        return {
            "K": self.K,
            "min_fidelity": float(np.min(self.fidelity)),
            "final_fidelity": float(self.fidelity[-1]),
            "max_leakage": self.max_leakage,
            "fitted_linear": self.fitted_linear,
            "fitted_cross_kerr": self.fitted_cross_kerr,
            "model_linear": self.model_linear,
            "model_cross_kerr": self.model_cross_kerr,
            "drift_norm": self.conservation_drift["norm"],
            "drift_n_atoms": self.conservation_drift["n_atoms"],
            "drift_n_exc": self.conservation_drift["n_exc"],
        }


def fit_dressed_energies(prop: Propagator, weights: np.ndarray, lambda1: float,
                         min_weight: float = 1e-8) -> tuple[float, float]:
    """Fit E(n, m) - lambda1 m (m - 1) = a m + c n m over dressed levels.

    E(n, m) is the eigenvalue of the full sector whose eigenvector overlaps
    most with |n, m, 0, 0>; ``weights[n, m]`` (the initial populations) weight
    the least-squares fit. Returns (a, c), to set against (2 w1', 4 w1').
    """
    rows, rhs, wts = [], [], []
    for n in range(weights.shape[0]):
        for m in range(1, weights.shape[1]):
            if weights[n, m] < min_weight:
                continue
            key, row = prop.basis.locate((n, m, 0, 0))
            evals, U = prop.eig(key)
            k = int(np.argmax(np.abs(U[row]) ** 2))
            rows.append((m, n * m))
            rhs.append(evals[k] - lambda1 * m * (m - 1))
            wts.append(math.sqrt(weights[n, m]))
    if not rows:
        return 0.0, 0.0
    A = np.array(rows, dtype=np.float64) * np.array(wts)[:, None]
    y = np.array(rhs) * np.array(wts)
    (a, c), *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(a), float(c)


def adiabatic_validation(alpha: complex, beta: complex, p: FullModelParams, t_max: float, samples: int,
                         cutoffs: Cutoffs | None = None, allow_off_resonance: bool = False,
                         jobs: int = 1) -> ValidationReport:
    """Compare full evolution, projected onto n2 = n3 = 0, with the effective model.

    Sampled at ``samples`` equally spaced times in [0, t_max]. The projected
    state is renormalized before the fidelity; the discarded weight shows up
    as leakage.
    """
    if not p.ideal_eit and not allow_off_resonance:
        raise RegimeError(f"adiabatic elimination needs delta1 == delta2, got {p.delta1} and {p.delta2}")
    if p.g2 == 0 or abs(p.g1 / p.g2) ** 2 >= 1.0:
        raise RegimeError("adiabatic elimination needs |g1/g2|^2 < 1")
    if p.lambda1 == 0 or p.delta1 == 0:
        raise RegimeError("lambda1 and the detuning must be nonzero")
    if samples < 1:
        raise ContractError("samples must be positive")
    if cutoffs is None:
        cutoffs = Cutoffs(default_cutoff(alpha), default_cutoff(beta))
    eff = derive_params(p.g1, p.g2, p.delta1, p.lambda1)

    # the explicit renormalization below makes a looser tail tolerance safe
    psi0 = initial_product_state(alpha, beta, cutoffs, tail_tol=NORMALIZED_TOL)
    nrm0 = psi0.norm()
    psi0 = FourModeState(psi0.basis, {k: v / nrm0 for k, v in psi0.vectors.items()})
    ground0, _ = psi0.ground_projection()
    prop = Propagator(p, psi0.basis)

    times = np.linspace(0.0, t_max, samples) if samples > 1 else np.array([t_max], dtype=float)
    fid, l2, l3, norms, na, ne = ([] for _ in range(6))
    for t in times:
        psi = prop.evolve(psi0, float(t), jobs=jobs)
        _, _, n2, n3 = psi.expectations()
        a_tot, e_tot = psi.charges()
        proj, kept = psi.ground_projection()
        target = evolve_time(ground0, float(t), eff)
        if kept > 0.0:
            fid.append(abs(np.vdot(target.amplitudes, normalize(proj).amplitudes)) ** 2)
        else:
            fid.append(0.0)
        l2.append(n2)
        l3.append(n3)
        norms.append(psi.norm())
        na.append(a_tot)
        ne.append(e_tot)

    weights = np.abs(ground0.amplitudes) ** 2
    a_fit, c_fit = fit_dressed_energies(prop, weights, p.lambda1)
    return ValidationReport(
        times=times,
        fidelity=np.array(fid),
        leak_n2=np.array(l2),
        leak_n3=np.array(l3),
        norm=np.array(norms),
        n_atoms=np.array(na),
        n_exc=np.array(ne),
        fitted_linear=a_fit,
        fitted_cross_kerr=c_fit,
        model_linear=2 * eff.omega1p,
        model_cross_kerr=4 * eff.omega1p,
        K=eff.K,
    )
