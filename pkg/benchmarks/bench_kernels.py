"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Compilation happens once before timing. Reported numbers are the best of
``--repeat`` runs, in milliseconds.
"""
import argparse
import timeit

import numpy as np

from eitangle import _accel, kernels
from eitangle.full_model import Cutoffs, FullBasis


def cases():
    rng = np.random.default_rng(0)
    amps = rng.normal(size=(101, 101)) + 1j * rng.normal(size=(101, 101))
    yield "phase_evolve 101x101", (amps, 0.7, -1), kernels.phase_evolve_jit, kernels.phase_evolve_np

    yield "gauss_coefficients N=64", (5, 64, -1), kernels.gauss_coefficients_jit, kernels.gauss_coefficients_np

    basis = FullBasis(Cutoffs(40, 40, 12, 12))
    sector = max(basis.sectors.values(), key=lambda s: s.dim)
    args = (sector.basis, sector.lookup, sector.strides, sector.cut2, 0.1 + 0j, 1.0 + 0j, 50.0, 50.0,
            np.array([1.0, 0.2, 0.1]), np.zeros((3, 3)))
    yield f"sector_hamiltonian dim={sector.dim}", args, kernels.sector_hamiltonian_coo_jit, kernels.sector_hamiltonian_coo_np


def best_ms(fn, args, repeat):
    t = timeit.Timer(lambda: fn(*args))
    number, _ = t.autorange()
    return min(t.repeat(repeat=repeat, number=number)) / number * 1e3


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba not installed; nothing to compare")
        return
    print(f"{'kernel':<34}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, args, jit_fn, np_fn in cases():
        jit_fn(*args)  # compile
        tj = best_ms(jit_fn, args, opts.repeat)
        tn = best_ms(np_fn, args, opts.repeat)
        print(f"{name:<34}{tj:>12.3f}{tn:>12.3f}{tn / tj:>10.1f}x")


if __name__ == "__main__":
    main()
