import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eitangle.effective_model import derive_params, energy, evolve, evolve_time, theta
from eitangle.exceptions import ContractError, DomainError
from eitangle.fockspace import TwoModeState, fidelity_up_to_global_phase, normalize, product_coherent


def random_state(rng, shape=(10, 12)):
    return normalize(TwoModeState(rng.normal(size=shape) + 1j * rng.normal(size=shape)))


def test_derive_params_arithmetic():
    p = derive_params(1, 10, 2, 1)
    assert p.K == 1.0
    assert p.omega1p == -0.5
    assert p.omega3p == -50.0
    assert p.gprime == -5.0
    assert p.in_eit_regime


def test_derive_params_odd_in_delta():
    a = derive_params(0.3 + 0.1j, 2.0, 1.7, 0.4)
    b = derive_params(0.3 + 0.1j, 2.0, -1.7, 0.4)
    assert b.K == -a.K
    assert b.omega1p == -a.omega1p


def test_derive_params_zero_probe():
    p = derive_params(0, 3, 2, 1)
    assert p.K == 0 and p.omega1p == 0 and p.gprime == 0


def test_derive_params_k_sign_and_identity():
    for lam, delta in [(1, 2), (-1, 2), (1, -2), (-0.3, -5)]:
        p = derive_params(0.7j, 1.0, delta, lam)
        assert math.copysign(1, p.K) == math.copysign(1, lam * delta)
        assert p.K == 2 * abs(p.g1) ** 2 / (p.lambda1 * p.delta)


def test_regime_flag():
    assert not derive_params(2, 1, 1, 1).in_eit_regime


@pytest.mark.parametrize("delta,lam", [(0, 1), (1, 0)])
def test_derive_params_domain(delta, lam):
    with pytest.raises(DomainError):
        derive_params(1, 1, delta, lam)


def test_theta_values():
    assert theta(7, 0, 3.2) == 0
    assert theta(1, 1, -1) == -3
    # (1 + 1) * 1 + 0 - 1
    assert theta(0, 1, 1) == 1


def test_energy_values():
    assert energy(5, 0, derive_params(1, 10, 2, 1)) == 0
    p = derive_params(1, 10, 2, 1)  # omega1p = -0.5, lambda1 = 1
    assert energy(0, 2, p) == 0


def test_spectrum_identity(rng):
    n = np.arange(20)[:, None]
    m = np.arange(20)[None, :]
    for _ in range(10):
        p = derive_params(complex(*rng.normal(size=2)), 5.0, rng.uniform(0.5, 4) * rng.choice([-1, 1]),
                          rng.uniform(0.2, 2) * rng.choice([-1, 1]))
        t = rng.uniform(0, 3)
        lhs = energy(n, m, p) * t
        rhs = -theta(n, m, p.K) * p.lambda1 * t
        assert np.max(np.abs(lhs - rhs)) < 1e-9 * max(1.0, np.max(np.abs(lhs)))


def test_both_sign_conventions_agree(rng):
    p = derive_params(0.4, 1.0, 1.3, 0.7)
    s = random_state(rng)
    t = 2.3
    a = evolve(s, p.lambda1 * t, p.K).amplitudes
    b = evolve_time(s, t, p).amplitudes
    assert np.max(np.abs(a - b)) < 1e-12


def test_evolve_identity_at_zero(rng):
    s = random_state(rng)
    assert np.array_equal(evolve(s, 0.0, -1.0).amplitudes, s.amplitudes)


@pytest.mark.parametrize("K", [-2, -1, 1, 2, 3])
def test_period_two_pi_for_integer_k(K):
    s = normalize(product_coherent(2, 2))
    assert fidelity_up_to_global_phase(evolve(s, 2 * np.pi, K), s) >= 1 - 1e-12
    assert np.max(np.abs(evolve(s, 2 * np.pi, K).amplitudes - s.amplitudes)) < 1e-10


def test_evolve_requires_normalized(rng):
    with pytest.raises(ContractError):
        evolve(TwoModeState(np.ones((3, 3))), 0.1, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-20, 20), st.floats(-3, 3))
def test_phase_only_and_marginals(seed, tau, K):
    rng = np.random.default_rng(seed)
    s = random_state(rng, (7, 9))
    e = evolve(s, tau, K)
    assert np.max(np.abs(np.abs(e.amplitudes) - np.abs(s.amplitudes))) < 1e-14
    assert abs(e.norm() - s.norm()) < 1e-13
    assert np.max(np.abs(e.photon_distribution() - s.photon_distribution())) < 1e-14
    assert np.max(np.abs(e.atom_distribution() - s.atom_distribution())) < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.floats(-5, 5), st.floats(-3, 3))
def test_group_property(seed, t1, t2, K):
    rng = np.random.default_rng(seed)
    s = random_state(rng, (6, 8))
    a = evolve(evolve(s, t1, K), t2, K).amplitudes
    b = evolve(s, t1 + t2, K).amplitudes
    assert np.max(np.abs(a - b)) < 1e-12
