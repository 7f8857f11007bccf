import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln
from scipy.stats import poisson

from eitangle.exceptions import ContractError, DimensionError, DomainError, TruncationWarning
from eitangle.fockspace import (
    TwoModeState,
    basis_state,
    coherent_amplitudes,
    default_cutoff,
    fidelity_up_to_global_phase,
    inner_product,
    normalize,
    product_coherent,
    read_state_csv,
    tensor,
    write_state_csv,
)


def coherent_overlap(a, b):
    return np.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + np.conj(a) * b)


def random_state(rng, shape=(6, 5)):
    return TwoModeState(rng.normal(size=shape) + 1j * rng.normal(size=shape))


def test_vacuum():
    amps = coherent_amplitudes(0, 5).amplitudes
    assert np.array_equal(amps, [1, 0, 0, 0, 0, 0])


def test_alpha_one_ground_amplitude():
    assert coherent_amplitudes(1, 0, tail_tol=1.0).amplitudes[0] == pytest.approx(math.exp(-0.5), abs=1e-15)
    assert coherent_amplitudes(1, 7, tail_tol=1.0).amplitudes[0] == pytest.approx(0.60653, abs=1e-5)


def test_alpha_two_tail_matches_poisson():
    mode = coherent_amplitudes(2, 40)
    lost = 1 - np.sum(np.abs(mode.amplitudes) ** 2)
    assert lost < 1e-12
    assert abs(lost - poisson.sf(40, 4.0)) < 1e-14
    assert mode.tail_mass == pytest.approx(max(0.0, lost), abs=1e-15)


def test_amplitudes_match_log_factorial_formula():
    alpha = 1.3 - 2.1j
    n = np.arange(61)
    logmag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    expected = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
    got = coherent_amplitudes(alpha, 60).amplitudes
    assert np.max(np.abs(got - expected)) < 1e-14


def test_large_alpha_no_overflow():
    mode = coherent_amplitudes(25.0, 1200)
    assert np.all(np.isfinite(mode.amplitudes))
    assert abs(mode.norm() - 1) < 1e-12


def test_truncation_is_reported():
    with pytest.warns(TruncationWarning):
        mode = coherent_amplitudes(3.0, 5)
    assert mode.tail_mass == pytest.approx(poisson.sf(5, 9.0), rel=1e-10)


def test_negative_cutoff_rejected():
    with pytest.raises(DomainError):
        coherent_amplitudes(1.0, -1)


@pytest.mark.parametrize("alpha", [0, 1, 2.5, 4, 3 + 2.6j])
def test_default_cutoff_policy(alpha):
    cut = default_cutoff(alpha)
    assert cut >= 24
    if abs(alpha) <= 4:
        assert coherent_amplitudes(alpha, cut).tail_mass < 1e-12


def test_tensor_vacuum():
    s = tensor(coherent_amplitudes(0, 3), coherent_amplitudes(0, 4))
    expected = np.zeros((4, 5))
    expected[0, 0] = 1
    assert np.array_equal(s.amplitudes, expected)


def test_tensor_norm_product(rng):
    from eitangle.fockspace import TruncatedMode

    a = TruncatedMode(rng.normal(size=7) + 1j * rng.normal(size=7))
    b = TruncatedMode(rng.normal(size=4))
    assert tensor(a, b).norm() == pytest.approx(a.norm() * b.norm(), rel=1e-14)


def test_tensor_matches_time_zero_formula():
    alpha, beta = 0.7 + 0.2j, -1.1 + 0.5j
    s = product_coherent(alpha, beta, 20, 22)
    n = np.arange(21)[:, None]
    m = np.arange(23)[None, :]
    pref = math.exp(-0.5 * (abs(alpha) ** 2 + abs(beta) ** 2))
    log_fact = 0.5 * (gammaln(n + 1) + gammaln(m + 1))
    expected = pref * alpha ** n * beta ** m / np.exp(log_fact)
    assert np.max(np.abs(s.amplitudes - expected)) < 1e-15


def test_inner_product_basics():
    s = product_coherent(1.2, -0.4j)
    assert inner_product(s, s) == pytest.approx(1.0, abs=1e-12)
    a = 1.7
    plus = product_coherent(a, 0)
    minus = product_coherent(-a, 0)
    assert inner_product(plus, minus) == pytest.approx(math.exp(-2 * a * a), abs=1e-14)
    for n, m, n2, m2 in [(0, 0, 0, 0), (1, 2, 1, 2), (1, 2, 2, 1), (3, 0, 0, 3)]:
        val = inner_product(basis_state(n, m, 3, 3), basis_state(n2, m2, 3, 3))
        assert val == (1.0 if (n, m) == (n2, m2) else 0.0)


def test_inner_product_shape_mismatch():
    with pytest.raises(DimensionError):
        inner_product(basis_state(0, 0, 2, 2), basis_state(0, 0, 3, 2))


def test_inner_product_conjugate_symmetry(rng):
    a, b = random_state(rng), random_state(rng)
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-13)


grid = st.floats(min_value=-3 / math.sqrt(2), max_value=3 / math.sqrt(2), allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(grid, grid, grid, grid)
def test_coherent_overlap_law(ar, ai, br, bi):
    a, b = complex(ar, ai), complex(br, bi)
    cut = 60
    ov = coherent_amplitudes(a, cut).inner(coherent_amplitudes(b, cut))
    assert abs(ov - coherent_overlap(a, b)) < 1e-12
    assert abs(abs(ov) - math.exp(-0.5 * abs(a - b) ** 2)) < 1e-12


def test_fidelity_cases(rng):
    s = normalize(random_state(rng))
    assert fidelity_up_to_global_phase(s, s) == pytest.approx(1.0, abs=1e-14)
    assert fidelity_up_to_global_phase(s, np.exp(1j * np.pi / 3) * s) == pytest.approx(1.0, abs=1e-14)
    assert fidelity_up_to_global_phase(basis_state(0, 0, 2, 2), basis_state(1, 0, 2, 2)) == 0.0


def test_fidelity_rejects_unnormalized(rng):
    s = normalize(random_state(rng))
    with pytest.raises(ContractError):
        fidelity_up_to_global_phase(s, 1.01 * s)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_fidelity_range(seed):
    rng = np.random.default_rng(seed)
    a, b = normalize(random_state(rng)), normalize(random_state(rng))
    f = fidelity_up_to_global_phase(a, b)
    assert 0.0 <= f <= 1 + 1e-12


def test_normalize():
    s = normalize(2 * basis_state(0, 0, 3, 3))
    assert np.array_equal(s.amplitudes, basis_state(0, 0, 3, 3).amplitudes)
    with pytest.raises(DomainError):
        normalize(0 * basis_state(0, 0, 3, 3))


def test_normalize_random(rng):
    for _ in range(20):
        assert abs(normalize(random_state(rng, (8, 3))).norm() - 1) < 1e-12


def test_normalize_two_state_branch_gram():
    # the two branches of the two-state entangled state, Gram matrix summed numerically
    from eitangle.catalog import cat_norms, cat_sum, two_state_entangled

    alpha, beta = 0.8, 0.6
    pc = ac = 30
    bp, bm = cat_norms(beta)
    u1 = 0.5 * tensor(coherent_amplitudes(alpha, pc), cat_sum(beta, 1, ac))
    u2 = -0.5j * tensor(coherent_amplitudes(-alpha, pc), cat_sum(beta, -1, ac))
    gram = np.array([[inner_product(x, y) for y in (u1, u2)] for x in (u1, u2)])
    norm_sq = float(np.sum(gram).real)
    state = two_state_entangled(alpha, beta, (pc, ac)).state
    assert state.norm() ** 2 == pytest.approx(norm_sq, abs=1e-13)
    assert norm_sq == pytest.approx(0.25 * (bp ** 2 + bm ** 2), abs=1e-12)
    assert abs(normalize(state).norm() - 1) < 1e-12


def test_states_are_immutable():
    s = basis_state(0, 0, 2, 2)
    with pytest.raises(ValueError):
        s.amplitudes[0, 0] = 2


def test_csv_round_trip(rng):
    s = normalize(random_state(rng, (4, 3)))
    buf = io.StringIO()
    write_state_csv(s, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "# photon_cutoff=3,atom_cutoff=2"
    assert text.splitlines()[1] == "n,m,re,im"
    back = read_state_csv(io.StringIO(text))
    assert np.array_equal(back.amplitudes, s.amplitudes)
