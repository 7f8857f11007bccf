import math

import numpy as np
import pytest

from eitangle.catalog import (
    cat_norms,
    even_odd_cat,
    three_state_entangled,
    two_state_entangled,
    yurke_stoler_cat,
)
from eitangle.entanglement import (
    TwoTermBipartite,
    closed_form_concurrence,
    entanglement_entropy,
    schmidt_concurrence,
    schmidt_spectrum,
    two_term_concurrence,
)
from eitangle.exceptions import ContractError, DegeneracyError
from eitangle.fockspace import (
    TruncatedMode,
    TwoModeState,
    coherent_amplitudes,
    default_cutoff,
    normalize,
    product_coherent,
)


def unit(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return TruncatedMode(v / np.linalg.norm(v))


def bell():
    amps = np.zeros((2, 2))
    amps[0, 0] = amps[1, 1] = 1 / math.sqrt(2)
    return TwoModeState(amps)


def decomposition_27(alpha, beta):
    pc, ac = default_cutoff(alpha), default_cutoff(beta)
    bp, bm = cat_norms(beta)
    return TwoTermBipartite(
        bp / 2, -0.5j * bm,
        coherent_amplitudes(alpha, pc), coherent_amplitudes(-alpha, pc),
        even_odd_cat(beta, "even", ac), even_odd_cat(beta, "odd", ac),
    )


def decomposition_27_alt(alpha, beta):
    pc, ac = default_cutoff(alpha), default_cutoff(beta)
    r = 1 / math.sqrt(2)
    return TwoTermBipartite(
        r, r,
        yurke_stoler_cat(alpha, "minus", pc), yurke_stoler_cat(alpha, "plus", pc),
        coherent_amplitudes(beta, ac), coherent_amplitudes(-beta, ac),
    )


def decomposition_ys(alpha, beta, variant):
    pc, ac = default_cutoff(alpha), default_cutoff(beta)
    r = 1 / math.sqrt(2)
    a_p, a_m = coherent_amplitudes(alpha, pc), coherent_amplitudes(-alpha, pc)
    b_p, b_m = coherent_amplitudes(beta, ac), coherent_amplitudes(-beta, ac)
    if variant == "aligned":
        return TwoTermBipartite(r, 1j * r, a_p, a_m, b_p, b_m)
    return TwoTermBipartite(r, -1j * r, a_p, a_m, b_m, b_p)


def test_bell_case(rng):
    e0, e1 = TruncatedMode([1, 0]), TruncatedMode([0, 1])
    res = two_term_concurrence(TwoTermBipartite(1 / math.sqrt(2), 1 / math.sqrt(2), e0, e1, e0, e1))
    assert res.concurrence == pytest.approx(1.0, abs=1e-15)
    assert res.lambda_plus == pytest.approx(0.5) and res.lambda_minus == pytest.approx(0.5)


def test_product_case(rng):
    res = two_term_concurrence(TwoTermBipartite(1, 0, unit(rng, 4), unit(rng, 4), unit(rng, 3), unit(rng, 3)))
    assert res.concurrence == 0.0


@pytest.mark.parametrize("alpha,beta", [(0.25, 0.25), (1, 1), (2, 0.5), (0.7j, 1.3)])
def test_two_state_concurrence_closed_form(alpha, beta):
    d = decomposition_27(alpha, beta)
    res = two_term_concurrence(d)
    assert abs(res.p2) < 1e-12
    assert res.norm_sq == pytest.approx(1.0, abs=1e-12)
    assert res.concurrence == pytest.approx(closed_form_concurrence(alpha, beta), abs=1e-10)
    alt = two_term_concurrence(decomposition_27_alt(alpha, beta))
    assert alt.concurrence == pytest.approx(res.concurrence, abs=1e-10)


def test_result_invariants(rng):
    for _ in range(20):
        s = TwoTermBipartite(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)),
                             unit(rng, 5), unit(rng, 5), unit(rng, 4), unit(rng, 4))
        r = two_term_concurrence(s)
        assert abs(r.lambda_plus + r.lambda_minus - 1) < 1e-12
        assert abs(r.concurrence - 2 * math.sqrt(r.lambda_plus * r.lambda_minus)) < 1e-12
        assert 0 <= r.concurrence <= 1


def test_oracle_agreement_random(rng):
    for _ in range(50):
        s = TwoTermBipartite(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)),
                             unit(rng, 6), unit(rng, 6), unit(rng, 5), unit(rng, 5))
        state = normalize(s.to_state())
        spec = schmidt_spectrum(state)
        assert np.all(spec[2:] < 1e-12)
        assert abs(schmidt_concurrence(spec) - two_term_concurrence(s).concurrence) < 1e-8


def test_closed_form_values():
    assert closed_form_concurrence(0, 1) == 0.0
    assert closed_form_concurrence(1, 0) == 0.0
    assert closed_form_concurrence(1, 1) == pytest.approx(1 - math.exp(-4), abs=1e-15)
    assert closed_form_concurrence(1, 1) == pytest.approx(0.98168, abs=1e-5)


def test_closed_form_monotone():
    xs = np.linspace(0.05, 3, 60)
    for fixed in (0.1, 0.5, 1.0):
        a = [closed_form_concurrence(x, fixed) for x in xs]
        b = [closed_form_concurrence(fixed, x) for x in xs]
        assert np.all(np.diff(a) > 0) and np.all(np.diff(b) > 0)
    big = [closed_form_concurrence(x, x) for x in (1, 2, 3, 4)]
    assert np.all(np.diff(big) >= 0) and big[-1] == pytest.approx(1.0, abs=1e-12)


def test_ys_concurrences_equal():
    for a, b in [(0.5, 0.5), (1.0, 0.3), (1.7, 2.0)]:
        c31 = two_term_concurrence(decomposition_ys(a, b, "aligned")).concurrence
        c33 = two_term_concurrence(decomposition_ys(a, b, "crossed")).concurrence
        assert abs(c31 - c33) < 1e-10
        assert abs(c31 - closed_form_concurrence(a, b)) < 1e-10


def test_dependent_components_raise(rng):
    v = unit(rng, 4)
    with pytest.raises(DegeneracyError):
        two_term_concurrence(TwoTermBipartite(0.6, 0.8, v, v, unit(rng, 3), unit(rng, 3)))


def test_near_degenerate_falls_back(rng):
    v = unit(rng, 4)
    w = (v + 2e-4 * unit(rng, 4)).normalized()
    s = TwoTermBipartite(0.6, 0.8, v, w, unit(rng, 3), unit(rng, 3))
    with pytest.warns(RuntimeWarning):
        res = two_term_concurrence(s)
    oracle = schmidt_concurrence(schmidt_spectrum(normalize(s.to_state())))
    assert res.concurrence == pytest.approx(oracle, abs=1e-12)


def test_component_normalization_enforced(rng):
    with pytest.raises(ContractError):
        TwoTermBipartite(1, 1, TruncatedMode([1, 1]), unit(rng, 2), unit(rng, 2), unit(rng, 2))


def test_schmidt_product_and_bell():
    spec = schmidt_spectrum(normalize(product_coherent(1.1, -0.5j)))
    assert spec[0] == pytest.approx(1.0, abs=1e-12) and np.all(spec[1:] < 1e-12)
    assert np.allclose(schmidt_spectrum(bell()), [0.5, 0.5], atol=1e-15)


def test_schmidt_rejects_unnormalized():
    with pytest.raises(ContractError):
        schmidt_spectrum(TwoModeState(np.ones((2, 2))))


def test_schmidt_of_two_state_matches_closed_form():
    s = normalize(two_state_entangled(1.2, 0.9).state)
    spec = schmidt_spectrum(s)
    assert np.all(spec[2:] < 1e-12)
    assert schmidt_concurrence(spec) == pytest.approx(closed_form_concurrence(1.2, 0.9), abs=1e-8)


def test_either_mode_gives_same_spectrum(rng):
    s = normalize(TwoModeState(rng.normal(size=(7, 4)) + 1j * rng.normal(size=(7, 4))))
    a = schmidt_spectrum(s, keep="photon")
    b = schmidt_spectrum(s, keep="atom")
    assert np.max(np.abs(a[:4] - b)) < 1e-10 and np.all(a[4:] < 1e-12)


def test_entropy_values():
    assert entanglement_entropy(normalize(product_coherent(0.4, 1.0))) == pytest.approx(0.0, abs=1e-9)
    assert entanglement_entropy(bell()) == pytest.approx(1.0, abs=1e-14)


def test_entropy_three_state_pinned():
    # regression value computed with this implementation
    s = normalize(three_state_entangled(1.5, 1.5).state)
    assert entanglement_entropy(s) == pytest.approx(1.5816189619586838, abs=1e-9)
