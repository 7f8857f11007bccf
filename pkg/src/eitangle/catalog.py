"""Named entangled and cat states, written as closed-form superpositions.

Each two-mode label also carries the dynamical recipe (initial state, scaled
time, K) that should produce it, so a catalog state can be checked against
:func:`eitangle.effective_model.evolve` and against the revival sum.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .exceptions import DomainError
from .fockspace import (
    TruncatedMode,
    TwoModeState,
    coherent_amplitudes,
    default_cutoff,
    normalize,
    tensor,
)

LABELS = (
    "two_state_27",
    "two_state_27_alt",
    "ys_31",
    "ys_33",
    "three_state_36",
    "four_state_39",
    "even_cat",
    "odd_cat",
    "ys_cat_plus",
    "ys_cat_minus",
)


@dataclass(frozen=True, eq=False)
class NamedState:
    label: str
    state: TwoModeState | TruncatedMode
    normalized: bool

    def as_normalized(self):
        if self.normalized:
            return self.state
        if isinstance(self.state, TwoModeState):
            return normalize(self.state)
        return self.state.normalized()


def _cutoffs(alpha, beta, cutoffs):
    if cutoffs is None:
        return default_cutoff(alpha), default_cutoff(beta)
    if isinstance(cutoffs, int):
        return cutoffs, cutoffs
    return tuple(cutoffs)


def cat_norms(beta: complex) -> tuple[float, float]:
    """(beta_+, beta_-) = sqrt(2 (1 +/- exp(-2 |beta|^2)))."""
    e = math.exp(-2.0 * abs(beta) ** 2)
    return math.sqrt(2.0 * (1.0 + e)), math.sqrt(2.0 * (1.0 - e))


def cat_sum(gamma: complex, sign: int, cutoff: int) -> TruncatedMode:
    """Unnormalized |gamma> + sign |-gamma>."""
    return coherent_amplitudes(gamma, cutoff) + sign * coherent_amplitudes(-gamma, cutoff)


def even_odd_cat(beta: complex, parity: str, cutoff: int | None = None) -> TruncatedMode:
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    cutoff = default_cutoff(beta) if cutoff is None else cutoff
    b_plus, b_minus = cat_norms(beta)
    if parity == "even":
        return cat_sum(beta, +1, cutoff) / b_plus
    if b_minus == 0.0:
        raise DomainError("odd cat state is undefined at beta = 0")
    return cat_sum(beta, -1, cutoff) / b_minus


def yurke_stoler_cat(alpha: complex, sign: str, cutoff: int | None = None) -> TruncatedMode:
    """(|alpha> +/- i|-alpha>) / sqrt(2); unit norm because <alpha|-alpha> is real."""
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    cutoff = default_cutoff(alpha) if cutoff is None else cutoff
    s = 1j if sign == "plus" else -1j
    return (coherent_amplitudes(alpha, cutoff) + s * coherent_amplitudes(-alpha, cutoff)) / math.sqrt(2.0)


def two_state_entangled(alpha: complex, beta: complex, cutoffs=None) -> NamedState:
    """(1/2) [beta_+ |alpha>|beta>_+  -  i beta_- |-alpha>|beta>_-].

    Written through the unnormalized cats |beta> +/- |-beta>, which keeps the
    beta = 0 case (beta_- = 0) finite.
    """
    pc, ac = _cutoffs(alpha, beta, cutoffs)
    a_p = coherent_amplitudes(alpha, pc)
    a_m = coherent_amplitudes(-alpha, pc)
    state = 0.5 * (tensor(a_p, cat_sum(beta, +1, ac)) - 1j * tensor(a_m, cat_sum(beta, -1, ac)))
    return NamedState("two_state_27", state, normalized=False)


def two_state_entangled_alt(alpha: complex, beta: complex, cutoffs=None) -> NamedState:
    """Same physical state as :func:`two_state_entangled`, split over photon cats.

    (1/sqrt 2) [|alpha>_- |beta> + |alpha>_+ |-beta>] with |alpha>_+/- the
    Yurke-Stoler cats. The 1/sqrt 2 prefactor (not 1/2) makes it equal to the
    other decomposition amplitude by amplitude.
    """
    pc, ac = _cutoffs(alpha, beta, cutoffs)
    state = (
        tensor(yurke_stoler_cat(alpha, "minus", pc), coherent_amplitudes(beta, ac))
        + tensor(yurke_stoler_cat(alpha, "plus", pc), coherent_amplitudes(-beta, ac))
    ) / math.sqrt(2.0)
    return NamedState("two_state_27_alt", state, normalized=False)


def entangled_coherent_ys(alpha: complex, beta: complex, variant: str, cutoffs=None) -> NamedState:
    pc, ac = _cutoffs(alpha, beta, cutoffs)

    def ket(a, b):
        return tensor(coherent_amplitudes(a, pc), coherent_amplitudes(b, ac))

    if variant == "aligned":
        state = (ket(alpha, beta) + 1j * ket(-alpha, -beta)) / math.sqrt(2.0)
        label = "ys_31"
    elif variant == "crossed":
        state = (ket(alpha, -beta) - 1j * ket(-alpha, beta)) / math.sqrt(2.0)
        label = "ys_33"
    else:
        raise ValueError(f"variant must be 'aligned' or 'crossed', got {variant!r}")
    return NamedState(label, state, normalized=False)


_W = cmath.exp(1j * math.pi / 3)  # e^{i pi/3}


def three_state_photon(alpha: complex, k: int, cutoff: int) -> TruncatedMode:
    """|(-1)^k alpha e^{-i k pi/3}>, k = 1, 2, 3."""
    return coherent_amplitudes((-1) ** k * alpha * _W ** (-k), cutoff)


def three_state_atom(beta: complex, k: int, cutoff: int) -> TruncatedMode:
    """Atomic three-component superpositions paired with :func:`three_state_photon`.

    k = 3 is the all-plus combination |-beta e^{i pi/3}> + |-beta e^{-i pi/3}>
    + |beta>; the revival grid at N = 3 fixes this form.
    """
    up = coherent_amplitudes(-beta * _W, cutoff)
    down = coherent_amplitudes(-beta / _W, cutoff)
    centre = coherent_amplitudes(beta, cutoff)
    if k == 1:
        return _W.conjugate() * up + _W * down - centre
    if k == 2:
        return _W * up + _W.conjugate() * down - centre
    if k == 3:
        return up + down + centre
    raise ValueError(f"k must be 1, 2 or 3, got {k}")


def three_state_entangled(alpha: complex, beta: complex, cutoffs=None) -> NamedState:
    """(1/3) [|a>_1|b>_1 + |a>_2|b>_2 + e^{-i pi/3} |a>_3|b>_3].

    Equals the tau = 2 pi / 3, K = -1 evolution up to the global phase e^{i pi/3}.
    """
    pc, ac = _cutoffs(alpha, beta, cutoffs)
    terms = [tensor(three_state_photon(alpha, k, pc), three_state_atom(beta, k, ac)) for k in (1, 2, 3)]
    state = (terms[0] + terms[1] + _W.conjugate() * terms[2]) / 3.0
    return NamedState("three_state_36", state, normalized=False)


def four_state_entangled(alpha: complex, beta: complex, cutoffs=None) -> NamedState:
    """(1/4) [e^{i pi/4}|ia>_-|ib>_- + e^{-i pi/4}|ia>_+|b>_- + |a>_+|ib>_+ + |a>_-|b>_+].

    |g>_+/- = |g> +/- |-g> are unnormalized cats.
    """
    pc, ac = _cutoffs(alpha, beta, cutoffs)
    q = cmath.exp(1j * math.pi / 4)
    state = 0.25 * (
        q * tensor(cat_sum(1j * alpha, -1, pc), cat_sum(1j * beta, -1, ac))
        + q.conjugate() * tensor(cat_sum(1j * alpha, +1, pc), cat_sum(beta, -1, ac))
        + tensor(cat_sum(alpha, +1, pc), cat_sum(1j * beta, +1, ac))
        + tensor(cat_sum(alpha, -1, pc), cat_sum(beta, +1, ac))
    )
    return NamedState("four_state_39", state, normalized=False)


# -- scenarios: catalog state + the dynamics that should produce it ----------


@dataclass(frozen=True)
class Scenario:
    label: str
    build: Callable[[complex, complex, tuple[int, int]], NamedState]
    initial: Callable[[complex, complex, tuple[int, int]], TwoModeState] | None
    tau: float | None
    K: int = -1
    closed_form_concurrence: bool = False
    up_to_global_phase: bool = False


def _product(alpha, beta, cutoffs):
    pc, ac = cutoffs
    return tensor(coherent_amplitudes(alpha, pc), coherent_amplitudes(beta, ac))


def _ys_initial(sign):
    def initial(alpha, beta, cutoffs):
        pc, ac = cutoffs
        return tensor(yurke_stoler_cat(alpha, sign, pc), coherent_amplitudes(beta, ac))
    return initial


def _product_vacuum_photon(alpha, beta, cutoffs):
    return _product(0.0, beta, cutoffs)


def _atom_cat(label, mode_builder):
    # single-mode cats sit on the atom mode with the photon in vacuum
    def build(alpha, beta, cutoffs):
        pc, ac = cutoffs
        state = tensor(coherent_amplitudes(0.0, pc), mode_builder(beta, ac))
        return NamedState(label, state, normalized=False)
    return build


SCENARIOS: dict[str, Scenario] = {
    s.label: s
    for s in (
        Scenario("two_state_27", lambda a, b, c: two_state_entangled(a, b, c),
                 _product, math.pi / 2, closed_form_concurrence=True),
        Scenario("two_state_27_alt", lambda a, b, c: two_state_entangled_alt(a, b, c),
                 _product, math.pi / 2, closed_form_concurrence=True),
        Scenario("ys_31", lambda a, b, c: entangled_coherent_ys(a, b, "aligned", c),
                 _ys_initial("plus"), math.pi / 2, closed_form_concurrence=True),
        Scenario("ys_33", lambda a, b, c: entangled_coherent_ys(a, b, "crossed", c),
                 _ys_initial("minus"), math.pi / 2, closed_form_concurrence=True),
        Scenario("three_state_36", lambda a, b, c: three_state_entangled(a, b, c),
                 _product, 2 * math.pi / 3, up_to_global_phase=True),
        Scenario("four_state_39", lambda a, b, c: four_state_entangled(a, b, c),
                 _product, math.pi / 4),
        # |0> (x) |beta> evolves into the atomic Yurke-Stoler cats up to e^{-/+ i pi/4}
        Scenario("ys_cat_plus", _atom_cat("ys_cat_plus", lambda b, c: yurke_stoler_cat(b, "plus", c)),
                 _product_vacuum_photon, math.pi / 2, up_to_global_phase=True),
        Scenario("ys_cat_minus", _atom_cat("ys_cat_minus", lambda b, c: yurke_stoler_cat(b, "minus", c)),
                 _product_vacuum_photon, 3 * math.pi / 2, up_to_global_phase=True),
        Scenario("even_cat", _atom_cat("even_cat", lambda b, c: even_odd_cat(b, "even", c)), None, None),
        Scenario("odd_cat", _atom_cat("odd_cat", lambda b, c: even_odd_cat(b, "odd", c)), None, None),
    )
}


def build(label: str, alpha: complex, beta: complex, cutoffs=None) -> NamedState:
    if label not in SCENARIOS:
        raise KeyError(f"unknown catalog label {label!r}; expected one of {', '.join(LABELS)}")
    return SCENARIOS[label].build(alpha, beta, _cutoffs(alpha, beta, cutoffs))


def cutoffs_for(alpha: complex, beta: complex, cutoffs=None) -> tuple[int, int]:
    return _cutoffs(alpha, beta, cutoffs)


def dynamical_counterpart(label: str, alpha: complex, beta: complex, cutoffs=None) -> TwoModeState | None:
    """Evolved state the catalog entry should equal, or ``None`` if it has no dynamical origin."""
    from .effective_model import evolve

    sc = SCENARIOS[label]
    if sc.initial is None:
        return None
    init = sc.initial(alpha, beta, _cutoffs(alpha, beta, cutoffs))
    return evolve(normalize(init), sc.tau, sc.K)
