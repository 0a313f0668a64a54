import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relphase import (BipartiteState, StateSequence, UndefinedPhase, gamma_two_qubit_closed_form,
                      make_two_qubit, pancharatnam_phase, phase_distance, qubit_sequence,
                      reduced_density, relative_sequence_phase, rho_sequence_phase,
                      sequence_phase, wrap_phase)
from relphase.bargmann import bargmann_phase

from conftest import (random_gauge, random_max_entangled, random_product, random_sequence,
                      random_state, random_vector)

S = 1 / np.sqrt(2)


def test_wrap_phase_branch():
    assert wrap_phase(np.pi) == np.pi
    assert wrap_phase(-np.pi) == np.pi
    assert wrap_phase(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    assert np.allclose(wrap_phase(np.array([0.0, 2 * np.pi, -7.0])), [0.0, 0.0, 2 * np.pi - 7.0])
    assert phase_distance(np.pi - 1e-3, -np.pi + 1e-3) == pytest.approx(2e-3)


def test_pancharatnam_self_overlap(rng):
    v = random_vector(rng, 3)
    assert pancharatnam_phase(v, v) == 0.0


@pytest.mark.parametrize("theta", [-3.0, -1.0, 0.2, 1.5, 3.1])
def test_pancharatnam_equator_pair(theta):
    a = np.array([S, S])
    b = np.array([S, S * np.exp(1j * theta)])
    # <b|a> = (1 + e^{-i theta})/2 = cos(theta/2) e^{-i theta/2}
    assert pancharatnam_phase(a, b) == pytest.approx(-theta / 2, abs=1e-14)


def test_pancharatnam_orthogonal():
    with pytest.raises(UndefinedPhase) as info:
        pancharatnam_phase([1, 0], [0, 1])
    assert info.value.overlap == 0.0


def test_pancharatnam_gauge_covariance(rng):
    a, b = random_vector(rng, 3), random_vector(rng, 3)
    ca, cb = 2.0 * np.exp(0.7j), 0.3 * np.exp(-2.1j)
    shifted = pancharatnam_phase(ca * a, cb * b)
    assert phase_distance(shifted, pancharatnam_phase(a, b) + 0.7 + 2.1) < 1e-12


def test_sequence_phase_of_identical_vectors(rng):
    v = random_vector(rng, 4)
    assert sequence_phase(StateSequence([v, v, v, v])).phase == 0.0


def test_qubit_triangle_sequence_phase():
    for phi in np.linspace(0.05, 3.0, 7):
        assert sequence_phase(qubit_sequence(phi)).phase == pytest.approx(-phi / 2, abs=1e-13)


def test_printed_third_vector_flips_the_sign():
    # with e^{-i phi} in the third vector both phases change sign
    phi, lam = 1.2, 0.8
    printed = StateSequence([[1, 0], [S, S], [S, S * np.exp(-1j * phi)]])
    assert sequence_phase(printed).phase == pytest.approx(phi / 2, abs=1e-13)
    rel = relative_sequence_phase(make_two_qubit(lam), printed).phase
    assert rel == pytest.approx(-gamma_two_qubit_closed_form(lam, phi), abs=1e-13)


def test_sequence_phase_reports_first_orthogonal_pair():
    seq = StateSequence([[1, 0], [S, S], [0, 1], [1, 1j]])
    with pytest.raises(UndefinedPhase) as info:
        sequence_phase(StateSequence([[1, 0], [0, 1], [S, S]]))
    assert info.value.index == 0
    assert sequence_phase(seq).min_adjacent_overlap == pytest.approx(S)


def test_phase_result_fields(rng):
    res = sequence_phase(random_sequence(rng, 3, 5))
    assert abs(res.phase - np.angle(res.chain_product)) < 1e-14
    assert res.min_adjacent_overlap > 1e-9
    assert res.branch == "(-pi,pi]"


def test_long_sequence_does_not_underflow(rng):
    vs = np.array([random_vector(rng, 2) * 1e-3 for _ in range(5000)])
    res = bargmann_phase(vs)
    assert res.chain_product == 0.0 or np.isfinite(res.log_modulus)
    assert np.isfinite(res.phase)
    # reference: accumulate args one at a time
    nxt = np.roll(vs, -1, axis=0)
    ref = wrap_phase(np.sum(np.angle(np.einsum("ji,ji->j", nxt.conj(), vs))))
    assert phase_distance(res.phase, ref) < 1e-9


def test_two_qubit_reference_value():
    lam, phi = np.pi / 3, np.pi / 2
    oracle = math.pi / 4 - math.atan(0.5)  # cos(pi/3) tan(pi/4) = 1/2
    assert oracle == pytest.approx(0.3217505544, abs=1e-10)
    res = relative_sequence_phase(make_two_qubit(lam), qubit_sequence(phi))
    assert abs(res.phase - oracle) < 1e-12
    assert res.route_discrepancy < 1e-12


def test_undefined_relative_phase_at_lambda_pi():
    with pytest.raises(UndefinedPhase):
        relative_sequence_phase(make_two_qubit(np.pi), qubit_sequence(0.7))


def test_product_state_nullity(rng):
    for _ in range(50):
        d1, d2 = rng.integers(1, 5, size=2)
        d1 = max(d1, 2)
        psi = random_product(rng, d1, d2)
        seq = random_sequence(rng, d1, rng.integers(3, 7))
        assert abs(relative_sequence_phase(psi, seq).phase) < 1e-10


def test_max_entangled_flip(rng):
    for _ in range(30):
        k = int(rng.integers(2, 5))
        psi = random_max_entangled(rng, k, int(rng.integers(k, 6)))
        seq = random_sequence(rng, k, rng.integers(3, 7))
        total = relative_sequence_phase(psi, seq).phase + sequence_phase(seq).phase
        assert phase_distance(total, 0.0) < 1e-10


def test_rho_sequence_phase_examples(rng):
    seq = random_sequence(rng, 3, 5)
    v = random_vector(rng, 3)
    projector = np.outer(v, v.conj()) / np.vdot(v, v).real
    assert abs(rho_sequence_phase(projector, seq).phase) < 1e-10
    flip = rho_sequence_phase(np.eye(3) / 3, seq).phase + sequence_phase(seq).phase
    assert phase_distance(flip, 0) < 1e-12
    lam, phi = 1.1, 2.0
    diag = np.diag([np.cos(lam / 2) ** 2, np.sin(lam / 2) ** 2])
    via_rho = rho_sequence_phase(diag, qubit_sequence(phi)).phase
    assert abs(via_rho - relative_sequence_phase(make_two_qubit(lam), qubit_sequence(phi)).phase) \
        < 1e-12


seeds = st.integers(0, 2 ** 32 - 1)
shapes = st.tuples(st.integers(2, 4), st.integers(1, 4), st.integers(3, 7))


@settings(max_examples=80, deadline=None)
@given(shapes, seeds)
def test_gauge_shift_and_reversal(shape, seed):
    d1, d2, n = shape
    rng = np.random.default_rng(seed)
    psi = random_state(rng, d1, d2)
    seq = random_sequence(rng, d1, n)
    try:
        base = sequence_phase(seq).phase
        rel = relative_sequence_phase(psi, seq).phase
    except UndefinedPhase:
        return
    gauged = seq.rescaled(random_gauge(rng, n))
    assert phase_distance(sequence_phase(gauged).phase, base) < 1e-12
    assert phase_distance(relative_sequence_phase(psi, gauged).phase, rel) < 1e-12
    for k in range(1, n):
        assert phase_distance(sequence_phase(seq.shifted(k)).phase, base) < 1e-12
        assert phase_distance(relative_sequence_phase(psi, seq.shifted(k)).phase, rel) < 1e-12
    assert phase_distance(sequence_phase(seq.reversed()).phase, -base) < 1e-12
    assert phase_distance(relative_sequence_phase(psi, seq.reversed()).phase, -rel) < 1e-12


@settings(max_examples=80, deadline=None)
@given(shapes, seeds)
def test_purification_independence(shape, seed):
    d1, d2, n = shape
    rng = np.random.default_rng(seed)
    psi = random_state(rng, d1, d2)
    seq = random_sequence(rng, d1, n)
    try:
        res = relative_sequence_phase(psi, seq)
    except UndefinedPhase:
        return
    assert res.route_discrepancy < 1e-12
    assert phase_distance(res.phase, rho_sequence_phase(reduced_density(psi), seq).phase) < 1e-12
    # a different purification of the same marginal: rotate Bob's side
    rotated = BipartiteState.from_matrix(psi.matrix @ np.linalg.qr(
        random_vector(rng, d2 * d2).reshape(d2, d2))[0])
    assert phase_distance(relative_sequence_phase(rotated, seq).phase, res.phase) < 1e-12
