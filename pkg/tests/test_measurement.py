import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condent import measurement as M
from condent import states
from condent.errors import DomainError, InvalidMeasurementError, UnsupportedMeasurementError

BELL = states.from_pure(np.array([1, 0, 0, 1]) / np.sqrt(2), 2, 2)


def test_direction_z_is_computational():
    m = M.projective_from_direction([0, 0, 1])
    assert np.allclose(m.elements[0], np.diag([1, 0]))
    assert np.allclose(m.elements[1], np.diag([0, 1]))


def test_direction_x():
    m = M.projective_from_direction([2, 0, 0])
    assert np.allclose(m.elements[0], 0.5 * np.ones((2, 2)))
    assert np.allclose(m.elements[1], 0.5 * np.array([[1, -1], [-1, 1]]))


def test_direction_bloch_vectors():
    k = np.array([0.3, -0.4, 0.5])
    k /= np.linalg.norm(k)
    kv = M.projective_from_direction(k).bloch_vectors()
    assert np.allclose(kv, [k, -k])
    assert np.allclose(np.sum(kv ** 2, axis=1), 1)


def test_zero_direction_rejected():
    with pytest.raises(DomainError):
        M.projective_from_direction([0, 0, 0])


def test_povm_validation():
    with pytest.raises(InvalidMeasurementError, match="identity"):
        M.Povm([np.eye(2), np.eye(2)])
    with pytest.raises(InvalidMeasurementError, match="negative"):
        M.Povm([np.diag([1.5, 1]), np.diag([-0.5, 0])])
    with pytest.raises(InvalidMeasurementError, match="normalized"):
        M.Rank1Povm([1, 1], [[2, 0], [0, 1]])


def test_phase_convention():
    m = M.Rank1Povm([1, 1], [[1j, 0], [0, -1]])
    assert np.allclose(m.kets, np.eye(2))


def test_bell_conditional_state():
    p, rho = M.conditional_state(BELL, (1.0, [1, 0]))
    assert p == pytest.approx(0.5)
    assert np.allclose(rho, np.diag([1, 0]))


def test_unreachable_outcome_reported_as_none():
    s = states.product_state(np.eye(2) / 2, np.diag([1.0, 0.0]))
    p, rho = M.conditional_state(s, (1.0, [0, 1]))
    assert p == 0 and rho is None


def test_product_conditional_is_marginal():
    rng = np.random.default_rng(1)
    ra = states.random_density_matrix(3, rng)
    s = states.product_state(ra, states.random_density_matrix(2, rng))
    for e in M.random_rank1_povm(2, 3, rng).elements:
        p, rho = M.conditional_state(s, e)
        assert np.allclose(rho, ra)


def test_classical_pointer_conditionals():
    rng = np.random.default_rng(2)
    rhos = [states.random_density_matrix(2, rng) for _ in range(3)]
    s = states.classically_correlated([0.2, 0.5, 0.3], rhos, 3)
    for k in range(3):
        p, rho = M.conditional_state(s, (1.0, np.eye(3)[k]))
        assert p == pytest.approx([0.2, 0.5, 0.3][k])
        assert np.allclose(rho, rhos[k])


def test_qubit_conditional_bloch_form():
    rng = np.random.default_rng(3)
    s = states.random_state(3, 2, rng)
    b = states.to_bloch(s)
    m = M.random_rank1_povm(2, 3, rng)
    for r, ket, kj in zip(m.weights, m.kets, m.bloch_vectors()):
        p, rho = M.conditional_state(s, (r, ket))
        expected = (b.rA + b.J @ kj) / (1 + b.rB @ kj)
        assert np.allclose(states.bloch_vector(rho), expected)


def test_refine_identity_and_merge():
    rng = np.random.default_rng(4)
    m = M.random_rank1_povm(2, 3, rng)
    assert np.allclose(M.refine(m, np.eye(3)).elements, m.elements)
    merged = M.refine(m, [[1, 1, 0], [0, 0, 1]])
    assert merged.n_outcomes == 2
    assert np.allclose(merged.elements.sum(0), np.eye(2))
    with pytest.raises(DomainError):
        M.refine(m, [[0.5, 1, 0], [0, 0, 1]])


def test_unread_measurement():
    z = M.projective_from_direction([0, 0, 1])
    out = M.unread_measurement_state(BELL, z)
    assert np.allclose(out.rho, np.diag([0.5, 0, 0, 0.5]))
    with pytest.raises(UnsupportedMeasurementError):
        M.unread_measurement_state(BELL, M.random_rank1_povm(2, 3, np.random.default_rng(0)))


def test_unread_product_commuting_basis():
    rb = np.diag([0.3, 0.7])
    s = states.product_state(states.random_density_matrix(2, np.random.default_rng(5)), rb)
    assert np.allclose(M.unread_measurement_state(s, M.computational_basis(2)).rho, s.rho)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 3), st.integers(2, 3))
def test_probability_and_marginal_consistency(seed, dA, dB):
    rng = np.random.default_rng(seed)
    s = states.random_state(dA, dB, rng)
    m = M.random_rank1_povm(dB, int(rng.integers(dB, dB * dB + 1)), rng)
    p, blocks = M.outcome_blocks(s, m)
    assert p.sum() == pytest.approx(1, abs=1e-12)
    assert np.allclose(blocks.sum(0), s.rho_A, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 3), st.integers(2, 3))
def test_pure_state_conditionals_are_pure(seed, dA, dB):
    rng = np.random.default_rng(seed)
    s = states.random_pure_state(dA, dB, rng)
    m = M.random_rank1_povm(dB, dB + 1, rng)
    for e in m.elements:
        p, rho = M.conditional_state(s, e)
        if rho is not None and p > 1e-9:
            assert np.trace(rho @ rho).real == pytest.approx(1, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 3))
def test_refine_preserves_completeness(seed, d):
    rng = np.random.default_rng(seed)
    m = M.random_rank1_povm(d, d * d, rng)
    c = M.refine(m, M.random_stochastic(int(rng.integers(1, d * d + 1)), d * d, rng))
    assert np.allclose(c.elements.sum(0), np.eye(d), atol=1e-9)
