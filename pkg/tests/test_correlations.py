import numpy as np
import pytest

from condent import conditional as C
from condent import correlations as K
from condent import measurement as M
from condent import states
from condent.analytic import s2_minimize_qudit_qubit
from condent.entropy import entropy, linear, tsallis, von_neumann
from condent.errors import DomainError
from oracles import conditional_entropy as oracle_conditional, projector, wootters

VN = von_neumann()
BELL = states.from_pure(np.array([1, 0, 0, 1]) / np.sqrt(2), 2, 2)
FAST = K.MinimizerOptions(restarts=6)


def test_bell_discord_and_entanglement():
    assert K.quantum_discord(BELL) == pytest.approx(1, abs=1e-9)
    assert K.concurrence(BELL) == pytest.approx(1)
    assert K.negativity(BELL) == pytest.approx(1)
    assert K.eof_from_concurrence(1.0) == pytest.approx(1)


def test_product_state_zero_correlations():
    rng = np.random.default_rng(1)
    s = states.product_state(states.random_density_matrix(2, rng), states.random_density_matrix(2, rng))
    assert abs(K.quantum_discord(s)) < 1e-9
    assert K.concurrence(s) == 0 and abs(K.negativity(s)) < 1e-14


def test_outcome_invariants():
    rng = np.random.default_rng(2)
    s = states.random_state(2, 2, rng)
    out = K.minimize_conditional_entropy(s, VN)
    assert all(out.best_value <= v + 1e-12 for _, v in out.trace)
    assert out.best_value <= entropy(s.rho_A, VN) + 1e-12
    assert out.best_value == pytest.approx(oracle_conditional(s.rho, 2, 2, projector(out.direction), VN), abs=1e-12)
    assert out.mode == "projective" and out.n_outcomes == 2


def test_projective_needs_qubit_b():
    s = states.random_state(2, 3, np.random.default_rng(3))
    with pytest.raises(DomainError):
        K.minimize_conditional_entropy(s, VN, "projective")
    with pytest.raises(DomainError):
        K.minimize_conditional_entropy(s, VN, "povm:2")


def test_linear_matches_analytic():
    rng = np.random.default_rng(4)
    for dA in (2, 3):
        s = states.random_state(dA, 2, rng)
        r = s2_minimize_qudit_qubit(states.to_bloch(s), scale=1.0)
        assert K.minimize_conditional_entropy(s, linear(1)).best_value == pytest.approx(r.s2_min, abs=1e-7)


def test_povm_not_worse_than_projective():
    rng = np.random.default_rng(5)
    for _ in range(3):
        s = states.random_state(2, 2, rng)
        proj = K.minimize_conditional_entropy(s, VN).best_value
        for m in (3, 4):
            assert K.minimize_conditional_entropy(s, VN, f"povm:{m}", options=FAST).best_value <= proj + 1e-9


def test_povm_mode_qutrit_b_pointer():
    rng = np.random.default_rng(6)
    rhos = [states.random_density_matrix(2, rng) for _ in range(3)]
    q = [0.2, 0.3, 0.5]
    s = states.classically_correlated(q, rhos, 3)
    expected = sum(qk * entropy(r, VN) for qk, r in zip(q, rhos))
    out = K.minimize_conditional_entropy(s, VN, "povm", options=FAST)
    assert out.best_value == pytest.approx(expected, abs=1e-7)


def test_seed_recorded_and_deterministic():
    s = states.random_state(2, 2, np.random.default_rng(7))
    opts = K.MinimizerOptions(seed=42, restarts=4)
    a = K.minimize_conditional_entropy(s, VN, "povm:3", options=opts)
    b = K.minimize_conditional_entropy(s, VN, "povm:3", options=opts)
    assert a.seed == 42 and a.best_value == b.best_value


def test_discord_classical_zero():
    rng = np.random.default_rng(8)
    rhos = [states.random_density_matrix(2, rng) for _ in range(2)]
    s = states.classically_correlated([0.4, 0.6], rhos, 2, states.random_unitary(2, rng))
    assert abs(K.quantum_discord(s)) < 2e-6


def test_concurrence_matches_oracle_and_x_formula():
    rng = np.random.default_rng(9)
    for _ in range(10):
        s = states.random_state(2, 2, rng, rank=int(rng.integers(1, 5)))
        assert K.concurrence(s) == pytest.approx(wootters(s.rho), abs=1e-8)
    for w in np.linspace(0, 1, 11):
        for q in (0.1, 0.5):
            c = max(w * 2 * np.sqrt(q * (1 - q)) - (1 - w) / 2, 0)
            assert K.concurrence(states.pure_plus_mixed(w, q)) == pytest.approx(c, abs=1e-10)


def test_concurrence_separable_mixture():
    rng = np.random.default_rng(10)
    rho = sum(p * np.kron(states.random_density_matrix(2, rng), states.random_density_matrix(2, rng))
              for p in rng.dirichlet(np.ones(3)))
    assert K.concurrence(states.BipartiteState(rho, 2, 2)) == pytest.approx(0, abs=1e-9)


def test_concurrence_requires_two_qubits():
    with pytest.raises(DomainError):
        K.concurrence(states.random_state(2, 3, np.random.default_rng(0)))


def test_eof_pure_state():
    s = states.random_pure_state(2, 2, np.random.default_rng(11))
    out = K.eof_bruteforce(s, VN)
    assert out.best_value == pytest.approx(entropy(s.rho_A, VN))


def test_eof_decreasing_in_outcomes():
    s = states.random_state(2, 2, np.random.default_rng(12), rank=2)
    rac = states.purify(s).reduced("AC")
    out = K.eof_bruteforce(rac, linear(2), options=FAST)
    assert out.by_outcomes[4] <= out.by_outcomes[2] + 1e-9
    assert out.best_value == min(out.by_outcomes.values())


def test_decomposition_ensemble_invariants():
    s = states.random_state(2, 2, np.random.default_rng(13), rank=2)
    rac = states.purify(s).reduced("AC")
    out = K.eof_bruteforce(rac, VN, m=3, options=FAST)
    e = out.ensemble
    assert np.allclose(e.density_matrix(), rac.rho, atol=1e-9)
    assert np.allclose(e.U.conj().T @ e.U, np.eye(e.U.shape[1]), atol=1e-9)


def test_measurement_decomposition_roundtrip():
    rng = np.random.default_rng(14)
    s = states.random_state(2, 2, rng, rank=2)
    pur = states.purify(s)
    povm = M.random_rank1_povm(2, 3, rng)
    e = K.measurement_to_decomposition(povm, pur)
    assert np.allclose(e.density_matrix(), pur.reduced("AC").rho, atol=1e-10)
    back = K.decomposition_to_measurement(e, pur)
    assert np.allclose(back.elements.sum(0), np.eye(2), atol=1e-9)
    for f in (VN, linear(2), tsallis(3)):
        assert C.conditional_entropy(s, back, f).value == pytest.approx(C.conditional_entropy(s, povm, f).value, abs=1e-10)
        ens_val = sum(p * entropy(np.trace(np.outer(v, v.conj()).reshape(2, 2, 2, 2), axis1=1, axis2=3), f)
                      for p, v in zip(e.probs, e.vectors))
        assert ens_val == pytest.approx(C.conditional_entropy(s, povm, f).value, abs=1e-10)


def test_single_column_isometry_is_pointer():
    rng = np.random.default_rng(15)
    s = states.random_state(2, 2, rng, rank=1)
    pur = states.purify(s)
    e = K.measurement_to_decomposition(M.computational_basis(2), pur)
    back = K.decomposition_to_measurement(e, pur)
    assert np.allclose(back.elements.sum(0), np.eye(2), atol=1e-9)


def test_inconsistent_ensemble_rejected():
    rng = np.random.default_rng(16)
    pur = states.purify(states.random_state(2, 2, rng, rank=2))
    e = K.measurement_to_decomposition(M.random_rank1_povm(2, 3, rng), pur)
    bad = K.DecompositionEnsemble(e.probs[::-1].copy(), e.vectors, e.U)
    with pytest.raises(DomainError):
        K.decomposition_to_measurement(bad, pur)


def test_isometry_columns_orthonormal():
    z = np.random.default_rng(17).standard_normal((5, 3)) + 1j
    u = K.isometry(z)
    assert np.allclose(u.conj().T @ u, np.eye(3))


def test_monotone_ordering_in_schmidt_vector():
    # q more mixed than q' (stronger entanglement) -> larger conditional entropy
    for f in (VN, linear(2), tsallis(3)):
        for w in (0.2, 0.6, 0.9):
            hi = C.pure_plus_mixed_minimum(w, [0.4, 0.35, 0.25], 3, 3, f)
            lo = C.pure_plus_mixed_minimum(w, [0.6, 0.3, 0.1], 3, 3, f)
            assert hi >= lo - 1e-12
