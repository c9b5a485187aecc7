import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condent import analytic as A
from condent import states
from condent.correlations import concurrence, negativity
from condent.errors import DomainError, InvalidParametersError
from oracles import mc_max

BELL = states.from_pure(np.array([1, 0, 0, 1]) / np.sqrt(2), 2, 2)


def _random_x(rng, lim=1.0):
    while True:
        p = rng.uniform(-lim, lim, 5)
        try:
            return states.x_state(*p), p
        except InvalidParametersError:
            continue


def test_bell_state():
    r = A.s2_minimize_qudit_qubit(states.to_bloch(BELL))
    assert r.lambda_max == pytest.approx(1)
    assert r.s2_min == pytest.approx(0, abs=1e-14)
    assert r.degenerate


def test_eigen_residual_and_normalization():
    rng = np.random.default_rng(1)
    for dA in (2, 3):
        b = states.to_bloch(states.random_state(dA, 2, rng))
        r = A.s2_minimize_qudit_qubit(b)
        nb = np.eye(3) - np.outer(b.rB, b.rB)
        C = b.C
        assert np.linalg.norm(C.T @ C @ r.k_star - r.lambda_max * nb @ r.k_star) < 1e-8
        assert np.linalg.norm(r.k_star) == pytest.approx(1)
        assert r.i2_max == pytest.approx(r.scale * r.lambda_max / dA)


def test_classically_correlated_along_z():
    rng = np.random.default_rng(2)
    rhos = [states.random_density_matrix(2, rng) for _ in range(2)]
    s = states.classically_correlated([0.3, 0.7], rhos, 2)
    b = states.to_bloch(s)
    r = A.s2_minimize_qudit_qubit(b)
    assert np.allclose(np.abs(r.k_star), [0, 0, 1], atol=1e-9)
    rb = b.rB[2]
    assert r.lambda_max == pytest.approx(np.sum((b.J[:, 2] - rb * b.rA) ** 2) / (1 - rb * rb))


def test_zero_rb_top_eigenvalue():
    rng = np.random.default_rng(3)
    s = states.random_state(2, 2, rng)
    b = states.to_bloch(s)
    # shrunk correlations with rB = 0 stay inside the state space
    b0 = states.BlochForm(b.rA * 0.3, np.zeros(3), b.J * 0.3)
    r = A.s2_minimize_qudit_qubit(b0)
    assert r.lambda_max == pytest.approx(np.linalg.eigvalsh(b0.C.T @ b0.C)[-1])


def test_product_shortcut():
    s = states.product_state(np.eye(2) / 2, np.diag([1.0, 0.0]))
    r = A.s2_minimize_qudit_qubit(states.to_bloch(s))
    assert r.product and r.k_star is None and r.i2_max == 0


def test_requires_qubit_b():
    with pytest.raises(DomainError):
        A.s2_minimize_qudit_qubit(states.to_bloch(states.random_state(2, 3, np.random.default_rng(0))))


def test_degenerate_choice_prefers_z():
    r = A.s2_minimize_qudit_qubit(states.to_bloch(states.BipartiteState(np.eye(4) / 4, 2, 2)))
    assert r.degenerate and np.allclose(r.k_star, [0, 0, 1])


def test_x_state_i2_examples():
    for w in (0.2, 0.6):
        p = states.x_params(states.pure_plus_mixed(w, 0.5))
        choice = A.x_state_axis_choice(*p)
        assert choice.value == pytest.approx(w * w) and choice.degenerate
        assert choice.axis == "z"
    for t in (0.1, 0.8, np.pi / 2):
        i2, axis = A.x_state_i2(*states.x_params(states.aligned_mixture(t)))
        assert i2 == pytest.approx(np.sin(t) ** 4) and axis == "x"
    assert A.x_state_i2(0, 0, 0, 0, 0)[0] == 0


def test_x_state_i2_agrees_with_general_solver():
    rng = np.random.default_rng(4)
    for _ in range(30):
        s, p = _random_x(rng)
        assert A.x_state_i2(*p)[0] == pytest.approx(A.s2_minimize_qudit_qubit(states.to_bloch(s)).i2_max, abs=1e-12)


def test_geometric_discord_examples():
    rng = np.random.default_rng(5)
    prod = states.product_state(states.random_density_matrix(2, rng), states.random_density_matrix(2, rng))
    assert A.geometric_discord(states.to_bloch(prod)) == pytest.approx(0, abs=1e-14)
    assert A.geometric_discord(states.to_bloch(BELL)) == pytest.approx(1)


def test_geometric_discord_x_formula():
    rng = np.random.default_rng(6)
    for _ in range(30):
        s, p = _random_x(rng)
        assert A.x_state_geometric_discord(*p) == pytest.approx(A.geometric_discord(states.to_bloch(s)), abs=1e-12)


def test_geometric_axis_matches_s2_when_rb_zero():
    rng = np.random.default_rng(7)
    for _ in range(10):
        b = states.to_bloch(states.random_state(2, 2, rng))
        b0 = states.BlochForm(b.rA * 0.2, np.zeros(3), b.J * 0.2)
        kg, _ = A.geometric_discord_direction(b0)
        ks = A.s2_minimize_qudit_qubit(b0).k_star
        assert abs(kg @ ks) == pytest.approx(1, abs=1e-9)


def test_aligned_closed_forms():
    s2, i2 = A.aligned_mixture_s2(np.pi / 4)
    assert s2 == pytest.approx(0.25) and i2 == pytest.approx(0.25)
    s2, i2 = A.aligned_mixture_s2(np.pi / 2)
    assert s2 == pytest.approx(0, abs=1e-15) and i2 == pytest.approx(1)


def _aligned(t):
    return states.x_params(states.aligned_mixture(t))


def test_transition_map_aligned():
    ts = np.linspace(0.01, np.pi / 2, 40)
    s2 = A.s2_transition_map(_aligned, ts, "s2")
    assert not s2.transitions and all(a == "x" for _, a, _ in s2.samples)
    gd = A.s2_transition_map(_aligned, ts, "geometric", tol=1e-10)
    (t, a0, a1), = gd.transitions
    assert (a0, a1) == ("z", "x")
    assert np.cos(t) ** 2 == pytest.approx(1 / 3, abs=1e-8)


def test_transition_map_pure_plus_mixed_stays_z():
    m = A.s2_transition_map(lambda w: states.x_params(states.pure_plus_mixed(w, 0.2)), np.linspace(0.05, 0.95, 30))
    assert not m.transitions and {a for _, a, _ in m.samples} == {"z"}


def test_transition_map_xy_pair_x():
    cx, cy = states.xy_chain_couplings(4, 1.0, 0.0)

    def family(field):
        return states.x_params(states.xy_strong_field_pair(states.xy_pair_amplitudes(cx, cy, field), 1, 2))

    m = A.s2_transition_map(family, np.linspace(5, 50, 10))
    assert {a for _, a, _ in m.samples} == {"x"}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mc_ratio_scale_invariant(seed):
    rng = np.random.default_rng(seed)
    b = states.to_bloch(states.random_state(int(rng.integers(2, 4)), 2, rng))
    k = rng.standard_normal(3)
    c = rng.uniform(0.1, 10) * rng.choice([-1, 1])
    assert A.mc_ratio(b, c * k) == pytest.approx(A.mc_ratio(b, k), rel=1e-12)


def test_grid_oracle_small():
    rng = np.random.default_rng(8)
    for dA in (2, 3):
        b = states.to_bloch(states.random_state(dA, 2, rng))
        r = A.s2_minimize_qudit_qubit(b)
        assert r.lambda_max == pytest.approx(mc_max(b.C, b.rB), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_x_inequality_chain(seed):
    s, (rA, rB, Jx, Jy, Jz) = _random_x(np.random.default_rng(seed))
    mid = max(Jx * Jx, Jy * Jy)
    assert concurrence(s) ** 2 <= mid + 1e-12
    assert mid <= A.x_state_i2(rA, rB, Jx, Jy, Jz)[0] + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_negativity_squared_below_geometric_discord(seed):
    rng = np.random.default_rng(seed)
    s = states.random_state(2, 2, rng, rank=int(rng.integers(1, 5)))
    assert negativity(s) ** 2 <= A.geometric_discord(states.to_bloch(s)) + 1e-12
    pure = states.random_pure_state(2, 2, rng)
    assert negativity(pure) ** 2 == pytest.approx(A.geometric_discord(states.to_bloch(pure)), abs=1e-8)
