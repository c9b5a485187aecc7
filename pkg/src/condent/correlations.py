"""Minimum conditional entropy, quantum discord, concurrence, negativity and
entanglement of formation via purification.

Two independent search routes are provided for the minimum of
``S_f(A|B_M)``:

* over measurements on B (:func:`minimize_conditional_entropy`), either spin
  directions for a qubit B or rank-1 POVMs parameterized by an isometry;
* over pure-state decompositions of ``rho_AC`` (:func:`eof_bruteforce`), where
  C purifies ``rho_AB``.

Both are random-restart local searches seeded from a fixed generator.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .analytic import canonical_sign, s2_minimize_qudit_qubit
from .entropy import entropy, von_neumann
from .errors import DomainError
from .measurement import TAU_PROB, Rank1Povm, projective_from_direction
from .states import PAULI, to_bloch


@dataclass
class MinimizerOptions:
    """Search budget. ``tol`` is the value tolerance, ``xatol`` the direction tolerance (rad)."""

    grid: tuple = (60, 120)
    n_starts: int = 5
    restarts: int = 20
    maxiter: int = 2000
    tol: float = 1e-9
    xatol: float = 1e-10
    seed: int = 0


@dataclass
class MinimizationOutcome:
    best_value: float
    best_measurement: Rank1Povm
    trace: list
    converged: bool
    seed: int
    mode: str
    direction: Optional[np.ndarray] = None

    @property
    def n_outcomes(self):
        return self.best_measurement.n_outcomes


def _options(options, **overrides):
    opts = MinimizerOptions() if options is None else options
    if overrides:
        opts = MinimizerOptions(**{**opts.__dict__, **overrides})
    return opts


def _parse_mode(mode, outcomes, dB):
    if isinstance(mode, str) and mode.startswith("povm:"):
        mode, outcomes = "povm", int(mode.split(":", 1)[1])
    if mode == "projective":
        if dB != 2:
            raise DomainError("projective mode parameterizes spin directions and needs dB = 2")
        return "projective", 2
    if mode == "povm":
        m = dB * dB if outcomes is None else int(outcomes)
        if m < dB:
            raise DomainError(f"a rank-1 POVM on dB = {dB} needs at least {dB} outcomes, got {m}")
        return "povm", m
    raise DomainError(f"unknown minimization mode {mode!r}")


# ---------------------------------------------------------------------------
# projective search on a qubit B
# ---------------------------------------------------------------------------

def sphere_grid(n_theta, n_phi):
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1).reshape(-1, 3)


def _tangent_frame(k):
    helper = np.eye(3)[int(np.argmin(np.abs(k)))]
    e1 = np.cross(k, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(k, e1)


def projective_objective(s, f):
    """Vectorized ``dirs -> S_f(A|B_k)`` for a qubit B."""
    if s.dB != 2:
        raise DomainError("spin-direction objective needs dB = 2")
    rho_a = np.ascontiguousarray(s.rho_A)
    paulis_a = np.ascontiguousarray(np.einsum("abcd,idb->iac", s.tensor, PAULI))
    kernel = kernels.qubit_b_grid_numba if kernels.USE_NUMBA else kernels.qubit_b_grid_numpy
    code, a, b = f.kernel_args
    a, b = float(a), float(b)

    def evaluate(dirs):
        return kernel(rho_a, paulis_a, np.ascontiguousarray(np.atleast_2d(dirs), dtype=float), code, a, b, TAU_PROB)

    return evaluate


def _select_starts(dirs, values, count, min_angle):
    cos_min = np.cos(min_angle)
    chosen = []
    for idx in np.argsort(values, kind="stable"):
        k = dirs[idx]
        if all(abs(k @ c) < cos_min for c in chosen):
            chosen.append(k)
            if len(chosen) == count:
                break
    return chosen


def _distinct(starts, min_angle):
    """Drop starts within ``min_angle`` of an earlier one (directions, so +-k coincide)."""
    cos_min = np.cos(min_angle)
    kept = []
    for k in starts:
        if all(abs(k @ c) < cos_min for c in kept):
            kept.append(k)
    return kept


def _refine_direction(evaluate, k0, step, opts):
    e1, e2 = _tangent_frame(k0)

    def to_dir(x):
        k = k0 + x[0] * e1 + x[1] * e2
        return k / np.sqrt(k @ k)

    res = minimize(
        lambda x: float(evaluate(to_dir(x))[0]),
        np.zeros(2),
        method="Nelder-Mead",
        options={
            "initial_simplex": np.array([[0.0, 0.0], [step, 0.0], [0.0, step]]),
            "xatol": opts.xatol,
            "fatol": opts.tol,
            "maxiter": opts.maxiter,
        },
    )
    return to_dir(res.x), float(res.fun), bool(res.success)


def _minimize_projective(s, f, opts):
    evaluate = projective_objective(s, f)
    n_theta, n_phi = opts.grid
    dirs = sphere_grid(n_theta, n_phi)
    values = evaluate(dirs)
    spacing = np.pi / max(n_theta - 1, 1)
    starts = _select_starts(dirs, values, opts.n_starts, 2 * spacing)
    starts += [np.array(v, float) for v in np.eye(3)]
    b = to_bloch(s)
    if np.linalg.norm(b.rB) > 1e-12:
        starts.append(b.rB / np.linalg.norm(b.rB))
    s2 = s2_minimize_qudit_qubit(b)
    if s2.k_star is not None:
        starts.append(s2.k_star)
    starts = _distinct(starts, 0.5 * spacing)
    trace = []
    best = None
    for idx, k0 in enumerate(starts):
        k, val, ok = _refine_direction(evaluate, k0, 0.5 * spacing, opts)
        trace.append((idx, val))
        if best is None or val < best[1]:
            best = (k, val, ok)
    k, val, ok = best
    k = canonical_sign(k)
    return MinimizationOutcome(val, projective_from_direction(k), trace, ok, opts.seed, "projective", k)


# ---------------------------------------------------------------------------
# isometry-parameterized searches
# ---------------------------------------------------------------------------

def isometry(z):
    """Polar factor ``Z (Z^dag Z)^{-1/2}``: an m x n matrix with orthonormal columns."""
    ev, vecs = np.linalg.eigh(z.conj().T @ z)
    return z @ (vecs * (1.0 / np.sqrt(np.clip(ev, 1e-300, None)))) @ vecs.conj().T


def _unpack(x, m, n):
    return (x[: m * n] + 1j * x[m * n:]).reshape(m, n)


def _pack(z):
    z = z.ravel()
    return np.concatenate([z.real, z.imag])


def _restart_search(objective, m, n, starts, opts):
    """BFGS from each start; returns (best_x, best_value, trace, converged).

    ``objective`` maps the packed real vector of ``Z`` to the value.
    """
    trace = []
    best = None
    for idx, z0 in enumerate(starts):
        res = minimize(objective, _pack(z0), method="BFGS", options={"maxiter": opts.maxiter, "gtol": 1e-9})
        val = float(res.fun)
        trace.append((idx, val))
        # status 2 = precision loss: the finite-difference floor was reached
        ok = res.status in (0, 2)
        if best is None or val < best[1]:
            best = (res.x, val, ok)
    return best[0], best[1], trace, best[2]


def _packed_objective(tmat, m, n, f):
    tmat = np.ascontiguousarray(tmat, dtype=np.complex128)
    code, a, b = f.kernel_args
    kernel = kernels.isometry_objective_numba if kernels.USE_NUMBA else kernels.isometry_objective_numpy
    a, b = float(a), float(b)

    def evaluate(x):
        return float(kernel(x, m, n, tmat, code, a, b, TAU_PROB))

    return evaluate


def _random_starts(rng, m, n, count):
    return [rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)) for _ in range(count)]


def povm_objective(s, f):
    """``U -> S_f(A|B_M)`` for the POVM with ``sqrt(r_j)|j_B> = conj(U[j])``."""
    t = s.tensor
    code, a, b = f.kernel_args

    def evaluate(u):
        blocks = np.einsum("jb,abcd,jd->jac", u, t, u.conj())
        return kernels.weighted_entropy_sum(blocks, code, a, b, TAU_PROB)

    return evaluate


def _povm_tmat(s):
    # T_bd[a, c] = rho[(a, b), (c, d)]
    return s.tensor.transpose(1, 3, 0, 2).reshape(s.dB * s.dB, s.dA * s.dA)


def _minimize_povm(s, f, m, opts):
    rng = np.random.default_rng(opts.seed)
    dB = s.dB
    starts = []
    if dB == 2:
        proj = _minimize_projective(s, f, opts)
        z = 1e-3 * (rng.standard_normal((m, dB)) + 1j * rng.standard_normal((m, dB)))
        z[:2] = proj.best_measurement.kets.conj()
        starts.append(z)
    z = 1e-3 * (rng.standard_normal((m, dB)) + 1j * rng.standard_normal((m, dB)))
    z[:dB] += np.eye(dB)
    starts.append(z)
    starts += _random_starts(rng, m, dB, max(opts.restarts - len(starts), 0))
    x, val, trace, ok = _restart_search(_packed_objective(_povm_tmat(s), m, dB, f), m, dB, starts, opts)
    u = isometry(_unpack(x, m, dB))
    povm = Rank1Povm.from_vectors(u.conj(), drop=1e-14)
    return MinimizationOutcome(val, povm, trace, ok, opts.seed, f"povm:{m}")


def minimize_conditional_entropy(s, f, mode="projective", outcomes=None, options=None):
    """Minimum of ``S_f(A|B_M)`` over measurements on B.

    ``mode="projective"`` searches spin directions of a qubit B (grid seeding
    followed by Nelder-Mead on the tangent plane); ``mode="povm"`` (or
    ``"povm:m"``) searches ``m``-outcome rank-1 POVMs, ``m = dB**2`` by default.
    """
    opts = _options(options)
    mode, m = _parse_mode(mode, outcomes, s.dB)
    if mode == "projective":
        return _minimize_projective(s, f, opts)
    return _minimize_povm(s, f, m, opts)


def quantum_discord(s, base=2.0, mode=None, options=None):
    """``min_M S(A|B_M) - [S(A,B) - S(B)]`` with von Neumann entropies."""
    f = von_neumann(base)
    if mode is None:
        mode = "projective" if s.dB == 2 else "povm"
    best = minimize_conditional_entropy(s, f, mode, options=options).best_value
    return best - (entropy(s.rho, f) - entropy(s.rho_B, f))


# ---------------------------------------------------------------------------
# entanglement measures
# ---------------------------------------------------------------------------

_YY = np.kron(PAULI[1], PAULI[1])


def concurrence(s):
    """Wootters concurrence of a two-qubit state."""
    if (s.dA, s.dB) != (2, 2):
        raise DomainError("concurrence is implemented for two qubits only")
    ev, vecs = np.linalg.eigh(s.rho)
    root = (vecs * np.sqrt(np.clip(ev, 0.0, None))) @ vecs.conj().T
    flipped = _YY @ s.rho.conj() @ _YY
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(root @ flipped @ root), 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def partial_transpose(s):
    return s.tensor.transpose(0, 3, 2, 1).reshape(s.dim, s.dim)


def negativity(s):
    """``Tr |rho^{T_B}| - 1``."""
    ev = np.linalg.eigvalsh(partial_transpose(s))
    return float(np.sum(np.abs(ev)) - 1.0)


def eof_from_concurrence(c, base=2.0):
    """Two-qubit von Neumann entanglement of formation from the concurrence."""
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    f = von_neumann(base)
    return float(f(x) + f(1.0 - x))


# ---------------------------------------------------------------------------
# decompositions of rho_AC
# ---------------------------------------------------------------------------

@dataclass
class DecompositionEnsemble:
    """``rho = sum_j p_j |j><j|`` with ``sqrt(p_j)|j> = sum_k U_jk sqrt(q_k)|k~>``."""

    probs: np.ndarray
    vectors: np.ndarray
    U: np.ndarray

    def density_matrix(self):
        return np.einsum("j,ja,jb->ab", self.probs, self.vectors, self.vectors.conj())


def _eigen_support(rho, tol=1e-12):
    ev, vecs = np.linalg.eigh(rho)
    keep = ev > tol
    return ev[keep][::-1], vecs[:, keep][:, ::-1]


def _ensemble_from_isometry(u, q, basis, tol=TAU_PROB):
    psi = u @ (np.sqrt(q)[:, None] * basis.T)
    p = np.sum(np.abs(psi) ** 2, axis=1)
    live = p > tol
    return DecompositionEnsemble(p[live], psi[live] / np.sqrt(p[live])[:, None], u)


def ensemble_objective(rho_ac, f):
    """``U -> sum_j p_j S_f(rho_A^j)`` over decompositions of ``rho_AC``."""
    q, basis = _eigen_support(rho_ac.rho)
    amp = np.sqrt(q)[:, None] * basis.T
    dA, dC = rho_ac.dA, rho_ac.dB
    code, a, b = f.kernel_args

    def evaluate(u):
        mats = (u @ amp).reshape(-1, dA, dC)
        blocks = np.einsum("jac,jbc->jab", mats, mats.conj())
        return kernels.weighted_entropy_sum(blocks, code, a, b, TAU_PROB)

    return evaluate, q, basis


def _ensemble_tmat(rho_ac, q, basis):
    # T_kl = M_k M_l^dag with M_k = sqrt(q_k) |k~> reshaped to dA x dC
    mats = (np.sqrt(q)[:, None] * basis.T).reshape(-1, rho_ac.dA, rho_ac.dB)
    n = mats.shape[0]
    return np.einsum("kac,lbc->klab", mats, mats.conj()).reshape(n * n, rho_ac.dA ** 2)


@dataclass
class EofOutcome:
    best_value: float
    ensemble: DecompositionEnsemble
    by_outcomes: dict
    trace: list
    converged: bool
    seed: int = 0


def eof_bruteforce(rho_ac, f, m=None, options=None):
    """Convex-roof ``min sum_j p_j S_f(rho_A^j)`` over ``m``-element decompositions.

    ``m=None`` searches both ``m = rank`` and ``m = rank + 2`` and keeps the
    better; per-size minima are in ``by_outcomes``.
    """
    opts = _options(options)
    q, basis = _eigen_support(rho_ac.rho)
    n = q.size
    tmat = _ensemble_tmat(rho_ac, q, basis)
    sizes = [n, n + 2] if m is None else [int(m)]
    if min(sizes) < n:
        raise DomainError(f"decompositions of a rank-{n} state need at least {n} elements")
    if n == 1:
        ens = DecompositionEnsemble(np.ones(1), basis.T.copy(), np.ones((1, 1)))
        val = entropy(rho_ac.rho_A, f)
        return EofOutcome(val, ens, {1: val}, [(0, val)], True, opts.seed)
    rng = np.random.default_rng(opts.seed)
    by_outcomes, trace_all, best = {}, [], None
    for size in sizes:
        z = np.zeros((size, n), dtype=np.complex128)
        z[:n] = np.eye(n)
        z += 1e-3 * (rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n)))
        starts = [z] + _random_starts(rng, size, n, opts.restarts - 1)
        x, val, trace, ok = _restart_search(_packed_objective(tmat, size, n, f), size, n, starts, opts)
        by_outcomes[size] = val
        trace_all += [(len(trace_all) + i, v) for i, v in trace]
        if best is None or val < best[1]:
            best = (isometry(_unpack(x, size, n)), val, ok)
    u, val, ok = best
    return EofOutcome(val, _ensemble_from_isometry(u, q, basis), by_outcomes, trace_all, ok, opts.seed)


def _split_ac_b(purification):
    t = purification.tensor
    dA, dB, dC = purification.dA, purification.dB, purification.dC
    return t.transpose(0, 2, 1).reshape(dA * dC, dB)


def measurement_to_decomposition(povm, purification):
    """Decomposition of ``rho_AC`` induced by measuring ``povm`` on B."""
    mat = _split_ac_b(purification)
    q, basis = _eigen_support(mat @ mat.conj().T)
    w = np.sqrt(povm.weights)[:, None] * povm.kets
    phi = mat @ w.conj().T
    p = np.sum(np.abs(phi) ** 2, axis=0)
    live = p > TAU_PROB
    vectors = (phi[:, live] / np.sqrt(p[live])).T
    u = (basis.conj().T @ phi).T / np.sqrt(q)[None, :]
    return DecompositionEnsemble(p[live], vectors, u)


def decomposition_to_measurement(e, purification, tol=1e-9):
    """Rank-1 POVM on B whose outcomes prepare the ensemble ``e`` on AC."""
    mat = _split_ac_b(purification)
    rho_ac = mat @ mat.conj().T
    dev = np.max(np.abs(e.density_matrix() - rho_ac))
    if dev > tol:
        raise DomainError(f"ensemble does not reproduce rho_AC (deviation {dev:.3e})")
    q, basis = _eigen_support(rho_ac)
    kets_b = (basis.conj().T @ mat) / np.sqrt(q)[:, None]
    amps = np.sqrt(e.probs)[:, None] * e.vectors
    u = (amps @ basis.conj()) / np.sqrt(q)[None, :]
    gram = u.conj().T @ u
    if np.max(np.abs(gram - np.eye(q.size))) > tol:
        raise DomainError("ensemble amplitudes are not an isometry in the eigenbasis of rho_AC")
    vectors = u.conj() @ kets_b
    dB = purification.dB
    if q.size < dB:
        # complete on the orthogonal complement of supp(rho_B); those outcomes never occur
        _, _, vh = np.linalg.svd(kets_b)
        vectors = np.vstack([vectors, vh[q.size:]])
    return Rank1Povm.from_vectors(vectors, drop=1e-14)
