"""Bipartite states, generator bases, Bloch form and named state families."""

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .entropy import TAU_HERM, TAU_PSD, validate_density_matrix
from .errors import (
    DomainError,
    InvalidBlochError,
    InvalidDistributionError,
    InvalidParametersError,
    InvalidStateError,
)

PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=np.complex128
)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix on ``C^dA (x) C^dB`` (A is the left tensor factor)."""

    rho: np.ndarray
    dA: int
    dB: int

    def __post_init__(self):
        dA, dB = int(self.dA), int(self.dB)
        if dA < 1 or dB < 1:
            raise InvalidStateError(f"factor dimensions must be positive, got ({dA}, {dB})")
        rho = validate_density_matrix(self.rho)
        if rho.shape[0] != dA * dB:
            raise InvalidStateError(
                f"dimension {rho.shape[0]} does not factor as dA*dB = {dA}*{dB}"
            )
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "dA", dA)
        object.__setattr__(self, "dB", dB)

    @property
    def dim(self):
        return self.dA * self.dB

    @property
    def tensor(self):
        """``rho`` reshaped to ``(dA, dB, dA, dB)``."""
        return self.rho.reshape(self.dA, self.dB, self.dA, self.dB)

    @property
    def rho_A(self):
        return np.einsum("ajbj->ab", self.tensor)

    @property
    def rho_B(self):
        return np.einsum("iaib->ab", self.tensor)


def partial_trace(s, keep):
    """Reduced state of subsystem ``keep`` (``"A"`` or ``"B"``)."""
    if keep == "A":
        return s.rho_A
    if keep == "B":
        return s.rho_B
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def product_state(rho_a, rho_b):
    rho_a = validate_density_matrix(rho_a, "rho_A")
    rho_b = validate_density_matrix(rho_b, "rho_B")
    return BipartiteState(np.kron(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0])


def from_pure(psi, dA, dB):
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    psi = psi / np.linalg.norm(psi)
    return BipartiteState(np.outer(psi, psi.conj()), dA, dB)


# ---------------------------------------------------------------------------
# generator basis and Bloch form
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _generator_basis(d):
    sym, anti, diag = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[j, k] = m[k, j] = 1.0
            sym.append(m)
            m = np.zeros((d, d), dtype=np.complex128)
            m[j, k] = -1j
            m[k, j] = 1j
            anti.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=np.complex128)
        m[np.arange(l), np.arange(l)] = 1.0
        m[l, l] = -l
        diag.append(np.sqrt(2.0 / (l * (l + 1))) * m)
    basis = np.sqrt(d / 2.0) * np.array(sym + anti + diag)
    basis.setflags(write=False)
    return basis


def generator_basis(d):
    """Traceless Hermitian generators with ``Tr s_i s_j = d delta_ij``.

    Generalized Gell-Mann matrices ordered symmetric, antisymmetric, diagonal;
    for ``d = 2`` this is exactly ``(sigma_x, sigma_y, sigma_z)``.
    Returns a read-only array of shape ``(d*d - 1, d, d)``.
    """
    d = int(d)
    if d < 2:
        raise DomainError(f"generator basis needs d >= 2, got {d}")
    return _generator_basis(d)


@dataclass(frozen=True, eq=False)
class BlochForm:
    """``rho = [I + rA.sA (x) I + I (x) rB.sB + sum_ij J_ij sA_i (x) sB_j] / d``."""

    rA: np.ndarray
    rB: np.ndarray
    J: np.ndarray

    @property
    def C(self):
        """Correlation matrix ``J - rA rB^T``."""
        return self.J - np.outer(self.rA, self.rB)

    @property
    def dA(self):
        return int(round(np.sqrt(self.rA.size + 1)))

    @property
    def dB(self):
        return int(round(np.sqrt(self.rB.size + 1)))


def to_bloch(s):
    """Bloch data ``(rA, rB, J)`` of a bipartite state."""
    sa = generator_basis(s.dA)
    sb = generator_basis(s.dB)
    t = s.tensor
    rA = np.real(np.einsum("iba,ab->i", sa, s.rho_A))
    rB = np.real(np.einsum("iba,ab->i", sb, s.rho_B))
    J = np.real(np.einsum("ica,jdb,abcd->ij", sa, sb, t))
    return BlochForm(rA, rB, J)


def bloch_matrix(b):
    """Reconstruct the (unvalidated) matrix of a Bloch form."""
    dA, dB = b.dA, b.dB
    sa = generator_basis(dA)
    sb = generator_basis(dB)
    ia, ib = np.eye(dA), np.eye(dB)
    rho = np.eye(dA * dB, dtype=np.complex128)
    rho += np.kron(np.einsum("i,iab->ab", b.rA, sa), ib)
    rho += np.kron(ia, np.einsum("i,iab->ab", b.rB, sb))
    rho += np.einsum("ij,iab,jcd->acbd", b.J, sa, sb).reshape(dA * dB, dA * dB)
    return rho / (dA * dB)


def from_bloch(b, dA=None, dB=None):
    """Inverse of :func:`to_bloch`; raises :class:`InvalidBlochError` if not PSD."""
    b = BlochForm(np.asarray(b.rA, float), np.asarray(b.rB, float), np.asarray(b.J, float))
    if dA is not None and b.rA.size != dA * dA - 1 or dB is not None and b.rB.size != dB * dB - 1:
        raise InvalidBlochError("Bloch vector lengths do not match (dA, dB)")
    if b.J.shape != (b.rA.size, b.rB.size):
        raise InvalidBlochError(f"J has shape {b.J.shape}, expected {(b.rA.size, b.rB.size)}")
    rho = bloch_matrix(b)
    ev = np.linalg.eigvalsh(rho)[0]
    if ev < -TAU_PSD:
        raise InvalidBlochError(f"Bloch data reconstruct a matrix with eigenvalue {ev:.3e} < 0")
    return BipartiteState(rho, b.dA, b.dB)


def bloch_vector(rho):
    """``r = Tr(rho sigma)`` for a single system."""
    rho = np.asarray(rho, dtype=np.complex128)
    return np.real(np.einsum("iba,ab->i", generator_basis(rho.shape[0]), rho))


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

class XParams(NamedTuple):
    rA: float
    rB: float
    Jx: float
    Jy: float
    Jz: float


def x_state_matrix(rA, rB, Jx, Jy, Jz):
    """Standard-basis X matrix (no validation)."""
    pp, pm = (1 + (rA + rB) + Jz) / 4, (1 - (rA + rB) + Jz) / 4
    qp, qm = (1 + (rA - rB) - Jz) / 4, (1 - (rA - rB) - Jz) / 4
    ap, am = (Jx + Jy) / 4, (Jx - Jy) / 4
    return np.array(
        [[pp, 0, 0, am], [0, qp, ap, 0], [0, ap, qm, 0], [am, 0, 0, pm]],
        dtype=np.complex128,
    )


def x_state(rA, rB, Jx, Jy, Jz):
    """Two-qubit X state with local fields along z and diagonal correlations."""
    rA, rB, Jx, Jy, Jz = map(float, (rA, rB, Jx, Jy, Jz))
    m = x_state_matrix(rA, rB, Jx, Jy, Jz)
    pp, qp, qm, pm = np.real(np.diag(m))
    ap, am = m[1, 2].real, m[0, 3].real
    tol = TAU_PSD
    for name, val in (("p+", pp), ("p-", pm), ("q+", qp), ("q-", qm)):
        if val < -tol:
            raise InvalidParametersError(f"X state diagonal {name} = {val:.6g} < 0")
    if pp * pm < am * am - tol:
        raise InvalidParametersError(
            f"X state violates p+ p- >= alpha-^2 ({pp * pm:.6g} < {am * am:.6g})"
        )
    if qp * qm < ap * ap - tol:
        raise InvalidParametersError(
            f"X state violates q+ q- >= alpha+^2 ({qp * qm:.6g} < {ap * ap:.6g})"
        )
    return BipartiteState(m, 2, 2)


def x_params(s):
    """``(rA, rB, Jx, Jy, Jz)`` of a two-qubit state, assumed of X form."""
    if (s.dA, s.dB) != (2, 2):
        raise DomainError("X-state parameters need a two-qubit state")
    b = to_bloch(s)
    return XParams(b.rA[2], b.rB[2], b.J[0, 0], b.J[1, 1], b.J[2, 2])


def _probabilities(q, name="q"):
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if q.ndim != 1 or q.size == 0 or np.any(q < 0) or abs(q.sum() - 1) > 1e-9:
        raise InvalidDistributionError(f"{name} must be a probability vector, got {q}")
    return q


def schmidt_vector(q, dA, dB):
    """``sum_k sqrt(q_k) |k k>`` in computational bases."""
    q = _probabilities(q)
    if q.size > min(dA, dB):
        raise InvalidDistributionError(
            f"Schmidt vector of length {q.size} exceeds min(dA, dB) = {min(dA, dB)}"
        )
    psi = np.zeros(dA * dB, dtype=np.complex128)
    for k, qk in enumerate(q):
        psi[k * dB + k] = np.sqrt(qk)
    return psi


def pure_plus_mixed(w, q, dA=2, dB=2):
    """``w |Psi><Psi| + (1 - w) I / (dA dB)`` with Schmidt weights ``q``.

    A scalar ``q`` means the two-term vector ``(q, 1 - q)``.
    """
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"mixing weight w = {w} outside [0, 1]")
    if np.ndim(q) == 0:
        q = [float(q), 1.0 - float(q)]
    psi = schmidt_vector(q, dA, dB)
    d = dA * dB
    rho = w * np.outer(psi, psi.conj()) + (1 - w) * np.eye(d) / d
    return BipartiteState(rho, dA, dB)


def qubit_ket(theta):
    return np.array([np.cos(theta / 2), np.sin(theta / 2)], dtype=np.complex128)


def aligned_mixture(theta):
    """``(|t t><t t| + |-t -t><-t -t|) / 2`` with ``|t> = cos(t/2)|0> + sin(t/2)|1>``."""
    theta = float(theta)
    plus = np.kron(qubit_ket(theta), qubit_ket(theta))
    minus = np.kron(qubit_ket(-theta), qubit_ket(-theta))
    rho = 0.5 * (np.outer(plus, plus.conj()) + np.outer(minus, minus.conj()))
    return BipartiteState(rho, 2, 2)


def classically_correlated(weights, states, dB=None, basis=None):
    """``sum_k q_k rho_{A/k} (x) |k><k|`` with pointer kets the columns of ``basis``."""
    q = _probabilities(weights, "weights")
    states = [validate_density_matrix(r, f"rho_A/{k}") for k, r in enumerate(states)]
    if len(states) != q.size:
        raise InvalidParametersError(f"{q.size} weights but {len(states)} conditional states")
    dA = states[0].shape[0]
    if any(r.shape[0] != dA for r in states):
        raise InvalidParametersError("conditional states have different dimensions")
    dB = q.size if dB is None else int(dB)
    if q.size > dB:
        raise InvalidParametersError(f"{q.size} pointer states do not fit in dB = {dB}")
    basis = np.eye(dB, dtype=np.complex128) if basis is None else np.asarray(basis, np.complex128)
    if basis.shape != (dB, dB) or np.max(np.abs(basis.conj().T @ basis - np.eye(dB))) > 1e-9:
        raise InvalidParametersError("pointer basis must be a dB x dB unitary")
    rho = np.zeros((dA * dB, dA * dB), dtype=np.complex128)
    for k, (qk, rk) in enumerate(zip(q, states)):
        ket = basis[:, k]
        rho += qk * np.kron(rk, np.outer(ket, ket.conj()))
    return BipartiteState(rho, dA, dB)


def xy_pair_amplitudes(jx, jy, field):
    """Lowest-order pair amplitudes ``(Jx_ij - Jy_ij) / (2 B)`` with zero diagonal."""
    jx = np.asarray(jx, dtype=float)
    jy = np.asarray(jy, dtype=float)
    if field == 0:
        raise DomainError("perturbative pair amplitudes need a non-zero field")
    alpha = (jx - jy) / (2.0 * field)
    np.fill_diagonal(alpha, 0.0)
    return alpha


def xy_chain_couplings(n, jx, jy, periodic=False):
    """Uniform nearest-neighbour coupling matrices for an ``n``-site chain."""
    cx = np.zeros((n, n))
    cy = np.zeros((n, n))
    bonds = [(i, i + 1) for i in range(n - 1)]
    if periodic and n > 2:
        bonds.append((n - 1, 0))
    for i, j in bonds:
        cx[i, j] = cx[j, i] = jx
        cy[i, j] = cy[j, i] = jy
    return cx, cy


def xy_strong_field_pair(alpha, i, j):
    """Reduced X state of sites ``(i, j)`` for ``|0> + sum_{k<l} alpha_kl |kl>``.

    ``|kl>`` has spins ``k`` and ``l`` flipped against the field. The local
    phases are fixed so both coherences are real and non-negative, and the
    result is normalized to unit trace.
    """
    alpha = np.asarray(alpha, dtype=np.complex128)
    n = alpha.shape[0]
    if alpha.shape != (n, n) or not np.allclose(alpha, alpha.T):
        raise DomainError("pair amplitudes must form a symmetric square matrix")
    if not np.all(np.isfinite(alpha)):
        raise DomainError("pair amplitudes must be finite")
    if not (0 <= i < n and 0 <= j < n and i != j):
        raise DomainError(f"invalid site pair ({i}, {j}) for {n} sites")
    rest = [k for k in range(n) if k not in (i, j)]
    iu = np.triu_indices(n, 1)
    weight = float(np.sum(np.abs(alpha[iu]) ** 2))
    if weight >= 1.0:
        raise DomainError(
            f"total pair weight sum |alpha|^2 = {weight:.4g} >= 1: outside the perturbative regime"
        )
    a_ij = alpha[i, j]
    a_plus = sum(alpha[i, k] * np.conj(alpha[k, j]) for k in rest)
    # site i is A (left qubit): |10> has A flipped
    q_minus = float(sum(abs(alpha[i, k]) ** 2 for k in rest))
    q_plus = float(sum(abs(alpha[j, k]) ** 2 for k in rest))
    p_minus = abs(a_ij) ** 2
    p_plus = 1.0 + sum(
        abs(alpha[k, l]) ** 2 for a, k in enumerate(rest) for l in rest[a + 1:]
    )
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = p_plus, q_plus, q_minus, p_minus
    m[0, 3] = m[3, 0] = abs(a_ij)
    m[1, 2] = m[2, 1] = abs(a_plus)
    m /= np.trace(m).real
    return BipartiteState(m, 2, 2)


# ---------------------------------------------------------------------------
# purification
# ---------------------------------------------------------------------------

class Purification(NamedTuple):
    """Pure state on ``A (x) B (x) C`` with ``Tr_C |psi><psi| = rho_AB``."""

    psi: np.ndarray
    dA: int
    dB: int
    dC: int

    @property
    def tensor(self):
        return self.psi.reshape(self.dA, self.dB, self.dC)

    def reduced(self, keep):
        """Reduced bipartite state on ``"AB"``, ``"AC"`` or ``"BC"``."""
        t = self.tensor
        if keep == "AB":
            m = t.reshape(self.dA * self.dB, self.dC)
            return BipartiteState(m @ m.conj().T, self.dA, self.dB)
        if keep == "AC":
            m = t.transpose(0, 2, 1).reshape(self.dA * self.dC, self.dB)
            return BipartiteState(m @ m.conj().T, self.dA, self.dC)
        if keep == "BC":
            m = t.transpose(1, 2, 0).reshape(self.dB * self.dC, self.dA)
            return BipartiteState(m @ m.conj().T, self.dB, self.dC)
        raise ValueError(f"keep must be 'AB', 'AC' or 'BC', got {keep!r}")


def _fix_phase(v, tol=1e-12):
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size:
        v = v * (abs(v[nz[0]]) / v[nz[0]])
    return v


def purify(s, tol=TAU_HERM):
    """``sum_i sqrt(l_i) |i_AB>|i_C>`` with ``dC`` equal to the rank of ``rho``."""
    ev, vecs = np.linalg.eigh(s.rho)
    keep = ev > tol
    ev, vecs = ev[keep], vecs[:, keep]
    vecs = np.array([_fix_phase(v) for v in vecs.T])
    # descending eigenvalue; ties by lexicographic (real, imag) comparison
    keys = [(-round(l, 12), tuple(np.round(np.c_[v.real, v.imag].ravel(), 12))) for l, v in zip(ev, vecs)]
    order = sorted(range(len(ev)), key=lambda n: keys[n])
    ev, vecs = ev[order], vecs[order]
    ev = ev / ev.sum()
    dC = len(ev)
    psi = np.zeros((s.dim, dC), dtype=np.complex128)
    for c in range(dC):
        psi[:, c] = np.sqrt(ev[c]) * vecs[c]
    return Purification(psi.ravel(), s.dA, s.dB, dC)


# ---------------------------------------------------------------------------
# random states
# ---------------------------------------------------------------------------

def random_unitary(d, rng):
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    qm, r = np.linalg.qr(z)
    return qm * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(d, rng, rank=None):
    """Hilbert-Schmidt (Ginibre) random state of the given rank."""
    rank = d if rank is None else int(rank)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(dA, dB, rng, rank=None):
    return BipartiteState(random_density_matrix(dA * dB, rng, rank), dA, dB)


def random_pure_state(dA, dB, rng):
    return random_state(dA, dB, rng, rank=1)
