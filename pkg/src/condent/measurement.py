"""Local measurements on subsystem B."""

import numpy as np

from .errors import DomainError, InvalidMeasurementError, UnsupportedMeasurementError
from .states import PAULI, BipartiteState, generator_basis

TAU_POVM = 1e-9
TAU_PROB = 1e-12


def _fix_phase(v, tol=1e-12):
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size:
        v = v * (abs(v[nz[0]]) / v[nz[0]])
    return v


class Povm:
    """POVM on B given by its element matrices, shape ``(m, dB, dB)``."""

    def __init__(self, elements, tol=TAU_POVM):
        e = np.asarray(elements, dtype=np.complex128)
        if e.ndim != 3 or e.shape[1] != e.shape[2] or e.shape[0] == 0:
            raise InvalidMeasurementError(f"POVM elements must have shape (m, d, d), got {e.shape}")
        herm = np.max(np.abs(e - e.conj().transpose(0, 2, 1)))
        if herm > tol:
            raise InvalidMeasurementError(f"POVM element not Hermitian (deviation {herm:.3e})")
        e = 0.5 * (e + e.conj().transpose(0, 2, 1))
        lowest = np.linalg.eigvalsh(e)[:, 0].min()
        if lowest < -tol:
            raise InvalidMeasurementError(f"POVM element has negative eigenvalue {lowest:.3e}")
        dev = np.max(np.abs(e.sum(axis=0) - np.eye(e.shape[1])))
        if dev > tol:
            raise InvalidMeasurementError(f"POVM elements do not sum to identity (deviation {dev:.3e})")
        self.elements = e

    @property
    def dim(self):
        return self.elements.shape[1]

    @property
    def n_outcomes(self):
        return self.elements.shape[0]

    def __len__(self):
        return self.n_outcomes

    @property
    def is_projective(self):
        e = self.elements
        prods = np.einsum("iab,jbc->ijac", e, e)
        target = np.einsum("ij,jac->ijac", np.eye(len(e)), e)
        return bool(np.max(np.abs(prods - target)) <= TAU_POVM)

    def __repr__(self):
        return f"{type(self).__name__}(n_outcomes={self.n_outcomes}, dim={self.dim})"


class Rank1Povm(Povm):
    """POVM with elements ``r_j |j><j|``; kets stored phase-fixed and normalized."""

    def __init__(self, weights, kets, tol=TAU_POVM):
        r = np.asarray(weights, dtype=float).ravel()
        kets = np.atleast_2d(np.asarray(kets, dtype=np.complex128))
        if kets.shape[0] != r.size:
            raise InvalidMeasurementError(f"{r.size} weights but {kets.shape[0]} kets")
        if np.any(r <= 0):
            raise InvalidMeasurementError("rank-1 POVM weights must be positive")
        norms = np.linalg.norm(kets, axis=1)
        if np.max(np.abs(norms - 1.0)) > tol:
            raise InvalidMeasurementError(f"POVM kets not normalized (max |norm - 1| = {np.max(np.abs(norms - 1)):.3e})")
        kets = np.array([_fix_phase(k / n) for k, n in zip(kets, norms)])
        super().__init__(r[:, None, None] * np.einsum("ja,jb->jab", kets, kets.conj()), tol)
        self.weights = r
        self.kets = kets

    @classmethod
    def from_vectors(cls, vectors, tol=TAU_POVM, drop=0.0):
        """Build from unnormalized ``w_j = sqrt(r_j) |j>``; vectors with ``r_j <= drop`` are skipped."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        r = np.sum(np.abs(vectors) ** 2, axis=1)
        keep = r > drop
        return cls(r[keep], vectors[keep] / np.sqrt(r[keep])[:, None], tol)

    def bloch_vectors(self):
        """``k_j = Tr(sigma |j><j|)``; each satisfies ``|k_j|^2 = dB - 1``."""
        s = generator_basis(self.dim)
        return np.real(np.einsum("ja,iab,jb->ji", self.kets.conj(), s, self.kets))


def as_direction(k):
    """Unit 3-vector; the zero vector is rejected."""
    k = np.asarray(k, dtype=float).ravel()
    if k.shape != (3,) or not np.all(np.isfinite(k)):
        raise DomainError(f"direction must be a finite 3-vector, got {k}")
    n = np.linalg.norm(k)
    if n == 0:
        raise DomainError("measurement direction must be non-zero")
    return k / n


def projective_from_direction(k):
    """Spin measurement ``{(I + k.sigma)/2, (I - k.sigma)/2}``, ``+k`` outcome first."""
    k = as_direction(k)
    _, vecs = np.linalg.eigh(np.einsum("i,iab->ab", k, PAULI))
    return Rank1Povm([1.0, 1.0], [vecs[:, 1], vecs[:, 0]])


def computational_basis(d):
    return Rank1Povm(np.ones(d), np.eye(d))


def basis_measurement(unitary):
    """Projective measurement onto the columns of ``unitary``."""
    u = np.asarray(unitary, dtype=np.complex128)
    return Rank1Povm(np.ones(u.shape[1]), u.T)


def outcome_blocks(s, povm):
    """Probabilities ``p_j`` and unnormalized blocks ``Tr_B[rho (I x Pi_j)]``."""
    if povm.dim != s.dB:
        raise InvalidMeasurementError(f"POVM acts on dimension {povm.dim}, subsystem B has {s.dB}")
    blocks = np.einsum("abcd,jdb->jac", s.tensor, povm.elements)
    p = np.real(np.trace(blocks, axis1=1, axis2=2))
    return p, blocks


def conditional_state(s, element):
    """``(p_j, rho_{A/j})`` for one element, given as ``(r, ket)`` or a matrix.

    Returns ``(p_j, None)`` for unreachable outcomes, ``p_j <= TAU_PROB``.
    """
    if isinstance(element, tuple):
        r, ket = element
        ket = np.asarray(ket, dtype=np.complex128)
        ket = ket / np.linalg.norm(ket)
        e = float(r) * np.outer(ket, ket.conj())
    else:
        e = np.asarray(element, dtype=np.complex128)
    if e.shape != (s.dB, s.dB):
        raise InvalidMeasurementError(f"element shape {e.shape} does not act on dB = {s.dB}")
    block = np.einsum("abcd,db->ac", s.tensor, e)
    p = float(np.real(np.trace(block)))
    if p <= TAU_PROB:
        return p, None
    return p, block / p


def refine(povm, mixing):
    """Coarse-grained POVM ``Pi_j = sum_k r_j^k Pi~_k``.

    ``mixing[j, k] = r_j^k`` must be non-negative with unit column sums. The
    result is generally not rank-1, hence a plain :class:`Povm`.
    """
    r = np.asarray(mixing, dtype=float)
    if r.ndim != 2 or r.shape[1] != povm.n_outcomes:
        raise DomainError(f"mixing must have shape (n_coarse, {povm.n_outcomes}), got {r.shape}")
    if np.any(r < 0) or np.max(np.abs(r.sum(axis=0) - 1.0)) > TAU_POVM:
        raise DomainError("mixing must be non-negative with columns summing to 1")
    return Povm(np.einsum("jk,kab->jab", r, povm.elements))


def unread_measurement_state(s, povm):
    """``sum_j (I x Pi_j) rho (I x Pi_j)`` for a projective measurement."""
    if not povm.is_projective:
        raise UnsupportedMeasurementError(
            "unread-measurement state is only defined here for projective measurements"
        )
    ia = np.eye(s.dA)
    out = np.zeros_like(s.rho)
    for e in povm.elements:
        big = np.kron(ia, e)
        out += big @ s.rho @ big
    return BipartiteState(out, s.dA, s.dB)


def random_rank1_povm(d, m, rng):
    """Random ``m``-outcome rank-1 POVM from a Haar-ish isometry."""
    if m < d:
        raise DomainError(f"a rank-1 POVM on dimension {d} needs at least {d} outcomes")
    z = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    q, _ = np.linalg.qr(z)
    return Rank1Povm.from_vectors(q.conj(), drop=1e-14)


def random_stochastic(n_coarse, n_fine, rng):
    r = rng.random((n_coarse, n_fine))
    return r / r.sum(axis=0)

