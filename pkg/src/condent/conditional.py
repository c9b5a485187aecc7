"""Measurement-dependent conditional entropy ``S_f(A|B_M)`` and closed forms.

Linear-entropy conventions: functions taking ``scale`` return
``scale * (1 - Tr rho^2)``-based quantities. ``scale=1`` is the plain linear
entropy used by the qudit formulas; ``scale=2`` is the rescaled two-qubit
convention in which a maximally mixed qubit scores 1.
"""

from dataclasses import dataclass, field

import numpy as np

from .entropy import entropy
from .errors import DomainError, UnsupportedMeasurementError
from .measurement import TAU_PROB, Rank1Povm, as_direction, outcome_blocks
from .states import _probabilities


@dataclass
class ConditionalResult:
    """``value = sum_j p_j S_f(rho_{A/j})`` and ``gain = S_f(A) - value``."""

    value: float
    gain: float
    per_outcome: list = field(default_factory=list)
    convention: str = ""


def _block_entropy(block, p, f):
    ev = np.clip(np.linalg.eigvalsh(block / p), 0.0, None)
    return float(np.sum(f(ev)))


def conditional_entropy(s, m, f):
    """Average ``S_f`` of the conditional states of A after measuring ``m`` on B."""
    p, blocks = outcome_blocks(s, m)
    per_outcome = []
    value = 0.0
    for pj, block in zip(p, blocks):
        sj = _block_entropy(block, pj, f) if pj > TAU_PROB else 0.0
        per_outcome.append((float(pj), sj))
        value += pj * sj
    return ConditionalResult(float(value), entropy(s.rho_A, f) - float(value), per_outcome, f.label)


def information_gain(s, m, f):
    return conditional_entropy(s, m, f).gain


def _rank1_bloch(m, dB):
    if not isinstance(m, Rank1Povm):
        raise UnsupportedMeasurementError("closed-form S2 needs a rank-1 POVM")
    if m.dim != dB:
        raise DomainError(f"POVM dimension {m.dim} != dB = {dB}")
    return m.weights, m.bloch_vectors()


def quadratic_information_gain(b, dA, dB, m, scale=1.0):
    """``(scale/d) sum_j r_j |C k_j|^2 / (1 + rB.k_j)`` with ``d = dA dB``."""
    r, ks = _rank1_bloch(m, dB)
    ck = ks @ b.C.T
    den = 1.0 + ks @ b.rB
    live = r * den / dB > TAU_PROB
    gain = np.sum(r[live] * np.sum(ck[live] ** 2, axis=1) / den[live])
    return float(scale * gain / (dA * dB))


def linear_entropy_from_bloch(r, d, scale=1.0):
    """``scale * (1 - (1 + |r|^2)/d)``."""
    return float(scale * (1.0 - (1.0 + np.dot(r, r)) / d))


def conditional_s2_closed_form(b, dA, dB, m, scale=1.0):
    """Linear conditional entropy from Bloch data, no diagonalization."""
    return linear_entropy_from_bloch(b.rA, dA, scale) - quadratic_information_gain(b, dA, dB, m, scale)


def purity_gain_ratio(s, m):
    """``sum_j p_j Tr rho_{A/j}^2 / Tr rho_A^2``, between 1 and dA."""
    p, blocks = outcome_blocks(s, m)
    live = p > TAU_PROB
    cond = np.sum(np.real(np.einsum("jab,jba->j", blocks[live], blocks[live])) / p[live])
    rho_a = s.rho_A
    return float(cond / np.real(np.trace(rho_a @ rho_a)))


def two_qubit_conditional_f(b, k, f):
    """Four-term closed form of ``S_f(A|B_k)`` for a two-qubit Bloch form."""
    if b.rA.size != 3 or b.rB.size != 3:
        raise DomainError("two_qubit_conditional_f needs dA = dB = 2")
    k = as_direction(k)
    ck = b.C @ k
    rbk = float(b.rB @ k)
    total = 0.0
    for nu in (1.0, -1.0):
        den = 1.0 + nu * rbk
        if den / 2 <= TAU_PROB:
            continue
        length = np.linalg.norm(b.rA + nu * ck / den)
        for mu in (1.0, -1.0):
            total += den / 2 * f(0.5 * (1.0 + mu * length))
    return float(total)


def pure_plus_mixed_minimum(w, q, dA, dB, f):
    """Minimum ``S_f(A|B)`` of ``w |Psi><Psi| + (1-w) I/d``, reached in the Schmidt basis."""
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"mixing weight w = {w} outside [0, 1]")
    if np.ndim(q) == 0:
        q = [float(q), 1.0 - float(q)]
    q = _probabilities(q)
    if q.size > min(dA, dB):
        raise DomainError(f"Schmidt vector of length {q.size} exceeds min(dA, dB)")
    q = np.pad(q, (0, dB - q.size))
    d = dA * dB
    total = 0.0
    for qk in q:
        qw = w * qk + (1.0 - w) / dB
        if qw <= 0:
            continue
        total += qw * (f((w * qk + (1.0 - w) / d) / qw) + (dA - 1) * f((1.0 - w) / (d * qw)))
    return float(total)


def pure_plus_mixed_s2_two_qubit(w, q):
    """Rescaled ``(S_2(A|B), I_2(A|B))`` for ``w |Psi><Psi| + (1-w) I/4``.

    ``|Psi> = sqrt(q)|00> + sqrt(1-q)|11>``.
    """
    x = (1.0 - 2.0 * q) ** 2
    den = 1.0 - w * w * x
    if den == 0.0:
        # w = 1 with a product |Psi>: pure product state
        return 0.0, 0.0
    s2 = (1.0 - w) * (1.0 + w - 2.0 * w * w * x) / den
    i2 = w * w * (1.0 - w * x) ** 2 / den
    return float(s2), float(i2)
