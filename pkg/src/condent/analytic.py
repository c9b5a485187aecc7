"""Closed-form S2 minimization for qudit-qubit states and geometric discord.

For a projective spin measurement along ``k`` on the qubit B the quadratic
information gain is ``(scale/dA) k^T C^T C k / k^T N_B k`` with
``N_B = I_3 - rB rB^T``. Its maximum over directions is the largest root of
``det(C^T C - lambda N_B) = 0``.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .conditional import linear_entropy_from_bloch
from .errors import DomainError
from .states import XParams

TAU_METRIC = 1e-8
TAU_DEGENERATE = 1e-9
AXES = {"x": np.array([1.0, 0.0, 0.0]), "y": np.array([0.0, 1.0, 0.0]), "z": np.array([0.0, 0.0, 1.0])}
_TIE_ORDER = ("z", "x", "y")


def default_scale(dA):
    """Rescaled convention (2) for a qubit A, plain linear entropy (1) otherwise."""
    return 2.0 if dA == 2 else 1.0


def canonical_sign(k):
    """Flip ``k`` so its first non-negligible component in z, x, y order is positive."""
    k = np.asarray(k, dtype=float)
    for i in (2, 0, 1):
        if abs(k[i]) > 1e-12:
            return k if k[i] > 0 else -k
    return k


def _preferred_in_subspace(basis):
    """Unit vector of span(basis) with the largest |k_z|, then |k_x|, then |k_y|."""
    q, _ = np.linalg.qr(basis)
    for i in (2, 0, 1):
        v = q @ q[i]
        n = np.linalg.norm(v)
        if n > 1e-9:
            return canonical_sign(v / n)
    return canonical_sign(q[:, 0])


def nearest_axis(k):
    k = np.abs(np.asarray(k, dtype=float))
    return "xyz"[int(np.argmax(k))]


@dataclass
class S2MinResult:
    """Optimal projective measurement for the linear conditional entropy."""

    lambda_max: float
    k_star: Optional[np.ndarray]
    s2_min: float
    i2_max: float
    scale: float
    degenerate: bool = False
    product: bool = False

    @property
    def axis(self):
        return None if self.k_star is None else nearest_axis(self.k_star)


def _top_generalized(a, nb):
    ev, vecs = np.linalg.eigh(nb)
    inv_sqrt = vecs @ np.diag(1.0 / np.sqrt(ev)) @ vecs.T
    lam, v = np.linalg.eigh(inv_sqrt @ a @ inv_sqrt)
    top = lam[-1]
    tied = lam >= top - TAU_DEGENERATE
    ks = inv_sqrt @ v[:, tied]
    if tied.sum() == 1:
        k = ks[:, 0]
        return max(top, 0.0), canonical_sign(k / np.linalg.norm(k)), False
    return max(top, 0.0), _preferred_in_subspace(ks), True


def s2_minimize_qudit_qubit(b, dA=None, scale=None):
    """Minimum linear conditional entropy of A over spin measurements on qubit B."""
    if b.rB.size != 3:
        raise DomainError("analytic S2 minimization needs a qubit B")
    dA = b.dA if dA is None else int(dA)
    scale = default_scale(dA) if scale is None else float(scale)
    s2_a = linear_entropy_from_bloch(b.rA, dA, scale)
    nb = np.eye(3) - np.outer(b.rB, b.rB)
    if 1.0 - b.rB @ b.rB <= TAU_METRIC:
        return S2MinResult(0.0, None, s2_a, 0.0, scale, product=True)
    C = b.C
    lam, k, degenerate = _top_generalized(C.T @ C, nb)
    gain = scale * lam / dA
    return S2MinResult(float(lam), k, s2_a - gain, float(gain), scale, degenerate)


def mc_ratio(b, k):
    """``k^T C^T C k / k^T N_B k``; invariant under rescaling of ``k``."""
    k = np.asarray(k, dtype=float)
    C = b.C
    ck = C @ k
    nb = np.eye(3) - np.outer(b.rB, b.rB)
    return float(ck @ ck / (k @ nb @ k))


class AxisChoice(NamedTuple):
    value: float
    axis: Optional[str]
    degenerate: bool


def _pick_axis(candidates, tol=TAU_DEGENERATE):
    top = max(candidates.values())
    tied = [a for a in _TIE_ORDER if candidates[a] >= top - tol]
    return AxisChoice(float(top), tied[0], len(tied) > 1)


def x_state_axis_choice(rA, rB, Jx, Jy, Jz):
    """Maximal quadratic gain of an X state, its axis and a degeneracy flag."""
    if 1.0 - rB * rB <= TAU_METRIC:
        return AxisChoice(0.0, None, True)
    return _pick_axis({"x": Jx * Jx, "y": Jy * Jy, "z": (Jz - rA * rB) ** 2 / (1.0 - rB * rB)})


def x_state_i2(rA, rB, Jx, Jy, Jz):
    """``(I_2(A|B), axis)`` of an X state, rescaled two-qubit convention.

    Ties are resolved in the order z, x, y.
    """
    choice = x_state_axis_choice(rA, rB, Jx, Jy, Jz)
    return choice.value, choice.axis


def geometric_discord(b, dA=None, scale=None):
    """Minimal squared Hilbert-Schmidt distance to a classical-quantum state."""
    if b.rB.size != 3:
        raise DomainError("geometric discord formula needs a qubit B")
    dA = b.dA if dA is None else int(dA)
    scale = default_scale(dA) if scale is None else float(scale)
    m2 = np.outer(b.rB, b.rB) + b.J.T @ b.J
    top = np.linalg.eigvalsh(m2)[-1]
    value = scale * (b.rB @ b.rB + np.sum(b.J ** 2) - top) / (2 * dA)
    return float(max(value, 0.0))


def geometric_discord_direction(b):
    """Measurement direction minimizing the geometric discord and a degeneracy flag."""
    m2 = np.outer(b.rB, b.rB) + b.J.T @ b.J
    _, k, degenerate = _top_generalized(m2, np.eye(3))
    return k, degenerate


def x_state_geometric_choice(rA, rB, Jx, Jy, Jz):
    return _pick_axis({"x": Jx * Jx, "y": Jy * Jy, "z": Jz * Jz + rB * rB})


def x_state_geometric_discord(rA, rB, Jx, Jy, Jz):
    """Rescaled geometric discord of an X state."""
    top = x_state_geometric_choice(rA, rB, Jx, Jy, Jz).value
    return 0.5 * (rB * rB + Jx * Jx + Jy * Jy + Jz * Jz - top)


def aligned_mixture_s2(theta):
    """Rescaled ``(S_2(A|B), I_2(A|B))`` of the aligned-state mixture."""
    return 0.25 * np.sin(2 * theta) ** 2, np.sin(theta) ** 4


@dataclass
class TransitionMap:
    samples: list
    transitions: list


def s2_transition_map(family, params, measure="s2", tol=1e-6):
    """Optimal principal axis along an X-state curve and the points where it changes.

    ``family(t)`` must return ``(rA, rB, Jx, Jy, Jz)``. ``measure`` is ``"s2"``
    (linear conditional entropy) or ``"geometric"`` (geometric discord).
    Degenerate samples are reported but never bracket a transition.
    """
    chooser = {"s2": x_state_axis_choice, "geometric": x_state_geometric_choice}[measure]

    def choose(t):
        return chooser(*XParams(*family(t)))

    params = [float(t) for t in params]
    samples = []
    for t in params:
        c = choose(t)
        samples.append((t, c.axis, c.degenerate))
    transitions = []
    clean = [(t, a) for t, a, deg in samples if not deg]
    for (t0, a0), (t1, a1) in zip(clean, clean[1:]):
        if a0 == a1:
            continue
        lo, hi = t0, t1
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if choose(mid).axis == a0:
                lo = mid
            else:
                hi = mid
        transitions.append((0.5 * (lo + hi), a0, a1))
    return TransitionMap(samples, transitions)
