"""Trace-form entropies ``S_f(rho) = sum_j f(p_j)`` and majorization.

Three families of concave ``f`` with ``f(0) = f(1) = 0`` are provided:

* von Neumann, ``f(p) = -p log_a p``
* Tsallis, ``f(p) = s (p - p**q)`` with ``s = 1/(1 - 2**(1-q))`` (default,
  maximally mixed qubit scores 1) or ``s = 1/(q - 1)``
* linear, ``f(p) = alpha (p - p**2)``; ``alpha = 2`` is the rescaled
  two-qubit convention ``S_2 = 2 (1 - Tr rho^2)``
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidDistributionError, InvalidStateError

TAU_HERM = 1e-10
TAU_SPEC = 1e-9
TAU_PSD = 1e-10


@dataclass(frozen=True)
class EntropicFunction:
    """A concave ``f`` on [0, 1] with ``f(0) = f(1) = 0``.

    Use the constructors :func:`von_neumann`, :func:`tsallis` and
    :func:`linear` rather than instantiating directly.
    """

    kind: str
    base: float = 2.0
    q: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("von_neumann", "tsallis", "linear"):
            raise ValueError(f"unknown entropy kind {self.kind!r}")
        if self.kind == "von_neumann" and not self.base > 1:
            raise ValueError("logarithm base must exceed 1")
        if self.kind == "tsallis" and (not self.q > 0 or self.q == 1):
            raise ValueError("Tsallis index must be positive and != 1")
        # for q < 1 both Tsallis normalizations are negative, as is p - p**q
        sign = self.q - 1.0 if self.kind == "tsallis" else 1.0
        if not self.scale * sign > 0:
            raise ValueError("scale must make f positive on (0, 1)")

    @property
    def kernel_args(self):
        """``(code, a, b)`` triple understood by :mod:`condent.kernels`."""
        if self.kind == "von_neumann":
            return kernels.VON_NEUMANN, 1.0 / np.log(self.base), 0.0
        if self.kind == "tsallis":
            return kernels.TSALLIS, self.scale, self.q
        return kernels.LINEAR, self.scale, 0.0

    @property
    def label(self):
        if self.kind == "von_neumann":
            return "von_neumann(base=e)" if np.isclose(self.base, np.e) else f"von_neumann(base={self.base:g})"
        if self.kind == "tsallis":
            return f"tsallis(q={self.q:g}, scale={self.scale:.12g})"
        return f"linear(scale={self.scale:g})"

    def __call__(self, p):
        """Evaluate ``f`` elementwise; exact zeros at 0 and 1."""
        code, a, b = self.kernel_args
        arr = np.asarray(p, dtype=float)
        out = kernels._f_vec(np.atleast_1d(arr), code, a, b)
        return out.reshape(arr.shape) if arr.ndim else float(out[0])

    def second_derivative(self, p):
        """``f''(p)`` for interior ``p``."""
        p = np.asarray(p, dtype=float)
        if self.kind == "von_neumann":
            return -1.0 / (p * np.log(self.base))
        if self.kind == "tsallis":
            return -self.scale * self.q * (self.q - 1) * p ** (self.q - 2)
        return -2.0 * self.scale * np.ones_like(p)


def von_neumann(base=2.0):
    return EntropicFunction("von_neumann", base=float(base))


def tsallis(q, normalization="qubit"):
    """Tsallis entropy of index ``q``.

    ``normalization="qubit"`` uses ``1/(1 - 2**(1-q))``; ``"standard"`` uses
    ``1/(q - 1)``.
    """
    q = float(q)
    if q == 1 or q <= 0:
        raise ValueError("Tsallis index must be positive and != 1")
    if normalization == "qubit":
        scale = 1.0 / (1.0 - 2.0 ** (1.0 - q))
    elif normalization == "standard":
        scale = 1.0 / (q - 1.0)
    else:
        raise ValueError(f"unknown Tsallis normalization {normalization!r}")
    return EntropicFunction("tsallis", q=q, scale=scale)


def linear(scale=1.0):
    return EntropicFunction("linear", scale=float(scale))


def validate_density_matrix(rho, name="rho"):
    """Return ``rho`` as a complex square array or raise :class:`InvalidStateError`."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
        raise InvalidStateError(f"{name}: expected a non-empty square matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError(f"{name}: non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > TAU_HERM:
        raise InvalidStateError(f"{name}: not Hermitian (max |rho - rho^dag| = {herm:.3e} > {TAU_HERM:g})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TAU_SPEC:
        raise InvalidStateError(f"{name}: trace = {tr:.12g}, expected 1 within {TAU_SPEC:g}")
    ev_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if ev_min < -TAU_PSD:
        raise InvalidStateError(f"{name}: negative eigenvalue {ev_min:.3e} below -{TAU_PSD:g}")
    return rho


def spectrum(rho):
    """Descending, clamped, renormalized eigenvalues of a validated state."""
    rho = validate_density_matrix(rho)
    ev = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[::-1]
    ev = np.clip(ev, 0.0, None)
    return ev / ev.sum()


def _validate_spectrum(p, name):
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise InvalidDistributionError(f"{name}: empty or non-finite spectrum")
    if np.any(p < -TAU_SPEC):
        raise InvalidDistributionError(f"{name}: negative entry {p.min():.3e}")
    if abs(p.sum() - 1.0) > TAU_SPEC:
        raise InvalidDistributionError(f"{name}: entries sum to {p.sum():.12g}, expected 1")
    return np.sort(np.clip(p, 0.0, None))[::-1]


def entropy(rho, f):
    """``S_f(rho) = sum_j f(p_j)`` over the eigenvalues of ``rho``."""
    return float(np.sum(f(spectrum(rho))))


def entropy_of_probabilities(p, f):
    """``sum_j f(p_j)`` for a probability vector."""
    return float(np.sum(f(_validate_spectrum(p, "p"))))


def majorizes(p, q):
    """True iff ``p`` is majorized by ``q`` (``p`` at least as mixed as ``q``).

    Vectors of unequal length are zero-padded.
    """
    p = _validate_spectrum(p, "p")
    q = _validate_spectrum(q, "q")
    n = max(p.size, q.size)
    p = np.pad(p, (0, n - p.size))
    q = np.pad(q, (0, n - q.size))
    return bool(np.all(np.cumsum(p) <= np.cumsum(q) + TAU_SPEC))


def classical_conditional_entropy(joint, f):
    """``sum_j p_j S_f(A | B=j)`` for a joint table ``joint[i, j] = p(A=i, B=j)``."""
    joint = np.asarray(joint, dtype=float)
    if joint.ndim != 2 or joint.size == 0:
        raise InvalidDistributionError("joint distribution must be a non-empty matrix")
    if np.any(joint < 0):
        raise InvalidDistributionError(f"negative joint probability {joint.min():.3e}")
    if abs(joint.sum() - 1.0) > TAU_SPEC:
        raise InvalidDistributionError(f"joint probabilities sum to {joint.sum():.12g}, expected 1")
    total = 0.0
    for col in joint.T:
        pj = col.sum()
        if pj > 0:
            total += pj * float(np.sum(f(col / pj)))
    return total
