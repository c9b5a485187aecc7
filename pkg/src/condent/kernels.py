"""Hot numeric kernels.

Every kernel exists twice: a loop version compiled with numba and a
vectorized numpy version. The public names dispatch to one of them according
to :data:`condent._jit.USE_NUMBA`; both variants stay importable so they can be
cross-checked and benchmarked against each other.

Entropic functions are passed to kernels as ``(code, a, b)``:

=====  =======================  ==========================
code   f(p)                     parameters
=====  =======================  ==========================
0      ``-a p ln p``            ``a = 1/ln(base)``
1      ``a (p - p**b)``         ``a`` = scale, ``b`` = q
2      ``a (p - p**2)``         ``a`` = scale
=====  =======================  ==========================
"""

import numpy as np

from ._jit import USE_NUMBA, njit

VON_NEUMANN, TSALLIS, LINEAR = 0, 1, 2


# ---------------------------------------------------------------------------
# numba variants
# ---------------------------------------------------------------------------

@njit(cache=True)
def _f_scalar(p, code, a, b):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    if code == 0:
        return -a * p * np.log(p)
    if code == 1:
        return a * (p - p ** b)
    return a * (p - p * p)


@njit(cache=True)
def _weighted_block(sigma, code, a, b, tau_prob):
    d = sigma.shape[0]
    p = 0.0
    for i in range(d):
        p += sigma[i, i].real
    if p <= tau_prob:
        return 0.0
    ev = np.linalg.eigvalsh(sigma)
    acc = 0.0
    for i in range(d):
        acc += _f_scalar(ev[i] / p, code, a, b)
    return p * acc


@njit(cache=True)
def weighted_entropy_sum_numba(sigmas, code, a, b, tau_prob):
    total = 0.0
    for j in range(sigmas.shape[0]):
        total += _weighted_block(sigmas[j], code, a, b, tau_prob)
    return total


@njit(cache=True)
def qubit_b_grid_numba(rho_a, paulis_a, dirs, code, a, b, tau_prob):
    n = dirs.shape[0]
    d = rho_a.shape[0]
    out = np.empty(n)
    plus = np.empty((d, d), dtype=np.complex128)
    minus = np.empty((d, d), dtype=np.complex128)
    for t in range(n):
        for r in range(d):
            for c in range(d):
                m = (dirs[t, 0] * paulis_a[0, r, c]
                     + dirs[t, 1] * paulis_a[1, r, c]
                     + dirs[t, 2] * paulis_a[2, r, c])
                plus[r, c] = 0.5 * (rho_a[r, c] + m)
                minus[r, c] = 0.5 * (rho_a[r, c] - m)
        out[t] = (_weighted_block(plus, code, a, b, tau_prob)
                  + _weighted_block(minus, code, a, b, tau_prob))
    return out


@njit(cache=True)
def quadratic_ratio_grid_numba(num, den, dirs):
    n = dirs.shape[0]
    out = np.empty(n)
    for t in range(n):
        top = 0.0
        bot = 0.0
        for i in range(3):
            for j in range(3):
                kk = dirs[t, i] * dirs[t, j]
                top += num[i, j] * kk
                bot += den[i, j] * kk
        out[t] = top / bot
    return out


@njit(cache=True)
def isometry_objective_numba(x, m, n, tmat, code, a, b, tau_prob):
    mn = m * n
    z = np.empty((m, n), dtype=np.complex128)
    for j in range(m):
        for k in range(n):
            z[j, k] = x[j * n + k] + 1j * x[mn + j * n + k]
    ev, vecs = np.linalg.eigh(z.conj().T @ z)
    for k in range(n):
        ev[k] = 1.0 / np.sqrt(max(ev[k], 1e-300))
    u = z @ ((vecs * ev) @ vecs.conj().T)
    dA2 = tmat.shape[1]
    d = int(np.sqrt(dA2) + 0.5)
    flat = np.empty(dA2, dtype=np.complex128)
    total = 0.0
    for j in range(m):
        flat[:] = 0.0
        for k in range(n):
            for l in range(n):
                c = u[j, k] * np.conj(u[j, l])
                row = k * n + l
                for e in range(dA2):
                    flat[e] += c * tmat[row, e]
        total += _weighted_block(flat.reshape(d, d), code, a, b, tau_prob)
    return total


# ---------------------------------------------------------------------------
# numpy variants
# ---------------------------------------------------------------------------

def _f_vec(p, code, a, b):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    inside = (p > 0.0) & (p < 1.0)
    x = p[inside]
    if code == VON_NEUMANN:
        out[inside] = -a * x * np.log(x)
    elif code == TSALLIS:
        out[inside] = a * (x - x ** b)
    else:
        out[inside] = a * (x - x * x)
    return out


def _weighted_terms(sigmas, code, a, b, tau_prob):
    p = np.real(np.trace(sigmas, axis1=-2, axis2=-1))
    keep = p > tau_prob
    terms = np.zeros(p.shape)
    if np.any(keep):
        ev = np.linalg.eigvalsh(sigmas[keep]) / p[keep][:, None]
        terms[keep] = p[keep] * _f_vec(ev, code, a, b).sum(axis=-1)
    return terms


def weighted_entropy_sum_numpy(sigmas, code, a, b, tau_prob):
    return float(_weighted_terms(sigmas, code, a, b, tau_prob).sum())


def qubit_b_grid_numpy(rho_a, paulis_a, dirs, code, a, b, tau_prob):
    m = np.einsum("ni,irc->nrc", dirs, paulis_a)
    blocks = np.stack([0.5 * (rho_a + m), 0.5 * (rho_a - m)], axis=1)
    d = rho_a.shape[0]
    terms = _weighted_terms(blocks.reshape(-1, d, d), code, a, b, tau_prob)
    return terms.reshape(-1, 2).sum(axis=1)


def quadratic_ratio_grid_numpy(num, den, dirs):
    top = np.einsum("ni,ij,nj->n", dirs, num, dirs)
    bot = np.einsum("ni,ij,nj->n", dirs, den, dirs)
    return top / bot


def isometry_objective_numpy(x, m, n, tmat, code, a, b, tau_prob):
    z = (x[: m * n] + 1j * x[m * n:]).reshape(m, n)
    ev, vecs = np.linalg.eigh(z.conj().T @ z)
    u = z @ (vecs * (1.0 / np.sqrt(np.clip(ev, 1e-300, None)))) @ vecs.conj().T
    d = int(round(np.sqrt(tmat.shape[1])))
    coeff = (u[:, :, None] * u.conj()[:, None, :]).reshape(m, n * n)
    return weighted_entropy_sum_numpy((coeff @ tmat).reshape(m, d, d), code, a, b, tau_prob)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def weighted_entropy_sum(sigmas, code, a, b, tau_prob):
    """``sum_j p_j S_f(sigma_j / p_j)`` for unnormalized blocks ``sigma_j``.

    Blocks with trace ``p_j <= tau_prob`` contribute nothing.
    """
    sigmas = np.ascontiguousarray(sigmas, dtype=np.complex128)
    if USE_NUMBA:
        return float(weighted_entropy_sum_numba(sigmas, code, float(a), float(b), tau_prob))
    return weighted_entropy_sum_numpy(sigmas, code, a, b, tau_prob)


def qubit_b_grid(rho_a, paulis_a, dirs, code, a, b, tau_prob):
    """Conditional entropy of A for projective qubit measurements along ``dirs``.

    ``paulis_a[i] = Tr_B[rho (I x sigma_i)]``; the two unnormalized conditional
    blocks for direction ``k`` are ``(rho_a +- k . paulis_a) / 2``.
    """
    rho_a = np.ascontiguousarray(rho_a, dtype=np.complex128)
    paulis_a = np.ascontiguousarray(paulis_a, dtype=np.complex128)
    dirs = np.ascontiguousarray(np.atleast_2d(dirs), dtype=float)
    if USE_NUMBA:
        return qubit_b_grid_numba(rho_a, paulis_a, dirs, code, float(a), float(b), tau_prob)
    return qubit_b_grid_numpy(rho_a, paulis_a, dirs, code, a, b, tau_prob)


def quadratic_ratio_grid(num, den, dirs):
    """``k^T num k / k^T den k`` for each row ``k`` of ``dirs``."""
    num = np.ascontiguousarray(num, dtype=float)
    den = np.ascontiguousarray(den, dtype=float)
    dirs = np.ascontiguousarray(np.atleast_2d(dirs), dtype=float)
    if USE_NUMBA:
        return quadratic_ratio_grid_numba(num, den, dirs)
    return quadratic_ratio_grid_numpy(num, den, dirs)


def isometry_objective(x, m, n, tmat, code, a, b, tau_prob):
    """``sum_j p_j S_f(sigma_j / p_j)`` with ``sigma_j = sum_kl U_jk conj(U_jl) T_kl``.

    ``x`` packs the real and imaginary parts of an ``m x n`` matrix ``Z``;
    ``U = Z (Z^dag Z)^{-1/2}`` is its polar isometry. Row ``k*n + l`` of
    ``tmat`` is the flattened ``dA x dA`` matrix ``T_kl``.
    """
    if USE_NUMBA:
        return float(isometry_objective_numba(x, m, n, tmat, code, float(a), float(b), tau_prob))
    return isometry_objective_numpy(x, m, n, tmat, code, a, b, tau_prob)
