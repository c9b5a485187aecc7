"""Independent reference computations used by the tests.

Nothing here calls the package's kernels or optimizers: matrices are built
with explicit Kronecker products and optimized with plain scipy.
"""

import numpy as np
from scipy.optimize import minimize

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


def projector(k):
    k = np.asarray(k, float) / np.linalg.norm(k)
    return [0.5 * (np.eye(2) + s * np.einsum("i,iab->ab", k, PAULI)) for s in (1, -1)]


def conditional_entropy(rho, dA, dB, elements, f):
    """``sum_j p_j S_f(Tr_B[(I x E_j) rho] / p_j)`` by explicit matrices."""
    total = 0.0
    for e in elements:
        m = np.kron(np.eye(dA), e) @ rho
        block = np.trace(m.reshape(dA, dB, dA, dB), axis1=1, axis2=3)
        p = np.trace(block).real
        if p <= 1e-13:
            continue
        ev = np.clip(np.linalg.eigvalsh(block / p), 0, None)
        total += p * sum(f(x) for x in ev)
    return total


def shannon2(p):
    p = np.asarray(p, float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def mc_max(C, rB, n_theta=181, n_phi=360):
    """Dense-grid plus Nelder-Mead maximum of ``k^T C^T C k / k^T (I - rB rB^T) k``."""
    M = C.T @ C
    N = np.eye(3) - np.outer(rB, rB)

    def ratio(tp):
        t, p = tp
        k = np.array([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])
        return (k @ M @ k) / (k @ N @ k)

    t = np.linspace(0, np.pi, n_theta)
    p = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    T, P = np.meshgrid(t, p, indexing="ij")
    K = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], -1)
    vals = np.einsum("...i,ij,...j->...", K, M, K) / np.einsum("...i,ij,...j->...", K, N, K)
    order = np.argsort(vals.ravel())[::-1][:4]
    best = -np.inf
    for idx in order:
        i, j = np.unravel_index(idx, vals.shape)
        res = minimize(lambda x: -ratio(x), [t[i], p[j]], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        best = max(best, -res.fun)
    return best


def bloch_data(rho, dA, dB, basis_a, basis_b):
    """``(rA, rB, J)`` by explicit traces against given generator lists."""
    ia, ib = np.eye(dA), np.eye(dB)
    rA = np.array([np.trace(rho @ np.kron(s, ib)).real for s in basis_a])
    rB = np.array([np.trace(rho @ np.kron(ia, s)).real for s in basis_b])
    J = np.array([[np.trace(rho @ np.kron(sa, sb)).real for sb in basis_b] for sa in basis_a])
    return rA, rB, J


def wootters(rho):
    yy = np.kron(PAULI[1], PAULI[1])
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sort(np.sqrt(np.clip(np.linalg.eigvals(r).real, 0, None)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
