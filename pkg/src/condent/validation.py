"""Randomized invariant suites, run by ``condent validate`` and the test-suite.

Each suite draws ``n`` instances from a seeded generator, computes a deviation
per instance and counts instances whose deviation exceeds the suite tolerance.
Deviations are signed so that ``<= tol`` means pass (an inequality ``a <= b``
contributes ``a - b``).
"""

from dataclasses import dataclass

import numpy as np

from . import analytic, conditional, correlations, measurement, states
from .errors import InvalidParametersError
from .entropy import entropy, entropy_of_probabilities, linear, majorizes, tsallis, von_neumann

ENTROPIES = (von_neumann(), linear(2.0), tsallis(3.0))


@dataclass
class SuiteResult:
    name: str
    samples: int
    failures: int
    worst: float
    tol: float

    @property
    def passed(self):
        return self.failures == 0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.samples - self.failures}/{self.samples} worst={self.worst:.3e} tol={self.tol:.1e}"


def _x_params(rng):
    """Random valid X-state parameters by rejection on the matrix entries."""
    while True:
        rA, rB, Jz = rng.uniform(-1, 1, 3)
        Jx, Jy = rng.uniform(-1, 1, 2)
        try:
            return states.x_state(rA, rB, Jx, Jy, Jz), (rA, rB, Jx, Jy, Jz)
        except InvalidParametersError:
            continue


def _random_qubit_state(rng):
    return states.random_state(2, 2, rng, rank=int(rng.integers(1, 5)))


# each generator yields deviations for one instance

def _bloch_roundtrip(rng):
    dA, dB = rng.integers(2, 4, 2)
    s = states.random_state(int(dA), int(dB), rng)
    return [np.max(np.abs(states.from_bloch(states.to_bloch(s)).rho - s.rho))]


def _correlation_norm(rng):
    dA, dB = rng.integers(2, 4, 2)
    s = states.random_state(int(dA), int(dB), rng)
    b = states.to_bloch(s)
    lhs = np.sum(np.abs(s.rho - np.kron(s.rho_A, s.rho_B)) ** 2)
    return [abs(lhs - np.sum(b.C ** 2) / s.dim)]


def _purity_bloch(rng):
    d = int(rng.integers(2, 5))
    rho = states.random_density_matrix(d, rng)
    r = states.bloch_vector(rho)
    s2 = 1.0 - np.real(np.trace(rho @ rho))
    pure = states.random_density_matrix(d, rng, rank=1)
    return [abs(s2 - conditional.linear_entropy_from_bloch(r, d, 1.0)),
            abs(np.sum(states.bloch_vector(pure) ** 2) - (d - 1))]


def _x_parity(rng):
    s, _ = _x_params(rng)
    zz = np.diag([1.0, -1.0, -1.0, 1.0])
    return [np.max(np.abs(zz @ s.rho - s.rho @ zz))]


def _majorization(rng):
    d = int(rng.integers(2, 6))
    p = rng.dirichlet(np.ones(d))
    # a doubly stochastic mix of p is majorized by p
    t = rng.random()
    perm = rng.permutation(d)
    q = t * p + (1 - t) * p[perm]
    if not majorizes(q, p):
        return [np.inf]
    return [entropy_of_probabilities(p, f) - entropy_of_probabilities(q, f) for f in ENTROPIES]


def _entropy_concavity(rng):
    d = int(rng.integers(2, 5))
    rhos = [states.random_density_matrix(d, rng) for _ in range(3)]
    q = rng.dirichlet(np.ones(3))
    mix = sum(qi * r for qi, r in zip(q, rhos))
    return [sum(qi * entropy(r, f) for qi, r in zip(q, rhos)) - entropy(mix, f) for f in ENTROPIES]


def _qubit_bound(rng):
    rho = states.random_density_matrix(2, rng)
    return [entropy(rho, linear(2.0)) - entropy(rho, von_neumann())]


def _povm_consistency(rng):
    dA, dB = (int(x) for x in rng.integers(2, 4, 2))
    s = states.random_state(dA, dB, rng)
    m = measurement.random_rank1_povm(dB, int(rng.integers(dB, dB * dB + 1)), rng)
    p, blocks = measurement.outcome_blocks(s, m)
    return [abs(p.sum() - 1.0), np.max(np.abs(blocks.sum(axis=0) - s.rho_A))]


def _pure_conditionals(rng):
    dA, dB = (int(x) for x in rng.integers(2, 4, 2))
    s = states.random_pure_state(dA, dB, rng)
    m = measurement.random_rank1_povm(dB, dB + 1, rng)
    p, blocks = measurement.outcome_blocks(s, m)
    return [abs(1.0 - np.real(np.trace(b @ b)) / pj ** 2) for pj, b in zip(p, blocks) if pj > 1e-9]


def _refinement(rng):
    dA, dB = (int(x) for x in rng.integers(2, 4, 2))
    s = states.random_state(dA, dB, rng)
    fine = measurement.random_rank1_povm(dB, dB * dB, rng)
    coarse = measurement.refine(fine, measurement.random_stochastic(int(rng.integers(1, dB * dB)), dB * dB, rng))
    return [conditional.conditional_entropy(s, fine, f).value - conditional.conditional_entropy(s, coarse, f).value
            for f in ENTROPIES]


def _state_concavity(rng):
    dA, dB = (int(x) for x in rng.integers(2, 4, 2))
    parts = [states.random_state(dA, dB, rng) for _ in range(3)]
    q = rng.dirichlet(np.ones(3))
    mix = states.BipartiteState(sum(qi * p.rho for qi, p in zip(q, parts)), dA, dB)
    m = measurement.random_rank1_povm(dB, dB + 1, rng)
    return [sum(qi * conditional.conditional_entropy(p, m, f).value for qi, p in zip(q, parts))
            - conditional.conditional_entropy(mix, m, f).value for f in ENTROPIES]


def _gain_nonnegative(rng):
    dA, dB = (int(x) for x in rng.integers(2, 4, 2))
    s = states.random_state(dA, dB, rng)
    m = measurement.random_rank1_povm(dB, int(rng.integers(dB, dB * dB + 1)), rng)
    return [-conditional.information_gain(s, m, f) for f in ENTROPIES]


def _distance_identities(rng):
    dA, dB = (int(x) for x in rng.integers(2, 4, 2))
    s = states.random_state(dA, dB, rng)
    m = measurement.random_rank1_povm(dB, dB + 1, rng)
    p, blocks = measurement.outcome_blocks(s, m)
    live = p > 1e-12
    cond = blocks[live] / p[live][:, None, None]
    f = linear(1.0)
    res = conditional.conditional_entropy(s, m, f)
    d1 = np.sum(p[live] * [np.sum(np.abs(c - np.eye(dA) / dA) ** 2) for c in cond])
    d2 = np.sum(p[live] * [np.sum(np.abs(s.rho_A - c) ** 2) for c in cond])
    return [abs(d1 - ((1 - 1 / dA) - res.value)), abs(d2 - res.gain)]


def _closed_form_s2(rng):
    dA = int(rng.integers(2, 4))
    s = states.random_state(dA, 2, rng)
    m = measurement.random_rank1_povm(2, int(rng.integers(2, 5)), rng)
    b = states.to_bloch(s)
    return [abs(conditional.conditional_s2_closed_form(b, dA, 2, m, 1.0)
                - conditional.conditional_entropy(s, m, linear(1.0)).value)]


def _mc_scale_invariance(rng):
    s = states.random_state(int(rng.integers(2, 4)), 2, rng)
    b = states.to_bloch(s)
    k = rng.standard_normal(3)
    c = rng.uniform(0.1, 10) * rng.choice([-1, 1])
    return [abs(analytic.mc_ratio(b, k) - analytic.mc_ratio(b, c * k))]


def _analytic_vs_grid(rng):
    s = states.random_state(int(rng.integers(2, 4)), 2, rng)
    b = states.to_bloch(s)
    res = analytic.s2_minimize_qudit_qubit(b, scale=1.0)
    best = correlations.minimize_conditional_entropy(s, linear(1.0), "projective")
    return [abs(res.s2_min - best.best_value)]


def _x_inequality_chain(rng):
    s, (rA, rB, Jx, Jy, Jz) = _x_params(rng)
    c2 = correlations.concurrence(s) ** 2
    mid = max(Jx * Jx, Jy * Jy)
    i2, _ = analytic.x_state_i2(rA, rB, Jx, Jy, Jz)
    return [c2 - mid, mid - i2]


def _negativity_bound(rng):
    s = _random_qubit_state(rng)
    b = states.to_bloch(s)
    out = [correlations.negativity(s) ** 2 - analytic.geometric_discord(b)]
    pure = states.random_pure_state(2, 2, rng)
    out.append(abs(correlations.negativity(pure) ** 2 - analytic.geometric_discord(states.to_bloch(pure))))
    return out


def _discord_classical(rng):
    dA = int(rng.integers(2, 4))
    q = rng.dirichlet(np.ones(2))
    rhos = [states.random_density_matrix(dA, rng) for _ in range(2)]
    s = states.classically_correlated(q, rhos, 2, states.random_unitary(2, rng))
    return [abs(correlations.quantum_discord(s))]


def _discord_nonnegative(rng):
    return [-correlations.quantum_discord(_random_qubit_state(rng))]


def _eof_identity(rng):
    s = states.random_state(2, 2, rng, rank=2)
    rac = states.purify(s).reduced("AC")
    out = []
    for f in (von_neumann(), linear(2.0)):
        out.append(abs(correlations.eof_bruteforce(rac, f).best_value
                       - correlations.minimize_conditional_entropy(s, f).best_value))
    return out


# name -> (generator, default tolerance, default sample count)
SUITES = {
    "bloch_roundtrip": (_bloch_roundtrip, 1e-10, 50),
    "correlation_norm": (_correlation_norm, 1e-12, 50),
    "purity_bloch": (_purity_bloch, 1e-12, 50),
    "x_parity": (_x_parity, 0.0, 50),
    "majorization": (_majorization, 1e-12, 50),
    "entropy_concavity": (_entropy_concavity, 1e-12, 50),
    "qubit_bound": (_qubit_bound, 1e-12, 50),
    "povm_consistency": (_povm_consistency, 1e-12, 50),
    "pure_conditionals": (_pure_conditionals, 1e-9, 50),
    "refinement": (_refinement, 1e-12, 50),
    "state_concavity": (_state_concavity, 1e-12, 50),
    "gain_nonnegative": (_gain_nonnegative, 1e-12, 50),
    "distance_identities": (_distance_identities, 1e-12, 50),
    "closed_form_s2": (_closed_form_s2, 1e-12, 50),
    "mc_scale_invariance": (_mc_scale_invariance, 1e-12, 50),
    "analytic_vs_grid": (_analytic_vs_grid, 1e-7, 20),
    "x_inequality_chain": (_x_inequality_chain, 1e-12, 50),
    "negativity_bound": (_negativity_bound, 1e-8, 50),
    "discord_classical": (_discord_classical, 2e-6, 10),
    "discord_nonnegative": (_discord_nonnegative, 1e-9, 20),
    "eof_identity": (_eof_identity, 2e-6, 2),
}


def run_suite(name, samples=None, tol=None, seed=0):
    gen, default_tol, default_n = SUITES[name]
    n = default_n if samples is None else int(samples)
    tol = default_tol if tol is None else float(tol)
    rng = np.random.default_rng([seed, list(SUITES).index(name)])
    failures, worst = 0, -np.inf
    for _ in range(n):
        devs = [float(d) for d in gen(rng)]
        top = max(devs) if devs else -np.inf
        worst = max(worst, top)
        failures += top > tol
    return SuiteResult(name, n, int(failures), float(worst) if n else 0.0, tol)


def run_all(samples=None, tolerances=None, seed=0, names=None):
    """Run suites in registration order; ``samples`` scales every default count."""
    tolerances = dict(tolerances or {})
    unknown = set(tolerances) - set(SUITES)
    if unknown:
        raise KeyError(f"unknown suite(s) in tolerance overrides: {', '.join(sorted(unknown))}")
    out = []
    for name in names or SUITES:
        n = None
        if samples is not None:
            default_n = SUITES[name][2]
            # the optimizer-heavy suites never grow past their default
            n = min(int(samples), default_n) if default_n < 20 else int(samples)
        out.append(run_suite(name, n, tolerances.get(name), seed))
    return out
