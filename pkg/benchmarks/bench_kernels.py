"""Time the numba kernels against their numpy twins.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --repeat 500 --json results.json

The end-to-end rows run a full minimization in a subprocess with and without
CONDENT_DISABLE_NUMBA=1, since the flag is read at import time.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from condent import kernels
from condent._jit import NUMBA_AVAILABLE
from condent.correlations import _povm_tmat, sphere_grid
from condent.measurement import outcome_blocks, random_rank1_povm
from condent.states import PAULI, random_state

CODE_VN = (kernels.VON_NEUMANN, 1 / np.log(2), 0.0)


def cases(rng):
    s = random_state(3, 3, rng)
    _, blocks = outcome_blocks(s, random_rank1_povm(3, 9, rng))
    blocks = np.ascontiguousarray(blocks)

    q = random_state(2, 2, rng)
    pa = np.ascontiguousarray(np.einsum("abcd,idb->iac", q.tensor, PAULI))
    rho_a = np.ascontiguousarray(q.rho_A)
    dirs = sphere_grid(60, 120)

    num = rng.standard_normal((3, 3))
    num = num @ num.T
    den = np.eye(3) - 0.2 * np.outer([0, 0, 1.0], [0, 0, 1.0])

    tmat = np.ascontiguousarray(_povm_tmat(s))
    x = rng.standard_normal(2 * 9 * 3)

    return {
        "weighted_entropy_sum (9 blocks 3x3)": (
            lambda: kernels.weighted_entropy_sum_numba(blocks, *CODE_VN, 1e-12),
            lambda: kernels.weighted_entropy_sum_numpy(blocks, *CODE_VN, 1e-12)),
        "qubit_b_grid (7200 directions)": (
            lambda: kernels.qubit_b_grid_numba(rho_a, pa, dirs, *CODE_VN, 1e-12),
            lambda: kernels.qubit_b_grid_numpy(rho_a, pa, dirs, *CODE_VN, 1e-12)),
        "quadratic_ratio_grid (7200 directions)": (
            lambda: kernels.quadratic_ratio_grid_numba(num, den, dirs),
            lambda: kernels.quadratic_ratio_grid_numpy(num, den, dirs)),
        "isometry_objective (9x3 POVM)": (
            lambda: kernels.isometry_objective_numba(x, 9, 3, tmat, *CODE_VN, 1e-12),
            lambda: kernels.isometry_objective_numpy(x, 9, 3, tmat, *CODE_VN, 1e-12)),
    }


END_TO_END = """
import time, numpy as np
from condent import states, correlations, von_neumann
s = states.random_state(2, 2, np.random.default_rng(1))
correlations.minimize_conditional_entropy(s, von_neumann())
t = time.perf_counter()
for _ in range(5):
    correlations.minimize_conditional_entropy(s, von_neumann())
print((time.perf_counter() - t) / 5)
"""


def end_to_end(disable):
    env = dict(os.environ)
    env.pop("CONDENT_DISABLE_NUMBA", None)
    if disable:
        env["CONDENT_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=200)
    p.add_argument("--json", help="also write results here")
    args = p.parse_args(argv)

    if not NUMBA_AVAILABLE:
        print("numba is not installed; nothing to compare")
        return 1

    results = []
    print(f"{'kernel':42s} {'numba us':>10s} {'numpy us':>10s} {'speedup':>8s}")
    for name, (fast, slow) in cases(np.random.default_rng(0)).items():
        fast()  # compile
        tf = min(timeit.repeat(fast, number=args.repeat, repeat=3)) / args.repeat * 1e6
        ts = min(timeit.repeat(slow, number=args.repeat, repeat=3)) / args.repeat * 1e6
        results.append({"kernel": name, "numba_us": tf, "numpy_us": ts})
        print(f"{name:42s} {tf:10.1f} {ts:10.1f} {ts / tf:7.1f}x")

    tf, ts = end_to_end(False), end_to_end(True)
    results.append({"kernel": "projective minimization (end to end)", "numba_us": tf * 1e6, "numpy_us": ts * 1e6})
    print(f"{'projective minimization, s':42s} {tf:10.3f} {ts:10.3f} {ts / tf:7.1f}x")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
