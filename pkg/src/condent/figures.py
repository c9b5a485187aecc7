"""Tabulated sweeps: the pure+mixed and aligned-mixture curves, and family scans.

Tables are lists of rows in parameter order. :func:`write_csv` renders them
with 12 significant digits after a ``# seed=N`` comment line.
"""

import io as _io
import math

import numpy as np

from . import analytic, conditional, correlations, states
from .entropy import entropy, von_neumann
from .errors import DomainError
from .io import Range, build_family

FIG1_COLUMNS = ("w", "S2_cond_q05", "I2_q05", "S2_cond_q0", "I2_q0", "S_cond_q05", "I_q05", "S_cond_q0", "I_q0")
FIG2_COLUMNS = ("theta", "S2_cond", "I2", "S_cond", "I")
SCAN_COLUMNS = ("param", "axis", "i2", "discord", "discord_axis", "geometric_discord", "gd_axis", "degenerate")

# values this close to zero are written as 0 so endpoint rows do not print round-off
_ZERO = 1e-14


def format_value(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    x = float(x)
    if abs(x) < _ZERO:
        x = 0.0
    return f"{x:.12g}"


def write_csv(columns, rows, seed, comments=(), stream=None):
    """Render a table; returns the text when ``stream`` is None."""
    out = _io.StringIO() if stream is None else stream
    out.write(f"# seed={seed}\n")
    for c in comments:
        out.write(f"# {c}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(format_value(row[c]) for c in columns) + "\n")
    return out.getvalue() if stream is None else None


def _check_resolution(n):
    if int(n) < 2:
        raise DomainError(f"resolution must be at least 2 samples, got {n}")
    return int(n)


def _vn_pure_plus_mixed(w, q):
    vn = von_neumann()
    s_cond = conditional.pure_plus_mixed_minimum(w, q, 2, 2, vn)
    rho_a = np.diag([w * q + (1 - w) / 2, w * (1 - q) + (1 - w) / 2])
    return s_cond, entropy(rho_a, vn) - s_cond


def fig1_rows(resolution=101):
    """Pure state mixed with noise, Schmidt weights q = 1/2 and q = 0, over w in [0, 1].

    Both minima are reached in the Schmidt basis, so closed forms are used
    throughout: the quadratic pair for S2 and the Schmidt-basis sum for S.
    """
    rows = []
    for w in np.linspace(0.0, 1.0, _check_resolution(resolution)):
        row = {"w": w}
        for tag, q in (("q05", 0.5), ("q0", 0.0)):
            row[f"S2_cond_{tag}"], row[f"I2_{tag}"] = conditional.pure_plus_mixed_s2_two_qubit(w, q)
            row[f"S_cond_{tag}"], row[f"I_{tag}"] = _vn_pure_plus_mixed(w, q)
        rows.append(row)
    return rows


def fig2_rows(resolution=129, options=None):
    """Aligned-state mixture over theta in [0, pi/2].

    S2 columns are closed-form; the von Neumann columns come from the
    numerical minimizer over spin directions. Each row also carries the
    minimizing direction under ``"k"`` (not a CSV column).
    """
    vn = von_neumann()
    rows = []
    for t in np.linspace(0.0, np.pi / 2, _check_resolution(resolution)):
        s2, i2 = analytic.aligned_mixture_s2(t)
        s = states.aligned_mixture(t)
        best = correlations.minimize_conditional_entropy(s, vn, "projective", options=options)
        rows.append({"theta": t, "S2_cond": s2, "I2": i2, "S_cond": best.best_value,
                     "I": entropy(s.rho_A, vn) - best.best_value, "k": best.direction})
    return rows


# ---------------------------------------------------------------------------
# family scans
# ---------------------------------------------------------------------------

DEFAULT_SWEEPS = {
    "aligned": ("theta", 0.0, math.pi / 2),
    "pure_plus_mixed": ("w", 0.0, 1.0),
    "xy_pair": ("field", 1.0, 20.0),
    "x_state": ("Jz", -1.0, 1.0),
}

_XY_DEFAULTS = {"n": 4, "jx": 1.0, "jy": 0.0}


def _sweep_spec(family, params, resolution):
    params = dict(params)
    ranges = [k for k, v in params.items() if isinstance(v, Range)]
    if len(ranges) > 1:
        raise DomainError(f"scan sweeps one parameter, got ranges for {', '.join(ranges)}")
    if ranges:
        name = ranges[0]
        values = params.pop(name).samples(resolution)
    elif family in DEFAULT_SWEEPS:
        name, lo, hi = DEFAULT_SWEEPS[family]
        values = np.linspace(lo, hi, resolution)
    else:
        raise DomainError(f"family {family} has no default sweep; give a range K=lo..hi")
    if family == "xy_pair" and "alpha" not in params:
        params = {**_XY_DEFAULTS, **params}
    return name, values, params


def _is_x_family(s):
    if (s.dA, s.dB) != (2, 2):
        return False
    zz = np.diag([1.0, -1.0, -1.0, 1.0])
    return bool(np.max(np.abs(zz @ s.rho - s.rho @ zz)) < 1e-12)


def _choices(s):
    """Axis data for the S2 optimum and the geometric-discord optimum of one state."""
    if _is_x_family(s):
        p = states.x_params(s)
        c2 = analytic.x_state_axis_choice(*p)
        cg = analytic.x_state_geometric_choice(*p)
        return {"i2": c2.value, "s2": c2.axis, "s2_deg": c2.degenerate,
                "gd": analytic.x_state_geometric_discord(*p), "geometric": cg.axis, "geometric_deg": cg.degenerate}
    b = states.to_bloch(s)
    r = analytic.s2_minimize_qudit_qubit(b)
    kg, gdeg = analytic.geometric_discord_direction(b)
    return {"i2": r.i2_max, "s2": r.axis, "s2_deg": r.degenerate or r.product,
            "gd": analytic.geometric_discord(b), "geometric": analytic.nearest_axis(kg), "geometric_deg": gdeg}


def _transitions(build, values, which, tol=1e-9):
    """Bisect between consecutive non-degenerate samples whose axis differs."""

    def axis_at(t):
        return _choices(build(t))[which]

    clean = []
    for t in values:
        c = _choices(build(t))
        if not c[which + "_deg"] and c[which] is not None:
            clean.append((t, c[which]))
    found = []
    for (t0, a0), (t1, a1) in zip(clean, clean[1:]):
        if a0 == a1:
            continue
        lo, hi = t0, t1
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if axis_at(mid) == a0:
                lo = mid
            else:
                hi = mid
        found.append((which, 0.5 * (lo + hi), a0, a1))
    return found


def scan_rows(family, params, resolution=65, options=None):
    """Rows of (param, axis, i2, discord, ...) and the located axis transitions.

    ``axis`` and ``i2`` refer to the maximal quadratic gain (rescaled two-qubit
    convention), ``discord`` is base-2 quantum discord over spin directions.
    """
    n = _check_resolution(resolution)
    name, values, fixed = _sweep_spec(family, params, n)

    def build(t):
        return build_family(family, {**fixed, name: float(t)})

    vn = von_neumann()
    rows = []
    for t in values:
        s = build(t)
        if s.dB != 2:
            raise DomainError("scan needs a qubit B")
        c = _choices(s)
        best = correlations.minimize_conditional_entropy(s, vn, "projective", options=options)
        discord = best.best_value - (entropy(s.rho, vn) - entropy(s.rho_B, vn))
        rows.append({
            "param": t, "axis": c["s2"] or "none", "i2": c["i2"], "discord": discord,
            "discord_axis": analytic.nearest_axis(best.direction), "geometric_discord": c["gd"],
            "gd_axis": c["geometric"], "degenerate": c["s2_deg"],
        })
    transitions = _transitions(build, values, "s2") + _transitions(build, values, "geometric")
    return name, rows, transitions


def transition_comments(name, transitions):
    if not transitions:
        return [f"param={name}", "transitions=none"]
    out = [f"param={name}"]
    for which, t, a0, a1 in transitions:
        out.append(f"transition measure={which} at={format_value(t)} from={a0} to={a1}")
    return out
