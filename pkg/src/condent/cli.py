"""``condent`` command line: report, figure, scan, validate.

Exit codes: 0 ok, 1 validation failure, 2 input error.
"""

import argparse
import json
import sys

import numpy as np

from . import analytic, conditional, correlations, figures, io, states, validation
from .correlations import MinimizerOptions
from .entropy import entropy, linear, tsallis, von_neumann
from .errors import CondentError
from .measurement import projective_from_direction

EXIT_OK, EXIT_VALIDATION, EXIT_INPUT = 0, 1, 2


def parse_entropy(text, dA=2):
    """``vn2``, ``vne``, ``linear`` (rescaled for a qubit A) or ``tsallis:q``."""
    if text == "vn2":
        return von_neumann(2.0)
    if text == "vne":
        return von_neumann(np.e)
    if text == "linear":
        return linear(analytic.default_scale(dA))
    if text.startswith("tsallis:"):
        try:
            q = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise io.InputError(f"bad Tsallis index in {text!r}") from exc
        return tsallis(q)
    raise io.InputError(f"unknown entropy {text!r}; use vn2, vne, linear or tsallis:q")


def _entropy_names(values):
    names = []
    for v in values or ["vn2", "linear"]:
        names.extend(x for x in v.split(",") if x)
    return names


def _load_state(args):
    if args.state and args.family:
        raise io.InputError("give either --state or --family, not both")
    if args.state:
        return io.load_state(args.state)
    if args.family:
        return io.build_family(args.family, io.parse_params(args.params))
    raise io.InputError("a state is required: --state FILE or --family NAME --params K=V,...")


def _options(args):
    return MinimizerOptions(seed=args.seed)


def _mode(args, s):
    if args.mode:
        return args.mode
    return "projective" if s.dB == 2 else "povm"


def _measurement_doc(outcome):
    doc = io.measurement_to_document(outcome.best_measurement)
    if outcome.direction is not None:
        doc = {"type": "direction", "k": [float(x) for x in outcome.direction]}
    return doc


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return 0.0 if abs(x) < 1e-14 else x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def build_report(s, entropy_names, mode, options, fixed=None):
    """Correlation report as a JSON-ready mapping."""
    report = {"seed": options.seed, "dA": s.dA, "dB": s.dB, "mode": mode, "entropies": []}
    for name in entropy_names:
        f = parse_entropy(name, s.dA)
        best = correlations.minimize_conditional_entropy(s, f, mode, options=options)
        s_a = entropy(s.rho_A, f)
        item = {
            "name": name, "convention": f.label, "S_A": s_a,
            "S_cond_min": best.best_value, "I_max": s_a - best.best_value,
            "measurement": _measurement_doc(best), "converged": best.converged,
        }
        if fixed is not None:
            res = conditional.conditional_entropy(s, fixed, f)
            item["at_measurement"] = {"S_cond": res.value, "I": res.gain}
        report["entropies"].append(item)

    vn = von_neumann()
    dmode = "projective" if s.dB == 2 else "povm"
    report["discord"] = {"convention": vn.label, "mode": dmode,
                         "value": correlations.quantum_discord(s, mode=dmode, options=options)}
    report["negativity"] = {"convention": "Tr|rho^T_B| - 1", "value": correlations.negativity(s)}
    if s.dB == 2:
        b = states.to_bloch(s)
        r = analytic.s2_minimize_qudit_qubit(b)
        report["s2_analytic"] = {
            "convention": f"linear scale={r.scale:g}", "S2_cond_min": r.s2_min, "I2_max": r.i2_max,
            "k": None if r.k_star is None else [float(x) for x in r.k_star],
            "axis": r.axis, "degenerate": r.degenerate,
        }
        report["geometric_discord"] = {"convention": f"scale={analytic.default_scale(s.dA):g}",
                                       "value": analytic.geometric_discord(b)}
        k = r.k_star if r.k_star is not None else np.array([0.0, 0.0, 1.0])
        report["purity_gain_ratio"] = {"measurement": "S2-optimal direction",
                                       "value": conditional.purity_gain_ratio(s, projective_from_direction(k))}
    else:
        report["geometric_discord"] = None
        report["purity_gain_ratio"] = None
    report["concurrence"] = correlations.concurrence(s) if (s.dA, s.dB) == (2, 2) else None
    return _clean(report)


def _write(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_report(args):
    s = _load_state(args)
    fixed = io.load_measurement(args.measurement, s.dB) if args.measurement else None
    report = build_report(s, _entropy_names(args.entropy), _mode(args, s), _options(args), fixed)
    _write(args, json.dumps(report, indent=2, sort_keys=False) + "\n")
    return EXIT_OK


def cmd_figure(args):
    opts = _options(args)
    if args.name == "fig1":
        rows = figures.fig1_rows(args.resolution or 101)
        text = figures.write_csv(figures.FIG1_COLUMNS, rows, args.seed)
    else:
        rows = figures.fig2_rows(args.resolution or 129, opts)
        text = figures.write_csv(figures.FIG2_COLUMNS, rows, args.seed)
    _write(args, text)
    return EXIT_OK


def cmd_scan(args):
    if not args.family:
        raise io.InputError("scan needs --family")
    name, rows, transitions = figures.scan_rows(
        args.family, io.parse_params(args.params), args.resolution or 65, _options(args))
    text = figures.write_csv(figures.SCAN_COLUMNS, rows, args.seed, figures.transition_comments(name, transitions))
    _write(args, text)
    return EXIT_OK


def cmd_validate(args):
    tolerances = {k: float(v) for k, v in io.parse_params(args.tolerance).items()}
    try:
        results = validation.run_all(args.samples, tolerances, args.seed, args.suite or None)
    except KeyError as exc:
        raise io.InputError(exc.args[0]) from exc
    lines = [f"seed={args.seed}"] + [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} suites passed")
    _write(args, "\n".join(lines) + "\n")
    return EXIT_VALIDATION if failed else EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for restarts and sampling")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", help="state document (JSON)")
    state.add_argument("--family", choices=io.FAMILIES, help="named state family")
    state.add_argument("--params", default="", help="family parameters K=V,...; lists a:b, ranges lo..hi")

    p = argparse.ArgumentParser(prog="condent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("report", parents=[common, state], help="correlation report as JSON")
    r.add_argument("--entropy", action="append", help="vn2|vne|linear|tsallis:q (repeatable or comma list)")
    r.add_argument("--mode", help="projective | povm | povm:m")
    r.add_argument("--measurement", help="also evaluate at this measurement document")
    r.set_defaults(run=cmd_report)

    f = sub.add_parser("figure", parents=[common], help="figure tables as CSV")
    f.add_argument("name", choices=("fig1", "fig2"))
    f.add_argument("--resolution", type=int, help="number of samples")
    f.set_defaults(run=cmd_figure)

    s = sub.add_parser("scan", parents=[common, state], help="optimal-axis scan along a family")
    s.add_argument("--resolution", type=int, help="number of samples")
    s.set_defaults(run=cmd_scan)

    v = sub.add_parser("validate", parents=[common], help="run invariant suites")
    v.add_argument("--samples", type=int, help="instances per suite")
    v.add_argument("--suite", action="append", choices=list(validation.SUITES), help="run only these suites")
    v.add_argument("--tolerance", default="", help="per-suite tolerance overrides NAME=VAL,...")
    v.set_defaults(run=cmd_validate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except CondentError as exc:
        print(f"condent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
