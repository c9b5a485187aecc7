"""State and measurement documents (JSON), and ``K=V`` parameter strings.

A state document is either an explicit matrix::

    {"dA": 2, "dB": 2, "matrix": [[re, im], ...]}      # row-major, d*d pairs

or a named family::

    {"family": "aligned", "params": {"theta": 0.5}}

A measurement document is ``{"type": "direction", "k": [kx, ky, kz]}`` or
``{"type": "povm", "elements": [{"r": w, "ket": [[re, im], ...]}, ...]}``.
Unknown keys are rejected everywhere.
"""

import json
import math

import numpy as np

from . import states
from .errors import CondentError, InvalidMeasurementError, InvalidParametersError, InvalidStateError
from .measurement import Rank1Povm, projective_from_direction


class InputError(CondentError):
    """Malformed or inconsistent input document."""


FAMILIES = ("x_state", "pure_plus_mixed", "aligned", "xy_pair", "classical")

_FAMILY_KEYS = {
    "x_state": {"rA", "rB", "Jx", "Jy", "Jz"},
    "pure_plus_mixed": {"w", "q", "dA", "dB"},
    "aligned": {"theta"},
    "xy_pair": {"alpha", "n", "jx", "jy", "field", "i", "j", "periodic"},
    "classical": {"weights", "states", "dB", "basis"},
}

_DEFAULTS = {
    "x_state": {"rA": 0.0, "rB": 0.0, "Jx": 0.0, "Jy": 0.0, "Jz": 0.0},
    "pure_plus_mixed": {"q": 0.5, "dA": 2, "dB": 2},
    "aligned": {},
    "xy_pair": {"i": 0, "j": 1, "periodic": False},
    "classical": {},
}


def _strict(doc, allowed, where):
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object, got {type(doc).__name__}")
    extra = sorted(set(doc) - set(allowed))
    if extra:
        raise InputError(f"{where}: unknown field(s) {', '.join(extra)}")


def complex_entries(pairs, where="matrix"):
    """Flat list of ``[re, im]`` pairs as a complex vector."""
    try:
        a = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: entries must be [re, im] number pairs") from exc
    if a.ndim != 2 or a.shape[1] != 2:
        raise InputError(f"{where}: expected a list of [re, im] pairs, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{where}: non-finite entry")
    return a[:, 0] + 1j * a[:, 1]


def square_matrix(pairs, where="matrix"):
    v = complex_entries(pairs, where)
    d = math.isqrt(v.size)
    if d * d != v.size:
        raise InputError(f"{where}: {v.size} entries do not form a square matrix")
    return v.reshape(d, d)


def encode_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    return [[float(z.real), float(z.imag)] for z in m.ravel()]


def build_family(name, params):
    """Construct a named family member from a parameter mapping."""
    if name not in _FAMILY_KEYS:
        raise InputError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    _strict(params, _FAMILY_KEYS[name], f"params of {name}")
    p = {**_DEFAULTS[name], **params}
    try:
        if name == "x_state":
            return states.x_state(*(float(p[k]) for k in ("rA", "rB", "Jx", "Jy", "Jz")))
        if name == "pure_plus_mixed":
            return states.pure_plus_mixed(float(p["w"]), p["q"], int(p["dA"]), int(p["dB"]))
        if name == "aligned":
            return states.aligned_mixture(float(p["theta"]))
        if name == "xy_pair":
            return _xy_pair(p)
        return _classical(p)
    except KeyError as exc:
        raise InputError(f"family {name}: missing parameter {exc.args[0]}") from exc


def _xy_pair(p):
    if "alpha" in p:
        if {"n", "jx", "jy", "field"} & set(p):
            raise InputError("xy_pair: give either alpha or (n, jx, jy, field), not both")
        alpha = np.asarray(p["alpha"], dtype=float)
    else:
        cx, cy = states.xy_chain_couplings(int(p["n"]), float(p["jx"]), float(p["jy"]), bool(p["periodic"]))
        alpha = states.xy_pair_amplitudes(cx, cy, float(p["field"]))
    return states.xy_strong_field_pair(alpha, int(p["i"]), int(p["j"]))


def _classical(p):
    rhos = [square_matrix(m, f"states[{k}]") for k, m in enumerate(p["states"])]
    basis = None if p.get("basis") is None else square_matrix(p["basis"], "basis").T
    return states.classically_correlated(p["weights"], rhos, p.get("dB"), basis)


def state_from_document(doc):
    if isinstance(doc, dict) and "family" in doc:
        _strict(doc, {"family", "params"}, "state document")
        return build_family(doc["family"], doc.get("params", {}))
    _strict(doc, {"dA", "dB", "matrix"}, "state document")
    try:
        dA, dB = int(doc["dA"]), int(doc["dB"])
    except KeyError as exc:
        raise InputError(f"state document: missing field {exc.args[0]}") from exc
    if "matrix" not in doc:
        raise InputError("state document: missing field matrix")
    rho = square_matrix(doc["matrix"])
    if rho.shape[0] != dA * dB:
        raise InvalidStateError(f"matrix dimension {rho.shape[0]} != dA*dB = {dA * dB}")
    return states.BipartiteState(rho, dA, dB)


def state_to_document(s):
    return {"dA": s.dA, "dB": s.dB, "matrix": encode_matrix(s.rho)}


def measurement_from_document(doc, dB=None):
    _strict(doc, {"type", "k", "elements"}, "measurement document")
    kind = doc.get("type")
    if kind == "direction":
        _strict(doc, {"type", "k"}, "direction measurement")
        if dB not in (None, 2):
            raise InvalidMeasurementError(f"a spin direction needs dB = 2, state has dB = {dB}")
        return projective_from_direction(doc["k"])
    if kind == "povm":
        _strict(doc, {"type", "elements"}, "povm measurement")
        weights, kets = [], []
        for n, el in enumerate(doc.get("elements", [])):
            _strict(el, {"r", "ket"}, f"elements[{n}]")
            weights.append(float(el["r"]))
            kets.append(complex_entries(el["ket"], f"elements[{n}].ket"))
        if not kets:
            raise InvalidMeasurementError("povm measurement has no elements")
        m = Rank1Povm(weights, np.array(kets))
        if dB is not None and m.dim != dB:
            raise InvalidMeasurementError(f"POVM acts on dimension {m.dim}, state has dB = {dB}")
        return m
    raise InputError(f"measurement type must be 'direction' or 'povm', got {kind!r}")


def measurement_to_document(m):
    return {
        "type": "povm",
        "elements": [{"r": float(r), "ket": encode_matrix(k)} for r, k in zip(m.weights, m.kets)],
    }


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_state(path):
    return state_from_document(load_json(path))


def load_measurement(path, dB=None):
    return measurement_from_document(load_json(path), dB)


# ---------------------------------------------------------------------------
# K=V parameter strings
# ---------------------------------------------------------------------------

def _scalar(text):
    low = text.strip().lower()
    if low in ("true", "false"):
        return low == "true"
    if low == "pi":
        return math.pi
    if low.startswith("pi/"):
        return math.pi / float(low[3:])
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError as exc:
        raise InvalidParametersError(f"cannot parse parameter value {text!r}") from exc


class Range:
    """Inclusive sweep range written ``lo..hi``."""

    def __init__(self, lo, hi):
        self.lo, self.hi = float(lo), float(hi)

    def samples(self, n):
        return np.linspace(self.lo, self.hi, n)

    def __repr__(self):
        return f"Range({self.lo}, {self.hi})"


def parse_value(text):
    """``1.5`` scalar, ``0.2:0.8`` list, ``0..pi/2`` range."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return Range(_scalar(lo), _scalar(hi))
    if ":" in text:
        return [_scalar(t) for t in text.split(":")]
    return _scalar(text)


def parse_params(text):
    """``"w=0.5,q=0.3:0.7"`` -> ``{"w": 0.5, "q": [0.3, 0.7]}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise InvalidParametersError(f"parameter {item!r} is not of the form K=V")
        key, value = item.split("=", 1)
        key = key.strip()
        if key in out:
            raise InvalidParametersError(f"parameter {key} given twice")
        out[key] = parse_value(value.strip())
    return out
