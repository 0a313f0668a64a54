"""Declarative scenarios: parsing, validation, execution and report emission.

Scenarios are TOML documents::

    kind = "discrete-phase"      # or continuous-phase, protocol, uhlmann, model-oracle

    [state]
    model = "two-qubit"          # two-qubit | squeezed | explicit
    lambda = 1.0471975511965976

    [sequence]
    generator = "qubit-triangle" # qubit-triangle | polygon | explicit
    phi = 1.5707963267948966

    [options]
    seed = 7

Complex numbers are written as strings such as ``"0.5+0.5i"``. See the README
for the full list of keys.
"""

import io
import json
import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bargmann import BRANCH, StateSequence, relative_sequence_phase, sequence_phase
from .errors import ContractViolation, UndefinedPhase
from .models import (PhasePolygon, gamma_squeezed_closed_form, gamma_two_qubit_closed_form,
                     make_squeezed, make_two_qubit, polygon_pdq_area, qubit_sequence,
                     relative_coherent_label, squeezed_tail)
from .nullcurves import (coherent_polygon, connection_integral,
                         refinement_phase, relative_geodesic_polygon)
from .protocol import ProtocolConfig, run_protocol
from .state import BipartiteState, DensityOperator, reduced_density, schmidt_rank
from .uhlmann import MixedBipartiteState, relative_holonomy

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KINDS = ("discrete-phase", "continuous-phase", "protocol", "uhlmann", "model-oracle")
STATE_MODELS = ("two-qubit", "squeezed", "explicit", "product")
GENERATORS = ("qubit-triangle", "polygon", "explicit")
U64_MAX = 2 ** 64 - 1

DEFAULTS = {
    "eps_orth": 1e-9,
    "truncation": 60,
    "steps": 10_000,
    "samples": 512,
    "shots": 100_000,
    "seed": None,
    "fringe_points": 16,
    "ancilla_a": 0.5,
    "mode": "exact",
    "rank_tol": 1e-10,
    "noise": 0.0,
    "cyclic": False,
}


class ScenarioError(ContractViolation):
    """Every problem found in a scenario; ``errors`` is a list of ``(location, message)``."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{loc}: {msg}" for loc, msg in self.errors))


@dataclass
class Scenario:
    kind: str
    state: dict
    sequence: dict
    options: dict = field(default_factory=dict)

    def echo(self):
        return {"kind": self.kind, "state": self.state, "sequence": self.sequence,
                "options": self.options}


# -- parsing -----------------------------------------------------------------

def parse_complex(value):
    """Parse ``1``, ``-0.5``, ``"0.5+0.5i"``, ``"-2j"``, ``"i"`` into a complex number."""
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if not isinstance(value, str):
        raise ValueError(f"not a number: {value!r}")
    s = value.strip().replace(" ", "").replace("I", "i").replace("J", "j").replace("i", "j")
    if re.fullmatch(r"[+-]?j", s):
        s = s.replace("j", "1j")
    s = re.sub(r"(?<=[+-])j$", "1j", s)
    try:
        return complex(s)
    except ValueError:
        raise ValueError(f"not a complex literal: {value!r}") from None


class _Checker:
    def __init__(self):
        self.errors = []

    def fail(self, loc, msg):
        self.errors.append((loc, msg))

    def real(self, table, key, loc, lo=None, hi=None, lo_open=False, hi_open=False, required=True,
             default=None):
        if key not in table:
            if required:
                self.fail(f"{loc}.{key}", "missing")
            return default
        v = table[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.fail(f"{loc}.{key}", f"expected a finite real number, got {v!r}")
            return default
        bad = (lo is not None and (v <= lo if lo_open else v < lo)) or \
              (hi is not None and (v >= hi if hi_open else v > hi))
        if bad:
            lb = "(" if lo_open else "["
            rb = ")" if hi_open else "]"
            self.fail(f"{loc}.{key}", f"{v!r} outside {lb}{lo}, {hi}{rb}")
            return default
        return float(v)

    def integer(self, table, key, loc, lo=None, hi=None, required=False, default=None):
        if key not in table:
            if required:
                self.fail(f"{loc}.{key}", "missing")
            return default
        v = table[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(f"{loc}.{key}", f"expected an integer, got {v!r}")
            return default
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            self.fail(f"{loc}.{key}", f"{v!r} outside [{lo}, {hi}]")
            return default
        return v

    def complex_list(self, value, loc):
        if not isinstance(value, list) or not value:
            self.fail(loc, "expected a non-empty list of numbers")
            return None
        out = []
        for k, item in enumerate(value):
            try:
                out.append(parse_complex(item))
            except ValueError as exc:
                self.fail(f"{loc}[{k}]", str(exc))
        return out if len(out) == len(value) else None


def _syntax_error(exc):
    msg = str(exc)
    m = re.search(r"line (\d+), column (\d+)", msg)
    if m:
        return [(f"line {m.group(1)}, column {m.group(2)}", f"syntax error: {msg}")]
    return [("document", f"syntax error: {msg}")]


def parse_scenario(text, kind=None, seed=None):
    """Parse and validate scenario text; raises :class:`ScenarioError` listing all problems.

    ``kind`` fills in a missing ``kind`` key (the CLI passes the verb's default);
    ``seed``, when given, overrides ``options.seed``.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(_syntax_error(exc)) from None
    if seed is not None and isinstance(doc.get("options", {}), dict):
        doc.setdefault("options", {})["seed"] = seed
    return validate_scenario(doc, kind)


def validate_scenario(doc, kind=None):
    ck = _Checker()
    for key in doc:
        if key not in ("kind", "state", "sequence", "options"):
            ck.fail(key, "unknown top-level key")
    kind = doc.get("kind", kind)
    if kind not in KINDS:
        ck.fail("kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")

    state = doc.get("state")
    seq = doc.get("sequence")
    opts = doc.get("options", {})
    if not isinstance(state, dict):
        ck.fail("state", "missing [state] table")
        state = {}
    if not isinstance(seq, dict):
        ck.fail("sequence", "missing [sequence] table")
        seq = {}
    if not isinstance(opts, dict):
        ck.fail("options", "expected a table")
        opts = {}

    options = _validate_options(ck, opts)
    state_out = _validate_state(ck, state, options)
    d1 = state_out.get("d1")
    seq_out = _validate_sequence(ck, seq, d1, options)

    if kind == "protocol" and options["mode"] == "sampled" and options["seed"] is None:
        ck.fail("options.seed", "sampled mode requires an explicit seed")
    if kind == "uhlmann" and options["noise"] == 0.0 and \
            state_out.get("model") not in ("explicit", "product"):
        ck.fail("options.noise", "uhlmann needs faithful relative states; set noise > 0")
    if state_out.get("model") == "squeezed" and seq_out.get("generator") == "qubit-triangle":
        ck.fail("sequence.generator", "qubit-triangle needs a qubit first subsystem")
    if state_out.get("model") == "two-qubit" and seq_out.get("generator") == "polygon":
        ck.fail("sequence.generator", "polygon sequences need an oscillator first subsystem")
    if kind == "model-oracle" and state_out.get("model") not in ("two-qubit", "squeezed"):
        ck.fail("state.model", "model-oracle needs the two-qubit or squeezed model")
    if kind != "uhlmann" and ("density" in state_out or state_out.get("model") == "product"):
        ck.fail("state", f"{kind} needs a pure state, not a density operator")

    if ck.errors:
        raise ScenarioError(ck.errors)
    return Scenario(kind, state_out, seq_out, options)


def _validate_options(ck, opts):
    out = dict(DEFAULTS)
    known = set(DEFAULTS)
    for key in opts:
        if key not in known:
            ck.fail(f"options.{key}", "unknown option")
    loc = "options"
    out["eps_orth"] = ck.real(opts, "eps_orth", loc, 0.0, 1.0, lo_open=True, hi_open=True,
                              required=False, default=DEFAULTS["eps_orth"])
    out["truncation"] = ck.integer(opts, "truncation", loc, 1, 400, default=DEFAULTS["truncation"])
    out["steps"] = ck.integer(opts, "steps", loc, 1, 10_000_000, default=DEFAULTS["steps"])
    out["samples"] = ck.integer(opts, "samples", loc, 3, 10_000_000, default=DEFAULTS["samples"])
    out["shots"] = ck.integer(opts, "shots", loc, 1, 10 ** 12, default=DEFAULTS["shots"])
    out["seed"] = ck.integer(opts, "seed", loc, 0, U64_MAX, default=None)
    out["fringe_points"] = ck.integer(opts, "fringe_points", loc, 8, 100_000,
                                      default=DEFAULTS["fringe_points"])
    out["ancilla_a"] = ck.real(opts, "ancilla_a", loc, 0.0, 1.0, required=False,
                               default=DEFAULTS["ancilla_a"])
    out["rank_tol"] = ck.real(opts, "rank_tol", loc, 0.0, 1.0, required=False,
                              default=DEFAULTS["rank_tol"])
    out["noise"] = ck.real(opts, "noise", loc, 0.0, 1.0, required=False, default=0.0)
    mode = opts.get("mode", "exact")
    if mode not in ("exact", "sampled"):
        ck.fail("options.mode", f"expected 'exact' or 'sampled', got {mode!r}")
    out["mode"] = mode
    cyclic = opts.get("cyclic", False)
    if not isinstance(cyclic, bool):
        ck.fail("options.cyclic", f"expected true or false, got {cyclic!r}")
    out["cyclic"] = bool(cyclic)
    return out


def _validate_state(ck, state, options):
    model = state.get("model")
    loc = "state"
    if model not in STATE_MODELS:
        ck.fail("state.model", f"expected one of {', '.join(STATE_MODELS)}, got {model!r}")
        return {}
    allowed = {"two-qubit": {"model", "lambda"},
               "squeezed": {"model", "r"},
               "explicit": {"model", "d1", "d2", "amplitudes", "density", "normalize"},
               "product": {"model", "rho_a", "rho_b"}}[model]
    for key in state:
        if key not in allowed:
            ck.fail(f"state.{key}", f"not a parameter of model {model!r}")
    if model == "two-qubit":
        lam = ck.real(state, "lambda", loc, 0.0, math.pi)
        return {"model": model, "lambda": lam, "d1": 2}
    if model == "squeezed":
        r = ck.real(state, "r", loc, 0.0, 20.0)
        trunc = options["truncation"]
        if r is not None and trunc is not None and squeezed_tail(r, trunc) >= 1e-12:
            ck.fail("state.r", f"r={r!r} needs a larger options.truncation than {trunc}")
        return {"model": model, "r": r, "d1": None if trunc is None else trunc + 1}
    if model == "product":
        out = {"model": model}
        for key in ("rho_a", "rho_b"):
            m = _density_rows(ck, state.get(key), f"state.{key}")
            if m is not None:
                out[key] = m
        if "rho_a" in out:
            out["d1"] = len(out["rho_a"])
        return out

    d1 = ck.integer(state, "d1", loc, 1, 512, required=True)
    d2 = ck.integer(state, "d2", loc, 1, 512, required=True)
    normalize = state.get("normalize", True)
    if not isinstance(normalize, bool):
        ck.fail("state.normalize", "expected true or false")
    out = {"model": model, "d1": d1, "d2": d2, "normalize": bool(normalize)}
    has_amp, has_rho = "amplitudes" in state, "density" in state
    if has_amp == has_rho:
        ck.fail("state", "explicit states need exactly one of 'amplitudes' or 'density'")
        return out
    if has_amp:
        amps = ck.complex_list(state["amplitudes"], "state.amplitudes")
        if amps is not None and d1 and d2:
            if len(amps) != d1 * d2:
                ck.fail("state.amplitudes", f"expected {d1 * d2} amplitudes, got {len(amps)}")
            elif not any(amps):
                ck.fail("state.amplitudes", "state vector is zero")
            elif not normalize and abs(np.linalg.norm(amps) - 1.0) > 1e-12:
                ck.fail("state.amplitudes", "amplitudes are not normalised")
            else:
                out["amplitudes"] = amps
        return out
    mat = _density_rows(ck, state["density"], "state.density")
    if mat is None or not (d1 and d2):
        return out
    if len(mat) != d1 * d2:
        ck.fail("state.density", f"expected a {d1 * d2}x{d1 * d2} matrix")
        return out
    out["density"] = mat
    return out


def _density_rows(ck, rows, loc):
    """Validate a square PSD matrix given as rows of complex literals."""
    if not isinstance(rows, list) or not rows:
        ck.fail(loc, "expected a list of rows")
        return None
    mat = [ck.complex_list(row, f"{loc}[{k}]") for k, row in enumerate(rows)]
    if any(r is None for r in mat):
        return None
    if any(len(r) != len(mat) for r in mat):
        ck.fail(loc, "matrix must be square")
        return None
    try:
        DensityOperator(np.array(mat, dtype=np.complex128))
    except ContractViolation as exc:
        ck.fail(loc, str(exc))
        return None
    return mat


def _validate_sequence(ck, seq, d1, options):
    gen = seq.get("generator")
    if gen not in GENERATORS:
        ck.fail("sequence.generator", f"expected one of {', '.join(GENERATORS)}, got {gen!r}")
        return {}
    allowed = {"qubit-triangle": {"generator", "phi"},
               "polygon": {"generator", "q", "p", "z"},
               "explicit": {"generator", "vectors"}}[gen]
    for key in seq:
        if key not in allowed:
            ck.fail(f"sequence.{key}", f"not a parameter of generator {gen!r}")
    if gen == "qubit-triangle":
        phi = ck.real(seq, "phi", "sequence", 0.0, math.pi, hi_open=True)
        return {"generator": gen, "phi": phi}
    if gen == "polygon":
        if "z" in seq:
            z = ck.complex_list(seq["z"], "sequence.z")
        else:
            q, p = seq.get("q"), seq.get("p")
            if not (isinstance(q, list) and isinstance(p, list) and len(q) == len(p)):
                ck.fail("sequence", "polygon needs 'z' or equally long 'q' and 'p' lists")
                return {"generator": gen}
            qs = ck.complex_list(q, "sequence.q")
            ps = ck.complex_list(p, "sequence.p")
            if qs is None or ps is None:
                return {"generator": gen}
            if any(v.imag for v in qs + ps):
                ck.fail("sequence", "q and p must be real")
                return {"generator": gen}
            z = [complex(a.real, b.real) / math.sqrt(2) for a, b in zip(qs, ps)]
        if z is None:
            return {"generator": gen}
        if len(z) < 3:
            ck.fail("sequence.z", "a polygon needs at least 3 vertices")
        elif any(z[k] == z[(k + 1) % len(z)] for k in range(len(z))):
            ck.fail("sequence.z", "consecutive vertices must differ")
        return {"generator": gen, "z": z}

    rows = seq.get("vectors")
    if not isinstance(rows, list) or len(rows) < 3:
        ck.fail("sequence.vectors", "expected a list of at least 3 vectors")
        return {"generator": gen}
    vecs = [ck.complex_list(r, f"sequence.vectors[{k}]") for k, r in enumerate(rows)]
    out = {"generator": gen}
    if any(v is None for v in vecs):
        return out
    for k, v in enumerate(vecs):
        if d1 is not None and len(v) != d1:
            ck.fail(f"sequence.vectors[{k}]", f"expected dimension {d1}, got {len(v)}")
        elif not any(v):
            ck.fail(f"sequence.vectors[{k}]", "zero vector")
    out["vectors"] = vecs
    return out


# -- building objects ----------------------------------------------------------

def build_state(sc):
    st = sc.state
    if st["model"] == "two-qubit":
        return make_two_qubit(st["lambda"])
    if st["model"] == "squeezed":
        return make_squeezed(st["r"], sc.options["truncation"])
    if "amplitudes" in st:
        m = np.array(st["amplitudes"], dtype=np.complex128).reshape(st["d1"], st["d2"])
        return BipartiteState.from_matrix(m, normalize=st["normalize"])
    return None


def build_mixed(sc):
    st = sc.state
    if st["model"] == "product":
        a = np.array(st["rho_a"], dtype=np.complex128)
        b = np.array(st["rho_b"], dtype=np.complex128)
        return MixedBipartiteState.product(a / np.trace(a).real, b / np.trace(b).real)
    if "density" in st:
        m = np.array(st["density"], dtype=np.complex128)
        return MixedBipartiteState(DensityOperator(m / np.trace(m).real), st["d1"], st["d2"])
    psi = build_state(sc)
    noise = sc.options["noise"]
    d = psi.d1 * psi.d2
    pure = np.outer(psi.amplitudes, psi.amplitudes.conj())
    return MixedBipartiteState(DensityOperator((1 - noise) * pure + noise * np.eye(d) / d),
                               psi.d1, psi.d2)


def build_sequence(sc):
    sq = sc.sequence
    if sq["generator"] == "qubit-triangle":
        return qubit_sequence(sq["phi"])
    if sq["generator"] == "polygon":
        return PhasePolygon(sq["z"]).sequence(sc.options["truncation"])
    return StateSequence(np.array(sq["vectors"], dtype=np.complex128))


# -- execution ---------------------------------------------------------------

def phase_entry(value):
    return {"value": float(value), "branch": BRANCH, "degrees": math.degrees(value)}


@dataclass
class RunReport:
    scenario: dict
    results: dict
    diagnostics: dict
    steps: list
    seed: object = None
    version: str = __version__

    def to_dict(self):
        return {"scenario": self.scenario, "results": self.results,
                "diagnostics": self.diagnostics, "steps": self.steps,
                "seed": self.seed, "version": self.version}


def execute(sc):
    """Run a validated scenario and collect a :class:`RunReport`."""
    runner = {"discrete-phase": _run_discrete, "continuous-phase": _run_continuous,
              "protocol": _run_protocol, "uhlmann": _run_uhlmann,
              "model-oracle": _run_oracle}[sc.kind]
    results, diagnostics, steps = runner(sc)
    return RunReport(sc.echo(), results, diagnostics, steps, sc.options["seed"])


def _run_discrete(sc):
    psi, seq = build_state(sc), build_sequence(sc)
    eps = sc.options["eps_orth"]
    rel = relative_sequence_phase(psi, seq, eps)
    results = {"relative_phase": phase_entry(rel.phase)}
    diag = {"min_adjacent_overlap": rel.min_adjacent_overlap,
            "route_discrepancy": rel.route_discrepancy,
            "schmidt_rank": schmidt_rank(psi)}
    try:
        own = sequence_phase(seq, eps)
    except UndefinedPhase as exc:
        # the sequence itself may contain orthogonal neighbours while its relative states do not
        diag["sequence_phase_error"] = str(exc)
    else:
        results["sequence_phase"] = phase_entry(own.phase)
        diag["sequence_min_adjacent_overlap"] = own.min_adjacent_overlap
    return results, diag, []


def _run_continuous(sc):
    psi, seq = build_state(sc), build_sequence(sc)
    opts = sc.options
    rho1 = reduced_density(psi)
    if sc.sequence["generator"] == "polygon":
        path = coherent_polygon(sc.sequence["z"], opts["truncation"])
        path_kind = "coherent lines"
    else:
        path = relative_geodesic_polygon(psi, seq, opts["eps_orth"])
        path_kind = "relative geodesics"
    integral = connection_integral(path, rho1, opts["steps"])
    discrete = relative_sequence_phase(psi, seq, opts["eps_orth"])
    refined = refinement_phase(path, psi, opts["samples"], opts["eps_orth"])
    results = {"connection_integral": phase_entry(integral),
               "discrete_phase": phase_entry(discrete.phase),
               "refinement_phase": phase_entry(refined)}
    diag = {"path": path_kind, "steps_per_segment": opts["steps"],
            "samples_per_segment": opts["samples"],
            "integral_minus_discrete": float(np.angle(np.exp(1j * (integral - discrete.phase))))}
    return results, diag, []


def _run_protocol(sc):
    opts = sc.options
    cfg = ProtocolConfig(build_state(sc), build_sequence(sc), opts["ancilla_a"], opts["mode"],
                         opts["shots"], opts["seed"], opts["fringe_points"])
    run = run_protocol(cfg)
    exact = relative_sequence_phase(cfg.psi, cfg.sequence, opts["eps_orth"]).phase
    results = {"gamma": phase_entry(run.gamma), "formula_phase": phase_entry(exact)}
    if opts["mode"] == "sampled":
        results["gamma_sigma"] = run.sigma
    diag = {"formula_gap": float(np.angle(np.exp(1j * (run.gamma - exact)))),
            "mode": opts["mode"], "fringe_points": opts["fringe_points"]}
    steps = [{"j": s.j, "f_j": phase_entry(s.f_j), "f_next": phase_entry(s.f_next),
              "success_probability": s.success_probability, "visibility": s.visibility,
              "fringe_amplitude": s.fringe_amplitude, "sigma_f": s.sigma_f,
              "fringe": [[float(f), float(i)] for f, i in s.fringe]} for s in run.steps]
    return results, diag, steps


def _run_uhlmann(sc):
    state = build_mixed(sc)
    seq = build_sequence(sc)
    res = relative_holonomy(state, seq, sc.options["rank_tol"], sc.options["cyclic"])
    eig = np.linalg.eigvals(res.unitary)
    results = {"unitary": [[[float(z.real), float(z.imag)] for z in row] for row in res.unitary],
               "eigenphases": [phase_entry(a) for a in sorted(np.angle(eig))],
               "deviation_from_identity": res.deviation_from_identity}
    diag = {"unitarity_defect": res.unitarity_defect,
            "min_eigenvalue_seen": res.min_eigenvalue_seen,
            "cyclic": res.cyclic, "noise": sc.options["noise"]}
    return results, diag, []


def _run_oracle(sc):
    psi, seq = build_state(sc), build_sequence(sc)
    eps = sc.options["eps_orth"]
    numeric = relative_sequence_phase(psi, seq, eps).phase
    if sc.state["model"] == "two-qubit":
        if sc.sequence["generator"] != "qubit-triangle":
            raise ContractViolation("the two-qubit oracle needs the qubit-triangle sequence")
        closed = gamma_two_qubit_closed_form(sc.state["lambda"], sc.sequence["phi"])
        diag = {"sequence_phase_closed_form": -sc.sequence["phi"] / 2}
    else:
        if sc.sequence["generator"] != "polygon":
            raise ContractViolation("the squeezed-state oracle needs a polygon sequence")
        poly = PhasePolygon(sc.sequence["z"])
        closed = gamma_squeezed_closed_form(sc.state["r"], poly)
        labels = relative_coherent_label(sc.state["r"], poly.vertices)
        diag = {"pdq_area": polygon_pdq_area(poly),
                "relative_labels": [[float(z.real), float(z.imag)] for z in labels]}
    results = {"numeric_phase": phase_entry(numeric), "closed_form": phase_entry(closed),
               "difference": float(np.angle(np.exp(1j * (numeric - closed))))}
    return results, diag, []


# -- emission ----------------------------------------------------------------

def _fmt_float(x):
    if not math.isfinite(x):
        return "null"
    s = "%.17g" % x
    if not any(c in s for c in ".eEn"):
        s += ".0"
    return s


def _encode(obj, out):
    if obj is None:
        out.write("null")
    elif isinstance(obj, bool):
        out.write("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.write(_fmt_float(float(obj)))
    elif isinstance(obj, complex):
        _encode([obj.real, obj.imag], out)
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, dict):
        out.write("{")
        for k, key in enumerate(sorted(obj)):
            if k:
                out.write(", ")
            _encode(str(key), out)
            out.write(": ")
            _encode(obj[key], out)
        out.write("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.write("[")
        for k, item in enumerate(obj):
            if k:
                out.write(", ")
            _encode(item, out)
        out.write("]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit(report, fmt="json"):
    """Serialise a report: full JSON, or per-step fringe rows as CSV."""
    if fmt == "json":
        buf = io.StringIO()
        _encode(report.to_dict(), buf)
        buf.write("\n")
        return buf.getvalue().encode()
    if fmt == "csv-fringe":
        lines = ["step,f,intensity"]
        for step in report.steps:
            for f, inten in step["fringe"]:
                lines.append(f"{step['j']},{_fmt_float(f)},{_fmt_float(inten)}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")
