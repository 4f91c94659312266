"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import warnings

import numpy as np

from .errors import NumericalError, StarSpecError, ValidationError
from .graph import StarGraph, symmetric_graph, validate
from .solver import BoundaryEigenvalue, SolverOptions, deficiency_indices, find_eigenvalues, sweep
from .unitary import arc_count, build_vertex_unitary, eigenphases, spectrum_via_arc

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
_PI_RE = re.compile(r"^\s*(?P<num>[-+]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(?P<den>\d*\.?\d+))?\s*$")


class UsageError(ValidationError):
    pass


def parse_angle(value) -> float:
    """Radians from a number or a string such as ``"pi/3"``, ``"2pi/3"``, ``"0.5"``."""
    if isinstance(value, bool):
        raise UsageError(f"invalid angle {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _PI_RE.match(value)
        if m:
            num = m.group("num")
            coef = 1.0 if num in ("", "+") else -1.0 if num == "-" else float(num)
            den = float(m.group("den")) if m.group("den") else 1.0
            return coef * math.pi / den
        try:
            return float(value)
        except ValueError:
            pass
    raise UsageError(f"invalid angle {value!r}")


def graph_from_config(cfg: dict) -> StarGraph:
    """Build a graph from ``{"mode", "n", "omega", "tau"}``."""
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    mode = cfg.get("mode", "general")
    try:
        taus = [float(t) for t in cfg["tau"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"config needs a numeric 'tau' list ({exc})") from None
    n = int(cfg.get("n", len(taus)))
    if mode == "symmetric":
        return symmetric_graph(n, taus)
    if mode != "general":
        raise UsageError(f"unknown mode {mode!r}")
    if "omega" not in cfg:
        raise UsageError("general mode needs 'omega'")
    omega = cfg["omega"]
    omega = [omega] if not isinstance(omega, list) else omega
    return validate(n, [parse_angle(w) for w in omega], taus)


def load_config(path: str) -> dict:
    if path is None:
        raise UsageError("--config is required for this command")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def _fmt(x):
    if isinstance(x, (bool, np.bool_)) or x is None:
        return json.dumps(None if x is None else bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g") if math.isfinite(x) else "null"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dump_json(obj) -> str:
    """JSON text with every float printed to 17 significant digits."""
    return _fmt(obj) + "\n"


def dump_csv(header, rows) -> str:
    """CSV text with floats printed to 12 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(float(v), ".12g") if isinstance(v, (float, np.floating)) else
                    ("" if v is None else v) for v in row])
    return buf.getvalue()


def _opts(args) -> SolverOptions:
    kw = {}
    if args.grid is not None:
        if args.grid < 256:
            raise UsageError("--grid must be at least 256")
        kw["grid_per_unit"] = args.grid
    if args.tol is not None:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        kw["residual_tol"] = args.tol
    return SolverOptions(**kw)


def _record(r) -> dict:
    return {"lambda_tilde": r.lambda_tilde, "lambda": r.lam, "multiplicity": r.multiplicity,
            "residual": r.residual, "identity_defect": r.identity_defect,
            "boundary": r.boundary, "parabolic": r.parabolic}


def cmd_spectrum(args):
    g = graph_from_config(load_config(args.config))
    lo, hi = args.window
    spec = find_eigenvalues(g, lo, hi, _opts(args))
    if args.format == "csv":
        return dump_csv(["lambda_tilde", "lambda", "multiplicity", "residual", "identity_defect", "boundary"],
                        [(r.lambda_tilde, r.lam, r.multiplicity, r.residual, r.identity_defect, int(r.boundary))
                         for r in spec.records])
    return dump_json({"window": list(spec.window), "records": [_record(r) for r in spec.records],
                      "total_with_multiplicity": spec.total_with_multiplicity,
                      "boundary_flags": list(spec.boundary_flags)})


def cmd_deficiency(args):
    g = graph_from_config(load_config(args.config))
    res = deficiency_indices(g, _opts(args))
    if args.format == "csv":
        return dump_csv(["n_plus", "n_minus", "count", "boundary_flags"],
                        [(res.n_plus, res.n_minus, res.count, ";".join(format(b, ".12g") for b in res.boundary_flags))])
    return dump_json({"n_plus": res.n_plus, "n_minus": res.n_minus, "count": res.count,
                      "boundary_flags": list(res.boundary_flags),
                      "eigenvalues": [r.lambda_tilde for r in res.spectrum.records]})


def cmd_sweep(args):
    g = graph_from_config(load_config(args.config))
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if args.start > args.stop:
        raise UsageError("sweep range is reversed")
    try:
        idx = [int(k) for k in args.param.split(",")]
    except ValueError:
        raise UsageError(f"--param must be comma-separated edge numbers, got {args.param!r}") from None
    values = [args.start] if args.steps == 1 else np.linspace(args.start, args.stop, args.steps)
    res = sweep(g, idx, values, _opts(args))
    if args.format == "json":
        return dump_json({
            "rows": [{"value": r.value, "n_plus": r.n_plus, "n_minus": r.n_minus,
                      "eigenvalues": list(r.eigenvalues), "error": r.error} for r in res.rows],
            "transitions": [{"from": a, "to": b, "n_before": na, "n_after": nb}
                            for a, b, na, nb in res.transitions]})
    return dump_csv(["value", "n_plus", "n_minus", "eigenvalues", "error"],
                    [(r.value, r.n_plus, r.n_minus, ";".join(format(e, ".12g") for e in r.eigenvalues), r.error)
                     for r in res.rows])


def cmd_validate(args):
    from .validation import run_validation

    suites = args.suite or None
    try:
        checks = run_validation(suites, _opts(args), perturb=args.inject_perturbation)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    failed = sum(not c.passed for c in checks)
    if args.format == "csv":
        text = dump_csv(["suite", "name", "passed", "detail"],
                        [(c.suite, c.name, int(c.passed), c.detail) for c in checks])
    else:
        text = dump_json({"passed": len(checks) - failed, "failed": failed,
                          "checks": [{"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail}
                                     for c in checks]})
    return text, (EXIT_OK if failed == 0 else EXIT_NUMERIC)


def cmd_unitary(args):
    g = graph_from_config(load_config(args.config))
    vu = build_vertex_unitary(g)
    ph = eigenphases(vu)
    note = None
    arc = None
    if g.symmetric:
        arc = arc_count(ph)
    else:
        note = "NotSymmetric: arc correspondence needs equal sectors"
    if args.format == "csv":
        return dump_csv(["theta", "re", "im", "multiplicity", "on_arc"],
                        [(p.theta, p.z.real, p.z.imag, p.multiplicity, int(p.on_arc)) for p in ph])
    out = {"unitarity_defect": vu.unitarity_defect,
           "eigenphases": [{"theta": p.theta, "re": p.z.real, "im": p.z.imag,
                            "multiplicity": p.multiplicity, "on_arc": p.on_arc} for p in ph],
           "arc_count": arc}
    if g.symmetric:
        out["spectrum"] = [_record(r) for r in spectrum_via_arc(g, phases=ph).records]
    if note:
        out["note"] = note
    if args.dump_matrix:
        out["matrix"] = [[[z.real, z.imag] for z in row] for row in vu.u]
    return dump_json(out)


def cmd_defect(args):
    from .extensions import defect_spinor_2d, eigenbasis_for

    lt = args.lambda_tilde
    if not 0.0 <= lt < 0.5:
        raise UsageError(f"lambda_tilde must lie in [0, 1/2), got {lt!r}")
    g = graph_from_config(load_config(args.config))
    spec = find_eigenvalues(g, max(0.0, lt - 1e-3), lt + 1e-3, _opts(args))
    near = [r for r in spec.records if abs(r.lambda_tilde - lt) < 1e-6]
    if not near:
        raise UsageError(f"{lt!r} is not an eigenvalue within 1e-6")
    lt = max(0.0, near[0].lambda_tilde) if abs(near[0].lambda_tilde) > 1e-12 else 0.0
    basis = eigenbasis_for(g, lt)
    if not 1 <= args.basis_index <= len(basis):
        raise UsageError(f"--basis-index must lie in 1..{len(basis)}")
    if args.r_min <= 0 or args.r_max <= args.r_min or args.r_points < 1:
        raise UsageError("need 0 < r_min < r_max and r_points >= 1")
    r = np.linspace(args.r_min, args.r_max, args.r_points)
    th = np.linspace(0.0, 2.0 * math.pi, args.theta_points, endpoint=False)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    vals = defect_spinor_2d(g, lt, args.basis_index, args.sign, rr.ravel(), tt.ravel(), basis=basis)
    rows = [(a, b, v[0].real, v[0].imag, v[1].real, v[1].imag) for a, b, v in zip(rr.ravel(), tt.ravel(), vals)]
    return dump_csv(["r", "theta", "re1", "im1", "re2", "im2"], rows)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="graph configuration JSON")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--grid", type=int, help="scan points per unit lambda")
    p.add_argument("--tol", type=float, help="residual tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="starspec", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("spectrum", parents=[common], help="eigenvalues in a window")
    sp.add_argument("--window", type=float, nargs=2, default=(-0.5, 0.5), metavar=("LO", "HI"))
    sub.add_parser("deficiency", parents=[common], help="deficiency indices")
    sw = sub.add_parser("sweep", parents=[common], help="deficiency indices along a strength path")
    sw.add_argument("--param", required=True, help="tied edge numbers, e.g. 1,3")
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--steps", type=int, default=100)
    va = sub.add_parser("validate", parents=[common], help="closed-form cross-checks")
    va.add_argument("--suite", action="append", help="restrict to a suite (repeatable)")
    va.add_argument("--inject-perturbation", type=float, default=0.0, help=argparse.SUPPRESS)
    un = sub.add_parser("unitary", parents=[common], help="vertex unitary eigenphases")
    un.add_argument("--dump-matrix", action="store_true")
    de = sub.add_parser("defect", parents=[common], help="sample defect spinors")
    de.add_argument("--lambda-tilde", type=float, required=True)
    de.add_argument("--sign", type=int, choices=(1, -1), default=1)
    de.add_argument("--basis-index", type=int, default=1)
    de.add_argument("--r-min", type=float, default=0.1)
    de.add_argument("--r-max", type=float, default=10.0)
    de.add_argument("--r-points", type=int, default=100)
    de.add_argument("--theta-points", type=int, default=1)
    return parser


_DEFAULT_FORMAT = {"sweep": "csv", "defect": "csv"}
_COMMANDS = {"spectrum": cmd_spectrum, "deficiency": cmd_deficiency, "sweep": cmd_sweep,
             "validate": cmd_validate, "unitary": cmd_unitary, "defect": cmd_defect}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.format = args.format or _DEFAULT_FORMAT.get(args.command, "json")
    if args.command == "defect" and args.format != "csv":
        print("starspec: defect output is CSV only", file=sys.stderr)
        return EXIT_INPUT
    np.random.seed(args.seed)
    code = EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoundaryEigenvalue)
            result = _COMMANDS[args.command](args)
        if isinstance(result, tuple):
            result, code = result
    except ValidationError as exc:
        print(f"starspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, StarSpecError, ArithmeticError) as exc:
        print(f"starspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(result)
    else:
        sys.stdout.write(result)
    return code


if __name__ == "__main__":
    sys.exit(main())
