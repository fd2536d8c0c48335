"""Command-line front end.

Every subcommand writes either CSV (with ``#`` metadata lines on top) or a
JSON document carrying a ``meta`` field with the tool version, the echoed
configuration and the tolerances in force.  Output never depends on the
thread count.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import reference as ref
from .exceptions import PtLatticeError
from .lattice import HamiltonianSpec, build_hamiltonian, build_parity
from .linalg import DEFAULT_TOL_REAL, poly_real_roots
from .metric import (
    beta,
    beta_linear_estimate,
    dieudonne_basis,
    linearized_metric,
    linearized_metric_pattern,
    pseudometric_n2,
    secular_polynomial,
)
from .observables import cpt_charge_general, cpt_charge_n2, cpt_metric, observable_basis, observable_residual
from .spectra import find_alpha, reality_intervals, sweep
from .topology import classify, critical_exponents, detect_anomalies, enumerate_patterns, fibonacci_count

log = logging.getLogger("ptlattice")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
THREADS_ENV = "PTLATTICE_THREADS"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, env)
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# argument types


def even_dim(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 2 or n % 2:
        raise argparse.ArgumentTypeError(f"dimension must be even and >= 2, got {n}")
    return n


def positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def positive_int(text: str) -> int:
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return x


# ---------------------------------------------------------------------------
# output helpers


def fmt(x) -> str:
    """Shortest round-trip decimal for floats."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def plain(obj):
    """numpy scalars and arrays to JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def matrix_json(m) -> list:
    """Row-major matrix of [re, im] pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def meta(args, tolerances: dict) -> dict:
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "config", "output", "threads", "verbose")}
    return {"tool": "ptlattice", "version": __version__, "command": args.command,
            "config": plain(config), "tolerances": plain(tolerances)}


def emit(args, text: str):
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)


def emit_json(args, payload: dict, tolerances: dict):
    doc = {"meta": meta(args, tolerances)}
    doc.update(plain(payload))
    emit(args, json.dumps(doc, indent=2, sort_keys=False) + "\n")


def csv_text(args, header, rows, tolerances: dict) -> str:
    buf = io.StringIO()
    m = meta(args, tolerances)
    buf.write(f"# tool={m['tool']} version={m['version']} command={m['command']}\n")
    buf.write("# config=" + json.dumps(m["config"], sort_keys=True) + "\n")
    buf.write("# tolerances=" + json.dumps(m["tolerances"], sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(args):
    res = sweep(HamiltonianSpec(args.n, 0.0, args.z), args.a_min, args.a_max, args.steps,
                tol_real=args.tol_real, threads=args.threads)
    tols = {"tol_real": args.tol_real}
    if args.format == "json":
        emit_json(args, {
            "a": res.a_grid,
            "eigenvalues": [[[e.real, e.imag] for e in row] for row in res.eigenvalues],
            "is_real": res.is_real,
        }, tols)
        return
    rows = []
    for a, evs, flags in zip(res.a_grid, res.eigenvalues, res.is_real):
        for i, (e, f) in enumerate(zip(evs, flags)):
            rows.append((a, i, e.real, e.imag, bool(f)))
    emit(args, csv_text(args, ["a", "index", "re", "im", "is_real"], rows, tols))


def cmd_alpha(args):
    ep = find_alpha(args.n, args.z, tol=args.tol, tol_real=args.tol_real)
    emit_json(args, ep.as_dict(), {"tol": args.tol, "tol_real": args.tol_real})


def cmd_reality(args):
    ivs = reality_intervals(HamiltonianSpec(args.n, 0.0, args.z), args.a_max, args.steps, args.tol,
                            tol_real=args.tol_real)
    emit_json(args, {"n": args.n, "z": args.z, "intervals": [iv.as_dict() for iv in ivs]},
              {"tol": args.tol, "tol_real": args.tol_real})


def cmd_classify(args):
    pattern = classify(args.n, args.z, steps=args.steps)
    if args.format == "json":
        emit_json(args, {"n": args.n, "z": args.z, "pattern": str(pattern)}, {"steps": args.steps})
    else:
        emit(args, f"{pattern}\n")


def cmd_zcritical(args):
    rep = critical_exponents(args.n, args.z_min, args.z_max, tol=args.tol, z_step=args.z_step)
    emit_json(args, rep.as_dict(), {"tol": args.tol, "z_step": args.z_step})


def cmd_anomalies(args):
    found = detect_anomalies(args.n, args.z, args.a_cap, steps=args.steps)
    emit_json(args, {"n": args.n, "z": args.z, "a_cap": args.a_cap,
                     "anomalies": [x.as_dict() for x in found]}, {"steps": args.steps})


def cmd_metric_basis(args):
    fam = dieudonne_basis(HamiltonianSpec(args.n, args.a, args.z), args.tol)
    emit_json(args, fam.as_dict(), {"null_tol": args.tol})


def cmd_beta(args):
    value = beta(args.n, args.z, tol=args.tol)
    payload = {"n": args.n, "z": args.z, "beta": value}
    if args.z == 0:
        payload["linear_estimate"] = beta_linear_estimate(args.n)
    emit_json(args, payload, {"tol": args.tol})


def cmd_secular(args):
    p = secular_polynomial(args.n)
    roots = poly_real_roots(p)
    emit_json(args, {
        "n": args.n, "coefficients": list(p.coefficients), "polynomial": str(p),
        "roots": roots, "positive_roots": [r for r in roots if r > 0],
    }, {"integer_rounding": 1e-6})


def cmd_linearized(args):
    t = linearized_metric(args.n)
    pattern_gap = float(np.max(np.abs(t - linearized_metric_pattern(args.n))))
    emit_json(args, {"n": args.n, "T": matrix_json(t), "pattern_deviation": pattern_gap},
              {"integer_rounding": 1e-6})


def _checks(c, h, p):
    n = c.shape[0]
    cp = c @ p
    return {
        "involution": float(np.linalg.norm(c @ c - np.eye(n), 2)),
        "commutator": float(np.linalg.norm(c @ h - h @ c, 2)),
        "cp_min_eigenvalue": float(np.linalg.eigvalsh(0.5 * (cp + cp.conj().T))[0]),
    }


def cmd_charge(args):
    spec = HamiltonianSpec(args.n, args.a, args.z)
    if args.n == 2 and not args.general:
        c, method = cpt_charge_n2(args.a), "closed-form"
    else:
        c, method = cpt_charge_general(spec), "biorthogonal"
    emit_json(args, {"n": args.n, "a": args.a, "z": args.z, "method": method, "C": matrix_json(c),
                     "checks": _checks(c, build_hamiltonian(spec), build_parity(args.n))}, {})


def cmd_observables(args):
    spec = HamiltonianSpec(args.n, args.a, args.z)
    if args.n == 2 and args.k is not None:
        theta, source = pseudometric_n2(args.k, args.m, args.a), "two-level family"
    else:
        theta, source = cpt_metric(spec), "CPT metric"
    basis = observable_basis(theta, args.tol)
    h = build_hamiltonian(spec)
    mat = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis]).T
    target = np.concatenate([h.real.ravel(), h.imag.ravel()])
    coeffs, *_ = np.linalg.lstsq(mat, target, rcond=None)
    emit_json(args, {
        "n": args.n, "a": args.a, "z": args.z, "metric": source, "theta": matrix_json(theta),
        "dimension": len(basis), "residuals": [observable_residual(b, theta) for b in basis],
        "hamiltonian_membership_residual": float(np.max(np.abs(mat @ coeffs - target))),
        "basis": [matrix_json(b) for b in basis],
    }, {"null_tol": args.tol})


def cmd_tables(args):
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    ns = sorted(ref.ALPHA_Z3)
    tols = {"alpha_tol": args.tol, "z_tol": args.z_tol}

    def row(n):
        ep = find_alpha(n, 3.0, tol=args.tol)
        a_ref, e_ref = ref.ALPHA_Z3[n]
        return (n, ep.alpha, a_ref, abs(ep.alpha - a_ref), ep.degenerate_energy, e_ref,
                abs(ep.degenerate_energy - e_ref))

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        rows = list(pool.map(row, ns))
    (out / "alpha_z3.csv").write_text(csv_text(
        args, ["n", "alpha", "alpha_ref", "alpha_dev", "energy", "energy_ref", "energy_dev"], rows, tols))

    rep = critical_exponents(8, 0.5, 5.0, tol=args.z_tol)
    rows = []
    for i, z_ref in enumerate(ref.ZCRIT_N8):
        z = rep.boundaries[i] if i < len(rep.boundaries) else float("nan")
        rows.append((i + 1, z, z_ref, abs(z - z_ref), str(rep.patterns[i]),
                     str(rep.patterns[i + 1]) if i + 1 < len(rep.patterns) else ""))
    (out / "zcritical_n8.csv").write_text(csv_text(
        args, ["index", "z_c", "z_ref", "z_dev", "pattern_above", "pattern_below"], rows, tols))

    rows = [(k, len(enumerate_patterns(k)), fibonacci_count(k)) for k in range(1, args.k_max + 1)]
    rows = [r + (r[1] == r[2],) for r in rows]
    (out / "fibonacci.csv").write_text(csv_text(args, ["k", "patterns", "fibonacci", "match"], rows, tols))
    emit(args, "".join(f"{out / f}\n" for f in ("alpha_z3.csv", "zcritical_n8.csv", "fibonacci.csv")))


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(prog="ptlattice", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default values; flags win")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--threads", type=positive_int, default=default_threads(),
                        help=f"worker threads (default: ${THREADS_ENV} or CPU count)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        subs[name] = p
        return p

    p = add("spectrum", cmd_spectrum, "eigenvalues on a grid of couplings")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--a-min", type=float, default=0.0)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--tol-real", type=positive_float, default=DEFAULT_TOL_REAL)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("alpha", cmd_alpha, "edge of the all-real coupling interval")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--tol", type=positive_float, default=1e-12)
    p.add_argument("--tol-real", type=positive_float, default=DEFAULT_TOL_REAL)

    p = add("reality", cmd_reality, "coupling intervals with a constant number of real eigenvalues")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--a-max", type=positive_float, required=True)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--tol", type=positive_float, default=1e-8)
    p.add_argument("--tol-real", type=positive_float, default=DEFAULT_TOL_REAL)

    p = add("classify", cmd_classify, "topology pattern of the real spectral locus")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("zcritical", cmd_zcritical, "exponents where the locus topology changes")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--z-min", type=float, required=True)
    p.add_argument("--z-max", type=float, required=True)
    p.add_argument("--tol", type=positive_float, default=1e-5)
    p.add_argument("--z-step", type=positive_float, default=0.05)

    p = add("anomalies", cmd_anomalies, "partial-reality islands detached from a = 0")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--a-cap", type=positive_float, required=True)
    p.add_argument("--steps", type=int, default=2000)

    p = add("metric-basis", cmd_metric_basis, "basis of all pseudometrics")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--tol", type=positive_float, default=1e-10)

    p = add("beta", cmd_beta, "positivity edge of the unit-diagonal pseudometric")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--z", type=float, default=0.0)
    p.add_argument("--tol", type=positive_float, default=1e-10)

    p = add("secular", cmd_secular, "secular polynomial of the linearized metric")
    p.add_argument("--n", type=even_dim, required=True)

    p = add("linearized", cmd_linearized, "first-order coefficient of the unit-diagonal metric")
    p.add_argument("--n", type=even_dim, required=True)

    p = add("charge", cmd_charge, "CPT charge")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--general", action="store_true", help="use the eigenvector construction at n = 2 too")

    p = add("observables", cmd_observables, "basis of observables for a metric")
    p.add_argument("--n", type=even_dim, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--k", type=positive_float, help="n = 2 only: scale of the two-level metric")
    p.add_argument("--m", type=float, default=0.0, help="n = 2 only: with --k")
    p.add_argument("--tol", type=positive_float, default=1e-10)

    p = add("tables", cmd_tables, "reproduce the reference tables as CSV files")
    p.add_argument("--outdir", default=".")
    p.add_argument("--tol", type=positive_float, default=1e-12)
    p.add_argument("--z-tol", type=positive_float, default=1e-5)
    p.add_argument("--k-max", type=positive_int, default=10)
    return parser, subs


def _validate(parser, args):
    # values from a config file skip the argparse type hooks
    if hasattr(args, "n"):
        try:
            args.n = even_dim(str(args.n))
        except argparse.ArgumentTypeError as exc:
            parser.error(str(exc))
    if getattr(args, "steps", 2) < 2:
        parser.error("--steps must be >= 2")
    if args.command == "spectrum" and not args.a_min < args.a_max:
        parser.error("--a-min must be smaller than --a-max")
    if args.command == "zcritical" and not args.z_min < args.z_max:
        parser.error("--z-min must be smaller than --z-max")


def _load_config(parser, path) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        parser.error(f"config file is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        parser.error("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def parse(argv=None):
    parser, subs = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # config values become subcommand defaults before the real parse, so
    # they can stand in for required flags
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = next((tok for tok in argv if tok in subs), None)
    if known.config and command:
        cfg = _load_config(parser, known.config)
        p = subs[command]
        actions = {a.dest: a for a in p._actions}
        unknown = sorted(set(cfg) - set(actions) - {"command", "func"})
        if unknown:
            parser.error(f"unknown config keys for {command}: {', '.join(unknown)}")
        for key in cfg:
            actions[key].required = False
        p.set_defaults(**cfg)
    args = parser.parse_args(argv)
    _validate(parser, args)
    return args


def main(argv=None) -> int:
    try:
        args = parse(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except OSError as exc:
        print(f"ptlattice: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except PtLatticeError as exc:
        print(f"ptlattice: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"ptlattice: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK
