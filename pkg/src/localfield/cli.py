"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical-domain error (degenerate Hamiltonian, dimension mismatch,
singular QFIM under the strict policy).
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .bounds import theorem1_bound
from .errors import (
    DegenerateHamiltonian,
    DimensionMismatch,
    InvalidAlpha,
    LocalFieldError,
    ParseError,
    SingularQfim,
    UnsupportedFamily,
)
from .hamiltonian import pauli_z_hamiltonian
from .optimizer import FAMILIES, OptimizationTask, TaskFailure, sweep
from .probes import GhzParams, ghz_probe, gme_certify, product_probe
from .qfim import figure_of_merit, qfim_mixed, qfim_pure
from .states import PureState
from .verify import MAX_N, report, run_checks
from .weights import build_w_bar, check_alpha, identity_weight, validate_psd_weight

log = logging.getLogger("localfield")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

SWEEP_HEADER = ["n", "alpha", "family", "bound", "achieved", "residual", "gme", "converged"]


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return io.fmt(x)


def _emit(text: str, output: str | None) -> None:
    if output:
        io.write_text(output, text)
    else:
        sys.stdout.write(text)


def _alpha(value) -> float:
    try:
        return check_alpha(value)
    except InvalidAlpha as exc:
        raise UsageError(str(exc)) from None


def _require_n(args, low=1):
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < low:
        raise UsageError(f"--n must be >= {low}, got {args.n}")
    return args.n


def parse_alpha_grid(spec: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma list of values."""
    try:
        if ":" in spec:
            start, stop, step = (float(x) for x in spec.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = [round(start + k * step, 12) for k in range(count)]
        else:
            values = [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad alpha grid {spec!r}; use start:stop:step or a,b,c") from None
    if not values:
        raise UsageError("empty alpha grid")
    return [_alpha(a) for a in values]


def _load(path, parser, what):
    try:
        text = io.read_text(path)
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path}: {exc.strerror}") from None
    try:
        return parser(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


# --- commands ----------------------------------------------------------------

def cmd_bound(args) -> int:
    if args.hamiltonian and args.n is not None:
        raise UsageError("--hamiltonian and --n are mutually exclusive")
    if args.alpha is not None:
        _alpha(args.alpha)
    h = _load(args.hamiltonian, io.parse_hamiltonian, "Hamiltonian") if args.hamiltonian else None
    if h is None:
        h = pauli_z_hamiltonian(_require_n(args))
    n = h.n_sites
    kind = args.weight or "wbar"
    if kind == "wbar":
        if n < 2:
            raise UsageError("the built-in weight family needs N >= 2")
        alpha = _alpha(0.5 if args.alpha is None else args.alpha)
        w = build_w_bar(n, alpha)
    elif kind == "identity":
        if args.alpha is not None:
            raise UsageError("--alpha only applies to the built-in weight family")
        w = identity_weight(n)
    else:
        if args.alpha is not None:
            raise UsageError("--alpha and a weight file are mutually exclusive")
        w = validate_psd_weight(_load(kind, io.parse_matrix, "weight"))
    value = theorem1_bound(w, h)
    record = {"N": n, "alpha": w.alpha, "weight": kind if kind in ("wbar", "identity") else "file",
              "bound": value}
    if args.format == "json":
        _emit(json.dumps(record) + "\n", args.output)
    elif args.format == "csv":
        _emit(_csv([list(record)], [[_fmt(v) for v in record.values()]]), args.output)
    else:
        _emit(_fmt(value) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    n = args.n if args.n is not None else 3
    if n < 2 or n > args.max_n:
        raise UsageError(f"--n must lie in [2, {args.max_n}], got {n}")
    alpha = _alpha(args.alpha)
    results = run_checks(n, alpha, seed=args.seed, samples=args.samples)
    if args.format == "json":
        payload = [r.__dict__ for r in results]
        _emit(json.dumps({"N": n, "alpha": alpha, "seed": args.seed, "checks": payload}, indent=2) + "\n",
              args.output)
        ok = all(r.passed for r in results)
    else:
        lines: list[str] = []
        ok = report(results, lines.append)
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_FAIL


def _csv(header_rows, rows) -> str:
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in header_rows + rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    bad = [f for f in families if f not in FAMILIES]
    if not families or bad:
        raise UsageError(f"unknown families {bad or families}; choose from {', '.join(FAMILIES)}")
    ns = [int(x) for x in str(args.n).split(",")] if args.n is not None else [3]
    if any(n < 2 or n > MAX_N for n in ns):
        raise UsageError(f"--n values must lie in [2, {MAX_N}]")
    alphas = parse_alpha_grid(args.alpha_grid)
    tasks = []
    for n in ns:
        h = pauli_z_hamiltonian(n)
        for alpha in alphas:
            w = build_w_bar(n, alpha)
            for fam in families:
                if fam == "parametric_n3" and n != 3:
                    raise UsageError("parametric_n3 needs --n 3")
                tasks.append(OptimizationTask(fam, w, h, restarts=args.restarts, seed=args.seed,
                                              max_iters=args.max_iters))
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    results = sweep(tasks, jobs=jobs)

    rows, records = [], []
    for i, (task, res) in enumerate(zip(tasks, results)):
        bound = theorem1_bound(task.W, task.h)
        rec = {"n": task.h.n_sites, "alpha": task.W.alpha, "family": task.family, "bound": bound}
        if isinstance(res, TaskFailure):
            log.error("task %d failed: %s", i, res.error)
            rec.update(achieved=None, residual=None, gme=None, converged=False, error=res.error)
        else:
            rec.update(achieved=res.best_value, residual=res.best_value - bound,
                       gme=gme_certify(res.best_state).is_gme, converged=res.converged)
            if args.trace_dir:
                Path(args.trace_dir).mkdir(parents=True, exist_ok=True)
                trace = {"task": i, **{k: rec[k] for k in ("n", "alpha", "family")},
                         "restart_traces": res.restart_traces, "best_restart": res.best_restart}
                io.write_text(Path(args.trace_dir) / f"task_{i:04d}.json", json.dumps(trace) + "\n")
        records.append(rec)
        rows.append([_fmt(rec[k]) for k in SWEEP_HEADER])
    if args.format == "json":
        _emit(json.dumps(records, indent=2) + "\n", args.output)
    else:
        _emit(_csv([SWEEP_HEADER], rows), args.output)
    return EXIT_OK if all(not isinstance(r, TaskFailure) for r in results) else EXIT_FAIL


def cmd_qfim(args) -> int:
    state = _load(args.state, io.parse_state, "state")
    if args.hamiltonian:
        h = _load(args.hamiltonian, io.parse_hamiltonian, "Hamiltonian")
    else:
        if any(d != 2 for d in state.site_dims):
            raise UsageError("non-qubit states need --hamiltonian")
        h = pauli_z_hamiltonian(len(state.site_dims))
    f = qfim_pure(state, h) if isinstance(state, PureState) else qfim_mixed(state, h)
    text = io.format_matrix(f.matrix)
    if args.weight:
        if args.weight == "wbar":
            w = build_w_bar(h.n_sites, _alpha(0.5 if args.alpha is None else args.alpha))
        elif args.weight == "identity":
            w = identity_weight(h.n_sites)
        else:
            w = validate_psd_weight(_load(args.weight, io.parse_matrix, "weight"))
        text += f"fom {_fmt(figure_of_merit(w, f, policy=args.policy))}\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_state(args) -> int:
    n = _require_n(args, 1)
    if args.family == "ghz":
        state = ghz_probe(GhzParams(args.theta, args.phi, n))
    else:
        state = product_probe([(args.theta, args.phi)] * n)
    if args.mixed:
        state = state.density()
    _emit(io.format_state(state), args.output)
    return EXIT_OK


def cmd_hamiltonian(args) -> int:
    _emit(io.format_hamiltonian(pauli_z_hamiltonian(_require_n(args, 1))), args.output)
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="localfield",
        description="Probe-optimized precision bounds for estimating independent local fields.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--output", help="output path (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=["text", "csv", "json"], default=None)

    p = sub.add_parser("bound", help="probe-optimized lower bound on Tr(W F^-1)")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--weight", help="'wbar' (default), 'identity', or a weight file")
    p.add_argument("--hamiltonian", help="Hamiltonian file instead of the built-in sigma_z family")
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=50, help="random probes per property check")
    p.add_argument("--max-n", type=int, default=MAX_N)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="optimize probe families over an alpha grid, emit CSV")
    p.add_argument("--n", default=None, help="N or comma list of N (default 3)")
    p.add_argument("--alpha-grid", default="0.1:0.9:0.1")
    p.add_argument("--families", default="ghz,product")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--jobs", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--trace-dir", help="write one JSON convergence trace per task here")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("qfim", help="QFIM of a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--hamiltonian", help="Hamiltonian file (default: sigma_z on every qubit)")
    p.add_argument("--weight", help="also print Tr(W F^-1): 'wbar', 'identity', or a weight file")
    p.add_argument("--alpha", type=float)
    p.add_argument("--policy", choices=["strict", "pseudo"], default="pseudo")
    common(p, fmt=False)
    p.set_defaults(func=cmd_qfim)

    p = sub.add_parser("state", help="write a GHZ or product probe in the state file format")
    p.add_argument("--family", choices=["ghz", "product"], default="ghz")
    p.add_argument("--n", type=int)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--mixed", action="store_true", help="write the density-matrix form")
    common(p, fmt=False)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("hamiltonian", help="write the sigma_z Hamiltonian file for N qubits")
    p.add_argument("--n", type=int)
    common(p, fmt=False)
    p.set_defaults(func=cmd_hamiltonian)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "format", None) is None and args.command == "sweep":
        args.format = "csv"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateHamiltonian, DimensionMismatch, SingularQfim) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except UnsupportedFamily as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LocalFieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
