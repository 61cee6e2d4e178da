"""Command-line front end.

Subcommands::

    steady       steady Bloch vector, purity and ellipsoid residual
    spectrum     nonzero eigenvalues, gap and exceptional-point order
    optimize     optimal Zeeman ratio and rate for one target purity
    curve        optimal rate versus purity (table)
    scan         eigenvalue branches versus Zeeman ratio (table)
    evolve       trajectory towards the steady state (table)
    trace-check  superoperator trace with and without the Hamiltonian

Rates are in units of the measurement strength alpha. Exit status is 0 on
success, 2 for argument errors, 3 for infeasible requests and 4 for
numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import core
from .dynamics import DiscreteStepConfig, evolve_continuous, evolve_discrete
from .errors import InfeasibleTargetError, NumericalError, SteeringError
from .liouvillian import (
    GeneralLindblad,
    ProtocolParams,
    average_rate,
    protocol_lindblad,
    steady_state,
    super_trace,
)
from .optimizer import DEFAULT_OMEGA_MAX, branch_scan, optimize, rate_curve
from .spectral import EP_TOL, purity_spectrum, spectrum
from .steering import check_purity, ellipsoid_residual, omega_min

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _vector(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three components, got {text!r}")
    return np.array(parts)


def _grid(text: str) -> np.ndarray:
    try:
        start, stop, count = text.split(":")
        start, stop, n = float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    return np.linspace(start, stop, n)


def _angle(args, value: float) -> float:
    return math.radians(value) if args.degrees else value


def _params(args) -> ProtocolParams:
    m_hat = tuple(core.normalize(args.m_hat)) if args.m_hat is not None else (0.0, 0.0, 1.0)
    try:
        return ProtocolParams(
            omega=args.omega,
            theta=_angle(args, args.theta),
            phi=_angle(args, args.phi),
            m_hat=m_hat,
            alpha=getattr(args, "alpha", 1.0),
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _check_omega(purity: float, omega: float) -> None:
    bound = omega_min(purity)
    if omega < bound:
        raise InfeasibleTargetError(
            f"Omega = {omega:.12g} is below the lower bound "
            f"Omega_min(P) = sqrt(2 sqrt(2(1-P)) / (1 - sqrt(2(1-P)))) = {bound:.12g} for P = {purity:.12g}"
        )


# --- subcommands -------------------------------------------------------------


def cmd_steady(args) -> dict:
    params = _params(args)
    s = steady_state(params)
    return {
        "command": "steady",
        "bloch": s,
        "purity": core.purity(s),
        "ellipsoid_residual": ellipsoid_residual(s, params.m_hat),
    }


def cmd_spectrum(args) -> dict:
    if args.purity is not None:
        _check_omega(args.purity, args.omega)
        rep = purity_spectrum(args.purity, args.omega, args.ep_tol)
    else:
        rep = spectrum(_params(args), args.ep_tol)
    out = {"command": "spectrum"}
    out.update(rep.to_dict())
    return out


def cmd_optimize(args) -> dict:
    opt = optimize(args.purity, args.omega_max, ep_tol=args.ep_tol)
    d = opt.to_dict()
    return {
        "command": "optimize",
        "purity": d["purity"],
        "regime": d["regime"],
        "omega": d["omega_opt"],
        "gamma": d["gamma_opt"],
        "ep_order": d["ep_order"],
        "oscillatory": d["oscillatory"],
        "capped": d["capped"],
        "gamma_sup": d["gamma_sup"],
        "omega_min": d["omega_min"],
        "eigenvalues": d["spectrum"]["eigenvalues"],
    }


def cmd_curve(args) -> dict:
    if args.workers > 1:
        # map keeps the input grid order
        with ProcessPoolExecutor(args.workers) as pool:
            work = partial(rate_curve, omega_max=args.omega_max, ep_tol=args.ep_tol)
            rows = [r[0] for r in pool.map(work, [[p] for p in args.grid])]
    else:
        rows = rate_curve(args.grid, args.omega_max, ep_tol=args.ep_tol)
    for row in rows:
        if "error" in row:
            print(f"warning: P = {row['purity']:.12g}: {row['error']}", file=sys.stderr)
    return {
        "command": "curve",
        "columns": ["purity", "gamma_opt", "omega_opt", "ep_order", "regime"],
        "rows": rows,
    }


def cmd_scan(args) -> dict:
    for w in args.grid:
        _check_omega(args.purity, w)
    scan = branch_scan(args.purity, args.grid, ep_tol=args.ep_tol)
    rows = []
    for w, lam in zip(scan.omega, scan.eigenvalues):
        row = {"omega": float(w)}
        for j, z in enumerate(lam, start=1):
            row[f"re{j}"] = float(z.real)
            row[f"im{j}"] = float(z.imag)
        rows.append(row)
    return {
        "command": "scan",
        "purity": args.purity,
        "columns": ["omega", "re1", "im1", "re2", "im2", "re3", "im3"],
        "rows": rows,
    }


def cmd_evolve(args) -> dict:
    params = _params(args)
    initial = core.bloch_to_density(args.initial)
    n_steps = max(1, int(round(args.t_final / args.dt)))
    if args.method == "discrete":
        config = DiscreteStepConfig.from_alpha(args.dt, params.alpha, params.m_hat)
        traj = evolve_discrete(config, params, initial, n_steps, args.record_every)
    else:
        traj = evolve_continuous(params, initial, n_steps * args.dt, n_steps, args.record_every)
    rows = [
        {"t": float(t), "sx": float(s[0]), "sy": float(s[1]), "sz": float(s[2]), "distance": float(d)}
        for t, s, d in zip(traj.times, traj.states, traj.distances)
    ]
    return {
        "command": "evolve",
        "method": args.method,
        "target": traj.target,
        "columns": ["t", "sx", "sy", "sz", "distance"],
        "rows": rows,
    }


def _complex_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise UsageError("matrices must be N x N real or N x N x 2 (re, im) arrays")


def _load_lindblad(path: str) -> GeneralLindblad:
    # {"hamiltonian": M, "jump_ops": [M, ...], "rates": [g, ...]} with M an
    # N x N real or N x N x 2 (re, im) nested list; rates are optional
    with open(path) as fh:
        data = json.load(fh)
    try:
        H = _complex_matrix(data["hamiltonian"])
        jumps = [_complex_matrix(L) for L in data.get("jump_ops", [])]
        return GeneralLindblad(H, jumps, data.get("rates"))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"invalid Lindbladian file {path}: {exc}")


def _random_lindblad(dim: int, n_jumps: int, rng: np.random.Generator) -> GeneralLindblad:
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    jumps = [
        (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(dim)
        for _ in range(n_jumps)
    ]
    return GeneralLindblad(0.5 * (A + A.conj().T), jumps)


def cmd_trace_check(args) -> dict:
    if args.input:
        lind = _load_lindblad(args.input)
        source = "file"
    elif args.omega is not None:
        lind = protocol_lindblad(_params(args))
        source = "protocol"
    else:
        if args.dim < 2:
            raise UsageError("--dim must be >= 2")
        lind = _random_lindblad(args.dim, args.n_jumps, np.random.default_rng(args.seed))
        source = "random"
    bare = GeneralLindblad(np.zeros_like(lind.hamiltonian), lind.jump_ops, lind.rates)
    with_h, without_h = super_trace(lind), super_trace(bare)
    n = lind.dim
    return {
        "command": "trace-check",
        "source": source,
        "dim": n,
        "seed": args.seed if source == "random" else None,
        "trace": [with_h.real, with_h.imag],
        "trace_without_hamiltonian": [without_h.real, without_h.imag],
        "hamiltonian_contribution": abs(with_h - without_h),
        "average_rate": average_rate(lind),
        "average_from_trace": -with_h.real / (n * n - 1),
    }


# --- parser and output ---------------------------------------------------------


def _add_field_args(p, required_omega=True):
    p.add_argument("--omega", type=float, required=required_omega, help="Zeeman ratio omega/alpha")
    p.add_argument("--theta", type=float, default=0.0, help="field polar angle (radians)")
    p.add_argument("--phi", type=float, default=0.0, help="field azimuth (radians)")
    p.add_argument("--m-hat", type=_vector, default=None, help="detector direction x,y,z")
    p.add_argument("--degrees", action="store_true", help="angles are given in degrees")


def _add_output_args(p, default_format):
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--out", default="-", help="output path ('-' for standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsteer", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("steady", help="closed-form steady state")
    _add_field_args(p)
    _add_output_args(p, "json")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("spectrum", help="nonzero Liouvillian eigenvalues")
    _add_field_args(p)
    p.add_argument("--purity", type=float, default=None,
                   help="target purity; the field angle is then derived from it")
    p.add_argument("--ep-tol", type=float, default=EP_TOL)
    _add_output_args(p, "json")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("optimize", help="optimal steering for one purity")
    p.add_argument("--purity", type=float, required=True)
    p.add_argument("--omega-max", type=float, default=DEFAULT_OMEGA_MAX)
    p.add_argument("--ep-tol", type=float, default=EP_TOL)
    _add_output_args(p, "json")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("curve", help="optimal rate versus purity")
    p.add_argument("--grid", type=_grid, default=_grid("0.55:1:91"), help="purities start:stop:count")
    p.add_argument("--omega-max", type=float, default=DEFAULT_OMEGA_MAX)
    p.add_argument("--ep-tol", type=float, default=EP_TOL)
    p.add_argument("--workers", type=int, default=1, help="worker processes over grid points")
    _add_output_args(p, "csv")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("scan", help="eigenvalue branches versus Omega")
    p.add_argument("--purity", type=float, required=True)
    p.add_argument("--grid", type=_grid, required=True, help="Omega values start:stop:count")
    p.add_argument("--ep-tol", type=float, default=EP_TOL)
    _add_output_args(p, "csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("evolve", help="time evolution towards the steady state")
    _add_field_args(p)
    p.add_argument("--alpha", type=float, default=1.0, help="measurement strength")
    p.add_argument("--initial", type=_vector, default=np.array([0.0, 0.0, 0.0]),
                   help="initial Bloch vector x,y,z")
    p.add_argument("--t-final", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--method", choices=("continuous", "discrete"), default="continuous")
    p.add_argument("--record-every", type=int, default=10)
    _add_output_args(p, "csv")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("trace-check", help="Hamiltonian independence of the superoperator trace")
    p.add_argument("--input", default=None, help="JSON file with hamiltonian and jump_ops")
    p.add_argument("--omega", type=float, default=None, help="check the steering protocol instead")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--m-hat", type=_vector, default=None)
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--n-jumps", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p, "json")
    p.set_defaults(func=cmd_trace_check)
    return parser


def render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(result), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if "rows" in result:
        cols = result["columns"]
        writer.writerow(cols)
        for row in result["rows"]:
            writer.writerow([_fmt(row.get(c)) for c in cols])
    else:
        flat = {}
        for k, v in result.items():
            if isinstance(v, (list, tuple, np.ndarray)):
                for i, x in enumerate(np.ravel(np.asarray(v, dtype=object))):
                    flat[f"{k}_{i}"] = x
            else:
                flat[k] = v
        writer.writerow(list(flat))
        writer.writerow([_fmt(v) for v in flat.values()])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "purity", None) is not None:
            check_purity(args.purity)
        result = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleTargetError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SteeringError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = render(result, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
