"""Batch command-line front end.

Commands: spectrum, figure1, state, verify, fm.  Output is CSV (default) or
JSON, deterministic for a given configuration: floats are printed with 17
significant digits, rows in a fixed order, and nothing is written until the
computation has succeeded.

Exit codes: 0 success, 1 verification failure, 2 numerical or solver
failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import checks
from .fm import FmProblem, NoBoundStateError, fm_exponents, fm_quantization_residual
from .gup import DeformedAlgebra, DegenerateModelError, OscillatorSystem, UndeformedBranchError, p_of_rho
from .spectrum import SolverError, energy_nonrel, energy_relativistic, ratio_sweep
from .states import (
    NONRELATIVISTIC,
    QuadratureAccuracyError,
    RELATIVISTIC,
    eval_state,
    make_state,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 64

_BRANCHES = {"rel": RELATIVISTIC, "nr": NONRELATIVISTIC}

_DEFAULTS = {
    "mass": 1.0,
    "omega": 1.0,
    "hbar": 1.0,
    "eta": 0.1,
    "gamma": 0.0,
    "nmax": 8,
    "branch": "rel",
    "format": "csv",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    mass: float
    omega: float
    hbar: float
    eta: float
    gamma: float
    n_max: int
    branch: str
    output_format: str
    output_path: str | None
    quad_order: int
    literal_raise: bool = False

    def validate(self) -> None:
        if not self.mass > 0:
            raise UsageError("mass must be > 0")
        if not self.omega > 0:
            raise UsageError("omega must be > 0")
        if not self.hbar > 0:
            raise UsageError("hbar must be > 0")
        if self.eta < 0:
            raise UsageError("eta must be >= 0")
        if self.n_max < 0:
            raise UsageError("nmax must be >= 0")
        if self.branch not in _BRANCHES:
            raise UsageError(f"branch must be one of {sorted(_BRANCHES)}")
        if self.output_format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if self.quad_order < 1:
            raise UsageError("quadrature order must be >= 1")

    def system(self) -> OscillatorSystem:
        return OscillatorSystem(
            self.mass, self.omega,
            DeformedAlgebra(eta=self.eta, gamma=self.gamma, hbar=self.hbar),
        )


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract here is 64
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_config_file(path: str) -> dict:
    """Flat key=value file; '#' starts a comment."""
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in _DEFAULTS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    return values


def _coerce(key: str, value: str):
    try:
        if key == "nmax":
            return int(value)
        if key in ("branch", "format"):
            return value
        return float(value)
    except ValueError as exc:
        raise UsageError(f"invalid value for {key}: {value!r}") from exc


def _build_config(args) -> RunConfig:
    file_values = _read_config_file(args.config) if args.config else {}
    merged = {}
    for key, default in _DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in file_values:
            merged[key] = _coerce(key, file_values[key])
        else:
            merged[key] = default
    order_text = os.environ.get("GUP_QUAD_ORDER", "200")
    try:
        quad_order = int(order_text)
    except ValueError as exc:
        raise UsageError(f"GUP_QUAD_ORDER must be an integer, got {order_text!r}") from exc
    config = RunConfig(
        mass=merged["mass"],
        omega=merged["omega"],
        hbar=merged["hbar"],
        eta=merged["eta"],
        gamma=merged["gamma"],
        n_max=merged["nmax"],
        branch=merged["branch"],
        output_format=merged["format"],
        output_path=args.out,
        quad_order=quad_order,
        literal_raise=getattr(args, "literal_raise", False),
    )
    config.validate()
    return config


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit(config: RunConfig, command: str, meta: dict, columns: list[str], rows: list) -> None:
    """Assemble the whole document, then write it in one go."""
    if config.output_format == "csv":
        lines = [f"# gupho {command}"]
        for key, value in meta.items():
            lines.append(f"# {key}={_fmt(value)}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "meta": {"command": command, **meta, "columns": columns},
            "rows": [list(row) for row in rows],
        }
        text = json.dumps(doc, indent=2) + "\n"
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _config_meta(config: RunConfig) -> dict:
    return {
        "mass": config.mass,
        "omega": config.omega,
        "hbar": config.hbar,
        "eta": config.eta,
        "gamma": config.gamma,
    }


def _cmd_spectrum(config: RunConfig, args) -> int:
    rows = []
    system = config.system()
    for n in range(config.n_max + 1):
        if config.branch == "rel":
            res = energy_relativistic(system, n)
        else:
            res = energy_nonrel(system, n)
        rows.append((res.n, res.energy, res.residual, res.iterations, res.method))
    meta = _config_meta(config)
    meta["branch"] = config.branch
    _emit(config, "spectrum", meta, ["n", "energy", "residual", "iterations", "method"], rows)
    return EXIT_OK


def _cmd_figure1(config: RunConfig, args) -> int:
    if args.steps < 2:
        raise UsageError("steps must be >= 2")
    if not 0 <= args.xi_min < args.xi_max:
        raise UsageError("requires 0 <= xi-min < xi-max")
    try:
        n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"invalid n-list: {args.n_list!r}") from exc
    if not n_list or any(n < 0 for n in n_list):
        raise UsageError("n-list must contain nonnegative integers")
    xi_grid = [
        args.xi_min + i * (args.xi_max - args.xi_min) / (args.steps - 1)
        for i in range(args.steps)
    ]
    rows = ratio_sweep(config.mass, config.omega, config.hbar, config.gamma, n_list, xi_grid)
    meta = _config_meta(config)
    del meta["eta"]  # eta is derived from xi here
    meta["units"] = "a0=1 (natural units)"
    meta["branch"] = "nr"
    _emit(config, "figure1", meta, ["xi", "n", "E_n", "E_0", "ratio"], rows)
    return EXIT_OK


def _cmd_state(config: RunConfig, args) -> int:
    if args.samples < 2:
        raise UsageError("samples must be >= 2")
    if args.n < 0:
        raise UsageError("n must be >= 0")
    system = config.system()
    state = make_state(system, args.n, _BRANCHES[config.branch], order=config.quad_order)
    rows = []
    for i in range(args.samples):
        rho = -0.99 + 1.98 * i / (args.samples - 1)
        rows.append((p_of_rho(system.algebra, rho), rho, float(eval_state(state, rho))))
    meta = _config_meta(config)
    meta.update({"branch": config.branch, "n": args.n, "v": state.v,
                 "lambda": state.lam, "norm": state.norm, "energy": state.energy})
    _emit(config, "state", meta, ["p", "rho", "phi"], rows)
    return EXIT_OK


def _cmd_verify(config: RunConfig, args) -> int:
    results = checks.run_suite(
        mass=config.mass,
        omega=config.omega,
        hbar=config.hbar,
        eta=config.eta,
        gamma=config.gamma,
        n_max=config.n_max,
        order=config.quad_order,
        literal_raise=config.literal_raise,
    )
    rows = [
        (r.name, r.max_deviation, r.tolerance, "pass" if r.passed else "fail")
        for r in results
    ]
    meta = _config_meta(config)
    meta["nmax"] = config.n_max
    meta["literal_raise"] = config.literal_raise
    _emit(config, "verify", meta, ["check", "max_deviation", "tolerance", "status"], rows)
    failing = [r.name for r in results if not r.passed]
    if failing:
        print(f"verification failed: {', '.join(failing)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_fm(config: RunConfig, args) -> int:
    problem = FmProblem(k1=args.k1, k2=args.k2, k3=args.k3, A=args.A, B=args.B, C=args.C)
    k4, k5 = fm_exponents(problem)
    residual = fm_quantization_residual(problem, args.n)
    meta = {"k1": args.k1, "k2": args.k2, "k3": args.k3,
            "A": args.A, "B": args.B, "C": args.C, "n": args.n}
    _emit(config, "fm", meta, ["k4", "k5", "residual"], [(k4, k5, residual)])
    return EXIT_OK


def _make_parser() -> _Parser:
    parser = _Parser(prog="gupho", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--mass", type=float)
    common.add_argument("--omega", type=float)
    common.add_argument("--hbar", type=float)
    common.add_argument("--eta", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--nmax", type=int)
    common.add_argument("--branch", choices=sorted(_BRANCHES))
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--config", metavar="PATH", help="key=value file; flags take precedence")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="energy levels for n = 0..nmax")
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("figure1", parents=[common],
                       help="level-to-ground-state ratio sweep over the minimal length")
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=50.0)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--n-list", default="1,2,3")
    p.set_defaults(handler=_cmd_figure1)

    p = sub.add_parser("state", parents=[common], help="sample a normalized state on a rho grid")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--samples", type=int, default=101)
    p.set_defaults(handler=_cmd_state)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--literal-raise", action="store_true",
                   help="use the constant-term raising form (documents its failure)")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("fm", parents=[common],
                       help="exponents and quantization residual for raw standard-form coefficients")
    for flag in ("--k1", "--k2", "--k3", "--A", "--B", "--C"):
        p.add_argument(flag, type=float, required=True, dest=flag.lstrip("-"))
    p.add_argument("--n", type=int, default=0)
    p.set_defaults(handler=_cmd_fm)

    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        config = _build_config(args)
        return args.handler(config, args)
    except UsageError as exc:
        print(f"gupho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        SolverError,
        NoBoundStateError,
        DegenerateModelError,
        UndeformedBranchError,
        QuadratureAccuracyError,
    ) as exc:
        print(f"gupho: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"gupho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
