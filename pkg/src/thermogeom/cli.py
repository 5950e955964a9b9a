"""Command-line front end.

    thermogeom gas {metric,curvature,spinodal,critical,pt-boundary} [options]
    thermogeom reaction {w-curve,critical-extent,gibbs-scan,metric} [options]
    thermogeom solution {metric,decompose} [options]
    thermogeom verify [--only SECTION] [--json PATH]

Options may also come from a flat ``key = value`` file given with
``--config``; keys are the long option names (``range = 0.5:3``,
``model = vdw``).  Command-line flags win over the file.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 domain error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import acceptance, figures, gases, reactions, solutions
from .csvio import write_csv
from .errors import ConfigError, DomainError, ThermoGeomError

log = logging.getLogger("thermogeom")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3


def parse_range(text: str):
    try:
        lo, hi = (float(x) for x in str(text).split(":"))
    except ValueError:
        raise ConfigError(f"range must look like lo:hi, got {text!r}") from None
    if not lo < hi:
        raise ConfigError(f"empty range {text!r}")
    return lo, hi


def parse_floats(text: str):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# option name -> (type, help); every option defaults to None so config files can fill gaps
GAS_OPTS = {
    "model": (str, "ideal | vdw | berthelot"),
    "a": (float, "interaction constant"),
    "b": (float, "excluded molar volume"),
    "R": (float, "gas constant"),
    "cv": (float, "molar heat capacity at constant volume"),
    "T": (float, "temperature for metric and curvature scans"),
    "range": (str, "scan range lo:hi (molar volume, or reduced temperature for pt-boundary)"),
    "samples": (int, "number of scan points"),
    "tr": (float, "single reduced temperature for pt-boundary"),
}
REACTION_OPTS = {
    "builtin": (str, "synthesis | dissociation | displacement | a-to-b"),
    "nu": (str, "stoichiometric numbers, comma-separated (overrides --builtin)"),
    "n0": (str, "initial moles, comma-separated"),
    "T": (float, "temperature"),
    "p": (float, "pressure"),
    "R": (float, "gas constant"),
    "omega": (float, "regular excess Gibbs parameter for gibbs-scan"),
    "range": (str, "extent range lo:hi"),
    "samples": (int, "number of scan points"),
}
SOLUTION_OPTS = {
    "moles": (str, "mole numbers, comma-separated"),
    "species": (int, "species count for random mole vectors"),
    "samples": (int, "number of random mole vectors"),
    "seed": (int, "random seed"),
    "margules": (float, "Margules binary parameter A (two species)"),
    "T": (float, "temperature"),
    "p": (float, "pressure"),
    "R": (float, "gas constant"),
}


def _add_opts(p: argparse.ArgumentParser, opts: dict):
    for name, (typ, help_) in opts.items():
        p.add_argument(f"--{name}", type=typ, default=None, help=help_)
    p.add_argument("--out", default=None, help="CSV output path (stdout when omitted)")
    p.add_argument("--config", default=None, help="flat key = value configuration file")
    p.set_defaults(_opts=opts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermogeom", description="Hessian-metric thermodynamic geometry.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="system", required=True)

    gas = sub.add_parser("gas", help="single-component gases")
    gas.add_argument("action", choices=["metric", "curvature", "spinodal", "critical", "pt-boundary"])
    _add_opts(gas, GAS_OPTS)

    rx = sub.add_parser("reaction", help="single chemical reactions")
    rx.add_argument("action", choices=["w-curve", "critical-extent", "gibbs-scan", "metric"])
    _add_opts(rx, REACTION_OPTS)

    sol = sub.add_parser("solution", help="multicomponent solutions")
    sol.add_argument("action", choices=["metric", "decompose"])
    _add_opts(sol, SOLUTION_OPTS)

    ver = sub.add_parser("verify", help="run the acceptance suite")
    ver.add_argument("--only", choices=acceptance.SECTIONS, default=None)
    ver.add_argument("--json", default=None, help="write the JSON report here ('-' for stdout)")
    ver.add_argument(
        "--mutate-vdw-a", type=float, default=1.0, help=argparse.SUPPRESS
    )  # multiplies the vdW constant; a mutation-testing hook
    return parser


def merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill options left unset on the command line from ``--config``."""
    if getattr(args, "config", None) is None:
        return args
    opts = args._opts
    for key, value in read_config(args.config).items():
        if key == "out":
            if args.out is None:
                args.out = value
            continue
        if key not in opts:
            raise ConfigError(f"unknown configuration key {key!r}")
        if getattr(args, key) is None:
            try:
                setattr(args, key, opts[key][0](value))
            except ValueError:
                raise ConfigError(f"bad value for {key!r}: {value!r}") from None
    return args


def _get(args, name, default):
    v = getattr(args, name, None)
    return default if v is None else v


def _emit(args, header, rows, out=None):
    out = sys.stdout if out is None else out
    text = write_csv(args.out, header, rows)
    if args.out is None:
        out.write(text)
    else:
        print(f"wrote {len(rows)} rows to {args.out}", file=out)


# ------------------------------------------------------------------- gas


def _gas_model(args) -> gases.GasModel:
    kind = _get(args, "model", "vdw")
    R, cv = _get(args, "R", 1.0), _get(args, "cv", 1.5)
    if not (R > 0 and cv > 0):
        raise ConfigError("R and cv must be positive")
    try:
        if kind == "ideal":
            if (args.a or 0.0) != 0 or (args.b or 0.0) != 0:
                raise ConfigError("the ideal model takes no a or b")
            return gases.GasModel.ideal(R, cv)
        a, b = _get(args, "a", 1.0), _get(args, "b", 0.1)
        if kind == "vdw":
            return gases.GasModel.vdw(a, b, R, cv)
        if kind == "berthelot":
            return gases.GasModel.berthelot(a, b, R, cv)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown model {kind!r}")


def _samples(args, default):
    n = _get(args, "samples", default)
    if n < 2:
        raise ConfigError("samples must be at least 2")
    return n


def cmd_gas(args, out=None) -> int:
    if args.action == "pt-boundary":
        if args.tr is not None:
            trs = [args.tr]
        else:
            lo, hi = parse_range(_get(args, "range", "0.5:0.99"))
            trs = figures.linspace(lo, hi, _samples(args, 50))
        _emit(args, *figures.pt_boundary_rows(trs), out=out)
        return EXIT_OK

    model = _gas_model(args)
    if args.action == "critical":
        cp = gases.critical_point(model)
        _emit(args, ("p_c", "T_c", "v_c"), [(cp.p_c, cp.T_c, cp.v_c)], out=out)
        return EXIT_OK
    b = model.b
    if args.action == "spinodal":
        default = f"{1.2 * b if b > 0 else 0.1}:{20 * b if b > 0 else 10.0}"
        lo, hi = parse_range(_get(args, "range", default))
        header, rows = figures.spinodal_rows(model, figures.linspace(lo, hi, _samples(args, 100)))
        if not rows:
            log.warning("%s gas has no curve of degeneracy; emitting header only", model.kind)
        _emit(args, header, rows, out=out)
        return EXIT_OK
    lo, hi = parse_range(_get(args, "range", f"{b + 0.2}:{b + 3.0}"))
    T = _get(args, "T", 1.0)
    vs = figures.linspace(lo, hi, _samples(args, 50))
    if args.action == "metric":
        _emit(args, *figures.gas_metric_rows(model, T, vs), out=out)
    else:
        _emit(args, *figures.gas_curvature_rows(model, T, vs), out=out)
    return EXIT_OK


# -------------------------------------------------------------- reaction


def _stoichiometry(args) -> reactions.Stoichiometry:
    if args.nu is not None:
        nu = parse_floats(args.nu)
        if any(v != int(v) for v in nu):
            raise ConfigError("stoichiometric numbers must be integers")
        if args.n0 is None:
            raise ConfigError("--nu needs --n0")
        n0 = parse_floats(args.n0)
        try:
            return reactions.Stoichiometry(tuple(f"S{i + 1}" for i in range(len(nu))), tuple(int(v) for v in nu), n0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    try:
        return reactions.builtin(_get(args, "builtin", "synthesis"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_reaction(args, out=None) -> int:
    s = _stoichiometry(args)
    T, p, R = _get(args, "T", 298.15), _get(args, "p", 1.0), _get(args, "R", reactions.R_GAS)
    if args.action == "critical-extent":
        ce = reactions.critical_extent(s)
        if ce.monotone:
            print("W(xi) is monotone on the feasible interval: no critical extent", file=sys.stderr)
            _emit(args, ("xi_star", "W_star"), [], out=out)
        else:
            _emit(args, ("xi_star", "W_star"), [(ce.xi_star, ce.W_star)], out=out)
        return EXIT_OK
    lo, hi = reactions.feasibility_interval(s)
    w = hi - lo
    if args.range is None:
        lo, hi = lo + 0.01 * w, hi - 0.01 * w
    else:
        lo, hi = parse_range(args.range)
    xs = figures.linspace(lo, hi, _samples(args, 99))
    if args.action == "w-curve":
        _emit(args, *figures.w_curve_rows(s, xs), out=out)
    elif args.action == "gibbs-scan":
        _emit(args, *figures.gibbs_scan_rows(s, T, xs, p, args.omega, R), out=out)
    else:
        _emit(args, *figures.reaction_metric_rows(s, T, p, xs, R), out=out)
    return EXIT_OK


# -------------------------------------------------------------- solution


def cmd_solution(args, out=None) -> int:
    T, p, R = _get(args, "T", 298.15), _get(args, "p", 1.0), _get(args, "R", reactions.R_GAS)
    activity = None
    if args.margules is not None:
        activity = solutions.MargulesBinary(args.margules, R)
    if args.moles is not None:
        moles = [parse_floats(args.moles)]
    elif args.action == "decompose":
        moles = [[1.0, 1.0]]
    else:
        rng = np.random.default_rng(_get(args, "seed", 0))
        r = _get(args, "species", 3)
        if r < 1:
            raise ConfigError("species must be at least 1")
        moles = [rng.uniform(0.1, 5.0, size=r).tolist() for _ in range(_get(args, "samples", 10))]
    if activity is not None and len(moles[0]) != 2:
        raise ConfigError("the Margules model needs exactly two species")
    if args.action == "metric":
        _emit(args, *figures.solution_metric_rows(moles, T, p, activity, R), out=out)
    else:
        _emit(args, *figures.decompose_rows(moles[0], T, p, activity, R), out=out)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def cmd_verify(args, out=None) -> int:
    out = sys.stdout if out is None else out
    opts = acceptance.Options(vdw_a_scale=args.mutate_vdw_a)
    results = acceptance.run_acceptance(args.only, opts)
    for r in results:
        print(acceptance.format_line(r), file=out)
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed", file=out)
    if args.json is not None:
        text = json.dumps([r.as_json() for r in results], indent=2, default=_jsonable, allow_nan=True)
        if args.json == "-":
            out.write(text + "\n")
        else:
            with open(args.json, "w", encoding="utf-8", newline="") as fh:
                fh.write(text + "\n")
    return EXIT_VERIFY if n_fail else EXIT_OK


COMMANDS = {"gas": cmd_gas, "reaction": cmd_reaction, "solution": cmd_solution, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.system != "verify":
            merge_config(args)
        return COMMANDS[args.system](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ThermoGeomError, ArithmeticError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
