"""Command-line front end: ``kickratchet <command> [flags]``.

Commands
--------
convert     lab parameters to dimensionless ones
analytic    closed-form current as CSV on stdout
classical   classical ensemble run
quantum     quantum ensemble run
experiment  one of the figure scenarios or a custom sweep

Every flag can also be given in a JSON file passed with ``--config``; keys
are the flag names with dashes turned into underscores.  Flags on the
command line win over the file.  ``--dump-config`` prints the resolved
configuration in that same format and exits.

Exit status is 0 on success, 1 for invalid input and 2 for a failure while
running.  Errors are reported as a single JSON line on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analytic
from .classical import PARITIES, evolve_ensemble, sample_initial
from .experiments import FIGURE_IDS, ENGINES, Scenario, run_scenario
from .quantum import QuantumRunSpec, run_quantum
from .rng import DEFAULT_SEED
from .units import (
    DimensionlessParams,
    LabParams,
    ParameterError,
    cesium_lab,
    to_dimensionless,
)

log = logging.getLogger("kickratchet")

LAB_FIELDS = tuple(f.name for f in dataclasses.fields(LabParams))
LAB_FLAGS = ("lab_file", "pulse_period", "pulse_width", "freq_offset", "freq_mod")
DIMLESS_ONLY = ("hbar", "A", "rho_L")


class UsageError(Exception):
    """Bad flags or invariant violations; exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fail(kind, message, code):
    print(json.dumps({"error": kind, "message": str(message).replace("\n", " ")}),
          file=sys.stderr)
    return code


# ----------------------------------------------------------------- parser

def _add_common(p):
    p.add_argument("--config", metavar="FILE",
                   help="JSON file of flag values (keys use underscores)")
    p.add_argument("--dump-config", action="store_true",
                   help="print the resolved configuration as JSON and exit")
    p.add_argument("-v", "--verbose", action="count", default=0,
                   help="more logging on stderr (repeatable)")


def _add_physics(p, kick_default=2.6):
    g = p.add_argument_group("dimensionless parameters")
    g.add_argument("--K", type=float, default=kick_default, help="kick strength K > 0")
    g.add_argument("--b", type=float, default=1.0 / 16,
                   help="period asymmetry, 0 <= b < 1")
    g.add_argument("--A", type=float, default=None, help="rocking amplitude (default 0)")
    g.add_argument("--hbar", type=float, default=None,
                   help="effective Planck constant (default 1)")
    g.add_argument("--rho-L", dest="rho_L", type=float, default=None,
                   help="starting momentum in the lattice frame (default 0)")
    lab = p.add_argument_group(
        "lab parameters (exclusive with --hbar, --A, --rho-L)")
    lab.add_argument("--lab-file", metavar="FILE",
                     help="key = value file of LabParams fields")
    lab.add_argument("--pulse-period", type=float, help="pulse period T [s]")
    lab.add_argument("--pulse-width", type=float, help="pulse width t_p [s]")
    lab.add_argument("--freq-offset", type=float,
                     help="AOM frequency offset Delta f [Hz]")
    lab.add_argument("--freq-mod", type=float,
                     help="frequency modulation per period delta f [Hz]")


def _add_run(p):
    p.add_argument("--sigma-p", dest="sigma_p", type=float, default=1.0,
                   help="initial momentum spread")
    p.add_argument("--n-kicks", dest="n_kicks", type=int, default=120)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--parity", choices=PARITIES, default="even-long",
                   help="which kick parity is followed by the long flight 1+b")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", metavar="DIR",
                   help="write CSV files here instead of stats to stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kickratchet",
                     description="Two-period rocked kicked-rotor ratchet.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("convert", help="lab parameters to dimensionless ones")
    _add_common(p)
    _add_physics(p)

    p = sub.add_parser("analytic", help="closed-form current as CSV")
    _add_common(p)
    _add_physics(p)
    p.add_argument("--sigma-p", dest="sigma_p", type=float, default=0.0,
                   help="initial momentum spread (width damping)")
    p.add_argument("--t-max", dest="t_max", type=int, default=120)

    p = sub.add_parser("classical", help="classical ensemble run")
    _add_common(p)
    _add_physics(p)
    _add_run(p)
    p.add_argument("--n-trajectories", dest="n_trajectories", type=int,
                   default=100_000)

    p = sub.add_parser("quantum", help="quantum ensemble run")
    _add_common(p)
    _add_physics(p)
    _add_run(p)
    p.add_argument("--n-samples", dest="n_samples", type=int, default=1000)
    p.add_argument("--m-max", dest="m_max", type=int, default=None,
                   help="initial ladder half-width (auto grows)")
    p.add_argument("--n-phi", dest="n_phi", type=int, default=None,
                   help="initial angle grid size, power of two")
    p.add_argument("--chunk", type=int, default=256)

    p = sub.add_parser("experiment", help="figure scenario or custom sweep")
    _add_common(p)
    p.add_argument("id", choices=FIGURE_IDS)
    p.add_argument("--out", metavar="DIR", default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--engines", nargs="+", choices=ENGINES, default=None,
                   help="engines for a custom sweep")
    p.add_argument("--grid", action="append", default=None, metavar="KEY=V1,V2",
                   help="custom sweep axis; repeatable")
    p.add_argument("--option", action="append", default=None, metavar="KEY=VALUE",
                   help="engine option or figure override; repeatable")
    return parser


def _subparsers(parser):
    for act in parser._actions:
        if isinstance(act, argparse._SubParsersAction):
            return act.choices
    return {}


def _dests(p):
    skip = {"help", "config", "dump_config"}
    return [a.dest for a in p._actions if a.dest not in skip
            and a.dest != argparse.SUPPRESS]


def to_config(args) -> dict:
    """Namespace to the JSON-able config dict accepted by ``--config``."""
    d = {k: v for k, v in vars(args).items() if k not in ("config", "dump_config")}
    return d


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cmd = cfg.pop("command", args.command)
        if cmd != args.command:
            raise UsageError(f"config is for command {cmd!r}, not {args.command!r}")
        sp = _subparsers(parser)[args.command]
        known = set(_dests(sp))
        unknown = set(cfg) - known
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        if args.command == "experiment":
            cfg = _experiment_cfg_to_flags(cfg)
        sp.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def _experiment_cfg_to_flags(cfg):
    cfg = dict(cfg)
    if isinstance(cfg.get("grid"), dict):
        cfg["grid"] = [f"{k}={','.join(map(repr, v))}" for k, v in cfg["grid"].items()]
    if isinstance(cfg.get("option"), dict):
        cfg["option"] = [f"{k}={json.dumps(v)}" for k, v in cfg["option"].items()]
    return cfg


# --------------------------------------------------------------- resolving

def _read_lab_file(path) -> dict:
    out = {}
    with open(path) as fh:
        for i, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{i}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            if k not in LAB_FIELDS:
                raise UsageError(f"{path}:{i}: unknown lab field {k!r}")
            try:
                out[k] = float(v)
            except ValueError:
                raise UsageError(f"{path}:{i}: {k} is not a number")
    return out


def _lab_from_args(args):
    fields = _read_lab_file(args.lab_file) if args.lab_file else {}
    for flag, name in (("pulse_period", "pulse_period"), ("pulse_width", "pulse_width"),
                       ("freq_offset", "freq_offset"),
                       ("freq_mod", "freq_mod_amplitude")):
        v = getattr(args, flag)
        if v is not None:
            fields[name] = v
    return cesium_lab(**fields)


def resolve_params(args):
    """Return ``(DimensionlessParams, rho_L, lab_or_None)`` from the flags."""
    use_lab = any(getattr(args, f, None) is not None for f in LAB_FLAGS)
    if use_lab:
        clash = [f for f in DIMLESS_ONLY if getattr(args, f) is not None]
        if clash:
            raise UsageError("lab parameters are exclusive with "
                             + ", ".join("--" + c.replace("_", "-") for c in clash))
        lab = _lab_from_args(args)
        params, rho_L = to_dimensionless(lab, args.K, args.b)
        return params, rho_L, lab
    params = DimensionlessParams(
        args.K, args.b, 0.0 if args.A is None else args.A,
        1.0 if args.hbar is None else args.hbar)
    return params, 0.0 if args.rho_L is None else args.rho_L, None


def _kv(s, what):
    if "=" not in s:
        raise UsageError(f"--{what} expects KEY=VALUE, got {s!r}")
    k, v = s.split("=", 1)
    return k.strip(), v.strip()


def _scenario_from_args(args) -> Scenario:
    grid = {}
    for item in args.grid or []:
        k, v = _kv(item, "grid")
        try:
            grid[k] = [float(x) for x in v.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"--grid {k}: values must be numbers")
        if k == "kicks":
            grid[k] = [int(x) for x in grid[k]]
    options = {}
    for item in args.option or []:
        k, v = _kv(item, "option")
        try:
            options[k] = json.loads(v)
        except json.JSONDecodeError:
            options[k] = v
    if "rho_L" in options and isinstance(options["rho_L"], list):
        options["rho_L"] = tuple(options["rho_L"])
    engines = tuple(args.engines) if args.engines else ("analytic",)
    out = args.out if args.out is not None else args.id
    try:
        return Scenario(id=args.id, engines=engines, grid=grid, out_dir=out,
                        seed=args.seed, options=options)
    except ValueError as exc:
        raise UsageError(str(exc))


# ---------------------------------------------------------------- commands

def _emit_stats(stats, args, extra_manifest=None):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        stats.write_csv(out / "stats.csv")
        stats.write_histogram_csv(out / "histogram.csv")
        if extra_manifest is not None:
            with open(out / "manifest.json", "w") as fh:
                json.dump(extra_manifest, fh, indent=2, sort_keys=True, default=str)
                fh.write("\n")
        print(f"final <rho - rho_L> = {float(stats.mean_shift[-1])!r} "
              f"+- {float(stats.sem[-1])!r}", file=sys.stderr)
    else:
        stats.write_csv(sys.stdout)


def cmd_convert(args):
    params, rho_L, lab = resolve_params(args)
    rows = [("K", params.K), ("b", params.b), ("A", params.A),
            ("hbar_eff", params.hbar), ("rho_L", rho_L)]
    if lab is not None:
        rows += [("k_L", lab.k_L), ("recoil_mismatch", lab.recoil_mismatch())]
    print("quantity,value")
    for k, v in rows:
        print(f"{k},{float(v)!r}")


def cmd_analytic(args):
    params, rho_L, _ = resolve_params(args)
    if args.t_max < 1:
        raise ParameterError("t_max >= 1 violated")
    pred = analytic.predict(params, rho_L, args.sigma_p)
    t = np.arange(1, args.t_max + 1)
    F = analytic.time_factor(params, t)
    I = analytic.current(params, rho_L, t, args.sigma_p)
    print(f"# I0={pred.max_current!r}")
    print(f"# t_R={pred.ratchet_time!r}")
    print(f"# t_star={pred.localization_time!r}")
    print(f"# D={pred.uncorrelated_diffusion!r}")
    print("t,F,I")
    for a, f, i in zip(t, F, I):
        print(f"{int(a)},{float(f)!r},{float(i)!r}")


def cmd_classical(args):
    params, rho_L, _ = resolve_params(args)
    if args.n_trajectories < 1 or args.n_kicks < 1 or args.workers < 1:
        raise ParameterError("n_trajectories, n_kicks and workers must be >= 1")
    ens = sample_initial(args.n_trajectories, rho_L, args.sigma_p, params,
                         seed=args.seed, parity=args.parity)
    st = evolve_ensemble(ens, args.n_kicks, workers=args.workers)
    _emit_stats(st, args)


def cmd_quantum(args):
    params, rho_L, _ = resolve_params(args)
    spec = QuantumRunSpec(params, rho_L=rho_L, sigma_p=args.sigma_p,
                          n_samples=args.n_samples, n_kicks=args.n_kicks,
                          m_max=args.m_max, n_phi=args.n_phi, seed=args.seed,
                          parity=args.parity, chunk=args.chunk, workers=args.workers)
    try:
        spec.validate()
    except ValueError as exc:
        raise ParameterError(str(exc))
    res = run_quantum(spec)
    _emit_stats(res.stats, args, res.manifest)


def cmd_experiment(args):
    sc = _scenario_from_args(args)
    res = run_scenario(sc)
    print(str(res.manifest_path))
    if sc.id == "custom" and res.summary.get("n_failed"):
        log.warning("%d of %d sweep points failed; see manifest",
                    res.summary["n_failed"], res.summary["n_points"])
        return 2
    return 0


COMMANDS = {"convert": cmd_convert, "analytic": cmd_analytic,
            "classical": cmd_classical, "quantum": cmd_quantum,
            "experiment": cmd_experiment}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        return _fail("usage", exc, 1)
    logging.basicConfig(level=max(logging.WARNING - 10 * args.verbose, logging.DEBUG),
                        format="%(levelname)s %(name)s: %(message)s")
    warnings.showwarning = lambda msg, *a, **k: log.warning("%s", msg)
    if args.dump_config:
        print(json.dumps(to_config(args), indent=2, sort_keys=True,
                         default=lambda o: list(o) if isinstance(o, tuple) else str(o)))
        return 0
    try:
        return COMMANDS[args.command](args) or 0
    except (UsageError, ParameterError) as exc:
        return _fail("validation", exc, 1)
    except KeyboardInterrupt:
        return _fail("runtime", "interrupted", 2)
    except Exception as exc:  # anything else is a runtime failure
        if args.verbose:
            log.exception("runtime failure")
        return _fail("runtime", f"{type(exc).__name__}: {exc}", 2)


if __name__ == "__main__":
    sys.exit(main())
