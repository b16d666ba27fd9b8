"""``spectrum-fls`` command line: evaluate, select, surface, traffic, validate."""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources
from pathlib import Path

from . import config as cfg
from .fls import ZeroFiringError, infer
from .simulation import (
    DEFAULT_SURFACE_STEP, TrafficConfig, decision_surface, generate_scenario,
    sweep_arrival_rates, sweep_records, sweep_to_csv,
)
from .spectrum import decision_to_csv, fmt, load_scenario, select_user

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def finite_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def positive_float(text):
    value = finite_float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return value


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def bundled_example():
    return resources.files(__package__).joinpath("data", "table3.scenario")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise RuntimeError(f"cannot write {out}: {exc.strerror or exc}") from None


def _dump_json(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_evaluate(args, rb):
    y = infer(rb, (args.utilization, args.mobility, args.distance))
    if args.format == "json":
        _emit(_dump_json({"utilization": args.utilization, "mobility": args.mobility,
                          "distance": args.distance, "possibility": y}), None)
    else:
        print(fmt(y))


def cmd_select(args, rb):
    path = args.scenario if args.scenario is not None else bundled_example()
    try:
        scenario = load_scenario(path)
    except FileNotFoundError:
        raise UsageError(f"scenario file not found: {path}") from None
    except cfg.ConfigError as exc:
        raise UsageError(str(exc)) from None
    decision = select_user(scenario, rb)
    if args.format == "json":
        text = _dump_json({"per_user": decision.to_rows(), "chosen": decision.chosen})
    else:
        text = decision_to_csv(decision) + f"# chosen: {decision.chosen}\n"
    _emit(text, args.out)


def cmd_surface(args, rb):
    lo, hi = rb.inputs[2].universe
    if not lo <= args.x3 <= hi:
        raise UsageError(f"--x3 must lie in [{lo:g}, {hi:g}]")
    step = tuple(args.step) if len(args.step) == 2 else (args.step[0], args.step[0])
    grid = decision_surface(rb, args.x3, step)
    text = _dump_json(grid.to_records()) if args.format == "json" else grid.to_csv()
    _emit(text, args.out)


def cmd_traffic(args, rb):
    seed = 0 if args.seed is None else args.seed
    if args.scenario is not None:
        try:
            scenario = load_scenario(args.scenario)
        except (FileNotFoundError, cfg.ConfigError) as exc:
            raise UsageError(str(exc)) from None
    else:
        scenario = generate_scenario(seed, args.users, args.area)
    try:
        base = TrafficConfig(
            arrival_rate=args.lambdas[0], holding_time=args.holding, channels=args.channels,
            threshold=args.theta, interference_radius=args.radius, duration=args.duration,
            seed=seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    series = sweep_arrival_rates(scenario, rb, base, args.lambdas, n_jobs=args.jobs)
    text = _dump_json(sweep_records(series)) if args.format == "json" else sweep_to_csv(series)
    _emit(text, args.out)


def cmd_validate(args, rb_path):
    path = args.path or rb_path
    if path is None:
        doc = json.loads(
            resources.files(__package__).joinpath("data", cfg.DEFAULT_RULEBASE).read_text("utf-8")
        )
        where = "bundled rule base"
    else:
        try:
            doc = cfg._read_json(path)
        except FileNotFoundError:
            raise UsageError(f"rule base not found: {path}") from None
        except cfg.ConfigError as exc:
            raise UsageError(str(exc)) from None
        where = str(path)
    rb, problems = cfg.validate_document(doc)
    if args.format == "json":
        _emit(_dump_json({"source": where, "ok": not problems,
                          "rules": None if rb is None else len(rb.rules),
                          "problems": problems}), None)
    elif problems:
        for p in problems:
            print(f"{where}: {p}")
    else:
        print(f"{len(rb.rules)} rules, complete")
    return EXIT_RUNTIME if problems else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="spectrum-fls",
        description="Fuzzy opportunistic spectrum access: scoring, selection and simulation.",
    )
    p.add_argument("--rulebase", type=Path, default=None,
                   help="JSON rule base (default: bundled 27-rule base)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("evaluate", help="possibility for one input triple")
    e.add_argument("-u", "--utilization", type=finite_float, required=True)
    e.add_argument("-m", "--mobility", type=finite_float, required=True)
    e.add_argument("-d", "--distance", type=finite_float, required=True,
                   help="normalised distance to the primary, 0-10")

    s = sub.add_parser("select", help="score a scenario file and pick a user")
    s.add_argument("scenario", nargs="?", type=Path,
                   help="scenario JSON (default: bundled four-user example)")
    s.add_argument("-o", "--out", type=Path)

    g = sub.add_parser("surface", help="decision surface at a fixed distance")
    g.add_argument("--x3", type=finite_float, required=True)
    g.add_argument("--step", type=positive_float, nargs="+", default=list(DEFAULT_SURFACE_STEP),
                   metavar="STEP", help="grid spacing: one value, or x1 and x2 spacings")
    g.add_argument("-o", "--out", type=Path)

    t = sub.add_parser("traffic", help="arrival-rate sweep of the loss-system model")
    t.add_argument("--lambdas", type=positive_float, nargs="+", required=True)
    t.add_argument("--channels", type=positive_int, default=5)
    t.add_argument("--theta", type=finite_float, default=0.0)
    t.add_argument("--holding", type=positive_float, default=1.0, help="mean holding time")
    t.add_argument("--duration", type=positive_float, default=1000.0)
    t.add_argument("--radius", type=finite_float, default=20.0, help="interference radius (m)")
    t.add_argument("--users", type=positive_int, default=20)
    t.add_argument("--area", type=positive_float, default=100.0)
    t.add_argument("--scenario", type=Path, help="use this scenario instead of a generated one")
    t.add_argument("--jobs", type=positive_int, default=1)
    t.add_argument("-o", "--out", type=Path)

    v = sub.add_parser("validate", help="check a rule base document")
    v.add_argument("path", nargs="?", type=Path)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "surface" and len(args.step) > 2:
        parser.error("--step takes one or two values")
    try:
        if args.command == "validate":
            return cmd_validate(args, args.rulebase)
        try:
            rb = cfg.load_rulebase(args.rulebase)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot load rule base: {exc}") from None
        handler = {"evaluate": cmd_evaluate, "select": cmd_select,
                   "surface": cmd_surface, "traffic": cmd_traffic}[args.command]
        handler(args, rb)
        return EXIT_OK
    except UsageError as exc:
        print(f"spectrum-fls {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, ZeroFiringError, ValueError) as exc:
        print(f"spectrum-fls {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
