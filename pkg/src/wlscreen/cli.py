"""Command-line entry point: ``wlscreen {screen,simulate,bench}``.

Any long option may also be given in a plain-text config file passed with
``--config``::

    [wlscreen]
    c-n1 = 0.001
    d-mode = fixed:3

Command-line flags override the file. ``WLSCREEN_SEED`` sets the default
seed for ``simulate`` and ``bench``.

Exit status: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

from . import __version__
from .baselines import BASELINES
from .bench import render_report, run_scenario
from .core import DEFAULT_C_N1, DEFAULT_C_N2, ScreenConfig, parse_d_mode, screen
from .errors import InvalidInput, UsageError, WLSError
from .io import REPORT_SCHEMA, read_csv, render_result, write_csv
from .simgen import (
    AR1_TRUE_SET,
    DEFAULT_SEED,
    MODELS,
    SPIKED_TRUE_SET,
    ScenarioConfig,
    generate,
    get_scenario,
)

SEED_ENV = "WLSCREEN_SEED"


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _add_tuning(p):
    g = p.add_argument_group("WLS tuning")
    g.add_argument("--h", type=int, default=None, help="slice count (default: 10, or n/10 when n < 100)")
    g.add_argument("--c-n1", type=float, default=DEFAULT_C_N1, help="spike-count penalty constant")
    g.add_argument("--c-n2", type=float, default=DEFAULT_C_N2, help="model-size penalty constant")


def _add_scenario(p):
    g = p.add_argument_group("scenario")
    g.add_argument("--scenario", help="catalog id such as 1.6; omit to specify inline")
    g.add_argument("--setting", choices=["spiked", "ar1"])
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=int)
    g.add_argument("--sigma", type=float)
    g.add_argument("--rho", type=float)
    g.add_argument("--model", choices=MODELS)
    g.add_argument("--spike-profile", choices=["example1", "example2", "example3"])
    g.add_argument("--v-mode", choices=["haar", "identity"])
    g.add_argument("--true-set", help="comma-separated 1-based predictor indices")
    g.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wlscreen", description="Weighted leverage score screening")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("screen", help="screen predictors in a CSV file")
    s.add_argument("--config", help="config file with default option values")
    s.add_argument("--input", "-i", help="CSV file, samples as rows, with a header")
    s.add_argument("--response", "-r", help="response column name or 0-based index")
    _add_tuning(s)
    s.add_argument("--d-mode", default="auto", help="auto, full or fixed:K")
    s.add_argument("--top-k", type=int, default=None, help="keep exactly K predictors")
    s.add_argument("--format", choices=["table", "csv", "json"], default="table")
    s.add_argument("--output", "-o")

    m = sub.add_parser("simulate", help="write one synthetic dataset as CSV")
    m.add_argument("--config", help="config file with default option values")
    _add_scenario(m)
    m.add_argument("--replicate", type=int, default=0)
    m.add_argument("--output", "-o")

    b = sub.add_parser("bench", help="run replicates and report FP/FN/M/time")
    b.add_argument("--config", help="config file with default option values")
    _add_scenario(b)
    _add_tuning(b)
    b.add_argument("--methods", default="wls,sirs,dcsis", help="comma list of wls, sis, sirs, dcsis")
    b.add_argument("--replicates", type=int, default=None)
    b.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    b.add_argument("--format", choices=["table", "csv", "json"], default="table")
    b.add_argument("--output", "-o")
    return parser


def _apply_config_file(parser, argv):
    """Re-parse with defaults taken from ``--config`` when one is given."""
    args = parser.parse_args(argv)
    path = getattr(args, "config", None)
    if not path:
        return args
    cp = configparser.ConfigParser()
    if not cp.read(path, encoding="utf-8"):
        raise UsageError(f"cannot read config file {path}")
    section = cp["wlscreen"] if cp.has_section("wlscreen") else cp.defaults()
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in section.items():
        dest = key.replace("-", "_")
        if dest not in actions or dest in ("help", "config"):
            raise UsageError(f"unknown option {key!r} in {path}")
        conv = actions[dest].type or str
        try:
            defaults[dest] = conv(raw)
        except ValueError:
            raise UsageError(f"bad value {raw!r} for {key!r} in {path}") from None
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _scenario_from_args(args) -> ScenarioConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    inline = {
        "setting": args.setting, "n": args.n, "p": args.p, "sigma": args.sigma,
        "rho": args.rho, "model": args.model, "spike_profile": args.spike_profile,
        "v_mode": args.v_mode,
    }
    given = {k: v for k, v in inline.items() if v is not None}
    if args.true_set:
        try:
            given["true_set"] = tuple(int(t) - 1 for t in args.true_set.split(","))
        except ValueError:
            raise UsageError(f"bad --true-set {args.true_set!r}") from None
    if args.scenario:
        return get_scenario(args.scenario).with_(seed=seed, **given)
    missing = [k for k in ("setting", "n", "p", "sigma", "model") if k not in given]
    if missing:
        raise UsageError("need --scenario or inline " + ", ".join(f"--{k}" for k in missing))
    if "true_set" not in given:
        given["true_set"] = SPIKED_TRUE_SET if given["setting"] == "spiked" else AR1_TRUE_SET
    try:
        return ScenarioConfig(id="custom", seed=seed, **given)
    except (TypeError, InvalidInput) as exc:
        raise UsageError(str(exc)) from None


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_screen(args) -> int:
    if not args.input or args.response is None:
        raise UsageError("screen needs --input and --response")
    try:
        mode, fixed = parse_d_mode(args.d_mode)
    except InvalidInput as exc:
        raise UsageError(str(exc)) from None
    config = ScreenConfig(
        h=args.h, c_n1=args.c_n1, c_n2=args.c_n2, d_mode=mode, d_fixed=fixed, top_k=args.top_k
    )
    X, y, names = read_csv(args.input, args.response)
    result = screen(X, y, config)
    _emit(render_result(result, names, config, args.format), args.output)
    return 0


def cmd_simulate(args) -> int:
    config = _scenario_from_args(args)
    X, y = generate(config, args.replicate)
    if args.output:
        write_csv(args.output, X, y)
    else:
        write_csv(sys.stdout, X, y)
    return 0


def cmd_bench(args) -> int:
    config = _scenario_from_args(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m != "wls" and m not in BASELINES]
    if bad or not methods:
        raise UsageError(f"unknown methods {bad}; choose from wls, {', '.join(BASELINES)}")
    tuning = ScreenConfig(h=args.h, c_n1=args.c_n1, c_n2=args.c_n2)
    report = run_scenario(
        config, methods, replicates=args.replicates, threads=max(1, args.threads),
        screen_config=tuning,
    )
    if args.format == "json":
        payload = {
            "schema": REPORT_SCHEMA,
            "scenario": config.to_dict(),
            "methods": {
                m: {"replicates": s.replicates, "failures": s.failures, "mean": s.mean, "sd": s.sd}
                for m, s in report.methods.items()
            },
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = render_report(report, args.format)
    _emit(text, args.output)
    return 0


COMMANDS = {"screen": cmd_screen, "simulate": cmd_simulate, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config_file(parser, argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except WLSError as exc:
        print(f"wlscreen: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"wlscreen: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
