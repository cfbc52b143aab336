"""Command-line runner for the named experiments.

Exit status: 0 when every check passes, 1 on an acceptance failure or a
numerical error during the run, 2 on a bad command line, config or
environment (nothing is written in that case).
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

from . import experiments
from .errors import CMCLabError, ConfigurationError
from .geometry import worker_count
from .io import csv_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def read_config(path, name):
    """Parameter overrides for experiment ``name`` from an INI-style file.

    Keys may sit in ``[params]`` or in a section named after the experiment.
    ``[output] dir = ...`` sets the output directory.
    """
    if not os.path.isfile(path):
        raise ConfigurationError(f"config file not found: {path}")
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}") from exc
    params, out_dir = {}, None
    for section in cp.sections():
        if section == "output":
            for k, v in cp.items(section):
                if k != "dir":
                    raise ConfigurationError(f"unknown key {k!r} in [output]")
                out_dir = v
        elif section in ("params", name):
            params.update(cp.items(section))
        else:
            raise ConfigurationError(f"unknown section [{section}] for experiment {name!r}")
    return params, out_dir


def parse_sets(items):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def build_parser():
    ap = argparse.ArgumentParser(prog="cmclab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="experiment", required=True, metavar="EXPERIMENT")
    for name, (runner, defaults) in experiments.REGISTRY.items():
        sp = sub.add_parser(name, help=(runner.__doc__ or name).splitlines()[0])
        sp.add_argument("--config", metavar="PATH", help="INI file with [params] / [%s] and [output]" % name)
        sp.add_argument("--out", metavar="DIR", help="artifact directory (default: cmclab-out/%s)" % name)
        sp.add_argument("--grid", metavar="L_MAX", type=int, help="override the grid degree where used")
        sp.add_argument("--csv", action="store_true", help="print the summary as CSV instead of text")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one parameter")
        sp.epilog = "parameters: " + ", ".join(f"{k}={v}" for k, v in defaults.items())
    return ap


def write_artifacts(result, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "summary.csv"), "w", newline="") as fh:
        fh.write(csv_text(experiments.SUMMARY_HEADER, result.summary_rows()))
    for table, (header, rows) in sorted(result.tables.items()):
        with open(os.path.join(out_dir, f"{table}.csv"), "w", newline="") as fh:
            fh.write(csv_text(header, rows))


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_CONFIG
    name = args.experiment
    try:
        worker_count()
        params, cfg_out = read_config(args.config, name) if args.config else ({}, None)
        params.update(parse_sets(args.set))
        if args.grid is not None and args.grid < 1:
            raise ConfigurationError("--grid must be a positive degree")
        _, defaults = experiments.REGISTRY[name]
        # validate everything before any work or output
        experiments.validate(name, experiments.coerce(defaults, params))
    except ConfigurationError as exc:
        print(f"cmclab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out or cfg_out or os.path.join("cmclab-out", name)
    try:
        result = experiments.run(name, params, l_max=args.grid)
    except ConfigurationError as exc:
        print(f"cmclab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CMCLabError as exc:
        print(f"cmclab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    write_artifacts(result, out_dir)
    if args.csv:
        sys.stdout.write(csv_text(experiments.SUMMARY_HEADER, result.summary_rows()))
    else:
        for check in result.checks:
            print(check.line())
        print(f"{name}: {'PASS' if result.passed else 'FAIL'} ({result.seconds:.2f} s) -> {out_dir}")
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
