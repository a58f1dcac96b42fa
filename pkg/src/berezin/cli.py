"""Command-line front end.

    berezin run        seeded inequality campaigns + reproduction table
    berezin reproduce  reproduction table only
    berezin converge   convergence study as CSV
    berezin field      symbol field of a named operator as CSV

Exit codes: 0 clean, 1 a check or target failed, 2 bad configuration,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from . import campaign
from . import operators as op
from .calculus import field_csv, parse_grid, symbol_field
from .errors import ConfigurationError, UsageError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_IO = 3

FIELD_OPERATORS = ("example36", "shift", "identity", "projection0", "random")

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(p):
    d = campaign.RunConfig()
    p.add_argument("--config", metavar="PATH", help="flat key = value config file; flags override it")
    p.add_argument("--space", choices=("hardy", "bergman"), help=f"kernel model (default {d.space})")
    p.add_argument("--dim", type=int, help=f"model dimension N (default {d.dim})")
    p.add_argument("--grid", metavar="RxM", help=f"radial x angular nodes (default {d.radial}x{d.angular})")
    p.add_argument("--rmax", type=float, help=f"largest sampled radius, in (0, 1) (default {d.rmax})")
    p.add_argument("--rounds", type=int, help=f"refinement rounds (default {d.rounds})")
    p.add_argument("--seed", type=int, help=f"64-bit run seed (default {d.seed})")


def build_parser():
    d = campaign.RunConfig()
    parser = _Parser(prog="berezin", description="Berezin number / norm toolkit and inequality harness.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run inequality campaigns")
    _add_common(run)
    run.add_argument("--suite", metavar="LIST", help="comma-separated check ids or 'all' (default all)")
    run.add_argument("--trials", type=int, help=f"trials per check (default {d.trials})")
    run.add_argument("--tol", type=float, help=f"inequality tolerance (default {d.tol:g})")
    run.add_argument("--jobs", type=int, help=f"concurrent trials (default {d.jobs})")
    run.add_argument("--out", metavar="DIR", help=f"output directory (default {d.out})")

    rep = sub.add_parser("reproduce", help="closed-form reproduction table")
    _add_common(rep)
    rep.add_argument("--out", metavar="PATH", help="also write the table as JSON")

    conv = sub.add_parser("converge", help="convergence study (CSV)")
    _add_common(conv)
    conv.add_argument("--dims", default="16,32,64,128", help="comma-separated model dimensions")
    conv.add_argument("--grids", default="16x32,32x64,64x128", help="comma-separated RxM grids")
    conv.add_argument("--out", metavar="CSV", help="output file (default stdout)")

    fld = sub.add_parser("field", help="export the symbol field of an operator (CSV)")
    _add_common(fld)
    fld.add_argument("--op", required=True, choices=FIELD_OPERATORS, help="operator name")
    fld.add_argument("--out", metavar="CSV", help="output file (default stdout)")
    return parser


def _config(args, *extra) -> campaign.RunConfig:
    keys = ("space", "dim", "grid", "rmax", "rounds", "seed") + extra
    overrides = {k: getattr(args, k) for k in keys}
    return campaign.parse_config(args.config, overrides)


def _named_operator(name: str, cfg: campaign.RunConfig) -> op.OperatorMatrix:
    space = cfg.space_spec()
    if name == "example36":
        return op.example36_operator(space)
    if name == "shift":
        return op.shift(space)
    if name == "identity":
        return op.identity(space)
    if name == "projection0":
        d = [0.0] * space.dim
        d[0] = 1.0
        return op.diagonal(space, d)
    return op.random_operator(space, campaign.trial_rng(cfg.seed, "field", 0), 1.0)


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = _config(args, "suite", "trials", "tol", "jobs", "out")
    summary = campaign.run_suite(cfg, log=print)
    for row in summary.reproduction:
        mark = "PASS" if row["pass"] else "FAIL"
        print(f"[{mark}] {row['target']}: computed {row['computed']:.10g}, expected {row['expected']:.10g}")
    for cid, stats in summary.checks.items():
        if stats.vacuous_fraction > campaign.MAX_VACUOUS_FRACTION:
            print(f"[FAIL] {cid}: {stats.vacuous}/{stats.trials} trials vacuous", file=sys.stderr)
    print(f"summary written to {cfg.out}/summary.json")
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_reproduce(args) -> int:
    cfg = _config(args)
    rows = campaign.reproduce_reference_values(cfg)
    for row in rows:
        mark = "PASS" if row["pass"] else "FAIL"
        print(f"[{mark}] {row['target']}: computed {row['computed']:.10g}, "
              f"expected {row['expected']:.10g} (tol {row['tolerance']:g})")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAIL


def cmd_converge(args) -> int:
    cfg = _config(args)
    try:
        dims = [int(x) for x in args.dims.split(",") if x.strip()]
    except ValueError:
        raise ConfigurationError(f"dims: cannot parse {args.dims!r}") from None
    grids = [g.strip() for g in args.grids.split(",") if g.strip()]
    for g in grids:
        parse_grid(g)
    rows = campaign.convergence_study(cfg, dims, grids)
    fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=campaign.STUDY_HEADER, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_field(args) -> int:
    cfg = _config(args)
    try:
        a = _named_operator(args.op, cfg)
    except UsageError as exc:
        raise ConfigurationError(str(exc)) from None
    _emit(field_csv(symbol_field(a, cfg.grid())), args.out)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "reproduce": cmd_reproduce, "converge": cmd_converge, "field": cmd_field}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"berezin: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"berezin: I/O error on {exc.filename or '?'}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
