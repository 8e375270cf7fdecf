"""Command-line front end: ``projlds generate|analyze|simulate|check-fixtures``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import fixtures
from .config import ConfigError, load_config
from .galois import FieldError, field_for_q
from .lds import LdsValidationError, MatrixFormatError, SigningError, build_lds, export_matrix, import_matrix
from .metrics import correlation_report
from .simlink import SearchSpaceTooLarge, ber_sweep

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4

CSV_COLUMNS = ["eb_n0_db", "trials", "bit_errors", "ber", "detector", "channel", "matrix_id", "seed"]


def cmd_generate(args) -> int:
    try:
        field_for_q(args.q)
        C = build_lds(args.q)
    except FieldError as exc:
        print(f"error: unsupported q={args.q}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SigningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    export_matrix(C, args.out, args.format)
    nnz = int((C.entries != 0).sum())
    print(f"q={C.q} L={C.L} K={C.K} nonzeros={nnz} ({nnz / C.entries.size:.3f} density, "
          f"{C.q + 1} per column) scale=1/sqrt({C.scale_sq_denom}) -> {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        C = import_matrix(args.matrix)
    except (MatrixFormatError, LdsValidationError, OSError) as exc:
        print(f"error: invalid matrix file {args.matrix}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    rep = correlation_report(C)
    print(rep.table())
    print(f"closed-form TSC differs from measured TSC by {rep.tsc_minus_formula} "
          f"({float(rep.tsc_minus_formula):.6f}); only TSC >= K^2/L is asserted")
    if args.report_out:
        Path(args.report_out).write_text(rep.to_json() + "\n")
    return EXIT_OK


def format_ber_csv(points, cfg, matrix_id: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow([repr(p.eb_n0_db), p.trials, p.bit_errors, repr(float(p.ber)),
                    cfg.detector, cfg.channel, matrix_id, cfg.seed])
    return buf.getvalue()


def format_gnuplot(points, cfg, matrix_id: str) -> str:
    lines = [f"# {matrix_id} {cfg.detector} {cfg.channel} seed={cfg.seed}", "# eb_n0_db ber"]
    lines += [f"{p.eb_n0_db!r} {float(p.ber)!r}" for p in points]
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.workers is not None:
            cfg.workers = args.workers
            cfg.validate()
        _, matrix_id = cfg.spreading()
        points = ber_sweep(cfg)
    except (ConfigError, MatrixFormatError, LdsValidationError, FieldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SearchSpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    out = Path(args.out)
    out.write_text(format_ber_csv(points, cfg, matrix_id))
    dat = out.with_name(f"{out.stem}.{matrix_id}_{cfg.detector}_{cfg.channel}.dat")
    dat.write_text(format_gnuplot(points, cfg, matrix_id))
    for p in points:
        print(f"{p.eb_n0_db:6.2f} dB  trials={p.trials:8d}  errors={p.bit_errors:7d}  ber={float(p.ber):.4e}")
    return EXIT_OK


def cmd_check_fixtures(args) -> int:
    if args.list:
        for name in fixtures.CHECKS:
            print(name)
        return EXIT_OK
    results = fixtures.run_checks(args.fixtures_dir)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name:20s} {r.detail}")
    failed = [r.name for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} fixture checks passed")
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="projlds", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write the LDS matrix for plane order q")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--format", choices=("json", "csv"), default=None,
                   help="default: from the file extension, else json")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="correlation / Welch / distance report")
    a.add_argument("--matrix", required=True)
    a.add_argument("--report-out")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="BER sweep from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=int, help="override the config's worker count")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("check-fixtures", help="regression gate against published values")
    c.add_argument("--list", action="store_true", help="list fixture checks without running them")
    c.add_argument("--fixtures-dir", type=Path)
    c.set_defaults(func=cmd_check_fixtures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
