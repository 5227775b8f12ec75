"""Command-line front end: ``genround {scan,witness,verify,nt-sup,quad-check}``.

Exit codes: 0 success (or violation found), 1 inequality holds, 2 I/O error,
3 numerical/convergence failure, 64 usage error, 65 bad input data.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .construction import QuadratureRule, closed_form_report, mu_mu_energy, mu_nu_energy, quad_mu_mu, quad_mu_nu, quad_nu_nu
from .discretizer import DEFAULT_MARGIN, DEFAULT_N_MAX, witness_for_exponent
from .exceptions import ConvergenceFailure, GenRoundError, InvalidInputError, NumericFailure
from .metric_core import DistanceMatrix
from .negative_type import DEFAULT_GAP_TOL, DEFAULT_P_CAP
from .roundness import gr_supremum, verify_witness, witness_from_dict, witness_to_dict

EXIT_OK = 0
EXIT_HOLDS = 1
EXIT_IO = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64
EXIT_DATA = 65

SCAN_SCHEMA = "# genround-scan schema=1"
QUAD_SCHEMA = "# genround-quad-check schema=1"
SCAN_RTOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _float_list(text: str) -> list:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    return values


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _threads(args) -> int:
    if args.deterministic:
        return 1
    try:
        return max(1, int(os.environ.get("ROUNDNESS_THREADS", "1")))
    except ValueError:
        return 1


def _grid(args):
    if not args.L or not args.p:
        raise UsageError("--L and --p must both be nonempty lists")
    if any(not p > 0 for p in args.p):
        raise UsageError("every p must be > 0")
    if any(not L >= 2 for L in args.L):
        raise UsageError("every L must be >= 2")
    return sorted((L, p) for L in set(args.L) for p in set(args.p))


def _map_cells(fn, cells, threads):
    if threads == 1:
        return [fn(*c) for c in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: fn(*c), cells))


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header_comment, columns, rows) -> str:
    buf = io.StringIO()
    buf.write(header_comment + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def cmd_scan(args) -> int:
    cells = _grid(args)
    reports = _map_cells(closed_form_report, cells, _threads(args))
    columns = reports[0].COLUMNS
    _write_text(args.out, _csv_text(SCAN_SCHEMA, columns, [r.row() for r in reports]))
    worst = max(r.max_rel_err for r in reports)
    if worst > SCAN_RTOL:
        print(f"closed forms and quadrature disagree (max rel err {worst:.3g})", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _quad_cell(L, p):
    mm, mn = mu_mu_energy(L, p), mu_nu_energy(L, p)
    qmm, qnn, qmn = quad_mu_mu(L, p), quad_nu_nu(L, p), quad_mu_nu(L, p)
    err = max(abs(qmm - mm) / mm, abs(qnn - mm) / mm, abs(qmn - mn) / mn)
    return [L, p, mm, qmm, qnn, mn, qmn, err]


def cmd_quad_check(args) -> int:
    cells = _grid(args)
    rows = _map_cells(_quad_cell, cells, _threads(args))
    columns = ["L", "p", "mu_mu", "quad_mu_mu", "quad_nu_nu", "mu_nu", "quad_mu_nu", "max_rel_err"]
    _write_text(args.out, _csv_text(QUAD_SCHEMA, columns, rows))
    tol = args.tol if args.tol is not None else SCAN_RTOL
    return EXIT_OK if max(r[-1] for r in rows) <= tol else EXIT_NUMERIC


def cmd_witness(args) -> int:
    try:
        w, report = witness_for_exponent(args.p, margin=args.margin, n_max=args.n_max)
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("n,gap", file=sys.stderr)
        for n, gap in exc.trace:
            print(f"{n},{_fmt(gap)}", file=sys.stderr)
        return EXIT_NUMERIC
    text = json.dumps(witness_to_dict(w, report))
    _write_text(args.out, text + "\n")
    print(f"points={len(w)} lhs={_fmt(report.lhs)} rhs={_fmt(report.rhs)} gap={_fmt(report.gap)}", file=sys.stderr)
    return EXIT_OK if report.violated else EXIT_HOLDS


def _load_json(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed JSON in {path}: {exc}") from exc


def cmd_verify(args) -> int:
    w, p_file = witness_from_dict(_load_json(args.witness))
    p = args.p if args.p is not None else p_file
    report = verify_witness(w, None, p, tol=args.tol or 0.0)
    print(f"p = {_fmt(report.p)}")
    print(f"lhs = {_fmt(report.lhs)}")
    print(f"rhs = {_fmt(report.rhs)}")
    print(f"gap = {_fmt(report.gap)}")
    print("violated" if report.violated else "holds")
    return EXIT_OK if report.violated else EXIT_HOLDS


def cmd_nt_sup(args) -> int:
    data = _load_json(args.matrix)
    if isinstance(data, dict):
        data = data.get("d", data.get("matrix"))
    D = DistanceMatrix.from_list(data)
    tol = args.tol if args.tol is not None else 1e-3
    result = gr_supremum(D, tol, gap_tol=args.gap_tol, p_cap=args.p_cap)
    if result.capped:
        print(f"capped at {_fmt(result.p_cap)}")
    else:
        digits = max(0, -int(f"{tol:e}".split("e")[1]))
        print(f"{result.p_sup:.{digits}f}")
        if result.certificate_above is not None:
            print(json.dumps(result.certificate_above.to_dict()), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genround", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_flags(sp):
        sp.add_argument("--L", type=_float_list, required=True, help="comma-separated half-lengths")
        sp.add_argument("--p", type=_float_list, required=True, help="comma-separated exponents")
        sp.add_argument("--out", default=None, help="output CSV path (default stdout)")
        sp.add_argument("--deterministic", action="store_true", help="evaluate cells serially")

    sp = sub.add_parser("scan", help="tabulate closed forms with a quadrature cross-check")
    grid_flags(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("quad-check", help="compare all three energies against quadrature")
    grid_flags(sp)
    sp.add_argument("--tol", type=_positive_float, default=None, help="relative tolerance (default 1e-6)")
    sp.set_defaults(func=cmd_quad_check)

    sp = sub.add_parser("witness", help="build a finite violating configuration for exponent p")
    sp.add_argument("--p", type=_positive_float, required=True)
    sp.add_argument("--n-max", type=int, default=DEFAULT_N_MAX, help="largest nodes-per-segment count")
    sp.add_argument("--margin", type=_positive_float, default=DEFAULT_MARGIN)
    sp.add_argument("--out", default=None, help="witness JSON path (default stdout)")
    sp.add_argument("--deterministic", action="store_true")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("verify", help="recompute a witness; exit 0 iff it violates the inequality")
    sp.add_argument("witness")
    sp.add_argument("--p", type=float, default=None, help="override the exponent stored in the file")
    sp.add_argument("--tol", type=float, default=0.0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("nt-sup", help="supremal negative type of a distance matrix")
    sp.add_argument("matrix", help="JSON array of rows")
    sp.add_argument("--tol", type=_positive_float, default=None, help="bracket width in p (default 1e-3)")
    sp.add_argument("--gap-tol", type=_positive_float, default=DEFAULT_GAP_TOL)
    sp.add_argument("--p-cap", type=float, default=DEFAULT_P_CAP)
    sp.set_defaults(func=cmd_nt_sup)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"genround: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"genround: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidInputError as exc:
        print(f"genround: invalid data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericFailure as exc:
        print(f"genround: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GenRoundError as exc:
        print(f"genround: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
