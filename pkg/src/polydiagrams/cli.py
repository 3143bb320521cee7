"""Command-line interface: ``python -m polydiagrams <command> ...``.

Exit codes: 0 success, 1 verification or contract failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import analysis, checks
from .counts import CountCache, Engine, count, is_unstable
from .exact import format_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _profile(text: str) -> List[int]:
    try:
        mu = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad profile {text!r}") from exc
    if any(m < 0 for m in mu):
        raise argparse.ArgumentTypeError("profile entries must be non-negative")
    return mu


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 on its own; keep the message terse
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polydiagrams", description="Exact counts of polygon and arc diagrams on surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def surface(sp, families):
        sp.add_argument("--family", type=str.lower, choices=families, required=True)
        sp.add_argument("-g", type=_nonneg, required=True, help="genus")
        sp.add_argument("-n", type=_positive, required=True, help="number of boundary components")

    def io_flags(sp, formats, default):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--cache", type=Path, help="count cache file to load and update")

    c = sub.add_parser("count", help="compute one count")
    surface(c, ["p", "q", "n"])
    c.add_argument("--profile", type=_profile, required=True)
    c.add_argument("--route", choices=["closed", "recursive", "transform"], default="recursive")
    io_flags(c, ["text", "json", "csv"], "text")

    t = sub.add_parser("table", help="all counts with every entry <= --max")
    surface(t, ["p", "q", "n"])
    t.add_argument("--max", type=_nonneg, required=True)
    t.add_argument("--route", choices=["closed", "recursive", "transform"], default="recursive")
    io_flags(t, ["text", "json", "csv"], "csv")

    f = sub.add_parser("fit", help="fit a parity quasi-polynomial to Q or N")
    surface(f, ["q", "n"])
    f.add_argument("--structure", action="store_true", help="also extract the structure polynomial")
    f.add_argument("--max", type=_positive, default=8, help="validation range for --structure")
    io_flags(f, ["text", "json"], "json")

    i = sub.add_parser("intersect", help="intersection numbers from fitted top coefficients")
    i.add_argument("--family", type=str.lower, choices=["q", "n"], default="q")
    i.add_argument("-g", type=_nonneg, required=True)
    i.add_argument("-n", type=_positive, required=True)
    io_flags(i, ["text", "json", "csv"], "text")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=checks.SUITE_NAMES, default="all")
    v.add_argument("--order", type=_positive, default=checks.PULLBACK_ORDER, help="pullback truncation K")
    v.add_argument("--format", choices=["text", "json"], default="text")
    return p


def _engine(cache_path: Optional[Path]) -> Engine:
    cache = CountCache()
    if cache_path is not None and cache_path.exists():
        cache.load(cache_path)
    return Engine(cache)


def _save(engine: Engine, cache_path: Optional[Path]) -> None:
    if cache_path is not None:
        engine.cache.save(cache_path)


def _count(args, engine: Engine, mu: Sequence[int]) -> str:
    if args.family == "n" and is_unstable(args.g, args.n):
        raise UsageError(f"N is not defined for (g,n) = ({args.g},{args.n})")
    if args.route == "transform" and is_unstable(args.g, args.n):
        raise UsageError(f"the transform route needs a stable surface, got ({args.g},{args.n})")
    try:
        return format_rational(count(args.family, args.g, args.n, mu, args.route, engine))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_count(args, out) -> int:
    if len(args.profile) != args.n:
        raise UsageError(f"profile has {len(args.profile)} entries, expected n = {args.n}")
    engine = _engine(args.cache)
    value = _count(args, engine, args.profile)
    _save(engine, args.cache)
    if args.format == "json":
        out.write(json.dumps({"family": args.family.upper(), "g": args.g, "n": args.n,
                              "mu": args.profile, "value": value}) + "\n")
    elif args.format == "csv":
        _write_csv(out, args.n, [(tuple(args.profile), value)])
    else:
        out.write(value + "\n")
    return EXIT_OK


def _write_csv(out, n: int, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"mu{i + 1}" for i in range(n)] + ["value"])
    for mu, value in rows:
        w.writerow(list(mu) + [value])
    out.write(buf.getvalue())


def cmd_table(args, out) -> int:
    engine = _engine(args.cache)
    rows = [(mu, _count(args, engine, mu)) for mu in itertools.product(range(args.max + 1), repeat=args.n)]
    _save(engine, args.cache)
    if args.format == "json":
        out.write(json.dumps([{"mu": list(mu), "value": v} for mu, v in rows]) + "\n")
    elif args.format == "csv":
        _write_csv(out, args.n, rows)
    else:
        for mu, v in rows:
            out.write(f"{','.join(map(str, mu))} {v}\n")
    return EXIT_OK


def _stable(args) -> None:
    if is_unstable(args.g, args.n):
        raise UsageError(f"({args.g},{args.n}) is outside the stable range")


def cmd_fit(args, out) -> int:
    _stable(args)
    engine = _engine(args.cache)
    report = analysis.fit_quasipoly(args.family.upper(), args.g, args.n, engine, strict=False)
    structure = None
    status = EXIT_OK if report.passed else EXIT_FAIL
    if args.structure:
        try:
            structure = analysis.structure_polynomial(args.g, args.n, args.max, engine)
        except analysis.StructureError as exc:
            report.failures.append(str(exc))
            status = EXIT_FAIL
    _save(engine, args.cache)
    if args.format == "json":
        data = report.to_json()
        if args.structure:
            data["structure"] = structure.to_json() if structure is not None else None
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(f"{report.family}_{{{report.g},{report.n}}} degree bound {analysis.fit_degree(args.g, args.n)}\n")
        for sig in sorted(report.quasipoly.pieces):
            out.write(f"  {','.join(sig)}: {report.quasipoly[sig].to_text()}\n")
        if structure is not None:
            out.write(f"  F: {structure.to_text()}\n")
        for msg in report.failures:
            out.write(f"  FAIL {msg}\n")
        out.write("pass\n" if status == EXIT_OK else "fail\n")
    return status


def cmd_intersect(args, out) -> int:
    _stable(args)
    engine = _engine(args.cache)
    try:
        table = analysis.intersection_numbers(args.g, args.n, args.family.upper(), engine)
    except analysis.FitError as exc:
        sys.stderr.write(f"fit failed: {exc}\n")
        return EXIT_FAIL
    _save(engine, args.cache)
    if args.format == "json":
        out.write(json.dumps(table.to_json()) + "\n")
    elif args.format == "csv":
        _write_csv(out, args.n, [(d, format_rational(v)) for d, v in sorted(table.values.items())])
    else:
        for d, v in sorted(table.values.items()):
            out.write(f"({args.g},{args.n}) d={list(d)}: {format_rational(v)}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = checks.run_suite(args.suite, args.order)
    ok = all(r.passed for r in results)
    if args.format == "json":
        out.write(json.dumps([{"check": r.name, "pass": r.passed, "details": r.details} for r in results],
                             indent=2) + "\n")
    else:
        for r in results:
            out.write(r.line() + "\n")
        out.write(f"{sum(r.passed for r in results)}/{len(results)} checks passed\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"count": cmd_count, "table": cmd_table, "fit": cmd_fit,
            "intersect": cmd_intersect, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"polydiagrams: {exc}\n")
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"polydiagrams: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    except ValueError as exc:  # malformed cache files and the like
        sys.stderr.write(f"polydiagrams: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
