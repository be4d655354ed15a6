"""Command line front end.

Exit codes: 0 when everything checked passes, 1 when a certificate carries
witnesses, 2 for usage or internal errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .certificate import Certificate
from .coefficients import CoefficientEngine, Method, TripleIndex, d_from_b, table_csv, table_json, table_rows
from .numerics import to_str
from .report import render_chern_expansion
from .sequences import SequenceCache
from .verify import IDENTITIES, IdentityBounds, certify_positivity, sign_report, verify_identities, write_certificate

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

SEQUENCES = {
    "bern": (("n",), lambda c, n: c.bernoulli(n)),
    "hbern": (("n", "i"), lambda c, n, i: c.higher_bernoulli(n, i)),
    "daehee": (("q", "k"), lambda c, q, k: c.daehee(q, k)),
    "stirling2": (("j", "p"), lambda c, j, p: c.stirling2(j, p)),
    "harmsum": (("k", "q"), lambda c, k, q: c.harmonic_product_sum(k, q)),
}


class UsageError(Exception):
    pass


def _out_dir() -> Path:
    return Path(os.environ.get("FANOCOEFF_OUT_DIR", "certificates"))


def _shards(args: argparse.Namespace) -> int:
    if args.shards is not None:
        return args.shards
    raw = os.environ.get("FANOCOEFF_SHARDS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"FANOCOEFF_SHARDS must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("FANOCOEFF_SHARDS must be >= 1")
    return value


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        print(text)


def _save_certificate(cert: Certificate, args: argparse.Namespace, stem: str) -> Path:
    if args.out:
        path = Path(args.out)
        if path.is_dir():
            return write_certificate(cert, path, stem)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "x", encoding="utf-8") as fh:
            fh.write(cert.to_json() + "\n")
        return path
    return write_certificate(cert, _out_dir(), stem)


def _report_certificate(cert: Certificate, path: Path, fmt: str) -> int:
    if fmt == "json":
        print(cert.to_json())
    else:
        print(cert.summary())
        for w in cert.witnesses:
            print(f"  witness i={w.i} j={w.j} k={w.k} value={w.value} {w.reason}")
        print(f"certificate: {path}")
    return EXIT_PASS if cert.passed else EXIT_FAIL


# -- commands -------------------------------------------------------------------


def cmd_seq(args: argparse.Namespace) -> int:
    names, fn = SEQUENCES[args.sequence]
    if len(args.values) != len(names):
        raise UsageError(f"seq {args.sequence} takes {len(names)} argument(s): {' '.join(names)}")
    kwargs = dict(zip(names, args.values))
    value = fn(SequenceCache(), *args.values)
    text = to_str(value)
    if args.format == "json":
        _emit(json.dumps({"sequence": args.sequence, "args": kwargs, "value": text}), args.out)
    elif args.format == "csv":
        _emit(",".join(names + ("value",)) + "\n" + ",".join(map(str, args.values)) + f",{text}", args.out)
    else:
        _emit(text, args.out)
    return EXIT_PASS


def cmd_bcoeff(args: argparse.Namespace) -> int:
    idx = TripleIndex(args.i, args.j, args.k)
    method = Method.parse(args.method)
    b = CoefficientEngine().b(idx, method)
    row = {"i": idx.i, "j": idx.j, "k": idx.k, "b": to_str(b), "d": to_str(d_from_b(idx, b)),
           "method": method.value}
    if args.format == "json":
        _emit(json.dumps(row), args.out)
    elif args.format == "csv":
        _emit(table_csv([row]).rstrip("\n"), args.out)
    else:
        _emit(row["b"], args.out)
    return EXIT_PASS


def cmd_table(args: argparse.Namespace) -> int:
    rows = table_rows(args.i_max, args.j_max, args.method)
    if args.format == "json":
        text = table_json(rows)
    elif args.format == "csv":
        text = table_csv(rows).rstrip("\n")
    else:
        text = "\n".join(f"{r['i']} {r['j']} {r['k']} {r['b']}" for r in rows)
    _emit(text, args.out)
    return EXIT_PASS


def _parse_bounds(items: Sequence[str]) -> IdentityBounds:
    known = {f.name for f in fields(IdentityBounds)}
    values = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or key not in known:
            raise UsageError(f"bad bound {item!r}; known keys: {', '.join(sorted(known))}")
        try:
            values[key] = int(raw)
        except ValueError:
            raise UsageError(f"bound {key} needs an integer, got {raw!r}") from None
    return IdentityBounds(**values)


def cmd_verify(args: argparse.Namespace) -> int:
    bounds = _parse_bounds(args.bound or [])
    names = args.identity or None
    cert = verify_identities(bounds, names, method=args.method, shards=_shards(args))
    stem = "verify-" + ("-".join(names) if names else "all") + f"-{Method.parse(args.method).value}"
    path = _save_certificate(cert, args, stem)
    return _report_certificate(cert, path, args.format)


def cmd_certify(args: argparse.Namespace) -> int:
    if args.N < 2:
        raise UsageError("N must be >= 2")
    method = Method.parse(args.method)
    cert = certify_positivity(args.N, method, shards=_shards(args))
    path = _save_certificate(cert, args, f"certify-N{args.N}-{method.value}")
    return _report_certificate(cert, path, args.format)


def cmd_crossval(args: argparse.Namespace) -> int:
    cert = CoefficientEngine().cross_validate(args.i_max, args.j_max)
    path = _save_certificate(cert, args, f"crossval-i{args.i_max}-j{args.j_max}")
    return _report_certificate(cert, path, args.format)


def cmd_chern(args: argparse.Namespace) -> int:
    fmt = "latex" if args.format in ("plain", "latex") else "json"
    doc = render_chern_expansion(args.i, args.j, fmt, method=args.method)
    _emit(doc if fmt == "latex" else json.dumps(doc, indent=1), args.out)
    return EXIT_PASS


def cmd_explore(args: argparse.Namespace) -> int:
    if args.N < 2:
        raise UsageError("N must be >= 2")
    report = sign_report(args.N, args.j, args.method)
    if args.format == "json":
        _emit(json.dumps(report, indent=1), args.out)
    else:
        c = report["counts"]
        _emit(f"j={args.j} N={args.N} positive={c['positive']} zero={c['zero']} negative={c['negative']}",
              args.out)
    return EXIT_PASS


# -- parser ---------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _method(text: str) -> str:
    try:
        return Method.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_common(p: argparse.ArgumentParser, method: Method = Method.CLOSED_FORM,
                formats: tuple[str, ...] = ("plain", "csv", "json")) -> None:
    p.add_argument("--format", choices=formats, default="plain")
    p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    p.add_argument("--shards", type=_positive, help="worker processes (env FANOCOEFF_SHARDS)")
    p.add_argument("--method", type=_method, default=method.value,
                   help=f"recurrence, genfunc or closed (default {method.value})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fanocoeff", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="special-number sequences")
    _add_common(p)
    p.add_argument("sequence", choices=sorted(SEQUENCES))
    p.add_argument("values", type=_natural, nargs="+")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("bcoeff", help="a single b_(i,j,k)")
    _add_common(p)
    p.add_argument("i", type=_positive)
    p.add_argument("j", type=_natural)
    p.add_argument("k", type=_positive)
    p.set_defaults(func=cmd_bcoeff)

    p = sub.add_parser("table", help="b and d for 1<=i<=I, 1<=j<=J, 1<=k<=i+j")
    _add_common(p)
    p.add_argument("i_max", type=_positive)
    p.add_argument("j_max", type=_positive)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="identity regression suite")
    _add_common(p, method=Method.RECURRENCE)
    p.add_argument("--identity", action="append", choices=sorted(IDENTITIES))
    p.add_argument("--bound", action="append", metavar="KEY=N", help="override an identity bound")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", help="certify b_(i,j,k) > 0 for j = 1, 2")
    _add_common(p)
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("crossval", help="three-method agreement")
    _add_common(p)
    p.add_argument("i_max", type=_positive)
    p.add_argument("j_max", type=_natural)
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("chern", help="expansion of ch_j(H_i)")
    _add_common(p, formats=("plain", "json", "latex"))
    p.add_argument("i", type=_positive)
    p.add_argument("j", type=_positive)
    p.set_defaults(func=cmd_chern)

    p = sub.add_parser("explore", help="sign census at one j (no claim made)")
    _add_common(p)
    p.add_argument("N", type=int)
    p.add_argument("j", type=_positive)
    p.set_defaults(func=cmd_explore)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fanocoeff: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"fanocoeff: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        print(f"fanocoeff: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
