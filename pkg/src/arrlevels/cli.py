"""Command line front end.

Every report is plain text with exact rationals; identical input gives
identical bytes.  Exit codes: 0 success, 1 a check or comparison failed,
2 malformed input or arguments.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from . import checks
from .arrangement import (
    Arrangement,
    ParseError,
    centralize,
    format_arrangement,
    intersection_poset,
    parse_arrangement,
)
from .families import GENERATORS, ExponentialFamily, exp_level_formula
from .posets import char_poly, format_poset, parse_poset, zaslavsky_counts
from .ratlin import format_rational
from .regions import enumerate_regions, level_histogram, levels_via_formula, recession_cone
from .semilattice import (
    GeometricSemilattice,
    SemilatticeError,
    centralization,
    chi,
    cone,
    counts,
    level_distribution,
    validate,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _kind(text: str) -> str:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            head = line.split()[0]
            if head == "dim":
                return "arrangement"
            if head in ("elements", "a0"):
                return "poset"
            raise ParseError(f"cannot tell the input type from {head!r}", text.splitlines().index(raw) + 1)
    raise ParseError("empty input")


def load(path: str):
    """Arrangement or GeometricSemilattice, decided by the first directive."""
    text = _read(path)
    if _kind(text) == "arrangement":
        return parse_arrangement(text)
    M = GeometricSemilattice.from_atom_poset(parse_poset(text))
    problem = validate(M)
    if problem:
        raise SemilatticeError(f"not a geometric semilattice: {problem}")
    return M


def _row(values: Sequence) -> str:
    return " ".join(str(v) for v in values)


def _header(obj) -> str:
    if isinstance(obj, Arrangement):
        return f"# ambient indexing: r_0 .. r_{obj.dim} (dim {obj.dim}, rank {obj.rank})"
    return f"# rank indexing: r_0 .. r_{obj.rank} (rank {obj.rank})"


# --------------------------------------------------------------------------
# Commands


def cmd_chi(args, out: TextIO) -> int:
    obj = load(args.file)
    if isinstance(obj, Arrangement):
        P = intersection_poset(obj).poset()
        p = char_poly(P, obj.dim)
        r, b = zaslavsky_counts(P, obj.dim)
    else:
        p = chi(obj)
        r, b = counts(obj)
    out.write(f"chi {p}\nr {r}\nb {b}\n")
    return 0


def _plot_data(A: Arrangement, regions: list, out: TextIO) -> None:
    L = intersection_poset(A)
    pts = [f.point() for f in L.flats if f.dim == 0] + [R.witness for R in regions]
    xs = [p[0] for p in pts] or [Fraction(0)]
    ys = [p[1] for p in pts] or [Fraction(0)]
    lo_x, hi_x = min(xs) - 1, max(xs) + 1
    lo_y, hi_y = min(ys) - 1, max(ys) + 1
    out.write(f"box {_row(format_rational(v) for v in (lo_x, lo_y, hi_x, hi_y))}\n")
    for i, h in enumerate(A.hyperplanes):
        (p, q), a = h.w, h.a
        ends = set()
        if q != 0:
            for x in (lo_x, hi_x):
                y = (a - p * x) / q
                if lo_y <= y <= hi_y:
                    ends.add((x, y))
        if p != 0:
            for y in (lo_y, hi_y):
                x = (a - q * y) / p
                if lo_x <= x <= hi_x:
                    ends.add((x, y))
        e = sorted(ends)
        out.write(f"segment {i} {_row(format_rational(v) for v in e[0] + e[-1])}\n")
    for R in regions:
        out.write(f"point {R.sign_string} {_row(format_rational(v) for v in R.witness)}\n")


def cmd_regions(args, out: TextIO) -> int:
    A = load(args.file)
    if not isinstance(A, Arrangement):
        raise UsageError("regions needs an arrangement file")
    regions = enumerate_regions(A)
    if args.plot_data:
        if A.dim != 2:
            raise UsageError("--plot-data is only defined for dim 2")
        _plot_data(A, regions, out)
        return 0
    LC = intersection_poset(centralize(A))
    for R in regions:
        rc = recession_cone(A, R, LC)
        wit = _row(format_rational(x) for x in R.witness)
        out.write(f"R {R.sign_string} level {rc.level} flat {rc.flat_index} witness {wit}".rstrip() + "\n")
    return 0


def cmd_levels(args, out: TextIO) -> int:
    obj = load(args.file)
    out.write(_header(obj) + "\n")
    if not isinstance(obj, Arrangement):
        if args.method == "enumerate":
            raise UsageError("poset input has no regions to enumerate; use --method formula")
        out.write(f"formula {_row(level_distribution(obj))}\n")
        return 0
    rows = {}
    if args.method in ("enumerate", "both"):
        rows["enumerate"] = level_histogram(obj)
    if args.method in ("formula", "both"):
        rows["formula"] = levels_via_formula(obj)
    for name, hist in rows.items():
        out.write(f"{name} {_row(hist)}\n")
    if args.method == "both":
        same = rows["enumerate"] == rows["formula"]
        out.write("MATCH\n" if same else "MISMATCH\n")
        return 0 if same else 1
    return 0


def cmd_cone(args, out: TextIO) -> int:
    obj = load(args.file)
    M = GeometricSemilattice.from_intersection_poset(intersection_poset(obj)) if isinstance(obj, Arrangement) else obj
    out.write(format_poset(cone(M).to_atom_poset()))
    return 0


def cmd_centralize(args, out: TextIO) -> int:
    obj = load(args.file)
    if isinstance(obj, Arrangement):
        out.write(format_arrangement(centralize(obj)))
    else:
        out.write(format_poset(centralization(obj).to_atom_poset()))
    return 0


def _family_table(fam: ExponentialFamily, max_n: int, out: TextIO) -> int:
    ok = True
    out.write(f"# {fam.name}: ambient indexing r_0 .. r_n; formula column from b(A_1) .. b(A_n)\n")
    for n in range(1, max_n + 1):
        hist = fam.levels(n)
        formula = [0] + [exp_level_formula(fam, n, l) for l in range(1, n + 1)]
        A = fam(n)
        p = char_poly(intersection_poset(A).poset(), n)
        verdict = "MATCH" if hist == formula else "MISMATCH"
        ok &= hist == formula
        out.write(f"n {n} levels {_row(hist)} formula {_row(formula)} {verdict} chi {p}\n")
    return 0 if ok else 1


def cmd_family(args, out: TextIO) -> int:
    try:
        fam = ExponentialFamily.named(args.name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.max_n is not None:
        if args.max_n < 1:
            raise UsageError("--max-n must be at least 1")
        return _family_table(fam, args.max_n, out)
    if args.n is None:
        raise UsageError("family needs N or --max-n")
    if args.n < 1:
        raise UsageError("n must be at least 1")
    A = fam(args.n)
    if not args.levels:
        out.write(format_arrangement(A))
        return 0
    out.write(_header(A) + "\n")
    out.write(f"levels {_row(fam.levels(args.n))}\n")
    out.write(f"chi {char_poly(intersection_poset(A).poset(), A.dim)}\n")
    return 0


def cmd_verify(args, out: TextIO) -> int:
    if args.file is None and not args.fuzz:
        raise UsageError("verify needs a FILE, --fuzz N, or both")
    results = []
    if args.file is not None:
        obj = load(args.file)
        if isinstance(obj, Arrangement):
            results += checks.arrangement_checks(obj) + checks.braid_deformation_checks(obj)
        else:
            results += checks.semilattice_checks(obj) + checks.uniform_checks(obj)
    if args.fuzz:
        results += checks.fuzz_checks(args.fuzz, args.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        line = f"{'PASS' if r.ok else 'FAIL'}  {r.name.ljust(width)}"
        if not r.ok:
            line += "  " + r.detail.replace("\n", " | ")
        out.write(line.rstrip() + "\n")
    passed = sum(r.ok for r in results)
    out.write(f"{passed}/{len(results)} checks passed\n")
    return 0 if passed == len(results) else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arrlevels", description="Exact level distributions of hyperplane arrangements.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("chi", help="characteristic polynomial with r and b")
    p.add_argument("file")
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("regions", help="one line per region with level, flat and witness")
    p.add_argument("file")
    p.add_argument("--plot-data", action="store_true", help="dim 2 only: clipped line segments and witness points")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("levels", help="level histogram")
    p.add_argument("file")
    p.add_argument("--method", choices=("enumerate", "formula", "both"), default="both")
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("cone", help="cone of the intersection semilattice, in poset format")
    p.add_argument("file")
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("centralize", help="centralization")
    p.add_argument("file")
    p.set_defaults(func=cmd_centralize)

    p = sub.add_parser("family", help="named braid deformations")
    p.add_argument("name", choices=sorted(GENERATORS))
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--levels", action="store_true", help="print the histogram and chi instead of the arrangement")
    p.add_argument("--max-n", type=int, help="table of levels against the partition formula for n = 1 .. MAX_N")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", help="run every applicable invariant check")
    p.add_argument("file", nargs="?")
    p.add_argument("--fuzz", type=int, default=0, metavar="N", help="also check N random arrangements")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (ParseError, SemilatticeError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
