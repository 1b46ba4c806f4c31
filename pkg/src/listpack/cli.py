"""Command-line front end.

Exit codes: 0 on success, 1 when a validation fails or no packing exists,
2 on usage errors (bad arguments, unreadable or malformed input).
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import fixtures
from ._config import BudgetExceeded
from .builders import cartesian_packing, layered_packing, tree_product_packing, treedepth_packing
from .caterpillar import BalanceError, caterpillar_packing
from .cover import CoverError, cover_graph, random_cover, validate_cover
from .fcp import CertificateError, format_value, fractional_chromatic_number
from .flexibility import flexible_for_degeneracy
from .formats import (
    FormatError,
    cover_digest,
    parse_cover,
    parse_decomposition,
    parse_dimacs,
    parse_forest,
    parse_layers,
    parse_packing,
    sniff,
    to_dimacs,
    write_certificate,
    write_cover,
    write_decomposition,
    write_forest,
    write_packing,
)
from .graph import GraphError, degeneracy_order, dfs_forest, pathwidth_decompose_small, treedepth_forest_small
from .packing import EpsilonProfile, Infeasible, PackingError, solve_packing_lp, validate_packing, verify_infeasible


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cover(args):
    c = parse_cover(_read(args.cover))
    rep = validate_cover(c)
    if not rep.ok:
        raise PackingError("invalid cover: " + str(rep))
    if getattr(args, "graph", None):
        g = parse_dimacs(_read(args.graph))
        if g != c.base:
            raise PackingError("the cover's graph differs from --graph")
    return c


def _emit_packing(d, c, args) -> int:
    text = write_packing(d, c)
    _write(text, args.output)
    print(f"{len(d.weights)} colourings", file=sys.stderr)
    return 0


# -- subcommands -----------------------------------------------------------------


def cmd_validate_cover(args) -> int:
    c = parse_cover(_read(args.cover))
    rep = validate_cover(c)
    if rep.ok:
        print("ok")
        return 0
    for v in rep.violations:
        print(v)
    return 1


def cmd_pack(args) -> int:
    try:
        return _pack(args)
    except GraphError as exc:
        # a decomposition that does not fit the cover is a validation failure
        raise PackingError(str(exc)) from None


def _pack(args) -> int:
    c = _cover(args)
    if args.method == "caterpillar":
        if not args.decomp:
            raise UsageError("pack caterpillar needs --decomp")
        d = caterpillar_packing(c, parse_decomposition(_read(args.decomp)))
    elif args.method == "treedepth":
        if args.forest:
            f = parse_forest(_read(args.forest))
        else:
            f = treedepth_forest_small(c.base) if c.n <= 16 else dfs_forest(c.base)
        d = treedepth_packing(c, f)
    elif args.method == "layered":
        if not args.layers:
            raise UsageError("pack layered needs --layers")
        d = layered_packing(c, parse_layers(_read(args.layers)))
    elif args.method == "product":
        if not (args.g1 and args.g2 and args.k1 is not None):
            raise UsageError("pack product needs --g1, --g2 and --k1")
        g1 = parse_dimacs(_read(args.g1))
        g2 = parse_dimacs(_read(args.g2))
        if args.tree:
            d = tree_product_packing(c, g1, g2, args.k1)
        else:
            d = cartesian_packing(c, g1, g2, args.k1)
    else:
        res = solve_packing_lp(c)
        if isinstance(res, Infeasible):
            rep = verify_infeasible(c, res)
            print(f"infeasible (certificate value {res.value}, {'verified' if rep.ok else 'NOT verified: ' + str(rep)})")
            for (v, a), w in sorted(res.colour_weights.items()):
                if w:
                    print(f"# weight {v} {a} {w}")
            return 1
        d = res
    return _emit_packing(d, c, args)


def cmd_flex(args) -> int:
    c = _cover(args)
    order = degeneracy_order(c.base)
    k = order.max_forward_degree if args.degeneracy is None else args.degeneracy
    d = flexible_for_degeneracy(c, k, order)
    text = write_packing(d, c)
    probs = d.marginals(c.sizes)
    report = [f"# P {v} {a} {p}" for (v, a), p in sorted(probs.items())]
    report.append(f"# min {min(probs.values())} bound {Fraction(1, 2 ** (k + 1))}")
    _write(text + "\n".join(report) + "\n", args.output)
    return 0


def cmd_chif(args) -> int:
    text = _read(args.graph or "-")
    kind = sniff(text)
    if kind == "dimacs":
        g = parse_dimacs(text)
    elif kind == "cover":
        g = cover_graph(parse_cover(text))
    else:
        raise UsageError(f"chif expects a DIMACS graph or a cover, got {kind}")
    value, primal, dual = fractional_chromatic_number(g)
    print(format_value(value))
    if args.certify:
        _write(write_certificate(value, primal, dual), args.certify)
    return 0


def cmd_verify_packing(args) -> int:
    c = parse_cover(_read(args.cover))
    digest, d = parse_packing(_read(args.packing))
    bad = []
    if digest != cover_digest(c):
        bad.append("packing was made for a different cover (digest mismatch)")
    target = "fractional" if args.eps is None else EpsilonProfile.constant(c.n, Fraction(args.eps))
    rep = validate_packing(c, d, target)
    bad += rep.violations
    if not bad:
        print("ok")
        return 0
    for line in bad:
        print(line)
    return 1


def cmd_fixture(args) -> int:
    name, what = args.name, args.what
    if name == "appendix-b":
        if what in (None, "graph"):
            g, _ = fixtures.build_appendix_b(printed=args.printed)
            text = to_dimacs(g)
        elif what == "cover":
            text = write_cover(fixtures.appendix_b_cover())
        else:
            raise UsageError("appendix-b offers --what graph|cover")
    elif name == "q3":
        c = fixtures.build_q3_cover()
        if what in (None, "cover"):
            text = write_cover(c)
        elif what == "graph":
            text = to_dimacs(cover_graph(c))
        else:
            raise UsageError("q3 offers --what cover|graph")
    elif name == "cyclic-shift":
        c = fixtures.cyclic_shift_cover(args.q)
        text = write_cover(c) if what in (None, "cover") else to_dimacs(cover_graph(c))
    elif name == "figure2":
        if what in (None, "cover"):
            text = write_cover(fixtures.figure2_cover())
        elif what == "graph":
            text = to_dimacs(fixtures.figure2_graph())
        elif what == "decomp":
            text = write_decomposition(fixtures.figure2_decomposition())
        else:
            raise UsageError("figure2 offers --what cover|graph|decomp")
    else:
        rng = random.Random(args.seed)
        g = fixtures.random_graph(args.n, args.p, rng)
        c = random_cover(g, args.k, rng, full=args.full)
        text = write_cover(c) if what in (None, "cover") else to_dimacs(g)
    _write(text, args.output)
    return 0


def cmd_decompose(args) -> int:
    g = parse_dimacs(_read(args.graph))
    if args.kind == "pathwidth":
        d = pathwidth_decompose_small(g)
        if d is None:
            print("graph is too large or not connected enough for an exact decomposition", file=sys.stderr)
            return 1
        _write(write_decomposition(d), args.output)
    else:
        _write(write_forest(treedepth_forest_small(g)), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="listpack", description="Fractional packings of correspondence covers.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-cover", help="check the cover conditions")
    p.add_argument("cover", nargs="?", default="-")
    p.set_defaults(func=cmd_validate_cover)

    p = sub.add_parser("pack", help="build a fractional packing")
    p.add_argument("method", choices=["caterpillar", "treedepth", "layered", "product", "lp"])
    p.add_argument("--cover", required=True)
    p.add_argument("--graph", help="DIMACS graph the cover must be built on")
    p.add_argument("--decomp")
    p.add_argument("--forest")
    p.add_argument("--layers")
    p.add_argument("--g1")
    p.add_argument("--g2")
    p.add_argument("--k1", type=int)
    p.add_argument("--tree", action="store_true", help="second factor is a tree (layered construction)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("flex", help="flexible distribution along a degeneracy order")
    p.add_argument("--cover", required=True)
    p.add_argument("--degeneracy", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_flex)

    p = sub.add_parser("chif", help="exact fractional chromatic number")
    p.add_argument("--graph", help="DIMACS graph or cover file (default: stdin)")
    p.add_argument("--certify", metavar="OUT", help="write primal and dual certificates")
    p.set_defaults(func=cmd_chif)

    p = sub.add_parser("verify-packing", help="check a packing file against a cover")
    p.add_argument("packing")
    p.add_argument("--cover", required=True)
    p.add_argument("--eps", help="check P >= eps instead of exact 1/|L(v)|")
    p.set_defaults(func=cmd_verify_packing)

    p = sub.add_parser("fixture", help="emit a built-in instance")
    p.add_argument("name", choices=["q3", "appendix-b", "cyclic-shift", "figure2", "random"])
    p.add_argument("--what", choices=["graph", "cover", "decomp"])
    p.add_argument("--printed", action="store_true", help="appendix-b exactly as printed, without corrections")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--full", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("decompose", help="exact decompositions of small graphs")
    p.add_argument("kind", choices=["pathwidth", "treedepth"])
    p.add_argument("graph", nargs="?", default="-")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, GraphError, CoverError) as exc:
        print(f"listpack: {exc}", file=sys.stderr)
        return 2
    except (PackingError, BalanceError, CertificateError, BudgetExceeded) as exc:
        print(f"listpack: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
