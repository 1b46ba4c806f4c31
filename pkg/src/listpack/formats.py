"""Line-based text formats for decompositions, forests, layers, covers,
packings and fractional-colouring certificates.

Every writer is deterministic (sorted output) and every parser accepts what
the matching writer emits, so ``parse(write(x)) == x``. Blank lines and lines
starting with ``#`` are ignored by all parsers.
"""
from __future__ import annotations

import hashlib
from fractions import Fraction

from .cover import CorrespondenceCover
from .fcp import DualWitness, FractionalColouring
from .graph import CaterpillarDecomposition, EliminationForest, Graph, LayerPartition, parse_dimacs, to_dimacs
from .packing import PackingDistribution

__all__ = [
    "FormatError",
    "parse_dimacs",
    "to_dimacs",
    "write_decomposition",
    "parse_decomposition",
    "write_forest",
    "parse_forest",
    "write_layers",
    "parse_layers",
    "write_cover",
    "parse_cover",
    "cover_digest",
    "write_packing",
    "parse_packing",
    "write_certificate",
    "parse_certificate",
    "sniff",
]


class FormatError(ValueError):
    pass


def _lines(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: expected an integer, got {tok!r}") from None


def _frac(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {lineno}: expected a rational p/q, got {tok!r}") from None


def _fmt(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _kv(tokens, lineno: int) -> dict:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise FormatError(f"line {lineno}: expected key=value, got {tok!r}")
        out[key] = _int(val, lineno)
    return out


def _header(lines, word: str):
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise FormatError(f"empty input, expected a {word!r} header") from None
    parts = line.split()
    if parts[0] != word:
        raise FormatError(f"line {lineno}: expected a {word!r} header, got {line!r}")
    return lineno, parts[1:]


def sniff(text) -> str:
    """Name of the format of ``text``: dimacs, cover, packing, chif, caterpillar, forest or layers."""
    for _, line in _lines(text):
        word = line.split()[0]
        if word in ("p", "e", "c"):
            return "dimacs"
        if word in ("cover", "packing", "chif", "caterpillar", "forest", "layers"):
            return word
        break
    raise FormatError("unrecognised input format")


# -- decompositions ---------------------------------------------------------------


def write_decomposition(d: CaterpillarDecomposition) -> str:
    n = max((v for a in d.active_sets for v in a), default=0)
    out = [f"caterpillar p={d.p} n={n}"]
    out += [f"A {i}: " + " ".join(map(str, a)) for i, a in enumerate(d.active_sets, 1)]
    return "\n".join(out) + "\n"


def parse_decomposition(text) -> CaterpillarDecomposition:
    lines = _lines(text)
    lineno, rest = _header(lines, "caterpillar")
    kv = _kv(rest, lineno)
    if "p" not in kv:
        raise FormatError(f"line {lineno}: missing p=")
    sets = []
    for lineno, line in lines:
        head, sep, body = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] != "A":
            raise FormatError(f"line {lineno}: expected 'A <i>: v v ...', got {line!r}")
        if _int(parts[1], lineno) != len(sets) + 1:
            raise FormatError(f"line {lineno}: active sets must be numbered consecutively from 1")
        sets.append(tuple(_int(t, lineno) for t in body.split()))
    d = CaterpillarDecomposition(kv["p"], tuple(sets))
    if "n" in kv and sets and max(v for a in sets for v in a) > kv["n"]:
        raise FormatError(f"active sets mention vertices beyond n={kv['n']}")
    return d


# -- elimination forests -------------------------------------------------------------


def write_forest(f: EliminationForest) -> str:
    out = [f"forest depth={f.depth}"]
    for v, u in sorted(f.parent.items()):
        out.append(f"parent {v} {'root' if u is None else u}")
    return "\n".join(out) + "\n"


def parse_forest(text) -> EliminationForest:
    lines = _lines(text)
    lineno, rest = _header(lines, "forest")
    kv = _kv(rest, lineno)
    parent = {}
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "parent":
            raise FormatError(f"line {lineno}: expected 'parent <v> <u|root>', got {line!r}")
        v = _int(parts[1], lineno)
        if v in parent:
            raise FormatError(f"line {lineno}: vertex {v} has two parents")
        parent[v] = None if parts[2] == "root" else _int(parts[2], lineno)
    n = len(parent)
    if sorted(parent) != list(range(1, n + 1)):
        raise FormatError("parent lines must cover vertices 1..n exactly once")
    f = EliminationForest({v: parent[v] for v in range(1, n + 1)})
    if "depth" in kv and f.depth != kv["depth"]:
        raise FormatError(f"declared depth {kv['depth']} but the forest has depth {f.depth}")
    return f


# -- layer partitions ----------------------------------------------------------------


def write_layers(lp: LayerPartition) -> str:
    out = ["layers v1"]
    out += [f"layer {i}: " + " ".join(map(str, layer)) for i, layer in enumerate(lp.layers, 1)]
    return "\n".join(out) + "\n"


def parse_layers(text) -> LayerPartition:
    lines = _lines(text)
    lineno, rest = _header(lines, "layers")
    if rest != ["v1"]:
        raise FormatError(f"line {lineno}: unsupported layers version {' '.join(rest)!r}")
    layers = []
    for lineno, line in lines:
        head, sep, body = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] != "layer":
            raise FormatError(f"line {lineno}: expected 'layer <i>: v v ...', got {line!r}")
        layers.append(tuple(_int(t, lineno) for t in body.split()))
    return LayerPartition(tuple(layers))


# -- covers --------------------------------------------------------------------------


def write_cover(c: CorrespondenceCover) -> str:
    out = ["cover v1", f"graph {c.n}"]
    out += [f"edge {u} {v}" for u, v in c.base.sorted_edges()]
    out += [f"list {v} {c.size(v)}" for v in c.base.vertices]
    for (u, v) in sorted(c.matchings):
        pairs = c.matchings[(u, v)]
        k = min(c.size(u), c.size(v))
        if pairs == frozenset((a, a) for a in range(1, k + 1)):
            out.append(f"match {u} {v} identity")
        else:
            out += [f"match {u} {v} {a} {b}" for a, b in sorted(pairs)]
    return "\n".join(out) + "\n"


def parse_cover(text) -> CorrespondenceCover:
    lines = _lines(text)
    lineno, rest = _header(lines, "cover")
    if rest != ["v1"]:
        raise FormatError(f"line {lineno}: unsupported cover version {' '.join(rest)!r}")
    n = None
    edges = []
    sizes = {}
    pending = []
    for lineno, line in lines:
        parts = line.split()
        word = parts[0]
        if word == "graph":
            if n is not None or len(parts) != 2:
                raise FormatError(f"line {lineno}: malformed or repeated 'graph' line")
            n = _int(parts[1], lineno)
            continue
        if n is None:
            raise FormatError(f"line {lineno}: {word!r} before the 'graph' line")
        nums = parts[1:]
        if word == "edge" and len(nums) == 2:
            edges.append((_int(nums[0], lineno), _int(nums[1], lineno)))
        elif word == "list" and len(nums) == 2:
            v = _int(nums[0], lineno)
            if v in sizes:
                raise FormatError(f"line {lineno}: second list for vertex {v}")
            sizes[v] = _int(nums[1], lineno)
        elif word == "match" and len(nums) == 3 and nums[2] == "identity":
            pending.append((lineno, _int(nums[0], lineno), _int(nums[1], lineno), None))
        elif word == "match" and len(nums) == 4:
            a, b = _int(nums[2], lineno), _int(nums[3], lineno)
            pending.append((lineno, _int(nums[0], lineno), _int(nums[1], lineno), (a, b)))
        else:
            raise FormatError(f"line {lineno}: cannot parse {line!r}")
    if n is None:
        raise FormatError("missing 'graph' line")
    for v in range(1, n + 1):
        if v not in sizes:
            raise FormatError(f"vertex {v} has no 'list' line")
    if any(not 1 <= v <= n for v in sizes):
        raise FormatError("list line for a vertex outside 1..n")
    try:
        base = Graph.from_edges(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    matchings = {}
    for lineno, u, v, pair in pending:
        if not base.has_edge(u, v):
            raise FormatError(f"line {lineno}: match on non-edge {u}-{v}")
        if pair is None:
            k = min(sizes[u], sizes[v])
            pairs = [(a, a) for a in range(1, k + 1)]
        else:
            pairs = [pair]
        if u > v:
            u, v = v, u
            pairs = [(b, a) for a, b in pairs]
        matchings.setdefault((u, v), []).extend(pairs)
    return CorrespondenceCover(base, tuple(sizes[v] for v in range(1, n + 1)), matchings)


def cover_digest(c: CorrespondenceCover) -> str:
    """sha256 of the canonical cover file."""
    return hashlib.sha256(write_cover(c).encode("utf-8")).hexdigest()


# -- packings ------------------------------------------------------------------------


def write_packing(d: PackingDistribution, c: CorrespondenceCover) -> str:
    out = ["packing v1", f"cover {cover_digest(c)}"]
    for col in sorted(d.weights):
        out.append(f"weight {_fmt(d.weights[col])} : " + " ".join(map(str, col)))
    return "\n".join(out) + "\n"


def parse_packing(text) -> tuple:
    """``(cover digest, PackingDistribution)``."""
    lines = _lines(text)
    lineno, rest = _header(lines, "packing")
    if rest != ["v1"]:
        raise FormatError(f"line {lineno}: unsupported packing version {' '.join(rest)!r}")
    digest = None
    weights = {}
    for lineno, line in lines:
        parts = line.split()
        if parts[0] == "cover" and len(parts) == 2 and digest is None:
            digest = parts[1]
            continue
        head, sep, body = line.partition(":")
        hp = head.split()
        if not sep or len(hp) != 2 or hp[0] != "weight":
            raise FormatError(f"line {lineno}: expected 'weight p/q : c1 c2 ...', got {line!r}")
        w = _frac(hp[1], lineno)
        if w < 0:
            raise FormatError(f"line {lineno}: negative weight")
        col = tuple(_int(t, lineno) for t in body.split())
        weights[col] = weights.get(col, Fraction(0)) + w
    if digest is None:
        raise FormatError("missing 'cover <sha256>' line")
    lengths = {len(col) for col in weights}
    if len(lengths) > 1:
        raise FormatError("colourings of different lengths")
    return digest, PackingDistribution(weights)


# -- fractional colouring certificates ---------------------------------------------------


def write_certificate(value, primal: FractionalColouring, dual: DualWitness) -> str:
    out = ["chif v1", f"value {_fmt(value)}"]
    rows = sorted((sorted(s), w) for s, w in primal.sets)
    out += [f"set {_fmt(w)} : " + " ".join(map(str, s)) for s, w in rows]
    out += [f"dual {v} {_fmt(w)}" for v, w in sorted(dual.vertex_weights.items())]
    return "\n".join(out) + "\n"


def parse_certificate(text) -> tuple:
    """``(value, FractionalColouring, DualWitness)``."""
    lines = _lines(text)
    lineno, rest = _header(lines, "chif")
    if rest != ["v1"]:
        raise FormatError(f"line {lineno}: unsupported certificate version {' '.join(rest)!r}")
    value = None
    sets = []
    dual = {}
    for lineno, line in lines:
        parts = line.split()
        if parts[0] == "value" and len(parts) == 2:
            value = _frac(parts[1], lineno)
        elif parts[0] == "dual" and len(parts) == 3:
            dual[_int(parts[1], lineno)] = _frac(parts[2], lineno)
        elif parts[0] == "set":
            head, sep, body = line.partition(":")
            hp = head.split()
            if not sep or len(hp) != 2:
                raise FormatError(f"line {lineno}: expected 'set p/q : v v ...', got {line!r}")
            sets.append((frozenset(_int(t, lineno) for t in body.split()), _frac(hp[1], lineno)))
        else:
            raise FormatError(f"line {lineno}: cannot parse {line!r}")
    if value is None:
        raise FormatError("missing 'value' line")
    return value, FractionalColouring(tuple(sets)), DualWitness(dual)
