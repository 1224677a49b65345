"""Plain-text interchange formats.

Every file starts with a ``#flagcert <kind> v1`` header.  Graphs are
written ``n:`` followed by concatenated digit triples (``4:123124134``);
for more than nine vertices the triples are written ``a,b,c`` and joined
with ``;``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np

from .errors import InputError
from .hypergraph import ThreeGraph

HEADER = "#flagcert {} v1"


def header(kind: str) -> str:
    return HEADER.format(kind)


def check_header(line: str, kind: str) -> None:
    if line.strip() != header(kind):
        raise InputError(f"expected header {header(kind)!r}, found {line.strip()!r}")


def fmt_q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_q(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"malformed rational {s!r}") from None


def graph_to_text(g: ThreeGraph) -> str:
    if g.n <= 9:
        return f"{g.n}:" + "".join(f"{a}{b}{c}" for a, b, c in g.edges)
    return f"{g.n}:" + ";".join(f"{a},{b},{c}" for a, b, c in g.edges)


def graph_from_text(s: str) -> ThreeGraph:
    s = s.strip()
    head, sep, body = s.partition(":")
    if not sep or not head.isdigit():
        raise InputError(f"malformed graph {s!r}")
    n = int(head)
    if "," in body:
        try:
            edges = [tuple(int(v) for v in t.split(",")) for t in body.split(";") if t]
        except ValueError:
            raise InputError(f"malformed graph {s!r}") from None
    else:
        if len(body) % 3 or not (body.isdigit() or body == ""):
            raise InputError(f"malformed graph {s!r}")
        edges = [tuple(int(c) for c in body[i:i + 3]) for i in range(0, len(body), 3)]
    return ThreeGraph(n, tuple(edges))


def write_graph_list(out: TextIO, graphs: Iterable[ThreeGraph]) -> None:
    out.write(header("graphs") + "\n")
    for g in graphs:
        out.write(graph_to_text(g) + "\n")


def read_graph_list(src: TextIO) -> list[ThreeGraph]:
    lines = [ln for ln in src.read().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty graph list")
    check_header(lines[0], "graphs")
    return [graph_from_text(ln) for ln in lines[1:]]


def flag_to_text(f) -> str:
    return graph_to_text(f.graph) + "|root=" + "".join(str(v) for v in f.root)


def flag_from_text(s: str, sigma=None):
    from .flags import TYPES, Flag, TypeGraph
    from .hypergraph import induced_subgraph

    body, sep, root = s.strip().partition("|root=")
    if not sep or not (root.isdigit() or root == ""):
        raise InputError(f"malformed flag {s!r}")
    g = graph_from_text(body)
    r = tuple(int(c) for c in root)
    if sigma is None:
        t = induced_subgraph(g, r)
        sigma = next((x for x in TYPES.values() if x.graph == t), None) or TypeGraph("custom", t)
    return Flag(sigma, g, r)


def write_flag_list(out: TextIO, flags) -> None:
    out.write(header("flags") + "\n")
    for f in flags:
        out.write(flag_to_text(f) + "\n")


def read_flag_list(src: TextIO, sigma=None) -> list:
    lines = [ln for ln in src.read().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty flag list")
    check_header(lines[0], "flags")
    return [flag_from_text(ln, sigma) for ln in lines[1:]]


def write_pair_density(out: TextIO, table) -> None:
    out.write(header("pairdensity") + "\n")
    name = table.type.name
    order = np.lexsort((table.f2, table.f1, table.g))
    for j in order:
        val = Fraction(int(table.count[j]), table.denominator)
        out.write(f"sigma={name} f1={table.f1[j]} f2={table.f2[j]} g={table.g[j]} val={fmt_q(val)}\n")


def read_pair_density(src: TextIO) -> dict[tuple[str, int, int, int], Fraction]:
    lines = [ln for ln in src.read().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty pair density file")
    check_header(lines[0], "pairdensity")
    out = {}
    for ln in lines[1:]:
        kv = dict(part.split("=", 1) for part in ln.split())
        try:
            out[(kv["sigma"], int(kv["f1"]), int(kv["f2"]), int(kv["g"]))] = parse_q(kv["val"])
        except (KeyError, ValueError):
            raise InputError(f"malformed pair density line {ln!r}") from None
    return out


def write_expressions(out: TextIO, named) -> None:
    """``named``: iterable of (section name, LinComb)."""
    out.write(header("expressions") + "\n")
    for name, lc in named:
        out.write(f"[{name}]\n")
        for i, v in lc.items():
            out.write(f"g={i} val={fmt_q(v)}\n")


def read_expressions(src: TextIO, basis_id: str = "F7") -> dict:
    from .lincomb import LinComb

    lines = [ln for ln in src.read().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty expression file")
    check_header(lines[0], "expressions")
    out: dict[str, dict[int, Fraction]] = {}
    cur = None
    for ln in lines[1:]:
        ln = ln.strip()
        if ln.startswith("[") and ln.endswith("]"):
            cur = ln[1:-1]
            out[cur] = {}
            continue
        if cur is None:
            raise InputError("expression data before any section")
        kv = dict(part.split("=", 1) for part in ln.split())
        out[cur][int(kv["g"])] = parse_q(kv["val"])
    return {k: LinComb(basis_id, v) for k, v in out.items()}


def tournament_to_text(t) -> str:
    return f"{t.n}:" + "".join("1" if b else "0" for b in t.bits)


def tournament_from_text(s: str):
    from .tournaments import Tournament

    head, sep, body = s.strip().partition(":")
    if not sep or not head.isdigit() or any(c not in "01" for c in body):
        raise InputError(f"malformed tournament {s!r}")
    return Tournament(int(head), tuple(c == "1" for c in body))


def write_tournament_list(out: TextIO, ts) -> None:
    out.write(header("tournaments") + "\n")
    for t in ts:
        out.write(tournament_to_text(t) + "\n")


def read_tournament_list(src: TextIO) -> list:
    lines = [ln for ln in src.read().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty tournament list")
    check_header(lines[0], "tournaments")
    return [tournament_from_text(ln) for ln in lines[1:]]


def write_matrix(out: TextIO, H: np.ndarray) -> None:
    out.write(header("matrix") + "\n")
    out.write(f"{H.shape[0]}\n")
    for row in H:
        out.write(" ".join(str(int(x)) for x in row) + "\n")


def read_matrix(src: TextIO) -> np.ndarray:
    lines = [ln for ln in src.read().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty matrix file")
    check_header(lines[0], "matrix")
    try:
        n = int(lines[1])
        rows = [[int(x) for x in ln.split()] for ln in lines[2:]]
    except (IndexError, ValueError):
        raise InputError("malformed matrix file") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"matrix file does not contain a {n}x{n} matrix")
    return np.array(rows, dtype=np.int64)
