"""Text formats for graphs, demand sets, DPSP instances and routings.

Graph file (``.pg``)::

    planar v1
    n m
    vid deg nb_1 ... nb_deg        (n lines, neighbours in ccw order)
    outer u v                      (optional, face left of u->v)
    cuff1 u v                      (optional)
    cuff2 u v                      (optional)

Demands file: one ``s t`` pair per line. DPSP file::

    dpsp v1
    sigma_len sigma2_len k c
    s t                            (k lines)
    kind a b w                     (c lines)

Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..dpsp import Constraint, DpspInstance
from ..errors import InputError
from ..planar_core import EmbeddedPlanarGraph, build_embedding
from .routing import Routing

Pair = tuple[int, int]


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def _ints(tokens: list[str], where: str) -> list[int]:
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise InputError(f"{where}: expected integers, got {' '.join(tokens)!r}") from None


@dataclass
class GraphFile:
    graph: EmbeddedPlanarGraph
    darts: dict[str, tuple[int, int]] = field(default_factory=dict)


def parse_graph(text: str) -> GraphFile:
    rows = _lines(text)
    if not rows or rows[0] != ["planar", "v1"]:
        raise InputError("graph file must start with 'planar v1'")
    if len(rows) < 2:
        raise InputError("graph file is missing the 'n m' line")
    if len(rows[1]) != 2:
        raise InputError("second line must be 'n m'")
    n, m = _ints(rows[1], "header")
    if len(rows) < 2 + n:
        raise InputError(f"expected {n} vertex lines")
    rots: list[list[int] | None] = [None] * n
    for row in rows[2 : 2 + n]:
        vals = _ints(row, "vertex line")
        if len(vals) < 2 or len(vals) != 2 + vals[1]:
            raise InputError(f"vertex line {' '.join(row)!r} has the wrong length")
        vid = vals[0]
        if not 0 <= vid < n or rots[vid] is not None:
            raise InputError(f"bad or repeated vertex id {vid}")
        rots[vid] = vals[2:]
    G = build_embedding(n, rots)  # type: ignore[arg-type]
    if G.edge_count() != m:
        raise InputError(f"header says {m} edges, rotations give {G.edge_count()}")
    darts = {}
    for row in rows[2 + n :]:
        if row[0] in ("outer", "cuff1", "cuff2") and len(row) == 3:
            u, v = _ints(row[1:], row[0])
            if not G.has_edge(u, v):
                raise InputError(f"{row[0]} dart {u}->{v} is not an edge")
            darts[row[0]] = (u, v)
        else:
            raise InputError(f"unexpected line {' '.join(row)!r}")
    return GraphFile(G, darts)


def format_graph(G: EmbeddedPlanarGraph, **darts: tuple[int, int]) -> str:
    out = ["planar v1", f"{G.vertex_count} {G.edge_count()}"]
    for v in range(G.vertex_count):
        nb = G.rotations[v]
        out.append(" ".join(str(x) for x in [v, len(nb), *nb]))
    for name in ("outer", "cuff1", "cuff2"):
        if name in darts and darts[name] is not None:
            u, v = darts[name]
            out.append(f"{name} {u} {v}")
    return "\n".join(out) + "\n"


def parse_demands(text: str) -> list[Pair]:
    pairs = []
    for row in _lines(text):
        vals = _ints(row, "demand line")
        if len(vals) != 2:
            raise InputError(f"demand line {' '.join(row)!r} must hold two vertices")
        pairs.append((vals[0], vals[1]))
    return pairs


def format_demands(pairs) -> str:
    return "".join(f"{s} {t}\n" for s, t in pairs)


def parse_dpsp(text: str) -> DpspInstance:
    rows = _lines(text)
    if not rows or rows[0] != ["dpsp", "v1"]:
        raise InputError("DPSP file must start with 'dpsp v1'")
    if len(rows) < 2 or len(rows[1]) != 4:
        raise InputError("second line must be 'sigma_len sigma2_len k constraints'")
    n, m, k, c = _ints(rows[1], "header")
    if len(rows) != 2 + k + c:
        raise InputError(f"expected {k} pair lines and {c} constraint lines")
    pairs = []
    for row in rows[2 : 2 + k]:
        vals = _ints(row, "pair line")
        if len(vals) != 2:
            raise InputError("pair lines hold two integers")
        pairs.append((vals[0], vals[1]))
    cons = []
    for row in rows[2 + k :]:
        vals = _ints(row, "constraint line")
        if len(vals) != 4:
            raise InputError("constraint lines hold four integers")
        cons.append(Constraint(*vals))
    return DpspInstance(n, m, pairs, cons)


def format_dpsp(inst: DpspInstance) -> str:
    out = ["dpsp v1", f"{inst.sigma_len} {inst.sigma2_len} {inst.k} {len(inst.constraints)}"]
    out += [f"{s} {t}" for s, t in inst.pairs]
    out += [f"{c.kind} {c.a} {c.b} {c.w}" for c in inst.constraints]
    return "\n".join(out) + "\n"


def read_graph(path) -> GraphFile:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def read_demands(path) -> list[Pair]:
    return parse_demands(Path(path).read_text(encoding="utf-8"))


def read_dpsp(path) -> DpspInstance:
    return parse_dpsp(Path(path).read_text(encoding="utf-8"))


def read_routing(path) -> Routing:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return Routing.from_json(data)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"cannot read routing: {e}") from None


def dump_routing(R: Routing) -> str:
    return json.dumps(R.to_json(), indent=2, sort_keys=True) + "\n"
