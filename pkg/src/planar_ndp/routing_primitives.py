"""Path machinery: crossing tests on a circle, forest path decomposition,
r-split partitions of boundary demands, and monotone rerouting against
cycles."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotAForest, PreconditionViolated
from .planar_core import (
    EmbeddedPlanarGraph,
    cycle_edges,
    min_cycle,
)

Pair = tuple[int, int]


@dataclass
class PathSet:
    paths: list[list[int]]
    sources: frozenset[int] = field(default_factory=frozenset)
    sinks: frozenset[int] = field(default_factory=frozenset)
    internally_disjoint: bool = False

    def __len__(self) -> int:
        return len(self.paths)


# ---------------------------------------------------------------------------
# crossing on a circle


def _interleave(pos: dict[int, int], a: int, b: int, c: int, d: int) -> bool:
    lo, hi = sorted((pos[a], pos[b]))
    inside_c = lo < pos[c] < hi
    inside_d = lo < pos[d] < hi
    return inside_c != inside_d


def crosses_on_disc(p1: Pair, p2: Pair, boundary: Sequence[int]) -> bool:
    """True when the pairs share a terminal or interleave on the circle."""
    if set(p1) & set(p2):
        return True
    pos = {v: i for i, v in enumerate(boundary)}
    return _interleave(pos, p1[0], p1[1], p2[0], p2[1])


def is_non_crossing(pairs: Sequence[Pair], boundary: Sequence[int]) -> bool:
    pos = {v: i for i, v in enumerate(boundary)}
    seen: set[int] = set()
    for s, t in pairs:
        if s in seen or t in seen or s == t:
            return False
        seen |= {s, t}
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i + 1:]:
            if _interleave(pos, a, b, c, d):
                return False
    return True


# ---------------------------------------------------------------------------
# forest decomposition


def decompose_forest(parent: dict[int, int | None] | Sequence[int | None]) -> list[set[int]]:
    """Partition a forest of in-arborescences into classes of vertex-disjoint
    directed paths.

    ``parent[v]`` is the head of the single arc leaving ``v`` (``None`` for a
    root). Each round removes every vertex whose remaining subtree is a path,
    so the number of leaves at least halves per round and the number of
    classes is at most ``max(1, ceil(log2 n))``.
    """
    par = dict(parent) if isinstance(parent, dict) else dict(enumerate(parent))
    for v, p in par.items():
        if p is not None and p not in par:
            raise NotAForest(f"parent {p} of {v} is not a vertex")
        if p == v:
            raise NotAForest(f"self-loop at {v}")
    # cycle detection
    state: dict[int, int] = {}
    for v in par:
        path = []
        x = v
        while x is not None and state.get(x, 0) == 0:
            state[x] = 1
            path.append(x)
            x = par[x]
        if x is not None and state.get(x) == 1:
            raise NotAForest("the parent relation has a cycle")
        for y in path:
            state[y] = 2
    children: dict[int, set[int]] = {v: set() for v in par}
    for v, p in par.items():
        if p is not None:
            children[p].add(v)
    alive = set(par)
    classes: list[set[int]] = []
    while alive:
        # a vertex is peeled when its remaining subtree is a path
        is_path: dict[int, bool] = {}
        order = _postorder(alive, children, par)
        for v in order:
            ch = [c for c in children[v] if c in alive]
            is_path[v] = len(ch) == 0 or (len(ch) == 1 and is_path[ch[0]])
        cls = {v for v in alive if is_path[v]}
        classes.append(cls)
        alive -= cls
    return classes


def _postorder(alive: set[int], children: dict[int, set[int]], par: dict) -> list[int]:
    roots = [v for v in alive if par[v] is None or par[v] not in alive]
    out = []
    for r in sorted(roots):
        stack = [(r, False)]
        while stack:
            v, done = stack.pop()
            if done:
                out.append(v)
                continue
            stack.append((v, True))
            for c in sorted(children[v]):
                if c in alive:
                    stack.append((c, False))
    return out


def forest_class_paths(parent, cls: set[int]) -> list[list[int]]:
    """Directed paths (leaf to top) formed by one class of the decomposition."""
    par = dict(parent) if isinstance(parent, dict) else dict(enumerate(parent))
    heads = {par[v] for v in cls if par[v] in cls}
    paths = []
    for v in sorted(cls - heads):
        p = [v]
        while par[p[-1]] in cls:
            p.append(par[p[-1]])
        paths.append(p)
    return paths


# ---------------------------------------------------------------------------
# r-split partitions


@dataclass
class SplitWitness:
    """``groups[i]`` lists the pairs whose terminals sit in ``segments[2i]``
    and ``segments[2i+1]``; segments are runs of consecutive terminals of the
    circular order, listed in circular order."""

    groups: list[list[Pair]]
    segments: list[tuple[int, ...]]
    bucket: int = 0
    kind: str = ""

    @property
    def r(self) -> int:
        return len(self.groups)


def verify_split_witness(order: Sequence[int], pairs: Sequence[Pair], w: SplitWitness) -> bool:
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    if len(w.segments) != 2 * len(w.groups):
        return False
    if any(v not in pos for seg in w.segments for v in seg):
        return False
    segments = [tuple(pos[v] for v in seg) for seg in w.segments]
    used: set[int] = set()
    for seg in segments:
        if not seg:
            return False
        for a, b in zip(seg, seg[1:]):
            if b != (a + 1) % n:
                return False
        if used & set(seg) or len(set(seg)) != len(seg):
            return False
        used |= set(seg)
    starts = [seg[0] for seg in segments]
    descents = sum(1 for i in range(len(starts)) if starts[i] > starts[(i + 1) % len(starts)])
    if len(starts) > 1 and descents > 1:
        return False
    flat = [p for g in w.groups for p in g]
    if sorted(flat) != sorted(pairs):
        return False
    for i, g in enumerate(w.groups):
        a, b = set(segments[2 * i]), set(segments[2 * i + 1])
        for s, t in g:
            if not ((pos[s] in a and pos[t] in b) or (pos[s] in b and pos[t] in a)):
                return False
    return True


def r_split_partition(order: Sequence[int], M: Sequence[Pair]) -> list[tuple[list[Pair], SplitWitness]]:
    """Partition boundary demands into parts that are each r-split.

    ``order`` is the circular sequence of terminals (each in one pair). Pairs
    are bucketed by the number of terminals on their shorter side, markers
    are placed every ``2^(i-1)`` terminals, and each bucket splits by the
    marker segments holding its source and sink.
    """
    M = [tuple(p) for p in M]
    if not M:
        return []
    terms = [x for x in order if any(x in p for p in M)]
    n = len(terms)
    pos = {v: i for i, v in enumerate(terms)}
    if n != 2 * len(M) or len(pos) != n:
        raise PreconditionViolated("every terminal must belong to exactly one pair")
    oriented: dict[Pair, tuple[int, int, int]] = {}
    for p in M:
        a, b = pos[p[0]], pos[p[1]]
        fwd = (b - a) % n + 1
        if fwd <= n - fwd + 2:
            oriented[p] = (a, b, fwd - 1)
        else:
            oriented[p] = (b, a, n - fwd + 1)
    buckets: dict[int, list[Pair]] = {}
    for p, (_, _, delta) in oriented.items():
        i = delta.bit_length()  # 2^(i-1) <= delta < 2^i
        buckets.setdefault(i, []).append(p)
    out: list[tuple[list[Pair], SplitWitness]] = []
    for i in sorted(buckets):
        for part, wit in _split_bucket(buckets[i], oriented, n, 1 << (i - 1)):
            wit_full = SplitWitness(
                [list(g) for g in wit.groups],
                [tuple(terms[x] for x in seg) for seg in wit.segments],
                bucket=i,
                kind=wit.kind,
            )
            out.append((part, wit_full))
    return out


def _split_bucket(pairs, oriented, n, L):
    z = (n + L - 1) // L

    def seg_of(x):
        return x // L + 1

    def beta(j):
        lo = (j - 1) * L
        hi = min(j * L, n)
        return tuple(range(lo, hi))

    if z == 1:
        raise PreconditionViolated("bucket with a single marker segment cannot hold pairs")
    if z == 2:
        return [(list(pairs), SplitWitness([list(pairs)], [beta(1), beta(2)], kind="two-markers"))]
    classes: dict[str, list[Pair]] = {"n1": [], "n2": [], "n3": [], "n4": []}
    rest: list[tuple[int, int, Pair]] = []
    for p in pairs:
        a, b, _ = oriented[p]
        js, jt = seg_of(a), seg_of(b)
        gap = (jt - js) % z
        if js == z - 1 and jt == 1:
            classes["n1"].append(p)
        elif js == z and jt in (1, 2):
            classes["n2"].append(p)
        elif gap == 1 and js % 2 == 1:
            classes["n3"].append(p)
        elif gap == 1:
            classes["n4"].append(p)
        else:
            rest.append((js, jt, p))
    parts = []
    if classes["n1"]:
        parts.append((classes["n1"], SplitWitness([classes["n1"]], [beta(z - 1), beta(1)], kind="n1")))
    if classes["n2"]:
        parts.append((classes["n2"], SplitWitness([classes["n2"]], [beta(z), beta(1) + beta(2)], kind="n2")))
    for key in ("n3", "n4"):
        if classes[key]:
            items = [(seg_of(oriented[p][0]), seg_of(oriented[p][1]), p) for p in classes[key]]
            parts.append(_windows_part(items, beta, z, key))
    # pairs whose sink lies two segments past the source: colour the
    # windows so each colour class has pairwise disjoint windows
    colours: list[list[tuple[int, int, Pair]]] = []
    for js, jt, p in sorted(rest):
        win = _window(js, jt, z)
        for col in colours:
            if all(not (win & _window(a, b, z)) or (a, b) == (js, jt) for a, b, _ in col):
                col.append((js, jt, p))
                break
        else:
            colours.append([(js, jt, p)])
    for col in colours:
        parts.append(_windows_part(col, beta, z, "skip"))
    return parts


def _window(js: int, jt: int, z: int) -> set[int]:
    out = {js}
    j = js
    while j != jt:
        j = j % z + 1
        out.add(j)
    return out


def _windows_part(items, beta, z, kind):
    groups: dict[tuple[int, int], list[Pair]] = {}
    for js, jt, p in items:
        groups.setdefault((js, jt), []).append(p)
    keys = sorted(groups)
    segs = []
    for js, jt in keys:
        tail = []
        j = js
        while j != jt:
            j = j % z + 1
            tail += list(beta(j))
        segs += [beta(js), tuple(tail)]
    part = [p for k in keys for p in groups[k]]
    return part, SplitWitness([groups[k] for k in keys], segs, kind=kind)


# ---------------------------------------------------------------------------
# monotone rerouting


def is_monotone(path: Sequence[int], cycle: Sequence[int]) -> bool:
    """``path`` meets ``cycle`` in a (possibly empty) subpath."""
    on = set(cycle)
    idx = [i for i, v in enumerate(path) if v in on]
    if not idx:
        return True
    if idx[-1] - idx[0] + 1 != len(idx):
        return False
    ce = cycle_edges(cycle)
    return all(frozenset((path[i], path[i + 1])) in ce for i in idx[:-1])


def _region_of(G: EmbeddedPlanarGraph, ref) -> int:
    """A face standing for the side of a cycle that contains ``ref``
    (a vertex id or a ``("f", id)`` element)."""
    if isinstance(ref, tuple):
        return ref[1]
    return G.faces_at(ref)[0]


def _separates(G: EmbeddedPlanarGraph, cycle_e: set[frozenset[int]], ref_a, ref_b) -> bool:
    fa = _region_of(G, ref_a)
    fb = _region_of(G, ref_b)
    seen = {fa}
    queue = deque([fa])
    while queue:
        f = queue.popleft()
        if f == fb:
            return False
        for (a, b) in G.faces[f]:
            if frozenset((a, b)) in cycle_e:
                continue
            g = G.face_of_dart[(b, a)]
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return True


def _arc(cycle: Sequence[int], u: int, v: int, forward: bool) -> list[int]:
    m = len(cycle)
    i = cycle.index(u)
    out = [u]
    step = 1 if forward else -1
    while out[-1] != v:
        i = (i + step) % m
        out.append(cycle[i])
    return out


def _straighten(
    G: EmbeddedPlanarGraph,
    path: list[int],
    cycle: Sequence[int],
    src_ref,
    dst_ref,
) -> list[int]:
    on = set(cycle)
    ce = cycle_edges(cycle)
    idx = [i for i, v in enumerate(path) if v in on]
    if not idx:
        return list(path)
    shadow_edges: set[frozenset[int]] = set()
    for i, j in zip(idx, idx[1:]):
        u, v = path[i], path[j]
        if j == i + 1 and frozenset((u, v)) in ce:
            shadow_edges.add(frozenset((u, v)))
            continue
        bump = path[i:j + 1]
        arc1 = _arc(cycle, u, v, True)
        loop = {frozenset((a, b)) for a, b in zip(arc1, arc1[1:])} | {
            frozenset((a, b)) for a, b in zip(bump, bump[1:])
        }
        if _separates(G, loop, src_ref, dst_ref):
            arc = _arc(cycle, u, v, False)
        else:
            arc = arc1
        shadow_edges |= {frozenset((a, b)) for a, b in zip(arc, arc[1:])}
    u, v = path[idx[0]], path[idx[-1]]
    if u == v:
        mid = [u]
    else:
        mid = _path_in_edges(shadow_edges, u, v)
        if mid is None:
            raise PreconditionViolated("bump shadows do not join the first and last cycle vertex")
    return list(path[:idx[0]]) + mid + list(path[idx[-1] + 1:])


def _path_in_edges(edges: set[frozenset[int]], u: int, v: int) -> list[int] | None:
    adj: dict[int, list[int]] = {}
    for e in edges:
        a, b = tuple(e)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in sorted(adj.get(x, ())):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    if v not in prev:
        return None
    out = [v]
    while prev[out[-1]] is not None:
        out.append(prev[out[-1]])
    return out[::-1]


def reroute_monotone_cycle(
    G: EmbeddedPlanarGraph,
    C: Sequence[int],
    s: int,
    t: int,
    paths: Sequence[Sequence[int]],
    check: bool = True,
) -> PathSet:
    """Make internally disjoint ``s``-``t`` paths monotone with respect to
    ``C`` by replacing each path's stretch on ``C`` with the union of the
    shadows of its bumps.

    ``G`` supplies the embedding; the paths and ``C`` must be subgraphs of it.
    With ``check`` the preconditions (``C`` separates ``s`` from ``t`` and is
    the min-cycle of ``s`` in ``C`` plus the paths, drawn with ``t`` on the
    outer face) are verified first.
    """
    C = list(C)
    paths = [list(p) for p in paths]
    for p in paths:
        if p[0] != s or p[-1] != t:
            raise PreconditionViolated("every path must run from s to t")
    if s in C or t in C:
        raise PreconditionViolated("s and t must lie off the cycle")
    if check:
        edges = cycle_edges(C) | {frozenset(e) for p in paths for e in zip(p, p[1:])}
        H = G.restrict_edges(tuple(e) for e in edges)
        outer = H.faces_at(t)[0]
        try:
            mc = min_cycle(H, outer, s)
        except Exception as e:
            raise PreconditionViolated(f"no min-cycle around s: {e}") from None
        if set(mc) != set(C):
            raise PreconditionViolated("C is not the min-cycle of s")
    out = [_straighten(G, p, C, s, t) for p in paths]
    return PathSet(out, frozenset({s}), frozenset({t}), internally_disjoint=True)


def reroute_monotone_family(
    G: EmbeddedPlanarGraph,
    core: Sequence[int],
    cycles: Sequence[Sequence[int]],
    paths: Sequence[Sequence[int]],
    target_ref,
    core_ref: int | None = None,
) -> PathSet:
    """Make disjoint paths from ``core`` to a connected target monotone with
    respect to every cycle of a tight concentric family.

    ``target_ref`` is a vertex of the target subgraph or a ``("f", id)`` face
    lying beyond the last cycle. At step ``h`` each path keeps its prefix up
    to its last vertex on ``Z_{h-1}`` (``Z_0`` is the core) and the suffix is
    straightened against ``Z_h`` as if ``D(Z_{h-1})`` were contracted.
    """
    paths = [list(p) for p in paths]
    A = frozenset(p[0] for p in paths)
    B = frozenset(p[-1] for p in paths)
    prev = list(core)
    for Z in cycles:
        Z = list(Z)
        new = []
        prev_set = set(prev)
        for p in paths:
            idx = [i for i, v in enumerate(p) if v in prev_set]
            if not idx:
                raise PreconditionViolated("path does not meet the previous cycle")
            i = idx[-1]
            head, tail = p[:i], p[i:]
            ref = tail[0] if core_ref is None or prev is not core else core_ref
            new.append(head + _straighten(G, tail, Z, ref, target_ref))
        paths = new
        prev = Z
    for p in paths:
        for Z in cycles:
            if not is_monotone(p, Z):
                raise PreconditionViolated("rerouted path is not monotone; cycles are not tight")
    return PathSet(paths, A, B)
