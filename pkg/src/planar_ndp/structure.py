"""Enclosures, shells, terminal clusters and the well-linked decomposition.

Disc boundaries are closed normal curves with corners. Consecutive elements
``x, f, y`` of such a curve form a *chord* of face ``f`` that runs from the
corner of ``f`` at ``x`` to its corner at ``y``; a corner is named by the
face dart entering its vertex. Boundaries are oriented so that the part of a
face walk running forward from a chord's first corner to its second corner
lies outside the disc. A disc with a single boundary vertex is a point.

Which side of the boundary each dart segment lies on is worked out locally:
walking forward along a face from a segment, the first corner carrying a
chord decides, and among several chords at that corner the one bending back
most tightly is the one met first. Segments of faces that carry no chord
take the class of the other side of their edges.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import (
    BadParams,
    CannotExtend,
    FaceTooClose,
    InternalAssertion,
    NoEnclosingCycle,
    NonPlanarRotation,
    NotWellLinkedDetected,
    PreconditionViolated,
    TooManyTerminals,
)
from .planar_core import (
    CombinatorialDisc,
    Dart,
    EmbeddedPlanarGraph,
    NormalCurve,
    disc_faces,
    disc_vertices,
    enclosing_cycle,
    menger_vertex_disjoint,
    min_separating_normal_curve,
    outer_face_id,
    radial_distances,
)

Pair = tuple[int, int]
Chord = tuple[int, Dart, Dart]

MAX_EXACT_TERMINALS = 16


def log2_ceil(x: int) -> int:
    """``max(1, ceil(log2 x))``; every logarithm in the constants uses this."""
    return max(1, math.ceil(math.log2(x))) if x > 1 else 1


# ---------------------------------------------------------------------------
# curves as chord lists


class _Corners:
    """Position of every dart inside its face walk."""

    def __init__(self, G: EmbeddedPlanarGraph):
        self.G = G
        self.pos: dict[Dart, int] = {}
        for walk in G.faces:
            for i, d in enumerate(walk):
                self.pos[d] = i

    def at(self, f: int, x: int) -> list[Dart]:
        return [d for d in self.G.faces[f] if d[1] == x]


def chords(curve: NormalCurve) -> list[Chord]:
    """``(face, first corner, second corner)`` for every face element."""
    els, cs = curve.elements, curve.corners
    if is_point(curve):
        return []
    if cs is None or len(cs) != len(els):
        raise PreconditionViolated("boundary curves need corners")
    out = []
    for i, (kind, f) in enumerate(els):
        if kind == "f":
            out.append((f, cs[i - 1], cs[i]))
    if els[0][0] != "v":
        out = out[-1:] + out[:-1]
    return out


def curve_from_chords(ch: Sequence[Chord]) -> NormalCurve:
    els: list = []
    cs: list = []
    for f, a, b in ch:
        els += [("v", a[1]), ("f", f)]
        cs += [a, b]
    return NormalCurve(tuple(els), closed=True, corners=tuple(cs))


def point_curve(v: int) -> NormalCurve:
    return NormalCurve((("v", v),), closed=True, corners=())


def is_point(curve: NormalCurve) -> bool:
    """A single vertex with no face: the boundary of a one-vertex disc.

    A curve of length one that loops through a face at a cut vertex is not a
    point; it carries one chord whose two corners lie at that vertex.
    """
    return len(curve.elements) == 1


def reverse_chords(ch: Sequence[Chord]) -> list[Chord]:
    return [(f, b, a) for f, a, b in reversed(ch)]


def _between(c: int, a: int, b: int, L: int) -> bool:
    """``c`` lies strictly inside the forward cyclic interval from ``a`` to ``b``."""
    return 0 < (c - a) % L < (b - a) % L


def _check_chords(G: EmbeddedPlanarGraph, idx: _Corners, ch: Sequence[Chord]) -> None:
    n = len(ch)
    verts = [a[1] for _, a, _ in ch]
    if len(set(verts)) != n:
        raise PreconditionViolated("boundary curve repeats a vertex")
    for i, (f, a, b) in enumerate(ch):
        if a not in idx.pos or b not in idx.pos or G.face_of_dart[a] != f or G.face_of_dart[b] != f:
            raise PreconditionViolated(f"chord {i} uses corners outside face {f}")
        if b[1] != ch[(i + 1) % n][1][1]:
            raise PreconditionViolated(f"chord {i} does not end where the next begins")
    by_face: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for f, a, b in ch:
        by_face[f].append((idx.pos[a], idx.pos[b]))
    for f, lst in by_face.items():
        L = len(G.faces[f])
        for (a1, b1), (a2, b2) in itertools.combinations(lst, 2):
            if len({a1, b1, a2, b2}) < 4:
                continue
            if _between(a2, a1, b1, L) != _between(b2, a1, b1, L):
                raise PreconditionViolated(f"boundary chords cross inside face {f}")


def classify_segments(G: EmbeddedPlanarGraph, ch: Sequence[Chord], idx: _Corners | None = None) -> dict[Dart, bool]:
    """Inside/outside class of every dart segment for a chord boundary.

    Raises :class:`PreconditionViolated` when the two sides of an edge get
    different classes, which happens exactly when the chords do not bound a
    region in the orientation described in the module notes.
    """
    idx = idx or _Corners(G)
    attach: dict[int, dict[int, list[tuple[int, bool]]]] = defaultdict(lambda: defaultdict(list))
    for f, a, b in ch:
        pa, pb = idx.pos[a], idx.pos[b]
        attach[f][pb].append((pa, True))   # chord ends here
        attach[f][pa].append((pb, False))  # chord starts here
    cls: dict[Dart, bool] = {}
    for f, at in attach.items():
        walk = G.faces[f]
        L = len(walk)
        for c, lst in at.items():
            # chord met first from the segment just before corner c
            other, incoming = min(lst, key=lambda e: ((c - e[0]) % L) or L)
            k = c
            while True:
                cls[walk[k]] = not incoming
                k = (k - 1) % L
                if k in at:
                    break
    queue = deque(cls)
    while queue:
        d = queue.popleft()
        val = cls[d]
        tw = (d[1], d[0])
        got = cls.get(tw)
        if got is None:
            cls[tw] = val
            queue.append(tw)
        elif got != val:
            raise PreconditionViolated("boundary does not close off a consistent region")
        f = G.face_of_dart[d]
        if f not in attach:
            for e in G.faces[f]:
                if e not in cls:
                    cls[e] = val
                    queue.append(e)
                elif cls[e] != val:
                    raise PreconditionViolated("boundary does not close off a consistent region")
    return cls


def disc_from_curve(G: EmbeddedPlanarGraph, curve: NormalCurve, idx: _Corners | None = None) -> CombinatorialDisc:
    """The disc bounded by an oriented closed curve with corners."""
    if is_point(curve):
        v = curve.vertices[0]
        return CombinatorialDisc(curve, frozenset({v}), frozenset())
    idx = idx or _Corners(G)
    ch = chords(curve)
    _check_chords(G, idx, ch)
    cls = classify_segments(G, ch, idx)
    on = set(curve.vertices)
    inside = set(on)
    for v in range(G.vertex_count):
        if v in on or not G.rotations[v]:
            continue
        marks = {cls.get((u, v)) for u in G.rotations[v]}
        if marks == {True}:
            inside.add(v)
        elif len(marks) > 1:
            raise PreconditionViolated(f"vertex {v} off the boundary lies on both sides")
    crossed = {f for f, _, _ in ch}
    faces = frozenset(
        f for f, walk in enumerate(G.faces) if f not in crossed and cls.get(walk[0]) is True
    )
    return CombinatorialDisc(curve, frozenset(inside), faces)


def point_disc(v: int) -> CombinatorialDisc:
    return CombinatorialDisc(point_curve(v), frozenset({v}), frozenset())


def _connected(G: EmbeddedPlanarGraph, S: frozenset[int] | set[int]) -> bool:
    if not S:
        return False
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in G.rotations[x]:
            if y in S and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(S)


# ---------------------------------------------------------------------------
# growing discs


def _lens(G: EmbeddedPlanarGraph, v: int, u: int) -> list[Chord]:
    """Boundary through ``u`` and ``v`` hugging the edge between them."""
    fa = G.face_of_dart[(v, u)]
    walk = G.faces[fa]
    i = walk.index((v, u))
    before_v = walk[i - 1]
    fb = G.face_of_dart[(u, v)]
    walk = G.faces[fb]
    j = walk.index((u, v))
    before_u = walk[j - 1]
    return [(fa, (v, u), before_v), (fb, (u, v), before_u)]


def _accept(G, idx, ch, want: frozenset[int]) -> CombinatorialDisc | None:
    try:
        _check_chords(G, idx, ch)
        D = disc_from_curve(G, curve_from_chords(ch), idx)
    except PreconditionViolated:
        return None
    return D if D.inside_vertices == want else None


def _local_moves(G, idx, ch, VD):
    """Split a chord at a forward-arc corner whose vertex is new."""
    for i, (f, a, b) in enumerate(ch):
        walk = G.faces[f]
        L = len(walk)
        pa, pb = idx.pos[a], idx.pos[b]
        p = (pa + 1) % L
        while p != pb:
            v = walk[p][1]
            if v not in VD and any(y in VD for y in G.rotations[v]):
                yield v, list(ch[:i]) + [(f, a, walk[p]), (f, walk[p], b)] + list(ch[i + 1:])
            p = (p + 1) % L


def _rerouting_moves(G, idx, ch, VD):
    """Replace one chord ``x -> y`` by ``x -> v -> y`` through any faces."""
    for i, (f, a, b) in enumerate(ch):
        x, y = a[1], b[1]
        cand = sorted({v for z in (x, y) for v in G.rotations[z] if v not in VD})
        for v in cand:
            faces_v = sorted(set(G.faces_at(v)))
            for fa in faces_v:
                for fb in faces_v:
                    for ca in idx.at(fa, x):
                        for cv in idx.at(fa, v):
                            for cv2 in idx.at(fb, v):
                                for cb in idx.at(fb, y):
                                    new = list(ch[:i]) + [(fa, ca, cv), (fb, cv2, cb)] + list(ch[i + 1:])
                                    # keep the neighbours' corners at x and y
                                    yield v, new


def disc_extensions(G: EmbeddedPlanarGraph, D: CombinatorialDisc):
    """Every disc obtained from ``D`` by adding one vertex to its boundary.

    Chords next to the new vertex are split first; after that any single
    chord ``x -> y`` may be replaced by ``x -> v -> y`` through other faces.
    Each candidate is re-classified and kept only when it encloses exactly
    one more vertex with a boundary one longer. Duplicates are skipped.
    """
    VD = D.inside_vertices
    n = G.vertex_count
    if not 1 <= len(VD) < n - 1:
        raise CannotExtend(f"disc has {len(VD)} of {n} vertices")
    if not _connected(G, VD):
        raise CannotExtend("disc vertices do not induce a connected graph")
    ell = D.boundary.length
    idx = _Corners(G)
    if is_point(D.boundary):
        v = D.boundary.vertices[0]
        for u in sorted(G.rotations[v]):
            got = _accept(G, idx, _lens(G, v, u), frozenset({v, u}))
            if got is None:
                raise InternalAssertion("lens around an edge failed to close")
            yield got
        return
    if set(D.boundary.vertices) != VD - D.interior_vertices:
        raise CannotExtend("boundary curve does not match the disc")
    ch = chords(D.boundary)
    seen = set()
    for gen in (_local_moves, _rerouting_moves):
        for v, new in gen(G, idx, ch, VD):
            key = tuple(new)
            if key in seen:
                continue
            seen.add(key)
            got = _accept(G, idx, new, VD | {v})
            if got is not None and got.boundary.length == ell + 1:
                yield got


def extend_disc_by_one(G: EmbeddedPlanarGraph, D: CombinatorialDisc) -> CombinatorialDisc:
    """A disc with exactly one more vertex whose boundary is one longer."""
    for got in disc_extensions(G, D):
        return got
    raise CannotExtend("no vertex can be added next to the boundary")


GROW_BUDGET = 5000


def grow_disc(G: EmbeddedPlanarGraph, D: CombinatorialDisc, length: int, budget: int = GROW_BUDGET) -> CombinatorialDisc:
    """Extend ``D`` one vertex at a time until its boundary has ``length``
    vertices.

    A greedy sequence of extensions can wedge a boundary vertex between
    outside faces that no chord reaches, after which no single-vertex step
    exists. The search therefore backtracks over the extension choices,
    visiting at most ``budget`` discs.
    """
    if D.boundary.length >= length:
        return D
    visited = 0
    stack = [disc_extensions(G, D)]
    while stack:
        try:
            nxt = next(stack[-1])
        except StopIteration:
            stack.pop()
            continue
        except CannotExtend:
            stack.pop()
            continue
        visited += 1
        if nxt.boundary.length >= length:
            return nxt
        if visited > budget:
            break
        stack.append(disc_extensions(G, nxt))
    raise CannotExtend(f"no disc with a boundary of length {length} grows from this one")


# ---------------------------------------------------------------------------
# separating two discs


def _apex_rotation(G: EmbeddedPlanarGraph, D: CombinatorialDisc, cls: dict[Dart, bool], rots, apex: int):
    """Detach the inside of ``D`` and hang ``apex`` off its boundary."""
    order = list(D.boundary.vertices)
    ch = chords(D.boundary)
    entry = {b[1]: b for _, _, b in ch}
    for x in order:
        r = list(G.rotations[x])
        inside = [cls.get((x, y), False) for y in r]
        if not any(inside):
            if r:
                p = entry[x][0] if x in entry else r[0]
                i = r.index(p)
                rots[x] = r[: i + 1] + [apex] + r[i + 1:]
            else:
                rots[x] = [apex]
        elif all(inside):
            rots[x] = [apex]
        else:
            s = next(i for i in range(len(r)) if inside[i] and not inside[i - 1])
            seq = r[s:] + r[:s]
            rots[x] = [apex] + [y for y, ins in zip(seq, inside[s:] + inside[:s]) if not ins]
    return order


def _separating_discs(G: EmbeddedPlanarGraph, D1: CombinatorialDisc, D2: CombinatorialDisc, kappa: int):
    """Discs on both sides of a shortest closed curve separating two
    vertex-disjoint discs; the first contains ``D1``, the second ``D2``.

    The curve may pass through boundary vertices of either disc but avoids
    their interiors. It is found in an auxiliary graph where each disc is
    emptied and replaced by an apex joined to its boundary, then carried back
    to corners of ``G``.
    """
    idx = _Corners(G)
    n = G.vertex_count
    a, b = n, n + 1
    classes = []
    for D in (D1, D2):
        classes.append({} if is_point(D.boundary) else classify_segments(G, chords(D.boundary), idx))
    gone = D1.interior_vertices | D2.interior_vertices
    rots = [[] if v in gone else [u for u in G.rotations[v] if u not in gone] for v in range(n)]
    # drop edges lying inside either disc
    for cls in classes:
        for (x, y), ins in cls.items():
            if ins and y in rots[x]:
                rots[x].remove(y)
    base = [list(r) for r in rots]
    H = None
    for flip1, flip2 in itertools.product((False, True), repeat=2):
        rr = [list(r) for r in base] + [[], []]
        o1 = _apex_rotation(G, D1, classes[0], rr, a)
        o2 = _apex_rotation(G, D2, classes[1], rr, b)
        rr[a] = o1[::-1] if flip1 else o1
        rr[b] = o2[::-1] if flip2 else o2
        try:
            H = EmbeddedPlanarGraph(n + 2, rr, check=True)
            break
        except NonPlanarRotation:
            continue
    if H is None:
        raise InternalAssertion("could not embed the disc apices")
    curve = min_separating_normal_curve(H, a, b)
    if curve.length != kappa:
        raise InternalAssertion(f"separating curve has length {curve.length}, cut has {kappa}")

    def to_g(c: Dart) -> Dart:
        q, x = c
        if q < n:
            return c
        nxt = H.next_ccw(x, q)
        if nxt >= n:
            raise InternalAssertion(f"boundary vertex {x} has no edge outside its disc")
        return (G.prev_ccw(x, nxt), x)

    gch = []
    for _, ca, cb in chords(curve):
        ga, gb = to_g(ca), to_g(cb)
        f = G.face_of_dart[ga]
        if G.face_of_dart[gb] != f:
            raise InternalAssertion("separating chord spans two faces of G")
        gch.append((f, ga, gb))
    sides = []
    for cand in (gch, reverse_chords(gch)):
        sides.append(disc_from_curve(G, curve_from_chords(cand), idx))
    if not D1.inside_vertices <= sides[0].inside_vertices:
        sides.reverse()
    A, B = sides
    if not (D1.inside_vertices <= A.inside_vertices and D2.inside_vertices <= B.inside_vertices):
        raise InternalAssertion("separating curve does not split the two discs")
    return A, B


# ---------------------------------------------------------------------------
# enclosures


@dataclass(frozen=True)
class Enclosure:
    terminal: int
    disc: CombinatorialDisc

    @property
    def boundary(self) -> tuple[int, ...]:
        return self.disc.boundary.vertices

    @property
    def vertices(self) -> frozenset[int]:
        return self.disc.inside_vertices

    @property
    def length(self) -> int:
        return self.disc.boundary.length


def _check_terminals(G: EmbeddedPlanarGraph, terminals: Iterable[int]) -> list[int]:
    terms = sorted(set(int(t) for t in terminals))
    for t in terms:
        if not 0 <= t < G.vertex_count:
            raise PreconditionViolated(f"terminal {t} out of range")
        if G.degree(t) != 1:
            raise PreconditionViolated(f"terminal {t} has degree {G.degree(t)}, expected 1")
    return terms


def _normalize(discs: dict[int, CombinatorialDisc]) -> None:
    """Make nested discs equal: a disc inside another is replaced by it."""
    changed = True
    while changed:
        changed = False
        for s, s2 in itertools.permutations(sorted(discs), 2):
            d, d2 = discs[s], discs[s2]
            if d is d2:
                continue
            if d.inside_vertices < d2.inside_vertices or (d.inside_vertices == d2.inside_vertices and s2 < s):
                discs[s] = d2
                changed = True


def _boundary_linkage(G: EmbeddedPlanarGraph, d1: CombinatorialDisc, d2: CombinatorialDisc):
    return menger_vertex_disjoint(G, d1.boundary.vertices, d2.boundary.vertices)


def build_enclosures(
    G: EmbeddedPlanarGraph,
    terminals: Iterable[int],
    delta: int,
    alpha_wl: float,
) -> dict[int, Enclosure]:
    """An enclosure of boundary length ``delta`` around every terminal.

    Discs start as boundary-length-``delta`` growths of the terminals. While
    two vertex-disjoint discs are joined by fewer than ``delta`` disjoint
    boundary-to-boundary paths, the shortest curve separating them is taken,
    a side with at most half the terminals strictly inside replaces the disc
    it contains and is regrown to length ``delta``; when both sides qualify
    the one with fewer vertices is taken, leaving room to grow. Bad pairs are handled in
    lexicographic order.
    """
    if delta < 1:
        raise BadParams("delta must be at least 1")
    if not alpha_wl > 0:
        raise BadParams("alpha_wl must be positive")
    terms = _check_terminals(G, terminals)
    discs: dict[int, CombinatorialDisc] = {}
    for t in terms:
        try:
            discs[t] = grow_disc(G, point_disc(t), delta)
        except CannotExtend as exc:
            raise NotWellLinkedDetected(f"terminal {t} cannot be enclosed: {exc}", certificate=({t}, set())) from exc
    _normalize(discs)
    limit = len(terms) * G.vertex_count
    steps = 0
    tset = set(terms)
    while True:
        bad = None
        for t, t2 in itertools.combinations(terms, 2):
            d1, d2 = discs[t], discs[t2]
            if d1.inside_vertices & d2.inside_vertices:
                continue
            paths, cut = _boundary_linkage(G, d1, d2)
            if len(paths) < delta:
                bad = (t, t2, len(paths), cut)
                break
        if bad is None:
            break
        t, t2, kappa, cut = bad
        cert = (set(discs[t].boundary.vertices), set(discs[t2].boundary.vertices))
        steps += 1
        if steps > limit:
            raise NotWellLinkedDetected("enclosure growth did not settle", certificate=cert)
        if kappa == 0:
            raise NotWellLinkedDetected(f"terminals {t} and {t2} are disconnected", certificate=cert)
        A, B = _separating_discs(G, discs[t], discs[t2], kappa)
        light = [
            (len(D.inside_vertices), i, owner, D)
            for i, (owner, D) in enumerate(((t, A), (t2, B)))
            if 2 * len(D.interior_vertices & tset) <= len(tset)
        ]
        _, _, owner, D = min(light, key=lambda e: e[:2])
        try:
            D = grow_disc(G, D, delta)
        except CannotExtend as exc:
            raise NotWellLinkedDetected(f"light side around {owner} cannot be regrown", certificate=cert) from exc
        discs[owner] = D
        _normalize(discs)
    out = {t: Enclosure(t, discs[t]) for t in terms}
    cap = 4 * delta / alpha_wl
    for t, e in out.items():
        if len(e.vertices & tset) > cap:
            raise NotWellLinkedDetected(
                f"enclosure of {t} holds {len(e.vertices & tset)} terminals", certificate=(set(e.vertices & tset), set())
            )
    return out


def check_enclosures(
    G: EmbeddedPlanarGraph, enclosures: Mapping[int, Enclosure], delta: int, alpha_wl: float
) -> dict[str, bool]:
    """Machine check of the enclosure invariants and the two pairwise
    conditions (nested discs are equal; disjoint discs are ``delta``-linked)."""
    tset = set(enclosures)
    res = {"length": True, "terminal_load": True, "connected": True, "contains_terminal": True,
           "nesting": True, "linkage": True, "curve": True}
    idx = _Corners(G)
    for t, e in enclosures.items():
        res["length"] &= e.length == delta
        res["terminal_load"] &= len(e.vertices & tset) <= 4 * delta / alpha_wl
        res["connected"] &= _connected(G, e.vertices)
        res["contains_terminal"] &= t in e.vertices
        if not is_point(e.disc.boundary):
            try:
                res["curve"] &= disc_from_curve(G, e.disc.boundary, idx).inside_vertices == e.vertices
            except PreconditionViolated:
                res["curve"] = False
    for t, t2 in itertools.combinations(sorted(enclosures), 2):
        v1, v2 = enclosures[t].vertices, enclosures[t2].vertices
        if v1 <= v2 or v2 <= v1:
            res["nesting"] &= v1 == v2 and enclosures[t].boundary == enclosures[t2].boundary
        elif not v1 & v2:
            paths, _ = _boundary_linkage(G, enclosures[t].disc, enclosures[t2].disc)
            res["linkage"] &= len(paths) >= delta
    return res


# ---------------------------------------------------------------------------
# distances and clusters


def terminal_distance(G: EmbeddedPlanarGraph, enclosures: Mapping[int, Enclosure], t: int, t2: int) -> int:
    """Length of a shortest normal curve from ``V(C_t)`` to ``V(C_t2)``.

    By convention the distance is 0 when ``t == t2`` and 1 when the two
    enclosures share a vertex. Unreachable pairs get ``G.vertex_count + 1``.
    """
    if t == t2:
        return 0
    e1, e2 = enclosures[t], enclosures[t2]
    if e1.vertices & e2.vertices:
        return 1
    dist = radial_distances(G, [("v", x) for x in e1.boundary])
    return min((dist.get(("v", y), G.vertex_count + 1) for y in e2.boundary))


def terminal_distances(G: EmbeddedPlanarGraph, enclosures: Mapping[int, Enclosure]) -> dict[tuple[int, int], int]:
    terms = sorted(enclosures)
    out = {}
    for t in terms:
        dist = radial_distances(G, [("v", x) for x in enclosures[t].boundary])
        for t2 in terms:
            if t == t2:
                out[(t, t2)] = 0
            elif enclosures[t].vertices & enclosures[t2].vertices:
                out[(t, t2)] = 1
            else:
                out[(t, t2)] = min(dist.get(("v", y), G.vertex_count + 1) for y in enclosures[t2].boundary)
    return out


def cluster_levels(n: int) -> int:
    """Number of balls grown around a cluster centre: ``ceil(log_{10/9} n) + 1``."""
    return math.ceil(math.log(max(n, 2)) / math.log(10 / 9)) + 1


def default_cluster_radius(n: int, delta: int) -> int:
    """Smallest ``delta0`` for which the intra-cluster bound is guaranteed."""
    return 16 * delta * cluster_levels(n) + math.ceil(delta / 2)


def cluster_terminals(
    G: EmbeddedPlanarGraph,
    enclosures: Mapping[int, Enclosure],
    delta: int,
    delta0: int | None = None,
    distances: Mapping[tuple[int, int], int] | None = None,
) -> list[frozenset[int]]:
    """Clusters of terminals by ball growing.

    Around the smallest remaining terminal, balls of radius ``8 * delta * i``
    grow until one adds at most a ninth of the previous ball; that previous
    ball becomes a cluster and the larger ball is discarded.
    """
    if delta < 1:
        raise BadParams("delta must be at least 1")
    n = G.vertex_count
    need = default_cluster_radius(n, delta)
    if delta0 is None:
        delta0 = need
    elif delta0 < need:
        raise BadParams(f"delta0 must be at least {need} for {n} vertices and delta {delta}")
    d = distances if distances is not None else terminal_distances(G, enclosures)
    levels = cluster_levels(n)
    left = set(enclosures)
    out = []
    while left:
        c = min(left)
        balls = [None] + [{t for t in left if d[(c, t)] <= 8 * delta * i} for i in range(1, levels + 1)]
        for i in range(2, levels + 1):
            if 9 * len(balls[i] - balls[i - 1]) <= len(balls[i - 1]):
                break
        else:
            raise InternalAssertion("no small level among the grown balls")
        out.append(frozenset(balls[i - 1]))
        left -= balls[i]
    triple = check_clusters(d, out, set(enclosures), delta, delta0)
    if not all(triple.values()):
        raise InternalAssertion(f"cluster guarantees failed: {triple}")
    return out


def check_clusters(
    distances: Mapping[tuple[int, int], int],
    clusters: Sequence[frozenset[int]],
    terminals: set[int],
    delta: int,
    delta0: int,
) -> dict[str, bool]:
    intra = all(distances[(a, b)] <= delta0 for X in clusters for a in X for b in X)
    inter = all(
        distances[(a, b)] >= 5 * delta
        for X, Y in itertools.combinations(clusters, 2)
        for a in X
        for b in Y
    )
    covered = sum(len(X) for X in clusters)
    return {"intra": intra, "inter": inter, "coverage": 10 * covered >= 9 * len(terminals)}


# ---------------------------------------------------------------------------
# shells


@dataclass(frozen=True)
class Shell:
    terminal: int
    outer_face_choice: Dart
    cycles: tuple[tuple[int, ...], ...]


def build_shell(G: EmbeddedPlanarGraph, enclosure: Enclosure, outer: Dart, r: int) -> Shell:
    """Tight concentric cycles ``Z_1..Z_r`` around ``C_t`` with the face of
    ``outer`` drawn as the outer face."""
    if r < 1:
        raise BadParams("shell depth must be at least 1")
    of = outer_face_id(G, outer)
    dist = radial_distances(G, [("v", x) for x in enclosure.boundary])
    for v in sorted(set(G.face_vertices(of))):
        dv = dist.get(("v", v))
        gap = G.vertex_count if dv is None else dv - 1
        if v in enclosure.vertices or gap < r + 1:
            raise FaceTooClose(v, 0 if v in enclosure.vertices else gap)
    disc = enclosure.vertices
    cycles = []
    for h in range(1, r + 1):
        try:
            z = enclosing_cycle(G, of, disc)
        except NoEnclosingCycle as exc:
            raise InternalAssertion(f"no enclosing cycle at depth {h}") from exc
        cycles.append(z)
        disc = disc_vertices(G, z, of)
    return Shell(enclosure.terminal, tuple(outer), tuple(cycles))


def check_shell(G: EmbeddedPlanarGraph, enclosure: Enclosure, shell: Shell) -> dict[str, bool]:
    """Shell properties: ``J1`` nested discs, ``J2`` tightness, ``J3`` short
    curves to the previous cycle and to ``C_t``, ``J4`` connected discs."""
    of = outer_face_id(G, shell.outer_face_choice)
    res = {"J1": True, "J2": True, "J3": True, "J4": True}
    prev_disc = enclosure.vertices
    prev_ring = set(enclosure.boundary)
    ct = set(enclosure.boundary)
    for h, z in enumerate(shell.cycles, start=1):
        zs = set(z)
        disc = disc_vertices(G, z, of)
        faces = disc_faces(G, z, of)
        res["J1"] &= len(zs) == len(z) and prev_disc < disc and not zs & prev_disc
        res["J2"] &= tuple(z) == enclosing_cycle(G, of, prev_disc)
        res["J4"] &= _connected(G, disc)
        outside = [("v", x) for x in range(G.vertex_count) if x not in disc]
        outside += [("f", f) for f in range(G.face_count) if f not in faces]
        for v in z:
            shared = any(y in prev_ring for f in G.faces_at(v) if f in faces for y in G.face_vertices(f))
            blocked = outside + [("v", x) for x in zs if x != v]
            dist = radial_distances(G, [("v", v)], blocked)
            reach = min((dist.get(("v", x), G.vertex_count + 1) for x in ct))
            res["J3"] &= shared and reach <= h + 1
        prev_disc, prev_ring = disc, zs
    return res


# ---------------------------------------------------------------------------
# flows, sparsest cuts and well-linkedness


class _FlowNet:
    """Vertex-capacitated max flow between vertex sets via scipy."""

    def __init__(self, G: EmbeddedPlanarGraph, removed: Iterable[int] = ()):
        n = G.vertex_count
        gone = set(removed)
        self.n = n
        self.big = n + 1
        rows, cols, caps = [], [], []
        for v in range(n):
            if v in gone:
                continue
            rows.append(2 * v)
            cols.append(2 * v + 1)
            caps.append(1)
            for u in G.rotations[v]:
                if u not in gone:
                    rows.append(2 * v + 1)
                    cols.append(2 * u)
                    caps.append(self.big)
        self.gone = gone
        self.base = (rows, cols, caps)

    def value(self, A: Iterable[int], B: Iterable[int]) -> int:
        n = self.n
        src, snk = 2 * n, 2 * n + 1
        rows, cols, caps = (list(x) for x in self.base)
        for a in set(A) - self.gone:
            rows.append(src)
            cols.append(2 * a)
            caps.append(self.big)
        for b in set(B) - self.gone:
            rows.append(2 * b + 1)
            cols.append(snk)
            caps.append(self.big)
        m = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(2 * n + 2, 2 * n + 2))
        return int(maximum_flow(m, src, snk).flow_value)


def cut_sparsity(terminals: set[int], A: set[int], C: set[int], B: set[int]):
    from fractions import Fraction

    den = min(len(A & terminals), len(B & terminals)) + len(C & terminals)
    if den == 0:
        raise PreconditionViolated("cut has no terminal on one of its sides")
    return Fraction(len(C), den)


def _is_cut(G: EmbeddedPlanarGraph, A: set[int], C: set[int], B: set[int]) -> bool:
    return all(u not in B for a in A for u in G.rotations[a])


def _check_cut_terminals(G: EmbeddedPlanarGraph, terminals: Iterable[int]) -> list[int]:
    terms = sorted(set(int(t) for t in terminals))
    if len(terms) > MAX_EXACT_TERMINALS:
        raise TooManyTerminals(f"{len(terms)} terminals exceed the limit of {MAX_EXACT_TERMINALS}")
    tset = set(terms)
    for t in terms:
        if G.degree(t) != 1:
            raise PreconditionViolated(f"terminal {t} has degree {G.degree(t)}, expected 1")
        if tset & set(G.rotations[t]):
            raise PreconditionViolated(f"terminal {t} is adjacent to another terminal")
    return terms


def evacuate_terminals(G: EmbeddedPlanarGraph, terminals: Iterable[int], A, C, B):
    """Move terminals out of the separator of a cut of sparsity at most 1.

    A terminal in ``C`` joins the side with fewer terminals (on a tie, the
    side of its neighbour) and its neighbour takes its place in ``C``, so the
    separator never grows and the sparsity never rises.
    """
    tset = set(terminals)
    A, C, B = set(A), set(C), set(B)
    while C & tset:
        t = min(C & tset)
        vt = G.rotations[t][0]
        na, nb = len(A & tset), len(B & tset)
        C.discard(t)
        if na < nb or (na == nb and vt in A):
            A.add(t)
            if vt not in C and na < nb:
                A.discard(vt)
                B.discard(vt)
                C.add(vt)
        else:
            B.add(t)
            if vt not in C and na != nb:
                A.discard(vt)
                B.discard(vt)
                C.add(vt)
    return A, C, B


def sparsest_cut_exact(G: EmbeddedPlanarGraph, terminals: Iterable[int]):
    """Exact sparsest vertex cut ``(A, C, B, sparsity)`` with ``C`` free of
    terminals.

    Every split of the terminals into two non-empty groups is tried with a
    minimum vertex cut between the groups' neighbours that avoids terminals.
    """
    terms = _check_cut_terminals(G, terminals)
    if len(terms) < 3:
        raise PreconditionViolated("sparsest cut needs at least three terminals")
    tset = set(terms)
    nbr = {t: G.rotations[t][0] for t in terms}
    net = _FlowNet(G, removed=tset)
    best = None
    first, rest = terms[0], terms[1:]
    for mask in range(1 << len(rest)):
        X = [first] + [rest[i] for i in range(len(rest)) if (mask >> i) & 1]
        Y = [rest[i] for i in range(len(rest)) if not (mask >> i) & 1]
        if not Y:
            continue
        val = net.value({nbr[x] for x in X}, {nbr[y] for y in Y})
        key = (val * 1.0 / min(len(X), len(Y)), val, mask)
        if best is None or key[:2] < best[0][:2]:
            best = (key, X, Y)
    _, X, Y = best
    _, cut = menger_vertex_disjoint(G, {nbr[x] for x in X}, {nbr[y] for y in Y}, forbidden=tset)
    C = set(cut)
    A = _side(G, set(X), C)
    B = set(range(G.vertex_count)) - A - C
    phi = cut_sparsity(tset, A, C, B)
    if phi > 1:
        A, C, B = evacuate_terminals(G, tset, set(), set(terms), set(range(G.vertex_count)) - tset)
        phi = cut_sparsity(tset, A, C, B)
    if C & tset or not _is_cut(G, A, C, B):
        raise InternalAssertion("sparsest cut lost its shape")
    return frozenset(A), frozenset(C), frozenset(B), phi


def _side(G: EmbeddedPlanarGraph, seeds: set[int], C: set[int]) -> set[int]:
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        x = stack.pop()
        for y in G.rotations[x]:
            if y not in seen and y not in C:
                seen.add(y)
                stack.append(y)
    return seen


def _max_split(counts: list[int]) -> int:
    """Largest ``min(sum(P), sum(Q))`` over partitions of ``counts``."""
    total = sum(counts)
    reach = {0}
    for c in counts:
        reach |= {r + c for r in reach}
    return max(min(r, total - r) for r in reach)


def verify_well_linked(G: EmbeddedPlanarGraph, terminals: Iterable[int], alpha: float) -> bool:
    """Every two disjoint equal-size terminal sets ``T1, T2`` are joined by at
    least ``alpha * |T1|`` vertex-disjoint paths.

    Sizes whose requirement is one path reduce to a connectivity question
    over the components; larger requirements are checked pair by pair.
    """
    terms = sorted(set(int(t) for t in terminals))
    if len(terms) > MAX_EXACT_TERMINALS:
        raise TooManyTerminals(f"{len(terms)} terminals exceed the limit of {MAX_EXACT_TERMINALS}")
    comp_of = {}
    for i, comp in enumerate(G.components()):
        for v in comp:
            comp_of[v] = i
    counts = defaultdict(int)
    for t in terms:
        counts[comp_of[t]] += 1
    split = _max_split(list(counts.values()))
    net = None
    for s in range(1, len(terms) // 2 + 1):
        need = math.ceil(alpha * s - 1e-9)
        if need <= 0:
            continue
        if s <= split:
            return False
        if need == 1:
            continue
        net = net or _FlowNet(G)
        for T1 in itertools.combinations(terms, s):
            rest = [t for t in terms if t not in T1 and t > T1[0]]
            for T2 in itertools.combinations(rest, s):
                if net.value(T1, T2) < need:
                    return False
    return True


@dataclass(frozen=True)
class WldResult:
    subgraphs: tuple[frozenset[int], ...]
    pair_sets: tuple[tuple[Pair, ...], ...]
    removed: frozenset[int]
    tau: float
    alpha_wl: float


def wld_threshold(w_star: float, k: int, alpha_akr: float = 1.0) -> float:
    """``tau = w* / (512 * alpha_AKR * log k)``."""
    return w_star / (512 * alpha_akr * log2_ceil(k))


def _check_normalized(G: EmbeddedPlanarGraph, M: Sequence[Pair]) -> None:
    ends = [x for p in M for x in p]
    if len(ends) != len(set(ends)):
        raise PreconditionViolated("terminals must be distinct across pairs")
    for x in ends:
        if not 0 <= x < G.vertex_count or G.degree(x) != 1:
            raise PreconditionViolated(f"terminal {x} must have degree 1")


def well_linked_decompose(
    G: EmbeddedPlanarGraph,
    M: Sequence[Pair],
    w_star: float,
    tau: float | None = None,
) -> WldResult:
    """Remove sparse cuts until every component's terminals are well-linked.

    In every round each component of ``G - U`` with more than three
    terminals gets an exact sparsest cut; a cut sparser than ``tau`` joins
    ``U``. Pairs split by ``U`` are dropped. ``tau`` defaults to
    :func:`wld_threshold`; passing it explicitly is for experiments.
    """
    M = [tuple(int(x) for x in p) for p in M]
    _check_normalized(G, M)
    if not 0 < w_star <= 1:
        raise BadParams("w_star must lie in (0, 1]")
    k = len(M)
    th = wld_threshold(w_star, max(k, 1)) if tau is None else float(tau)
    ends = {x for p in M for x in p}
    U: set[int] = set()
    while True:
        H = G.delete_vertices(U)
        grew = False
        for comp in sorted(H.components(), key=min):
            if comp & U:
                continue
            tc = comp & ends
            if len(tc) <= 3:
                continue
            if len(tc) > MAX_EXACT_TERMINALS:
                raise TooManyTerminals(f"component with {len(tc)} terminals")
            _, C, _, phi = sparsest_cut_exact(H.induced(comp), tc)
            if phi < th:
                U |= set(C)
                grew = True
        if not grew:
            break
    H = G.delete_vertices(U)
    comps = sorted((frozenset(c) for c in H.components() if not c & U), key=min)
    where = {v: i for i, c in enumerate(comps) for v in c}
    sets: list[list[Pair]] = [[] for _ in comps]
    for s, t in M:
        if s in where and where[s] == where.get(t):
            sets[where[s]].append((s, t))
    return WldResult(tuple(comps), tuple(tuple(p) for p in sets), frozenset(U), th, th)


def check_wld(G: EmbeddedPlanarGraph, M: Sequence[Pair], w_star: float, res: WldResult) -> dict[str, bool]:
    """The decomposition guarantees: separated parts, retained pairs, size of
    ``U`` and well-linkedness of every part's terminals."""
    k = len(M)
    where = {v: i for i, c in enumerate(res.subgraphs) for v in c}
    separated = all(
        u in res.removed or v in res.removed or where[u] == where[v]
        for u in range(G.vertex_count)
        for v in G.rotations[u]
    ) and not any(c & res.removed for c in res.subgraphs)
    kept = sum(len(p) for p in res.pair_sets)
    linked = True
    for comp, pairs in zip(res.subgraphs, res.pair_sets):
        terms = [x for p in pairs for x in p]
        if terms:
            linked &= verify_well_linked(G.induced(comp), terms, res.alpha_wl)
    return {
        "separated": separated,
        "retained": 64 * kept >= 63 * k,
        "removed_small": 64 * len(res.removed) <= w_star * k + 1e-9,
        "well_linked": linked,
    }
