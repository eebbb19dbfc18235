"""Combinatorial planar embeddings and the primitives built on them.

A graph is given by a rotation system: for every vertex the counter-clockwise
cyclic order of its neighbours. Faces are traced with the rule that the
successor of the dart ``u -> v`` is ``v -> w`` where ``w`` follows ``u`` in the
rotation of ``v``. The face containing dart ``(u, v)`` is called the face of
that dart; an outer face is always designated by one of its darts.

Normal curves live in the radial graph, whose nodes are the vertices and faces
of the embedding and whose edges are the corners (vertex/face incidences).
Elements are written ``("v", id)`` for vertices and ``("f", id)`` for faces.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DepthUnavailable,
    MalformedRotation,
    NoEnclosingCycle,
    NonPlanarRotation,
    PreconditionViolated,
    Unreachable,
)

Dart = tuple[int, int]
Element = tuple[str, int]


def V(x: int) -> Element:
    return ("v", x)


def F(x: int) -> Element:
    return ("f", x)


class EmbeddedPlanarGraph:
    """An immutable rotation system with its traced faces.

    Vertex ids are ``0..vertex_count-1``. Isolated vertices are allowed and own
    no face; every other connected component must satisfy Euler's formula.
    """

    __slots__ = (
        "vertex_count",
        "rotations",
        "faces",
        "face_of_dart",
        "_pos",
        "_adj",
    )

    def __init__(self, vertex_count: int, rotations: Sequence[Sequence[int]], check: bool = True):
        if len(rotations) != vertex_count:
            raise MalformedRotation(f"expected {vertex_count} rotations, got {len(rotations)}")
        rots = tuple(tuple(int(u) for u in r) for r in rotations)
        pos = []
        for v, r in enumerate(rots):
            p = {}
            for i, u in enumerate(r):
                if not 0 <= u < vertex_count:
                    raise MalformedRotation(f"vertex {v} lists unknown neighbour {u}")
                if u == v:
                    raise MalformedRotation(f"self-loop at {v}")
                if u in p:
                    raise MalformedRotation(f"parallel edge {v}-{u}")
                p[u] = i
            pos.append(p)
        for v, r in enumerate(rots):
            for u in r:
                if v not in pos[u]:
                    raise MalformedRotation(f"edge {v}-{u} missing from rotation of {u}")
        self.vertex_count = vertex_count
        self.rotations = rots
        self._pos = tuple(pos)
        self._adj = tuple(frozenset(r) for r in rots)
        faces: list[tuple[Dart, ...]] = []
        face_of: dict[Dart, int] = {}
        for v, r in enumerate(rots):
            for u in r:
                d = (v, u)
                if d in face_of:
                    continue
                fid = len(faces)
                walk = []
                cur = d
                while cur not in face_of:
                    face_of[cur] = fid
                    walk.append(cur)
                    cur = self._succ(cur)
                if cur != d:
                    raise NonPlanarRotation("face tracing did not close up")
                faces.append(tuple(walk))
        self.faces = tuple(faces)
        self.face_of_dart = face_of
        if check:
            self._check_euler()

    def _succ(self, d: Dart) -> Dart:
        u, v = d
        r = self.rotations[v]
        return (v, r[(self._pos[v][u] + 1) % len(r)])

    def _check_euler(self) -> None:
        for comp in self.components():
            if len(comp) == 1 and not self.rotations[next(iter(comp))]:
                continue
            e = sum(len(self.rotations[v]) for v in comp) // 2
            fs = {self.face_of_dart[(v, u)] for v in comp for u in self.rotations[v]}
            if len(comp) - e + len(fs) != 2:
                raise NonPlanarRotation(
                    f"Euler check failed on component of {min(comp)}: "
                    f"V={len(comp)} E={e} F={len(fs)}"
                )

    # basic queries

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotations[v]

    def adj(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(v, u) for v, r in enumerate(self.rotations) for u in r if v < u]

    def edge_count(self) -> int:
        return sum(len(r) for r in self.rotations) // 2

    def next_ccw(self, v: int, u: int) -> int:
        r = self.rotations[v]
        return r[(self._pos[v][u] + 1) % len(r)]

    def prev_ccw(self, v: int, u: int) -> int:
        r = self.rotations[v]
        return r[(self._pos[v][u] - 1) % len(r)]

    def succ(self, d: Dart) -> Dart:
        return self._succ(d)

    def face_of(self, d: Dart) -> int:
        try:
            return self.face_of_dart[d]
        except KeyError:
            raise MalformedRotation(f"{d} is not a dart") from None

    def face_vertices(self, f: int) -> tuple[int, ...]:
        return tuple(d[0] for d in self.faces[f])

    def faces_at(self, v: int) -> tuple[int, ...]:
        """Faces around ``v`` in counter-clockwise corner order."""
        return tuple(self.face_of_dart[(u, v)] for u in self.rotations[v])

    def components(self) -> list[set[int]]:
        seen = [False] * self.vertex_count
        out = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            seen[s] = True
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.rotations[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.add(y)
                        stack.append(y)
            out.append(comp)
        return out

    def adjacency(self) -> list[frozenset[int]]:
        return list(self._adj)

    # derived embeddings

    def restrict_edges(self, keep: Iterable[tuple[int, int]]) -> "EmbeddedPlanarGraph":
        """Sub-embedding on the given edges; vertex ids are preserved."""
        ks = {frozenset(e) for e in keep}
        rots = [[u for u in r if frozenset((v, u)) in ks] for v, r in enumerate(self.rotations)]
        return EmbeddedPlanarGraph(self.vertex_count, rots, check=False)

    def delete_vertices(self, S: Iterable[int]) -> "EmbeddedPlanarGraph":
        S = set(S)
        rots = [[] if v in S else [u for u in r if u not in S] for v, r in enumerate(self.rotations)]
        return EmbeddedPlanarGraph(self.vertex_count, rots, check=False)

    def induced(self, keep: Iterable[int]) -> "EmbeddedPlanarGraph":
        keep = set(keep)
        return self.delete_vertices(set(range(self.vertex_count)) - keep)

    def __repr__(self) -> str:
        return f"EmbeddedPlanarGraph(n={self.vertex_count}, m={self.edge_count()}, faces={len(self.faces)})"


def build_embedding(vertex_count: int, rotations: Sequence[Sequence[int]]) -> EmbeddedPlanarGraph:
    """Validate a rotation system, trace its faces and run the Euler check."""
    return EmbeddedPlanarGraph(vertex_count, rotations, check=True)


# ---------------------------------------------------------------------------
# corners and face location


def corner_face(G: EmbeddedPlanarGraph, u: int, v: int) -> int:
    """Face of the corner at ``v`` that follows the dart ``u -> v``."""
    return G.face_of_dart[(u, v)]


def locate_face(G: EmbeddedPlanarGraph, f: int, H: EmbeddedPlanarGraph) -> int | None:
    """Face of the sub-embedding ``H`` that contains face ``f`` of ``G``.

    ``H`` must be a sub-embedding of ``G`` with the same vertex ids. Returns
    ``None`` when ``H`` has no edges.
    """
    if H.edge_count() == 0:
        return None
    seen = {f}
    queue = deque([f])
    while queue:
        g = queue.popleft()
        for (a, x) in G.faces[g]:
            if H.degree(x) == 0:
                continue
            # corner at x between a and next_ccw(x, a); walk back to an H edge
            b = a
            while not H.has_edge(x, b):
                b = G.prev_ccw(x, b)
            return H.face_of_dart[(b, x)]
        for (a, x) in G.faces[g]:
            if not H.has_edge(a, x):
                h = G.face_of_dart[(x, a)]
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
    return None


def add_apex(G: EmbeddedPlanarGraph, corners: Sequence[Dart]) -> tuple[EmbeddedPlanarGraph, int]:
    """Add a new vertex joined to the given corners of a single face.

    Each corner is a dart ``(u, x)``; the new vertex is inserted in the
    rotation of ``x`` right after ``u``. Corners must be listed in the order in
    which the face walk meets them and must belong to the same face.
    """
    c = G.vertex_count
    rots = [list(r) for r in G.rotations] + [[]]
    if corners:
        faces = {G.face_of_dart[d] for d in corners}
        if len(faces) != 1:
            raise PreconditionViolated("apex corners must lie on one face")
    for (u, x) in corners:
        if x in rots[c]:
            raise PreconditionViolated(f"vertex {x} attached twice")
        r = rots[x]
        i = r.index(u)
        r.insert(i + 1, c)
        rots[c].append(x)
    rots[c].reverse()
    return EmbeddedPlanarGraph(c + 1, rots, check=True), c


def contract(G: EmbeddedPlanarGraph, S: Iterable[int]) -> tuple[EmbeddedPlanarGraph, int]:
    """Contract a connected vertex set into its smallest vertex.

    Edges are contracted one at a time by splicing rotations, parallel copies
    are dropped and the other vertices of ``S`` become isolated.
    """
    S = set(S)
    if not S:
        raise PreconditionViolated("cannot contract an empty set")
    rep = min(S)
    rots = [list(r) for r in G.rotations]
    merged = {rep}
    frontier = deque([rep])
    while len(merged) < len(S):
        progress = False
        for w in list(rots[rep]):
            if w in S and w not in merged:
                _merge_into(rots, rep, w)
                merged.add(w)
                progress = True
                break
        if not progress:
            raise PreconditionViolated("contracted set is not connected")
    del frontier
    return EmbeddedPlanarGraph(G.vertex_count, rots, check=True), rep


def _merge_into(rots: list[list[int]], u: int, w: int) -> None:
    ru = rots[u]
    rw = rots[w]
    i = ru.index(w)
    a_list = ru[i + 1:] + ru[:i]
    j = rw.index(u)
    b_list = rw[j + 1:] + rw[:j]
    a_set = set(a_list)
    new = list(a_list)
    for b in b_list:
        rb = rots[b]
        k = rb.index(w)
        if b in a_set:
            del rb[k]
        else:
            rb[k] = u
            new.append(b)
    rots[u] = new
    rots[w] = []


# ---------------------------------------------------------------------------
# normal curves


@dataclass(frozen=True)
class NormalCurve:
    """Alternating vertex/face sequence; ``length`` counts vertex elements.

    ``corners`` optionally records, for closed curves, the dart of the corner
    used between consecutive elements (``corners[i]`` joins ``elements[i]`` and
    ``elements[i+1]``, cyclically).
    """

    elements: tuple[Element, ...]
    closed: bool = False
    corners: tuple[Dart, ...] | None = None

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(x for k, x in self.elements if k == "v")

    @property
    def face_ids(self) -> tuple[int, ...]:
        return tuple(x for k, x in self.elements if k == "f")

    @property
    def length(self) -> int:
        return len(self.vertices)

    def is_valid(self, G: EmbeddedPlanarGraph) -> bool:
        els = self.elements
        if not els:
            return False
        pairs = list(zip(els, els[1:]))
        if self.closed:
            if len(els) % 2:
                return False
            pairs.append((els[-1], els[0]))
        for a, b in pairs:
            if a[0] == b[0]:
                return False
            v, f = (a[1], b[1]) if a[0] == "v" else (b[1], a[1])
            if f not in G.faces_at(v):
                return False
        return True


@dataclass(frozen=True)
class CombinatorialDisc:
    boundary: NormalCurve
    inside_vertices: frozenset[int]
    inside_faces: frozenset[int]

    @property
    def interior_vertices(self) -> frozenset[int]:
        return self.inside_vertices - set(self.boundary.vertices)


def radial_neighbors(G: EmbeddedPlanarGraph, el: Element) -> Iterable[Element]:
    kind, x = el
    if kind == "v":
        return [("f", f) for f in sorted(set(G.faces_at(x)))]
    return [("v", v) for v in sorted(set(G.face_vertices(x)))]


def _weight(el: Element) -> int:
    return 1 if el[0] == "v" else 0


def radial_distances(
    G: EmbeddedPlanarGraph,
    sources: Iterable[Element],
    blocked: Iterable[Element] = (),
) -> dict[Element, int]:
    """0-1 BFS in the radial graph; distance counts vertex elements on the path,
    both endpoints included."""
    blocked = set(blocked)
    dist: dict[Element, int] = {}
    dq: deque[tuple[int, Element]] = deque()
    for s in sources:
        w = _weight(s)
        if s not in dist or dist[s] > w:
            dist[s] = w
            if w:
                dq.append((w, s))
            else:
                dq.appendleft((w, s))
    done = set()
    while dq:
        d, x = dq.popleft()
        if x in done or d != dist[x]:
            continue
        done.add(x)
        for y in radial_neighbors(G, x):
            if y in blocked:
                continue
            nd = d + _weight(y)
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                if _weight(y):
                    dq.append((nd, y))
                else:
                    dq.appendleft((nd, y))
    return dist


def radial_shortest_path(
    G: EmbeddedPlanarGraph,
    sources: Iterable[Element],
    targets: Iterable[Element],
    blocked: Iterable[Element] = (),
) -> NormalCurve:
    """Lexicographically smallest minimum-length element path from any source
    to any target, avoiding blocked elements (sources and targets are never
    treated as blocked)."""
    sources = sorted(set(sources))
    targets = set(targets)
    blocked = set(blocked) - targets - set(sources)
    dist = radial_distances(G, targets, blocked)
    best = None
    for s in sources:
        if s in dist and (best is None or dist[s] < dist[best]):
            best = s
    if best is None:
        raise Unreachable("no normal curve between the given element sets")
    path = [best]
    cur = best
    while cur not in targets:
        need = dist[cur] - _weight(cur)
        nxt = None
        for y in radial_neighbors(G, cur):
            if y in blocked and y not in targets:
                continue
            if dist.get(y) == need:
                nxt = y
                break
        assert nxt is not None
        path.append(nxt)
        cur = nxt
    return NormalCurve(tuple(path))


def shortest_normal_curve(
    G: EmbeddedPlanarGraph,
    u: int,
    v: int,
    forbidden_vertices: Iterable[int] = (),
    forbidden_faces: Iterable[int] = (),
) -> NormalCurve:
    """Minimum-length normal curve from vertex ``u`` to vertex ``v``."""
    fv = set(forbidden_vertices)
    if u in fv or v in fv:
        raise PreconditionViolated("endpoints may not be forbidden")
    blocked = {("v", x) for x in fv} | {("f", f) for f in forbidden_faces}
    return radial_shortest_path(G, [("v", u)], [("v", v)], blocked)


def d_gnc(G: EmbeddedPlanarGraph, u: int, v: int) -> int:
    return shortest_normal_curve(G, u, v).length - 1


def gnc_distances_from(G: EmbeddedPlanarGraph, u: int) -> dict[int, int]:
    """``d_GNC(u, x)`` for every vertex ``x`` reachable in the radial graph."""
    dist = radial_distances(G, [("v", u)])
    return {x: d - 1 for (k, x), d in dist.items() if k == "v"}


# ---------------------------------------------------------------------------
# cycles and discs


def cycle_edges(cycle: Sequence[int]) -> set[frozenset[int]]:
    m = len(cycle)
    return {frozenset((cycle[i], cycle[(i + 1) % m])) for i in range(m)}


def outer_face_id(G: EmbeddedPlanarGraph, outer: Dart | int) -> int:
    return outer if isinstance(outer, int) else G.face_of(tuple(outer))


def disc_faces(G: EmbeddedPlanarGraph, cycle: Sequence[int], outer: Dart | int) -> frozenset[int]:
    """Faces of ``G`` on the side of ``cycle`` away from the outer face."""
    of = outer_face_id(G, outer)
    blocked = cycle_edges(cycle)
    seen = {of}
    queue = deque([of])
    while queue:
        f = queue.popleft()
        for (a, b) in G.faces[f]:
            if frozenset((a, b)) in blocked:
                continue
            g = G.face_of_dart[(b, a)]
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return frozenset(range(G.face_count)) - seen


def disc_vertices(G: EmbeddedPlanarGraph, cycle: Sequence[int], outer: Dart | int) -> frozenset[int]:
    """``V(D(C))``: the cycle plus every vertex whose faces all lie inside."""
    inside = disc_faces(G, cycle, outer)
    on = set(cycle)
    out = set(on)
    for v in range(G.vertex_count):
        if v in on or G.degree(v) == 0:
            continue
        if all(f in inside for f in G.faces_at(v)):
            out.add(v)
    return frozenset(out)


def _walk_cycles(walk: Sequence[int]) -> list[list[int]]:
    stack: list[int] = []
    pos: dict[int, int] = {}
    cycles = []
    for x in list(walk) + [walk[0]]:
        if x in pos:
            i = pos[x]
            seg = stack[i:]
            if len(seg) >= 3:
                cycles.append(seg)
            for y in stack[i + 1:]:
                del pos[y]
            del stack[i + 1:]
        else:
            pos[x] = len(stack)
            stack.append(x)
    return cycles


def _canonical_cycle(c: Sequence[int]) -> tuple[int, ...]:
    i = min(range(len(c)), key=lambda j: c[j])
    return tuple(c[i:]) + tuple(c[:i])


def enclosing_cycle(G: EmbeddedPlanarGraph, outer: Dart | int, S: Iterable[int]) -> tuple[int, ...]:
    """Inclusion-minimal cycle whose open disc contains the connected set ``S``.

    Equivalent to contracting ``S`` into one vertex and taking its min-cycle.
    """
    S = set(S)
    of = outer_face_id(G, outer)
    around = {f for v in S for f in G.faces_at(v)}
    if of in around:
        raise NoEnclosingCycle("set touches the outer face")
    H = G.delete_vertices(S)
    cand_faces = set()
    for f in around:
        for (a, x) in G.faces[f]:
            if x in S or H.degree(x) == 0:
                continue
            b = a
            while not H.has_edge(x, b):
                b = G.prev_ccw(x, b)
            cand_faces.add(H.face_of_dart[(b, x)])
    best = None
    for hf in sorted(cand_faces):
        walk = H.face_vertices(hf)
        for cyc in _walk_cycles(walk):
            inside = disc_faces(G, cyc, of)
            if all(f in inside for f in around):
                key = (len(inside), _canonical_cycle(cyc))
                if best is None or key < best[0]:
                    best = (key, cyc)
    if best is None:
        raise NoEnclosingCycle("no cycle encloses the given set")
    return _canonical_cycle(best[1])


def min_cycle(G: EmbeddedPlanarGraph, outer: Dart | int, v: int) -> tuple[int, ...]:
    """The cycle ``C`` with ``v`` strictly inside and ``D(C)`` minimal."""
    return enclosing_cycle(G, outer, {v})


def tight_concentric_cycles(
    G: EmbeddedPlanarGraph,
    outer: Dart | int,
    C: Sequence[int] | int,
    r: int,
) -> list[tuple[int, ...]]:
    """Cycles ``Z_1..Z_r`` where ``Z_h`` is the min-cycle around the contracted
    disc of ``Z_{h-1}``. ``C`` is a cycle, or a single vertex for a degenerate
    disc."""
    if isinstance(C, int):
        disc = frozenset({C})
    elif len(C) >= 3:
        disc = disc_vertices(G, C, outer)
    else:
        disc = frozenset(C)
    out: list[tuple[int, ...]] = []
    for h in range(1, r + 1):
        try:
            z = enclosing_cycle(G, outer, disc)
        except NoEnclosingCycle:
            raise DepthUnavailable(h, out) from None
        out.append(z)
        disc = disc_vertices(G, z, outer)
    return out


# ---------------------------------------------------------------------------
# vertex-disjoint paths


def menger_vertex_disjoint(
    adj: Sequence[Iterable[int]] | EmbeddedPlanarGraph,
    A: Iterable[int],
    B: Iterable[int],
    internal_only: bool = False,
    forbidden: Iterable[int] = (),
) -> tuple[list[list[int]], set[int]]:
    """Maximum set of vertex-disjoint A-B paths and a minimum vertex cut.

    With ``internal_only`` the vertices of ``A`` and ``B`` have unbounded
    capacity, so paths are only internally disjoint. Forbidden vertices are
    removed from the graph. The returned cut has the same size as the path set
    except in ``internal_only`` mode when ``A`` and ``B`` are adjacent.
    """
    if isinstance(adj, EmbeddedPlanarGraph):
        adj = adj.adjacency()
    n = len(adj)
    A = set(A)
    B = set(B)
    forb = set(forbidden)
    A -= forb
    B -= forb
    if internal_only and A & B:
        raise PreconditionViolated("A and B must be disjoint for internally disjoint paths")
    INF = n + 5
    src, snk = 2 * n, 2 * n + 1
    cap: dict[tuple[int, int], int] = {}
    nbr: list[list[int]] = [[] for _ in range(2 * n + 2)]

    def arc(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            nbr[a].append(b)
            nbr[b].append(a)
            cap[(a, b)] = 0
            cap.setdefault((b, a), 0)
        cap[(a, b)] += c

    for v in range(n):
        if v in forb:
            continue
        arc(2 * v, 2 * v + 1, INF if internal_only and (v in A or v in B) else 1)
        for u in adj[v]:
            if u not in forb:
                arc(2 * v + 1, 2 * u, 1 if internal_only else INF)
    for a in sorted(A):
        arc(src, 2 * a, INF)
    for b in sorted(B):
        arc(2 * b + 1, snk, INF)
    for lst in nbr:
        lst.sort()

    flow = 0
    net: dict[tuple[int, int], int] = {}
    while True:
        parent = {src: None}
        queue = deque([src])
        while queue and snk not in parent:
            x = queue.popleft()
            for y in nbr[x]:
                if y not in parent and cap[(x, y)] > 0:
                    parent[y] = x
                    queue.append(y)
        if snk not in parent:
            break
        y = snk
        while parent[y] is not None:
            x = parent[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            if net.get((y, x), 0) > 0:
                net[(y, x)] -= 1
            else:
                net[(x, y)] = net.get((x, y), 0) + 1
            y = x
        flow += 1

    reach = set(parent)
    cut = {v for v in range(n) if v not in forb and 2 * v in reach and 2 * v + 1 not in reach}
    if internal_only:
        # a saturated edge arc is charged to its head
        for v in range(n):
            if 2 * v + 1 in reach:
                cut.update(u for u in adj[v] if u not in forb and 2 * u not in reach)

    out_arcs: dict[int, list[int]] = {}
    for (a, b), f in sorted(net.items(), reverse=True):
        out_arcs.setdefault(a, []).extend([b] * f)
    paths = []
    for _ in range(flow):
        node = out_arcs[src].pop()
        walk = []
        while node != snk:
            if node % 2 == 0:
                walk.append(node // 2)
            node = out_arcs[node].pop()
        paths.append(_simplify_walk(walk))
    paths.sort()
    return paths, cut


def _simplify_walk(walk: list[int]) -> list[int]:
    out: list[int] = []
    pos: dict[int, int] = {}
    for x in walk:
        if x in pos:
            i = pos[x]
            for y in out[i + 1:]:
                del pos[y]
            del out[i + 1:]
        else:
            pos[x] = len(out)
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# separating curves


def _corner_rotation(G: EmbeddedPlanarGraph, el: Element) -> list[Dart]:
    """Corners around a radial node in a single, consistent orientation."""
    kind, x = el
    if kind == "v":
        return [(u, x) for u in G.rotations[x]]
    return list(reversed(G.faces[x]))


def _corner_ends(G: EmbeddedPlanarGraph, c: Dart) -> tuple[Element, Element]:
    return ("v", c[1]), ("f", G.face_of_dart[c])


def _other_end(G: EmbeddedPlanarGraph, c: Dart, el: Element) -> Element:
    a, b = _corner_ends(G, c)
    return b if el == a else a


def _left_corners(G: EmbeddedPlanarGraph, el: Element, c_in: Dart, c_out: Dart) -> list[Dart]:
    rot = _corner_rotation(G, el)
    m = len(rot)
    k = rot.index(c_out)
    j = rot.index(c_in)
    out = []
    i = (k + 1) % m
    while i != j:
        out.append(rot[i])
        i = (i + 1) % m
    return out


def min_separating_normal_curve(G: EmbeddedPlanarGraph, s: int, t: int) -> NormalCurve:
    """Shortest closed normal curve separating ``s`` from ``t``.

    The radial graph is cut along a fixed ``s``-``t`` radial path; a closed
    walk separates the two vertices exactly when it crosses that path an odd
    number of times, so the answer is a shortest odd closed walk in the
    parity double cover, reduced to a simple cycle.
    """
    if s == t:
        raise PreconditionViolated("s and t must differ")
    if G.has_edge(s, t):
        raise PreconditionViolated("adjacent vertices cannot be separated by a normal curve")
    S0, T0 = ("v", s), ("v", t)
    # fixed radial path by BFS over corners
    prev: dict[Element, tuple[Element, Dart] | None] = {S0: None}
    queue = deque([S0])
    while queue and T0 not in prev:
        x = queue.popleft()
        for c in sorted(_corner_rotation(G, x)):
            y = _other_end(G, c, x)
            if y not in prev:
                prev[y] = (x, c)
                queue.append(y)
    if T0 not in prev:
        raise Unreachable("s and t are in different components")
    nodes = [T0]
    corners: list[Dart] = []
    while prev[nodes[-1]] is not None:
        x, c = prev[nodes[-1]]
        corners.append(c)
        nodes.append(x)
    nodes.reverse()
    corners.reverse()
    flip: dict[Dart, int] = {}
    for i in range(1, len(nodes) - 1):
        for c in _left_corners(G, nodes[i], corners[i - 1], corners[i]):
            flip[c] = flip.get(c, 0) ^ 1
    banned = {S0, T0}

    best = None
    for x in nodes[1:-1]:
        res = _odd_closed_walk(G, x, flip, banned)
        if res is None:
            continue
        cost, walk_nodes, walk_corners = res
        key = (cost, x)
        if best is None or key < best[0]:
            best = (key, walk_nodes, walk_corners)
    if best is None:
        raise Unreachable("no separating curve")
    _, wn, wc = best
    wn, wc = _reduce_odd_walk(wn, wc, flip)
    # start at a vertex element
    i = next(k for k, el in enumerate(wn) if el[0] == "v")
    wn = wn[i:] + wn[:i]
    wc = wc[i:] + wc[:i]
    return NormalCurve(tuple(wn), closed=True, corners=tuple(wc))


def _odd_closed_walk(G, x, flip, banned):
    start = (x, 0)
    goal = (x, 1)
    dist = {start: _weight(x)}
    par: dict = {start: None}
    dq = deque([start])
    done = set()
    while dq:
        st = dq.popleft()
        if st in done:
            continue
        done.add(st)
        if st == goal:
            break
        el, p = st
        for c in sorted(_corner_rotation(G, el)):
            y = _other_end(G, c, el)
            if y in banned:
                continue
            q = p ^ flip.get(c, 0)
            ny = (y, q)
            w = 0 if ny == goal else _weight(y)
            nd = dist[st] + w
            if ny not in dist or nd < dist[ny]:
                dist[ny] = nd
                par[ny] = (st, c)
                if w:
                    dq.append(ny)
                else:
                    dq.appendleft(ny)
    if goal not in dist:
        return None
    nodes = []
    corners = []
    st = goal
    while par[st] is not None:
        pst, c = par[st]
        corners.append(c)
        nodes.append(pst[0])
        st = pst
    nodes.reverse()
    corners.reverse()
    return dist[goal], nodes, corners


def _reduce_odd_walk(nodes: list, corners: list, flip: dict) -> tuple[list, list]:
    """Split a closed walk at repeated nodes, keeping an odd-parity piece."""
    while True:
        m = len(nodes)
        seen: dict = {}
        rep = None
        for i, el in enumerate(nodes):
            if el in seen:
                rep = (seen[el], i)
                break
            seen[el] = i
        if rep is None:
            return nodes, corners
        i, j = rep
        inner_nodes = nodes[i:j]
        inner_corners = corners[i:j]
        outer_nodes = nodes[:i] + nodes[j:]
        outer_corners = corners[:i] + corners[j:]
        par_inner = sum(flip.get(c, 0) for c in inner_corners) % 2
        if par_inner:
            nodes, corners = inner_nodes, inner_corners
        else:
            nodes, corners = outer_nodes, outer_corners
        assert len(nodes) < m


def curve_sides(G: EmbeddedPlanarGraph, curve: NormalCurve) -> tuple[set[Element], set[Element]]:
    """Split the radial graph minus a simple closed curve into its two sides.

    Returns ``(left, right)`` element sets relative to the curve's direction.
    The curve must carry its corners.
    """
    if not curve.closed or curve.corners is None:
        raise PreconditionViolated("curve_sides needs a closed curve with corners")
    els = list(curve.elements)
    cs = list(curve.corners)
    on = set(els)
    m = len(els)
    left_start, right_start = set(), set()
    for i in range(m):
        el = els[i]
        c_in = cs[i - 1]
        c_out = cs[i]
        lefts = set(_left_corners(G, el, c_in, c_out))
        for c in _corner_rotation(G, el):
            if c == c_in or c == c_out:
                continue
            y = _other_end(G, c, el)
            if y in on:
                continue
            (left_start if c in lefts else right_start).add(y)

    def flood(seeds: set[Element]) -> set[Element]:
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            x = queue.popleft()
            for y in radial_neighbors(G, x):
                if y not in on and y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    return flood(left_start), flood(right_start)


def curve_disc(G: EmbeddedPlanarGraph, curve: NormalCurve, anchor: int) -> CombinatorialDisc:
    """The side of a closed curve containing vertex ``anchor``, with the
    curve's vertices added."""
    left, right = curve_sides(G, curve)
    a = ("v", anchor)
    if a in left:
        side = left
    elif a in right:
        side = right
    elif anchor in curve.vertices:
        side = set()
    else:
        raise PreconditionViolated("anchor not on either side")
    verts = frozenset({x for k, x in side if k == "v"} | set(curve.vertices))
    faces = frozenset({x for k, x in side if k == "f"})
    return CombinatorialDisc(curve, verts, faces)
