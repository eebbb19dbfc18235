"""Independent reference computations used by the tests.

Nothing here calls into the routines under test except to build graphs.
"""

from __future__ import annotations

import math

import networkx as nx

from planar_ndp.harness.generators import (
    cylinder_grid,
    embedding_from_coords,
    glued_grids,
    grid,
    outer_dart,
    random_planar,
)


def to_nx(G) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(G.vertex_count))
    g.add_edges_from(G.edges())
    return g


def face_share_graph(G) -> nx.Graph:
    """Vertices adjacent when they lie on a common face."""
    g = nx.Graph()
    g.add_nodes_from(range(G.vertex_count))
    for f in range(G.face_count):
        vs = sorted(set(G.face_vertices(f)))
        for i, a in enumerate(vs):
            for b in vs[i + 1:]:
                g.add_edge(a, b)
    return g


def point_in_polygon(p, poly) -> bool:
    x, y = p
    inside = False
    m = len(poly)
    for i in range(m):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % m]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside


def polygon_area(poly) -> float:
    s = 0.0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def geometric_min_cycle(G, coords, v):
    """Smallest-area simple cycle whose polygon strictly contains ``v``."""
    best = None
    for cyc in nx.simple_cycles(to_nx(G)):
        if len(cyc) < 3 or v in cyc:
            continue
        poly = [coords[x] for x in cyc]
        if point_in_polygon(coords[v], poly):
            a = polygon_area(poly)
            if best is None or a < best[0] - 1e-9:
                best = (a, cyc)
    return None if best is None else set(best[1])


def wheel(m: int):
    coords = [(0.0, 0.0)] + [(math.cos(2 * math.pi * i / m), math.sin(2 * math.pi * i / m)) for i in range(m)]
    edges = [(0, i + 1) for i in range(m)] + [(i + 1, (i + 1) % m + 1) for i in range(m)]
    G = embedding_from_coords(coords, edges)
    return G, outer_dart(G, coords), coords


def path_graph(n: int):
    coords = [(float(i), 0.0) for i in range(n)]
    G = embedding_from_coords(coords, [(i, i + 1) for i in range(n - 1)])
    return G, G.faces[0][0], coords


def small_fixtures():
    """Connected embedded graphs with at most ten vertices."""
    out = []
    tri = embedding_from_coords([(0, 0), (1, 0), (0.5, 1)], [(0, 1), (1, 2), (0, 2)])
    out.append(("triangle", tri, tri.faces[0][0], [(0, 0), (1, 0), (0.5, 1)]))
    k4c = [(0, 0), (2, 0), (1, 2), (1, 0.7)]
    k4 = embedding_from_coords(k4c, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)])
    out.append(("k4", k4, outer_dart(k4, k4c), k4c))
    out.append(("path4", *path_graph(4)))
    for r, c in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5)]:
        out.append((f"grid{r}x{c}", *grid(r, c)))
    for m in (4, 5, 6, 8):
        out.append((f"wheel{m}", *wheel(m)))
    for rings, cols in [(2, 3), (2, 4), (2, 5)]:
        G, c1, c2, coords = cylinder_grid(rings, cols)
        out.append((f"cyl{rings}x{cols}", G, c2, coords))
    out.append(("glued", *glued_grids([(2, 2), (2, 3), (2, 2)])))
    for n in (6, 7, 8, 9, 10):
        for seed in range(3):
            out.append((f"rand{n}s{seed}", *random_planar(n, seed)))
    return out


def inner_face_share_graph(G, outer: int) -> nx.Graph:
    """Vertices adjacent when they lie on a common face other than ``outer``."""
    g = nx.Graph()
    g.add_nodes_from(range(G.vertex_count))
    for f in range(G.face_count):
        if f == outer:
            continue
        vs = sorted(set(G.face_vertices(f)))
        for i, a in enumerate(vs):
            for b in vs[i + 1:]:
                g.add_edge(a, b)
    return g


def sliver_chain_length(G, outer: int, xs, ys) -> float:
    """Fewest vertices on a chain between two boundary stretches holding the
    vertex sets ``xs`` and ``ys``: a vertex sequence whose neighbours share an
    inner face."""
    g = inner_face_share_graph(G, outer)
    best = math.inf
    for a in xs:
        lengths = nx.single_source_shortest_path_length(g, a)
        for b in ys:
            if b in lengths:
                best = min(best, lengths[b] + 1)
    return best


def nx_disjoint_count(G, A, B) -> int:
    """Number of vertex-disjoint A-B paths, from networkx node connectivity."""
    H = to_nx(G)
    H.add_edges_from(("src", a) for a in A)
    H.add_edges_from((b, "snk") for b in B)
    return nx.node_connectivity(H, "src", "snk")


def brute_sparsest(G, T):
    """Sparsest vertex cut by trying every split of the vertex set into
    ``A, C, B`` with no ``A``-``B`` edge."""
    import itertools
    from fractions import Fraction

    n = G.vertex_count
    T = set(T)
    best = None
    for assign in itertools.product(range(3), repeat=n):
        A = {v for v in range(n) if assign[v] == 0}
        C = {v for v in range(n) if assign[v] == 1}
        B = {v for v in range(n) if assign[v] == 2}
        if any(u in B for a in A for u in G.neighbors(a)):
            continue
        den = min(len(A & T), len(B & T)) + len(C & T)
        if not (A | C) & T or not (B | C) & T or den == 0:
            continue
        phi = Fraction(len(C), den)
        if best is None or phi < best:
            best = phi
    return best


def brute_well_linked(G, T, alpha) -> bool:
    """Well-linkedness straight from the definition with networkx counts."""
    import itertools

    T = sorted(T)
    for s in range(1, len(T) // 2 + 1):
        for T1 in itertools.combinations(T, s):
            rest = [t for t in T if t not in T1]
            for T2 in itertools.combinations(rest, s):
                if nx_disjoint_count(G, T1, T2) < alpha * s - 1e-9:
                    return False
    return True


def shortest_path_flow(G, pairs) -> float:
    """A feasible uniform multicommodity flow value: route every pair on one
    shortest path and scale by the heaviest vertex load."""
    g = to_nx(G)
    load = {}
    for s, t in pairs:
        for v in nx.shortest_path(g, s, t):
            load[v] = load.get(v, 0) + 1
    return 1.0 / max(load.values())


def radial_gap(G, A, B) -> int:
    """Vertices on a shortest normal curve from ``A`` to ``B`` (both ends
    counted), via vertices sharing a face."""
    g = face_share_graph(G)
    best = math.inf
    for a in A:
        lengths = nx.single_source_shortest_path_length(g, a)
        for b in B:
            if b in lengths:
                best = min(best, lengths[b] + 1)
    return best
