"""Seed-deterministic instance generators.

Graphs are laid out with straight-line coordinates only to derive rotation
systems (neighbours sorted by angle); no geometry is kept afterwards.
"""

from __future__ import annotations

import math
import random
from typing import Sequence

from ..errors import BadParams
from ..instances import CylinderInstance, DiscInstance
from ..planar_core import Dart, EmbeddedPlanarGraph, build_embedding

Coord = tuple[float, float]


def embedding_from_coords(coords: Sequence[Coord], edges) -> EmbeddedPlanarGraph:
    n = len(coords)
    nb: list[set[int]] = [set() for _ in range(n)]
    for a, b in edges:
        if a != b:
            nb[a].add(b)
            nb[b].add(a)
    rots = []
    for v in range(n):
        x0, y0 = coords[v]
        rots.append(sorted(nb[v], key=lambda u: math.atan2(coords[u][1] - y0, coords[u][0] - x0)))
    return build_embedding(n, rots)


def _signed_area(G: EmbeddedPlanarGraph, f: int, coords) -> float:
    pts = [coords[v] for v in G.face_vertices(f)]
    s = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        s += x1 * y2 - x2 * y1
    return s / 2


def outer_dart(G: EmbeddedPlanarGraph, coords) -> Dart:
    """A dart of the unbounded face of a connected straight-line drawing."""
    if G.face_count == 0:
        raise BadParams("graph has no edges")
    # bounded faces are traced clockwise, the unbounded one counter-clockwise
    f = max(range(G.face_count), key=lambda g: (_signed_area(G, g, coords), -g))
    return G.faces[f][0]


def boundary_order(G: EmbeddedPlanarGraph, dart: Dart) -> list[int]:
    """Distinct vertices of a face in order of first appearance on its walk."""
    seen = []
    for v in G.face_vertices(G.face_of(dart)):
        if v not in seen:
            seen.append(v)
    i = seen.index(dart[0])
    return seen[i:] + seen[:i]


# ---------------------------------------------------------------------------
# graph families


def grid(rows: int, cols: int) -> tuple[EmbeddedPlanarGraph, Dart, list[Coord]]:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise BadParams("grid needs at least two vertices")
    coords = [(float(c), float(-r)) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    G = embedding_from_coords(coords, edges)
    return G, outer_dart(G, coords), coords


def cylinder_grid(rings: int, cols: int) -> tuple[EmbeddedPlanarGraph, Dart, Dart, list[Coord]]:
    """Concentric rings of ``cols`` vertices joined by radial spokes.

    Vertex ``i * cols + j`` is column ``j`` of ring ``i``; ring 0 bounds the
    first cuff face, the last ring the second (outer) one.
    """
    if rings < 1 or cols < 3:
        raise BadParams("cylinder grid needs rings >= 1 and cols >= 3")
    coords = []
    for i in range(rings):
        for j in range(cols):
            a = 2 * math.pi * j / cols
            coords.append(((i + 1) * math.cos(a), (i + 1) * math.sin(a)))
    edges = []
    for i in range(rings):
        for j in range(cols):
            v = i * cols + j
            edges.append((v, i * cols + (j + 1) % cols))
            if i + 1 < rings:
                edges.append((v, v + cols))
    G = embedding_from_coords(coords, edges)
    out = outer_dart(G, coords)
    ring0 = set(range(cols))
    inner = min(
        (f for f in range(G.face_count) if set(G.face_vertices(f)) == ring0 and G.face_of(out) != f),
        default=None,
    )
    if inner is None:
        raise BadParams("could not locate the inner cuff")
    return G, G.faces[inner][0], out, coords


def random_triangulation(n: int, rng: random.Random, hull: int = 3) -> tuple[list[Coord], list[tuple[int, int]]]:
    """Fan-triangulated convex ``hull``-gon refined by iterative subdivision:
    each new vertex goes to the centroid of a random bounded face and is
    joined to its three corners."""
    if hull < 3 or n < hull:
        raise BadParams("need a hull of at least three vertices and n >= hull")
    coords: list[Coord] = [
        (math.cos(2 * math.pi * i / hull), math.sin(2 * math.pi * i / hull)) for i in range(hull)
    ]
    edges = [(i, (i + 1) % hull) for i in range(hull)] + [(0, i) for i in range(2, hull - 1)]
    faces = [(0, i, i + 1) for i in range(1, hull - 1)]
    while len(coords) < n:
        i = rng.randrange(len(faces))
        a, b, c = faces.pop(i)
        v = len(coords)
        coords.append(tuple(sum(coords[x][k] for x in (a, b, c)) / 3 for k in (0, 1)))
        edges += [(a, v), (b, v), (c, v)]
        faces += [(a, b, v), (b, c, v), (a, c, v)]
    return coords, edges


def random_planar(
    n: int, seed: int, drop: float = 0.3, hull: int | None = None
) -> tuple[EmbeddedPlanarGraph, Dart, list[Coord]]:
    """Random triangulation with some interior edges removed, keeping the
    graph 2-connected. The outer face is the convex hull."""
    import networkx as nx

    rng = random.Random(seed)
    h = hull if hull is not None else max(3, n // 2)
    coords, edges = random_triangulation(n, rng, h)
    hull_edges = {frozenset((i, (i + 1) % h)) for i in range(h)}
    keep = list(edges)
    order = list(range(len(edges)))
    rng.shuffle(order)
    target = int(drop * len(edges))
    removed = 0
    for idx in order:
        if removed >= target:
            break
        e = edges[idx]
        if frozenset(e) in hull_edges:
            continue
        trial = [x for x in keep if x != e]
        g = nx.Graph(trial)
        g.add_nodes_from(range(n))
        if nx.is_biconnected(g):
            keep = trial
            removed += 1
    G = embedding_from_coords(coords, keep)
    return G, outer_dart(G, coords), coords


def glued_grids(shapes: Sequence[tuple[int, int]]) -> tuple[EmbeddedPlanarGraph, Dart, list[Coord]]:
    """Grids placed corner to corner so consecutive grids share one cut
    vertex, giving a chain of blocks."""
    coords: list[Coord] = []
    edges = []
    ox, oy = 0.0, 0.0
    prev_corner = None
    for rows, cols in shapes:
        ids = {}
        for r in range(rows):
            for c in range(cols):
                p = (ox + c, oy - r)
                if r == 0 and c == 0 and prev_corner is not None:
                    ids[(r, c)] = prev_corner
                else:
                    ids[(r, c)] = len(coords)
                    coords.append(p)
        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols:
                    edges.append((ids[(r, c)], ids[(r, c + 1)]))
                if r + 1 < rows:
                    edges.append((ids[(r, c)], ids[(r + 1, c)]))
        prev_corner = ids[(rows - 1, cols - 1)]
        ox += cols - 1
        oy -= rows - 1
    G = embedding_from_coords(coords, edges)
    return G, outer_dart(G, coords), coords


# ---------------------------------------------------------------------------
# demands


def random_boundary_pairs(
    boundary: Sequence[int],
    k: int,
    rng: random.Random,
    one_split: bool = False,
) -> list[tuple[int, int]]:
    """``k`` pairs on distinct boundary vertices.

    With ``one_split`` the sources come from one contiguous boundary arc and
    the sinks from the complementary arc.
    """
    m = len(boundary)
    if 2 * k > m:
        raise BadParams(f"cannot place {k} pairs on {m} boundary vertices")
    if not one_split:
        pts = rng.sample(list(boundary), 2 * k)
        return [(pts[2 * i], pts[2 * i + 1]) for i in range(k)]
    start = rng.randrange(m)
    rot = list(boundary[start:]) + list(boundary[:start])
    cut = rng.randint(k, m - k)
    sources = sorted(rng.sample(range(cut), k))
    sinks = sorted(rng.sample(range(cut, m), k))
    rng.shuffle(sinks)
    return [(rot[a], rot[b]) for a, b in zip(sources, sinks)]


def grid_disc_instance(rows: int, cols: int, k: int, seed: int, one_split: bool = False) -> DiscInstance:
    rng = random.Random(seed)
    G, od, _ = grid(rows, cols)
    pairs = random_boundary_pairs(boundary_order(G, od), k, rng, one_split)
    return DiscInstance(G, od, tuple(pairs))


def random_planar_disc_instance(n: int, k: int, seed: int, one_split: bool = False) -> DiscInstance:
    G, od, _ = random_planar(n, seed)
    rng = random.Random(seed + 1)
    bd = boundary_order(G, od)
    k = min(k, len(bd) // 2)
    return DiscInstance(G, od, tuple(random_boundary_pairs(bd, k, rng, one_split)))


def multi_block_disc_instance(seed: int, k: int, blocks: int | None = None) -> DiscInstance:
    rng = random.Random(seed)
    nb = blocks if blocks is not None else rng.randint(2, 3)
    shapes = [(rng.randint(2, 3), rng.randint(2, 3)) for _ in range(nb)]
    G, od, _ = glued_grids(shapes)
    bd = boundary_order(G, od)
    k = min(k, len(bd) // 2)
    return DiscInstance(G, od, tuple(random_boundary_pairs(bd, k, rng)))


def cylinder_grid_instance(rings: int, cols: int, k: int, seed: int) -> CylinderInstance:
    rng = random.Random(seed)
    G, c1, c2, _ = cylinder_grid(rings, cols)
    k = min(k, cols)
    inner = sorted(rng.sample(range(cols), k))
    outer = sorted(rng.sample(range(cols), k))
    shift = rng.randrange(k)
    outer = outer[shift:] + outer[:shift]
    last = (rings - 1) * cols
    pairs = tuple((a, last + b) for a, b in zip(inner, outer))
    return CylinderInstance(G, c1, c2, pairs)


# ---------------------------------------------------------------------------
# rerouting fixtures


def random_dfs_path(G: EmbeddedPlanarGraph, src: int, targets: set[int], blocked: set[int], rng: random.Random):
    """A random simple path from ``src`` to a target avoiding ``blocked``."""
    prev = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        if x in targets and x != src:
            out = [x]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return out[::-1]
        nb = list(G.neighbors(x))
        rng.shuffle(nb)
        for y in nb:
            if y not in prev and y not in blocked:
                prev[y] = x
                stack.append(y)
    return None


def monotone_cycle_fixture(seed: int, max_n: int = 14):
    """``(G, C, s, t, paths)``: internally disjoint random ``s``-``t`` paths
    around the min-cycle ``C`` of ``s``, with ``t`` on the outer face."""
    from ..planar_core import disc_vertices, min_cycle

    rng = random.Random(seed)
    for _ in range(100):
        n = rng.randint(9, max_n)
        G, od, _ = random_planar(n, rng.randrange(10**6), drop=rng.choice([0.0, 0.2, 0.35]), hull=rng.randint(3, 6))
        outer = set(G.face_vertices(G.face_of(od)))
        inner = [v for v in range(n) if v not in outer]
        if not inner:
            continue
        s = rng.choice(inner)
        C = list(min_cycle(G, od, s))
        D = disc_vertices(G, C, od)
        ts = sorted(outer - D)
        if not ts:
            continue
        t = rng.choice(ts)
        paths = []
        used: set[int] = set()
        for _ in range(8):
            p = random_dfs_path(G, s, {t}, used, rng)
            if p is None:
                break
            paths.append(p)
            used |= set(p[1:-1])
            if len(p) == 2:
                break
        if paths:
            return G, C, s, t, paths
    raise BadParams("could not build a fixture")


def monotone_family_fixture(seed: int):
    """``(G, core, cycles, paths, y)``: disjoint random paths from a core
    cycle to a connected target ring ``Y`` (``y`` is one of its vertices)."""
    from ..planar_core import tight_concentric_cycles

    rng = random.Random(seed)
    for _ in range(100):
        rings = rng.randint(3, 5)
        cols = rng.randint(5, 8)
        G, c1, c2, _ = cylinder_grid(rings, cols)
        core = list(range(cols))
        cycles = tight_concentric_cycles(G, c2, core, rings - 2)
        Y = set(range((rings - 1) * cols, rings * cols))
        A = list(core)
        rng.shuffle(A)
        paths = []
        used = set(core)
        for a in A[: rng.randint(1, cols)]:
            p = random_dfs_path(G, a, Y, used - {a}, rng)
            if p is None:
                continue
            paths.append(p)
            used |= set(p)
        if paths:
            return G, core, cycles, paths, min(Y)
    raise BadParams("could not build a fixture")


def attach_leaves(G: EmbeddedPlanarGraph, bases: Sequence[int]) -> tuple[EmbeddedPlanarGraph, list[int]]:
    """Hang a new degree-one vertex off every listed base vertex.

    Leaf ``i`` gets id ``G.vertex_count + i`` and sits in the rotation of its
    base right after the base's first neighbour (or alone when the base is
    isolated). A base may be listed more than once.
    """
    n = G.vertex_count
    rots = [list(r) for r in G.rotations]
    leaves = []
    for i, b in enumerate(bases):
        leaf = n + i
        rots[b].insert(1 if rots[b] else 0, leaf)
        rots.append([b])
        leaves.append(leaf)
    return EmbeddedPlanarGraph(n + len(bases), rots, check=True), leaves
