"""Node-disjoint paths with every terminal on the outer face.

Every demand endpoint is normalised into its own degree-one pendant vertex,
attached inside the outer face at the corner where the walk around that face
first meets the terminal. The outer face then falls apart into *slivers*, the
stretches of the boundary between consecutive pendants. W-points are indexed
``0 .. 2m-1``: ``W[2i]`` is the i-th pendant in boundary order and
``W[2i+1]`` is the sliver that follows it.

Two radial distances are used:

* the curve length ``ell(x, y)``: fewest vertices on an element path from x
  to y that may pass through anything (vertices, pendants, inner faces and
  slivers);
* the chain length: same count, but only ordinary vertices and inner faces
  may appear strictly inside the path.

Feasibility of a non-crossing set is the chain criterion: every pair of
W-points must be joined only by chains at least as long as the number of
demand pairs touching or separated by that pair of points.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from .dpsp import Constraint, DpspInstance, solve_dpsp
from .errors import PreconditionViolated, SearchExhausted
from .harness.exact import route_pairs
from .harness.routing import Routing, make_routing
from .instances import DiscInstance
from .planar_core import Dart, EmbeddedPlanarGraph, locate_face
from .routing_primitives import r_split_partition

log = logging.getLogger(__name__)

Pair = tuple[int, int]
INF = float("inf")

ROUTE_MAX_STEPS = 400_000
# ratio constant of the general disc algorithm: 8 (selection) x 3 (every third
# pair kept) x 4 (split parts per log factor)
RATIO_CONSTANT = 96


def ceil_log2(k: int) -> int:
    return max(1, (max(k, 1) - 1).bit_length())


# ---------------------------------------------------------------------------
# normalised model


def _outer_walk(G: EmbeddedPlanarGraph, dart: Dart) -> list[Dart]:
    walk = list(G.faces[G.face_of(dart)])
    i = walk.index(tuple(dart))
    return walk[i:] + walk[:i]


class DiscModel:
    """Pendant-normalised copy of a disc instance restricted to ``pairs``.

    ``pairs[i]`` gets the pendants ``pendant[i] = (p_s, p_t)``. ``order``
    lists the pendants in the order the outer walk meets them, ``slivers[j]``
    holds the ordinary vertices on the boundary between ``order[j]`` and
    ``order[j+1]``.
    """

    def __init__(self, G: EmbeddedPlanarGraph, outer_dart: Dart, pairs: Sequence[Pair]):
        self.G = G
        self.outer_dart = tuple(outer_dart)
        self.pairs = [tuple(p) for p in pairs]
        n0 = G.vertex_count
        walk = _outer_walk(G, self.outer_dart)
        corner: dict[int, Dart] = {}
        for d in walk:
            corner.setdefault(d[1], d)
        rots = [list(r) for r in G.rotations]
        self.pendant: list[tuple[int, int]] = []
        self.base: dict[int, int] = {}
        self.owner: dict[int, tuple[int, int]] = {}
        last: dict[Dart, int] = {}
        nxt = n0
        for i, p in enumerate(self.pairs):
            ids = []
            for e, x in enumerate(p):
                if x not in corner:
                    raise PreconditionViolated(f"terminal {x} is not on the outer face")
                u, _ = corner[x]
                after = last.get(corner[x], u)
                r = rots[x]
                r.insert(r.index(after) + 1, nxt)
                rots.append([x])
                last[corner[x]] = nxt
                self.base[nxt] = x
                self.owner[nxt] = (i, e)
                ids.append(nxt)
                nxt += 1
            self.pendant.append((ids[0], ids[1]))
        self.H = EmbeddedPlanarGraph(nxt, rots, check=False)
        self.n0 = n0
        m = len(self.base)
        self.m = m
        if m == 0:
            self.outer = self.H.face_of(self.outer_dart)
            self.order: list[int] = []
            self.slivers: list[frozenset[int]] = []
            self.pos: dict[int, int] = {}
            return
        hw = _outer_walk(self.H, self.outer_dart)
        self.outer = self.H.face_of(self.outer_dart)
        # rotate the walk to start right after a pendant
        starts = [i for i, d in enumerate(hw) if d[0] in self.base]
        k0 = starts[0]
        hw = hw[k0:] + hw[:k0]
        order = []
        slivers: list[set[int]] = []
        cur: set[int] = set()
        for a, b in hw:
            if a in self.base:
                order.append(a)
                cur = set()
                slivers.append(cur)
            if b not in self.base:
                cur.add(b)
        self.order = order
        self.slivers = [frozenset(s) for s in slivers]
        self.pos = {p: i for i, p in enumerate(order)}
        self._adj = self._radial()
        self._cache_curve: dict[int, list[float]] = {}
        self._cache_chain: dict[int, list[float]] = {}

    # W-points

    @property
    def w_count(self) -> int:
        return 2 * self.m

    def w_of_pendant(self, p: int) -> int:
        return 2 * self.pos[p]

    def w_of_end(self, i: int, e: int) -> int:
        return self.w_of_pendant(self.pendant[i][e])

    def _radial(self):
        """Adjacency of the radial graph with the outer face split into slivers.

        Node ids: vertices ``0..N-1``, inner faces ``N + f``, sliver ``j`` at
        ``N + F + j``.
        """
        H = self.H
        N = H.vertex_count
        F = len(H.faces)
        adj: list[list[int]] = [[] for _ in range(N + F + self.m)]
        for v in range(N):
            for f in sorted(set(H.faces_at(v))):
                if f != self.outer:
                    adj[v].append(N + f)
                    adj[N + f].append(v)
        for j, verts in enumerate(self.slivers):
            node = N + F + j
            ends = {self.order[j], self.order[(j + 1) % self.m]}
            for v in sorted(verts | ends):
                adj[node].append(v)
                adj[v].append(node)
        self.N, self.F = N, F
        return adj

    def w_node(self, x: int) -> int:
        if x % 2 == 0:
            return self.order[x // 2]
        return self.N + self.F + x // 2

    def _bfs(self, src: int, chain: bool) -> list[float]:
        N = self.N
        adj = self.adj_for(chain)
        dist = [INF] * len(adj)
        node = self.w_node(src)
        dist[node] = 1 if node < N else 0
        dq = deque([node])
        while dq:
            u = dq.popleft()
            if chain and u != node and not self._passable(u):
                continue
            d = dist[u]
            for v in adj[u]:
                w = 1 if v < N else 0
                if d + w < dist[v]:
                    dist[v] = d + w
                    if w:
                        dq.append(v)
                    else:
                        dq.appendleft(v)
        return [dist[self.w_node(y)] for y in range(self.w_count)]

    def adj_for(self, chain: bool):
        if not chain:
            return self._adj
        if not hasattr(self, "_chain_adj"):
            # a pendant endpoint of a chain stands for its terminal vertex, so
            # it may step into the inner faces around that terminal
            adj = [list(a) for a in self._adj]
            for p, x in self.base.items():
                for f in sorted(set(self.H.faces_at(x))):
                    if f != self.outer:
                        adj[p].append(self.N + f)
                        adj[self.N + f].append(p)
            self._chain_adj = adj
        return self._chain_adj

    def _passable(self, u: int) -> bool:
        if u < self.N:
            return u not in self.base
        return u < self.N + self.F

    def curve_lengths(self, x: int) -> list[float]:
        if x not in self._cache_curve:
            self._cache_curve[x] = self._bfs(x, chain=False)
        return self._cache_curve[x]

    def chain_lengths(self, x: int) -> list[float]:
        if x not in self._cache_chain:
            self._cache_chain[x] = self._bfs(x, chain=True)
        return self._cache_chain[x]

    # crossing structure

    def pair_w(self, i: int) -> tuple[int, int]:
        return self.w_of_end(i, 0), self.w_of_end(i, 1)

    def delta(self, x: int, y: int, subset: Sequence[int] | None = None) -> int:
        idx = range(len(self.pairs)) if subset is None else subset
        W = self.w_count
        span = (y - x) % W

        def inside(w):
            return 0 < (w - x) % W < span

        out = 0
        for i in idx:
            a, b = self.pair_w(i)
            if a in (x, y) or b in (x, y) or inside(a) != inside(b):
                out += 1
        return out

    def crossing(self, i: int, j: int) -> bool:
        si, ti = self.pairs[i]
        sj, tj = self.pairs[j]
        if {si, ti} & {sj, tj}:
            return True
        a, b = sorted(self.pair_w(i))
        c, d = self.pair_w(j)
        return (a < c < b) != (a < d < b)


def delta_M(model: DiscModel, x: int, y: int) -> int:
    """Pairs of the model touching W-point ``x`` or ``y`` or separated by them."""
    return model.delta(x, y)


def min_chain_length(model: DiscModel, x: int, y: int) -> float:
    """Fewest vertices on an (x, y)-chain; ``inf`` when none exists."""
    if x == y:
        return 0 if x % 2 else 1
    return model.chain_lengths(x)[y]


def _feasible(model: DiscModel) -> bool:
    k = len(model.pairs)
    for i in range(k):
        for j in range(i + 1, k):
            if model.crossing(i, j):
                return False
    W = model.w_count
    for x in range(W):
        lens = model.chain_lengths(x)
        for y in range(x + 1, W):
            if lens[y] < model.delta(x, y):
                return False
    return True


def check_rs_feasible(inst: DiscInstance, pairs: Sequence[Pair]) -> bool:
    """Whether ``pairs`` is non-crossing and passes the chain criterion."""
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        return True
    return _feasible(DiscModel(inst.graph, inst.outer_dart, pairs))


def _innermost_first(model: DiscModel) -> list[int]:
    W = model.w_count

    def arc(i):
        a, b = model.pair_w(i)
        d = (b - a) % W
        return min(d, W - d)

    return sorted(range(len(model.pairs)), key=lambda i: (arc(i), i))


def _route_model(model: DiscModel, idx: Sequence[int], max_steps: int = ROUTE_MAX_STEPS) -> list[list[int]]:
    sub = DiscModel(model.G, model.outer_dart, [model.pairs[i] for i in idx])
    order = _innermost_first(sub)
    paths = route_pairs(model.G, [sub.pairs[i] for i in order], max_steps=max_steps, keep_order=True)
    if paths is None:
        raise SearchExhausted(f"no disjoint routing for the selected pairs {[sub.pairs[i] for i in order]}")
    out: list[list[int]] = [[] for _ in idx]
    for i, p in zip(order, paths):
        out[i] = p
    return out


def route_feasible(inst: DiscInstance, pairs: Sequence[Pair], max_steps: int = ROUTE_MAX_STEPS) -> Routing:
    """Disjoint paths for a feasible set, found innermost pair first."""
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        return make_routing(pairs, [], algorithm="route_feasible")
    model = DiscModel(inst.graph, inst.outer_dart, pairs)
    paths = _route_model(model, range(len(pairs)), max_steps)
    return make_routing(pairs, list(zip(pairs, paths)), algorithm="route_feasible")


# ---------------------------------------------------------------------------
# 1-split instances


def _source_arc(model: DiscModel) -> tuple[int, list[int]] | None:
    """Start position of a run of ``k`` pendants holding one end of every
    pair, and for each pair the end lying in that run."""
    k = len(model.pairs)
    m = model.m
    for a in range(m):
        run = [model.order[(a + q) % m] for q in range(k)]
        owners = {model.owner[p][0] for p in run}
        if len(owners) == k:
            ends = [0] * k
            for p in run:
                i, e = model.owner[p]
                ends[i] = e
            return a, ends
    return None


@dataclass
class OneSplitReduction:
    """The DPSP instance for a 1-split model together with the maps back."""

    inst: DpspInstance
    pair_index: dict[Pair, int]
    sigma: list[int]
    sigma2: list[int]


def build_1split_dpsp(model: DiscModel) -> OneSplitReduction:
    found = _source_arc(model)
    if found is None:
        raise PreconditionViolated("demand set is not 1-split on the boundary")
    a, ends = found
    k = len(model.pairs)
    W = model.w_count
    sigma = [(2 * a - 1 + p) % W for p in range(2 * k)]
    sigma2 = [(2 * a + 4 * k - 2 - q) % W for q in range(2 * k)]
    at1 = {w: p for p, w in enumerate(sigma)}
    at2 = {w: q for q, w in enumerate(sigma2)}
    pairs = []
    index = {}
    for i in range(k):
        s = at1[model.w_of_end(i, ends[i])]
        t = at2[model.w_of_end(i, 1 - ends[i])]
        pairs.append((s, t))
        index[(s, t)] = i
    cons = []
    for line, kind in ((sigma, 1), (sigma2, 2)):
        for p in range(len(line)):
            lens = model.curve_lengths(line[p])
            for q in range(p + 1, len(line)):
                w = lens[line[q]]
                if w < k:
                    cons.append(Constraint(kind, p, q, int(w)))
    for p, x in enumerate(sigma):
        lens = model.curve_lengths(x)
        for q, y in enumerate(sigma2):
            w = lens[y]
            if w < k:
                cons.append(Constraint(3, p, q, int(w)))
                cons.append(Constraint(4, p, q, int(w)))
    inst = DpspInstance(2 * k, 2 * k, pairs, cons)
    return OneSplitReduction(inst, index, sigma, sigma2)


def _select_1split(model: DiscModel) -> list[int]:
    """Indices of the pairs chosen by the DPSP reduction, in source order."""
    if not model.pairs:
        return []
    red = build_1split_dpsp(model)
    chosen = solve_dpsp(red.inst)
    return [red.pair_index[p] for p in sorted(chosen)]


def solve_1split(inst: DiscInstance) -> Routing:
    pairs = list(inst.demands)
    if not pairs:
        return make_routing(pairs, [], algorithm="disc_1split")
    model = DiscModel(inst.graph, inst.outer_dart, pairs)
    idx = _select_1split(model)
    paths = _route_model(model, idx)
    return make_routing(
        pairs,
        [(pairs[i], p) for i, p in zip(idx, paths)],
        algorithm="disc_1split",
        selected=len(idx),
    )


# ---------------------------------------------------------------------------
# 2-connected case


def _thin_thirds(idx: list[int]) -> list[int]:
    return idx[::3]


def _drop_shared_ends(pairs: list[Pair], idx: list[int]) -> list[int]:
    """Keep pairs in order, skipping any that reuse an endpoint already kept.

    Distinct groups may pick projected pairs ending at the same cut vertex;
    such pairs can never be routed together.
    """
    used: set[int] = set()
    out = []
    for i in idx:
        ends = set(pairs[i])
        if not ends & used:
            used |= ends
            out.append(i)
    return out


def _solve_2connected(G: EmbeddedPlanarGraph, dart: Dart, pairs: list[Pair]) -> tuple[list[int], list[list[int]], dict]:
    """Best part of an r-split partition, as indices into ``pairs``."""
    if not pairs:
        return [], [], {"parts": 0}
    model = DiscModel(G, dart, pairs)
    M = [model.pendant[i] for i in range(len(pairs))]
    pid = {p: i for i, p in enumerate(M)}
    parts = r_split_partition(model.order, M)
    best: tuple[list[int], list[list[int]]] | None = None
    for _, wit in parts:
        union: list[int] = []
        for group in wit.groups:
            gidx = [pid[p] for p in group]
            sub = DiscModel(G, dart, [pairs[i] for i in gidx])
            picked = _select_1split(sub)
            union += [gidx[i] for i in _thin_thirds(picked)]
        union = _drop_shared_ends(pairs, sorted(union))
        paths = _route_model(model, union)
        if best is None or (len(union), [-i for i in union]) > (len(best[0]), [-i for i in best[0]]):
            best = (union, paths)
    assert best is not None
    return best[0], best[1], {"parts": len(parts)}


# ---------------------------------------------------------------------------
# general case


def _bfs_path(G: EmbeddedPlanarGraph, s: int, t: int, allowed: set[int]) -> list[int] | None:
    if s not in allowed or t not in allowed:
        return None
    prev = {s: None}
    q = deque([s])
    while q:
        u = q.popleft()
        if u == t:
            out = [t]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return out[::-1]
        for v in sorted(G.neighbors(u)):
            if v in allowed and v not in prev:
                prev[v] = u
                q.append(v)
    return None


def _outer_dart_of(G: EmbeddedPlanarGraph, outer: int, sub: EmbeddedPlanarGraph) -> Dart:
    f = locate_face(G, outer, sub)
    if f is None:
        raise PreconditionViolated("sub-embedding has no edges")
    return sub.faces[f][0]


class _BlockTree:
    def __init__(self, G: EmbeddedPlanarGraph, comp: set[int]):
        nxg = nx.Graph()
        nxg.add_nodes_from(comp)
        nxg.add_edges_from((u, v) for u, v in G.edges() if u in comp)
        self.blocks = sorted((frozenset(b) for b in nx.biconnected_components(nxg)), key=lambda b: (min(b), len(b)))
        self.cuts = sorted(nx.articulation_points(nxg))


def _solve_component(G: EmbeddedPlanarGraph, outer: int, comp: set[int], pairs: list[Pair], stats: dict):
    """Routed (index, path) list for the pairs inside one connected component."""
    H = G.induced(comp)
    tree = _BlockTree(G, comp)
    terms = {x for p in pairs for x in p}
    holder = [b for b in tree.blocks if terms <= b]
    if holder:
        B = holder[0]
        GB = G.induced(B)
        dart = _outer_dart_of(G, outer, GB)
        idx, paths, info = _solve_2connected(GB, dart, pairs)
        stats.setdefault("branches", []).append("2-connected")
        stats["parts"] = stats.get("parts", 0) + info["parts"]
        routed = list(zip(idx, paths))
    else:
        stats.setdefault("branches", []).append("block-tree")
        routed = _block_tree(G, outer, H, tree, pairs, stats)
    # single pair fallback
    if not routed:
        for i, (s, t) in enumerate(pairs):
            path = _bfs_path(H, s, t, comp)
            if path is not None:
                stats.setdefault("branches", []).append("single-pair")
                return [(i, path)]
    return routed


def _block_tree(G, outer, H, tree: _BlockTree, pairs: list[Pair], stats: dict):
    blocks = tree.blocks
    r = tree.cuts[0]
    nodes_b = [("b", i) for i in range(len(blocks))]
    adj: dict = {("c", c): [] for c in tree.cuts}
    for i, b in enumerate(blocks):
        adj[("b", i)] = []
        for c in tree.cuts:
            if c in b:
                adj[("b", i)].append(("c", c))
                adj[("c", c)].append(("b", i))
    root = ("c", r)
    parent = {root: None}
    depth = {root: 0}
    order = [root]
    q = deque([root])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                depth[v] = depth[u] + 1
                order.append(v)
                q.append(v)
    children: dict = {u: [] for u in order}
    for u in order:
        if parent[u] is not None:
            children[parent[u]].append(u)
    alive = {b for b in nodes_b}

    def subtree_vertices(u) -> set[int]:
        out: set[int] = set()
        stack = [u]
        while stack:
            x = stack.pop()
            if x[0] == "b" and x in alive:
                out |= blocks[x[1]]
            stack.extend(children[x])
        return out

    discarded = [i for i, p in enumerate(pairs) if r in p]
    stats["discarded_root_pairs"] = [list(pairs[i]) for i in discarded]
    remaining = [i for i in range(len(pairs)) if i not in set(discarded)]
    routed: list[tuple[int, list[int]]] = []
    while remaining:
        cand = None
        for bnode in sorted(alive, key=lambda x: (-depth[x], x[1])):
            VB = subtree_vertices(bnode) - {parent[bnode][1]}
            if any(set(pairs[i]) <= VB for i in remaining):
                cand = (bnode, VB)
                break
        if cand is None:
            break
        bnode, VB = cand
        pB = parent[bnode][1]
        root_verts = subtree_vertices(root)
        MB = [i for i in remaining if set(pairs[i]) <= VB]
        MBp = [i for i in remaining if i not in MB and (pairs[i][0] in VB) != (pairs[i][1] in VB)
               and set(pairs[i]) <= root_verts]
        gone = set(MB) | set(MBp)
        remaining = [i for i in remaining if i not in gone]
        B = blocks[bnode[1]]
        projected = []
        qpaths = []
        for i in MB:
            ends = []
            for x in pairs[i]:
                if x in B:
                    ends.append((x, [x]))
                    continue
                for c in children[bnode]:
                    Vc = subtree_vertices(c)
                    if x in Vc:
                        path = _bfs_path(H, x, c[1], Vc)
                        assert path is not None
                        ends.append((c[1], path))
                        break
                else:
                    raise AssertionError("terminal outside the block subtree")
            projected.append((ends[0][0], ends[1][0]))
            qpaths.append((ends[0][1], ends[1][1]))
        GB = G.induced(B)
        dart = _outer_dart_of(G, outer, GB)
        idx, paths, _ = _solve_2connected(GB, dart, projected)
        chosen = list(zip(idx, paths))
        if len(chosen) == 1 and pB in chosen[0][1]:
            j = chosen[0][0]
            alt = _bfs_path(GB, *projected[j], set(B) - {pB})
            chosen = [] if alt is None else [(j, alt)]
        elif len(chosen) > 1:
            chosen = [(j, p) for j, p in chosen if pB not in p]
        if not chosen:
            for j, pr in enumerate(projected):
                alt = _bfs_path(GB, *pr, set(B) - {pB})
                if alt is not None:
                    chosen = [(j, alt)]
                    break
        for j, path in chosen:
            qs, qt = qpaths[j]
            full = qs + path[1:] + qt[::-1][1:]
            routed.append((MB[j], full))
        # delete the subtree below and including this block
        stack = [bnode]
        while stack:
            x = stack.pop()
            alive.discard(x)
            stack.extend(children[x])
    return routed


def solve_disc(inst: DiscInstance) -> Routing:
    """Routing of a disc instance, component by component."""
    G = inst.graph
    pairs = list(inst.demands)
    stats: dict = {"algorithm": "disc"}
    if not pairs:
        return make_routing(pairs, [], **stats)
    inst.check()
    routed: list[tuple[Pair, list[int]]] = []
    for comp in sorted(G.components(), key=min):
        idx = [i for i, p in enumerate(pairs) if p[0] in comp and p[1] in comp]
        if not idx:
            continue
        sub = [pairs[i] for i in idx]
        if len(comp) == 1:
            routed.append((sub[0], [sub[0][0]]))
            continue
        outer = inst.component_outer_face(comp)
        for j, path in _solve_component(G, outer, comp, sub, stats):
            routed.append((sub[j], path))
    stats["k"] = len(pairs)
    log.info("disc: routed %d of %d pairs", len(routed), len(pairs))
    return make_routing(pairs, routed, **stats)
