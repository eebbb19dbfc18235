"""Node-disjoint paths between the two cuffs of a cylinder.

Sources lie on the boundary of the face of ``cuff1_dart`` and sinks on the
face of ``cuff2_dart``. As on the disc, each distinct terminal receives a
pendant inside its cuff face, the cuff faces fall apart into slivers, and
the W-points of a cuff alternate pendant, sliver, pendant, ... in walk order.

The solver runs over guesses of the optimum and of one routed pair
``(s*, t*)``. For each guess it either cuts the cylinder along the shortest
curve joining the cuffs and solves the resulting disc instance, or selects a
non-crossing set through a DPSP instance whose constraints are vertex-cut
values, keeps every eighth selected pair, and routes those by walking around
tight concentric cycles drawn around the first cuff.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .dpsp import Constraint, DpspInstance, solve_dpsp
from .errors import (
    DepthUnavailable,
    InternalAssertion,
    NoEnclosingCycle,
    PreconditionViolated,
    ShiftTooLarge,
)
from .harness.routing import Routing, make_routing
from .instances import CylinderInstance, DiscInstance
from .ndp_disc import solve_disc
from .planar_core import (
    Dart,
    EmbeddedPlanarGraph,
    add_apex,
    locate_face,
    menger_vertex_disjoint,
    tight_concentric_cycles,
)
from .routing_primitives import is_monotone, reroute_monotone_family

log = logging.getLogger(__name__)

Pair = tuple[int, int]
INF = float("inf")

STRIDE = 8
SMALL_SELECTION = 10


def _face_walk(G: EmbeddedPlanarGraph, dart: Dart) -> list[Dart]:
    walk = list(G.faces[G.face_of(dart)])
    i = walk.index(tuple(dart))
    return walk[i:] + walk[:i]


def _first_corners(G: EmbeddedPlanarGraph, dart: Dart, wanted: Iterable[int]) -> list[Dart]:
    """For each wanted vertex the first walk dart entering it, in walk order."""
    wanted = set(wanted)
    out = []
    seen = set()
    for d in _face_walk(G, dart):
        if d[1] in wanted and d[1] not in seen:
            seen.add(d[1])
            out.append(d)
    missing = wanted - seen
    if missing:
        raise PreconditionViolated(f"vertices {sorted(missing)} are not on the cuff face")
    return out


class CuffModel:
    """Pendant-normalised cylinder with W-points on both cuffs.

    ``w1`` and ``w2`` list the W-points of each cuff in walk order as radial
    node ids; ``w1_vertex[i]`` is the terminal at W-point ``i`` (``None`` for
    a sliver). Node ids follow the disc model: vertices, then faces of ``H``,
    then slivers.
    """

    def __init__(self, G: EmbeddedPlanarGraph, cuff1: Dart, cuff2: Dart, sources, sinks):
        self.G = G
        rots = [list(r) for r in G.rotations]
        nxt = G.vertex_count
        self.base: dict[int, int] = {}
        self.pendant_of: list[dict[int, int]] = [{}, {}]
        for side, (dart, verts) in enumerate(((cuff1, sources), (cuff2, sinks))):
            for (u, x) in _first_corners(G, dart, verts):
                r = rots[x]
                r.insert(r.index(u) + 1, nxt)
                rots.append([x])
                self.base[nxt] = x
                self.pendant_of[side][x] = nxt
                nxt += 1
        self.H = EmbeddedPlanarGraph(nxt, rots, check=False)
        self.cuff_face = (self.H.face_of(cuff1), self.H.face_of(cuff2))
        self.N = self.H.vertex_count
        self.F = len(self.H.faces)
        self.adj: list[list[int]] = [[] for _ in range(self.N + self.F)]
        for v in range(self.N):
            for f in sorted(set(self.H.faces_at(v))):
                if f not in self.cuff_face:
                    self.adj[v].append(self.N + f)
                    self.adj[self.N + f].append(v)
        self.w: list[list[int]] = []
        self.w_vertex: list[list[int | None]] = []
        for side, dart in enumerate((cuff1, cuff2)):
            nodes, verts = self._split(dart, set(self.pendant_of[side].values()))
            self.w.append(nodes)
            self.w_vertex.append(verts)

    def _split(self, dart: Dart, pendants: set[int]) -> tuple[list[int], list[int | None]]:
        walk = _face_walk(self.H, dart)
        k0 = next(i for i, d in enumerate(walk) if d[0] in pendants)
        walk = walk[k0:] + walk[:k0]
        nodes: list[int] = []
        verts: list[int | None] = []
        cur: list[int] = []
        for a, b in walk:
            if a in pendants:
                nodes.append(a)
                verts.append(self.base[a])
                sliver = len(self.adj)
                self.adj.append([])
                nodes.append(sliver)
                verts.append(None)
                cur = [sliver]
                self.adj[sliver].append(a)
                self.adj[a].append(sliver)
            if b not in pendants and b not in self.adj[cur[0]]:
                self.adj[cur[0]].append(b)
                self.adj[b].append(cur[0])
        return nodes, verts

    def shortest_cross_curve(self) -> tuple[int, list[int]]:
        """Length and vertex set of a shortest curve from a W-point of the first
        cuff to one of the second (vertices of ``G``; pendants map to their
        terminals)."""
        N = self.N
        dist = [INF] * len(self.adj)
        prev: list[int | None] = [None] * len(self.adj)
        dq: deque[int] = deque()
        for node in self.w[0]:
            dist[node] = 1 if node < N else 0
            (dq.append if node < N else dq.appendleft)(node)
        while dq:
            u = dq.popleft()
            for v in self.adj[u]:
                w = 1 if v < N else 0
                if dist[u] + w < dist[v]:
                    dist[v] = dist[u] + w
                    prev[v] = u
                    (dq.append if w else dq.appendleft)(v)
        end = min(self.w[1], key=lambda x: (dist[x], x))
        if dist[end] == INF:
            return INF, []  # type: ignore[return-value]
        verts = []
        cur: int | None = end
        while cur is not None:
            if cur < N:
                verts.append(self.base.get(cur, cur))
            cur = prev[cur]
        return int(dist[end]), sorted(set(verts))


# ---------------------------------------------------------------------------
# DPSP reduction


@dataclass
class CylinderReduction:
    inst: DpspInstance
    pair_index: dict[Pair, list[int]]
    sigma: list[int | None]
    sigma2: list[int | None]


class _CutCache:
    def __init__(self, G: EmbeddedPlanarGraph):
        self.adj = G.adjacency()
        self.memo: dict[tuple[frozenset[int], frozenset[int]], int] = {}

    def value(self, A: frozenset[int], B: frozenset[int]) -> int:
        key = (A, B)
        if key not in self.memo:
            paths, _ = menger_vertex_disjoint(self.adj, A, B)
            self.memo[key] = len(paths)
        return self.memo[key]


def _line(w: list, start: int, backward: bool) -> list:
    L = len(w)
    step = -1 if backward else 1
    return [w[(start + step * p) % L] for p in range(L)]


def _arc_constraints(kind, line, ends, cuts, k, others):
    """Cut-valued constraints for every pair of points of one cuff line."""
    L = len(line)
    out = []
    for p in range(L):
        for q in range(p + 1, L):
            inner = frozenset(v for v in line[p:q + 1] if v is not None and v in ends)
            outer = frozenset(v for v in line[q:] + line[:p + 1] if v is not None and v in ends)
            if inner:
                w = cuts.value(inner, others)
                if w < k:
                    out.append(Constraint(kind, p, q, max(1, w)))
            if outer:
                w = cuts.value(outer, others)
                if w < k:
                    # the outer arc wraps past position 0; cover its two halves
                    for a, b in ((0, p), (q, L - 1)):
                        if a < b:
                            out.append(Constraint(kind, a, b, max(1, w)))
    return out


def build_cylinder_dpsp(inst: CylinderInstance, opt_guess: int, s_star: int, t_star: int) -> DpspInstance:
    """DPSP instance for one guess; ``s_star`` and ``t_star`` are vertices.

    Positions on the two lines are W-point indices; see :func:`cylinder_reduction`
    for the map back to demand pairs.
    """
    return cylinder_reduction(inst, opt_guess, s_star, t_star).inst


def cylinder_reduction(
    inst: CylinderInstance,
    opt_guess: int,
    s_star: int,
    t_star: int,
    model: CuffModel | None = None,
    cuts: _CutCache | None = None,
) -> CylinderReduction:
    """:func:`build_cylinder_dpsp` together with both W-point lines and the
    map from DPSP pairs to demand indices."""
    pairs = list(inst.demands)
    k = len(pairs)
    if opt_guess < 1:
        raise PreconditionViolated("the optimum guess must be at least 1")
    if (s_star, t_star) not in pairs:
        raise PreconditionViolated(f"{(s_star, t_star)} is not a demand pair")
    S = frozenset(s for s, _ in pairs)
    T = frozenset(t for _, t in pairs)
    if model is None:
        model = CuffModel(inst.graph, inst.cuff1_dart, inst.cuff2_dart, S, T)
    if cuts is None:
        cuts = _CutCache(inst.graph)
    w1, w2 = model.w_vertex
    # the first cuff is read against its walk, the second along it, so that
    # both lines turn the same way round the cylinder
    sigma = _line(w1, w1.index(s_star), backward=True)
    sigma2 = _line(w2, w2.index(t_star), backward=False)
    pos1 = {v: p for p, v in enumerate(sigma) if v is not None}
    pos2 = {v: q for q, v in enumerate(sigma2) if v is not None}
    dp_pairs = []
    index: dict[Pair, list[int]] = {}
    for i, (s, t) in enumerate(pairs):
        key = (pos1[s], pos2[t])
        dp_pairs.append(key)
        index.setdefault(key, []).append(i)
    cons = [Constraint(1, 0, len(sigma) - 1, max(1, opt_guess // 2))]
    cons += _arc_constraints(1, sigma, S, cuts, k, T)
    cons += _arc_constraints(2, sigma2, T, cuts, k, S)
    return CylinderReduction(DpspInstance(len(sigma), len(sigma2), dp_pairs, cons), index, sigma, sigma2)


# ---------------------------------------------------------------------------
# routing a thinned selection


def pair_by_rotation(
    paths: Sequence[Sequence[int]],
    cycles: Sequence[Sequence[int]],
    demands: Sequence[Pair],
) -> Routing:
    """Route ``floor(kappa/2)`` demand pairs along monotone paths.

    ``paths[i]`` runs from ``a_i`` to ``b_i`` with ``a_0, a_1, ...`` in
    circular order round the first cuff, and ``cycles`` are ``Z_1..Z_kappa``
    from the inside out. Pair ``(a_j, b_{j+z})`` is routed by the start of
    ``P_j``, an arc of ``Z_{kappa-j}`` (0-based ``j``) and the end of
    ``P_{j+z}``.
    """
    kap = len(paths)
    if kap == 0:
        return make_routing(demands, [], algorithm="rotation", shift=0)
    if len(cycles) < kap:
        raise PreconditionViolated("need one cycle per path")
    paths = [list(p) for p in paths]
    a = [p[0] for p in paths]
    b = [p[-1] for p in paths]
    partner = {s: t for s, t in demands}
    b_index = {t: i for i, t in enumerate(b)}
    if a[0] not in partner or partner[a[0]] not in b_index:
        raise PreconditionViolated("the first path's source has no pair among the path ends")
    z = (b_index[partner[a[0]]]) % kap
    order = list(range(kap))
    if z > kap / 2:
        order = [0] + order[:0:-1]
        z = kap - z
        if z > kap / 2:
            raise ShiftTooLarge(f"shift {z} exceeds half of {kap}")
    P = [paths[i] for i in order]
    on_path = {}
    for i, p in enumerate(P):
        for v in p:
            on_path[v] = i
    out = []
    for j in range(kap // 2):
        src, dst = P[j], P[j + z]
        if partner.get(src[0]) != dst[-1]:
            raise ShiftTooLarge(f"pair of {src[0]} does not follow the uniform shift {z}")
        Z = list(cycles[kap - j - 1])
        zs = set(Z)
        i1 = next(i for i, v in enumerate(src) if v in zs)
        i2 = max(i for i, v in enumerate(dst) if v in zs)
        head, tail = src[: i1 + 1], dst[i2:]
        u, v = src[i1], dst[i2]
        allowed = set(range(j, j + z + 1))
        arc = None
        for forward in (True, False):
            cand = _cycle_arc(Z, u, v, forward)
            if all(on_path.get(x, j) in allowed for x in cand):
                arc = cand
                break
        if arc is None:
            raise InternalAssertion(f"no arc of the cycle joins path {j} to path {j + z} cleanly")
        full = head[:-1] + arc + tail[1:]
        out.append(((src[0], dst[-1]), full))
    return make_routing(demands, out, algorithm="rotation", shift=z)


def _cycle_arc(Z: list[int], u: int, v: int, forward: bool) -> list[int]:
    m = len(Z)
    i = Z.index(u)
    arc = [u]
    while arc[-1] != v:
        i = (i + (1 if forward else -1)) % m
        arc.append(Z[i])
    return arc


@dataclass
class RotationTrace:
    """What the rotation construction built, kept for checks and stats."""

    cycles: list[tuple[int, ...]] = field(default_factory=list)
    linkage: list[list[int]] = field(default_factory=list)
    monotone: list[list[int]] = field(default_factory=list)


def route_by_rotation(
    inst: CylinderInstance,
    selected: Sequence[Pair],
    trace: RotationTrace | None = None,
) -> list[tuple[Pair, list[int]]]:
    """Route half of a non-crossing set whose sources have a disjoint linkage
    to its sinks, via concentric cycles round the first cuff."""
    G = inst.graph
    selected = [tuple(p) for p in selected]
    kap = len(selected)
    if kap == 0:
        return []
    S2 = [s for s, _ in selected]
    T2 = [t for _, t in selected]
    linkage, _ = menger_vertex_disjoint(G, S2, T2)
    if len(linkage) != kap:
        raise InternalAssertion(f"only {len(linkage)} disjoint paths for {kap} selected sources")
    S_all = {s for s, _ in inst.demands}
    corners = _first_corners(G, inst.cuff1_dart, S_all)
    H, apex = add_apex(G, corners)
    outer = H.face_of(inst.cuff2_dart)
    try:
        cycles = tight_concentric_cycles(H, outer, apex, kap)
    except (DepthUnavailable, NoEnclosingCycle) as e:
        raise InternalAssertion(f"concentric cycles round the cuff ran out: {e}") from None
    T_all = {t for _, t in inst.demands}
    for Z in cycles:
        if set(Z) & T_all:
            raise InternalAssertion("a concentric cycle touches the second cuff")
    oriented = [[apex] + (p if p[0] in set(S2) else p[::-1]) for p in linkage]
    target = ("f", outer)
    fam = reroute_monotone_family(H, [apex], cycles, oriented, target, core_ref=apex)
    mono = [p[1:] for p in fam.paths]
    walk_pos = {d[1]: i for i, d in enumerate(corners)}
    mono.sort(key=lambda p: walk_pos[p[0]])
    for p in mono:
        for Z in cycles:
            if not is_monotone(p, Z):
                raise InternalAssertion("rerouted linkage is not monotone")
    if trace is not None:
        trace.cycles = list(cycles)
        trace.linkage = [list(p) for p in linkage]
        trace.monotone = [list(p) for p in mono]
    return pair_by_rotation(mono, cycles, selected).routed


# ---------------------------------------------------------------------------
# solver


def _single_pair(G: EmbeddedPlanarGraph, pairs: Sequence[Pair]) -> list[tuple[Pair, list[int]]]:
    for s, t in pairs:
        prev = {s: None}
        q = deque([s])
        while q:
            u = q.popleft()
            if u == t:
                path = [t]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return [((s, t), path[::-1])]
            for v in sorted(G.neighbors(u)):
                if v not in prev:
                    prev[v] = u
                    q.append(v)
    return []


def _cut_to_disc(inst: CylinderInstance, curve: list[int]) -> DiscInstance | None:
    G = inst.graph
    Gd = G.delete_vertices(curve)
    f = locate_face(G, inst.cuff1, Gd)
    if f is None:
        return None
    dead = set(curve)
    pairs = [p for p in inst.demands if not set(p) & dead]
    disc = DiscInstance(Gd, Gd.faces[f][0], tuple(pairs))
    try:
        disc.check()
    except PreconditionViolated:
        return None
    return disc


def _better(new, old) -> bool:
    if old is None:
        return True
    if len(new) != len(old):
        return len(new) > len(old)
    return False


def solve_cylinder(
    inst: CylinderInstance,
    opt_guesses: Iterable[int] | None = None,
    star_guesses: Iterable[Pair] | None = None,
    small_selection: int = SMALL_SELECTION,
) -> Routing:
    """Best routing over all guesses of the optimum and of one routed pair.

    Guesses above the number of vertex-disjoint source-sink paths cannot be
    the optimum and are skipped.
    """
    inst.check()
    G = inst.graph
    pairs = list(inst.demands)
    stats: dict = {"algorithm": "cylinder", "guesses": 0, "disc_branch": 0, "dpsp_branch": 0,
                   "rotation_runs": 0, "max_flow_checks": 0, "small_selection": 0}
    if not pairs:
        return make_routing(pairs, [], **stats)
    best: list[tuple[Pair, list[int]]] | None = _single_pair(G, pairs)
    stats["branch"] = "single-pair"
    live = [p for p in pairs if _single_pair(G, [p])]
    if not live:
        return make_routing(pairs, [], **stats)
    sub = inst.with_demands(live)
    S = frozenset(s for s, _ in live)
    T = frozenset(t for _, t in live)
    flow_bound = len(menger_vertex_disjoint(G, S, T)[0])
    model = CuffModel(G, inst.cuff1_dart, inst.cuff2_dart, S, T)
    cuts = _CutCache(G)
    gamma_len, gamma = model.shortest_cross_curve()
    stats["gamma_length"] = gamma_len
    stats["flow_bound"] = flow_bound
    disc_result = None
    opts = range(1, len(live) + 1) if opt_guesses is None else opt_guesses
    stars = live if star_guesses is None else [tuple(p) for p in star_guesses]
    for opt in opts:
        if opt > flow_bound:
            continue
        for s_star, t_star in stars:
            stats["guesses"] += 1
            if gamma_len < -(-opt // 2):
                stats["disc_branch"] += 1
                if disc_result is None:
                    disc = _cut_to_disc(sub, gamma)
                    disc_result = [] if disc is None else solve_disc(disc).routed
                cand = disc_result
                branch = "disc"
            else:
                stats["dpsp_branch"] += 1
                cand = _dpsp_guess(sub, opt, s_star, t_star, model, cuts, stats, small_selection)
                branch = "rotation"
            if _better(cand, best):
                best = list(cand)
                stats["branch"] = branch
                stats["best_guess"] = [opt, s_star, t_star]
    log.info("cylinder: %d guesses, routed %d", stats["guesses"], len(best or []))
    return make_routing(pairs, best or [], **stats)


def _dpsp_guess(inst, opt, s_star, t_star, model, cuts, stats, small_selection):
    red = cylinder_reduction(inst, opt, s_star, t_star, model, cuts)
    chosen = sorted(solve_dpsp(red.inst))
    pairs = list(inst.demands)
    used: dict[Pair, int] = {}
    sel = []
    for c in chosen:
        i = used.get(c, 0)
        used[c] = i + 1
        sel.append(pairs[red.pair_index[c][i]])
    stride = sel[STRIDE - 1::STRIDE]
    if stride:
        # the thinned selection always has a full disjoint linkage
        stats["max_flow_checks"] += 1
        n_paths = len(menger_vertex_disjoint(inst.graph, [s for s, _ in stride], [t for _, t in stride])[0])
        if n_paths != len(stride):
            raise InternalAssertion(f"thinned selection of {len(stride)} pairs has only {n_paths} disjoint paths")
    if len(sel) <= small_selection or len(stride) < 2:
        stats["small_selection"] += 1
        return _single_pair(inst.graph, sel) if sel else []
    stats["rotation_runs"] += 1
    return route_by_rotation(inst, stride)
