"""Exhaustive disjoint-path search.

:func:`route_pairs` decides whether a given list of pairs can be routed by
vertex-disjoint paths and returns the paths. It grows one path at a time over
bitmasks and only considers chordless paths that avoid every other terminal;
any routing can be shortened to one of that form, so nothing is lost. After
every step each pair still to be routed must remain connected in what is
left of the graph.

:func:`exact_ndp` finds the largest routable subset of a demand set by trying
subsets from the largest size down.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from ..errors import InputError, SearchExhausted, TooLarge
from .routing import Routing, make_routing

Pair = tuple[int, int]

EXACT_MAX_VERTICES = 30
EXACT_MAX_PAIRS = 6


def _adjacency(G) -> list[int]:
    n = G.vertex_count
    nb = [0] * n
    for u in range(n):
        for v in G.neighbors(u):
            nb[u] |= 1 << v
    return nb


def _reach(nb: list[int], src: int, free: int) -> int:
    """Mask of vertices reachable from ``src`` through ``free`` (``src`` included)."""
    seen = 1 << src
    frontier = seen
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & -f
            grow |= nb[low.bit_length() - 1]
            f ^= low
        grow &= free & ~seen
        seen |= grow
        frontier = grow
    return seen


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Search:
    def __init__(self, G, pairs: Sequence[Pair], allowed: int | None, max_steps: int | None):
        self.nb = _adjacency(G)
        self.n = G.vertex_count
        self.pairs = [tuple(p) for p in pairs]
        full = (1 << self.n) - 1
        self.allowed = full if allowed is None else allowed
        self.term = 0
        for s, t in self.pairs:
            self.term |= (1 << s) | (1 << t)
        self.max_steps = max_steps
        self.steps = 0
        self.failed: set[tuple[int, int]] = set()

    def _tick(self):
        self.steps += 1
        if self.max_steps is not None and self.steps > self.max_steps:
            raise SearchExhausted(f"disjoint-path search passed {self.max_steps} steps")

    def _others_ok(self, i: int, used: int) -> bool:
        """Pairs after ``i`` are each still connected avoiding ``used``."""
        for s, t in self.pairs[i:]:
            own = (1 << s) | (1 << t)
            free = self.allowed & ~used & ~(self.term & ~own)
            if not (_reach(self.nb, s, free) >> t) & 1:
                return False
        return True

    def run(self) -> list[list[int]] | None:
        if not self._others_ok(0, 0):
            return None
        return self._pair(0, 0)

    def _pair(self, i: int, used: int) -> list[list[int]] | None:
        if i == len(self.pairs):
            return []
        if (i, used) in self.failed:
            return None
        s, t = self.pairs[i]
        own = (1 << s) | (1 << t)
        free = self.allowed & ~used & ~(self.term & ~own)
        out = self._extend(i, used, free, t, [s], 1 << s)
        if out is None:
            self.failed.add((i, used))
        return out

    def _extend(self, i, used, free, t, path, pmask) -> list[list[int]] | None:
        self._tick()
        cur = path[-1]
        nb = self.nb
        if cur == t:
            new_used = used | pmask
            if not self._others_ok(i + 1, new_used):
                return None
            rest = self._pair(i + 1, new_used)
            return None if rest is None else [list(path)] + rest
        if (nb[cur] >> t) & 1:
            options = [t]
        else:
            before = pmask & ~(1 << cur)
            options = [x for x in _bits(nb[cur] & free & ~pmask) if not nb[x] & before]
        for x in options:
            pm = pmask | (1 << x)
            if x != t:
                # the remaining stretch must still reach t
                if not (_reach(nb, x, free & ~pmask) >> t) & 1:
                    continue
            path.append(x)
            res = self._extend(i, used, free, t, path, pm)
            path.pop()
            if res is not None:
                return res
        return None


def _check_pairs(pairs: Sequence[Pair], n: int) -> None:
    for s, t in pairs:
        if not (0 <= s < n and 0 <= t < n):
            raise InputError(f"pair {(s, t)} out of range")


def route_pairs(
    G,
    pairs: Sequence[Pair],
    allowed: set[int] | None = None,
    max_steps: int | None = None,
    keep_order: bool = False,
) -> list[list[int]] | None:
    """Vertex-disjoint paths for every pair in order, or ``None``.

    A pair ``(s, s)`` is routed by the one-vertex path ``[s]``. ``allowed``
    restricts the vertices the paths may use. ``max_steps`` caps the search
    and raises :class:`SearchExhausted` when passed. Pairs are searched
    shortest first unless ``keep_order`` is set.
    """
    pairs = [tuple(p) for p in pairs]
    _check_pairs(pairs, G.vertex_count)
    ends = [x for p in pairs for x in set(p)]
    if len(ends) != len(set(ends)):
        return None
    mask = None
    if allowed is not None:
        mask = 0
        for v in allowed:
            mask |= 1 << v
        for x in ends:
            if not (mask >> x) & 1:
                return None
    order = list(range(len(pairs)))
    if not keep_order:
        order.sort(key=lambda i: _hop_distance(G, *pairs[i]))
    found = _Search(G, [pairs[i] for i in order], mask, max_steps).run()
    if found is None:
        return None
    paths: list[list[int]] = [[] for _ in pairs]
    for i, p in zip(order, found):
        paths[i] = p
    return paths


def _hop_distance(G, s: int, t: int) -> int:
    nb = _adjacency(G)
    full = (1 << G.vertex_count) - 1
    seen = 1 << s
    frontier = seen
    d = 0
    while frontier and not (seen >> t) & 1:
        grow = 0
        for v in _bits(frontier):
            grow |= nb[v]
        grow &= full & ~seen
        seen |= grow
        frontier = grow
        d += 1
    return d if (seen >> t) & 1 else G.vertex_count + 1


def exact_ndp(
    G,
    demands: Sequence[Pair],
    max_vertices: int = EXACT_MAX_VERTICES,
    max_pairs: int = EXACT_MAX_PAIRS,
) -> tuple[int, Routing]:
    """Maximum number of demand pairs routable by vertex-disjoint paths."""
    demands = [tuple(p) for p in demands]
    if G.vertex_count > max_vertices:
        raise TooLarge(f"exact oracle limited to {max_vertices} vertices, got {G.vertex_count}")
    if len(demands) > max_pairs:
        raise TooLarge(f"exact oracle limited to {max_pairs} pairs, got {len(demands)}")
    _check_pairs(demands, G.vertex_count)
    alone = [i for i, p in enumerate(demands) if route_pairs(G, [p]) is not None]
    for size in range(len(alone), 0, -1):
        for sub in itertools.combinations(alone, size):
            chosen = [demands[i] for i in sub]
            paths = route_pairs(G, chosen)
            if paths is not None:
                R = make_routing(demands, list(zip(chosen, paths)), algorithm="exact", opt_hint=size)
                return size, R
    return 0, make_routing(demands, [], algorithm="exact", opt_hint=0)
