"""Shortest-path-first baseline."""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .routing import Routing, make_routing

Pair = tuple[int, int]


def _bfs_path(G, s: int, t: int, dead: set[int]) -> list[int] | None:
    if s in dead or t in dead:
        return None
    prev = {s: None}
    q = deque([s])
    while q:
        u = q.popleft()
        if u == t:
            path = [t]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for v in sorted(G.neighbors(u)):
            if v not in prev and v not in dead:
                prev[v] = u
                q.append(v)
    return None


def greedy_ndp(G, demands: Sequence[Pair]) -> Routing:
    """Route the shortest remaining demand path, delete its vertices, repeat.

    Ties go to the pair listed first.
    """
    demands = [tuple(p) for p in demands]
    remaining = list(demands)
    dead: set[int] = set()
    routed = []
    while remaining:
        best = None
        for p in remaining:
            path = _bfs_path(G, p[0], p[1], dead)
            if path is not None and (best is None or len(path) < len(best[1])):
                best = (p, path)
        if best is None:
            break
        routed.append(best)
        dead.update(best[1])
        remaining.remove(best[0])
    return make_routing(demands, routed, algorithm="greedy")
