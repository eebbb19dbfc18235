"""Routing results and their validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

Pair = tuple[int, int]


@dataclass
class Routing:
    """Routed pairs with their vertex paths, the pairs left unrouted and solver
    statistics."""

    routed: list[tuple[Pair, list[int]]] = field(default_factory=list)
    unrouted: list[Pair] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.routed)

    @property
    def pairs(self) -> list[Pair]:
        return [p for p, _ in self.routed]

    @property
    def paths(self) -> list[list[int]]:
        return [list(path) for _, path in self.routed]

    def to_json(self) -> dict:
        stats = dict(self.stats)
        stats.setdefault("opt_hint", None)
        stats.setdefault("algorithm", "unknown")
        stats["routed_count"] = len(self.routed)
        return {
            "routed": [{"s": s, "t": t, "path": list(path)} for (s, t), path in self.routed],
            "stats": stats,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Routing":
        routed = [((int(r["s"]), int(r["t"])), [int(x) for x in r["path"]]) for r in data.get("routed", [])]
        return cls(routed=routed, stats=dict(data.get("stats", {})))


def make_routing(
    demands: Sequence[Pair],
    routed: Sequence[tuple[Pair, Sequence[int]]],
    **stats,
) -> Routing:
    done = [(tuple(p), list(path)) for p, path in routed]
    remaining = list(demands)
    for p, _ in done:
        if p in remaining:
            remaining.remove(p)
    return Routing(routed=done, unrouted=remaining, stats=dict(stats))


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate_routing(G, demands: Sequence[Pair], R: Routing) -> Violation | None:
    """Return the first violated routing invariant, or ``None`` when valid.

    ``G`` may be an embedded graph or any object with ``has_edge``.
    """
    available = list(demands)
    owner: dict[int, int] = {}
    for idx, (pair, path) in enumerate(R.routed):
        if pair not in available:
            return Violation("pair", f"{pair} is not an available demand pair")
        available.remove(pair)
        if not path:
            return Violation("endpoint", f"empty path for {pair}")
        s, t = pair
        if path[0] != s or path[-1] != t:
            return Violation("endpoint", f"path for {pair} runs {path[0]}..{path[-1]}")
        if len(set(path)) != len(path):
            return Violation("simple", f"path for {pair} repeats a vertex")
        for a, b in zip(path, path[1:]):
            if not G.has_edge(a, b):
                return Violation("edge", f"{a}-{b} is not an edge")
        for v in path:
            if v in owner:
                return Violation("shared vertex", f"vertex {v} used by paths {owner[v]} and {idx}")
            owner[v] = idx
    return None
