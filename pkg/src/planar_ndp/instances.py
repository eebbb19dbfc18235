"""Problem instances on a disc and on a cylinder."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionViolated
from .planar_core import Dart, EmbeddedPlanarGraph

Pair = tuple[int, int]


@dataclass(frozen=True)
class DiscInstance:
    """A plane graph whose outer face is given by a dart; every terminal must
    lie on the boundary of that face."""

    graph: EmbeddedPlanarGraph
    outer_dart: Dart
    demands: tuple[Pair, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple((int(s), int(t)) for s, t in self.demands))
        object.__setattr__(self, "outer_dart", tuple(self.outer_dart))

    @property
    def outer_face(self) -> int:
        return self.graph.face_of(self.outer_dart)

    @property
    def terminals(self) -> set[int]:
        return {x for p in self.demands for x in p}

    def component_outer_face(self, comp: set[int]) -> int | None:
        """Outer face of one connected component.

        The component holding ``outer_dart`` uses the face of that dart. Any
        other component sits inside it as an island, and its outer face is
        the face meeting all of its terminals (the smallest id when several
        do). Returns ``None`` for an edgeless component.
        """
        G = self.graph
        if self.outer_dart[0] in comp:
            return self.outer_face
        faces = sorted({G.face_of_dart[(u, v)] for v in comp for u in G.rotations[v]})
        if not faces:
            return None
        terms = {x for p in self.demands for x in p if x in comp}
        for f in faces:
            if terms <= set(G.face_vertices(f)):
                return f
        raise PreconditionViolated(f"terminals {sorted(terms)} of one component share no face")

    def check(self) -> None:
        G = self.graph
        for comp in G.components():
            f = self.component_outer_face(comp)
            on = comp if f is None else set(G.face_vertices(f))
            for p in self.demands:
                for x in p:
                    if x in comp and x not in on:
                        raise PreconditionViolated(f"terminal {x} is not on the outer face")

    def with_demands(self, demands) -> "DiscInstance":
        return DiscInstance(self.graph, self.outer_dart, tuple(demands))


@dataclass(frozen=True)
class CylinderInstance:
    """Sources on the cuff face of ``cuff1_dart``, sinks on that of
    ``cuff2_dart``."""

    graph: EmbeddedPlanarGraph
    cuff1_dart: Dart
    cuff2_dart: Dart
    demands: tuple[Pair, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple((int(s), int(t)) for s, t in self.demands))
        object.__setattr__(self, "cuff1_dart", tuple(self.cuff1_dart))
        object.__setattr__(self, "cuff2_dart", tuple(self.cuff2_dart))

    @property
    def cuff1(self) -> int:
        return self.graph.face_of(self.cuff1_dart)

    @property
    def cuff2(self) -> int:
        return self.graph.face_of(self.cuff2_dart)

    def check(self) -> None:
        if self.cuff1 == self.cuff2:
            raise PreconditionViolated("the two cuffs must be different faces")
        on1 = set(self.graph.face_vertices(self.cuff1))
        on2 = set(self.graph.face_vertices(self.cuff2))
        if on1 & on2:
            raise PreconditionViolated("cuffs share a vertex")
        for s, t in self.demands:
            if s not in on1 or t not in on2:
                raise PreconditionViolated(f"pair {(s, t)} does not run from cuff 1 to cuff 2")

    def with_demands(self, demands) -> "CylinderInstance":
        return CylinderInstance(self.graph, self.cuff1_dart, self.cuff2_dart, tuple(demands))
