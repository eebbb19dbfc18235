"""The demand pair selection problem.

Two disjoint directed lines ``sigma`` (length ``sigma_len``) and ``sigma2``
(length ``sigma2_len``) carry the sources and the sinks. Positions are
0-based. A selection is non-crossing when sources and sinks are strictly
increasing together, and must obey cardinality constraints of four kinds:

* kind 1 ``(a, b, w)``: at most ``w`` selected sources lie in ``[a, b]`` on sigma
* kind 2 ``(a, b, w)``: at most ``w`` selected sinks lie in ``[a, b]`` on sigma2
* kind 3 ``(a, b, w)``: at most ``w`` selected pairs have ``s <= a`` and ``t >= b``
* kind 4 ``(a, b, w)``: at most ``w`` selected pairs have ``s >= a`` and ``t <= b``

:func:`solve_dpsp` is an 8-approximation. Constraints are split into levels
by weight; a table per level records which interval pairs hold exactly
``2**j`` non-crossing pairs, built by merging two level ``j - 1`` entries that
sit one after the other. The largest stored set breaks every constraint by at
most a factor 4 and is at least half the optimum; keeping every fourth pair
then satisfies every constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BadParams, TooLarge, ViolationBoundExceeded

Pair = tuple[int, int]

BRUTE_FORCE_MAX_PAIRS = 20
# above this many interval-endpoint combinations the table keys are
# restricted to terminal positions, see _coordinates
FULL_GRID_LIMIT = 2500


@dataclass(frozen=True)
class Constraint:
    kind: int
    a: int
    b: int
    w: int

    def count(self, pairs: Iterable[Pair]) -> int:
        k, a, b = self.kind, self.a, self.b
        if k == 1:
            return sum(1 for s, _ in pairs if a <= s <= b)
        if k == 2:
            return sum(1 for _, t in pairs if a <= t <= b)
        if k == 3:
            return sum(1 for s, t in pairs if s <= a and t >= b)
        return sum(1 for s, t in pairs if s >= a and t <= b)

    def hits(self, pair: Pair) -> bool:
        return self.count([pair]) == 1


@dataclass
class DpspInstance:
    sigma_len: int
    sigma2_len: int
    pairs: list[Pair]
    constraints: list[Constraint] = field(default_factory=list)

    def __post_init__(self):
        self.pairs = [(int(s), int(t)) for s, t in self.pairs]
        self.constraints = [c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints]
        self.check()

    @property
    def k(self) -> int:
        return len(self.pairs)

    def check(self) -> None:
        n, m = self.sigma_len, self.sigma2_len
        if n < 0 or m < 0:
            raise BadParams("line lengths must be non-negative")
        for s, t in self.pairs:
            if not (0 <= s < n and 0 <= t < m):
                raise BadParams(f"pair {(s, t)} out of range")
        for c in self.constraints:
            if c.kind not in (1, 2, 3, 4):
                raise BadParams(f"constraint kind {c.kind}")
            if not 1 <= c.w <= max(1, self.k):
                raise BadParams(f"constraint weight {c.w} outside 1..{max(1, self.k)}")
            if c.kind == 1 and not (0 <= c.a < c.b < n):
                raise BadParams(f"kind 1 constraint needs a < b on sigma: {c}")
            if c.kind == 2 and not (0 <= c.a < c.b < m):
                raise BadParams(f"kind 2 constraint needs a < b on sigma2: {c}")
            if c.kind in (3, 4) and not (0 <= c.a < n and 0 <= c.b < m):
                raise BadParams(f"constraint endpoints out of range: {c}")


def pair_crossing(p: Pair, q: Pair) -> bool:
    (a, b), (c, d) = p, q
    return a == c or b == d or (a < c and d < b) or (c < a and b < d)


def is_non_crossing(pairs: Sequence[Pair]) -> bool:
    ps = sorted(pairs)
    return all(ps[i][0] < ps[i + 1][0] and ps[i][1] < ps[i + 1][1] for i in range(len(ps) - 1))


def satisfies(pairs: Sequence[Pair], K: Constraint) -> bool:
    return K.count(pairs) <= K.w


def satisfies_all(pairs: Sequence[Pair], constraints: Iterable[Constraint]) -> bool:
    return all(satisfies(pairs, K) for K in constraints)


def violation_factor(pairs: Sequence[Pair], constraints: Iterable[Constraint]) -> float:
    """Largest ratio of count to weight over the constraints."""
    return max((K.count(pairs) / K.w for K in constraints), default=0.0)


def thin_to_satisfy(
    pairs: Sequence[Pair], c: int, constraints: Iterable[Constraint] | None = None
) -> list[Pair]:
    """Keep the 1st, (c+1)-th, (2c+1)-th, ... pair in source order.

    When ``constraints`` is given the result is checked against them; a
    failure means the input broke some constraint by more than ``c``.
    """
    if c < 1:
        raise BadParams("c must be at least 1")
    ordered = sorted(pairs)
    out = ordered[::c]
    if constraints is not None:
        for K in constraints:
            if not satisfies(out, K):
                raise ViolationBoundExceeded(f"{K} still broken after keeping every {c}-th pair")
    return out


def _levels(constraints: Sequence[Constraint], r: int) -> list[list[Constraint]]:
    """``out[j]`` holds constraints with ``2**(j-1) <= w < 2**j`` for 1 <= j <= r."""
    out: list[list[Constraint]] = [[] for _ in range(r + 1)]
    for K in constraints:
        j = K.w.bit_length()
        if 1 <= j <= r:
            out[j].append(K)
    return out


def _coordinates(inst: DpspInstance) -> tuple[list[int], list[int]]:
    """Positions allowed as interval endpoints on each line.

    Every position is used unless the table would be too large, in which
    case only terminal positions are kept. The optimum's intervals start and
    end at terminals, so the guarantee is unaffected.
    """
    xs = list(range(inst.sigma_len))
    ys = list(range(inst.sigma2_len))
    if len(xs) * len(ys) > FULL_GRID_LIMIT:
        xs = sorted({s for s, _ in inst.pairs})
        ys = sorted({t for _, t in inst.pairs})
    if len(xs) * len(ys) > 4 * FULL_GRID_LIMIT:
        raise TooLarge(f"{len(xs)} x {len(ys)} interval endpoints")
    return xs, ys


def _good_mask(xs, ys, constraints: Sequence[Constraint]) -> np.ndarray:
    """Boolean ``[x, y, x2, y2]`` mask of good interval pairs for one level."""
    X = np.asarray(xs)
    Y = np.asarray(ys)
    n, m = len(X), len(Y)
    good = np.ones((n, n, m, m), dtype=bool)
    lo, hi = X[:, None], X[None, :]
    lo2, hi2 = Y[:, None], Y[None, :]
    for K in constraints:
        if K.kind == 1:
            bad = (lo >= K.a) & (hi <= K.b)
            good &= ~bad[:, :, None, None]
        elif K.kind == 2:
            bad = (lo2 >= K.a) & (hi2 <= K.b)
            good &= ~bad[None, None, :, :]
        elif K.kind == 3:
            in_l = np.broadcast_to(hi <= K.a, (n, n))
            in_r = np.broadcast_to(lo2 >= K.b, (m, m))
            good &= ~(in_l[:, :, None, None] & in_r[None, None, :, :])
        else:
            in_r = np.broadcast_to(lo >= K.a, (n, n))
            in_l = np.broadcast_to(hi2 <= K.b, (m, m))
            good &= ~(in_r[:, :, None, None] & in_l[None, None, :, :])
    iu = np.arange(n)
    iu2 = np.arange(m)
    valid = (iu[:, None] <= iu[None, :])[:, :, None, None] & (iu2[:, None] <= iu2[None, :])[None, None, :, :]
    return good & valid


class DpTables:
    """Boolean level tables plus enough data to rebuild any stored set.

    ``tables[j][x, y, x2, y2]`` is true when the interval pair with endpoint
    indices ``(xs[x], xs[y])`` and ``(ys[x2], ys[y2])`` stores ``2**j`` pairs.
    """

    def __init__(self, inst: DpspInstance):
        self.inst = inst
        self.xs, self.ys = _coordinates(inst)
        n, m = len(self.xs), len(self.ys)
        k = inst.k
        self.r = math.ceil(math.log2(k)) if k >= 2 else 0
        self.by_level = _levels(inst.constraints, self.r)
        xi = {x: i for i, x in enumerate(self.xs)}
        yi = {y: i for i, y in enumerate(self.ys)}
        self.ipairs = [(xi[s], yi[t]) for s, t in inst.pairs]
        self.tables: dict[int, np.ndarray] = {}
        self._prefix: dict[int, np.ndarray] = {}
        if self.r == 0 or n == 0 or m == 0:
            return
        self.tables[1] = self._base() & _good_mask(self.xs, self.ys, self.by_level[1])
        for j in range(2, self.r + 1):
            prev = self.tables[j - 1]
            if not prev.any():
                break
            self.tables[j] = self._merge(j) & _good_mask(self.xs, self.ys, self.by_level[j])

    def _base(self) -> np.ndarray:
        n, m = len(self.xs), len(self.ys)
        box = np.zeros((n, n, m, m), dtype=bool)
        ps = sorted(set(self.ipairs))
        for i, (a, b) in enumerate(ps):
            for c, d in ps[i + 1:]:
                if a < c and b < d:
                    box[a, c, b, d] = True
        # an interval pair holds two such pairs iff it contains a minimal box
        box = np.flip(np.logical_or.accumulate(np.flip(box, 0), axis=0), 0)
        box = np.logical_or.accumulate(box, axis=1)
        box = np.flip(np.logical_or.accumulate(np.flip(box, 2), axis=2), 2)
        box = np.logical_or.accumulate(box, axis=3)
        return box

    def _left_prefix(self, j: int) -> np.ndarray:
        """``L[x, x2, v, v2]``: some ``u < v``, ``u2 < v2`` has level ``j`` entry."""
        if j not in self._prefix:
            T = self.tables[j].transpose(0, 2, 1, 3)
            P = np.logical_or.accumulate(np.logical_or.accumulate(T, axis=2), axis=3)
            L = np.zeros_like(P)
            L[:, :, 1:, 1:] = P[:, :, :-1, :-1]
            self._prefix[j] = L
        return self._prefix[j]

    def _merge(self, j: int) -> np.ndarray:
        n, m = len(self.xs), len(self.ys)
        L = self._left_prefix(j - 1).reshape(n * m, n * m).astype(np.float32)
        R = self.tables[j - 1].transpose(0, 2, 1, 3).reshape(n * m, n * m).astype(np.float32)
        out = (L @ R) > 0.5
        return out.reshape(n, m, n, m).transpose(0, 2, 1, 3)

    def best_entry(self) -> tuple[int, tuple[int, int, int, int]] | None:
        """Highest nonempty level and its smallest ``(x, x2, y, y2)`` key."""
        for j in sorted(self.tables, reverse=True):
            T = self.tables[j]
            if T.any():
                idx = np.argwhere(T.transpose(0, 2, 1, 3))[0]
                x, x2, y, y2 = (int(v) for v in idx)
                return j, (x, y, x2, y2)
        return None

    def stored_set(self, j: int, key: tuple[int, int, int, int]) -> list[Pair]:
        """Rebuild the pairs stored at ``tables[j][key]`` in source order."""
        x, y, x2, y2 = key
        if not self.tables[j][x, y, x2, y2]:
            return []
        if j == 1:
            ps = sorted(set(self.ipairs))
            for i, (a, b) in enumerate(ps):
                if not (x <= a <= y and x2 <= b <= y2):
                    continue
                for c, d in ps[i + 1:]:
                    if a < c <= y and b < d <= y2:
                        return [self._orig(a, b), self._orig(c, d)]
            raise AssertionError("level-1 entry without witness")
        L = self._left_prefix(j - 1)
        T = self.tables[j - 1]
        for v in range(x + 1, y + 1):
            for v2 in range(x2 + 1, y2 + 1):
                if L[x, x2, v, v2] and T[v, y, v2, y2]:
                    for u in range(x, v):
                        for u2 in range(x2, v2):
                            if T[x, u, x2, u2]:
                                return self.stored_set(j - 1, (x, u, x2, u2)) + self.stored_set(
                                    j - 1, (v, y, v2, y2)
                                )
        raise AssertionError("merged entry without witness")

    def _orig(self, a: int, b: int) -> Pair:
        return (self.xs[a], self.ys[b])


def solve_dpsp(inst: DpspInstance) -> list[Pair]:
    """Non-crossing selection obeying every constraint, at least OPT/8."""
    if not inst.pairs:
        return []
    tables = DpTables(inst)
    best = tables.best_entry()
    if best is not None:
        j, key = best
        chosen = thin_to_satisfy(tables.stored_set(j, key), 4, inst.constraints)
        if chosen:
            return chosen
    # every weight is at least one, so any single pair is feasible
    return [min(inst.pairs)]


def brute_force_dpsp(inst: DpspInstance) -> tuple[int, list[Pair]]:
    """Exact optimum by depth-first search over increasing chains."""
    if inst.k > BRUTE_FORCE_MAX_PAIRS:
        raise TooLarge(f"brute force limited to {BRUTE_FORCE_MAX_PAIRS} pairs")
    ps = sorted(set(inst.pairs))
    Ks = inst.constraints
    hit = [[K.hits(p) for K in Ks] for p in ps]
    best: list[Pair] = []
    chain: list[int] = []
    load = [0] * len(Ks)

    def rec(start: int) -> None:
        nonlocal best
        if len(chain) > len(best):
            best = [ps[i] for i in chain]
        if len(chain) + (len(ps) - start) <= len(best):
            return
        for i in range(start, len(ps)):
            if chain and not (ps[chain[-1]][0] < ps[i][0] and ps[chain[-1]][1] < ps[i][1]):
                continue
            h = hit[i]
            if any(h[c] and load[c] >= Ks[c].w for c in range(len(Ks))):
                continue
            for c in range(len(Ks)):
                load[c] += h[c]
            chain.append(i)
            rec(i + 1)
            chain.pop()
            for c in range(len(Ks)):
                load[c] -= h[c]

    rec(0)
    return len(best), best


def random_instance(rng, k: int = 10, n_constraints: int = 6, max_len: int = 30) -> DpspInstance:
    """Random instance with up to ``max_len`` positions per line."""
    n = rng.randint(2, max_len)
    m = rng.randint(2, max_len)
    pairs = [(rng.randrange(n), rng.randrange(m)) for _ in range(k)]
    cons = []
    for _ in range(n_constraints if k else 0):
        kind = rng.randint(1, 4)
        w = rng.randint(1, max(1, min(k, 4)))
        if kind == 1:
            a = rng.randrange(n - 1)
            cons.append(Constraint(1, a, rng.randint(a + 1, n - 1), w))
        elif kind == 2:
            a = rng.randrange(m - 1)
            cons.append(Constraint(2, a, rng.randint(a + 1, m - 1), w))
        else:
            cons.append(Constraint(kind, rng.randrange(n), rng.randrange(m), w))
    return DpspInstance(n, m, pairs, cons)
