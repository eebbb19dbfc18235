import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from planar_ndp.errors import (
    BadParams,
    CannotExtend,
    FaceTooClose,
    NotWellLinkedDetected,
    PreconditionViolated,
    TooManyTerminals,
)
from planar_ndp.harness.generators import attach_leaves, embedding_from_coords, grid, random_planar
from planar_ndp.planar_core import EmbeddedPlanarGraph, curve_sides, enclosing_cycle
from planar_ndp.structure import (
    _separating_discs,
    build_enclosures,
    build_shell,
    check_clusters,
    check_enclosures,
    check_shell,
    check_wld,
    cluster_terminals,
    curve_from_chords,
    cut_sparsity,
    default_cluster_radius,
    disc_extensions,
    disc_from_curve,
    evacuate_terminals,
    extend_disc_by_one,
    grow_disc,
    point_disc,
    sparsest_cut_exact,
    terminal_distance,
    terminal_distances,
    verify_well_linked,
    well_linked_decompose,
    wld_threshold,
)

from oracles import (
    brute_sparsest,
    brute_well_linked,
    nx_disjoint_count,
    path_graph,
    point_in_polygon,
    polygon_area,
    radial_gap,
    shortest_path_flow,
    to_nx,
)

SLOW = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _random_graph(seed, leaves=3):
    rng = random.Random(seed)
    if rng.random() < 0.4:
        G, _, _ = grid(rng.randint(3, 7), rng.randint(3, 7))
    else:
        G, _, _ = random_planar(rng.randint(8, 24), rng.randint(0, 10**6), drop=rng.random() * 0.7)
    bases = rng.sample(range(G.vertex_count), min(leaves, G.vertex_count))
    return attach_leaves(G, bases) + (rng,)


def _sides_match(G, D):
    """The disc's interior agrees with one side found by the radial flood.

    The flood treats every crossed face as a wall, so it only applies when
    the boundary crosses each face once.
    """
    faces = D.boundary.face_ids
    if len(set(faces)) < len(faces):
        return True
    left, right = curve_sides(G, D.boundary)
    crossed = set(D.boundary.face_ids)
    inner = {("v", v) for v in D.interior_vertices} | {("f", f) for f in D.inside_faces}
    outer = {("v", v) for v in range(G.vertex_count) if v not in D.inside_vertices and G.degree(v)}
    outer |= {("f", f) for f in range(G.face_count) if f not in D.inside_faces and f not in crossed}
    return (left, right) in ((inner, outer), (outer, inner))


# ---------------------------------------------------------------------------
# extension


def test_point_grows_to_lens():
    G, _, _ = grid(3, 3)
    D = extend_disc_by_one(G, point_disc(4))
    assert D.boundary.length == 2
    assert D.inside_vertices == {4, min(G.neighbors(4))}
    assert _sides_match(G, D)


def test_lens_around_a_leaf():
    G, _, _ = grid(3, 3)
    G, (leaf,) = attach_leaves(G, [4])
    D = extend_disc_by_one(G, point_disc(leaf))
    assert set(D.boundary.vertices) == {leaf, 4} == D.inside_vertices
    assert _sides_match(G, D)


def test_path_grows_along_the_path():
    G, _, _ = path_graph(6)
    D = point_disc(0)
    for size in range(2, 6):
        D = extend_disc_by_one(G, D)
        assert D.inside_vertices == set(range(size))
        assert D.boundary.length == size


def test_grid_corner():
    G, _, _ = grid(3, 3)
    D = extend_disc_by_one(G, point_disc(0))
    assert len(D.inside_vertices) == 2 and D.boundary.length == 2
    assert to_nx(G).subgraph(D.inside_vertices).number_of_edges() == 1


def test_extension_preconditions():
    G, _, _ = path_graph(4)
    D = grow_disc(G, point_disc(0), 3)
    with pytest.raises(CannotExtend):
        extend_disc_by_one(G, D)
    H = EmbeddedPlanarGraph(3, [[], [], []])
    with pytest.raises(CannotExtend):
        extend_disc_by_one(H, point_disc(0))


# a disc reached by greedy growth on a random triangulation with a leaf
WEDGED_ROT = (
    (5, 14, 15, 6, 7, 1, 8, 10, 2, 11, 9, 3, 4), (8, 0, 2), (3, 9, 0, 10, 8, 1), (4, 0, 9, 2), (5, 0, 3),
    (6, 13, 12, 14, 0, 4), (7, 0, 15, 12, 5), (6, 0), (10, 0, 1, 2), (0, 11, 2, 3), (0, 8, 2), (0, 9),
    (5, 16, 13, 6, 15, 14), (12, 5), (5, 12, 0), (12, 6, 0), (12,),
)
WEDGED_CHORDS = [
    (2, (14, 0), (0, 15)), (2, (0, 15), (15, 12)), (2, (15, 12), (12, 14)), (1, (0, 14), (14, 5)),
    (0, (0, 5), (5, 4)), (5, (3, 4), (5, 6)), (5, (5, 6), (6, 7)), (5, (6, 7), (0, 1)), (5, (0, 1), (2, 3)),
    (11, (0, 3), (3, 9)), (10, (0, 9), (9, 11)), (9, (0, 11), (9, 2)), (8, (0, 2), (2, 10)),
    (7, (0, 10), (10, 8)), (7, (10, 8), (8, 0)),
]


def test_wedged_disc_has_no_single_step_but_growth_backtracks():
    G = EmbeddedPlanarGraph(17, WEDGED_ROT)
    D = disc_from_curve(G, curve_from_chords(WEDGED_CHORDS))
    assert len(D.inside_vertices) == 15 == D.boundary.length
    assert _sides_match(G, D)
    with pytest.raises(CannotExtend):
        extend_disc_by_one(G, D)
    # backtracking reaches the next length along a different chain
    grown = grow_disc(G, point_disc(0), 16)
    assert grown.boundary.length == 16 == len(grown.inside_vertices)


@SLOW
@given(st.integers(0, 10**6), st.integers(2, 9))
def test_growth_invariants(seed, target):
    G, _, rng = _random_graph(seed)
    target = min(target, G.vertex_count - 1)
    D = point_disc(rng.randrange(G.vertex_count))
    while D.boundary.length < target:
        D2 = next(disc_extensions(G, D), None)
        if D2 is None:
            D2 = grow_disc(G, D, D.boundary.length + 1)
        assert len(D2.inside_vertices) == len(D.inside_vertices) + 1
        assert D.inside_vertices < D2.inside_vertices
        assert D2.boundary.length == D.boundary.length + 1
        assert nx_connected(G, D2.inside_vertices)
        assert _sides_match(G, D2)
        D = D2


def nx_connected(G, S):
    import networkx as nx

    return nx.is_connected(to_nx(G).subgraph(S))


# ---------------------------------------------------------------------------
# separating curves and enclosures


def test_separating_discs_match_cut():
    G, _, _ = grid(6, 8)
    G, (a, b) = attach_leaves(G, [9, 14])
    D1 = grow_disc(G, point_disc(a), 3)
    D2 = grow_disc(G, point_disc(b), 3)
    kappa = nx_disjoint_count(G, D1.boundary.vertices, D2.boundary.vertices)
    A, B = _separating_discs(G, D1, D2, kappa)
    assert A.boundary.length == kappa
    assert D1.inside_vertices <= A.inside_vertices and D2.inside_vertices <= B.inside_vertices
    on = set(A.boundary.vertices)
    assert set(B.boundary.vertices) == on
    assert A.inside_vertices & B.inside_vertices == on
    assert A.inside_vertices | B.inside_vertices == set(range(G.vertex_count))
    assert _sides_match(G, A) and _sides_match(G, B)


def test_delta_one_far_terminals():
    G, _, _ = grid(10, 10)
    G, T = attach_leaves(G, [0, 99])
    enc = build_enclosures(G, T, 1, 0.5)
    for t in T:
        assert enc[t].boundary == (t,) and enc[t].vertices == {t}
    assert nx_disjoint_count(G, [T[0]], [T[1]]) == 1
    assert all(check_enclosures(G, enc, 1, 0.5).values())


def test_grid_twelve_delta_four():
    G, _, _ = grid(12, 12)
    G, T = attach_leaves(G, [2 * 12 + 2, 2 * 12 + 9, 9 * 12 + 2, 9 * 12 + 9])
    enc = build_enclosures(G, T, 4, 0.25)
    assert all(check_enclosures(G, enc, 4, 0.25).values())
    for t, t2 in itertools.combinations(T, 2):
        if not enc[t].vertices & enc[t2].vertices:
            assert nx_disjoint_count(G, enc[t].boundary, enc[t2].boundary) >= 4


def test_close_terminals_may_share():
    G, _, _ = grid(6, 6)
    G, T = attach_leaves(G, [14, 14])
    enc = build_enclosures(G, T, 3, 0.5)
    assert all(check_enclosures(G, enc, 3, 0.5).values())
    assert enc[T[0]].vertices & enc[T[1]].vertices
    assert terminal_distance(G, enc, T[0], T[1]) == 1


def test_bottleneck_forces_regrowth():
    # two grids glued through a single vertex: linkage 1 across it
    G0, _, coords = grid(4, 4)
    shift = [(x + 6, y) for x, y in coords]
    edges = list(G0.edges()) + [(u + 16, v + 16) for u, v in G0.edges()] + [(7, 32), (32, 20)]
    G = embedding_from_coords(coords + shift + [(4.5, -1.0)], edges)
    G, T = attach_leaves(G, [5, 26])
    # grown apart the two lenses meet only through vertex 32
    D1 = grow_disc(G, point_disc(T[0]), 2)
    D2 = grow_disc(G, point_disc(T[1]), 2)
    assert nx_disjoint_count(G, D1.boundary.vertices, D2.boundary.vertices) == 1
    for delta in (2, 3, 4):
        enc = build_enclosures(G, T, delta, 1.0)
        assert all(check_enclosures(G, enc, delta, 1.0).values())
        # the regrown discs reach across the bottleneck and overlap
        shared = enc[T[0]].vertices & enc[T[1]].vertices
        assert 32 in shared


def test_cramped_light_side_is_reported():
    # 15 vertices, delta 4: the only light side leaves two vertices outside
    G, T, _ = _random_graph(12307, leaves=3)
    assert verify_well_linked(G, T, 1.0)
    assert all(check_enclosures(G, build_enclosures(G, T, 3, 0.05), 3, 0.05).values())
    with pytest.raises(NotWellLinkedDetected, match="cannot be regrown") as info:
        build_enclosures(G, T, 4, 0.05)
    assert info.value.certificate is not None


def test_enclosures_reject_disconnected_terminals():
    G = EmbeddedPlanarGraph(4, [[1], [0], [3], [2]])
    with pytest.raises(NotWellLinkedDetected) as info:
        build_enclosures(G, [0, 2], 1, 1.0)
    assert info.value.certificate is not None


def test_enclosures_need_leaf_terminals():
    G, _, _ = grid(3, 3)
    with pytest.raises(PreconditionViolated):
        build_enclosures(G, [4], 2, 1.0)
    with pytest.raises(BadParams):
        build_enclosures(G, [0], 0, 1.0)


@SLOW
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(2, 5))
def test_enclosure_invariants(seed, delta, k):
    G, T, _ = _random_graph(seed, leaves=k)
    # regrowth needs room outside the light side; see the cramped case below
    assume(G.vertex_count >= 3 * delta * len(T))
    enc = build_enclosures(G, T, delta, 0.05)
    assert all(check_enclosures(G, enc, delta, 0.05).values())
    for t, t2 in itertools.combinations(T, 2):
        v1, v2 = enc[t].vertices, enc[t2].vertices
        if not v1 & v2:
            assert nx_disjoint_count(G, enc[t].boundary, enc[t2].boundary) >= delta
        if not enc[t].disc.boundary.length == 1:
            assert _sides_match(G, enc[t].disc)


# ---------------------------------------------------------------------------
# distances and clusters


def test_distance_conventions():
    G, _, _ = grid(8, 8)
    G, T = attach_leaves(G, [0, 63, 1])
    enc = build_enclosures(G, T, 2, 0.5)
    assert terminal_distance(G, enc, T[0], T[0]) == 0
    d = terminal_distances(G, enc)
    for t, t2 in itertools.combinations(T, 2):
        assert d[(t, t2)] == d[(t2, t)] == terminal_distance(G, enc, t, t2)
        if enc[t].vertices & enc[t2].vertices:
            assert d[(t, t2)] == 1
        else:
            assert d[(t, t2)] == radial_gap(G, enc[t].boundary, enc[t2].boundary)


@SLOW
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_weak_triangle_inequality(seed, delta):
    G, T, _ = _random_graph(seed, leaves=5)
    enc = build_enclosures(G, T, delta, 0.05)
    d = terminal_distances(G, enc)
    for a, b, c in itertools.permutations(T, 3):
        assert d[(a, c)] <= d[(a, b)] + d[(b, c)] + delta / 2


def test_two_far_groups_split():
    # radial distance lets every face shortcut, so far means nested rings apart
    size = 45
    G, _, _ = grid(size, size)
    at = lambda r, c: r * size + c
    G, T = attach_leaves(G, [at(22, 22), at(22, 23), at(23, 22), at(1, 1), at(1, 2), at(2, 1)])
    enc = build_enclosures(G, T, 1, 0.5)
    d = terminal_distances(G, enc)
    assert min(d[(a, b)] for a in T[:3] for b in T[3:]) > 16
    clusters = cluster_terminals(G, enc, 1)
    assert sorted(map(sorted, clusters)) == [T[:3], T[3:]]


def test_single_terminal_cluster():
    G, _, _ = grid(3, 3)
    G, T = attach_leaves(G, [4])
    enc = build_enclosures(G, T, 2, 1.0)
    assert cluster_terminals(G, enc, 2) == [frozenset(T)]


def test_cluster_radius_guard():
    G, _, _ = grid(3, 3)
    G, T = attach_leaves(G, [4])
    enc = build_enclosures(G, T, 1, 1.0)
    with pytest.raises(BadParams):
        cluster_terminals(G, enc, 1, delta0=default_cluster_radius(G.vertex_count, 1) - 1)


@SLOW
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_cluster_triple(seed, delta):
    G, T, _ = _random_graph(seed, leaves=6)
    enc = build_enclosures(G, T, delta, 0.05)
    clusters = cluster_terminals(G, enc, delta)
    d = terminal_distances(G, enc)
    r = default_cluster_radius(G.vertex_count, delta)
    assert all(check_clusters(d, clusters, set(T), delta, r).values())
    assert all(a.isdisjoint(b) for a, b in itertools.combinations(clusters, 2))


# ---------------------------------------------------------------------------
# shells


def _centre_enclosure(size, delta, bases):
    G, od, coords = grid(size, size)
    G, T = attach_leaves(G, bases)
    enc = build_enclosures(G, T, delta, 0.5)
    return G, od, coords, T, enc


@pytest.mark.parametrize("delta", [2, 3, 4])
def test_first_shell_cycle_hugs_the_disc(delta):
    G, od, coords, T, enc = _centre_enclosure(9, delta, [40])
    e = enc[T[0]]
    sh = build_shell(G, e, od, 1)
    (z,) = sh.cycles
    poly = [coords[v] for v in z]
    grid_part = [v for v in e.vertices if v < 81]
    squares = set()
    for v in grid_part:
        r, c = divmod(v, 9)
        for dr, dc in itertools.product((-1, 0), repeat=2):
            squares.add((r + dr, c + dc))
    assert math.isclose(polygon_area(poly), len(squares))
    assert all(point_in_polygon(coords[v], poly) for v in grid_part)
    assert all(check_shell(G, e, sh).values())


def test_deep_shell_properties():
    G, od, coords, T, enc = _centre_enclosure(13, 2, [84])
    e = enc[T[0]]
    sh = build_shell(G, e, od, 4)
    assert len(sh.cycles) == 4
    assert all(check_shell(G, e, sh).values())
    for h, z in enumerate(sh.cycles, start=1):
        # square rings around a 1x1 core
        assert len(z) == 8 * h


def test_shell_too_deep():
    G, od, coords, T, enc = _centre_enclosure(9, 2, [40])
    with pytest.raises(FaceTooClose) as info:
        build_shell(G, enc[T[0]], od, 4)
    assert info.value.vertex in set(G.face_vertices(G.face_of(od)))


def test_far_shells_are_disjoint():
    G, od, coords = grid(18, 18)
    G, T = attach_leaves(G, [4 * 18 + 4, 13 * 18 + 13])
    enc = build_enclosures(G, T, 2, 0.5)
    d = terminal_distance(G, enc, *T)
    r = r2 = 2
    assert d > r + r2 + 1
    s1 = build_shell(G, enc[T[0]], od, r)
    s2 = build_shell(G, enc[T[1]], od, r2)
    for z in s1.cycles:
        for z2 in s2.cycles:
            assert not set(z) & set(z2)


@SLOW
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_shell_properties_random(seed, r):
    rng = random.Random(seed)
    size = rng.randint(9, 12)
    G, od, _ = grid(size, size)
    c = size // 2
    G, T = attach_leaves(G, [c * size + c])
    e = build_enclosures(G, T, rng.randint(1, 3), 0.5)[T[0]]
    try:
        sh = build_shell(G, e, od, r)
    except FaceTooClose:
        return
    assert all(check_shell(G, e, sh).values())
    for h, z in enumerate(sh.cycles, start=1):
        assert z == enclosing_cycle(G, od, e.vertices if h == 1 else _disc(G, sh.cycles[h - 2], od))


def _disc(G, cyc, od):
    from planar_ndp.planar_core import disc_vertices

    return disc_vertices(G, cyc, od)


# ---------------------------------------------------------------------------
# sparsest cuts


def _two_wheels_at_a_vertex():
    """Two triangles sharing vertex 0; two leaves on one, three on the other."""
    coords = [(0, 0), (-1, 1), (-1, -1), (1, 1), (1, -1)]
    edges = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]
    G = embedding_from_coords(coords, edges)
    return attach_leaves(G, [1, 2, 3, 4, 4])


def test_cut_vertex_sparsity():
    G, T = _two_wheels_at_a_vertex()
    A, C, B, phi = sparsest_cut_exact(G, T)
    assert phi == Fraction(1, 2) == brute_sparsest(G, T)
    assert C == {0}
    assert not C & set(T)


def test_dense_link_has_sparsity_one():
    coords = [(0, 0), (2, 0), (1, 2), (1, 0.7)]
    G = embedding_from_coords(coords, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)])
    G, T = attach_leaves(G, [0, 1, 2, 3])
    A, C, B, phi = sparsest_cut_exact(G, T)
    assert phi == 1 == brute_sparsest(G, T)
    assert not C & set(T)


def test_evacuating_the_trivial_cut():
    coords = [(0, 0), (2, 0), (1, 2), (1, 0.7)]
    G = embedding_from_coords(coords, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)])
    G, T = attach_leaves(G, [0, 1, 2, 3])
    rest = set(range(G.vertex_count)) - set(T)
    assert cut_sparsity(set(T), set(), set(T), rest) == 1
    A, C, B = evacuate_terminals(G, T, set(), set(T), rest)
    assert not C & set(T)
    assert cut_sparsity(set(T), A, C, B) <= 1
    assert all(u not in B for a in A for u in G.neighbors(a))


def test_star_cut_at_hub():
    coords = [(0, 0), (1, 0), (-1, 0), (0, 1)]
    G = embedding_from_coords(coords, [(0, 1), (0, 2), (0, 3)])
    A, C, B, phi = sparsest_cut_exact(G, [1, 2, 3])
    assert C == {0} and phi == 1


def test_sparsest_cut_guards():
    G, _, _ = grid(6, 6)
    G2, T = attach_leaves(G, list(range(17)))
    with pytest.raises(TooManyTerminals):
        sparsest_cut_exact(G2, T)
    G3, T3 = attach_leaves(G, [0, 1])
    with pytest.raises(PreconditionViolated):
        sparsest_cut_exact(G3, T3)
    with pytest.raises(PreconditionViolated):
        sparsest_cut_exact(G, [0, 1, 2])


@SLOW
@given(st.integers(0, 10**6))
def test_sparsest_cut_matches_brute_force(seed):
    rng = random.Random(seed)
    G, _, _ = random_planar(rng.randint(4, 6), rng.randint(0, 10**6), drop=rng.random())
    bases = [rng.randrange(G.vertex_count) for _ in range(rng.randint(3, 4))]
    G, T = attach_leaves(G, bases)
    A, C, B, phi = sparsest_cut_exact(G, T)
    assert phi == brute_sparsest(G, T)
    assert phi == cut_sparsity(set(T), set(A), set(C), set(B))
    assert not C & set(T)
    assert all(u not in B for a in A for u in G.neighbors(a))


@SLOW
@given(st.integers(0, 10**6))
def test_evacuation_never_raises_sparsity(seed):
    rng = random.Random(seed)
    G, T, _ = _random_graph(seed, leaves=rng.randint(3, 6))
    tset = set(T)
    for _ in range(20):
        C = {v for v in range(G.vertex_count) if rng.random() < 0.3}
        seeds = [v for v in range(G.vertex_count) if v not in C]
        if not seeds:
            continue
        from planar_ndp.structure import _side

        A = _side(G, {rng.choice(seeds)}, C)
        B = set(range(G.vertex_count)) - A - C
        try:
            before = cut_sparsity(tset, A, C, B)
        except PreconditionViolated:
            continue
        if before > 1 or not (A | C) & tset or not (B | C) & tset:
            continue
        A2, C2, B2 = evacuate_terminals(G, T, A, C, B)
        assert not C2 & tset
        assert cut_sparsity(tset, A2, C2, B2) <= before
        assert all(u not in B2 for a in A2 for u in G.neighbors(a))


# ---------------------------------------------------------------------------
# well-linkedness


def test_two_terminals_on_a_clique():
    coords = [(0, 0), (2, 0), (1, 2), (1, 0.7)]
    G = embedding_from_coords(coords, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)])
    G, T = attach_leaves(G, [0, 2])
    for alpha in (0.25, 0.5, 1.0):
        assert verify_well_linked(G, T, alpha)


def test_cut_vertex_breaks_linkedness():
    G, T = _two_wheels_at_a_vertex()
    assert not verify_well_linked(G, T, 1.0)
    assert verify_well_linked(G, T, 0.5) == brute_well_linked(G, T, 0.5)


def test_grid_boundary_terminals_quarter():
    G, _, _ = grid(5, 5)
    G, T = attach_leaves(G, [0, 2, 4, 14, 24, 22, 20, 10])
    assert verify_well_linked(G, T, 0.25) == brute_well_linked(G, T, 0.25) is True


def test_verify_guard():
    G, _, _ = grid(5, 5)
    with pytest.raises(TooManyTerminals):
        verify_well_linked(G, list(range(17)), 0.5)


@SLOW
@given(st.integers(0, 10**6), st.sampled_from([0.2, 0.4, 0.5, 0.75, 1.0]))
def test_verify_matches_definition(seed, alpha):
    rng = random.Random(seed)
    G, _, _ = random_planar(rng.randint(5, 12), rng.randint(0, 10**6), drop=rng.random())
    if rng.random() < 0.3:
        G = G.delete_vertices([0])
    T = rng.sample(range(1, G.vertex_count), min(rng.randint(2, 6), G.vertex_count - 1))
    assert verify_well_linked(G, T, alpha) == brute_well_linked(G, T, alpha)


# ---------------------------------------------------------------------------
# well-linked decomposition


def _dumbbell():
    k4 = [(0, 0), (2, 0), (1, 2), (1, 0.7)]
    coords = k4 + [(x + 6, y) for x, y in k4] + [(4, 0)]
    e4 = [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)]
    edges = e4 + [(u + 4, v + 4) for u, v in e4] + [(1, 8), (8, 4)]
    G = embedding_from_coords(coords, edges)
    G, T = attach_leaves(G, [0, 2, 3, 2, 5, 6, 7, 6])
    M = [(T[0], T[1]), (T[2], T[3]), (T[4], T[5]), (T[6], T[7])]
    return G, M


def test_wld_already_well_linked():
    G, _, _ = grid(6, 6)
    G, T = attach_leaves(G, [0, 5, 30, 35, 14, 21])
    M = [(T[0], T[3]), (T[1], T[2]), (T[4], T[5])]
    w = shortest_path_flow(G, M)
    res = well_linked_decompose(G, M, w)
    assert res.removed == frozenset()
    assert len(res.subgraphs) == 1 and sorted(res.pair_sets[0]) == sorted(M)
    assert all(check_wld(G, M, w, res).values())


def test_wld_dumbbell_cuts_the_bridge():
    G, M = _dumbbell()
    # the default threshold is far below 1/4, so nothing is cut
    w = shortest_path_flow(G, M)
    res = well_linked_decompose(G, M, w)
    assert res.removed == frozenset()
    assert all(check_wld(G, M, w, res).values())
    # a threshold above the bridge's sparsity removes it
    res = well_linked_decompose(G, M, w, tau=0.3)
    assert len(res.removed) == 1 and res.removed <= {1, 8, 4}
    parts = [p for p in res.pair_sets if p]
    assert sorted(map(sorted, parts)) == sorted([sorted(M[:2]), sorted(M[2:])])
    for comp, pairs in zip(res.subgraphs, res.pair_sets):
        if pairs:
            terms = [x for p in pairs for x in p]
            assert brute_well_linked(G.induced(comp), terms, 0.3)
    k = len(M)
    assert len(res.removed) <= 0.3 * 2 * k * (1 + math.floor(math.log2(k)))


def test_wld_empty():
    G, _, _ = grid(3, 3)
    res = well_linked_decompose(G, [], 1.0)
    assert res.removed == frozenset() and sum(map(len, res.pair_sets)) == 0
    assert len(res.subgraphs) == 1


def test_wld_guards():
    G, _, _ = grid(6, 6)
    G2, T = attach_leaves(G, list(range(18)))
    M = [(T[i], T[i + 1]) for i in range(0, 18, 2)]
    with pytest.raises(TooManyTerminals):
        well_linked_decompose(G2, M, 0.5)
    with pytest.raises(PreconditionViolated):
        well_linked_decompose(G, [(0, 1)], 0.5)
    with pytest.raises(BadParams):
        well_linked_decompose(G2, M[:1], 0.0)


def test_threshold_formula():
    assert wld_threshold(1.0, 1) == 1 / 512
    assert wld_threshold(0.5, 8) == 0.5 / (512 * 3)
    assert wld_threshold(1.0, 9) == 1 / (512 * 4)


@SLOW
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_wld_triple_on_random_fixtures(seed, k):
    G, T, rng = _random_graph(seed, leaves=2 * k)
    M = [(T[i], T[i + 1]) for i in range(0, len(T) - 1, 2)]
    w = shortest_path_flow(G, M)
    res = well_linked_decompose(G, M, w)
    assert all(check_wld(G, M, w, res).values())
