import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import face_share_graph, geometric_min_cycle, small_fixtures, to_nx, wheel
from planar_ndp.errors import (
    DepthUnavailable,
    MalformedRotation,
    NoEnclosingCycle,
    NonPlanarRotation,
    PreconditionViolated,
    Unreachable,
)
from planar_ndp.harness.generators import cylinder_grid, grid, random_planar
from planar_ndp.planar_core import (
    _corner_ends,
    _corner_rotation,
    add_apex,
    build_embedding,
    contract,
    curve_disc,
    curve_sides,
    d_gnc,
    disc_vertices,
    enclosing_cycle,
    gnc_distances_from,
    locate_face,
    menger_vertex_disjoint,
    min_cycle,
    min_separating_normal_curve,
    shortest_normal_curve,
    tight_concentric_cycles,
)

FIXTURES = small_fixtures()


def test_triangle_has_two_faces():
    G = build_embedding(3, [[1, 2], [2, 0], [0, 1]])
    assert G.face_count == 2
    assert G.vertex_count - G.edge_count() + G.face_count == 2


def test_single_edge_has_one_face():
    G = build_embedding(2, [[1], [0]])
    assert G.face_count == 1
    assert G.faces[0] == ((0, 1), (1, 0))


def test_grid_3x3_has_five_faces():
    G, od, _ = grid(3, 3)
    assert G.face_count == 5
    assert sorted(len(f) for f in G.faces) == [4, 4, 4, 4, 8]
    assert len(G.faces[G.face_of(od)]) == 8


def test_isolated_vertices_allowed():
    G = build_embedding(3, [[1], [0], []])
    assert G.face_count == 1


def test_asymmetric_rotation_rejected():
    with pytest.raises(MalformedRotation):
        build_embedding(2, [[1], []])


def test_self_loop_and_parallel_rejected():
    with pytest.raises(MalformedRotation):
        build_embedding(1, [[0]])
    with pytest.raises(MalformedRotation):
        build_embedding(2, [[1, 1], [0, 0]])


def test_nonplanar_rotation_rejected():
    ok = build_embedding(4, [[1, 3, 2], [0, 2, 3], [0, 3, 1], [0, 1, 2]])
    assert ok.face_count == 4
    # reversing one vertex's rotation leaves a toroidal system with two faces
    rots = [[2, 3, 1], [0, 2, 3], [0, 3, 1], [0, 1, 2]]
    with pytest.raises(NonPlanarRotation):
        build_embedding(4, rots)


@pytest.mark.parametrize("name,G,od,coords", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_face_tracing_visits_every_dart_once(name, G, od, coords):
    seen = [d for f in G.faces for d in f]
    assert len(seen) == len(set(seen)) == 2 * G.edge_count()
    assert G.vertex_count - G.edge_count() + G.face_count == 2


# normal curves


def test_curve_to_self():
    G, _, _ = grid(3, 3)
    c = shortest_normal_curve(G, 4, 4)
    assert c.elements == (("v", 4),)
    assert d_gnc(G, 4, 4) == 0


def test_adjacent_vertices_distance_one():
    G, _, _ = grid(3, 3)
    c = shortest_normal_curve(G, 0, 1)
    assert c.length == 2 and d_gnc(G, 0, 1) == 1
    assert c.is_valid(G)


def test_grid_opposite_corners_inside_disc():
    G, od, _ = grid(3, 3)
    c = shortest_normal_curve(G, 0, 8, forbidden_faces={G.face_of(od)})
    assert c.length == 3
    assert c.vertices == (0, 4, 8)
    assert c.is_valid(G)
    # through the outer face the two corners share a face
    assert d_gnc(G, 0, 8) == 1


def test_forbidden_vertices_can_disconnect():
    G, od, _ = grid(1, 3)
    with pytest.raises(Unreachable):
        shortest_normal_curve(G, 0, 2, forbidden_vertices={1}, forbidden_faces={0})
    with pytest.raises(PreconditionViolated):
        shortest_normal_curve(G, 0, 2, forbidden_vertices={0})


@pytest.mark.parametrize("name,G,od,coords", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_gnc_metric_matches_face_share_bfs(name, G, od, coords):
    ref = dict(nx.all_pairs_shortest_path_length(face_share_graph(G)))
    n = G.vertex_count
    d = [[d_gnc(G, u, v) for v in range(n)] for u in range(n)]
    for u in range(n):
        assert d[u][u] == 0
        for v in range(n):
            assert d[u][v] == ref[u][v]
            assert d[u][v] == d[v][u]
            if u != v:
                assert d[u][v] > 0
            for w in range(n):
                assert d[u][w] <= d[u][v] + d[v][w]


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 14), st.integers(0, 10_000))
def test_gnc_metric_random(n, seed):
    G, _, _ = random_planar(n, seed)
    ref = dict(nx.all_pairs_shortest_path_length(face_share_graph(G)))
    for u in range(n):
        dist = gnc_distances_from(G, u)
        assert dist == ref[u]
        c = shortest_normal_curve(G, u, (u + 3) % n)
        assert c.is_valid(G)
        assert c.length - 1 == ref[u][(u + 3) % n]


def test_curve_tiebreak_is_deterministic():
    G, _, _ = grid(4, 4)
    a = shortest_normal_curve(G, 5, 10)
    b = shortest_normal_curve(G, 5, 10)
    assert a == b


# min-cycles and concentric cycles


def test_wheel_min_cycle_is_rim():
    G, od, _ = wheel(4)
    assert set(min_cycle(G, od, 0)) == {1, 2, 3, 4}


def test_grid_center_min_cycle():
    G, od, _ = grid(5, 5)
    assert set(min_cycle(G, od, 12)) == {6, 7, 8, 11, 13, 16, 17, 18}
    assert set(min_cycle(G, od, 6)) == {0, 1, 2, 5, 7, 10, 11, 12}


def test_min_cycle_on_outer_face_raises():
    G, od, _ = grid(3, 3)
    with pytest.raises(NoEnclosingCycle):
        min_cycle(G, od, 0)


def test_min_cycle_pendant_vertex():
    # triangle with a pendant vertex 3 hanging off vertex 2 into one of its faces
    G = build_embedding(4, [[1, 2], [2, 0], [0, 3, 1], [2]])
    f3 = G.face_of((3, 2))
    other = next(f for f in range(G.face_count) if f != f3)
    assert set(min_cycle(G, other, 3)) == {0, 1, 2}
    with pytest.raises(NoEnclosingCycle):
        min_cycle(G, f3, 3)


@pytest.mark.parametrize("n,seed", [(n, s) for n in (7, 9, 11) for s in range(4)])
def test_min_cycle_matches_geometry(n, seed):
    G, od, coords = random_planar(n, seed)
    outer = set(G.face_vertices(G.face_of(od)))
    for v in range(n):
        if v in outer:
            continue
        assert set(min_cycle(G, od, v)) == geometric_min_cycle(G, coords, v)


def test_tight_cycles_grid():
    G, od, _ = grid(5, 5)
    z = tight_concentric_cycles(G, od, 12, 2)
    assert [set(c) for c in z] == [
        {6, 7, 8, 11, 13, 16, 17, 18},
        {0, 1, 2, 3, 4, 5, 9, 10, 14, 15, 19, 20, 21, 22, 23, 24},
    ]
    assert tight_concentric_cycles(G, od, 12, 0) == []
    with pytest.raises(DepthUnavailable) as ei:
        tight_concentric_cycles(G, od, 12, 3)
    assert ei.value.depth == 3 and len(ei.value.cycles) == 2


def test_tight_cycles_cylinder_grid():
    G, c1, c2, _ = cylinder_grid(4, 10)
    z = tight_concentric_cycles(G, c2, list(range(10)), 3)
    assert [set(c) for c in z] == [set(range(10 * i, 10 * i + 10)) for i in (1, 2, 3)]


def _check_tight(G, od, core, cycles):
    prev = disc_vertices(G, core, od) if not isinstance(core, int) else frozenset({core})
    for z in cycles:
        disc = disc_vertices(G, z, od)
        assert prev < disc
        assert not (set(z) & prev)
        H, a = contract(G, prev)
        assert set(min_cycle(H, od if isinstance(od, int) else od, a)) == set(z)
        prev = disc


@pytest.mark.parametrize("n,seed", [(n, s) for n in (16, 22) for s in range(5)])
def test_tight_cycles_random_properties(n, seed):
    G, od, _ = random_planar(n, seed, drop=0.2, hull=4)
    outer = set(G.face_vertices(G.face_of(od)))
    v = next(x for x in range(n) if x not in outer)
    try:
        z = tight_concentric_cycles(G, od, v, 5)
    except DepthUnavailable as e:
        z = e.cycles
    assert z
    for a, b in itertools.combinations(z, 2):
        assert not set(a) & set(b)
    # contraction must keep the outer face dart valid
    _check_tight(G, G.face_of(od), v, z)


def test_contract_keeps_embedding_planar():
    G, od, _ = grid(4, 4)
    H, a = contract(G, {5, 6, 9, 10})
    assert a == 5
    assert set(H.neighbors(5)) == {1, 2, 4, 7, 8, 11, 13, 14}
    assert H.degree(6) == 0
    assert H.vertex_count - 3 - H.edge_count() + H.face_count == 2


# connectivity


def test_menger_adjacent_pair():
    G = build_embedding(2, [[1], [0]])
    paths, cut = menger_vertex_disjoint(G, {0}, {1})
    assert paths == [[0, 1]]
    assert len(cut) == 1 and cut <= {0, 1}


def test_menger_grid_columns():
    G, _, _ = grid(3, 3)
    paths, cut = menger_vertex_disjoint(G, {0, 3, 6}, {2, 5, 8})
    assert len(paths) == 3 and len(cut) == 3


def test_menger_disconnected():
    G = build_embedding(4, [[1], [0], [3], [2]])
    paths, cut = menger_vertex_disjoint(G, {0}, {3})
    assert paths == [] and cut == set()


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 16), st.integers(0, 10_000), st.data())
def test_menger_matches_networkx(n, seed, data):
    G, _, _ = random_planar(n, seed)
    g = to_nx(G)
    verts = list(range(n))
    A = set(data.draw(st.lists(st.sampled_from(verts), min_size=1, max_size=4)))
    B = set(data.draw(st.lists(st.sampled_from(verts), min_size=1, max_size=4)))
    paths, cut = menger_vertex_disjoint(G, A, B)
    h = g.copy()
    h.add_edges_from(("S", a) for a in A)
    h.add_edges_from((b, "T") for b in B)
    expected = len(nx.minimum_node_cut(h, "S", "T")) if not (A & B) else None
    if expected is not None:
        assert len(paths) == expected
    assert len(cut) == len(paths)
    used = set()
    for p in paths:
        assert p[0] in A and p[-1] in B
        assert all(g.has_edge(a, b) for a, b in zip(p, p[1:]))
        assert not used & set(p)
        used |= set(p)
    rest = g.copy()
    rest.remove_nodes_from(cut)
    for a in A - cut:
        for b in B - cut:
            assert not nx.has_path(rest, a, b)


# separating curves


def test_separating_curve_path():
    G = build_embedding(3, [[1], [0, 2], [1]])
    c = min_separating_normal_curve(G, 0, 2)
    assert c.length == 1 and c.vertices == (1,)


def test_separating_curve_k4_minus_edge():
    # diamond 0-1-2-3 with chord 1-3; 0 and 2 are not adjacent
    coords = [(0, 0), (1, 1), (2, 0), (1, -1)]
    from planar_ndp.harness.generators import embedding_from_coords

    G = embedding_from_coords(coords, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)])
    c = min_separating_normal_curve(G, 0, 2)
    assert c.length == 2 and set(c.vertices) == {1, 3}


def test_separating_curve_adjacent_rejected():
    G, _, _ = grid(2, 2)
    with pytest.raises(PreconditionViolated):
        min_separating_normal_curve(G, 0, 1)


def _check_separating(G, s, t):
    c = min_separating_normal_curve(G, s, t)
    assert c.closed and c.is_valid(G)
    assert len(set(c.vertices)) == c.length
    assert s not in c.vertices and t not in c.vertices
    kappa = nx.node_connectivity(to_nx(G), s, t)
    assert c.length == kappa
    left, right = curve_sides(G, c)
    assert not left & right
    sides = [left, right]
    assert any(("v", s) in x for x in sides) and any(("v", t) in x for x in sides)
    assert not any(("v", s) in x and ("v", t) in x for x in sides)
    g = to_nx(G)
    on = set(c.vertices)
    for side in sides:
        vs = {x for k, x in side if k == "v"} | on
        assert nx.is_connected(g.subgraph(vs))
    return c


@pytest.mark.parametrize("name,G,od,coords", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_separating_curve_length_equals_menger(name, G, od, coords):
    g = to_nx(G)
    for s, t in itertools.combinations(range(G.vertex_count), 2):
        if not g.has_edge(s, t):
            _check_separating(G, s, t)


def test_separating_curve_grid_corners():
    G, _, _ = grid(5, 5)
    assert _check_separating(G, 0, 24).length == 2
    assert _check_separating(G, 12, 0).length == 2
    assert _check_separating(G, 6, 18).length == 4


@settings(max_examples=30, deadline=None)
@given(st.integers(6, 24), st.integers(0, 10_000), st.data())
def test_separating_curve_random(n, seed, data):
    G, _, _ = random_planar(n, seed)
    s = data.draw(st.integers(0, n - 1))
    t = data.draw(st.integers(0, n - 1))
    if s != t and not G.has_edge(s, t):
        _check_separating(G, s, t)


def test_curve_disc_contains_anchor():
    G, _, _ = grid(5, 5)
    c = min_separating_normal_curve(G, 12, 0)
    D = curve_disc(G, c, 0)
    assert 0 in D.inside_vertices
    assert set(c.vertices) <= D.inside_vertices
    assert 12 not in D.inside_vertices


# radial graph


@pytest.mark.parametrize("name,G,od,coords", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_radial_rotation_is_planar(name, G, od, coords):
    """The corner rotations at vertex and face nodes form a spherical
    embedding of the radial graph; its faces correspond to the edges of G."""
    nodes = [("v", v) for v in range(G.vertex_count)] + [("f", f) for f in range(G.face_count)]
    rot = {x: _corner_rotation(G, x) for x in nodes}
    pos = {x: {c: i for i, c in enumerate(r)} for x, r in rot.items()}
    seen = set()
    faces = 0
    for x in nodes:
        for c in rot[x]:
            if (x, c) in seen:
                continue
            faces += 1
            cur = (x, c)
            while cur not in seen:
                seen.add(cur)
                node, corner = cur
                a, b = _corner_ends(G, corner)
                other = b if node == a else a
                r = rot[other]
                nxt = r[(pos[other][corner] + 1) % len(r)]
                cur = (other, nxt)
    edges = sum(len(r) for r in rot.values()) // 2
    assert faces == G.edge_count()
    assert len(nodes) - edges + faces == 2


# face location and apex


def test_locate_face_after_deletion():
    G, od, _ = grid(3, 3)
    H = G.delete_vertices({4})
    merged = locate_face(G, 1, H)
    assert set(H.face_vertices(merged)) == {0, 1, 2, 3, 5, 6, 7, 8}
    assert locate_face(G, G.face_of(od), H) == H.face_of(od)


def test_add_apex_in_outer_face():
    G, od, _ = grid(3, 3)
    walk = G.faces[G.face_of(od)]
    corners = [d for d in walk if d[1] in (0, 2, 8)]
    H, c = add_apex(G, corners)
    assert c == 9
    assert set(H.neighbors(c)) == {0, 2, 8}
    assert H.face_count == G.face_count + 2


def test_enclosing_cycle_of_set():
    G, od, _ = grid(5, 5)
    assert set(enclosing_cycle(G, od, {7, 12})) == {1, 2, 3, 6, 8, 11, 13, 16, 17, 18}
