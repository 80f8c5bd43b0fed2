import json

import pytest

from cayleycert import explorer as E
from cayleycert import halgebra as ha
from cayleycert.construction import build, build_R
from cayleycert.groups import double_coset_closure
from cayleycert.halgebra import elem
from cayleycert.perm import Permutation, compose, from_cycles, identity


def dc(m):
    con = build(m)
    return double_coset_closure(list(con.rgens), [con.x, con.y])


def test_radius_zero_and_one():
    b0 = E.bfs_ball(4, 0)
    assert len(b0.vertices) == 1 and b0.edges == []
    b1 = E.bfs_ball(4, 1)
    assert len(b1.vertices) == 4 and len(b1.edges) == 3
    assert b1.words == ["", "x", "y", "z"]
    assert E.girth_report(b1)["lower_bound"] == 3


def test_radius_two_has_no_collisions_at_m4():
    b = E.bfs_ball(4, 2)
    assert len(b.vertices) == 10
    assert b.collisions == []


def test_ball_invariants():
    for m in (4, 5):
        b = E.bfs_ball(m, 5)
        s = E.ball_structure(b)
        assert s["simple"] and s["interior_cubic"] and s["pairwise_coset_distinct"]
        assert b.vertices[0].is_identity()
        assert b.frontier_sizes[0] == 1 and sum(b.frontier_sizes) == len(b.vertices)


def test_bad_arguments():
    with pytest.raises(ValueError):
        E.bfs_ball(4, -1)
    with pytest.raises(ValueError):
        E.bfs_ball(4, 2, max_vertices=0)


def test_truncation_is_flagged():
    b = E.bfs_ball(4, 6, max_vertices=20)
    assert b.truncated and len(b.vertices) == 20
    assert E.ball_structure(b)["interior_cubic"]


def test_coset_consistency_m4():
    b = E.bfs_ball(4, 3)
    res = E.coset_consistency_check(b, dc(4))
    assert res.passed and res.details["edges_tested"] == len(b.edges)
    assert res.details["non_edges_tested"] > 0


def test_coset_consistency_detects_wrong_double_coset():
    con = build(4)
    only_x = double_coset_closure(list(con.rgens), [con.x])
    assert not E.coset_consistency_check(E.bfs_ball(4, 2), only_x).passed


def test_coset_equality():
    con = build(4)
    one = identity(16)
    assert E.coset_equality(con.y, con.y, 4)
    assert E.coset_equality(one, build_R(elem(4, a=1)), 4)
    assert not E.coset_equality(one, con.x, 4)
    with pytest.raises(ValueError):
        E.coset_equality(one, identity(8), 4)


def test_canonical_representative_fixes_zero():
    con = build(5)
    p = compose(con.x, build_R(elem(5, a=1, cs=[2])))
    rep = E.canonical_rep(p, 5)
    assert rep(0) == 0 and E.coset_equality(p, rep, 5)


def test_girth_cycle_revalidates():
    g = E.girth_report(E.bfs_ball(4, 6))
    assert g["girth"] is not None and g["revalidated"] and g["exact"]
    assert len(g["cycle"]) == g["girth"]


@pytest.mark.parametrize("name", ["1", "a", "h", "b"])
def test_right_multiplication_preserves_adjacency(name):
    b = E.bfs_ball(4, 3)
    res = E.automorphism_action_sample(b, ha.special_element(name, 4))
    assert res.passed
    assert res.details["testable_edges"] > 0


def test_right_multiplication_by_identity_is_trivial():
    b = E.bfs_ball(5, 3)
    res = E.automorphism_action_sample(b, ha.identity(5))
    assert res.passed and res.details["testable_edges"] == len(b.edges)


def test_json_roundtrip_and_dot():
    b = E.bfs_ball(4, 3)
    data = E.export(b, "json")
    again = E.ball_from_json(data)
    assert again.vertices == b.vertices and again.edges == b.edges and again.words == b.words
    assert E.export(again, "json") == data
    obj = json.loads(data)
    assert set(obj) == {"m", "radius", "truncated", "vertices", "edges"}
    dot = E.export(b, "dot").decode()
    assert dot.startswith("graph ball {")
    assert dot.count(" -- ") == len(b.edges)
    assert E.export(E.bfs_ball(4, 0), "dot").decode().count("[label=") == 1
    with pytest.raises(ValueError):
        E.export(b, "svg")


def cube_gens():
    return [Permutation([i ^ (1 << k) for i in range(8)]) for k in range(3)]


def test_coset_graph_cube():
    gens = cube_gens()
    g = E.build_coset_graph(gens, [], gens)
    assert (g.vertex_count, g.valency, g.connected) == (8, 3, True)
    assert len(g.edges) == 12


def test_coset_graph_single_vertex():
    gens = cube_gens()
    g = E.build_coset_graph(gens, gens, [])
    assert g.vertex_count == 1 and g.valency == 0


def test_coset_graph_with_nontrivial_subgroup():
    s = from_cycles(3, [(0, 1)])
    t = from_cycles(3, [(0, 2)])
    r = from_cycles(3, [(0, 1, 2)])
    g = E.build_coset_graph([s, r], [s], [t])
    assert g.vertex_count == 3 and g.valency == g.double_coset_size // g.subgroup_order == 2


def test_coset_graph_disconnected():
    gens = cube_gens()
    g = E.build_coset_graph(gens, [], gens[:2])
    assert not g.connected and not g.generates
    assert g.words.count(None) == 4


def test_coset_graph_preconditions():
    gens = cube_gens()
    with pytest.raises(E.CosetGraphError, match="meets H"):
        E.build_coset_graph(gens, [gens[0]], [gens[0]])
    # an element of order 4 without its inverse
    c4 = from_cycles(4, [(0, 1, 2, 3)])
    with pytest.raises(E.CosetGraphError, match="inverses"):
        E.build_coset_graph([c4], [], [c4])
    with pytest.raises(E.CosetGraphError):
        E.build_coset_graph(gens, [], gens, cap=4)
