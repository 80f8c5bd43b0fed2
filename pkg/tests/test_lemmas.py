import dataclasses

import pytest

from cayleycert import lemmas as L
from cayleycert.certificate import RunConfig
from cayleycert.construction import build, build_R
from cayleycert.groups import GeneratedGroup, orbit
from cayleycert.halgebra import elem
from cayleycert.perm import compose

from controls import CONTROLS, swapped


@pytest.mark.parametrize("check_id", sorted(CONTROLS))
def test_check_passes_on_true_construction(check_id):
    m, _ = CONTROLS[check_id]
    res = L.run_check(check_id, m)
    assert res.status == "pass", res.details


@pytest.mark.parametrize("check_id", sorted(CONTROLS))
def test_negative_control_flips_to_fail(check_id):
    m, corrupt = CONTROLS[check_id]
    res = L.run_check(check_id, m, construction=corrupt())
    assert res.status == "fail", res.details


def test_jordan_route_also_fails_on_corruption():
    m, corrupt = CONTROLS["full-alternating"]
    res = L.verify_full_alternating(m, "jordan", construction=corrupt())
    assert res.status == "fail"


def test_construction_for_wrong_m_rejected():
    with pytest.raises(ValueError):
        L.verify_involutions(5, construction=build(4))


def test_aut_h_refuses_large_m():
    with pytest.raises(ValueError):
        L.verify_autH_alternating(6)


def test_aut_h_reports_order():
    res = L.verify_autH_alternating(4)
    assert res.passed and res.details["aut_order"] == 64 and res.details["contains_x"]


def test_lemma_v_maps_small():
    chi, psi, omega = L.lemma_v_maps(2)
    # bit 0 = e1, bit 1 = e2: chi fixes e1 and sends e2 -> e1 e2; psi swaps e1, e2
    assert chi.tolist() == [0, 1, 3, 2]
    assert psi.tolist() == [0, 2, 1, 3]
    assert omega.tolist() == [3, 2, 1, 0]
    with pytest.raises(ValueError):
        L.lemma_v_maps(3)


@pytest.mark.parametrize("ell", [2, 4, 6, 8, 10, 12])
def test_lemma_v_transitive(ell):
    assert L.verify_vector_transitivity(ell).passed


def test_lemma_v_needs_the_translation():
    chi, psi, _ = L.lemma_v_maps(4)
    assert len(orbit(GeneratedGroup([chi, psi]), 0)) == 1


def test_arrow_chain_expression_parser():
    con = build(7)
    u = elem(7, cs=[1])
    g = L.eval_expr("a^-1 b u c{m-3} c{m-8}", u, con)
    assert g == elem(7, a=-1, b=1, cs=[1, 4])
    assert L.eval_expr("u^xy", u, con) == con.image("xy", u)
    with pytest.raises(ValueError):
        L.eval_expr("q", u, con)


def test_arrow_chain_example_m5_first_chain():
    con = build(5)
    c1, c2 = elem(5, cs=[1]), elem(5, cs=[2])
    assert con.image("z", c2) == c1


def test_arrow_chain_erratum_is_recorded():
    res = L.verify_arrow_chains(7)
    assert res.passed
    (erratum,) = res.details["errata"]
    assert erratum["printed_holds"] is False


def test_arrow_chains_m4_degenerate():
    # With c_0 = 1 the starting points of one even chain coincide with another's.
    res = L.verify_arrow_chains(4)
    assert res.status == "fail"
    assert res.details["conflicting_claims"]
    assert {f["family"] for f in res.details["failures"]} <= {"even:ucc", "even:aucc", "even:a2ucc"}


@pytest.mark.parametrize("m", [6, 8, 10, 12])
def test_arrow_chains_even(m):
    assert L.verify_arrow_chains(m).passed


def test_xyz8_counts():
    r5 = L.verify_xyz8_cycles(5)
    assert r5.passed and r5.details["three_cycles"] == 4 and r5.details["fixed_count"] == 20
    assert L.verify_xyz8_cycles(7).details["fixed_count"] == 80


def test_xyz8_m4_is_reported_not_asserted():
    r = L.verify_xyz8_cycles(4)
    assert r.status == "report"
    assert "fixed_equals_formula" in r.details


def test_restriction_tables_are_permutations_of_H1():
    r = L.restrict_to_H1(build(8))
    half = 1 << 7
    for t in r.values():
        assert sorted(t.tolist()) == list(range(half))


def test_word_witnesses_m5():
    r = L.verify_word_witnesses(5)
    assert r.passed and r.details["sources"] == 30
    assert r.details["target"] == "c2"
    assert L.verify_word_witnesses(6).details["target"] == "ac1c3"


def test_cubic_small():
    r = L.verify_cubic(4)
    assert r.passed and r.details["double_coset_size"] == 48
    assert L.verify_cubic(5).details["double_coset_size"] == 96
    con = build(4)
    assert L.in_RH(compose(con.y, build_R(elem(4, b=1)), con.y), 4)
    assert not L.in_RH(compose(con.y, build_R(elem(4, a=1)), con.y), 4)


def test_fix_patterns_examples():
    r5 = L.verify_fix_patterns(5)
    assert r5.passed
    assert len(L.nonidentity_fix(build(5).y)) == 7
    assert r5.details["witness"] == "bc1c2"
    r7 = L.verify_fix_patterns(7)
    assert r7.passed and r7.details["witness"] == "a^2bc1c2c3c4"


def test_fix_patterns_zero_mod_four_witness():
    r4 = L.verify_fix_patterns(4)
    assert r4.passed and r4.details["printed_witness"] == "b"
    assert r4.details["printed_witness_in_intersection"]
    r8 = L.verify_fix_patterns(8)
    assert r8.passed
    assert not r8.details["printed_witness_in_intersection"]
    assert r8.details["counts_differ"]


@pytest.mark.parametrize("m", range(4, 13))
def test_fix_intersections_differ(m):
    assert L.verify_fix_patterns(m).details["counts_differ"]


def test_run_all_empty_range():
    cert = L.run_all([])
    assert cert.status == "pass" and cert.results == []


def test_run_all_identifies_injected_failure():
    bad = dataclasses.replace(build(5), y=swapped(build(5).y, 1, 2))
    cfg = RunConfig(m_values=[5], lemmas=["involutions", "alt-containment"])
    cert = L.run_all([5], cfg, constructions={5: bad})
    assert cert.status == "fail"
    # a single swap is a transposition, so parity breaks as well
    assert [r.id for r in cert.failures()] == ["involutions", "alt-containment"]


def test_run_all_rejects_unknown_ids():
    with pytest.raises(ValueError):
        L.run_all([5], RunConfig(m_values=[5], lemmas=["nope"]))


def test_cap_refusal_becomes_report():
    cfg = RunConfig(m_values=[5], closure_cap=10)
    res = L.run_check("cubic", 5, cfg)
    assert res.status == "report" and "refused" in res.details


def test_check_result_serialisation():
    r = L.run_check("involutions", 4)
    d = r.to_dict()
    assert set(d) == {"id", "anchor", "status", "m", "details", "elapsed_s"}
    assert "elapsed_s" not in r.to_dict(timing=False)
