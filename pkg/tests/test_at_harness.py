import pytest

from entropylab import morphisms as mo
from entropylab.at_harness import (GrowthSpec, Verdict, at_check, check_cen_inequality,
                                   check_mettor_chain, check_zero_reduction, growth_witness)
from entropylab.errors import NoCertificate, NotCentral, NotInvariant, OracleMissing
from entropylab.groups import (FinitarySymmetric, FiniteGroup, GroupFamily, Lamplighter,
                               RestrictedPower, alternating_group, subgroup_closure, symmetric_group)

import oracles

LAMPLIGHTER_BALLS = oracles.lamplighter_ball_sizes(17)


def heis(p=2, index="N"):
    G = RestrictedPower(FiniteGroup.heisenberg(p), index)
    return G, mo.shift_right(G)


# ---- at_check ----------------------------------------------------------------

def test_heisenberg_shift_is_additive():
    G, phi = heis()
    rep = at_check(G, phi, G.derived_spec(), [G.window(1).elements, G.window(2).elements], depth=2)
    assert rep.verdict is Verdict.ADDITIVE_EXACT
    assert (rep.full.exact_base, rep.restricted.exact_base, rep.quotient.exact_base) == (8, 2, 4)
    assert rep.witnesses[0]["rows"][0] == {"n": 1, "full": 8, "restricted": 2, "cosets": 4}


def test_heisenberg_with_center_as_h():
    G, phi = heis(index="Z")
    rep = at_check(G, phi, G.center_spec(), [G.window(1).elements], depth=2)
    assert rep.verdict is Verdict.ADDITIVE_EXACT


def test_inner_on_finite_group_is_zero_zero_zero():
    S4 = symmetric_group(4)
    phi = mo.inner(S4, S4.parse_element("(1 2)"))
    H = S4.normal_subgroup_spec(alternating_group(4).elements(), "A4")
    rep = at_check(S4, phi, H, [S4.elements(), [S4.identity, S4.parse_element("(1 2 3)")]], depth=3)
    assert rep.verdict is Verdict.ADDITIVE_EXACT
    assert rep.full.exact_base == rep.restricted.exact_base == rep.quotient.exact_base == 1


def test_direct_product_additivity():
    # Z_6 = Z_2 x Z_3 coordinatewise, H = (Z_2)^(Z): bases 6 = 2 * 3
    G = RestrictedPower(FiniteGroup.cyclic(6), "Z")
    phi = mo.shift_right(G)
    H = G.coordinatewise_spec({0, 3}, "Z2-part")
    rep = at_check(G, phi, H, [G.window(1).elements, G.window(2).elements], depth=2)
    assert rep.verdict is Verdict.ADDITIVE_EXACT
    assert (rep.full.exact_base, rep.restricted.exact_base, rep.quotient.exact_base) == (6, 2, 3)


def test_lamplighter_failure_witness():
    L = Lamplighter()
    rep = at_check(L, mo.identity(L), L.base_spec(), [L.generating_set()], depth=4,
                   restricted_exhaustion=[L.window(w).elements for w in (1, 2, 3)],
                   growth=GrowthSpec(5, 14, 1.5))
    assert rep.verdict is Verdict.FAILURE_WITNESS
    assert all(e.exact is not None and e.exact.base == 1 for e in rep.restricted.estimates)
    q = rep.quotient.estimates[0]
    assert [c for _, c in q.levels] == [2 * 2 ** k + 1 for k in range(5)]
    assert rep.growth.cardinalities == {n: c for n, c in enumerate(LAMPLIGHTER_BALLS[:15], start=1)}


def test_without_growth_spec_lamplighter_is_inconclusive():
    L = Lamplighter()
    rep = at_check(L, mo.identity(L), L.base_spec(), [L.generating_set()], depth=3)
    assert rep.verdict is Verdict.INCONCLUSIVE


def test_budget_overrun_is_inconclusive():
    G, phi = heis()
    rep = at_check(G, phi, G.derived_spec(), [G.window(1).elements], depth=3, budget=5000)
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert "budget" in rep.reason


def test_at_check_rejects_non_invariant_h():
    G = RestrictedPower(FiniteGroup.cyclic(2), "Z")
    phi = mo.shift_right(G)
    H = G.coordinatewise_spec({0, 1}, "all")
    narrow = type(H)("coordinate 0", lambda x: all(i == 0 for i, _ in x), lambda x: tuple(p for p in x if p[0] != 0),
                     sampler=lambda rng: ((0, 1),))
    with pytest.raises(NotInvariant):
        at_check(G, phi, narrow, [G.window(1).elements], depth=1)
    with pytest.raises(ValueError):
        at_check(G, phi, H, [], depth=1)


def test_growth_witness_integer_comparison():
    L = Lamplighter()
    gw = growth_witness(mo.identity(L), L.generating_set(), GrowthSpec(5, 14, 1.5))
    assert gw.holds
    assert min(gw.ratios.values()) > 1.6
    assert not growth_witness(mo.identity(L), L.generating_set(), GrowthSpec(5, 14, 1.8)).holds


def test_report_serializes():
    G, phi = heis()
    d = at_check(G, phi, G.derived_spec(), [G.window(1).elements], depth=1).to_dict()
    assert d["verdict"] == "AdditiveExact"
    assert set(d) >= {"h_full", "h_restricted", "h_quotient", "witnesses", "instance"}


# ---- central inequality --------------------------------------------------------

def test_cen_inequality_heisenberg_power():
    G, phi = heis()
    E = G.coordinate_copy(0, G.base.center)
    B = [G.parse_element("0:(1,0,0)"), G.parse_element("0:(0,1,0)")]
    rep = check_cen_inequality(G, phi, G.center_spec(), E, B, [2, 4, 8])
    assert rep.ok
    assert [(r.trajectory_e, r.cosets_b, r.trajectory_eb) for r in rep.rows] == [
        (4, 4, 16), (16, 16, 256), (256, 256, 65536)]
    assert all(r.equality for r in rep.rows)


def test_cen_inequality_single_coordinate_h3():
    G = RestrictedPower(FiniteGroup.heisenberg(3), "N")
    phi = mo.identity(G)
    N = G.coordinatewise_spec(G.base.center, "center")
    E = G.coordinate_copy(0, G.base.center)
    B = [G.identity, G.parse_element("0:(1,0,0)"), G.parse_element("0:(0,1,0)")]
    rep = check_cen_inequality(G, phi, N, E, B, [2, 4, 8])
    assert rep.ok
    assert [(r.trajectory_e, r.cosets_b, r.trajectory_eb) for r in rep.rows] == [
        (3, 6, 18), (3, 9, 27), (3, 9, 27)]


def test_cen_inequality_trivial_e():
    G, phi = heis()
    rep = check_cen_inequality(G, phi, G.center_spec(), [G.identity],
                               [G.parse_element("0:(1,0,0)")], [1, 2, 3])
    assert rep.ok


def test_cen_inequality_needs_central_subgroup():
    G, phi = heis()
    with pytest.raises(NotCentral):
        check_cen_inequality(G, phi, G.whole_spec(), [G.identity], [G.identity], [1])


# ---- metabelian chain ---------------------------------------------------------

def test_chain_heisenberg():
    G, phi = heis()
    rep = check_mettor_chain(G, phi, G.window(1).elements, M=1, depth=2)
    assert rep.ok and rep.relative_decrease
    assert rep.cosets_mod_derived == rep.cosets_mod_s == 16
    # |T_D T_E| = cosets * |T_E| exactly, but |T_D| is strictly smaller at both levels
    assert [(lv.trajectory_d, lv.cosets, lv.trajectory_e, lv.product) for lv in rep.levels] == [
        (64, 16, 8, 128), (4096, 256, 32, 8192)]


def test_chain_s4_inner():
    S4 = symmetric_group(4)
    phi = mo.inner(S4, S4.parse_element("(1 2 3 4)"))
    D = subgroup_closure(S4, [S4.parse_element("(1 3)")]).elements
    rep = check_mettor_chain(S4, phi, D, M=1, depth=3)
    assert rep.ok
    assert (rep.trajectory_size, rep.derived_part_size, rep.s_size) == (4, 2, 2)
    assert rep.cosets_mod_derived == rep.cosets_mod_s == 2


def test_chain_reports_non_subgroup_s():
    # S4 is not metabelian: for D = <(1 2)> the set S is 9 elements of A4
    S4 = symmetric_group(4)
    phi = mo.inner(S4, S4.parse_element("(1 2 3 4)"))
    D = subgroup_closure(S4, [S4.parse_element("(1 2)")]).elements
    rep = check_mettor_chain(S4, phi, D, M=1, depth=2)
    assert rep.closure_decomposition
    assert not rep.s_is_subgroup and rep.s_size == 9 and not rep.ok


def test_chain_abelian_collapses():
    G = RestrictedPower(FiniteGroup.cyclic(2), "N")
    rep = check_mettor_chain(G, mo.shift_right(G), G.window(1).elements, M=1, depth=2)
    assert rep.ok and rep.derived_part_size == 1
    assert all(lv.trajectory_d == lv.product for lv in rep.levels)


def test_chain_needs_derived_oracle():
    class Bare(GroupFamily):
        kind = "bare"
        identity = 0

        def mul(self, a, b):
            return (a + b) % 3

    fam = Bare()
    phi = mo.Endomorphism(fam, "identity", lambda x: x)
    with pytest.raises(OracleMissing):
        check_mettor_chain(fam, phi, [0], 1, 1)


# ---- zero quotient reduction ----------------------------------------------------

def test_zero_reduction_finitary():
    F = FinitarySymmetric()
    phi = mo.inner(F, F.parse_element("(1 2)"))
    E = subgroup_closure(F, [F.parse_element("(1 2 3)")]).elements
    rep = check_zero_reduction(F, phi, F.alt_spec(), E, depth=5)
    assert rep.ok and [k for k, _ in rep.containments] == [1, 2, 3, 4, 5]
    assert max(rep.quotient_counts) <= 2
    assert rep.estimate_e.value == rep.estimate_e2.value == 0.0


def test_zero_reduction_s4_a4():
    S4 = symmetric_group(4)
    H = S4.normal_subgroup_spec(alternating_group(4).elements(), "A4")
    for g in ("(1 2 3 4)", "(1 2)", "(1 2 3)"):
        phi = mo.inner(S4, S4.parse_element(g))
        E = subgroup_closure(S4, [S4.parse_element("(1 2)")]).elements
        rep = check_zero_reduction(S4, phi, H, E, depth=5)
        assert rep.ok, g
        assert rep.e2_inside


def test_zero_reduction_whole_group():
    S4 = symmetric_group(4)
    phi = mo.inner(S4, S4.parse_element("(1 2 3)"))
    rep = check_zero_reduction(S4, phi, S4.whole_spec(), [S4.parse_element("(1 2)")], depth=3)
    assert rep.m == 1 and rep.ok


def test_zero_reduction_needs_a_stable_quotient():
    G, phi = heis()
    with pytest.raises(NoCertificate):
        check_zero_reduction(G, phi, G.derived_spec(), G.window(1).elements, m_max=3)
