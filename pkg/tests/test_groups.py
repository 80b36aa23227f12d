import random

import pytest
from hypothesis import given, strategies as st

from entropylab.errors import BudgetExceeded, MalformedElement, NotNormal
from entropylab.groups import (FinitarySymmetric, FiniteGroup, Lamplighter, RestrictedPower,
                               alternating_group, check_normal_subgroup, cyclic_group,
                               dihedral_group, direct_product, mul, quaternion_group,
                               subgroup_closure, symmetric_group)

import oracles


@pytest.mark.parametrize("G, order", [
    (symmetric_group(3), 6), (symmetric_group(4), 24), (symmetric_group(5), 120),
    (alternating_group(4), 12), (dihedral_group(4), 8), (quaternion_group(), 8), (cyclic_group(4), 4),
])
def test_orders(G, order):
    assert G.order == order == len(G.elements())


def test_permutation_product_is_right_to_left():
    S3 = symmetric_group(3)
    a, b = S3.parse_element("(1 2)"), S3.parse_element("(1 2 3)")
    assert S3.format_element(S3.mul(a, b)) == "(2 3)"
    ref = oracles.compose(oracles.perm("(1 2)", 3), oracles.perm("(1 2 3)", 3))
    assert tuple(v - 1 for v in oracles.key(ref)) == S3.mul(a, b)


def test_quaternion_has_one_involution():
    Q = quaternion_group()
    invols = [x for x in Q.elements() if x != Q.identity and Q.mul(x, x) == Q.identity]
    assert len(invols) == 1
    assert not Q.is_abelian


def test_derived_and_center_of_small_groups():
    S4 = symmetric_group(4)
    assert len(S4._derived) == 12
    assert len(S4._center) == 1
    D8 = dihedral_group(4)
    assert len(D8._derived) == 2 and len(D8._center) == 2


def test_heisenberg_law_and_derived_subgroup():
    H = FiniteGroup.heisenberg(2)
    x, y = H.parse_label("(1,0,0)"), H.parse_label("(0,1,0)")
    assert H.format_label(H.mul(x, y)) == "(1,1,1)"
    assert H.format_label(H.mul(y, x)) == "(1,1,0)"
    assert sorted(H.format_label(i) for i in H.derived) == ["(0,0,0)", "(0,0,1)"]
    assert H.derived == H.center
    H3 = FiniteGroup.heisenberg(3)
    assert H3.order == 27 and len(H3.center) == 3 and H3.exponent() == 3


def test_heisenberg_matches_matrix_product():
    H = FiniteGroup.heisenberg(3)
    for i in range(H.order):
        for j in range(H.order):
            a, b = H.labels[i], H.labels[j]
            M = oracles._matmul(oracles.heis_matrix(*a), oracles.heis_matrix(*b), 3)
            assert H.labels[H.mul(i, j)] == oracles._entries(M)


def test_restricted_power_product_and_text_format():
    G = RestrictedPower(FiniteGroup.heisenberg(2), "N")
    x = G.parse_element("0:(1,0,0)+2:(0,1,1)")
    assert G.format_element(x) == "0:(1,0,0)+2:(0,1,1)"
    assert G.parse_element(G.format_element(x)) == x
    y = G.parse_element("0:(0,1,0)")
    assert G.format_element(G.mul(x, y)) == "0:(1,1,1)+2:(0,1,1)"
    assert G.mul(x, G.inv(x)) == G.identity == G.parse_element("1")


@pytest.mark.parametrize("text", ["0:(1,0)", "-1:(1,0,0)", "0:(1,0,0)+0:(0,1,0)", "x:(1,0,0)", "0"])
def test_restricted_power_rejects_malformed(text):
    G = RestrictedPower(FiniteGroup.heisenberg(2), "N")
    with pytest.raises(MalformedElement):
        G.parse_element(text)


def test_restricted_power_has_no_identity_entries():
    G = RestrictedPower(FiniteGroup.cyclic(2), "Z")
    x = G.parse_element("0:1+3:1")
    assert G.mul(x, x) == ()
    with pytest.raises(MalformedElement):
        G.validate(((0, 0),))


def test_lamplighter_law():
    L = Lamplighter()
    a, t = L.lamp(0), L.step(1)
    assert L.mul(t, a) == ((1,), 1)
    assert L.mul(a, t) == ((0,), 1)
    assert L.mul(L.mul(t, a), L.inv(t)) == ((1,), 0)
    assert L.format_element(L.parse_element("lamps=0,3 shift=-2")) == "lamps=0,3 shift=-2"
    assert L.derived_membership(((0, 1), 0)) and not L.derived_membership(((0,), 0))


def test_finitary_symmetric():
    F = FinitarySymmetric()
    x = F.parse_element("(1 2 3)")
    y = F.parse_element("(3 4)")
    assert F.format_element(F.mul(x, y)) == "(1 2 3 4)"
    assert F.parity(x) == 0 and F.parity(y) == 1
    assert len(F.window(4).elements) == 24
    assert F.shift(y, 1) == F.parse_element("(4 5)")


def test_encoding_is_canonical_and_round_trips():
    for G in (RestrictedPower(FiniteGroup.heisenberg(3), "Z"), Lamplighter(), FinitarySymmetric(),
              symmetric_group(4)):
        rng = random.Random(7)
        for _ in range(50):
            x = G.random_element(rng)
            assert G.decode(G.encode(x)) == x
            y = G.mul(G.mul(x, G.random_element(rng)), G.inv(G.random_element(rng)))
            assert (G.encode(y) == G.encode(x)) == (y == x)


def test_subgroup_closure_and_budget():
    S5 = symmetric_group(5)
    assert len(subgroup_closure(S5, [S5.parse_element("(1 2 3 4 5)")])) == 5
    assert len(subgroup_closure(S5, [S5.parse_element("(1 2)"), S5.parse_element("(1 2 3 4 5)")])) == 120
    with pytest.raises(BudgetExceeded):
        subgroup_closure(S5, [S5.parse_element("(1 2)"), S5.parse_element("(1 2 3 4 5)")], budget=50)


def test_closure_agrees_with_dict_oracle():
    S5 = symmetric_group(5)
    gens = ["(1 2 3)", "(3 4 5)"]
    ours = subgroup_closure(S5, [S5.parse_element(g) for g in gens])
    ref = oracles.closure([oracles.perm(g, 5) for g in gens], 5)
    assert len(ours) == len(ref) == 60


def test_normal_subgroup_checks():
    S4 = symmetric_group(4)
    A4 = alternating_group(4)
    S4.normal_subgroup_spec(A4.elements(), "A4")
    with pytest.raises(NotNormal):
        S4.normal_subgroup_spec(subgroup_closure(S4, [S4.parse_element("(1 2)")]).elements, "C2")
    G = RestrictedPower(FiniteGroup.heisenberg(2), "Z")
    for spec in (G.derived_spec(), G.center_spec()):
        check_normal_subgroup(G, spec, samples=200, seed=1)
    L = Lamplighter()
    check_normal_subgroup(L, L.base_spec(), samples=200, seed=1)
    check_normal_subgroup(L, L.derived_spec(), samples=200, seed=1)
    check_normal_subgroup(FinitarySymmetric(), FinitarySymmetric().alt_spec(), samples=200, seed=1)


def test_direct_product():
    P = direct_product(cyclic_group(2), cyclic_group(3))
    assert P.order == 6 and P.is_abelian


def test_mul_checks_elements():
    S3 = symmetric_group(3)
    with pytest.raises(MalformedElement):
        mul(S3, (0, 1, 2), (0, 0, 1))


# ---- group axioms as properties ---------------------------------------------

FAMILIES = [RestrictedPower(FiniteGroup.heisenberg(2), "Z"), RestrictedPower(FiniteGroup.heisenberg(3), "N"),
            Lamplighter(), FinitarySymmetric(), symmetric_group(5), quaternion_group()]


@given(st.sampled_from(range(len(FAMILIES))), st.integers(0, 2**32 - 1))
def test_group_axioms(which, seed):
    G = FAMILIES[which]
    rng = random.Random(seed)
    a, b, c = (G.random_element(rng) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.identity) == a == G.mul(G.identity, a)
    assert G.mul(a, G.inv(a)) == G.identity == G.mul(G.inv(a), a)
    assert G.is_valid(G.mul(a, b))


@given(st.integers(0, 2**32 - 1))
def test_commutators_land_in_derived_subgroup(seed):
    rng = random.Random(seed)
    for G in FAMILIES:
        a, b = G.random_element(rng), G.random_element(rng)
        assert G.derived_membership(G.commutator(a, b))
