import random

import pytest

from entropylab import morphisms as mo
from entropylab.errors import (KindMismatch, MalformedElement, NotAutomorphism, NotHomomorphism,
                               NotInvariant)
from entropylab.groups import (FinitarySymmetric, FiniteGroup, Lamplighter, NormalSubgroupSpec,
                               RestrictedPower, cyclic_group, symmetric_group)


def catalog():
    heis_n = RestrictedPower(FiniteGroup.heisenberg(2), "N")
    heis_z = RestrictedPower(FiniteGroup.heisenberg(3), "Z")
    z6 = RestrictedPower(FiniteGroup.cyclic(6), "Z")
    L = Lamplighter()
    F = FinitarySymmetric()
    S4 = symmetric_group(4)
    return [
        mo.shift_right(heis_n), mo.shift_right(heis_z), mo.shift_left(heis_z),
        mo.inner(heis_z, heis_z.parse_element("0:(1,2,0)")),
        mo.permute_coordinates(heis_z, {0: 2, 2: 0}),
        mo.power(z6, 5), mo.power(z6, 2),
        mo.shift_right(L), mo.inner(L, L.step(1)), mo.identity(L),
        mo.inner(F, F.parse_element("(1 2)")), mo.shift_right(F),
        mo.inner(S4, S4.parse_element("(1 2 3 4)")),
    ]


@pytest.mark.parametrize("phi", catalog(), ids=lambda p: f"{p.family.kind}-{p.kind}")
def test_homomorphism_on_1000_pairs(phi):
    G = phi.family
    rng = random.Random(2024)
    for _ in range(1000):
        a, b = G.random_element(rng), G.random_element(rng)
        assert mo.apply(phi, G.mul(a, b)) == G.mul(mo.apply(phi, a), mo.apply(phi, b))


@pytest.mark.parametrize("phi", [p for p in catalog() if p.is_automorphism],
                         ids=lambda p: f"{p.family.kind}-{p.kind}")
def test_inverse(phi):
    G = phi.family
    inv = phi.inverse()
    rng = random.Random(3)
    for _ in range(200):
        x = G.random_element(rng)
        assert inv(phi(x)) == x == phi(inv(x))


def test_validation_report_is_recorded():
    G = RestrictedPower(FiniteGroup.heisenberg(2), "Z")
    phi = mo.shift_right(G, seed=5, samples=64)
    assert phi.report.seed == 5 and phi.report.samples == 64 and phi.report.inverse_checked


def test_shift_on_n_is_not_invertible():
    G = RestrictedPower(FiniteGroup.heisenberg(2), "N")
    phi = mo.shift_right(G)
    assert not phi.is_automorphism
    with pytest.raises(NotAutomorphism):
        phi.inverse()
    with pytest.raises(KindMismatch):
        mo.shift_left(G)


def test_power_needs_abelian_base():
    with pytest.raises(KindMismatch):
        mo.power(RestrictedPower(FiniteGroup.heisenberg(2), "N"), 2)
    with pytest.raises(KindMismatch):
        mo.power(symmetric_group(3), 2)
    phi = mo.power(cyclic_group(5), 2)
    assert phi.is_automorphism


def test_finite_table_rejects_non_homomorphism():
    S3 = symmetric_group(3)
    t = S3.parse_element("(1 2)")
    bad = {x: (t if x != S3.identity else S3.identity) for x in S3.elements()}
    with pytest.raises(NotHomomorphism):
        mo.finite_table(S3, bad)
    with pytest.raises(MalformedElement):
        mo.finite_table(S3, {S3.identity: S3.identity})


def test_from_generator_images_builds_sign_map():
    S3 = symmetric_group(3)
    t = S3.parse_element("(1 2)")
    images = {g: (t if g in (S3.parse_element("(1 2)"),) else S3.identity) for g in S3.generators}
    phi = mo.from_generator_images(S3, images)
    assert len(phi.image(S3.elements())) == 2
    assert not phi.is_automorphism


def test_compose_applies_rightmost_first():
    S3 = symmetric_group(3)
    a = mo.inner(S3, S3.parse_element("(1 2)"))
    b = mo.inner(S3, S3.parse_element("(1 2 3)"))
    x = S3.parse_element("(1 3)")
    assert mo.compose(a, b)(x) == a(b(x))
    assert mo.iterate(b, 3)(x) == x
    assert mo.apply_power(b, x, 3) == x


def test_restrict_checks_invariance():
    G = RestrictedPower(FiniteGroup.heisenberg(2), "Z")
    phi = mo.shift_right(G)
    r = mo.restrict(phi, G.derived_spec())
    z = G.parse_element("0:(0,0,1)")
    assert mo.apply(r, z) == G.parse_element("1:(0,0,1)")
    with pytest.raises(MalformedElement):
        mo.apply(r, G.parse_element("0:(1,0,0)"))
    F = FinitarySymmetric()
    swap = mo.inner(F, F.parse_element("(1 5)"))
    window = F.window(3)
    with pytest.raises(NotInvariant):
        mo.restrict(swap, _membership_spec(F, window.elements), samples=32)


def _membership_spec(F, elements):
    pool = sorted(elements)
    return NormalSubgroupSpec("window", elements.__contains__, sampler=lambda rng: rng.choice(pool))


def test_conjugate():
    S4 = symmetric_group(4)
    phi = mo.inner(S4, S4.parse_element("(1 2)"))
    xi = mo.inner(S4, S4.parse_element("(1 2 3 4)"))
    psi = mo.conjugate(phi, xi)
    for x in S4.elements():
        assert psi(xi(x)) == xi(phi(x))
    assert mo.conjugate(phi, mo.identity(S4)) is phi
    G = RestrictedPower(FiniteGroup.heisenberg(2), "N")
    with pytest.raises(NotAutomorphism):
        mo.conjugate(mo.identity(G), mo.shift_right(G))


def test_agree_on():
    S3 = symmetric_group(3)
    c = S3.parse_element("(1 2 3)")
    assert mo.agree_on(mo.inner(S3, c), mo.iterate(mo.inner(S3, c), 4))
    assert not mo.agree_on(mo.inner(S3, c), mo.identity(S3))
