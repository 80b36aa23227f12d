"""Endomorphism catalog for the supported families.

Every constructor checks the homomorphism law on seeded random pairs before
returning; the seed and sample count are kept in ``Endomorphism.report``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable

from .errors import KindMismatch, MalformedElement, NotAutomorphism, NotHomomorphism, NotInvariant
from .groups import (FinitarySymmetric, GroupFamily, Lamplighter, NormalSubgroupSpec,
                     PermutationGroup, RestrictedPower, _sample_member)

DEFAULT_SAMPLES = 256


@dataclass(frozen=True)
class ValidationReport:
    seed: int
    samples: int
    inverse_checked: bool = False


@dataclass(frozen=True, eq=False)
class Endomorphism:
    family: GroupFamily
    kind: str
    fn: Callable = field(repr=False)
    params: tuple = ()
    is_automorphism: bool = False
    inverse_factory: Callable[..., "Endomorphism"] | None = field(default=None, repr=False)
    restricted_to: NormalSubgroupSpec | None = field(default=None, repr=False)
    report: ValidationReport | None = None

    def __call__(self, x):
        return self.fn(x)

    def inverse(self) -> "Endomorphism":
        if not self.is_automorphism or self.inverse_factory is None:
            raise NotAutomorphism(f"{self.kind} has no inverse")
        return self.inverse_factory()

    def image(self, X: Iterable) -> frozenset:
        fn = self.fn
        return frozenset(fn(x) for x in X)

    def describe(self) -> dict:
        out = {"kind": self.kind, "automorphism": self.is_automorphism}
        if self.params:
            out["params"] = [str(p) for p in self.params]
        if self.restricted_to is not None:
            out["restricted_to"] = self.restricted_to.name
        return out


def validate_endomorphism(phi: Endomorphism, samples: int = DEFAULT_SAMPLES,
                          seed: int = 0) -> ValidationReport:
    """Check phi(ab) = phi(a)phi(b), and phi(phi^-1(x)) = x for automorphisms."""
    fam = phi.family
    rng = random.Random(seed)
    check_inverse = phi.is_automorphism and phi.inverse_factory is not None
    inv = phi.inverse_factory(validate=False) if check_inverse else None
    for _ in range(samples):
        if phi.restricted_to is not None:
            a = _sample_member(fam, phi.restricted_to, rng)
            b = _sample_member(fam, phi.restricted_to, rng)
        else:
            a = fam.random_element(rng)
            b = fam.random_element(rng)
        if phi(fam.mul(a, b)) != fam.mul(phi(a), phi(b)):
            raise NotHomomorphism((a, b))
        if inv is not None and (phi(inv(a)) != a or inv(phi(a)) != a):
            raise NotAutomorphism(f"inverse check failed at {a!r}")
    return ValidationReport(seed, samples, check_inverse)


def _build(family, kind, fn, params=(), automorphism=False, inverse=None,
           validate=True, samples=DEFAULT_SAMPLES, seed=0, restricted_to=None) -> Endomorphism:
    phi = Endomorphism(family, kind, fn, tuple(params), automorphism, inverse, restricted_to)
    if validate:
        report = validate_endomorphism(phi, samples, seed)
        object.__setattr__(phi, "report", report)
    return phi


def identity(family: GroupFamily) -> Endomorphism:
    return _build(family, "identity", lambda x: x, automorphism=True,
                  inverse=lambda **o: identity(family), validate=False)


def shift_right(family: GroupFamily, **kw) -> Endomorphism:
    """Index shift i -> i + 1.

    On N-indexed powers and on S_fin(N+) this is injective but not onto;
    on Z-indexed powers and on the lamplighter base it is an automorphism.
    """
    if isinstance(family, RestrictedPower):
        fn = lambda x: family.shift(x, 1)
        auto = family.index_set == "Z"
    elif isinstance(family, Lamplighter):
        fn = lambda x: family.shift_lamps(x, 1)
        auto = True
    elif isinstance(family, FinitarySymmetric):
        fn = lambda x: family.shift(x, 1)
        auto = False
    else:
        raise KindMismatch(f"shift is not defined on {family.kind}")
    return _build(family, "shift_right", fn, automorphism=auto,
                  inverse=(lambda **o: shift_left(family, **{**kw, **o})) if auto else None, **kw)


def shift_left(family: GroupFamily, **kw) -> Endomorphism:
    if isinstance(family, RestrictedPower) and family.index_set == "Z":
        fn = lambda x: family.shift(x, -1)
    elif isinstance(family, Lamplighter):
        fn = lambda x: family.shift_lamps(x, -1)
    else:
        raise KindMismatch("left shift needs a Z-indexed family")
    return _build(family, "shift_left", fn, automorphism=True,
                  inverse=lambda **o: shift_right(family, **{**kw, **o}), **kw)


def inner(family: GroupFamily, g, **kw) -> Endomorphism:
    g = family.validate(g)
    g_inv = family.inv(g)
    mul = family.mul
    return _build(family, "inner", lambda x: mul(mul(g, x), g_inv),
                  params=(family.format_element(g),), automorphism=True,
                  inverse=lambda **o: inner(family, g_inv, **{**kw, **o}), **kw)


def power(family: GroupFamily, k: int, **kw) -> Endomorphism:
    """x -> x^k, applied coordinatewise on restricted powers.

    Only a homomorphism when the group is abelian, so anything else is
    rejected up front.
    """
    if isinstance(family, RestrictedPower):
        base = family.base
        if not base.is_abelian:
            raise KindMismatch("coordinatewise power needs an abelian base group")
        table = [base.power(v, k) for v in range(base.order)]
        fn = lambda x: family.map_values(x, table)
        exp = base.exponent()
    elif isinstance(family, PermutationGroup):
        if not family.is_abelian:
            raise KindMismatch("power map needs an abelian group")
        fn = lambda x: family.power(x, k)
        exp = family.base.exponent()
    else:
        raise KindMismatch(f"power map is not defined on {family.kind}")
    auto = gcd(k, exp) == 1
    inverse = None
    if auto:
        k_inv = pow(k, -1, exp) if exp > 1 else 1
        inverse = lambda **o: power(family, k_inv, **{**kw, **o})
    return _build(family, "power", fn, params=(k,), automorphism=auto, inverse=inverse, **kw)


def finite_table(family: PermutationGroup, mapping: dict, **kw) -> Endomorphism:
    """Endomorphism of a finite group given by its full value table."""
    if not family.is_finite:
        raise KindMismatch("finite tables need a finite family")
    elems = family.elements()
    missing = [x for x in elems if x not in mapping]
    if missing:
        raise MalformedElement(missing[0], "table does not cover")
    table = {x: family.validate(mapping[x]) for x in elems}
    for a in elems:
        for b in elems:
            if table[family.mul(a, b)] != family.mul(table[a], table[b]):
                raise NotHomomorphism((a, b))
    auto = len(set(table.values())) == len(elems)
    inverse = None
    if auto:
        back = {v: k for k, v in table.items()}
        inverse = lambda **o: finite_table(family, back)
    return _build(family, "finite_table", table.__getitem__, automorphism=auto,
                  inverse=inverse, validate=False)


def from_generator_images(family: PermutationGroup, images: dict, **kw) -> Endomorphism:
    """Extend an assignment on generators to a table by walking the Cayley graph."""
    table = {family.identity: family.identity}
    frontier = [family.identity]
    gens = list(images)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = family.mul(x, g)
                if y not in table:
                    table[y] = family.mul(table[x], images[g])
                    nxt.append(y)
        frontier = nxt
    return finite_table(family, table, **kw)


def permute_coordinates(family: RestrictedPower, mapping: dict, **kw) -> Endomorphism:
    """Move coordinate i to mapping[i] for a finitely supported index bijection."""
    if not isinstance(family, RestrictedPower):
        raise KindMismatch("coordinate permutation needs a restricted power")
    m = {int(i): int(j) for i, j in mapping.items()}
    if sorted(m) != sorted(m.values()):
        raise ValueError("coordinate map must permute a finite index set")
    if family.index_set == "N" and any(i < 0 for i in m):
        raise ValueError("negative index on N")
    pair = family._pair

    def fn(x):
        return tuple(sorted(pair(m.get(i, i), v) for i, v in x))

    back = {j: i for i, j in m.items()}
    return _build(family, "permute_coordinates", fn, params=(tuple(sorted(m.items())),),
                  automorphism=True,
                  inverse=lambda **o: permute_coordinates(family, back, **{**kw, **o}), **kw)


def compose(*maps: Endomorphism, **kw) -> Endomorphism:
    """``compose(f, g, h)`` is f o g o h: h is applied first."""
    if not maps:
        raise ValueError("compose needs at least one map")
    family = maps[0].family
    for m in maps[1:]:
        if m.family is not family:
            raise KindMismatch("cannot compose maps of different families")
    fns = [m.fn for m in reversed(maps)]

    def fn(x):
        for f in fns:
            x = f(x)
        return x

    auto = all(m.is_automorphism for m in maps)
    inverse = None
    if auto:
        inverse = lambda **o: compose(*[m.inverse() for m in reversed(maps)])
    kw.setdefault("validate", False)
    return _build(family, "compose", fn, params=tuple(m.kind for m in maps),
                  automorphism=auto, inverse=inverse, **kw)


def iterate(phi: Endomorphism, n: int) -> Endomorphism:
    if n < 0:
        raise ValueError("negative iterate")
    if n == 0:
        return identity(phi.family)
    return compose(*([phi] * n))


def apply(phi: Endomorphism, x):
    """Checked application: ``x`` must be a valid element of phi's domain."""
    phi.family.validate(x)
    if phi.restricted_to is not None and not phi.restricted_to.membership(x):
        raise MalformedElement(x, f"outside {phi.restricted_to.name}")
    return phi.fn(x)


def apply_power(phi: Endomorphism, x, n: int):
    for _ in range(n):
        x = phi.fn(x)
    return x


def apply_set(phi: Endomorphism, X: Iterable) -> frozenset:
    return phi.image(X)


def restrict(phi: Endomorphism, H: NormalSubgroupSpec, samples: int = DEFAULT_SAMPLES,
             seed: int = 0) -> Endomorphism:
    """Restriction of phi to a phi-invariant subgroup, checked on samples."""
    fam = phi.family
    rng = random.Random(seed)
    probes = [fam.identity] + [_sample_member(fam, H, rng) for _ in range(samples)]
    for h in probes:
        if H.membership(h) and not H.membership(phi.fn(h)):
            raise NotInvariant(h)
    return Endomorphism(fam, "restrict", phi.fn, (phi.kind, H.name), phi.is_automorphism,
                        phi.inverse_factory, H, ValidationReport(seed, samples))


def conjugate(phi: Endomorphism, xi: Endomorphism) -> Endomorphism:
    """xi o phi o xi^-1, which has the same entropy as phi."""
    if not xi.is_automorphism:
        raise NotAutomorphism(f"{xi.kind} is not an automorphism")
    if xi.kind == "identity":
        return phi
    return compose(xi, phi, xi.inverse())


def agree_on(phi: Endomorphism, psi: Endomorphism, samples: int = DEFAULT_SAMPLES,
             seed: int = 0) -> bool:
    fam = phi.family
    rng = random.Random(seed)
    return all(phi(x) == psi(x) for x in (fam.random_element(rng) for _ in range(samples)))
