"""Randomized exact-arithmetic checks of the coset-count and trajectory laws.

Each clause draws ``trials`` seeded instances and records failures with a
small payload. The ``mul`` hook swaps in a different product on S5 (for
example a deliberately broken one) so the suite can be mutation-tested.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import morphisms as mo
from .entropy import dyadic_sequence, relative_dyadic_counts, zero_entropy_certificate
from .errors import MonotonicityViolation
from .groups import (FiniteGroup, GroupFamily, PermutationGroup, RestrictedPower, dihedral_group,
                     quaternion_group, subgroup_closure, subgroup_spec, symmetric_group)
from .trajectory import (back_trajectory, cfsub_decompose, count_cosets, iter_trajectory,
                         product_set, trajectory)

MAX_COUNTEREXAMPLES = 5


@dataclass
class ClauseResult:
    name: str
    trials: int = 0
    failures: int = 0
    counterexamples: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def fail(self, payload) -> None:
        self.failures += 1
        if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(repr(payload)[:400])


@dataclass
class PropertyReport:
    seed: int
    trials: int
    clauses: dict[str, ClauseResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.clauses.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, c in self.clauses.items() if not c.ok]

    def to_dict(self) -> dict:
        return {"seed": self.seed, "trials": self.trials, "ok": self.ok,
                "clauses": {k: {"trials": c.trials, "failures": c.failures,
                                "counterexamples": c.counterexamples}
                            for k, c in sorted(self.clauses.items())}}


class _Hooked(GroupFamily):
    """Delegates to ``inner`` but multiplies with ``mul``."""

    def __init__(self, inner: GroupFamily, mul: Callable):
        self._inner = inner
        self._mul = mul
        self.identity = inner.identity
        self.name = inner.name + "*"
        self.kind = inner.kind

    def mul(self, a, b):
        return self._mul(a, b)

    def __getattr__(self, name):
        return getattr(self._inner, name)


def _parity(p: tuple) -> int:
    seen: set = set()
    cycles = 0
    for i in range(len(p)):
        if i not in seen:
            cycles += 1
            j = i
            while j not in seen:
                seen.add(j)
                j = p[j]
    return (len(p) - cycles) % 2


def _endomorphisms(G: PermutationGroup, rng: random.Random, n_inner: int = 6) -> list:
    """Identity, trivial map, inner maps and (on S_n) the sign collapse x -> (1 2)^sgn(x)."""
    elems = sorted(G.elements())
    maps = [mo.identity(G), mo.finite_table(G, {x: G.identity for x in elems})]
    maps += [mo.inner(G, rng.choice(elems)) for _ in range(n_inner)]
    if G.name.startswith("S"):
        t = G.parse_element("(1 2)")
        sign = mo.finite_table(G, {x: (t if _parity(x) else G.identity) for x in elems})
        maps += [sign, mo.compose(mo.inner(G, rng.choice(elems)), sign)]
    return maps


class _Context:
    """Seeded fixtures shared by the clauses."""

    def __init__(self, seed: int, mul: Callable | None):
        rng = random.Random(seed)
        self.S5 = symmetric_group(5)
        self.fam = _Hooked(self.S5, mul) if mul is not None else self.S5
        self.elements = sorted(self.S5.elements())
        subs = {frozenset([self.S5.identity]), frozenset(self.elements)}
        for _ in range(120):
            gens = rng.sample(self.elements, rng.choice((1, 1, 2)))
            subs.add(subgroup_closure(self.S5, gens).elements)
        self.subgroups = sorted(subs, key=lambda s: (len(s), sorted(s)))
        self.nested = [(a, b) for a in self.subgroups for b in self.subgroups if a <= b]
        # pairs with BB' a subgroup, i.e. BB' = B'B
        self.permuting = [(a, b) for a in self.subgroups for b in self.subgroups
                          if product_set(self.S5, a, b) == product_set(self.S5, b, a)]
        S5 = self.S5
        self.normalizer = {B: sorted(g for g in self.elements
                                     if frozenset(S5.conj(g, b) for b in B) == B)
                           for B in self.subgroups}
        self.s5_maps = _endomorphisms(self.S5, rng)
        groups = [symmetric_group(3), symmetric_group(4), self.S5, dihedral_group(4), quaternion_group()]
        self.finite = [(G, self.s5_maps if G is self.S5 else _endomorphisms(G, rng)) for G in groups]
        heis = RestrictedPower(FiniteGroup.heisenberg(2), "Z")
        self.heis = heis
        self.heis_maps = [mo.shift_right(heis), mo.inner(heis, heis.element({0: (1, 0, 0)})),
                          mo.identity(heis), mo.permute_coordinates(heis, {0: 1, 1: 0})]

    def subset(self, rng, lo, hi, pool=None):
        pool = self.elements if pool is None else pool
        return frozenset(rng.sample(pool, min(len(pool), rng.randint(lo, hi))))

    def cosets(self, X, B) -> int:
        return count_cosets(X, subgroup_spec(self.fam, B))

    def instance(self, rng, heis_share=0.25):
        """(family, endomorphism, X with 1 in X, depth)."""
        if rng.random() < heis_share:
            G, phi = self.heis, rng.choice(self.heis_maps)
            start = rng.randint(-1, 1)
            window = sorted(G.window(1, start).elements)
            X = frozenset(rng.sample(window, rng.randint(1, 3))) | {G.identity}
            return G, phi, X, 2
        G, maps = rng.choice(self.finite)
        X = frozenset(G.random_element(rng) for _ in range(rng.randint(1, 3))) | {G.identity}
        return G, rng.choice(maps), X, 3


def _levels(phi, X, depth):
    return list(dyadic_sequence(phi, X, depth).levels)


# ---------------------------------------------------------------------------
# coset counts on S5

def _coset_count_monotone(ctx: _Context, rng, r: ClauseResult):
    X = ctx.subset(rng, 1, 6)
    X2 = X | ctx.subset(rng, 1, 6)
    B, B2 = rng.choice(ctx.nested)
    a, b, c = ctx.cosets(X, B), ctx.cosets(X2, B), ctx.cosets(X, B2)
    if not (a <= b and c <= a):
        r.fail({"X": sorted(X), "X'": sorted(X2), "B": len(B), "B'": len(B2), "counts": (a, b, c)})


def _coset_product_formula(ctx: _Context, rng, r: ClauseResult):
    X = ctx.subset(rng, 1, 8)
    B = rng.choice(ctx.subgroups)
    lhs = len(product_set(ctx.fam, X, B))
    rhs = ctx.cosets(X, B) * len(B)
    if lhs != rhs:
        r.fail({"X": sorted(X), "B": sorted(B), "|XB|": lhs, "cosets*|B|": rhs})


# For left cosets the two product bounds need X' inside the normalizer of B:
# then xx'B depends only on xB and x'B. Without it they fail (e.g. B = <(1 2)>
# in S3, X = B, X' = {(1 3)} gives 2 cosets against 1 * 1).

def _coset_count_subadditive(ctx: _Context, rng, r: ClauseResult):
    B = rng.choice(ctx.subgroups)
    X, X2 = ctx.subset(rng, 1, 6), ctx.subset(rng, 1, 6, ctx.normalizer[B])
    if ctx.cosets(product_set(ctx.fam, X, X2), B) > ctx.cosets(X, B) * ctx.cosets(X2, B):
        r.fail({"X": sorted(X), "X'": sorted(X2), "B": sorted(B)})


def _coset_count_subadditive_product(ctx: _Context, rng, r: ClauseResult):
    B, B2 = rng.choice(ctx.permuting)
    X, X2 = ctx.subset(rng, 1, 6), ctx.subset(rng, 1, 6, ctx.normalizer[B])
    BB = product_set(ctx.S5, B, B2)
    if ctx.cosets(product_set(ctx.fam, X, X2), BB) > ctx.cosets(X, B) * ctx.cosets(X2, B2):
        r.fail({"X": sorted(X), "X'": sorted(X2), "B": len(B), "B'": len(B2)})


def _coset_count_image_contracts(ctx: _Context, rng, r: ClauseResult):
    X = ctx.subset(rng, 1, 8)
    B = rng.choice(ctx.subgroups)
    phi = rng.choice(ctx.s5_maps)
    if ctx.cosets(phi.image(X), phi.image(B)) > ctx.cosets(X, B):
        r.fail({"phi": phi.kind, "X": sorted(X), "B": sorted(B)})


# ---------------------------------------------------------------------------
# trajectories and dyadic sequences

def _trajectory_monotone(ctx: _Context, rng, r: ClauseResult):
    G, phi, X, depth = ctx.instance(rng)
    prev = None
    for n, T in zip(range(1, 2**depth + 1), iter_trajectory(phi, X)):
        if prev is not None and not prev <= T:
            r.fail({"group": G.name, "phi": phi.kind, "X": sorted(X), "n": n})
            return
        prev = T


def _back_trajectory_inverse(ctx: _Context, rng, r: ClauseResult):
    # T_n(phi, X)^-1 is the backward trajectory of X^-1
    G, phi, X, depth = ctx.instance(rng)
    n = rng.randint(1, 2**depth)
    T = trajectory(phi, X, n)
    Xinv = frozenset(G.inv(x) for x in X)
    if back_trajectory(phi, Xinv, n) != frozenset(G.inv(t) for t in T):
        r.fail({"group": G.name, "phi": phi.kind, "X": sorted(X), "n": n})


def _dyadic_monotone(ctx: _Context, rng, r: ClauseResult):
    G, phi, X, depth = ctx.instance(rng)
    try:
        est = dyadic_sequence(phi, X, depth)
    except MonotonicityViolation as exc:
        r.fail({"group": G.name, "phi": phi.kind, "X": sorted(X), "error": str(exc)})
        return
    d = est.dyadic
    if any(b > a + 1e-12 for a, b in zip(d, d[1:])):
        r.fail({"group": G.name, "levels": est.levels})


def _conjugation_invariance(ctx: _Context, rng, r: ClauseResult):
    # T_n(xi phi xi^-1, xi X) = xi T_n(phi, X), so the counts agree exactly
    G, phi, X, depth = ctx.instance(rng)
    maps = ctx.heis_maps if G is ctx.heis else dict(ctx.finite)[G]
    xi = rng.choice([m for m in maps if m.is_automorphism])
    psi = mo.conjugate(phi, xi)
    a, b = _levels(phi, X, depth), _levels(psi, xi.image(X), depth)
    if a != b:
        r.fail({"group": G.name, "phi": phi.kind, "xi": xi.kind, "X": sorted(X), "a": a, "b": b})


def _subset_monotone(ctx: _Context, rng, r: ClauseResult):
    G, phi, X, depth = ctx.instance(rng)
    if G is ctx.heis:
        Y = X | {rng.choice(sorted(G.window(1, 0).elements))}
    else:
        Y = X | {G.random_element(rng)}
    a, b = _levels(phi, X, depth), _levels(phi, Y, depth)
    if any(ca > cb for (_, ca), (_, cb) in zip(a, b)):
        r.fail({"group": G.name, "phi": phi.kind, "X": sorted(X), "Y": sorted(Y)})


def _certificate_sound(ctx: _Context, rng, r: ClauseResult):
    G, maps = rng.choice(ctx.finite)
    phi = rng.choice(maps)
    X = frozenset(G.random_element(rng) for _ in range(rng.randint(1, 3)))
    if rng.random() < 0.5:
        X |= {G.identity}
    m = zero_entropy_certificate(phi, X, m_max=64)
    if m is None:
        # with 1 in X a trajectory in a finite group must stabilize
        if G.identity in X:
            r.fail({"group": G.name, "phi": phi.kind, "X": sorted(X), "note": "no certificate"})
        return
    Tm = trajectory(phi, X, m)
    if any(trajectory(phi, X, n) != Tm for n in range(m + 1, m + 6)):
        r.fail({"group": G.name, "phi": phi.kind, "X": sorted(X), "m": m})


def _closure_decomposition(ctx: _Context, rng, r: ClauseResult):
    G, maps = rng.choice(ctx.finite)
    phi = rng.choice(maps)
    F = subgroup_closure(G, [G.random_element(rng) for _ in range(rng.randint(1, 2))]).elements
    n = rng.randint(1, 3)
    if not cfsub_decompose(phi, F, n).holds:
        r.fail({"group": G.name, "phi": phi.kind, "F": len(F), "n": n})


def _relative_dyadic_monotone(ctx: _Context, rng, r: ClauseResult):
    # coset counts of T_{2^k}(X) mod the subgroup T_{2^k}(F)
    if rng.random() < 0.5:
        # F a window of the Heisenberg power; T_n(shift, F) is again a window
        fam, phi, depth = ctx.heis, ctx.heis_maps[0], 1
        start = rng.randint(-1, 1)
        F = fam.window(1, start).elements
        pool = sorted(fam.window(1, start - 1).elements | F)
        X = frozenset(rng.sample(pool, rng.randint(1, 3)))
    else:
        # F the closure of a phi-orbit, so every T_n(phi, F) equals F
        fam, maps = rng.choice(ctx.finite)
        phi, depth = rng.choice(maps), 3
        g = fam.random_element(rng)
        orbit = [g]
        for _ in range(8):
            orbit.append(phi(orbit[-1]))
        F = subgroup_closure(fam, orbit).elements
        X = frozenset(fam.random_element(rng) for _ in range(rng.randint(1, 3)))
    counts = relative_dyadic_counts(phi, X, F, depth)
    if any(b > a * a for (_, a), (_, b) in zip(counts, counts[1:])):
        r.fail({"group": fam.name, "phi": phi.kind, "X": sorted(X), "counts": counts})


CLAUSES: dict[str, Callable] = {
    "coset_count_monotone": _coset_count_monotone,
    "coset_product_formula": _coset_product_formula,
    "coset_count_subadditive": _coset_count_subadditive,
    "coset_count_subadditive_product": _coset_count_subadditive_product,
    "coset_count_image_contracts": _coset_count_image_contracts,
    "trajectory_monotone": _trajectory_monotone,
    "back_trajectory_inverse": _back_trajectory_inverse,
    "dyadic_monotone": _dyadic_monotone,
    "conjugation_invariance": _conjugation_invariance,
    "subset_monotone": _subset_monotone,
    "certificate_sound": _certificate_sound,
    "closure_decomposition": _closure_decomposition,
    "relative_dyadic_monotone": _relative_dyadic_monotone,
}


def lemma_property_suite(seed: int = 42, trials: int = 500, *, mul: Callable | None = None,
                         clauses: tuple[str, ...] | None = None) -> PropertyReport:
    """Run each clause ``trials`` times and collect counterexamples.

    Coset-count clauses use subsets and subgroups of S5, multiplied with
    ``mul`` when given. Trajectory clauses use S3, S4, S5, D8, Q8 and the
    Z-indexed restricted power of H(F_2).
    """
    names = list(CLAUSES) if clauses is None else list(clauses)
    unknown = [n for n in names if n not in CLAUSES]
    if unknown:
        raise KeyError(f"unknown clause {unknown[0]!r}")
    ctx = _Context(seed, mul)
    out = {}
    for name in names:
        res = ClauseResult(name)
        # one stream per clause, so selecting a subset does not shift the others
        rng = random.Random(f"{seed}:{name}")
        check = CLAUSES[name]
        for _ in range(trials):
            res.trials += 1
            check(ctx, rng, res)
        out[name] = res
    return PropertyReport(seed, trials, out)
