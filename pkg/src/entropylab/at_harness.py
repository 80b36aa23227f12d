"""Finite-stage checks around h(phi) = h(phi|H) + h(phi_bar).

Limits over infinite groups cannot be computed, so every check here works
with exact cardinalities at finitely many n: additivity of certified growth
bases, the central lower-bound inequality, the metabelian upper-bound chain,
the zero-quotient containment, and a growth witness for the lamplighter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .entropy import (DEFAULT_DEPTH, EntropyEstimate, HEvidence, _fmt, dyadic_sequence,
                      paired_sequences)
from .errors import BudgetExceeded, NoCertificate, NotCentral, OracleMissing
from .groups import (DEFAULT_BUDGET, FiniteSubgroup, GroupFamily, NormalSubgroupSpec,
                     check_normal_subgroup, subgroup_closure, subgroup_spec)
from .morphisms import Endomorphism, restrict
from .trajectory import cfsub_decompose, count_cosets, iter_trajectory, product_set, trajectory

DEFAULT_TOLERANCE = 1e-9


class Verdict(str, Enum):
    ADDITIVE_EXACT = "AdditiveExact"
    ADDITIVE_WITHIN_TOLERANCE = "AdditiveWithinTolerance"
    INEQUALITY_ONLY = "InequalityOnly"
    FAILURE_WITNESS = "FailureWitness"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class GrowthSpec:
    n_min: int = 5
    n_max: int = 14
    threshold: float = 1.5


@dataclass
class GrowthWitness:
    spec: GrowthSpec
    cardinalities: dict[int, int]
    budget_hit: bool = False

    @property
    def ratios(self) -> dict[int, float]:
        c = self.cardinalities
        return {n: c[n + 1] / c[n] for n in range(self.spec.n_min, self.spec.n_max + 1)
                if n in c and n + 1 in c}

    @property
    def holds(self) -> bool:
        # ratio >= threshold compared as integers: 2 * c_{n+1} >= 3 * c_n for 1.5
        num, den = self.spec.threshold.as_integer_ratio()
        c = self.cardinalities
        ns = range(self.spec.n_min, self.spec.n_max + 1)
        return all(n in c and n + 1 in c and den * c[n + 1] >= num * c[n] for n in ns)

    def to_dict(self) -> dict:
        return {"n_min": self.spec.n_min, "n_max": self.spec.n_max,
                "threshold": self.spec.threshold, "holds": self.holds,
                "cardinalities": {str(n): c for n, c in sorted(self.cardinalities.items())},
                "ratios": {str(n): _fmt(r) for n, r in sorted(self.ratios.items())},
                "budget_hit": self.budget_hit}


def growth_witness(phi: Endomorphism, S: Iterable, spec: GrowthSpec = GrowthSpec(),
                   budget: int = DEFAULT_BUDGET) -> GrowthWitness:
    cards: dict[int, int] = {}
    hit = False
    try:
        for n, T in enumerate(iter_trajectory(phi, S, budget), start=1):
            cards[n] = len(T)
            if n > spec.n_max:
                break
    except BudgetExceeded:
        hit = True
    return GrowthWitness(spec, cards, hit)


@dataclass
class ATReport:
    instance: dict
    full: HEvidence
    restricted: HEvidence
    quotient: HEvidence
    verdict: Verdict
    reason: str
    witnesses: list[dict] = field(default_factory=list)
    growth: GrowthWitness | None = None

    def to_dict(self) -> dict:
        out = {
            "instance": self.instance,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "h_full": self.full.to_dict(),
            "h_restricted": self.restricted.to_dict(),
            "h_quotient": self.quotient.to_dict(),
            "witnesses": self.witnesses,
        }
        if self.growth is not None:
            out["growth_witness"] = self.growth.to_dict()
        return out


def _vanishing(est: EntropyEstimate) -> bool:
    """Certified zero, or strictly decreasing dyadic terms (c_{k+1} < c_k^2)."""
    if est.exact is not None:
        return est.exact.base == 1
    lv = est.levels
    return len(lv) > 1 and all(b < a * a for (_, a), (_, b) in zip(lv, lv[1:]))


def at_check(family: GroupFamily, phi: Endomorphism, H: NormalSubgroupSpec,
             exhaustion: Sequence[Iterable], depth: int = DEFAULT_DEPTH,
             tolerance: float = DEFAULT_TOLERANCE, budget: int = DEFAULT_BUDGET,
             restricted_exhaustion: Sequence[Iterable] | None = None,
             growth: GrowthSpec | None = None, samples: int = 256, seed: int = 0) -> ATReport:
    """Gather evidence for phi on G, phi|H and the induced map on G/H.

    The quotient side is measured by coset counts of the same trajectories,
    so each exhaustion member is enumerated once. Unless given, the H-side
    exhaustion is the G-side one intersected with H.
    """
    if not exhaustion:
        raise ValueError("empty exhaustion")
    check_normal_subgroup(family, H, samples, seed)
    phi_h = restrict(phi, H, samples, seed)
    exhaustion = [frozenset(X) for X in exhaustion]
    if restricted_exhaustion is None:
        restricted_exhaustion = [frozenset(x for x in X if H.membership(x)) for X in exhaustion]
    else:
        restricted_exhaustion = [frozenset(Y) for Y in restricted_exhaustion]

    full_ests, quo_ests = [], []
    for X in exhaustion:
        f, q = paired_sequences(phi, X, H, depth, budget)
        full_ests.append(f)
        quo_ests.append(q)
    res_ests = [dyadic_sequence(phi_h, Y, depth, budget) for Y in restricted_exhaustion]
    full = HEvidence(full_ests)
    quotient = HEvidence(quo_ests, f"quotient:{H.name}")
    restricted = HEvidence(res_ests, f"restricted:{H.name}")

    witnesses = []
    for i, (f, q) in enumerate(zip(full_ests, quo_ests)):
        r = res_ests[i] if i < len(res_ests) else None
        rows = []
        for n in sorted(f.counts):
            rows.append({"n": n, "full": f.counts[n],
                         "restricted": None if r is None else r.counts.get(n),
                         "cosets": q.counts.get(n)})
        witnesses.append({"member": i, "rows": rows})

    gw = growth_witness(phi, exhaustion[0], growth, budget) if growth is not None else None
    verdict, reason = _verdict(full, restricted, quotient, gw, tolerance)
    instance = {"family": family.describe(), "endomorphism": phi.describe(), "subgroup": H.name,
                "depth": depth, "budget": budget, "tolerance": tolerance,
                "exhaustion_sizes": [len(X) for X in exhaustion],
                "restricted_exhaustion_sizes": [len(Y) for Y in restricted_exhaustion]}
    return ATReport(instance, full, restricted, quotient, verdict, reason, witnesses, gw)


def _verdict(full: HEvidence, restricted: HEvidence, quotient: HEvidence,
             gw: GrowthWitness | None, tol: float) -> tuple[Verdict, str]:
    if gw is not None and gw.holds and restricted.all_exact and all(
            _vanishing(e) for e in quotient.estimates):
        bound = restricted.value + quotient.value
        if bound < math.log(gw.spec.threshold):
            return Verdict.FAILURE_WITNESS, (
                f"trajectory growth ratio >= {gw.spec.threshold} on n={gw.spec.n_min}..{gw.spec.n_max} "
                f"while h(phi|H) + h(phi_bar) evidence <= {_fmt(bound)}")
    if full.budget_hit or restricted.budget_hit or quotient.budget_hit:
        return Verdict.INCONCLUSIVE, "budget exceeded before all levels were computed"
    if full.all_exact and restricted.all_exact and quotient.all_exact:
        g, h, q = full.exact_base, restricted.exact_base, quotient.exact_base
        if g == h * q:
            return Verdict.ADDITIVE_EXACT, f"growth bases {g} = {h} * {q}"
        return Verdict.INEQUALITY_ONLY, f"growth bases {g} vs {h} * {q}"
    lhs = full.value
    rhs = restricted.value + quotient.value
    if abs(lhs - rhs) <= tol:
        return Verdict.ADDITIVE_WITHIN_TOLERANCE, f"|{_fmt(lhs)} - {_fmt(rhs)}| <= {tol}"
    return Verdict.INCONCLUSIVE, f"values {_fmt(lhs)} vs {_fmt(rhs)} without exact certificates"


# ---------------------------------------------------------------------------
# central lower bound

@dataclass
class CenRow:
    n: int
    trajectory_e: int
    cosets_b: int
    trajectory_eb: int
    inequality: bool
    product_identity: bool

    @property
    def equality(self) -> bool:
        return self.trajectory_e * self.cosets_b == self.trajectory_eb


@dataclass
class CenReport:
    rows: list[CenRow]

    @property
    def ok(self) -> bool:
        return all(r.inequality and r.product_identity for r in self.rows)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "rows": [dict(vars(r), equality=r.equality) for r in self.rows]}


def check_cen_inequality(family: GroupFamily, phi: Endomorphism, N: NormalSubgroupSpec,
                         E: Iterable, B: Iterable, n_list: Sequence[int],
                         budget: int = DEFAULT_BUDGET, samples: int = 256, seed: int = 0) -> CenReport:
    """|T_n(E)| * #cosets(T_n(B), N) <= |T_n(EB)| and T_n(EB) = T_n(E) T_n(B)."""
    if not N.is_central:
        raise NotCentral(N.name)
    check_normal_subgroup(family, N, samples, seed)
    E = frozenset(E)
    B = frozenset(B)
    outside = [e for e in E if not N.membership(e)]
    if outside:
        raise ValueError(f"E is not inside {N.name}: {outside[0]!r}")
    EB = product_set(family, E, B, budget)
    rows = []
    for n in n_list:
        TE = trajectory(phi, E, n, budget)
        TB = trajectory(phi, B, n, budget)
        TEB = trajectory(phi, EB, n, budget)
        c = count_cosets(TB, N, family)
        rows.append(CenRow(n, len(TE), c, len(TEB), len(TE) * c <= len(TEB),
                           TEB == product_set(family, TE, TB, budget)))
    return CenReport(rows)


# ---------------------------------------------------------------------------
# metabelian torsion upper bound

@dataclass
class ChainLevel:
    n: int
    trajectory_d: int
    trajectory_e: int
    cosets: int
    product: int
    e_is_subgroup: bool

    @property
    def product_formula(self) -> bool:
        return self.product == self.cosets * self.trajectory_e

    @property
    def sandwich(self) -> bool:
        return self.trajectory_d <= self.cosets * self.trajectory_e


@dataclass
class ChainReport:
    M: int
    trajectory_size: int
    closure_size: int
    derived_part_size: int
    closure_decomposition: bool
    s_size: int
    s_is_subgroup: bool
    cosets_mod_derived: int
    cosets_mod_s: int
    levels: list[ChainLevel]
    relative_decrease: bool

    @property
    def coset_equality(self) -> bool:
        return self.s_is_subgroup and self.cosets_mod_derived == self.cosets_mod_s

    @property
    def sandwich(self) -> bool:
        return all(lv.e_is_subgroup and lv.product_formula and lv.sandwich for lv in self.levels)

    @property
    def ok(self) -> bool:
        return self.closure_decomposition and self.coset_equality and self.sandwich

    def to_dict(self) -> dict:
        d = {k: v for k, v in vars(self).items() if k != "levels"}
        d.update(coset_equality=self.coset_equality, sandwich=self.sandwich, ok=self.ok)
        d["levels"] = [dict(vars(lv), product_formula=lv.product_formula, sandwich=lv.sandwich)
                       for lv in self.levels]
        return d


def _has_derived_oracle(family: GroupFamily) -> bool:
    try:
        family.derived_membership(family.identity)
        family.derived_spec()
    except NotImplementedError:
        return False
    return True


def check_mettor_chain(family: GroupFamily, phi: Endomorphism, D: Iterable, M: int, depth: int,
                       budget: int = DEFAULT_BUDGET) -> ChainReport:
    """Exact finite-stage version of the upper-bound argument.

    With T = T_{2^M}(phi, D), E = <T> meet G' and S = T_{2^M}(phi, E):
    (i) <T> = T E; (ii) #cosets(T, G') = #cosets(T, S); (iii) for
    M <= n <= depth, |T_{2^n}(D)| <= #cosets(T_{2^n}(D), T_{2^n}(E)) * |T_{2^n}(E)|
    where the right side is exactly |T_{2^n}(D) T_{2^n}(E)|. The relative
    quotient terms are also checked not to exceed the one at level M.
    (ii) and (iii) need S and T_{2^n}(E) to be subgroups, which is where
    the metabelian hypothesis enters; failures of that are reported.
    """
    if not _has_derived_oracle(family):
        raise OracleMissing(f"{family.kind} has no derived-subgroup oracle")
    D = frozenset(D)
    m = 2**M
    dec = cfsub_decompose(phi, D, m, budget)
    T = dec.trajectory
    E = dec.derived_part.elements
    S = FiniteSubgroup(family, trajectory(phi, E, m, budget))
    s_sub = S.is_closed()
    c_derived = count_cosets(T, family.derived_spec(), family)
    c_s = count_cosets(T, subgroup_spec(family, S.elements)) if s_sub else -1

    levels = []
    td_iter = iter_trajectory(phi, D, budget)
    te_iter = iter_trajectory(phi, E, budget)
    for n in range(1, 2**depth + 1):
        TD = next(td_iter)
        TE = next(te_iter)
        k = n.bit_length() - 1
        if n != 2**k or k < M:
            continue
        sub = FiniteSubgroup(family, TE).is_closed()
        cos = count_cosets(TD, subgroup_spec(family, TE)) if sub else -1
        prod = len(product_set(family, TD, TE, budget))
        levels.append(ChainLevel(k, len(TD), len(TE), cos, prod, sub))
    # ell(T_{2^n}D, T_{2^n}E)/2^n <= ell(T, S)/2^M, in integer form
    rel = s_sub and all(lv.cosets >= 0 and lv.cosets ** m <= c_s ** (2**lv.n) for lv in levels)
    return ChainReport(M, len(T), len(dec.closure), len(E), dec.holds, len(S), s_sub,
                       c_derived, c_s, levels, rel)


# ---------------------------------------------------------------------------
# zero quotient entropy

@dataclass
class ZeroReductionReport:
    m: int
    correction_size: int
    e2_size: int
    e2_inside: bool
    one_step: bool
    containments: list[tuple[int, bool]]
    quotient_counts: list[int]
    estimate_e: EntropyEstimate | None = None
    estimate_e2: EntropyEstimate | None = None

    @property
    def ok(self) -> bool:
        return self.e2_inside and self.one_step and all(h for _, h in self.containments)

    def to_dict(self) -> dict:
        out = {"m": self.m, "correction_size": self.correction_size, "e2_size": self.e2_size,
               "e2_inside": self.e2_inside, "one_step": self.one_step,
               "containments": [{"k": k, "holds": h} for k, h in self.containments],
               "quotient_counts": self.quotient_counts, "ok": self.ok}
        if self.estimate_e is not None:
            out["estimate_e"] = self.estimate_e.to_dict()
            out["estimate_e2"] = self.estimate_e2.to_dict()
        return out


def check_zero_reduction(family: GroupFamily, phi: Endomorphism, H: NormalSubgroupSpec,
                         E: Iterable, depth: int = 5, budget: int = DEFAULT_BUDGET,
                         m_max: int = 16, estimate_depth: int = 3) -> ZeroReductionReport:
    """Containment T_{m+k}(phi, E) in T_m(phi, E) T_k(phi, E2) for k = 1..depth.

    m is the first index where the coset count of T_m(phi, E) mod H stops
    growing, i.e. the quotient trajectory has become phi_bar-invariant.
    F collects corrections t^-1 y in H with y in phi^m(E) and t in T_m in
    the same coset, and E2 = <F> is a finite subgroup of H. ``one_step``
    records phi(T_m) contained in T_m E2, the base case of the induction.
    """
    E = frozenset(E) | {family.identity}
    Ts: list[frozenset] = []
    counts: list[int] = []
    m = None
    for T in iter_trajectory(phi, E, budget):
        Ts.append(T)
        counts.append(count_cosets(T, H, family))
        if len(counts) >= 2 and counts[-1] == counts[-2]:
            m = len(counts) - 1
            break
        if len(counts) > m_max:
            break
    if m is None:
        raise NoCertificate(f"quotient trajectory still growing after {m_max} steps")
    Tm = Ts[m - 1]
    image = E
    for _ in range(m):
        image = phi.image(image)
    mul, inv = family.mul, family.inv
    # phi^m(E) lies in T_m H because T_{m+1} = T_m phi^m(E) meets no new coset
    if H.coset_key is not None:
        reps: dict = {}
        for t in sorted(Tm):
            reps.setdefault(H.coset_key(t), t)
        F = {mul(inv(reps[H.coset_key(y)]), y) for y in image}
    else:
        F = set()
        ordered = sorted(Tm)
        for y in image:
            t = next(t for t in ordered if H.membership(mul(inv(t), y)))
            F.add(mul(inv(t), y))
    E2 = subgroup_closure(family, F, budget)
    inside = all(H.membership(x) for x in E2)
    one_step = phi.image(Tm) <= product_set(family, Tm, E2, budget)
    containments = []
    big = iter_trajectory(phi, E, budget)
    small = iter_trajectory(phi, E2, budget)
    for _ in range(m):
        next(big)
    for k in range(1, depth + 1):
        lhs = next(big)
        rhs = product_set(family, Tm, next(small), budget)
        containments.append((k, lhs <= rhs))
    # quotient counts over the whole checked range
    qc = [count_cosets(T, H, family) for T in _take(iter_trajectory(phi, E, budget), m + depth)]
    est_e = dyadic_sequence(phi, E, estimate_depth, budget)
    est_e2 = dyadic_sequence(phi, E2, estimate_depth, budget)
    return ZeroReductionReport(m, len(F), len(E2), inside, one_step, containments, qc, est_e, est_e2)


def _take(it, n):
    return [x for _, x in zip(range(n), it)]
