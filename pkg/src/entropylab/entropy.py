"""Dyadic entropy estimates and zero-entropy certificates.

For 1 in X the sequence d_k = log|T_{2^k}(phi, X)| / 2^k is non-increasing
and its infimum is H(phi, X), so the last computed term is an upper bound.
Exact values are only claimed with a certificate:

* ``ZeroCertificate(m)``: T_{m+1} = T_m, so the trajectory is constant and
  H(phi, X) = 0.
* ``ExactLinear(base, offset)``: |T_n| = offset * base^n at every computed n
  (dyadic levels plus at least one non-dyadic n), giving H(phi, X) = log base.

The same machinery runs on coset counts mod a phi-invariant normal subgroup,
which measures the induced map on the quotient without building it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import MonotonicityViolation
from .groups import DEFAULT_BUDGET, GroupFamily, NormalSubgroupSpec, subgroup_spec
from .morphisms import Endomorphism
from .trajectory import count_cosets, iter_trajectory, trajectory_table

DEFAULT_DEPTH = 4

EVIDENCE_NOTE = ("supremum over a finite list of sets: evidence about h(phi), "
                 "a lower bound where exact, never h(phi) itself")


@dataclass(frozen=True)
class ZeroCertificate:
    m: int

    @property
    def base(self) -> int:
        return 1


@dataclass(frozen=True)
class ExactLinear:
    base: int
    offset: int = 1

    @property
    def slope(self) -> float:
        return math.log(self.base)


@dataclass
class EntropyEstimate:
    # (k, cardinality of T_{2^k}) or (k, coset count of T_{2^k}) in quotient mode
    levels: list[tuple[int, int]]
    exact: ZeroCertificate | ExactLinear | None = None
    budget_hit: bool = False
    one_inserted: bool = False
    mode: str = "trajectory"
    counts: dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def dyadic(self) -> list[float]:
        return [math.log(c) / 2**k for k, c in self.levels]

    @property
    def depth_reached(self) -> int:
        return self.levels[-1][0] if self.levels else -1

    @property
    def upper_bound(self) -> float:
        if isinstance(self.exact, ZeroCertificate):
            return 0.0
        if not self.levels:
            return math.inf
        return self.dyadic[-1]

    @property
    def exact_base(self) -> int | None:
        return None if self.exact is None else self.exact.base

    @property
    def exact_value(self) -> float | None:
        return None if self.exact is None else math.log(self.exact.base)

    @property
    def value(self) -> float:
        """Exact value when certified, otherwise the dyadic upper bound."""
        v = self.exact_value
        return self.upper_bound if v is None else v

    def exact_flag(self) -> str:
        if isinstance(self.exact, ZeroCertificate):
            return "zero_certificate"
        if isinstance(self.exact, ExactLinear):
            return "exact_linear"
        return "none"

    def to_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "levels": [{"k": k, "two_pow_k": 2**k, "count": c, "d_k": _fmt(math.log(c) / 2**k)}
                       for k, c in self.levels],
            "upper_bound": _fmt(self.upper_bound),
            "exact": self.exact_flag(),
            "depth_reached": self.depth_reached,
            "budget_hit": self.budget_hit,
            "one_inserted": self.one_inserted,
        }
        if isinstance(self.exact, ZeroCertificate):
            out["certificate_m"] = self.exact.m
        elif isinstance(self.exact, ExactLinear):
            out["growth_base"] = self.exact.base
            out["growth_offset"] = self.exact.offset
        return out


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _with_identity(family: GroupFamily, X: Iterable) -> tuple[frozenset, bool]:
    X = frozenset(X)
    if family.identity in X:
        return X, False
    return X | {family.identity}, True


def _detect_linear(counts: dict[int, int]) -> ExactLinear | None:
    if 1 not in counts or 2 not in counts:
        return None
    dyadic = {n for n in counts if n & (n - 1) == 0}
    if len(counts) == len(dyadic):
        return None  # nothing off the dyadic grid to confirm with
    c1, c2 = counts[1], counts[2]
    if c2 % c1:
        return None
    base = c2 // c1
    if base < 2 or c1 % base:
        return None
    offset = c1 // base
    if all(c == offset * base**n for n, c in counts.items()):
        return ExactLinear(base, offset)
    return None


def estimate_from_counts(counts: dict[int, int], depth: int, *, budget_hit: bool = False,
                         one_inserted: bool = False, mode: str = "trajectory") -> EntropyEstimate:
    """Build an estimate from counts c_n for n = 1, 2, ... (1 in X assumed)."""
    levels = []
    for k in range(depth + 1):
        n = 2**k
        if n not in counts:
            break
        levels.append((k, counts[n]))
    for (k, a), (_, b) in zip(levels, levels[1:]):
        if b > a * a:
            raise MonotonicityViolation(f"{mode}: count {b} at level {k + 1} exceeds {a}^2")
    exact: ZeroCertificate | ExactLinear | None = None
    ns = sorted(counts)
    for n in ns:
        if n + 1 in counts and counts[n + 1] == counts[n]:
            exact = ZeroCertificate(n)
            break
    if exact is None:
        exact = _detect_linear(counts)
    missing = len(levels) < depth + 1
    return EntropyEstimate(levels, exact, budget_hit and missing, one_inserted, mode, dict(counts))


def _n_max(depth: int) -> int:
    return max(2**depth, 3) if depth >= 1 else 1


def dyadic_sequence(phi: Endomorphism, X: Iterable, depth: int = DEFAULT_DEPTH,
                    budget: int = DEFAULT_BUDGET) -> EntropyEstimate:
    X, inserted = _with_identity(phi.family, X)
    table = trajectory_table(phi, X, _n_max(depth), budget=budget)
    return estimate_from_counts(table.cardinalities(), depth, budget_hit=table.budget_hit,
                                one_inserted=inserted)


def dyadic_sequence_mod(phi: Endomorphism, X: Iterable, H: NormalSubgroupSpec,
                        depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_BUDGET) -> EntropyEstimate:
    """Quotient estimate: d_k = log #cosets(T_{2^k}, H) / 2^k."""
    X, inserted = _with_identity(phi.family, X)
    table = trajectory_table(phi, X, _n_max(depth), H, budget)
    return estimate_from_counts(table.coset_counts(), depth, budget_hit=table.budget_hit,
                                one_inserted=inserted, mode=f"quotient:{H.name}")


def paired_sequences(phi: Endomorphism, X: Iterable, H: NormalSubgroupSpec,
                     depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_BUDGET
                     ) -> tuple[EntropyEstimate, EntropyEstimate]:
    """Both estimates from a single pass over the trajectory."""
    X, inserted = _with_identity(phi.family, X)
    table = trajectory_table(phi, X, _n_max(depth), H, budget)
    full = estimate_from_counts(table.cardinalities(), depth, budget_hit=table.budget_hit,
                                one_inserted=inserted)
    quo = estimate_from_counts(table.coset_counts(), depth, budget_hit=table.budget_hit,
                               one_inserted=inserted, mode=f"quotient:{H.name}")
    return full, quo


def zero_entropy_certificate(phi: Endomorphism, X: Iterable, m_max: int = 32,
                             budget: int = DEFAULT_BUDGET) -> int | None:
    """Smallest m <= m_max with T_{m+1}(phi, X) = T_m(phi, X), else None.

    Equality forces T_n = T_m for all n >= m, hence H(phi, X) = 0. When
    1 is in X this is the same as phi(T_m) being contained in T_m. A None
    result proves nothing.
    """
    prev = None
    for m, T in enumerate(iter_trajectory(phi, X, budget), start=0):
        if prev is not None and T == prev:
            return m
        if m >= m_max:
            return None
        prev = T
    return None


def relative_dyadic_counts(phi: Endomorphism, X: Iterable, F: Iterable, depth: int,
                           budget: int = DEFAULT_BUDGET) -> list[tuple[int, int]]:
    """(k, #cosets of T_{2^k}(phi, F) met by T_{2^k}(phi, X)) for k = 0..depth.

    The trajectories of F must be subgroups for the counts to mean cosets.
    """
    fam = phi.family
    X, _ = _with_identity(fam, X)
    out = []
    tx = iter_trajectory(phi, X, budget)
    tf = iter_trajectory(phi, F, budget)
    wanted = {2**k: k for k in range(depth + 1)}
    for n in range(1, 2**depth + 1):
        TX = next(tx)
        TF = next(tf)
        if n in wanted:
            out.append((wanted[n], count_cosets(TX, subgroup_spec(fam, TF))))
    return out


@dataclass
class HEvidence:
    estimates: list[EntropyEstimate]
    mode: str = "trajectory"
    note: str = EVIDENCE_NOTE

    @property
    def all_exact(self) -> bool:
        return bool(self.estimates) and all(e.exact is not None for e in self.estimates)

    @property
    def budget_hit(self) -> bool:
        return any(e.budget_hit for e in self.estimates)

    @property
    def exact_base(self) -> int | None:
        """Largest certified growth base; log of it is a lower bound for h."""
        bases = [e.exact_base for e in self.estimates if e.exact is not None]
        return max(bases) if bases else None

    @property
    def lower_bound(self) -> float | None:
        b = self.exact_base
        return None if b is None else math.log(b)

    @property
    def running_max(self) -> list[float | None]:
        out, best = [], None
        for e in self.estimates:
            v = e.exact_value
            if v is not None and (best is None or v > best):
                best = v
            out.append(best)
        return out

    @property
    def value(self) -> float:
        """Largest per-set value, exact where certified, upper bound otherwise."""
        return max(e.value for e in self.estimates)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "all_exact": self.all_exact,
            "exact_base": self.exact_base,
            "lower_bound": None if self.lower_bound is None else _fmt(self.lower_bound),
            "value": _fmt(self.value),
            "running_max": [None if v is None else _fmt(v) for v in self.running_max],
            "note": self.note,
            "estimates": [e.to_dict() for e in self.estimates],
        }


def h_evidence(phi: Endomorphism, exhaustion: Sequence[Iterable], depth: int = DEFAULT_DEPTH,
               budget: int = DEFAULT_BUDGET, H: NormalSubgroupSpec | None = None) -> HEvidence:
    """Per-set estimates over an exhaustion (quotient estimates when H is given)."""
    if not exhaustion:
        raise ValueError("empty exhaustion")
    ests = []
    for X in exhaustion:
        if H is None:
            ests.append(dyadic_sequence(phi, X, depth, budget))
        else:
            ests.append(dyadic_sequence_mod(phi, X, H, depth, budget))
    return HEvidence(ests, "trajectory" if H is None else f"quotient:{H.name}")
