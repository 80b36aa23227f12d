"""Trajectories T_n(phi, X) = X phi(X) ... phi^{n-1}(X) and coset counting.

Sets are plain frozensets of canonical elements; cardinalities are exact
integers and every identity in the test-suite compares those integers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import BudgetExceeded
from .groups import DEFAULT_BUDGET, FiniteSubgroup, GroupFamily, NormalSubgroupSpec, subgroup_closure
from .morphisms import Endomorphism

ElementSet = frozenset


class PerformanceWarning(UserWarning):
    """Coset counting fell back to quadratic pairwise comparison."""


class LogCard(NamedTuple):
    cardinality: int
    log: float


def product_set(family: GroupFamily, A: Iterable, B: Iterable, budget: int = DEFAULT_BUDGET) -> frozenset:
    mul = family.mul
    B = list(B)
    out: set = set()
    add = out.add
    for a in A:
        for b in B:
            add(mul(a, b))
        if len(out) > budget:
            raise BudgetExceeded(len(out), budget)
    return frozenset(out)


def iter_trajectory(phi: Endomorphism, X: Iterable, budget: int = DEFAULT_BUDGET,
                    backward: bool = False) -> Iterator[frozenset]:
    """Yield T_1, T_2, ... built as T_{k+1} = T_k phi^k(X).

    With ``backward`` the factors are prepended instead, giving
    phi^{n-1}(X) ... phi(X) X.
    """
    fam = phi.family
    X = frozenset(X)
    if not X:
        raise ValueError("trajectory of the empty set")
    current = X
    image = X
    yield current
    while True:
        image = phi.image(image)
        if backward:
            current = product_set(fam, image, current, budget)
        else:
            current = product_set(fam, current, image, budget)
        yield current


def trajectory(phi: Endomorphism, X: Iterable, n: int, budget: int = DEFAULT_BUDGET) -> frozenset:
    if n < 1:
        raise ValueError("n must be positive")
    for k, T in enumerate(iter_trajectory(phi, X, budget), start=1):
        if k == n:
            return T


def back_trajectory(phi: Endomorphism, X: Iterable, n: int, budget: int = DEFAULT_BUDGET) -> frozenset:
    if n < 1:
        raise ValueError("n must be positive")
    for k, T in enumerate(iter_trajectory(phi, X, budget, backward=True), start=1):
        if k == n:
            return T


def ell(S: Iterable) -> LogCard:
    n = len(S) if isinstance(S, (set, frozenset, FiniteSubgroup)) else len(set(S))
    return LogCard(n, math.log(n) if n else float("-inf"))


def count_cosets(S: Iterable, H: NormalSubgroupSpec, family: GroupFamily | None = None) -> int:
    """Number of distinct cosets xH met by S.

    Uses ``H.coset_key`` when available. Otherwise classes are merged
    pairwise through the membership oracle (x ~ y iff x y^-1 in H), which
    needs ``family`` and warns about quadratic cost.
    """
    if H.counter is not None:
        return H.counter(S)
    if H.coset_key is not None:
        key = H.coset_key
        return len({key(x) for x in S})
    if family is None:
        raise ValueError("membership-only subgroup needs the family for coset counting")
    warnings.warn(f"pairwise coset counting for {H.name}", PerformanceWarning, stacklevel=2)
    mul, inv, member = family.mul, family.inv, H.membership
    reps: list = []
    for x in S:
        if not any(member(mul(x, inv(r))) for r in reps):
            reps.append(x)
    return len(reps)


def ell_mod(S: Iterable, H: NormalSubgroupSpec, family: GroupFamily | None = None) -> LogCard:
    n = count_cosets(S, H, family)
    return LogCard(n, math.log(n) if n else float("-inf"))


@dataclass(frozen=True)
class TrajectoryRow:
    n: int
    cardinality: int
    cosets: int | None = None


@dataclass
class TrajectoryTable:
    rows: list[TrajectoryRow] = field(default_factory=list)
    budget_hit: bool = False
    # first n with T_{n+1} = T_n, when seen (then every later row repeats)
    stable_from: int | None = None

    def cardinalities(self) -> dict[int, int]:
        return {r.n: r.cardinality for r in self.rows}

    def coset_counts(self) -> dict[int, int]:
        return {r.n: r.cosets for r in self.rows if r.cosets is not None}


def trajectory_table(phi: Endomorphism, X: Iterable, n_max: int, H: NormalSubgroupSpec | None = None,
                     budget: int = DEFAULT_BUDGET) -> TrajectoryTable:
    """Cardinalities of T_1..T_{n_max}, plus coset counts mod H when given.

    Stops enumerating as soon as T_{n+1} = T_n: the trajectory is constant
    from then on, so the remaining rows are filled in without more work.
    Budget overruns end the table early with ``budget_hit`` set.
    """
    table = TrajectoryTable()
    fam = phi.family
    prev = None
    gen = iter_trajectory(phi, X, budget)
    n = 0
    while n < n_max:
        try:
            T = next(gen)
        except BudgetExceeded:
            table.budget_hit = True
            break
        n += 1
        if prev is not None and T == prev:
            table.stable_from = n - 1
            last = table.rows[-1]
            for m in range(n, n_max + 1):
                table.rows.append(TrajectoryRow(m, last.cardinality, last.cosets))
            break
        cosets = count_cosets(T, H, fam) if H is not None else None
        table.rows.append(TrajectoryRow(n, len(T), cosets))
        prev = T
    return table


@dataclass(frozen=True)
class Decomposition:
    closure: FiniteSubgroup
    derived_part: FiniteSubgroup
    trajectory: frozenset
    holds: bool


def cfsub_decompose(phi: Endomorphism, F: Iterable, n: int, budget: int = DEFAULT_BUDGET) -> Decomposition:
    """Check <T_n(phi, F)> = T_n(phi, F) E_n with E_n = <T_n(phi, F)> meet G'."""
    fam = phi.family
    T = trajectory(phi, F, n, budget)
    closure = subgroup_closure(fam, T, budget)
    E = frozenset(x for x in closure if fam.derived_membership(x))
    TE = product_set(fam, T, E, budget)
    return Decomposition(closure, FiniteSubgroup(fam, E), T, TE == closure.elements)
