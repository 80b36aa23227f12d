"""Concrete group families with canonical element encodings.

Every family stores its elements as plain hashable tuples whose equality is
group equality, so elements can be collected in ordinary Python sets.

* ``PermutationGroup``   finite permutation group on points 1..degree; an
  element is its 0-based image tuple.
* ``RestrictedPower``    finitely supported maps I -> G0 (I is N or Z); an
  element is a sorted tuple of ``(index, value)`` pairs, where ``value`` is a
  non-identity index into the base group's Cayley table.
* ``Lamplighter``        Z_2 wr Z; an element is ``(lamps, shift)`` with
  ``lamps`` a sorted tuple of lit positions.
* ``FinitarySymmetric``  permutations of the positive integers with finite
  support; an element is the sorted tuple of ``(point, image)`` pairs over
  moved points.

Permutations compose right to left: ``(a * b)(x) = a(b(x))``.
"""

from __future__ import annotations

import ast
import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import BudgetExceeded, MalformedElement, NotCentral, NotNormal

DEFAULT_BUDGET = 10**6

Element = Hashable


# ---------------------------------------------------------------------------
# permutation helpers (0-based image tuples)

def perm_compose(a: tuple, b: tuple) -> tuple:
    return tuple([a[i] for i in b])


def perm_inverse(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """Parse cycle notation such as ``"(1 2 3)(4 5)"`` into lists of points."""
    text = text.strip()
    if text in ("", "()", "1", "e", "id"):
        return []
    if _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"bad cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        pts = [int(tok) for tok in body.replace(",", " ").split()]
        if len(set(pts)) != len(pts) or any(p < 1 for p in pts):
            raise ValueError(f"bad cycle: ({body})")
        if len(pts) > 1:
            cycles.append(pts)
    seen: set[int] = set()
    for c in cycles:
        if seen & set(c):
            raise ValueError(f"cycles are not disjoint in {text!r}")
        seen |= set(c)
    return cycles


def cycles_to_map(cycles: list[list[int]]) -> dict[int, int]:
    mapping = {}
    for c in cycles:
        for i, p in enumerate(c):
            mapping[p] = c[(i + 1) % len(c)]
    return mapping


def format_cycles(mapping: dict[int, int]) -> str:
    seen: set[int] = set()
    parts = []
    for start in sorted(mapping):
        if start in seen or mapping[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        p = mapping[start]
        while p != start:
            cyc.append(p)
            seen.add(p)
            p = mapping[p]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def perm_from_cycles(text: str, degree: int) -> tuple:
    mapping = cycles_to_map(parse_cycles(text))
    if mapping and max(mapping) > degree:
        raise ValueError(f"{text!r} moves points beyond degree {degree}")
    return tuple(mapping.get(i + 1, i + 1) - 1 for i in range(degree))


# ---------------------------------------------------------------------------
# finite base groups

class FiniteGroup:
    """A finite group stored as a Cayley table; index 0 is the identity.

    The derived subgroup and the center are computed by brute force when
    the table is built, so membership questions become set lookups.
    """

    def __init__(self, name: str, labels: Sequence, mul: Callable,
                 parse: Callable[[str], object] | None = None,
                 fmt: Callable[[object], str] | None = None):
        self.name = name
        self.labels = list(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("duplicate labels")
        n = len(self.labels)
        self.table = [tuple(self.index[mul(a, b)] for b in self.labels) for a in self.labels]
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(n)):
            raise ValueError("label 0 is not the identity")
        self.inverse = [row.index(0) for row in self.table]
        self._parse = parse
        self._fmt = fmt or str
        self.is_abelian = all(self.table[i][j] == self.table[j][i]
                              for i in range(n) for j in range(i + 1, n))
        self.center = frozenset(i for i in range(n)
                                if all(self.table[i][j] == self.table[j][i] for j in range(n)))
        comms = {self.commutator(i, j) for i in range(n) for j in range(n)}
        self.derived = frozenset(self.closure(comms))

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def commutator(self, i: int, j: int) -> int:
        t, inv = self.table, self.inverse
        return t[t[t[i][j]][inv[i]]][inv[j]]

    def closure(self, gens: Iterable[int]) -> set[int]:
        gens = {g for g in gens if g != 0}
        gens |= {self.inverse[g] for g in gens}
        out = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    def power(self, i: int, k: int) -> int:
        if k < 0:
            i, k = self.inverse[i], -k
        out = 0
        for _ in range(k):
            out = self.table[out][i]
        return out

    def exponent(self) -> int:
        from math import lcm
        e = 1
        for i in range(self.order):
            k, x = 1, i
            while x != 0:
                x = self.table[x][i]
                k += 1
            e = lcm(e, k)
        return e

    def is_normal(self, subset: Iterable[int]) -> bool:
        sub = frozenset(subset)
        t, inv = self.table, self.inverse
        return all(t[t[g][h]][inv[g]] in sub for g in range(self.order) for h in sub)

    def coset_ids(self, normal: Iterable[int]) -> list[int]:
        """Map each element to the smallest index in its coset of ``normal``."""
        normal = list(normal)
        return [min(self.table[v][n] for n in normal) for v in range(self.order)]

    def parse_label(self, text: str) -> int:
        if self._parse is None:
            raise ValueError(f"{self.name} has no label parser")
        try:
            return self.index[self._parse(text)]
        except KeyError:
            raise ValueError(f"{text!r} is not an element of {self.name}") from None

    def format_label(self, i: int) -> str:
        return self._fmt(self.labels[i])

    @classmethod
    def from_permutations(cls, name: str, generators: Sequence[tuple], degree: int) -> "FiniteGroup":
        identity = tuple(range(degree))
        labels = [identity]
        seen = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in generators:
                    y = perm_compose(x, g)
                    if y not in seen:
                        seen.add(y)
                        labels.append(y)
                        nxt.append(y)
            frontier = nxt
        return cls(name, labels, perm_compose,
                   parse=lambda s: perm_from_cycles(s, degree),
                   fmt=lambda p: format_cycles({i + 1: j + 1 for i, j in enumerate(p)}))

    @classmethod
    def heisenberg(cls, p: int) -> "FiniteGroup":
        """Upper unitriangular 3x3 matrices over F_p as triples (a, b, c).

        (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b').
        """
        def mul(x, y):
            return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

        def parse(s):
            vals = tuple(int(v) % p for v in s.strip().strip("()").split(","))
            if len(vals) != 3:
                raise ValueError(f"Heisenberg label needs three entries: {s!r}")
            return vals

        labels = list(itertools.product(range(p), repeat=3))
        return cls(f"H(F_{p})", labels, mul, parse=parse,
                   fmt=lambda t: "(" + ",".join(map(str, t)) + ")")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(f"Z_{n}", range(n), lambda a, b: (a + b) % n,
                   parse=lambda s: int(s) % n)


# ---------------------------------------------------------------------------
# subgroup descriptors

@dataclass(frozen=True, eq=False)
class NormalSubgroupSpec:
    """Membership oracle for a subgroup, optionally with a coset key.

    ``coset_key(x)`` names the coset ``xH``; two elements share a key iff
    they lie in the same coset. Specs built from an explicit finite subgroup
    that is not normal still count left cosets correctly.
    """

    name: str
    membership: Callable[[Element], bool]
    coset_key: Callable[[Element], Hashable] | None = None
    is_central: bool = False
    sampler: Callable[[random.Random], Element] | None = field(default=None, repr=False)
    # optional faster replacement for counting distinct coset keys of a set
    counter: Callable[[Iterable], int] | None = field(default=None, repr=False)

    def __contains__(self, x) -> bool:
        return self.membership(x)


@dataclass(frozen=True, eq=False)
class FiniteSubgroup:
    family: "GroupFamily"
    elements: frozenset

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def is_closed(self) -> bool:
        fam = self.family
        if fam.identity not in self.elements:
            return False
        return all(fam.inv(a) in self.elements for a in self.elements) and all(
            fam.mul(a, b) in self.elements for a in self.elements for b in self.elements)

    def as_spec(self, name: str = "subgroup") -> NormalSubgroupSpec:
        return subgroup_spec(self.family, self.elements, name)


def subgroup_spec(family: "GroupFamily", elements: Iterable, name: str = "subgroup") -> NormalSubgroupSpec:
    """Spec for an explicit finite subgroup; keys are minimal left-coset members."""
    elems = frozenset(elements)
    mul = family.mul
    ordered = sorted(elems)

    def key(x):
        return min(mul(x, b) for b in ordered)

    def count(S):
        # mark whole cosets inside S: cost is (#cosets met) * |B|, not |S| * |B|
        S = S if isinstance(S, (set, frozenset)) else set(S)
        seen: set = set()
        n = 0
        for x in S:
            if x not in seen:
                n += 1
                seen.update(y for y in (mul(x, b) for b in ordered) if y in S)
        return n

    return NormalSubgroupSpec(name, elems.__contains__, key,
                              sampler=lambda rng: rng.choice(ordered), counter=count)


# ---------------------------------------------------------------------------
# families

class GroupFamily:
    kind = "abstract"
    identity: Element = None
    is_finite = False

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def is_valid(self, x) -> bool:
        raise NotImplementedError

    def validate(self, x):
        if not self.is_valid(x):
            raise MalformedElement(x, f"not an element of {self.name}")
        return x

    def derived_membership(self, x) -> bool:
        raise NotImplementedError

    def center_membership(self, x) -> bool:
        raise NotImplementedError

    def random_element(self, rng: random.Random):
        raise NotImplementedError

    def parse_element(self, text: str):
        raise NotImplementedError

    def format_element(self, x) -> str:
        return repr(x)

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name}

    # derived helpers

    def conj(self, g, x):
        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, x, y):
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def power(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        out = self.identity
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def encode(self, x) -> bytes:
        return repr(self.validate(x)).encode()

    def decode(self, data: bytes):
        try:
            x = ast.literal_eval(data.decode())
        except (ValueError, SyntaxError) as exc:
            raise MalformedElement(data, "undecodable") from exc
        return self.validate(x)

    def whole_spec(self) -> NormalSubgroupSpec:
        return NormalSubgroupSpec("whole", lambda x: True, lambda x: 0,
                                  is_central=False, sampler=self.random_element)

    def trivial_spec(self) -> NormalSubgroupSpec:
        ident = self.identity
        return NormalSubgroupSpec("trivial", lambda x: x == ident, lambda x: x,
                                  is_central=True, sampler=lambda rng: ident)

    def derived_spec(self) -> NormalSubgroupSpec:
        raise NotImplementedError

    def center_spec(self) -> NormalSubgroupSpec:
        raise NotImplementedError


class PermutationGroup(GroupFamily):
    """A finite group of permutations of {1, ..., degree}."""

    kind = "permutation"
    is_finite = True

    def __init__(self, generators: Sequence, degree: int, name: str | None = None):
        gens = [perm_from_cycles(g, degree) if isinstance(g, str) else tuple(g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"{g!r} is not a permutation of degree {degree}")
        self.degree = degree
        self.generators = gens
        self.name = name or f"PermGroup(deg={degree})"
        self.base = FiniteGroup.from_permutations(self.name, gens, degree)
        self.identity = tuple(range(degree))
        labels = self.base.labels
        self._elements = frozenset(labels)
        self._derived = frozenset(labels[i] for i in self.base.derived)
        self._center = frozenset(labels[i] for i in self.base.center)

    @property
    def order(self) -> int:
        return self.base.order

    @property
    def is_abelian(self) -> bool:
        return self.base.is_abelian

    def elements(self) -> list:
        return list(self.base.labels)

    def mul(self, a, b):
        return tuple([a[i] for i in b])

    def inv(self, x):
        return perm_inverse(x)

    def is_valid(self, x) -> bool:
        return isinstance(x, tuple) and x in self._elements

    def derived_membership(self, x) -> bool:
        return x in self._derived

    def center_membership(self, x) -> bool:
        return x in self._center

    def random_element(self, rng):
        return rng.choice(self.base.labels)

    def parse_element(self, text: str):
        x = perm_from_cycles(text, self.degree)
        return self.validate(x)

    def format_element(self, x) -> str:
        return format_cycles({i + 1: j + 1 for i, j in enumerate(x)})

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name, "degree": self.degree,
                "generators": [self.format_element(g) for g in self.generators],
                "order": self.order}

    def subgroup(self, generators: Iterable) -> FiniteSubgroup:
        gens = [self.parse_element(g) if isinstance(g, str) else g for g in generators]
        return subgroup_closure(self, gens or [self.identity])

    def normal_subgroup_spec(self, elements: Iterable, name: str,
                             is_central: bool | None = None) -> NormalSubgroupSpec:
        """Spec for a normal subgroup, verified exhaustively since G is finite."""
        sub = frozenset(elements)
        for g in self.generators:
            for h in sub:
                if self.conj(g, h) not in sub:
                    raise NotNormal((g, h))
        if is_central is None:
            is_central = sub <= self._center
        ordered = sorted(sub)
        keys = {}
        for x in self.base.labels:
            keys[x] = min(self.mul(x, n) for n in ordered)
        return NormalSubgroupSpec(name, sub.__contains__, keys.__getitem__,
                                  is_central=is_central,
                                  sampler=lambda rng: rng.choice(ordered))

    def derived_spec(self) -> NormalSubgroupSpec:
        return self.normal_subgroup_spec(self._derived, "derived")

    def center_spec(self) -> NormalSubgroupSpec:
        return self.normal_subgroup_spec(self._center, "center", is_central=True)


def symmetric_group(n: int) -> PermutationGroup:
    if n < 2:
        return PermutationGroup([], max(n, 1), name=f"S{n}")
    gens = ["(1 2)"] + (["(" + " ".join(map(str, range(1, n + 1))) + ")"] if n > 2 else [])
    return PermutationGroup(gens, n, name=f"S{n}")


def alternating_group(n: int) -> PermutationGroup:
    gens = [f"(1 2 {k})" for k in range(3, n + 1)]
    return PermutationGroup(gens, n, name=f"A{n}")


def cyclic_group(n: int) -> PermutationGroup:
    return PermutationGroup(["(" + " ".join(map(str, range(1, n + 1))) + ")"], n, name=f"Z{n}")


def dihedral_group(n: int) -> PermutationGroup:
    """Symmetries of the n-gon, order 2n (so ``dihedral_group(4)`` is D8)."""
    rot = "(" + " ".join(map(str, range(1, n + 1))) + ")"
    refl = "".join(f"({i} {n + 2 - i})" for i in range(2, n + 1) if i < n + 2 - i)
    return PermutationGroup([rot, refl or "()"], n, name=f"D{2 * n}")


def quaternion_group() -> PermutationGroup:
    return PermutationGroup(["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"], 8, name="Q8")


def direct_product(g1: PermutationGroup, g2: PermutationGroup) -> PermutationGroup:
    """G1 x G2 acting on the disjoint union of their point sets."""
    d1, d2 = g1.degree, g2.degree
    gens = [tuple(g) + tuple(range(d1, d1 + d2)) for g in g1.generators]
    gens += [tuple(range(d1)) + tuple(d1 + i for i in g) for g in g2.generators]
    return PermutationGroup(gens, d1 + d2, name=f"{g1.name}x{g2.name}")


def embed_left(g1: PermutationGroup, product: PermutationGroup, x):
    return tuple(x) + tuple(range(g1.degree, product.degree))


def embed_right(g1: PermutationGroup, product: PermutationGroup, y):
    return tuple(range(g1.degree)) + tuple(g1.degree + i for i in y)


class RestrictedPower(GroupFamily):
    """Restricted direct power G0^(I) for I = N or I = Z."""

    kind = "restricted_power"

    def __init__(self, base: FiniteGroup, index: str = "N", name: str | None = None):
        if index not in ("N", "Z"):
            raise ValueError("index set must be 'N' or 'Z'")
        self.base = base
        self.index_set = index
        self.name = name or f"{base.name}^({index})"
        self.identity = ()
        self._pairs: dict = {}

    def _pair(self, i: int, v: int) -> tuple:
        key = (i, v)
        p = self._pairs.get(key)
        if p is None:
            self._pairs[key] = p = key
        return p

    def mul(self, a, b):
        if not a:
            return b
        if not b:
            return a
        table = self.base.table
        out = []
        i = j = 0
        la, lb = len(a), len(b)
        while i < la and j < lb:
            ia = a[i][0]
            ib = b[j][0]
            if ia < ib:
                out.append(a[i])
                i += 1
            elif ib < ia:
                out.append(b[j])
                j += 1
            else:
                v = table[a[i][1]][b[j][1]]
                if v:
                    out.append(self._pair(ia, v))
                i += 1
                j += 1
        if i < la:
            out.extend(a[i:])
        elif j < lb:
            out.extend(b[j:])
        return tuple(out)

    def inv(self, x):
        inv = self.base.inverse
        return tuple(self._pair(i, inv[v]) for i, v in x)

    def is_valid(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        prev = None
        n = self.base.order
        for p in x:
            if not (isinstance(p, tuple) and len(p) == 2):
                return False
            i, v = p
            if not (isinstance(i, int) and isinstance(v, int)) or not 0 < v < n:
                return False
            if self.index_set == "N" and i < 0:
                return False
            if prev is not None and i <= prev:
                return False
            prev = i
        return True

    def derived_membership(self, x) -> bool:
        d = self.base.derived
        return all(v in d for _, v in x)

    def center_membership(self, x) -> bool:
        z = self.base.center
        return all(v in z for _, v in x)

    def shift(self, x, k: int):
        if self.index_set == "N" and k < 0 and x and x[0][0] + k < 0:
            raise MalformedElement(x, "left shift leaves the index set N")
        return tuple(self._pair(i + k, v) for i, v in x)

    def map_values(self, x, table: Sequence[int]):
        """Apply a base-group map coordinatewise (``table[v]`` is the image of v)."""
        return tuple(self._pair(i, table[v]) for i, v in x if table[v])

    def element(self, coords: dict) -> tuple:
        """Build an element from ``{index: label}`` using base-group labels."""
        pairs = []
        for i in sorted(coords):
            v = self.base.index[coords[i]]
            if v:
                pairs.append(self._pair(int(i), v))
        return self.validate(tuple(pairs))

    def indices(self, x) -> list[int]:
        return [i for i, _ in x]

    def _low(self) -> int:
        return 0 if self.index_set == "N" else -3

    def random_element(self, rng, width: int = 6):
        lo = self._low()
        n = self.base.order
        out = []
        for i in range(lo, lo + width):
            if rng.random() < 0.5:
                out.append(self._pair(i, rng.randrange(1, n)))
        return tuple(out)

    def coordinate_copy(self, i: int, values: Iterable[int] | None = None) -> frozenset:
        """Elements supported at coordinate ``i`` with values in ``values``."""
        vals = range(self.base.order) if values is None else values
        return frozenset(((self._pair(i, v),) if v else ()) for v in vals)

    def window(self, width: int, start: int = 0, values: Iterable[int] | None = None) -> FiniteSubgroup:
        """All elements supported on ``[start, start + width)``.

        With ``values`` a base subgroup, the coordinates range over it instead
        of the whole base group.
        """
        vals = list(range(self.base.order) if values is None else values)
        out = set()
        for combo in itertools.product(vals, repeat=width):
            out.add(tuple(self._pair(start + k, v) for k, v in enumerate(combo) if v))
        return FiniteSubgroup(self, frozenset(out))

    def coordinatewise_spec(self, subset: Iterable[int], name: str,
                            is_central: bool | None = None) -> NormalSubgroupSpec:
        """Spec for N0^(I), where N0 is a normal subgroup of the base."""
        sub = frozenset(subset)
        if 0 not in sub or not self.base.is_normal(sub) or self.base.closure(sub) != set(sub):
            raise NotNormal(sorted(sub))
        if is_central is None:
            is_central = sub <= self.base.center
        cid = self.base.coset_ids(sub)
        pair = self._pair
        choices = sorted(sub - {0})
        lo = self._low()

        def member(x):
            return all(v in sub for _, v in x)

        def key(x):
            return tuple([pair(i, cid[v]) for i, v in x if cid[v]])

        def sample(rng):
            if not choices:
                return ()
            return tuple(pair(i, rng.choice(choices)) for i in range(lo, lo + 6) if rng.random() < 0.5)

        return NormalSubgroupSpec(name, member, key, is_central=is_central, sampler=sample)

    def derived_spec(self) -> NormalSubgroupSpec:
        return self.coordinatewise_spec(self.base.derived, "derived")

    def center_spec(self) -> NormalSubgroupSpec:
        return self.coordinatewise_spec(self.base.center, "center", is_central=True)

    def parse_element(self, text: str):
        text = text.strip()
        if text in ("", "1", "e", "id"):
            return ()
        coords = {}
        for term in text.split("+"):
            idx, _, lab = term.partition(":")
            if not lab:
                raise MalformedElement(text, "expected index:label terms")
            try:
                i = int(idx)
                v = self.base.parse_label(lab)
            except ValueError as exc:
                raise MalformedElement(text, str(exc)) from None
            if i in coords:
                raise MalformedElement(text, f"coordinate {i} repeated")
            coords[i] = v
        pairs = tuple(self._pair(i, coords[i]) for i in sorted(coords) if coords[i])
        return self.validate(pairs)

    def format_element(self, x) -> str:
        if not x:
            return "1"
        return "+".join(f"{i}:{self.base.format_label(v)}" for i, v in x)

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name, "base": self.base.name,
                "base_order": self.base.order, "index": self.index_set}


def _symdiff_sorted(f: tuple, g: Iterable[int]) -> tuple:
    s = set(f)
    s.symmetric_difference_update(g)
    return tuple(sorted(s))


class Lamplighter(GroupFamily):
    """Z_2 wr Z with law (f, k)(g, m) = (f + shift_k g, k + m)."""

    kind = "lamplighter"
    name = "Z2 wr Z"

    def __init__(self):
        self.identity = ((), 0)

    def mul(self, a, b):
        f, k = a
        g, m = b
        if not g:
            return (f, k + m)
        if k:
            g = [x + k for x in g]
        return (_symdiff_sorted(f, g), k + m)

    def inv(self, x):
        f, k = x
        return (tuple(i - k for i in f), -k)

    def is_valid(self, x) -> bool:
        if not (isinstance(x, tuple) and len(x) == 2):
            return False
        f, k = x
        if not isinstance(f, tuple) or not isinstance(k, int) or isinstance(k, bool):
            return False
        return all(isinstance(i, int) for i in f) and all(f[i] < f[i + 1] for i in range(len(f) - 1))

    def derived_membership(self, x) -> bool:
        return x[1] == 0 and len(x[0]) % 2 == 0

    def center_membership(self, x) -> bool:
        return x == self.identity

    def lamp(self, i: int = 0):
        return ((i,), 0)

    def step(self, k: int = 1):
        return ((), k)

    def generating_set(self) -> frozenset:
        """{1, lamp at 0, t, t^-1}."""
        return frozenset([self.identity, self.lamp(0), self.step(1), self.step(-1)])

    def shift_lamps(self, x, k: int):
        f, m = x
        return (tuple(i + k for i in f), m)

    def window(self, width: int, start: int = 0) -> FiniteSubgroup:
        pts = range(start, start + width)
        out = set()
        for r in range(width + 1):
            for c in itertools.combinations(pts, r):
                out.add((c, 0))
        return FiniteSubgroup(self, frozenset(out))

    def random_element(self, rng, width: int = 9):
        lamps = tuple(i for i in range(-(width // 2), width - width // 2) if rng.random() < 0.5)
        return (lamps, rng.randint(-3, 3))

    def base_spec(self) -> NormalSubgroupSpec:
        def sample(rng):
            return (self.random_element(rng)[0], 0)
        return NormalSubgroupSpec("base", lambda x: x[1] == 0, lambda x: x[1], sampler=sample)

    def derived_spec(self) -> NormalSubgroupSpec:
        def sample(rng):
            lamps = self.random_element(rng)[0]
            if len(lamps) % 2:
                lamps = lamps[1:]
            return (lamps, 0)
        return NormalSubgroupSpec("derived", self.derived_membership,
                                  lambda x: (len(x[0]) % 2, x[1]), sampler=sample)

    def center_spec(self) -> NormalSubgroupSpec:
        return NormalSubgroupSpec("center", self.center_membership, lambda x: x,
                                  is_central=True, sampler=lambda rng: self.identity)

    def parse_element(self, text: str):
        text = text.strip()
        if text in ("", "1", "e", "id"):
            return self.identity
        lamps: tuple = ()
        shift = 0
        for tok in text.split():
            key, _, val = tok.partition("=")
            try:
                if key == "lamps":
                    lamps = tuple(sorted({int(v) for v in val.split(",") if v}))
                elif key == "shift":
                    shift = int(val)
                else:
                    raise ValueError(key)
            except ValueError:
                raise MalformedElement(text, "expected lamps=i,j shift=k") from None
        return (lamps, shift)

    def format_element(self, x) -> str:
        return f"lamps={','.join(map(str, x[0]))} shift={x[1]}"


class FinitarySymmetric(GroupFamily):
    """Permutations of {1, 2, ...} moving finitely many points."""

    kind = "finitary_symmetric"
    name = "S_fin(N+)"

    def __init__(self):
        self.identity = ()

    def mul(self, a, b):
        if not a:
            return b
        if not b:
            return a
        da = dict(a)
        db = dict(b)
        out = []
        for x in sorted(da.keys() | db.keys()):
            y = db.get(x, x)
            z = da.get(y, y)
            if z != x:
                out.append((x, z))
        return tuple(out)

    def inv(self, x):
        return tuple(sorted((y, x_) for x_, y in x))

    def is_valid(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        try:
            pts = [p for p, _ in x]
            imgs = [q for _, q in x]
        except (TypeError, ValueError):
            return False
        if not all(isinstance(p, int) and p >= 1 for p in pts + imgs):
            return False
        if any(p == q for p, q in x) or pts != sorted(set(pts)):
            return False
        return sorted(imgs) == pts

    def parity(self, x) -> int:
        m = dict(x)
        seen: set[int] = set()
        cycles = 0
        for p in m:
            if p in seen:
                continue
            cycles += 1
            q = p
            while q not in seen:
                seen.add(q)
                q = m[q]
        return (len(m) - cycles) % 2

    def derived_membership(self, x) -> bool:
        return self.parity(x) == 0

    def center_membership(self, x) -> bool:
        return not x

    def shift(self, x, k: int):
        return tuple((p + k, q + k) for p, q in x)

    def from_map(self, mapping: dict) -> tuple:
        return tuple(sorted((p, q) for p, q in mapping.items() if p != q))

    def window(self, width: int) -> FiniteSubgroup:
        """Sym({1, ..., width})."""
        pts = list(range(1, width + 1))
        out = {self.from_map(dict(zip(pts, img))) for img in itertools.permutations(pts)}
        return FiniteSubgroup(self, frozenset(out))

    def random_element(self, rng, width: int = 8):
        pts = list(range(1, width + 1))
        img = pts[:]
        rng.shuffle(img)
        return self.from_map(dict(zip(pts, img)))

    def alt_spec(self) -> NormalSubgroupSpec:
        def sample(rng):
            x = self.random_element(rng)
            return x if self.parity(x) == 0 else self.mul(x, ((1, 2), (2, 1)))
        return NormalSubgroupSpec("alt", self.derived_membership, self.parity, sampler=sample)

    def derived_spec(self) -> NormalSubgroupSpec:
        return self.alt_spec()

    def center_spec(self) -> NormalSubgroupSpec:
        return self.trivial_spec()

    def parse_element(self, text: str):
        try:
            return self.validate(self.from_map(cycles_to_map(parse_cycles(text))))
        except ValueError as exc:
            if isinstance(exc, MalformedElement):
                raise
            raise MalformedElement(text, str(exc)) from None

    def format_element(self, x) -> str:
        return format_cycles(dict(x))


# ---------------------------------------------------------------------------
# operations

def mul(family: GroupFamily, a, b):
    """Checked product: both arguments are validated first."""
    return family.mul(family.validate(a), family.validate(b))


def derived_membership(family: GroupFamily, x) -> bool:
    return family.derived_membership(family.validate(x))


def center_membership(family: GroupFamily, x) -> bool:
    return family.center_membership(family.validate(x))


def subgroup_closure(family: GroupFamily, X: Iterable, budget: int = DEFAULT_BUDGET) -> FiniteSubgroup:
    """Subgroup generated by ``X``, grown breadth first from the identity.

    Raises ``BudgetExceeded`` when more than ``budget`` elements appear,
    which is what happens for infinite subgroups such as <t> in the
    lamplighter group.
    """
    ident = family.identity
    gens = {x for x in X if x != ident}
    gens |= {family.inv(x) for x in gens}
    gens = sorted(gens)
    out = {ident}
    frontier = [ident]
    mul_ = family.mul
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul_(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
                    if len(out) > budget:
                        raise BudgetExceeded(len(out), budget)
        frontier = nxt
    return FiniteSubgroup(family, frozenset(out))


def _sample_member(family: GroupFamily, spec: NormalSubgroupSpec, rng: random.Random):
    if spec.sampler is not None:
        return spec.sampler(rng)
    for _ in range(64):
        x = family.random_element(rng)
        if spec.membership(x):
            return x
    return family.identity


def check_normal_subgroup(family: GroupFamily, spec: NormalSubgroupSpec,
                          samples: int = 256, seed: int = 0) -> bool:
    """Sampled check of normality, coset-key consistency and centrality.

    Returns True or raises ``NotNormal`` / ``NotCentral`` with a witness.
    """
    rng = random.Random(seed)
    mul_, inv = family.mul, family.inv
    if not spec.membership(family.identity):
        raise NotNormal(family.identity)
    for _ in range(samples):
        g = family.random_element(rng)
        h = _sample_member(family, spec, rng)
        if not spec.membership(h):
            raise NotNormal(h)
        if not spec.membership(mul_(mul_(g, h), inv(g))):
            raise NotNormal((g, h))
        if spec.is_central and mul_(g, h) != mul_(h, g):
            raise NotCentral((g, h))
        if spec.coset_key is not None:
            y = family.random_element(rng)
            same = spec.coset_key(g) == spec.coset_key(y)
            if same != spec.membership(mul_(g, inv(y))):
                raise NotNormal((g, y))
            if spec.coset_key(mul_(h, g)) != spec.coset_key(g):
                raise NotNormal((h, g))
    return True
