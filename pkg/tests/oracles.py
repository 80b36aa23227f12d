"""Independent brute-force references used to freeze expected values.

Nothing here imports entropylab: group laws are re-derived from scratch
(matrices for Heisenberg, Cayley-graph balls for the lamplighter, dicts for
permutations) so that agreement is evidence rather than repetition.
"""

from __future__ import annotations

import itertools


# ---- Heisenberg group as 3x3 unitriangular matrices over F_p --------------

def _matmul(A, B, p):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3)) % p for j in range(3))
                 for i in range(3))


def heis_matrix(a, b, c):
    return ((1, a, c), (0, 1, b), (0, 0, 1))


def _entries(M):
    return M[0][1], M[1][2], M[0][2]


def heis_power_counts(p: int, width: int, n_max: int):
    """|T_n|, #cosets mod G', |T_n(X meet G')| for the right shift, X a window.

    Elements of the restricted power are dicts coordinate -> matrix; the
    shift moves coordinate i to i + 1. Cosets of G' = Z^(N) are read off
    the (a, b) entries, and G'-elements have a = b = 0.
    """
    I = heis_matrix(0, 0, 0)
    coords = range(width)
    full_window = []
    for vals in itertools.product(itertools.product(range(p), repeat=3), repeat=width):
        full_window.append({i: heis_matrix(*v) for i, v in zip(coords, vals)})

    def canon(x):
        return tuple(sorted((i, _entries(M)) for i, M in x.items() if M != I))

    def mul(x, y):
        out = dict(x)
        for i, M in y.items():
            out[i] = _matmul(out.get(i, I), M, p)
        return out

    def shift(x, k):
        return {i + k: M for i, M in x.items()}

    def run(X):
        T = {canon(x): x for x in X}
        rows = [T]
        for n in range(1, n_max):
            img = [shift(x, n) for x in X]
            T = {}
            for t in rows[-1].values():
                for y in img:
                    z = mul(t, y)
                    T[canon(z)] = z
            rows.append(T)
        return rows

    rows = run(full_window)
    center = [x for x in full_window if all(_entries(M)[:2] == (0, 0) for M in x.values())]
    crow = run(center)
    out = []
    for n, (T, C) in enumerate(zip(rows, crow), start=1):
        cosets = {tuple(sorted((i, e[:2]) for i, e in key if e[:2] != (0, 0))) for key in T}
        out.append((n, len(T), len(cosets), len(C)))
    return out


# ---- lamplighter Z_2 wr Z --------------------------------------------------

def lamplighter_ball_sizes(n_max: int):
    """|S^n| for S = {1, a, t, t^-1}, i.e. the ball of radius n in the Cayley
    graph for generators a (toggle the lamp under the cursor) and t^{+-1}.
    """
    start = (frozenset(), 0)
    seen = {start}
    frontier = [start]
    sizes = []
    for _ in range(n_max):
        nxt = []
        for lamps, pos in frontier:
            for y in ((lamps ^ {pos}, pos), (lamps, pos + 1), (lamps, pos - 1)):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


def lamplighter_quotient_counts(k_max: int):
    """Cursor positions reached by S^(2^k) with the same BFS, i.e. cosets of the lamp group."""
    out = []
    for k in range(k_max + 1):
        seen = {(frozenset(), 0)}
        frontier = list(seen)
        for _ in range(2 ** k):
            nxt = []
            for lamps, pos in frontier:
                for y in ((lamps ^ {pos}, pos), (lamps, pos + 1), (lamps, pos - 1)):
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        out.append(len({pos for _, pos in seen}))
    return out


# ---- permutations on {1..d} as dicts, composed right to left ---------------

def perm(cycles: str, d: int) -> dict:
    m = {i: i for i in range(1, d + 1)}
    for cyc in cycles.replace(")", "").split("("):
        pts = [int(t) for t in cyc.split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            m[a] = b
    return m


def compose(a: dict, b: dict) -> dict:
    """(a b)(x) = a(b(x))."""
    return {x: a[b[x]] for x in b}


def key(a: dict) -> tuple:
    return tuple(a[i] for i in sorted(a))


def closure(gens: list[dict], d: int) -> dict:
    e = perm("", d)
    out = {key(e): e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if key(y) not in out:
                    out[key(y)] = y
                    nxt.append(y)
        frontier = nxt
    return out


def left_coset_count(X: list[dict], B: list[dict]) -> int:
    return len({frozenset(key(compose(x, b)) for b in B) for x in X})


def inner_trajectory(g: dict, X: list[dict], n: int) -> list[dict]:
    """T_n(conj_g, X) by direct expansion of all words."""
    ginv = {v: k for k, v in g.items()}

    def conj_pow(x, k):
        for _ in range(k):
            x = compose(compose(g, x), ginv)
        return x

    out = {}
    for word in itertools.product(X, repeat=n):
        z = perm("", len(g))
        for k, x in enumerate(word):
            z = compose(z, conj_pow(x, k))
        out[key(z)] = z
    return list(out.values())
