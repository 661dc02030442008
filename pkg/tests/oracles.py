"""
Independent reference computations used by the tests.

``kh_oracle`` rebuilds the Khovanov complex of a braid's trace closure from scratch: circles are
found by walking a grid graph of (level, position) points, generators are (state, labels keyed by
the circle's point set), and homology comes from dense integer Smith normal forms in sympy. It
shares only the textbook conventions with the package, not its code.
"""

from __future__ import annotations

import itertools

import sympy
from sympy.matrices.normalforms import invariant_factors


def _grid_circles(n: int, word: list[int], state: tuple[int, ...]) -> list[frozenset]:
    m = len(word)
    adj: dict[tuple, list[tuple]] = {(lv, p): [] for lv in range(m + 1) for p in range(n)}

    def link(u, v):
        adj[u].append(v)
        adj[v].append(u)

    for k, letter in enumerate(word):
        i = abs(letter)
        vertical = (letter > 0) == (state[k] == 0)
        for p in range(n):
            if p in (i - 1, i) and not vertical:
                continue
            link((k, p), (k + 1, p))
        if not vertical:
            link((k, i - 1), (k, i))
            link((k + 1, i - 1), (k + 1, i))
    for p in range(n):
        link((m, p), (0, p))
    seen, circles = set(), []
    for start in adj:
        if start in seen:
            continue
        comp, stack = set(), [start]
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u])
        seen |= comp
        circles.append(frozenset(comp))
    return circles


def kh_oracle(n: int, word: list[int]) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
    """Integer Khovanov homology of the trace closure: (i, j) -> (rank, torsion factors)."""
    m = len(word)
    n_minus = sum(1 for x in word if x < 0)
    n_plus = m - n_minus
    gens = []  # (state, labels as sorted tuple of (circle, +-1))
    for state in itertools.product((0, 1), repeat=m):
        circles = _grid_circles(n, word, state)
        for labels in itertools.product((1, -1), repeat=len(circles)):
            gens.append((state, tuple(sorted(zip(circles, labels), key=lambda t: sorted(t[0])))))

    def grading(g):
        state, labels = g
        r = sum(state)
        p = sum(lab for _, lab in labels)
        return r - n_minus, p + r + n_plus - 2 * n_minus

    def differential(g):
        state, labels = g
        lab = dict(labels)
        out = []
        for k in range(m):
            if state[k]:
                continue
            t = state[:k] + (1,) + state[k + 1:]
            sign = (-1) ** sum(state[:k])
            tc = _grid_circles(n, word, t)
            gone = [c for c in lab if c not in tc]
            new = [c for c in tc if c not in lab]
            kept = {c: v for c, v in lab.items() if c in tc}
            if len(gone) == 2:  # merge
                a, b = (lab[c] for c in gone)
                if a == -1 and b == -1:
                    continue
                res = {**kept, new[0]: min(a, b)}
                out.append(((t, tuple(sorted(res.items(), key=lambda x: sorted(x[0])))), sign))
            else:  # split
                c1, c2 = new
                if lab[gone[0]] == 1:
                    choices = [(1, -1), (-1, 1)]
                else:
                    choices = [(-1, -1)]
                for x, y in choices:
                    res = {**kept, c1: x, c2: y}
                    out.append(((t, tuple(sorted(res.items(), key=lambda z: sorted(z[0])))), sign))
        return out

    by_deg: dict[tuple[int, int], list] = {}
    for g in gens:
        by_deg.setdefault(grading(g), []).append(g)
    index = {deg: {g: k for k, g in enumerate(gs)} for deg, gs in by_deg.items()}

    def matrix(i, j):
        src, tgt = by_deg.get((i, j), []), by_deg.get((i + 1, j), [])
        mat = sympy.zeros(len(tgt), len(src))
        for col, g in enumerate(src):
            for h, v in differential(g):
                mat[index[(i + 1, j)][h], col] += v
        return mat

    result = {}
    for (i, j), gs in by_deg.items():
        out_m = matrix(i, j)
        in_m = matrix(i - 1, j)
        rank_out = out_m.rank() if out_m.shape[0] and out_m.shape[1] else 0
        rank_in = 0
        torsion: tuple[int, ...] = ()
        if in_m.shape[0] and in_m.shape[1]:
            facs = [abs(int(f)) for f in invariant_factors(in_m, domain=sympy.ZZ) if f != 0]
            rank_in = len(facs)
            torsion = tuple(f for f in facs if f > 1)
        rank = len(gs) - rank_out - rank_in
        if rank or torsion:
            result[(i, j)] = (rank, torsion)
    return result


def series_coeffs(expr, order: int) -> dict[int, int]:
    """q-expansion coefficients of a sympy expression in q through q^order."""
    q = sympy.Symbol("q")
    s = sympy.series(expr, q, 0, order + 1).removeO()
    poly = sympy.Poly(sympy.expand(s), q)
    return {int(m[0]): int(c) for m, c in zip(poly.monoms(), poly.coeffs())}
