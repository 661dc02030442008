from __future__ import annotations

import sympy

from infbraid.braid import InfiniteBraidSpec
from infbraid.projector import (bracket_stabilization, embed, jones_wenzl, jw_series,
                                verify_axioms)
from infbraid.ring import LaurentPoly, RationalFunction
from infbraid.tl import TLElement, coeff_of, generator, identity, tl_basis, tl_mul
from oracles import series_coeffs


def test_p2_closed_form():
    p = jones_wenzl(2).element
    assert coeff_of(p, generator(2, 1)) == RationalFunction(LaurentPoly.q(1, -1),
                                                           LaurentPoly({0: 1, 2: 1}))
    assert coeff_of(p, identity(2)) == RationalFunction.one()


def test_axioms_small():
    for n in range(1, 5):
        assert verify_axioms(jones_wenzl(n))["passed"]


def test_p3_against_linear_solve():
    # solve e_i P = 0 with identity coefficient 1 directly, over sympy rationals in q
    q = sympy.Symbol("q")
    n = 3
    basis = tl_basis(n)
    unknown = {m: (sympy.Integer(1) if m == identity(n) else sympy.Symbol(f"c{k}"))
               for k, m in enumerate(basis)}
    eqs = []
    for i in range(1, n):
        acc = {}
        for m, c in unknown.items():
            prod = tl_mul(TLElement.e(n, i), TLElement.basis_element(m))
            for m2, coeff in prod.terms.items():
                poly = sum(v * q**e for e, v in coeff.terms.items())
                acc[m2] = acc.get(m2, 0) + c * poly
        eqs += list(acc.values())
    syms = [c for c in unknown.values() if isinstance(c, sympy.Symbol)]
    sol = sympy.solve(eqs, syms, dict=True)[0]
    p = jones_wenzl(n).element
    for m, c in unknown.items():
        mine = coeff_of(p, m)
        num = sum(v * q**e for e, v in mine.num.terms.items())
        den = sum(v * q**e for e, v in mine.den.terms.items())
        assert sympy.simplify(num / den - c.subs(sol)) == 0


def test_series_against_sympy():
    q = sympy.Symbol("q")
    s = jw_series(2, 21)
    assert {e: s.terms[generator(2, 1)].coeff(e) for e in range(22)
            if s.terms[generator(2, 1)].coeff(e)} == series_coeffs(-q / (1 + q**2), 21)


def test_embed_adds_strands():
    x = embed(TLElement.e(2, 1), 4)
    assert x == TLElement.e(4, 1)


def test_stabilization_verdicts():
    torus = bracket_stabilization(InfiniteBraidSpec.torus(2), 20, 12)
    assert torus["verdict"] == "converged"
    stars = {r["exp"]: r["l_star"] for r in torus["rows"] if r["matching"] == [[0, 1], [2, 3]]}
    for k in range(1, 7):
        assert stars[2 * k - 1] <= k + 1
    bad = bracket_stabilization(InfiniteBraidSpec.periodic(3, [1]), 40, 8)
    assert bad["verdict"] == "incomplete"
    assert bad["diagonals"][-1]["y"] == 0


def test_stabilization_with_negative_prefix():
    spec = InfiniteBraidSpec(2, "torus", prefix=(-1, -1))
    rep = bracket_stabilization(spec, 24, 10)
    assert rep["verdict"] == "converged"
