"""
Acceptance criteria 1-9, each timed against its budget. Every test appends one PASS/FAIL line to
``RESULTS``; ``conftest.py`` prints them at the end of the session. Run this file directly
(``python3 tests/test_acceptance.py``) for the lines alone.
"""

from __future__ import annotations

import time
from contextlib import contextmanager

from oracles import kh_oracle

from infbraid.braid import InfiniteBraidSpec, find_diagonals, prefix
from infbraid.bracket import BraidWord, check_braid_relations, normalized_bracket
from infbraid.khovanov import (chain_complex, close, closure_bracket, homology,
                               khovanov_homology, minq_check, stabilization_homology_report)
from infbraid.projector import bracket_stabilization, jones_wenzl, jw_series, verify_axioms
from infbraid.rewrite import (ledger_monomial, mixed_bracket, pull_turnbacks, rewrite_corpus,
                              shift_of_moves)
from infbraid.tl import coeff_of, generator, identity

RESULTS: list[str] = []


@contextmanager
def criterion(number: int, title: str, budget: float | None):
    state = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield state
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = budget is None or elapsed < budget
        verdict = "PASS" if ok and within else "FAIL"
        limit = f" (budget {budget:g}s)" if budget is not None else ""
        line = f"[{verdict}] criterion {number}: {title}: {elapsed:.2f}s{limit} {state['detail']}"
        RESULTS.append(line.rstrip())
        print(line)
    assert within, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"


def test_criterion_1_p2_series():
    with criterion(1, "P_2 series to order 21", 1.0) as st:
        s = jw_series(2, 21)
        e = s.terms[generator(2, 1)]
        expected = {2 * k + 1: -(-1) ** k for k in range(11)}
        assert {k: e.coeff(k) for k in range(22) if e.coeff(k)} == expected
        one = s.terms[identity(2)]
        assert {k: one.coeff(k) for k in range(22) if one.coeff(k)} == {0: 1}
        st["detail"] = "e_1 coefficient -q+q^3-...+q^21"


def test_criterion_2_torus_n2_prefixes():
    with criterion(2, "sigma_1^l vs P_2 for l <= 20", 1.0) as st:
        for ell in range(1, 21):
            b = normalized_bracket(BraidWord.from_ints(2, [1] * ell))
            target = jw_series(2, 2 * ell - 1)
            for m in (identity(2), generator(2, 1)):
                got, want = coeff_of(b, m), target.terms.get(m)
                for k in range(2 * ell):
                    assert got.coeff(k) == (want.coeff(k) if want is not None else 0), (ell, m, k)
        st["detail"] = "all coefficients of degree <= 2l-1 agree"


def test_criterion_3_periodic_n3():
    with criterion(3, "n=3 periodic L=60 D=12 vs P_3", 30.0) as st:
        rep = bracket_stabilization(InfiniteBraidSpec.periodic(3, [1, 2, 2, 1, 2]), 60, 12)
        assert rep["verdict"] == "converged"
        assert len({tuple(map(tuple, r["matching"])) for r in rep["rows"]}) == 5
        bad = bracket_stabilization(InfiniteBraidSpec.periodic(3, [1]), 60, 12)
        assert bad["verdict"] != "converged"
        st["detail"] = f"complete: {rep['verdict']}, incomplete control: {bad['verdict']}"


def test_criterion_4_projector_axioms():
    with criterion(4, "Jones-Wenzl axioms n <= 5", 60.0) as st:
        for n in range(1, 6):
            rep = verify_axioms(jones_wenzl(n))
            assert rep["passed"], (n, rep)
        st["detail"] = "idempotent, turnback-killed, unit identity coefficient"


def test_criterion_5_bracket_invariance():
    with criterion(5, "1000 braid-relation rewrites", None) as st:
        failures = 0
        moves: dict[str, int] = {}
        for n, seed in ((2, 1), (3, 2), (4, 3), (5, 4)):
            rep = check_braid_relations(n, 250, seed)
            failures += len(rep["failures"])
            for k, v in rep["moves"].items():
                moves[k] = moves.get(k, 0) + v
        assert failures == 0
        assert moves.get("braid", 0) > 0 and moves.get("cancel", 0) > 0 and moves.get("commute", 0) > 0
        st["detail"] = f"0 failures, moves {dict(sorted(moves.items()))}"


def test_criterion_6_shifting_estimate():
    with criterion(6, "pull_turnbacks on 500 multicone terms", 120.0) as st:
        assert shift_of_moves(3, 1) == (4, 5)
        assert shift_of_moves(6, 2) == (8, 10)
        count = 0
        for w, d, i, D in rewrite_corpus(500, 2024):
            assert w.n <= 4 and len(w) <= 14
            out, led = pull_turnbacks(D)
            assert led.s_q >= led.s_h >= d.y, (w.to_ints(), i)
            assert mixed_bracket(D) == mixed_bracket(out).scale(ledger_monomial(led))
            count += 1
        assert count >= 500
        st["detail"] = f"{count} terms, s_q >= s_h >= y and bracket preserved"


def test_criterion_7_khovanov_baseline():
    with criterion(7, "Hopf/trefoil tables and a 14-crossing cube", 60.0) as st:
        hopf = {(0, 0): 1, (0, 2): 1, (2, 4): 1, (2, 6): 1}
        trefoil = {(0, 1): 1, (0, 3): 1, (2, 5): 1, (3, 9): 1}
        for word, table in (([1, 1], hopf), ([1, 1, 1], trefoil)):
            h = khovanov_homology(BraidWord.from_ints(2, word))
            assert {k: v for k, v in h.ranks.items() if v} == table
            oracle = kh_oracle(2, word)
            assert {k: r for k, (r, _) in oracle.items() if r} == table
            assert h.euler() == closure_bracket(BraidWord.from_ints(2, word)).shift(len(word))
        w = BraidWord.from_ints(3, [1, 2] * 7)
        link = close(w)
        assert len(link) == 14
        cx = chain_complex(link, max_crossings=14)
        h = homology(cx, normalized=True)
        assert h.euler() == closure_bracket(w)
        st["detail"] = f"(s1 s2)^7: {cx.size} generators, Euler characteristic matches"


def test_criterion_8_homology_stabilization():
    with criterion(8, "normalized homology: braid vs torus", 600.0) as st:
        rep2 = stabilization_homology_report(InfiniteBraidSpec.torus(2), None, 10, 3)
        assert rep2["verdict"] == "match"
        spec = InfiniteBraidSpec.periodic(3, [1, 2, 2, 1, 2])
        rep3 = stabilization_homology_report(spec, None, 30, 2)
        assert rep3["y"] >= 6
        assert rep3["verdict"] == "match"
        st["detail"] = (f"n=2 L=10 i<=3: {len(rep2['rows'])} entries match; "
                        f"n=3 L=30 (y={rep3['y']}) i<=2: {len(rep3['rows'])} entries match")


def test_criterion_9_minq_formula():
    with criterion(9, "min-q formula and bound on the rewrite corpus", None) as st:
        count = 0
        for w, d, i, D in rewrite_corpus(500, 2024):
            out, led = pull_turnbacks(D)
            rep = minq_check(out, led, y=d.y)
            assert rep["equal"], (w.to_ints(), i, rep)
            assert rep["bound_holds"], (w.to_ints(), i, rep)
            count += 1
        st["detail"] = f"{count} instances, equality and bound >= y - c hold"


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
