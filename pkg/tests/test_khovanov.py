from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import kh_oracle

from infbraid.braid import InfiniteBraidSpec
from infbraid.bracket import BraidWord, apply_relation, relation_sites
from infbraid.khovanov import (ClosureSpec, ResourceLimitError, all_zero_circles, chain_complex,
                               close, closure_bracket, homology, khovanov_homology, minq_check,
                               normalized_homology, stabilization_homology_report)
from infbraid.rewrite import MixedTangle, pull_turnbacks, rewrite_corpus


def W(n, ints):
    return BraidWord.from_ints(n, ints)


def ranks(h):
    return {k: v for k, v in h.ranks.items() if v}


TREFOIL = {(0, 1): 1, (0, 3): 1, (2, 5): 1, (3, 9): 1}
HOPF = {(0, 0): 1, (0, 2): 1, (2, 4): 1, (2, 6): 1}
UNKNOT = {(0, -1): 1, (0, 1): 1}


def test_closure_shapes():
    link = close(W(2, [1]))
    assert len(link) == 1
    assert all_zero_circles(link) == 2
    link = close(W(2, []))
    assert len(link) == 0 and all_zero_circles(link) == 2
    assert len(close(W(2, [1, 1, 1]))) == 3


@pytest.mark.parametrize("n,word,count", [(2, [1, 1, 1], 2), (2, [], 2), (3, [1, 2] * 3, 3)])
def test_all_zero_circles(n, word, count):
    assert all_zero_circles(close(W(n, word))) == count


def test_nonplanar_closure_rejected():
    with pytest.raises(ValueError):
        ClosureSpec.matched(2, [(0, 3), (1, 2)])
    with pytest.raises(ValueError):
        ClosureSpec("cap")


def test_unknot_and_r1():
    assert ranks(khovanov_homology(W(1, []))) == UNKNOT
    assert ranks(khovanov_homology(W(2, [1]))) == UNKNOT
    assert ranks(khovanov_homology(W(2, [-1]))) == UNKNOT
    cx = chain_complex(close(W(1, [])))
    assert cx.size == 2 and cx.check_d_squared()


def test_trefoil_and_hopf():
    assert ranks(khovanov_homology(W(2, [1, 1, 1]))) == TREFOIL
    assert ranks(khovanov_homology(W(2, [1, 1]))) == HOPF


@pytest.mark.parametrize("n,word", [
    (2, [1, 1, 1]), (2, [1, 1]), (2, [1, 1, 1, 1, 1]), (3, [1, -2, 1, -2]),
    (3, [1, 2, 1, 2]), (2, [1, -1, -1]), (3, [1, 1, 2, 2, 1]),
])
def test_integer_homology_matches_oracle(n, word):
    assert khovanov_homology(W(n, word), coefficients="z").as_table() == kh_oracle(n, word)


def test_torsion_reported_over_z():
    h = khovanov_homology(W(2, [1, 1, 1]), coefficients="z")
    assert h.torsion.get((3, 7)) == (2,)
    h2 = khovanov_homology(W(2, [1, 1, 1]), coefficients="z2")
    # Z/2 picks up an extra pair of classes around the torsion
    assert h2.rank(2, 7) == 1 and h2.rank(3, 7) == 1


def test_normalized_examples():
    assert ranks(normalized_homology(W(2, [1, 1, 1]))) == {(0, -2): 1, (0, 0): 1, (2, 2): 1, (3, 6): 1}
    empty = ranks(normalized_homology(W(2, [])))
    assert empty == ranks(khovanov_homology(W(2, [])))
    assert empty == {(0, -2): 1, (0, 0): 2, (0, 2): 1}
    # a negative letter shifts the normalization by (1, 1), like its bracket picks up -q
    r2 = normalized_homology(W(2, [1, -1]))
    assert r2 == normalized_homology(W(2, [])).shifted(1, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.lists(st.integers(-2, 2).filter(bool), max_size=6), st.data())
def test_invariance_under_braid_relations(n, ints, data):
    ints = [x for x in ints if abs(x) < n]
    w = W(n, ints)
    kind, p = data.draw(st.sampled_from(relation_sites(w)))
    v = apply_relation(w, kind, p)
    assert khovanov_homology(w) == khovanov_homology(v)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.lists(st.integers(-3, 3).filter(bool), max_size=8))
def test_euler_and_d_squared(n, ints):
    w = W(n, [x for x in ints if abs(x) < n])
    cx = chain_complex(close(w))
    assert cx.check_d_squared()
    h = homology(cx, normalized=True)
    assert h.euler() == closure_bracket(w)


def test_field_and_integer_ranks_agree_without_torsion():
    w = W(3, [1, 2, 1, 2, 1, 2])
    assert khovanov_homology(w).ranks == {k: v for k, v in khovanov_homology(w, coefficients="z").ranks.items()}


def test_truncated_computation_is_exact_below_imax():
    w = W(3, [1, 2] * 4)
    full = normalized_homology(w)
    assert normalized_homology(w, i_max=2) == full.restricted(2)
    assert khovanov_homology(w, i_max=2) == khovanov_homology(w).restricted(2)


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        chain_complex(close(W(2, [1] * 12)), max_crossings=10)


def test_matched_closure():
    # cap top and bottom pairs: the closure of sigma_1^3 that way is an unknot with a kink count
    cl = ClosureSpec.matched(2, [(0, 1), (2, 3)])
    assert cl.local_maxima(2) == 1
    for k in range(4):
        w = W(2, [1] * k)
        h = normalized_homology(w, cl)
        assert h.euler() == closure_bracket(w, cl)
        assert close(w, cl).circles(0)[0] >= 1
    assert ClosureSpec.from_json(cl.to_json()) == cl


def test_stabilization_n2():
    rep = stabilization_homology_report(InfiniteBraidSpec.torus(2), None, 10, 3)
    assert rep["verdict"] == "match"
    for series in rep["series"]["braid"].values():
        last = series[-1]
        # once the value reaches its final value it stays there
        first = next(k for k in range(len(series)) if all(x == last for x in series[k:]))
        assert all(x == last for x in series[first:])


def test_stabilization_incomplete_is_mismatch():
    rep = stabilization_homology_report(InfiniteBraidSpec.periodic(3, [1]), None, 8, 1)
    assert rep["verdict"] == "mismatch" and not rep["complete"]


def test_stabilization_extends():
    spec = InfiniteBraidSpec.periodic(3, [1, 2, 2, 1, 2])
    a = stabilization_homology_report(spec, None, 14, 1)
    b = stabilization_homology_report(spec, None, 15, 1)
    va = {(r["i"], r["j"]): r["braid"]["value"] for r in a["rows"] if r["braid"]["stable"]}
    vb = {(r["i"], r["j"]): r["braid"]["value"] for r in b["rows"]}
    assert all(vb.get(k, 0) == v for k, v in va.items())


def test_minq_small_instance():
    t = MixedTangle(2, (("X", 1), ("T", 1)))
    out, led = pull_turnbacks(t, 1)
    rep = minq_check(out, led, y=1)
    assert rep["equal"] and rep["bound_holds"]


def test_minq_corpus_sample():
    for w, d, i, D in rewrite_corpus(60, 3):
        out, led = pull_turnbacks(D)
        rep = minq_check(out, led, y=d.y)
        assert rep["equal"], rep
        assert rep["bound_holds"], rep
