from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infbraid.ring import DELTA, LaurentPoly, RationalFunction
from infbraid.tl import (PlanarMatching, TLElement, closed_value, compose, generator, identity,
                         is_planar, tl_basis, tl_mul)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 5), (4, 14), (5, 42), (6, 132)])
def test_basis_is_catalan(n, count):
    basis = tl_basis(n)
    assert len(basis) == count == len(set(basis))


def test_planarity_check():
    assert is_planar(2, (1, 0, 3, 2))
    assert not is_planar(2, (3, 2, 1, 0))  # bottom-left to top-right crosses bottom-right to top-left
    with pytest.raises(ValueError):
        PlanarMatching(2, (2, 3, 0, 0))


def test_generators_and_relations():
    n = 4
    e = [None] + [TLElement.e(n, i) for i in range(1, n)]
    assert e[1] * e[1] == e[1].scale(DELTA)
    assert e[1] * e[2] * e[1] == e[1]
    assert e[2] * e[1] * e[2] == e[2]
    assert e[1] * e[3] == e[3] * e[1]
    assert compose(generator(2, 1), generator(2, 1)) == (generator(2, 1), 1)
    with pytest.raises(ValueError):
        generator(3, 3)


def test_identity_is_unit():
    for m in tl_basis(4):
        assert compose(identity(4), m) == (m, 0) == compose(m, identity(4))


@given(st.integers(0, 13), st.integers(0, 13), st.integers(0, 13))
def test_composition_is_associative(a, b, c):
    basis = tl_basis(4)
    x, y, z = (TLElement.basis_element(basis[k]) for k in (a, b, c))
    assert (x * y) * z == x * (y * z)


def test_ring_and_strand_mismatch():
    with pytest.raises(ValueError):
        TLElement.identity(2) + TLElement.identity(3)
    with pytest.raises(TypeError):
        TLElement.identity(2) + TLElement.identity(2, ring=RationalFunction)


def test_json_round_trip():
    x = TLElement.identity(3).scale(LaurentPoly.q(2)) - TLElement.e(3, 2)
    assert TLElement.from_json(x.to_json()) == x
    assert x.to_json()["terms"][0]["matching"] == sorted(x.to_json()["terms"][0]["matching"])


def test_closed_value_trace():
    # trace closure of e_1 in TL_2 is one circle, of the identity two
    tr = identity(2)
    assert closed_value(TLElement.e(2, 1), tr) == DELTA
    assert closed_value(TLElement.identity(2), tr) == DELTA * DELTA


def test_all_products_stay_in_basis():
    basis = set(tl_basis(3))
    for a, b in itertools.product(basis, repeat=2):
        m, circles = compose(a, b)
        assert m in basis and circles >= 0
