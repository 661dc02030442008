"""
The Temperley-Lieb algebra TL_n.

A crossingless (n, n) diagram is a fixed-point-free involution on 2n boundary points. Points
0..n-1 lie on the bottom edge (left to right) and points n..2n-1 on the top edge (left to right),
so the identity pairs bottom i with top n+i. Reading the boundary bottom-left to bottom-right and
then top-right to top-left turns the diagram into a bracket sequence; the matching is planar iff
that sequence is balanced.

Products are downward concatenation: in ``a * b`` the diagram ``a`` sits on top of ``b``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .ring import DELTA, LaurentPoly, TruncatedSeries
from .unionfind import UnionFind


def _circle_position(n: int, point: int) -> int:
    return point if point < n else 3 * n - 1 - point


def is_planar(n: int, partner: Sequence[int]) -> bool:
    """True if ``partner`` is a fixed-point-free, non-crossing involution on 2n points."""
    if len(partner) != 2 * n:
        return False
    if not all(0 <= partner[p] < 2 * n and partner[p] != p and partner[partner[p]] == p
               for p in range(2 * n)):
        return False
    by_pos = [0] * (2 * n)
    for p in range(2 * n):
        by_pos[_circle_position(n, p)] = _circle_position(n, partner[p])
    stack = []
    for pos in range(2 * n):
        if pos < by_pos[pos]:
            stack.append(by_pos[pos])
        elif not stack or stack.pop() != pos:
            return False
    return True


@dataclass(frozen=True, order=True)
class PlanarMatching:
    n: int
    partner: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a matching needs at least one strand")
        if not is_planar(self.n, self.partner):
            raise ValueError(f"not a planar matching on {self.n} strands: {self.partner}")

    @classmethod
    def from_pairs(cls, n: int, pairs: Sequence[Sequence[int]]) -> PlanarMatching:
        partner = [-1] * (2 * n)
        for a, b in pairs:
            partner[a], partner[b] = b, a
        return cls(n, tuple(partner))

    def pairs(self) -> list[list[int]]:
        """Canonical serialization: sorted [min, max] pairs."""
        return sorted([p, q] for p, q in enumerate(self.partner) if p < q)

    def is_identity(self) -> bool:
        return all(self.partner[k] == self.n + k for k in range(self.n))

    def through_strands(self) -> int:
        return sum(1 for k in range(self.n) if self.partner[k] >= self.n)

    def __str__(self) -> str:
        return "[" + ", ".join(f"{a}-{b}" for a, b in self.pairs()) + "]"


def identity(n: int) -> PlanarMatching:
    if n < 1:
        raise ValueError("n must be at least 1")
    return PlanarMatching(n, tuple(list(range(n, 2 * n)) + list(range(n))))


def generator(n: int, i: int) -> PlanarMatching:
    """The turnback e_i, joining bottom points i-1, i and top points n+i-1, n+i."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range for TL_{n}")
    partner = list(identity(n).partner)
    a, b = i - 1, i
    partner[a], partner[b] = b, a
    partner[n + a], partner[n + b] = n + b, n + a
    return PlanarMatching(n, tuple(partner))


@functools.lru_cache(maxsize=1 << 16)
def compose(a: PlanarMatching, b: PlanarMatching) -> tuple[PlanarMatching, int]:
    """
    Stack ``a`` on top of ``b`` and return (resulting matching, number of closed circles).

    Points of a are nodes 0..2n-1 and points of b are 2n..4n-1; the bottom of a is glued to the
    top of b, and union-find over the glued graph separates arcs from circles.
    """
    if a.n != b.n:
        raise ValueError(f"strand mismatch: {a.n} vs {b.n}")
    n = a.n
    uf = UnionFind(4 * n)
    for p in range(2 * n):
        uf.union(p, a.partner[p])
        uf.union(2 * n + p, 2 * n + b.partner[p])
    for k in range(n):
        uf.union(k, 2 * n + n + k)
    # outer points: bottom of b (result 0..n-1), top of a (result n..2n-1)
    outer = {k: 2 * n + k for k in range(n)}
    outer.update({n + k: n + k for k in range(n)})
    root_to_outer: dict[int, list[int]] = {}
    for res_point, node in outer.items():
        root_to_outer.setdefault(uf.find(node), []).append(res_point)
    partner = [0] * (2 * n)
    for pts in root_to_outer.values():
        x, y = pts
        partner[x], partner[y] = y, x
    glued_roots = {uf.find(k) for k in range(n)}
    circles = sum(1 for r in glued_roots if r not in root_to_outer)
    return PlanarMatching(n, tuple(partner)), circles


@functools.lru_cache(maxsize=None)
def tl_basis(n: int) -> tuple[PlanarMatching, ...]:
    """All planar matchings on n strands, in sorted order (Catalan(n) of them)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    size = 2 * n
    by_pos = [-1] * size

    def fill(start: int, stop: int) -> Iterator[None]:
        if start >= stop:
            yield
            return
        for close in range(start + 1, stop, 2):
            by_pos[start], by_pos[close] = close, start
            for _ in fill(start + 1, close):
                yield from fill(close + 1, stop)

    point_at = [p if p < n else 3 * n - 1 - p for p in range(size)]  # involution
    out = []
    for _ in fill(0, size):
        partner = tuple(point_at[by_pos[_circle_position(n, p)]] for p in range(size))
        out.append(PlanarMatching(n, partner))
    return tuple(sorted(out))


class TLElement:
    """
    A linear combination of planar matchings with coefficients in one of the rings of
    ``infbraid.ring``. Instances are treated as immutable.
    """

    __slots__ = ("n", "ring", "terms")

    def __init__(self, n: int, terms: dict | None = None, ring=LaurentPoly):
        self.n = n
        self.ring = ring
        self.terms: dict[PlanarMatching, object] = {}
        for m, c in (terms or {}).items():
            if m.n != n:
                raise ValueError(f"matching on {m.n} strands in an element of TL_{n}")
            if not isinstance(c, ring):
                raise TypeError(f"coefficient {c!r} is not in {ring.__name__}")
            if not c.is_zero():
                self.terms[m] = c

    @classmethod
    def _raw(cls, n: int, terms: dict, ring) -> TLElement:
        obj = cls.__new__(cls)
        obj.n, obj.terms, obj.ring = n, terms, ring
        return obj

    @classmethod
    def basis_element(cls, m: PlanarMatching, coeff=None, ring=LaurentPoly) -> TLElement:
        if coeff is None:
            coeff = ring.one()
        return cls(m.n, {m: coeff}, ring)

    @classmethod
    def identity(cls, n: int, ring=LaurentPoly) -> TLElement:
        return cls.basis_element(identity(n), ring=ring)

    @classmethod
    def e(cls, n: int, i: int, ring=LaurentPoly) -> TLElement:
        return cls.basis_element(generator(n, i), ring=ring)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: TLElement) -> None:
        if self.n != other.n:
            raise ValueError(f"strand mismatch: TL_{self.n} vs TL_{other.n}")
        if self.ring is not other.ring:
            raise TypeError(f"ring mismatch: {self.ring.__name__} vs {other.ring.__name__}")

    def __add__(self, other: TLElement) -> TLElement:
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out[m] + c if m in out else c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return TLElement._raw(self.n, out, self.ring)

    def __neg__(self) -> TLElement:
        return TLElement._raw(self.n, {m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other: TLElement) -> TLElement:
        return self + (-other)

    def scale(self, c) -> TLElement:
        out = {}
        for m, x in self.terms.items():
            y = x * c
            if not y.is_zero():
                out[m] = y
        return TLElement._raw(self.n, out, self.ring)

    def __mul__(self, other):
        if isinstance(other, TLElement):
            return tl_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        if self.n != other.n or self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms)))

    def map_coeffs(self, fn, ring) -> TLElement:
        return TLElement(self.n, {m: fn(c) for m, c in self.terms.items()}, ring)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[m]})*{m}" for m in sorted(self.terms))

    def __repr__(self) -> str:
        return f"TLElement(n={self.n}, {self})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"matching": m.pairs(), "coeff": self.terms[m].to_json()}
                      for m in sorted(self.terms, key=lambda m: m.pairs())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> TLElement:
        n = obj["n"]
        terms = {PlanarMatching.from_pairs(n, t["matching"]): LaurentPoly.from_json(t["coeff"])
                 for t in obj["terms"]}
        return cls(n, terms)


@functools.lru_cache(maxsize=64)
def _delta_power(k: int) -> LaurentPoly:
    return DELTA ** k


def tl_mul(x: TLElement, y: TLElement) -> TLElement:
    """Bilinear extension of ``compose``; each closed circle contributes q + q^-1."""
    x._check(y)
    out: dict = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            m, circles = compose(mx, my)
            c = cx * cy
            if circles:
                c = c * _delta_power(circles)
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            elif not c.is_zero():
                out[m] = c
    return TLElement._raw(x.n, out, x.ring)


def coeff_of(x: TLElement, m: PlanarMatching):
    if m.n != x.n:
        raise ValueError(f"matching on {m.n} strands vs element of TL_{x.n}")
    if m in x.terms:
        return x.terms[m]
    if x.ring is TruncatedSeries:
        order = min((c.order for c in x.terms.values()), default=0)
        return TruncatedSeries(order + 1, (), order)
    return x.ring.zero()


def closure_circles(m: PlanarMatching, closure: PlanarMatching) -> int:
    """Circles formed when the 2n endpoints of ``m`` are joined by the outside arcs of ``closure``."""
    if m.n != closure.n:
        raise ValueError("strand mismatch between diagram and closure")
    uf = UnionFind(2 * m.n)
    for p in range(2 * m.n):
        uf.union(p, m.partner[p])
        uf.union(p, closure.partner[p])
    return uf.components


def closed_value(x: TLElement, closure: PlanarMatching):
    """Evaluate a TL element on a closure, each circle giving q + q^-1."""
    total = x.ring.zero() if x.ring is not TruncatedSeries else None
    for m, c in x.terms.items():
        term = c * _delta_power(closure_circles(m, closure))
        total = term if total is None else total + term
    return total
