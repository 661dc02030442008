"""
Exact coefficient rings in one variable q.

Three coefficient types are provided, all immutable:

- ``LaurentPoly``: integer Laurent polynomials, stored sparsely as {exponent: coefficient}.
- ``RationalFunction``: quotients of Laurent polynomials kept in a canonical form, so that equality
  is structural.
- ``TruncatedSeries``: Laurent series bounded below and known exactly through a fixed exponent
  (the "order").

All three accept multiplication by a ``LaurentPoly``, which is what the Temperley-Lieb code needs
to apply the circle factor q + q^-1 generically.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping


class NonIntegralExpansion(ValueError):
    """Raised when a rational function has no integer q-expansion."""


class LaurentPoly:
    """
    An integer Laurent polynomial in q.

    >>> LaurentPoly({1: 1, -1: 1})
    LaurentPoly('q^-1 + q')
    >>> LaurentPoly.q(2) * LaurentPoly.q(-2) == LaurentPoly.one()
    True
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        self._terms: dict[int, int] = {int(e): int(c) for e, c in (terms or {}).items() if c != 0}
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> LaurentPoly:
        # Caller guarantees no zero coefficients.
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls._raw({})

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls._raw({0: 1})

    @classmethod
    def q(cls, k: int = 1, c: int = 1) -> LaurentPoly:
        """The monomial c*q^k."""
        return cls({k: c})

    @classmethod
    def coerce(cls, x) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls({0: x})
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection ---------------------------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, e: int) -> int:
        return self._terms.get(e, 0)

    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no minimal exponent")
        return min(self._terms)

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no maximal exponent")
        return max(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # -- arithmetic ---------------------------------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly.zero()
            return LaurentPoly._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if not self.is_monomial() or abs(next(iter(self._terms.values()))) != 1:
                raise ValueError("only unit monomials can be inverted in the Laurent ring")
            ((e, c),) = self._terms.items()
            return LaurentPoly({e * k: c ** (-k)})
        result = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by q^k."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- presentation -------------------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if mono == "":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"

    def to_json(self) -> dict[str, str]:
        return {str(e): str(c) for e, c in self.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in obj.items()})


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def quantum_int(m: int) -> LaurentPoly:
    """[m] = q^(m-1) + q^(m-3) + ... + q^(1-m)."""
    if m < 1:
        raise ValueError(f"quantum integer needs m >= 1, got {m}")
    return LaurentPoly({m - 1 - 2 * k: 1 for k in range(m)})


DELTA = quantum_int(2)


# -- dense integer polynomial helpers (coefficient lists, lowest degree first) --------------------

def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _content(p: Iterable[int]) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, c)
    return g


def _primitive(p: list[int]) -> list[int]:
    g = _content(p)
    if g == 0:
        return []
    if p[-1] < 0:
        g = -g
    return [c // g for c in p]


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        la = a[-1]
        a = [c * lb for c in a]
        shift = da - db
        for k, c in enumerate(b):
            a[k + shift] -= la * c
        _trim(a)
    return a


def _poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd of two integer polynomials (positive leading coefficient)."""
    a, b = _primitive(list(a)), _primitive(list(b))
    if not a:
        return b
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return _primitive(a)


def _poly_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if len(a) - 1 < db:
        if any(a):
            raise ArithmeticError("inexact polynomial division")
        return []
    out = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if c % lb:
            raise ArithmeticError("inexact polynomial division")
        c //= lb
        out[k] = c
        if c:
            for j, bc in enumerate(b):
                a[k + j] -= c * bc
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return _trim(out)


def _to_dense(p: LaurentPoly) -> tuple[int, list[int]]:
    lo, hi = p.min_exp(), p.max_exp()
    return lo, [p.coeff(e) for e in range(lo, hi + 1)]


def _from_dense(lo: int, coeffs: list[int]) -> LaurentPoly:
    return LaurentPoly({lo + k: c for k, c in enumerate(coeffs) if c})


class RationalFunction:
    """
    A quotient num/den of Laurent polynomials in canonical form: den has minimal exponent 0 and a
    positive leading coefficient, num and den have no common polynomial factor, and the integer
    content of the pair is 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.one() if den is None else LaurentPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _canonical(num, den)

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> RationalFunction:
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def zero(cls) -> RationalFunction:
        return cls._raw(LaurentPoly.zero(), LaurentPoly.one())

    @classmethod
    def one(cls) -> RationalFunction:
        return cls._raw(LaurentPoly.one(), LaurentPoly.one())

    @classmethod
    def coerce(cls, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        return cls(LaurentPoly.coerce(x))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = RationalFunction.coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = RationalFunction.coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = LaurentPoly.coerce(other)
            if other.is_zero():
                return RationalFunction.zero()
            if other.is_monomial() and abs(next(iter(other.terms.values()))) == 1:
                # Unit monomials keep the form canonical.
                return RationalFunction._raw(self.num * other, self.den)
            return RationalFunction(self.num * other, self.den)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = RationalFunction.coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den == LaurentPoly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction('{self}')"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def _canonical(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return LaurentPoly.zero(), LaurentPoly.one()
    nlo, n = _to_dense(num)
    dlo, d = _to_dense(den)
    g = _poly_gcd(n, d)
    if len(g) > 1:
        n = _poly_exact_div(n, g)
        d = _poly_exact_div(d, g)
    c = math.gcd(_content(n), _content(d))
    if d[-1] < 0:
        c = -c
    n = [x // c for x in n]
    d = [x // c for x in d]
    # den gets minimal exponent 0; its q-power moves into num
    return _from_dense(nlo - dlo, n), _from_dense(0, d)


def rf_normalize(num: LaurentPoly, den: LaurentPoly) -> RationalFunction:
    return RationalFunction(num, den)


class TruncatedSeries:
    """
    A Laurent series in q, bounded below, known exactly through exponent ``order``.

    Coefficients are stored densely from ``min_exp``. The zero series (to the known precision)
    has ``min_exp = order + 1`` and no coefficients.
    """

    __slots__ = ("min_exp", "coeffs", "order")

    def __init__(self, min_exp: int, coeffs: Iterable[int], order: int):
        coeffs = list(coeffs)
        # drop anything beyond the known precision
        coeffs = coeffs[: max(0, order - min_exp + 1)]
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        coeffs = _trim(coeffs[k:])
        min_exp += k
        if not coeffs:
            min_exp = order + 1
        self.min_exp = min_exp
        self.coeffs = tuple(coeffs)
        self.order = order

    @classmethod
    def from_laurent(cls, p: LaurentPoly, order: int) -> TruncatedSeries:
        if p.is_zero():
            return cls(order + 1, (), order)
        lo = p.min_exp()
        return cls(lo, [p.coeff(e) for e in range(lo, min(p.max_exp(), order) + 1)], order)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def valuation(self) -> int:
        """Lower bound on the true valuation (order + 1 for the zero series)."""
        return self.min_exp

    def coeff(self, e: int) -> int:
        if e > self.order:
            raise ValueError(f"coefficient of q^{e} is beyond the known order {self.order}")
        k = e - self.min_exp
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def to_laurent(self) -> LaurentPoly:
        return _from_dense(self.min_exp, list(self.coeffs)) if self.coeffs else LaurentPoly.zero()

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("cannot raise the order of a truncated series")
        return TruncatedSeries(self.min_exp, self.coeffs, order)

    def __add__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = TruncatedSeries.from_laurent(LaurentPoly.coerce(other), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp)
        if lo > order:
            return TruncatedSeries(order + 1, (), order)
        out = [0] * (order - lo + 1)
        for s in (self, other):
            for k, c in enumerate(s.coeffs):
                e = s.min_exp + k
                if e <= order:
                    out[e - lo] += c
        return TruncatedSeries(lo, out, order)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.min_exp, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = TruncatedSeries.from_laurent(LaurentPoly.coerce(other), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            p = LaurentPoly.coerce(other)
            if p.is_zero():
                return TruncatedSeries(self.order + 1, (), self.order)
            # exact factor: precision moves with the factor's lowest exponent
            order = self.order + p.min_exp()
            lo = self.min_exp + p.min_exp()
            if lo > order:
                return TruncatedSeries(order + 1, (), order)
            out = [0] * (order - lo + 1)
            for k, c in enumerate(self.coeffs):
                for e2, c2 in p.items():
                    e = self.min_exp + k + e2
                    if e <= order:
                        out[e - lo] += c * c2
            return TruncatedSeries(lo, out, order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        # the unknown tail of each factor is multiplied by the other factor's lowest term
        order = min(self.order + other.valuation(), other.order + self.valuation())
        lo = self.min_exp + other.min_exp
        if lo > order or not self.coeffs or not other.coeffs:
            return TruncatedSeries(order + 1, (), order)
        out = [0] * (order - lo + 1)
        for i, a in enumerate(self.coeffs):
            if lo + i > order:
                break
            for j, b in enumerate(other.coeffs):
                k = i + j
                if lo + k > order:
                    break
                out[k] += a * b
        return TruncatedSeries(lo, out, order)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.order, self.min_exp, self.coeffs) == (other.order, other.min_exp, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.order, self.min_exp, self.coeffs))

    def agrees_with(self, other, through: int) -> bool:
        """Whether self and other (a series or Laurent polynomial) agree on exponents <= through."""
        if through > self.order:
            raise ValueError("comparison beyond known order")
        if isinstance(other, TruncatedSeries):
            if through > other.order:
                raise ValueError("comparison beyond known order")
            get = other.coeff
        else:
            get = LaurentPoly.coerce(other).coeff
        lo = self.min_exp
        if isinstance(other, TruncatedSeries):
            lo = min(lo, other.min_exp)
        elif not LaurentPoly.coerce(other).is_zero():
            lo = min(lo, LaurentPoly.coerce(other).min_exp())
        return all(self.coeff(e) == get(e) for e in range(lo, through + 1))

    def __str__(self) -> str:
        body = str(self.to_laurent())
        return f"{body} + O(q^{self.order + 1})"

    def __repr__(self) -> str:
        return f"TruncatedSeries('{self}')"

    def to_json(self) -> dict:
        return {"min_exp": self.min_exp, "coeffs": [str(c) for c in self.coeffs], "order": self.order}


def expand_series(r: RationalFunction, order: int) -> TruncatedSeries:
    """
    q-expansion of a rational function through exponent ``order``.

    >>> str(expand_series(RationalFunction(1, quantum_int(2)), 8))
    'q - q^3 + q^5 - q^7 + O(q^9)'
    """
    num, den = r.num, r.den
    if num.is_zero():
        return TruncatedSeries(order + 1, (), order)
    dlo, d = _to_dense(den)
    if d[0] not in (1, -1):
        raise NonIntegralExpansion(
            f"lowest denominator coefficient {d[0]} is not a unit; expansion is not integral")
    # 1/den = q^-dlo * 1/(d0 + d1 q + ...); need inverse through order - (num_lo - dlo)
    nlo = num.min_exp()
    lo = nlo - dlo
    n_terms = order - lo + 1
    if n_terms <= 0:
        return TruncatedSeries(order + 1, (), order)
    inv = [0] * n_terms
    inv[0] = d[0]  # 1/d0 for d0 = +-1
    for k in range(1, n_terms):
        s = 0
        for j in range(1, min(k, len(d) - 1) + 1):
            s += d[j] * inv[k - j]
        inv[k] = -s * d[0]
    _, n = _to_dense(num)
    out = [0] * n_terms
    for i, a in enumerate(n):
        if i >= n_terms:
            break
        if a:
            for k in range(n_terms - i):
                out[i + k] += a * inv[k]
    return TruncatedSeries(lo, out, order)
