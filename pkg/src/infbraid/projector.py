"""
Jones-Wenzl projectors over the rational functions, built by the Wenzl recursion

    P_n = P_{n-1} - ([n-1]/[n]) P_{n-1} e_{n-1} P_{n-1},

then checked against the defining properties (idempotent, killed by every e_i, identity
coefficient 1) and expanded as power series in q. ``bracket_stabilization`` compares the
normalized brackets of growing braid prefixes with those expansions.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .braid import InfiniteBraidSpec, diagonal_counts, is_complete, prefix
from .bracket import normalized_letter_bracket
from .ring import LaurentPoly, RationalFunction, TruncatedSeries, expand_series, quantum_int
from .tl import PlanarMatching, TLElement, coeff_of, identity, tl_basis, tl_mul


@dataclass(frozen=True)
class Projector:
    n: int
    element: TLElement


def embed(x: TLElement, n: int) -> TLElement:
    """Add vertical strands on the right of every diagram in ``x``."""
    k = x.n
    if n < k:
        raise ValueError("cannot embed into fewer strands")
    out = {}
    for m, c in x.terms.items():
        partner = [0] * (2 * n)
        for p in range(2 * k):
            q = m.partner[p]
            p2 = p if p < k else p - k + n
            q2 = q if q < k else q - k + n
            partner[p2] = q2
        for s in range(k, n):
            partner[s], partner[n + s] = n + s, s
        out[PlanarMatching(n, tuple(partner))] = c
    return TLElement(n, out, x.ring)


@functools.lru_cache(maxsize=None)
def jones_wenzl(n: int) -> Projector:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return Projector(1, TLElement.identity(1, ring=RationalFunction))
    prev = embed(jones_wenzl(n - 1).element, n)
    e = TLElement.e(n, n - 1, ring=RationalFunction)
    ratio = RationalFunction(quantum_int(n - 1), quantum_int(n))
    middle = tl_mul(tl_mul(prev, e), prev)
    return Projector(n, prev - middle.scale(ratio))


def verify_axioms(p: Projector) -> dict:
    """Exact check of idempotence, two-sided turnback-kill and unit identity coefficient."""
    x = p.element
    n = p.n
    kills = {}
    for i in range(1, n):
        e = TLElement.e(n, i, ring=x.ring)
        kills[i] = {"left": tl_mul(e, x).is_zero(), "right": tl_mul(x, e).is_zero()}
    report = {
        "n": n,
        "idempotent": tl_mul(x, x) == x,
        "turnback_kill": all(v["left"] and v["right"] for v in kills.values()),
        "turnback_detail": kills,
        "identity_coefficient_one": coeff_of(x, identity(n)) == x.ring.one(),
    }
    report["passed"] = report["idempotent"] and report["turnback_kill"] and report["identity_coefficient_one"]
    return report


def jw_series(n: int, order: int) -> TLElement:
    """P_n with each coefficient expanded in q through exponent ``order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    p = jones_wenzl(n).element
    return TLElement(n, {m: expand_series(c, order) for m, c in p.terms.items()}, TruncatedSeries)


def _truncate(x: TLElement, order: int) -> TLElement:
    out = {}
    for m, c in x.terms.items():
        kept = LaurentPoly({e: v for e, v in c.terms.items() if e <= order})
        if not kept.is_zero():
            out[m] = kept
    return TLElement(x.n, out)


def bracket_stabilization(spec: InfiniteBraidSpec, L: int, order: int, margin: int = 2) -> dict:
    """
    Follow the normalized brackets of the prefixes of ``spec`` through q-degree ``order``.

    For every basis diagram and exponent e <= order, ``l_star`` is the smallest prefix length from
    which the coefficient stays constant up to L; it counts as stabilized when l_star <= L - margin.
    The verdict is "converged" when every coefficient is stabilized and equals the matching
    coefficient of (-q)^k jw_series(n, order), k being the number of left-handed letters in the
    spec's finite prefix; "incomplete" for a spec in which some generator occurs
    only finitely often, and "mismatch" otherwise.
    """
    if L < 1:
        raise ValueError("L must be positive")
    n = spec.n
    w = prefix(spec, L)
    # both normalized letters (I - q e and e - q I) have only non-negative powers of q, so terms
    # above ``order`` never feed back into lower ones
    x = TLElement.identity(n)
    history = []
    for i, s in w.letters:
        x = _truncate(tl_mul(x, normalized_letter_bracket(n, i, s)), order)
        history.append(x)
    # a left-handed letter acts on P_n as -q, a right-handed one as 1
    k = sum(1 for v in spec.prefix if v < 0)
    target = jw_series(n, order).scale(LaurentPoly.q(k, (-1) ** k))
    basis = sorted(tl_basis(n), key=lambda m: m.pairs())
    rows = []
    converged = True
    for m in basis:
        for e in range(order + 1):
            vals = [coeff_of(h, m).coeff(e) for h in history]
            star = L
            while star > 1 and vals[star - 2] == vals[-1]:
                star -= 1
            expected = coeff_of(target, m).coeff(e)
            stable = star <= L - margin
            ok = stable and vals[-1] == expected
            converged = converged and ok
            if vals[-1] or expected or star > 1:
                rows.append({"matching": m.pairs(), "exp": e, "l_star": star, "value": vals[-1],
                             "expected": expected, "stable": stable, "match": ok})
    d_counts = diagonal_counts(spec, range(1, L + 1))
    if converged:
        verdict = "converged"
    elif not is_complete(spec):
        verdict = "incomplete"
    else:
        verdict = "mismatch"
    return {
        "spec": spec.to_json(),
        "L": L,
        "order": order,
        "complete": is_complete(spec),
        "rows": rows,
        "diagonals": d_counts,
        "verdict": verdict,
    }
