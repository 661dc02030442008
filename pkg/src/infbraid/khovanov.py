"""
Khovanov homology of closed braid-like diagrams by the cube of resolutions.

A diagram is built from slices on n positions: right- or left-handed crossings and turnbacks
(``MixedTangle``), then closed off by a planar pairing of its 2n boundary points. Edges are the
arcs between slices. A crossing at position i has incoming edges a (left) and b (right) above it and
outgoing edges c (left) and d (right) below; the strands run a -> d and b -> c.

Smoothings: the vertical one joins a-c and b-d, the horizontal one joins a-b and c-d. A right-handed
crossing has its 0-smoothing vertical, a left-handed one has it horizontal, matching the bracket
rules in ``infbraid.bracket``.

Gradings: a generator in a state with r one-smoothings and circle labelling with p = #v+ - #v- sits
in i = r - n^- and j = p + r + n^+ - 2 n^-, where n^+/n^- count positive/negative crossings of the
oriented closed diagram. The normalized complex h^{n^-} q^{-N} KC with N = n^+ - 2 n^- therefore has
gradings (r, p + r).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .braid import InfiniteBraidSpec, find_diagonals, is_complete, prefix
from .bracket import BraidWord, normalized_bracket
from .ring import LaurentPoly
from .rewrite import CROSS, MixedTangle, ShiftLedger
from .tl import PlanarMatching, closed_value, identity
from .unionfind import UnionFind

COEFFICIENTS = ("q", "z2", "z")
DEFAULT_MAX_CROSSINGS = 20


class ResourceLimitError(RuntimeError):
    """The requested computation exceeds the configured size limits."""


# -- closures and diagrams ---------------------------------------------------------------------

@dataclass(frozen=True)
class ClosureSpec:
    """
    How the 2n endpoints of a braid box are joined outside it. ``kind="trace"`` joins top i to
    bottom i around the right; ``kind="matched"`` uses ``matching``, a planar pairing of the
    boundary points (bottom 0..n-1, top n..2n-1, as in ``infbraid.tl``).
    """

    kind: str = "trace"
    matching: PlanarMatching | None = None

    def __post_init__(self):
        if self.kind not in ("trace", "matched"):
            raise ValueError(f"unknown closure kind {self.kind!r}")
        if self.kind == "matched" and self.matching is None:
            raise ValueError("a matched closure needs a matching")

    @classmethod
    def trace(cls) -> ClosureSpec:
        return cls("trace")

    @classmethod
    def matched(cls, n: int, pairs: Sequence[Sequence[int]]) -> ClosureSpec:
        # PlanarMatching rejects non-planar pairings
        return cls("matched", PlanarMatching.from_pairs(n, pairs))

    def pairing(self, n: int) -> PlanarMatching:
        if self.kind == "trace":
            return identity(n)
        if self.matching.n != n:
            raise ValueError(f"closure is for {self.matching.n} strands, diagram has {n}")
        return self.matching

    def local_maxima(self, n: int) -> int:
        """Maxima of the closing arcs drawn outside the box: one per arc that touches the top."""
        m = self.pairing(n)
        return sum(1 for a, b in m.pairs() if b >= n)

    def to_json(self) -> dict:
        if self.kind == "trace":
            return {"kind": "trace"}
        return {"kind": "matched", "n": self.matching.n, "pairs": self.matching.pairs()}

    @classmethod
    def from_json(cls, obj: dict) -> ClosureSpec:
        if obj.get("kind", "trace") == "trace":
            return cls.trace()
        return cls.matched(int(obj["n"]), obj["pairs"])


@dataclass(frozen=True)
class LinkDiagram:
    """
    A closed diagram. ``crossings`` holds (a, b, c, d) edge ids, ``handed`` the handedness of each
    crossing (+1 for sigma_i, -1 for its inverse), ``arcs`` the permanent edge identifications made
    by turnbacks and closing arcs, and ``signs`` the crossing signs under the chosen orientation.
    """

    n_edges: int
    crossings: tuple[tuple[int, int, int, int], ...]
    handed: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]
    signs: tuple[int, ...]
    turnbacks: int = 0
    closure_maxima: int = 0

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def N(self) -> int:
        return self.n_plus - 2 * self.n_minus

    def __len__(self) -> int:
        return len(self.crossings)

    def _vertical(self, k: int, bit: int) -> bool:
        return (self.handed[k] > 0) == (bit == 0)

    def circles(self, state: int) -> tuple[int, list[int]]:
        """(number of circles, circle id of every edge) in the given resolution."""
        uf = UnionFind(self.n_edges)
        for x, y in self.arcs:
            uf.union(x, y)
        for k, (a, b, c, d) in enumerate(self.crossings):
            if self._vertical(k, (state >> k) & 1):
                uf.union(a, c)
                uf.union(b, d)
            else:
                uf.union(a, b)
                uf.union(c, d)
        ids: dict[int, int] = {}
        cid = [ids.setdefault(uf.find(e), len(ids)) for e in range(self.n_edges)]
        return len(ids), cid


def _slices(obj) -> tuple[int, list[tuple[str, int, int]]]:
    if isinstance(obj, BraidWord):
        return obj.n, [(CROSS, i, s) for i, s in obj.letters]
    if isinstance(obj, MixedTangle):
        return obj.n, [(k, i, 1) for k, i in obj.slices]
    raise TypeError(f"cannot close a {type(obj).__name__}")


def close(obj, closure: ClosureSpec | None = None) -> LinkDiagram:
    """Close a ``BraidWord`` or ``MixedTangle`` into a link diagram and orient it."""
    closure = closure or ClosureSpec.trace()
    n, slices = _slices(obj)
    pairing = closure.pairing(n)
    cur = list(range(n))
    n_edges = n
    # ends[(edge, end)] = (edge', end'), end 0 = top, 1 = bottom
    ends: dict[tuple[int, int], tuple[int, int]] = {}

    def connect(x, y):
        ends[x], ends[y] = y, x

    crossings, handed, arcs = [], [], []
    turnbacks = 0
    for kind, i, sign in slices:
        a, b = cur[i - 1], cur[i]
        c, d = n_edges, n_edges + 1
        n_edges += 2
        if kind == CROSS:
            crossings.append((a, b, c, d))
            handed.append(sign)
            connect((a, 1), (d, 0))
            connect((b, 1), (c, 0))
        else:
            turnbacks += 1
            connect((a, 1), (b, 1))
            connect((c, 0), (d, 0))
            arcs += [(a, b), (c, d)]
        cur[i - 1], cur[i] = c, d

    def endpoint(p: int) -> tuple[int, int]:
        return (cur[p], 1) if p < n else (p - n, 0)

    for p, q in pairing.pairs():
        connect(endpoint(p), endpoint(q))
        arcs.append((endpoint(p)[0], endpoint(q)[0]))

    # orient: each component is traversed starting upward along its lowest-numbered edge
    upward = [None] * n_edges
    for start in range(n_edges):
        if upward[start] is not None:
            continue
        e, enter = start, 1
        while upward[e] is None:
            upward[e] = enter == 1
            e, enter = ends[(e, 1 - enter)]
    signs = tuple(h if upward[a] == upward[b] else -h
                  for (a, b, _, _), h in zip(crossings, handed))
    return LinkDiagram(n_edges, tuple(crossings), tuple(handed), tuple(arcs), signs,
                       turnbacks, closure.local_maxima(n))


def all_zero_circles(link: LinkDiagram) -> int:
    """Number of circles in the all-zero resolution."""
    return link.circles(0)[0]


# -- the cube complex --------------------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass
class ChainComplex:
    """
    The cube complex of a diagram, possibly truncated to states with at most ``max_r`` ones.
    Generators are numbered; ``r`` and ``jn`` give each generator's resolution degree and
    normalized q-degree (p + r). ``d`` maps a generator to {target: coefficient}.
    """

    link: LinkDiagram
    r: list[int]
    jn: list[int]
    d: list[dict[int, int]]
    max_r: int | None = None

    @property
    def size(self) -> int:
        return len(self.r)

    def shift(self) -> tuple[int, int]:
        """Raw grading minus normalized grading: (-n^-, N)."""
        return -self.link.n_minus, self.link.N

    def check_d_squared(self) -> bool:
        for x, row in enumerate(self.d):
            acc: dict[int, int] = {}
            for y, v in row.items():
                for z, w in self.d[y].items():
                    acc[z] = acc.get(z, 0) + v * w
            if any(acc.values()):
                return False
        return True

    def min_normalized_q(self) -> int:
        return min(self.jn)


def _states(c: int, max_r: int | None) -> list[int]:
    if max_r is None or max_r >= c:
        return list(range(1 << c))
    out = []
    for r in range(max_r + 1):
        for combo in itertools.combinations(range(c), r):
            out.append(sum(1 << k for k in combo))
    return out


def chain_complex(link: LinkDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS,
                  max_r: int | None = None) -> ChainComplex:
    """
    Build the cube complex. Edge signs are (-1)^(number of 1-bits before the flipped crossing);
    merges use m(v+v+) = v+, m(v+v-) = m(v-v+) = v-, m(v-v-) = 0 and splits use
    D(v+) = v+v- + v-v+, D(v-) = v-v-. A circle labelling is a bitmask, bit set = v-.

    ``max_r`` keeps only states with at most that many one-smoothings, which is exact for
    homology in degrees r < max_r.
    """
    c = len(link)
    states = _states(c, max_r)
    if len(states) > (1 << max_crossings):
        raise ResourceLimitError(
            f"{len(states)} resolution states exceed the limit of 2^{max_crossings}")
    info = {}
    offset = {}
    total = 0
    for s in states:
        nc, cid = link.circles(s)
        rep = [0] * nc
        for e in range(link.n_edges - 1, -1, -1):
            rep[cid[e]] = e
        info[s] = (nc, cid, rep)
        offset[s] = total
        total += 1 << nc
    r_of = [0] * total
    jn_of = [0] * total
    for s in states:
        nc = info[s][0]
        r = _popcount(s)
        base = offset[s]
        for lab in range(1 << nc):
            r_of[base + lab] = r
            jn_of[base + lab] = nc - 2 * _popcount(lab) + r
    d: list[dict[int, int]] = [dict() for _ in range(total)]
    for s in states:
        nc, cid, rep = info[s]
        base = offset[s]
        for k in range(c):
            if (s >> k) & 1:
                continue
            t = s | (1 << k)
            if t not in info:
                continue
            sign = -1 if _popcount(s & ((1 << k) - 1)) & 1 else 1
            tnc, tcid, _ = info[t]
            tbase = offset[t]
            a, b, cc, dd = link.crossings[k]
            x1, x2 = (a, b) if link._vertical(k, 0) else (a, cc)
            A, B = cid[x1], cid[x2]
            moved = [(m, tcid[rep[m]]) for m in range(nc) if m != A and m != B]
            if A != B:
                C = tcid[x1]
                for lab in range(1 << nc):
                    la, lb = (lab >> A) & 1, (lab >> B) & 1
                    if la and lb:
                        continue
                    tgt = 0
                    for m, tm in moved:
                        if (lab >> m) & 1:
                            tgt |= 1 << tm
                    if la or lb:
                        tgt |= 1 << C
                    d[base + lab][tbase + tgt] = sign
            else:
                y1, y2 = (a, b) if link._vertical(k, 1) else (a, cc)
                C1, C2 = tcid[y1], tcid[y2]
                for lab in range(1 << nc):
                    tgt = 0
                    for m, tm in moved:
                        if (lab >> m) & 1:
                            tgt |= 1 << tm
                    row = d[base + lab]
                    if (lab >> A) & 1:
                        row[tbase + (tgt | (1 << C1) | (1 << C2))] = sign
                    else:
                        row[tbase + (tgt | (1 << C2))] = sign
                        row[tbase + (tgt | (1 << C1))] = sign
    return ChainComplex(link, r_of, jn_of, d, max_r)


# -- homology ----------------------------------------------------------------------------------

@dataclass
class BigradedHomology:
    """(i, j) -> rank, plus torsion invariant factors when computed over the integers."""

    ranks: dict[tuple[int, int], int]
    torsion: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    coefficients: str = "q"
    normalized: bool = False

    def groups(self) -> list[tuple[int, int]]:
        keys = {k for k, v in self.ranks.items() if v} | {k for k, v in self.torsion.items() if v}
        return sorted(keys)

    def rank(self, i: int, j: int) -> int:
        return self.ranks.get((i, j), 0)

    def euler(self) -> LaurentPoly:
        """Sum of (-1)^i q^j rank."""
        out: dict[int, int] = {}
        for (i, j), v in self.ranks.items():
            out[j] = out.get(j, 0) + (-1) ** (i & 1) * v
        return LaurentPoly(out)

    def shifted(self, di: int, dj: int, normalized: bool | None = None) -> BigradedHomology:
        return BigradedHomology(
            {(i + di, j + dj): v for (i, j), v in self.ranks.items()},
            {(i + di, j + dj): v for (i, j), v in self.torsion.items()},
            self.coefficients,
            self.normalized if normalized is None else normalized,
        )

    def restricted(self, i_max: int) -> BigradedHomology:
        return BigradedHomology(
            {k: v for k, v in self.ranks.items() if k[0] <= i_max},
            {k: v for k, v in self.torsion.items() if k[0] <= i_max},
            self.coefficients, self.normalized)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigradedHomology):
            return NotImplemented
        return (self.as_table() == other.as_table())

    def as_table(self) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
        return {k: (self.ranks.get(k, 0), tuple(self.torsion.get(k, ()))) for k in self.groups()}

    def to_json(self) -> dict:
        return {
            "coefficients": self.coefficients,
            "normalized": self.normalized,
            "homology": [{"i": i, "j": j, "rank": self.rank(i, j),
                          "torsion": list(self.torsion.get((i, j), ()))}
                         for i, j in self.groups()],
        }


def _cancel(rows: dict[int, dict], cols: dict[int, set], mode: str) -> None:
    """
    Gaussian elimination on a chain complex given by ``rows`` (source -> {target: coeff}) and
    ``cols`` (target -> sources). Each step removes an acyclic pair x -> y and corrects the maps
    from the other sources of y to the other targets of x. Over the integers only unit pivots
    are used; over the fields any nonzero pivot.
    """
    def usable(v) -> bool:
        if mode == "z":
            return v == 1 or v == -1
        return v != 0

    progress = True
    while progress:
        progress = False
        for x in list(rows):
            row = rows.get(x)
            if not row:
                continue
            y = None
            for cand, v in row.items():
                if usable(v):
                    if y is None or len(cols[cand]) < len(cols[y]):
                        y = cand
            if y is None:
                continue
            progress = True
            v = row[y]
            for x2 in list(cols[y]):
                if x2 == x:
                    continue
                row2 = rows[x2]
                a = row2.pop(y)
                if mode == "z2":
                    factor = 1
                elif mode == "z":
                    factor = a * v  # v = +-1 is its own inverse
                else:
                    factor = Fraction(a) / v
                    if factor.denominator == 1:
                        factor = int(factor)
                for y2, b in row.items():
                    if y2 == y:
                        continue
                    nv = row2.get(y2, 0) - factor * b
                    if mode == "z2":
                        nv %= 2
                    if nv:
                        if y2 not in row2:
                            cols[y2].add(x2)
                        row2[y2] = nv
                    elif y2 in row2:
                        del row2[y2]
                        cols[y2].discard(x2)
            for y2 in row:
                cols[y2].discard(x)
            del rows[x]
            for z in rows.pop(y, {}):
                cols[z].discard(y)
            for x0 in cols.pop(x, ()):
                rows[x0].pop(x, None)
            cols.pop(y, None)


def _block_homology(gens: list[int], r_of, d, mode: str):
    """Homology of one q-degree block: returns ({r: rank}, {r: torsion factors})."""
    gset = set(gens)
    rows: dict[int, dict] = {}
    cols: dict[int, set] = {g: set() for g in gens}
    for x in gens:
        row = {}
        for y, v in d[x].items():
            if y in gset:
                row[y] = v % 2 if mode == "z2" else v
        row = {y: v for y, v in row.items() if v}
        rows[x] = row
        for y in row:
            cols[y].add(x)
    _cancel(rows, cols, mode)
    alive = list(rows)
    count: dict[int, int] = {}
    for g in alive:
        count[r_of[g]] = count.get(r_of[g], 0) + 1
    torsion: dict[int, tuple[int, ...]] = {}
    if mode != "z" or not any(rows[g] for g in alive):
        return count, torsion
    # integer residual: Smith normal form of each remaining differential
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    by_r: dict[int, list[int]] = {}
    for g in sorted(alive):
        by_r.setdefault(r_of[g], []).append(g)
    ranks = dict(count)
    for r, src in by_r.items():
        tgt = by_r.get(r + 1, [])
        if not tgt or not any(rows[g] for g in src):
            continue
        pos = {g: k for k, g in enumerate(tgt)}
        m = Matrix(len(tgt), len(src), lambda i, j: 0)
        for j, g in enumerate(src):
            for y, v in rows[g].items():
                m[pos[y], j] = int(v)
        factors = [abs(int(f)) for f in invariant_factors(m, domain=ZZ) if f != 0]
        rank = len(factors)
        ranks[r] -= rank
        ranks[r + 1] -= rank
        tors = tuple(f for f in factors if f > 1)
        if tors:
            torsion[r + 1] = tors
    return ranks, torsion


def homology(cx: ChainComplex, coefficients: str = "q", normalized: bool = False,
             i_max: int | None = None) -> BigradedHomology:
    """
    Bigraded homology over the rationals ("q"), the field with two elements ("z2") or the
    integers ("z"). For a truncated complex only degrees r < max_r are reported.
    """
    if coefficients not in COEFFICIENTS:
        raise ValueError(f"unknown coefficients {coefficients!r}; expected one of {COEFFICIENTS}")
    blocks: dict[int, list[int]] = {}
    for g, j in enumerate(cx.jn):
        blocks.setdefault(j, []).append(g)
    ranks: dict[tuple[int, int], int] = {}
    torsion: dict[tuple[int, int], tuple[int, ...]] = {}
    limit = cx.max_r - 1 if cx.max_r is not None else None
    if i_max is not None:
        limit = i_max if limit is None else min(limit, i_max)
    for j in sorted(blocks):
        cnt, tors = _block_homology(blocks[j], cx.r, cx.d, coefficients)
        for r, v in cnt.items():
            if v and (limit is None or r <= limit):
                ranks[(r, j)] = v
        for r, t in tors.items():
            if limit is None or r <= limit:
                torsion[(r, j)] = t
    h = BigradedHomology(ranks, torsion, coefficients, normalized=True)
    if normalized:
        return h
    di, dj = cx.shift()
    return h.shifted(di, dj, normalized=False)


def khovanov_homology(obj, closure: ClosureSpec | None = None, coefficients: str = "q",
                      max_crossings: int = DEFAULT_MAX_CROSSINGS,
                      i_max: int | None = None) -> BigradedHomology:
    """Unnormalized homology with gradings (r - n^-, p + r + n^+ - 2 n^-)."""
    link = close(obj, closure)
    max_r = None if i_max is None else i_max + 1 + link.n_minus
    cx = chain_complex(link, max_crossings, max_r)
    h = homology(cx, coefficients)
    return h.restricted(i_max) if i_max is not None else h


def normalized_homology(obj, closure: ClosureSpec | None = None, coefficients: str = "q",
                        max_crossings: int = DEFAULT_MAX_CROSSINGS,
                        i_max: int | None = None) -> BigradedHomology:
    """Homology of h^{n^-} q^{-N} KC: gradings (r, p + r)."""
    link = close(obj, closure)
    cx = chain_complex(link, max_crossings, None if i_max is None else i_max + 1)
    return homology(cx, coefficients, normalized=True, i_max=i_max)


def closure_bracket(w: BraidWord, closure: ClosureSpec | None = None) -> LaurentPoly:
    """Normalized bracket of the word evaluated on the closure; the Euler characteristic oracle."""
    closure = closure or ClosureSpec.trace()
    return closed_value(normalized_bracket(w), closure.pairing(w.n))


# -- stabilization -----------------------------------------------------------------------------

def _stability(series: dict[tuple[int, int], list[int]], L: int) -> dict:
    """For each (i, j): the smallest l* such that the value is constant on l* <= l <= L."""
    out = {}
    for key, vals in series.items():
        star = L
        while star > 1 and vals[star - 2] == vals[L - 1]:
            star -= 1
        out[key] = {"l_star": star, "value": vals[L - 1]}
    return out


def _prefix_ranks(args) -> dict:
    spec, length, closure, i_max, coefficients, max_crossings = args
    h = normalized_homology(prefix(spec, length), closure, coefficients, max_crossings, i_max)
    return h.ranks


def homology_table(spec: InfiniteBraidSpec, closure: ClosureSpec, L: int, i_max: int,
                   coefficients: str = "q", max_crossings: int = DEFAULT_MAX_CROSSINGS,
                   threads: int = 1) -> dict:
    """Normalized ranks of the prefix closures, (i, j) -> [rank at l = 1..L]."""
    jobs = [(spec, length, closure, i_max, coefficients, max_crossings)
            for length in range(1, L + 1)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            per_l = list(pool.map(_prefix_ranks, jobs))
    else:
        per_l = [_prefix_ranks(job) for job in jobs]
    keys = sorted({k for ranks in per_l for k in ranks})
    return {k: [ranks.get(k, 0) for ranks in per_l] for k in keys}


def stabilization_homology_report(spec: InfiniteBraidSpec, closure: ClosureSpec | None, L: int,
                                  i_max: int, coefficients: str = "q", margin: int = 2,
                                  max_crossings: int = DEFAULT_MAX_CROSSINGS,
                                  threads: int = 1) -> dict:
    """
    Per-(i, j) stabilization of normalized homology for the prefixes of ``spec`` and of the
    torus braid on the same strands with the same closure. An entry counts as stabilized when it
    has been constant for at least ``margin`` + 1 consecutive prefix lengths ending at L. The
    verdict is "match" when every entry of both tables is stabilized and the values agree.
    """
    closure = closure or ClosureSpec.trace()
    if L < 1:
        raise ValueError("L must be positive")
    torus = InfiniteBraidSpec.torus(spec.n)
    tables = {}
    for name, s in (("braid", spec), ("torus", torus)):
        series = homology_table(s, closure, L, i_max, coefficients, max_crossings, threads)
        tables[name] = {"series": series, "stability": _stability(series, L)}
    keys = sorted(set(tables["braid"]["series"]) | set(tables["torus"]["series"]))
    rows = []
    ok = True
    for key in keys:
        entry = {"i": key[0], "j": key[1]}
        for name in ("braid", "torus"):
            st = tables[name]["stability"].get(key, {"l_star": 1, "value": 0})
            stable = st["l_star"] <= L - margin
            entry[name] = {"l_star": st["l_star"], "value": st["value"], "stable": stable}
            ok = ok and stable
        entry["match"] = entry["braid"]["value"] == entry["torus"]["value"]
        ok = ok and entry["match"]
        rows.append(entry)
    d = find_diagonals(prefix(spec, L), skip=min(len(spec.prefix), L))
    return {
        "spec": spec.to_json(),
        "closure": closure.to_json(),
        "L": L,
        "i_max": i_max,
        "coefficients": coefficients,
        "y": d.y,
        "complete": is_complete(spec),
        "rows": rows,
        "series": {name: {f"{i},{j}": v for (i, j), v in tables[name]["series"].items()}
                   for name in tables},
        "verdict": "match" if ok else "mismatch",
    }


# -- the min-q formula -------------------------------------------------------------------------

def minq_check(t: MixedTangle, ledger: ShiftLedger, closure: ClosureSpec | None = None,
               r: int | None = None, y: int | None = None,
               max_crossings: int = DEFAULT_MAX_CROSSINGS) -> dict:
    """
    Compare the minimal q-degree of the generators of h^{n^-+1+s_h} q^{-N+1+r+s_q} KC(closure of
    t) with 1 + r + s_q - #(all-zero circles), and check the lower bound y - c where c is the
    number of local maxima of the closure. ``t`` is a tangle produced by ``pull_turnbacks``;
    ``r`` defaults to the number of extra 1-resolutions, t.r - 1.
    """
    closure = closure or ClosureSpec.trace()
    if r is None:
        r = t.r - 1
    link = close(t, closure)
    cx = chain_complex(link, max_crossings)
    computed = 1 + r + ledger.s_q + cx.min_normalized_q()
    circles = all_zero_circles(link)
    formula = 1 + r + ledger.s_q - circles
    c = closure.local_maxima(t.n)
    bound_ok = None if y is None else formula >= y - c
    return {
        "computed_min_q": computed,
        "formula_min_q": formula,
        "all_zero_circles": circles,
        "equal": computed == formula,
        "closure_maxima": c,
        "y": y,
        "bound_holds": bound_ok,
    }
