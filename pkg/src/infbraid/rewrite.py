"""
Multicone terms and turnback pulling.

A ``MixedTangle`` is a braid-like diagram read top to bottom, made of right-handed crossings
("X", i) and turnbacks ("T", i), the latter being the diagram e_i inserted as a slice. Resolving the
non-diagonal crossings of a right-handed word yields such tangles; ``pull_turnbacks`` then removes
crossings by sliding turnbacks through the diagonals.

Moves are performed on the slice word. With turnback e_i directly above the letters involved:

    R1 (negative):  e_i s_i          -> e_i
    R2:             e_i s_{i+-1} s_i -> e_i e_{i+-1}

and upward pulls use the same rules on the diagram rotated by a half turn (word reversed, indices
i -> n - i). Far commutation and the braid relation s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1} are used
to bring letters into position; they are isotopies and cost nothing.

Every removed crossing pair changes the raw bracket by the same factor: with the right-handed rule
<X> = q I - q^2 e for every crossing, an R1 or an R2 multiplies the bracket of the smaller diagram by
-q^3. Hence bracket(before) = (-q^3)^s_h * bracket(after), which is the normalized statement
q^-c <D> = (-1)^s_h q^s_q q^-c' <D'> with s_h = #R2 + #R1 and s_q = #R2 + 2 #R1.
"""

from __future__ import annotations

import bisect
import itertools
import random
from collections import deque
from dataclasses import dataclass, field

from .braid import DiagonalSet, find_diagonals, non_diagonal_positions
from .bracket import BraidWord, letter_bracket
from .ring import LaurentPoly
from .tl import TLElement, tl_mul

CROSS, TURNBACK = "X", "T"


class RewriteError(RuntimeError):
    """The rewrite engine could not meet its postconditions (a bug, not a valid outcome)."""


@dataclass(frozen=True)
class MixedTangle:
    """
    ``slices`` are (kind, i) pairs; ``r`` counts the 1-resolutions that produced the tangle from
    its word; ``diagonal`` optionally gives, per slice, the id of the diagonal a crossing belongs
    to (-1 for turnbacks and non-diagonal crossings).
    """

    n: int
    slices: tuple[tuple[str, int], ...]
    r: int = 1
    diagonal: tuple[int, ...] | None = None

    def __post_init__(self):
        slices = tuple((str(k), int(i)) for k, i in self.slices)
        for k, i in slices:
            if k not in (CROSS, TURNBACK):
                raise ValueError(f"unknown slice kind {k!r}")
            if not 1 <= i <= self.n - 1:
                raise ValueError(f"slice index {i} out of range for {self.n} strands")
        object.__setattr__(self, "slices", slices)
        if self.diagonal is not None and len(self.diagonal) != len(slices):
            raise ValueError("diagonal labels must align with slices")

    @property
    def crossings(self) -> int:
        return sum(1 for k, _ in self.slices if k == CROSS)

    @property
    def turnbacks(self) -> int:
        return sum(1 for k, _ in self.slices if k == TURNBACK)

    def diagonal_count(self) -> int:
        if self.diagonal is not None:
            return len({d for d in self.diagonal if d >= 0})
        return len(_infer_diagonals(self))

    def to_json(self) -> dict:
        return {"n": self.n, "slices": [[k, i] for k, i in self.slices], "r": self.r}

    def __str__(self) -> str:
        return " ".join(("s" if k == CROSS else "e") + str(i) for k, i in self.slices)


@dataclass
class ShiftLedger:
    s_h: int = 0
    s_q: int = 0
    moves: list[dict] = field(default_factory=list)

    def record(self, kind: str, at: int, turnback: int) -> None:
        self.moves.append({"move": kind, "at": at, "turnback": turnback})
        if kind == "R2":
            self.s_h += 1
            self.s_q += 1
        elif kind == "R1-":
            self.s_h += 1
            self.s_q += 2

    def recomputed(self) -> tuple[int, int]:
        r2 = sum(1 for m in self.moves if m["move"] == "R2")
        r1 = sum(1 for m in self.moves if m["move"] == "R1-")
        return shift_of_moves(r2, r1)

    def count(self, kind: str) -> int:
        return sum(1 for m in self.moves if m["move"] == kind)

    def to_json(self) -> dict:
        return {"s_h": self.s_h, "s_q": self.s_q, "moves": list(self.moves)}


def shift_of_moves(r2: int, r1neg: int) -> tuple[int, int]:
    """(s_h, s_q) accumulated by ``r2`` R2 moves and ``r1neg`` negative R1 moves."""
    if r2 < 0 or r1neg < 0:
        raise ValueError("move counts must be non-negative")
    return r2 + r1neg, r2 + 2 * r1neg


# -- multicone terms ---------------------------------------------------------------------------

def _bottom_up(w: BraidWord, d: DiagonalSet) -> list[int]:
    return sorted(non_diagonal_positions(w, d), reverse=True)


def _diag_ids(w: BraidWord, d: DiagonalSet) -> dict[int, int]:
    return {p: k for k, diag in enumerate(d.diagonals) for p in diag}


def multicone_term(w: BraidWord, d: DiagonalSet, i: int) -> MixedTangle:
    """
    T_i: the non-diagonal crossings below the i-th one (counted from the bottom) are 0-resolved
    and dropped, the i-th becomes a turnback, everything above is left as it was.
    """
    if not w.is_right_handed():
        raise ValueError("multicone terms need a right-handed word")
    order = _bottom_up(w, d)
    if not 1 <= i <= len(order):
        raise ValueError(f"index {i} out of range: {len(order)} non-diagonal crossings")
    chosen = order[i - 1]
    dropped = set(order[: i - 1])
    ids = _diag_ids(w, d)
    slices, labels = [], []
    for p, (k, _) in enumerate(w.letters):
        if p in dropped or p < d.skip:
            continue
        slices.append((TURNBACK if p == chosen else CROSS, k))
        labels.append(ids.get(p, -1))
    return MixedTangle(w.n, tuple(slices), 1, tuple(labels))


def multicone_terms(w: BraidWord, d: DiagonalSet, i: int, limit: int | None = None):
    """
    The diagrams D of the multicone expansion of T_i: each remaining non-diagonal crossing above
    the chosen one is resolved either way. Yields MixedTangles with r = 1 + (number of extra
    1-resolutions), containing only diagonal crossings and turnbacks.
    """
    order = _bottom_up(w, d)
    if not 1 <= i <= len(order):
        raise ValueError(f"index {i} out of range: {len(order)} non-diagonal crossings")
    chosen = order[i - 1]
    above = sorted(order[i:])
    ids = _diag_ids(w, d)
    count = 0
    for bits in itertools.product((0, 1), repeat=len(above)):
        ones = {p for p, b in zip(above, bits) if b}
        slices, labels = [], []
        for p, (k, _) in enumerate(w.letters):
            if p < d.skip:
                continue
            if p in ids:
                slices.append((CROSS, k))
                labels.append(ids[p])
            elif p == chosen or p in ones:
                slices.append((TURNBACK, k))
                labels.append(-1)
        yield MixedTangle(w.n, tuple(slices), 1 + len(ones), tuple(labels))
        count += 1
        if limit is not None and count >= limit:
            return


def mixed_bracket(t: MixedTangle) -> TLElement:
    """Bracket of the slice diagram with the right-handed crossing rule for every crossing."""
    x = TLElement.identity(t.n)
    for k, i in t.slices:
        x = tl_mul(x, letter_bracket(t.n, i, 1) if k == CROSS else TLElement.e(t.n, i))
    return x


def ledger_monomial(ledger: ShiftLedger) -> LaurentPoly:
    """(-q^3)^s_h: the factor relating mixed brackets before and after the recorded moves."""
    return LaurentPoly.q(3 * ledger.s_h, (-1) ** ledger.s_h)


def _infer_diagonals(t: MixedTangle) -> tuple[tuple[int, ...], ...]:
    pos = [p for p, (k, _) in enumerate(t.slices) if k == CROSS]
    w = BraidWord(t.n, tuple((t.slices[p][1], 1) for p in pos))
    d = find_diagonals(w)
    return tuple(tuple(pos[j] for j in diag) for diag in d.diagonals)


# -- the rewrite engine ------------------------------------------------------------------------

class _Engine:
    """
    Mutable working copy of a slice word. Each slice is [kind, index, tag]; turnback tags are
    unique so schedules can follow particular turnbacks while the word changes around them.
    """

    def __init__(self, t: MixedTangle, ledger: ShiftLedger, r3_budget: int, window: int):
        self.n = t.n
        self.s = [[k, i, -1] for k, i in t.slices]
        self.next_tag = 0
        for sl in self.s:
            if sl[0] == TURNBACK:
                sl[2] = self._fresh()
        self.ledger = ledger
        self.r3_budget = r3_budget
        self.window = window
        self.flipped = False

    def _fresh(self) -> int:
        self.next_tag += 1
        return self.next_tag

    def index_of(self, tag: int) -> int:
        for p, sl in enumerate(self.s):
            if sl[0] == TURNBACK and sl[2] == tag:
                return p
        raise RewriteError(f"turnback {tag} vanished")

    def rotate(self) -> None:
        """Turn the diagram by a half turn: reverse the word and send i to n - i."""
        self.s = [[k, self.n - i, tag] for k, i, tag in reversed(self.s)]
        self.flipped = not self.flipped

    def _report_at(self, p: int) -> int:
        return len(self.s) - 1 - p if self.flipped else p

    # finding a reduction below the turnback at position t

    @staticmethod
    def _reduction(s, t: int):
        """
        ("R1-", k) if s_i at k can be brought up against the turnback e_i at t, or
        ("R2", k1, k2) if letters can be shuffled into e_i s_j s_i with j = i +- 1. Letters between
        the turnback and s_j must commute with e_i (they are moved above it); letters between
        s_j and s_i must commute with s_i (they are moved below it).
        """
        i = s[t][1]
        for k in range(t + 1, len(s)):
            if abs(s[k][1] - i) >= 2:
                continue
            if s[k][0] == CROSS and s[k][1] == i:
                return ("R1-", k)
            break
        for k1 in range(t + 1, len(s)):
            kind, j = s[k1][0], s[k1][1]
            if kind == CROSS and abs(j - i) == 1:
                for k2 in range(k1 + 1, len(s)):
                    if s[k2][0] == CROSS and s[k2][1] == i:
                        return ("R2", k1, k2)
                    if abs(s[k2][1] - i) < 2:
                        break
            if abs(j - i) < 2:
                break
        return None

    def _apply(self, red, t: int, moving_tag: int) -> int:
        """Apply a reduction; return the new position of the turnback that keeps moving down."""
        s = self.s
        if red[0] == "R1-":
            k = red[1]
            self.ledger.record("R1-", self._report_at(k), moving_tag)
            del s[k]
            return t
        _, k1, k2 = red
        self.ledger.record("R2", self._report_at(k2), moving_tag)
        upper = [TURNBACK, s[t][1], self._fresh()]
        lower = [TURNBACK, s[k1][1], moving_tag]
        raised = s[t + 1:k1]
        self.s = s[:t] + raised + [upper, lower] + s[k1 + 1:k2] + s[k2 + 1:]
        return t + len(raised) + 1

    def _search_r3(self, t: int):
        """
        Breadth-first search over commutations and braid relations inside a window below the
        turnback at ``t`` for a word admitting an R1 or R2 reduction. Returns (new word, number
        of braid relations used) or None.
        """
        start = tuple(tuple(x) for x in self.s)
        lo, hi = t + 1, min(len(start), t + 1 + self.window)
        seen = {start[lo:hi]}
        queue = deque([(start[lo:hi], 0)])
        expanded = 0
        while queue and expanded < self.r3_budget:
            seg, r3 = queue.popleft()
            expanded += 1
            for p in range(len(seg) - 1):
                a, b = seg[p], seg[p + 1]
                if abs(a[1] - b[1]) >= 2:
                    nxt = seg[:p] + (b, a) + seg[p + 2:]
                    if nxt not in seen:
                        seen.add(nxt)
                        cand = self._test(start, lo, hi, nxt)
                        if cand:
                            return cand, r3
                        queue.append((nxt, r3))
            for p in range(len(seg) - 2):
                a, b, c = seg[p], seg[p + 1], seg[p + 2]
                if (a[0] == b[0] == c[0] == CROSS and a[1] == c[1] and abs(a[1] - b[1]) == 1):
                    nxt = seg[:p] + ((CROSS, b[1], -1), (CROSS, a[1], -1), (CROSS, b[1], -1)) + seg[p + 3:]
                    if nxt not in seen:
                        seen.add(nxt)
                        cand = self._test(start, lo, hi, nxt)
                        if cand:
                            return cand, r3 + 1
                        queue.append((nxt, r3 + 1))
        return None

    def _test(self, start, lo, hi, seg):
        word = [list(x) for x in start[:lo] + seg + start[hi:]]
        return word if self._reduction(word, lo - 1) else None

    def pull_down(self, tag: int) -> int:
        """Pull the turnback ``tag`` downward as far as reductions allow; return moves made."""
        made = 0
        t = self.index_of(tag)
        while True:
            red = self._reduction(self.s, t)
            if red is None:
                found = self._search_r3(t)
                if found is None:
                    break
                self.s, r3 = found
                for _ in range(r3):
                    self.ledger.record("R3", self._report_at(t + 1), tag)
                red = self._reduction(self.s, t)
            t = self._apply(red, t, tag)
            made += 1
        return made

    def pull_up(self, tag: int) -> int:
        self.rotate()
        try:
            return self.pull_down(tag)
        finally:
            self.rotate()

    def tangle(self, r: int) -> MixedTangle:
        return MixedTangle(self.n, tuple((k, i) for k, i, _ in self.s), r)


def _zones(t: MixedTangle) -> list[int]:
    """Zone number of every slice: how many diagonals end strictly above it."""
    if t.diagonal is not None:
        ends: dict[int, int] = {}
        for p, d in enumerate(t.diagonal):
            if d >= 0:
                ends[d] = max(ends.get(d, p), p)
        last = sorted(ends.values())
    else:
        last = sorted(max(d) for d in _infer_diagonals(t))
    return [bisect.bisect_left(last, p) for p in range(len(t.slices))]


def pull_turnbacks(t: MixedTangle, y: int | None = None, schedule: str = "zones",
                   r3_budget: int = 4000, window: int | None = None) -> tuple[MixedTangle, ShiftLedger]:
    """
    Simplify ``t`` by pulling turnbacks through its diagonals.

    ``schedule="zones-strict"``: from the topmost non-empty zone take the bottommost turnback and
    pull it down; continue with the bottommost turnback of each lower non-empty zone; finally pull
    the topmost turnback upward. ``schedule="greedy"`` keeps applying any reduction at any
    turnback, in either direction, until none is left. The default ``"zones"`` runs the strict
    schedule and then the greedy pass, so the log starts with the zone-ordered moves.

    Raises RewriteError if fewer than ``y`` R1/R2 moves were made.
    """
    if t.turnbacks == 0:
        raise ValueError("pull_turnbacks needs at least one turnback")
    if y is None:
        y = t.diagonal_count()
    ledger = ShiftLedger()
    eng = _Engine(t, ledger, r3_budget, window if window is not None else 3 * t.n)
    if schedule not in ("zones", "zones-strict", "greedy"):
        raise ValueError(f"unknown schedule {schedule!r}")
    if schedule in ("zones", "zones-strict"):
        zones = _zones(t)
        by_zone: dict[int, list[int]] = {}
        for p, sl in enumerate(eng.s):
            if sl[0] == TURNBACK:
                by_zone.setdefault(zones[p], []).append(sl[2])
        nonempty = sorted(by_zone)
        for z in nonempty:
            # bottommost turnback; ties cannot occur since slices are totally ordered
            eng.pull_down(by_zone[z][-1])
        # back in the starting zone, the topmost turnback goes up
        eng.pull_up(next(sl[2] for sl in eng.s if sl[0] == TURNBACK))
    if schedule in ("zones", "greedy"):
        progress = True
        while progress:
            progress = False
            for sl in list(eng.s):
                if sl[0] != TURNBACK:
                    continue
                if eng.pull_down(sl[2]) or eng.pull_up(sl[2]):
                    progress = True
                    break
    out = eng.tangle(t.r)
    if ledger.recomputed() != (ledger.s_h, ledger.s_q):
        raise RewriteError("ledger totals disagree with the move log")
    if ledger.s_h < y:
        raise RewriteError(f"only {ledger.s_h} crossing-removing moves for {y} diagonals: {t}")
    return out, ledger


def rewrite_corpus(count: int, seed: int, max_n: int = 4, max_len: int = 14, per_word: int = 8):
    """
    Deterministic corpus of multicone diagrams D from random right-handed words: yields
    (word, diagonals, i, D). Words are drawn with ``random.Random(seed)``.
    """
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        n = rng.randint(2, max_n)
        length = rng.randint(n - 1, max_len)
        w = BraidWord.from_ints(n, [rng.randint(1, n - 1) for _ in range(length)])
        d = find_diagonals(w)
        nd = non_diagonal_positions(w, d)
        if not nd:
            continue
        terms = []
        for i in range(1, len(nd) + 1):
            for D in multicone_terms(w, d, i):
                terms.append((i, D))
        rng.shuffle(terms)
        for i, D in terms[:per_word]:
            yield w, d, i, D
            produced += 1
            if produced >= count:
                return
