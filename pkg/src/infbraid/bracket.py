"""
Kauffman bracket of braid words with values in TL_n over Laurent polynomials.

Crossing rules (0-resolution of sigma_i is the vertical smoothing, of its inverse the turnback):

    <sigma_i>    = q I - q^2 e_i
    <sigma_i^-1> = q^-1 I - q^-2 e_i

Both rules leave the bracket unchanged under all braid relations, including sigma_i sigma_i^-1 = 1.
The normalized bracket multiplies by (-1)^n_minus q^-N with N = n_plus - 2 n_minus; per letter that
is I - q e_i for sigma_i and e_i - q I for sigma_i^-1.
"""

from __future__ import annotations

import functools
import random
import re
from dataclasses import dataclass, field

from .ring import LaurentPoly
from .tl import TLElement, tl_mul


class WordParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at character {position})")
        self.position = position


@dataclass(frozen=True)
class BraidWord:
    """A braid word on ``n`` strands; letters are (index, sign), read top to bottom."""

    n: int
    letters: tuple[tuple[int, int], ...] = ()
    n_plus: int = field(init=False, compare=False)
    n_minus: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a braid needs at least one strand")
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if not 1 <= i <= self.n - 1:
                raise ValueError(f"generator index {i} out of range for {self.n} strands")
            if s not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "n_plus", sum(1 for _, s in letters if s > 0))
        object.__setattr__(self, "n_minus", sum(1 for _, s in letters if s < 0))

    @classmethod
    def from_ints(cls, n: int, ints) -> BraidWord:
        return cls(n, tuple((abs(k), 1 if k > 0 else -1) for k in ints))

    @classmethod
    def parse(cls, n: int, text: str) -> BraidWord:
        """Parse whitespace/comma separated signed integers: k is sigma_k, -k its inverse."""
        ints = []
        for m in re.finditer(r"[^\s,]+", text):
            tok = m.group()
            if not re.fullmatch(r"[+-]?\d+", tok) or int(tok) == 0:
                raise WordParseError(f"bad letter {tok!r}", m.start())
            k = int(tok)
            if abs(k) > n - 1:
                raise WordParseError(f"letter {tok} out of range for {n} strands", m.start())
            ints.append(k)
        return cls.from_ints(n, ints)

    @property
    def N(self) -> int:
        return self.n_plus - 2 * self.n_minus

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: BraidWord) -> BraidWord:
        if self.n != other.n:
            raise ValueError("strand mismatch")
        return BraidWord(self.n, self.letters + other.letters)

    def is_right_handed(self) -> bool:
        return self.n_minus == 0

    def to_ints(self) -> list[int]:
        return [i * s for i, s in self.letters]

    def __str__(self) -> str:
        return " ".join(str(k) for k in self.to_ints())


@functools.lru_cache(maxsize=None)
def letter_bracket(n: int, i: int, sign: int) -> TLElement:
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range for {n} strands")
    if sign == 1:
        a, b = LaurentPoly.q(1), LaurentPoly.q(2, -1)
    elif sign == -1:
        a, b = LaurentPoly.q(-1), LaurentPoly.q(-2, -1)
    else:
        raise ValueError(f"letter sign must be +1 or -1, got {sign}")
    return TLElement.identity(n).scale(a) + TLElement.e(n, i).scale(b)


@functools.lru_cache(maxsize=None)
def normalized_letter_bracket(n: int, i: int, sign: int) -> TLElement:
    if sign == 1:
        a, b = LaurentPoly.one(), LaurentPoly.q(1, -1)
    else:
        a, b = LaurentPoly.q(1, -1), LaurentPoly.one()
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range for {n} strands")
    return TLElement.identity(n).scale(a) + TLElement.e(n, i).scale(b)


def bracket(w: BraidWord) -> TLElement:
    """Left-to-right fold of letter brackets; the state never exceeds Catalan(n) terms."""
    x = TLElement.identity(w.n)
    for i, s in w.letters:
        x = tl_mul(x, letter_bracket(w.n, i, s))
    return x


def normalized_bracket(w: BraidWord) -> TLElement:
    x = TLElement.identity(w.n)
    for i, s in w.letters:
        x = tl_mul(x, normalized_letter_bracket(w.n, i, s))
    return x


def normalized_brackets(w: BraidWord):
    """Yield the normalized bracket of every prefix of ``w``, starting with the empty prefix."""
    x = TLElement.identity(w.n)
    yield x
    for i, s in w.letters:
        x = tl_mul(x, normalized_letter_bracket(w.n, i, s))
        yield x


# -- braid relations --------------------------------------------------------------------------

def relation_sites(w: BraidWord) -> list[tuple[str, int]]:
    """All places where a braid relation can be applied to ``w`` (kind, position)."""
    L = w.letters
    sites = []
    for p in range(len(L) - 1):
        (i, s), (j, t) = L[p], L[p + 1]
        if abs(i - j) >= 2:
            sites.append(("commute", p))
        if i == j and s == -t:
            sites.append(("cancel", p))
    for p in range(len(L) - 2):
        (i, s), (j, t), (k, u) = L[p], L[p + 1], L[p + 2]
        if i == k and abs(i - j) == 1 and s == t == u:
            sites.append(("braid", p))
    for p in range(len(L) + 1):
        sites.append(("insert", p))
    return sites


def apply_relation(w: BraidWord, kind: str, p: int, rng: random.Random | None = None) -> BraidWord:
    L = list(w.letters)
    if kind == "commute":
        L[p], L[p + 1] = L[p + 1], L[p]
    elif kind == "cancel":
        del L[p:p + 2]
    elif kind == "braid":
        (i, s), (j, _) = L[p], L[p + 1]
        L[p:p + 3] = [(j, s), (i, s), (j, s)]
    elif kind == "insert":
        rng = rng or random.Random(0)
        i = rng.randint(1, w.n - 1)
        s = rng.choice((1, -1))
        L[p:p] = [(i, s), (i, -s)]
    else:
        raise ValueError(f"unknown relation {kind!r}")
    return BraidWord(w.n, tuple(L))


def random_word(n: int, length: int, rng: random.Random, negative_rate: float = 0.3) -> BraidWord:
    letters = tuple((rng.randint(1, n - 1), -1 if rng.random() < negative_rate else 1)
                    for _ in range(length))
    return BraidWord(n, letters)


def check_braid_relations(n: int, trials: int, seed: int, max_len: int = 8) -> dict:
    """
    Apply ``trials`` random braid relations to random words and compare brackets exactly.

    Returns a report whose ``failures`` list must be empty.
    """
    rng = random.Random(seed)
    failures = []
    counts: dict[str, int] = {}
    for t in range(trials):
        w = random_word(n, rng.randint(0, max_len), rng)
        sites = relation_sites(w)
        # prefer genuine rewrites over bare insertion when available
        genuine = [s for s in sites if s[0] != "insert"]
        kind, p = rng.choice(genuine if genuine and rng.random() < 0.75 else sites)
        v = apply_relation(w, kind, p, rng)
        counts[kind] = counts.get(kind, 0) + 1
        if bracket(w) != bracket(v):
            failures.append({"trial": t, "word": w.to_ints(), "rewritten": v.to_ints(), "move": kind})
    return {"n": n, "trials": trials, "seed": seed, "moves": counts, "failures": failures}
