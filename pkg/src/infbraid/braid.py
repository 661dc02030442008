"""
Semi-infinite braids, their partial braids, and diagonal finding.

A diagonal is a run of crossings sigma_1, sigma_2, ..., sigma_{n-1} found by scanning downward:
the first sigma_1, then the first sigma_2 below it, and so on. After a diagonal is completed the
scan walks back up from its sigma_{n-1} through the nearest earlier sigma_{n-2}, ..., sigma_1, and
the next diagonal starts at the first sigma_1 strictly below where that walk ended.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from typing import Sequence

from .bracket import BraidWord

KINDS = ("periodic", "random", "torus")


@dataclass(frozen=True)
class InfiniteBraidSpec:
    """
    Generator of a semi-infinite braid word.

    ``kind`` is "periodic" (repeat ``base``), "random" (letters drawn uniformly from
    sigma_1..sigma_{n-1} by ``random.Random(seed)``, i.e. CPython's MT19937) or "torus" (repeat
    sigma_1 ... sigma_{n-1}). ``prefix`` is an optional finite word of either sign placed first.
    """

    n: int
    kind: str = "torus"
    base: tuple[int, ...] = ()
    seed: int = 0
    prefix: tuple[int, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("infinite braids need at least two strands")
        if self.kind not in KINDS:
            raise ValueError(f"unknown braid kind {self.kind!r}; expected one of {KINDS}")
        base = tuple(int(k) for k in self.base)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "prefix", tuple(int(k) for k in self.prefix))
        if self.kind == "periodic":
            if not base:
                raise ValueError("periodic spec needs a non-empty base word")
            if any(not 1 <= k <= self.n - 1 for k in base):
                raise ValueError("periodic base must be right-handed letters 1..n-1")
        if any(k == 0 or abs(k) > self.n - 1 for k in self.prefix):
            raise ValueError("prefix letter out of range")

    @classmethod
    def torus(cls, n: int) -> InfiniteBraidSpec:
        return cls(n, "torus")

    @classmethod
    def periodic(cls, n: int, base: Sequence[int]) -> InfiniteBraidSpec:
        return cls(n, "periodic", tuple(base))

    @classmethod
    def seeded_random(cls, n: int, seed: int) -> InfiniteBraidSpec:
        return cls(n, "random", seed=seed)

    @classmethod
    def from_json(cls, obj: dict) -> InfiniteBraidSpec:
        return cls(
            n=int(obj["n"]),
            kind=obj.get("kind", "torus"),
            base=tuple(obj.get("base", ())),
            seed=int(obj.get("seed", 0)),
            prefix=tuple(obj.get("prefix", ())),
        )

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "kind": self.kind}
        if self.kind == "periodic":
            out["base"] = list(self.base)
        if self.kind == "random":
            out["seed"] = self.seed
        if self.prefix:
            out["prefix"] = list(self.prefix)
        return out

    def _tail_letters(self, count: int) -> list[int]:
        if self.kind == "torus":
            period = list(range(1, self.n))
            return [period[k % len(period)] for k in range(count)]
        if self.kind == "periodic":
            return [self.base[k % len(self.base)] for k in range(count)]
        cached = self._cache.get("random", [])
        if len(cached) < count:
            rng = random.Random(self.seed)
            cached = [rng.randint(1, self.n - 1) for _ in range(max(count, 2 * len(cached)))]
            self._cache["random"] = cached
        return cached[:count]


def prefix(spec: InfiniteBraidSpec, length: int) -> BraidWord:
    """The partial braid made of the first ``length`` letters."""
    if length < 0:
        raise ValueError("prefix length must be non-negative")
    head = list(spec.prefix[:length])
    head += spec._tail_letters(length - len(head))
    return BraidWord.from_ints(spec.n, head)


def is_complete(spec: InfiniteBraidSpec) -> bool:
    """Whether every sigma_i occurs infinitely often."""
    needed = set(range(1, spec.n))
    if spec.kind == "periodic":
        return needed <= set(spec.base)
    # torus by construction; uniform random letters have full support
    return True


@dataclass(frozen=True)
class DiagonalSet:
    diagonals: tuple[tuple[int, ...], ...]
    skip: int = 0

    @property
    def y(self) -> int:
        return len(self.diagonals)

    def z(self, n: int) -> int:
        return self.y // n

    def positions(self) -> set[int]:
        return {p for d in self.diagonals for p in d}

    def to_json(self, n: int) -> dict:
        return {"diagonals": [list(d) for d in self.diagonals], "y": self.y, "z": self.z(n)}


def find_diagonals(w: BraidWord, skip: int = 0) -> DiagonalSet:
    """
    Diagonals of ``w``, ignoring the first ``skip`` letters (a finite prefix of either sign).

    Raises ValueError if a left-handed letter occurs after the skipped prefix.
    """
    n = w.n
    idx = [i for i, _ in w.letters]
    for p in range(skip, len(w.letters)):
        if w.letters[p][1] < 0:
            raise ValueError(f"left-handed letter at position {p} outside the skipped prefix")
    # occurrence lists per generator, for nearest-before/first-after queries
    occ: dict[int, list[int]] = {k: [] for k in range(1, n)}
    for p in range(skip, len(idx)):
        occ[idx[p]].append(p)

    def first_after(k: int, p: int) -> int | None:
        lst = occ[k]
        j = bisect.bisect_right(lst, p)
        return lst[j] if j < len(lst) else None

    def last_before(k: int, p: int) -> int | None:
        lst = occ[k]
        j = bisect.bisect_left(lst, p)
        return lst[j - 1] if j > 0 else None

    diagonals = []
    start = skip - 1
    while True:
        cur = first_after(1, start)
        if cur is None:
            break
        diag = [cur]
        for k in range(2, n):
            cur = first_after(k, cur)
            if cur is None:
                break
            diag.append(cur)
        if len(diag) < n - 1:
            break
        diagonals.append(tuple(diag))
        back = diag[-1]
        for k in range(n - 2, 0, -1):
            back = last_before(k, back)
        start = back
    return DiagonalSet(tuple(diagonals), skip)


def non_diagonal_positions(w: BraidWord, d: DiagonalSet) -> list[int]:
    used = d.positions()
    return [p for p in range(d.skip, len(w.letters)) if p not in used]


def diagonal_counts(spec: InfiniteBraidSpec, lengths: Sequence[int]) -> list[dict]:
    """y(l) and z(l) for the given prefix lengths."""
    out = []
    for length in lengths:
        d = find_diagonals(prefix(spec, length), skip=min(len(spec.prefix), length))
        out.append({"length": length, "y": d.y, "z": d.z(spec.n)})
    return out
