"""Self-similar systems: ratios, generators, words and tile scales."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, DivergentSeries, InvalidWord
from .geometry2d import ConvexPolygon, polygon_area
from .steiner import SteinerRep, interval_rep, monophase_from_polygon

WORD_BUDGET = 10 ** 8
EQUAL_RATIO_TOL = 1e-14

Word = tuple  # letters in 1..J


@dataclass(frozen=True)
class GeneratorSpec:
    """One generator, given by exactly one of a polygon, an interval
    length (d = 1) or a ready-made Steiner representation."""

    polygon: Optional[ConvexPolygon] = None
    interval_length: Optional[float] = None
    steiner: Optional[SteinerRep] = None
    label: str = ""

    def __post_init__(self):
        given = sum(x is not None for x in (self.polygon, self.interval_length, self.steiner))
        if given != 1:
            raise ValueError("a generator needs exactly one of polygon, interval_length, steiner")

    @property
    def dimension(self) -> int:
        if self.polygon is not None:
            return 2
        if self.interval_length is not None:
            return 1
        return self.steiner.d

    def rep(self) -> SteinerRep:
        return self._rep

    @cached_property
    def _rep(self) -> SteinerRep:
        if self.steiner is not None:
            return self.steiner
        if self.polygon is not None:
            return monophase_from_polygon(self.polygon, label=self.label)
        return interval_rep(self.interval_length, label=self.label)

    def volume(self) -> float:
        if self.polygon is not None:
            return polygon_area(self.polygon)
        if self.interval_length is not None:
            return float(self.interval_length)
        return self.steiner.volume

    def inradius(self) -> float:
        return self.rep().g


@dataclass(frozen=True)
class SelfSimilarSystem:
    ratios: tuple
    dimension: int
    generators: tuple
    hull_volume: Optional[float] = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        ratios = tuple(float(r) for r in self.ratios)
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(ratios) < 2:
            raise ValueError("a self-similar system needs at least two maps")
        if not all(0 < r < 1 for r in ratios):
            raise ValueError("scaling ratios must lie in (0, 1)")
        if any(b > a for a, b in zip(ratios, ratios[1:])):
            raise ValueError("scaling ratios must be nonincreasing")
        if self.dimension not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        if sum(r ** self.dimension for r in ratios) >= 1:
            raise DivergentSeries("sum of r_j^d must be < 1 for finite total tile volume")
        if not self.generators:
            raise ValueError("at least one generator is required")
        for gen in self.generators:
            if gen.dimension != self.dimension:
                raise ValueError(f"generator {gen.label!r} has dimension {gen.dimension}, system has {self.dimension}")
        radii = [gen.inradius() for gen in self.generators]
        if any(b > a * (1 + 1e-12) for a, b in zip(radii, radii[1:])):
            raise ValueError("generator inradii must be nonincreasing")

    @property
    def J(self) -> int:
        return len(self.ratios)

    def equal_ratios(self) -> bool:
        return max(self.ratios) - min(self.ratios) <= EQUAL_RATIO_TOL

    def reps(self) -> list:
        return [gen.rep() for gen in self.generators]


def _check_word(sys: SelfSimilarSystem, w) -> None:
    for letter in w:
        if not (isinstance(letter, (int, np.integer)) and 1 <= letter <= sys.J):
            raise InvalidWord(f"letter {letter!r} is outside 1..{sys.J}")


def word_ratio(sys: SelfSimilarSystem, w: Sequence[int]) -> float:
    _check_word(sys, w)
    return math.prod(sys.ratios[i - 1] for i in w)


def tile_inradius(sys: SelfSimilarSystem, w: Sequence[int], q: int) -> float:
    """Inradius of the tile ``Phi_w(G_q)``; ``q`` is a 0-based generator index."""
    if not 0 <= q < len(sys.generators):
        raise IndexError(f"generator index {q} out of range")
    return word_ratio(sys, w) * sys.generators[q].inradius()


def _count_words(J: int, depth: int) -> int:
    return sum(J ** k for k in range(depth + 1))


def words_by_depth(sys: SelfSimilarSystem, depth: int, aggregate: Optional[bool] = None) -> Iterator:
    """Enumerate words up to ``depth``.

    Yields ``(word, ratio)`` pairs, or, in aggregated mode (the default
    when all ratios agree), ``(k, r**k, J**k)`` triples.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if aggregate is None:
        aggregate = sys.equal_ratios()
    if aggregate:
        if not sys.equal_ratios():
            raise ValueError("aggregation needs equal ratios")
        r = sys.ratios[0]
        return ((k, r ** k, sys.J ** k) for k in range(depth + 1))
    if _count_words(sys.J, depth) > WORD_BUDGET:
        raise BudgetExceeded(f"{_count_words(sys.J, depth)} words exceed the budget of {WORD_BUDGET}")
    return _explicit_words(sys, depth)


def _explicit_words(sys, depth):
    for k in range(depth + 1):
        for w in itertools.product(range(1, sys.J + 1), repeat=k):
            yield w, math.prod(sys.ratios[i - 1] for i in w)


def ratio_classes(ratios: Sequence[float], depth: int, budget: int = WORD_BUDGET):
    """Group words of each length by the ratio they produce.

    Words with the same letter counts share a ratio, so length ``k`` words
    collapse to the compositions of ``k`` over the distinct ratio values,
    weighted by multinomial counts.  Returns a list, one entry per length,
    of ``(ratios, multiplicities)`` arrays.
    """
    values, counts = _group_ratios(ratios)
    m = len(values)
    total = sum(math.comb(k + m - 1, m - 1) for k in range(depth + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} ratio classes exceed the budget of {budget}")
    out = []
    for k in range(depth + 1):
        comps = np.array(list(_compositions(k, m)), dtype=int).reshape(-1, m)
        rat = np.prod(values ** comps, axis=1)
        mult = np.array([_multinomial(c) for c in comps], dtype=float) * np.prod(counts ** comps, axis=1)
        out.append((rat, mult))
    return out


def _group_ratios(ratios):
    values, counts = [], []
    for r in sorted(ratios, reverse=True):
        if values and values[-1] - r <= EQUAL_RATIO_TOL:
            counts[-1] += 1
        else:
            values.append(float(r))
            counts.append(1)
    return np.array(values), np.array(counts, dtype=float)


def _compositions(n, parts):
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _multinomial(c):
    out = math.factorial(int(sum(c)))
    for x in c:
        out //= math.factorial(int(x))
    return out


def total_tiling_volume(sys: SelfSimilarSystem) -> float:
    s = sum(r ** sys.dimension for r in sys.ratios)
    if s >= 1:
        raise DivergentSeries("sum of r_j^d must be < 1")
    return sum(gen.volume() for gen in sys.generators) / (1.0 - s)
