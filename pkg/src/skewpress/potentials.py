"""Locally constant potentials: ergodic-sum bounds, normalization, approximants.

A memory-k potential reads the first k coordinates; its value table is keyed
by the admissible k-letter words.  Ergodic sums over an n-cylinder are then
determined except for the last k-1 terms, whose extremes over admissible
continuations give exact sup/inf bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError
from .shifts import Shift, Word
from .transfer import build_transfer, leading_eigenpair


@dataclass(frozen=True, eq=False)
class Potential:
    """Memory-k potential with one value per admissible k-word."""

    memory: int
    values: dict[Word, float]

    def __post_init__(self) -> None:
        if self.memory < 1:
            raise InputError("memory must be >= 1")
        clean: dict[Word, float] = {}
        for w, v in self.values.items():
            w = tuple(int(x) for x in w)
            if len(w) != self.memory:
                raise InputError(f"key {w} does not have length {self.memory}")
            v = float(v)
            if not math.isfinite(v):
                raise InputError(f"value at {w} must be finite, got {v}")
            clean[w] = v
        if not clean:
            raise InputError("value table is empty")
        object.__setattr__(self, "values", clean)

    def validate_against(self, shift: Shift) -> None:
        expected = set(shift.words(self.memory))
        got = set(self.values)
        if got != expected:
            missing = sorted(expected - got)[:3]
            extra = sorted(got - expected)[:3]
            raise InputError(
                "value table must cover exactly the admissible words: "
                f"missing {missing}, extraneous {extra}"
            )

    def __call__(self, window: Sequence[int]) -> float:
        w = tuple(window)[: self.memory]
        if w not in self.values:
            raise InputError(f"window {w} is not in the value table")
        return self.values[w]

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def zero(shift: Shift) -> "Potential":
        return Potential(1, {(i,): 0.0 for i in shift.letters})

    @staticmethod
    def memory_one(values: Mapping[int, float]) -> "Potential":
        return Potential(1, {(int(i),): float(v) for i, v in values.items()})

    @staticmethod
    def constant(shift: Shift, c: float) -> "Potential":
        return Potential(1, {(i,): float(c) for i in shift.letters})

    def shifted(self, c: float) -> "Potential":
        return Potential(self.memory, {w: v + c for w, v in self.values.items()})


def lambda_potential(lam: float) -> Potential:
    """Biased letter potential on the full 2-shift: letter 1 carries +lam,
    letter 2 carries -lam (the letters stand for the steps +1 and -1)."""
    return Potential.memory_one({1: lam, 2: -lam})


def restrict_potential(
    pot: Potential, sub_shift: Shift, letter_map: Mapping[int, int]
) -> Potential:
    """Value table of a potential on a sub-alphabet shift.

    letter_map sends the sub-shift's letters to the original ones, as
    returned by Shift.restrict.
    """
    values = {}
    for w in sub_shift.words(pot.memory):
        orig = tuple(letter_map[letter] for letter in w)
        values[w] = pot.values[orig]
    return Potential(pot.memory, values)


# ---------------------------------------------------------------------------
# ergodic sums over cylinders


def ergodic_sum_bounds(shift: Shift, pot: Potential, word: Sequence[int]):
    """Exact (inf, sup) of S_n phi over the cylinder of an admissible word.

    The sum of the n window terms is split into the part determined by the
    word and the boundary part depending on the next k-1 letters; the
    boundary extremes are taken over all admissible continuations.
    """
    w = shift.require_admissible(word)
    pot.validate_against(shift)
    n = len(w)
    k = pot.memory
    det = 0.0
    for t in range(0, max(n - k + 1, 0)):
        det += pot.values[w[t : t + k]]
    tail = min(k - 1, n)  # number of window terms reaching past the word
    if tail == 0:
        return det, det
    lo, hi = _tail_extremes(shift, pot, w, tail)
    return det + lo, det + hi


def _tail_extremes(shift: Shift, pot: Potential, w: Word, tail: int):
    k = pot.memory
    best = [np.inf, -np.inf]

    def rec(ext: Word, remaining: int) -> None:
        if remaining == 0:
            full = w + ext
            acc = 0.0
            start = max(len(w) - k + 1, 0)
            for t in range(start, len(w)):
                acc += pot.values[full[t : t + k]]
            best[0] = min(best[0], acc)
            best[1] = max(best[1], acc)
            return
        last = (w + ext)[-1]
        for j in shift.successors(last):
            rec(ext + (j,), remaining - 1)

    rec((), k - 1)
    return best[0], best[1]


def variation_factor(shift: Shift, pot: Potential, n: int) -> float:
    """D_n = max over n-cylinders of e^(sup S_n - inf S_n)."""
    worst = 0.0
    for w in shift.words(n):
        lo, hi = ergodic_sum_bounds(shift, pot, w)
        worst = max(worst, math.exp(hi - lo))
    return worst


# ---------------------------------------------------------------------------
# normalization


@dataclass(frozen=True, eq=False)
class Normalization:
    potential: Potential  # the normalized potential, memory max(k, 2)
    pressure: float
    eigenfunction: dict[Word, float]  # per recoded block state, max value 1


def normalize(shift: Shift, pot: Potential) -> Normalization:
    """Subtract pressure and the eigenfunction coboundary.

    Returns phi~ = phi + log h - log h(next block) - P, where h solves the
    transfer eigenproblem at the leading eigenvalue e^P.  The weights of the
    normalized potential then sum to 1 over the predecessors of every state.
    """
    shift.require_mixing()
    ts = build_transfer(shift, pot)
    eig = leading_eigenpair(ts.matrix)
    pressure = math.log(eig.value)
    h = eig.left / eig.left.max()
    log_h = np.log(h)
    values: dict[Word, float] = {}
    for t in ts.transitions:
        word = ts.states[t.source] + (t.letter,)
        values[word] = t.exponent + log_h[t.source] - log_h[t.target] - pressure
    normalized = Potential(ts.lifted_memory, values)
    eigenfunction = {ts.states[i]: float(h[i]) for i in range(len(ts.states))}
    return Normalization(normalized, pressure, eigenfunction)


# ---------------------------------------------------------------------------
# cylinder-bounded potentials and their approximants


@dataclass(frozen=True, eq=False)
class CylinderBoundedPotential:
    """Depth-indexed (inf, sup) bounds of a potential over cylinders.

    bounds[j][w] is the pair of extremes of phi over the depth-j cylinder of
    the admissible word w, for 1 <= j <= depth_cap.  Deeper cylinders must
    nest: bounds can only tighten along extensions.
    """

    shift: Shift
    depth_cap: int
    bounds: dict[int, dict[Word, tuple[float, float]]]

    def __post_init__(self) -> None:
        if self.depth_cap < 1:
            raise InputError("depth_cap must be >= 1")
        for j in range(1, self.depth_cap + 1):
            if j not in self.bounds:
                raise InputError(f"missing bound table at depth {j}")
            table = self.bounds[j]
            expected = set(self.shift.words(j))
            if set(table) != expected:
                raise InputError(f"depth-{j} table must cover the admissible words")
            for w, (lo, hi) in table.items():
                if lo > hi:
                    raise InputError(f"inverted bounds at {w}: {lo} > {hi}")
                if j > 1:
                    plo, phi_ = self.bounds[j - 1][w[:-1]]
                    if lo < plo - 1e-12 or hi > phi_ + 1e-12:
                        raise InputError(
                            f"bounds at {w} do not nest inside depth {j - 1}"
                        )

    @staticmethod
    def from_potential(
        shift: Shift, pot: Potential, depth_cap: int
    ) -> "CylinderBoundedPotential":
        pot.validate_against(shift)
        k = pot.memory
        bounds: dict[int, dict[Word, tuple[float, float]]] = {}
        for j in range(1, depth_cap + 1):
            table: dict[Word, tuple[float, float]] = {}
            for w in shift.words(j):
                if j >= k:
                    v = pot.values[w[:k]]
                    table[w] = (v, v)
                else:
                    vals = [
                        pot.values[(w + ext)[:k]]
                        for ext in _completions(shift, w, k - j)
                    ]
                    table[w] = (min(vals), max(vals))
            bounds[j] = table
        return CylinderBoundedPotential(shift, depth_cap, bounds)

    def approximant(self, j: int) -> Potential:
        """Memory-j potential taking the depth-j cylinder infimum.

        The approximants increase pointwise in j and agree with the source
        potential once j reaches its memory.
        """
        if not 1 <= j <= self.depth_cap:
            raise InputError(f"depth {j} outside 1..{self.depth_cap}")
        return Potential(j, {w: lo for w, (lo, hi) in self.bounds[j].items()})

    def oscillation(self, j: int) -> float:
        """Largest sup - inf gap at depth j; nonincreasing in j."""
        if not 1 <= j <= self.depth_cap:
            raise InputError(f"depth {j} outside 1..{self.depth_cap}")
        return max(hi - lo for lo, hi in self.bounds[j].values())


def _completions(shift: Shift, w: Word, length: int):
    if length == 0:
        yield ()
        return
    for j in shift.successors(w[-1]):
        for rest in _completions(shift, w + (j,), length - 1):
            yield (j,) + rest
