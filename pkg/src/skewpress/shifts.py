"""Finite-alphabet Markov shifts: admissibility, word counting, mixing structure.

A shift is given by an alphabet {1, ..., m} and a 0/1 incidence matrix
a(i, j); a word (w_1, ..., w_n) is admissible when a(w_t, w_{t+1}) = 1 for
every consecutive pair.  Words are plain tuples of letters; a cylinder is
represented by its defining word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import InputError, PreconditionError

Word = tuple[int, ...]

# Hard guard for exhaustive enumeration; DP counting has no such limit.
_ENUMERATION_CAP = 50_000_000


@dataclass(frozen=True)
class MixingReport:
    irreducible: bool
    period: int
    topologically_mixing: bool
    # Finite alphabets always have big images and preimages; the witness set
    # is the full alphabet.
    bip_witness: tuple[int, ...]


@dataclass(frozen=True)
class Shift:
    """Subshift of finite type over letters 1..m.

    The incidence matrix is stored as a tuple of rows; successor and
    predecessor sets are mirrored into integer bitmasks (bit j-1 set on
    succ_mask[i-1] means the transition i -> j is allowed).
    """

    incidence: tuple[tuple[int, ...], ...]
    succ_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)
    pred_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = len(self.incidence)
        if m == 0:
            raise InputError("alphabet must be nonempty")
        for row in self.incidence:
            if len(row) != m:
                raise InputError("incidence matrix must be square")
            if any(v not in (0, 1) for v in row):
                raise InputError("incidence entries must be 0 or 1")
        succ = []
        pred = [0] * m
        for i, row in enumerate(self.incidence):
            mask = 0
            for j, v in enumerate(row):
                if v:
                    mask |= 1 << j
                    pred[j] |= 1 << i
            succ.append(mask)
        if any(s == 0 for s in succ):
            raise InputError("every letter needs at least one successor")
        if any(p == 0 for p in pred):
            raise InputError("every letter needs at least one predecessor")
        object.__setattr__(self, "succ_mask", tuple(succ))
        object.__setattr__(self, "pred_mask", tuple(pred))

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def from_matrix(rows: Sequence[Sequence[int]]) -> "Shift":
        return Shift(tuple(tuple(int(v) for v in row) for row in rows))

    @staticmethod
    def full(m: int) -> "Shift":
        if m < 1:
            raise InputError("full shift needs at least one letter")
        return Shift(tuple(tuple(1 for _ in range(m)) for _ in range(m)))

    @staticmethod
    def golden_mean() -> "Shift":
        """Two letters, the word (2, 2) forbidden."""
        return Shift.from_matrix([[1, 1], [1, 0]])

    # ------------------------------------------------------------------
    # basic queries

    @property
    def alphabet_size(self) -> int:
        return len(self.incidence)

    @property
    def letters(self) -> range:
        return range(1, len(self.incidence) + 1)

    def allows(self, i: int, j: int) -> bool:
        """Whether the two-letter word (i, j) is admissible."""
        self._check_letter(i)
        self._check_letter(j)
        return bool(self.succ_mask[i - 1] & (1 << (j - 1)))

    def successors(self, i: int) -> tuple[int, ...]:
        self._check_letter(i)
        mask = self.succ_mask[i - 1]
        return tuple(j + 1 for j in range(self.alphabet_size) if mask & (1 << j))

    def predecessors(self, j: int) -> tuple[int, ...]:
        self._check_letter(j)
        mask = self.pred_mask[j - 1]
        return tuple(i + 1 for i in range(self.alphabet_size) if mask & (1 << i))

    def _check_letter(self, i: int) -> None:
        if not isinstance(i, (int, np.integer)) or not 1 <= i <= self.alphabet_size:
            raise InputError(f"letter {i!r} outside alphabet 1..{self.alphabet_size}")

    def is_admissible(self, word: Sequence[int]) -> bool:
        w = tuple(word)
        if not w:
            raise InputError("the empty word has no admissibility status")
        for letter in w:
            self._check_letter(letter)
        return all(self.allows(a, b) for a, b in zip(w, w[1:]))

    def require_admissible(self, word: Sequence[int]) -> Word:
        w = tuple(int(v) for v in word)
        if not self.is_admissible(w):
            raise InputError(f"word {w} is not admissible")
        return w

    # ------------------------------------------------------------------
    # counting and enumeration

    def count_words(self, n: int) -> int:
        """Exact number of admissible words of length n (arbitrary precision)."""
        if n < 1:
            raise InputError("word length must be >= 1")
        m = self.alphabet_size
        # Integer DP over end letters keeps the count exact for any n.
        counts = [1] * m
        for _ in range(n - 1):
            nxt = [0] * m
            for i in range(m):
                c = counts[i]
                if not c:
                    continue
                mask = self.succ_mask[i]
                for j in range(m):
                    if mask & (1 << j):
                        nxt[j] += c
            counts = nxt
        return sum(counts)

    def words(self, n: int) -> Iterator[Word]:
        """Yield every admissible word of length n in lexicographic order."""
        if n < 1:
            raise InputError("word length must be >= 1")
        if self.count_words(n) > _ENUMERATION_CAP:
            raise PreconditionError(
                f"refusing to enumerate more than {_ENUMERATION_CAP} words; "
                "use count_words or the DP-based operations instead"
            )
        m = self.alphabet_size
        stack: list[int] = []

        def rec() -> Iterator[Word]:
            if len(stack) == n:
                yield tuple(stack)
                return
            if stack:
                choices = self.successors(stack[-1])
            else:
                choices = tuple(range(1, m + 1))
            for j in choices:
                stack.append(j)
                yield from rec()
                stack.pop()

        yield from rec()

    # ------------------------------------------------------------------
    # structure

    def matrix(self) -> np.ndarray:
        return np.array(self.incidence, dtype=float)

    def mixing_report(self) -> MixingReport:
        """Irreducibility, period and topological mixing of the incidence graph.

        The period of an irreducible graph is the gcd over all edges (u, v)
        of level(u) + 1 - level(v), levels taken from any BFS tree.
        """
        m = self.alphabet_size
        fwd = self._reachable(0, self.succ_mask)
        bwd = self._reachable(0, self.pred_mask)
        irreducible = fwd == bwd == (1 << m) - 1
        if not irreducible:
            return MixingReport(False, 0, False, tuple(self.letters))
        level = [-1] * m
        level[0] = 0
        queue = [0]
        while queue:
            u = queue.pop()
            for v in range(m):
                if self.succ_mask[u] & (1 << v) and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        g = 0
        for u in range(m):
            for v in range(m):
                if self.succ_mask[u] & (1 << v):
                    g = math.gcd(g, level[u] + 1 - level[v])
        period = abs(g)
        return MixingReport(True, period, period == 1, tuple(self.letters))

    def require_mixing(self) -> None:
        report = self.mixing_report()
        if not report.topologically_mixing:
            raise PreconditionError(
                "shift must be topologically mixing "
                f"(irreducible={report.irreducible}, period={report.period})"
            )

    @staticmethod
    def _reachable(start: int, masks: tuple[int, ...]) -> int:
        seen = 1 << start
        frontier = [start]
        while frontier:
            u = frontier.pop()
            new = masks[u] & ~seen
            seen |= new
            while new:
                v = (new & -new).bit_length() - 1
                new &= new - 1
                frontier.append(v)
        return seen

    def restrict(self, letters: Sequence[int]) -> tuple["Shift", dict[int, int]]:
        """Sub-shift on a letter subset.

        Returns the restricted shift (letters relabelled 1..r in the given
        order) and the map from new letters to original ones.
        """
        subset = [int(v) for v in letters]
        if len(set(subset)) != len(subset) or not subset:
            raise InputError("letter subset must be nonempty and duplicate-free")
        for v in subset:
            self._check_letter(v)
        rows = tuple(
            tuple(self.incidence[i - 1][j - 1] for j in subset) for i in subset
        )
        sub = Shift(rows)
        return sub, {new + 1: old for new, old in enumerate(subset)}


def common_prefix_length(w1: Sequence[int], w2: Sequence[int]) -> int:
    """Length of the longest common prefix of two words."""
    k = 0
    for a, b in zip(w1, w2):
        if a != b:
            break
        k += 1
    return k


def cylinder_distance(w1: Sequence[int], w2: Sequence[int], beta: float = 1.0) -> float:
    """e^(-beta * common prefix length); 1 when the first letters differ."""
    if beta <= 0:
        raise InputError("beta must be positive")
    return math.exp(-beta * common_prefix_length(w1, w2))
