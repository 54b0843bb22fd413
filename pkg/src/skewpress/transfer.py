"""Recoded weighted transition structure for locally constant potentials.

A memory-k potential is lifted to memory K = max(k, 2) and recoded on the
higher-block graph whose states are the admissible (K-1)-letter words.  The
transition u -> v (u, v overlapping blocks) carries the weight exponent
phi(u + last(v)), so a length-n word accumulates exactly its fully
determined ergodic-sum terms along the state path; the terms that still
depend on the continuation are bounded by per-state boundary tables.

The leading eigenpair of the weighted matrix is computed by power iteration
with the all-ones start vector; convergence is certified by the
Collatz-Wielandt gap, which also bounds the eigenvalue two-sidedly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InputError, PreconditionError, ResourceError
from .shifts import Shift, Word

if TYPE_CHECKING:  # pragma: no cover
    from .potentials import Potential

POWER_TOL = 1e-14
POWER_CAP = 100_000


@dataclass(frozen=True)
class Transition:
    source: int
    target: int
    letter: int  # letter appended when taking this transition
    exponent: float  # completed-window value of the lifted potential


@dataclass(frozen=True, eq=False)
class TransferSystem:
    """Weighted higher-block transition structure of a (shift, potential) pair."""

    shift: Shift
    memory: int  # memory of the original potential
    lifted_memory: int  # K = max(memory, 2)
    state_len: int  # K - 1
    states: tuple[Word, ...]
    index: dict[Word, int]
    transitions: tuple[Transition, ...]
    matrix: np.ndarray  # matrix[u, v] = e^exponent on u -> v, 0 otherwise
    boundary_sup: np.ndarray  # per-state sup of the undetermined tail terms
    boundary_inf: np.ndarray

    def state_of(self, word: Word) -> int:
        """State index of the final block of an admissible word."""
        if len(word) < self.state_len:
            raise InputError("word shorter than the recoded block length")
        block = word[-self.state_len:]
        if block not in self.index:
            raise InputError(f"block {block} is not admissible")
        return self.index[block]

    def out_transitions(self, u: int) -> tuple[Transition, ...]:
        return self._out[u]

    def __post_init__(self) -> None:
        out: list[list[Transition]] = [[] for _ in self.states]
        for t in self.transitions:
            out[t.source].append(t)
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))


def build_transfer(shift: Shift, pot: "Potential") -> TransferSystem:
    """Recode a potential onto block states with boundary bound tables."""
    pot.validate_against(shift)
    k = pot.memory
    lifted = max(k, 2)
    state_len = lifted - 1

    def lifted_value(word: Word) -> float:
        # The lift of a memory-1 potential to memory 2 reads the first letter.
        return pot.values[word[:k]]

    states = tuple(shift.words(state_len))
    index = {w: i for i, w in enumerate(states)}
    n_states = len(states)
    matrix = np.zeros((n_states, n_states))
    transitions: list[Transition] = []
    for u_idx, u in enumerate(states):
        for j in shift.successors(u[-1]):
            v = u[1:] + (j,)
            if v not in index:
                continue
            v_idx = index[v]
            w = lifted_value(u + (j,))
            transitions.append(Transition(u_idx, v_idx, j, w))
            matrix[u_idx, v_idx] = np.exp(w)

    b_sup = np.empty(n_states)
    b_inf = np.empty(n_states)
    for u_idx, u in enumerate(states):
        lo, hi = _boundary_bounds(shift, lifted_value, u, state_len)
        b_inf[u_idx], b_sup[u_idx] = lo, hi
    return TransferSystem(
        shift=shift,
        memory=k,
        lifted_memory=lifted,
        state_len=state_len,
        states=states,
        index=index,
        transitions=tuple(transitions),
        matrix=matrix,
        boundary_sup=b_sup,
        boundary_inf=b_inf,
    )


def _boundary_bounds(shift, lifted_value, u: Word, state_len: int):
    """Extremes, over admissible continuations c of length K-1, of the
    K-1 window terms of u + c that straddle the end of the word."""
    best = [np.inf, -np.inf]

    def rec(tail: Word, acc: float, remaining: int) -> None:
        if remaining == 0:
            best[0] = min(best[0], acc)
            best[1] = max(best[1], acc)
            return
        full = u + tail
        for j in shift.successors(full[-1]):
            w = full + (j,)
            # each appended letter completes one more window of width K
            rec(tail + (j,), acc + lifted_value(w[-(state_len + 1):]), remaining - 1)

    rec((), 0.0, state_len)
    return best[0], best[1]


# ---------------------------------------------------------------------------
# leading eigenpairs


@dataclass(frozen=True)
class LeadingEig:
    value: float
    right: np.ndarray
    left: np.ndarray
    gap: float  # final Collatz-Wielandt relative gap
    iterations: int


def leading_eigenpair(matrix: np.ndarray, tol: float = POWER_TOL) -> LeadingEig:
    """Perron eigenvalue and both eigenvectors of a primitive nonnegative matrix.

    Power iteration from the all-ones vector; stops when the Collatz-
    Wielandt bounds min_i (Mx)_i/x_i <= lambda <= max_i (Mx)_i/x_i agree to
    a relative gap below tol.  Raises ResourceError at the iteration cap.
    """
    lam_r, right, it_r = _power(matrix, tol)
    lam_l, left, it_l = _power(matrix.T, tol)
    lam = 0.5 * (lam_r + lam_l)
    gap = abs(lam_r - lam_l) / lam if lam else 0.0
    return LeadingEig(lam, right, left, max(gap, tol), it_r + it_l)


def _power(matrix: np.ndarray, tol: float):
    n = matrix.shape[0]
    x = np.ones(n)
    lam = 1.0
    for it in range(1, POWER_CAP + 1):
        y = matrix @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        lam = 0.5 * (lo + hi)
        if lam <= 0 or not np.isfinite(lam):
            raise PreconditionError("matrix is not primitive: leading ratio collapsed")
        if hi - lo <= tol * hi:
            return lam, y / y.sum(), it
        x = y / y.sum()
    raise ResourceError(
        f"power iteration did not reach Collatz-Wielandt gap {tol} "
        f"within {POWER_CAP} iterations"
    )


def symmetric_top_eigenvalue(matrix: np.ndarray, tol: float = 1e-12):
    """Top eigenvalue of a symmetric PSD matrix by Rayleigh-quotient iteration.

    Returns (value, residual, iterations); residual = ||Mx - value*x|| is a
    rigorous error bound for symmetric matrices.
    """
    n = matrix.shape[0]
    x = np.ones(n) / np.sqrt(n)
    prev = 0.0
    lam = 0.0
    k = 0
    for k in range(1, POWER_CAP + 1):
        y = matrix @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, 0.0, k
        lam = float(x @ y)
        if abs(lam - prev) <= tol * max(abs(lam), 1e-300):
            break
        prev = lam
        x = y / norm
    residual = float(np.linalg.norm(matrix @ x - lam * x))
    return lam, residual, k
