"""Ruelle-Perron-Frobenius data and Gibbs measures of mixing Markov shifts.

The Gibbs measure of a locally constant potential is realized as the
stationary Markov chain of the pressure-normalized transfer weights on the
recoded block states; cylinder masses are products of transition
probabilities, and the Gibbs property is audited empirically by the worst
cylinder ratio against e^(S_n phi - n P).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .potentials import Potential, ergodic_sum_bounds
from .shifts import Shift, Word
from .transfer import TransferSystem, build_transfer, leading_eigenpair

_STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RpfData:
    """Leading eigendata of the weighted transfer matrix.

    eigenfunction is the positive solution h of the transfer eigenproblem
    (max value 1); eigenmeasure is the dual vector nu scaled so the induced
    stationary distribution pi = h * nu has total mass 1.  transition holds
    the row-stochastic chain of the normalized weights.
    """

    system: TransferSystem
    pressure: float
    eigenfunction: np.ndarray
    eigenmeasure: np.ndarray
    transition: np.ndarray
    stationary: np.ndarray

    @property
    def states(self) -> tuple[Word, ...]:
        return self.system.states

    def state_mass(self, u: int) -> float:
        return float(self.stationary[u])


def rpf_solve(shift: Shift, pot: Potential) -> RpfData:
    """Solve the leading transfer eigenproblem and build the Gibbs chain."""
    shift.require_mixing()
    ts = build_transfer(shift, pot)
    eig = leading_eigenpair(ts.matrix)
    lam = eig.value
    h = eig.left / eig.left.max()
    r = eig.right
    pi = h * r
    pi = pi / pi.sum()
    nu = pi / h
    # chain: from state u, step along u -> v with probability W[u,v] r_v / (lam r_u)
    transition = ts.matrix * r[None, :] / (lam * r[:, None])
    rowsums = transition.sum(axis=1)
    if np.max(np.abs(rowsums - 1.0)) > 1e-10:
        raise InputError("transfer chain failed to normalize; check the potential")
    transition = transition / rowsums[:, None]
    return RpfData(
        system=ts,
        pressure=math.log(lam),
        eigenfunction=h,
        eigenmeasure=nu,
        transition=transition,
        stationary=pi,
    )


def cylinder_mass(rpf: RpfData, word) -> float:
    """Gibbs mass of the cylinder of an admissible word."""
    ts = rpf.system
    w = ts.shift.require_admissible(word)
    sl = ts.state_len
    if len(w) < sl:
        # marginal over all block states extending the word
        return float(
            sum(
                rpf.stationary[i]
                for i, s in enumerate(ts.states)
                if s[: len(w)] == w
            )
        )
    u = ts.state_of(w[:sl])
    mass = rpf.stationary[u]
    for t in range(sl, len(w)):
        v = ts.state_of(w[t - sl + 1 : t + 1])
        mass *= rpf.transition[u, v]
        u = v
    return float(mass)


@dataclass(frozen=True)
class GibbsAudit:
    c_hat: float
    depth: int
    worst_word: Word
    worst_ratio: float
    per_depth: tuple[tuple[int, float], ...]


def gibbs_audit(shift: Shift, pot: Potential, rpf: RpfData, n_max: int) -> GibbsAudit:
    """Empirical Gibbs constant over all cylinders up to depth n_max.

    For each admissible word the mass is compared against
    e^(S phi - n P) at both the cylinder sup and inf; C_hat is the smallest
    constant making the two-sided Gibbs inequality hold on everything seen.
    """
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    c_hat = 1.0
    worst_word: Word = ()
    worst_ratio = 1.0
    per_depth = []
    for n in range(1, n_max + 1):
        level = 1.0
        for w in shift.words(n):
            mass = cylinder_mass(rpf, w)
            lo, hi = ergodic_sum_bounds(shift, pot, w)
            r_sup = mass / math.exp(hi - n * rpf.pressure)
            r_inf = mass / math.exp(lo - n * rpf.pressure)
            # Gibbs needs mass <= C e^(inf - nP) and mass >= C^-1 e^(sup - nP)
            c_needed = max(r_inf, 1.0 / r_sup, 1.0)
            if c_needed > level:
                level = c_needed
            if c_needed > c_hat:
                c_hat = c_needed
                worst_word = w
                worst_ratio = r_inf if r_inf >= 1.0 / r_sup else r_sup
        per_depth.append((n, level))
    return GibbsAudit(c_hat, n_max, worst_word, worst_ratio, tuple(per_depth))


def duality_defect(
    shift: Shift, pot_normalized: Potential, rpf: RpfData, depth: int
) -> float:
    """Max defect |mu([w]) - integral of the transfer image of 1_[w]|
    over all cylinders up to the given depth.

    For a normalized potential the transfer operator is dual to the
    identity on its Gibbs measure, so the defect is pure rounding.  The
    image integral is expanded over cylinders fine enough to resolve the
    potential's window:

        sum over extensions e of length max(K - n, 0) of
            e^(phi~((w+e)[:K])) * mu([shifted w+e]).
    """
    pot_normalized.validate_against(shift)
    k = pot_normalized.memory
    worst = 0.0
    for n in range(1, depth + 1):
        for w in shift.words(n):
            lhs = cylinder_mass(rpf, w)
            rhs = 0.0
            for full in _refinements(shift, w, max(k - n, 0)):
                rhs += math.exp(pot_normalized.values[full[:k]]) * cylinder_mass(
                    rpf, full[1:]
                )
            worst = max(worst, abs(lhs - rhs))
    return worst


def _refinements(shift: Shift, w: Word, extra: int):
    if extra == 0:
        yield w
        return
    for j in shift.successors(w[-1]):
        yield from _refinements(shift, w + (j,), extra - 1)
