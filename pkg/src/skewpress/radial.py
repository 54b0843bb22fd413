"""Radial birth-death lane for isotropic walks on free groups.

When the alphabet is the full shift on the 2k letters mapped bijectively to
the symmetric generator set of F_k and the potential is constant across
letters, the word-length process of the walk is a birth-death chain: from
radius r >= 1 one of the 2k letters cancels and 2k - 1 extend.  Fiber sums
at the identity then reduce to a one-dimensional DP over radii, which makes
lengths in the thousands cheap.  Unequal letter weights break this collapse
(the cancelling step depends on the letter before the one removed), so the
lane refuses anything but the constant case.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError
from .extensions import GroupExtension
from .groups import FreeGroup
from .potentials import Potential

_RENORM_FLOOR = 1e-250


def constant_letter_weight(ext: GroupExtension, pot: Potential) -> float | None:
    """The common per-letter value when the radial lane applies, else None."""
    group = ext.group
    if not isinstance(group, FreeGroup):
        return None
    k = group.rank
    shift = ext.shift
    if shift.alphabet_size != 2 * k:
        return None
    if any(0 in row for row in shift.incidence):
        return None
    needed = {(i,) for i in range(1, k + 1)} | {(-i,) for i in range(1, k + 1)}
    if set(ext.psi.values()) != needed or len(ext.psi) != 2 * k:
        return None
    vals = list(pot.values.values())
    first = vals[0]
    if any(v != first for v in vals[1:]):
        return None
    # a constant table contributes its value once per window, any memory
    return float(first)


def srw_return_log_probs(rank: int, n_max: int) -> np.ndarray:
    """log P(uniform generator walk on F_rank is at the identity at step t).

    Entry t of the returned array is the log return probability (-inf when
    the parity forbids a return).  Probabilities are renormalized on the fly
    so arbitrarily long horizons stay representable.
    """
    if rank < 1 or n_max < 0:
        raise InputError("rank must be >= 1 and n_max >= 0")
    q = 2 * rank
    out_p = (q - 1) / q
    in_p = 1 / q
    probs = np.zeros(n_max + 2)
    probs[0] = 1.0
    log_scale = 0.0
    logs = np.full(n_max + 1, -np.inf)
    logs[0] = 0.0
    for t in range(1, n_max + 1):
        nxt = np.zeros_like(probs)
        nxt[0] = probs[1] * in_p
        nxt[1] = probs[0]
        nxt[2:] += probs[1:-1] * out_p
        nxt[1:-1] += probs[2:] * in_p
        probs = nxt
        top = probs.max()
        if top < _RENORM_FLOOR:
            log_scale += math.log(top)
            probs = probs / top
        if probs[0] > 0.0:
            logs[t] = math.log(probs[0]) + log_scale
    return logs


def fixed_first_letter_return_logs(rank: int, n_max: int) -> np.ndarray:
    """log of the number of length-n letter sequences with a fixed first
    letter whose product reduces to the identity; -inf off the support."""
    if rank < 1 or n_max < 1:
        raise InputError("rank must be >= 1 and n_max >= 1")
    q = 2 * rank
    counts = np.zeros(n_max + 2)
    counts[1] = 1.0  # the first letter alone, radius 1
    log_scale = 0.0
    logs = np.full(n_max + 1, -np.inf)
    for t in range(2, n_max + 1):
        nxt = np.zeros_like(counts)
        nxt[0] = counts[1]
        nxt[1] = counts[0] * q + counts[2]
        nxt[2:] = counts[1:-1][: nxt[2:].shape[0]] * (q - 1)
        nxt[2:-1] += counts[3:]
        counts = nxt
        top = counts.max()
        if top > 1e250 or (0.0 < top < 1e-250):
            log_scale += math.log(top)
            counts = counts / top
        if counts[0] > 0.0:
            logs[t] = math.log(counts[0]) + log_scale
    return logs
