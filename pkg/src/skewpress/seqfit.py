"""Tail extrapolation of exponential-with-polynomial-correction sequences.

Sequences of the form log Z_n = rate * n + c * log n + d appear throughout:
partition sums behave like n^c e^(n rate) by local-limit asymptotics, and
return sequences do the same in the power index.  The fit is linear least
squares over the tail of the supported indices; the reported residual is
the worst absolute deviation of the fitted model on that tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SupportError


@dataclass(frozen=True)
class GrowthFit:
    rate: float
    log_coef: float
    intercept: float
    residual: float
    ns_used: tuple[int, ...]


def fit_growth(
    ns: Sequence[int],
    log_values: Sequence[float],
    tail_fraction: float = 0.5,
    with_log_term: bool = True,
) -> GrowthFit:
    """Least-squares fit of log_values ~ rate*n + log_coef*log(n) + intercept.

    Only the last tail_fraction of the supplied points is used.  With fewer
    than four tail points the log-n term is dropped; with fewer than two the
    sequence cannot be extrapolated and SupportError is raised.
    """
    pairs = [
        (int(n), float(v))
        for n, v in zip(ns, log_values)
        if math.isfinite(v)
    ]
    if len(pairs) < 2:
        raise SupportError(
            "need at least two finite sequence points to extrapolate a rate"
        )
    pairs.sort()
    start = int(len(pairs) * (1.0 - tail_fraction))
    tail = pairs[start:] if len(pairs) - start >= 2 else pairs[-2:]
    n_arr = np.array([p[0] for p in tail], dtype=float)
    v_arr = np.array([p[1] for p in tail], dtype=float)
    use_log = with_log_term and len(tail) >= 4 and n_arr.min() >= 1
    if use_log:
        design = np.column_stack([n_arr, np.log(n_arr), np.ones_like(n_arr)])
    else:
        design = np.column_stack([n_arr, np.ones_like(n_arr)])
    coef, *_ = np.linalg.lstsq(design, v_arr, rcond=None)
    fitted = design @ coef
    residual = float(np.max(np.abs(fitted - v_arr))) if len(tail) else 0.0
    if use_log:
        rate, log_coef, intercept = (float(c) for c in coef)
    else:
        rate, intercept = (float(c) for c in coef)
        log_coef = 0.0
    return GrowthFit(rate, log_coef, intercept, residual, tuple(int(n) for n in n_arr))


def log_of_big(value: int) -> float:
    """Natural log of a positive integer too large for float conversion."""
    if value <= 0:
        raise ValueError("value must be positive")
    bits = value.bit_length()
    if bits <= 900:
        return math.log(value)
    shift = bits - 64
    return math.log(value >> shift) + shift * math.log(2.0)
