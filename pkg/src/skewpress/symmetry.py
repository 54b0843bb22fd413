"""Fiber-symmetry certificates.

For each length n the weighted word sum over the fiber of g is compared
with the sum over the fiber of g^-1, the latter taken over a window of
lengths around n.  The smallest constants c_n making the comparison hold,
and the growth exponent alpha extracted from them, quantify how far the
skew data is from being symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError
from .extensions import GroupExtension, weighted_fiber_series
from .potentials import Potential, restrict_potential
from .pressure import PressureEstimate
from .spectral import SpectralRadiusEstimate, spectral_radius

_MAX_WITNESSES = 12


@dataclass(frozen=True, eq=False)
class AlphaCertificate:
    """Per-length comparison constants and the extracted symmetry exponent.

    c_n pairs (n, c_n) hold the max over reachable g of the fiber-sum ratio
    LHS(g, n) / RHS(g^-1, window); alpha_hat extrapolates c_n^(1/2n) over
    the tail and is floored at 1 (the value it provably cannot be below).
    Fibers whose mirror window is empty are symmetry obstructions and make
    the certificate fail.
    """

    n_range: tuple[int, int]
    window_schedule: tuple[tuple[int, int], ...]
    c_n: tuple[tuple[int, float], ...]
    alpha_hat: float
    per_n_argmax_g: tuple[tuple[int, object], ...]
    obstructions: tuple[tuple[int, object], ...]
    ok: bool
    details: dict = field(default_factory=dict)


def window_schedule(
    window: object, n_lo: int, n_hi: int
) -> dict[int, int]:
    """Expand a window spec into {n: N_n}.

    Accepts "zero", "sqrt" (ceil of sqrt n), a constant int, a mapping, or
    a callable n -> N_n.  Every window must satisfy 0 <= N_n < n.
    """
    out: dict[int, int] = {}
    for n in range(n_lo, n_hi + 1):
        if window == "zero":
            w = 0
        elif window == "sqrt":
            w = math.isqrt(n - 1) + 1 if n > 1 else 0
            w = min(w, n - 1)
        elif isinstance(window, int):
            w = window
        elif isinstance(window, Mapping):
            w = int(window.get(n, 0))
        elif callable(window):
            w = int(window(n))
        else:
            raise InputError(f"unrecognized window spec {window!r}")
        if not 0 <= w < n:
            raise InputError(f"window N_n={w} outside [0, n) at n={n}")
        out[n] = w
    return out


def _extrapolate_tail(xs: Sequence[float]) -> float:
    """Limit of a geometrically converging sequence from its tail.

    One Aitken step on the last three points when the increments support
    it, otherwise the tail mean.
    """
    if not xs:
        raise InputError("no points to extrapolate")
    if len(xs) < 3:
        return xs[-1]
    x0, x1, x2 = xs[-3], xs[-2], xs[-1]
    denom = x2 - 2.0 * x1 + x0
    if abs(denom) > 1e-14 * max(abs(x2), 1.0):
        accel = x2 - (x2 - x1) ** 2 / denom
        lo, hi = min(xs), max(xs)
        span = hi - lo
        if lo - span <= accel <= hi + span:
            return accel
    return math.fsum(xs) / len(xs)


def alpha_estimate(
    ext: GroupExtension,
    pot: Potential,
    n_range: tuple[int, int] = (2, 12),
    window: object = "zero",
    prune_eps: float = 0.0,
) -> AlphaCertificate:
    """Comparison constants c_n and the symmetry exponent alpha_hat.

    For each n and each group element g reachable at length n, the sup
    fiber sum at g is divided by the windowed sup fiber sum at g^-1; c_n is
    the largest such ratio (so the comparison inequality holds with c_n and
    with nothing smaller).  alpha_hat extrapolates c_n^(1/2n) over the last
    third of the range.
    """
    n_lo, n_hi = int(n_range[0]), int(n_range[1])
    if not 1 <= n_lo <= n_hi:
        raise InputError("need 1 <= n_lo <= n_hi")
    sched = window_schedule(window, n_lo, n_hi)
    lengths = set()
    for n in range(n_lo, n_hi + 1):
        lengths.update(range(n - sched[n], n + sched[n] + 1))
    n_max = max(lengths)
    series = weighted_fiber_series(
        ext,
        pot,
        n_max=n_max,
        ns=sorted(lengths),
        bound="sup",
        prune_eps=prune_eps,
        engine="generic",
    )
    group = ext.group

    c_rows: list[tuple[int, float]] = []
    argmax_rows: list[tuple[int, object]] = []
    obstructions: list[tuple[int, object]] = []
    log_c: dict[int, float] = {}
    for n in range(n_lo, n_hi + 1):
        row = series.entries.get(n, {})
        best: float | None = None
        best_g = None
        for g, lhs in row.items():
            rhs: float | None = None
            inv = group.inv(g)
            for length in range(n - sched[n], n + sched[n] + 1):
                val = series.entries.get(length, {}).get(inv)
                if val is not None:
                    rhs = val if rhs is None else float(np.logaddexp(rhs, val))
            if rhs is None:
                if len(obstructions) < _MAX_WITNESSES:
                    obstructions.append((n, g))
                continue
            ratio = lhs - rhs
            if best is None or ratio > best:
                best = ratio
                best_g = g
        if best is not None:
            log_c[n] = best
            c_rows.append((n, math.exp(best)))
            argmax_rows.append((n, best_g))

    if not log_c:
        if not obstructions:
            raise InputError("no reachable fibers in the requested length range")
        # every fiber lacked a mirror: nothing to extrapolate, certificate fails
        return AlphaCertificate(
            n_range=(n_lo, n_hi),
            window_schedule=tuple(sorted(sched.items())),
            c_n=(),
            alpha_hat=math.inf,
            per_n_argmax_g=(),
            obstructions=tuple(obstructions),
            ok=False,
            details={"note": "no fiber had a reachable mirror fiber"},
        )
    ns_sorted = sorted(log_c)
    xs = [math.exp(log_c[n] / (2.0 * n)) for n in ns_sorted]
    tail = xs[-max(1, len(xs) // 3):]
    alpha_hat = max(_extrapolate_tail(tail), 1.0)

    return AlphaCertificate(
        n_range=(n_lo, n_hi),
        window_schedule=tuple(sorted(sched.items())),
        c_n=tuple(c_rows),
        alpha_hat=alpha_hat,
        per_n_argmax_g=tuple(argmax_rows),
        obstructions=tuple(obstructions),
        ok=not obstructions,
        details={"log_c_n": {n: log_c[n] for n in ns_sorted},
                 "tail_points": len(tail)},
    )


# ---------------------------------------------------------------------------
# pressure/radius inequality checks


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    gap: float
    slack: float
    status: str


@dataclass(frozen=True, eq=False)
class CorollaryReport:
    alpha: float
    items: tuple[InequalityCheck, ...]
    ok: bool


def _value_and_bar(est: object) -> tuple[float, float]:
    if isinstance(est, PressureEstimate):
        return est.value, est.error_bar
    if isinstance(est, SpectralRadiusEstimate):
        return est.log_rho, est.error_bar
    return float(est), 0.0


def corollary_check(
    ext: GroupExtension,
    pot: Potential,
    alpha: float,
    pressures: Mapping[str, object],
) -> CorollaryReport:
    """Checks the symmetry-corrected lower bounds on the extension rate.

    Two inequalities, each judged with the estimates' error bars as slack:
      extension >= base - log alpha
      extension >= log_rho - log alpha
    pressures carries "base" and "extension" (estimates or plain floats)
    and optionally "log_rho"; a missing log_rho is computed here.
    """
    if alpha < 1.0:
        raise InputError("alpha must be >= 1")
    if "base" not in pressures or "extension" not in pressures:
        raise InputError("pressures needs 'base' and 'extension' entries")
    base, base_bar = _value_and_bar(pressures["base"])
    ext_val, ext_bar = _value_and_bar(pressures["extension"])
    if "log_rho" in pressures:
        rho_val, rho_bar = _value_and_bar(pressures["log_rho"])
    else:
        rho_est = spectral_radius(ext, pot)
        rho_val, rho_bar = rho_est.log_rho, rho_est.error_bar
    log_alpha = math.log(alpha)

    def judge(name: str, lhs: float, lhs_bar: float, rhs: float, rhs_bar: float):
        gap = lhs - rhs
        slack = lhs_bar + rhs_bar + 1e-9
        if gap >= 0:
            status = "PASS"
        elif gap >= -slack:
            status = "INCONCLUSIVE"
        else:
            status = "FAIL"
        return InequalityCheck(name, lhs, rhs, gap, slack, status)

    items = (
        judge("extension_vs_base", ext_val, ext_bar, base - log_alpha, base_bar),
        judge("extension_vs_radius", ext_val, ext_bar, rho_val - log_alpha, rho_bar),
    )
    return CorollaryReport(
        alpha=alpha, items=items, ok=all(i.status != "FAIL" for i in items)
    )


def compact_alpha(
    ext: GroupExtension,
    pot: Potential,
    sub_alphabets: Sequence[Sequence[int]],
    n_range: tuple[int, int] = (2, 10),
    window: object = "zero",
    prune_eps: float = 0.0,
    search_depth: int = 6,
) -> list[AlphaCertificate]:
    """Certificates along a chain of sub-alphabets.

    Each restriction must be mixing.  Before certifying, the image of the
    level's words is probed for inverse closure: every letter's inverse
    image must be reachable as the image of some admissible word over the
    level, within search_depth letters; levels where the bounded search
    fails are flagged in the certificate details (the image might not be
    closed under inversion, so the exponent is only one-sided there).
    """
    out: list[AlphaCertificate] = []
    for letters in sub_alphabets:
        letters = tuple(sorted(set(letters)))
        sub_ext, letter_map = ext.restrict(letters)
        sub_shift = sub_ext.shift
        sub_shift.require_mixing()
        sub_pot = restrict_potential(pot, sub_shift, letter_map)

        group = ext.group
        reachable = set()
        depth = search_depth
        m = len(letters)
        while m**depth > 100_000 and depth > 1:
            depth -= 1
        for length in range(1, depth + 1):
            for w in sub_shift.words(length):
                reachable.add(group.check(sub_ext.psi_word(w)))
        missing = [
            letter_map[i]
            for i in sub_shift.letters
            if group.inv(sub_ext.psi[i]) not in reachable
        ]
        cert = alpha_estimate(sub_ext, sub_pot, n_range, window, prune_eps)
        details = dict(cert.details)
        details["letters"] = letters
        details["inverse_closure"] = (
            "ok" if not missing else f"unreached inverses for letters {missing}"
        )
        details["closure_depth"] = depth
        out.append(
            AlphaCertificate(
                n_range=cert.n_range,
                window_schedule=cert.window_schedule,
                c_n=cert.c_n,
                alpha_hat=cert.alpha_hat,
                per_n_argmax_g=cert.per_n_argmax_g,
                obstructions=cert.obstructions,
                ok=cert.ok and not missing,
                details=details,
            )
        )
    return out
