"""Growth rates of constrained partition sums.

Two quantities per system: the base rate of the weighted word count on the
shift itself, and the rate of the subseries picking out words whose skew
product lands on the identity.  The base rate comes from the leading
transfer eigenvalue (with the finite-n sequence as a cross-check); the
identity-return rate only exists as a sequence limit and is fitted from
the tail of the supported terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

from . import radial
from .errors import SupportError
from .extensions import GroupExtension, weighted_fiber_series
from .groups import trivial_group
from .potentials import Potential, restrict_potential
from .seqfit import fit_growth
from .shifts import Shift
from .transfer import build_transfer, leading_eigenpair


@dataclass(frozen=True, eq=False)
class PressureEstimate:
    """A growth rate together with how it was obtained.

    value        the rate itself
    method       "exact_spectral" | "sequence" | "radial"
    sequence     (n, log Z_n) pairs backing the estimate
    fit_residual max abs fit deviation over the tail (0 for exact_spectral)
    error_bar    residual plus any pruning allowance; exact methods report
                 the eigenvalue bracket width instead
    """

    value: float
    method: str
    sequence: tuple[tuple[int, float], ...]
    fit_residual: float
    error_bar: float
    details: dict = field(default_factory=dict)


def z_n(
    shift: Shift,
    pot: Potential,
    a: int,
    n: int,
    flavor: Literal["plain", "first_return"] = "plain",
) -> float:
    """Weighted count of length-n words starting at a and continuable by a.

    plain sums e^{S_n phi} over all such words using the sup ergodic-sum
    bound (exact once memory windows close); first_return keeps only words
    avoiding a after the first letter.  Exact small-n enumeration is used
    below the block length, the transfer sweep above it.
    """
    shift._check_letter(a)
    ext = GroupExtension(shift, trivial_group(), {j: 0 for j in shift.letters})
    series = weighted_fiber_series(
        ext,
        pot,
        n_max=n,
        ns=(n,),
        bound="sup",
        constraint=("start_and_return", a),
        forbid_after_first=a if flavor == "first_return" else None,
        targets=0,
    )
    logv = series.log_value(n, 0)
    return math.exp(logv) if logv is not None else 0.0


def _log_zn_sequence(
    ext: GroupExtension,
    pot: Potential,
    a: int,
    ns: Sequence[int],
    prune_eps: float,
    engine: str,
    forbid_after_first: int | None = None,
) -> tuple[dict[int, float], dict[int, float]]:
    """Identity-fiber log partition sums and their pruning allowances."""
    n_max = max(ns)
    series = weighted_fiber_series(
        ext,
        pot,
        n_max=n_max,
        ns=tuple(ns),
        bound="sup",
        constraint=("start_and_return", a),
        forbid_after_first=forbid_after_first,
        prune_eps=prune_eps,
        engine=engine,
        targets=ext.group.identity(),
    )
    logs: dict[int, float] = {}
    pruned: dict[int, float] = {}
    ident = ext.group.identity()
    for n in ns:
        v = series.log_value(n, ident)
        if v is not None:
            logs[n] = v
            p = series.pruned_log.get(n)
            if p is not None and p > -math.inf:
                # worst case the dropped mass all sat on the identity fiber
                pruned[n] = math.log1p(math.exp(min(p - v, 700.0)))
    return logs, pruned


def pressure_base(
    shift: Shift,
    pot: Potential,
    a: int | None = None,
    method: Literal["exact_spectral", "sequence"] = "exact_spectral",
    check_depth: int = 20,
) -> PressureEstimate:
    """Exponential growth rate of the weighted word count.

    exact_spectral takes the log of the leading transfer eigenvalue and
    attaches the finite-n sequence up to check_depth as a sanity record;
    sequence fits the rate from that sequence alone.
    """
    shift.require_mixing()
    if a is None:
        a = shift.letters[0]
    ts = build_transfer(shift, pot)
    eig = leading_eigenpair(ts.matrix)
    value = math.log(eig.value)

    seq: list[tuple[int, float]] = []
    for n in range(1, check_depth + 1):
        zn = z_n(shift, pot, a, n)
        if zn > 0.0:
            seq.append((n, math.log(zn)))
    if method == "exact_spectral":
        return PressureEstimate(
            value=value,
            method="exact_spectral",
            sequence=tuple(seq),
            fit_residual=0.0,
            error_bar=eig.gap,
            details={"eigen_iterations": eig.iterations},
        )
    fit = fit_growth([n for n, _ in seq], [v for _, v in seq])
    return PressureEstimate(
        value=fit.rate,
        method="sequence",
        sequence=tuple(seq),
        fit_residual=fit.residual,
        error_bar=fit.residual + abs(fit.rate - value),
        details={"spectral_value": value},
    )


def pressure_extension(
    ext: GroupExtension,
    pot: Potential,
    a: int | None = None,
    n_max: int = 400,
    prune_eps: float = 0.0,
    engine: Literal["auto", "fast", "generic"] = "auto",
    tail_fraction: float = 0.5,
) -> PressureEstimate:
    """Growth rate of the identity-return subseries of the skew product.

    Only the supported lengths enter the fit (a walk with a parity kills
    every odd term).  The error bar adds the fit residual and the worst
    per-term pruning allowance across the tail.
    """
    shift = ext.shift
    shift.require_mixing()
    if a is None:
        a = shift.letters[0]
    shift._check_letter(a)

    weight = radial.constant_letter_weight(ext, pot)
    if weight is not None and engine != "generic":
        rank = ext.group.rank
        logs_arr = radial.fixed_first_letter_return_logs(rank, n_max)
        logs = {
            n: logs_arr[n] + n * weight
            for n in range(1, n_max + 1)
            if logs_arr[n] > -math.inf
        }
        pruned: dict[int, float] = {}
        method = "radial"
    else:
        ns = range(1, n_max + 1)
        logs, pruned = _log_zn_sequence(ext, pot, a, list(ns), prune_eps, engine)
        method = "sequence"

    if not logs:
        raise SupportError(
            "no admissible identity returns up to n=%d for start letter %d; "
            "if the walk has a drift or infinite order this needs larger n, "
            "otherwise check the start letter" % (n_max, a)
        )
    ns_sup = sorted(logs)
    fit = fit_growth(ns_sup, [logs[n] for n in ns_sup], tail_fraction=tail_fraction)
    tail = set(fit.ns_used)
    prune_term = max((pruned[n] for n in pruned if n in tail), default=0.0)
    return PressureEstimate(
        value=fit.rate,
        method=method,
        sequence=tuple((n, logs[n]) for n in ns_sup),
        fit_residual=fit.residual,
        error_bar=fit.residual + prune_term,
        details={
            "log_coef": fit.log_coef,
            "supported_fraction": len(ns_sup) / n_max,
            "tail_points": len(fit.ns_used),
        },
    )


@dataclass(frozen=True, eq=False)
class ExhaustionLevel:
    """One sub-alphabet stage of an increasing exhaustion."""

    letters: tuple[int, ...]
    mixing: bool
    note: str
    base: PressureEstimate | None
    extension: PressureEstimate | None


def exhaustion_pressures(
    ext: GroupExtension,
    pot: Potential,
    sub_alphabets: Sequence[Sequence[int]],
    n_max: int = 200,
    prune_eps: float = 0.0,
) -> list[ExhaustionLevel]:
    """Base and identity-return rates along a chain of sub-alphabets.

    Each level restricts the shift, the potential, and the skew data to the
    given letters.  Levels whose restricted shift is not topologically
    mixing are reported as diagnostics without estimates.  For increasing
    chains both rates are nondecreasing in the level.
    """
    out: list[ExhaustionLevel] = []
    for letters in sub_alphabets:
        letters = tuple(sorted(set(letters)))
        sub_ext, letter_map = ext.restrict(letters)
        sub_shift = sub_ext.shift
        report = sub_shift.mixing_report()
        if not report.topologically_mixing:
            note = (
                "not irreducible"
                if not report.irreducible
                else "period %d" % report.period
            )
            out.append(
                ExhaustionLevel(
                    letters=letters,
                    mixing=False,
                    note=note,
                    base=None,
                    extension=None,
                )
            )
            continue
        sub_pot = restrict_potential(pot, sub_shift, letter_map)
        base = pressure_base(sub_shift, sub_pot)
        try:
            ext_est = pressure_extension(
                sub_ext, sub_pot, n_max=n_max, prune_eps=prune_eps
            )
        except SupportError as exc:
            out.append(
                ExhaustionLevel(
                    letters=letters,
                    mixing=True,
                    note=str(exc),
                    base=base,
                    extension=None,
                )
            )
            continue
        out.append(
            ExhaustionLevel(
                letters=letters, mixing=True, note="", base=base, extension=ext_est
            )
        )
    return out
