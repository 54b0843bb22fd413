"""Convolution-operator norms and the skew transfer operator's spectral radius.

Under the Gibbs chain of a potential the group increment of the first n
letters has a law p_n; the object of interest acts on square-summable
functions on the group by right convolution with p_n.  Its norm is computed
exactly for finite groups (top singular value) and free abelian ones
(character sup), and through the return sequence of reflected-p_n * p_n for
everything else.  The spectral radius estimate combines the per-n norms
with the base growth rate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import radial
from .errors import InputError, PruningWarning, ResourceError
from .extensions import (
    GroupExtension,
    SkewTable,
    indicator_table,
    step_distribution_series,
    weighted_fiber_series,
)
from .gibbs import RpfData, gibbs_audit, rpf_solve
from .groups import (
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupMeasure,
    convolve,
    reflect,
)
from .potentials import Potential, normalize
from .seqfit import fit_growth
from .transfer import build_transfer, symmetric_top_eigenvalue

_PRUNE_WARN_FRACTION = 0.1
_APPLY_ENTRY_CAP = 5_000_000
_CONV_SUPPORT_CAP = 200_000


@dataclass(frozen=True, eq=False)
class OperatorNormEstimate:
    """Norm of right convolution by the n-step increment law."""

    n: int
    norm: float
    method: str
    k_used: int
    error_bar: float
    details: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class SpectralRadiusEstimate:
    """log of the spectral radius, assembled from per-n convolution norms.

    per_n holds (n, log norm / n); normalization_offset is the base growth
    rate that was added back, so log_rho - normalization_offset is the
    convolution contribution (0 for amenable targets, negative otherwise).
    """

    log_rho: float
    per_n: tuple[tuple[int, float], ...]
    normalization_offset: float
    method: str
    error_bar: float
    norms: tuple[OperatorNormEstimate, ...]
    fit_residual: float


def _warn_pruned(what: str, pruned: float, reference: float) -> None:
    if reference > 0 and pruned > _PRUNE_WARN_FRACTION * reference:
        warnings.warn(
            f"{what}: pruned mass {pruned:.3g} exceeds 10% of the live mass "
            f"{reference:.3g}; results carry a wide error bar",
            PruningWarning,
            stacklevel=3,
        )


def radial_walk_rank(ext: GroupExtension, rpf: RpfData) -> int | None:
    """Free-group rank when the chain is the isotropic generator walk.

    Requires the full shift on 2r letters mapped bijectively onto the
    generators and their inverses, with uniform step probabilities.  Only
    then do the return probabilities collapse to the distance recursion.
    """
    group = ext.group
    if not isinstance(group, FreeGroup):
        return None
    m = len(ext.shift.letters)
    if m != 2 * group.rank:
        return None
    if not all(ext.shift.allows(i, j) for i in ext.shift.letters for j in ext.shift.letters):
        return None
    if sorted(ext.psi.values()) != sorted(group.generators()):
        return None
    t = rpf.transition
    # the collapse needs letter states: higher-memory recodings change shape
    if t.shape[0] != m or not np.allclose(t, 1.0 / m, atol=1e-12):
        return None
    return group.rank


def _right_convolution_matrix(group: FiniteGroup, p: GroupMeasure) -> np.ndarray:
    order = group.order
    mat = np.zeros((order, order))
    for h, v in p.masses.items():
        for g in range(order):
            mat[group.mul(g, h), g] += v
    return mat


def _fourier_grid_size(rank: int) -> int:
    if rank == 1:
        return 1024
    if rank == 2:
        return 256
    return 64


def tn_norm(
    ext: GroupExtension,
    rpf: RpfData,
    n: int,
    method: str = "auto",
    *,
    prune_eps: float = 0.0,
    k_max: int | None = None,
    grid: int | None = None,
) -> OperatorNormEstimate:
    """Operator norm on square-summable group functions of convolution by p_n.

    method: finite_svd (finite groups, exact singular value),
    abelian_fourier (free abelian, character sup on a grid with a Lipschitz
    slack bound), return_sequence (any group, extrapolated growth of the
    symmetrized return values; collapses to the distance-chain recursion
    for isotropic free-group walks).
    """
    if n < 1:
        raise InputError("n must be >= 1")
    group = ext.group
    if method == "auto":
        if isinstance(group, FiniteGroup):
            method = "finite_svd"
        elif isinstance(group, FreeAbelianGroup):
            method = "abelian_fourier"
        else:
            method = "return_sequence"

    p = step_distribution_series(ext, rpf, [n], prune_eps=prune_eps)[n]
    _warn_pruned(f"step distribution at n={n}", p.pruned_mass, p.total_mass)

    if method == "finite_svd":
        if not isinstance(group, FiniteGroup):
            raise InputError("finite_svd needs a finite group")
        mat = _right_convolution_matrix(group, p)
        lam, resid, iters = symmetric_top_eigenvalue(mat.T @ mat)
        norm = math.sqrt(max(lam, 0.0))
        err = resid / (2.0 * max(norm, 1e-15)) + p.pruned_mass
        return OperatorNormEstimate(
            n=n,
            norm=norm,
            method=method,
            k_used=iters,
            error_bar=err,
            details={"pruned_mass": p.pruned_mass, "eigen_residual": resid},
        )

    if method == "abelian_fourier":
        if not isinstance(group, FreeAbelianGroup):
            raise InputError("abelian_fourier needs a free abelian group")
        d = group.rank
        size = int(grid) if grid else _fourier_grid_size(d)
        if size < 2:
            raise InputError("character grid needs at least 2 points per axis")
        arr = np.zeros((size,) * d)
        for g, v in p.masses.items():
            idx = tuple(int(c) % size for c in g)
            arr[idx] += v
        # folding is exact at grid characters: e^(i theta g) is periodic in g
        spectrum = np.fft.fftn(arr)
        grid_max = float(np.max(np.abs(spectrum)))
        norm = max(grid_max, p.total_mass)
        lipschitz = math.fsum(abs(c) * v for g, v in p.masses.items() for c in g)
        err = (math.pi / size) * lipschitz + p.pruned_mass
        return OperatorNormEstimate(
            n=n,
            norm=norm,
            method=method,
            k_used=size,
            error_bar=err,
            details={"pruned_mass": p.pruned_mass, "grid_max": grid_max},
        )

    if method != "return_sequence":
        raise InputError(
            "method must be finite_svd, abelian_fourier, return_sequence or auto"
        )

    rank = radial_walk_rank(ext, rpf)
    if rank is not None:
        k_cap = k_max or 2000
        logs = radial.srw_return_log_probs(rank, 2 * n * k_cap)
        ks = list(range(1, k_cap + 1))
        s_logs = [float(logs[2 * n * k]) for k in ks]
        fit = fit_growth(ks, s_logs, tail_fraction=0.5)
        norm = math.exp(fit.rate / 2.0)
        return OperatorNormEstimate(
            n=n,
            norm=norm,
            method=method,
            k_used=k_cap,
            error_bar=fit.residual / 2.0,
            details={"pruned_mass": p.pruned_mass, "radial_rank": rank,
                     "fit_residual": fit.residual},
        )

    if k_max is None:
        k_max = 500 if group.is_finite else 40
    q = convolve(reflect(p), p, prune_eps=prune_eps)
    ks: list[int] = []
    s_logs: list[float] = []
    prune_rel: list[float] = []
    q_pow = q
    ident = group.identity()
    for k in range(1, k_max + 1):
        if k > 1:
            q_pow = convolve(q_pow, q, prune_eps=prune_eps)
        if len(q_pow.masses) > _CONV_SUPPORT_CAP:
            raise ResourceError(
                f"convolution support {len(q_pow.masses)} at power {k} exceeds "
                f"{_CONV_SUPPORT_CAP}; raise prune_eps or lower k_max"
            )
        val = q_pow(ident)
        if val > 0.0:
            ks.append(k)
            s_logs.append(math.log(val))
            prune_rel.append(q_pow.pruned_mass / val)
    fit = fit_growth(ks, s_logs, tail_fraction=1.0 / 3.0)
    norm = math.exp(fit.rate / 2.0)
    tail = set(fit.ns_used)
    prune_term = max(
        (math.log1p(min(r, 1e300)) for k, r in zip(ks, prune_rel) if k in tail),
        default=0.0,
    )
    return OperatorNormEstimate(
        n=n,
        norm=norm,
        method=method,
        k_used=ks[-1] if ks else 0,
        error_bar=(fit.residual + prune_term) / 2.0,
        details={"pruned_mass": p.pruned_mass, "fit_residual": fit.residual,
                 "final_support": len(q_pow.masses)},
    )


def spectral_radius(
    ext: GroupExtension,
    pot: Potential,
    n_schedule: Sequence[int] | None = None,
    method: str = "auto",
    *,
    prune_eps: float = 0.0,
    k_max: int | None = None,
    grid: int | None = None,
) -> SpectralRadiusEstimate:
    """log spectral radius of the group-extended transfer operator.

    Solves the base eigenproblem (the growth offset), estimates the
    convolution norm on the schedule, extrapolates log norm / n, and adds
    the offset back.  For amenable targets the norms are exactly 1 and the
    result collapses to the base rate.
    """
    shift = ext.shift
    shift.require_mixing()
    rpf = rpf_solve(shift, pot)

    group = ext.group
    resolved = method
    if resolved == "auto":
        if isinstance(group, FiniteGroup):
            resolved = "finite_svd"
        elif isinstance(group, FreeAbelianGroup):
            resolved = "abelian_fourier"
        else:
            resolved = "return_sequence"
    if n_schedule is None:
        if resolved == "return_sequence":
            radial_ok = radial_walk_rank(ext, rpf) is not None
            n_schedule = (1, 2, 3, 4, 6) if radial_ok else (1, 2, 3)
        else:
            n_schedule = (1, 2, 3, 4, 6, 8)
    schedule = sorted(set(int(n) for n in n_schedule))
    if not schedule or schedule[0] < 1:
        raise InputError("n_schedule must contain integers >= 1")

    norms = tuple(
        tn_norm(ext, rpf, n, resolved, prune_eps=prune_eps, k_max=k_max, grid=grid)
        for n in schedule
    )
    logs = []
    for est in norms:
        if est.norm <= 0.0:
            raise InputError(f"convolution norm at n={est.n} vanished")
        logs.append(math.log(est.norm))
    if len(schedule) >= 2:
        fit = fit_growth(schedule, logs, tail_fraction=1.0)
        rate = fit.rate
        fit_residual = fit.residual
    else:
        rate = logs[0] / schedule[0]
        fit_residual = 0.0
    point_err = max(
        est.error_bar / (max(est.norm, 1e-300) * est.n) for est in norms
    )
    per_n = tuple((est.n, math.log(est.norm) / est.n) for est in norms)
    return SpectralRadiusEstimate(
        log_rho=rpf.pressure + rate,
        per_n=per_n,
        normalization_offset=rpf.pressure,
        method=resolved,
        error_bar=fit_residual + point_err,
        norms=norms,
        fit_residual=fit_residual,
    )


def transfer_apply(
    ext: GroupExtension,
    pot: Potential,
    f: SkewTable,
    n: int,
    bound: str = "sup",
) -> SkewTable:
    """n-fold image of a finitely supported block table under the skew
    transfer operator.

    Entries live on (block state, group element); each step sums over
    admissible predecessor states u of v, weighting by the exact window
    value and translating the group coordinate by the image of u's first
    letter.  On block-resolved tables the sup and inf window bounds
    coincide, so `bound` only selects the documented convention.
    """
    if bound not in ("sup", "inf"):
        raise InputError("bound must be 'sup' or 'inf'")
    if n < 0:
        raise InputError("n must be >= 0")
    ts = build_transfer(ext.shift, pot)
    group = ext.group
    if f.group is not group and f.group.name != group.name:
        raise InputError("table and extension use different groups")
    for (w, _g) in f.entries:
        if w not in ts.index:
            raise InputError(f"table key {w} is not a block state of the system")

    # per source state: (target word, step weight, image of the first letter)
    pushes: list[list[tuple[tuple[int, ...], float]]] = [[] for _ in ts.states]
    deltas = [ext.psi[w[0]] for w in ts.states]
    for t in ts.transitions:
        pushes[t.source].append((ts.states[t.target], math.exp(t.exponent)))

    table: dict[tuple, float] = {
        (w, group.check(g)): v for (w, g), v in f.entries.items()
    }
    for _ in range(n):
        out: dict[tuple, float] = {}
        for (w, h), val in table.items():
            u = ts.index[w]
            moved = group.mul(h, deltas[u])
            for target, weight in pushes[u]:
                key = (target, moved)
                out[key] = out.get(key, 0.0) + weight * val
        if len(out) > _APPLY_ENTRY_CAP:
            raise ResourceError(
                f"transfer image support {len(out)} exceeds {_APPLY_ENTRY_CAP}"
            )
        table = out
    return SkewTable(group, table)


def average_project(f: SkewTable, rpf: RpfData) -> GroupMeasure:
    """Per-element integral of a block table against the Gibbs measure.

    Collapses the state coordinate: the value at g is the stationary
    average of f(., g).  Projecting an embedded measure returns it
    unchanged, and the collapsed sup norm never exceeds the table's.
    """
    ts = rpf.system
    masses: dict = {}
    for (w, g), v in f.entries.items():
        u = ts.index.get(w)
        if u is None:
            raise InputError(f"table key {w} is not a block state of the system")
        masses[g] = masses.get(g, 0.0) + v * float(rpf.stationary[u])
    return GroupMeasure(f.group, masses)


def embed_constant(measure: GroupMeasure, rpf: RpfData) -> SkewTable:
    """The block table that is constant measure(g) on each fiber."""
    entries = {
        (w, g): v for g, v in measure.masses.items() for w in rpf.system.states
    }
    return SkewTable(measure.group, entries)


# ---------------------------------------------------------------------------
# cross-inequality audit of the norm chain


@dataclass(frozen=True, eq=False)
class NormAuditRow:
    n: int
    tn: OperatorNormEstimate
    lower_ln: float
    p_id: float
    z_sup: float
    z_inf: float
    supported: bool
    slacks: dict
    ok: bool


@dataclass(frozen=True, eq=False)
class NormAudit:
    c_hat: float
    rows: tuple[NormAuditRow, ...]
    ok: bool
    failures: tuple[str, ...]


def operator_norm_audit(
    ext: GroupExtension,
    pot: Potential,
    n_max: int = 6,
    *,
    prune_eps: float = 0.0,
    method: str = "auto",
    tol: float = 1e-9,
) -> NormAudit:
    """Per-n consistency checks tying convolution norms, transfer images,
    fiber sums, and identity-return masses together through the audited
    Gibbs constant.

    For each n up to n_max, with the normalized potential and C the Gibbs
    audit constant:
      (i)   norm >= (sup-norm of the n-step transfer image of the identity
            fiber indicator) / C
      (ii)  norm <= C
      (iii) (sup fiber sum at id) / C <= p_n(id) <= (inf fiber sum at id) * C
      (iv)  n^-1 log p_n(id) stays within n^-1 log C of the fiber-sum rate
    Lengths with an empty identity fiber satisfy the sandwich vacuously.
    """
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    if n_max > 12:
        raise InputError("the enumeration legs grow exponentially; n_max <= 12")
    shift = ext.shift
    shift.require_mixing()
    norm_data = normalize(shift, pot)
    phit = norm_data.potential
    rpf = rpf_solve(shift, phit)

    m = len(shift.letters)
    audit_depth = n_max
    while m**audit_depth > 20000 and audit_depth > 2:
        audit_depth -= 1
    c_hat = gibbs_audit(shift, phit, rpf, audit_depth).c_hat

    ident = ext.group.identity()
    sup_series = weighted_fiber_series(
        ext, phit, n_max=n_max, bound="sup", targets=ident, prune_eps=prune_eps
    )
    inf_series = weighted_fiber_series(
        ext, phit, n_max=n_max, bound="inf", targets=ident, prune_eps=prune_eps
    )
    p_series = step_distribution_series(
        ext, rpf, range(1, n_max + 1), prune_eps=prune_eps
    )
    ts = rpf.system
    start = indicator_table(ts, ext.group, ident)

    rows: list[NormAuditRow] = []
    failures: list[str] = []
    for n in range(1, n_max + 1):
        tn = tn_norm(ext, rpf, n, method, prune_eps=prune_eps)
        lower_ln = transfer_apply(ext, phit, start, n).sup_norm()
        p_id = p_series[n](ident)
        ls = sup_series.log_value(n, ident)
        li = inf_series.log_value(n, ident)
        supported = ls is not None and p_id > 0.0
        z_sup = math.exp(ls) if ls is not None else 0.0
        z_inf = math.exp(li) if li is not None else 0.0

        slacks = {
            "lower_vs_norm": tn.norm - lower_ln / c_hat,
            "norm_vs_c": c_hat - tn.norm,
        }
        if supported:
            slacks["sandwich_low"] = p_id - z_sup / c_hat
            slacks["sandwich_high"] = z_inf * c_hat - p_id
            slacks["rate_gap"] = (math.log(c_hat) + tol) / n - abs(
                (math.log(p_id) - math.log(z_sup)) / n
            )
        row_ok = all(v >= -tol for v in slacks.values())
        if not row_ok:
            bad = {k: v for k, v in slacks.items() if v < -tol}
            failures.append(f"n={n}: {bad}")
        rows.append(
            NormAuditRow(
                n=n,
                tn=tn,
                lower_ln=lower_ln,
                p_id=p_id,
                z_sup=z_sup,
                z_inf=z_inf,
                supported=supported,
                slacks=slacks,
                ok=row_ok,
            )
        )
    return NormAudit(
        c_hat=c_hat, rows=tuple(rows), ok=not failures, failures=tuple(failures)
    )
