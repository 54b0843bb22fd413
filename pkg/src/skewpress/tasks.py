"""Task runners: one function per CLI verb, returning uniform result records.

Each runner computes library objects and flattens them into a summary dict
(scalars), a row list (the per-n table) and, for the audit-style verbs, a
spec-shaped JSON payload plus a pass/fail flag.  Report writers downstream
never touch library types.
"""

from __future__ import annotations

import math
import string
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import InputError
from .gibbs import gibbs_audit, rpf_solve
from .groups import FreeGroup
from .pressure import pressure_base, pressure_extension
from .scenarios import Scenario, Task
from .spectral import operator_norm_audit, spectral_radius
from .symmetry import alpha_estimate, corollary_check

_DICHOTOMY_TOL = 1e-4
_DICHOTOMY_MARGIN = 0.05


@dataclass(frozen=True, eq=False)
class TaskResult:
    verb: str
    summary: dict[str, Any]
    rows: list[dict[str, Any]]
    json_payload: dict[str, Any] | None = None
    audit_ok: bool | None = None
    wall_time: float = 0.0
    figure: dict[str, Any] = field(default_factory=dict)


def format_element(group, g) -> str:
    """Compact printable form of a group element for report cells."""

    if isinstance(g, tuple):
        if not g:
            return "e"
        if isinstance(group, FreeGroup):
            # generator i -> i-th letter, inverse -> capital
            out = []
            for x in g:
                letter = string.ascii_lowercase[abs(x) - 1]
                out.append(letter.upper() if x < 0 else letter)
            return "".join(out)
        return "(" + ",".join(str(int(x)) for x in g) + ")"
    return str(g)


def _seq_rows(est) -> list[dict[str, Any]]:
    return [
        {"n": n, "log_zn": v, "log_zn_over_n": v / n}
        for n, v in est.sequence
    ]


def _run_pressure_base(sc: Scenario, params: dict, tol: float | None) -> TaskResult:
    est = pressure_base(
        sc.shift,
        sc.potential,
        a=params.get("a"),
        method=params.get("method", "exact_spectral"),
        check_depth=int(params.get("check_depth", params.get("n_max", 20))),
    )
    summary = {
        "pressure_base": est.value,
        "method": est.method,
        "error_bar": est.error_bar,
        "fit_residual": est.fit_residual,
    }
    return TaskResult(
        "pressure-base",
        summary,
        _seq_rows(est),
        figure={"kind": "rate", "value": est.value, "label": "pressure_base"},
    )


def _run_pressure_ext(sc: Scenario, params: dict, tol: float | None) -> TaskResult:
    est = pressure_extension(
        sc.extension,
        sc.potential,
        a=params.get("a"),
        n_max=int(params.get("n_max", 400)),
        prune_eps=float(params.get("prune_eps", 0.0)),
        engine=params.get("engine", "auto"),
        tail_fraction=float(params.get("tail_fraction", 0.5)),
    )
    summary = {
        "pressure_extension": est.value,
        "method": est.method,
        "error_bar": est.error_bar,
        "fit_residual": est.fit_residual,
        "supported_fraction": est.details.get("supported_fraction", 1.0),
    }
    return TaskResult(
        "pressure-ext",
        summary,
        _seq_rows(est),
        figure={"kind": "rate", "value": est.value, "label": "pressure_extension"},
    )


def _norm_rows(sr) -> list[dict[str, Any]]:
    return [
        {
            "n": e.n,
            "method": e.method,
            "norm": e.norm,
            "error_bar": e.error_bar,
            "k_used": e.k_used,
            "pruned_mass": e.details.get("pruned_mass", 0.0),
        }
        for e in sr.norms
    ]


def _spectral(sc: Scenario, params: dict):
    sched = params.get("n_schedule")
    return spectral_radius(
        sc.extension,
        sc.potential,
        n_schedule=tuple(int(n) for n in sched) if sched else None,
        method=params.get("method", "auto"),
        prune_eps=float(params.get("prune_eps", 0.0)),
        k_max=int(params["k_max"]) if "k_max" in params else None,
        grid=int(params["grid"]) if "grid" in params else None,
    )


def _run_spectral_radius(sc: Scenario, params: dict, tol: float | None) -> TaskResult:
    sr = _spectral(sc, params)
    summary = {
        "log_rho": sr.log_rho,
        "method": sr.method,
        "normalization_offset": sr.normalization_offset,
        "error_bar": sr.error_bar,
        "fit_residual": sr.fit_residual,
    }
    return TaskResult(
        "spectral-radius",
        summary,
        _norm_rows(sr),
        figure={
            "kind": "norm_rate",
            "per_n": list(sr.per_n),
            "asymptote": sr.log_rho - sr.normalization_offset,
        },
    )


def _run_dichotomy(sc: Scenario, params: dict, tol: float | None) -> TaskResult:
    gap_tol = float(params.get("tol", tol if tol is not None else _DICHOTOMY_TOL))
    margin = float(params.get("margin", _DICHOTOMY_MARGIN))
    if not gap_tol <= margin:
        raise InputError("dichotomy needs tol <= margin")
    base = pressure_base(sc.shift, sc.potential)
    sr = _spectral(sc, params)
    gap = base.value - sr.log_rho
    slack = base.error_bar + sr.error_bar
    # verdicts branch on the point estimate; the error bar is reported but
    # conservative bars must not flip a clear verdict
    if gap <= gap_tol:
        verdict = "AMENABLE-CONSISTENT"
    elif gap > margin:
        verdict = "NONAMENABLE-CONSISTENT"
    else:
        verdict = "INCONCLUSIVE"
    summary = {
        "pressure_base": base.value,
        "log_rho": sr.log_rho,
        "gap": gap,
        "tol": gap_tol,
        "margin": margin,
        "error_bar": slack,
        "verdict": verdict,
    }
    return TaskResult(
        "dichotomy",
        summary,
        _norm_rows(sr),
        figure={
            "kind": "dichotomy",
            "pressure_base": base.value,
            "log_rho": sr.log_rho,
            "gap": gap,
            "verdict": verdict,
        },
    )


def _run_symmetry(sc: Scenario, params: dict, tol: float | None) -> TaskResult:
    n_range = params.get("n_range", (2, 12))
    cert = alpha_estimate(
        sc.extension,
        sc.potential,
        n_range=(int(n_range[0]), int(n_range[1])),
        window=params.get("window", "zero"),
        prune_eps=float(params.get("prune_eps", 0.0)),
    )
    windows = dict(cert.window_schedule)
    ns = [n for n, _ in cert.c_n]
    payload: dict[str, Any] = {
        "n": ns,
        "N_n": [windows[n] for n in ns],
        "c_n": [c for _, c in cert.c_n],
        "argmax_g": [format_element(sc.group, g) for _, g in cert.per_n_argmax_g],
        "alpha_hat": cert.alpha_hat,
        "ok": cert.ok,
        "obstructions": [
            {"n": n, "g": format_element(sc.group, g)} for n, g in cert.obstructions
        ],
    }
    rows = [
        {
            "n": n,
            "N_n": windows[n],
            "c_n": c,
            "argmax_g": format_element(sc.group, g),
        }
        for (n, c), (_, g) in zip(cert.c_n, cert.per_n_argmax_g)
    ]
    summary: dict[str, Any] = {"alpha_hat": cert.alpha_hat, "certificate_ok": cert.ok}
    ok = cert.ok
    if params.get("corollary", False):
        base = pressure_base(sc.shift, sc.potential)
        ext = pressure_extension(
            sc.extension, sc.potential, n_max=int(params.get("n_max", 400))
        )
        report = corollary_check(
            sc.extension,
            sc.potential,
            cert.alpha_hat,
            {"base": base, "extension": ext},
        )
        for item in report.items:
            summary[item.name] = item.status
            payload[item.name] = {
                "status": item.status,
                "lhs": item.lhs,
                "rhs": item.rhs,
                "gap": item.gap,
            }
        ok = ok and all(item.status != "FAIL" for item in report.items)
    return TaskResult(
        "symmetry",
        summary,
        rows,
        json_payload=payload,
        audit_ok=ok,
        figure={"kind": "alpha", "c_n": list(cert.c_n), "alpha_hat": cert.alpha_hat},
    )


def _run_gibbs_audit(sc: Scenario, params: dict, tol: float | None) -> TaskResult:
    n_max = int(params.get("n_max", 6))
    rpf = rpf_solve(sc.shift, sc.potential)
    audit = gibbs_audit(sc.shift, sc.potential, rpf, n_max)
    payload = {
        "c_hat": audit.c_hat,
        "n_max": audit.depth,
        "worst_word": "-".join(str(x) for x in audit.worst_word),
        "worst_ratio": audit.worst_ratio,
    }
    rows = [{"depth": d, "c_hat": c} for d, c in audit.per_depth]
    ok = math.isfinite(audit.c_hat)
    summary = {"c_hat": audit.c_hat, "n_max": audit.depth, "audit_ok": ok}
    return TaskResult(
        "gibbs-audit",
        summary,
        rows,
        json_payload=payload,
        audit_ok=ok,
        figure={"kind": "per_depth", "per_depth": list(audit.per_depth)},
    )


def _run_norm_audit(sc: Scenario, params: dict, tol: float | None) -> TaskResult:
    audit = operator_norm_audit(
        sc.extension,
        sc.potential,
        n_max=int(params.get("n_max", 6)),
        prune_eps=float(params.get("prune_eps", 0.0)),
        method=params.get("method", "auto"),
        tol=float(params.get("tol", tol if tol is not None else 1e-9)),
    )
    rows = []
    for r in audit.rows:
        row: dict[str, Any] = {
            "n": r.n,
            "tn_norm": r.tn.norm,
            "lower_ln": r.lower_ln,
            "p_id": r.p_id,
            "z_sup": r.z_sup,
            "z_inf": r.z_inf,
            "ok": r.ok,
        }
        for name, slack in r.slacks.items():
            row["slack_" + name] = slack
        rows.append(row)
    summary = {
        "c_hat": audit.c_hat,
        "audit_ok": audit.ok,
        "failures": "; ".join(audit.failures) if audit.failures else "",
    }
    payload = {
        "c_hat": audit.c_hat,
        "ok": audit.ok,
        "failures": list(audit.failures),
        "rows": rows,
    }
    return TaskResult(
        "lemma33-audit",
        summary,
        rows,
        json_payload=payload,
        audit_ok=audit.ok,
        figure={
            "kind": "norm_audit",
            "rows": [(r.n, r.tn.norm, r.lower_ln, r.p_id) for r in audit.rows],
            "c_hat": audit.c_hat,
        },
    )


_RUNNERS: dict[str, Callable[[Scenario, dict, float | None], TaskResult]] = {
    "pressure-base": _run_pressure_base,
    "pressure-ext": _run_pressure_ext,
    "spectral-radius": _run_spectral_radius,
    "dichotomy": _run_dichotomy,
    "symmetry": _run_symmetry,
    "gibbs-audit": _run_gibbs_audit,
    "lemma33-audit": _run_norm_audit,
}


def run_task(sc: Scenario, task: Task, tol: float | None = None) -> TaskResult:
    """Execute one task and time it."""

    runner = _RUNNERS[task.verb]
    t0 = time.perf_counter()
    result = runner(sc, task.params, tol)
    wall = time.perf_counter() - t0
    return TaskResult(
        verb=result.verb,
        summary=result.summary,
        rows=result.rows,
        json_payload=result.json_payload,
        audit_ok=result.audit_ok,
        wall_time=wall,
        figure=result.figure,
    )
