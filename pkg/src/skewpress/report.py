"""Report writers: delimited task output, run manifest, optional figures.

Every numeric field is printed through one formatter (12 significant digits)
so that repeated runs diff clean.  CSV files open with '#' summary comments,
then a header row, then the data rows.  JSON mirrors the same records; the
audit verbs additionally keep their fixed payload shape regardless of the
chosen format.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from pathlib import Path
from typing import Any

from .scenarios import Scenario
from .tasks import TaskResult

_FMT = "%.12g"


def format_number(x: float) -> str:
    return _FMT % x


def _jsonable(value: Any) -> Any:
    """Round floats to the report precision; keep JSON strict (no inf/nan)."""

    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(_FMT % value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def write_csv(path: Path, result: TaskResult) -> None:
    with path.open("w", newline="") as fh:
        for key, value in result.summary.items():
            fh.write(f"# {key} = {_cell(value)}\n")
        if result.rows:
            writer = csv.writer(fh)
            header = list(result.rows[0])
            writer.writerow(header)
            for row in result.rows:
                writer.writerow([_cell(row[k]) for k in header])


def write_json(path: Path, result: TaskResult) -> None:
    doc = {"summary": _jsonable(result.summary), "rows": _jsonable(result.rows)}
    if result.json_payload is not None:
        doc.update(_jsonable(result.json_payload))
    path.write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")


def write_task(outdir: Path, stem: str, sc: Scenario, result: TaskResult) -> list[str]:
    """Write the task's files; returns the file names written."""

    written = []
    if sc.output == "csv":
        path = outdir / f"{stem}.csv"
        write_csv(path, result)
        written.append(path.name)
        if result.json_payload is not None:
            # audit payload shapes are part of the interface; keep them
            # available next to the delimited table
            jpath = outdir / f"{stem}.json"
            jpath.write_text(
                json.dumps(_jsonable(result.json_payload), indent=2, allow_nan=False)
                + "\n"
            )
            written.append(jpath.name)
    else:
        path = outdir / f"{stem}.json"
        write_json(path, result)
        written.append(path.name)
    return written


def write_manifest(
    outdir: Path,
    sc: Scenario,
    flags: dict[str, Any],
    entries: list[dict[str, Any]],
    total_wall: float,
) -> None:
    import numpy

    versions = {
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "skewpress": _package_version(),
    }
    doc = {
        "scenario": sc.name,
        "versions": versions,
        "flags": _jsonable(flags),
        "parameters": _jsonable(sc.raw),
        "tasks": _jsonable(entries),
        "total_wall_time_s": _jsonable(float(total_wall)),
    }
    (outdir / "run-manifest.json").write_text(
        json.dumps(doc, indent=2, allow_nan=False) + "\n"
    )


def _package_version() -> str:
    from . import __version__

    return __version__


# ---------------------------------------------------------------------------
# figures


def render_figure(outdir: Path, stem: str, result: TaskResult) -> str | None:
    """Render the task's companion figure; returns the file name or None."""

    spec = result.figure
    if not spec:
        return None
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=110)
    kind = spec["kind"]
    if kind == "rate":
        ns = [r["n"] for r in result.rows]
        ys = [r["log_zn_over_n"] for r in result.rows]
        ax.plot(ns, ys, ".", ms=3, label="log Z_n / n")
        ax.axhline(spec["value"], color="C3", lw=1, label=spec["label"])
        ax.set_xlabel("n")
        ax.set_ylabel("log Z_n / n")
        ax.legend()
    elif kind == "norm_rate":
        ns = [n for n, _ in spec["per_n"]]
        ys = [y for _, y in spec["per_n"]]
        ax.plot(ns, ys, "o-", ms=4, label="log ||T_n|| / n")
        ax.axhline(spec["asymptote"], color="C3", lw=1, label="extrapolated rate")
        ax.set_xlabel("n")
        ax.set_ylabel("log ||T_n|| / n")
        ax.legend()
    elif kind == "dichotomy":
        ax.bar([0, 1], [spec["pressure_base"], spec["log_rho"]], width=0.6,
               color=["C0", "C1"])
        ax.set_xticks([0, 1], ["pressure_base", "log_rho"])
        ax.set_title(f"gap = {format_number(spec['gap'])}  ({spec['verdict']})")
    elif kind == "alpha":
        ns = [n for n, _ in spec["c_n"]]
        ys = [c ** (1.0 / (2 * n)) for n, c in spec["c_n"]]
        ax.plot(ns, ys, "o-", ms=4, label="c_n^(1/2n)")
        if math.isfinite(spec["alpha_hat"]):
            ax.axhline(spec["alpha_hat"], color="C3", lw=1, label="alpha_hat")
        ax.set_xlabel("n")
        ax.legend()
    elif kind == "per_depth":
        ds = [d for d, _ in spec["per_depth"]]
        cs = [c for _, c in spec["per_depth"]]
        ax.plot(ds, cs, "o-", ms=4)
        ax.set_xlabel("cylinder depth")
        ax.set_ylabel("empirical Gibbs constant")
    elif kind == "norm_audit":
        ns = [n for n, _, _, _ in spec["rows"]]
        ax.plot(ns, [t for _, t, _, _ in spec["rows"]], "o-", ms=4, label="||T_n||")
        ax.plot(ns, [l for _, _, l, _ in spec["rows"]], "s--", ms=4,
                label="operator image norm")
        ax.plot(ns, [p for _, _, _, p in spec["rows"]], "^:", ms=4,
                label="identity return")
        ax.axhline(spec["c_hat"], color="C3", lw=1, label="c_hat")
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.legend()
    else:
        plt.close(fig)
        return None
    ax.set_title(f"{stem}")
    fig.tight_layout()
    name = f"{stem}.png"
    fig.savefig(outdir / name)
    plt.close(fig)
    return name
