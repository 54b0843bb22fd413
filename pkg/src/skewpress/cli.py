"""Command-line front end: run, validate and list scenario files.

run executes a scenario's tasks in order and writes one delimited file per
task into <outdir>/<scenario-name>/, plus run-manifest.json and, unless
disabled, one PNG figure per task.  Exit code 0 means every task completed
and every audit passed; 1 means a task failed or an audit did not pass;
2 means the scenario never started (schema or file errors).
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from pathlib import Path

from .errors import PruningWarning, SchemaError, SkewpressError
from .report import format_number, render_figure, write_manifest, write_task
from .scenarios import Scenario, bundled_scenarios, load_scenario, validate_scenario
from .tasks import run_task


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewpress",
        description="Pressure, spectral radius and symmetry experiments "
        "for group-extended Markov shifts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario file")
    run.add_argument("scenario", help="path to a scenario JSON, or a bundled name")
    run.add_argument("--output", choices=("csv", "json"),
                     help="override the scenario's output format")
    run.add_argument("--outdir", default=".",
                     help="directory that receives <scenario-name>/")
    run.add_argument("--strict", action="store_true",
                     help="escalate pruning warnings to errors")
    run.add_argument("--threads", type=int, default=1,
                     help="thread budget hint, recorded in the manifest")
    run.add_argument("--tol", type=float, default=None,
                     help="default tolerance for verdicts and audits")
    run.add_argument("--no-figures", action="store_true",
                     help="skip PNG rendering")

    val = sub.add_parser("validate", help="check a scenario file against the schema")
    val.add_argument("scenario", help="path to a scenario JSON, or a bundled name")

    sub.add_parser("list-scenarios", help="list bundled scenarios")
    return parser


def _cmd_validate(ref: str) -> int:
    try:
        sc = load_scenario(ref)
    except SchemaError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 2
    verbs = ", ".join(t.verb for t in sc.tasks)
    print(f"ok: {sc.name} ({len(sc.tasks)} tasks: {verbs}; output {sc.output})")
    return 0


def _cmd_list() -> int:
    import json as _json

    for name, text in bundled_scenarios().items():
        try:
            sc = validate_scenario(_json.loads(text), name)
            verbs = ", ".join(t.verb for t in sc.tasks)
            print(f"{name}: {verbs}")
        except SchemaError as exc:  # would indicate a packaging defect
            print(f"{name}: INVALID ({exc})")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        sc = load_scenario(args.scenario)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        sc = Scenario(
            name=sc.name, shift=sc.shift, potential=sc.potential, group=sc.group,
            psi=sc.psi, extension=sc.extension, tasks=sc.tasks,
            output=args.output, raw=sc.raw,
        )
    outdir = Path(args.outdir) / sc.name
    outdir.mkdir(parents=True, exist_ok=True)

    flags = {
        "output": sc.output,
        "strict": bool(args.strict),
        "threads": int(args.threads),
        "tol": args.tol,
        "figures": not args.no_figures,
    }
    entries = []
    seen: dict[str, int] = {}
    all_ok = True
    t_start = time.perf_counter()
    for task in sc.tasks:
        # repeated verbs get numbered files: dichotomy.csv, dichotomy-2.csv
        count = seen.get(task.verb, 0) + 1
        seen[task.verb] = count
        stem = task.verb if count == 1 else f"{task.verb}-{count}"
        entry = {"verb": task.verb, "params": task.params, "files": []}
        try:
            with warnings.catch_warnings():
                if args.strict:
                    warnings.simplefilter("error", PruningWarning)
                result = run_task(sc, task, tol=args.tol)
        except (SkewpressError, PruningWarning) as exc:
            all_ok = False
            entry["status"] = "failed"
            entry["error"] = str(exc)
            entries.append(entry)
            print(f"{stem}: FAILED ({exc})", file=sys.stderr)
            continue
        entry["files"] = write_task(outdir, stem, sc, result)
        if not args.no_figures:
            fig = render_figure(outdir, stem, result)
            if fig:
                entry["files"].append(fig)
        entry["status"] = "ok"
        entry["wall_time_s"] = result.wall_time
        if result.audit_ok is not None:
            entry["audit_ok"] = result.audit_ok
            if not result.audit_ok:
                all_ok = False
        entries.append(entry)
        headline = ", ".join(
            f"{k}={format_number(v)}" if isinstance(v, float) else f"{k}={v}"
            for k, v in list(result.summary.items())[:4]
        )
        print(f"{stem}: {headline}  [{result.wall_time:.2f}s]")
    total = time.perf_counter() - t_start
    write_manifest(outdir, sc, flags, entries, total)
    print(f"wrote {outdir}/run-manifest.json  (total {total:.2f}s)")
    return 0 if all_ok else 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "validate":
        return _cmd_validate(args.scenario)
    return _cmd_list()


if __name__ == "__main__":
    sys.exit(main())
