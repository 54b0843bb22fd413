"""Scenario files: parsing, validation, bundled catalog.

A scenario is a JSON object wiring one shift, one potential, one group with
its per-letter step labels, and an ordered task list into a run plan.
Validation is strict and never executes tasks: unknown keys, bad letters and
malformed tables raise SchemaError naming the offending field.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .errors import SchemaError
from .extensions import GroupExtension
from .groups import (
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    Group,
    finite_group_by_name,
)
from .potentials import Potential, lambda_potential
from .shifts import Shift

VERBS = (
    "pressure-base",
    "pressure-ext",
    "spectral-radius",
    "dichotomy",
    "symmetry",
    "gibbs-audit",
    "lemma33-audit",
)

# recognized per-verb parameter names; validate rejects anything else
_VERB_PARAMS: dict[str, frozenset[str]] = {
    "pressure-base": frozenset({"method", "a", "check_depth", "n_max"}),
    "pressure-ext": frozenset({"n_max", "prune_eps", "engine", "a", "tail_fraction"}),
    "spectral-radius": frozenset({"n_schedule", "method", "prune_eps", "k_max", "grid"}),
    "dichotomy": frozenset(
        {"tol", "margin", "method", "prune_eps", "k_max", "n_schedule"}
    ),
    "symmetry": frozenset({"n_range", "window", "prune_eps", "corollary", "n_max"}),
    "gibbs-audit": frozenset({"n_max"}),
    "lemma33-audit": frozenset({"n_max", "prune_eps", "method", "tol"}),
}

_TOP_KEYS = frozenset({"shift", "potential", "group", "psi", "tasks", "output"})


@dataclass(frozen=True, eq=False)
class Task:
    verb: str
    params: dict[str, Any]


@dataclass(frozen=True, eq=False)
class Scenario:
    """Validated run plan with the constructed objects alongside the raw dict."""

    name: str
    shift: Shift
    potential: Potential
    group: Group
    psi: dict[int, Any]
    extension: GroupExtension
    tasks: tuple[Task, ...]
    output: str
    raw: dict[str, Any]


def _require(obj: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in obj:
        raise SchemaError(f'{where}: missing "{key}" key')
    return obj[key]


def _as_object(value: Any, where: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise SchemaError(f"{where}: expected an object, got {type(value).__name__}")
    return value


def _as_int(value: Any, where: str) -> int:
    # bools are ints in Python; a scenario saying "true" for a count is a bug
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _parse_shift(spec: Any) -> Shift:
    obj = _as_object(spec, '"shift"')
    keys = set(obj)
    if keys == {"full_shift"}:
        m = _as_int(obj["full_shift"], '"shift.full_shift"')
        if m < 1:
            raise SchemaError('"shift.full_shift": alphabet size must be >= 1')
        return Shift.full(m)
    if keys == {"alphabet", "incidence"}:
        m = _as_int(obj["alphabet"], '"shift.alphabet"')
        rows = obj["incidence"]
        if not isinstance(rows, list) or len(rows) != m:
            raise SchemaError(f'"shift.incidence": expected {m} rows')
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != m:
                raise SchemaError(f'"shift.incidence" row {i}: expected {m} entries')
            for j, v in enumerate(row):
                if v not in (0, 1) or isinstance(v, bool):
                    raise SchemaError(
                        f'"shift.incidence"[{i}][{j}]: entries must be 0 or 1'
                    )
        return Shift.from_matrix(rows)
    raise SchemaError(
        '"shift": expected {"full_shift": m} or {"alphabet": m, "incidence": [[...]]}, '
        f"got keys {sorted(keys)}"
    )


def _parse_word_key(key: str, memory: int, where: str) -> tuple[int, ...]:
    parts = key.split("-")
    try:
        word = tuple(int(p) for p in parts)
    except ValueError:
        raise SchemaError(f'{where}: key "{key}" is not a dash-joined letter word')
    if len(word) != memory:
        raise SchemaError(
            f'{where}: key "{key}" has length {len(word)}, expected {memory}'
        )
    return word


def _parse_potential(spec: Any, shift: Shift) -> Potential:
    obj = _as_object(spec, '"potential"')
    keys = set(obj)
    if keys == {"lambda_example"}:
        lam = _as_number(obj["lambda_example"], '"potential.lambda_example"')
        if shift.alphabet_size != 2:
            raise SchemaError(
                '"potential.lambda_example": needs the full 2-shift '
                f"(got {shift.alphabet_size} letters)"
            )
        return lambda_potential(lam)
    if keys == {"memory", "values"}:
        memory = _as_int(obj["memory"], '"potential.memory"')
        if memory < 1:
            raise SchemaError('"potential.memory": must be >= 1')
        values = _as_object(obj["values"], '"potential.values"')
        table = {}
        for key, v in values.items():
            word = _parse_word_key(key, memory, '"potential.values"')
            table[word] = _as_number(v, f'"potential.values.{key}"')
        try:
            pot = Potential(memory, table)
            pot.validate_against(shift)
        except Exception as exc:
            raise SchemaError(f'"potential.values": {exc}') from exc
        return pot
    raise SchemaError(
        '"potential": expected {"memory": k, "values": {...}} or '
        f'{{"lambda_example": x}}, got keys {sorted(keys)}'
    )


def _parse_group(spec: Any) -> Group:
    obj = _as_object(spec, '"group"')
    kind = _require(obj, "type", '"group"')
    if kind == "free":
        if set(obj) != {"type", "rank"}:
            raise SchemaError('"group": free groups take exactly {"type", "rank"}')
        rank = _as_int(obj["rank"], '"group.rank"')
        return FreeGroup(rank)
    if kind == "free_abelian":
        if set(obj) != {"type", "rank"}:
            raise SchemaError(
                '"group": free abelian groups take exactly {"type", "rank"}'
            )
        rank = _as_int(obj["rank"], '"group.rank"')
        return FreeAbelianGroup(rank)
    if kind == "finite":
        rest = set(obj) - {"type"}
        if rest == {"name"}:
            if not isinstance(obj["name"], str):
                raise SchemaError('"group.name": expected a string')
            try:
                return finite_group_by_name(obj["name"])
            except Exception as exc:
                raise SchemaError(f'"group.name": {exc}') from exc
        if rest == {"cayley"}:
            table = obj["cayley"]
            if not isinstance(table, list):
                raise SchemaError('"group.cayley": expected a list of rows')
            try:
                return FiniteGroup(table)
            except Exception as exc:
                raise SchemaError(f'"group.cayley": {exc}') from exc
        raise SchemaError('"group": finite groups take "name" or "cayley"')
    raise SchemaError(
        f'"group.type": unknown type {kind!r}; valid: free, free_abelian, finite'
    )


def _parse_free_letter(text: str, rank: int, where: str) -> tuple[int, ...]:
    if not isinstance(text, str) or len(text) != 1:
        raise SchemaError(
            f"{where}: expected a single generator letter string, got {text!r}"
        )
    lower = text.lower()
    if lower not in string.ascii_lowercase[:rank]:
        valid = ", ".join(string.ascii_lowercase[:rank])
        raise SchemaError(f"{where}: letter {text!r} outside generators {valid}")
    idx = ord(lower) - ord("a") + 1
    # capital letter denotes the inverse generator
    return (-idx,) if text.isupper() else (idx,)


def _parse_psi(spec: Any, shift: Shift, group: Group) -> dict[int, Any]:
    obj = _as_object(spec, '"psi"')
    psi: dict[int, Any] = {}
    expected = set(shift.letters)
    for key, value in obj.items():
        try:
            letter = int(key)
        except ValueError:
            raise SchemaError(f'"psi": key {key!r} is not a letter')
        if letter not in expected:
            raise SchemaError(f'"psi": letter {letter} is not in the alphabet')
        where = f'"psi.{key}"'
        if isinstance(group, FreeGroup):
            psi[letter] = _parse_free_letter(value, group.rank, where)
        elif isinstance(group, FreeAbelianGroup):
            if not isinstance(value, list) or len(value) != group.rank:
                raise SchemaError(
                    f"{where}: expected an integer vector of length {group.rank}"
                )
            psi[letter] = tuple(_as_int(v, where) for v in value)
        else:
            idx = _as_int(value, where)
            if not 0 <= idx < group.order:
                raise SchemaError(
                    f"{where}: element index {idx} outside 0..{group.order - 1}"
                )
            psi[letter] = idx
    missing = sorted(expected - set(psi))
    if missing:
        raise SchemaError(f'"psi": missing letters {missing}')
    return psi


def _parse_tasks(spec: Any) -> tuple[Task, ...]:
    if not isinstance(spec, list) or not spec:
        raise SchemaError('"tasks": expected a nonempty list')
    tasks = []
    for i, entry in enumerate(spec):
        obj = _as_object(entry, f'"tasks"[{i}]')
        verb = _require(obj, "verb", f'"tasks"[{i}]')
        if verb not in VERBS:
            raise SchemaError(
                f'"tasks"[{i}].verb: unknown verb {verb!r}; valid: '
                + ", ".join(VERBS)
            )
        extra = set(obj) - {"verb", "params"}
        if extra:
            raise SchemaError(f'"tasks"[{i}]: unknown keys {sorted(extra)}')
        params = _as_object(obj.get("params", {}), f'"tasks"[{i}].params')
        unknown = set(params) - _VERB_PARAMS[verb]
        if unknown:
            raise SchemaError(
                f'"tasks"[{i}].params: unknown parameters {sorted(unknown)} '
                f"for verb {verb!r}; valid: {sorted(_VERB_PARAMS[verb])}"
            )
        tasks.append(Task(verb, dict(params)))
    return tuple(tasks)


def validate_scenario(obj: Any, name: str = "scenario") -> Scenario:
    """Build a Scenario from a parsed JSON object, or raise SchemaError."""

    top = _as_object(obj, "scenario")
    extra = set(top) - _TOP_KEYS
    if extra:
        raise SchemaError(f"scenario: unknown keys {sorted(extra)}")
    shift = _parse_shift(_require(top, "shift", "scenario"))
    potential = _parse_potential(_require(top, "potential", "scenario"), shift)
    group = _parse_group(_require(top, "group", "scenario"))
    psi = _parse_psi(_require(top, "psi", "scenario"), shift, group)
    tasks = _parse_tasks(_require(top, "tasks", "scenario"))
    output = top.get("output", "csv")
    if output not in ("csv", "json"):
        raise SchemaError(f'"output": expected "csv" or "json", got {output!r}')
    try:
        extension = GroupExtension(shift, group, psi)
    except Exception as exc:
        raise SchemaError(f"scenario: inconsistent extension: {exc}") from exc
    return Scenario(
        name=name,
        shift=shift,
        potential=potential,
        group=group,
        psi=psi,
        extension=extension,
        tasks=tasks,
        output=output,
        raw=dict(top),
    )


def _parse_json_text(text: str, label: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"{label}: JSON parse error at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc


def bundled_scenarios() -> dict[str, str]:
    """Name -> JSON text for every scenario shipped with the package."""

    root = resources.files("skewpress").joinpath("data/scenarios")
    out = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out[entry.name[: -len(".json")]] = entry.read_text()
    return out


def load_scenario(ref: str | Path) -> Scenario:
    """Load from a file path, or fall back to a bundled scenario name."""

    path = Path(ref)
    if path.is_file():
        text = path.read_text()
        return validate_scenario(_parse_json_text(text, str(path)), path.stem)
    name = path.name[: -len(".json")] if path.name.endswith(".json") else path.name
    bundle = bundled_scenarios()
    if name in bundle:
        return validate_scenario(_parse_json_text(bundle[name], name), name)
    raise SchemaError(
        f"{ref}: not a file and not a bundled scenario "
        f"(bundled: {', '.join(sorted(bundle))})"
    )
