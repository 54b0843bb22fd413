"""Group extensions of Markov shifts and their dynamic programming engine.

The skew product steps (x, g) to (shift x, g * psi(x_1)); a letter map psi
extends to words as the ordered product.  All partition-type quantities are
computed by a forward DP over (recoded block state, group element) with
per-layer rescaling, so values are produced in log space and never overflow.
Pruning is by relative cumulative mass per layer and is mass-accounted: the
reported bound dominates the true loss of every readout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, PreconditionError, SupportError
from .gibbs import RpfData
from .groups import Element, FreeAbelianGroup, Group, GroupMeasure
from .potentials import Potential, ergodic_sum_bounds
from .shifts import Shift, Word
from .transfer import TransferSystem, build_transfer

Constraint = tuple[str, int] | None


@dataclass(frozen=True, eq=False)
class GroupExtension:
    """A Markov shift together with a letter-to-group map."""

    shift: Shift
    group: Group
    psi: dict[int, Element]

    def __post_init__(self) -> None:
        letters = set(self.shift.letters)
        keys = {int(k) for k in self.psi}
        if keys != letters:
            raise InputError(
                f"psi must be defined on exactly the alphabet; got {sorted(keys)}"
            )
        canon = {int(k): self.group.check(v) for k, v in self.psi.items()}
        object.__setattr__(self, "psi", canon)

    def psi_word(self, word: Sequence[int]) -> Element:
        """Ordered product psi(w_1) ... psi(w_n) of an admissible word."""
        w = self.shift.require_admissible(word)
        return self.group.product(self.psi[letter] for letter in w)

    def restrict(self, letters: Sequence[int]) -> tuple["GroupExtension", dict[int, int]]:
        sub, letter_map = self.shift.restrict(letters)
        psi = {new: self.psi[old] for new, old in letter_map.items()}
        return GroupExtension(sub, self.group, psi), letter_map


def psi_word(ext: GroupExtension, word: Sequence[int]) -> Element:
    return ext.psi_word(word)


# ---------------------------------------------------------------------------
# skew tables (cylinder-resolved functions on shift x group)


@dataclass(eq=False)
class SkewTable:
    """Nonnegative table over (recoded block word, group element)."""

    group: Group
    entries: dict[tuple[Word, Element], float] = field(default_factory=dict)
    pruned_mass: float = 0.0

    def __post_init__(self) -> None:
        clean = {}
        for (w, g), v in self.entries.items():
            v = float(v)
            if v < 0:
                raise InputError(f"negative mass {v} at {(w, g)!r}")
            if v > 0:
                clean[(tuple(w), self.group.check(g))] = v
        self.entries = dict(
            sorted(clean.items(), key=lambda kv: (kv[0][0], self.group.sort_key(kv[0][1])))
        )

    def value(self, word: Word, g: Element) -> float:
        return self.entries.get((tuple(word), self.group.check(g)), 0.0)

    def group_support(self) -> list[Element]:
        seen = {g for (_, g) in self.entries}
        return sorted(seen, key=self.group.sort_key)

    def sup_norm(self) -> float:
        """Hilbert-style norm sqrt(sum_g (max over states)^2)."""
        per_g: dict[Element, float] = {}
        for (w, g), v in self.entries.items():
            per_g[g] = max(per_g.get(g, 0.0), v)
        return math.sqrt(math.fsum(v * v for v in per_g.values()))


def indicator_table(
    ts: TransferSystem, group: Group, g: Element | None = None
) -> SkewTable:
    """The function 1 on cylinder x {g}: value 1 at every block state."""
    if g is None:
        g = group.identity()
    return SkewTable(group, {(w, g): 1.0 for w in ts.states})


# ---------------------------------------------------------------------------
# the forward DP


@dataclass(eq=False)
class FiberSeries:
    """Per-length fiber readouts of a weighted skew DP sweep.

    entries[n][g] is log of the fiber sum at group element g for word
    length n (absent keys mean an empty fiber); pruned_log[n] bounds from
    above, in log space, the total value lost to pruning by length n.
    """

    bound: str
    entries: dict[int, dict[Element, float]]
    pruned_log: dict[int, float]

    def log_value(self, n: int, g: Element) -> float | None:
        row = self.entries.get(n)
        if row is None:
            return None
        return row.get(g)


def _lifted_psi(ext: GroupExtension) -> dict[int, Element]:
    return ext.psi


def _init_states(
    ts: TransferSystem,
    ext: GroupExtension,
    constraint: Constraint,
    forbid_after_first: int | None,
):
    """Initial (state, group element) weights for words of length state_len."""
    start_letter = None
    if constraint is not None:
        kind, letter = constraint
        if kind not in ("start", "start_and_return"):
            raise InputError(f"unknown constraint kind {kind!r}")
        ext.shift._check_letter(letter)
        start_letter = letter
    init = []
    for idx, w in enumerate(ts.states):
        if start_letter is not None and w[0] != start_letter:
            continue
        if forbid_after_first is not None and forbid_after_first in w[1:]:
            continue
        init.append((idx, ext.psi_word(w)))
    return init


def _final_mask(ts: TransferSystem, ext: GroupExtension, constraint: Constraint):
    if constraint is not None and constraint[0] == "start_and_return":
        a = constraint[1]
        return np.array(
            [1.0 if ext.shift.allows(w[-1], a) else 0.0 for w in ts.states]
        )
    return np.ones(len(ts.states))


def weighted_fiber_series(
    ext: GroupExtension,
    pot: Potential,
    *,
    n_max: int,
    ns: Iterable[int] | None = None,
    bound: str = "sup",
    constraint: Constraint = None,
    forbid_after_first: int | None = None,
    prune_eps: float = 0.0,
    engine: str = "auto",
    targets: object = "all",
) -> FiberSeries:
    """Fiber sums sum over {words w of length n with Psi(w) = g} of
    e^(bound of S_n phi over [w]), per length n and group element g.

    One forward sweep serves every requested length.  `targets` is "all"
    for the full fiber map, or a single group element.
    """
    if bound not in ("sup", "inf"):
        raise InputError("bound must be 'sup' or 'inf'")
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    if prune_eps < 0 or prune_eps >= 1:
        raise InputError("prune_eps must be in [0, 1)")
    wanted = sorted(set(ns)) if ns is not None else list(range(1, n_max + 1))
    if wanted and (wanted[0] < 1 or wanted[-1] > n_max):
        raise InputError("requested lengths outside 1..n_max")
    ts = build_transfer(ext.shift, pot)
    single = None if targets == "all" else ext.group.check(targets)

    entries: dict[int, dict[Element, float]] = {}
    pruned_log: dict[int, float] = {}

    small = [n for n in wanted if n < ts.state_len]
    for n in small:
        entries[n] = _enumerated_fiber(ext, pot, n, bound, constraint,
                                       forbid_after_first, single)
    big = [n for n in wanted if n >= ts.state_len]
    if not big:
        return FiberSeries(bound, entries, pruned_log)

    use_fast = engine == "fast" or (
        engine == "auto"
        and isinstance(ext.group, FreeAbelianGroup)
        and ext.group.rank == 1
    )
    if engine not in ("auto", "fast", "generic"):
        raise InputError("engine must be auto, fast or generic")
    sweep = _sweep_fast_z if use_fast else _sweep_generic
    sweep(ext, ts, set(big), max(big), bound, constraint, forbid_after_first,
          prune_eps, single, entries, pruned_log)
    return FiberSeries(bound, entries, pruned_log)


def _enumerated_fiber(ext, pot, n, bound, constraint, forbid_after_first, single):
    """Direct enumeration for lengths below the recoded block length."""
    shift = ext.shift
    out: dict[Element, float] = {}
    for w in shift.words(n):
        if constraint is not None:
            kind, a = constraint
            if w[0] != a:
                continue
            if kind == "start_and_return" and not shift.allows(w[-1], a):
                continue
        if forbid_after_first is not None and forbid_after_first in w[1:]:
            continue
        g = ext.psi_word(w)
        if single is not None and g != single:
            continue
        lo, hi = ergodic_sum_bounds(shift, pot, w)
        val = hi if bound == "sup" else lo
        out[g] = _logaddexp(out.get(g), val)
    return out


def _logaddexp(acc: float | None, term: float) -> float:
    if acc is None:
        return term
    return float(np.logaddexp(acc, term))


def _sweep_generic(ext, ts, wanted, n_stop, bound, constraint, forbid_after_first,
                   prune_eps, single, entries, pruned_log):
    group = ext.group
    psi = ext.psi
    trans = [
        (t.source, t.target, psi[t.letter], math.exp(t.exponent))
        for t in ts.transitions
    ]
    by_source: list[list[tuple[int, Element, float]]] = [[] for _ in ts.states]
    for s, tgt, delta, w in trans:
        if forbid_after_first is not None and ts.states[tgt][-1] == forbid_after_first:
            continue
        by_source[s].append((tgt, delta, w))
    u_step = max((w for *_ , w in trans), default=1.0)
    b_out = ts.boundary_sup if bound == "sup" else ts.boundary_inf
    b_cap = float(ts.boundary_sup.max())
    final = _final_mask(ts, ext, constraint)

    layer: dict[tuple[int, Element], float] = {}
    for idx, g in _init_states(ts, ext, constraint, forbid_after_first):
        layer[(idx, g)] = layer.get((idx, g), 0.0) + 1.0
    log_scale = 0.0
    pruned_scaled = 0.0

    def readout(n: int) -> None:
        row: dict[Element, float] = {}
        for (u, g), mass in layer.items():
            if single is not None and g != single:
                continue
            if final[u] == 0.0 or mass == 0.0:
                continue
            contrib = math.log(mass) + b_out[u] + log_scale
            row[g] = _logaddexp(row.get(g), contrib)
        entries[n] = row
        if pruned_scaled > 0.0:
            pruned_log[n] = math.log(pruned_scaled) + b_cap + log_scale

    n = ts.state_len
    if n in wanted:
        readout(n)
    while n < n_stop:
        new: dict[tuple[int, Element], float] = {}
        for (u, g), mass in layer.items():
            for tgt, delta, w in by_source[u]:
                key = (tgt, group.mul(g, delta))
                new[key] = new.get(key, 0.0) + mass * w
        if not new:
            raise SupportError("DP layer died out; no admissible continuation")
        layer = dict(
            sorted(new.items(), key=lambda kv: (kv[0][0], group.sort_key(kv[0][1])))
        )
        pruned_scaled *= u_step
        total = math.fsum(layer.values())
        log_scale += math.log(total)
        inv = 1.0 / total
        layer = {k: v * inv for k, v in layer.items()}
        pruned_scaled *= inv
        if prune_eps > 0.0 and len(layer) > 1:
            order = sorted(
                layer.items(), key=lambda kv: (kv[1], kv[0][0], group.sort_key(kv[0][1]))
            )
            cum = 0.0
            cut = 0
            for i, (_, v) in enumerate(order):
                if cum + v > prune_eps:
                    break
                cum += v
                cut = i + 1
            if cut:
                for key, v in order[:cut]:
                    del layer[key]
                pruned_scaled += cum
        n += 1
        if n in wanted:
            readout(n)


def _sweep_fast_z(ext, ts, wanted, n_stop, bound, constraint, forbid_after_first,
                  prune_eps, single, entries, pruned_log):
    """Vectorized sweep for rank-1 free abelian targets; exact (no pruning)."""
    psi = {letter: g[0] for letter, g in ext.psi.items()}
    max_step = max(abs(v) for v in psi.values())
    reach = max_step * n_stop
    width = 2 * reach + 1
    n_states = len(ts.states)
    moves = []
    for t in ts.transitions:
        if forbid_after_first is not None and t.letter == forbid_after_first:
            continue
        moves.append((t.source, t.target, psi[t.letter], math.exp(t.exponent)))
    b_out = np.exp(ts.boundary_sup if bound == "sup" else ts.boundary_inf)
    final = _final_mask(ts, ext, constraint) * b_out

    # extended precision: a tilted walk can put exponentially small relative
    # mass on the requested fiber, far below double's range against the
    # layer total
    layer = np.zeros((n_states, width), dtype=np.longdouble)
    for idx, g in _init_states(ts, ext, constraint, forbid_after_first):
        layer[idx, g[0] + reach] += 1.0
    log_scale = 0.0

    def readout(n: int) -> None:
        row: dict[Element, float] = {}
        if single is not None:
            cols = [single[0] + reach] if abs(single[0]) <= reach else []
        else:
            cols = list(np.nonzero(layer.any(axis=0))[0])
        for col in cols:
            val = final @ layer[:, col]
            if val > 0.0:
                row[(int(col - reach),)] = float(np.log(val)) + log_scale
        entries[n] = row

    n = ts.state_len
    if n in wanted:
        readout(n)
    while n < n_stop:
        new = np.zeros_like(layer)
        for src, tgt, delta, w in moves:
            if delta >= 0:
                new[tgt, delta:] += w * layer[src, : width - delta]
            else:
                new[tgt, : width + delta] += w * layer[src, -delta:]
        layer = new
        total = layer.sum()
        if total <= 0.0:
            raise SupportError("DP layer died out; no admissible continuation")
        layer /= total
        log_scale += float(np.log(total))
        n += 1
        if n in wanted:
            readout(n)


# ---------------------------------------------------------------------------
# public partition operations


def partition_sum(
    ext: GroupExtension,
    pot: Potential,
    n: int,
    target: Element | None = None,
    constraint: Constraint = None,
    bound: str = "sup",
    prune_eps: float = 0.0,
    engine: str = "auto",
) -> tuple[float, float]:
    """Fiber partition sum at one length and one target element.

    Returns (value, pruned_bound); the value is the plain float and may
    overflow to inf for very long words, in which case the log-space series
    interface is the right tool.
    """
    g = ext.group.identity() if target is None else ext.group.check(target)
    series = weighted_fiber_series(
        ext, pot, n_max=n, ns=[n], bound=bound, constraint=constraint,
        prune_eps=prune_eps, engine=engine, targets=g,
    )
    log_v = series.log_value(n, g)
    value = 0.0 if log_v is None else float(np.exp(log_v))
    pl = series.pruned_log.get(n)
    pruned = 0.0 if pl is None else float(np.exp(pl))
    return value, pruned


def fiber_sums(
    ext: GroupExtension,
    pot: Potential,
    n: int,
    bound: str = "sup",
    constraint: Constraint = None,
    prune_eps: float = 0.0,
    engine: str = "auto",
) -> dict[Element, float]:
    """Full fiber map g -> partition sum at length n (plain floats)."""
    series = weighted_fiber_series(
        ext, pot, n_max=n, ns=[n], bound=bound, constraint=constraint,
        prune_eps=prune_eps, engine=engine, targets="all",
    )
    return {g: float(np.exp(lv)) for g, lv in series.entries.get(n, {}).items()}


# ---------------------------------------------------------------------------
# step distributions of the Gibbs chain


def step_distribution(
    ext: GroupExtension,
    rpf: RpfData,
    n: int,
    prune_eps: float = 0.0,
    engine: str = "auto",
) -> GroupMeasure:
    """Law of Psi(first n letters) under the Gibbs measure."""
    return step_distribution_series(ext, rpf, [n], prune_eps, engine)[n]


def step_distribution_series(
    ext: GroupExtension,
    rpf: RpfData,
    ns: Iterable[int],
    prune_eps: float = 0.0,
    engine: str = "auto",
) -> dict[int, GroupMeasure]:
    """One sweep of the stochastic skew DP with readouts at several lengths."""
    wanted = sorted(set(int(n) for n in ns))
    if not wanted or wanted[0] < 1:
        raise InputError("lengths must be >= 1")
    if prune_eps < 0 or prune_eps >= 1:
        raise InputError("prune_eps must be in [0, 1)")
    ts = rpf.system
    if ts.shift.incidence != ext.shift.incidence:
        raise InputError("rpf data and extension use different shifts")
    group = ext.group
    out: dict[int, GroupMeasure] = {}

    small = [n for n in wanted if n < ts.state_len]
    for n in small:
        masses: dict[Element, float] = {}
        for i, w in enumerate(ts.states):
            g = ext.psi_word(w[:n])
            masses[g] = masses.get(g, 0.0) + float(rpf.stationary[i])
        out[n] = GroupMeasure(group, masses)
    big = [n for n in wanted if n >= ts.state_len]
    if not big:
        return out

    layer: dict[tuple[int, Element], float] = {}
    for i, w in enumerate(ts.states):
        g = ext.psi_word(w)
        key = (i, g)
        layer[key] = layer.get(key, 0.0) + float(rpf.stationary[i])
    pruned = 0.0
    steps = [
        (t.source, t.target, ext.psi[t.letter], float(rpf.transition[t.source, t.target]))
        for t in ts.transitions
    ]
    by_source: list[list[tuple[int, Element, float]]] = [[] for _ in ts.states]
    for s, tgt, delta, p in steps:
        if p > 0.0:
            by_source[s].append((tgt, delta, p))

    def readout(n: int) -> None:
        masses: dict[Element, float] = {}
        for (u, g), mass in layer.items():
            masses[g] = masses.get(g, 0.0) + mass
        out[n] = GroupMeasure(group, masses, pruned_mass=pruned)

    n = ts.state_len
    if n in big:
        readout(n)
    while n < big[-1]:
        new: dict[tuple[int, Element], float] = {}
        for (u, g), mass in layer.items():
            for tgt, delta, p in by_source[u]:
                key = (tgt, group.mul(g, delta))
                new[key] = new.get(key, 0.0) + mass * p
        layer = dict(
            sorted(new.items(), key=lambda kv: (kv[0][0], group.sort_key(kv[0][1])))
        )
        if prune_eps > 0.0 and len(layer) > 1:
            total = math.fsum(layer.values())
            order = sorted(
                layer.items(), key=lambda kv: (kv[1], kv[0][0], group.sort_key(kv[0][1]))
            )
            cum = 0.0
            cut = 0
            for i, (_, v) in enumerate(order):
                if cum + v > prune_eps * total:
                    break
                cum += v
                cut = i + 1
            if cut:
                for key, _ in order[:cut]:
                    del layer[key]
                pruned += cum
        n += 1
        if n in big:
            readout(n)
    return out


# ---------------------------------------------------------------------------
# irreducibility probe


@dataclass(frozen=True)
class IrreducibilityProbe:
    status: str  # "proven" or "unknown"
    depth_cap: int
    ball_radius: int
    missing: tuple[tuple[int, int, Element], ...]  # (i, j, unreached g), sample


def irreducibility_probe(ext: GroupExtension, depth_cap: int) -> IrreducibilityProbe:
    """One-sided irreducibility check of the skew product.

    For every letter pair (i, j) and every g in the ball of radius
    depth_cap // 2, searches for an admissible word i w (|w| <= depth_cap)
    with Psi(i w) = g and w j admissible.  Finding all of them proves
    irreducibility on the probed ball; anything else is reported unknown.
    """
    if depth_cap < 1:
        raise InputError("depth_cap must be >= 1")
    shift, group = ext.shift, ext.group
    radius = depth_cap // 2
    required = group.ball(radius)
    missing: list[tuple[int, int, Element]] = []
    for i in shift.letters:
        # reachable[(last letter, Psi(i w))] over |w| <= depth_cap
        frontier = {(i, ext.psi[i])}
        seen_by_last: dict[int, set[Element]] = {i: {ext.psi[i]}}
        for _ in range(depth_cap):
            nxt = set()
            for last, g in frontier:
                for j in shift.successors(last):
                    h = group.mul(g, ext.psi[j])
                    bucket = seen_by_last.setdefault(j, set())
                    if h not in bucket:
                        bucket.add(h)
                        nxt.add((j, h))
            frontier = nxt
            if not frontier:
                break
        for j in shift.letters:
            achieved: set[Element] = set()
            for last, bucket in seen_by_last.items():
                if shift.allows(last, j):
                    achieved |= bucket
            for g in required:
                if g not in achieved:
                    missing.append((i, j, g))
    status = "proven" if not missing else "unknown"
    return IrreducibilityProbe(status, depth_cap, radius, tuple(missing[:12]))
