"""Countable groups and finitely supported nonnegative measures on them.

Three element representations are supported:

* finite groups: elements are integers 0..order-1 acting through a Cayley
  table (validated as a Latin square with consistent identity and inverses);
* free abelian groups Z^d: elements are integer coordinate tuples;
* free groups F_k: elements are reduced words stored as tuples of nonzero
  generator indices, -i denoting the inverse of generator i.

Measures are dicts from elements to nonnegative masses plus a pruned-mass
account, so that dropped weight is never silent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InputError, ResourceError

# Any group element is an int (finite) or a tuple of ints (Z^d, F_k).
Element = int | tuple[int, ...]

_BALL_CAP = 2_000_000


class Group:
    """Interface shared by the three group families."""

    name: str

    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def check(self, g: Element) -> Element:
        """Validate and canonicalize an element; raise InputError otherwise."""
        raise NotImplementedError

    def sort_key(self, g: Element):
        """Total order used for deterministic accumulation."""
        raise NotImplementedError

    def ball(self, radius: int) -> list[Element]:
        """Word-metric ball as a deterministically ordered list."""
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def product(self, elements: Iterable[Element]) -> Element:
        out = self.identity()
        for g in elements:
            out = self.mul(out, g)
        return out


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroup(Group):
    def __init__(self, table: Sequence[Sequence[int]], name: str = "finite") -> None:
        n = len(table)
        if n == 0:
            raise InputError("Cayley table must be nonempty")
        rows = []
        for row in table:
            r = tuple(int(v) for v in row)
            if len(r) != n or any(not 0 <= v < n for v in r):
                raise InputError("Cayley table must be square over 0..n-1")
            rows.append(r)
        self.table = tuple(rows)
        self.order = n
        self.name = name
        full = frozenset(range(n))
        for r in self.table:
            if frozenset(r) != full:
                raise InputError("Cayley table rows must be permutations")
        for j in range(n):
            if frozenset(r[j] for r in self.table) != full:
                raise InputError("Cayley table columns must be permutations")
        # identity: the unique e with e*g = g*e = g for all g
        ident = None
        for e in range(n):
            if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n)):
                ident = e
                break
        if ident is None:
            raise InputError("Cayley table has no identity element")
        self._identity = ident
        inv = [None] * n
        for g in range(n):
            for h in range(n):
                if self.table[g][h] == ident and self.table[h][g] == ident:
                    inv[g] = h
                    break
            if inv[g] is None:
                raise InputError(f"element {g} has no two-sided inverse")
        self._inv = tuple(inv)

    def identity(self) -> int:
        return self._identity

    def mul(self, g: Element, h: Element) -> int:
        return self.table[g][h]

    def inv(self, g: Element) -> int:
        return self._inv[g]

    def check(self, g: Element) -> int:
        if isinstance(g, bool) or not isinstance(g, int) or not 0 <= g < self.order:
            raise InputError(f"{g!r} is not an element index of {self.name}")
        return g

    def sort_key(self, g: Element):
        return g

    def ball(self, radius: int) -> list[int]:
        return list(range(self.order))

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> list[int]:
        return list(range(self.order))


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError("cyclic group order must be >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name=f"Z{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="trivial")


def symmetric_group_3() -> FiniteGroup:
    """Order-6 permutation group of three points.

    Element indices enumerate the permutations of (0, 1, 2) in lexicographic
    order: 0=(012), 1=(021), 2=(102), 3=(120), 4=(201), 5=(210); index 0 is
    the identity and composition is left-to-right on points.
    """
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for p in perms:
        row = []
        for q in perms:
            composed = tuple(q[p[x]] for x in range(3))
            row.append(index[composed])
        table.append(row)
    return FiniteGroup(table, name="S3")


_FINITE_CATALOG = {"trivial": trivial_group, "s3": symmetric_group_3}


def finite_group_by_name(name: str) -> FiniteGroup:
    key = name.strip().lower()
    if key in _FINITE_CATALOG:
        return _FINITE_CATALOG[key]()
    if key.startswith("z") and key[1:].isdigit():
        return cyclic_group(int(key[1:]))
    raise InputError(
        f"unknown finite group {name!r}; known: trivial, S3, Z<n>, or a Cayley table"
    )


# ---------------------------------------------------------------------------
# free abelian groups Z^d


class FreeAbelianGroup(Group):
    def __init__(self, rank: int) -> None:
        if rank < 1:
            raise InputError("rank must be >= 1")
        self.rank = rank
        self.name = f"Z^{rank}"

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def mul(self, g: Element, h: Element) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g: Element) -> tuple[int, ...]:
        return tuple(-a for a in g)

    def check(self, g: Element) -> tuple[int, ...]:
        if not isinstance(g, (tuple, list)) or len(g) != self.rank:
            raise InputError(f"{g!r} is not a rank-{self.rank} integer vector")
        return tuple(int(v) for v in g)

    def sort_key(self, g: Element):
        return g

    def norm(self, g: Element) -> int:
        return sum(abs(v) for v in g)

    def ball(self, radius: int) -> list[tuple[int, ...]]:
        """All vectors with l1 norm <= radius, lexicographically ordered."""
        if radius < 0:
            raise InputError("radius must be >= 0")
        size = _l1_ball_size(self.rank, radius)
        if size > _BALL_CAP:
            raise ResourceError(f"ball of size {size} exceeds cap {_BALL_CAP}")
        out: list[tuple[int, ...]] = []

        def rec(prefix: list[int], budget: int) -> None:
            if len(prefix) == self.rank:
                out.append(tuple(prefix))
                return
            for v in range(-budget, budget + 1):
                prefix.append(v)
                rec(prefix, budget - abs(v))
                prefix.pop()

        rec([], radius)
        out.sort()
        return out


def _l1_ball_size(d: int, r: int) -> int:
    # Sum over the number k of nonzero coordinates.
    return sum(
        math.comb(d, k) * (2**k) * math.comb(r, k) for k in range(min(d, r) + 1)
    )


# ---------------------------------------------------------------------------
# free groups F_k


class FreeGroup(Group):
    """Free group on k generators; elements are reduced words.

    A reduced word is a tuple of nonzero ints in -k..k with no adjacent
    cancelling pair (i, -i).  The canonical byte-free encoding is the tuple
    itself, which doubles as the hash key.
    """

    def __init__(self, rank: int) -> None:
        if rank < 1:
            raise InputError("rank must be >= 1")
        self.rank = rank
        self.name = f"F{rank}"

    def identity(self) -> tuple[int, ...]:
        return ()

    def mul(self, g: Element, h: Element) -> tuple[int, ...]:
        ga = list(g)
        for s in h:
            if ga and ga[-1] == -s:
                ga.pop()
            else:
                ga.append(s)
        return tuple(ga)

    def inv(self, g: Element) -> tuple[int, ...]:
        return tuple(-s for s in reversed(g))

    def check(self, g: Element) -> tuple[int, ...]:
        if not isinstance(g, (tuple, list)):
            raise InputError(f"{g!r} is not a generator-index word")
        w = tuple(int(s) for s in g)
        for s in w:
            if s == 0 or abs(s) > self.rank:
                raise InputError(f"generator index {s} outside 1..{self.rank}")
        for a, b in zip(w, w[1:]):
            if a == -b:
                raise InputError(f"word {w} is not reduced")
        return w

    def sort_key(self, g: Element):
        return (len(g), g)

    def norm(self, g: Element) -> int:
        return len(g)

    def generators(self) -> list[tuple[int, ...]]:
        """g_1, g_1^-1, g_2, g_2^-1, ... in that order."""
        out = []
        for i in range(1, self.rank + 1):
            out.append((i,))
            out.append((-i,))
        return out

    def sphere_size(self, radius: int) -> int:
        if radius == 0:
            return 1
        return 2 * self.rank * (2 * self.rank - 1) ** (radius - 1)

    def ball(self, radius: int) -> list[tuple[int, ...]]:
        """All reduced words of length <= radius, ordered by (length, word)."""
        if radius < 0:
            raise InputError("radius must be >= 0")
        size = sum(self.sphere_size(r) for r in range(radius + 1))
        if size > _BALL_CAP:
            raise ResourceError(f"ball of size {size} exceeds cap {_BALL_CAP}")
        out: list[tuple[int, ...]] = [()]
        sphere: list[tuple[int, ...]] = [()]
        for _ in range(radius):
            nxt = []
            for w in sphere:
                for s in range(-self.rank, self.rank + 1):
                    if s == 0 or (w and w[-1] == -s):
                        continue
                    nxt.append(w + (s,))
            sphere = nxt
            out.extend(sphere)
        out.sort(key=self.sort_key)
        return out


# ---------------------------------------------------------------------------
# measures


@dataclass
class GroupMeasure:
    """Finitely supported nonnegative measure with explicit pruned mass."""

    group: Group
    masses: dict[Element, float] = field(default_factory=dict)
    pruned_mass: float = 0.0

    def __post_init__(self) -> None:
        clean: dict[Element, float] = {}
        for g, v in self.masses.items():
            v = float(v)
            if v < 0:
                raise InputError(f"negative mass {v} at {g!r}")
            if v > 0:
                clean[self.group.check(g)] = v
        self.masses = dict(
            sorted(clean.items(), key=lambda kv: self.group.sort_key(kv[0]))
        )
        if self.pruned_mass < 0:
            raise InputError("pruned mass cannot be negative")

    @property
    def total_mass(self) -> float:
        return math.fsum(self.masses.values())

    @property
    def accounted_mass(self) -> float:
        """Live plus pruned mass; conserved by convolution."""
        return self.total_mass + self.pruned_mass

    def __call__(self, g: Element) -> float:
        return self.masses.get(self.group.check(g), 0.0)

    def support(self) -> list[Element]:
        return list(self.masses)

    def scale(self, c: float) -> "GroupMeasure":
        if c < 0:
            raise InputError("scale factor must be nonnegative")
        return GroupMeasure(
            self.group,
            {g: c * v for g, v in self.masses.items()},
            pruned_mass=c * self.pruned_mass,
        )


def reflect(mu: GroupMeasure) -> GroupMeasure:
    """Image under inversion: reflect(mu)(g) = mu(g^-1)."""
    grp = mu.group
    return GroupMeasure(
        grp,
        {grp.inv(g): v for g, v in mu.masses.items()},
        pruned_mass=mu.pruned_mass,
    )


def convolve(
    mu: GroupMeasure, nu: GroupMeasure, prune_eps: float = 0.0
) -> GroupMeasure:
    """Convolution (mu * nu)(g) = sum_h mu(h) nu(h^-1 g).

    Entries of the result strictly below prune_eps are dropped with their
    mass added to the pruned account; with prune_eps = 0 the result is exact.
    Accounted mass is conserved multiplicatively:
    out.accounted = mu.accounted * nu.accounted up to rounding.
    """
    if mu.group is not nu.group and mu.group.name != nu.group.name:
        raise InputError("cannot convolve measures over different groups")
    if prune_eps < 0:
        raise InputError("prune_eps must be >= 0")
    grp = mu.group
    acc: dict[Element, float] = {}
    for g, a in mu.masses.items():
        for h, b in nu.masses.items():
            k = grp.mul(g, h)
            acc[k] = acc.get(k, 0.0) + a * b
    dropped = 0.0
    if prune_eps > 0:
        kept = {}
        for g, v in acc.items():
            if v < prune_eps:
                dropped += v
            else:
                kept[g] = v
        acc = kept
    carried = (
        mu.pruned_mass * nu.accounted_mass + nu.pruned_mass * mu.total_mass
    )
    return GroupMeasure(grp, acc, pruned_mass=carried + dropped)


def convolution_power(
    mu: GroupMeasure, k: int, prune_eps: float = 0.0
) -> GroupMeasure:
    if k < 1:
        raise InputError("convolution power needs k >= 1")
    out = mu
    for _ in range(k - 1):
        out = convolve(out, mu, prune_eps=prune_eps)
    return out


def point_mass(group: Group, g: Element | None = None) -> GroupMeasure:
    if g is None:
        g = group.identity()
    return GroupMeasure(group, {g: 1.0})
