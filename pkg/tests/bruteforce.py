"""Slow independent oracles used to pin test expectations.

Everything here is deliberately naive: explicit product enumeration, dict
convolution, textbook free-group cancellation.  Nothing imports the package
under test, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import math


def words(incidence, n):
    """All admissible words of length n, letters 1..m."""
    m = len(incidence)
    out = []
    for w in itertools.product(range(1, m + 1), repeat=n):
        if all(incidence[w[i] - 1][w[i + 1] - 1] for i in range(n - 1)):
            out.append(w)
    return out


def continuations(incidence, last, k):
    """Admissible length-k continuations after the letter `last`."""
    if k == 0:
        return [()]
    m = len(incidence)
    outs = []

    def rec(prev, built):
        if len(built) == k:
            outs.append(tuple(built))
            return
        for j in range(1, m + 1):
            if incidence[prev - 1][j - 1]:
                rec(j, built + [j])

    rec(last, [])
    return outs


def sup_ergodic_sum(incidence, phi, memory, w):
    """sup over the cylinder [w] of the length-|w| ergodic sum.

    phi is a dict keyed by memory-length letter tuples.  The last memory-1
    terms depend on the continuation; the sup maximizes their joint sum.
    """
    n = len(w)
    assert n >= memory, "oracle only handles n >= memory"
    head = sum(phi[w[i:i + memory]] for i in range(n - memory + 1))
    if memory == 1:
        return head
    best = -math.inf
    for c in continuations(incidence, w[-1], memory - 1):
        ww = w + c
        tail = sum(phi[ww[i:i + memory]] for i in range(n - memory + 1, n))
        best = max(best, tail)
    return head + best


def zn(incidence, phi, memory, a, n, first_return=False):
    """Weighted count of length-n words starting at a and continuable by a."""
    total = 0.0
    for w in words(incidence, n):
        if w[0] != a or not incidence[w[-1] - 1][a - 1]:
            continue
        if first_return and a in w[1:]:
            continue
        total += math.exp(sup_ergodic_sum(incidence, phi, memory, w))
    return total


def fiber_sums(incidence, phi, memory, psi, mul, identity, n):
    """g -> sum of e^{sup S_n} over unconstrained words with Psi(w) = g."""
    out = {}
    for w in words(incidence, n):
        g = identity
        for letter in w:
            g = mul(g, psi[letter])
        val = math.exp(sup_ergodic_sum(incidence, phi, memory, w))
        out[g] = out.get(g, 0.0) + val
    return out


# ---------------------------------------------------------------------------
# free group words as tuples of nonzero ints, generator i / inverse -i


def free_reduce(seq):
    out = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_mul(u, v):
    return free_reduce(tuple(u) + tuple(v))


def free_inv(u):
    return tuple(-x for x in reversed(u))


def srw_return_count(rank, n):
    """Length-n words over the 2*rank symmetric letters reducing to identity."""
    gens = list(range(1, rank + 1)) + [-i for i in range(1, rank + 1)]
    count = 0
    for w in itertools.product(gens, repeat=n):
        if not free_reduce(w):
            count += 1
    return count


# ---------------------------------------------------------------------------
# measures as plain dicts


def naive_convolve(mu, nu, mul):
    out = {}
    for g, x in mu.items():
        for h, y in nu.items():
            k = mul(g, h)
            out[k] = out.get(k, 0.0) + x * y
    return out


def naive_power(mu, k, mul, identity):
    out = {identity: 1.0}
    for _ in range(k):
        out = naive_convolve(out, mu, mul)
    return out
