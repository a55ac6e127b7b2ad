"""Bisections with extremal cut size, and the subset-density imbalance
quantities disc+/disc- used by the regular-graph bisection bound.

Exhaustive search enumerates floor(n/2)-subsets with incremental inside-edge
counts; disc+/disc- walks all 2^n subsets in Gray-code order with O(1)
updates.  Everything is exact: deviations are Fractions, never floats.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exactmath import derive_seed
from .graphcore import CapacityError, Graph, ParameterError, Seed, bits_of

EXHAUSTIVE_BISECTION_CAP = 30
EXACT_DISC_CAP = 24


@dataclass(frozen=True)
class Bisection:
    """Vertex split (U, V) with |U| = floor(n/2); deviation is cut - e(F)/2."""

    n: int
    u_side: int
    cut_size: int
    deviation: Fraction

    def v_side(self) -> int:
        return ((1 << self.n) - 1) ^ self.u_side


@dataclass(frozen=True)
class DiscPM:
    """Max of e(U) - p*C(|U|,2) and its negation over all vertex subsets U."""

    disc_plus: Fraction
    disc_minus: Fraction
    witness_plus: int
    witness_minus: int
    exact: bool


def cut_of(g: Graph, u_mask: int) -> int:
    v_mask = g.full_mask ^ u_mask
    return g.edges_between(u_mask, v_mask)


def bisection_from_mask(g: Graph, u_mask: int) -> Bisection:
    if u_mask.bit_count() != g.n // 2:
        raise ParameterError("u_side must have exactly floor(n/2) vertices")
    cut = cut_of(g, u_mask)
    return Bisection(g.n, u_mask, cut, Fraction(2 * cut - g.edge_count, 2))


def exhaustive_extremal_bisection(f: Graph, direction: str = "max") -> Bisection:
    """True optimum cut over all floor(n/2)-subsets; ties break on the
    smallest u_side bitmask (as an integer)."""
    if direction not in ("max", "min"):
        raise ParameterError("direction must be 'max' or 'min'")
    if f.n > EXHAUSTIVE_BISECTION_CAP:
        raise CapacityError(f"exhaustive bisection capped at n = {EXHAUSTIVE_BISECTION_CAP}")
    n, k = f.n, f.n // 2
    adj = f.adj
    degs = [a.bit_count() for a in adj]
    sign = 1 if direction == "max" else -1
    best_val: int | None = None
    best_mask = 0

    def rec(start: int, size: int, mask: int, e_in: int, deg_sum: int) -> None:
        nonlocal best_val, best_mask
        if size == k:
            val = sign * (deg_sum - 2 * e_in)
            if best_val is None or val > best_val or (val == best_val and mask < best_mask):
                best_val, best_mask = val, mask
            return
        # still need (k - size) vertices from start..n-1
        for v in range(start, n - (k - size) + 1):
            b = 1 << v
            rec(v + 1, size + 1, mask | b, e_in + (adj[v] & mask).bit_count(),
                deg_sum + degs[v])

    rec(0, 0, 0, 0, 0)
    assert best_val is not None
    cut = sign * best_val
    return Bisection(n, best_mask, cut, Fraction(2 * cut - f.edge_count, 2))


def local_search_bisection(f: Graph, direction: str = "max", budget: int = 10_000,
                           seed: Seed = 0) -> Bisection:
    """Best-of-restarts hill climbing on the swap neighborhood.

    The neighborhood exchanges one vertex from each side (preserving balance);
    moves use first-improvement in index order.  ``budget`` counts candidate
    swap evaluations across all restarts, so runtime is predictable.  The best
    bisection seen anywhere (including each random start) is returned.
    """
    if direction not in ("max", "min"):
        raise ParameterError("direction must be 'max' or 'min'")
    if budget < 1:
        raise ParameterError("budget must be >= 1")
    n, k = f.n, f.n // 2
    adj = f.adj
    sign = 1 if direction == "max" else -1
    rng = random.Random(derive_seed(seed, 0xB15E))
    best_val: int | None = None
    best_mask = 0

    def consider(mask: int, cut: int) -> None:
        nonlocal best_val, best_mask
        val = sign * cut
        if best_val is None or val > best_val or (val == best_val and mask < best_mask):
            best_val, best_mask = val, mask

    evals = 0
    while evals < budget:
        u_list = sorted(rng.sample(range(n), k))
        mask = 0
        for v in u_list:
            mask |= 1 << v
        cut = cut_of(f, mask)
        consider(mask, cut)
        improved = True
        while improved and evals < budget:
            improved = False
            v_mask = f.full_mask ^ mask
            for u in bits_of(mask):
                au = adj[u]
                du_in = (au & mask).bit_count()
                du_out = (au & v_mask).bit_count()
                for v in bits_of(v_mask):
                    av = adj[v]
                    delta = (du_in - du_out
                             + (av & v_mask).bit_count() - (av & mask).bit_count()
                             + 2 * (au >> v & 1))
                    evals += 1
                    if sign * delta > 0:
                        mask = (mask ^ (1 << u)) | (1 << v)
                        cut += delta
                        consider(mask, cut)
                        improved = True
                        break
                    if evals >= budget:
                        break
                if improved or evals >= budget:
                    break
    assert best_val is not None
    cut = sign * best_val
    return Bisection(n, best_mask, cut, Fraction(2 * cut - f.edge_count, 2))


def _disc_fraction(e_in: int, size: int, e_total: int, pairs: int) -> Fraction:
    # disc(U) = e(U) - p*C(|U|,2) with p = e_total/pairs
    if pairs == 0:
        return Fraction(0)
    return Fraction(e_in) - Fraction(e_total * comb(size, 2), pairs)


def disc_pm(f: Graph, seed: Seed = 0, heuristic_budget: int = 200_000) -> DiscPM:
    """disc+ and disc- of a graph.

    Exact (all 2^n subsets, Gray-code walk) for n <= 24; beyond that a
    seeded sampling + single-vertex hill-climbing heuristic runs instead and
    the result is flagged ``exact=False``.
    """
    n = f.n
    if n <= EXACT_DISC_CAP:
        return _disc_pm_exact(f)
    return _disc_pm_heuristic(f, seed, heuristic_budget)


def _disc_pm_exact(f: Graph) -> DiscPM:
    n = f.n
    adj = f.adj
    # per-size extrema of e(U); the empty set seeds both tables
    max_e = [-1] * (n + 1)
    min_e = [1 << 60] * (n + 1)
    max_w = [0] * (n + 1)
    min_w = [0] * (n + 1)
    max_e[0] = min_e[0] = 0
    mask = 0
    e_in = 0
    size = 0
    for i in range(1, 1 << n):
        b = (i & -i).bit_length() - 1
        bit = 1 << b
        if mask & bit:
            mask ^= bit
            e_in -= (adj[b] & mask).bit_count()
            size -= 1
        else:
            e_in += (adj[b] & mask).bit_count()
            mask ^= bit
            size += 1
        if e_in > max_e[size]:
            max_e[size], max_w[size] = e_in, mask
        if e_in < min_e[size]:
            min_e[size], min_w[size] = e_in, mask
    pairs = comb(n, 2)
    e_tot = f.edge_count
    best_plus = Fraction(0)
    best_minus = Fraction(0)
    wit_plus = 0
    wit_minus = 0
    for s in range(n + 1):
        if max_e[s] >= 0:
            d = _disc_fraction(max_e[s], s, e_tot, pairs)
            if d > best_plus:
                best_plus, wit_plus = d, max_w[s]
        if min_e[s] < (1 << 60):
            d = -_disc_fraction(min_e[s], s, e_tot, pairs)
            if d > best_minus:
                best_minus, wit_minus = d, min_w[s]
    return DiscPM(best_plus, best_minus, wit_plus, wit_minus, True)


def _disc_pm_heuristic(f: Graph, seed: Seed, budget: int) -> DiscPM:
    n = f.n
    adj = f.adj
    pairs = comb(n, 2)
    e_tot = f.edge_count
    rng = random.Random(derive_seed(seed, 0xD15C))

    def score(mask: int, e_in: int, sign: int) -> int:
        # sign * disc(U) * pairs, an exact integer
        return sign * (e_in * pairs - e_tot * comb(mask.bit_count(), 2))

    best = {1: (0, 0), -1: (0, 0)}  # sign -> (score, witness)
    evals = 0
    while evals < budget:
        mask = rng.getrandbits(n)
        e_in = f.edges_within(mask)
        for sign in (1, -1):
            cur_mask, cur_e = mask, e_in
            improved = True
            while improved and evals < budget:
                improved = False
                cur = score(cur_mask, cur_e, sign)
                for v in range(n):
                    bit = 1 << v
                    if cur_mask & bit:
                        nxt_e = cur_e - (adj[v] & (cur_mask ^ bit)).bit_count()
                    else:
                        nxt_e = cur_e + (adj[v] & cur_mask).bit_count()
                    evals += 1
                    if score(cur_mask ^ bit, nxt_e, sign) > cur:
                        cur_mask ^= bit
                        cur_e = nxt_e
                        improved = True
                        break
                    if evals >= budget:
                        break
            s = score(cur_mask, cur_e, sign)
            if s > best[sign][0]:
                best[sign] = (s, cur_mask)
    return DiscPM(Fraction(best[1][0], pairs), Fraction(best[-1][0], pairs),
                  best[1][1], best[-1][1], False)
