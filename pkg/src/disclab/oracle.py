"""Exact brute-force ground truth at small n.

oracle_max_disc scans bijections with branch-and-bound plus a twin-class
symmetry reduction (interchangeable guest vertices get increasing images);
oracle_best_factor enumerates clique factors by anchored recursion.  These
are the reference values every heuristic result is compared against.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .graphcore import (
    CapacityError,
    Coloring,
    DimensionError,
    DiscrepancyReport,
    Embedding,
    Graph,
    ParameterError,
    bits_of,
    discrepancy,
)

ORACLE_MAXDISC_CAP = 11
ORACLE_FACTOR_CAP = 12
ORACLE_TWOFACTOR_CAP = 9


def _twin_predecessor(f: Graph) -> list[int]:
    """For each vertex, the largest smaller vertex interchangeable with it.

    Two vertices are interchangeable when their neighborhoods agree outside
    the pair; swapping them is then an automorphism, so restricting images to
    increase along each twin class prunes equivalent embeddings.
    """
    pred = [-1] * f.n
    cls: list[list[int]] = []
    for v in range(f.n):
        placedv = f.adj[v] & ~((1 << (v + 1)) - 1)  # unused; clarity only
        for group in cls:
            u = group[0]
            without = ~((1 << u) | (1 << v))
            if f.adj[u] & without == f.adj[v] & without:
                pred[v] = group[-1]
                group.append(v)
                break
        else:
            cls.append([v])
    return pred


def _extreme_red_embedding(guest: Graph, coloring: Coloring,
                           maximize: bool) -> tuple[int, list[int]]:
    """Exact max (or min) of the red count over all bijections.

    Lexicographically smallest map among optima: vertices are placed in index
    order, candidate hosts scanned in increasing order, and only strict
    improvements replace the incumbent.
    """
    n = guest.n
    red_adj = coloring.red.adj if maximize else coloring.blue_graph().adj
    pred = _twin_predecessor(guest)
    phi = [-1] * n
    best_count = -1
    best_map: list[int] = []
    total_edges = guest.edge_count

    def rec(v: int, used: int, count: int, placed_edges: int) -> None:
        nonlocal best_count, best_map
        if count + (total_edges - placed_edges) <= best_count:
            return
        if v == n:
            best_count, best_map = count, phi[:]
            return
        lo = phi[pred[v]] + 1 if pred[v] >= 0 else 0
        back = guest.adj[v] & ((1 << v) - 1)
        n_back = back.bit_count()
        for h in range(lo, n):
            hb = 1 << h
            if used & hb:
                continue
            gain = 0
            row = red_adj[h]
            for w in bits_of(back):
                if row >> phi[w] & 1:
                    gain += 1
            phi[v] = h
            rec(v + 1, used | hb, count + gain, placed_edges + n_back)
            phi[v] = -1

    rec(0, 0, 0, 0)
    if maximize:
        return best_count, best_map
    return total_edges - best_count, best_map


def oracle_max_disc(f: Graph, coloring: Coloring,
                    cap: int = ORACLE_MAXDISC_CAP) -> tuple[Embedding, DiscrepancyReport]:
    """Exact maximum discrepancy over all n! embeddings (n small).

    Runs one maximizing and one minimizing scan of the red count; the
    deviation larger in absolute value wins, ties preferring the
    lexicographically smaller map.
    """
    if f.n != coloring.n:
        raise DimensionError("guest and coloring sizes differ")
    if f.n > cap:
        raise CapacityError(f"oracle capped at n = {cap}")
    e = f.edge_count
    hi_count, hi_map = _extreme_red_embedding(f, coloring, True)
    lo_count, lo_map = _extreme_red_embedding(f, coloring, False)
    hi_disc = abs(2 * hi_count - e)
    lo_disc = abs(2 * lo_count - e)
    if hi_disc > lo_disc or (hi_disc == lo_disc and hi_map <= lo_map):
        emb = Embedding.from_map(hi_map)
    else:
        emb = Embedding.from_map(lo_map)
    return emb, discrepancy(coloring, f, emb)


@dataclass(frozen=True)
class FactorOracleResult:
    """Best achievable monochromatic counts over all factors of one shape."""

    best_red: int
    best_blue: int
    red_blocks: tuple[tuple[int, ...], ...]
    blue_blocks: tuple[tuple[int, ...], ...]


def oracle_best_factor(coloring: Coloring, k: int,
                       cap: int = ORACLE_FACTOR_CAP) -> FactorOracleResult:
    """Exact max red and max blue counts over all K_k-factors.

    Factors are enumerated by always anchoring the next block at the lowest
    unused vertex, so each partition appears exactly once.
    """
    n = coloring.n
    if k < 2:
        raise ParameterError("k must be at least 2")
    if n % k:
        raise ParameterError("k must divide n")
    if n > cap:
        raise CapacityError(f"factor oracle capped at n = {cap}")
    red = coloring.red
    blocks: list[tuple[int, ...]] = []
    best: dict[str, tuple[int, tuple]] = {"max": (-1, ()), "min": (n * n, ())}

    def block_red(verts: tuple[int, ...]) -> int:
        c = 0
        for i, u in enumerate(verts):
            row = red.adj[u]
            for w in verts[i + 1:]:
                if row >> w & 1:
                    c += 1
        return c

    from itertools import combinations

    def rec(used: int, red_total: int) -> None:
        if used == coloring.red.full_mask:
            if red_total > best["max"][0]:
                best["max"] = (red_total, tuple(blocks))
            if red_total < best["min"][0]:
                best["min"] = (red_total, tuple(blocks))
            return
        anchor = (~used & -(~used)).bit_length() - 1
        rest = [v for v in range(anchor + 1, n) if not used >> v & 1]
        for others in combinations(rest, k - 1):
            verts = (anchor,) + others
            m = used
            for v in verts:
                m |= 1 << v
            blocks.append(verts)
            rec(m, red_total + block_red(verts))
            blocks.pop()

    rec(0, 0)
    pairs_per_factor = (n // k) * comb(k, 2)
    best_red, red_blocks = best["max"]
    min_red, blue_blocks = best["min"]
    return FactorOracleResult(best_red, pairs_per_factor - min_red,
                              red_blocks, blue_blocks)


def oracle_best_two_factor(coloring: Coloring, shape: Graph,
                           cap: int = ORACLE_TWOFACTOR_CAP) -> FactorOracleResult:
    """Exact max red / max blue counts over all copies of a 2-factor shape."""
    n = coloring.n
    if shape.n != n:
        raise DimensionError("shape and coloring sizes differ")
    if shape.regular_degree() != 2:
        raise ParameterError("shape must be 2-regular")
    if n > cap:
        raise CapacityError(f"2-factor oracle capped at n = {cap}")
    hi, hi_map = _extreme_red_embedding(shape, coloring, True)
    lo, lo_map = _extreme_red_embedding(shape, coloring, False)
    e = shape.edge_count

    def blocks_of(mapping: list[int]) -> tuple[tuple[int, ...], ...]:
        img = shape.relabel(mapping)
        return tuple(tuple(sorted((u, v))) for u, v in img.edges())

    return FactorOracleResult(hi, e - lo, blocks_of(hi_map), blocks_of(lo_map))
