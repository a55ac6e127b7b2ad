"""Clique factors and 2-factors: extremal constants, extremal factors of the
structured colorings, the unavoidable-pattern finder, and the assembly
drivers that turn extracted patterns into factors / 2-factor embeddings with
many same-colored edges.

Exact rational arithmetic throughout (fractions.Fraction); every count is
recomputed from the coloring before being reported.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .config import DEFAULT_CONFIG
from .cutembed import greedy_expectation_embed
from .exactmath import derive_seed
from .graphcore import (
    Coloring,
    DimensionError,
    Embedding,
    Graph,
    ParameterError,
    Seed,
    bipartite_construction,
    bits_of,
    two_cliques_coloring,
)

Rational = Fraction  # exact rationals are stdlib fractions; canonical by construction


# ---------------------------------------------------------------------------
# factor types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KkFactor:
    """Partition of 0..n-1 into k-cliques with exact red/blue edge counts."""

    blocks: tuple[tuple[int, ...], ...]
    red_count: int
    blue_count: int

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)


def kk_factor_from_blocks(coloring: Coloring, blocks) -> KkFactor:
    n = coloring.n
    seen = 0
    red = 0
    total_pairs = 0
    for block in blocks:
        for v in block:
            b = 1 << v
            if not (0 <= v < n) or seen & b:
                raise ParameterError("blocks must partition 0..n-1")
            seen |= b
        for i, u in enumerate(block):
            for w in block[i + 1:]:
                total_pairs += 1
                if coloring.red.has_edge(u, w):
                    red += 1
    if seen != (1 << n) - 1:
        raise ParameterError("blocks must cover all vertices")
    sizes = {len(b) for b in blocks}
    if len(sizes) > 1:
        raise ParameterError("blocks must share one size")
    return KkFactor(tuple(tuple(sorted(b)) for b in blocks), red, total_pairs - red)


@dataclass(frozen=True)
class TwoFactor:
    """Spanning 2-regular graph as a list of vertex-disjoint cycles."""

    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for cyc in self.cycles:
            if len(cyc) < 3:
                raise ParameterError("cycles must have length >= 3")
            for v in cyc:
                if v in seen:
                    raise ParameterError("cycles must be vertex-disjoint")
                seen.add(v)
        n = len(seen)
        if seen != set(range(n)):
            raise ParameterError("cycles must cover 0..n-1")

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.cycles)

    def graph(self) -> Graph:
        edges = []
        for cyc in self.cycles:
            for i, v in enumerate(cyc):
                w = cyc[(i + 1) % len(cyc)]
                if v < w:
                    edges.append((v, w))
                else:
                    edges.append((w, v))
        return Graph.from_edges(self.n, edges)

    @staticmethod
    def from_lengths(lengths) -> "TwoFactor":
        cycles = []
        start = 0
        for length in lengths:
            cycles.append(tuple(range(start, start + length)))
            start += length
        return TwoFactor(tuple(cycles))


@dataclass(frozen=True)
class FmWitness:
    """A 2m-vertex sub-coloring matching one of the four unavoidable patterns.

    variant 'C':  both parts are red cliques, all cross edges blue.
    variant 'Cbar': the color-swapped form.
    variant 'D':  part_a is a blue clique; every other pair is red.
    variant 'Dbar': part_a is a red clique; every other pair is blue.
    """

    m: int
    variant: str
    part_a: tuple[int, ...]
    part_b: tuple[int, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.part_a + self.part_b))


@dataclass(frozen=True)
class ImbalanceReport:
    color: str
    count: int
    threshold: Fraction


@dataclass(frozen=True)
class NotFoundReport:
    diagnostics: dict = field(default_factory=dict)


def verify_fm_witness(coloring: Coloring, w: FmWitness) -> None:
    """Pair-by-pair exact verification of the witness pattern."""
    if len(w.part_a) != w.m or len(w.part_b) != w.m:
        raise ParameterError("witness parts must have m vertices each")
    if set(w.part_a) & set(w.part_b):
        raise ParameterError("witness parts must be disjoint")

    def within(part, want_red):
        for i, u in enumerate(part):
            for v in part[i + 1:]:
                if coloring.is_red(u, v) != want_red:
                    raise ParameterError(
                        f"witness pair ({u},{v}) breaks variant {w.variant}")

    def across(want_red):
        for u in w.part_a:
            for v in w.part_b:
                if coloring.is_red(u, v) != want_red:
                    raise ParameterError(
                        f"witness pair ({u},{v}) breaks variant {w.variant}")

    if w.variant == "C":
        within(w.part_a, True), within(w.part_b, True), across(False)
    elif w.variant == "Cbar":
        within(w.part_a, False), within(w.part_b, False), across(True)
    elif w.variant == "D":
        within(w.part_a, False), within(w.part_b, True), across(True)
    elif w.variant == "Dbar":
        within(w.part_a, True), within(w.part_b, False), across(False)
    else:
        raise ParameterError(f"unknown variant {w.variant!r}")


# ---------------------------------------------------------------------------
# extremal constants and structured-coloring optima
# ---------------------------------------------------------------------------


def solve_rho_lambda(k: int) -> tuple[Fraction, Fraction]:
    """The extremal ratio rho_k and constant lambda_k for K_k-factors.

    On each interval [i/k, (i+1)/k) the defining balance equation
    (k-1)rho = (k-i-1)(i/k + 1 - 2 rho) is linear; exactly one interval
    contains its own solution, which is rho_k.  lambda_k = (k-1)(1-rho_k)/2;
    the bound lambda_k <= (k-1)/3 is asserted.
    """
    if k < 2:
        raise ParameterError("k must be at least 2")
    hits = []
    for i in range(k):
        den = k * (k - 1 + 2 * (k - i - 1))
        rho = Fraction((k - i - 1) * (i + k), den)
        if Fraction(i, k) <= rho < Fraction(i + 1, k):
            hits.append((i, rho))
    if len(hits) != 1:
        raise ArithmeticError(f"expected a unique interval solution, got {hits}")
    i, rho = hits[0]
    lam = Fraction(k - 1, 2) * (1 - rho)
    other = Fraction(k - 1, 2) - Fraction(k - i - 1, 2) * (Fraction(i, k) + 1 - 2 * rho)
    assert other == lam, "the two extremal curves must meet at rho_k"
    assert lam <= Fraction(k - 1, 3)
    return rho, lam


def bipartite_factor_optima(n: int, k: int, x_size: int) -> tuple[int, int]:
    """Exact (red, blue) optima over K_k-factors of the construction with
    |X| = x_size on n vertices (k | n)."""
    q, r = divmod(n - x_size, k)
    blue = q * comb(k, 2) + comb(r, 2)
    j = k * x_size // n
    a_hi = x_size - j * (n // k)
    a_lo = n // k - a_hi
    red = (a_lo * (comb(k, 2) - comb(k - j, 2))
           + a_hi * (comb(k, 2) - comb(k - j - 1, 2)))
    return red, blue


def bipartite_red_closed_form(n: int, k: int, rho: Fraction) -> Fraction:
    """The idealized red optimum ( (k-1)/2 - (k-j-1)/2 (j/k + 1 - 2rho) ) n,
    exact only when rho*n and the block profile are integral."""
    j = int(k * rho)
    return (Fraction(k - 1, 2)
            - Fraction(k - j - 1, 2) * (Fraction(j, k) + 1 - 2 * rho)) * n


def opt_kk_factor_bipartite(n: int, k: int, rho: Fraction, color: str) -> KkFactor:
    """The extremal K_k-factor of bipartite_construction(n, rho) for one color.

    blue: pack Y into full blocks (one ragged block padded from X).
    red:  the unique two-adjacent-sizes X-profile that the exchange argument
    forces at the optimum.  Counts are recomputed, never assumed.
    """
    if k < 2 or n % k:
        raise ParameterError("need k >= 2 and k | n")
    if not (0 <= rho <= 1):
        raise ParameterError("rho must lie in [0,1]")
    coloring = bipartite_construction(n, rho.numerator, rho.denominator)
    x_size = (rho.numerator * n) // rho.denominator
    xs = list(range(x_size))
    ys = list(range(x_size, n))
    blocks: list[tuple[int, ...]] = []
    if color == "blue":
        q, r = divmod(len(ys), k)
        for i in range(q):
            blocks.append(tuple(ys[i * k:(i + 1) * k]))
        xi = 0
        if r:
            blocks.append(tuple(ys[q * k:] + xs[:k - r]))
            xi = k - r
        while xi < len(xs):
            blocks.append(tuple(xs[xi:xi + k]))
            xi += k
    elif color == "red":
        j = k * x_size // n
        a_hi = x_size - j * (n // k)
        xi = yi = 0
        for b in range(n // k):
            take = j + 1 if b < a_hi else j
            block = xs[xi:xi + take] + ys[yi:yi + (k - take)]
            xi += take
            yi += k - take
            blocks.append(tuple(block))
    else:
        raise ParameterError(f"unknown color {color!r}")
    factor = kk_factor_from_blocks(coloring, blocks)
    red_opt, blue_opt = bipartite_factor_optima(n, k, x_size)
    want = red_opt if color == "red" else blue_opt
    got = factor.red_count if color == "red" else factor.blue_count
    assert got == want, "constructed factor missed the profile optimum"
    return factor


def kk_factor_two_cliques(m: int, k: int, color: str) -> KkFactor:
    """Extremal K_k-factor of the two-red-cliques coloring on 2m vertices.

    red: blocks inside the cliques, (2m/k) C(k,2) red edges.
    blue: blocks split ceil(k/2)/floor(k/2) across the cut,
    (2m/k) ceil(k/2) floor(k/2) blue edges.
    """
    if k < 2 or m % k:
        raise ParameterError("need k >= 2 and k | m")
    coloring = two_cliques_coloring(m, red_cliques=True)
    side_a = list(range(m))
    side_b = list(range(m, 2 * m))
    blocks: list[tuple[int, ...]] = []
    if color == "red":
        for side in (side_a, side_b):
            for i in range(0, m, k):
                blocks.append(tuple(side[i:i + k]))
        want = (2 * m // k) * comb(k, 2)
        got_attr = "red_count"
    elif color == "blue":
        hi, lo = -(-k // 2), k // 2
        ai = bi = 0
        for t in range(2 * m // k):
            if t % 2 == 0:
                block = side_a[ai:ai + hi] + side_b[bi:bi + lo]
                ai += hi
                bi += lo
            else:
                block = side_a[ai:ai + lo] + side_b[bi:bi + hi]
                ai += lo
                bi += hi
            blocks.append(tuple(block))
        want = (2 * m // k) * hi * lo
        got_attr = "blue_count"
    else:
        raise ParameterError(f"unknown color {color!r}")
    factor = kk_factor_from_blocks(coloring, blocks)
    assert getattr(factor, got_attr) == want, "count must match the closed form"
    return factor


# ---------------------------------------------------------------------------
# unavoidable-pattern search
# ---------------------------------------------------------------------------


class _Budget:
    def __init__(self, probes: int):
        self.left = probes

    def spend(self, amount: int = 1) -> bool:
        self.left -= amount
        return self.left >= 0


def _greedy_clique(adj, avail: int, pivot: int, target: int) -> int:
    mask = 1 << pivot
    cand = adj[pivot] & avail
    while cand and mask.bit_count() < target:
        best_v, best_d = -1, -1
        for v in bits_of(cand):
            dv = (adj[v] & cand).bit_count()
            if dv > best_d:
                best_v, best_d = v, dv
        mask |= 1 << best_v
        cand &= adj[best_v]
    return mask


def _mono_cliques(coloring: Coloring, color: str, avail: int, target: int,
                  rng: random.Random, keep: int = 4) -> list[int]:
    adj = coloring.graph_of(color).adj
    deg = sorted(bits_of(avail), key=lambda v: (-(adj[v] & avail).bit_count(), v))
    pivots = deg[:4]
    extra = [v for v in bits_of(avail)]
    if extra:
        pivots += [extra[rng.randrange(len(extra))] for _ in range(2)]
    out: list[int] = []
    for p in pivots:
        c = _greedy_clique(adj, avail, p, target)
        if c not in out:
            out.append(c)
    out.sort(key=lambda m: -m.bit_count())
    return out[:keep]


def _biclique(adj, left: int, right: int, m: int, budget: _Budget) -> tuple[int, int] | None:
    """m vertices of ``left`` whose common ``adj``-neighborhood has >= m
    vertices of ``right``; returns (chosen, first m of the intersection)."""
    lefts = sorted(bits_of(left), key=lambda v: (-(adj[v] & right).bit_count(), v))

    def rec(start: int, chosen: int, depth: int, inter: int):
        if not budget.spend():
            return None
        if depth == m:
            picks = 0
            cnt = 0
            for v in bits_of(inter):
                picks |= 1 << v
                cnt += 1
                if cnt == m:
                    return chosen, picks
            return None
        for idx in range(start, len(lefts)):
            v = lefts[idx]
            nxt = inter & adj[v]
            if nxt.bit_count() < m:
                continue
            got = rec(idx + 1, chosen | (1 << v), depth + 1, nxt)
            if got:
                return got
        return None

    return rec(0, 0, 0, right)


def _variant_for(color_a: str, color_b: str, cross: str) -> str | None:
    if color_a == color_b:
        if cross == color_a:
            return None
        return "C" if color_a == "red" else "Cbar"
    # one red clique, one blue clique; the clique whose color differs from the
    # cross color is the lone monochromatic class
    return "D" if cross == "red" else "Dbar"


def find_unavoidable(coloring: Coloring, m: int, eps: Fraction, seed: Seed = 0,
                     budget: int | None = None,
                     clique_multiple: int | None = None):
    """Find a 2m-vertex unavoidable pattern, or report why there is none.

    If either color has fewer than eps*C(n,2) edges the coloring is declared
    imbalanced (that is the theorem's escape hatch).  Otherwise monochromatic
    cliques are grown greedily and pairs of them are scanned for a
    monochromatic m-by-m cross pattern; any witness returned has every pair
    re-checked.  Exhausting the probe budget yields an honest not-found
    report (the guarantee only kicks in above a non-explicit size).
    """
    if m < 1:
        raise ParameterError("m must be at least 1")
    budget = DEFAULT_CONFIG.fm_budget if budget is None else budget
    mult = DEFAULT_CONFIG.clique_multiple if clique_multiple is None else clique_multiple
    return _find_witness(coloring, m, eps, coloring.red.full_mask, seed, budget, mult)


def _find_witness(coloring: Coloring, m: int, eps: Fraction, avail: int,
                  seed: Seed, budget: int, mult: int):
    n_av = avail.bit_count()
    pairs_av = comb(n_av, 2)
    red_in = coloring.red.edges_within(avail)
    blue_in = pairs_av - red_in
    threshold = eps * pairs_av
    if Fraction(red_in) < threshold:
        return ImbalanceReport("red", red_in, threshold)
    if Fraction(blue_in) < threshold:
        return ImbalanceReport("blue", blue_in, threshold)
    if n_av < 2 * m:
        return NotFoundReport({"reason": "fewer than 2m vertices available"})

    rng = random.Random(derive_seed(seed, 0xF3))
    bud = _Budget(budget)
    target = max(m, min(mult * m, n_av))
    cliques: list[tuple[int, str]] = []
    for color in ("red", "blue"):
        for c in _mono_cliques(coloring, color, avail, target, rng):
            if c.bit_count() >= m:
                cliques.append((c, color))
    diag = {"cliques": [(c.bit_count(), col) for c, col in cliques]}
    for ia in range(len(cliques)):
        for ib in range(len(cliques)):
            if ia == ib:
                continue
            ka, ca = cliques[ia]
            kb, cb = cliques[ib]
            overlap = ka & kb
            options = [(ka & ~overlap, kb), (ka, kb & ~overlap)] if overlap else [(ka, kb)]
            for da, db in options:
                if da.bit_count() < m or db.bit_count() < m or da & db:
                    continue
                red_cross = 0
                for v in bits_of(da):
                    red_cross += (coloring.red.adj[v] & db).bit_count()
                total_cross = da.bit_count() * db.bit_count()
                order = ("red", "blue") if 2 * red_cross >= total_cross else ("blue", "red")
                for cross in order:
                    variant = _variant_for(ca, cb, cross)
                    if variant is None:
                        continue
                    got = _biclique(coloring.graph_of(cross).adj, da, db, m, bud)
                    if got is None:
                        if bud.left < 0:
                            return NotFoundReport({**diag, "reason": "budget exhausted"})
                        continue
                    s1, s2 = got
                    if variant in ("C", "Cbar"):
                        part_a, part_b = s1, s2
                    else:
                        # the monochromatic class sits on the clique whose
                        # color differs from the cross color
                        if ca != cross:
                            part_a, part_b = s1, s2
                        else:
                            part_a, part_b = s2, s1
                    w = FmWitness(m, variant,
                                  tuple(bits_of(part_a)), tuple(bits_of(part_b)))
                    verify_fm_witness(coloring, w)
                    return w
    return NotFoundReport({**diag, "reason": "no monochromatic cross pattern found"})


# ---------------------------------------------------------------------------
# 2-factor slicing and per-pattern embeddings
# ---------------------------------------------------------------------------


def cycle_partition(f: TwoFactor, k: int) -> list[list[int]]:
    """Slice the concatenated cycle order into consecutive k-blocks.

    Returns [U_0, U_1, ..., U_q] where U_0 is the (possibly empty) remainder
    of size n mod k.  Each full part induces a disjoint union of cycles and
    at most 2 paths, hence at least k-2 edges; this is verified.
    """
    if k < 3:
        raise ParameterError("k must be at least 3")
    seq: list[int] = []
    for cyc in f.cycles:
        seq.extend(cyc)
    n = len(seq)
    q = n // k
    parts = [seq[i * k:(i + 1) * k] for i in range(q)]
    u0 = seq[q * k:]
    g = f.graph()
    for part in parts:
        mask = 0
        for v in part:
            mask |= 1 << v
        deg1 = sum(1 for v in part if (g.adj[v] & mask).bit_count() == 1)
        deg0 = sum(1 for v in part if (g.adj[v] & mask).bit_count() == 0)
        paths = deg0 + deg1 // 2
        edges = g.edges_within(mask)
        assert paths <= 2, "a consecutive slice induces at most two paths"
        assert edges >= k - 2, "full parts carry at least k-2 edges"
    return [u0] + parts


def _part_components(g: Graph, part: list[int]) -> tuple[list[list[int]], list[list[int]]]:
    """Induced components of a part: (cycles, paths) as ordered vertex lists."""
    mask = 0
    for v in part:
        mask |= 1 << v
    seen = set()
    cycles: list[list[int]] = []
    paths: list[list[int]] = []
    for v in part:
        if v in seen:
            continue
        deg = (g.adj[v] & mask).bit_count()
        if deg == 0:
            seen.add(v)
            paths.append([v])
            continue
        if deg == 1:
            # walk a path from its endpoint
            walk = [v]
            seen.add(v)
            cur, prev = v, -1
            while True:
                nxt = [w for w in bits_of(g.adj[cur] & mask) if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                walk.append(cur)
                seen.add(cur)
            paths.append(walk)
    for v in part:
        if v in seen:
            continue
        walk = [v]
        seen.add(v)
        cur, prev = v, -1
        while True:
            nxt = [w for w in bits_of(g.adj[cur] & mask) if w != prev and w not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            walk.append(cur)
            seen.add(cur)
        cycles.append(walk)
    return cycles, paths


def close_part_into_cycles(g: Graph, part: list[int]) -> list[tuple[int, ...]]:
    """Rewire a part's induced paths into cycles inside the part.

    Two paths are joined into one; a path of length >= 3 closes on itself; a
    shorter one is spliced into an existing cycle of the part.  Full parts of
    size >= 3 always admit such a rewiring.
    """
    cycles, paths = _part_components(g, part)
    if len(paths) == 2:
        paths = [paths[0] + paths[1]]
    if paths:
        p = paths[0]
        if len(p) >= 3:
            cycles.append(p)
        elif cycles:
            host = cycles.pop()
            cycles.append(host[:1] + p + host[1:])
        else:
            raise ParameterError("part too small to rewire into cycles")
    return [tuple(c) for c in cycles]


def independent_set_of_two_factor(two: TwoFactor, size: int) -> list[int]:
    """An independent set of the requested size (cycles are 3-colorable, so a
    third of the vertices is always available)."""
    classes: dict[int, list[int]] = {0: [], 1: [], 2: []}
    for cyc in two.cycles:
        for i, v in enumerate(cyc):
            if i == len(cyc) - 1 and len(cyc) % 2 == 1:
                classes[2].append(v)
            else:
                classes[i % 2].append(v)
    best = max(classes.values(), key=len)
    if len(best) < size:
        raise ParameterError("no independent set of the requested size")
    return sorted(best)[:size]


def _consecutive_order(two: TwoFactor) -> list[int]:
    seq: list[int] = []
    for cyc in two.cycles:
        seq.extend(cyc)
    return seq


def layout_clique_side(two: TwoFactor, clique_hosts: list[int],
                       out_hosts: list[int], into_clique_first: bool) -> dict[int, int]:
    """Map a 2-factor into (clique side, out side) hosts.

    into_clique_first: consecutive cycle order, first 2k vertices onto the
    clique side (keeps >= 2k-1 guest edges inside the clique).  Otherwise an
    independent set of size k goes to the out side, so all 2k guest edges
    touch it.
    """
    n = two.n
    k = len(out_hosts)
    assert len(clique_hosts) == n - k
    if into_clique_first:
        seq = _consecutive_order(two)
        inside, outside = seq[:n - k], seq[n - k:]
    else:
        s = independent_set_of_two_factor(two, k)
        outside = s
        chosen = set(s)
        inside = [v for v in _consecutive_order(two) if v not in chosen]
    mapping = {}
    for v, h in zip(inside, clique_hosts):
        mapping[v] = h
    for v, h in zip(outside, out_hosts):
        mapping[v] = h
    return mapping


def layout_two_cliques(two: TwoFactor, side_a: list[int], side_b: list[int],
                       within_sides: bool) -> dict[int, int]:
    """Map a 2-factor into two equal host sides.

    within_sides: consecutive order split half/half (at most one cycle
    straddles, costing at most 2 cross edges).  Otherwise one edge per odd
    cycle is conceptually dropped and the rest is 2-colored with balanced
    classes, landing every surviving edge across the cut.
    """
    n = two.n
    half = n // 2
    assert len(side_a) == len(side_b) == half
    if within_sides:
        seq = _consecutive_order(two)
        first, second = seq[:half], seq[half:]
    else:
        class_a: list[int] = []
        class_b: list[int] = []
        flip_parity = 0
        for cyc in two.cycles:
            la, lb = [], []
            for i, v in enumerate(cyc):
                (la if i % 2 == 0 else lb).append(v)
            if len(cyc) % 2 == 1:
                # odd cycle: coloring after dropping one edge is (t+1, t);
                # alternate which side receives the surplus to stay balanced
                if flip_parity:
                    la, lb = lb, la
                flip_parity ^= 1
            elif len(class_a) > len(class_b):
                la, lb = lb, la
            class_a.extend(la)
            class_b.extend(lb)
        assert len(class_a) == len(class_b) == half, "bipartition must balance"
        first, second = class_a, class_b
    mapping = {}
    for v, h in zip(first, side_a):
        mapping[v] = h
    for v, h in zip(second, side_b):
        mapping[v] = h
    return mapping


def _count_mono(coloring: Coloring, g: Graph, mapping: dict[int, int], color: str) -> int:
    adj = coloring.graph_of(color).adj
    cnt = 0
    for u, v in g.edges():
        if adj[mapping[u]] >> mapping[v] & 1:
            cnt += 1
    return cnt


def embed_2factor_bipartite(f: TwoFactor, color: str) -> tuple[Coloring, Embedding, int]:
    """Embed a 2-factor on 3k vertices into the ratio-1/3 construction whose
    2k-clique side is red.

    red: consecutive layout into the clique, >= 2k-1 red edges.
    blue: an independent set of size k onto the other side, exactly 2k blue
    edges.  Both bounds are verified on the recount.
    """
    n = f.n
    if n % 3:
        raise ParameterError("2-factor must have 3k vertices")
    k = n // 3
    host = bipartite_construction(n, 1, 3).swapped()  # clique side red
    out_hosts = list(range(k))
    clique_hosts = list(range(k, n))
    mapping = layout_clique_side(f, clique_hosts, out_hosts,
                                 into_clique_first=(color == "red"))
    emb = Embedding.from_map([mapping[v] for v in range(n)])
    count = _count_mono(host, f.graph(), mapping, color)
    floor_needed = 2 * k - 1 if color == "red" else 2 * k
    assert count >= floor_needed, "2-factor layout missed its guaranteed floor"
    return host, emb, count


def embed_2factor_two_cliques(f: TwoFactor, color: str) -> tuple[Coloring, Embedding, int]:
    """Embed a 2-factor on 4k vertices into the two-red-cliques coloring.

    red: consecutive half/half split, >= 4k-2 red edges.
    blue: odd cycles lose one edge each, the rest is balanced-bipartitioned
    across the (all blue) cut: 4k - (#odd cycles) >= ceil(8k/3) blue edges.
    """
    n = f.n
    if n % 4:
        raise ParameterError("2-factor must have 4k vertices")
    k = n // 4
    host = two_cliques_coloring(2 * k, red_cliques=True)
    side_a = list(range(2 * k))
    side_b = list(range(2 * k, 4 * k))
    mapping = layout_two_cliques(f, side_a, side_b, within_sides=(color == "red"))
    emb = Embedding.from_map([mapping[v] for v in range(n)])
    count = _count_mono(host, f.graph(), mapping, color)
    floor_needed = 4 * k - 2 if color == "red" else -(-8 * k // 3)
    assert count >= floor_needed, "2-factor layout missed its guaranteed floor"
    return host, emb, count


# ---------------------------------------------------------------------------
# factor drivers
# ---------------------------------------------------------------------------


def _induced_coloring(coloring: Coloring, vertices: list[int]) -> Coloring:
    return Coloring(len(vertices), coloring.red.induced(vertices))


def hillclimb_kk_factor(coloring: Coloring, k: int, target: str,
                        seed: Seed = 0, max_passes: int = 60) -> KkFactor:
    """Greedy block building plus cross-block swap improvement.

    On the structured colorings the swap landscape has no bad local optima
    (block value depends only on the X-profile), so this reaches their exact
    optimum; elsewhere it is a solid baseline.
    """
    n = coloring.n
    if n % k:
        raise ParameterError("k must divide n")
    adj = coloring.graph_of(target).adj
    unused = list(range(n))
    blocks: list[list[int]] = []
    while unused:
        anchor = unused.pop(0)
        block = [anchor]
        for _ in range(k - 1):
            best_v, best_gain = None, -1
            for v in unused:
                gain = sum(1 for u in block if adj[v] >> u & 1)
                if gain > best_gain:
                    best_v, best_gain = v, gain
            block.append(best_v)
            unused.remove(best_v)
        blocks.append(block)

    def block_gain(v: int, block: list[int], skip: int) -> int:
        return sum(1 for u in block if u != skip and adj[v] >> u & 1)

    for _ in range(max_passes):
        improved = False
        for bi in range(len(blocks)):
            for bj in range(bi + 1, len(blocks)):
                for i in range(k):
                    for j in range(k):
                        u, v = blocks[bi][i], blocks[bj][j]
                        cur = (block_gain(u, blocks[bi], u)
                               + block_gain(v, blocks[bj], v))
                        new = (block_gain(v, blocks[bi], u)
                               + block_gain(u, blocks[bj], v))
                        if new > cur:
                            blocks[bi][i], blocks[bj][j] = v, u
                            improved = True
        if not improved:
            break
    return kk_factor_from_blocks(coloring, blocks)


def _bipartite_block_factor(x_list: list[int], y_list: list[int], k: int,
                            pack_y: bool) -> list[tuple[int, ...]]:
    """K_k-blocks of a bipartite-construction piece given as vertex lists.

    pack_y: fill blocks entirely inside Y (then X); otherwise use the
    two-adjacent-sizes X-profile that optimizes the cross-heavy color.
    """
    n = len(x_list) + len(y_list)
    assert n % k == 0
    blocks: list[tuple[int, ...]] = []
    if pack_y:
        ys = list(y_list)
        xs = list(x_list)
        q, r = divmod(len(ys), k)
        for i in range(q):
            blocks.append(tuple(ys[i * k:(i + 1) * k]))
        xi = 0
        if r:
            blocks.append(tuple(ys[q * k:] + xs[:k - r]))
            xi = k - r
        while xi < len(xs):
            blocks.append(tuple(xs[xi:xi + k]))
            xi += k
    else:
        j = k * len(x_list) // n
        a_hi = len(x_list) - j * (n // k)
        xi = yi = 0
        for b in range(n // k):
            take = j + 1 if b < a_hi else j
            blocks.append(tuple(x_list[xi:xi + take] + y_list[yi:yi + (k - take)]))
            xi += take
            yi += k - take
    return blocks


def _two_clique_block_factor(side_a: list[int], side_b: list[int], k: int,
                             within: bool) -> list[tuple[int, ...]]:
    blocks: list[tuple[int, ...]] = []
    if within:
        for side in (side_a, side_b):
            for i in range(0, len(side), k):
                blocks.append(tuple(side[i:i + k]))
    else:
        hi, lo = -(-k // 2), k // 2
        ai = bi = 0
        total = (len(side_a) + len(side_b)) // k
        for t in range(total):
            if t % 2 == 0:
                blocks.append(tuple(side_a[ai:ai + hi] + side_b[bi:bi + lo]))
                ai += hi
                bi += lo
            else:
                blocks.append(tuple(side_a[ai:ai + lo] + side_b[bi:bi + hi]))
                ai += lo
                bi += hi
    return blocks


@dataclass(frozen=True)
class _Extraction:
    """Blocks harvested from repeated unavoidable-pattern extraction."""

    bip_blocks: list  # (clique_side_vertices, x_side_vertices, clique_color)
    cliq_blocks: list  # (side_a, side_b, clique_color)
    leftover: list[int]
    clean: bool  # extraction ended in an imbalance report (proof depth)
    stop: object


def _extract_blocks(coloring: Coloring, m: int, eps: Fraction, seed: Seed,
                    carve_clique: int, carve_other: int, budget: int) -> _Extraction:
    """Repeatedly extract unavoidable patterns.

    D-type witnesses are carved down to a bipartite-construction piece:
    ``carve_clique`` vertices of the monochromatic-clique part (they become
    the piece's packed side) plus ``carve_other`` of the other part; the rest
    of the witness returns to the pool.  C-type witnesses are taken whole.
    """
    avail = coloring.red.full_mask
    bip, cliq = [], []
    rounds = 0
    stop: object = None
    while True:
        rounds += 1
        res = _find_witness(coloring, m, eps, avail, derive_seed(seed, rounds),
                            budget, DEFAULT_CONFIG.clique_multiple)
        if isinstance(res, FmWitness):
            if res.variant in ("D", "Dbar"):
                clique_color = "blue" if res.variant == "D" else "red"
                clique_side = sorted(res.part_a)[:carve_clique]
                x_side = sorted(res.part_b)[:carve_other]
                bip.append((clique_side, x_side, clique_color))
                used = clique_side + x_side
            else:
                clique_color = "red" if res.variant == "C" else "blue"
                cliq.append((sorted(res.part_a), sorted(res.part_b), clique_color))
                used = list(res.vertices)
            for v in used:
                avail &= ~(1 << v)
            if avail.bit_count() < 2 * m:
                stop = NotFoundReport({"reason": "pool below 2m"})
                break
        else:
            stop = res
            break
    return _Extraction(bip, cliq, list(bits_of(avail)), isinstance(stop, ImbalanceReport), stop)


def kk_factor_driver(coloring: Coloring, k: int, eps: Fraction, seed: Seed = 0,
                     budget: int | None = None) -> KkFactor:
    """K_k-factor with many same-colored edges.

    Pipeline: extract unavoidable patterns sized for the extremal bipartite
    piece (k*M vertices, M the denominator of rho_k), assemble per-block
    extremal factors plus an expectation-embedded factor on the leftover,
    for both target colors; also run the swap hill-climber as a baseline.
    The factor with the largest majority count wins (all counts recounted).
    """
    n = coloring.n
    if k < 2 or n % k:
        raise ParameterError("need k >= 2 and k | n")
    budget = DEFAULT_CONFIG.fm_budget if budget is None else budget
    rho, lam = solve_rho_lambda(k)
    m0 = k * rho.denominator
    x_carve = int(rho * m0)

    candidates: list[KkFactor] = []
    for target in ("red", "blue"):
        candidates.append(hillclimb_kk_factor(coloring, k, target, seed))

    if n >= 2 * m0:
        ext = _extract_blocks(coloring, m0, eps, seed,
                              carve_clique=m0 - x_carve, carve_other=x_carve,
                              budget=budget)
        for target in ("red", "blue"):
            blocks: list[tuple[int, ...]] = []
            for clique_side, x_side, clique_color in ext.bip_blocks:
                pack = (target == clique_color)
                blocks.extend(_bipartite_block_factor(x_side, clique_side, k, pack))
            for side_a, side_b, clique_color in ext.cliq_blocks:
                blocks.extend(_two_clique_block_factor(
                    side_a, side_b, k, within=(target == clique_color)))
            w = ext.leftover
            if w:
                guest = Graph.from_edges(len(w), [
                    (i, j)
                    for b in range(0, len(w), k)
                    for i in range(b, b + k)
                    for j in range(i + 1, b + k)])
                emb = greedy_expectation_embed(guest, _induced_coloring(coloring, w), target)
                for b in range(0, len(w), k):
                    blocks.append(tuple(w[emb.map[i]] for i in range(b, b + k)))
            candidates.append(kk_factor_from_blocks(coloring, blocks))

    return max(candidates, key=lambda f: (max(f.red_count, f.blue_count),
                                          f.red_count))


@dataclass(frozen=True)
class TwoFactorDriveResult:
    embedding: Embedding
    red_count: int
    blue_count: int
    best_count: int
    target_floor: Fraction | None  # (2/3 - eps) n when extraction was clean
    details: dict = field(default_factory=dict)


def two_factor_driver(coloring: Coloring, f: TwoFactor, eps: Fraction,
                      seed: Seed = 0, budget: int | None = None) -> TwoFactorDriveResult:
    """Copy of a 2-factor with many same-colored edges.

    Pipeline: slice the cycle order into k-parts (k = ceil(6/eps)), rewire
    each part into a local 2-factor, extract unavoidable patterns sized 2k,
    embed three parts into each bipartite-type block and four into each
    two-cliques block via the per-pattern layouts, and handle everything
    left over with the expectation embedder.  Both colors are assembled and
    the better recount wins against the plain expectation baseline.
    """
    n = coloring.n
    if f.n != n:
        raise DimensionError("2-factor and coloring sizes differ")
    if eps <= 0 or eps > 1:
        raise ParameterError("eps must lie in (0, 1]")
    budget = DEFAULT_CONFIG.fm_budget if budget is None else budget
    k = int(-(-6 * eps.denominator // eps.numerator))
    guest_graph = f.graph()

    def result_from(mapping: list[int], details: dict) -> TwoFactorDriveResult:
        emb = Embedding.from_map(mapping)
        red = _count_mono(coloring, guest_graph, dict(enumerate(mapping)), "red")
        blue = guest_graph.edge_count - red
        return TwoFactorDriveResult(emb, red, blue, max(red, blue), None, details)

    candidates: list[TwoFactorDriveResult] = []
    for target in ("red", "blue"):
        emb = greedy_expectation_embed(guest_graph, coloring, target)
        candidates.append(result_from(list(emb.map), {"strategy": f"expectation-{target}"}))

    clean = False
    if n >= 4 * k and k >= 3:
        parts = cycle_partition(f, k)
        u0, full_parts = parts[0], parts[1:]
        closed = [close_part_into_cycles(guest_graph, p) for p in full_parts]
        ext = _extract_blocks(coloring, 2 * k, Fraction(1, 3), seed,
                              carve_clique=2 * k, carve_other=k, budget=budget)
        clean = ext.clean
        # assign parts: 3 per bipartite block, 4 per two-cliques block
        blocks: list[tuple[str, tuple, int]] = []
        idx = 0
        for clique_side, x_side, clique_color in ext.bip_blocks:
            if idx + 3 > len(full_parts):
                break
            blocks.append(("bip", (clique_side, x_side, clique_color), idx))
            idx += 3
        cliq_used = []
        for side_a, side_b, clique_color in ext.cliq_blocks:
            if idx + 4 > len(full_parts):
                break
            blocks.append(("cliq", (side_a, side_b, clique_color), idx))
            cliq_used.append((side_a, side_b))
            idx += 4

        used_hosts = set()
        for kind, payload, _ in blocks:
            if kind == "bip":
                used_hosts.update(payload[0])
                used_hosts.update(payload[1])
            else:
                used_hosts.update(payload[0])
                used_hosts.update(payload[1])
        w_host = [h for h in range(n) if h not in used_hosts]
        assigned_guests = set()
        for kind, payload, start in blocks:
            span = 3 if kind == "bip" else 4
            for p in full_parts[start:start + span]:
                assigned_guests.update(p)
        w_guest = [v for v in range(n) if v not in assigned_guests]

        for target in ("red", "blue"):
            mapping = [-1] * n
            feasible = True
            for kind, payload, start in blocks:
                span = 3 if kind == "bip" else 4
                local_cycles: list[tuple[int, ...]] = []
                for p_idx in range(start, start + span):
                    local_cycles.extend(closed[p_idx])
                local_vertices = [v for cyc in local_cycles for v in cyc]
                relabel = {v: i for i, v in enumerate(local_vertices)}
                local = TwoFactor(tuple(tuple(relabel[v] for v in cyc)
                                        for cyc in local_cycles))
                if kind == "bip":
                    clique_side, x_side, clique_color = payload
                    local_map = layout_clique_side(
                        local, list(clique_side), list(x_side),
                        into_clique_first=(target == clique_color))
                else:
                    side_a, side_b, clique_color = payload
                    local_map = layout_two_cliques(
                        local, list(side_a), list(side_b),
                        within_sides=(target == clique_color))
                for v in local_vertices:
                    mapping[v] = local_map[relabel[v]]
            if w_guest:
                relabel = {v: i for i, v in enumerate(w_guest)}
                w_graph = guest_graph.induced(w_guest)
                emb = greedy_expectation_embed(
                    w_graph, _induced_coloring(coloring, w_host), target)
                for v in w_guest:
                    mapping[v] = w_host[emb.map[relabel[v]]]
            if feasible and all(h >= 0 for h in mapping):
                candidates.append(result_from(
                    mapping, {"strategy": f"pattern-{target}",
                              "blocks": len(blocks), "clean": clean}))

    best = max(candidates, key=lambda r: r.best_count)
    floor = (Fraction(2, 3) - eps) * n if clean else None
    return TwoFactorDriveResult(best.embedding, best.red_count, best.blue_count,
                                best.best_count, floor, best.details)
