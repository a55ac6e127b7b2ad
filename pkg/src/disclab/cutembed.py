"""Expectation-guaranteed embedders.

Two entry points:

* ``greedy_expectation_embed``: places guest vertices one at a time, each
  time choosing the host that maximizes the exact conditional expectation of
  the final target-color count over a uniformly random completion.  The
  output therefore always meets the ceil(p * e(F)) expectation floor.

* ``cut_embed``: the biased-bisection embedder.  Given a guest bisection and
  a host bisection, it aligns the denser sides, derandomizes a
  part-respecting bijection against both color orientations, and returns the
  copy whose red count deviates most from e(F)/2, together with the exact
  expectation it was guaranteed to reach.

All candidate scoring is integer arithmetic: at each placement step every
candidate shares the same denominators, so numerator comparison is exact.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .bisection import Bisection
from .exactmath import derive_seed
from .graphcore import (
    Coloring,
    DimensionError,
    DiscrepancyReport,
    Embedding,
    Graph,
    ParameterError,
    Seed,
    bits_of,
    count_red_edges,
    discrepancy,
)


def _target_adj(coloring: Coloring, target: str) -> tuple[int, ...]:
    return coloring.graph_of(target).adj


def expectation_over_random_embeddings(f: Graph, coloring: Coloring, target: str) -> Fraction:
    """Exact expectation of the target-color count over all n! bijections."""
    pairs = coloring.total_pairs
    t_count = coloring.red_count if target == "red" else coloring.blue_count
    if pairs == 0:
        return Fraction(0)
    return Fraction(t_count * f.edge_count, pairs)


def _part_expectation(f: Graph, tadj: tuple[int, ...], parts: list[tuple[int, int]]) -> Fraction:
    """Expectation of the target count for a random part-respecting bijection."""
    total = Fraction(0)
    graph = f

    def t_edges_within(mask: int) -> int:
        s = 0
        for v in bits_of(mask):
            s += (tadj[v] & mask).bit_count()
        return s // 2

    def t_edges_between(a: int, b: int) -> int:
        s = 0
        for v in bits_of(a):
            s += (tadj[v] & b).bit_count()
        return s

    for gmask, hmask in parts:
        eg = graph.edges_within(gmask)
        size = gmask.bit_count()
        if size >= 2:
            total += Fraction(eg * t_edges_within(hmask), size * (size - 1) // 2)
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            gi, hi = parts[i]
            gj, hj = parts[j]
            cross_g = graph.edges_between(gi, gj)
            if cross_g and gi.bit_count() and gj.bit_count():
                total += Fraction(cross_g * t_edges_between(hi, hj),
                                  gi.bit_count() * gj.bit_count())
    return total


def derandomized_part_embed(f: Graph, coloring: Coloring, target: str,
                            parts: list[tuple[int, int]]) -> tuple[Embedding, Fraction]:
    """Conditional-expectation derandomization of a part-respecting bijection.

    ``parts`` is a list of (guest_mask, host_mask) pairs of equal sizes that
    partition the vertex set on each side.  Returns the embedding and the
    exact initial expectation (the count it is guaranteed to reach).

    Guest vertices are placed in decreasing-degree order (high-degree
    vertices constrain the expectation most); host ties break to the lowest
    index.
    """
    n = f.n
    if coloring.n != n:
        raise DimensionError("guest and coloring sizes differ")
    cover_g = 0
    cover_h = 0
    for gmask, hmask in parts:
        if gmask.bit_count() != hmask.bit_count():
            raise ParameterError("part sizes must agree between guest and host")
        if gmask & cover_g or hmask & cover_h:
            raise ParameterError("parts must be disjoint")
        cover_g |= gmask
        cover_h |= hmask
    if cover_g != f.full_mask or cover_h != f.full_mask:
        raise ParameterError("parts must cover all vertices")

    tadj = _target_adj(coloring, target)
    bound = _part_expectation(f, tadj, parts)

    npart = len(parts)
    part_of = [0] * n
    for idx, (gmask, _) in enumerate(parts):
        for v in bits_of(gmask):
            part_of[v] = idx

    avail = [hmask for _, hmask in parts]
    unplaced = [gmask for gmask, _ in parts]
    # target-edge totals inside / between available host sets
    t_in = []
    for hmask in avail:
        s = 0
        for v in bits_of(hmask):
            s += (tadj[v] & hmask).bit_count()
        t_in.append(s // 2)
    t_cross = [[0] * npart for _ in range(npart)]
    for i in range(npart):
        for j in range(i + 1, npart):
            s = 0
            for v in bits_of(avail[i]):
                s += (tadj[v] & avail[j]).bit_count()
            t_cross[i][j] = t_cross[j][i] = s

    order = sorted(range(n), key=lambda v: (-f.degree(v), v))
    phi = [-1] * n
    placed_mask = 0
    placed_count = 0

    for u in order:
        pu = part_of[u]
        cands = list(bits_of(avail[pu]))
        if len(cands) == 1:
            x = cands[0]
        else:
            x = _argmax_candidate(f, tadj, parts, part_of, avail, unplaced,
                                  t_in, t_cross, phi, placed_mask, u, pu, cands)
        phi[u] = x
        placed_mask |= 1 << u
        placed_count += 1
        bitx = 1 << x
        # maintain available-host edge totals
        t_in[pu] -= (tadj[x] & (avail[pu] ^ bitx)).bit_count()
        for q in range(npart):
            if q != pu:
                t_cross[pu][q] -= (tadj[x] & avail[q]).bit_count()
                t_cross[q][pu] = t_cross[pu][q]
        avail[pu] ^= bitx
        unplaced[pu] ^= 1 << u

    return Embedding.from_map(phi), bound


def _argmax_candidate(f, tadj, parts, part_of, avail, unplaced, t_in, t_cross,
                      phi, placed_mask, u, pu, cands) -> int:
    """Pick the host maximizing the conditional expectation; exact integers.

    With r_i = remaining slots in part i after this placement, every
    candidate shares denominators r_i, C(r_i,2) and r_i*r_j; the expectation
    is compared via one common scaled numerator.
    """
    n = f.n
    npart = len(parts)
    bit_u = 1 << u
    # remaining guest vertices (after removing u) per part
    rem = [unplaced[q] & ~bit_u for q in range(npart)]
    r = [avail[q].bit_count() for q in range(npart)]
    r[pu] -= 1  # slot consumed by u
    # edge totals among/between remaining guest vertices
    b_in = [f.edges_within(m) for m in rem]
    b_cross = [[f.edges_between(rem[i], rem[j]) if i < j else 0
                for j in range(npart)] for i in range(npart)]
    # placed guest vertices that still have unplaced neighbors, grouped info:
    # (host, [count of unplaced nbrs per part], [t-degree of host into avail q])
    placed_info = []
    for p in bits_of(placed_mask):
        nb = f.adj[p]
        cnt = [(nb & rem[q]).bit_count() for q in range(npart)]
        if any(cnt):
            hp = phi[p]
            tdeg = [(tadj[hp] & avail[q]).bit_count() for q in range(npart)]
            placed_info.append((hp, cnt, tdeg))
    # common denominator: product over parts of r_i*(r_i-1) (guarded);
    # every term's true denominator divides it whenever its numerator != 0.
    denom_unit = 1
    for q in range(npart):
        denom_unit *= max(r[q], 1) * max(r[q] - 1, 1)

    def scale_for(den: int) -> int:
        return denom_unit // den if den > 0 else 0

    # candidate-independent scales
    sc_pair = [scale_for(r[q] * (r[q] - 1) // 2) if r[q] >= 2 else 0
               for q in range(npart)]
    sc_cross = [[scale_for(r[i] * r[j]) if r[i] and r[j] else 0
                 for j in range(npart)] for i in range(npart)]
    sc_deg = [scale_for(r[q]) if r[q] else 0 for q in range(npart)]

    placed_nbrs_hosts = 0
    for p in bits_of(f.adj[u] & placed_mask):
        placed_nbrs_hosts |= 1 << phi[p]

    best_score = None
    best_x = -1
    for x in cands:
        bitx = 1 << x
        row = tadj[x]
        # realized edges: u at x against already-placed neighbors
        score = (row & placed_nbrs_hosts).bit_count() * denom_unit
        # placed vertex p with unplaced neighbors in part q: each contributes
        # (t-degree of phi(p) into avail_q minus x if applicable) / r_q
        for hp, cnt, tdeg in placed_info:
            trow = tadj[hp]
            for q in range(npart):
                c = cnt[q]
                if c:
                    t = tdeg[q] - (1 if (q == pu and trow & bitx) else 0)
                    score += c * t * sc_deg[q]
        # u's unplaced neighbors in part q: t-degree of x into avail_q (minus x slot)
        for q in range(npart):
            c = (f.adj[u] & rem[q]).bit_count()
            if c:
                t = (row & avail[q]).bit_count() - (1 if q == pu and row & bitx else 0)
                score += c * t * sc_deg[q]
        # unplaced-unplaced within part q
        for q in range(npart):
            if b_in[q] and sc_pair[q]:
                if q == pu:
                    t = t_in[q] - (row & (avail[q] ^ bitx)).bit_count()
                else:
                    t = t_in[q]
                score += b_in[q] * t * sc_pair[q]
        # unplaced-unplaced across parts i<j
        for i in range(npart):
            for j in range(i + 1, npart):
                if b_cross[i][j] and sc_cross[i][j]:
                    t = t_cross[i][j]
                    if i == pu:
                        t -= (row & avail[j]).bit_count()
                    elif j == pu:
                        t -= (row & avail[i]).bit_count()
                    score += b_cross[i][j] * t * sc_cross[i][j]
        if best_score is None or score > best_score:
            best_score = score
            best_x = x
    return best_x


def greedy_expectation_embed(f: Graph, coloring: Coloring, target: str = "red") -> Embedding:
    """Embedding with at least ceil(p * e(F)) edges of the target color,
    p being the target color's density.  Deterministic."""
    if f.n != coloring.n:
        raise DimensionError("guest and coloring sizes differ")
    full = f.full_mask
    emb, _ = derandomized_part_embed(f, coloring, target, [(full, full)])
    return emb


def sampled_expectation_embed(f: Graph, coloring: Coloring, target: str,
                              samples: int, seed: Seed) -> Embedding:
    """Best of ``samples`` uniformly random embeddings by target count.

    Sampling-mode counterpart of the derandomized embedder, kept for the
    Monte-Carlo verifiers; carries no expectation guarantee.
    """
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    rng = random.Random(derive_seed(seed, 0x5A3))
    tgraph = coloring.graph_of(target)
    n = f.n
    best = None
    best_count = -1
    for _ in range(samples):
        perm = list(range(n))
        rng.shuffle(perm)
        emb = Embedding.from_map(perm)
        cnt = count_red_edges(Coloring(n, tgraph), f, emb)
        if cnt > best_count:
            best, best_count = emb, cnt
    assert best is not None
    return best


@dataclass(frozen=True)
class CutEmbedResult:
    """Outcome of the biased-bisection embedder."""

    embedding: Embedding
    report: DiscrepancyReport
    target: str                      # color the winning pass maximized
    achieved_target: int             # exact count of that color (full guest)
    expectation_bound: Fraction      # guaranteed floor for that count
    guarantee_ok: bool               # gamma*t >= 10 e(F)/n precondition held


def _min_degree_vertex(g: Graph, mask: int) -> int:
    best_v, best_d = -1, None
    for v in bits_of(mask):
        d = g.degree(v)
        if best_d is None or d < best_d:
            best_v, best_d = v, d
    return best_v


def cut_embed(f: Graph, f_bis: Bisection, coloring: Coloring,
              g_bis: Bisection, seed: Seed = 0) -> CutEmbedResult:
    """Embed a biased guest bisection onto a biased host bisection.

    Odd n is handled as in the underlying argument: one low-degree guest
    vertex from the V side and one host vertex from the Y side are removed,
    the even-size core is embedded part-respectingly (derandomized, both
    color orientations), and the removed pair is re-inserted.  The result is
    whichever orientation deviates more from e(F)/2, with its exact
    expectation floor.
    """
    n = f.n
    if n < 4:
        raise ParameterError("cut embedding needs n >= 4")
    if coloring.n != n:
        raise DimensionError("guest and coloring sizes differ")
    if f_bis.n != n or g_bis.n != n:
        raise ParameterError("bisections must match the instance size")
    if f_bis.u_side.bit_count() != n // 2 or g_bis.u_side.bit_count() != n // 2:
        raise ParameterError("bisection sides must have floor(n/2) vertices")

    u_mask = f_bis.u_side
    v_mask = f.full_mask ^ u_mask
    x_mask = g_bis.u_side
    y_mask = f.full_mask ^ x_mask

    # precondition report: gamma * t >= 10 e(F)/n, never enforced
    t_dev = abs(Fraction(2 * f_bis.cut_size - f.edge_count, 2))
    host_cut = coloring.red.edges_between(x_mask, y_mask)
    gamma = (abs(Fraction(host_cut) - Fraction(x_mask.bit_count() * y_mask.bit_count(), 2))
             / (n * n))
    guarantee_ok = bool(f.edge_count == 0 or gamma * t_dev >= Fraction(10 * f.edge_count, n))

    removed_guest = removed_host = -1
    if n % 2:
        removed_guest = _min_degree_vertex(f, v_mask)
        removed_host = next(bits_of(y_mask))
        keep_g = [v for v in range(n) if v != removed_guest]
        keep_h = [h for h in range(n) if h != removed_host]
        core_f = f.induced(keep_g)
        core_col = Coloring(n - 1, coloring.red.induced(keep_h))
        gpos = {v: i for i, v in enumerate(keep_g)}
        hpos = {h: i for i, h in enumerate(keep_h)}
        core_u = 0
        for v in bits_of(u_mask):
            core_u |= 1 << gpos[v]
        core_x = 0
        for h in bits_of(x_mask):
            core_x |= 1 << hpos[h]
    else:
        keep_g = list(range(n))
        keep_h = list(range(n))
        core_f, core_col = f, coloring
        core_u, core_x = u_mask, x_mask

    core_full = core_f.full_mask
    core_v = core_full ^ core_u
    core_y = core_full ^ core_x

    candidates = []
    for target in ("red", "blue"):
        tadj = _target_adj(core_col, target)
        # pair denser guest side with denser host side (both pairings tried)
        best_parts = None
        best_exp = None
        for parts in ([(core_u, core_x), (core_v, core_y)],
                      [(core_u, core_y), (core_v, core_x)]):
            exp = _part_expectation(core_f, tadj, parts)
            if best_exp is None or exp > best_exp:
                best_exp, best_parts = exp, parts
        emb_core, bound = derandomized_part_embed(core_f, core_col, target, best_parts)
        # lift back to the full instance
        full_map = [-1] * n
        for gi, v in enumerate(keep_g):
            full_map[v] = keep_h[emb_core.map[gi]]
        if removed_guest >= 0:
            full_map[removed_guest] = removed_host
        emb = Embedding.from_map(full_map)
        rep = discrepancy(coloring, f, emb)
        achieved = rep.mono_plus if target == "red" else rep.mono_minus
        assert achieved >= bound, "derandomization fell below its expectation floor"
        candidates.append(CutEmbedResult(emb, rep, target, achieved, bound, guarantee_ok))

    return max(candidates, key=lambda r: (r.report.discrepancy, r.target == "red"))
