"""Pair-switching embedders and their certificates.

The central idea: build two copies of the guest graph that differ by swapping
the images of designated vertex pairs, arrange the swaps so the two copies'
red counts differ a lot, and keep whichever copy deviates more from e(F)/2.

Certificates record the pair structure on the guest side (GuestCertificate)
and on the host side (HostCertificate); both are re-verified exactly, in
integer arithmetic, before any embedding work trusts them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bisection import (
    EXHAUSTIVE_BISECTION_CAP,
    Bisection,
    bisection_from_mask,
    exhaustive_extremal_bisection,
    local_search_bisection,
)
from .config import DEFAULT_CONFIG, Config
from .cutembed import cut_embed, greedy_expectation_embed
from .exactmath import derive_seed, ge_int_plus_coeff_sqrtsum, sqrtsum_lower
from .graphcore import (
    Coloring,
    DimensionError,
    DisclabError,
    DiscrepancyReport,
    Embedding,
    Graph,
    ParameterError,
    Seed,
    bits_of,
    discrepancy,
)


class CertificationError(DisclabError):
    """A certificate could not be built; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CertificateInvalid(DisclabError):
    """A certificate failed its exact re-verification."""


@dataclass(frozen=True)
class GuestCertificate:
    """Pair structure on the guest graph enabling the switching argument.

    u_side is a bitmask of U with |U| = floor(n/2); pairs live inside U.
    For pair i with difference sets V_i = N_V(u_i) \\ N_V(u'_i) and V'_i the
    reverse:  |V_i| >= d_i/100,  |V_i|,|V'_i| <= 2|V|/3,  and either U is
    independent or the V-degrees of u_i, u'_i differ by at most 20*sqrt(d_i).
    """

    n: int
    u_side: int
    pairs: tuple[tuple[int, int], ...]
    d_values: tuple[int, ...]
    u_independent: bool

    @property
    def m(self) -> int:
        return len(self.pairs)

    def value_lower(self, bits: int = 96) -> Fraction:
        """Certified lower bound on the value t = sum_i sqrt(d_i)."""
        return sqrtsum_lower(self.d_values, bits)


@dataclass(frozen=True)
class HostCertificate:
    """Pair structure on the host coloring's red graph.

    x_side is a bitmask of X with |X| = floor(n/2); for every pair,
    |d_Y(x)-d_Y(x')| <= beta*n, the Y-neighborhood symmetric difference lies
    in [0.02|Y|, 0.98|Y|], and both Y-degrees lie in [0.1|Y|, 0.9|Y|].
    Exactly ceil(0.05 n) pairs are present.
    """

    n: int
    x_side: int
    pairs: tuple[tuple[int, int], ...]
    beta: Fraction

    @property
    def m(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class HostFailure:
    """Diagnostics when no host certificate could be extracted."""

    reason: str
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SwitchResult:
    """An embedding, its exact recount, and how it was obtained."""

    embedding: Embedding
    report: DiscrepancyReport
    strategy: str
    case_taken: str
    certificate_value: Fraction
    details: dict = field(default_factory=dict)


def required_host_pairs(n: int) -> int:
    return -(-n // 20)  # ceil(0.05 n)


def verify_guest_certificate(f: Graph, gc: GuestCertificate) -> None:
    """Exact re-check of every guest-certificate condition; raises on failure."""
    n = f.n
    if gc.n != n:
        raise CertificateInvalid("size mismatch")
    if gc.u_side.bit_count() != n // 2:
        raise CertificateInvalid("|U| must be floor(n/2)")
    if 20 * gc.m > n:
        raise CertificateInvalid("too many pairs: m must satisfy 20m <= n")
    if len(gc.d_values) != gc.m:
        raise CertificateInvalid("d list length mismatch")
    v_mask = f.full_mask ^ gc.u_side
    v_size = v_mask.bit_count()
    seen = 0
    for (u, up), d in zip(gc.pairs, gc.d_values):
        if d < 1:
            raise CertificateInvalid("d_i must be >= 1")
        for w in (u, up):
            b = 1 << w
            if not gc.u_side & b:
                raise CertificateInvalid(f"pair vertex {w} not in U")
            if seen & b:
                raise CertificateInvalid(f"pair vertex {w} repeated")
            seen |= b
        nu = f.adj[u] & v_mask
        nup = f.adj[up] & v_mask
        vi = (nu & ~nup).bit_count()
        vpi = (nup & ~nu).bit_count()
        if 100 * vi < d:
            raise CertificateInvalid(f"pair ({u},{up}): |V_i| < d_i/100")
        if 3 * vi > 2 * v_size or 3 * vpi > 2 * v_size:
            raise CertificateInvalid(f"pair ({u},{up}): difference set exceeds 2|V|/3")
        if gc.u_independent:
            continue
        dd = nu.bit_count() - nup.bit_count()
        if dd * dd > 400 * d:
            raise CertificateInvalid(f"pair ({u},{up}): V-degrees differ by more than 20*sqrt(d)")
    if gc.u_independent and f.edges_within(gc.u_side) != 0:
        raise CertificateInvalid("U declared independent but spans an edge")


def verify_host_certificate(coloring: Coloring, hc: HostCertificate) -> None:
    """Exact re-check of every host-certificate condition; raises on failure."""
    n = coloring.n
    if hc.n != n:
        raise CertificateInvalid("size mismatch")
    if hc.x_side.bit_count() != n // 2:
        raise CertificateInvalid("|X| must be floor(n/2)")
    if hc.m != required_host_pairs(n):
        raise CertificateInvalid(f"need exactly {required_host_pairs(n)} pairs, got {hc.m}")
    g = coloring.red
    y_mask = g.full_mask ^ hc.x_side
    y_size = y_mask.bit_count()
    beta = hc.beta
    seen = 0
    for x, xp in hc.pairs:
        for w in (x, xp):
            b = 1 << w
            if not hc.x_side & b:
                raise CertificateInvalid(f"pair vertex {w} not in X")
            if seen & b:
                raise CertificateInvalid(f"pair vertex {w} repeated")
            seen |= b
        dx = (g.adj[x] & y_mask).bit_count()
        dxp = (g.adj[xp] & y_mask).bit_count()
        if abs(dx - dxp) * beta.denominator > beta.numerator * n:
            raise CertificateInvalid(f"pair ({x},{xp}): Y-degrees differ by more than beta*n")
        sym = ((g.adj[x] ^ g.adj[xp]) & y_mask).bit_count()
        if 50 * sym < y_size or 50 * sym > 49 * y_size:
            raise CertificateInvalid(f"pair ({x},{xp}): symmetric difference outside [0.02,0.98]|Y|")
        for dd in (dx, dxp):
            if 10 * dd < y_size or 10 * dd > 9 * y_size:
                raise CertificateInvalid(f"pair ({x},{xp}): Y-degree outside [0.1,0.9]|Y|")


# ---------------------------------------------------------------------------
# certificate construction
# ---------------------------------------------------------------------------


def certify_host(coloring: Coloring, beta: Fraction | None = None, seed: Seed = 0,
                 attempts: int = 5) -> HostCertificate | HostFailure:
    """Extract a host certificate from a coloring, or explain why none was found.

    Strategy: random balanced partition; restrict X to vertices whose red
    Y-degree sits in [0.1|Y|, 0.9|Y|]; bucket those by Y-degree into classes
    of width beta*n; within each bucket greedily remove pairs whose
    Y-neighborhood symmetric difference lies in [0.02|Y|, 0.98|Y|].  Success
    needs ceil(0.05 n) pairs, verified exactly before returning.
    """
    n = coloring.n
    if n < 40:
        raise ParameterError("host certification needs n >= 40")
    beta = DEFAULT_CONFIG.beta if beta is None else beta
    g = coloring.red
    need = required_host_pairs(n)
    last_stats: dict = {}
    for attempt in range(attempts):
        rng = random.Random(derive_seed(seed, 0xA11C + attempt))
        x_list = sorted(rng.sample(range(n), n // 2))
        x_mask = 0
        for v in x_list:
            x_mask |= 1 << v
        y_mask = g.full_mask ^ x_mask
        y_size = y_mask.bit_count()
        buckets: dict[int, list[int]] = {}
        n_high = n_low = 0
        for x in x_list:
            dy = (g.adj[x] & y_mask).bit_count()
            if 10 * dy < y_size:
                n_low += 1
                continue
            if 10 * dy > 9 * y_size:
                n_high += 1
                continue
            idx = (dy * beta.denominator) // (beta.numerator * n)
            buckets.setdefault(idx, []).append(x)
        pairs: list[tuple[int, int]] = []
        for idx in sorted(buckets):
            pool = buckets[idx]
            used = [False] * len(pool)
            for i in range(len(pool)):
                if used[i]:
                    continue
                for j in range(i + 1, len(pool)):
                    if used[j]:
                        continue
                    sym = ((g.adj[pool[i]] ^ g.adj[pool[j]]) & y_mask).bit_count()
                    if 50 * sym >= y_size and 50 * sym <= 49 * y_size:
                        pairs.append((pool[i], pool[j]))
                        used[i] = used[j] = True
                        break
        med = sum(len(b) for b in buckets.values())
        last_stats = {"attempt": attempt, "x_med": med, "x_high": n_high,
                      "x_low": n_low, "pairs_found": len(pairs), "pairs_needed": need}
        if len(pairs) >= need:
            hc = HostCertificate(n, x_mask, tuple(pairs[:need]), beta)
            verify_host_certificate(coloring, hc)
            return hc
    if last_stats.get("x_med", 0) < 2 * need:
        reason = "degree window starved: too few vertices with Y-degree in [0.1,0.9]|Y|"
    else:
        reason = ("symmetric-difference window starved: degree-matched vertices have "
                  "nearly equal or nearly complementary Y-neighborhoods")
    return HostFailure(reason, last_stats)


def certify_guest_regular(f: Graph, seed: Seed = 0, retries: int = 8) -> GuestCertificate:
    """Guest certificate for a d-regular graph with d <= n/2.

    Random bisection; U* keeps U-vertices whose V-degree is within
    10*sqrt(d) of d/2; disjoint pairs with |N_V(u)\\N_V(u')| >= d/100 are
    extracted greedily until floor(0.01 n) pairs are found.  All d_i = d.
    """
    n = f.n
    d = f.regular_degree()
    if d is None:
        raise ParameterError("guest must be regular")
    if 2 * d > n:
        raise ParameterError("regular certification needs d <= n/2")
    if n < 100:
        raise ParameterError("n too small: need floor(0.01 n) >= 1")
    target = n // 100
    cap = n // 20
    target = min(target, cap)
    diag: dict = {}
    for attempt in range(retries):
        rng = random.Random(derive_seed(seed, 0x6E57 + attempt))
        u_list = sorted(rng.sample(range(n), n // 2))
        u_mask = 0
        for v in u_list:
            u_mask |= 1 << v
        v_mask = f.full_mask ^ u_mask
        star = [u for u in u_list
                if (2 * (f.adj[u] & v_mask).bit_count() - d) ** 2 <= 400 * d]
        pairs: list[tuple[int, int]] = []
        used = set()
        for i, u in enumerate(star):
            if u in used:
                continue
            if len(pairs) >= target:
                break
            nu = f.adj[u] & v_mask
            for up in star[i + 1:]:
                if up in used:
                    continue
                vi = (nu & ~f.adj[up]).bit_count()
                if 100 * vi >= d:
                    pairs.append((u, up))
                    used.add(u)
                    used.add(up)
                    break
        diag = {"attempt": attempt, "u_star": len(star),
                "pairs_found": len(pairs), "pairs_needed": target}
        if len(pairs) >= target:
            gc = GuestCertificate(n, u_mask, tuple(pairs[:target]),
                                  (d,) * min(len(pairs), target), False)
            verify_guest_certificate(f, gc)
            return gc
    raise CertificationError("regular guest certification failed after retries", diag)


def greedy_max_independent_set(f: Graph) -> int:
    """Greedy maximal independent set, lowest index first; returns a bitmask."""
    mask = 0
    blocked = 0
    for v in range(f.n):
        b = 1 << v
        if blocked & b:
            continue
        mask |= b
        blocked |= b | f.adj[v]
    return mask


def certify_guest_independent(f: Graph, indep: int) -> GuestCertificate:
    """Guest certificate with U an independent set of size floor(n/2).

    Pairs need only distinct V-neighborhoods (all d_i = 1).  If the greedy
    extraction stalls below floor(0.05 n) pairs, some V-vertex must be
    adjacent to nearly all of the leftover U, and that witness is reported.
    """
    n = f.n
    if indep >> n:
        raise ParameterError("independent set outside vertex range")
    if f.edges_within(indep) != 0:
        raise ParameterError("the given set is not independent")
    if indep.bit_count() < n // 2:
        raise ParameterError("independent set smaller than floor(n/2)")
    if f.isolated_vertices():
        raise ParameterError("guest has isolated vertices")
    u_list = list(bits_of(indep))[: n // 2]
    u_mask = 0
    for v in u_list:
        u_mask |= 1 << v
    v_mask = f.full_mask ^ u_mask
    target = n // 20
    pairs: list[tuple[int, int]] = []
    used = set()
    for i, u in enumerate(u_list):
        if u in used:
            continue
        if len(pairs) >= target:
            break
        nu = f.adj[u] & v_mask
        for up in u_list[i + 1:]:
            if up in used:
                continue
            if nu & ~(f.adj[up] & v_mask):
                pairs.append((u, up))
                used.add(u)
                used.add(up)
                break
    if len(pairs) < target:
        leftover = [u for u in u_list if u not in used]
        witness = {}
        if leftover:
            u0 = leftover[0]
            nb = f.adj[u0] & v_mask
            if nb:
                v0 = next(bits_of(nb))
                witness = {"vertex": v0, "degree": f.degree(v0)}
        raise CertificationError(
            "independent-set pair extraction stalled: shared neighborhoods force "
            "a V-vertex of degree >= 0.4 n", {"pairs_found": len(pairs),
                                              "pairs_needed": target, **witness})
    gc = GuestCertificate(n, u_mask, tuple(pairs), (1,) * len(pairs), True)
    verify_guest_certificate(f, gc)
    return gc


# ---------------------------------------------------------------------------
# the main switching embedder
# ---------------------------------------------------------------------------


def _orient_pairs(adj, side_complement_mask, pairs):
    """Swap each pair so the first member has the larger difference set."""
    oriented = []
    for a, b in pairs:
        da = (adj[a] & ~adj[b]) & side_complement_mask
        db = (adj[b] & ~adj[a]) & side_complement_mask
        if da.bit_count() >= db.bit_count():
            oriented.append((a, b))
        else:
            oriented.append((b, a))
    return oriented


def _pair_gain(g_map: dict[int, int], vi_set: int, vpi_set: int,
               yi: int, ypi: int) -> int:
    """D_i = |g(V_i) cap Y_i| - |g(V_i) cap Y'_i| - |g(V'_i) cap Y_i| + |g(V'_i) cap Y'_i|."""
    d = 0
    for v in bits_of(vi_set):
        h = 1 << g_map[v]
        if yi & h:
            d += 1
        elif ypi & h:
            d -= 1
    for v in bits_of(vpi_set):
        h = 1 << g_map[v]
        if yi & h:
            d -= 1
        elif ypi & h:
            d += 1
    return d


def _good_pair(d_gain: int, rho: Fraction, d_i: int) -> bool:
    # D_i >= 0.1 * rho * sqrt(d_i), exactly (squared form)
    if d_gain < 0:
        return False
    lhs = 10 * rho.denominator * d_gain
    return lhs * lhs >= rho.numerator * rho.numerator * d_i


def main_switch_embed(f: Graph, gc: GuestCertificate, coloring: Coloring,
                      hc: HostCertificate, beta: Fraction | None = None,
                      trials: int = 64, seed: Seed = 0,
                      rho: Fraction | None = None) -> SwitchResult:
    """Switching embedder driven by a guest and a host certificate.

    Samples bijections g: V -> Y, marks pair i good when its gain D_i
    reaches 0.1*rho*sqrt(d_i), and keeps the sample maximizing
    Z = sum of good gains.  The base copy maps u_i -> x_i; the switched copy
    exchanges the good pairs.  If the swap costs little on the edges inside
    U (difference >= -2*sqrt(beta)*t, decided exactly), the better of the
    two copies is returned; otherwise both copies are re-scored over fresh
    samples of g and the best deviation wins.
    """
    n = f.n
    if coloring.n != n:
        raise DimensionError("guest and coloring sizes differ")
    verify_guest_certificate(f, gc)
    verify_host_certificate(coloring, hc)
    beta = hc.beta if beta is None else beta
    rho = DEFAULT_CONFIG.rho_switch if rho is None else rho
    if trials < 1:
        raise ParameterError("trials must be >= 1")

    g_red = coloring.red
    u_mask, x_mask = gc.u_side, hc.x_side
    v_mask = f.full_mask ^ u_mask
    y_mask = f.full_mask ^ x_mask
    m = min(gc.m, hc.m)
    gpairs = _orient_pairs(f.adj, v_mask, gc.pairs[:m])
    hpairs = _orient_pairs(g_red.adj, y_mask, hc.pairs[:m])
    ds = gc.d_values[:m]
    vi_sets = []
    for (u, up) in gpairs:
        vi_sets.append(((f.adj[u] & ~f.adj[up]) & v_mask,
                        (f.adj[up] & ~f.adj[u]) & v_mask))
    yi_sets = []
    for (x, xp) in hpairs:
        yi_sets.append(((g_red.adj[x] & ~g_red.adj[xp]) & y_mask,
                        (g_red.adj[xp] & ~g_red.adj[x]) & y_mask))

    v_list = list(bits_of(v_mask))
    y_list = list(bits_of(y_mask))

    def sample_g(trial: int) -> dict[int, int]:
        rng = random.Random(derive_seed(seed, 0x93AF + trial))
        hosts = y_list[:]
        rng.shuffle(hosts)
        return dict(zip(v_list, hosts))

    best_g = None
    best_z = None
    best_goods: list[int] = []
    best_gains: list[int] = []
    for trial in range(trials):
        g_map = sample_g(trial)
        gains = [_pair_gain(g_map, vi_sets[i][0], vi_sets[i][1],
                            yi_sets[i][0], yi_sets[i][1]) for i in range(m)]
        goods = [i for i in range(m) if _good_pair(gains[i], rho, ds[i])]
        z = sum(gains[i] for i in goods)
        if best_z is None or z > best_z:
            best_z, best_g, best_goods, best_gains = z, g_map, goods, gains
    assert best_g is not None
    assert best_z >= 0  # only good (non-negative) gains are summed

    # base bijection on U: u_i -> x_i for every pair, rest ascending
    h1 = {}
    taken_x = 0
    for (u, up), (x, xp) in zip(gpairs, hpairs):
        h1[u], h1[up] = x, xp
        taken_x |= (1 << x) | (1 << xp)
    rest_u = [u for u in bits_of(u_mask) if u not in h1]
    rest_x = [x for x in bits_of(x_mask) if not taken_x >> x & 1]
    for u, x in zip(rest_u, rest_x):
        h1[u] = x

    def u_internal_count(hmap: dict[int, int]) -> int:
        total = 0
        us = list(bits_of(u_mask))
        for i, u in enumerate(us):
            row = f.adj[u]
            for w in us[i + 1:]:
                if row >> w & 1 and g_red.adj[hmap[u]] >> hmap[w] & 1:
                    total += 1
        return total

    h2 = dict(h1)
    for i in best_goods:
        u, up = gpairs[i]
        h2[u], h2[up] = h1[up], h1[u]
    c1 = u_internal_count(h1)
    c2 = u_internal_count(h2)
    diff = c1 - c2

    # case split: diff >= -2*sqrt(beta)*t, exactly.
    bn, bd = beta.numerator, beta.denominator
    radicands = [bn * bd * d for d in ds]
    case1 = ge_int_plus_coeff_sqrtsum(diff, Fraction(-2, bd), radicands)

    def full_embedding(hmap: dict[int, int], g_map: dict[int, int]) -> Embedding:
        phi = [0] * n
        for u, x in hmap.items():
            phi[u] = x
        for v, y in g_map.items():
            phi[v] = y
        return Embedding.from_map(phi)

    def identity_check(g_map: dict[int, int], r1: DiscrepancyReport,
                       r2: DiscrepancyReport) -> None:
        gains = [_pair_gain(g_map, vi_sets[i][0], vi_sets[i][1],
                            yi_sets[i][0], yi_sets[i][1]) for i in best_goods]
        expected = diff + sum(gains)
        assert r1.mono_plus - r2.mono_plus == expected, \
            "switching identity violated"

    e_f = f.edge_count
    candidates: list[tuple[Embedding, DiscrepancyReport]] = []
    if case1:
        emb1 = full_embedding(h1, best_g)
        emb2 = full_embedding(h2, best_g)
        r1 = discrepancy(coloring, f, emb1)
        r2 = discrepancy(coloring, f, emb2)
        identity_check(best_g, r1, r2)
        candidates = [(emb1, r1), (emb2, r2)]
        case_tag = "1"
    else:
        case_tag = "2"
        for trial in range(trials):
            g_map = sample_g(0xF2E5D + trial)
            emb1 = full_embedding(h1, g_map)
            emb2 = full_embedding(h2, g_map)
            r1 = discrepancy(coloring, f, emb1)
            r2 = discrepancy(coloring, f, emb2)
            identity_check(g_map, r1, r2)
            candidates.append((emb1, r1))
            candidates.append((emb2, r2))

    emb, rep = max(candidates, key=lambda er: er[1].discrepancy)
    cert_value = beta * sqrtsum_lower(ds)
    return SwitchResult(emb, rep, "switch", case_tag, cert_value,
                        {"z": best_z, "good_pairs": len(best_goods),
                         "u_internal_diff": diff, "pairs_used": m})


# ---------------------------------------------------------------------------
# single-pair switching (large maximum degree route)
# ---------------------------------------------------------------------------


def single_pair_switch_embed(f: Graph, coloring: Coloring, eps: Fraction,
                             delta: Fraction | None = None) -> SwitchResult:
    """Switch a single high-degree guest vertex with a partner whose
    neighborhood differs a lot, mapped onto two hosts whose red
    neighborhoods differ moderately.

    Preconditions: Delta(F) >= delta*n, Delta(F) <= (1-eps)*n and red density
    within [0.49, 0.51]; otherwise the expectation embedder is the right tool
    and a ParameterError says so.
    """
    n = f.n
    if coloring.n != n:
        raise DimensionError("guest and coloring sizes differ")
    delta = DEFAULT_CONFIG.delta if delta is None else delta
    if not (0 <= eps <= 1):
        raise ParameterError("eps must lie in [0, 1]")
    pairs_tot = coloring.total_pairs
    if not (49 * pairs_tot <= 100 * coloring.red_count <= 51 * pairs_tot):
        raise ParameterError("red density outside [0.49, 0.51]; use the "
                             "expectation embedder instead")
    dmax = f.max_degree()
    if dmax * delta.denominator < delta.numerator * n:
        raise ParameterError("maximum degree below delta*n; use the greedy "
                             "switching route instead")
    if dmax * eps.denominator > (eps.denominator - eps.numerator) * n:
        raise ParameterError("maximum degree exceeds (1-eps)*n")

    u = max(range(n), key=lambda v: (f.degree(v), -v))
    # partner maximizing the neighborhood symmetric difference
    best_sym, up = -1, -1
    for w in range(n):
        if w == u:
            continue
        sym = ((f.adj[u] ^ f.adj[w]) & ~(1 << u) & ~(1 << w)).bit_count()
        if sym > best_sym:
            best_sym, up = sym, w
    if 2 * best_sym * eps.denominator < eps.numerator * n:
        raise CertificationError("no guest partner with symmetric difference "
                                 ">= eps*n/2", {"max_sym_diff": best_sym})

    g_red = coloring.red

    def window_ok(x: int, xp: int) -> bool:
        ex = (g_red.adj[x] & ~g_red.adj[xp] & ~(1 << xp)).bit_count()
        exp_ = (g_red.adj[xp] & ~g_red.adj[x] & ~(1 << x)).bit_count()
        return 100 * ex > n and 100 * ex < 99 * n and 100 * exp_ < 99 * n

    x = max(range(n), key=lambda v: (g_red.degree(v), -v))
    found = None
    for xp in range(n):
        if xp != x and window_ok(x, xp):
            found = (x, xp)
            break
    if found is None:
        for a in range(n):
            for b in range(n):
                if a != b and window_ok(a, b):
                    found = (a, b)
                    break
            if found:
                break
    if found is None:
        best = max((((g_red.adj[a] & ~g_red.adj[b] & ~(1 << b)).bit_count(), a, b)
                    for a in range(n) for b in range(n) if a != b), default=(0, 0, 1))
        raise CertificationError("no host pair satisfies the neighborhood "
                                 "difference window", {"best_difference": best[0]})
    x, xp = found

    # orient guest pair so |V| >= |V'|, host pair so |X| >= |X'|
    v_set = f.adj[u] & ~f.adj[up] & ~(1 << up)
    vp_set = f.adj[up] & ~f.adj[u] & ~(1 << u)
    if v_set.bit_count() < vp_set.bit_count():
        u, up = up, u
        v_set, vp_set = vp_set, v_set
    x_set = g_red.adj[x] & ~g_red.adj[xp] & ~(1 << xp)
    xp_set = g_red.adj[xp] & ~g_red.adj[x] & ~(1 << x)
    if x_set.bit_count() < xp_set.bit_count():
        x, xp = xp, x
        x_set, xp_set = xp_set, x_set

    # choose image sets N, N' greedily: N prefers X and avoids X', N' the
    # reverse; this dominates both cases of the placement rule.
    pool = [h for h in range(n) if h not in (x, xp)]
    weight = {h: (1 if x_set >> h & 1 else 0) - (1 if xp_set >> h & 1 else 0)
              for h in pool}
    size_n, size_np = v_set.bit_count(), vp_set.bit_count()
    by_pref_n = sorted(pool, key=lambda h: (-weight[h], h))
    image_n = by_pref_n[:size_n]
    remaining = [h for h in by_pref_n if h not in set(image_n)]
    by_pref_np = sorted(remaining, key=lambda h: (weight[h], h))
    image_np = by_pref_np[:size_np]

    gain = (sum(1 for h in image_n if x_set >> h & 1)
            - sum(1 for h in image_n if xp_set >> h & 1)
            + sum(1 for h in image_np if xp_set >> h & 1)
            - sum(1 for h in image_np if x_set >> h & 1))

    phi = [-1] * n
    phi[u], phi[up] = x, xp
    for v, h in zip(sorted(bits_of(v_set)), sorted(image_n)):
        phi[v] = h
    for v, h in zip(sorted(bits_of(vp_set)), sorted(image_np)):
        phi[v] = h
    used = set(h for h in phi if h >= 0)
    free_hosts = [h for h in range(n) if h not in used]
    it = iter(free_hosts)
    for v in range(n):
        if phi[v] < 0:
            phi[v] = next(it)
    emb1 = Embedding.from_map(phi)
    phi2 = list(phi)
    phi2[u], phi2[up] = phi[up], phi[u]
    emb2 = Embedding.from_map(phi2)
    r1 = discrepancy(coloring, f, emb1)
    r2 = discrepancy(coloring, f, emb2)
    assert r1.mono_plus - r2.mono_plus == gain, "single-pair switching identity violated"
    emb, rep = max([(emb1, r1), (emb2, r2)], key=lambda er: er[1].discrepancy)
    return SwitchResult(emb, rep, "single-pair", "1", Fraction(abs(gain), 2),
                        {"gain": gain, "guest_pair": (u, up), "host_pair": (x, xp)})


# ---------------------------------------------------------------------------
# greedy switching (small maximum degree, small independence number route)
# ---------------------------------------------------------------------------


def greedy_switch_embed(f: Graph, coloring: Coloring, hc: HostCertificate,
                        delta: Fraction | None = None) -> SwitchResult:
    """Greedy multi-pair switching for guests with small maximum degree.

    Pairs come from a maximal independent set A; each pair contributes a
    fresh neighborhood W_i whose difference part V_i is placed into a region
    of the host that forces |D_i| >= |V_i|/2.  Switching the sign-consistent
    half of the pairs yields a gap of at least a quarter of sum |V_i|.
    """
    n = f.n
    if coloring.n != n:
        raise DimensionError("guest and coloring sizes differ")
    verify_host_certificate(coloring, hc)
    delta = DEFAULT_CONFIG.delta if delta is None else delta
    dmax = f.max_degree()
    if dmax * delta.denominator > delta.numerator * n:
        raise ParameterError("maximum degree above delta*n; use the "
                             "single-pair route instead")
    a_mask = greedy_max_independent_set(f)
    if 2 * a_mask.bit_count() > n:
        raise ParameterError("independent set exceeds n/2; use the "
                             "independent-set certificate route instead")
    g_red = coloring.red
    full = f.full_mask

    # B: vertices outside A with few neighbors in A
    a_size = a_mask.bit_count()
    b_mask = 0
    for v in bits_of(full ^ a_mask):
        if 5 * (f.adj[v] & a_mask).bit_count() <= a_size:
            b_mask |= 1 << v

    dn, dd = delta.numerator, delta.denominator
    pairs: list[tuple[int, int]] = []
    w_sets: list[int] = []       # full fresh neighborhoods W_i
    v_sets: list[int] = []       # V_i = W_i minus N(u'_i)
    vp_sets: list[int] = []
    covered = 0                  # union of full W_j
    w_b_total = 0                # |union of W_j cap B|
    sum_v = 0
    used_a = 0
    while sum_v * dd < dn * n:
        best = None
        cand_a = [a for a in bits_of(a_mask) if not used_a >> a & 1]
        for u in cand_a:
            nu_fresh = f.adj[u] & ~covered
            for upp in cand_a:
                if upp == u:
                    continue
                w_cand = (nu_fresh | (f.adj[upp] & ~covered))
                wb = (w_cand & b_mask).bit_count()
                v_cand = w_cand & ~f.adj[upp]
                vb = (v_cand & b_mask).bit_count()
                if 3 * vb < wb or 5 * a_size * wb < n:
                    continue
                if (w_b_total + wb) * dd > 5 * dn * n:
                    continue
                key = (v_cand.bit_count(), -u, -upp)
                if best is None or key > best[0]:
                    best = (key, u, upp, w_cand, v_cand)
        if best is None:
            raise CertificationError(
                "pair extraction stalled below the delta*n difference mass",
                {"sum_v": sum_v, "target": Fraction(dn * n, dd),
                 "pairs": len(pairs), "a_size": a_size,
                 "b_size": b_mask.bit_count()})
        _, u, upp, w_cand, v_cand = best
        pairs.append((u, upp))
        w_sets.append(w_cand)
        v_sets.append(v_cand)
        vp_sets.append(w_cand & ~f.adj[u])
        covered |= w_cand
        w_b_total += (w_cand & b_mask).bit_count()
        sum_v += v_cand.bit_count()
        used_a |= (1 << u) | (1 << upp)

    mass_ok = sum(w.bit_count() for w in w_sets) * dd <= 10 * dn * n

    # host pairs: orient by the larger one-sided difference; need n/200 each
    hpairs = []
    for (x, xp) in hc.pairs:
        ex = (g_red.adj[x] & ~g_red.adj[xp]).bit_count()
        exp_ = (g_red.adj[xp] & ~g_red.adj[x]).bit_count()
        if exp_ > ex:
            x, xp = xp, x
            ex = exp_
        if 200 * ex >= n:
            hpairs.append((x, xp))
    if len(hpairs) < len(pairs):
        if not hpairs or len(pairs) > len(hpairs):
            pairs = pairs[: len(hpairs)]
            w_sets = w_sets[: len(pairs)]
            v_sets = v_sets[: len(pairs)]
            vp_sets = vp_sets[: len(pairs)]
        if not pairs:
            raise CertificationError("no usable host pairs for greedy switching",
                                     {"host_pairs": len(hpairs)})
    m = len(pairs)
    hpairs = hpairs[:m]
    x_pairs_mask = 0
    for x, xp in hpairs:
        x_pairs_mask |= (1 << x) | (1 << xp)

    g_map: dict[int, int] = {}
    used_hosts = 0
    gains: list[int] = []

    def take(region: int, count: int, vertices: int) -> None:
        nonlocal used_hosts
        picks = []
        for h in bits_of(region & ~used_hosts & ~x_pairs_mask):
            picks.append(h)
            if len(picks) == count:
                break
        if len(picks) < count:
            raise CertificationError("placement region capacity exhausted",
                                     {"needed": count, "available": len(picks)})
        for v, h in zip(bits_of(vertices), picks):
            g_map[v] = h
            used_hosts |= 1 << h

    for i in range(m):
        u, upp = pairs[i]
        x, xp = hpairs[i]
        nx, nxp = g_red.adj[x], g_red.adj[xp]
        sym = nx ^ nxp
        # gain already determined by earlier placements of u's neighbors
        s = 0
        for v in bits_of(f.adj[u] & covered & ~w_sets[i]):
            if v in g_map:
                h = 1 << g_map[v]
                s += (1 if nx & h else 0) - (1 if nxp & h else 0)
        for v in bits_of(f.adj[upp] & covered & ~w_sets[i]):
            if v in g_map:
                h = 1 << g_map[v]
                s += (1 if nxp & h else 0) - (1 if nx & h else 0)
        vi, vpi = v_sets[i], vp_sets[i]
        out_region = full & ~sym & ~(1 << x) & ~(1 << xp)
        if 2 * s <= -vi.bit_count():
            take(out_region, vi.bit_count(), vi)
            take(out_region, vpi.bit_count(), vpi)
        else:
            take(nx & ~nxp, vi.bit_count(), vi)
            take(out_region, vpi.bit_count(), vpi)
        rest = w_sets[i] & ~vi & ~vpi
        take(full, rest.bit_count(), rest)
        # recompute D_i exactly over the full neighborhoods
        d_i = 0
        for v in bits_of(f.adj[u]):
            h = 1 << g_map[v]
            d_i += (1 if nx & h else 0) - (1 if nxp & h else 0)
        for v in bits_of(f.adj[upp]):
            h = 1 << g_map[v]
            d_i += (1 if nxp & h else 0) - (1 if nx & h else 0)
        gains.append(d_i)
        assert 2 * abs(d_i) >= vi.bit_count(), \
            "greedy placement failed to secure |D_i| >= |V_i|/2"

    plus = [i for i in range(m) if 2 * gains[i] >= v_sets[i].bit_count()]
    minus = [i for i in range(m) if i not in plus]
    s_plus = sum(gains[i] for i in plus)
    s_minus = sum(gains[i] for i in minus)
    switch_set = plus if s_plus >= -s_minus else minus
    gap = sum(gains[i] for i in switch_set)

    phi = [-1] * n
    for (u, upp), (x, xp) in zip(pairs, hpairs):
        phi[u], phi[upp] = x, xp
    for v, h in g_map.items():
        phi[v] = h
    used = set(h for h in phi if h >= 0)
    it = iter([h for h in range(n) if h not in used])
    for v in range(n):
        if phi[v] < 0:
            phi[v] = next(it)
    emb1 = Embedding.from_map(phi)
    phi2 = list(phi)
    for i in switch_set:
        u, upp = pairs[i]
        phi2[u], phi2[upp] = phi[upp], phi[u]
    emb2 = Embedding.from_map(phi2)
    r1 = discrepancy(coloring, f, emb1)
    r2 = discrepancy(coloring, f, emb2)
    assert r1.mono_plus - r2.mono_plus == gap, "greedy switching identity violated"
    assert 4 * abs(gap) >= sum_v, "switching gap fell below a quarter of the mass"
    emb, rep = max([(emb1, r1), (emb2, r2)], key=lambda er: er[1].discrepancy)
    return SwitchResult(emb, rep, "greedy-switch", "2.2", Fraction(abs(gap), 2),
                        {"pairs": m, "sum_v": sum_v, "gap": gap,
                         "mass_ok": mass_ok})


# ---------------------------------------------------------------------------
# top-level drivers
# ---------------------------------------------------------------------------


def _wrap(f: Graph, coloring: Coloring, emb: Embedding, strategy: str,
          case: str, details: dict | None = None) -> SwitchResult:
    rep = discrepancy(coloring, f, emb)
    return SwitchResult(emb, rep, strategy, case,
                        Fraction(rep.discrepancy, 2), details or {})


def _greedy_candidates(f: Graph, coloring: Coloring) -> list[SwitchResult]:
    out = []
    for target in ("red", "blue"):
        emb = greedy_expectation_embed(f, coloring, target)
        out.append(_wrap(f, coloring, emb, "random", f"expectation-{target}"))
    return out


def _guest_bisection(f: Graph, budget: int, seed: Seed) -> Bisection:
    if f.n <= 20:
        b_max = exhaustive_extremal_bisection(f, "max")
        b_min = exhaustive_extremal_bisection(f, "min")
    else:
        b_max = local_search_bisection(f, "max", budget, seed)
        b_min = local_search_bisection(f, "min", budget, derive_seed(seed, 1))
    return max((b_max, b_min), key=lambda b: abs(b.deviation))


def _host_bisection(coloring: Coloring, budget: int, seed: Seed) -> Bisection:
    g = coloring.red
    cand = []
    for i, direction in enumerate(("max", "min")):
        b = local_search_bisection(g, direction, budget, derive_seed(seed, 7 + i))
        half = Fraction(b.u_side.bit_count() * (g.n - b.u_side.bit_count()), 2)
        cand.append((abs(Fraction(b.cut_size) - half), b))
    return max(cand, key=lambda t: t[0])[1]


def _cut_route(f: Graph, coloring: Coloring, cfg: Config, seed: Seed) -> SwitchResult:
    fb = _guest_bisection(f, cfg.budget, derive_seed(seed, 21))
    gb = _host_bisection(coloring, cfg.budget, derive_seed(seed, 22))
    res = cut_embed(f, fb, coloring, gb, seed)
    return SwitchResult(res.embedding, res.report, "cut", f"cut-{res.target}",
                        Fraction(res.report.discrepancy, 2),
                        {"bound": res.expectation_bound,
                         "guarantee_ok": res.guarantee_ok})


def embed_bounded_degree(f: Graph, coloring: Coloring, eps: Fraction,
                         seed: Seed = 0, config: Config | None = None) -> SwitchResult:
    """Driver for guests with maximum degree <= (1-eps)*n and no isolated
    vertices.  Attempts every applicable route and returns the embedding with
    the largest recounted discrepancy.
    """
    cfg = config or DEFAULT_CONFIG
    n = f.n
    if coloring.n != n:
        raise DimensionError("guest and coloring sizes differ")
    if not (0 < eps <= 1):
        raise ParameterError("eps must lie in (0, 1]")
    if f.isolated_vertices():
        raise ParameterError("guest has isolated vertices")
    if f.max_degree() * eps.denominator > (eps.denominator - eps.numerator) * n:
        raise ParameterError("maximum degree exceeds (1-eps)*n")

    candidates = _greedy_candidates(f, coloring)
    pairs_tot = coloring.total_pairs
    density_mid = 49 * pairs_tot <= 100 * coloring.red_count <= 51 * pairs_tot
    if density_mid:
        dmax = f.max_degree()
        if dmax * cfg.delta.denominator >= cfg.delta.numerator * n:
            try:
                candidates.append(single_pair_switch_embed(f, coloring, eps, cfg.delta))
            except (CertificationError, ParameterError):
                pass
        host = certify_host(coloring, cfg.beta, seed) if n >= 40 else \
            HostFailure("n too small for host certification")
        if isinstance(host, HostCertificate):
            mis = greedy_max_independent_set(f)
            if mis.bit_count() >= n // 2:
                try:
                    gc = certify_guest_independent(f, mis)
                    candidates.append(main_switch_embed(
                        f, gc, coloring, host, cfg.beta, cfg.trials, seed,
                        cfg.rho_switch))
                except (CertificationError, ParameterError, CertificateInvalid):
                    pass
            else:
                try:
                    candidates.append(greedy_switch_embed(f, coloring, host, cfg.delta))
                except (CertificationError, ParameterError):
                    pass
    if n >= 4:
        try:
            candidates.append(_cut_route(f, coloring, cfg, seed))
        except (ParameterError, DisclabError):
            pass
    return max(candidates, key=lambda r: r.report.discrepancy)


def embed_regular(f: Graph, coloring: Coloring, eps: Fraction, seed: Seed = 0,
                  config: Config | None = None) -> SwitchResult:
    """Driver for d-regular guests with d <= (1-eps)*n.

    For d <= n/2 both the biased-bisection route and the certificate route
    are attempted; for denser guests the complement guest is embedded and
    the same bijection is read as an embedding of the original.
    """
    cfg = config or DEFAULT_CONFIG
    n = f.n
    if coloring.n != n:
        raise DimensionError("guest and coloring sizes differ")
    d = f.regular_degree()
    if d is None:
        raise ParameterError("guest must be regular")
    if d * eps.denominator > (eps.denominator - eps.numerator) * n:
        raise ParameterError("degree exceeds (1-eps)*n")

    if 2 * d > n:
        comp = f.complement()
        eps_rec = min(eps, Fraction(1, 2))
        rec = embed_regular(comp, coloring, eps_rec, seed, cfg)
        candidates = [_wrap(f, coloring, rec.embedding, "switch",
                            "complement", {"inner": rec.case_taken})]
        candidates.extend(_greedy_candidates(f, coloring))
        return max(candidates, key=lambda r: r.report.discrepancy)

    candidates = _greedy_candidates(f, coloring)
    if d >= 1 and n >= 4:
        try:
            candidates.append(_cut_route(f, coloring, cfg, seed))
        except (ParameterError, DisclabError):
            pass
    if n >= 100:
        host = certify_host(coloring, cfg.beta, seed) if n >= 40 else \
            HostFailure("n too small")
        if isinstance(host, HostCertificate):
            try:
                gc = certify_guest_regular(f, seed)
                candidates.append(main_switch_embed(
                    f, gc, coloring, host, cfg.beta, cfg.trials, seed,
                    cfg.rho_switch))
            except (CertificationError, ParameterError, CertificateInvalid):
                pass
    return max(candidates, key=lambda r: r.report.discrepancy)
