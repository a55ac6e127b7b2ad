"""Exact and Monte-Carlo verification of the probabilistic inequalities the
embedders rely on: hypergeometric point/tail anticoncentration, subset
coupling, binomial medians, random-matching crossings, and the four-term
deviation statistic Z.

Exact checks work in big-integer rationals throughout; square roots are
compared by squaring.  Monte-Carlo checks are deterministic given the seed
and gate their verdict at three standard errors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, isqrt

from .exactmath import derive_seed
from .graphcore import CapacityError, ParameterError, Seed, bits_of


@dataclass(frozen=True)
class HypergeomSpec:
    """Population n, sample size k, marked set of size p_count."""

    n: int
    k: int
    p_count: int

    def __post_init__(self):
        if not (0 <= self.p_count <= self.n):
            raise ParameterError("need 0 <= p_count <= n")
        if not (1 <= self.k <= self.n):
            raise ParameterError("need 1 <= k <= n")

    @property
    def p(self) -> Fraction:
        return Fraction(self.p_count, self.n)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of a bound verification: lhs >= rhs at the worst checked point."""

    holds: bool
    lhs: Fraction
    rhs: Fraction
    witness: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)


def hypergeom_pmf(spec: HypergeomSpec, t: int) -> Fraction:
    """P[|A cap P| = t] for a uniform k-subset A; exact; 0 out of support."""
    if t < 0 or t > spec.k or t > spec.p_count or spec.k - t > spec.n - spec.p_count:
        return Fraction(0)
    return Fraction(comb(spec.p_count, t) * comb(spec.n - spec.p_count, spec.k - t),
                    comb(spec.n, spec.k))


def _default_n_for(k: int, eta: Fraction, p: Fraction) -> int:
    """Smallest n with k <= (1-eta)n and p*n integral."""
    num, den = eta.numerator, eta.denominator
    n_min = -(-k * den // (den - num))  # ceil(k / (1－eta))
    step = p.denominator
    return -(-n_min // step) * step


def _window_halfwidth_sq(spec: HypergeomSpec) -> Fraction:
    # (0.5 * sqrt(p(1-p) min(k, n-k)))^2
    p = spec.p
    return p * (1 - p) * min(spec.k, spec.n - spec.k) / 4


def check_anticoncentration(eta: Fraction, k_grid: list[int],
                            p: Fraction | None = None,
                            n_for_k=None) -> BoundCheck:
    """Pointwise lower bound on the hypergeometric pmf inside the central
    window, verified exactly for each k in the grid.

    For every admissible integer t with (pk - t)^2 <= p(1-p) min(k,n-k)/4,
    checks pmf(t) >= 0.14 * sqrt(eta / (p(1-p)k)) by comparing squares in
    exact rationals.  Reports the minimum margin (on the squared scale) and
    the empirical smallest grid k from which the bound holds through the
    grid maximum.
    """
    if not (0 < eta <= Fraction(1, 2)):
        raise ParameterError("eta must lie in (0, 1/2]")
    p = Fraction(1, 2) if p is None else p
    if not (eta <= p <= 1 - eta):
        raise ParameterError("need eta <= p <= 1-eta")
    n_for_k = n_for_k or (lambda k: _default_n_for(k, eta, p))
    per_k: dict[int, bool] = {}
    worst_margin: Fraction | None = None
    witness: dict = {}
    bound_sq_coeff = Fraction(14, 100) ** 2 * eta
    for k in sorted(k_grid):
        n = n_for_k(k)
        if k * eta.denominator > (eta.denominator - eta.numerator) * n:
            raise ParameterError(f"grid violates k <= (1-eta)n at k={k}")
        spec = HypergeomSpec(n, k, int(p * n))
        if spec.p != p:
            raise ParameterError(f"n rule must make p*n integral (k={k})")
        w_sq = _window_halfwidth_sq(spec)
        ok = True
        pk = p * k
        t_lo = int(pk) - isqrt(int(w_sq)) - 2
        t_hi = int(pk) + isqrt(int(w_sq)) + 2
        b_sq = bound_sq_coeff / (p * (1 - p) * k)
        for t in range(max(t_lo, 0), min(t_hi, k) + 1):
            if (pk - t) ** 2 > w_sq:
                continue  # outside the window: not a counterexample
            val = hypergeom_pmf(spec, t)
            margin = val * val - b_sq
            if worst_margin is None or margin < worst_margin:
                worst_margin = margin
                witness = {"k": k, "n": n, "t": t, "pmf": val,
                           "bound_sq": b_sq}
            if margin < 0:
                ok = False
        per_k[k] = ok
    ks = sorted(per_k)
    k0 = None
    for i, k in enumerate(ks):
        if all(per_k[kk] for kk in ks[i:]):
            k0 = k
            break
    holds = k0 == ks[0] if ks else True
    lhs = witness.get("pmf", Fraction(0))
    rhs_sq = witness.get("bound_sq", Fraction(0))
    return BoundCheck(holds, lhs, rhs_sq, witness,
                      details={"per_k": per_k, "empirical_k0": k0,
                               "min_margin_sq": worst_margin, "eta": eta, "p": p})


def _tail_threshold_upper(spec: HypergeomSpec, eta: Fraction) -> int:
    """Smallest integer t with t >= p k + 0.1 eta sqrt(k)."""
    p = spec.p
    shift_sq = (eta / 10) ** 2 * spec.k
    t = int(p * spec.k)
    while True:
        diff = Fraction(t) - p * spec.k
        if diff >= 0 and diff * diff >= shift_sq:
            return t
        t += 1


def _tail_threshold_lower(spec: HypergeomSpec, eta: Fraction) -> int:
    """Largest integer t with t <= p k - 0.1 eta sqrt(k)."""
    p = spec.p
    shift_sq = (eta / 10) ** 2 * spec.k
    t = int(p * spec.k) + 1
    while True:
        diff = p * spec.k - Fraction(t)
        if diff >= 0 and diff * diff >= shift_sq:
            return t
        t -= 1


def hypergeom_tail(spec: HypergeomSpec, t_from: int, t_to: int) -> Fraction:
    """Exact P[t_from <= |A cap P| <= t_to]."""
    lo = max(t_from, 0, spec.k - (spec.n - spec.p_count))
    hi = min(t_to, spec.k, spec.p_count)
    num = 0
    for t in range(lo, hi + 1):
        num += comb(spec.p_count, t) * comb(spec.n - spec.p_count, spec.k - t)
    return Fraction(num, comb(spec.n, spec.k))


def check_tails(eta: Fraction, k_grid: list[int], p: Fraction | None = None,
                n_for_k=None) -> BoundCheck:
    """Exact two-sided tail bound: both P[X >= pk + 0.1 eta sqrt(k)] and
    P[X <= pk - 0.1 eta sqrt(k)] are at least 0.04 eta, per grid point.

    Grid points where one tail falls short are classified (per-k flags);
    the headline flag follows the empirical k0 convention.
    """
    if not (0 < eta <= Fraction(1, 2)):
        raise ParameterError("eta must lie in (0, 1/2]")
    p = Fraction(1, 2) if p is None else p
    if not (eta <= p <= 1 - eta):
        raise ParameterError("need eta <= p <= 1-eta")
    n_for_k = n_for_k or (lambda k: _default_n_for(k, eta, p))
    target = eta * Fraction(4, 100)
    per_k: dict[int, bool] = {}
    worst: Fraction | None = None
    witness: dict = {}
    for k in sorted(k_grid):
        n = n_for_k(k)
        if k * eta.denominator > (eta.denominator - eta.numerator) * n:
            raise ParameterError(f"grid violates k <= (1-eta)n at k={k}")
        spec = HypergeomSpec(n, k, int(p * n))
        up = hypergeom_tail(spec, _tail_threshold_upper(spec, eta), spec.k)
        low = hypergeom_tail(spec, 0, _tail_threshold_lower(spec, eta))
        per_k[k] = up >= target and low >= target
        for side, val in (("upper", up), ("lower", low)):
            margin = val - target
            if worst is None or margin < worst:
                worst = margin
                witness = {"k": k, "n": n, "side": side, "tail": val}
    ks = sorted(per_k)
    k0 = None
    for i, k in enumerate(ks):
        if all(per_k[kk] for kk in ks[i:]):
            k0 = k
            break
    holds = bool(ks) and k0 == ks[0]
    return BoundCheck(holds, witness.get("tail", Fraction(0)), target, witness,
                      details={"per_k": per_k, "empirical_k0": k0,
                               "min_margin": worst, "eta": eta, "p": p})


def check_coupling(n: int, k: int, p_mask: int, q_mask: int) -> BoundCheck:
    """Exhaustive check over all k-subsets A of [n] that

    1. P[|A cap P| >= |A cap Q|] >= 1/2 whenever |P| >= |Q|, and
    2. the events {|A cap P| >= s} and {|A cap Q| <= t} are positively
       correlated for every s, t.

    Exact integer counting; capacity-capped at C(n,k) <= 3,000,000.
    """
    if p_mask & q_mask:
        raise ParameterError("P and Q must be disjoint")
    if p_mask >> n or q_mask >> n:
        raise ParameterError("P, Q must live inside [n]")
    total = comb(n, k)
    if total > 3_000_000:
        raise CapacityError("too many k-subsets to enumerate")
    psz = p_mask.bit_count()
    qsz = q_mask.bit_count()
    hist = [[0] * (k + 1) for _ in range(k + 1)]
    for sub in combinations(range(n), k):
        m = 0
        for v in sub:
            m |= 1 << v
        hist[(m & p_mask).bit_count()][(m & q_mask).bit_count()] += 1
    # item 1
    ge_count = sum(hist[i][j] for i in range(k + 1) for j in range(i + 1))
    item1_ok = (psz < qsz) or (2 * ge_count >= total)
    # item 2: N(s,t)*total >= A(s)*B(t) for all s,t
    worst: Fraction | None = None
    witness: dict = {}
    item2_ok = True
    suffix = [[0] * (k + 2) for _ in range(k + 2)]  # i >= s and j <= t counts
    for s in range(k, -1, -1):
        run = 0
        for t in range(k + 1):
            run += hist[s][t]
            suffix[s][t] = run + (suffix[s + 1][t] if s + 1 <= k else 0)
    a_counts = [sum(hist[i][j] for i in range(s, k + 1) for j in range(k + 1))
                for s in range(k + 1)]
    b_counts = [sum(hist[i][j] for j in range(t + 1) for i in range(k + 1))
                for t in range(k + 1)]
    for s in range(k + 1):
        for t in range(k + 1):
            lhs_int = suffix[s][t] * total
            rhs_int = a_counts[s] * b_counts[t]
            margin = Fraction(lhs_int - rhs_int, total * total)
            if worst is None or margin < worst:
                worst = margin
                witness = {"s": s, "t": t,
                           "joint": Fraction(suffix[s][t], total),
                           "product": Fraction(rhs_int, total * total)}
            if lhs_int < rhs_int:
                item2_ok = False
    holds = item1_ok and item2_ok
    return BoundCheck(holds, Fraction(ge_count, total), Fraction(1, 2), witness,
                      details={"item1": item1_ok, "item2": item2_ok,
                               "min_margin": worst, "p_size": psz, "q_size": qsz})


def check_binomial_median(n_max: int) -> BoundCheck:
    """Exact check that P[Bin(n,1/2) >= n/2] >= 1/2 for all 1 <= n <= n_max."""
    worst: Fraction | None = None
    witness: dict = {}
    holds = True
    for n in range(1, n_max + 1):
        t0 = (n + 1) // 2 if n % 2 else n // 2
        # running tail sum of C(n, t) for t = t0..n
        c = comb(n, t0)
        tail = c
        for t in range(t0, n):
            c = c * (n - t) // (t + 1)
            tail += c
        margin = Fraction(tail, 1 << n) - Fraction(1, 2)
        if worst is None or margin < worst:
            worst = margin
            witness = {"n": n, "tail": Fraction(tail, 1 << n)}
        if margin < 0:
            holds = False
    return BoundCheck(holds, witness.get("tail", Fraction(1)), Fraction(1, 2),
                      witness, details={"n_max": n_max, "min_margin": worst})


def _three_sigma_at_least(successes: int, trials: int, target: Fraction) -> bool:
    """p_hat - 3*sqrt(p_hat(1-p_hat)/trials) >= target, in exact rationals."""
    p_hat = Fraction(successes, trials)
    gap = p_hat - target
    if gap < 0:
        return False
    return gap * gap >= 9 * p_hat * (1 - p_hat) / trials


def mc_random_matching(n: int, p_count: int, k: int, eta: Fraction,
                       trials: int, seed: Seed) -> BoundCheck:
    """Monte-Carlo estimate that a uniform k-matching has at least
    floor(eta*k/25) edges crossing P with probability >= 5/6.

    The integer crossing threshold uses floor semantics so that thresholds
    below 1 are met by zero crossings.  Verdict gates at three standard
    errors above 5/6.
    """
    if not (eta * n <= p_count and p_count <= (1 - eta) * n):
        raise ParameterError("need eta <= p_count/n <= 1-eta")
    if n < 2 * k or k < 1 or trials < 1:
        raise ParameterError("infeasible matching parameters")
    thresh = (eta.numerator * k) // (25 * eta.denominator)
    rng = random.Random(derive_seed(seed, 0x3A7C))
    successes = 0
    p_set = p_count  # P = {0..p_count-1}
    for _ in range(trials):
        verts = rng.sample(range(n), 2 * k)
        crossing = 0
        for i in range(0, 2 * k, 2):
            if (verts[i] < p_set) != (verts[i + 1] < p_set):
                crossing += 1
        if crossing >= thresh:
            successes += 1
    p_hat = Fraction(successes, trials)
    holds = _three_sigma_at_least(successes, trials, Fraction(5, 6))
    return BoundCheck(holds, p_hat, Fraction(5, 6),
                      {"threshold": thresh, "successes": successes},
                      details={"trials": trials, "eta": eta})


@dataclass(frozen=True)
class SqrtDeviationEstimate:
    """Empirical curve rho -> P[Z >= rho*sqrt(a)] and the best self-consistent rho."""

    rho_hat: Fraction
    curve: tuple[tuple[Fraction, Fraction], ...]  # (rho, empirical probability)
    trials: int


def mc_sqrt_deviation(n: int, p_mask: int, q_mask: int, a: int, b: int,
                      eta: Fraction, trials: int, seed: Seed,
                      rho_grid: list[Fraction] | None = None) -> SqrtDeviationEstimate:
    """Sample disjoint random (A,B) of sizes (a,b) and estimate the largest
    rho with P[Z >= rho*sqrt(a)] >= rho, where
    Z = |A∩P| - |A∩Q| - |B∩P| + |B∩Q|.

    The returned rho_hat is conservative: the empirical probability must
    clear rho by three standard errors.
    """
    if p_mask & q_mask:
        raise ParameterError("P and Q must be disjoint")
    psz, qsz = p_mask.bit_count(), q_mask.bit_count()
    if psz < qsz:
        raise ParameterError("need |P| >= |Q|")
    if not (eta * n <= psz and psz <= (1 - eta) * n):
        raise ParameterError("need eta <= |P|/n <= 1-eta")
    if not (0 <= b <= a and a * eta.denominator <= (eta.denominator - eta.numerator) * n):
        raise ParameterError("need 0 <= b <= a <= (1-eta)n")
    if a + b > n or a < 1 or trials < 1:
        raise ParameterError("infeasible sizes")
    rng = random.Random(derive_seed(seed, 0x50D7))
    in_p = [bool(p_mask >> v & 1) for v in range(n)]
    in_q = [bool(q_mask >> v & 1) for v in range(n)]
    hist: dict[int, int] = {}
    for _ in range(trials):
        verts = rng.sample(range(n), a + b)
        z = 0
        for i, v in enumerate(verts):
            if in_p[v]:
                z += 1 if i < a else -1
            elif in_q[v]:
                z -= 1 if i < a else -1
        hist[z] = hist.get(z, 0) + 1
    zs = sorted(hist)
    if rho_grid is None:
        rho_grid = [Fraction(i, 100) for i in range(0, 101)]
    curve = []
    rho_hat = Fraction(0)
    for rho in rho_grid:
        # minimal z with z >= rho*sqrt(a)
        bound_sq = rho * rho * a
        count = 0
        for z in zs:
            if z >= 0 and Fraction(z * z) >= bound_sq:
                count += sum(hist[zz] for zz in zs if zz >= z)
                break
        p_hat = Fraction(count, trials)
        curve.append((rho, p_hat))
        if rho > 0 and _three_sigma_at_least(count, trials, rho):
            rho_hat = max(rho_hat, rho)
    return SqrtDeviationEstimate(rho_hat, tuple(curve), trials)
