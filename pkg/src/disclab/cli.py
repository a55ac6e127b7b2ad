"""Command-line surface: generators, embedders, verifier suite, oracles, and
the experiment harness.

Output discipline: JSON is the canonical machine interface (graphs and
colorings embedded via their n/edge-list schema), CSV columns are fixed per
experiment kind and versioned in the header comment.  Every output carries
the config digest and the seed, and rerunning with the same pair reproduces
the same bytes (wall time is never written into canonical output).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import graphcore as gc
from .bisection import disc_pm, exhaustive_extremal_bisection, local_search_bisection
from .config import DEFAULT_CONFIG, Config
from .cutembed import greedy_expectation_embed
from .factors import (
    TwoFactor,
    find_unavoidable,
    kk_factor_driver,
    solve_rho_lambda,
    two_factor_driver,
)
from .oracle import oracle_best_factor, oracle_best_two_factor, oracle_max_disc
from .probkit import (
    check_anticoncentration,
    check_binomial_median,
    check_coupling,
    check_tails,
    mc_random_matching,
    mc_sqrt_deviation,
)
from .switchembed import (
    HostCertificate,
    certify_guest_independent,
    certify_guest_regular,
    certify_host,
    embed_bounded_degree,
    embed_regular,
    greedy_max_independent_set,
    greedy_switch_embed,
    main_switch_embed,
    single_pair_switch_embed,
    _cut_route,
    _wrap,
)

# Values of (rho_k, lambda_k) for k = 2..6, used by the harness assertion.
FROZEN_LAMBDA_TABLE = {
    2: ("1/3", "1/3"), 3: ("1/3", "2/3"), 4: ("5/14", "27/28"),
    5: ("9/25", "32/25"), 6: ("4/11", "35/22"),
}

CSV_VERSION = "disclab-csv v1"


def _frac(text: str) -> Fraction:
    return Fraction(text)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(args, payload: dict) -> None:
    payload = {"config_digest": payload.pop("config_digest"), **payload}
    text = json.dumps(_jsonable(payload), indent=None, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_graph(path: str) -> gc.Graph:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return gc.graph_from_obj(json.loads(text))
    return gc.parse_graph(text)


def _load_coloring(path: str) -> gc.Coloring:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return gc.coloring_from_obj(json.loads(text))
    return gc.parse_coloring(text)


def _load_two_factor(path: str) -> TwoFactor:
    with open(path) as fh:
        obj = json.load(fh)
    return TwoFactor(tuple(tuple(c) for c in obj["cycles"]))


def _config_from_args(args) -> Config:
    path = getattr(args, "config", None) or os.environ.get("DISCLAB_CONFIG")
    cfg = DEFAULT_CONFIG
    if path:
        with open(path) as fh:
            cfg = Config.from_obj(json.load(fh))
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_(base_seed=args.seed)
    return cfg


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    cfg = _config_from_args(args)
    seed = cfg.base_seed
    if args.what == "graph":
        kind = args.kind
        if kind == "cycle":
            g = gc.Graph.cycle(args.n)
        elif kind == "path":
            g = gc.Graph.path(args.n)
        elif kind == "matching":
            g = gc.Graph.perfect_matching(args.n)
        elif kind == "complete":
            g = gc.Graph.complete(args.n)
        elif kind == "empty":
            g = gc.Graph.empty(args.n)
        elif kind == "regular":
            g = gc.random_regular_graph(args.n, args.d, seed)
        elif kind == "cycles":
            g = gc.Graph.disjoint_cycles([int(x) for x in args.lengths.split(",")])
        elif kind == "star-clique-path":
            e = _frac(args.eps)
            g = gc.star_clique_path_guest(args.n, e.numerator, e.denominator, args.k)
        else:
            raise gc.ParameterError(f"unknown graph kind {kind!r}")
        text = json.dumps(gc.graph_to_obj(g)) if args.json else gc.write_graph(g)
    else:
        kind = args.kind
        if kind == "bipartite":
            r = _frac(args.rho)
            c = gc.bipartite_construction(args.n, r.numerator, r.denominator)
        elif kind == "twocliques":
            c = gc.two_cliques_coloring(args.m, red_cliques=not args.blue_cliques)
        elif kind == "random":
            p = _frac(args.p)
            c = gc.random_coloring(args.n, p.numerator, p.denominator, seed)
        elif kind == "allred":
            c = gc.all_red_coloring(args.n)
        elif kind == "allblue":
            c = gc.all_blue_coloring(args.n)
        elif kind == "bipartite-cut":
            c = gc.complete_bipartite_coloring(args.n)
        else:
            raise gc.ParameterError(f"unknown coloring kind {kind!r}")
        text = json.dumps(gc.coloring_to_obj(c)) if args.json else gc.write_coloring(c)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def _cmd_bisect(args) -> int:
    cfg = _config_from_args(args)
    g = _load_graph(args.infile)
    if args.mode == "exact":
        b = exhaustive_extremal_bisection(g, args.direction)
    else:
        b = local_search_bisection(g, args.direction, args.budget, cfg.base_seed)
    payload = {
        "config_digest": cfg.digest(), "seed": cfg.base_seed,
        "mode": args.mode, "direction": args.direction,
        "u_side": sorted(gc.bits_of(b.u_side)), "cut_size": b.cut_size,
        "deviation": b.deviation,
    }
    if args.discpm:
        dp = disc_pm(g, cfg.base_seed)
        payload["disc_plus"] = dp.disc_plus
        payload["disc_minus"] = dp.disc_minus
        payload["disc_exact"] = dp.exact
    _emit(args, payload)
    return 0


def _run_strategy(strategy: str, f: gc.Graph, col: gc.Coloring, eps: Fraction,
                  cfg: Config, target: str):
    seed = cfg.base_seed
    if strategy == "random":
        emb = greedy_expectation_embed(f, col, target)
        return _wrap(f, col, emb, "random", f"expectation-{target}")
    if strategy == "cut":
        return _cut_route(f, col, cfg, seed)
    if strategy == "single-pair":
        return single_pair_switch_embed(f, col, eps, cfg.delta)
    if strategy == "greedy-switch":
        host = certify_host(col, cfg.beta, seed)
        if not isinstance(host, HostCertificate):
            raise gc.ParameterError(f"host certification failed: {host.reason}")
        return greedy_switch_embed(f, col, host, cfg.delta)
    if strategy == "switch":
        host = certify_host(col, cfg.beta, seed)
        if not isinstance(host, HostCertificate):
            raise gc.ParameterError(f"host certification failed: {host.reason}")
        if f.regular_degree() is not None and 2 * f.regular_degree() <= f.n:
            guest = certify_guest_regular(f, seed)
        else:
            guest = certify_guest_independent(f, greedy_max_independent_set(f))
        return main_switch_embed(f, guest, col, host, cfg.beta, cfg.trials,
                                 seed, cfg.rho_switch)
    if strategy == "auto":
        if f.regular_degree() is not None:
            return embed_regular(f, col, eps, seed, cfg)
        return embed_bounded_degree(f, col, eps, seed, cfg)
    raise gc.ParameterError(f"unknown strategy {strategy!r}")


def _cmd_embed(args) -> int:
    cfg = _config_from_args(args)
    f = _load_graph(args.guest)
    col = _load_coloring(args.coloring)
    eps = _frac(args.eps)
    res = _run_strategy(args.strategy, f, col, eps, cfg, args.target)
    payload = {
        "config_digest": cfg.digest(), "seed": cfg.base_seed,
        "strategy": res.strategy, "case": res.case_taken,
        "mono_plus": res.report.mono_plus, "mono_minus": res.report.mono_minus,
        "discrepancy": res.report.discrepancy,
        "certificate_value": res.certificate_value,
        "embedding": list(res.embedding.map),
        "details": {k: v for k, v in res.details.items()
                    if isinstance(v, (int, str, bool, Fraction))},
    }
    _emit(args, payload)
    return 0


def _cmd_lambda(args) -> int:
    cfg = _config_from_args(args)
    ks = range(args.k_min, args.k_max + 1)
    rows = [(k, *solve_rho_lambda(k)) for k in ks]
    if args.csv:
        lines = [f"# {CSV_VERSION} kind=lambda_table config={cfg.digest()} seed={cfg.base_seed}",
                 "k,rho,lambda"]
        lines += [f"{k},{r},{l}" for k, r, l in rows]
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(args, {"config_digest": cfg.digest(), "seed": cfg.base_seed,
                     "table": [{"k": k, "rho": r, "lambda": l} for k, r, l in rows]})
    return 0


def _cmd_factor(args) -> int:
    cfg = _config_from_args(args)
    col = _load_coloring(args.coloring)
    fac = kk_factor_driver(col, args.k, _frac(args.eps), cfg.base_seed, cfg.fm_budget)
    _emit(args, {"config_digest": cfg.digest(), "seed": cfg.base_seed,
                 "k": args.k, "red_count": fac.red_count,
                 "blue_count": fac.blue_count,
                 "blocks": [list(b) for b in fac.blocks]})
    return 0


def _cmd_twofactor(args) -> int:
    cfg = _config_from_args(args)
    col = _load_coloring(args.coloring)
    two = _load_two_factor(args.guest)
    res = two_factor_driver(col, two, _frac(args.eps), cfg.base_seed, cfg.fm_budget)
    _emit(args, {"config_digest": cfg.digest(), "seed": cfg.base_seed,
                 "red_count": res.red_count, "blue_count": res.blue_count,
                 "best_count": res.best_count,
                 "target_floor": res.target_floor,
                 "embedding": list(res.embedding.map)})
    return 0


def _cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    kind = args.check
    if kind in ("anticoncentration", "tails"):
        eta = _frac(args.eta)
        p = _frac(args.p) if args.p else None
        grid = list(range(args.k_min, args.k_max + 1, args.k_step))
        fun = check_anticoncentration if kind == "anticoncentration" else check_tails
        bc = fun(eta, grid, p)
        payload = {"holds": bc.holds, "witness": bc.witness,
                   "empirical_k0": bc.details.get("empirical_k0"),
                   "per_k": bc.details.get("per_k")}
        if args.csv:
            lines = [f"# {CSV_VERSION} kind=verify-{kind} config={cfg.digest()} seed={cfg.base_seed}",
                     "k,holds"]
            lines += [f"{k},{int(v)}" for k, v in sorted(bc.details["per_k"].items())]
            with open(args.csv, "w") as fh:
                fh.write("\n".join(lines) + "\n")
    elif kind == "coupling":
        p_mask = (1 << args.p_size) - 1
        q_mask = ((1 << args.q_size) - 1) << args.p_size
        bc = check_coupling(args.n, args.k, p_mask, q_mask)
        payload = {"holds": bc.holds, "item1_probability": bc.lhs,
                   "witness": bc.witness}
    elif kind == "matching":
        bc = mc_random_matching(args.n, args.p_count, args.k, _frac(args.eta),
                                args.trials, cfg.base_seed)
        payload = {"holds": bc.holds, "empirical": bc.lhs, "target": bc.rhs,
                   "witness": bc.witness}
    elif kind == "sqrtdev":
        p_mask = (1 << args.p_size) - 1
        q_mask = ((1 << args.q_size) - 1) << args.p_size
        est = mc_sqrt_deviation(args.n, p_mask, q_mask, args.a, args.b,
                                _frac(args.eta), args.trials, cfg.base_seed)
        payload = {"rho_hat": est.rho_hat, "trials": est.trials,
                   "curve": [[r, p] for r, p in est.curve[:25]]}
    elif kind == "binomial":
        bc = check_binomial_median(args.n_max)
        payload = {"holds": bc.holds, "witness": bc.witness}
    else:
        raise gc.ParameterError(f"unknown check {kind!r}")
    payload = {"config_digest": cfg.digest(), "seed": cfg.base_seed,
               "check": kind, **payload}
    _emit(args, payload)
    return 0 if payload.get("holds", True) else 1


def _cmd_oracle(args) -> int:
    cfg = _config_from_args(args)
    col = _load_coloring(args.coloring)
    if args.which == "maxdisc":
        f = _load_graph(args.guest)
        emb, rep = oracle_max_disc(f, col, cfg.oracle_cap)
        payload = {"discrepancy": rep.discrepancy, "mono_plus": rep.mono_plus,
                   "mono_minus": rep.mono_minus, "embedding": list(emb.map)}
    elif args.which == "factor":
        res = oracle_best_factor(col, args.k, cfg.factor_cap)
        payload = {"best_red": res.best_red, "best_blue": res.best_blue,
                   "red_blocks": [list(b) for b in res.red_blocks],
                   "blue_blocks": [list(b) for b in res.blue_blocks]}
    else:
        two = _load_two_factor(args.guest)
        res = oracle_best_two_factor(col, two.graph())
        payload = {"best_red": res.best_red, "best_blue": res.best_blue}
    _emit(args, {"config_digest": cfg.digest(), "seed": cfg.base_seed,
                 "oracle": args.which, **payload})
    return 0


# ---------------------------------------------------------------------------
# experiment harness
# ---------------------------------------------------------------------------


@dataclass
class ExperimentRecord:
    """One grid cell: digests in, results out; wall time never serialized."""

    cell: int
    inputs: dict
    strategy: str
    values: dict
    seed: int
    wall_time_s: float = 0.0


@dataclass
class ExperimentOutcome:
    kind: str
    header: list[str]
    rows: list[list]
    failures: list[dict] = field(default_factory=list)


def parse_experiment_spec(text: str) -> dict:
    """Line-oriented key-value format with [experiment] / [assert] sections."""
    sections: dict[str, dict[str, str]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, {})
            continue
        if "=" not in line or current is None:
            raise gc.GraphParseError(lineno, "expected 'key = value' inside a section")
        key, _, value = line.partition("=")
        sections[current][key.strip()] = value.strip()
    if "experiment" not in sections or "kind" not in sections["experiment"]:
        raise gc.GraphParseError(0, "spec needs an [experiment] section with a kind")
    return sections


def _dominance_guest(kind: str, n: int, seed: int) -> gc.Graph:
    if kind == "cycle":
        return gc.Graph.cycle(n)
    if kind == "matching":
        return gc.Graph.perfect_matching(n)
    if kind == "regular3":
        return gc.random_regular_graph(n, 3, seed)
    # gnp: red graph of a random coloring, retried until no isolated vertex
    for shift in range(64):
        g = gc.random_coloring(n, 1, 2, seed + shift).red
        if not g.isolated_vertices() and g.max_degree() < n - 1:
            return g
    return gc.Graph.cycle(n)


def run_experiment(spec_text: str, config: Config | None = None) -> ExperimentOutcome:
    """Execute a declared experiment grid; one row per cell, deterministic."""
    cfg = config or DEFAULT_CONFIG
    sections = parse_experiment_spec(spec_text)
    exp = sections["experiment"]
    asserts = sections.get("assert", {})
    kind = exp["kind"]
    failures: list[dict] = []

    if kind == "lambda_table":
        k_min, k_max = int(exp.get("k_min", 2)), int(exp.get("k_max", 6))
        rows = []
        for k in range(k_min, k_max + 1):
            rho, lam = solve_rho_lambda(k)
            rows.append([k, str(rho), str(lam)])
            if asserts.get("known_table") == "true" and k in FROZEN_LAMBDA_TABLE:
                want = FROZEN_LAMBDA_TABLE[k]
                if (str(rho), str(lam)) != want:
                    failures.append({"cell": k, "assert": "known_table",
                                     "got": [str(rho), str(lam)], "want": list(want)})
        return ExperimentOutcome(kind, ["k", "rho", "lambda"], rows, failures)

    if kind == "oracle_dominance":
        n = int(exp.get("n", 8))
        instances = int(exp.get("instances", 20))
        eps = Fraction(exp.get("eps", "1/8"))
        base = int(exp.get("base_seed", cfg.base_seed))
        kinds = ["cycle", "matching", "regular3", "gnp"]
        rows = []
        for i in range(instances):
            seed = base + 1000 * i
            gk = kinds[i % len(kinds)]
            guest = _dominance_guest(gk, n, seed)
            col = gc.random_coloring(n, 1, 2, seed + 7)
            res = embed_bounded_degree(guest, col, eps, seed, cfg)
            _, orep = oracle_max_disc(guest, col, cfg.oracle_cap)
            ok = res.report.discrepancy <= orep.discrepancy
            rows.append([i, gk, seed, res.report.discrepancy, orep.discrepancy, int(ok)])
            if asserts.get("driver_le_oracle", "true") == "true" and not ok:
                failures.append({"cell": i, "assert": "driver_le_oracle",
                                 "driver": res.report.discrepancy,
                                 "oracle": orep.discrepancy})
        return ExperimentOutcome(kind, ["instance", "guest", "seed",
                                        "driver_disc", "oracle_disc", "ok"],
                                 rows, failures)

    if kind == "star_tightness":
        n = int(exp.get("n", 40))
        eps = Fraction(exp.get("eps", "1/2"))
        k = int(exp.get("k", 4))
        seeds = int(exp.get("seeds", 10))
        guest = gc.star_clique_path_guest(n, eps.numerator, eps.denominator, k)
        leaves = ((eps.denominator - eps.numerator) * n) // eps.denominator
        star_v = leaves + 1
        comps = {"star": [(0, i) for i in range(1, star_v)],
                 "clique": [(u, v) for u in range(star_v, star_v + k)
                            for v in range(u + 1, star_v + k)],
                 "path": [(v, v + 1) for v in range(star_v + k, n - 1)]}
        rows = []
        for s in range(seeds):
            col = gc.random_coloring(n, 1, 2, cfg.base_seed + s)
            emb = greedy_expectation_embed(guest, col, "red")
            vals = [s]
            for name in ("star", "clique", "path"):
                red = sum(1 for u, v in comps[name]
                          if col.is_red(emb.map[u], emb.map[v]))
                vals += [red, len(comps[name]) - red]
            rep = gc.discrepancy(col, guest, emb)
            vals.append(rep.discrepancy)
            rows.append(vals)
        return ExperimentOutcome(kind, ["seed", "star_red", "star_blue",
                                        "clique_red", "clique_blue",
                                        "path_red", "path_blue", "disc"],
                                 rows, failures)

    if kind == "regular_tightness":
        n = int(exp.get("n", 60))
        ds = [int(x) for x in exp.get("d_list", "2,4,6").split(",")]
        seeds = int(exp.get("seeds", 5))
        col = gc.complete_bipartite_coloring(n)
        rows = []
        for d in ds:
            for s in range(seeds):
                seed = cfg.base_seed + 31 * s + d
                guest = gc.random_regular_graph(n, d, seed)
                res = embed_regular(guest, col, Fraction(1, 4), seed, cfg)
                ratio = res.report.discrepancy / (n * math.sqrt(d))
                rows.append([d, s, res.report.discrepancy, f"{ratio:.6f}"])
        return ExperimentOutcome(kind, ["d", "seed", "best_disc",
                                        "disc_over_sqrtd_n"], rows, failures)

    raise gc.ParameterError(f"unknown experiment kind {kind!r}")


def _cmd_experiment(args) -> int:
    cfg = _config_from_args(args)
    with open(args.spec) as fh:
        text = fh.read()
    outcome = run_experiment(text, cfg)
    lines = [f"# {CSV_VERSION} kind={outcome.kind} config={cfg.digest()} seed={cfg.base_seed}",
             ",".join(outcome.header)]
    lines += [",".join(str(x) for x in row) for row in outcome.rows]
    csv_text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if outcome.failures:
        print(json.dumps({"failures": _jsonable(outcome.failures)}, sort_keys=True))
        return 2
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="disc", description=__doc__)
    p.add_argument("--seed", type=int, default=None, help="base seed (64-bit)")
    p.add_argument("--config", help="path to a JSON config file "
                                    "(or set DISCLAB_CONFIG)")
    p.add_argument("--threads", type=int, default=1,
                   help="reserved; execution is deterministic and serial")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate graphs and colorings")
    g.add_argument("what", choices=["graph", "coloring"])
    g.add_argument("kind")
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--d", type=int, default=0)
    g.add_argument("--m", type=int, default=0)
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--rho", default="1/2")
    g.add_argument("--p", default="1/2")
    g.add_argument("--eps", default="1/2")
    g.add_argument("--lengths", default="")
    g.add_argument("--blue-cliques", action="store_true")
    g.add_argument("--json", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=_cmd_gen)

    b = sub.add_parser("bisect", help="extremal or heuristic bisections")
    b.add_argument("--in", dest="infile", required=True)
    b.add_argument("--direction", choices=["max", "min"], default="max")
    b.add_argument("--mode", choices=["exact", "search"], default="exact")
    b.add_argument("--budget", type=int, default=10_000)
    b.add_argument("--discpm", action="store_true")
    b.add_argument("--json", action="store_true")
    b.add_argument("--out")
    b.set_defaults(func=_cmd_bisect)

    e = sub.add_parser("embed", help="find a high-discrepancy copy of a guest")
    e.add_argument("--strategy", default="auto",
                   choices=["auto", "random", "cut", "switch", "single-pair",
                            "greedy-switch"])
    e.add_argument("--guest", required=True)
    e.add_argument("--coloring", required=True)
    e.add_argument("--eps", default="1/4")
    e.add_argument("--target", choices=["red", "blue"], default="red")
    e.add_argument("--json", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=_cmd_embed)

    l = sub.add_parser("lambda", help="extremal factor constants")
    l.add_argument("--k-min", type=int, default=2)
    l.add_argument("--k-max", type=int, default=6)
    l.add_argument("--csv", action="store_true")
    l.add_argument("--out")
    l.set_defaults(func=_cmd_lambda)

    f = sub.add_parser("factor", help="K_k-factor with many same-colored edges")
    f.add_argument("--coloring", required=True)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--eps", default="1/6")
    f.add_argument("--json", action="store_true")
    f.add_argument("--out")
    f.set_defaults(func=_cmd_factor)

    t = sub.add_parser("twofactor", help="2-factor copy with many same-colored edges")
    t.add_argument("--guest", required=True, help="JSON file with {'cycles': [...]}")
    t.add_argument("--coloring", required=True)
    t.add_argument("--eps", default="1/2")
    t.add_argument("--json", action="store_true")
    t.add_argument("--out")
    t.set_defaults(func=_cmd_twofactor)

    v = sub.add_parser("verify", help="exact / Monte-Carlo probabilistic checks")
    v.add_argument("check", choices=["anticoncentration", "tails", "coupling",
                                     "matching", "sqrtdev", "binomial"])
    v.add_argument("--eta", default="1/4")
    v.add_argument("--p", default="")
    v.add_argument("--k-min", type=int, default=100)
    v.add_argument("--k-max", type=int, default=400)
    v.add_argument("--k-step", type=int, default=100)
    v.add_argument("--n", type=int, default=12)
    v.add_argument("--k", type=int, default=4)
    v.add_argument("--p-size", type=int, default=3)
    v.add_argument("--q-size", type=int, default=2)
    v.add_argument("--p-count", type=int, default=6)
    v.add_argument("--a", type=int, default=4)
    v.add_argument("--b", type=int, default=2)
    v.add_argument("--n-max", type=int, default=500)
    v.add_argument("--trials", type=int, default=10_000)
    v.add_argument("--csv")
    v.add_argument("--json", action="store_true")
    v.add_argument("--out")
    v.set_defaults(func=_cmd_verify)

    o = sub.add_parser("oracle", help="exact small-n ground truth")
    o.add_argument("which", choices=["maxdisc", "factor", "twofactor"])
    o.add_argument("--guest")
    o.add_argument("--coloring", required=True)
    o.add_argument("--k", type=int, default=2)
    o.add_argument("--json", action="store_true")
    o.add_argument("--out")
    o.set_defaults(func=_cmd_oracle)

    x = sub.add_parser("experiment", help="run a declared experiment grid")
    x.add_argument("spec")
    x.add_argument("--out")
    x.set_defaults(func=_cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except gc.DisclabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
