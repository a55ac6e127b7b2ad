"""Graphs, 2-edge-colorings, embeddings: core types, generators, file I/O.

Vertices are always the contiguous integers 0..n-1.  Adjacency is stored as
one bitset (Python int) per vertex, which keeps neighborhood algebra --
intersections, symmetric differences, popcounts -- cheap enough for the
exhaustive searches and certificate re-verification built on top.

A coloring of K_n stores only the graph of red (+1) edges; blue (-1) is the
complement, which is free on bitsets.  All randomized generators are
deterministic functions of a 64-bit seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

from .exactmath import derive_seed

# A Seed is a plain 64-bit unsigned integer; any Python int is accepted and
# masked.  Identical seeds give identical outputs for every randomized
# operation in the package.
Seed = int


class DisclabError(Exception):
    """Base class for all package errors."""


class ParameterError(DisclabError, ValueError):
    """A parameter is outside its documented domain."""


class DimensionError(DisclabError, ValueError):
    """Mismatched vertex counts between objects that must agree."""


class InvalidEmbeddingError(DisclabError, ValueError):
    """A vertex map is not a bijection on 0..n-1."""


class CapacityError(DisclabError, ValueError):
    """Instance exceeds a documented exhaustive-search capacity cap."""


class InfeasibleDegreeError(ParameterError):
    """No simple graph with the requested degree sequence exists."""


class GraphParseError(DisclabError, ValueError):
    """Malformed graph/coloring file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _bit(v: int) -> int:
    return 1 << v


def bits_of(mask: int) -> Iterator[int]:
    """Iterate set-bit positions of a bitmask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with bitset adjacency."""

    n: int
    adj: tuple[int, ...]
    edge_count: int

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_adj(n: int, adj: Sequence[int]) -> "Graph":
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        if len(adj) != n:
            raise ParameterError("adjacency list length must equal n")
        full = (1 << n) - 1
        deg_sum = 0
        for v in range(n):
            a = adj[v]
            if a & ~full:
                raise ParameterError(f"vertex {v}: bits set at positions >= n")
            if a & _bit(v):
                raise ParameterError(f"vertex {v}: self-loop")
            deg_sum += a.bit_count()
        for v in range(n):
            for w in bits_of(adj[v]):
                if not adj[w] & _bit(v):
                    raise ParameterError(f"adjacency not symmetric at ({v},{w})")
        return Graph(n, tuple(adj), deg_sum // 2)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        count = 0
        for u, v in edges:
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u},{v}) out of range for n={n}")
            if adj[u] & _bit(v):
                raise ParameterError(f"duplicate edge ({u},{v})")
            adj[u] |= _bit(v)
            adj[v] |= _bit(u)
            count += 1
        return Graph(n, tuple(adj), count)

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n, (0,) * n, 0)

    @staticmethod
    def complete(n: int) -> "Graph":
        full = (1 << n) - 1
        return Graph(n, tuple(full ^ _bit(v) for v in range(n)), n * (n - 1) // 2)

    @staticmethod
    def complete_bipartite_halves(n: int) -> "Graph":
        """Complete bipartite graph between {0..floor(n/2)-1} and the rest."""
        h = n // 2
        lo = (1 << h) - 1
        hi = ((1 << n) - 1) ^ lo
        adj = [hi if v < h else lo for v in range(n)]
        return Graph(n, tuple(adj), h * (n - h))

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise ParameterError("a cycle needs at least 3 vertices")
        return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])

    @staticmethod
    def perfect_matching(n: int) -> "Graph":
        if n % 2:
            raise ParameterError("perfect matching needs even n")
        return Graph.from_edges(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])

    @staticmethod
    def disjoint_cycles(lengths: Sequence[int]) -> "Graph":
        """Vertex-disjoint union of cycles laid out consecutively."""
        edges = []
        start = 0
        for length in lengths:
            if length < 3:
                raise ParameterError("cycle lengths must be >= 3")
            for i in range(length):
                edges.append((start + i, start + (i + 1) % length))
            start += length
        return Graph.from_edges(start, edges)

    # -- queries -------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def max_degree(self) -> int:
        return max((a.bit_count() for a in self.adj), default=0)

    def regular_degree(self) -> int | None:
        """The common degree if the graph is regular, else None."""
        if self.n == 0:
            return 0
        d = self.adj[0].bit_count()
        return d if all(a.bit_count() == d for a in self.adj) else None

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] & _bit(v))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            higher = self.adj[u] >> (u + 1)
            w = u + 1
            while higher:
                if higher & 1:
                    yield (u, w)
                higher >>= 1
                w += 1

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.n) if not self.adj[v]]

    def edges_within(self, mask: int) -> int:
        """Number of edges with both endpoints in the vertex set ``mask``."""
        total = 0
        for v in bits_of(mask):
            total += (self.adj[v] & mask).bit_count()
        return total // 2

    def edges_between(self, mask_a: int, mask_b: int) -> int:
        """Number of edges with one endpoint in each (disjoint) vertex set."""
        total = 0
        for v in bits_of(mask_a):
            total += (self.adj[v] & mask_b).bit_count()
        return total

    def complement(self) -> "Graph":
        full = self.full_mask
        adj = tuple((full ^ self.adj[v]) & ~_bit(v) for v in range(self.n))
        return Graph(self.n, adj, self.n * (self.n - 1) // 2 - self.edge_count)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image of the graph under vertex map v -> perm[v] (a bijection)."""
        adj = [0] * self.n
        for v in range(self.n):
            m = 0
            for w in bits_of(self.adj[v]):
                m |= _bit(perm[w])
            adj[perm[v]] = m
        return Graph(self.n, tuple(adj), self.edge_count)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph on ``vertices`` relabeled to 0..len-1 (in order)."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = []
        vs = set(vertices)
        for u in vertices:
            for w in bits_of(self.adj[u]):
                if w in vs and u < w:
                    edges.append((index[u], index[w]))
        return Graph.from_edges(len(vertices), edges)


@dataclass(frozen=True)
class Coloring:
    """2-edge-coloring of K_n given by its red (+1) graph; blue is the complement."""

    n: int
    red: Graph

    def __post_init__(self):
        if self.red.n != self.n:
            raise DimensionError("red graph size must equal n")

    @property
    def total_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def red_count(self) -> int:
        return self.red.edge_count

    @property
    def blue_count(self) -> int:
        return self.total_pairs - self.red.edge_count

    @property
    def red_density(self) -> Fraction:
        if self.total_pairs == 0:
            return Fraction(0)
        return Fraction(self.red_count, self.total_pairs)

    def is_red(self, u: int, v: int) -> bool:
        if u == v:
            raise ParameterError("pairs must be distinct vertices")
        return self.red.has_edge(u, v)

    def blue_graph(self) -> Graph:
        return self.red.complement()

    def swapped(self) -> "Coloring":
        """The coloring with red and blue exchanged."""
        return Coloring(self.n, self.red.complement())

    def graph_of(self, color: str) -> Graph:
        if color == "red":
            return self.red
        if color == "blue":
            return self.blue_graph()
        raise ParameterError(f"unknown color {color!r}")


@dataclass(frozen=True)
class Embedding:
    """Bijection guest vertex -> host vertex, with its inverse cached."""

    map: tuple[int, ...]
    inverse: tuple[int, ...]

    @staticmethod
    def from_map(mapping: Sequence[int]) -> "Embedding":
        n = len(mapping)
        inverse = [-1] * n
        for g, h in enumerate(mapping):
            if not (0 <= h < n) or inverse[h] != -1:
                raise InvalidEmbeddingError("map is not a bijection on 0..n-1")
            inverse[h] = g
        return Embedding(tuple(mapping), tuple(inverse))

    @staticmethod
    def identity(n: int) -> "Embedding":
        ident = tuple(range(n))
        return Embedding(ident, ident)

    @property
    def n(self) -> int:
        return len(self.map)


@dataclass(frozen=True)
class DiscrepancyReport:
    """Red/blue counts of an embedded guest graph and their imbalance."""

    mono_plus: int
    mono_minus: int
    e_f: int
    discrepancy: int

    @staticmethod
    def from_counts(mono_plus: int, e_f: int) -> "DiscrepancyReport":
        return DiscrepancyReport(mono_plus, e_f - mono_plus,
                                 e_f, abs(2 * mono_plus - e_f))


def count_red_edges(coloring: Coloring, guest: Graph, emb: Embedding) -> int:
    """Number of guest edges mapped onto red host pairs."""
    red_adj = coloring.red.adj
    phi = emb.map
    total = 0
    for u in range(guest.n):
        hu = phi[u]
        row = red_adj[hu]
        higher = guest.adj[u] >> (u + 1)
        w = u + 1
        while higher:
            if higher & 1 and row >> phi[w] & 1:
                total += 1
            higher >>= 1
            w += 1
    return total


def discrepancy(coloring: Coloring, guest: Graph, emb: Embedding) -> DiscrepancyReport:
    """Exact red/blue count of the guest's image under the embedding."""
    if guest.n != coloring.n:
        raise DimensionError("guest and coloring must have the same vertex count")
    if emb.n != guest.n:
        raise InvalidEmbeddingError("embedding size must match the guest")
    return DiscrepancyReport.from_counts(count_red_edges(coloring, guest, emb),
                                         guest.edge_count)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def bipartite_construction(n: int, rho_num: int, rho_den: int) -> Coloring:
    """Coloring with a part X of floor(rho*n) vertices: edges touching X red,
    edges inside the complement blue.

    X is the lowest-index prefix {0..|X|-1}.
    """
    if rho_den <= 0 or rho_num < 0 or rho_num > rho_den:
        raise ParameterError("ratio must satisfy 0 <= rho <= 1")
    x_size = (rho_num * n) // rho_den
    x_mask = (1 << x_size) - 1
    full = (1 << n) - 1
    adj = []
    for v in range(n):
        if v < x_size:
            adj.append((full ^ _bit(v)))
        else:
            adj.append(x_mask)
    red = Graph(n, tuple(adj), comb(x_size, 2) + x_size * (n - x_size))
    return Coloring(n, red)


def two_cliques_coloring(m: int, red_cliques: bool = True) -> Coloring:
    """Coloring of K_{2m}: two disjoint K_m in one color, complete bipartite
    between them in the other."""
    if m < 1:
        raise ParameterError("m must be at least 1")
    n = 2 * m
    lo = (1 << m) - 1
    hi = ((1 << n) - 1) ^ lo
    adj = []
    for v in range(n):
        side = lo if v < m else hi
        adj.append(side & ~_bit(v))
    cliques = Graph(n, tuple(adj), 2 * comb(m, 2))
    col = Coloring(n, cliques)
    return col if red_cliques else col.swapped()


def all_red_coloring(n: int) -> Coloring:
    return Coloring(n, Graph.complete(n))


def all_blue_coloring(n: int) -> Coloring:
    return Coloring(n, Graph.empty(n))


def complete_bipartite_coloring(n: int) -> Coloring:
    """Coloring whose red class is the balanced complete bipartite graph."""
    return Coloring(n, Graph.complete_bipartite_halves(n))


def random_coloring(n: int, p_num: int, p_den: int, seed: Seed) -> Coloring:
    """Each of the C(n,2) pairs is red independently with probability p.

    The Bernoulli draws use integer comparison (no floats) and consume the
    stream in fixed row order, so output is a pure function of the seed.
    """
    if p_den <= 0 or p_num < 0 or p_num > p_den:
        raise ParameterError("probability must satisfy 0 <= p <= 1")
    rng = random.Random(derive_seed(seed, 0xC0102))
    adj = [0] * n
    count = 0
    for u in range(n):
        for v in range(u + 1, n):
            if rng.randrange(p_den) < p_num:
                adj[u] |= _bit(v)
                adj[v] |= _bit(u)
                count += 1
    return Coloring(n, Graph(n, tuple(adj), count))


def random_embedding(n: int, seed: Seed) -> Embedding:
    """Uniformly random bijection on 0..n-1, deterministic in the seed."""
    rng = random.Random(derive_seed(seed, 0xE4B))
    perm = list(range(n))
    rng.shuffle(perm)
    return Embedding.from_map(perm)


def _pairing_attempt(n: int, d: int, rng: random.Random) -> list[int] | None:
    stubs = list(range(n)) * d
    rng.shuffle(stubs)
    adj = [0] * n
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v or adj[u] & _bit(v):
            return None
        adj[u] |= _bit(v)
        adj[v] |= _bit(u)
    return adj


def _switching_repair(n: int, d: int, rng: random.Random) -> list[int]:
    # Keep a multigraph edge list (loops allowed) and rewire bad edges with
    # random double-edge swaps until the graph is simple.
    stubs = list(range(n)) * d
    rng.shuffle(stubs)
    edges = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]

    def edge_key(u, v):
        return (u, v) if u <= v else (v, u)

    from collections import Counter

    counts = Counter(edge_key(u, v) for u, v in edges)

    def is_bad(u, v):
        return u == v or counts[edge_key(u, v)] > 1

    for _ in range(10 ** 6):
        bad = [i for i, (u, v) in enumerate(edges) if is_bad(u, v)]
        if not bad:
            break
        i = bad[0]
        j = rng.randrange(len(edges))
        if j == i:
            continue
        (a, b), (c, dd) = edges[i], edges[j]
        # try both rewirings; accept the first that lowers total badness
        for (p, q), (r, s) in (((a, c), (b, dd)), ((a, dd), (b, c))):
            old_bad = int(is_bad(a, b)) + int(is_bad(c, dd))
            counts[edge_key(a, b)] -= 1
            counts[edge_key(c, dd)] -= 1
            counts[edge_key(p, q)] += 1
            counts[edge_key(r, s)] += 1
            new_bad = int(is_bad(p, q)) + int(is_bad(r, s))
            if new_bad < old_bad:
                edges[i], edges[j] = (p, q), (r, s)
                break
            counts[edge_key(p, q)] -= 1
            counts[edge_key(r, s)] -= 1
            counts[edge_key(a, b)] += 1
            counts[edge_key(c, dd)] += 1
    else:
        raise CapacityError("edge-switching repair did not converge")
    adj = [0] * n
    for u, v in edges:
        adj[u] |= _bit(v)
        adj[v] |= _bit(u)
    return adj


def random_regular_graph(n: int, d: int, seed: Seed) -> Graph:
    """Random d-regular simple graph via the pairing model.

    Restarts on any loop or multi-edge; after 1000 failed restarts an
    edge-switching repair takes over (reachable only at larger d, where
    the restart probability degrades).
    """
    if d < 0 or d >= max(n, 1) or (n * d) % 2:
        raise InfeasibleDegreeError(f"no simple {d}-regular graph on {n} vertices")
    if d == 0:
        return Graph.empty(n)
    rng = random.Random(derive_seed(seed, 0x2E6))
    for _ in range(1000):
        adj = _pairing_attempt(n, d, rng)
        if adj is not None:
            return Graph(n, tuple(adj), n * d // 2)
    adj = _switching_repair(n, d, rng)
    g = Graph(n, tuple(adj), n * d // 2)
    if g.regular_degree() != d:
        raise CapacityError("regular graph generation failed")
    return g


def star_clique_path_guest(n: int, eps_num: int, eps_den: int, k: int) -> Graph:
    """Disjoint union of a star with floor((1-eps)n) leaves, a K_k, and a path
    on the remaining vertices.

    Components must not create isolated vertices: the clique is either absent
    (k=0) or has k >= 2; the path part is either empty or has >= 2 vertices.
    """
    if eps_den <= 0 or eps_num < 0 or eps_num > eps_den:
        raise ParameterError("eps must satisfy 0 <= eps <= 1")
    leaves = ((eps_den - eps_num) * n) // eps_den
    if leaves < 1:
        raise ParameterError("star has no leaves (eps too large)")
    star_vertices = leaves + 1
    if k == 1:
        raise ParameterError("clique of size 1 would be an isolated vertex")
    rest = n - star_vertices - k
    if rest < 0:
        raise ParameterError("components do not fit in n vertices")
    if rest == 1:
        raise ParameterError("path part of one vertex would be isolated")
    edges: list[tuple[int, int]] = [(0, i) for i in range(1, star_vertices)]
    base = star_vertices
    for i in range(k):
        for j in range(i + 1, k):
            edges.append((base + i, base + j))
    base += k
    for i in range(rest - 1):
        edges.append((base + i, base + i + 1))
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def write_graph(g: Graph) -> str:
    lines = [f"graph {g.n}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_coloring(c: Coloring) -> str:
    lines = [f"coloring {c.n}"]
    lines.extend(f"e {u} {v}" for u, v in c.red.edges())
    return "\n".join(lines) + "\n"


def _parse_edge_file(text: str, header: str) -> tuple[int, list[tuple[int, int]]]:
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == header:
            if n is not None:
                raise GraphParseError(lineno, "duplicate header")
            if len(parts) != 2 or not parts[1].isdigit():
                raise GraphParseError(lineno, f"expected '{header} <n>'")
            n = int(parts[1])
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError(lineno, "edge before header")
            if len(parts) != 3:
                raise GraphParseError(lineno, "expected 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(lineno, "vertex ids must be integers") from None
            if u == v:
                raise GraphParseError(lineno, "self-loop")
            if not (0 <= u < v < n):
                raise GraphParseError(lineno, f"edge must satisfy 0 <= u < v < {n}")
            if (u, v) in seen:
                raise GraphParseError(lineno, f"duplicate edge ({u},{v})")
            seen.add((u, v))
            edges.append((u, v))
        else:
            raise GraphParseError(lineno, f"unknown directive {parts[0]!r}")
    if n is None:
        raise GraphParseError(0, "missing header")
    return n, edges


def parse_graph(text: str) -> Graph:
    n, edges = _parse_edge_file(text, "graph")
    return Graph.from_edges(n, edges)


def parse_coloring(text: str) -> Coloring:
    n, edges = _parse_edge_file(text, "coloring")
    return Coloring(n, Graph.from_edges(n, edges))


def graph_to_obj(g: Graph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}


def graph_from_obj(obj: dict) -> Graph:
    return Graph.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]])


def coloring_to_obj(c: Coloring) -> dict:
    return {"n": c.n, "red_edges": [[u, v] for u, v in c.red.edges()]}


def coloring_from_obj(obj: dict) -> Coloring:
    n = int(obj["n"])
    return Coloring(n, Graph.from_edges(n, [tuple(e) for e in obj["red_edges"]]))
