"""Graphs, split counts, and the insertion-process identities on them.

A graph here is a simple labeled graph on vertices 1..n.  The central
quantity is the split count d(e, t): the number of t-subsets of the other
edges whose union leaves the endpoints of e in different components.  From
those counts come exact expected stopping times, the averaged identity
(average over edges equals n - c), and the complete-graph tables d(n, t),
c(n, t) and q(n, t).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import limits
from .exactnum import binomial

__all__ = [
    "Graph",
    "GraphParseError",
    "SetPartition",
    "ComponentStructure",
    "UnionFind",
    "complete",
    "cycle",
    "path",
    "star",
    "complete_bipartite",
    "two_triangles",
    "family_graph",
    "FAMILY_NAMES",
    "parse_graph_text",
    "load_graph",
    "components",
    "is_split",
    "set_partitions",
    "d_split_table",
    "d_split_bruteforce",
    "d_split_sum_partition",
    "expected_stop_exact",
    "theorem_avg_graph",
    "q_connected",
    "d_pair",
    "c_pair",
    "kn_identity",
    "connected_graphs",
]


class GraphParseError(ValueError):
    """Raised for malformed graph files; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Graph:
    """Simple labeled graph on vertices 1..n with a canonical edge order.

    ``edges`` is a sorted tuple of pairs (u, v) with 1 <= u < v <= n and no
    repeats, so graphs hash and compare by structure.  Build instances with
    :meth:`from_edges` unless the edges are already canonical.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        prev = None
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"edge ({u}, {v}) invalid for n={self.n}")
            if prev is not None and (u, v) <= prev:
                raise ValueError("edges must be strictly sorted; use Graph.from_edges")
            prev = (u, v)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs in any order."""
        seen = set()
        canon = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u} not allowed")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v))
        return cls(n, tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_index(self, e: tuple[int, int]) -> int:
        u, v = e
        if u > v:
            u, v = v, u
        try:
            return self.edges.index((u, v))
        except ValueError:
            raise ValueError(f"edge {e} not in graph") from None

    def component_count(self) -> int:
        return components(self, self.edges).component_count


class UnionFind:
    """Disjoint sets over items 0..n-1, path compression and union by size."""

    __slots__ = ("parent", "size", "count")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.count -= 1
        return True

    def connected(self, x: int, y: int) -> bool:
        return self.find(x) == self.find(y)


class ComponentStructure:
    """Connected components of a spanning subgraph, queried by 1-based vertex."""

    __slots__ = ("_uf",)

    def __init__(self, n: int, edges):
        uf = UnionFind(n)
        for u, v in edges:
            uf.union(u - 1, v - 1)
        self._uf = uf

    @property
    def component_count(self) -> int:
        return self._uf.count

    def find(self, v: int) -> int:
        return self._uf.find(v - 1) + 1

    def same_component(self, u: int, v: int) -> bool:
        return self._uf.connected(u - 1, v - 1)


def components(graph: Graph, edge_subset) -> ComponentStructure:
    """Component structure of the spanning subgraph on the given edges."""
    subset = list(edge_subset)
    edge_set = set(graph.edges)
    for e in subset:
        if tuple(e) not in edge_set:
            raise ValueError(f"edge {e} not in graph")
    return ComponentStructure(graph.n, subset)


def is_split(graph: Graph, e: tuple[int, int], edge_subset) -> bool:
    """Whether the subgraph on ``edge_subset`` leaves the ends of e apart.

    ``e`` must be an edge of the graph and must not occur in the subset.
    """
    graph.edge_index(e)
    subset = list(edge_subset)
    if tuple(e) in {tuple(x) for x in subset}:
        raise ValueError(f"edge {e} must not be part of the inserted subset")
    comp = components(graph, subset)
    u, v = e
    return not comp.same_component(u, v)


# ---------------------------------------------------------------------------
# graph families

def complete(n: int) -> Graph:
    """Complete graph K_n."""
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph(n, tuple(itertools.combinations(range(1, n + 1), 2)))


def cycle(n: int) -> Graph:
    """Cycle C_n, n >= 3."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return Graph.from_edges(n, edges)


def path(n: int) -> Graph:
    """Path on n vertices (n - 1 edges)."""
    if n < 2:
        raise ValueError("path needs n >= 2")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def star(n: int) -> Graph:
    """Star with center 1 and n - 1 leaves."""
    if n < 2:
        raise ValueError("star needs n >= 2")
    return Graph.from_edges(n, [(1, i) for i in range(2, n + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    """Complete bipartite graph K_{a,b} on parts {1..a} and {a+1..a+b}."""
    if a < 1 or b < 1:
        raise ValueError("complete_bipartite needs a, b >= 1")
    edges = [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)]
    return Graph.from_edges(a + b, edges)


def two_triangles() -> Graph:
    """Two vertex-disjoint triangles: 1-2-3 and 4-5-6 (two components)."""
    return Graph.from_edges(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])


FAMILY_NAMES = (
    "complete",
    "cycle",
    "path",
    "star",
    "complete-bipartite",
    "two-triangles",
)


def family_graph(name: str, n: int | None = None, k: int | None = None) -> Graph:
    """Build a named family member; ``n`` (and ``k`` for bipartite) size it."""
    if name == "two-triangles":
        return two_triangles()
    if name == "complete-bipartite":
        if n is None or k is None:
            raise ValueError("complete-bipartite needs both part sizes (n and k)")
        return complete_bipartite(n, k)
    builders = {"complete": complete, "cycle": cycle, "path": path, "star": star}
    if name not in builders:
        raise ValueError(f"unknown family {name!r}; choose from {FAMILY_NAMES}")
    if n is None:
        raise ValueError(f"family {name!r} needs n")
    return builders[name](n)


# ---------------------------------------------------------------------------
# parsing

def parse_graph_text(text: str) -> Graph:
    """Parse the plain edge-list format: a header line "n m" followed by
    m lines "u v" with 1 <= u < v <= n.

    Duplicate edges, loops, reversed endpoints, bad counts and trailing
    junk all raise :class:`GraphParseError` with the offending line number.
    """
    lines = text.splitlines()
    pos = 0

    def next_content_line():
        nonlocal pos
        while pos < len(lines):
            pos += 1
            stripped = lines[pos - 1].strip()
            if stripped:
                return pos, stripped
        return pos, None

    lineno, header = next_content_line()
    if header is None:
        raise GraphParseError(max(lineno, 1), "missing header line 'n m'")
    parts = header.split()
    if len(parts) != 2:
        raise GraphParseError(lineno, f"header must be 'n m', got {header!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(lineno, f"header must be two integers, got {header!r}") from None
    if n < 1:
        raise GraphParseError(lineno, f"vertex count must be >= 1, got {n}")
    if m < 0:
        raise GraphParseError(lineno, f"edge count must be >= 0, got {m}")

    seen: set[tuple[int, int]] = set()
    edges = []
    for _ in range(m):
        lineno, line = next_content_line()
        if line is None:
            raise GraphParseError(lineno, f"expected {m} edge lines, found {len(edges)}")
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(lineno, f"edge line must be 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(lineno, f"edge line must be two integers, got {line!r}") from None
        if u == v:
            raise GraphParseError(lineno, f"loop at vertex {u} not allowed")
        if not (1 <= u < v <= n):
            raise GraphParseError(lineno, f"edge ({u}, {v}) must satisfy 1 <= u < v <= {n}")
        if (u, v) in seen:
            raise GraphParseError(lineno, f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    lineno, extra = next_content_line()
    if extra is not None:
        raise GraphParseError(lineno, f"unexpected content after {m} edges: {extra!r}")
    return Graph(n, tuple(sorted(edges)))


def load_graph(path_: str) -> Graph:
    with open(path_, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


# ---------------------------------------------------------------------------
# split counts

@lru_cache(maxsize=None)
def d_split_table(graph: Graph) -> tuple[tuple[int, ...], ...]:
    """Full table of split counts: row i, column t is d(edges[i], t).

    One pass over all 2^|E| edge subsets; each subset of size t that leaves
    edge e out and keeps its endpoints separated contributes 1 to d(e, t).
    Subject to the brute-force cap.
    """
    m = graph.m
    cap = limits.brute_force_cap()
    if m > cap:
        raise ValueError(
            f"split table needs |E| <= {cap} (2^|E| subset scan), got |E|={m}")
    n = graph.n
    ends = [(u - 1, v - 1) for u, v in graph.edges]
    rows = [[0] * max(m, 1) for _ in range(m)]
    for mask in range(1 << m):
        parent = list(range(n))
        t = 0
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                t += 1
                u, v = ends[i]
                while parent[u] != u:
                    parent[u] = parent[parent[u]]
                    u = parent[u]
                while parent[v] != v:
                    parent[v] = parent[parent[v]]
                    v = parent[v]
                if u != v:
                    parent[v] = u
            mm >>= 1
            i += 1
        if t == m:
            continue
        for j, (u, v) in enumerate(ends):
            if not (mask >> j) & 1:
                while parent[u] != u:
                    u = parent[u]
                while parent[v] != v:
                    v = parent[v]
                if u != v:
                    rows[j][t] += 1
    return tuple(tuple(r) for r in rows)


def d_split_bruteforce(graph: Graph, e: tuple[int, int], t: int) -> int:
    """d(e, t) by exhaustive subset enumeration (cached per graph)."""
    idx = graph.edge_index(e)
    if not 0 <= t <= graph.m - 1:
        raise ValueError(f"t must be in [0, {graph.m - 1}], got {t}")
    return d_split_table(graph)[idx][t]


@lru_cache(maxsize=None)
def _partition_profile(graph: Graph) -> tuple[tuple[int, int, int], ...]:
    """Multiplicities of (block count, internal edge count) over all vertex
    partitions, as sorted (k, internal, count) triples.

    Walks every set partition of 1..n once, tracking how many edges land
    inside a block as vertices are assigned, so the per-partition cost is
    O(1) amortized per edge.  Subject to the partition vertex cap.
    """
    n = graph.n
    if n > limits.PARTITION_VERTEX_CAP:
        raise ValueError(
            f"partition sums need n <= {limits.PARTITION_VERTEX_CAP}, got n={n}")
    adj = [0] * (n + 1)
    for u, v in graph.edges:
        adj[v] |= 1 << u  # earlier-neighbor mask: u < v always
    profile: dict[tuple[int, int], int] = {}
    blocks: list[int] = []

    def assign(v: int, internal: int):
        if v > n:
            key = (len(blocks), internal)
            profile[key] = profile.get(key, 0) + 1
            return
        av = adj[v]
        bit = 1 << v
        for i in range(len(blocks)):
            old = blocks[i]
            blocks[i] = old | bit
            assign(v + 1, internal + (old & av).bit_count())
            blocks[i] = old
        blocks.append(bit)
        assign(v + 1, internal)
        blocks.pop()

    assign(1, 0)
    return tuple(sorted((k, ea, c) for (k, ea), c in profile.items()))


def d_split_sum_partition(graph: Graph, t: int) -> int:
    """Sum of d(e, t) over all edges e, via the signed partition formula.

    Aggregates over the set partitions A of the vertex set:

        sum_e d(e, t) = sum_{k>=2} (-1)^k (k-2)! *
                        sum_{A with k blocks} C(in(A), t) * (|E| - in(A))

    where in(A) counts the edges inside blocks of A.  No subset scan is
    involved, which is what makes this an independent route to the totals.
    """
    m = graph.m
    if not 0 <= t <= max(m - 1, 0):
        raise ValueError(f"t must be in [0, {max(m - 1, 0)}], got {t}")
    total = 0
    for k, ea, count in _partition_profile(graph):
        if k < 2 or ea == m:
            continue
        term = binomial(ea, t) * (m - ea)
        if term:
            total += (-1) ** k * math.factorial(k - 2) * count * term
    return total


def expected_stop_exact(graph: Graph, e: tuple[int, int]) -> Fraction:
    """Exact expected stopping time E[T_e] for inserting the other edges
    uniformly at random, where T_e is the first prefix length whose span
    already connects the ends of e (and |E| if none does, i.e. e a bridge).
    """
    idx = graph.edge_index(e)
    m = graph.m
    row = d_split_table(graph)[idx]
    return sum(
        (Fraction(row[t], binomial(m - 1, t)) for t in range(m)),
        start=Fraction(0),
    )


def theorem_avg_graph(graph: Graph) -> Fraction:
    """Average of E[T_e] over all edges, by the partition route.

    Equals n - c for a graph with c components; an edgeless graph has no
    edges to average over and is rejected.
    """
    m = graph.m
    if m == 0:
        raise ValueError("average stopping time needs at least one edge")
    total = sum(
        (Fraction(d_split_sum_partition(graph, t), binomial(m - 1, t))
         for t in range(m)),
        start=Fraction(0),
    )
    return total / m


# ---------------------------------------------------------------------------
# set partitions (exposed for tests and reuse)

@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..n} into blocks, each sorted, ordered by least element."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        mins = []
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if list(block) != sorted(block):
                raise ValueError(f"block {block} not sorted")
            for v in block:
                if v in seen:
                    raise ValueError(f"vertex {v} in two blocks")
                seen.add(v)
            mins.append(block[0])
        if seen != set(range(1, self.n + 1)):
            raise ValueError("blocks do not cover 1..n")
        if mins != sorted(mins):
            raise ValueError("blocks must be ordered by least element")

    @property
    def k(self) -> int:
        return len(self.blocks)

    def internal_edge_count(self, graph: Graph) -> int:
        """Number of graph edges with both ends in one block."""
        block_of = {}
        for i, block in enumerate(self.blocks):
            for v in block:
                block_of[v] = i
        return sum(1 for u, v in graph.edges if block_of[u] == block_of[v])


def set_partitions(n: int):
    """Yield every partition of {1..n} as a :class:`SetPartition`.

    Enumeration is by restricted growth strings, so blocks come out
    canonically ordered by their least element.
    """
    if n < 1:
        raise ValueError("set_partitions needs n >= 1")

    blocks: list[list[int]] = []

    def rec(v: int):
        if v > n:
            yield SetPartition(n, tuple(tuple(b) for b in blocks))
            return
        for i in range(len(blocks)):
            blocks[i].append(v)
            yield from rec(v + 1)
            blocks[i].pop()
        blocks.append([v])
        yield from rec(v + 1)
        blocks.pop()

    yield from rec(1)


# ---------------------------------------------------------------------------
# complete-graph tables

def _pair_count(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def _q_row(n: int) -> tuple[int, ...]:
    # q(n, t) for t = 0..C(n,2): labeled connected graphs on [n] with t edges.
    # Row n is all graphs minus those whose component containing vertex 1
    # has k < n vertices (choose its other k-1 vertices, a connected graph
    # on them, and anything on the rest).
    mm = _pair_count(n)
    row = [binomial(mm, t) for t in range(mm + 1)]
    for k in range(1, n):
        coef = binomial(n - 1, k - 1)
        qk = _q_row(k)
        rest = _pair_count(n - k)
        for s, qv in enumerate(qk):
            if qv == 0:
                continue
            c = coef * qv
            for extra in range(min(rest, mm - s) + 1):
                row[s + extra] -= c * binomial(rest, extra)
    return tuple(row)


def _check_table_n(n: int, minimum: int, what: str):
    if n < minimum:
        raise ValueError(f"{what} needs n >= {minimum}, got n={n}")
    if n > limits.TABLE_N_CAP:
        raise ValueError(f"{what} capped at n <= {limits.TABLE_N_CAP}, got n={n}")


def q_connected(n: int, t: int) -> int:
    """Number of connected labeled graphs on n vertices with exactly t edges.

    Zero when t exceeds C(n, 2) or falls below the tree count n - 1.
    """
    _check_table_n(n, 1, "q_connected")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    row = _q_row(n)
    return row[t] if t < len(row) else 0


@lru_cache(maxsize=None)
def _d_pair_row(n: int) -> tuple[int, ...]:
    # d(n, t): graphs on [n] with t edges where vertices 1 and 2 are in
    # different components.  Classify by the component of vertex 1 (size k,
    # not containing 2): connected choice on it, free choice on the rest.
    mm = _pair_count(n)
    row = [0] * (mm + 1)
    for k in range(1, n):
        coef = binomial(n - 2, k - 1)
        qk = _q_row(k)
        rest = _pair_count(n - k)
        for s, qv in enumerate(qk):
            if qv == 0:
                continue
            c = coef * qv
            for extra in range(min(rest, mm - s) + 1):
                row[s + extra] += c * binomial(rest, extra)
    return tuple(row)


def d_pair(n: int, t: int) -> int:
    """Graphs on [n] with t edges leaving a fixed vertex pair disconnected.

    By symmetry this is the complete-graph split count d(e, t) for any
    edge e of K_n.
    """
    _check_table_n(n, 2, "d_pair")
    row = _d_pair_row(n)
    if not 0 <= t < len(row):
        raise ValueError(f"t must be in [0, {len(row) - 1}], got {t}")
    return row[t]


def c_pair(n: int, t: int) -> int:
    """Graphs on [n] with t edges joining a fixed vertex pair; the
    complement of :func:`d_pair` within all C(C(n,2), t) graphs.  In
    particular c(n, 0) = 0."""
    _check_table_n(n, 2, "c_pair")
    mm = _pair_count(n)
    if not 0 <= t <= mm:
        raise ValueError(f"t must be in [0, {mm}], got {t}")
    return binomial(mm, t) - _d_pair_row(n)[t]


def kn_identity(n: int) -> Fraction:
    """Exact value of sum_t d(n, t) / C(C(n,2) - 1, t) on the complete
    graph; the identity under test says this equals n - 1."""
    _check_table_n(n, 2, "kn_identity")
    mm = _pair_count(n)
    row = _d_pair_row(n)
    return sum(
        (Fraction(row[t], binomial(mm - 1, t)) for t in range(mm)),
        start=Fraction(0),
    )


# ---------------------------------------------------------------------------
# exhaustive corpus

def connected_graphs(n: int):
    """Yield every connected labeled graph on vertices 1..n.

    Scans all 2^C(n,2) edge subsets, so n is capped at 7.  Intended for
    building small test corpora, not for counting (use q_connected).
    """
    if not 1 <= n <= 7:
        raise ValueError(f"connected_graphs supports 1 <= n <= 7, got n={n}")
    all_edges = list(itertools.combinations(range(1, n + 1), 2))
    mm = len(all_edges)
    for mask in range(1 << mm):
        if mask.bit_count() < n - 1:
            continue
        uf = UnionFind(n)
        mm_ = mask
        i = 0
        while mm_:
            if mm_ & 1:
                u, v = all_edges[i]
                uf.union(u - 1, v - 1)
            mm_ >>= 1
            i += 1
        if uf.count == 1:
            yield Graph(n, tuple(all_edges[i] for i in range(mm) if (mask >> i) & 1))
