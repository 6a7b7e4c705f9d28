"""Base graphs, symmetric edge bundles and the self-similar sequence G^k.

Indices are 1-based at the public surface (vertex ``i`` of the base graph,
bundle edge ``(i, j')``) and 0-based internally.  A vertex of G^k is a tuple of
``k`` coordinates; coordinate ``t`` names the copy chosen at level ``t``, the
last coordinate being the innermost copy.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_VERTICES = 100_000

Vertex = tuple[int, ...]


class SizeLimitError(ValueError):
    """Raised when a request would exceed a configured size limit."""


def default_max_vertices() -> int:
    value = os.environ.get("SELFSIM_MAX_VERTICES")
    if value is None:
        return DEFAULT_MAX_VERTICES
    limit = int(value)
    if limit < 1:
        raise ValueError("SELFSIM_MAX_VERTICES must be positive")
    return limit


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class BaseGraph:
    """Simple undirected graph on vertices 1..n, stored as bitmask rows."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a base graph needs at least one vertex")
        if len(self.rows) != self.n:
            raise ValueError("row count does not match n")
        for i, row in enumerate(self.rows):
            if row >> self.n:
                raise ValueError(f"row {i + 1} has bits beyond n")
            if row >> i & 1:
                raise ValueError(f"self-loop at vertex {i + 1}")
            for j in range(self.n):
                if (row >> j & 1) != (self.rows[j] >> i & 1):
                    raise ValueError(f"asymmetric adjacency between {i + 1} and {j + 1}")

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i - 1] >> (j - 1) & 1)

    def degree(self, i: int) -> int:
        return _popcount(self.rows[i - 1])

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [
            (i + 1, j + 1)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.rows[i] >> j & 1
        ]

    @property
    def edge_count(self) -> int:
        return sum(_popcount(r) for r in self.rows) // 2

    def is_complete(self) -> bool:
        return self.edge_count == self.n * (self.n - 1) // 2


def make_base_graph(n: int, edges: Iterable[tuple[int, int]]) -> BaseGraph:
    """Validate a 1-based edge list and build the base graph.

    Duplicate pairs (in either orientation) collapse to a single edge.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rows = [0] * n
    for i, j in edges:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"edge ({i}, {j}) out of range 1..{n}")
        if i == j:
            raise ValueError(f"self-loop ({i}, {j}) is not allowed in a simple graph")
        rows[i - 1] |= 1 << (j - 1)
        rows[j - 1] |= 1 << (i - 1)
    return BaseGraph(n, tuple(rows))


def complete_graph(n: int) -> BaseGraph:
    full = (1 << n) - 1
    return BaseGraph(n, tuple(full & ~(1 << i) for i in range(n)))


def cycle_graph(n: int) -> BaseGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return make_base_graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> BaseGraph:
    return make_base_graph(n, [(i, i + 1) for i in range(1, n)])


@dataclass(frozen=True)
class Bundle:
    """Symmetric subgraph J of K_{n,n}; bit j of ``rows[i]`` means (i+1) ~ (j+1)'."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a bundle needs n >= 1")
        if len(self.rows) != self.n:
            raise ValueError("row count does not match n")
        for i, row in enumerate(self.rows):
            if row >> self.n:
                raise ValueError(f"row {i + 1} has bits beyond n")
            for j in range(self.n):
                if (row >> j & 1) != (self.rows[j] >> i & 1):
                    raise ValueError(
                        f"bundle is not symmetric: ({i + 1},{j + 1}') without ({j + 1},{i + 1}')"
                    )

    def has(self, i: int, j: int) -> bool:
        return bool(self.rows[i - 1] >> (j - 1) & 1)

    def degree(self, i: int) -> int:
        return _popcount(self.rows[i - 1])

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """Every bundle edge (i, j') as a 1-based pair, row-major."""
        return [
            (i + 1, j + 1)
            for i in range(self.n)
            for j in range(self.n)
            if self.rows[i] >> j & 1
        ]

    @property
    def edge_count(self) -> int:
        # Edges of J inside K_{n,n}: a loop (i,i') counts once, a symmetric
        # pair (i,j'),(j,i') counts twice.
        return sum(_popcount(r) for r in self.rows)

    @property
    def loops(self) -> frozenset[int]:
        return frozenset(i + 1 for i in range(self.n) if self.rows[i] >> i & 1)

    def is_matching(self) -> bool:
        return all(row == 1 << i for i, row in enumerate(self.rows))


def make_bundle(n: int, pairs: Iterable[tuple[int, int]], symmetrize: bool = False) -> Bundle:
    """Build a bundle from pairs ``(i, j)`` meaning i ~ j'.

    Without ``symmetrize`` an input whose relation is not symmetric is
    rejected; with it, the symmetric closure is taken.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rows = [0] * n
    for i, j in pairs:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"bundle pair ({i}, {j}) out of range 1..{n}")
        rows[i - 1] |= 1 << (j - 1)
        if symmetrize:
            rows[j - 1] |= 1 << (i - 1)
    return Bundle(n, tuple(rows))


def matching_bundle(n: int) -> Bundle:
    return Bundle(n, tuple(1 << i for i in range(n)))


def full_bundle(n: int) -> Bundle:
    return Bundle(n, ((1 << n) - 1,) * n)


def jstar_bundle(n: int) -> Bundle:
    full = (1 << n) - 1
    return Bundle(n, tuple(full & ~(1 << i) for i in range(n)))


def jr_bundle(n: int, r: int) -> Bundle:
    """Loops at 1..r plus every (i, j') with r < i != j <= n."""
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in 0..{n}, got {r}")
    tail = ((1 << n) - 1) & ~((1 << r) - 1)
    rows = [1 << i for i in range(r)]
    rows += [tail & ~(1 << i) for i in range(r, n)]
    return Bundle(n, tuple(rows))


def mirror_bundle(base: BaseGraph) -> Bundle:
    """The bundle with i ~ j' exactly when v_i ~ v_j in the base graph."""
    return Bundle(base.n, base.rows)


# The eight symmetric bundles on n = 2, in the usual catalog order.
K2_BUNDLES: dict[str, list[tuple[int, int]]] = {
    "j1": [],
    "j2": [(1, 1)],
    "j3": [(2, 2)],
    "j4": [(1, 1), (2, 2)],
    "j5": [(1, 2), (2, 1)],
    "j6": [(1, 2), (2, 1), (1, 1)],
    "j7": [(1, 2), (2, 1), (2, 2)],
    "j8": [(1, 1), (1, 2), (2, 1), (2, 2)],
}


@dataclass(frozen=True)
class BundleView:
    """The bundle redrawn on n vertices: loops plus simple edges."""

    n: int
    loops: frozenset[int]
    simple_edges: frozenset[tuple[int, int]]

    def to_bundle(self) -> Bundle:
        pairs = [(i, i) for i in self.loops]
        pairs += [(i, j) for i, j in self.simple_edges] + [(j, i) for i, j in self.simple_edges]
        return make_bundle(self.n, pairs)


def bundle_view(bundle: Bundle) -> BundleView:
    edges = frozenset((i, j) for i, j in bundle.pairs if i < j)
    return BundleView(bundle.n, bundle.loops, edges)


@dataclass(frozen=True)
class SelfSimilarSystem:
    """A base graph paired with a bundle on the same number of vertices."""

    base: BaseGraph
    bundle: Bundle

    def __post_init__(self) -> None:
        if self.base.n != self.bundle.n:
            raise ValueError(
                f"base graph has {self.base.n} vertices but bundle has side {self.bundle.n}"
            )

    @property
    def n(self) -> int:
        return self.base.n

    def check_vertex(self, u: Sequence[int]) -> None:
        if len(u) < 1:
            raise ValueError("a vertex needs at least one coordinate")
        for c in u:
            if not 1 <= c <= self.n:
                raise ValueError(f"coordinate {c} out of range 1..{self.n}")


def adjacent(system: SelfSimilarSystem, u: Sequence[int], v: Sequence[int]) -> bool:
    """Adjacency of two vertices of G^k without building the graph.

    Unrolling the recursive definition: u ~ v iff at the first coordinate t
    where they differ the base graph has u_t ~ v_t, and every later position
    s > t has u_s ~ v_s' in the bundle.
    """
    if len(u) != len(v):
        raise ValueError(f"vertex lengths differ: {len(u)} vs {len(v)}")
    system.check_vertex(u)
    system.check_vertex(v)
    k = len(u)
    t = 0
    while t < k and u[t] == v[t]:
        t += 1
    if t == k:
        return False
    if not system.base.has_edge(u[t], v[t]):
        return False
    return all(system.bundle.has(u[s], v[s]) for s in range(t + 1, k))


class ExplicitGraph:
    """G^k with vertices encoded as integers 0..n^k - 1.

    Coordinates are base-n digits, first coordinate most significant, so all
    vertices sharing a level-(k-1) prefix form a contiguous block of n indices.
    """

    def __init__(self, n: int, k: int, edges: np.ndarray):
        self.n = n
        self.k = k
        self.vertex_count = n**k
        self.edges = edges

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != self.k:
            raise ValueError(f"expected {self.k} coordinates, got {len(coords)}")
        index = 0
        for c in coords:
            if not 1 <= c <= self.n:
                raise ValueError(f"coordinate {c} out of range 1..{self.n}")
            index = index * self.n + (c - 1)
        return index

    def decode(self, index: int) -> Vertex:
        if not 0 <= index < self.vertex_count:
            raise ValueError(f"vertex index {index} out of range")
        coords = []
        for _ in range(self.k):
            index, digit = divmod(index, self.n)
            coords.append(digit + 1)
        return tuple(reversed(coords))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in self.edges]

    @cached_property
    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for a, b in self.edge_list():
            adj[a].append(b)
            adj[b].append(a)
        for row in adj:
            row.sort()
        return adj

    @cached_property
    def rows(self) -> list[int]:
        """Adjacency bitsets, one Python int per vertex."""
        rows = [0] * self.vertex_count
        for a, b in self.edge_list():
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return rows

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.neighbors]

    def regular_degree(self) -> int | None:
        degs = set(self.degrees())
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self) -> str:
        return f"ExplicitGraph(n={self.n}, k={self.k}, vertices={self.vertex_count}, edges={self.edge_count})"


def graph_from_edges(vertex_count: int, edges: Iterable[tuple[int, int]]) -> ExplicitGraph:
    """Wrap a plain 0-based edge list (used for parsed files and fixtures)."""
    canon = sorted({(min(a, b), max(a, b)) for a, b in edges})
    for a, b in canon:
        if a == b or not 0 <= a < vertex_count or not 0 <= b < vertex_count:
            raise ValueError(f"invalid edge ({a}, {b}) for {vertex_count} vertices")
    arr = np.array(canon, dtype=np.int64).reshape(-1, 2)
    return ExplicitGraph(vertex_count, 1, arr)


def _sorted_edges(arr: np.ndarray) -> np.ndarray:
    arr = np.sort(arr, axis=1)
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    return arr[order]


def materialize(system: SelfSimilarSystem, k: int, limit: int | None = None) -> ExplicitGraph:
    """Build G^k level by level.

    Every vertex p of G^(k-1) becomes the block p*n .. p*n+n-1 holding a copy
    of G; every edge {p, q} of G^(k-1) becomes the bundle between blocks p and q.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if limit is None:
        limit = default_max_vertices()
    n = system.n
    if n**k > limit:
        raise SizeLimitError(f"G^{k} has {n}^{k} = {n**k} vertices, above the limit {limit}")

    base_edges = np.array([(i - 1, j - 1) for i, j in system.base.edges], dtype=np.int64).reshape(-1, 2)
    bundle_pairs = np.array([(i - 1, j - 1) for i, j in system.bundle.pairs], dtype=np.int64).reshape(-1, 2)

    edges = base_edges
    for level in range(2, k + 1):
        blocks = n ** (level - 1)
        offsets = np.arange(blocks, dtype=np.int64) * n
        inside = (offsets[:, None, None] + base_edges[None, :, :]).reshape(-1, 2)
        # Edge {p, q} and bundle pair (a, b) give {p*n + a, q*n + b}.
        across = np.empty((len(edges) * len(bundle_pairs), 2), dtype=np.int64)
        if len(across):
            across[:, 0] = (edges[:, 0:1] * n + bundle_pairs[None, :, 0]).ravel()
            across[:, 1] = (edges[:, 1:2] * n + bundle_pairs[None, :, 1]).ravel()
        edges = np.concatenate([inside, across])
    return ExplicitGraph(n, k, _sorted_edges(edges))


def edge_count(system: SelfSimilarSystem, k: int) -> int:
    """Number of edges of G^k as an exact integer.

    Each level adds n^(k-1) copies of G and one bundle per old edge, so
    e(G^k) = e(G) * sum_{i<k} n^(k-1-i) * e_J^i.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = system.n
    ej = system.bundle.edge_count
    return system.base.edge_count * sum(n ** (k - 1 - i) * ej**i for i in range(k))


def edge_count_closed(system: SelfSimilarSystem, k: int, ceiling: bool = True) -> int:
    """The quotient form e(G)(n^k - e_J^k)/(n - e_J), or k n^(k-1) e(G) when e_J = n.

    ``ceiling`` applies a ceiling to the quotient;
    the quotient is always an integer, so both settings agree.
    """
    n = system.n
    ej = system.bundle.edge_count
    eg = system.base.edge_count
    if ej == n:
        return k * n ** (k - 1) * eg
    q = Fraction(n**k - ej**k, n - ej)
    if ceiling:
        return eg * -(-q.numerator // q.denominator)
    if q.denominator != 1:
        raise ArithmeticError(f"quotient {q} is not an integer")
    return eg * q.numerator


def degree(system: SelfSimilarSystem, u: Sequence[int]) -> int:
    """Degree of u in G^k via d(u_1..u_t) = d_G(u_t) + d(u_1..u_{t-1}) * d_J(u_t)."""
    system.check_vertex(u)
    d = system.base.degree(u[0])
    for c in u[1:]:
        d = system.base.degree(c) + d * system.bundle.degree(c)
    return d
