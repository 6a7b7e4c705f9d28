"""Colorings of G^k: exact and greedy solvers, structured constructions,
clique witnesses and the finiteness classifier for complete base graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    K2_BUNDLES,
    BaseGraph,
    Bundle,
    ExplicitGraph,
    SelfSimilarSystem,
    SizeLimitError,
    Vertex,
    adjacent,
    complete_graph,
    graph_from_edges,
    jr_bundle,
    make_bundle,
    materialize,
)

DEFAULT_MAX_EXACT = 64

# The K_3 bundle {(1,1'), (2,3'), (3,2')}: one loop plus one simple edge.
K3_SPECIAL_PAIRS = [(1, 1), (2, 3), (3, 2)]


@dataclass(frozen=True)
class Coloring:
    palette: int
    colors: tuple[int, ...]

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.palette)]
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out

    @property
    def used(self) -> int:
        return len(set(self.colors))


def verify_coloring(graph: ExplicitGraph, coloring: Coloring) -> bool:
    if len(coloring.colors) != graph.vertex_count:
        raise ValueError(
            f"coloring covers {len(coloring.colors)} vertices, graph has {graph.vertex_count}"
        )
    if any(not 0 <= c < coloring.palette for c in coloring.colors):
        raise ValueError(f"color outside palette 0..{coloring.palette - 1}")
    colors = coloring.colors
    return all(colors[a] != colors[b] for a, b in graph.edge_list())


def greedy_coloring(graph: ExplicitGraph, order: Sequence[int] | None = None) -> Coloring:
    """First-fit coloring along ``order`` (default: index order)."""
    if order is None:
        order = range(graph.vertex_count)
    order = list(order)
    if sorted(order) != list(range(graph.vertex_count)):
        raise ValueError("order is not a permutation of the vertices")
    colors = [-1] * graph.vertex_count
    for v in order:
        taken = {colors[w] for w in graph.neighbors[v]}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
    return Coloring(max(colors, default=-1) + 1, tuple(colors))


def _greedy_clique(rows: list[int], n: int) -> list[int]:
    best: list[int] = []
    for start in range(n):
        clique = [start]
        cand = rows[start]
        while cand:
            # pick the candidate with most neighbours among the remaining candidates
            v = max(_bits(cand), key=lambda w: (bin(rows[w] & cand).count("1"), -w))
            clique.append(v)
            cand &= rows[v]
        if len(clique) > len(best):
            best = clique
    return best


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _dsatur_search(
    rows: list[int],
    n: int,
    max_colors: int,
    precolored: dict[int, int],
    stop_at: int,
    preferred: Sequence[int] | None = None,
) -> list[int] | None:
    """Branch and bound over saturation-ordered vertices.

    Returns the best coloring found using fewer than ``max_colors`` colors
    (None when none exists); stops early once ``stop_at`` colors are reached.
    """
    colors = [-1] * n
    class_masks = [0] * max_colors
    for v, c in precolored.items():
        colors[v] = c
        class_masks[c] |= 1 << v
    uncolored = ((1 << n) - 1) & ~sum(1 << v for v in precolored)
    best: list[int] | None = None
    bound = max_colors  # solutions must use fewer than this many colors

    def choose(used: int) -> int:
        best_v, best_key = -1, None
        for v in _bits(uncolored):
            sat = sum(1 for c in range(used) if rows[v] & class_masks[c])
            key = (sat, bin(rows[v] & uncolored).count("1"), -v)
            if best_key is None or key > best_key:
                best_v, best_key = v, key
        return best_v

    def recurse(used: int) -> bool:
        nonlocal uncolored, best, bound
        if not uncolored:
            best = colors[:]
            bound = used
            return used <= stop_at
        v = choose(used)
        options = [c for c in range(min(used + 1, bound - 1)) if not rows[v] & class_masks[c]]
        if preferred is not None and preferred[v] in options:
            options.remove(preferred[v])
            options.insert(0, preferred[v])
        for c in options:
            colors[v] = c
            class_masks[c] |= 1 << v
            uncolored &= ~(1 << v)
            done = recurse(max(used, c + 1))
            uncolored |= 1 << v
            class_masks[c] &= ~(1 << v)
            colors[v] = -1
            if done:
                return True
        return False

    recurse(max(precolored.values(), default=-1) + 1)
    return best


def _canonical(colors: Sequence[int]) -> tuple[int, ...]:
    """Relabel colors in order of first appearance."""
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(c, len(relabel)) for c in colors)


def chromatic_number_exact(
    graph: ExplicitGraph, max_vertices: int = DEFAULT_MAX_EXACT
) -> tuple[int, Coloring]:
    """Exact chromatic number with one optimal coloring as witness."""
    n = graph.vertex_count
    if n > max_vertices:
        raise SizeLimitError(f"exact coloring refused: {n} vertices > limit {max_vertices}")
    if graph.edge_count == 0:
        return (1 if n else 0), Coloring(1, (0,) * n)
    rows = graph.rows
    clique = _greedy_clique(rows, n)
    lower = len(clique)
    upper = _dsatur_greedy(rows, n)
    if max(upper) + 1 == lower:
        return lower, Coloring(lower, _canonical(upper))
    found = _dsatur_search(
        rows, n, max(upper) + 1, {v: c for c, v in enumerate(clique)}, stop_at=lower
    )
    best = found if found is not None else upper
    chi = max(best) + 1
    return chi, Coloring(chi, _canonical(best))


def _dsatur_greedy(rows: list[int], n: int) -> list[int]:
    colors = [-1] * n
    class_masks: list[int] = []
    uncolored = (1 << n) - 1
    while uncolored:
        v = max(
            _bits(uncolored),
            key=lambda w: (
                sum(1 for m in class_masks if rows[w] & m),
                bin(rows[w] & uncolored).count("1"),
                -w,
            ),
        )
        c = next((c for c, m in enumerate(class_masks) if not rows[v] & m), len(class_masks))
        if c == len(class_masks):
            class_masks.append(0)
        class_masks[c] |= 1 << v
        colors[v] = c
        uncolored &= ~(1 << v)
    return colors


def k_coloring(
    graph: ExplicitGraph, k: int, preferred: Sequence[int] | None = None
) -> Coloring | None:
    """Search for a proper coloring with at most ``k`` colors."""
    n = graph.vertex_count
    if graph.edge_count == 0:
        return Coloring(max(k, 1), (0,) * n)
    found = _dsatur_search(graph.rows, n, k + 1, {}, stop_at=k, preferred=preferred)
    return None if found is None else Coloring(k, tuple(found))


def optimal_base_coloring(base: BaseGraph) -> Coloring:
    """The lexicographically least coloring of G with chi(G) colors."""
    g = graph_from_edges(base.n, [(i - 1, j - 1) for i, j in base.edges])
    chi, _ = chromatic_number_exact(g, max_vertices=max(base.n, DEFAULT_MAX_EXACT))
    colors = [-1] * base.n

    def fill(v: int) -> bool:
        if v == base.n:
            return True
        for c in range(chi):
            if all(colors[w] != c for w in g.neighbors[v] if w < v):
                colors[v] = c
                if fill(v + 1):
                    return True
        colors[v] = -1
        return False

    fill(0)
    return Coloring(chi, tuple(colors))


def _coords(n: int, k: int) -> itertools.product:
    return itertools.product(range(1, n + 1), repeat=k)


def coloring_matching_mod(system: SelfSimilarSystem, k: int) -> Coloring:
    """Color (v_1..v_k) by the sum of base colors of its coordinates mod chi(G).

    Valid for the loop matching bundle: inside a block the last coordinates
    differ in color, and across blocks the last coordinates coincide so the
    difference reduces to the prefix coloring.
    """
    if not system.bundle.is_matching():
        raise ValueError("modular coloring needs the loop matching bundle {(i,i')}")
    base = optimal_base_coloring(system.base)
    p = base.palette
    colors = tuple(sum(base.colors[c - 1] for c in v) % p for v in _coords(system.n, k))
    return Coloring(p, colors)


def coloring_mirror_classes(system: SelfSimilarSystem, k: int) -> Coloring:
    """Color each vertex by the base color class of its last coordinate.

    Valid when the bundle mirrors the base graph, since two vertices whose
    last coordinates share a class are never joined by the bundle.
    """
    if system.bundle.rows != system.base.rows:
        raise ValueError("class coloring needs the bundle to mirror the base graph")
    base = optimal_base_coloring(system.base)
    colors = tuple(base.colors[v[-1] - 1] for v in _coords(system.n, k))
    return Coloring(base.palette, colors)


def _jr_table(n: int, r: int) -> list[list[int]]:
    """Row q, column p: the color (0-based) for last coordinate q and prefix class p.

    Loop rows 0..r-1 are all 2n colors rotated by two per row; the remaining
    rows use the fixed pair {2t, 2t+1}, the parity chosen against the column.
    """
    width = 2 * n
    table = [[(p + 2 * q) % width for p in range(width)] for q in range(r)]
    for t in range(n - r):
        table.append([2 * t + 1 if p % 2 == 0 else 2 * t for p in range(width)])
    return table


def coloring_jr_scheme(n: int, r: int, k: int) -> Coloring:
    """At most 2n colors for (K_n, J_r), built level by level from a table."""
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in 0..{n}, got {r}")
    if k < 1:
        raise ValueError("k must be at least 1")
    if r == 0:
        # J_0 is J*, which mirrors K_n.
        return coloring_mirror_classes(SelfSimilarSystem(complete_graph(n), jr_bundle(n, 0)), k)
    table = _jr_table(n, r)
    colors = list(range(n))  # K_n with n colors
    for _ in range(2, k + 1):
        colors = [table[q][c] for c in colors for q in range(n)]
    return Coloring(2 * n, tuple(colors))


# The explicit four-class partition of (K_3, special bundle) at depth 2.
K3_SPECIAL_CLASSES: list[list[Vertex]] = [
    [(1, 1)],
    [(2, 2), (3, 1)],
    [(1, 2), (2, 1), (3, 2)],
    [(1, 3), (2, 3), (3, 3)],
]


def k3_special_system() -> SelfSimilarSystem:
    return SelfSimilarSystem(complete_graph(3), make_bundle(3, K3_SPECIAL_PAIRS))


def coloring_k3_special(k: int, max_vertices: int = 10_000) -> Coloring:
    """A proper 4-coloring of G^k for (K_3, {(1,1'),(2,3'),(3,2')}).

    Depth 2 uses the explicit partition; deeper levels are found by search in
    which each vertex first tries the color of its prefix.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    system = k3_special_system()
    graph = materialize(system, 2)
    colors = [0] * 9
    for c, cls in enumerate(K3_SPECIAL_CLASSES):
        for v in cls:
            colors[graph.encode(v)] = c
    for level in range(3, k + 1):
        graph = materialize(system, level, limit=max_vertices)
        preferred = [colors[v // 3] for v in range(graph.vertex_count)]
        found = k_coloring(graph, 4, preferred=preferred)
        if found is None:
            raise RuntimeError(f"no 4-coloring found at depth {level}")
        colors = list(found.colors)
    return Coloring(4, tuple(colors))


@dataclass(frozen=True)
class CliqueWitness:
    k: int
    vertices: tuple[Vertex, ...]


def clique_hypothesis_holds(system: SelfSimilarSystem, i: int, j: int) -> bool:
    return (
        i != j
        and system.base.has_edge(i, j)
        and system.bundle.has(i, i)
        and system.bundle.has(i, j)
        and system.bundle.has(j, i)
    )


def clique_witness(system: SelfSimilarSystem, k: int, i: int, j: int) -> CliqueWitness:
    """k+1 pairwise adjacent vertices of G^k: the all-i vertex and each
    all-i vertex with a single j."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not (1 <= i <= system.n and 1 <= j <= system.n):
        raise ValueError(f"indices ({i}, {j}) out of range")
    if not clique_hypothesis_holds(system, i, j):
        raise ValueError(
            f"need v_{i} ~ v_{j} in G and ({i},{i}'), ({i},{j}'), ({j},{i}') in the bundle"
        )
    vertices = [(i,) * k]
    for t in range(k):
        v = [i] * k
        v[t] = j
        vertices.append(tuple(v))
    return CliqueWitness(k, tuple(vertices))


def verify_clique(system: SelfSimilarSystem, witness: CliqueWitness) -> bool:
    return all(adjacent(system, a, b) for a, b in itertools.combinations(witness.vertices, 2))


@dataclass(frozen=True)
class Classification:
    finite: bool
    bound: int | None = None
    witness: tuple[tuple[int, int], tuple[int, int], tuple[int, int]] | None = None
    reason: str = ""
    notes: tuple[str, ...] = field(default=())

    @property
    def verdict(self) -> str:
        return "Finite" if self.finite else "Infinite"

    def describe(self) -> str:
        if self.finite:
            return f"Finite; bound {self.bound} ({self.reason})"
        (a, _), (b, c), (d, _) = self.witness
        return f"Infinite; witness ({a},{a}′),({b},{c}′),({d},{b}′)"


def find_triple(bundle: Bundle) -> tuple[int, int] | None:
    """First (i, j), i != j, with (i,i'), (i,j'), (j,i') all in the bundle."""
    for i in range(1, bundle.n + 1):
        if not bundle.has(i, i):
            continue
        for j in range(1, bundle.n + 1):
            if j != i and bundle.has(i, j):
                return i, j
    return None


def classify_bundle(n: int, bundle: Bundle) -> Classification:
    """Decide whether chi(K_n^k) stays bounded for this bundle."""
    if bundle.n != n:
        raise ValueError(f"bundle side {bundle.n} does not match n={n}")
    hit = find_triple(bundle)
    if hit is not None:
        i, j = hit
        return Classification(
            finite=False,
            witness=((i, i), (i, j), (j, i)),
            reason="loop attached to an edge of the bundle view",
        )
    loops = bundle.loops
    off_diagonal = any(bundle.rows[i] & ~(1 << i) for i in range(n))
    notes: tuple[str, ...] = ()
    if not loops:
        bound, reason = n, "loopless bundle; contained in J* which mirrors K_n"
    elif not off_diagonal:
        bound, reason = n, "loops only; modular coloring"
    else:
        bound, reason = 2 * n, "loops plus edges; contained in J_r"
        if n == 3 and bundle.rows == make_bundle(3, K3_SPECIAL_PAIRS).rows:
            notes = ("tighter bound 4 holds for this bundle (K_3 special case)",)
    return Classification(finite=True, bound=bound, reason=reason, notes=notes)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    bundle: Bundle
    outcome: str  # "bounded", "infinite" or "complete"

    def expected_chi(self, k: int) -> int | None:
        """Exact chi(G^k) where the outcome pins it; None when only a lower bound is known."""
        if self.outcome == "bounded":
            return 2
        if self.outcome == "complete":
            return 2**k
        return None

    def lower_bound(self, k: int) -> int:
        if self.outcome == "infinite":
            return k + 1
        return self.expected_chi(k)


def k2_catalog() -> list[CatalogEntry]:
    outcomes = {
        "j1": "bounded", "j2": "bounded", "j3": "bounded", "j4": "bounded", "j5": "bounded",
        "j6": "infinite", "j7": "infinite", "j8": "complete",
    }
    return [
        CatalogEntry(name, make_bundle(2, pairs), outcomes[name])
        for name, pairs in K2_BUNDLES.items()
    ]
