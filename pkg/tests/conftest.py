"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import itertools
from fractions import Fraction

from selfsim.core import (
    SelfSimilarSystem,
    complete_graph,
    cycle_graph,
    full_bundle,
    jr_bundle,
    jstar_bundle,
    make_base_graph,
    make_bundle,
    matching_bundle,
    mirror_bundle,
    path_graph,
)


def literal_adjacent(system, u, v):
    """Recursive reading of the construction, kept deliberately naive."""
    if len(u) == 1:
        return system.base.has_edge(u[0], v[0])
    same_prefix = u[:-1] == v[:-1]
    rule1 = same_prefix and system.base.has_edge(u[-1], v[-1])
    rule2 = (not same_prefix) and literal_adjacent(system, u[:-1], v[:-1]) and system.bundle.has(u[-1], v[-1])
    return rule1 or rule2


def brute_edges(system, k):
    """All edges of G^k by pairwise oracle calls, as 0-based sorted pairs."""
    verts = list(itertools.product(range(1, system.n + 1), repeat=k))
    return sorted(
        (a, b)
        for a, b in itertools.combinations(range(len(verts)), 2)
        if literal_adjacent(system, verts[a], verts[b])
    )


def brute_conductance(graph):
    """Minimum cut ratio over all small subsets via itertools.combinations."""
    n = graph.vertex_count
    edges = graph.edge_list()
    best = None
    for size in range(1, n // 2 + 1):
        for s in itertools.combinations(range(n), size):
            inside = set(s)
            cut = sum((a in inside) != (b in inside) for a, b in edges)
            ratio = Fraction(cut, size)
            if best is None or ratio < best:
                best = ratio
    return best


def fixture_systems():
    """(label, system) pairs with n <= 4 covering at least ten distinct bundles."""
    k2 = complete_graph(2)
    k3 = complete_graph(3)
    p3 = path_graph(3)
    c4 = cycle_graph(4)
    star = make_base_graph(4, [(1, 2), (1, 3), (1, 4)])
    return [
        ("K2-j1", SelfSimilarSystem(k2, make_bundle(2, []))),
        ("K2-j2", SelfSimilarSystem(k2, make_bundle(2, [(1, 1)]))),
        ("K2-j4", SelfSimilarSystem(k2, matching_bundle(2))),
        ("K2-j5", SelfSimilarSystem(k2, jstar_bundle(2))),
        ("K2-j6", SelfSimilarSystem(k2, make_bundle(2, [(1, 2), (1, 1)], symmetrize=True))),
        ("K2-j8", SelfSimilarSystem(k2, full_bundle(2))),
        ("K3-matching", SelfSimilarSystem(k3, matching_bundle(3))),
        ("K3-jstar", SelfSimilarSystem(k3, jstar_bundle(3))),
        ("K3-j1", SelfSimilarSystem(k3, jr_bundle(3, 1))),
        ("K3-full", SelfSimilarSystem(k3, full_bundle(3))),
        ("P3-matching", SelfSimilarSystem(p3, matching_bundle(3))),
        ("P3-mirror", SelfSimilarSystem(p3, mirror_bundle(p3))),
        ("P3-irregular", SelfSimilarSystem(p3, make_bundle(3, [(1, 1), (2, 3)], symmetrize=True))),
        ("C4-jr2", SelfSimilarSystem(c4, jr_bundle(4, 2))),
        ("K4-matching", SelfSimilarSystem(complete_graph(4), matching_bundle(4))),
        ("star-odd", SelfSimilarSystem(star, make_bundle(4, [(2, 2), (1, 3), (4, 4), (2, 4)], symmetrize=True))),
    ]


FIXTURES = fixture_systems()

