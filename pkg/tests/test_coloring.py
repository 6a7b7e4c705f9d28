import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfsim.coloring import (
    K3_SPECIAL_CLASSES,
    Coloring,
    chromatic_number_exact,
    classify_bundle,
    clique_witness,
    coloring_jr_scheme,
    coloring_k3_special,
    coloring_matching_mod,
    coloring_mirror_classes,
    greedy_coloring,
    k2_catalog,
    k3_special_system,
    k_coloring,
    optimal_base_coloring,
    verify_clique,
    verify_coloring,
)
from selfsim.core import (
    Bundle,
    SelfSimilarSystem,
    SizeLimitError,
    complete_graph,
    cycle_graph,
    full_bundle,
    graph_from_edges,
    jr_bundle,
    jstar_bundle,
    make_base_graph,
    make_bundle,
    matching_bundle,
    materialize,
    mirror_bundle,
    path_graph,
)


def complete(n):
    return graph_from_edges(n, itertools.combinations(range(n), 2))


def cycle(n):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def brute_chromatic(graph):
    """Smallest p admitting a proper coloring, by trying every assignment."""
    n = graph.vertex_count
    edges = graph.edge_list()
    for p in range(1, n + 1):
        for colors in itertools.product(range(p), repeat=n):
            if all(colors[a] != colors[b] for a, b in edges):
                return p
    return n


def test_verify_coloring_examples():
    k3 = complete(3)
    assert verify_coloring(k3, Coloring(3, (0, 1, 2)))
    assert not verify_coloring(k3, Coloring(2, (0, 1, 0)))
    q2 = materialize(SelfSimilarSystem(complete_graph(2), matching_bundle(2)), 2)
    parity = tuple(sum(q2.decode(v)) % 2 for v in range(4))
    assert verify_coloring(q2, Coloring(2, parity))


def test_verify_coloring_size_mismatch():
    with pytest.raises(ValueError):
        verify_coloring(complete(3), Coloring(3, (0, 1)))
    with pytest.raises(ValueError):
        verify_coloring(complete(3), Coloring(2, (0, 1, 2)))


def test_exact_examples():
    assert chromatic_number_exact(complete(4))[0] == 4
    assert chromatic_number_exact(cycle(5))[0] == 3
    g = materialize(k3_special_system(), 2)
    chi, witness = chromatic_number_exact(g)
    assert chi == 4 and verify_coloring(g, witness)


def test_exact_size_limit():
    with pytest.raises(SizeLimitError):
        chromatic_number_exact(graph_from_edges(65, []))


def _random_graphs():
    @st.composite
    def build(draw):
        n = draw(st.integers(1, 7))
        edges = [e for e in itertools.combinations(range(n), 2) if draw(st.booleans())]
        return graph_from_edges(n, edges)

    return build()


@settings(max_examples=60, deadline=None)
@given(_random_graphs())
def test_exact_matches_brute_force(graph):
    chi, witness = chromatic_number_exact(graph)
    assert chi == brute_chromatic(graph)
    assert witness.palette == chi and verify_coloring(graph, witness)


def test_greedy_examples():
    assert greedy_coloring(complete(3), [2, 0, 1]).palette == 3
    assert greedy_coloring(graph_from_edges(4, [])).palette == 1
    q3 = materialize(SelfSimilarSystem(complete_graph(2), matching_bundle(2)), 3)
    c = greedy_coloring(q3)
    assert c.palette <= 4 and verify_coloring(q3, c)
    with pytest.raises(ValueError):
        greedy_coloring(complete(3), [0, 0, 1])


def test_matching_mod_examples():
    k3 = SelfSimilarSystem(complete_graph(3), matching_bundle(3))
    c = coloring_matching_mod(k3, 2)
    assert c.palette == 3 and verify_coloring(materialize(k3, 2), c)

    q = SelfSimilarSystem(complete_graph(2), matching_bundle(2))
    graph = materialize(q, 3)
    c = coloring_matching_mod(q, 3)
    assert c.colors == tuple((sum(graph.decode(v)) - 3) % 2 for v in range(8))

    c5 = SelfSimilarSystem(cycle_graph(5), matching_bundle(5))
    c = coloring_matching_mod(c5, 2)
    assert c.palette == 3 and verify_coloring(materialize(c5, 2), c)

    with pytest.raises(ValueError):
        coloring_matching_mod(SelfSimilarSystem(complete_graph(3), full_bundle(3)), 2)


def test_mirror_examples():
    k3 = SelfSimilarSystem(complete_graph(3), jstar_bundle(3))
    c = coloring_mirror_classes(k3, 2)
    assert c.palette == 3 and verify_coloring(materialize(k3, 2), c)
    c5 = cycle_graph(5)
    s = SelfSimilarSystem(c5, mirror_bundle(c5))
    c = coloring_mirror_classes(s, 2)
    assert c.palette == 3 and verify_coloring(materialize(s, 2), c)
    assert coloring_mirror_classes(s, 1) == optimal_base_coloring(c5)
    with pytest.raises(ValueError):
        coloring_mirror_classes(SelfSimilarSystem(c5, matching_bundle(5)), 2)


def test_base_coloring_is_lexicographically_least():
    assert optimal_base_coloring(cycle_graph(5)).colors == (0, 1, 0, 1, 2)
    assert optimal_base_coloring(path_graph(3)).colors == (0, 1, 0)
    assert optimal_base_coloring(complete_graph(3)).colors == (0, 1, 2)


def test_jr_scheme_examples():
    s = SelfSimilarSystem(complete_graph(3), jr_bundle(3, 1))
    c = coloring_jr_scheme(3, 1, 2)
    assert c.palette <= 6 and verify_coloring(materialize(s, 2), c)
    c0 = coloring_jr_scheme(3, 0, 2)
    assert c0.palette == 3 and verify_coloring(materialize(SelfSimilarSystem(complete_graph(3), jstar_bundle(3)), 2), c0)
    s4 = SelfSimilarSystem(complete_graph(4), jr_bundle(4, 2))
    c = coloring_jr_scheme(4, 2, 3)
    assert c.palette <= 8 and verify_coloring(materialize(s4, 3), c)
    with pytest.raises(ValueError):
        coloring_jr_scheme(3, 4, 2)


def test_jr_table_rows_rotate_by_two():
    # first loop row of n=3, r=2 uses all six colors in order, the next starts two later
    from selfsim.coloring import _jr_table

    table = _jr_table(3, 2)
    assert table[0] == [0, 1, 2, 3, 4, 5]
    assert table[1] == [2, 3, 4, 5, 0, 1]
    assert table[2] == [1, 0, 1, 0, 1, 0]


def test_k3_special_partition():
    system = k3_special_system()
    graph = materialize(system, 2)
    assert sorted(v for cls in K3_SPECIAL_CLASSES for v in cls) == sorted(
        graph.decode(i) for i in range(9)
    )
    c = coloring_k3_special(2)
    assert [sorted(graph.decode(v) for v in cls) for cls in c.classes()] == [sorted(x) for x in K3_SPECIAL_CLASSES]
    assert verify_coloring(graph, c)
    assert k_coloring(graph, 3) is None
    assert chromatic_number_exact(graph)[0] == 4


def test_k3_special_deeper():
    system = k3_special_system()
    for k in (3, 4):
        graph = materialize(system, k)
        c = coloring_k3_special(k)
        assert c.palette == 4 and verify_coloring(graph, c)
    assert chromatic_number_exact(materialize(system, 3))[0] == 4


def test_clique_witness_examples():
    j6 = SelfSimilarSystem(complete_graph(2), make_bundle(2, [(1, 2), (2, 1), (1, 1)]))
    w = clique_witness(j6, 2, 1, 2)
    assert len(w.vertices) == 3 and verify_clique(j6, w)
    w1 = clique_witness(j6, 1, 1, 2)
    assert w1.vertices == ((1,), (2,))
    full = SelfSimilarSystem(complete_graph(3), full_bundle(3))
    w = clique_witness(full, 4, 1, 2)
    assert len(set(w.vertices)) == 5 and verify_clique(full, w)
    with pytest.raises(ValueError):
        clique_witness(SelfSimilarSystem(complete_graph(2), matching_bundle(2)), 3, 1, 2)


def test_classify_examples():
    j6 = make_bundle(2, [(1, 2), (2, 1), (1, 1)])
    result = classify_bundle(2, j6)
    assert not result.finite and result.witness == ((1, 1), (1, 2), (2, 1))
    assert result.describe() == "Infinite; witness (1,1′),(1,2′),(2,1′)"
    result = classify_bundle(3, matching_bundle(3))
    assert result.finite and result.bound == 3
    result = classify_bundle(3, jr_bundle(3, 1))
    assert result.finite and result.bound == 6 and result.notes
    assert classify_bundle(4, jstar_bundle(4)).bound == 4


def _all_bundles(n):
    cells = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    for bits in range(1 << len(cells)):
        yield make_bundle(n, [c for b, c in enumerate(cells) if bits >> b & 1], symmetrize=True)


def _contains(big: Bundle, small: Bundle) -> bool:
    return all(s & ~b == 0 for s, b in zip(small.rows, big.rows))


def test_classify_monotone_on_all_labeled_bundles_n2():
    # all 16 labeled subsets of the 2x2 relation, of which 8 are symmetric
    cells = [(1, 1), (1, 2), (2, 1), (2, 2)]
    bundles = []
    for bits in range(16):
        try:
            bundles.append(make_bundle(2, [c for i, c in enumerate(cells) if bits >> i & 1]))
        except ValueError:
            pass
    assert len(bundles) == 8
    for small in bundles:
        for big in bundles:
            if _contains(big, small) and not classify_bundle(2, small).finite:
                assert not classify_bundle(2, big).finite


@pytest.mark.parametrize("n", [2, 3])
def test_classify_finite_bound_holds(n):
    for bundle in _all_bundles(n):
        result = classify_bundle(n, bundle)
        system = SelfSimilarSystem(complete_graph(n), bundle)
        k = 1
        while n**k <= 64:
            graph = materialize(system, k)
            if result.finite:
                found = k_coloring(graph, result.bound)
                assert found is not None and verify_coloring(graph, found)
            else:
                i, j = result.witness[1]
                assert verify_clique(system, clique_witness(system, k, i, j))
            k += 1


def test_k2_catalog_outcomes():
    catalog = k2_catalog()
    assert [e.name for e in catalog] == [f"j{i}" for i in range(1, 9)]
    base = complete_graph(2)
    for entry in catalog:
        for k in range(1, 5):
            chi, _ = chromatic_number_exact(materialize(SelfSimilarSystem(base, entry.bundle), k))
            expected = entry.expected_chi(k)
            if expected is None:
                assert chi >= k + 1
            else:
                assert chi == expected


def test_subgraph_monotonicity():
    bundle = matching_bundle(4)
    big = make_base_graph(4, [(1, 2), (2, 3), (3, 4), (1, 3)])
    small = make_base_graph(4, [(1, 2), (3, 4)])
    for k in (1, 2, 3):
        chi_big = chromatic_number_exact(materialize(SelfSimilarSystem(big, bundle), k))[0]
        chi_small = chromatic_number_exact(materialize(SelfSimilarSystem(small, bundle), k))[0]
        assert chi_small <= chi_big
