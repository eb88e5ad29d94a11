"""Graph substrate: parsing, neighborhoods, components, generators."""

import random

import pytest

from pmcsolve.graph import (
    Graph,
    GraphError,
    bits,
    connected_components,
    format_pace,
    gen_graph,
    induced_subgraph,
    is_clique,
    mask_of,
    neighborhood,
    parse_graph,
    tuple_of,
)

P3 = Graph(3, [(0, 1), (1, 2)])
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
K4 = Graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


def test_parse_pace_p3():
    G = parse_graph("p tw 3 2\n1 2\n2 3\n")
    assert G.n == 3
    assert G.edges() == P3.edges()


def test_parse_pace_c4_with_comments():
    G = parse_graph("c a four-cycle\np tw 4 4\n1 2\n2 3\n3 4\n4 1\n")
    assert G.edges() == C4.edges()


def test_parse_out_of_range_names_line():
    with pytest.raises(GraphError) as err:
        parse_graph("p tw 2 1\n1 3\n")
    assert "line" in str(err.value) or "3" in str(err.value)


def test_parse_self_loop_rejected():
    with pytest.raises(GraphError):
        parse_graph("p tw 2 1\n1 1\n")


def test_parse_edge_list_infers_n():
    G = parse_graph("1 2\n2 3\n", format="edge-list")
    assert G.n == 3 and G.edges() == P3.edges()


def test_duplicate_edges_collapse():
    G = parse_graph("p tw 2 2\n1 2\n2 1\n")
    assert G.m == 1


def test_pace_round_trip():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 8)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.4]
        G = Graph(n, edges)
        assert parse_graph(format_pace(G)).edges() == G.edges()


def test_neighborhood_examples():
    assert neighborhood(P3, (1,)) == (0, 2)
    assert neighborhood(P3, (0, 1, 2)) == ()
    assert neighborhood(C4, (0,)) == (1, 3)


def test_neighborhood_disjoint_from_argument():
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randint(1, 9)
        G = Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                      if rng.random() < 0.5])
        S = tuple(v for v in range(n) if rng.random() < 0.4)
        assert not set(neighborhood(G, S)) & set(S)


def test_components_examples():
    assert connected_components(C4, (0, 2)) == [(1,), (3,)]
    assert connected_components(P3, ()) == [(0, 1, 2)]
    assert connected_components(K4, (0, 1, 2)) == [(3,)]


def test_components_partition_without_cross_edges():
    rng = random.Random(13)
    for _ in range(30):
        n = rng.randint(1, 9)
        G = Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                      if rng.random() < 0.3])
        excl = tuple(v for v in range(n) if rng.random() < 0.3)
        parts = connected_components(G, excl)
        seen = [v for part in parts for v in part]
        assert sorted(seen) == sorted(set(range(n)) - set(excl))
        for i, a in enumerate(parts):
            for b in parts[i + 1:]:
                assert not any(G.has_edge(u, v) for u in a for v in b)


def test_is_clique_examples():
    assert is_clique(K4, (0, 1, 2))
    assert is_clique(K4, (1, 2, 3))
    assert not is_clique(C4, (0, 2))
    assert is_clique(C4, ())
    assert is_clique(C4, (2,))


def test_gen_cycle():
    G = gen_graph("cycle", n=5)
    assert G.n == 5 and G.m == 5
    assert all(G.has_edge(i, (i + 1) % 5) for i in range(5))


def test_gen_k_tree_is_chordal_width_k():
    from pmcsolve.triangulation import exact_treewidth_small

    G = gen_graph("k-tree", seed=7, n=8, k=2)
    assert exact_treewidth_small(G) == 2
    # chordal: repeatedly peel a vertex whose neighbors form a clique
    alive = set(range(G.n))
    while alive:
        for v in sorted(alive):
            nb = [u for u in alive if u != v and G.has_edge(u, v)]
            if is_clique(G, nb):
                alive.remove(v)
                break
        else:
            raise AssertionError("no simplicial vertex in a k-tree")


def test_gen_gnp_deterministic():
    a = gen_graph("gnp", seed=1, n=10, p=0.3)
    b = gen_graph("gnp", seed=1, n=10, p=0.3)
    assert a.edges() == b.edges()
    assert gen_graph("gnp", seed=2, n=10, p=0.3).edges() != a.edges()


def test_gen_invalid_params():
    with pytest.raises(GraphError):
        gen_graph("cycle", n=2)
    with pytest.raises(GraphError):
        gen_graph("no-such-kind", n=3)


def test_gen_interval_sorted_intervals_give_interval_graph():
    # every generated instance must at least be chordal-free of C4 holes;
    # spot-check via the triangulation oracle on small sizes
    from pmcsolve.triangulation import minimal_triangulations_small

    for seed in range(4):
        G = gen_graph("interval", seed=seed, n=7)
        assert minimal_triangulations_small(G) == {G}


def test_mask_helpers_round_trip():
    assert mask_of((0, 2, 5)) == 0b100101
    assert tuple_of(0b100101) == (0, 2, 5)
    assert list(bits(0b1010)) == [1, 3]


def test_induced_subgraph_keeps_edges():
    H, old = induced_subgraph(C4, (0, 1, 3))
    assert H.n == 3 and old == [0, 1, 3]
    assert H.has_edge(0, 1) and H.has_edge(0, 2) and not H.has_edge(1, 2)


def test_graph_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph(3, [(1, 1)])
    with pytest.raises(GraphError):
        Graph(-1, [])
