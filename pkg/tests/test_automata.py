"""Property automata: classes, composition ops, expressions, semantics."""

import random
from itertools import combinations

import pytest

from conftest import random_connected
from pmcsolve.graph import Graph, GraphError, gen_graph
from pmcsolve.automata import (
    TerminalGraph,
    accepting,
    apply_forget,
    apply_introduce,
    apply_join,
    base_class,
    build_clique_tree,
    expression_from_tree_decomposition,
    make_automaton,
    parse_property_spec,
    run_expression,
    semantic_eval,
    subgraph_tree_decompositions,
)

P3 = Graph(3, [(0, 1), (1, 2)])
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def tg(vertices, edges):
    return TerminalGraph(tuple(vertices), tuple(vertices),
                         frozenset(tuple(sorted(e)) for e in edges))


def test_base_class_independent_set():
    A = make_automaton("independent-set", 1)
    c = base_class(A, tg([0, 1], [(0, 1)]), (0,))
    assert c.members == 0b01 and not c.reject
    c2 = base_class(A, tg([0, 1], [(0, 1)]), (0, 1))
    assert c2.reject


def test_base_class_forest_single_vertex():
    A = make_automaton("forest", 1)
    c = base_class(A, tg([0], []), (0,))
    assert not c.reject and c.members == 0b1
    # the one-vertex labeled partition has a single group
    assert c.payload is not None


def test_forget_drops_membership():
    A = make_automaton("independent-set", 1)
    c = base_class(A, tg([0, 1], []), (0,))
    f = apply_forget(A, c, (0, 1), (1,))
    assert f.members == 0 and not f.reject


def test_forget_closing_second_component_rejects():
    A = make_automaton("connected:T=", 1)
    # two labeled singletons, no edge: forgetting one leaves a closed
    # component beside a live one
    c = base_class(A, tg([0, 1], []), (0, 1))
    f = apply_forget(A, c, (0, 1), (1,))
    g = apply_forget(A, f, (1,), ())
    assert f.reject or g.reject


def test_introduce_glues_membership():
    A = make_automaton("independent-set", 1)
    ci = base_class(A, tg([1], []), (1,))
    cw = base_class(A, tg([0, 1], []), (0, 1))
    got = apply_introduce(A, ci, (1,), cw, (0, 1))
    assert got is not None and got.members == 0b11


def test_introduce_membership_clash_invalid():
    A = make_automaton("independent-set", 1)
    ci = base_class(A, tg([1], []), (1,))
    cw = base_class(A, tg([0, 1], []), (0,))  # says vertex 1 unlabeled
    assert apply_introduce(A, ci, (1,), cw, (0, 1)) is None


def test_introduce_cycle_closure_rejects_forest():
    A = make_automaton("forest", 2)
    # path 1-0-3 labeled, then introducing bag edges 1-2, 2-3 closes a
    # cycle with the 2-side path of C4
    ci = base_class(A, tg([1, 3], []), (1, 3))
    upper = base_class(A, tg([0, 1, 3], [(0, 1), (0, 3)]), (0, 1, 3))
    mid = apply_forget(A, upper, (0, 1, 3), (1, 3))
    lower_bag = base_class(A, tg([1, 2, 3], [(1, 2), (2, 3)]), (1, 2, 3))
    glued = apply_introduce(A, mid, (1, 3), lower_bag, (1, 2, 3))
    assert glued is None or glued.reject


def test_join_idempotent_for_independent_set():
    A = make_automaton("independent-set", 1)
    c = base_class(A, tg([0, 1], []), (0, 1))
    assert apply_join(A, c, c, (0, 1)) == c


def test_join_double_path_rejects_forest():
    A = make_automaton("forest", 2)
    upper = base_class(A, tg([0, 1, 3], [(0, 1), (0, 3)]), (0, 1, 3))
    lower = base_class(A, tg([1, 2, 3], [(1, 2), (2, 3)]), (1, 2, 3))
    a = apply_forget(A, upper, (0, 1, 3), (1, 3))
    b = apply_forget(A, lower, (1, 2, 3), (1, 3))
    # each side already connects 1 and 3; joining makes the 4-cycle
    joined = apply_join(A, a, b, (1, 3))
    assert joined is None or joined.reject


def test_join_connectivity_union_merge():
    A = make_automaton("connected:T=", 1)
    apart = base_class(A, tg([0, 1], []), (0, 1))
    together = base_class(A, tg([0, 1], [(0, 1)]), (0, 1))
    got = apply_join(A, apart, together, (0, 1))
    assert got == together


def test_accepting_examples():
    A = make_automaton("independent-set", 1)
    live = base_class(A, tg([0], []), (0,))
    assert accepting(A, live)
    assert not accepting(A, base_class(A, tg([0, 1], [(0, 1)]), (0, 1)))
    # colour automaton: the one non-accepting live class is the empty
    # trace set (no proper coloring survives)
    Q = make_automaton("colorable:q=2", 2)
    K3 = tg([0, 1, 2], [(0, 1), (0, 2), (1, 2)])
    dead = base_class(Q, K3, (0, 1, 2))
    assert not dead.reject and dead.payload == frozenset()
    assert not accepting(Q, dead)
    assert accepting(Q, base_class(Q, K3, ()))
    C = make_automaton("connected:T=0,1", 1)
    seen = base_class(C, tg([0, 1], [(0, 1)]), (0, 1))
    root = apply_forget(C, seen, (0, 1), ())
    assert accepting(C, root)


def test_semantic_examples():
    A = make_automaton("forest", 1)
    assert semantic_eval(A, C4, (0, 1, 2), (0, 1, 2))
    assert not semantic_eval(A, C4, (0, 1, 2, 3), (0, 1, 2, 3))
    P6 = gen_graph("path", n=6)
    M = make_automaton("packing:H=K2", 1)
    assert semantic_eval(M, P6, (0, 1, 3, 4), (0, 3))
    assert not semantic_eval(M, P6, (0, 1, 2), (0,))


def test_expression_p3():
    A = make_automaton("independent-set", 1)
    td = build_clique_tree(P3)
    expr = expression_from_tree_decomposition(P3, td)
    assert accepting(A, run_expression(A, expr, (0, 2)))
    assert not accepting(A, run_expression(A, expr, (0, 1)))


def test_expression_single_bag_k3():
    K3 = Graph(3, [(0, 1), (0, 2), (1, 2)])
    A = make_automaton("true", 2)
    td = build_clique_tree(K3)
    assert len(td.bags) == 1
    expr = expression_from_tree_decomposition(K3, td)
    assert accepting(A, run_expression(A, expr, (0, 2)))


def test_expression_star_edge_sets():
    from pmcsolve.automata import evaluate_expression

    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    td = build_clique_tree(star)
    expr = expression_from_tree_decomposition(star, td)
    built = evaluate_expression(expr)
    assert set(built.edges) == {(0, 1), (0, 2), (0, 3)}
    assert sorted(built.vertices) == [0, 1, 2, 3]


def test_run_expression_empty_base():
    for spec in ("true", "independent-set", "forest", "colorable:q=2",
                 "max-degree:d=1", "connected:T=", "packing:H=K2"):
        A = make_automaton(spec, 1)
        E0 = Graph(0, [])
        td = build_clique_tree(E0)
        expr = expression_from_tree_decomposition(E0, td)
        c = run_expression(A, expr, ())
        assert c is not None and not c.reject


def test_forest_reject_on_c4_expression():
    A = make_automaton("forest", 2)
    tds = subgraph_tree_decompositions(C4, (0, 1, 2, 3), limit=1)
    expr = expression_from_tree_decomposition(C4, tds[0])
    c = run_expression(A, expr, (0, 1, 2, 3))
    assert c.reject or not accepting(A, c)


def test_true_automaton_tracks_only_membership():
    A = make_automaton("true", 1)
    seen = set()
    for edges in ([], [(0, 1)]):
        for X in ((), (0,), (1,), (0, 1)):
            c = base_class(A, tg([0, 1], edges), X)
            seen.add((c.members, c.payload, c.reject))
    # one class per membership pattern, regardless of edges
    assert len(seen) == 4


def test_colorable_class_space_shape():
    """3-colour classes over a 2-terminal bag: each labeled terminal
    sits in one of the colour groups, so payloads are partitions of the
    labeled set into at most three groups."""
    A = make_automaton("colorable:q=3", 1)
    payloads = set()
    for edges in ([], [(0, 1)]):
        for X in ((), (0,), (1,), (0, 1)):
            c = base_class(A, tg([0, 1], edges), X)
            if not c.reject:
                payloads.add(c.payload)
    assert len(payloads) <= 5  # partitions of <=2 labeled ranks into <=3


def test_reject_absorbing():
    from pmcsolve.automata import compose_introduce, compose_join

    A = make_automaton("independent-set", 1)
    bad = base_class(A, tg([0, 1], [(0, 1)]), (0, 1))
    assert bad.reject
    assert apply_forget(A, bad, (0, 1), (0,)).reject
    assert compose_join(A, bad, bad).reject
    ok2 = base_class(A, tg([0, 1], []), (0, 1))
    assert compose_introduce(A, bad, ok2, (0, 1)).reject


def test_parse_property_spec():
    name, params = parse_property_spec("colorable:q=3")
    assert name == "colorable" and params == {"q": 3}
    name, params = parse_property_spec("connected:T=0,2,5")
    assert name == "connected" and params["T"] == (0, 2, 5)
    name, params = parse_property_spec("packing:H=K2+P3")
    assert name == "packing" and params["H_label"] == "K2+P3"
    assert [H.n for H in params["H"]] == [2, 3]
    with pytest.raises(GraphError):
        parse_property_spec("packing:H=Q7")
    with pytest.raises(GraphError):
        make_automaton("no-such-property", 1)


def test_aliases():
    assert make_automaton("connectivity:T=", 1).name == \
        make_automaton("connected:T=", 1).name
    assert make_automaton("independent", 0).name == \
        make_automaton("independent-set", 0).name


def test_integrity_small_sweep():
    """Acceptance == direct semantics, and the class is expression-
    independent, over random subgraph decompositions."""
    rng = random.Random(17)
    specs = ["independent-set", "forest", "true", "colorable:q=2",
             "max-degree:d=1", "packing:H=K2"]
    for _ in range(12):
        G = random_connected(rng, rng.randint(2, 6), 0.5)
        fverts = tuple(sorted(rng.sample(
            range(G.n), rng.randint(1, G.n))))
        tds = subgraph_tree_decompositions(G, fverts, limit=2)
        if not tds:
            continue
        wmax = max(max(td.width, 0) for td in tds)
        autos = [make_automaton(s, wmax) for s in specs]
        exprs = [
            (expression_from_tree_decomposition(G, td,
                                                vertices=fverts), td)
            for td in tds
        ]
        for size in range(len(fverts) + 1):
            for X in combinations(fverts, size):
                for A in autos:
                    want = semantic_eval(A, G, fverts, X)
                    for e, td in exprs:
                        c = run_expression(A, e, X)
                        ok = c is not None and not c.reject \
                            and accepting(A, c)
                        assert ok == want, (A.name, G.edges(), fverts, X)
                        if c is not None and not c.reject:
                            assert c.term(e.terminals) == tuple(
                                v for v in e.terminals if v in X)
