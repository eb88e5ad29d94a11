"""DP engine: table operations, full solves, witnesses, table dumps."""

import random

import pytest

from conftest import random_connected
from pmcsolve.graph import Graph, GraphError, gen_graph
from pmcsolve.triangulation import (
    BudgetExceeded,
    FullBlock,
    GoodTriple,
)
from pmcsolve.automata import TerminalGraph, base_class, make_automaton
from pmcsolve.engine import (
    DPKey,
    EngineError,
    ObjectiveValue,
    compute_alpha,
    compute_beta_base,
    compute_delta,
    compute_gamma_and_beta,
    dump_tables,
    reconstruct,
    solve,
    solve_exact_size,
)
from pmcsolve.oracle import brute_force_solve

P3 = Graph(3, [(0, 1), (1, 2)])
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
C5 = gen_graph("cycle", n=5)
STAR = gen_graph("star", n=4)  # 0 is the center

IS0 = make_automaton("independent-set", 0)
IS1 = make_automaton("independent-set", 1)


def empty_class(A):
    return base_class(A, TerminalGraph((), (), frozenset()), ())


def entry_with_members(table, wptuple, members):
    hits = [
        v for (wpt, cls), v in table.items()
        if wpt == wptuple and cls.members == members
    ]
    assert len(hits) == 1, (wptuple, members, table)
    return hits[0]


# -- single table operations --------------------------------------------


def test_beta_base_p3():
    tr = GoodTriple((1,), (0,), (0, 1))
    out = compute_beta_base(P3, tr, IS0)
    assert entry_with_members(out, (0,), 0b1) == 1
    assert entry_with_members(out, (), 0) == 0


def test_beta_base_annotated_rejection():
    tr = GoodTriple((1,), (0,), (0, 1))
    out = compute_beta_base(P3, tr, IS0, annotations=(0,))
    # W' = ∅ misses the annotated vertex inside Ω: no entry survives
    assert all(0 in wpt for (wpt, _c) in out)


def test_beta_base_requires_base_triple():
    with pytest.raises(GraphError):
        compute_beta_base(P3, GoodTriple((), (0, 1, 2), (0, 1)), IS0)


def test_delta_p3():
    tr = GoodTriple((), (0, 1, 2), (0, 1))
    alpha_entries = {((), empty_class(IS0)): 1}  # best inside ({b},{c})
    out = compute_delta(P3, tr, 1, IS0, alpha_entries)
    assert entry_with_members(out, (0,), 0b1) == 2
    assert entry_with_members(out, (), 0) == 1
    # W' = {b} forces W_i = {b}, which no alpha entry matches
    assert not any(wpt == (1,) for (wpt, _c) in out)


def test_delta_index_range():
    tr = GoodTriple((), (0, 1, 2), (0, 1))
    with pytest.raises(GraphError):
        compute_delta(P3, tr, 2, IS0, {})


def test_gamma_join_star():
    tr = GoodTriple((), (0, 1, 2, 3), (0, 1))
    ae = {((), empty_class(IS1)): 1}  # one hidden leaf picked
    d1 = compute_delta(STAR, tr, 1, IS1, ae)
    d2 = compute_delta(STAR, tr, 2, IS1, ae)
    beta = compute_gamma_and_beta(STAR, tr, IS1, [d1, d2])
    assert entry_with_members(beta, (1,), 0b1) == 3
    # the center is adjacent to both hidden leaves: taking it into X is
    # rejected by the automaton, not merely suboptimal
    assert not any(
        cls.members and 0 in wpt for (wpt, cls) in beta
    )


def test_gamma_single_component_is_delta():
    tr = GoodTriple((), (0, 1, 2), (0, 1))
    d1 = compute_delta(P3, tr, 1, IS0, {((), empty_class(IS0)): 1})
    assert compute_gamma_and_beta(P3, tr, IS0, [d1]) == d1


def test_alpha_forgets_to_separator():
    tr = GoodTriple((1,), (2,), (1, 2))
    base = compute_beta_base(P3, tr, IS0)
    entries = [(wpt, cls, val) for (wpt, cls), val in base.items()]
    out = compute_alpha(FullBlock((1,), (2,)), entries, IS0)
    assert entry_with_members(out, (), 0) == 1  # X={c}, forgotten
    assert entry_with_members(out, (1,), 0b1) == 1
    assert compute_alpha(FullBlock((1,), (2,)), [], IS0) == {}


def test_alpha_c4_forest_cell():
    sol = solve(C4, 1, "forest", collect_tables=True)
    cells = [
        (key, val)
        for key, val in sol.tables.alpha.items()
        if key.separator == (0, 2) and key.component == (1,)
        and key.W == (0,)
    ]
    assert cells
    best_key, best_val = max(cells, key=lambda kv: kv[1].value)
    assert best_val == 2
    F, X = reconstruct(sol.tables, best_key)
    assert F == (0, 1)


# -- full solves ---------------------------------------------------------


def test_solve_examples():
    assert solve(C5, 0, "independent-set").value == 2
    assert solve(C4, 1, "forest").value == 3
    got = solve(P3, 0, "independent-set", weights=[1, 5, 1])
    assert got.value == 5 and got.X == (1,) and got.F == (1,)


def test_reconstruct_roots():
    sol = solve(P3, 0, "independent-set", collect_tables=True)
    assert reconstruct(sol.tables, sol.root_key) == ((0, 2), (0, 2))
    sol = solve(STAR, 0, "independent-set", collect_tables=True)
    assert reconstruct(sol.tables, sol.root_key) == ((1, 2, 3), (1, 2, 3))


def test_reconstruct_absent_key():
    sol = solve(P3, 0, "independent-set", collect_tables=True)
    bogus = DPKey((0,), (1,), None, (), empty_class(IS0))
    with pytest.raises(EngineError):
        reconstruct(sol.tables, bogus)


def test_infeasible_solve():
    # forcing both endpoints of an edge into an independent set
    sol = solve(Graph(2, [(0, 1)]), 0, "independent-set",
                annotations=(0, 1), collect_tables=True)
    assert not sol.feasible and sol.value is None
    assert sol.F == () and sol.X == () and sol.root_key is None
    with pytest.raises(EngineError):
        reconstruct(sol.tables, sol.root_key)


def test_solve_min_mode():
    got = solve(C5, 0, "independent-set", mode="min")
    assert got.value == 0 and got.X == ()
    got = solve(P3, 0, "independent-set", mode="min",
                weights=[-2, 1, -3])
    assert got.value == -5 and got.X == (0, 2)


def test_annotations_force_membership():
    got = solve(P3, 1, "independent-set", annotations=(1,))
    assert 1 in got.F
    assert got.value == 2 and got.X == (0, 2)


def test_weighted_all_ones_matches_unweighted():
    rng = random.Random(5)
    for _ in range(6):
        G = random_connected(rng, rng.randint(2, 7), 0.45)
        a = solve(G, 1, "forest")
        b = solve(G, 1, "forest", weights=[1] * G.n)
        assert a.value == b.value and a.F == b.F and a.X == b.X


def test_solve_trivial_graphs():
    sol = solve(Graph(0, []), 0, "independent-set")
    assert sol.feasible and sol.value == 0 and sol.F == ()
    sol = solve(Graph(1, []), 0, "independent-set")
    assert sol.value == 1 and sol.X == (0,)


def test_solve_rejects_disconnected():
    with pytest.raises(GraphError):
        solve(Graph(2, []), 0, "independent-set")


def test_solve_budget():
    G = gen_graph("cycle", n=6)
    with pytest.raises(BudgetExceeded) as exc:
        solve(G, 1, "forest", budget_seps=3)
    assert exc.value.budget == 3


def test_exact_size_examples():
    got = solve_exact_size(C5, 0, "independent-set", 2)
    assert got.feasible and len(got.X) == 2
    assert not solve_exact_size(C5, 0, "independent-set", 3).feasible
    got = solve_exact_size(C4, 1, "forest", 0)
    assert got.feasible and got.F == () and got.X == ()
    with pytest.raises(GraphError):
        solve_exact_size(C5, 0, "independent-set", 6)


def test_exact_size_cycle_threshold():
    for n in (5, 6):
        G = gen_graph("cycle", n=n)
        for v in range(n + 1):
            got = solve_exact_size(G, 0, "independent-set", v)
            assert got.feasible == (v <= n // 2)
            if got.feasible:
                assert len(got.X) == v


def test_objective_value_comparisons():
    assert ObjectiveValue(3, "max") == 3
    assert ObjectiveValue(3, "max") == ObjectiveValue(3, "max")
    assert ObjectiveValue(3, "max") != ObjectiveValue(3, "min")
    assert hash(ObjectiveValue(2.0, "min")) == hash(ObjectiveValue(2.0, "min"))


# -- table integrity -----------------------------------------------------


def test_dump_tables_deterministic():
    a = solve(C4, 1, "forest", collect_tables=True)
    b = solve(C4, 1, "forest", collect_tables=True)
    la, lb = dump_tables(a.tables), dump_tables(b.tables)
    assert la == lb
    assert la == sorted(la) and len(la) == len(set(la))


def test_beta_base_entries_match_direct_evaluation():
    G = gen_graph("path", n=4)
    A = make_automaton("forest", 1)
    sol = solve(G, 1, A, collect_tables=True)
    checked = 0
    for key, val in sol.tables.beta.items():
        if key.omega is None:
            continue
        if set(key.omega) != set(key.separator) | set(key.component):
            continue
        tr = GoodTriple(key.separator, key.component, key.omega)
        direct = compute_beta_base(G, tr, A)
        assert direct[(key.W, key.cls)] == val.value
        checked += 1
    assert checked > 0


def test_stats_counters_populated():
    sol = solve(C4, 1, "forest")
    assert sol.stats.separators == 2 and sol.stats.pmcs == 4
    assert sol.stats.good_triples > 0 and sol.stats.dp_keys > 0
    assert sol.stats.ms >= 0


# -- oracle agreement sweep ---------------------------------------------


def test_solve_matches_oracle_sweep():
    rng = random.Random(99)
    configs = [
        ("independent-set", 0),
        ("forest", 1),
        ("colorable:q=2", 1),
        ("packing:H=K2", 1),
    ]
    runs = 0
    for _ in range(14):
        n = rng.randint(2, 7)
        G = random_connected(rng, n, 0.45)
        weights = None
        if rng.random() < 0.4:
            weights = [rng.randint(-3, 5) for _ in range(n)]
        mode = "min" if rng.random() < 0.25 else "max"
        for prop, t in configs:
            want = brute_force_solve(G, prop, t, mode, weights)
            got = solve(G, t, prop, mode, weights)
            assert got.feasible == want.feasible
            assert got.value == want.value
            assert got.F == want.F and got.X == want.X
            runs += 1
    assert runs >= 40
