"""Release gate: ten checks covering enumeration, the DP engine, the
property automata, the supporting lemma oracles, and the CLI.

Each test records one pass/fail line for the terminal summary and then
asserts, so a red run names the criterion that broke.
"""

import math
import random
import time
from itertools import combinations

from conftest import record_criterion, random_connected
from pmcsolve.cli import run
from pmcsolve.graph import gen_graph
from pmcsolve.triangulation import (
    enumerate_minimal_separators,
    enumerate_pmcs,
    pmc_count_bound,
)
from pmcsolve.oracle import (
    brute_force_pmcs,
    brute_force_separators,
    brute_force_solve,
    check_terminal_treewidth,
    check_triangulation_extension,
)
from pmcsolve.automata import (
    accepting,
    expr_forget,
    expression_from_tree_decomposition,
    make_automaton,
    run_expression,
    semantic_eval,
    subgraph_tree_decompositions,
)
from pmcsolve.engine import solve, solve_exact_size
from pmcsolve.problems import make_problem, solve_problem


def corpus_graphs():
    """The named-plus-random corpus shared by criteria 1 and 2."""
    named = []
    for n in range(3, 8):
        named.append((f"p{n}", gen_graph("path", n=n)))
        named.append((f"c{n}", gen_graph("cycle", n=n)))
    for n in range(2, 7):
        named.append((f"k{n}", gen_graph("complete", n=n)))
    for n in range(4, 8):
        named.append((f"star{n}", gen_graph("star", n=n)))
    named.append(("grid3x3", gen_graph("grid", rows=3, cols=3)))
    rng = random.Random(2024)
    rand = []
    for i in range(510):
        n = rng.randint(2, 7)
        p = rng.choice([0.2, 0.4, 0.6])
        rand.append((f"gnp{i}", random_connected(rng, n, p)))
    return named + rand


def test_criterion_01_separator_pmc_exactness():
    start = time.perf_counter()
    graphs = corpus_graphs()
    mismatches = 0
    for _name, G in graphs:
        if set(enumerate_minimal_separators(G)) != brute_force_separators(G):
            mismatches += 1
        if set(enumerate_pmcs(G)) != brute_force_pmcs(G):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 300
    detail = (f"{len(graphs)} graphs, {mismatches} mismatches, "
              f"{elapsed:.1f}s (limit 300s)")
    record_criterion(1, ok, detail)
    assert ok, detail


def test_criterion_02_count_bound():
    violations = 0
    graphs = corpus_graphs()
    for _name, G in graphs:
        seps = enumerate_minimal_separators(G)
        pmcs = enumerate_pmcs(G)
        if len(pmcs) > pmc_count_bound(G.n, len(seps)):
            violations += 1
    C4 = gen_graph("cycle", n=4)
    c4_ok = (len(enumerate_minimal_separators(C4)) == 2
             and len(enumerate_pmcs(C4)) == 4)
    ok = violations == 0 and c4_ok
    detail = (f"bound held on {len(graphs)} graphs, "
              f"{violations} violations; C4 counts "
              f"{'exact' if c4_ok else 'WRONG'}")
    record_criterion(2, ok, detail)
    assert ok, detail


def _engine_configs():
    return [
        ("independent-set", (0,)),
        ("forest", (1,)),
        ("true", (1, 2)),
        ("packing:H=K2", (1,)),
        ("packing:H=K3", (2,)),
        ("colorable:q=2", (1,)),
        ("max-degree:d=2", (2,)),
        ("connected", ()),  # t tracks |T|-1 per instance
    ]


def test_criterion_03_engine_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(303)
    per_config = 200
    mismatches = 0
    total = 0
    for prop, ts in _engine_configs():
        for i in range(per_config):
            n = rng.randint(3, 10)
            G = random_connected(rng, n, rng.choice([0.2, 0.4, 0.6]))
            mode = "max"
            if prop == "connected":
                k = rng.randint(1, 3)
                T = tuple(sorted(rng.sample(range(n), k)))
                label = "connected:T=" + ",".join(str(v) for v in T)
                t, mode, annotations = max(k - 1, 0), "min", T
            else:
                label, t, annotations = prop, ts[i % len(ts)], ()
            want = brute_force_solve(G, label, t, mode, None, annotations)
            got = solve(G, t, label, mode, None, annotations)
            total += 1
            if (got.feasible, got.value, got.F, got.X) != (
                    want.feasible, want.value, want.F, want.X):
                mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 1800
    detail = (f"{total} instances over {len(_engine_configs())} configs, "
              f"{mismatches} mismatches, {elapsed:.0f}s (limit 1800s)")
    record_criterion(3, ok, detail)
    assert ok, detail


def test_criterion_04_weighted_annotated():
    rng = random.Random(404)
    arms = [("independent-set", 0), ("forest", 1), ("colorable:q=2", 1)]
    w_runs = w_bad = 0
    for _ in range(105):
        prop, t = rng.choice(arms)
        n = rng.randint(3, 9)
        G = random_connected(rng, n, rng.choice([0.3, 0.5]))
        weights = [rng.randint(-3, 5) for _ in range(n)]
        mode = "min" if rng.random() < 0.3 else "max"
        want = brute_force_solve(G, prop, t, mode, weights)
        got = solve(G, t, prop, mode, weights)
        w_runs += 1
        if (got.feasible, got.value, got.F, got.X) != (
                want.feasible, want.value, want.F, want.X):
            w_bad += 1
    a_runs = a_bad = 0
    a_infeasible = 0
    for _ in range(105):
        prop, t = rng.choice(arms)
        n = rng.randint(3, 9)
        G = random_connected(rng, n, rng.choice([0.3, 0.5]))
        U = tuple(sorted(rng.sample(range(n), rng.randint(1, n // 2 + 1))))
        want = brute_force_solve(G, prop, t, "max", None, U)
        got = solve(G, t, prop, "max", None, U)
        a_runs += 1
        if not want.feasible:
            a_infeasible += 1
        if (got.feasible, got.value, got.F, got.X) != (
                want.feasible, want.value, want.F, want.X):
            a_bad += 1
    ok = w_bad == 0 and a_bad == 0 and w_runs >= 100 and a_runs >= 100
    detail = (f"{w_runs} weighted ({w_bad} bad), {a_runs} annotated "
              f"({a_bad} bad, {a_infeasible} infeasible matched)")
    record_criterion(4, ok, detail)
    assert ok, detail


def test_criterion_05_exact_size_cycles():
    bad = []
    for n in range(3, 9):
        G = gen_graph("cycle", n=n)
        for v in range(n + 1):
            got = solve_exact_size(G, 0, "independent-set", v)
            want = v <= n // 2
            if got.feasible != want or (got.feasible and len(got.X) != v):
                bad.append((n, v))
    ok = not bad
    detail = f"C3..C8, every v: {'all match' if ok else f'failures {bad}'}"
    record_criterion(5, ok, detail)
    assert ok, detail


def _automata_corpus():
    yield gen_graph("path", n=4)
    yield gen_graph("path", n=6)
    yield gen_graph("cycle", n=5)
    yield gen_graph("cycle", n=7)
    yield gen_graph("complete", n=4)
    yield gen_graph("star", n=6)
    yield gen_graph("grid", rows=2, cols=3)
    yield gen_graph("grid", rows=2, cols=4)
    yield gen_graph("gnp", n=7, p=0.4, seed=11)
    yield gen_graph("gnp", n=8, p=0.35, seed=12)


def test_criterion_06_automaton_integrity():
    """Exhaustive (F,X) for n <= 5, sampled above, two expressions per
    subgraph (second from a different triangulation, or an identity
    forget when only one decomposition exists)."""
    rng = random.Random(606)
    mismatches = 0
    checks = 0
    min_exprs = 99
    for G in _automata_corpus():
        n = G.n
        if n <= 5:
            fsets = [c for size in range(n + 1)
                     for c in combinations(range(n), size)]
        else:
            seen = {tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
                    for _ in range(14)}
            fsets = sorted(seen) + [tuple(range(n))]
        T = tuple(sorted({0, min(2, n - 1)}))
        tlabel = ",".join(str(v) for v in T)
        specs = [
            "independent-set", "forest", "true", "colorable:q=2",
            "max-degree:d=2", "packing:H=K2", "packing:H=K3",
            f"connected:T={tlabel}", f"k-in-a-tree:T={tlabel}",
        ]
        for F in fsets:
            tds = subgraph_tree_decompositions(G, F, limit=2)
            exprs = [
                expression_from_tree_decomposition(G, td, vertices=F)
                for td in tds
            ]
            if len(exprs) == 1:
                exprs.append(expr_forget(exprs[0], exprs[0].terminals))
            min_exprs = min(min_exprs, len(exprs))
            wmax = max(
                (max((len(b) for b in td.bags), default=1) for td in tds),
                default=1,
            ) - 1
            autos = [make_automaton(s, max(wmax, 1)) for s in specs]
            if len(F) <= 5:
                xs = [c for size in range(len(F) + 1)
                      for c in combinations(F, size)]
            else:
                pool = {tuple(sorted(rng.sample(F, rng.randint(0, len(F)))))
                        for _ in range(12)}
                xs = sorted(pool)
            for X in xs:
                for A in autos:
                    want = semantic_eval(A, G, F, X)
                    for e in exprs:
                        c = run_expression(A, e, X)
                        got = (c is not None and not c.reject
                               and accepting(A, c))
                        checks += 1
                        if got != want:
                            mismatches += 1
    ok = mismatches == 0 and min_exprs >= 2
    detail = (f"{checks} acceptance-vs-semantics checks, "
              f"{mismatches} mismatches, >= {min_exprs} expressions "
              "per subgraph")
    record_criterion(6, ok, detail)
    assert ok, detail


def test_criterion_07_terminal_treewidth_sweep():
    rng = random.Random(707)
    fails = 0
    trials = 320
    for _ in range(trials):
        n = rng.randint(3, 10)
        G = random_connected(rng, n, rng.choice([0.2, 0.4, 0.6]))
        T = tuple(sorted(rng.sample(range(n), rng.randint(1, min(4, n)))))
        if not check_terminal_treewidth(G, T).ok:
            fails += 1
    ok = fails == 0
    detail = f"{trials} (G,T) samples, {fails} failures"
    record_criterion(7, ok, detail)
    assert ok, detail


def test_criterion_08_triangulation_extension_sweep():
    rng = random.Random(808)
    fails = 0
    trials = 220
    for _ in range(trials):
        n = rng.randint(2, 7)
        G = random_connected(rng, n, rng.choice([0.2, 0.4, 0.6]))
        F = tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
        if not check_triangulation_extension(G, F).ok:
            fails += 1
    ok = fails == 0
    detail = f"{trials} (G,F) samples, {fails} failures"
    record_criterion(8, ok, detail)
    assert ok, detail


def test_criterion_09_interval_scaling():
    spec = make_problem("max-induced-forest")
    start = time.perf_counter()
    big = solve_problem(gen_graph("interval", n=60, seed=9), spec)
    elapsed = time.perf_counter() - start
    counts = []
    for n in (20, 40, 60):
        per_seed = []
        for s in (9, 10, 11):
            sol = solve_problem(gen_graph("interval", n=n, seed=s), spec)
            per_seed.append(max(sol.stats.pmcs, 1))
        counts.append(sum(per_seed) / len(per_seed))
    xs = [math.log(n) for n in (20, 40, 60)]
    ys = [math.log(c) for c in counts]
    xbar, ybar = sum(xs) / 3, sum(ys) / 3
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sum(
        (x - xbar) ** 2 for x in xs)
    ok = big.feasible and elapsed < 60 and slope <= 3
    detail = (f"n=60 solved in {elapsed:.2f}s (limit 60s); pmc counts "
              f"{[round(c, 1) for c in counts]} fit exponent "
              f"{slope:.2f} (limit 3)")
    record_criterion(9, ok, detail)
    assert ok, detail


def test_criterion_10_budget_robustness(capsys):
    code = run([
        "solve", "--problem", "forest", "--gen", "gnp:n=40,p=0.5",
        "--seed", "7", "--budget-pmcs", "10000",
    ])
    cap = capsys.readouterr()
    no_partial = cap.out.strip() == ""
    ok = code == 3 and no_partial
    detail = (f"exit code {code} (want 3), "
              f"stdout {'empty' if no_partial else 'NOT empty'}")
    record_criterion(10, ok, detail)
    assert ok, detail
