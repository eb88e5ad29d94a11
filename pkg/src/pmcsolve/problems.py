"""Named-problem catalog and dispatch.

Each catalog entry packages a property automaton with the treewidth
bound that makes the solver exact for it: the optimum of the named
problem is guaranteed (or, for the two class-premised entries,
expected) to induce a subgraph of treewidth at most ``t``.  The
dispatcher splits disconnected inputs into connected components before
handing them to the solver, which only accepts connected graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .graph import Graph, GraphError, bits, induced_subgraph, mask_of
from .automata import make_automaton, parse_property_spec, semantic_eval
from .engine import (
    DEFAULT_PMC_BUDGET,
    DEFAULT_SEPARATOR_BUDGET,
    ObjectiveValue,
    Solution,
    SolveStats,
    solve,
)
from .triangulation import exact_treewidth_small

__all__ = [
    "ProblemSpec",
    "problem_catalog",
    "make_problem",
    "solve_problem",
    "check_class_caveats",
]

# Property families whose automaton takes a terminal list.
_TERMINAL_FAMILIES = ("connected", "k-in-a-tree")


@dataclass(frozen=True)
class ProblemSpec:
    """A ready-to-run problem: automaton family plus solver parameters.

    ``automaton`` holds the property string without any terminal list;
    terminals are kept separate so they can be renumbered when the
    dispatcher routes the run to a single connected component.
    ``component_decomposable`` declares that an optimal solution splits
    into independent per-component optima, which is what licenses
    solving a disconnected input one component at a time and summing.
    """

    name: str
    t: int
    automaton: str
    mode: str = "max"
    weights: tuple | None = None
    annotations: tuple[int, ...] = ()
    terminals: tuple[int, ...] = ()
    component_decomposable: bool = True


def _family(prop: str) -> str:
    name, _ = parse_property_spec(prop.partition(":")[0])
    return name


def _property_string(spec: ProblemSpec, terminals=None) -> str:
    """Render the automaton spec, appending terminals where they belong."""
    base = spec.automaton
    if _family(base) not in _TERMINAL_FAMILIES:
        return base
    T = spec.terminals if terminals is None else terminals
    tail = "T=" + ",".join(str(v) for v in T)
    return base + ("," if ":" in base else ":") + tail


def _packing_t(label: str) -> int:
    """Treewidth bound for a packing family: the largest pattern treewidth."""
    _, params = parse_property_spec("packing:H=" + label)
    return max(exact_treewidth_small(P) for P in params["H"])


def problem_catalog() -> list[ProblemSpec]:
    """The built-in problems, each with its treewidth guarantee.

    Entries with free parameters (t, q, d, H, terminals) appear with
    representative defaults; use make_problem to instantiate others.
    """
    return [
        ProblemSpec("max-independent-set", 0, "independent-set"),
        ProblemSpec("max-induced-forest", 1, "forest"),
        ProblemSpec("max-induced-treewidth-t", 2, "true"),
        ProblemSpec("max-q-colorable-subgraph", 1, "colorable:q=2"),
        ProblemSpec("max-degree-d-subgraph", 2, "max-degree:d=2"),
        ProblemSpec("induced-matching", _packing_t("K2"), "packing:H=K2"),
        ProblemSpec("triangle-packing", _packing_t("K3"), "packing:H=K3"),
        ProblemSpec("k-in-a-tree", 1, "k-in-a-tree",
                    component_decomposable=False),
        ProblemSpec("min-connected-subgraph", 0, "connected", mode="min",
                    component_decomposable=False),
    ]


def make_problem(
    name: str,
    *,
    t: int | None = None,
    q: int | None = None,
    d: int | None = None,
    H: str | None = None,
    terminals: tuple[int, ...] = (),
    weights=None,
) -> ProblemSpec:
    """Instantiate a catalog problem with concrete parameters.

    Unknown names raise GraphError listing the catalog.  Parameters not
    used by the chosen problem are rejected rather than ignored.
    """
    terminals = tuple(sorted(set(terminals)))
    w = None if weights is None else tuple(weights)
    used: dict[str, object] = {}
    if t is not None:
        used["t"] = t
    if q is not None:
        used["q"] = q
    if d is not None:
        used["d"] = d
    if H is not None:
        used["H"] = H
    if terminals:
        used["terminals"] = terminals

    def accept(*keys):
        extra = set(used) - set(keys)
        if extra:
            raise GraphError(
                f"problem {name!r} does not take parameters "
                f"{sorted(extra)}")

    if name == "max-independent-set":
        accept()
        spec = ProblemSpec(name, 0, "independent-set")
    elif name == "max-induced-forest":
        accept()
        spec = ProblemSpec(name, 1, "forest")
    elif name == "max-induced-treewidth-t":
        accept("t")
        tt = 2 if t is None else t
        if tt < 0:
            raise GraphError("treewidth bound t must be nonnegative")
        spec = ProblemSpec(name, tt, "true")
    elif name == "max-q-colorable-subgraph":
        accept("q")
        qq = 2 if q is None else q
        if qq < 1:
            raise GraphError("colour count q must be at least 1")
        spec = ProblemSpec(name, qq - 1, f"colorable:q={qq}")
    elif name == "max-degree-d-subgraph":
        accept("d")
        dd = 2 if d is None else d
        if dd < 0:
            raise GraphError("degree bound d must be nonnegative")
        spec = ProblemSpec(name, dd, f"max-degree:d={dd}")
    elif name == "induced-matching":
        accept()
        spec = ProblemSpec(name, _packing_t("K2"), "packing:H=K2")
    elif name == "triangle-packing":
        accept()
        spec = ProblemSpec(name, _packing_t("K3"), "packing:H=K3")
    elif name == "independent-packing":
        accept("H")
        label = "K2" if H is None else H
        spec = ProblemSpec(name, _packing_t(label), f"packing:H={label}")
    elif name == "k-in-a-tree":
        accept("terminals")
        spec = ProblemSpec(name, 1, "k-in-a-tree",
                           annotations=terminals, terminals=terminals,
                           component_decomposable=False)
    elif name == "min-connected-subgraph":
        accept("terminals")
        spec = ProblemSpec(name, max(len(terminals) - 1, 0), "connected",
                           mode="min", annotations=terminals,
                           terminals=terminals,
                           component_decomposable=False)
    else:
        names = ", ".join(p.name for p in problem_catalog())
        raise GraphError(
            f"unknown problem {name!r}; catalog: {names}, "
            "independent-packing")
    if w is not None:
        spec = replace(spec, weights=w)
    return spec


def _is_chordal(G: Graph) -> bool:
    """Chordality via greedy simplicial elimination."""
    alive = G.full_mask
    while alive:
        for v in bits(alive):
            nb = G.adj_mask[v] & alive & ~(1 << v)
            if all(G.adj_mask[u] & nb == nb & ~(1 << u) for u in bits(nb)):
                alive &= ~(1 << v)
                break
        else:
            return False
    return True


def check_class_caveats(G: Graph, spec: ProblemSpec) -> list[str]:
    """Warnings for entries whose treewidth bound rests on a premise.

    Warnings never block a run; they record when the reported optimum
    is only guaranteed among solutions inducing treewidth <= t.
    """
    out: list[str] = []
    family = _family(spec.automaton)
    if family == "colorable" and not _is_chordal(G):
        _, params = parse_property_spec(spec.automaton)
        q = params.get("q", 2)
        out.append(
            f"t={spec.t} assumes an optimal {q}-colorable subgraph of "
            "treewidth <= q-1; that holds on chordal inputs but this "
            "graph is not chordal, so the result is a lower bound")
    if family == "max-degree":
        _, params = parse_property_spec(spec.automaton)
        if params.get("d", 0) >= 3:
            out.append(
                f"subgraphs of maximum degree {params['d']} can have "
                f"treewidth above t={spec.t}; the result only covers "
                "solutions within the bound")
    if family == "connected" and spec.mode == "min" and spec.weights \
            and any(w < 0 for w in spec.weights):
        out.append(
            "negative weights can make the cheapest connected subgraph "
            "non-minimal, where the treewidth bound t=|T|-1 no longer "
            "applies; the result covers solutions within the bound")
    return out


def _num(val) -> float:
    """Numeric payload of a solution value."""
    return val.value if isinstance(val, ObjectiveValue) else val


def _zero_stats() -> SolveStats:
    return SolveStats(0, 0, 0, 0, 0)


def _add_stats(a: SolveStats, b: SolveStats) -> SolveStats:
    return SolveStats(
        a.separators + b.separators,
        a.pmcs + b.pmcs,
        a.good_triples + b.good_triples,
        a.dp_keys + b.dp_keys,
        a.ms + b.ms,
    )


def _component_run(G, spec, cmask, weights, budget_seps, budget_pmcs):
    """Solve one connected component, returning a global-id solution."""
    verts = [v for v in bits(cmask)]
    H, old = induced_subgraph(G, verts)
    back = {i: old[i] for i in range(len(old))}
    fwd = {v: i for i, v in back.items()}
    w = None if weights is None else [weights[back[i]] for i in range(H.n)]
    U = tuple(sorted(fwd[v] for v in spec.annotations if v in fwd))
    T = tuple(sorted(fwd[v] for v in spec.terminals if v in fwd))
    prop = _property_string(spec, terminals=T)
    sol = solve(H, spec.t, prop, mode=spec.mode, weights=w, annotations=U,
                budget_seps=budget_seps, budget_pmcs=budget_pmcs)
    if not sol.feasible:
        return sol
    F = tuple(sorted(back[v] for v in sol.F))
    X = tuple(sorted(back[v] for v in sol.X))
    return Solution(True, sol.value, F, X, sol.stats)


def solve_problem(
    G: Graph,
    spec: ProblemSpec,
    *,
    weights=None,
    budget_seps: int = DEFAULT_SEPARATOR_BUDGET,
    budget_pmcs: int = DEFAULT_PMC_BUDGET,
    collect_tables: bool = False,
) -> Solution:
    """Run a catalog problem on any graph, connected or not.

    Decomposable entries are solved per component and summed; an
    optimal solution restricted to a component is optimal there, so the
    sum of per-component optima is the global optimum and the witness
    unions keep the smallest-bitmask tie-break componentwise.
    Connectivity-style entries run inside the component holding all
    terminals (infeasible when the terminals straddle components), or
    pick the best single component when no terminals are given.
    """
    for v in spec.terminals:
        if not 0 <= v < G.n:
            raise GraphError(f"terminal {v} out of range for n={G.n}")
    wts = spec.weights if weights is None else weights
    if wts is not None and len(wts) != G.n:
        raise GraphError("weights must list one value per vertex")

    comps = G.component_masks()
    if len(comps) <= 1:
        prop = _property_string(spec)
        return solve(G, spec.t, prop, mode=spec.mode, weights=wts,
                     annotations=spec.annotations, budget_seps=budget_seps,
                     budget_pmcs=budget_pmcs, collect_tables=collect_tables)
    if collect_tables:
        raise GraphError(
            "table collection needs a connected graph; solve components "
            "separately to inspect their tables")

    if spec.component_decomposable:
        total = 0
        F: list[int] = []
        X: list[int] = []
        stats = _zero_stats()
        feasible = True
        for cmask in comps:
            sol = _component_run(G, spec, cmask, wts,
                                 budget_seps, budget_pmcs)
            stats = _add_stats(stats, sol.stats)
            if not sol.feasible:
                feasible = False
                continue
            total += _num(sol.value)
            F.extend(sol.F)
            X.extend(sol.X)
        if not feasible:
            return Solution(False, None, (), (), stats)
        F_t, X_t = tuple(sorted(F)), tuple(sorted(X))
        A = make_automaton(_property_string(spec), spec.t)
        if not semantic_eval(A, G, F_t, X_t):
            raise GraphError(
                "combined per-component witness fails the property check")
        return Solution(True, ObjectiveValue(total, spec.mode), F_t, X_t,
                        stats)

    # Connectivity-style: the witness lives inside one component.
    tmask = mask_of(spec.terminals)
    if tmask:
        home = [c for c in comps if c & tmask]
        if len(home) > 1 or tmask & ~home[0]:
            return Solution(False, None, (), (), _zero_stats())
        return _component_run(G, spec, home[0], wts,
                              budget_seps, budget_pmcs)
    best = None
    stats = _zero_stats()
    minimize = spec.mode == "min"
    for cmask in comps:
        sol = _component_run(G, spec, cmask, wts, budget_seps, budget_pmcs)
        stats = _add_stats(stats, sol.stats)
        if not sol.feasible:
            continue
        key = (_num(sol.value), mask_of(sol.F), mask_of(sol.X))
        if best is None:
            best = (key, sol)
        else:
            better = key[0] < best[0][0] if minimize else key[0] > best[0][0]
            if key[0] == best[0][0]:
                better = key[1:] < best[0][1:]
            if better:
                best = (key, sol)
    if best is None:
        return Solution(False, None, (), (), stats)
    return Solution(True, best[1].value, best[1].F, best[1].X, stats)
