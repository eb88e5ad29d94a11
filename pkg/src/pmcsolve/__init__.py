"""Induced subgraphs of bounded treewidth with regular subset properties."""

from .graph import (
    Graph,
    GraphError,
    connected_components,
    gen_graph,
    induced_subgraph,
    is_clique,
    neighborhood,
    parse_graph,
)
from .triangulation import (
    BudgetExceeded,
    FullBlock,
    GoodTriple,
    component_blocks,
    enumerate_full_blocks,
    enumerate_good_triples,
    enumerate_minimal_separators,
    enumerate_pmcs,
    exact_treewidth_small,
    is_minimal_separator,
    is_pmc,
    minimal_triangulations_small,
)
from .automata import (
    Automaton,
    HClass,
    accepting,
    apply_forget,
    apply_introduce,
    apply_join,
    base_class,
    make_automaton,
    parse_property_spec,
    semantic_eval,
)
from .engine import (
    DPKey,
    DPTables,
    EngineError,
    ObjectiveValue,
    Solution,
    SolveStats,
    dump_tables,
    reconstruct,
    solve,
    solve_exact_size,
)
from .problems import (
    ProblemSpec,
    check_class_caveats,
    make_problem,
    problem_catalog,
    solve_problem,
)

__all__ = [
    "Automaton",
    "BudgetExceeded",
    "DPKey",
    "DPTables",
    "EngineError",
    "FullBlock",
    "GoodTriple",
    "Graph",
    "GraphError",
    "HClass",
    "ObjectiveValue",
    "ProblemSpec",
    "Solution",
    "SolveStats",
    "accepting",
    "apply_forget",
    "apply_introduce",
    "apply_join",
    "base_class",
    "check_class_caveats",
    "component_blocks",
    "connected_components",
    "dump_tables",
    "enumerate_full_blocks",
    "enumerate_good_triples",
    "enumerate_minimal_separators",
    "enumerate_pmcs",
    "exact_treewidth_small",
    "gen_graph",
    "induced_subgraph",
    "is_clique",
    "is_minimal_separator",
    "is_pmc",
    "make_automaton",
    "make_problem",
    "minimal_triangulations_small",
    "neighborhood",
    "parse_graph",
    "parse_property_spec",
    "problem_catalog",
    "reconstruct",
    "semantic_eval",
    "solve",
    "solve_exact_size",
    "solve_problem",
]

__version__ = "0.1.0"
