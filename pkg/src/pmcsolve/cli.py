"""Command-line interface.

Commands: solve (run a problem, JSON or text result), enumerate (list
minimal separators / potential maximal cliques / good triples), verify
(cross-check fast enumerators and the solver against brute force),
generate (emit test graphs), report (scaling sweep with CSV + figure).

All vertex ids on the command line and in output are 1-indexed; the
library uses 0-indexed ids internally.  Exit codes: 0 success, 2
problem infeasible, 3 enumeration budget exceeded, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace

from .graph import Graph, GraphError, format_pace, gen_graph, parse_graph
from .automata import parse_property_spec
from .engine import (
    DEFAULT_PMC_BUDGET,
    DEFAULT_SEPARATOR_BUDGET,
    ObjectiveValue,
)
from .problems import (
    ProblemSpec,
    check_class_caveats,
    make_problem,
    problem_catalog,
    solve_problem,
    _packing_t,
)
from .triangulation import (
    BudgetExceeded,
    enumerate_full_blocks,
    enumerate_good_triples,
    enumerate_minimal_separators,
    enumerate_pmcs,
)
from . import oracle

__all__ = ["RunConfig", "main", "run"]


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by every command."""

    command: str
    input: str | None
    gen: str | None
    problem: str | None
    budget_seps: int
    budget_pmcs: int
    fmt: str
    seed: int
    threads: int


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; our contract reserves 2 for
    infeasible problems, so parse failures are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def _id_list(text: str) -> tuple[int, ...]:
    """Comma-separated 1-indexed vertex ids -> sorted 0-indexed tuple."""
    if not text.strip():
        return ()
    out = []
    for piece in text.split(","):
        v = int(piece)
        if v < 1:
            raise argparse.ArgumentTypeError(
                "vertex ids are 1-indexed and positive")
        out.append(v - 1)
    return tuple(sorted(set(out)))


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(piece) for piece in text.split(",") if piece.strip())


def _to1(vertices) -> list[int]:
    return [v + 1 for v in vertices]


def build_parser() -> _Parser:
    top = _Parser(
        prog="pmcsolve",
        description="Optimal bounded-treewidth induced subgraphs via "
                    "minimal separators and potential maximal cliques.",
        epilog="PMCSOLVE_THREADS caps worker parallelism (the current "
               "engine is sequential, which always satisfies the cap).",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("--input", help="graph file (pace-gr or edge list)")
        p.add_argument("--gen", help="generator spec, e.g. gnp:n=20,p=0.3")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for --gen graphs")

    def add_budgets(p):
        p.add_argument("--budget-seps", type=_positive,
                       default=DEFAULT_SEPARATOR_BUDGET,
                       help="abort after this many minimal separators")
        p.add_argument("--budget-pmcs", type=_positive,
                       default=DEFAULT_PMC_BUDGET,
                       help="abort after this many candidate cliques")

    ps = sub.add_parser("solve", help="solve a catalog problem")
    add_input(ps)
    add_budgets(ps)
    ps.add_argument("--problem", required=True,
                    help="catalog name (max-induced-forest) or property "
                         "family (forest, colorable:q=2, ...)")
    ps.add_argument("--t", type=int, help="override the treewidth bound")
    ps.add_argument("--terminals", type=_id_list, default=(),
                    help="comma-separated 1-indexed terminal vertices")
    ps.add_argument("--annotate", type=_id_list, default=(),
                    help="vertices that every solution must contain")
    ps.add_argument("--mode", choices=("max", "min"),
                    help="optimize direction (default per problem)")
    ps.add_argument("--weights-file",
                    help="file of '<vertex> <weight>' lines, 1-indexed; "
                         "unlisted vertices weigh 1")
    ps.add_argument("--format", choices=("json", "text"), default="json")

    pe = sub.add_parser("enumerate", help="list decomposition structures")
    add_input(pe)
    add_budgets(pe)
    which = pe.add_mutually_exclusive_group(required=True)
    which.add_argument("--separators", action="store_true")
    which.add_argument("--pmcs", action="store_true")
    which.add_argument("--triples", action="store_true")
    pe.add_argument("--stats", action="store_true",
                    help="print counts and the enumeration bound check "
                         "instead of the listing")

    pv = sub.add_parser("verify", help="cross-check against brute force")
    pv.add_argument("--lemma",
                    choices=("all", "separators", "pmcs", "solve",
                             "terminal-tw", "triangulation-extension"),
                    default="all")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--trials", type=_positive, default=4,
                    help="random graphs per size bucket")

    pg = sub.add_parser("generate", help="emit a test graph")
    pg.add_argument("--kind", required=True,
                    help="path|cycle|complete|star|grid|gnp|k-tree|interval")
    pg.add_argument("--n", type=int)
    pg.add_argument("--p", type=float)
    pg.add_argument("--rows", type=int)
    pg.add_argument("--cols", type=int)
    pg.add_argument("--k", type=int)
    pg.add_argument("--length", type=float)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out", help="output path (default stdout)")

    pr = sub.add_parser("report", help="scaling sweep: CSV plus figure")
    add_budgets(pr)
    pr.add_argument("--problem", default="forest")
    pr.add_argument("--t", type=int)
    pr.add_argument("--kind", default="interval")
    pr.add_argument("--p", type=float)
    pr.add_argument("--sizes", type=_int_list, default=(10, 20, 30, 40))
    pr.add_argument("--per-size", type=_positive, default=3)
    pr.add_argument("--seed", type=int, default=1)
    pr.add_argument("--out-dir", required=True)
    return top


def _config_from(args) -> RunConfig:
    threads = 1
    raw = os.environ.get("PMCSOLVE_THREADS")
    if raw is not None:
        try:
            threads = int(raw)
        except ValueError:
            raise GraphError(f"PMCSOLVE_THREADS must be an integer, "
                             f"got {raw!r}")
        if threads < 1:
            raise GraphError("PMCSOLVE_THREADS must be at least 1")
    needs_graph = args.command in ("solve", "enumerate")
    inp = getattr(args, "input", None)
    gen = getattr(args, "gen", None)
    if needs_graph and bool(inp) == bool(gen):
        raise GraphError("exactly one of --input and --gen is required")
    return RunConfig(
        command=args.command,
        input=inp,
        gen=gen,
        problem=getattr(args, "problem", None),
        budget_seps=getattr(args, "budget_seps", DEFAULT_SEPARATOR_BUDGET),
        budget_pmcs=getattr(args, "budget_pmcs", DEFAULT_PMC_BUDGET),
        fmt=getattr(args, "format", "json"),
        seed=getattr(args, "seed", 0),
        threads=threads,
    )


def _load_graph(cfg: RunConfig) -> Graph:
    if cfg.input is not None:
        with open(cfg.input) as fh:
            return parse_graph(fh.read())
    kind, _, rest = cfg.gen.partition(":")
    params: dict = {}
    for piece in rest.split(","):
        if not piece.strip():
            continue
        if "=" not in piece:
            raise GraphError(f"malformed generator parameter {piece!r}")
        key, val = piece.split("=", 1)
        key = key.strip()
        try:
            params[key] = int(val)
        except ValueError:
            params[key] = float(val)
    return gen_graph(kind.strip(), seed=cfg.seed, **params)


_FAMILY_T = {
    "independent-set": lambda p, T: 0,
    "forest": lambda p, T: 1,
    "true": lambda p, T: p.get("t", 2),
    "colorable": lambda p, T: p.get("q", 2) - 1,
    "max-degree": lambda p, T: p.get("d", 2),
    "connected": lambda p, T: max(len(T) - 1, 0),
    "k-in-a-tree": lambda p, T: 1,
}


def resolve_problem(label: str, *, t=None, terminals=(), annotate=(),
                    mode=None, weights=None) -> ProblemSpec:
    """Build a ProblemSpec from a CLI problem label.

    Catalog names take their published defaults; property-family labels
    (forest, colorable:q=3, packing:H=K2+P3, ...) assemble a spec with
    the family's treewidth guarantee.  Terminal lists ride in
    --terminals, never inside the label, so the ids stay 1-indexed in
    exactly one place.
    """
    catalog = {p.name for p in problem_catalog()} | {"independent-packing"}
    if label in catalog:
        kwargs: dict = {}
        if label == "max-induced-treewidth-t" and t is not None:
            kwargs["t"] = t
        if label in ("k-in-a-tree", "min-connected-subgraph"):
            kwargs["terminals"] = terminals
        spec = make_problem(label, **kwargs)
    else:
        family, params = parse_property_spec(label)
        if "T" in params:
            raise GraphError(
                "pass terminals via --terminals, not inside the label")
        if family == "packing":
            tt = _packing_t(params["H_label"])
        else:
            rule = _FAMILY_T.get(family)
            if rule is None:
                raise GraphError(f"unknown problem {label!r}")
            tt = rule(params, terminals)
        prop = label if family not in ("connected", "k-in-a-tree", "true") \
            else family
        spec = ProblemSpec(
            label, tt, prop,
            mode="min" if family == "connected" else "max",
            terminals=terminals,
            annotations=terminals
            if family in ("connected", "k-in-a-tree") else (),
            component_decomposable=family not in ("connected",
                                                  "k-in-a-tree"),
        )
    if t is not None:
        spec = replace(spec, t=t)
    if mode is not None:
        spec = replace(spec, mode=mode)
    if annotate:
        spec = replace(spec, annotations=tuple(
            sorted(set(spec.annotations) | set(annotate))))
    if weights is not None:
        spec = replace(spec, weights=tuple(weights))
    return spec


def _read_weights(path: str, n: int) -> list:
    weights: list = [1] * n
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(
                    f"{path}:{lineno}: expected '<vertex> <weight>'")
            v = int(parts[0])
            if not 1 <= v <= n:
                raise GraphError(f"{path}:{lineno}: vertex {v} out of "
                                 f"range 1..{n}")
            try:
                w: int | float = int(parts[1])
            except ValueError:
                w = float(parts[1])
            weights[v - 1] = w
    return weights


def _num(val):
    if isinstance(val, ObjectiveValue):
        return val.value
    return val


def cmd_solve(cfg: RunConfig, args) -> int:
    G = _load_graph(cfg)
    weights = None
    if args.weights_file:
        weights = _read_weights(args.weights_file, G.n)
    spec = resolve_problem(args.problem, t=args.t, terminals=args.terminals,
                           annotate=args.annotate, mode=args.mode,
                           weights=weights)
    for warning in check_class_caveats(G, spec):
        print(f"warning: {warning}", file=sys.stderr)
    sol = solve_problem(G, spec, budget_seps=cfg.budget_seps,
                        budget_pmcs=cfg.budget_pmcs)
    stats = {
        "separators": sol.stats.separators,
        "pmcs": sol.stats.pmcs,
        "good_triples": sol.stats.good_triples,
        "dp_keys": sol.stats.dp_keys,
        "ms": sol.stats.ms,
    }
    payload = {
        "problem": args.problem,
        "n": G.n,
        "m": G.m,
        "value": _num(sol.value),
        "F": _to1(sol.F),
        "X": _to1(sol.X),
        "feasible": sol.feasible,
        "stats": stats,
    }
    if cfg.fmt == "json":
        print(json.dumps(payload))
    else:
        for key in ("problem", "n", "m", "value"):
            print(f"{key}: {payload[key]}")
        print("F: " + ",".join(str(v) for v in payload["F"]))
        print("X: " + ",".join(str(v) for v in payload["X"]))
        print(f"feasible: {'true' if sol.feasible else 'false'}")
        print("stats: " + " ".join(f"{k}={v}" for k, v in stats.items()))
    return 0 if sol.feasible else 2


def cmd_enumerate(cfg: RunConfig, args) -> int:
    G = _load_graph(cfg)
    seps = enumerate_minimal_separators(G, budget=cfg.budget_seps)
    if args.separators and not args.stats:
        for S in sorted(seps):
            print(" ".join(str(v) for v in _to1(S)))
        return 0
    pmcs = enumerate_pmcs(G, seps, budget=cfg.budget_pmcs)
    if args.pmcs and not args.stats:
        for P in sorted(pmcs):
            print(" ".join(str(v) for v in _to1(P)))
        return 0
    blocks = enumerate_full_blocks(G, seps)
    triples = enumerate_good_triples(G, blocks, pmcs)
    if args.triples and not args.stats:
        def side(S):
            return " ".join(str(v) for v in _to1(S)) if S else "-"
        for tr in sorted(
                (tr.separator, tr.component, tr.pmc) for tr in triples):
            print("|".join(side(part) for part in tr))
        return 0
    s, p = len(seps), len(pmcs)
    bound = G.n * s * s + G.n * s + 1
    print(f"separators: {s}")
    print(f"pmcs: {p}")
    print(f"good_triples: {len(triples)}")
    print(f"{p} ≤ {bound}: {'ok' if p <= bound else 'VIOLATED'}")
    return 0 if p <= bound else 1


def _verify_corpus(seed: int, trials: int):
    yield "path6", gen_graph("path", n=6)
    yield "cycle6", gen_graph("cycle", n=6)
    yield "complete5", gen_graph("complete", n=5)
    yield "star6", gen_graph("star", n=6)
    yield "grid2x3", gen_graph("grid", rows=2, cols=3)
    for n in (5, 6, 7):
        for i in range(trials):
            s = seed * 10007 + n * 101 + i
            while True:
                G = gen_graph("gnp", seed=s, n=n, p=0.4)
                if G.is_connected_mask(G.full_mask):
                    break
                s += 7919
            yield f"gnp(n={n},p=0.4,seed={s})", G


def cmd_verify(cfg: RunConfig, args) -> int:
    import random

    from .oracle import OracleReport

    failed = False

    def emit(check, label, G, report):
        nonlocal failed
        if not report.ok:
            failed = True
        print(json.dumps({
            "check": check,
            "graph": label,
            "n": G.n,
            "ok": report.ok,
            "samples": report.samples,
            "detail": report.detail,
        }))

    want = args.lemma
    for label, G in _verify_corpus(args.seed, args.trials):
        if want in ("all", "separators"):
            fast = set(enumerate_minimal_separators(G))
            slow = oracle.brute_force_separators(G)
            emit("separators", label, G, OracleReport(
                fast == slow, len(slow),
                "" if fast == slow else "enumerator disagrees"))
        if want in ("all", "pmcs"):
            fast = set(enumerate_pmcs(G))
            slow = oracle.brute_force_pmcs(G)
            emit("pmcs", label, G, OracleReport(
                fast == slow, len(slow),
                "" if fast == slow else "enumerator disagrees"))
        if want in ("all", "solve"):
            for prob in ("max-independent-set", "max-induced-forest",
                         "induced-matching"):
                spec = make_problem(prob)
                got = solve_problem(G, spec)
                ref = oracle.brute_force_solve(G, spec.automaton, spec.t)
                ok = (got.feasible == ref.feasible
                      and got.value == ref.value
                      and got.F == ref.F and got.X == ref.X)
                emit(f"solve:{prob}", label, G, OracleReport(
                    ok, 1, "" if ok else
                    f"engine {_num(got.value)}{got.F} vs "
                    f"oracle {ref.value}{ref.F}"))
        if want in ("all", "terminal-tw") and G.n <= 8:
            rng = random.Random(args.seed * 31 + G.n)
            T = tuple(sorted(rng.sample(range(G.n), min(3, G.n))))
            emit("terminal-tw", label, G,
                 oracle.check_terminal_treewidth(G, T))
        if want in ("all", "triangulation-extension") and G.n <= 7:
            rng = random.Random(args.seed * 37 + G.n)
            F = tuple(sorted(rng.sample(range(G.n),
                                        max(G.n - 2, min(G.n, 3)))))
            emit("triangulation-extension", label, G,
                 oracle.check_triangulation_extension(G, F))
    return 1 if failed else 0


def cmd_generate(cfg: RunConfig, args) -> int:
    params = {}
    for key in ("n", "p", "rows", "cols", "k", "length"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    G = gen_graph(args.kind, seed=args.seed, **params)
    text = format_pace(G)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(cfg: RunConfig, args) -> int:
    from .report import scaling_study

    spec = resolve_problem(args.problem, t=args.t)
    gen_params = {} if args.p is None else {"p": args.p}
    result = scaling_study(
        spec, args.kind, args.sizes, args.per_size, args.seed,
        args.out_dir, gen_params=gen_params,
        budget_seps=cfg.budget_seps, budget_pmcs=cfg.budget_pmcs)
    print(f"wrote {result['csv']}")
    print(f"wrote {result['png']}")
    print(f"fitted exponent: {result['exponent']:.2f}")
    return 0


_COMMANDS = {
    "solve": cmd_solve,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "generate": cmd_generate,
    "report": cmd_report,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports errors by exiting
        return int(exc.code or 0)
    try:
        cfg = _config_from(args)
        return _COMMANDS[args.command](cfg, args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
