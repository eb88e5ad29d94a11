"""Dynamic programming over full blocks and good triples.

The solver finds X ⊆ F ⊆ V(G) with G[F] of treewidth at most t, a
pluggable vertex-subset property holding on (G[F], X), and X of optimal
total weight. Partial solutions are summarized per full block (S, C) in
a table alpha and per good triple (S, C, Ω) in a table beta; blocks are
processed smallest first, so every lookup hits a finished table.

Each stored value carries a witness (the F and X bitmasks of one optimal
partial solution) and a provenance record naming the entries it was
combined from, so reconstruction just replays records. Ties are broken
toward the smallest F bitmask, then the smallest X bitmask. That order
is preserved by every combination step — the two sides of a combine
overlap exactly in the fixed terminal set, so OR-ing a fixed mask onto
both candidates never reverses the comparison — which makes the local
choice globally right and the result independent of enumeration order.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass
from itertools import combinations

from .automata import (
    Automaton,
    HClass,
    apply_forget,
    apply_introduce,
    apply_join,
    make_automaton,
    semantic_eval,
)
from .graph import (
    Graph,
    GraphError,
    bits,
    induced_subgraph,
    mask_of,
    tuple_of,
)
from .triangulation import (
    DEFAULT_PMC_BUDGET,
    DEFAULT_SEPARATOR_BUDGET,
    FullBlock,
    GoodTriple,
    component_blocks,
    enumerate_full_blocks,
    enumerate_good_triples,
    enumerate_minimal_separators,
    enumerate_pmcs,
    exact_treewidth_small,
)


class EngineError(RuntimeError):
    """An internal solver invariant failed (corrupt table or witness)."""


# -- public table types --------------------------------------------------


@dataclass(frozen=True)
class DPKey:
    """Canonical address of one table entry.

    Alpha entries carry no omega; beta entries do. W is the intersection
    of the partial solution with S (alpha) or with Ω (beta). The grade
    is |X| of the partial solution and is only set in exact-size runs.
    """

    separator: tuple[int, ...]
    component: tuple[int, ...]
    omega: tuple[int, ...] | None
    W: tuple[int, ...]
    cls: HClass
    grade: int | None = None


@dataclass(frozen=True, eq=False)
class ObjectiveValue:
    """A table value; compares equal to bare numbers of the same value."""

    value: float
    mode: str = "max"

    def __eq__(self, other):
        if isinstance(other, ObjectiveValue):
            return self.value == other.value and self.mode == other.mode
        if isinstance(other, (int, float)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.mode))


@dataclass
class DPTables:
    """The final tables plus one derivation record per stored entry.

    Absent keys mean −∞ (maximization) or +∞ (minimization); nothing is
    materialized for them. Records are tuples:

      ("base", W', X)              value taken directly from a base graph
      ("glue", W', X∩W', children) component blocks glued over W'
      ("forget", beta_key)         beta entry with terminals cut to S
    """

    alpha: dict
    beta: dict
    provenance: dict


@dataclass(frozen=True)
class SolveStats:
    separators: int
    pmcs: int
    good_triples: int
    dp_keys: int
    ms: int


@dataclass
class Solution:
    feasible: bool
    value: ObjectiveValue | None
    F: tuple[int, ...]
    X: tuple[int, ...]
    stats: SolveStats
    root_key: DPKey | None = None
    tables: DPTables | None = None


# -- small shared helpers ------------------------------------------------


def _better(cur, cand, minimize: bool) -> bool:
    """Does cand beat cur under (value, F mask, X mask)?"""
    if cur is None:
        return True
    if cand[0] != cur[0]:
        return cand[0] < cur[0] if minimize else cand[0] > cur[0]
    return (cand[1], cand[2]) < (cur[1], cur[2])


def _subset_list(base: tuple[int, ...], limit: int):
    """Subsets of a sorted vertex tuple up to the size limit.

    Ordered by size then lexicographically, as (mask, tuple) pairs.
    """
    out = []
    for size in range(min(limit, len(base)) + 1):
        for combo in combinations(base, size):
            out.append((mask_of(combo), combo))
    return out


def _base_pairs(G: Graph, A: Automaton, wptuple: tuple[int, ...]):
    """All live base classes over W' with their X ∩ W' as a global mask."""
    pos = {v: i for i, v in enumerate(wptuple)}
    redges = [
        (pos[u], pos[v])
        for u, v in combinations(wptuple, 2)
        if G.has_edge(u, v)
    ]
    out = []
    for xr in range(1 << len(wptuple)):
        cls = A.base(wptuple, redges, xr)
        if cls.reject:
            continue
        out.append((cls, mask_of(wptuple[r] for r in bits(xr))))
    return out


def _members_global(cls: HClass, wtuple: tuple[int, ...]) -> int:
    """X ∩ W of any solution in the class, as a global vertex mask."""
    return mask_of(wtuple[r] for r in bits(cls.members))


def _unit_weights(G: Graph, weights):
    if weights is None:
        return [1] * G.n
    w = list(weights)
    if len(w) != G.n:
        raise GraphError("weights must assign one value per vertex")
    return w


def _merge(table, key, val, minimize: bool) -> None:
    cur = table.get(key)
    if cur is None or (val < cur if minimize else val > cur):
        table[key] = val


def _as_automaton(A, t: int) -> Automaton:
    if isinstance(A, str):
        return make_automaton(A, t)
    if not isinstance(A, Automaton):
        raise GraphError("expected a property automaton or a spec string")
    if A.t != t:
        raise GraphError(
            f"automaton was built for t={A.t} but t={t} was requested"
        )
    return A


# -- reference implementations of the table equations --------------------
#
# These value-level functions are the readable form of the recurrences;
# the solver below computes the same numbers with witnesses and
# provenance attached. Tests compare the two.


def compute_beta_base(
    G: Graph,
    triple: GoodTriple,
    A: Automaton,
    mode: str = "max",
    weights=None,
    annotations=(),
):
    """Beta entries of a base triple, keyed (W', class).

    A base triple has Ω = S ∪ C, so a compatible partial solution is
    exactly F = W' with X read off the class. Entries whose W' misses
    an annotated vertex of Ω are rejected (left absent).
    """
    smask = mask_of(triple.separator)
    cmask = mask_of(triple.component)
    omask = mask_of(triple.pmc)
    if omask != smask | cmask:
        raise GraphError("compute_beta_base requires Ω = S ∪ C")
    w = _unit_weights(G, weights)
    umask = mask_of(annotations)
    out = {}
    for wpmask, wptuple in _subset_list(triple.pmc, A.t + 1):
        if umask & omask & ~wpmask:
            continue
        for cls, xw in _base_pairs(G, A, wptuple):
            out[(wptuple, cls)] = sum(w[v] for v in bits(xw))
    return out


def compute_delta(
    G: Graph,
    triple: GoodTriple,
    i: int,
    A: Automaton,
    alpha_entries,
    mode: str = "max",
    weights=None,
):
    """Delta entries for the i-th component block (i is 1-based).

    alpha_entries maps (W_i, class) to the alpha value of the block
    (S_i, C_i). Every alpha entry at W_i = W' ∩ S_i is introduced into
    every base class over W'; the added value is the weight of the X
    vertices of W' that the child did not already count.
    """
    children = component_blocks(G, triple)
    if not 1 <= i <= len(children):
        raise GraphError(f"component index {i} out of range")
    si = mask_of(children[i - 1][0])
    w = _unit_weights(G, weights)
    minimize = mode == "min"
    out = {}
    for wpmask, wptuple in _subset_list(triple.pmc, A.t + 1):
        wi_tuple = tuple_of(wpmask & si)
        pairs = _base_pairs(G, A, wptuple)
        for (wit, ci_cls), av in alpha_entries.items():
            if tuple(wit) != wi_tuple:
                continue
            xi = _members_global(ci_cls, wi_tuple)
            for c_W, xw in pairs:
                cplus = apply_introduce(A, ci_cls, wi_tuple, c_W, wptuple)
                if cplus is None or cplus.reject:
                    continue
                val = av + sum(w[v] for v in bits(xw & ~xi))
                _merge(out, (wptuple, cplus), val, minimize)
    return out


def compute_gamma_and_beta(
    G: Graph,
    triple: GoodTriple,
    A: Automaton,
    deltas,
    mode: str = "max",
    weights=None,
):
    """Fold delta tables into beta entries by repeated joins over W'.

    gamma_1 is delta_1; each later stage joins the running table with
    the next delta and subtracts the weight of X ∩ W', which both sides
    counted. The final stage is beta, keyed (W', class).
    """
    if not deltas:
        raise GraphError("at least one component block is required")
    w = _unit_weights(G, weights)
    minimize = mode == "min"
    stage = dict(deltas[0])
    for nxt in deltas[1:]:
        new_stage = {}
        for (wpt, c1), v1 in stage.items():
            shared = sum(w[u] for u in bits(_members_global(c1, wpt)))
            for (wpt2, c2), v2 in nxt.items():
                if wpt2 != wpt:
                    continue
                cj = apply_join(A, c1, c2, wpt)
                if cj is None or cj.reject:
                    continue
                _merge(new_stage, (wpt, cj), v1 + v2 - shared, minimize)
        stage = new_stage
    return stage


def compute_alpha(block: FullBlock, entries, A: Automaton, mode: str = "max"):
    """Alpha entries of a block from beta entries of its good triples.

    entries is an iterable of (W', class, value) taken over all the
    block's triples; each is forgotten down to W = W' ∩ S and the best
    value per (W, class) survives.
    """
    sset = set(block.separator)
    minimize = mode == "min"
    out = {}
    for wptuple, cls, val in entries:
        wptuple = tuple(wptuple)
        wt = tuple(v for v in wptuple if v in sset)
        c2 = apply_forget(A, cls, wptuple, wt)
        if c2.reject:
            continue
        _merge(out, (wt, c2), val, minimize)
    return out


# -- the solver ----------------------------------------------------------


class _Run:
    """One solve: tables, caches, and the block loop.

    Internal cells are tuples (value, F mask, X mask, record); internal
    keys are mask tuples — (S, C, W, class, grade) for alpha and
    (S, C, Ω, W', class, grade) for beta. Grade is None outside
    exact-size runs.
    """

    def __init__(self, G, A, mode, weights, annotations, cap, bseps, bpmcs):
        self.G = G
        self.A = A
        self.minimize = mode == "min"
        self.w = _unit_weights(G, weights)
        self.umask = mask_of(annotations)
        self.cap = cap
        self.budget_seps = bseps
        self.budget_pmcs = bpmcs
        self.alpha = {}  # (s, c) -> {wmask: {(cls, grade): cell}}
        self.beta = {}  # bkey -> cell
        self.counts = (0, 0, 0)
        self._wp_cache = {}
        self._base_cache = {}

    def wsum(self, mask: int):
        return sum(self.w[v] for v in bits(mask))

    def run(self) -> None:
        G = self.G
        seps = enumerate_minimal_separators(G, self.budget_seps)
        pmcs = enumerate_pmcs(G, seps, self.budget_pmcs, self.budget_seps)
        blocks = enumerate_full_blocks(G, seps)
        triples = enumerate_good_triples(G, blocks, pmcs)
        self.counts = (len(seps), len(pmcs), len(triples))
        by_block = {}
        for tr in triples:
            key = (mask_of(tr.separator), mask_of(tr.component))
            by_block.setdefault(key, []).append(tr)
        for b in blocks:
            key = (mask_of(b.separator), mask_of(b.component))
            self.alpha.setdefault(key, {})
            for tr in by_block.get(key, ()):
                self._process_triple(key, tr)

    # per-triple work ----------------------------------------------------

    def _wp_list(self, pmc: tuple[int, ...], omask: int):
        got = self._wp_cache.get(omask)
        if got is None:
            got = _subset_list(pmc, self.A.t + 1)
            self._wp_cache[omask] = got
        return got

    def _base_list(self, wpmask: int, wptuple: tuple[int, ...]):
        got = self._base_cache.get(wpmask)
        if got is None:
            got = _base_pairs(self.G, self.A, wptuple)
            self._base_cache[wpmask] = got
        return got

    def _process_triple(self, bkey2, tr: GoodTriple) -> None:
        smask, cmask = bkey2
        omask = mask_of(tr.pmc)
        wps = self._wp_list(tr.pmc, omask)
        if omask == smask | cmask:
            for wpmask, wptuple in wps:
                if self.umask & omask & ~wpmask:
                    continue
                for cls, xw in self._base_list(wpmask, wptuple):
                    g = xw.bit_count() if self.cap is not None else None
                    if g is not None and g > self.cap:
                        continue
                    cell = (self.wsum(xw), wpmask, xw, ("base", wpmask, xw))
                    self._put_beta(
                        (smask, cmask, omask, wpmask, cls, g), cell, wptuple
                    )
            return
        children = [
            (mask_of(s), mask_of(c)) for s, c in component_blocks(self.G, tr)
        ]
        for wpmask, wptuple in wps:
            if self.umask & omask & ~wpmask:
                continue
            stage = None
            for child in children:
                delta = self._delta_cells(child, wpmask, wptuple)
                if stage is None:
                    stage = delta
                else:
                    stage = self._join_cells(stage, delta, wptuple)
                if not stage:
                    break
            if not stage:
                continue
            for (cls, g), (val, fm, xm, ch) in stage.items():
                cell = (val, fm, xm, ("glue", wpmask, xm & wpmask, ch))
                self._put_beta(
                    (smask, cmask, omask, wpmask, cls, g), cell, wptuple
                )

    def _delta_cells(self, child, wpmask: int, wptuple: tuple[int, ...]):
        si, ci = child
        blk = self.alpha.get((si, ci))
        if blk is None:
            raise EngineError("component block missing from the block order")
        wi_mask = wpmask & si
        table = blk.get(wi_mask)
        out = {}
        if not table:
            return out
        wi_tuple = tuple_of(wi_mask)
        for (ci_cls, gi), (vi, fi, xi, _rec) in table.items():
            akey = (si, ci, wi_mask, ci_cls, gi)
            for c_W, xw in self._base_list(wpmask, wptuple):
                cplus = apply_introduce(self.A, ci_cls, wi_tuple, c_W, wptuple)
                if cplus is None or cplus.reject:
                    continue
                added = xw & ~xi
                g = gi if gi is None else gi + added.bit_count()
                if g is not None and g > self.cap:
                    continue
                cand = (
                    vi + self.wsum(added),
                    fi | wpmask,
                    xi | xw,
                    (akey,),
                )
                key = (cplus, g)
                if _better(out.get(key), cand, self.minimize):
                    out[key] = cand
        return out

    def _join_cells(self, stage, delta, wptuple: tuple[int, ...]):
        wpmask = mask_of(wptuple)
        out = {}
        for (c1, g1), (v1, f1, x1, ch1) in stage.items():
            shared = x1 & wpmask
            correction = self.wsum(shared)
            for (c2, g2), (v2, f2, x2, ch2) in delta.items():
                cj = apply_join(self.A, c1, c2, wptuple)
                if cj is None or cj.reject:
                    continue
                g = g1 if g1 is None else g1 + g2 - shared.bit_count()
                if g is not None and g > self.cap:
                    continue
                cand = (v1 + v2 - correction, f1 | f2, x1 | x2, ch1 + ch2)
                key = (cj, g)
                if _better(out.get(key), cand, self.minimize):
                    out[key] = cand
        return out

    def _put_beta(self, bkey, cell, wptuple: tuple[int, ...]) -> None:
        # an entry that fails to improve beta cannot improve the alpha
        # entry it forgets into either, so folding only on improvement
        # loses nothing
        if not _better(self.beta.get(bkey), cell, self.minimize):
            return
        self.beta[bkey] = cell
        smask, cmask, _om, wpmask, cls, g = bkey
        wmask = wpmask & smask
        c2 = apply_forget(self.A, cls, wptuple, tuple_of(wmask))
        if c2.reject:
            return
        acell = (cell[0], cell[1], cell[2], ("forget", bkey))
        per_w = self.alpha[(smask, cmask)].setdefault(wmask, {})
        akey = (c2, g)
        if _better(per_w.get(akey), acell, self.minimize):
            per_w[akey] = acell

    # results ------------------------------------------------------------

    def root_cells(self):
        return self.alpha.get((0, self.G.full_mask), {}).get(0, {})

    def dp_key_count(self) -> int:
        total = len(self.beta)
        for per_w in self.alpha.values():
            for cells in per_w.values():
                total += len(cells)
        return total

    def walk_alpha(self, akey):
        si, ci, wmask, cls, g = akey
        cell = self.alpha[(si, ci)][wmask][(cls, g)]
        return self.walk_beta(cell[3][1])

    def walk_beta(self, bkey):
        rec = self.beta[bkey][3]
        if rec[0] == "base":
            return rec[1], rec[2]
        fm, xm = rec[1], rec[2]
        for akey in rec[3]:
            f2, x2 = self.walk_alpha(akey)
            fm |= f2
            xm |= x2
        return fm, xm

    # public-table conversion --------------------------------------------

    def _pub_akey(self, akey) -> DPKey:
        si, ci, wmask, cls, g = akey
        return DPKey(tuple_of(si), tuple_of(ci), None, tuple_of(wmask), cls, g)

    def _pub_bkey(self, bkey) -> DPKey:
        si, ci, om, wp, cls, g = bkey
        return DPKey(
            tuple_of(si), tuple_of(ci), tuple_of(om), tuple_of(wp), cls, g
        )

    def _pub_record(self, rec):
        if rec[0] == "base":
            return ("base", tuple_of(rec[1]), tuple_of(rec[2]))
        if rec[0] == "glue":
            return (
                "glue",
                tuple_of(rec[1]),
                tuple_of(rec[2]),
                tuple(self._pub_akey(k) for k in rec[3]),
            )
        return ("forget", self._pub_bkey(rec[1]))

    def build_tables(self) -> DPTables:
        mode = "min" if self.minimize else "max"
        alpha = {}
        beta = {}
        prov = {}
        for (si, ci), per_w in self.alpha.items():
            for wmask, cells in per_w.items():
                for (cls, g), cell in cells.items():
                    key = self._pub_akey((si, ci, wmask, cls, g))
                    alpha[key] = ObjectiveValue(cell[0], mode)
                    prov[key] = self._pub_record(cell[3])
        for bkey, cell in self.beta.items():
            key = self._pub_bkey(bkey)
            beta[key] = ObjectiveValue(cell[0], mode)
            prov[key] = self._pub_record(cell[3])
        return DPTables(alpha, beta, prov)


def _check_common(G: Graph, t: int, mode: str, annotations) -> int:
    if t < 0:
        raise GraphError("t must be nonnegative")
    if mode not in ("max", "min"):
        raise GraphError(f"mode must be 'max' or 'min', got {mode!r}")
    for v in annotations:
        if not 0 <= v < G.n:
            raise GraphError(f"annotated vertex {v} out of range")
    return mask_of(annotations)


def _empty_solution(G, A, mode, cap, start, collect_tables) -> Solution:
    """The zero-vertex graph, where the only candidate is F = X = ∅."""
    cls = A.base((), (), 0)
    ok = not cls.reject and A.accepting(cls) and cap in (None, 0)
    stats = SolveStats(0, 0, 0, 0, int((time.perf_counter() - start) * 1000))
    tables = DPTables({}, {}, {}) if collect_tables else None
    if not ok:
        return Solution(False, None, (), (), stats, None, tables)
    return Solution(
        True, ObjectiveValue(0, mode), (), (), stats, None, tables
    )


def _verify_witness(G, t, A, val, fmask, xmask, umask, w, cap) -> None:
    if xmask & ~fmask:
        raise EngineError("witness has X ⊄ F")
    if umask & ~fmask:
        raise EngineError("witness misses an annotated vertex")
    F = tuple_of(fmask)
    X = tuple_of(xmask)
    if not semantic_eval(A, G, F, X):
        raise EngineError("reconstructed witness fails the property")
    direct = sum(w[v] for v in bits(xmask))
    if not math.isclose(direct, val, rel_tol=1e-9, abs_tol=1e-9):
        raise EngineError("witness weight disagrees with the table value")
    if cap is not None and xmask.bit_count() != cap:
        raise EngineError("witness size disagrees with the requested size")
    if fmask.bit_count() <= 12:
        Hf, _ = induced_subgraph(G, F)
        if exact_treewidth_small(Hf) > t:
            raise EngineError("witness exceeds the treewidth bound")


def _solve_common(
    G, t, A, mode, weights, annotations, cap, bseps, bpmcs, collect_tables
) -> Solution:
    start = time.perf_counter()
    umask = _check_common(G, t, mode, annotations)
    w = _unit_weights(G, weights)
    if G.n == 0:
        return _empty_solution(G, A, mode, cap, start, collect_tables)
    if not G.is_connected_mask(G.full_mask):
        raise GraphError(
            "solve requires a connected graph; split into components first"
        )
    run = _Run(G, A, mode, weights, annotations, cap, bseps, bpmcs)
    run.run()
    best = None
    best_key = None
    for (cls, g), cell in run.root_cells().items():
        if cap is not None and g != cap:
            continue
        if not A.accepting(cls):
            continue
        if _better(best, cell, run.minimize):
            best = cell
            best_key = (0, G.full_mask, 0, cls, g)
    elapsed = int((time.perf_counter() - start) * 1000)
    stats = SolveStats(*run.counts, run.dp_key_count(), elapsed)
    tables = run.build_tables() if collect_tables else None
    if best is None:
        return Solution(False, None, (), (), stats, None, tables)
    fmask, xmask = run.walk_alpha(best_key)
    if (fmask, xmask) != (best[1], best[2]):
        raise EngineError("provenance walk disagrees with the stored witness")
    _verify_witness(G, t, A, best[0], fmask, xmask, umask, w, cap)
    return Solution(
        True,
        ObjectiveValue(best[0], mode),
        tuple_of(fmask),
        tuple_of(xmask),
        stats,
        run._pub_akey(best_key),
        tables,
    )


def solve(
    G: Graph,
    t: int,
    A,
    mode: str = "max",
    weights=None,
    annotations=(),
    *,
    budget_seps: int = DEFAULT_SEPARATOR_BUDGET,
    budget_pmcs: int = DEFAULT_PMC_BUDGET,
    collect_tables: bool = False,
) -> Solution:
    """Optimal X ⊆ F ⊆ V with G[F] of treewidth ≤ t and the property true.

    A is a property automaton or its spec string. Annotated vertices are
    forced into F. Weights may be negative; mode selects maximization or
    minimization of the total weight of X. G must be connected (callers
    handle components); the zero-vertex graph is answered directly.
    Raises BudgetExceeded if enumeration outgrows the given budgets.
    """
    A = _as_automaton(A, t)
    return _solve_common(
        G, t, A, mode, weights, annotations, None,
        budget_seps, budget_pmcs, collect_tables,
    )


def solve_exact_size(
    G: Graph,
    t: int,
    A,
    v: int,
    annotations=(),
    *,
    budget_seps: int = DEFAULT_SEPARATOR_BUDGET,
    budget_pmcs: int = DEFAULT_PMC_BUDGET,
    collect_tables: bool = False,
) -> Solution:
    """A witness with |X| exactly v, or an infeasible result.

    Tables gain a grade coordinate — the size of X accumulated so far —
    and only root entries of grade v count. Ties break like solve's.
    """
    A = _as_automaton(A, t)
    if not 0 <= v <= G.n:
        raise GraphError(f"target size {v} out of range for n={G.n}")
    return _solve_common(
        G, t, A, "max", None, annotations, v,
        budget_seps, budget_pmcs, collect_tables,
    )


# -- provenance replay and table dumps -----------------------------------


def reconstruct(tables: DPTables, key: DPKey):
    """(F, X) of the table entry at key, replayed from provenance."""
    rec = tables.provenance.get(key)
    if rec is None:
        raise EngineError(
            "no provenance for the requested key (absent entry or "
            "tables collected without it)"
        )
    if rec[0] == "base":
        return rec[1], rec[2]
    if rec[0] == "forget":
        return reconstruct(tables, rec[1])
    if rec[0] != "glue":
        raise EngineError(f"corrupt provenance record {rec[0]!r}")
    fset = set(rec[1])
    xset = set(rec[2])
    for child in rec[3]:
        f2, x2 = reconstruct(tables, child)
        fset.update(f2)
        xset.update(x2)
    return tuple(sorted(fset)), tuple(sorted(xset))


def class_hash(cls: HClass) -> str:
    """Short stable digest of a class, for table dumps and diffing."""

    def freeze(obj):
        if isinstance(obj, HClass):
            return (
                "cls", obj.aut, obj.tau, obj.members,
                freeze(obj.payload), obj.reject,
            )
        if isinstance(obj, frozenset):
            return ("fs",) + tuple(sorted(freeze(o) for o in obj))
        if isinstance(obj, tuple):
            return ("tp",) + tuple(freeze(o) for o in obj)
        return obj

    data = repr(freeze(cls)).encode()
    return hashlib.md5(data).hexdigest()[:10]


def dump_tables(tables: DPTables) -> list[str]:
    """One sorted line per entry: kind|S|C|Ω|W|class-hash value."""

    def fmt(vs):
        return ",".join(str(v) for v in vs)

    lines = []
    for kind, table in (("alpha", tables.alpha), ("beta", tables.beta)):
        for key, val in table.items():
            h = class_hash(key.cls)
            if key.grade is not None:
                h = f"{h}/{key.grade}"
            lines.append(
                "|".join(
                    (
                        kind,
                        fmt(key.separator),
                        fmt(key.component),
                        "-" if key.omega is None else fmt(key.omega),
                        fmt(key.W),
                        h,
                    )
                )
                + f" {val.value}"
            )
    return sorted(lines)
