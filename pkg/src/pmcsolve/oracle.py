"""Brute-force reference implementations.

Everything here recomputes answers from definitions, deliberately
avoiding the production code paths: separators come from a subset scan
with the definitional minimality test, potential maximal cliques from
maximal cliques of exhaustively enumerated triangulations, and optimal
solutions from loops over vertex subsets with direct property checks.
These routines are exponential and meant for small inputs only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .graph import (
    Graph,
    GraphError,
    bits,
    gen_graph,
    induced_subgraph,
    mask_of,
    tuple_of,
)
from .triangulation import (
    exact_treewidth_small,
    maximal_cliques,
    minimal_triangulations_small,
)


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    value: int | float | None
    F: tuple[int, ...]
    X: tuple[int, ...]


@dataclass(frozen=True)
class OracleReport:
    ok: bool
    samples: int
    detail: str = ""


# -- separators and potential maximal cliques ---------------------------


def brute_force_separators(G: Graph) -> set[tuple[int, ...]]:
    """Subset scan with the definitional minimal a,b-separator test."""
    if G.n > 10:
        raise GraphError("brute_force_separators is limited to n <= 10")
    out: set[tuple[int, ...]] = set()
    for smask in range(1, G.full_mask):
        comps = G.component_masks(smask)
        if len(comps) < 2:
            continue
        if _separates_some_pair_minimally(G, smask, comps):
            out.add(tuple_of(smask))
    return out


def _separates_some_pair_minimally(G: Graph, smask: int, comps) -> bool:
    reps = [(c & -c).bit_length() - 1 for c in comps]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            a, b = reps[i], reps[j]
            if all(
                _connected_pair(G, smask & ~(1 << s), a, b)
                for s in bits(smask)
            ):
                return True
    return False


def _connected_pair(G: Graph, excluded: int, a: int, b: int) -> bool:
    goal = 1 << b
    seen = 1 << a
    frontier = seen
    while frontier:
        grow = 0
        for u in bits(frontier):
            grow |= G.adj_mask[u]
        grow &= ~excluded
        if grow & goal:
            return True
        frontier = grow & ~seen
        seen |= frontier
    return False


def brute_force_pmcs(G: Graph) -> set[tuple[int, ...]]:
    """Maximal cliques collected over all minimal triangulations."""
    out: set[tuple[int, ...]] = set()
    for T in minimal_triangulations_small(G):
        out.update(maximal_cliques(T))
    return out


# -- treewidth membership ------------------------------------------------


def treewidth_at_most(G: Graph, t: int) -> bool:
    """Is tw(G) <= t. Cheap reductions for t <= 2, exact DP above."""
    return _tw_mask_at_most(G, G.full_mask, t)


def _tw_mask_at_most(G: Graph, fmask: int, t: int) -> bool:
    if fmask == 0:
        return t >= -1
    if t < 0:
        return False
    if t == 0:
        return all(G.adj_mask[v] & fmask == 0 for v in bits(fmask))
    if t == 1:
        return _is_forest_mask(G, fmask)
    if t == 2:
        return _reduces_to_empty(G, fmask)
    sub, _ = induced_subgraph(G, tuple_of(fmask))
    return exact_treewidth_small(sub) <= t


def _is_forest_mask(G: Graph, fmask: int) -> bool:
    edges = sum((G.adj_mask[v] & fmask).bit_count() for v in bits(fmask)) // 2
    comps = len(G.component_masks(G.full_mask & ~fmask))
    return edges == fmask.bit_count() - comps


def _reduces_to_empty(G: Graph, fmask: int) -> bool:
    # repeatedly delete degree <= 1 vertices and contract degree-2
    # vertices; exactly the graphs of treewidth <= 2 reduce to nothing
    adjd = {v: set(bits(G.adj_mask[v] & fmask)) for v in bits(fmask)}
    alive = set(adjd)
    stack = [v for v in alive if len(adjd[v]) <= 2]
    while stack:
        v = stack.pop()
        if v not in alive or len(adjd[v]) > 2:
            continue
        nbs = list(adjd[v])
        for u in nbs:
            adjd[u].discard(v)
        alive.discard(v)
        if len(nbs) == 2:
            a, b = nbs
            if b not in adjd[a]:
                adjd[a].add(b)
                adjd[b].add(a)
        for u in nbs:
            if len(adjd[u]) <= 2:
                stack.append(u)
    return not alive


# -- property-spec parsing (shares syntax with the automaton layer) -----


def _parse_property(spec: str) -> tuple[str, dict]:
    name, _, rest = spec.partition(":")
    name = name.strip()
    raw: dict[str, str] = {}
    if rest:
        key = None
        for piece in rest.split(","):
            if "=" in piece:
                key, val = piece.split("=", 1)
                key = key.strip()
                raw[key] = val.strip()
            elif key is not None:
                raw[key] += "," + piece.strip()
            else:
                raise ValueError(f"malformed property parameters: {spec!r}")
    params: dict = {}
    for key, val in raw.items():
        if key in ("q", "d", "t"):
            params[key] = int(val)
        elif key == "T":
            params[key] = tuple(
                sorted(int(x) for x in val.split(",") if x != "")
            )
        elif key == "H":
            params[key] = tuple(
                _named_graph(nm.strip())
                for nm in val.split("+")
                if nm.strip()
            )
        else:
            raise ValueError(f"unknown property parameter {key!r}")
    aliases = {
        "true-t": "true",
        "q-colorable": "colorable",
        "connectivity": "connected",
        "independent": "independent-set",
    }
    return aliases.get(name, name), params


def _named_graph(name: str) -> Graph:
    kind = {"K": "complete", "P": "path", "C": "cycle"}.get(name[:1].upper())
    if kind is None or not name[1:].isdigit():
        raise ValueError(f"unknown pattern graph {name!r}")
    return gen_graph(kind, n=int(name[1:]))


def _iso_small(G: Graph, comp_mask: int, H: Graph) -> bool:
    verts = list(bits(comp_mask))
    if len(verts) != H.n:
        return False
    degs = sorted((G.adj_mask[v] & comp_mask).bit_count() for v in verts)
    if degs != sorted(H.degree(v) for v in range(H.n)):
        return False
    for perm in permutations(range(H.n)):
        # perm[i] is the H-vertex assigned to verts[i]
        if all(
            ((G.adj_mask[verts[i]] >> verts[j]) & 1)
            == ((H.adj_mask[perm[i]] >> perm[j]) & 1)
            for i in range(H.n)
            for j in range(i + 1, H.n)
        ):
            return True
    return False


# -- the solver oracle ---------------------------------------------------


def brute_force_solve(
    G: Graph,
    prop: str,
    t: int,
    mode: str = "max",
    weights=None,
    annotations=(),
    exact_size: int | None = None,
) -> OracleResult:
    """Optimal (F, X) by exhaustive enumeration.

    Maximizes (or minimizes) the weight of X over pairs X ⊆ F ⊆ V with
    the induced subgraph G[F] of treewidth at most t, X satisfying the
    property inside G[F], and every annotated vertex contained in F.
    Ties are broken toward the smallest F bitmask, then the smallest X
    bitmask (vertex 0 = lowest bit), matching the solver exactly.
    """
    if G.n > 14:
        raise GraphError("brute_force_solve is limited to n <= 14")
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    name, params = _parse_property(prop)
    if weights is None:
        w = [1] * G.n
    else:
        w = list(weights)
        if len(w) != G.n:
            raise ValueError("weights must assign one value per vertex")
    umask = mask_of(annotations)
    maximize = mode == "max"

    best: list = [None]

    def consider(val, fm, xm) -> None:
        cur = best[0]
        if cur is None:
            best[0] = (val, fm, xm)
        elif val != cur[0]:
            if val > cur[0] if maximize else val < cur[0]:
                best[0] = (val, fm, xm)
        elif (fm, xm) < (cur[1], cur[2]):
            best[0] = (val, fm, xm)

    def wsum(mask: int):
        return sum(w[v] for v in bits(mask))

    plain = weights is None and umask == 0

    if name == "independent-set":
        _solve_direct_x(
            G, umask, plain, exact_size, consider, wsum,
            lambda xm: all(G.adj_mask[v] & xm == 0 for v in bits(xm)),
            lambda fm: _tw_mask_at_most(G, fm, t),
        )
    elif name == "colorable":
        q = params.get("q")
        if q is None or q < 1:
            raise ValueError("colorable requires parameter q >= 1")
        _solve_direct_x(
            G, umask, plain, exact_size, consider, wsum,
            lambda xm: _colorable(G, xm, q),
            lambda fm: _tw_mask_at_most(G, fm, t),
        )
    elif name in ("forest", "max-degree", "connected", "k-in-a-tree"):
        check = _whole_subgraph_check(G, name, params, umask)
        for fm in range(G.full_mask + 1):
            if umask & ~fm:
                continue
            if exact_size is not None and fm.bit_count() != exact_size:
                continue
            if not check(fm):
                continue
            if not _tw_mask_at_most(G, fm, t):
                continue
            consider(wsum(fm), fm, fm)
    elif name == "true":
        for fm in range(G.full_mask + 1):
            if umask & ~fm:
                continue
            if not _tw_mask_at_most(G, fm, t):
                continue
            sub = fm
            while True:
                if exact_size is None or sub.bit_count() == exact_size:
                    consider(wsum(sub), fm, sub)
                if sub == 0:
                    break
                sub = (sub - 1) & fm
    elif name == "packing":
        pats = params.get("H")
        if not pats:
            raise ValueError("packing requires at least one pattern graph")
        _solve_packing(
            G, pats, umask, exact_size, consider, w, maximize,
            lambda fm: _tw_mask_at_most(G, fm, t),
        )
    else:
        raise ValueError(f"unknown property {name!r}")

    if best[0] is None:
        return OracleResult(False, None, (), ())
    val, fm, xm = best[0]
    return OracleResult(True, val, tuple_of(fm), tuple_of(xm))


def _solve_direct_x(
    G, umask, plain, exact_size, consider, wsum, valid, tw_ok
) -> None:
    """Optimize a property that constrains only G[X].

    In the plain case (unit weights, no annotations) the pair (X, X) is
    optimal whenever any (F, X) is feasible — the subgraph on X alone
    has no larger treewidth and no smaller value — so F needs no
    separate enumeration.  Annotations force extra vertices into F, and
    zero-or-negative weights can make a strict subset X of the chosen F
    the proper witness, so those cases run the full double loop.
    """
    if plain:
        for xm in range(G.full_mask + 1):
            if exact_size is not None and xm.bit_count() != exact_size:
                continue
            if valid(xm) and tw_ok(xm):
                consider(wsum(xm), xm, xm)
        return
    for fm in range(G.full_mask + 1):
        if umask & ~fm:
            continue
        if not tw_ok(fm):
            continue
        sub = fm
        while True:
            if exact_size is None or sub.bit_count() == exact_size:
                if valid(sub):
                    consider(wsum(sub), fm, sub)
            if sub == 0:
                break
            sub = (sub - 1) & fm


def _whole_subgraph_check(G, name, params, umask):
    if name == "forest":
        return lambda fm: _is_forest_mask(G, fm)
    if name == "max-degree":
        d = params.get("d")
        if d is None or d < 0:
            raise ValueError("max-degree requires parameter d >= 0")
        return lambda fm: all(
            (G.adj_mask[v] & fm).bit_count() <= d for v in bits(fm)
        )
    tmask = mask_of(params.get("T", ()))
    if name == "connected":
        return lambda fm: (
            fm != 0 and tmask & ~fm == 0 and G.is_connected_mask(fm)
        )
    # k-in-a-tree: the whole chosen subgraph is a tree through T
    return lambda fm: (
        fm != 0
        and tmask & ~fm == 0
        and G.is_connected_mask(fm)
        and _is_forest_mask(G, fm)
    )


def _solve_packing(G, patterns, umask, exact_size, consider, w, maximize, tw_ok):
    # every component of G[F] must match some pattern and hosts exactly
    # one X vertex, so the only freedom inside a fixed F is which vertex
    # of each component carries the X label (annotations constrain F,
    # never the label choice)
    for fm in range(G.full_mask + 1):
        if umask & ~fm:
            continue
        comps = G.component_masks(G.full_mask & ~fm)
        if exact_size is not None and len(comps) != exact_size:
            continue
        val = 0
        xm = 0
        ok = True
        for comp in comps:
            if not any(_iso_small(G, comp, H) for H in patterns):
                ok = False
                break
            pick = min(
                bits(comp),
                key=lambda v: (-w[v] if maximize else w[v], v),
            )
            val += w[pick]
            xm |= 1 << pick
        if ok and tw_ok(fm):
            consider(val, fm, xm)


def _colorable(G: Graph, xmask: int, q: int) -> bool:
    verts = list(bits(xmask))
    color: dict[int, int] = {}

    def assign(i: int, used: int) -> bool:
        if i == len(verts):
            return True
        v = verts[i]
        blocked = {
            color[u] for u in color if (G.adj_mask[v] >> u) & 1
        }
        limit = min(q, used + 1)
        for c in range(limit):
            if c in blocked:
                continue
            color[v] = c
            if assign(i + 1, max(used, c + 1)):
                return True
            del color[v]
        return False

    return assign(0, 0)


# -- structural spot checks ---------------------------------------------


def check_terminal_treewidth(G: Graph, T) -> OracleReport:
    """Every minimal connected superset of T induces treewidth < |T|.

    A connected A ⊇ T is inclusion-minimal exactly when no vertex of
    A ∖ T leaves T inside a single component after its removal.
    """
    tmask = mask_of(T)
    k = tmask.bit_count()
    if k == 0:
        return OracleReport(True, 0)
    free = G.full_mask & ~tmask
    samples = 0
    sub = free
    while True:
        am = tmask | sub
        if G.is_connected_mask(am) and _is_irreducible(G, am, tmask):
            samples += 1
            H, _ = induced_subgraph(G, tuple_of(am))
            if not _tw_mask_at_most(H, H.full_mask, k - 1):
                return OracleReport(
                    False,
                    samples,
                    f"A={tuple_of(am)} has treewidth above {k - 1}",
                )
        if sub == 0:
            break
        sub = (sub - 1) & free
    return OracleReport(True, samples)


def _is_irreducible(G: Graph, am: int, tmask: int) -> bool:
    for v in bits(am & ~tmask):
        rem = am & ~(1 << v)
        for comp in G.component_masks(G.full_mask & ~rem):
            if tmask & ~comp == 0:
                return False
    return True


def check_triangulation_extension(G: Graph, F) -> OracleReport:
    """Every minimal triangulation of G[F] extends to one of G."""
    fverts = tuple_of(mask_of(F))
    sub, _ = induced_subgraph(G, fverts)
    wanted = minimal_triangulations_small(sub)
    projected = set()
    for TG in minimal_triangulations_small(G):
        PF, _ = induced_subgraph(TG, fverts)
        projected.add(PF)
    missing = [TF for TF in sorted(wanted, key=lambda g: sorted(g.edges()))
               if TF not in projected]
    if missing:
        return OracleReport(
            False,
            len(wanted),
            f"triangulation with edges {sorted(missing[0].edges())} "
            f"of the subgraph on {fverts} has no extension",
        )
    return OracleReport(True, len(wanted))
