"""Minimal separators, potential maximal cliques, blocks, good triples.

The enumerators here produce the combinatorial skeleton the dynamic
program runs over. Separators come from a component-neighborhood
expansion scheme; potential maximal cliques from a vertex-incremental
scheme whose candidates are filtered through the structural test
``is_pmc``. Small-scale triangulation oracles (exhaustive elimination
orders, exact treewidth) live here too.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, GraphError, bits, mask_of, tuple_of

DEFAULT_SEPARATOR_BUDGET = 10**6
DEFAULT_PMC_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured budget.

    Signals that the input lies outside the promised graph class; callers
    must abort rather than return partial answers.
    """

    def __init__(self, kind: str, budget: int):
        super().__init__(f"{kind} enumeration exceeded budget {budget}")
        self.kind = kind
        self.budget = budget


@dataclass(frozen=True)
class FullBlock:
    separator: tuple[int, ...]
    component: tuple[int, ...]


@dataclass(frozen=True)
class GoodTriple:
    separator: tuple[int, ...]
    component: tuple[int, ...]
    pmc: tuple[int, ...]


# -- minimal separators -------------------------------------------------


def is_minimal_separator(G: Graph, S) -> bool:
    """At least two components of G minus S see all of S."""
    s = mask_of(S)
    if s == 0:
        return False
    full = 0
    for comp in G.component_masks(s):
        if G.neighborhood_mask(comp) == s:
            full += 1
            if full >= 2:
                return True
    return False


def _full_component_count(G: Graph, s: int) -> int:
    count = 0
    for comp in G.component_masks(s):
        if G.neighborhood_mask(comp) == s:
            count += 1
    return count


def _bbc_separators(G: Graph, budget: int) -> set[int]:
    """Separator enumeration by component-neighborhood expansion.

    Seeds: neighborhoods of components of G minus N[v], for every v.
    Closure: for each known S and s in S, neighborhoods of components of
    G minus (S + N(s)). Every candidate is verified with the
    full-component test before being kept. Works per component, so
    disconnected inputs are handled for internal (prefix) use.
    """
    found: set[int] = set()
    stack: list[int] = []

    def admit(cand: int) -> None:
        if cand == 0 or cand in found:
            return
        if _full_component_count(G, cand) >= 2:
            found.add(cand)
            if len(found) > budget:
                raise BudgetExceeded("separators", budget)
            stack.append(cand)

    for v in range(G.n):
        closed = G.adj_mask[v] | (1 << v)
        for comp in G.component_masks(closed):
            admit(G.neighborhood_mask(comp))
    while stack:
        s = stack.pop()
        for x in bits(s):
            blocked = s | G.adj_mask[x]
            for comp in G.component_masks(blocked):
                admit(G.neighborhood_mask(comp))
    return found


def enumerate_minimal_separators(
    G: Graph, budget: int = DEFAULT_SEPARATOR_BUDGET
) -> set[tuple[int, ...]]:
    """All minimal separators of a connected graph."""
    if G.n > 0 and not G.is_connected_mask(G.full_mask):
        raise GraphError(
            "enumerate_minimal_separators requires a connected graph"
        )
    return {tuple_of(s) for s in _bbc_separators(G, budget)}


# -- potential maximal cliques ------------------------------------------


def is_pmc(G: Graph, Omega) -> bool:
    """Structural potential-maximal-clique test.

    (i) no component of G minus Omega sees all of Omega, and (ii) every
    non-adjacent pair inside Omega is covered by the neighborhood of some
    component of G minus Omega.
    """
    return _is_pmc_mask(G, mask_of(Omega))


def _is_pmc_mask(G: Graph, om: int) -> bool:
    if om == 0:
        return False
    nbhds = []
    for comp in G.component_masks(om):
        nb = G.neighborhood_mask(comp)
        if nb == om:
            return False
        nbhds.append(nb)
    for u in bits(om):
        need = om & ~G.adj_mask[u] & ~((1 << u) | ((1 << u) - 1))
        if not need:
            continue
        covered = 0
        ubit = 1 << u
        for nb in nbhds:
            if nb & ubit:
                covered |= nb
        if need & ~covered:
            return False
    return True


def _prefix_graph(G: Graph, k: int) -> Graph:
    # edges are stored with u < v, so one endpoint check suffices
    return Graph(k, [(u, v) for u, v in G.edges() if v < k])


def enumerate_pmcs(
    G: Graph,
    separators: set[tuple[int, ...]] | None = None,
    budget: int = DEFAULT_PMC_BUDGET,
    separator_budget: int = DEFAULT_SEPARATOR_BUDGET,
) -> set[tuple[int, ...]]:
    """All potential maximal cliques, by the vertex-incremental scheme.

    Grows the graph one vertex at a time. At each step the candidate pool
    is: the previous graph's PMCs, each of them plus the new vertex, the
    new vertex alone, S + {a} for each current minimal separator S, and
    S + (S' ∩ C) over separator pairs with C a component of the graph
    minus S. Candidates are filtered through ``is_pmc``; cheap families
    run first so a budget overrun aborts before the quadratic family.

    ``separators`` (= the separators of G itself) is reused for the final
    step when provided.
    """
    if G.n == 0:
        return set()
    prev: set[int] = {1}  # the single-vertex prefix has itself as its PMC
    for i in range(2, G.n + 1):
        H = _prefix_graph(G, i)
        abit = 1 << (i - 1)
        if i == G.n and separators is not None:
            seps = sorted(mask_of(s) for s in separators)
        else:
            seps = sorted(_bbc_separators(H, separator_budget))
        results: set[int] = set()
        tested: set[int] = set()

        def admit(cand: int) -> None:
            if cand in tested:
                return
            tested.add(cand)
            if _is_pmc_mask(H, cand):
                results.add(cand)
                if len(results) > budget:
                    raise BudgetExceeded("pmcs", budget)

        for om in sorted(prev):
            admit(om)
            admit(om | abit)
        admit(abit)
        for s in seps:
            admit(s | abit)
        for s in seps:
            comps = H.component_masks(s)
            for s2 in seps:
                if s2 == s:
                    continue
                for comp in comps:
                    inter = s2 & comp
                    if inter:
                        admit(s | inter)
        prev = results
    return {tuple_of(om) for om in prev}


def pmc_count_bound(n: int, separator_count: int) -> int:
    """The enumeration-size guarantee the count check tests against."""
    return n * separator_count * separator_count + n * separator_count + 1


# -- blocks and good triples --------------------------------------------


def enumerate_full_blocks(
    G: Graph, separators: set[tuple[int, ...]]
) -> list[FullBlock]:
    """All full blocks (S, C), plus (∅, V), smaller blocks first."""
    blocks: list[tuple[int, int]] = []
    for S in separators:
        s = mask_of(S)
        for comp in G.component_masks(s):
            if G.neighborhood_mask(comp) == s:
                blocks.append((s, comp))
    blocks.append((0, G.full_mask))
    blocks.sort(
        key=lambda sc: (
            (sc[0] | sc[1]).bit_count(),
            tuple_of(sc[0]),
            tuple_of(sc[1]),
        )
    )
    return [FullBlock(tuple_of(s), tuple_of(c)) for s, c in blocks]


def enumerate_good_triples(
    G: Graph,
    blocks: list[FullBlock],
    pmcs: set[tuple[int, ...]],
) -> list[GoodTriple]:
    """All (S, C, Ω) with (S,C) a full block and S ⊆ Ω ⊆ S∪C.

    Generated per PMC: the candidate separators for Ω are the
    neighborhoods of the components of G minus Ω (plus the empty
    separator), and C is then the component of G minus S holding Ω∖S.
    Grouped by block, following the given block order.
    """
    block_index = {
        (b.separator, b.component): i for i, b in enumerate(blocks)
    }
    found: set[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = set()
    whole = tuple_of(G.full_mask)
    for Omega in pmcs:
        om = mask_of(Omega)
        seps = set()
        for comp in G.component_masks(om):
            nb = G.neighborhood_mask(comp)
            if nb:
                seps.add(nb)
        for s in seps:
            if s & ~om:
                continue
            rest = om & ~s
            if not rest:
                continue
            low = rest & -rest
            C = 0
            for comp in G.component_masks(s):
                if comp & low:
                    C = comp
                    break
            if C == 0 or rest & ~C:
                continue
            if G.neighborhood_mask(C) != s:
                continue
            found.add((tuple_of(s), tuple_of(C), Omega))
        found.add(((), whole, Omega))
    triples = [
        GoodTriple(s, c, om)
        for (s, c, om) in found
        if (s, c) in block_index
    ]
    triples.sort(key=lambda t: (block_index[(t.separator, t.component)], t.pmc))
    return triples


def component_blocks(
    G: Graph, triple: GoodTriple
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The strictly smaller full blocks under a good triple.

    For each component C_i of G[C ∖ Ω], pairs it with S_i = N(C_i).
    Base-case triples (Ω = S∪C) give the empty list.
    """
    c = mask_of(triple.component)
    om = mask_of(triple.pmc)
    inner = c & ~om
    if inner == 0:
        return []
    out = []
    for comp in G.component_masks(G.full_mask & ~inner):
        out.append((tuple_of(G.neighborhood_mask(comp)), tuple_of(comp)))
    return out


# -- triangulation oracles ----------------------------------------------


def elimination_game(G: Graph, order) -> Graph:
    """Fill-in supergraph from eliminating vertices in the given order."""
    order = list(order)
    if sorted(order) != list(range(G.n)):
        raise GraphError("elimination order must be a permutation of V")
    cur = list(G.adj_mask)
    alive = G.full_mask
    for v in order:
        vbit = 1 << v
        nb = cur[v] & alive & ~vbit
        for u in bits(nb):
            cur[u] |= nb & ~(1 << u)
        alive &= ~vbit
    edges = [(u, v) for u in range(G.n) for v in bits(cur[u]) if u < v]
    return Graph(G.n, edges)


_MT_CACHE: dict[Graph, frozenset[Graph]] = {}


def minimal_triangulations_small(G: Graph) -> set[Graph]:
    """All inclusion-minimal chordal supergraphs (n ≤ 9).

    Explores every elimination order through a memoized recursion on
    (remaining vertices, current filled subgraph) — the set of reachable
    fill results equals the set over all n! orders — then keeps the
    edge-minimal results.
    """
    if G.n > 9:
        raise GraphError("minimal_triangulations_small is limited to n <= 9")
    cached = _MT_CACHE.get(G)
    if cached is not None:
        return set(cached)
    memo: dict[tuple, frozenset[frozenset]] = {}

    def rec(alive: int, cur: tuple[int, ...]) -> frozenset[frozenset]:
        if alive == 0:
            return frozenset([frozenset()])
        key = (alive, tuple(cur[v] & alive for v in bits(alive)))
        hit = memo.get(key)
        if hit is not None:
            return hit
        results = set()
        for v in bits(alive):
            vbit = 1 << v
            nb = cur[v] & alive & ~vbit
            fill = []
            nxt = list(cur)
            for u in bits(nb):
                missing = nb & ~nxt[u] & ~(1 << u)
                for w in bits(missing):
                    if u < w:
                        fill.append((u, w))
                nxt[u] |= nb & ~(1 << u)
            fill_set = frozenset(fill)
            for sub in rec(alive & ~vbit, tuple(nxt)):
                results.add(fill_set | sub)
        out = frozenset(results)
        memo[key] = out
        return out

    base = frozenset((u, v) for u, v in G.edges())
    candidates = sorted(
        (base | fill for fill in rec(G.full_mask, tuple(G.adj_mask))),
        key=len,
    )
    minimal: list[frozenset] = []
    for cand in candidates:
        if not any(kept <= cand for kept in minimal):
            minimal.append(cand)
    result = frozenset(Graph(G.n, sorted(es)) for es in minimal)
    if len(_MT_CACHE) > 4096:
        _MT_CACHE.clear()
    _MT_CACHE[G] = result
    return set(result)


_TW_CACHE: dict[Graph, int] = {}


def exact_treewidth_small(G: Graph) -> int:
    """Exact treewidth by elimination-order subset DP (n ≤ 12)."""
    if G.n > 12:
        raise GraphError("exact_treewidth_small is limited to n <= 12")
    hit = _TW_CACHE.get(G)
    if hit is not None:
        return hit
    n = G.n
    if n == 0:
        return -1
    adj = G.adj_mask
    full = G.full_mask
    INF = n + 1

    def elim_degree(interior: int, v: int) -> int:
        # neighbors of v reachable through already-eliminated vertices
        vbit = 1 << v
        explored = vbit
        reach = 0
        frontier = vbit
        while frontier:
            grow = 0
            for u in bits(frontier):
                grow |= adj[u]
            reach |= grow & ~interior & ~vbit
            frontier = grow & interior & ~explored
            explored |= frontier
        return reach.bit_count()

    f = [INF] * (full + 1)
    f[0] = -1
    for s in range(1, full + 1):
        best = INF
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            prev = s ^ low
            width = f[prev]
            if width >= best:
                continue
            d = elim_degree(prev, v)
            cand = d if d > width else width
            if cand < best:
                best = cand
        f[s] = best
    if len(_TW_CACHE) > 1 << 16:
        _TW_CACHE.clear()
    _TW_CACHE[G] = f[full]
    return f[full]


# -- small chordal-graph helpers ----------------------------------------


def is_chordal(G: Graph) -> bool:
    """Chordality via repeated simplicial elimination."""
    cur = list(G.adj_mask)
    alive = G.full_mask
    while alive:
        found = False
        for v in bits(alive):
            nb = cur[v] & alive & ~(1 << v)
            if all(
                nb & ~cur[u] & ~(1 << u) == 0 for u in bits(nb)
            ):
                alive &= ~(1 << v)
                found = True
                break
        if not found:
            return False
    return True


def maximal_cliques(G: Graph) -> list[tuple[int, ...]]:
    """All maximal cliques (pivoting recursion; small graphs only)."""
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(r)
            return
        pivot_pool = p | x
        pivot = (pivot_pool & -pivot_pool).bit_length() - 1
        best = pivot
        best_cover = (p & G.adj_mask[pivot]).bit_count()
        for u in bits(pivot_pool):
            cover = (p & G.adj_mask[u]).bit_count()
            if cover > best_cover:
                best, best_cover = u, cover
        for v in bits(p & ~G.adj_mask[best]):
            vbit = 1 << v
            expand(r | vbit, p & G.adj_mask[v], x & G.adj_mask[v])
            p &= ~vbit
            x |= vbit
    if G.n == 0:
        return []
    expand(0, G.full_mask, 0)
    return sorted(tuple_of(c) for c in out)


def format_vertex_sets(sets, one_indexed: bool = True) -> str:
    """Canonical dump: one set per line, space-separated, sorted."""
    off = 1 if one_indexed else 0
    lines = []
    for s in sorted(sets, key=lambda t: (len(t), t)):
        lines.append(" ".join(str(v + off) for v in s))
    return "\n".join(lines)
