"""Graph substrate: representation, set helpers, parsing, generators.

Vertices are dense 0-based ints. Vertex sets cross module boundaries as
sorted tuples; internally most work happens on int bitmasks, which keeps
the enumeration and DP layers allocation-light at desk scale.
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def tuple_of(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def setseq_less(a: int, b: int) -> bool:
    """Sorted-sequence lexicographic order on vertex sets given as masks.

    {2} < {2,8} (prefix), {2,5} < {2,8}, {2} < {3}. Used for deterministic
    tie-breaking; O(1) in word operations.
    """
    d = a ^ b
    if d == 0:
        return False
    low = d & -d
    if low & a:
        # a holds the smallest differing element; a wins unless b already
        # ended (b is a proper prefix of a).
        return (b & d) != 0
    return (a & d) == 0


class GraphError(ValueError):
    pass


class Graph:
    """Simple undirected graph on vertices 0..n-1, immutable once built.

    Self-loops are rejected; duplicate edges collapse silently.
    """

    __slots__ = ("n", "adj", "adj_mask", "full_mask", "_edges", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        self.n = n
        adj_mask = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            adj_mask[u] |= 1 << v
            adj_mask[v] |= 1 << u
        self.adj_mask = adj_mask
        self.adj = [frozenset(bits(m)) for m in adj_mask]
        self.full_mask = (1 << n) - 1
        self._edges = tuple(
            (u, v) for u in range(n) for v in bits(adj_mask[u]) if u < v
        )
        self._hash = hash((n, self._edges))

    @property
    def m(self) -> int:
        return len(self._edges)

    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_mask[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj_mask[v].bit_count()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # mask-level helpers -------------------------------------------------

    def neighborhood_mask(self, s: int) -> int:
        out = 0
        for v in bits(s):
            out |= self.adj_mask[v]
        return out & ~s

    def component_masks(self, excluded: int = 0) -> list[int]:
        """Connected components of G minus ``excluded``, as masks.

        Ordered by smallest member (which equals discovery order when
        scanning vertices in increasing order).
        """
        seen = excluded & self.full_mask
        comps = []
        for v in range(self.n):
            bit = 1 << v
            if seen & bit:
                continue
            comp = bit
            frontier = bit
            while frontier:
                grow = 0
                for u in bits(frontier):
                    grow |= self.adj_mask[u]
                frontier = grow & ~comp & ~excluded
                comp |= frontier
            comps.append(comp)
            seen |= comp
        return comps

    def is_connected_mask(self, s: int) -> bool:
        """Is the induced subgraph on mask ``s`` connected (and nonempty)?"""
        if s == 0:
            return False
        start = s & -s
        comp = start
        frontier = start
        while frontier:
            grow = 0
            for u in bits(frontier):
                grow |= self.adj_mask[u]
            frontier = grow & s & ~comp
            comp |= frontier
        return comp == s

    def is_clique_mask(self, s: int) -> bool:
        for v in bits(s):
            if s & ~self.adj_mask[v] & ~(1 << v):
                return False
        return True

    def edge_count_mask(self, s: int) -> int:
        total = 0
        for v in bits(s):
            total += (self.adj_mask[v] & s).bit_count()
        return total // 2


def induced_subgraph(G: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph with dense relabeling.

    Returns (subgraph, old_ids) where old_ids[new] = original vertex id.
    """
    old_ids = sorted(set(vertices))
    index = {v: i for i, v in enumerate(old_ids)}
    edges = [
        (index[u], index[v])
        for u, v in G.edges()
        if u in index and v in index
    ]
    return Graph(len(old_ids), edges), old_ids


# -- spec-level set operations ------------------------------------------


def neighborhood(G: Graph, S: Iterable[int]) -> tuple[int, ...]:
    """N(S): union of neighborhoods minus S itself."""
    s = mask_of(S)
    if s & ~G.full_mask:
        raise GraphError("vertex out of range in neighborhood()")
    return tuple_of(G.neighborhood_mask(s))


def connected_components(
    G: Graph, excluded: Iterable[int] = ()
) -> list[tuple[int, ...]]:
    """Components of G minus ``excluded``, ordered by smallest member."""
    e = mask_of(excluded)
    if e & ~G.full_mask:
        raise GraphError("vertex out of range in connected_components()")
    return [tuple_of(c) for c in G.component_masks(e)]


def is_clique(G: Graph, S: Iterable[int]) -> bool:
    return G.is_clique_mask(mask_of(S))


# -- parsing ------------------------------------------------------------


def parse_graph(text: str, format: str = "pace-gr") -> Graph:
    """Parse a graph from pace-gr or edge-list text.

    pace-gr: header ``p tw <n> <m>``, then m ``<u> <v>`` lines, 1-indexed,
    ``c`` comment lines allowed anywhere. edge-list: one ``u v`` pair per
    line (1-indexed), n inferred from the largest id.

    Malformed input raises GraphError naming the offending line.
    """
    if format == "pace-gr":
        return _parse_pace(text)
    if format == "edge-list":
        return _parse_edge_list(text)
    raise GraphError(f"unknown graph format {format!r}")


def _parse_pace(text: str) -> Graph:
    n = None
    m_declared = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise GraphError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "tw":
                raise GraphError(
                    f"line {lineno}: malformed header, expected 'p tw <n> <m>'"
                )
            try:
                n, m_declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphError(f"line {lineno}: non-integer header fields")
            if n < 0 or m_declared < 0:
                raise GraphError(f"line {lineno}: negative header fields")
            continue
        if n is None:
            raise GraphError(f"line {lineno}: edge before header")
        u, v = _parse_edge_fields(line, lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"line {lineno}: vertex id out of range")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop")
        edges.append((u - 1, v - 1))
    if n is None:
        raise GraphError("line 1: missing 'p tw' header")
    if m_declared is not None and len(edges) != m_declared:
        raise GraphError(
            f"header declares {m_declared} edges, found {len(edges)}"
        )
    return Graph(n, edges)


def _parse_edge_list(text: str) -> Graph:
    edges_1: list[tuple[int, int]] = []
    top = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("c"):
            continue
        u, v = _parse_edge_fields(line, lineno)
        if u < 1 or v < 1:
            raise GraphError(f"line {lineno}: vertex id out of range")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop")
        top = max(top, u, v)
        edges_1.append((u, v))
    return Graph(top, [(u - 1, v - 1) for u, v in edges_1])


def _parse_edge_fields(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphError(f"line {lineno}: expected '<u> <v>'")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphError(f"line {lineno}: non-integer vertex id")


def format_pace(G: Graph) -> str:
    lines = [f"p tw {G.n} {G.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


# -- generators ---------------------------------------------------------


def gen_graph(kind: str, seed: int = 0, **params) -> Graph:
    """Deterministic test-corpus generator.

    Kinds: path(n), cycle(n), complete(n), star(n), grid(rows, cols),
    gnp(n, p), k-tree(n, k), interval(n[, length]).
    """
    rng = random.Random(seed)
    try:
        builder = _GENERATORS[kind]
    except KeyError:
        raise GraphError(f"unknown generator kind {kind!r}")
    return builder(rng, **params)


def _gen_path(rng, n: int) -> Graph:
    _require(n >= 1, "path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def _gen_cycle(rng, n: int) -> Graph:
    _require(n >= 3, "cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def _gen_complete(rng, n: int) -> Graph:
    _require(n >= 1, "complete needs n >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _gen_star(rng, n: int) -> Graph:
    # vertex 0 is the center
    _require(n >= 1, "star needs n >= 1")
    return Graph(n, [(0, i) for i in range(1, n)])


def _gen_grid(rng, rows: int, cols: int) -> Graph:
    _require(rows >= 1 and cols >= 1, "grid needs rows, cols >= 1")
    def vid(r, c):
        return r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(rows * cols, edges)


def _gen_gnp(rng, n: int, p: float) -> Graph:
    _require(n >= 0 and 0.0 <= p <= 1.0, "gnp needs n >= 0 and p in [0,1]")
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Graph(n, edges)


def _gen_k_tree(rng, n: int, k: int) -> Graph:
    _require(k >= 1 and n >= k + 1, "k-tree needs k >= 1 and n >= k+1")
    edges = [(i, j) for i in range(k + 1) for j in range(i + 1, k + 1)]
    # all k-subsets of the seed clique are attachable
    cliques = [tuple(c for c in range(k + 1) if c != skip) for skip in range(k + 1)]
    for v in range(k + 1, n):
        base = cliques[rng.randrange(len(cliques))]
        for u in base:
            edges.append((u, v))
        for skip in base:
            cliques.append(tuple(sorted((set(base) - {skip}) | {v})))
    return Graph(n, edges)


def _gen_interval(rng, n: int, length: float = 2.0) -> Graph:
    """Random short intervals on [0, n): bounded cliques, many separators."""
    _require(n >= 1 and length > 0, "interval needs n >= 1 and length > 0")
    ivs = []
    for _ in range(n):
        left = rng.uniform(0, n)
        ivs.append((left, left + rng.uniform(0.2, length)))
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if ivs[i][0] <= ivs[j][1] and ivs[j][0] <= ivs[i][1]
    ]
    return Graph(n, edges)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


_GENERATORS = {
    "path": _gen_path,
    "cycle": _gen_cycle,
    "complete": _gen_complete,
    "star": _gen_star,
    "grid": _gen_grid,
    "gnp": _gen_gnp,
    "k-tree": _gen_k_tree,
    "interval": _gen_interval,
}
