"""Finite-state machinery for vertex-subset properties.

A property is evaluated by folding class updates over an expression that
builds a graph from small terminal graphs. Classes are canonical state
encodings over terminal ranks; each concrete property automaton supplies
the base-graph classification and the update rules for the three
composition shapes (forget, introduce-into-base, join). A direct
semantic evaluator for every property lives here too, as the reference
the automata are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

from .graph import (
    Graph,
    GraphError,
    bits,
    gen_graph,
    induced_subgraph,
    mask_of,
    tuple_of,
)
from .triangulation import maximal_cliques, minimal_triangulations_small

_REJECT_PAYLOAD = "reject"


# -- domain types --------------------------------------------------------


@dataclass(frozen=True)
class TerminalGraph:
    """A graph with an ordered subset of terminal vertices.

    Vertex ids are global; terminal order follows the global vertex
    order. Base graphs have vertices == terminals.
    """

    vertices: tuple[int, ...]
    terminals: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        vs = set(self.vertices)
        if tuple(sorted(vs)) != self.vertices:
            raise GraphError("vertices must be sorted and distinct")
        if tuple(sorted(self.terminals)) != self.terminals:
            raise GraphError("terminals must follow the vertex order")
        if not set(self.terminals) <= vs:
            raise GraphError("terminals must be vertices")
        for u, v in self.edges:
            if u >= v or u not in vs or v not in vs:
                raise GraphError(f"bad edge ({u},{v})")

    @property
    def tau(self) -> int:
        return len(self.terminals)

    def is_base(self) -> bool:
        return self.vertices == self.terminals


@dataclass(frozen=True)
class CompositionOp:
    """Matrix form of a composition operation.

    One row per result terminal; entry k of a row names the 1-based rank
    of the source terminal in operand k that the result terminal is
    identified with, 0 meaning absent from that operand.
    """

    arity: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.arity not in (1, 2):
            raise GraphError("composition arity must be 1 or 2")
        for row in self.matrix:
            if len(row) != self.arity or any(e < 0 for e in row):
                raise GraphError("malformed composition matrix row")
        for k in range(self.arity):
            seen = set()
            for row in self.matrix:
                e = row[k]
                if e:
                    if e in seen:
                        raise GraphError(
                            "composition matrix repeats a source terminal"
                        )
                    seen.add(e)


def forget_op(tau_from: int, keep: tuple[int, ...]) -> CompositionOp:
    return CompositionOp(1, tuple((r + 1,) for r in keep))


def introduce_op(inj: tuple[int, ...], tau: int) -> CompositionOp:
    pos = {w: i for i, w in enumerate(inj)}
    return CompositionOp(
        2,
        tuple((pos[j] + 1 if j in pos else 0, j + 1) for j in range(tau)),
    )


def join_op(tau: int) -> CompositionOp:
    return CompositionOp(2, tuple((j + 1, j + 1) for j in range(tau)))


@dataclass(frozen=True)
class HClass:
    """Homomorphism class: automaton id, terminal membership, payload."""

    aut: str
    tau: int
    members: int
    payload: object
    reject: bool = False

    def term(self, W) -> tuple[int, ...]:
        """The vertices of X ∩ W this class pins down."""
        w = tuple(W)
        return tuple(w[r] for r in bits(self.members))


# -- small structural helpers -------------------------------------------


class _UF:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """False when a and b were already connected."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _rgs_of(uf: _UF, tau: int) -> tuple[int, ...]:
    labels: dict[int, int] = {}
    out = []
    for r in range(tau):
        root = uf.find(r)
        if root not in labels:
            labels[root] = len(labels)
        out.append(labels[root])
    return tuple(out)


def _blocks_of_rgs(rgs) -> list[list[int]]:
    blocks: dict[int, list[int]] = {}
    for r, b in enumerate(rgs):
        blocks.setdefault(b, []).append(r)
    return [blocks[k] for k in sorted(blocks)]


def _map_mask(mask: int, inj) -> int:
    out = 0
    for r in bits(mask):
        out |= 1 << inj[r]
    return out


def _restrict_mask(mask: int, keep) -> int:
    out = 0
    for new, old in enumerate(keep):
        if (mask >> old) & 1:
            out |= 1 << new
    return out


_CANON_CACHE: dict[tuple, tuple] = {}


def _graph_canon(n: int, edges: frozenset) -> tuple:
    """Canonical edge tuple of an unlabeled graph (n ≤ 8)."""
    key = (n, edges)
    hit = _CANON_CACHE.get(key)
    if hit is not None:
        return hit
    best = None
    for perm in permutations(range(n)):
        rel = sorted(
            (perm[a], perm[b]) if perm[a] < perm[b] else (perm[b], perm[a])
            for a, b in edges
        )
        cand = tuple(rel)
        if best is None or cand < best:
            best = cand
    _CANON_CACHE[key] = best
    return best


# -- automaton core ------------------------------------------------------


class Automaton:
    """Shared shell: reject class, membership plumbing, public naming."""

    def __init__(self, name: str, t: int):
        if t < 0:
            raise GraphError("t must be nonnegative")
        self.name = name
        self.t = t
        self._reject = HClass(name, 0, 0, _REJECT_PAYLOAD, True)

    # concrete automata implement these over terminal ranks
    def base(self, vertices, redges, xmask) -> HClass:
        raise NotImplementedError

    def forget(self, c: HClass, keep) -> HClass:
        raise NotImplementedError

    def glue(self, c_i: HClass, c_base: HClass, inj) -> HClass:
        raise NotImplementedError

    def join(self, c1: HClass, c2: HClass) -> HClass:
        raise NotImplementedError

    def accepting(self, c: HClass) -> bool:
        raise NotImplementedError

    def reject_class(self) -> HClass:
        return self._reject

    def _mk(self, tau: int, members: int, payload) -> HClass:
        return HClass(self.name, tau, members, payload)


def compose_forget(A: Automaton, c: HClass, keep) -> HClass:
    if c.reject:
        return A.reject_class()
    return A.forget(c, tuple(keep))


def compose_introduce(A: Automaton, c_i: HClass, c_w: HClass, inj):
    """Glue a partial graph into a base over a superset of terminals.

    Returns None when the operands disagree on shared membership (the
    composition is not valid for this class pair); the reject class when
    either operand is rejecting.
    """
    if c_i.reject or c_w.reject:
        return A.reject_class()
    for r, wpos in enumerate(inj):
        if ((c_i.members >> r) & 1) != ((c_w.members >> wpos) & 1):
            return None
    return A.glue(c_i, c_w, tuple(inj))


def compose_join(A: Automaton, c1: HClass, c2: HClass):
    if c1.reject or c2.reject:
        return A.reject_class()
    if c1.tau != c2.tau or c1.members != c2.members:
        return None
    return A.join(c1, c2)


# -- concrete automata ---------------------------------------------------


class _TrueAutomaton(Automaton):
    """No constraint: classes carry terminal membership and nothing else."""

    def base(self, vertices, redges, xmask):
        return self._mk(len(vertices), xmask, None)

    def forget(self, c, keep):
        return self._mk(len(keep), _restrict_mask(c.members, keep), None)

    def glue(self, c_i, c_base, inj):
        return self._mk(c_base.tau, c_base.members, None)

    def join(self, c1, c2):
        return c1

    def accepting(self, c):
        return not c.reject


class _IndependentSetAutomaton(Automaton):
    """X independent; adjacency can only be created at base graphs."""

    def base(self, vertices, redges, xmask):
        for i, j in redges:
            if (xmask >> i) & 1 and (xmask >> j) & 1:
                return self._reject
        return self._mk(len(vertices), xmask, None)

    def forget(self, c, keep):
        return self._mk(len(keep), _restrict_mask(c.members, keep), None)

    def glue(self, c_i, c_base, inj):
        return self._mk(c_base.tau, c_base.members, None)

    def join(self, c1, c2):
        return c1

    def accepting(self, c):
        return not c.reject


class _ForestAutomaton(Automaton):
    """X = V(H) and H acyclic.

    Payload: (tedges, pext) where tedges are the H-edges between current
    terminals (as rank pairs) and pext groups terminals connected through
    already-forgotten vertices. Keeping the two separate is what lets a
    join distinguish "the same bag edge seen from both sides" (fine)
    from "two vertex-disjoint paths between the same pair" (a cycle).
    """

    def base(self, vertices, redges, xmask):
        tau = len(vertices)
        if xmask != (1 << tau) - 1:
            return self._reject
        uf = _UF(tau)
        for i, j in redges:
            if not uf.union(i, j):
                return self._reject
        return self._mk(tau, xmask, (frozenset(redges), tuple(range(tau))))

    def forget(self, c, keep):
        tedges, rgs = c.payload
        tau = c.tau
        kept = set(keep)
        uf = _UF(tau)
        for block in _blocks_of_rgs(rgs):
            for r in block[1:]:
                uf.union(block[0], r)
        new_tedges = set()
        pos = {old: new for new, old in enumerate(keep)}
        for i, j in tedges:
            if i in kept and j in kept:
                new_tedges.add((pos[i], pos[j]))
            else:
                ok = uf.union(i, j)
                assert ok, "acyclicity invariant broken at forget"
        sub = _UF(len(keep))
        for a, b in combinations(range(len(keep)), 2):
            if uf.find(keep[a]) == uf.find(keep[b]):
                sub.union(a, b)
        return self._mk(
            len(keep),
            _restrict_mask(c.members, keep),
            (frozenset(new_tedges), _rgs_of(sub, len(keep))),
        )

    def glue(self, c_i, c_base, inj):
        tedges_i, rgs_i = c_i.payload
        tedges_b, _ = c_base.payload
        tau = c_base.tau
        mapped = {
            (min(inj[i], inj[j]), max(inj[i], inj[j])) for i, j in tedges_i
        }
        new_tedges = frozenset(mapped | set(tedges_b))
        uf = _UF(tau)
        for block in _blocks_of_rgs(rgs_i):
            for r in block[1:]:
                uf.union(inj[block[0]], inj[r])
        pext = _rgs_of(uf, tau)
        for i, j in new_tedges:
            if not uf.union(i, j):
                return self._reject
        return self._mk(tau, c_base.members, (new_tedges, pext))

    def join(self, c1, c2):
        t1, p1 = c1.payload
        t2, p2 = c2.payload
        tau = c1.tau
        uf = _UF(tau)
        for block in _blocks_of_rgs(p1):
            for r in block[1:]:
                uf.union(block[0], r)
        for block in _blocks_of_rgs(p2):
            for r in block[1:]:
                if not uf.union(block[0], r):
                    return self._reject
        pext = _rgs_of(uf, tau)
        new_tedges = frozenset(t1 | t2)
        for i, j in new_tedges:
            if not uf.union(i, j):
                return self._reject
        return self._mk(tau, c1.members, (new_tedges, pext))

    def accepting(self, c):
        return not c.reject


class _ColorableAutomaton(Automaton):
    """G[X] properly q-colorable; X unconstrained otherwise.

    Payload: the set of color traces on X ∩ W over all proper colorings
    of the part of G[X] built so far, each trace a q-tuple of rank
    masks. The empty set is the one non-accepting (but live) class.
    """

    def __init__(self, name, t, q):
        super().__init__(name, t)
        if q < 1:
            raise GraphError("colorable requires q >= 1")
        self.q = q

    def base(self, vertices, redges, xmask):
        tau = len(vertices)
        xr = list(bits(xmask))
        xedges = [
            (i, j)
            for i, j in redges
            if (xmask >> i) & 1 and (xmask >> j) & 1
        ]
        traces = set()
        for colors in product(range(self.q), repeat=len(xr)):
            cmap = dict(zip(xr, colors))
            if any(cmap[i] == cmap[j] for i, j in xedges):
                continue
            masks = [0] * self.q
            for r, col in cmap.items():
                masks[col] |= 1 << r
            traces.add(tuple(masks))
        return self._mk(tau, xmask, frozenset(traces))

    def forget(self, c, keep):
        traces = {
            tuple(_restrict_mask(m, keep) for m in tr) for tr in c.payload
        }
        return self._mk(
            len(keep), _restrict_mask(c.members, keep), frozenset(traces)
        )

    def glue(self, c_i, c_base, inj):
        image = 0
        for wpos in inj:
            image |= 1 << wpos
        mapped = {
            tuple(_map_mask(m, inj) for m in tr) for tr in c_i.payload
        }
        traces = {
            tr
            for tr in c_base.payload
            if tuple(m & image for m in tr) in mapped
        }
        return self._mk(c_base.tau, c_base.members, frozenset(traces))

    def join(self, c1, c2):
        return self._mk(c1.tau, c1.members, c1.payload & c2.payload)

    def accepting(self, c):
        return not c.reject and bool(c.payload)


class _MaxDegreeAutomaton(Automaton):
    """X = V(H) and every vertex of H has degree at most d.

    Payload: (per-rank degree tuple, terminal edge set). Terminal edges
    are tracked so a shared bag edge is not double counted when two
    partial graphs are combined.
    """

    def __init__(self, name, t, d):
        super().__init__(name, t)
        if d < 0:
            raise GraphError("max-degree requires d >= 0")
        self.d = d

    def base(self, vertices, redges, xmask):
        tau = len(vertices)
        if xmask != (1 << tau) - 1:
            return self._reject
        degs = [0] * tau
        for i, j in redges:
            degs[i] += 1
            degs[j] += 1
        if any(d > self.d for d in degs):
            return self._reject
        return self._mk(tau, xmask, (tuple(degs), frozenset(redges)))

    def forget(self, c, keep):
        degs, tedges = c.payload
        pos = {old: new for new, old in enumerate(keep)}
        kept = set(keep)
        new_tedges = frozenset(
            (pos[i], pos[j]) for i, j in tedges if i in kept and j in kept
        )
        return self._mk(
            len(keep),
            _restrict_mask(c.members, keep),
            (tuple(degs[r] for r in keep), new_tedges),
        )

    def _combine(self, tau, members, degs1, t1, degs2, t2):
        shared = t1 & t2
        degs = list(degs2)
        for r in range(tau):
            degs[r] += degs1[r]
        for i, j in shared:
            degs[i] -= 1
            degs[j] -= 1
        if any(d > self.d for d in degs):
            return self._reject
        return self._mk(tau, members, (tuple(degs), frozenset(t1 | t2)))

    def glue(self, c_i, c_base, inj):
        degs_i, tedges_i = c_i.payload
        degs_b, tedges_b = c_base.payload
        tau = c_base.tau
        degs_m = [0] * tau
        for r, dv in enumerate(degs_i):
            degs_m[inj[r]] = dv
        mapped = frozenset(
            (min(inj[i], inj[j]), max(inj[i], inj[j])) for i, j in tedges_i
        )
        return self._combine(
            tau, c_base.members, tuple(degs_m), mapped, degs_b, tedges_b
        )

    def join(self, c1, c2):
        d1, t1 = c1.payload
        d2, t2 = c2.payload
        return self._combine(c1.tau, c1.members, d1, t1, d2, t2)

    def accepting(self, c):
        return not c.reject


class _ConnectivityAutomaton(Automaton):
    """X = V(H), H connected as one component, and T ⊆ V(H).

    Payload: (partition of terminals by H-connectivity, count of
    terminal-free finished components saturated at {0,1}, set of
    T-vertices seen). A finished component can never rejoin, so a second
    one, or one next to any live terminals, is an immediate reject.
    """

    def __init__(self, name, t, tset):
        super().__init__(name, t)
        self.tset = frozenset(tset)

    def base(self, vertices, redges, xmask):
        tau = len(vertices)
        if xmask != (1 << tau) - 1:
            return self._reject
        uf = _UF(tau)
        for i, j in redges:
            uf.union(i, j)
        tseen = tuple(sorted(self.tset & set(vertices)))
        return self._mk(tau, xmask, (_rgs_of(uf, tau), 0, tseen))

    def forget(self, c, keep):
        rgs, closed, tseen = c.payload
        kept_blocks = {rgs[r] for r in keep}
        newly_closed = len(set(rgs)) - len(kept_blocks)
        closed += newly_closed
        if closed >= 2 or (closed == 1 and kept_blocks):
            return self._reject
        sub = _UF(len(keep))
        for a, b in combinations(range(len(keep)), 2):
            if rgs[keep[a]] == rgs[keep[b]]:
                sub.union(a, b)
        return self._mk(
            len(keep),
            _restrict_mask(c.members, keep),
            (_rgs_of(sub, len(keep)), closed, tseen),
        )

    def glue(self, c_i, c_base, inj):
        rgs_i, closed, tseen_i = c_i.payload
        rgs_b, _, tseen_b = c_base.payload
        tau = c_base.tau
        if closed and tau > 0:
            return self._reject
        uf = _UF(tau)
        for block in _blocks_of_rgs(rgs_b):
            for r in block[1:]:
                uf.union(block[0], r)
        for block in _blocks_of_rgs(rgs_i):
            for r in block[1:]:
                uf.union(inj[block[0]], inj[r])
        tseen = tuple(sorted(set(tseen_i) | set(tseen_b)))
        return self._mk(
            tau, c_base.members, (_rgs_of(uf, tau), closed, tseen)
        )

    def join(self, c1, c2):
        rgs1, closed1, ts1 = c1.payload
        rgs2, closed2, ts2 = c2.payload
        tau = c1.tau
        closed = closed1 + closed2
        if closed >= 2 or (closed and tau > 0):
            return self._reject
        uf = _UF(tau)
        for rgs in (rgs1, rgs2):
            for block in _blocks_of_rgs(rgs):
                for r in block[1:]:
                    uf.union(block[0], r)
        tseen = tuple(sorted(set(ts1) | set(ts2)))
        return self._mk(tau, c1.members, (_rgs_of(uf, tau), closed, tseen))

    def accepting(self, c):
        if c.reject:
            return False
        rgs, closed, tseen = c.payload
        live = len(set(rgs))
        return live + closed == 1 and self.tset <= set(tseen)


class _PackingAutomaton(Automaton):
    """Every component of H isomorphic to a pattern, one X vertex each.

    Payload: the set of open components, each recorded as (terminal-rank
    mask, interior count, edge set with interiors canonically labeled,
    interior X count). Interior labels are negative so boundary ranks
    stay fixed under canonicalization. A component that outgrows every
    pattern, collects a second X vertex, or closes without matching a
    pattern rejects.
    """

    def __init__(self, name, t, patterns):
        super().__init__(name, t)
        if not patterns:
            raise GraphError("packing requires at least one pattern graph")
        self.patterns = tuple(patterns)
        self._canons = set()
        self._max_size = 0
        for P in self.patterns:
            if P.n == 0 or P.n > 8:
                raise GraphError("pattern graphs must have 1..8 vertices")
            if not P.is_connected_mask(P.full_mask):
                raise GraphError("pattern graphs must be connected")
            self._canons.add((P.n, _graph_canon(P.n, frozenset(P.edges()))))
            self._max_size = max(self._max_size, P.n)

    def _canon_open(self, bmask, kint, edges, xint):
        if kint <= 1:
            return (bmask, kint, tuple(sorted(edges)), xint)
        best = None
        for perm in permutations(range(kint)):
            rel = []
            for a, b in edges:
                a2 = a if a >= 0 else -(perm[-a - 1] + 1)
                b2 = b if b >= 0 else -(perm[-b - 1] + 1)
                rel.append((a2, b2) if a2 <= b2 else (b2, a2))
            cand = tuple(sorted(rel))
            if best is None or cand < best:
                best = cand
        return (bmask, kint, best, xint)

    def _closed_ok(self, kint, edges, xint) -> bool:
        if xint != 1:
            return False
        zero = frozenset(
            (min(-a - 1, -b - 1), max(-a - 1, -b - 1)) for a, b in edges
        )
        return (kint, _graph_canon(kint, zero)) in self._canons

    def base(self, vertices, redges, xmask):
        tau = len(vertices)
        uf = _UF(tau)
        for i, j in redges:
            uf.union(i, j)
        states = []
        for block in _blocks_of_rgs(_rgs_of(uf, tau)):
            bmask = mask_of(block)
            if len(block) > self._max_size:
                return self._reject
            if (xmask & bmask).bit_count() > 1:
                return self._reject
            bedges = [
                (i, j) for i, j in redges if (bmask >> i) & 1
            ]
            states.append((bmask, 0, tuple(sorted(bedges)), 0))
        return self._mk(tau, xmask, frozenset(states))

    def forget(self, c, keep):
        pos = {old: new for new, old in enumerate(keep)}
        kept_mask = mask_of(keep)
        new_states = []
        for bmask, kint, edges, xint in c.payload:
            drop = [r for r in bits(bmask & ~kept_mask)]
            if not drop:
                nb = _restrict_mask(bmask, keep)
                nedges = set()
                for a, b in edges:
                    a2 = pos[a] if a >= 0 else a
                    b2 = pos[b] if b >= 0 else b
                    nedges.add((a2, b2) if a2 <= b2 else (b2, a2))
                new_states.append(self._canon_open(nb, kint, nedges, xint))
                continue
            relabel = {r: -(kint + i + 1) for i, r in enumerate(drop)}
            nxint = xint + sum(1 for r in drop if (c.members >> r) & 1)
            if nxint > 1:
                return self._reject
            nkint = kint + len(drop)
            nedges = set()
            for a, b in edges:
                a2 = relabel.get(a, a)
                b2 = relabel.get(b, b)
                a2 = pos[a2] if a2 >= 0 else a2
                b2 = pos[b2] if b2 >= 0 else b2
                nedges.add((a2, b2) if a2 <= b2 else (b2, a2))
            nb = _restrict_mask(bmask & kept_mask, keep)
            if nb == 0:
                if not self._closed_ok(nkint, nedges, nxint):
                    return self._reject
                continue
            new_states.append(self._canon_open(nb, nkint, nedges, nxint))
        return self._mk(
            len(keep),
            _restrict_mask(c.members, keep),
            frozenset(new_states),
        )

    def _merge(self, tau, members, state_lists):
        states = [s for lst in state_lists for s in lst]
        if not states:
            return self._mk(tau, members, frozenset())
        uf = _UF(len(states))
        owner: dict[int, int] = {}
        for idx, (bmask, _, _, _) in enumerate(states):
            for r in bits(bmask):
                if r in owner:
                    uf.union(idx, owner[r])
                else:
                    owner[r] = idx
        groups: dict[int, list[int]] = {}
        for idx in range(len(states)):
            groups.setdefault(uf.find(idx), []).append(idx)
        merged = []
        for idxs in groups.values():
            bm = 0
            xi = 0
            off = 0
            eds = set()
            for idx in idxs:
                bmask, kint, edges, xint = states[idx]
                bm |= bmask
                xi += xint
                for a, b in edges:
                    a2 = a if a >= 0 else a - off
                    b2 = b if b >= 0 else b - off
                    eds.add((a2, b2) if a2 <= b2 else (b2, a2))
                off += kint
            if bm.bit_count() + off > self._max_size:
                return self._reject
            if xi + (members & bm).bit_count() > 1:
                return self._reject
            merged.append(self._canon_open(bm, off, eds, xi))
        return self._mk(tau, members, frozenset(merged))

    def glue(self, c_i, c_base, inj):
        mapped = []
        for bmask, kint, edges, xint in c_i.payload:
            nb = _map_mask(bmask, inj)
            nedges = set()
            for a, b in edges:
                a2 = inj[a] if a >= 0 else a
                b2 = inj[b] if b >= 0 else b
                nedges.add((a2, b2) if a2 <= b2 else (b2, a2))
            mapped.append((nb, kint, tuple(sorted(nedges)), xint))
        return self._merge(
            c_base.tau, c_base.members, [mapped, list(c_base.payload)]
        )

    def join(self, c1, c2):
        return self._merge(
            c1.tau, c1.members, [list(c1.payload), list(c2.payload)]
        )

    def accepting(self, c):
        if c.reject:
            return False
        for bmask, kint, edges, xint in c.payload:
            xcount = xint + (c.members & bmask).bit_count()
            if xcount != 1:
                return False
            verts = tuple_of(bmask)
            vmap = {r: i for i, r in enumerate(verts)}
            zero = frozenset(
                (
                    min(
                        vmap[a] if a >= 0 else len(verts) - a - 1,
                        vmap[b] if b >= 0 else len(verts) - b - 1,
                    ),
                    max(
                        vmap[a] if a >= 0 else len(verts) - a - 1,
                        vmap[b] if b >= 0 else len(verts) - b - 1,
                    ),
                )
                for a, b in edges
            )
            n = len(verts) + kint
            if (n, _graph_canon(n, zero)) not in self._canons:
                return False
        return True


class _ProductAutomaton(Automaton):
    """Conjunction of several properties over the same membership."""

    def __init__(self, name, t, parts):
        super().__init__(name, t)
        self.parts = tuple(parts)

    def _wrap(self, classes):
        tau = classes[0].tau
        members = classes[0].members
        return HClass(self.name, tau, members, tuple(classes))

    def base(self, vertices, redges, xmask):
        out = []
        for part in self.parts:
            c = part.base(vertices, redges, xmask)
            if c.reject:
                return self._reject
            out.append(c)
        return self._wrap(out)

    def forget(self, c, keep):
        out = []
        for part, sub in zip(self.parts, c.payload):
            nc = part.forget(sub, keep)
            if nc.reject:
                return self._reject
            out.append(nc)
        return self._wrap(out)

    def glue(self, c_i, c_base, inj):
        out = []
        for part, sub_i, sub_b in zip(self.parts, c_i.payload, c_base.payload):
            nc = part.glue(sub_i, sub_b, inj)
            if nc.reject:
                return self._reject
            out.append(nc)
        return self._wrap(out)

    def join(self, c1, c2):
        out = []
        for part, sub1, sub2 in zip(self.parts, c1.payload, c2.payload):
            nc = part.join(sub1, sub2)
            if nc.reject:
                return self._reject
            out.append(nc)
        return self._wrap(out)

    def accepting(self, c):
        return not c.reject and all(
            part.accepting(sub) for part, sub in zip(self.parts, c.payload)
        )


# -- construction and the public op layer -------------------------------


_NAME_ALIASES = {
    "true-t": "true",
    "q-colorable": "colorable",
    "connectivity": "connected",
    "independent": "independent-set",
}


def parse_property_spec(spec: str) -> tuple[str, dict]:
    """Parse 'name:key=value,...' property spec strings.

    T takes a comma-separated vertex list; H takes '+'-separated pattern
    names like K2, P3, C4.
    """
    name, _, rest = spec.partition(":")
    name = name.strip()
    name = _NAME_ALIASES.get(name, name)
    raw: dict[str, str] = {}
    if rest:
        key = None
        for piece in rest.split(","):
            if "=" in piece:
                key, val = piece.split("=", 1)
                key = key.strip()
                raw[key] = val.strip()
            elif key is not None:
                raw[key] = raw[key] + "," + piece.strip()
            else:
                raise GraphError(f"malformed property parameters: {spec!r}")
    params: dict = {}
    for key, val in raw.items():
        if key in ("q", "d", "t", "v"):
            try:
                params[key] = int(val)
            except ValueError:
                raise GraphError(f"parameter {key} must be an integer")
        elif key == "T":
            try:
                params[key] = tuple(
                    sorted(int(x) for x in val.split(",") if x != "")
                )
            except ValueError:
                raise GraphError("parameter T must list vertex ids")
        elif key == "H":
            names = [nm.strip() for nm in val.split("+") if nm.strip()]
            params[key] = tuple(_pattern_graph(nm) for nm in names)
            params["H_label"] = "+".join(names)
        else:
            raise GraphError(f"unknown property parameter {key!r}")
    return name, params


def _pattern_graph(name: str) -> Graph:
    name = name.strip()
    kinds = {"K": "complete", "P": "path", "C": "cycle"}
    kind = kinds.get(name[:1].upper())
    if kind is None or not name[1:].isdigit():
        raise GraphError(f"unknown pattern graph {name!r}")
    return gen_graph(kind, n=int(name[1:]))


def make_automaton(spec: str, t: int) -> Automaton:
    """Build a property automaton from its spec string.

    Supported: true, independent-set, forest, colorable:q=Q,
    max-degree:d=D, connected:T=..., packing:H=..., k-in-a-tree:T=...
    (plus the aliases true-t, q-colorable, connectivity).
    """
    name, params = parse_property_spec(spec)
    if "t" in params and params["t"] != t:
        raise GraphError(
            f"property spec pins t={params['t']} but t={t} was requested"
        )
    if name == "true":
        return _TrueAutomaton("true", t)
    if name == "independent-set":
        return _IndependentSetAutomaton("independent-set", t)
    if name == "forest":
        return _ForestAutomaton("forest", t)
    if name == "colorable":
        if "q" not in params:
            raise GraphError("colorable requires q")
        return _ColorableAutomaton(f"colorable:q={params['q']}", t, params["q"])
    if name == "max-degree":
        if "d" not in params:
            raise GraphError("max-degree requires d")
        return _MaxDegreeAutomaton(
            f"max-degree:d={params['d']}", t, params["d"]
        )
    if name == "connected":
        tset = params.get("T", ())
        label = ",".join(str(v) for v in tset)
        return _ConnectivityAutomaton(f"connected:T={label}", t, tset)
    if name == "packing":
        if "H" not in params:
            raise GraphError("packing requires H")
        return _PackingAutomaton(
            f"packing:H={params['H_label']}", t, params["H"]
        )
    if name == "k-in-a-tree":
        tset = params.get("T", ())
        label = ",".join(str(v) for v in tset)
        nm = f"k-in-a-tree:T={label}"
        return _ProductAutomaton(
            nm,
            t,
            (
                _ForestAutomaton(nm + "/forest", t),
                _ConnectivityAutomaton(nm + "/connected", t, tset),
            ),
        )
    raise GraphError(f"unsupported property {name!r}")


def base_class(A: Automaton, B: TerminalGraph, X_W) -> HClass:
    """Class of a base graph (vertices == terminals) with X ∩ W = X_W."""
    if not B.is_base():
        raise GraphError("base_class requires a base graph (V = T)")
    if B.tau > A.t + 1:
        raise GraphError(
            f"base graph has {B.tau} terminals, limit is t+1 = {A.t + 1}"
        )
    xset = set(X_W)
    if not xset <= set(B.vertices):
        raise GraphError("X_W must be a subset of the terminals")
    pos = {v: i for i, v in enumerate(B.terminals)}
    xmask = mask_of(pos[v] for v in xset)
    redges = [(pos[u], pos[v]) for u, v in B.edges]
    return A.base(B.terminals, redges, xmask)


def apply_forget(A: Automaton, c: HClass, W_prime, W) -> HClass:
    wp = tuple(W_prime)
    w = tuple(W)
    if not set(w) <= set(wp):
        raise GraphError("forget target must be a subset of the source")
    pos = {v: i for i, v in enumerate(wp)}
    return compose_forget(A, c, tuple(pos[v] for v in w))


def apply_introduce(A: Automaton, c_i: HClass, W_i, c_W: HClass, W):
    wi = tuple(W_i)
    w = tuple(W)
    if not set(wi) <= set(w):
        raise GraphError("introduce requires W_i ⊆ W")
    pos = {v: i for i, v in enumerate(w)}
    return compose_introduce(A, c_i, c_W, tuple(pos[v] for v in wi))


def apply_join(A: Automaton, c1: HClass, c2: HClass, W):
    if c1.tau != len(tuple(W)) or c2.tau != c1.tau:
        raise GraphError("join operands must live over W")
    return compose_join(A, c1, c2)


def accepting(A: Automaton, c: HClass) -> bool:
    return A.accepting(c)


# -- direct semantics ----------------------------------------------------


def semantic_eval(A: Automaton, G: Graph, F, X) -> bool:
    """Evaluate the property definition directly on (G[F], X)."""
    fmask = mask_of(F)
    xmask = mask_of(X)
    if xmask & ~fmask:
        raise GraphError("X must be a subset of F")
    name = A.name.split(":")[0].split("/")[0]
    if name == "true":
        return True
    if name == "independent-set":
        return all(G.adj_mask[v] & xmask == 0 for v in bits(xmask))
    if name == "forest":
        return xmask == fmask and _acyclic(G, fmask)
    if name == "colorable":
        return _semantic_colorable(G, xmask, A.q)
    if name == "max-degree":
        return xmask == fmask and all(
            (G.adj_mask[v] & fmask).bit_count() <= A.d for v in bits(fmask)
        )
    if name == "connected":
        return (
            xmask == fmask
            and G.is_connected_mask(fmask)
            and mask_of(A.tset) & ~fmask == 0
        )
    if name == "packing":
        return _semantic_packing(A, G, fmask, xmask)
    if name == "k-in-a-tree":
        tset = A.parts[1].tset
        return (
            xmask == fmask
            and fmask != 0
            and G.is_connected_mask(fmask)
            and _acyclic(G, fmask)
            and mask_of(tset) & ~fmask == 0
        )
    raise GraphError(f"no semantic evaluator for {A.name!r}")


def _acyclic(G: Graph, fmask: int) -> bool:
    edges = sum((G.adj_mask[v] & fmask).bit_count() for v in bits(fmask)) // 2
    comps = len(G.component_masks(G.full_mask & ~fmask))
    return edges == fmask.bit_count() - comps


def _semantic_colorable(G: Graph, xmask: int, q: int) -> bool:
    verts = list(bits(xmask))
    assignment: dict[int, int] = {}

    def go(i: int, top: int) -> bool:
        if i == len(verts):
            return True
        v = verts[i]
        used = {assignment[u] for u in assignment if G.has_edge(u, v)}
        for col in range(min(q, top + 1)):
            if col in used:
                continue
            assignment[v] = col
            if go(i + 1, max(top, col + 1)):
                return True
            del assignment[v]
        return False

    return go(0, 0)


def _semantic_packing(A, G: Graph, fmask: int, xmask: int) -> bool:
    # own isomorphism scan, independent of the class machinery
    for comp in G.component_masks(G.full_mask & ~fmask):
        if (xmask & comp).bit_count() != 1:
            return False
        verts = tuple_of(comp)
        fit = False
        for P in A.patterns:
            if P.n != len(verts):
                continue
            for perm in permutations(range(P.n)):
                if all(
                    G.has_edge(verts[i], verts[j]) == P.has_edge(perm[i], perm[j])
                    for i in range(P.n)
                    for j in range(i + 1, P.n)
                ):
                    fit = True
                    break
            if fit:
                break
        if not fit:
            return False
    return True


# -- tree decompositions and expressions --------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def validate_tree_decomposition(
    G: Graph, td: TreeDecomposition, vertices=None
) -> None:
    """Raise GraphError naming the first violated condition.

    With `vertices` given, the decomposition is checked against the
    induced subgraph G[vertices] (bags keep global vertex ids).
    """
    target = G.full_mask if vertices is None else mask_of(vertices)
    k = len(td.bags)
    if k == 0:
        if target == 0:
            return
        raise GraphError("invalid decomposition: no bags but graph is nonempty")
    for i, j in td.edges:
        if not (0 <= i < k and 0 <= j < k):
            raise GraphError("invalid decomposition: tree edge out of range")
    if len(td.edges) != k - 1:
        raise GraphError("invalid decomposition: tree must have |bags|-1 edges")
    uf = _UF(k)
    for i, j in td.edges:
        if not uf.union(i, j):
            raise GraphError("invalid decomposition: tree edges form a cycle")
    covered = 0
    for bag in td.bags:
        covered |= mask_of(bag)
    if covered & ~target:
        stray = tuple_of(covered & ~target)
        raise GraphError(
            f"invalid decomposition: bag vertex {stray[0]} is not in the graph"
        )
    if target & ~covered:
        missing = tuple_of(target & ~covered)
        raise GraphError(
            f"invalid decomposition: vertex {missing[0]} is in no bag"
        )
    for u, v in G.edges():
        if not ((target >> u) & 1 and (target >> v) & 1):
            continue
        if not any(
            u in bag and v in bag for bag in td.bags
        ):
            raise GraphError(
                f"invalid decomposition: edge ({u},{v}) is in no bag"
            )
    for v in bits(target):
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        hset = set(holding)
        seen = {holding[0]}
        frontier = [holding[0]]
        adj: dict[int, list[int]] = {i: [] for i in hset}
        for i, j in td.edges:
            if i in hset and j in hset:
                adj[i].append(j)
                adj[j].append(i)
        while frontier:
            cur = frontier.pop()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        if seen != hset:
            raise GraphError(
                f"invalid decomposition: bags containing {v} are not connected"
            )


def subgraph_tree_decompositions(G: Graph, F, limit=None):
    """Tree decompositions of G[F] (global vertex ids), one per minimal
    triangulation of the induced subgraph, deterministically ordered."""
    fverts = tuple_of(mask_of(F))
    H, old = induced_subgraph(G, fverts)
    tris = sorted(
        minimal_triangulations_small(H), key=lambda Hf: (Hf.m, Hf.edges())
    )
    out = []
    for Hf in tris:
        ct = build_clique_tree(Hf)
        bags = tuple(tuple(old[v] for v in bag) for bag in ct.bags)
        out.append(TreeDecomposition(bags, ct.edges))
        if limit is not None and len(out) >= limit:
            break
    return out


def build_clique_tree(G: Graph) -> TreeDecomposition:
    """Clique tree of a chordal graph (forest parts linked arbitrarily)."""
    cliques = maximal_cliques(G)
    if not cliques:
        cliques = [()]
    k = len(cliques)
    masks = [mask_of(c) for c in cliques]
    in_tree = [False] * k
    in_tree[0] = True
    edges = []
    for _ in range(k - 1):
        pick = None
        pick_key = None
        for i in range(k):
            if in_tree[i]:
                continue
            for j in range(k):
                if not in_tree[j]:
                    continue
                key = ((masks[i] & masks[j]).bit_count(), -i, -j)
                if pick_key is None or key > pick_key:
                    pick_key = key
                    pick = (i, j)
        i, j = pick
        in_tree[i] = True
        edges.append((min(i, j), max(i, j)))
    return TreeDecomposition(tuple(cliques), tuple(sorted(edges)))


@dataclass(frozen=True)
class ExprNode:
    kind: str  # "base", "forget", "introduce", "join"
    terminals: tuple[int, ...]
    tgraph: TerminalGraph | None = None
    op: CompositionOp | None = None
    children: tuple = ()


def expr_base(tg: TerminalGraph) -> ExprNode:
    if not tg.is_base():
        raise GraphError("expression leaves must be base graphs")
    return ExprNode("base", tg.terminals, tgraph=tg)


def expr_forget(child: ExprNode, W) -> ExprNode:
    w = tuple(W)
    pos = {v: i for i, v in enumerate(child.terminals)}
    if not set(w) <= set(pos):
        raise GraphError("forget target must be a subset of the terminals")
    keep = tuple(pos[v] for v in w)
    return ExprNode(
        "forget", w, op=forget_op(len(child.terminals), keep),
        children=(child,),
    )


def expr_introduce(child: ExprNode, base_node: ExprNode) -> ExprNode:
    if base_node.kind != "base":
        raise GraphError("second introduce operand must be a base graph")
    w = base_node.terminals
    pos = {v: i for i, v in enumerate(w)}
    inj = tuple(pos[v] for v in child.terminals)
    return ExprNode(
        "introduce", w, op=introduce_op(inj, len(w)),
        children=(child, base_node),
    )


def expr_join(a: ExprNode, b: ExprNode) -> ExprNode:
    if a.terminals != b.terminals:
        raise GraphError("join operands must share their terminal set")
    return ExprNode(
        "join", a.terminals, op=join_op(len(a.terminals)), children=(a, b)
    )


def evaluate_expression(expr: ExprNode) -> TerminalGraph:
    """The graph an expression denotes (vertex-identity gluing)."""
    if expr.kind == "base":
        return expr.tgraph
    parts = [evaluate_expression(ch) for ch in expr.children]
    verts = sorted(set().union(*(p.vertices for p in parts)))
    edges = frozenset().union(*(p.edges for p in parts))
    return TerminalGraph(tuple(verts), expr.terminals, edges)


def run_expression(A: Automaton, expr: ExprNode, X):
    """Fold the automaton over an expression; None if any step is invalid."""
    xset = set(X)

    def go(node: ExprNode):
        if node.kind == "base":
            tg = node.tgraph
            return base_class(A, tg, tuple(v for v in tg.vertices if v in xset))
        if node.kind == "forget":
            sub = go(node.children[0])
            if sub is None:
                return None
            keep = tuple(e[0] - 1 for e in node.op.matrix)
            return compose_forget(A, sub, keep)
        if node.kind == "introduce":
            sub = go(node.children[0])
            basec = go(node.children[1])
            if sub is None or basec is None:
                return None
            inj = tuple(
                j for j, row in enumerate(node.op.matrix) if row[0]
            )
            order = sorted(
                range(len(inj)),
                key=lambda k: node.op.matrix[inj[k]][0],
            )
            inj_ranked = tuple(inj[k] for k in order)
            return compose_introduce(A, sub, basec, inj_ranked)
        if node.kind == "join":
            c1 = go(node.children[0])
            c2 = go(node.children[1])
            if c1 is None or c2 is None:
                return None
            return compose_join(A, c1, c2)
        raise GraphError(f"unsupported expression node {node.kind!r}")

    missing = xset - set(evaluate_expression(expr).vertices)
    if missing:
        raise GraphError("X must be contained in the expression's vertices")
    return go(expr)


def expression_from_tree_decomposition(
    G: Graph, td: TreeDecomposition, root: int = 0, vertices=None
) -> ExprNode:
    """A composition expression evaluating to G, rooted at a chosen bag.

    Each bag becomes a base graph carrying its induced edges; child
    subtrees are forgotten down to the shared vertices, glued into a
    fresh copy of the bag base, and the pieces joined over the bag.
    With `vertices`, the expression builds G[vertices] instead (the
    decomposition must then cover exactly that subgraph).
    """
    validate_tree_decomposition(G, td, vertices)
    if not (0 <= root < len(td.bags)):
        raise GraphError("root bag index out of range")
    adj: dict[int, list[int]] = {i: [] for i in range(len(td.bags))}
    for i, j in td.edges:
        adj[i].append(j)
        adj[j].append(i)

    def bag_base(b: int) -> ExprNode:
        bag = td.bags[b]
        bmask = mask_of(bag)
        edges = frozenset(
            (u, v) for u, v in G.edges() if (bmask >> u) & 1 and (bmask >> v) & 1
        )
        return expr_base(TerminalGraph(bag, bag, edges))

    def build(b: int, parent: int) -> ExprNode:
        bag = td.bags[b]
        pieces = []
        for c in adj[b]:
            if c == parent:
                continue
            sub = build(c, b)
            shared = tuple(v for v in td.bags[c] if v in set(bag))
            if shared != sub.terminals:
                sub = expr_forget(sub, shared)
            pieces.append(expr_introduce(sub, bag_base(b)))
        if not pieces:
            return bag_base(b)
        acc = pieces[0]
        for p in pieces[1:]:
            acc = expr_join(acc, p)
        return acc

    return build(root, -1)
