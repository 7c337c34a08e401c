"""Graphs with lengths and the operations on them.

A graph is stored through its oriented edges: `origin[y]` is the start
vertex, `inv[y]` the reverse edge (with `inv[y] == y` for a half-edge),
and `length[y]` a positive integer with length[y] == length[inv[y]].
Vertices are 0..n-1 and may carry positive integer weights.

Operations: quotient by a finite group action, star (drop half-edges),
minimization (iterated leaf pruning), resolution (split length-l edges
into l-chains), dual graph, first Betti number, and a canonical form for
isomorphism testing of the small graphs arising here.
"""

from dataclasses import dataclass, field
from itertools import permutations

__all__ = ["GraphWithLengths", "GroupActionOnGraph", "quotient_graph",
           "quotient_graph_with_maps", "induced_action", "star_with_action",
           "resolve_with_action"]


@dataclass(frozen=True)
class GraphWithLengths:
    n_vertices: int
    origin: tuple[int, ...]
    inv: tuple[int, ...]
    length: tuple[int, ...]
    vertex_weight: tuple[int, ...] | None = None

    def __post_init__(self):
        m = len(self.origin)
        if not (len(self.inv) == len(self.length) == m):
            raise ValueError("edge arrays must have equal length")
        for y in range(m):
            yb = self.inv[y]
            if not 0 <= yb < m or self.inv[yb] != y:
                raise ValueError("inv is not an involution")
            if self.length[y] != self.length[yb] or self.length[y] < 1:
                raise ValueError("lengths must be positive and inv-symmetric")
            if not 0 <= self.origin[y] < self.n_vertices:
                raise ValueError("origin out of range")

    # -- basic accessors ----------------------------------------------------

    def terminus(self, y: int) -> int:
        return self.origin[self.inv[y]]

    def n_oriented(self) -> int:
        return len(self.origin)

    def is_half_edge(self, y: int) -> bool:
        return self.inv[y] == y

    def unoriented_edges(self):
        """One representative per unoriented edge {y, inv(y)}."""
        return [y for y in range(len(self.origin)) if y <= self.inv[y]]

    def edges_at(self, x: int):
        return [y for y in range(len(self.origin)) if self.origin[y] == x]

    def degree(self, x: int) -> int:
        """Number of oriented edges out of x (loops count twice in total)."""
        return sum(1 for y in range(len(self.origin)) if self.origin[y] == x)

    def total_length(self) -> int:
        return sum(self.length[y] for y in self.unoriented_edges())

    # -- operations ---------------------------------------------------------

    def star(self) -> "GraphWithLengths":
        """The graph with all half-edges removed."""
        keep = [y for y in range(len(self.origin)) if not self.is_half_edge(y)]
        return self._subgraph_edges(keep, range(self.n_vertices))

    def _subgraph_edges(self, keep_edges, keep_vertices) -> "GraphWithLengths":
        vmap = {v: i for i, v in enumerate(keep_vertices)}
        emap = {y: i for i, y in enumerate(keep_edges)}
        return GraphWithLengths(
            len(vmap),
            tuple(vmap[self.origin[y]] for y in keep_edges),
            tuple(emap[self.inv[y]] for y in keep_edges),
            tuple(self.length[y] for y in keep_edges),
            None if self.vertex_weight is None else
            tuple(self.vertex_weight[v] for v in keep_vertices),
        )

    def minimize(self) -> "GraphWithLengths":
        """Drop half-edges, then prune degree-1 vertices one at a time.

        Idempotent; a tree component collapses to a single vertex (loops
        count twice toward degree, so a lone loop survives).
        """
        g = self.star()
        alive_e = set(range(g.n_oriented()))
        alive_v = set(range(g.n_vertices))
        while True:
            deg = {v: 0 for v in alive_v}
            for y in alive_e:
                deg[g.origin[y]] += 1
            leaves = sorted(v for v in alive_v if deg[v] == 1)
            if not leaves:
                break
            v = leaves[0]
            y = next(z for z in alive_e if g.origin[z] == v)
            alive_e.discard(y)
            alive_e.discard(g.inv[y])
            alive_v.discard(v)
        return g._subgraph_edges(sorted(alive_e), sorted(alive_v))

    def _components(self):
        parent = list(range(self.n_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for y in range(self.n_oriented()):
            a, b = find(self.origin[y]), find(self.terminus(y))
            if a != b:
                parent[a] = b
        groups = {}
        for v in range(self.n_vertices):
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def resolve(self) -> "GraphWithLengths":
        """Replace each edge of length l > 1 by a chain of l unit edges."""
        if any(self.is_half_edge(y) and self.length[y] > 1
               for y in self.unoriented_edges()):
            raise ValueError("cannot resolve a half-edge of length > 1")
        origin, inv, length = [], [], []
        n = self.n_vertices
        for y in self.unoriented_edges():
            ell = self.length[y]
            a, b = self.origin[y], self.terminus(y)
            if self.is_half_edge(y):
                e_id = len(origin)
                origin.append(a)
                inv.append(e_id)
                length.append(1)
                continue
            verts = [a] + list(range(n, n + ell - 1)) + [b]
            n += ell - 1
            for k in range(ell):
                e_id = len(origin)
                origin += [verts[k], verts[k + 1]]
                inv += [e_id + 1, e_id]
                length += [1, 1]
        return GraphWithLengths(n, tuple(origin), tuple(inv), tuple(length))

    def dual_graph(self) -> "GraphWithLengths":
        """Vertices = unoriented edges; one connecting edge per shared vertex."""
        uned = self.unoriented_edges()
        idx = {y: i for i, y in enumerate(uned)}
        origin, inv = [], []
        for v in range(self.n_vertices):
            incident = []
            for y in uned:
                mult = (self.origin[y] == v) + (self.terminus(y) == v)
                if self.is_half_edge(y):
                    mult = min(mult, 1)
                if mult:
                    incident.append(y)
            for i in range(len(incident)):
                for j in range(i + 1, len(incident)):
                    e_id = len(origin)
                    origin += [idx[incident[i]], idx[incident[j]]]
                    inv += [e_id + 1, e_id]
        return GraphWithLengths(len(uned), tuple(origin), tuple(inv),
                                tuple([1] * len(origin)))

    def betti(self) -> int:
        """First Betti number E - V + 1 of a connected graph."""
        if len(self._components()) != 1:
            raise ValueError("betti requires a connected graph")
        return len(self.unoriented_edges()) - self.n_vertices + 1

    # -- canonical form -----------------------------------------------------

    def canonical_key(self):
        """Isomorphism-invariant canonical form (graphs here are tiny).

        Refines vertices by (weight, sorted incident (length, loop?,
        half?) data), then tries all orderings within refinement classes
        and takes the lexicographically least edge multiset.
        """
        n = self.n_vertices
        uned = self.unoriented_edges()

        def vert_sig(v):
            inc = []
            for y in uned:
                a, b = self.origin[y], self.terminus(y)
                if v in (a, b):
                    kind = ("half" if self.is_half_edge(y)
                            else "loop" if a == b else "edge")
                    mult = 2 if (a == b == v and kind == "loop") else 1
                    inc += [(self.length[y], kind)] * mult
            w = self.vertex_weight[v] if self.vertex_weight else 0
            return (w, tuple(sorted(inc)))

        sigs = [vert_sig(v) for v in range(n)]
        # refine by neighbor signatures until the partition stabilizes
        for _ in range(n):
            ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
            nbr = []
            for v in range(n):
                around = []
                for y in range(self.n_oriented()):
                    if self.origin[y] == v and not self.is_half_edge(y):
                        around.append((self.length[y], ranks[sigs[self.terminus(y)]]))
                nbr.append((ranks[sigs[v]], tuple(sorted(around))))
            if len(set(nbr)) == len(set(sigs)):
                break
            sigs = nbr
        order = sorted(range(n), key=lambda v: sigs[v])
        blocks = []
        for v in order:
            if blocks and sigs[blocks[-1][-1]] == sigs[v]:
                blocks[-1].append(v)
            else:
                blocks.append([v])
        from math import factorial, prod
        if prod(factorial(len(b)) for b in blocks) > 10**6:
            raise ValueError("graph too symmetric for brute-force canonization")
        wt = self.vertex_weight or tuple([0] * n)
        best = None
        for perm_parts in _product_permutations(blocks):
            relab = {}
            pos = 0
            for part in perm_parts:
                for v in part:
                    relab[v] = pos
                    pos += 1
            edges = []
            for y in uned:
                a, b = relab[self.origin[y]], relab[self.terminus(y)]
                if a > b:
                    a, b = b, a
                edges.append((a, b, self.length[y], self.is_half_edge(y)))
            inv_relab = sorted(range(n), key=lambda v: relab[v])
            key = (tuple(sorted(edges)), tuple(wt[v] for v in inv_relab))
            if best is None or key < best:
                best = key
        return (n, best)


def _product_permutations(blocks):
    if not blocks:
        yield []
        return
    for p in permutations(blocks[0]):
        for rest in _product_permutations(blocks[1:]):
            yield [list(p)] + rest


@dataclass
class GroupActionOnGraph:
    """A finite group acting on a graph, given by its full element list.

    Each element is a pair (vertex permutation, oriented-edge permutation);
    the identity must be included.  Validation checks compatibility with
    origin, inversion and lengths.
    """

    graph: GraphWithLengths
    elements: list[tuple[tuple[int, ...], tuple[int, ...]]]

    def __post_init__(self):
        g = self.graph
        for vp, ep in self.elements:
            if sorted(vp) != list(range(g.n_vertices)) or \
               sorted(ep) != list(range(g.n_oriented())):
                raise ValueError("action components must be permutations")
            for y in range(g.n_oriented()):
                if g.origin[ep[y]] != vp[g.origin[y]]:
                    raise ValueError("action does not commute with origin")
                if ep[g.inv[y]] != g.inv[ep[y]]:
                    raise ValueError("action does not commute with inversion")
                if g.length[ep[y]] != g.length[y]:
                    raise ValueError("action does not preserve lengths")


def quotient_graph(action: GroupActionOnGraph) -> GraphWithLengths:
    """Quotient graph with lengths: orbit lengths scale by stabilizer size.

    An oriented-edge orbit that contains the reverse of its members
    becomes a half-edge.
    """
    return quotient_graph_with_maps(action)[0]


def quotient_graph_with_maps(action: GroupActionOnGraph):
    """Quotient graph plus the vertex/edge orbit projection maps."""
    g = action.graph
    elems = action.elements
    n_e = g.n_oriented()

    def orbit_edges(y):
        return {ep[y] for _, ep in elems}

    def orbit_vertices(v):
        return {vp[v] for vp, _ in elems}

    v_orbit = {}
    v_reps = []
    for v in range(g.n_vertices):
        if v not in v_orbit:
            orb = orbit_vertices(v)
            idx = len(v_reps)
            v_reps.append(min(orb))
            for u in orb:
                v_orbit[u] = idx

    e_orbit = {}
    orbits = []
    for y in range(n_e):
        if y not in e_orbit:
            orb = orbit_edges(y)
            idx = len(orbits)
            orbits.append(sorted(orb))
            for z in orb:
                e_orbit[z] = idx

    origin, inv, length = [], [], []
    for orb in orbits:
        y = orb[0]
        stab = len(elems) // len(orb)
        origin.append(v_orbit[g.origin[y]])
        if e_orbit[g.inv[y]] == e_orbit[y]:
            inv.append(len(inv))  # half-edge
        else:
            inv.append(None)
        length.append(g.length[y] * stab)
    # fill in reverse pointers between paired orbits
    for i, orb in enumerate(orbits):
        if inv[i] is None:
            inv[i] = e_orbit[g.inv[orb[0]]]
    weights = None
    if g.vertex_weight is not None:
        weights = tuple(g.vertex_weight[v_reps[i]] * len(elems) //
                        len(orbit_vertices(v_reps[i])) for i in range(len(v_reps)))
    q = GraphWithLengths(len(v_reps), tuple(origin), tuple(inv),
                         tuple(length), weights)
    vmap = [v_orbit[v] for v in range(g.n_vertices)]
    emap = [e_orbit[y] for y in range(n_e)]
    return q, vmap, emap


def induced_action(quot, vmap, emap, vperm, eperm):
    """Push an automorphism through a quotient projection.

    The automorphism must normalize the quotient group action (always true
    here: Atkin-Lehner groups are abelian)."""
    n_v = quot.n_vertices
    n_e = quot.n_oriented()
    qv = [None] * n_v
    qe = [None] * n_e
    for v, o in enumerate(vmap):
        qv[o] = vmap[vperm[v]]
    for y, o in enumerate(emap):
        qe[o] = emap[eperm[y]]
    if None in qv or None in qe:
        raise ValueError("projection maps are not surjective")
    return tuple(qv), tuple(qe)


def star_with_action(g: GraphWithLengths, elements):
    """Star of g together with the restricted automorphisms."""
    keep = [y for y in range(g.n_oriented()) if not g.is_half_edge(y)]
    emap = {y: i for i, y in enumerate(keep)}
    s = g._subgraph_edges(keep, range(g.n_vertices))
    out = [(vp, tuple(emap[ep[y]] for y in keep)) for vp, ep in elements]
    return s, out


def resolve_with_action(g: GraphWithLengths, elements):
    """Resolution of g together with the automorphisms pushed along chains.

    Chain vertices and unit edges inherit the action edgewise: the chain of
    an unoriented edge maps to the chain of its image, with positions
    reversed when the image representative is the opposite orientation.
    """
    if any(g.is_half_edge(y) for y in range(g.n_oriented())):
        raise ValueError("resolve the star (no half-edges) before acting")
    uned = g.unoriented_edges()
    n = g.n_vertices
    chain_v = {}   # (rep edge y, k) -> new vertex id, k = 0..l-2
    seg_e = {}     # (rep edge y, s) -> oriented edge id of segment s, forward
    origin, inv, length = [], [], []
    for y in uned:
        ell = g.length[y]
        a, b = g.origin[y], g.terminus(y)
        verts = [a]
        for k in range(ell - 1):
            chain_v[(y, k)] = n
            verts.append(n)
            n += 1
        verts.append(b)
        for s in range(ell):
            e_id = len(origin)
            seg_e[(y, s)] = e_id
            origin += [verts[s], verts[s + 1]]
            inv += [e_id + 1, e_id]
            length += [1, 1]
    res = GraphWithLengths(n, tuple(origin), tuple(inv), tuple(length))

    def push(vp, ep):
        nvp = list(vp) + [0] * (n - g.n_vertices)
        nep = [0] * res.n_oriented()
        for y in uned:
            ell = g.length[y]
            img = ep[y]
            rev = img > g.inv[img]
            rep = min(img, g.inv[img])
            for k in range(ell - 1):
                nvp[chain_v[(y, k)]] = chain_v[(rep, ell - 2 - k if rev else k)]
            for s in range(ell):
                src = seg_e[(y, s)]
                if rev:
                    dst = res.inv[seg_e[(rep, ell - 1 - s)]]
                else:
                    dst = seg_e[(rep, s)]
                nep[src] = dst
                nep[res.inv[src]] = res.inv[dst]
        return tuple(nvp), tuple(nep)

    return res, [push(vp, ep) for vp, ep in elements]
