"""Finite graphs with loops: constructions, homomorphism search, statistics.

Vertices are dense indices 0..n-1; display labels travel separately.  Vertex
subsets and neighbourhoods are arbitrary-precision int bitmasks, so every
set-level operation (common neighbours, fineness sweeps, domain pruning) is a
few machine-word ops per 64 vertices.  A loop is stored as bit ``v`` of
``adj[v]`` and adds 1 to the degree.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .limits import DEFAULT_GUARDS, GuardExceeded, Guards

__all__ = [
    "Graph",
    "Partition",
    "GraphStats",
    "standard_graph",
    "complete_graph",
    "cycle_graph",
    "looped_path",
    "one_graph",
    "reflexive_cycle",
    "reflexive_closure",
    "product",
    "exponential",
    "quotient",
    "check_homomorphism",
    "find_homomorphism",
    "is_colorable",
    "chromatic_number",
    "odd_girth",
    "graph_stats",
    "min_diameter_spanning_tree",
    "common_neighbors",
    "nu_mask",
    "is_fine",
    "is_dismantlable",
    "clique_graph_B",
    "looped_subgraph_S",
    "is_isomorphic",
    "same_structure",
    "graph_to_json",
    "graph_from_json",
    "INFINITE",
]

INFINITE = float("inf")


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Undirected graph with loops on vertices 0..n-1."""

    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length != n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"neighbour out of range at vertex {v}")
            for w in bits(row):
                if not (self.adj[w] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency {v}-{w}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(v) for v in range(self.n)))
        elif len(self.labels) != self.n:
            raise ValueError("labels length != n")

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(n, tuple(adj), tuple(labels) if labels else ())

    # -- basic queries -----------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        """Neighbour count; a loop contributes 1."""
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """Unordered edge pairs (u <= v), loops as (v, v), each once."""
        out = []
        for u in range(self.n):
            for v in bits(self.adj[u] >> u << u):
                out.append((u, v))
        return out

    def directed_edges(self) -> list[tuple[int, int]]:
        """All ordered adjacent pairs, loops once as (v, v)."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u])]

    @cached_property
    def looped_mask(self) -> int:
        m = 0
        for v in range(self.n):
            if (self.adj[v] >> v) & 1:
                m |= 1 << v
        return m

    def is_reflexive(self) -> bool:
        return self.looped_mask == (1 << self.n) - 1

    def is_loopless(self) -> bool:
        return self.looped_mask == 0

    def relabel(self, labels: Sequence[str]) -> "Graph":
        return Graph(self.n, self.adj, tuple(labels))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph on the given vertices, in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise ValueError("duplicate vertices")
        adj = [0] * len(vertices)
        for i, v in enumerate(vertices):
            for w in bits(self.adj[v]):
                j = pos.get(w)
                if j is not None:
                    adj[i] |= 1 << j
        return Graph(len(vertices), tuple(adj),
                     tuple(self.labels[v] for v in vertices))


@dataclass(frozen=True)
class Partition:
    """Partition of 0..n-1 into blocks, canonicalized by minimum member."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = [False] * self.n
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if tuple(sorted(b)) != b:
                raise ValueError("block not sorted")
            for v in b:
                if not (0 <= v < self.n) or seen[v]:
                    raise ValueError("not a partition")
                seen[v] = True
        if not all(seen):
            raise ValueError("partition misses vertices")
        if list(self.blocks) != sorted(self.blocks, key=lambda b: b[0]):
            raise ValueError("blocks not sorted by minimum")

    @staticmethod
    def from_blocks(n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        bs = sorted(tuple(sorted(b)) for b in blocks)
        return Partition(n, tuple(bs))

    @staticmethod
    def from_labels(labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for v, g in enumerate(labels):
            groups.setdefault(g, []).append(v)
        return Partition.from_blocks(len(labels), groups.values())

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, b in enumerate(self.blocks):
            for v in b:
                out[v] = i
        return tuple(out)


# ---------------------------------------------------------------------------
# standard constructions

def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs >= 1 vertex")
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs >= 3 vertices")
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def looped_path(m: int) -> Graph:
    """Path 0..m with a loop at 0.  ``looped_path(0)`` is the one-vertex loop."""
    if m < 0:
        raise ValueError("negative path length")
    edges = [(0, 0)] + [(i, i + 1) for i in range(m)]
    return Graph.from_edges(m + 1, edges)


def one_graph() -> Graph:
    """Single looped vertex: the terminal graph."""
    return Graph(1, (1,))


def reflexive_closure(g: Graph) -> Graph:
    return Graph(g.n, tuple(g.adj[v] | (1 << v) for v in range(g.n)), g.labels)


def reflexive_cycle(n: int) -> Graph:
    """Cycle with all loops added."""
    return reflexive_closure(cycle_graph(n))


def standard_graph(kind: str, param: int | None = None) -> Graph:
    """Named family dispatch: complete, cycle, looped_path, one, reflexive_cycle."""
    if kind == "one":
        if param not in (None, 1):
            raise ValueError("'one' takes no size")
        return one_graph()
    if param is None or param < 1:
        raise ValueError(f"'{kind}' needs a positive size")
    if kind == "complete":
        return complete_graph(param)
    if kind == "cycle":
        return cycle_graph(param)
    if kind == "reflexive_cycle":
        return reflexive_cycle(param)
    if kind == "looped_path":
        return looped_path(param)
    raise ValueError(f"unknown graph kind '{kind}'")


# ---------------------------------------------------------------------------
# product, exponential, quotient

def product(g: Graph, h: Graph) -> Graph:
    """Categorical product: (u,x) ~ (v,y) iff u~v and x~y.  Index = u*|h|+x."""
    adj = []
    for u in range(g.n):
        for x in range(h.n):
            row = 0
            for v in bits(g.adj[u]):
                row |= h.adj[x] << (v * h.n)
            adj.append(row)
    labels = tuple(f"({g.labels[u]},{h.labels[x]})"
                   for u in range(g.n) for x in range(h.n))
    return Graph(g.n * h.n, tuple(adj), labels)


def exponential(g: Graph, h: Graph, guards: Guards = DEFAULT_GUARDS) -> Graph:
    """Graph of all vertex maps V(g) -> V(h); f ~ f' iff u~v implies f(u)~f'(v).

    Vertices are tuples in lexicographic order of (f(0),...,f(n-1)).
    """
    count = h.n ** g.n
    if count > guards.exponential_vertices:
        raise GuardExceeded("exponential_vertices", guards.exponential_vertices, count)
    maps = list(itertools.product(range(h.n), repeat=g.n))
    dedges = g.directed_edges()
    adj = [0] * count
    for i, f in enumerate(maps):
        for j in range(i, count):
            fp = maps[j]
            if all((h.adj[f[u]] >> fp[v]) & 1 for u, v in dedges):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    labels = tuple("".join(h.labels[x] if len(h.labels[x]) == 1 else f"[{h.labels[x]}]"
                           for x in f) for f in maps)
    return Graph(count, tuple(adj), labels)


def exponential_vertex_maps(g: Graph, h: Graph) -> list[tuple[int, ...]]:
    """Vertex payloads of ``exponential(g, h)`` in construction order."""
    return list(itertools.product(range(h.n), repeat=g.n))


def quotient(g: Graph, part: Partition) -> Graph:
    """Quotient graph: blocks adjacent iff some members are adjacent."""
    if part.n != g.n:
        raise ValueError("partition size mismatch")
    k = len(part.blocks)
    block_of = part.block_of
    adj = [0] * k
    for u in range(g.n):
        bu = block_of[u]
        for v in bits(g.adj[u]):
            adj[bu] |= 1 << block_of[v]
    labels = tuple("{" + ",".join(g.labels[v] for v in b) + "}" for b in part.blocks)
    return Graph(k, tuple(adj), labels)


# ---------------------------------------------------------------------------
# homomorphisms

def check_homomorphism(f: Sequence[int], g: Graph, h: Graph) -> bool:
    """Is f: V(g) -> V(h) edge-preserving (loops included)?"""
    if len(f) != g.n:
        return False
    if any(not (0 <= x < h.n) for x in f):
        return False
    return all((h.adj[f[u]] >> f[v]) & 1 for u, v in g.directed_edges())


def _search_order(g: Graph) -> list[int]:
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


def find_homomorphism(g: Graph, h: Graph) -> tuple[int, ...] | None:
    """First homomorphism g -> h in the canonical search order, or None.

    Variables are processed by descending degree (ties by index), values by
    ascending index; forward checking and unit propagation only prune values
    that cannot extend the current prefix, so the result is the
    lexicographically first homomorphism in that variable order.
    """
    if g.n == 0:
        return ()
    if h.n == 0:
        return None
    full = (1 << h.n) - 1
    order = _search_order(g)
    domains = [full] * g.n
    for v in range(g.n):
        if (g.adj[v] >> v) & 1:
            domains[v] &= h.looped_mask
        if domains[v] == 0:
            return None
    assignment: list[int | None] = [None] * g.n

    def propagate(domains: list[int], queue: deque[int]) -> bool:
        """Propagate singleton domains in place; False on wipeout."""
        while queue:
            u = queue.popleft()
            x = domains[u].bit_length() - 1
            for w in bits(g.adj[u]):
                if domains[w] & ~h.adj[x]:
                    domains[w] &= h.adj[x]
                    if domains[w] == 0:
                        return False
                    if domains[w] & (domains[w] - 1) == 0:
                        queue.append(w)
        return True

    def solve(pos: int, domains: list[int]) -> bool:
        while pos < g.n and domains[order[pos]].bit_count() == 1:
            v = order[pos]
            assignment[v] = domains[v].bit_length() - 1
            pos += 1
        if pos == g.n:
            return True
        v = order[pos]
        for value in bits(domains[v]):
            nd = domains[:]
            nd[v] = 1 << value
            if propagate(nd, deque([v])):
                assignment[v] = value
                if solve(pos + 1, nd):
                    return True
        assignment[v] = None
        return False

    seeds = deque(v for v in range(g.n) if domains[v].bit_count() == 1)
    if not propagate(domains, seeds):
        return None
    if solve(0, domains):
        return tuple(assignment)  # type: ignore[arg-type]
    return None


def is_colorable(g: Graph, k: int) -> bool:
    """Exact k-colorability (loops make this False for every k)."""
    if g.looped_mask:
        return False
    if g.n == 0:
        return True
    if k <= 0:
        return False
    order = _search_order(g)
    full = (1 << k) - 1
    domains = [full] * g.n

    def solve(pos: int, domains: list[int], used: int) -> bool:
        while pos < g.n and domains[order[pos]].bit_count() == 1:
            v = order[pos]
            c = domains[v].bit_length() - 1
            used = max(used, c + 1)
            for w in bits(g.adj[v]):
                if domains[w] & (1 << c):
                    domains[w] &= ~(1 << c)
                    if domains[w] == 0:
                        return False
            pos += 1
        if pos == g.n:
            return True
        v = order[pos]
        # colours above the first unused one are interchangeable: cap at used+1
        cap = min(k, used + 1)
        for c in bits(domains[v] & ((1 << cap) - 1)):
            nd = domains[:]
            nd[v] = 1 << c
            ok = True
            for w in bits(g.adj[v]):
                nd[w] &= ~(1 << c)
                if nd[w] == 0:
                    ok = False
                    break
            if ok and solve(pos + 1, nd, max(used, c + 1)):
                return True
        return False

    return solve(0, domains, 0)


def chromatic_number(g: Graph) -> int | float:
    """Exact chromatic number; INFINITE when a loop is present."""
    if g.looped_mask:
        return INFINITE
    if g.n == 0:
        return 0
    if all(a == 0 for a in g.adj):
        return 1
    for k in range(2, g.n + 1):
        if is_colorable(g, k):
            return k
    return g.n  # complete graph fallthrough (is_colorable(g, n) is always True)


def odd_girth(g: Graph) -> int | float:
    """Length of the shortest odd cycle (a loop counts as 1); INFINITE if none.

    A shortest odd closed walk is always an odd cycle, so this runs BFS on the
    bipartite double cover and takes min over v of the odd distance v -> v.
    """
    if g.looped_mask:
        return 1
    best = INFINITE
    for s in range(g.n):
        dist: dict[tuple[int, int], int] = {(s, 0): 0}
        queue = deque([(s, 0)])
        while queue:
            v, par = queue.popleft()
            d = dist[(v, par)]
            if d + 1 >= best:
                continue
            for w in bits(g.adj[v]):
                key = (w, par ^ 1)
                if key not in dist:
                    dist[key] = d + 1
                    queue.append(key)
        if (s, 1) in dist:
            best = min(best, dist[(s, 1)])
    return best


def _bfs_dist(g: Graph, source_mask: int) -> list[int | float]:
    dist: list[int | float] = [INFINITE] * g.n
    queue: deque[int] = deque()
    for v in bits(source_mask):
        dist[v] = 0
        queue.append(v)
    while queue:
        v = queue.popleft()
        for w in bits(g.adj[v] & ~(1 << v)):
            if dist[w] is INFINITE:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


@dataclass(frozen=True)
class GraphStats:
    max_degree: int
    connected: bool
    diameter: int | float


def graph_stats(g: Graph) -> GraphStats:
    """Max degree (loops add 1), connectivity, diameter (INFINITE if disconnected)."""
    maxdeg = max((g.degree(v) for v in range(g.n)), default=0)
    if g.n == 0:
        return GraphStats(0, True, 0)
    diam: int | float = 0
    connected = True
    for v in range(g.n):
        dist = _bfs_dist(g, 1 << v)
        ecc = max(dist)
        if ecc is INFINITE:
            connected = False
            diam = INFINITE
            break
        diam = max(diam, ecc)
    return GraphStats(maxdeg, connected, diam)


def min_diameter_spanning_tree(g: Graph) -> int:
    """Minimum diameter over spanning trees, via the absolute 1-centre.

    For unit edge lengths the optimum tree is a BFS tree from either a vertex
    (diameter 2*ecc) or an edge midpoint (diameter 1 + 2*max_w min(d(u,w),d(v,w)));
    loops are ignored.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    dist = [_bfs_dist(g, 1 << v) for v in range(g.n)]
    if any(d is INFINITE for d in dist[0]):
        raise ValueError("graph is disconnected")
    if g.n == 1:
        return 0
    best = min(2 * max(dist[v][w] for w in range(g.n)) for v in range(g.n))
    for u, v in g.edges():
        if u == v:
            continue
        ecc = max(min(dist[u][w], dist[v][w]) for w in range(g.n))
        best = min(best, 1 + 2 * ecc)
    return int(best)


# ---------------------------------------------------------------------------
# common neighbours, fineness, dismantling, clique structures

def nu_mask(g: Graph, mask: int) -> int:
    """Bitmask of vertices adjacent to everything in ``mask`` (all if empty)."""
    out = (1 << g.n) - 1
    for v in bits(mask):
        out &= g.adj[v]
    return out


def common_neighbors(g: Graph, vertices: Iterable[int]) -> frozenset[int]:
    return frozenset(bits(nu_mask(g, mask_of(vertices))))


def is_fine(g: Graph, guards: Guards = DEFAULT_GUARDS) -> bool:
    """Does every nonempty M with nu(M) nonempty satisfy nu(M) & nu^2(M) != 0?

    Sweeps all 2^n - 1 nonempty subsets with an incremental nu table.
    """
    if g.n > guards.fine_vertices:
        raise GuardExceeded("fine_vertices", guards.fine_vertices, g.n)
    full = (1 << g.n) - 1
    table = [0] * (1 << g.n)
    table[0] = full
    for m in range(1, 1 << g.n):
        low = m & -m
        table[m] = table[m ^ low] & g.adj[low.bit_length() - 1]
    for m in range(1, 1 << g.n):
        nu = table[m]
        if nu and not (nu & table[nu]):
            return False
    return True


def is_dismantlable(g: Graph) -> bool:
    """Greedy vertex folding for reflexive graphs.

    Repeatedly removes any v dominated by some other vertex w
    (N[v] subset of N[w] within the remaining graph); True iff one vertex is
    left.  The fold order is index-greedy; dismantlability does not depend on
    the removal order.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if not g.is_reflexive():
        raise ValueError("dismantlability is defined for reflexive graphs")
    alive = (1 << g.n) - 1
    while alive.bit_count() > 1:
        removed = False
        for v in bits(alive):
            nv = g.adj[v] & alive
            for w in bits(alive & ~(1 << v)):
                if nv & ~(g.adj[w] & alive) == 0:
                    alive &= ~(1 << v)
                    removed = True
                    break
            if removed:
                break
        if not removed:
            return False
    return True


def looped_subgraph_S(g: Graph) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on looped vertices, with the vertex selection."""
    verts = tuple(bits(g.looped_mask))
    return g.induced(verts), verts


def clique_graph_B(g: Graph, guards: Guards = DEFAULT_GUARDS
                   ) -> tuple[Graph, tuple[tuple[int, ...], ...]]:
    """Reflexive graph of nonempty cliques of looped vertices, adjacency = containment."""
    sub, verts = looped_subgraph_S(g)
    cliques: list[int] = []

    def extend(s_mask: int, cand: int) -> None:
        if len(cliques) > guards.clique_count:
            raise GuardExceeded("clique_count", guards.clique_count)
        for w in bits(cand):
            m = s_mask | (1 << w)
            cliques.append(m)
            extend(m, cand & sub.adj[w] & ~((1 << (w + 1)) - 1))

    extend(0, (1 << sub.n) - 1)
    cliques.sort(key=lambda m: tuple(bits(m)))
    k = len(cliques)
    adj = [0] * k
    for i, a in enumerate(cliques):
        for j in range(i, k):
            b = cliques[j]
            if a & ~b == 0 or b & ~a == 0:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    members = tuple(tuple(verts[x] for x in bits(m)) for m in cliques)
    labels = tuple("{" + ",".join(g.labels[v] for v in mem) + "}" for mem in members)
    return Graph(k, tuple(adj), labels), members


# ---------------------------------------------------------------------------
# isomorphism (desk scale)

def same_structure(g: Graph, h: Graph) -> bool:
    """Equal vertex count and adjacency (labels ignored)."""
    return g.n == h.n and g.adj == h.adj


def is_isomorphic(g: Graph, h: Graph) -> bool:
    """Backtracking isomorphism test with degree/loop refinement (small graphs)."""
    if g.n != h.n:
        return False
    if sorted(g.adj[v].bit_count() for v in range(g.n)) != \
       sorted(h.adj[v].bit_count() for v in range(h.n)):
        return False
    if g.looped_mask.bit_count() != h.looped_mask.bit_count():
        return False

    def sig(gr: Graph, v: int) -> tuple:
        ndegs = sorted(gr.adj[w].bit_count() for w in bits(gr.adj[v]))
        return (gr.adj[v].bit_count(), (gr.adj[v] >> v) & 1, tuple(ndegs))

    gs = [sig(g, v) for v in range(g.n)]
    hs = [sig(h, v) for v in range(h.n)]
    if sorted(gs) != sorted(hs):
        return False
    order = sorted(range(g.n), key=lambda v: (gs[v], v))
    image: list[int | None] = [None] * g.n
    used = [False] * h.n

    def match(i: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        for w in range(h.n):
            if used[w] or hs[w] != gs[v]:
                continue
            ok = True
            for u in order[:i]:
                if g.has_edge(v, u) != h.has_edge(w, image[u]):  # type: ignore[arg-type]
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                if match(i + 1):
                    return True
                image[v] = None
                used[w] = False
        return False

    return match(0)


# ---------------------------------------------------------------------------
# JSON round trip

def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "labels": list(g.labels),
            "edges": [[u, v] for u, v in g.edges()]}


def graph_from_json(data: dict) -> Graph:
    labels = data.get("labels") or None
    return Graph.from_edges(int(data["n"]),
                            [(int(u), int(v)) for u, v in data["edges"]],
                            labels)
