"""Finite permutation groups acting on graphs and posets.

Groups store explicit permutations of a reference set with the identity
at index 0; actions attach one carrier permutation per group element.
Left actions satisfy a(gh) = a(g)a(h), right actions a(gh) = a(h)a(g).
Orbit representatives and quotient labels always use the minimum index,
so every quotient object is reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .graphs import Graph, Partition, bits, product, quotient
from .limits import DEFAULT_GUARDS, GuardExceeded, Guards
from .posets import (Poset, atom_graph, chain_poset, induced_subposet)


def compose_perm(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p o q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def _is_perm(p: Sequence[int], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple[tuple[int, ...], ...]
    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]

    def __post_init__(self):
        n = len(self.elements[0])
        idx = {p: i for i, p in enumerate(self.elements)}
        if len(idx) != len(self.elements):
            raise ValueError("duplicate group elements")
        if self.elements[0] != tuple(range(n)):
            raise ValueError("identity must be element 0")
        for i, p in enumerate(self.elements):
            if not _is_perm(p, n):
                raise ValueError(f"element {i} is not a permutation")
            for j, q in enumerate(self.elements):
                if self.table[i][j] != idx[compose_perm(p, q)]:
                    raise ValueError(f"table wrong at {i},{j}")
            if self.table[i][self.inverse[i]] != 0:
                raise ValueError(f"inverse wrong at {i}")

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]


def make_group(generators: Sequence[Sequence[int]],
               guards: Guards = DEFAULT_GUARDS) -> FiniteGroup:
    """Closure of generating permutations; breadth-first, identity first."""
    if not generators:
        raise ValueError("need at least one generator (identity is fine)")
    n = len(generators[0])
    gens = [tuple(g) for g in generators]
    for g in gens:
        if not _is_perm(g, n):
            raise ValueError(f"generator {g} is not a permutation")
    ident = tuple(range(n))
    elements = [ident]
    seen = {ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = compose_perm(p, g)
            if q not in seen:
                if len(elements) >= guards.group_order:
                    raise GuardExceeded("group_order", guards.group_order,
                                        len(elements) + 1)
                seen.add(q)
                elements.append(q)
                queue.append(q)
    idx = {p: i for i, p in enumerate(elements)}
    table = tuple(tuple(idx[compose_perm(p, q)] for q in elements)
                  for p in elements)
    inverse = tuple(table[i].index(0) for i in range(len(elements)))
    return FiniteGroup(tuple(elements), table, inverse)


def cyclic_group(n: int) -> FiniteGroup:
    return make_group([tuple((i + 1) % n for i in range(n))])


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return make_group([(0,)])
    swap = list(range(n))
    swap[0], swap[1] = 1, 0
    cycle = [(i + 1) % n for i in range(n)]
    return make_group([tuple(swap), tuple(cycle)])


def z2_group() -> FiniteGroup:
    return make_group([(1, 0)])


def trivial_group() -> FiniteGroup:
    return make_group([(0,)])


# ---------------------------------------------------------------------------
# actions


@dataclass(frozen=True)
class GraphAction:
    group: FiniteGroup
    graph: Graph
    side: str
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        _shape_check(self, self.graph.n)


@dataclass(frozen=True)
class PosetAction:
    group: FiniteGroup
    poset: Poset
    side: str
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        _shape_check(self, self.poset.m)


Action = Union[GraphAction, PosetAction]


def _shape_check(a: Action, n: int):
    if a.side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if len(a.maps) != a.group.order:
        raise ValueError("one carrier map per group element required")
    for i, p in enumerate(a.maps):
        if not _is_perm(p, n):
            raise ValueError(f"carrier map {i} is not a permutation")


def _carrier(a: Action):
    return a.graph if isinstance(a, GraphAction) else a.poset


def _preserves(a: Action, p: Sequence[int]) -> bool:
    c = _carrier(a)
    if isinstance(a, GraphAction):
        return all(c.has_edge(p[u], p[v]) == c.has_edge(u, v)
                   for u in range(c.n) for v in range(c.n))
    return all(c.leq(p[u], p[v]) == c.leq(u, v)
               for u in range(c.m) for v in range(c.m))


def action_violation(a: Action) -> Optional[str]:
    """First violated action axiom, or None if the action is valid."""
    n = _carrier(a).n if isinstance(a, GraphAction) else _carrier(a).m
    if a.maps[0] != tuple(range(n)):
        return "identity acts nontrivially"
    g = a.group
    for i in range(g.order):
        for j in range(g.order):
            want = compose_perm(a.maps[i], a.maps[j]) if a.side == "left" \
                else compose_perm(a.maps[j], a.maps[i])
            if a.maps[g.mul(i, j)] != want:
                return f"compatibility fails at elements {i},{j}"
    for i, p in enumerate(a.maps):
        if not _preserves(a, p):
            return f"element {i} is not an automorphism"
    return None


def validate_action(a: Action) -> bool:
    return action_violation(a) is None


def assert_valid_action(a: Action):
    msg = action_violation(a)
    if msg is not None:
        raise ValueError(msg)


def as_left(a: Action) -> Action:
    """The same action with a left-action indexing (x <- g.x = x.g^-1)."""
    if a.side == "left":
        return a
    maps = tuple(a.maps[a.group.inv(i)] for i in range(a.group.order))
    cls = type(a)
    return cls(a.group, _carrier(a), "left", maps)


def as_right(a: Action) -> Action:
    if a.side == "right":
        return a
    maps = tuple(a.maps[a.group.inv(i)] for i in range(a.group.order))
    return type(a)(a.group, _carrier(a), "right", maps)


def trivial_action(carrier, group: Optional[FiniteGroup] = None) -> Action:
    group = group or trivial_group()
    n = carrier.n if isinstance(carrier, Graph) else carrier.m
    maps = tuple(tuple(range(n)) for _ in range(group.order))
    cls = GraphAction if isinstance(carrier, Graph) else PosetAction
    return cls(group, carrier, "left", maps)


def is_free(a: Action) -> bool:
    n = len(a.maps[0])
    return all(a.maps[i][x] != x for i in range(1, a.group.order)
               for x in range(n))


def is_strongly_regular(a: PosetAction) -> bool:
    """No nonidentity element sends u below m to v below m: here checked
    as 'orbit points never share an upper bound'."""
    p = a.poset
    for i in range(1, a.group.order):
        mp = a.maps[i]
        for u in range(p.m):
            if p.above[u] & p.above[mp[u]]:
                return False
    return True


def orbits(a: Action) -> tuple[tuple[int, ...], ...]:
    """Orbit blocks, each ascending, sorted by minimum member."""
    n = len(a.maps[0])
    seen = [False] * n
    out = []
    for v in range(n):
        if seen[v]:
            continue
        block = []
        stack = [v]
        seen[v] = True
        while stack:
            u = stack.pop()
            block.append(u)
            for mp in a.maps:
                w = mp[u]
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(tuple(sorted(block)))
    return tuple(out)


def _distances(g: Graph, start: int) -> list:
    dist = [None] * g.n
    dist[start] = 0
    dq = deque([start])
    while dq:
        u = dq.popleft()
        for v in bits(g.adj[u]):
            if dist[v] is None:
                dist[v] = dist[u] + 1
                dq.append(v)
    return dist


def is_d_discontinuous(a: GraphAction, d: int) -> bool:
    """No vertex within graph distance d-1 of another point of its orbit."""
    if d < 1:
        raise ValueError("d must be >= 1")
    for v in range(a.graph.n):
        dist = _distances(a.graph, v)
        for i in range(1, a.group.order):
            w = a.maps[i][v]
            if dist[w] is not None and dist[w] <= d - 1:
                return False
    return True


# ---------------------------------------------------------------------------
# action transport


def chain_poset_action(cp: Poset, a: PosetAction) -> PosetAction:
    """Transport an action on P to Chain(P) (elements of cp are chains)."""
    idx = cp.index
    maps = []
    for mp in a.maps:
        maps.append(tuple(idx[tuple(sorted(mp[e] for e in chain))]
                          for chain in cp.elements))
    return PosetAction(a.group, cp, a.side, tuple(maps))


def face_poset_action(fp: Poset, group: FiniteGroup,
                      vertex_maps: Sequence[Sequence[int]],
                      side: str = "left") -> PosetAction:
    """Transport simplicial vertex permutations to the face poset
    (fp elements must be the face tuples)."""
    idx = fp.index
    maps = tuple(tuple(idx[tuple(sorted(vm[v] for v in face))]
                       for face in fp.elements)
                 for vm in vertex_maps)
    return PosetAction(group, fp, side, maps)


def left_regular_maps(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(g.table[i][j] for j in range(g.order))
                 for i in range(g.order))


def right_regular_maps(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(g.table[j][i] for j in range(g.order))
                 for i in range(g.order))


def atom_graph_action(g: Graph, atoms: Sequence[int],
                      a: PosetAction) -> GraphAction:
    """Restrict a poset action to the atom graph (automorphisms fix atoms)."""
    pos = {v: i for i, v in enumerate(atoms)}
    maps = tuple(tuple(pos[mp[atoms[i]]] for i in range(len(atoms)))
                 for mp in a.maps)
    return GraphAction(a.group, g, a.side, maps)


def subposet_action(sub: Poset, kept: Sequence[int],
                    a: PosetAction) -> PosetAction:
    """Restrict to an invariant subposet given by its kept indices."""
    pos = {v: i for i, v in enumerate(kept)}
    maps = []
    for mp in a.maps:
        try:
            maps.append(tuple(pos[mp[v]] for v in kept))
        except KeyError:
            raise ValueError("subposet is not invariant under the action")
    return PosetAction(a.group, sub, a.side, tuple(maps))


def check_chain_discontinuity(a: PosetAction, k: int,
                              guards: Guards = DEFAULT_GUARDS) -> bool:
    """Free action on P: is the action on (Chain^k P)^1 2^k-discontinuous?"""
    if not is_free(a):
        raise ValueError("chain discontinuity requires a free action")
    if k < 0:
        raise ValueError("negative chain power")
    for _ in range(k):
        cp = chain_poset(a.poset, guards)
        a = chain_poset_action(cp, a)
    g, atoms = atom_graph(a.poset)
    return is_d_discontinuous(atom_graph_action(g, atoms, a), 2 ** k)


# ---------------------------------------------------------------------------
# quotients


@dataclass(frozen=True)
class PosetQuotient:
    poset: Poset
    blocks: tuple[tuple[int, ...], ...]
    to_block: tuple[int, ...]
    guaranteed: bool  # free + strongly regular: quotient is homotopy-faithful


def quotient_graph_by_action(a: GraphAction) -> Graph:
    return quotient(a.graph, Partition.from_blocks(a.graph.n, orbits(a)))


def quotient_poset_by_action(a: PosetAction) -> PosetQuotient:
    """Relational quotient: [x] <= [y] iff some gamma.x <= y, closed up.

    Without a free strongly regular action the closed relation may fail
    antisymmetry; mutually related classes are then merged so that a poset
    is always returned, and `guaranteed` is False (no topological claim).
    """
    p = a.poset
    orbs = orbits(a)
    k = len(orbs)
    omask = [sum(1 << v for v in b) for b in orbs]
    rel = [1 << i for i in range(k)]
    for i, b in enumerate(orbs):
        for j in range(k):
            if i != j and any(p.above[u] & omask[j] for u in b):
                rel[i] |= 1 << j
    for t in range(k):
        rt = rel[t]
        for i in range(k):
            if rel[i] >> t & 1:
                rel[i] |= rt
    # merge mutually related classes (SCC collapse)
    cls = [-1] * k
    groups: list[list[int]] = []
    for i in range(k):
        if cls[i] >= 0:
            continue
        members = [j for j in bits(rel[i]) if rel[j] >> i & 1]
        for j in members:
            cls[j] = len(groups)
        groups.append(members)
    merged = [tuple(sorted(v for j in g for v in orbs[j])) for g in groups]
    order = sorted(range(len(groups)), key=lambda c: merged[c][0])
    rank = {c: i for i, c in enumerate(order)}
    above = [0] * len(groups)
    for i in range(k):
        a_i = 0
        for j in bits(rel[i]):
            a_i |= 1 << rank[cls[j]]
        above[rank[cls[i]]] |= a_i
    blocks = tuple(merged[c] for c in order)
    orbit_of = [0] * p.m
    for i, b in enumerate(orbs):
        for v in b:
            orbit_of[v] = i
    to_block = tuple(rank[cls[orbit_of[v]]] for v in range(p.m))
    quot = Poset(len(groups), tuple(above), blocks)
    return PosetQuotient(quot, blocks, to_block,
                         is_free(a) and is_strongly_regular(a))


def quotient_by_action(a: Action):
    if isinstance(a, GraphAction):
        return quotient_graph_by_action(a)
    return quotient_poset_by_action(a)


def fixed_subposet(a: PosetAction) -> tuple[Poset, tuple[int, ...]]:
    """Subposet of elements fixed by the whole group."""
    fixed = [x for x in range(a.poset.m)
             if all(mp[x] == x for mp in a.maps)]
    return induced_subposet(a.poset, fixed)


# ---------------------------------------------------------------------------
# twisted product


@dataclass(frozen=True)
class TwistedProduct:
    graph: Graph
    group: FiniteGroup
    pairs: tuple[tuple[int, int], ...]  # lex-min representative per vertex
    orbit_of: tuple[int, ...]  # product-pair index (t*nh + h) -> vertex
    product_graph: Graph
    diagonal: GraphAction  # left action g.(t,h) = (t.g^-1, g.h) on the product
    right_action: Optional[GraphAction] = None


def twisted_product(t_act: GraphAction, h_act: GraphAction,
                    h_right: Optional[GraphAction] = None) -> TwistedProduct:
    """Quotient of T x H by the diagonal action g.(t,h) = (t.g^-1, g.h).

    `t_act` must be a right action on T and `h_act` a left action on H.
    A right action on H commuting with `h_act` descends to the quotient
    and is returned as the carried right action.
    """
    if t_act.side != "right" or h_act.side != "left":
        raise ValueError("need a right action on T and a left action on H")
    if t_act.group != h_act.group:
        raise ValueError("actions use different groups")
    assert_valid_action(t_act)
    assert_valid_action(h_act)
    g = t_act.group
    t, h = t_act.graph, h_act.graph
    nh = h.n
    npairs = t.n * nh
    prod = product(t, h)
    diag = []
    for i in range(g.order):
        tm = t_act.maps[g.inv(i)]
        hm = h_act.maps[i]
        diag.append(tuple(tm[x // nh] * nh + hm[x % nh]
                          for x in range(npairs)))
    diag_action = GraphAction(g, prod, "left", tuple(diag))
    seen = [False] * npairs
    orbit_of = [0] * npairs
    pairs = []
    for x in range(npairs):
        if seen[x]:
            continue
        block = sorted({mp[x] for mp in diag} | {x})
        for y in block:
            if seen[y]:
                raise ValueError("diagonal orbits are inconsistent")
            seen[y] = True
            orbit_of[y] = len(pairs)
        pairs.append((x // nh, x % nh))
    nq = len(pairs)
    adj = [0] * nq
    for (tu, hu) in ((x // nh, x % nh) for x in range(npairs)):
        u = orbit_of[tu * nh + hu]
        for tv in bits(t.adj[tu]):
            for hv in bits(h.adj[hu]):
                adj[u] |= 1 << orbit_of[tv * nh + hv]
    for u in range(nq):
        for v in bits(adj[u]):
            adj[v] |= 1 << u
    labels = tuple(f"[{tt},{hh}]" for tt, hh in pairs)
    graph = Graph(nq, tuple(adj), labels)

    carried = None
    if h_right is not None:
        if h_right.side != "right" or h_right.group != g:
            raise ValueError("carried action must be a right action "
                             "of the same group")
        if h_right.graph.adj != h.adj:
            raise ValueError("carried action lives on a different graph")
        for i in range(g.order):
            for j in range(g.order):
                if compose_perm(h_act.maps[i], h_right.maps[j]) != \
                        compose_perm(h_right.maps[j], h_act.maps[i]):
                    raise ValueError("carried right action does not commute "
                                     "with the left action")
        rmaps = []
        for i in range(g.order):
            rm = h_right.maps[i]
            img = [-1] * nq
            for x in range(npairs):
                tt, hh = x // nh, x % nh
                target = orbit_of[tt * nh + rm[hh]]
                u = orbit_of[x]
                if img[u] >= 0 and img[u] != target:
                    raise ValueError("carried action is not well defined")
                img[u] = target
            rmaps.append(tuple(img))
        carried = GraphAction(g, graph, "right", tuple(rmaps))
    return TwistedProduct(graph, g, tuple(pairs), tuple(orbit_of),
                          prod, diag_action, carried)


# ---------------------------------------------------------------------------
# equivariant monotone maps


def equivariant_poset_maps(pa: PosetAction, qa: PosetAction,
                           guards: Guards = DEFAULT_GUARDS) -> Poset:
    """Subposet of Poset(P,Q) of equivariant maps, f(g.x) = g.f(x).

    Enumeration assigns orbit representatives only (sorted by height then
    index) and propagates along the action; a representative value must be
    fixed by the representative's stabilizer.
    """
    if pa.group != qa.group:
        raise ValueError("actions use different groups")
    pa = as_left(pa)
    qa = as_left(qa)
    p, q = pa.poset, qa.poset
    g = pa.group
    orbs = orbits(pa)
    reps = sorted((min(b) for b in orbs),
                  key=lambda r: (p.heights[r], r))
    stab = {r: [i for i in range(g.order) if pa.maps[i][r] == r]
            for r in reps}
    f = [-1] * p.m
    found: list[tuple[int, ...]] = []

    def assign(r: int, v: int) -> Optional[list[int]]:
        placed = []
        for i in range(g.order):
            x = pa.maps[i][r]
            val = qa.maps[i][v]
            if f[x] >= 0:
                if f[x] != val:
                    for y in placed:
                        f[y] = -1
                    return None
                continue
            for z in range(p.m):
                if f[z] < 0 or z == x:
                    continue
                if p.leq(z, x) and not q.leq(f[z], val):
                    break
                if p.leq(x, z) and not q.leq(val, f[z]):
                    break
            else:
                f[x] = val
                placed.append(x)
                continue
            for y in placed:
                f[y] = -1
            return None
        return placed

    def rec(t: int):
        if t == len(reps):
            found.append(tuple(f))
            if len(found) > guards.poset_map_elements:
                raise GuardExceeded("poset_map_elements",
                                    guards.poset_map_elements, len(found))
            return
        r = reps[t]
        for v in range(q.m):
            if any(qa.maps[i][v] != v for i in stab[r]):
                continue
            placed = assign(r, v)
            if placed is None:
                continue
            rec(t + 1)
            for y in placed:
                f[y] = -1

    rec(0)
    found.sort()
    m = len(found)
    if m > guards.poset_relation:
        raise GuardExceeded("poset_relation", guards.poset_relation, m)
    geq = [[0] * q.m for _ in range(p.m)]
    for j, mp in enumerate(found):
        bit = 1 << j
        for x in range(p.m):
            for v in bits(q.below[mp[x]]):
                geq[x][v] |= bit
    full = (1 << m) - 1
    above = []
    for mp in found:
        acc = full
        for x in range(p.m):
            acc &= geq[x][mp[x]]
        above.append(acc)
    return Poset(m, tuple(above), tuple(found))


# ---------------------------------------------------------------------------
# serialization


def action_to_json(a: Action) -> dict:
    return {"group": {"perms": [list(p) for p in a.group.elements]},
            "side": a.side,
            "on": "graph" if isinstance(a, GraphAction) else "poset",
            "maps": [list(m) for m in a.maps]}


def action_from_json(data: dict, carrier) -> Action:
    group = make_group([tuple(p) for p in data["group"]["perms"]])
    maps = tuple(tuple(m) for m in data["maps"])
    cls = GraphAction if data["on"] == "graph" else PosetAction
    if (data["on"] == "graph") != isinstance(carrier, Graph):
        raise ValueError("carrier kind mismatch")
    return cls(group, carrier, data["side"], maps)
