"""Posets Hom(G,H) of multihomomorphisms and their structural maps.

A multihomomorphism G -> H assigns to every vertex of G a nonempty set of
vertices of H such that every edge of G maps to complete bipartite
adjacency in H.  Elements are stored as tuples of target bitmasks indexed
by source vertex, listed in lexicographic order.  Atoms (all sets
singletons) are exactly the graph homomorphisms.

The second half implements the comparison maps between such posets:
currying against an exponential graph, currying against atom graphs of
posets, splitting over categorical products, comparing a quotient of
Hom(T,G) with Hom(T,G/the action), and the loop-addition maps for fine
target graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from .actions import (GraphAction, PosetAction, as_left, fixed_subposet,
                      is_free, is_strongly_regular, orbits,
                      quotient_graph_by_action, quotient_poset_by_action,
                      PosetQuotient, TwistedProduct)
from .graphs import (Graph, bits, exponential, exponential_vertex_maps,
                     is_fine, nu_mask, one_graph, product, reflexive_closure)
from .limits import DEFAULT_GUARDS, GuardExceeded, Guards
from .posets import (Poset, PosetMap, atom_graph, chain_poset,
                     enumerate_poset_maps, is_closure_map, iter_chains)


def rank_of(element: Sequence[int]) -> int:
    return sum(mask.bit_count() - 1 for mask in element)


def identity_multihom(g: Graph) -> tuple[int, ...]:
    return tuple(1 << v for v in range(g.n))


def multihom_violation(g: Graph, h: Graph,
                       element: Sequence[int]) -> Optional[str]:
    """First broken multihomomorphism invariant, or None."""
    if len(element) != g.n:
        return "assignment length differs from the vertex count"
    for v, mask in enumerate(element):
        if mask == 0:
            return f"empty set at vertex {v}"
        if mask >> h.n:
            return f"vertex {v} assigned outside the target"
    for u, v in g.directed_edges():
        for x in bits(element[u]):
            if element[v] & ~h.adj[x]:
                return f"edge ({u},{v}) not sent to complete adjacency"
    return None


def is_multihom(g: Graph, h: Graph, element: Sequence[int]) -> bool:
    return multihom_violation(g, h, element) is None


def compose_multihoms(alpha: Sequence[int],
                      beta: Sequence[int]) -> tuple[int, ...]:
    """(beta o alpha)(v) = union of beta over alpha(v)."""
    out = []
    for mask in alpha:
        acc = 0
        for x in bits(mask):
            acc |= beta[x]
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class HomPoset:
    source: Graph
    target: Graph
    elements: tuple[tuple[int, ...], ...]
    guards: Guards = field(default=DEFAULT_GUARDS, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def rank(self, i: int) -> int:
        return rank_of(self.elements[i])

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.elements)
                     if all(mask & (mask - 1) == 0 for mask in e))

    def leq(self, i: int, j: int) -> bool:
        a, b = self.elements[i], self.elements[j]
        return all(x & ~y == 0 for x, y in zip(a, b))

    @cached_property
    def poset(self) -> Poset:
        """The materialized poset (pointwise containment), guarded."""
        m = self.m
        if m > self.guards.poset_relation:
            raise GuardExceeded("poset_relation", self.guards.poset_relation,
                                m)
        n = self.source.n
        sup = []
        for v in range(n):
            col = [e[v] for e in self.elements]
            table = {}
            for mask in set(col):
                acc = 0
                for j, mv in enumerate(col):
                    if mask & ~mv == 0:
                        acc |= 1 << j
                table[mask] = acc
            sup.append(table)
        full = (1 << m) - 1
        above = []
        for e in self.elements:
            acc = full
            for v in range(n):
                acc &= sup[v][e[v]]
            above.append(acc)
        return Poset(m, tuple(above), self.elements)


def hom_poset(g: Graph, h: Graph, guards: Guards = DEFAULT_GUARDS) -> HomPoset:
    """Enumerate Hom(g,h) by per-vertex feasible sets.

    Vertices are processed in descending-degree order; the feasible mask of
    a vertex is the intersection of common-neighborhoods of the sets already
    fixed on its neighbors.  Looped source vertices additionally require
    their set to be complete (including loops) in the target.
    """
    n = g.n
    full = (1 << h.n) - 1
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    neigh = [[w for w in bits(g.adj[v]) if w != v] for v in range(n)]
    looped = [bool(g.adj[v] >> v & 1) for v in range(n)]
    assign = [0] * n
    allowed = [full] * n
    out: list[tuple[int, ...]] = []

    def rec(i: int):
        if i == n:
            if len(out) >= guards.hom_elements:
                raise GuardExceeded("hom_elements", guards.hom_elements,
                                    len(out) + 1)
            out.append(tuple(assign))
            return
        v = order[i]
        base = allowed[v]
        s = base
        while s:
            ok = True
            if looped[v]:
                for x in bits(s):
                    if s & ~h.adj[x]:
                        ok = False
                        break
            if ok:
                nu_s = nu_mask(h, s)
                saved = []
                good = True
                for w in neigh[v]:
                    if pos[w] > i:
                        saved.append((w, allowed[w]))
                        allowed[w] &= nu_s
                        if not allowed[w]:
                            good = False
                            break
                if good:
                    assign[v] = s
                    rec(i + 1)
                for w, old in saved:
                    allowed[w] = old
            s = (s - 1) & base
    if h.n:
        rec(0)
    elif n == 0:
        out.append(())
    out.sort()
    return HomPoset(g, h, tuple(out), guards)


def _permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for x in bits(mask):
        out |= 1 << perm[x]
    return out


def induced_index_maps(hp: HomPoset,
                       source_action: Optional[GraphAction] = None,
                       target_action: Optional[GraphAction] = None):
    """Element-index permutations of the induced left action on Hom(G,H),
    (gamma.a)(v) = t_gamma(a(s_gamma(v))), without materializing the order.

    The source contributes through a right action (or the inverse of a left
    one), the target through a left action (or the inverse of a right one);
    with both sides abelian this is the usual gamma . a(gamma^-1 . _).
    """
    given = [a for a in (source_action, target_action) if a is not None]
    if not given:
        raise ValueError("need an action on the source or the target")
    group = given[0].group
    if any(a.group != group for a in given):
        raise ValueError("actions use different groups")
    if source_action is not None and source_action.graph.adj != hp.source.adj:
        raise ValueError("source action lives on a different graph")
    if target_action is not None and target_action.graph.adj != hp.target.adj:
        raise ValueError("target action lives on a different graph")
    ident_s = tuple(range(hp.source.n))
    ident_t = tuple(range(hp.target.n))
    maps = []
    for i in range(group.order):
        if source_action is None:
            smap = ident_s
        elif source_action.side == "right":
            smap = source_action.maps[i]
        else:
            smap = source_action.maps[group.inv(i)]
        if target_action is None:
            tmap = ident_t
        elif target_action.side == "left":
            tmap = target_action.maps[i]
        else:
            tmap = target_action.maps[group.inv(i)]
        row = []
        for e in hp.elements:
            image = tuple(_permute_mask(e[smap[v]], tmap)
                          for v in range(hp.source.n))
            j = hp.index.get(image)
            if j is None:
                raise ValueError("induced image leaves the poset; "
                                 "the inputs are not valid actions")
            row.append(j)
        maps.append(tuple(row))
    return group, tuple(maps)


def induced_hom_action(hp: HomPoset,
                       source_action: Optional[GraphAction] = None,
                       target_action: Optional[GraphAction] = None
                       ) -> PosetAction:
    """The induced left action as an action on the materialized poset."""
    group, maps = induced_index_maps(hp, source_action, target_action)
    return PosetAction(group, hp.poset, "left", maps)


def equivariant_atoms(hp: HomPoset, act: PosetAction
                      ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(fixed atoms of Hom, minimal elements of the fixed subposet).

    The first set is the equivariant homomorphisms; in general it is only
    part of the second.
    """
    fixed_atoms = tuple(i for i in hp.atoms
                        if all(mp[i] == i for mp in act.maps))
    sub, kept = fixed_subposet(act)
    minimal = tuple(kept[i] for i in bits(sub.minimal_mask))
    return fixed_atoms, minimal


# ---------------------------------------------------------------------------
# currying against the exponential graph


def curry(t: Graph, h: Graph, g: Graph, alpha: Sequence[int],
          expo_maps: Optional[list] = None) -> tuple[int, ...]:
    """Hom(T x H, G) -> Hom(H, G^T): beta(y) = {f : f(s) in alpha(s,y)}."""
    if expo_maps is None:
        expo_maps = exponential_vertex_maps(t, g)
    nh = h.n
    beta = []
    for y in range(nh):
        mask = 0
        for fi, f in enumerate(expo_maps):
            if all(alpha[s * nh + y] >> f[s] & 1 for s in range(t.n)):
                mask |= 1 << fi
        beta.append(mask)
    return tuple(beta)


def uncurry(t: Graph, h: Graph, g: Graph, beta: Sequence[int],
            expo_maps: Optional[list] = None) -> tuple[int, ...]:
    """Hom(H, G^T) -> Hom(T x H, G): alpha(s,y) = {f(s) : f in beta(y)}."""
    if expo_maps is None:
        expo_maps = exponential_vertex_maps(t, g)
    nh = h.n
    alpha = []
    for s in range(t.n):
        for y in range(nh):
            mask = 0
            for fi in bits(beta[y]):
                mask |= 1 << expo_maps[fi][s]
            alpha.append(mask)
    return tuple(alpha)


@dataclass(frozen=True)
class AdjunctionReport:
    hom_product: HomPoset      # Hom(T x H, G)
    hom_curried: HomPoset      # Hom(H, G^T)
    phi: PosetMap
    psi: PosetMap
    roundtrip_identity: bool   # psi o phi = id
    increasing: bool           # phi o psi >= id
    closure_ok: bool           # phi o psi is an up-closure map


def adjunction_report(t: Graph, h: Graph, g: Graph,
                      guards: Guards = DEFAULT_GUARDS) -> AdjunctionReport:
    prod = product(t, h)
    expo = exponential(t, g, guards)
    emaps = exponential_vertex_maps(t, g)
    hom_th = hom_poset(prod, g, guards)
    hom_cur = hom_poset(h, expo, guards)
    phi_img = []
    for e in hom_th.elements:
        j = hom_cur.index.get(curry(t, h, g, e, emaps))
        if j is None:
            raise ValueError("curried element is not a multihomomorphism")
        phi_img.append(j)
    psi_img = []
    for e in hom_cur.elements:
        j = hom_th.index.get(uncurry(t, h, g, e, emaps))
        if j is None:
            raise ValueError("uncurried element is not a multihomomorphism")
        psi_img.append(j)
    phi = PosetMap(hom_th.poset, hom_cur.poset, tuple(phi_img))
    psi = PosetMap(hom_cur.poset, hom_th.poset, tuple(psi_img))
    roundtrip = all(psi_img[phi_img[i]] == i for i in range(hom_th.m))
    increasing = all(hom_cur.leq(i, phi_img[psi_img[i]])
                     for i in range(hom_cur.m))
    closure = phi.after(psi)
    closure_ok = (roundtrip and increasing and
                  is_closure_map(closure, "up"))
    return AdjunctionReport(hom_th, hom_cur, phi, psi, roundtrip,
                            increasing, closure_ok)


def exponential_action(t_act: GraphAction, g: Graph,
                       expo: Graph) -> GraphAction:
    """Left action on G^T from a right action on T: (gamma.f)(t) = f(t.gamma)."""
    if t_act.side != "right":
        raise ValueError("need a right action on the exponent")
    emaps = exponential_vertex_maps(t_act.graph, g)
    eidx = {f: i for i, f in enumerate(emaps)}
    maps = []
    for i in range(t_act.group.order):
        tm = t_act.maps[i]
        maps.append(tuple(eidx[tuple(f[tm[t]] for t in range(t_act.graph.n))]
                          for f in emaps))
    return GraphAction(t_act.group, expo, "left", tuple(maps))


# ---------------------------------------------------------------------------
# currying against atom graphs of posets


def poset_curry(p: Poset, atoms: Sequence[int], alpha: Sequence[int],
                hom_single: HomPoset) -> tuple[int, ...]:
    """Hom(P^1, G) -> Poset(P, Hom(1,G)): x -> union of alpha over atoms <= x."""
    image = []
    for x in range(p.m):
        mask = 0
        for k, a in enumerate(atoms):
            if p.leq(a, x):
                mask |= alpha[k]
        j = hom_single.index.get((mask,))
        if j is None:
            raise ValueError("curried value is not a looped clique")
        image.append(j)
    return tuple(image)


def poset_uncurry(f_image: Sequence[int], atoms: Sequence[int],
                  hom_single: HomPoset) -> tuple[int, ...]:
    """Poset(P, Hom(1,G)) -> Hom(P^1, G): restriction to the atoms."""
    return tuple(hom_single.elements[f_image[a]][0] for a in atoms)


@dataclass(frozen=True)
class PosetAdjunctionReport:
    hom_atom_graph: HomPoset   # Hom(P^1, G)
    hom_single: HomPoset       # Hom(1, G)
    atoms: tuple[int, ...]
    roundtrip_identity: bool   # psi o phi = id on Hom(P^1,G)
    decreasing: bool           # phi o psi <= id on Poset(P, Hom(1,G))
    maps_checked: int


def poset_adjunction_report(p: Poset, g: Graph,
                            guards: Guards = DEFAULT_GUARDS
                            ) -> PosetAdjunctionReport:
    ag, atoms = atom_graph(p)
    hom_ag = hom_poset(ag, g, guards)
    hom_single = hom_poset(one_graph(), g, guards)
    roundtrip = True
    for e in hom_ag.elements:
        f = poset_curry(p, atoms, e, hom_single)
        if poset_uncurry(f, atoms, hom_single) != e:
            roundtrip = False
            break
    hs_poset = hom_single.poset
    decreasing = True
    checked = 0
    for f in enumerate_poset_maps(p, hs_poset, guards.poset_map_elements):
        checked += 1
        alpha = poset_uncurry(f, atoms, hom_single)
        if hom_ag.index.get(alpha) is None:
            raise ValueError("restriction to atoms escaped Hom(P^1,G)")
        f2 = poset_curry(p, atoms, alpha, hom_single)
        if not all(hs_poset.leq(f2[x], f[x]) for x in range(p.m)):
            decreasing = False
            break
    return PosetAdjunctionReport(hom_ag, hom_single, tuple(atoms),
                                 roundtrip, decreasing, checked)


# ---------------------------------------------------------------------------
# product splitting


def product_split(alpha: Sequence[int], h_n: int
                  ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Hom(T, GxH) -> Hom(T,G) x Hom(T,H) by coordinate projections."""
    ag, ah = [], []
    for mask in alpha:
        mg = mh = 0
        for x in bits(mask):
            mg |= 1 << (x // h_n)
            mh |= 1 << (x % h_n)
        ag.append(mg)
        ah.append(mh)
    return tuple(ag), tuple(ah)


def product_merge(alpha_g: Sequence[int], alpha_h: Sequence[int],
                  h_n: int) -> tuple[int, ...]:
    """rho(a,b)(v) = a(v) x b(v) inside V(G) x V(H)."""
    out = []
    for mg, mh in zip(alpha_g, alpha_h):
        mask = 0
        for x in bits(mg):
            mask |= mh << (x * h_n)
        out.append(mask)
    return tuple(out)


@dataclass(frozen=True)
class SplitReport:
    hom_pair: HomPoset         # Hom(T, G x H)
    hom_g: HomPoset
    hom_h: HomPoset
    identity_on_pairs: bool    # split o merge = id
    increasing: bool           # merge o split >= id
    atom_preserving: bool


def split_report(t: Graph, g: Graph, h: Graph,
                 guards: Guards = DEFAULT_GUARDS) -> SplitReport:
    hom_pair = hom_poset(t, product(g, h), guards)
    hom_g = hom_poset(t, g, guards)
    hom_h = hom_poset(t, h, guards)
    ident = True
    atom_ok = True
    for a in hom_g.elements:
        for b in hom_h.elements:
            merged = product_merge(a, b, h.n)
            if hom_pair.index.get(merged) is None:
                raise ValueError("merged pair is not a multihomomorphism")
            if product_split(merged, h.n) != (a, b):
                ident = False
            if rank_of(a) == 0 and rank_of(b) == 0 and rank_of(merged) != 0:
                atom_ok = False
    increasing = True
    for e in hom_pair.elements:
        a, b = product_split(e, h.n)
        if hom_g.index.get(a) is None or hom_h.index.get(b) is None:
            raise ValueError("projection is not a multihomomorphism")
        back = product_merge(a, b, h.n)
        if any(x & ~y for x, y in zip(e, back)):
            increasing = False
    return SplitReport(hom_pair, hom_g, hom_h, ident, increasing, atom_ok)


# ---------------------------------------------------------------------------
# quotient comparison


def _tree_cycle_lengths(t: Graph) -> tuple[int, ...]:
    """Cycle lengths closed by the non-tree edges of a BFS spanning forest."""
    from collections import deque
    parent = [-1] * t.n
    depth = [0] * t.n
    seen = [False] * t.n
    tree_adj = [set() for _ in range(t.n)]
    for root in range(t.n):
        if seen[root]:
            continue
        seen[root] = True
        dq = deque([root])
        while dq:
            u = dq.popleft()
            for v in bits(t.adj[u]):
                if v == u:
                    continue
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    tree_adj[u].add(v)
                    tree_adj[v].add(u)
                    dq.append(v)
    lengths = set()
    for u, v in t.edges():
        if u == v:
            lengths.add(1)
            continue
        if v in tree_adj[u]:
            continue
        du, dv = u, v
        while du != dv:
            if depth[du] < depth[dv]:
                du, dv = dv, du
            du = parent[du]
        dist = depth[u] + depth[v] - 2 * depth[du]
        lengths.add(dist + 1)
    return tuple(sorted(lengths))


@dataclass(frozen=True)
class QuotientCompare:
    hypothesis_ok: bool
    cycle_lengths: tuple[int, ...]      # checked walk lengths
    violation: Optional[tuple[int, int, int]]  # (vertex, element, length)
    free: bool
    strongly_regular: bool
    iso: bool
    map: PosetMap                        # Hom(T,G)/action -> Hom(T, G/action)
    rank_preserved: bool
    warning: Optional[str]
    hom_source: HomPoset
    hom_quotient_target: HomPoset
    quotient: PosetQuotient


def quotient_compare(t: Graph, g: Graph, act: GraphAction,
                     guards: Guards = DEFAULT_GUARDS) -> QuotientCompare:
    """Compare Hom(T,G)/action with Hom(T,G/action) element by element.

    The walk hypothesis is checked first: for every length l among the
    spanning-forest cycle lengths of T together with 4, no vertex v of G may
    reach gamma.v by a walk (not necessarily simple) of exactly l steps.
    The comparison itself is computed either way; a violated hypothesis
    only produces a warning.
    """
    act = as_left(act)
    if act.graph.adj != g.adj:
        raise ValueError("action lives on a different graph")
    lengths = tuple(sorted(set(_tree_cycle_lengths(t)) | {4}))
    violation = None
    for ln in lengths:
        for v in range(g.n):
            frontier = 1 << v
            for _ in range(ln):
                acc = 0
                for x in bits(frontier):
                    acc |= g.adj[x]
                frontier = acc
            for i in range(1, act.group.order):
                if frontier >> act.maps[i][v] & 1:
                    violation = (v, i, ln)
                    break
            if violation:
                break
        if violation:
            break
    hypothesis_ok = violation is None

    hom_s = hom_poset(t, g, guards)
    pact = induced_hom_action(hom_s, target_action=act)
    free = is_free(pact)
    regular = is_strongly_regular(pact)
    quot = quotient_poset_by_action(pact)
    gq = quotient_graph_by_action(act)
    block_of = [0] * g.n
    for bi, block in enumerate(orbits(act)):
        for v in block:
            block_of[v] = bi
    hom_q = hom_poset(t, gq, guards)
    image = []
    for block in quot.blocks:
        e = hom_s.elements[block[0]]
        proj = tuple(_permute_mask(mask, block_of) for mask in e)
        j = hom_q.index.get(proj)
        if j is None:
            raise ValueError("projected element is not a multihomomorphism")
        image.append(j)
    pmap = PosetMap(quot.poset, hom_q.poset, tuple(image))
    bij = len(set(image)) == len(image) and len(image) == hom_q.m
    iso = bij and all(quot.poset.leq(i, j) == hom_q.leq(image[i], image[j])
                      for i in range(quot.poset.m)
                      for j in range(quot.poset.m))
    rank_preserved = all(
        rank_of(hom_s.elements[block[0]]) ==
        rank_of(hom_q.elements[image[bi]])
        for bi, block in enumerate(quot.blocks))
    warning = None
    if not hypothesis_ok:
        v, i, ln = violation
        warning = (f"walk hypothesis violated: vertex {v} reaches its "
                   f"image under element {i} in {ln} steps; "
                   "comparison computed anyway")
    return QuotientCompare(hypothesis_ok, lengths, violation, free, regular,
                           iso, pmap, rank_preserved, warning,
                           hom_s, hom_q, quot)


# ---------------------------------------------------------------------------
# loop addition


@dataclass(frozen=True)
class LoopAddition:
    hom_plain: HomPoset        # Hom(T, G)
    hom_reflexive: HomPoset    # Hom(T°, G)
    chains: Poset              # Chain(Hom(T,G))
    i: PosetMap                # inclusion Hom(T°,G) -> Hom(T,G)
    j: PosetMap                # Chain(Hom(T,G)) -> Hom(T°,G)
    h: PosetMap                # Chain(Hom(T,G)) -> Hom(T,G)
    j_dominates_reflexive_top: bool   # j(Chain(i)(c)) >= top(c)
    i_j_below_h: bool                 # i(j(c)) <= h(c)
    h_dominates_top: bool             # h(c) >= top(c)


def _loop_sets(g: Graph, element: Sequence[int]) -> tuple[int, ...]:
    """Per-vertex mask nu(M) & nu^2(M) for M = element(v)."""
    out = []
    for mask in element:
        nu1 = nu_mask(g, mask)
        out.append(nu1 & nu_mask(g, nu1))
    return tuple(out)


def loop_addition_maps(t: Graph, g: Graph,
                       guards: Guards = DEFAULT_GUARDS) -> LoopAddition:
    """The comparison maps between Hom(T,G) and Hom(T°,G) for fine G.

    T° is T with loops added everywhere.  j sends a chain a_0 < ... < a_k
    to u -> union over r of nu(a_r(u)) & nu^2(a_r(u)); h additionally joins
    the top element a_k.
    """
    if any(t.adj[v] == 0 for v in range(t.n)):
        raise ValueError("source graph has an isolated vertex")
    if not is_fine(g, guards):
        raise ValueError("target graph is not fine")
    t0 = reflexive_closure(t)
    hom_t = hom_poset(t, g, guards)
    hom_t0 = hom_poset(t0, g, guards)
    incl_img = tuple(hom_t.index[e] for e in hom_t0.elements)
    incl = PosetMap(hom_t0.poset, hom_t.poset, incl_img)
    cp = chain_poset(hom_t.poset, guards)
    j_img, h_img = [], []
    for chain in cp.elements:
        acc = [0] * t.n
        for r in chain:
            for v, mask in enumerate(_loop_sets(g, hom_t.elements[r])):
                acc[v] |= mask
        je = tuple(acc)
        jj = hom_t0.index.get(je)
        if jj is None:
            raise ValueError("loop-addition image is not reflexive-valid")
        j_img.append(jj)
        top = hom_t.elements[chain[-1]]
        he = tuple(a | b for a, b in zip(je, top))
        hh = hom_t.index.get(he)
        if hh is None:
            raise ValueError("auxiliary image is not a multihomomorphism")
        h_img.append(hh)
    j_map = PosetMap(cp, hom_t0.poset, tuple(j_img))
    h_map = PosetMap(cp, hom_t.poset, tuple(h_img))

    h_dom = all(hom_t.leq(cp.elements[c][-1], h_img[c])
                for c in range(cp.m))
    i_j_below = all(hom_t.leq(incl_img[j_img[c]], h_img[c])
                    for c in range(cp.m))
    j_dom = True
    for chain0 in iter_chains(hom_t0.poset, guards.chain_elements):
        mapped = tuple(incl_img[x] for x in chain0)
        acc = [0] * t.n
        for r in mapped:
            for v, mask in enumerate(_loop_sets(g, hom_t.elements[r])):
                acc[v] |= mask
        top0 = hom_t0.elements[chain0[-1]]
        if any(x & ~y for x, y in zip(top0, acc)):
            j_dom = False
            break
    return LoopAddition(hom_t, hom_t0, cp, incl, j_map, h_map,
                        j_dom, i_j_below, h_dom)


# ---------------------------------------------------------------------------
# fixed subposet against the twisted product


def pullback_multihom(orbit_of: Sequence[int],
                      beta: Sequence[int]) -> tuple[int, ...]:
    """Precompose a multihom on the quotient with the orbit projection."""
    return tuple(beta[orbit_of[x]] for x in range(len(orbit_of)))


@dataclass(frozen=True)
class TwistedHomReport:
    hom_product: HomPoset      # Hom(T x H, G)
    hom_twisted: HomPoset      # Hom(T x_. H, G)
    fixed: tuple[int, ...]     # indices of diagonal-fixed elements
    fixed_poset: Poset         # order among the fixed elements
    image: tuple[int, ...]     # pullback hom_twisted -> hom_product
    iso: bool                  # pullback is a bijection onto the fixed part
    fixed_atoms: tuple[int, ...]
    minimal_fixed: tuple[int, ...]


def twisted_hom_report(tw: TwistedProduct, g: Graph,
                       guards: Guards = DEFAULT_GUARDS) -> TwistedHomReport:
    """Hom_fixed(T x H, G) compared with Hom(twisted product, G).

    The ambient Hom(T x H, G) can be large, so only the fixed subposet is
    ever ordered; fixedness and the pullback are mask-level computations.
    """
    hom_prod = hom_poset(tw.product_graph, g, guards)
    _, maps = induced_index_maps(hom_prod, source_action=tw.diagonal)
    fixed = tuple(i for i in range(hom_prod.m)
                  if all(mp[i] == i for mp in maps))
    above = []
    for i in fixed:
        acc = 0
        for k, j in enumerate(fixed):
            if hom_prod.leq(i, j):
                acc |= 1 << k
        above.append(acc)
    fixed_poset = Poset(len(fixed), tuple(above),
                        tuple(hom_prod.elements[i] for i in fixed))
    minimal = tuple(fixed[i] for i in bits(fixed_poset.minimal_mask))
    fixed_atoms = tuple(i for i in fixed if hom_prod.rank(i) == 0)
    hom_tw = hom_poset(tw.graph, g, guards)
    image = []
    for e in hom_tw.elements:
        j = hom_prod.index.get(pullback_multihom(tw.orbit_of, e))
        if j is None:
            raise ValueError("pullback is not a multihomomorphism")
        image.append(j)
    iso = sorted(image) == list(fixed)
    return TwistedHomReport(hom_prod, hom_tw, fixed, fixed_poset,
                            tuple(image), iso, fixed_atoms, minimal)
