"""Named graph families built from twisted products, with explicit colorings.

The constructions here combine subdivided spheres and polygons with the
twisted-product machinery of :mod:`homlab.actions`:

* spherical graphs ``S(k,m)`` from barycentric subdivisions of cross-polytope
  boundaries, together with the support maps that chain them into a direct
  system;
* twisted toroidal graphs ``T(k,m)`` from iterated twisted products with
  reflexive even cycles;
* generalized Mycielski graphs ``M^k_m(G)``;
* explicit proper colorings (subdivision coloring, equivariant coloring step)
  that realize the chromatic-number upper bounds constructively;
* coindex certificates and index upper bounds for Hom posets;
* the Csorba and universality constructions that realize a prescribed
  complex as a Hom poset.

All constructors are deterministic: the same parameters produce an
identical serialized graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .actions import (FiniteGroup, GraphAction, PosetAction,
                      TwistedProduct, as_left, assert_valid_action, as_right,
                      atom_graph_action, chain_poset_action,
                      face_poset_action, is_free, left_regular_maps, orbits,
                      symmetric_group, twisted_product, z2_group)
from .graphs import (Graph, Partition, check_homomorphism, chromatic_number,
                     clique_graph_B, complete_graph,
                     exponential, exponential_vertex_maps, find_homomorphism,
                     looped_path, looped_subgraph_S, product, quotient,
                     reflexive_cycle)
from .homposets import exponential_action
from .limits import DEFAULT_GUARDS, Guards
from .posets import (Poset, SimplicialComplex, atom_graph, chain_poset,
                     face_poset, make_complex, order_complex)

__all__ = [
    "FamilySpec", "CrossPolytope", "CycleFacePoset", "SphericalGraph",
    "SystemMap", "ToroidalGraph", "SubdivisionColoring",
    "EquivariantColoring", "CoindexCertificate", "IndexBound",
    "cross_polytope_complex", "cycle_face_poset", "spherical_graph",
    "system_map", "twisted_toroidal", "mycielski", "iterated_mycielski",
    "subdivision_coloring", "equivariant_coloring_step",
    "coindex_certificate", "index_upper_bound", "csorba_graph",
    "universality_graph", "family_graph",
]


_FAMILIES = ("spherical", "toroidal", "mycielski", "csorba", "universal_n")


@dataclass(frozen=True)
class FamilySpec:
    """A named family instance; parameter ranges are validated per family."""

    family: str
    k: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None

    def __post_init__(self):
        f = self.family
        if f not in _FAMILIES:
            raise ValueError(f"unknown family '{f}'")
        if f == "spherical":
            if self.k is None or self.m is None or self.k < 0 or self.m < 0:
                raise ValueError("spherical family needs k >= 0 and m >= 0")
        elif f == "toroidal":
            if self.k is None or self.m is None or self.k < 1 or self.m < 2:
                raise ValueError("toroidal family needs k >= 1 and m >= 2")
        elif f == "mycielski":
            if self.m is None or self.m < 1 or (self.k is not None and self.k < 0):
                raise ValueError("mycielski family needs m >= 1 and k >= 0")
        elif f == "universal_n":
            if self.n is None or self.n < 2:
                raise ValueError("universality family needs n >= 2")


def _flip_action(side: str = "right") -> GraphAction:
    return GraphAction(z2_group(), complete_graph(2), side, ((0, 1), (1, 0)))


def _cycle_actions(m: int) -> tuple[Graph, GraphAction, GraphAction]:
    """Reflexive 2m-cycle with the left antipodal and right reflection actions."""
    cyc = reflexive_cycle(2 * m)
    n = 2 * m
    ident = tuple(range(n))
    anti = GraphAction(z2_group(), cyc, "left",
                       (ident, tuple((i + m) % n for i in range(n))))
    refl = GraphAction(z2_group(), cyc, "right",
                       (ident, tuple(n - 1 - i for i in range(n))))
    return cyc, anti, refl


# ---------------------------------------------------------------------------
# subdivided cross polytopes and polygon face posets


@dataclass(frozen=True)
class CrossPolytope:
    """The m-th barycentric subdivision of a cross-polytope boundary sphere."""

    k: int
    m: int
    complex: SimplicialComplex
    poset: Poset  # face poset of `complex`
    antipodal: PosetAction  # left, free
    reflection: PosetAction  # right: negates the first coordinate


def cross_polytope_complex(k: int, m: int,
                           guards: Guards = DEFAULT_GUARDS) -> CrossPolytope:
    """Boundary sphere of the (k+1)-dimensional cross polytope, subdivided m times.

    Vertices of the unsubdivided boundary are 2i (the +e_{i+1} pole) and
    2i+1 (the -e_{i+1} pole).  The free antipodal action swaps the poles of
    every coordinate; the right reflection action swaps only the first pair.
    Subdivision is the chain poset of the face poset, with both actions
    transported through each step.
    """
    if k < 0 or m < 0:
        raise ValueError("cross polytope needs k >= 0 and m >= 0")
    nv = 2 * (k + 1)
    facets = []
    for signs in range(1 << (k + 1)):
        facets.append(tuple(sorted(2 * i + ((signs >> i) & 1)
                                   for i in range(k + 1))))
    x = make_complex(nv, sorted(facets))
    p = face_poset(x)
    z2 = z2_group()
    ident = tuple(range(nv))
    anti_v = tuple(v ^ 1 for v in range(nv))
    refl_v = tuple((v ^ 1 if v < 2 else v) for v in range(nv))
    anti = face_poset_action(p, z2, (ident, anti_v), "left")
    refl = face_poset_action(p, z2, (ident, refl_v), "right")
    for _ in range(m):
        x = order_complex(p, guards)
        cp = chain_poset(p, guards)
        anti = chain_poset_action(cp, anti)
        refl = chain_poset_action(cp, refl)
        p = cp
    assert_valid_action(anti)
    assert_valid_action(refl)
    if not is_free(anti):
        raise ValueError("antipodal action failed to be free")
    return CrossPolytope(k, m, x, p, anti, refl)


@dataclass(frozen=True)
class CycleFacePoset:
    """Face poset of a 2m-gon with its antipodal and reflection actions."""

    m: int
    poset: Poset  # 4m elements: 2m vertices and 2m edges
    antipodal: PosetAction  # left: vertex i -> i+m
    reflection: PosetAction  # right: vertex i -> 2m-1-i


def cycle_face_poset(m: int) -> CycleFacePoset:
    if m < 2:
        raise ValueError("polygon face poset needs m >= 2")
    n = 2 * m
    x = make_complex(n, [(i, (i + 1) % n) for i in range(n)])
    p = face_poset(x)
    z2 = z2_group()
    ident = tuple(range(n))
    anti = face_poset_action(p, z2,
                             (ident, tuple((i + m) % n for i in range(n))),
                             "left")
    refl = face_poset_action(p, z2,
                             (ident, tuple(n - 1 - i for i in range(n))),
                             "right")
    assert_valid_action(anti)
    assert_valid_action(refl)
    return CycleFacePoset(m, p, anti, refl)


# ---------------------------------------------------------------------------
# spherical graphs S(k,m) and their direct system


@dataclass(frozen=True)
class SphericalGraph:
    """S(k,m): the twisted product of an edge with a subdivided sphere skeleton."""

    k: int
    m: int
    graph: Graph
    right_action: GraphAction
    twisted: TwistedProduct
    cross: CrossPolytope


def spherical_graph(k: int, m: int,
                    guards: Guards = DEFAULT_GUARDS) -> SphericalGraph:
    cp = cross_polytope_complex(k, m, guards)
    ag, atoms = atom_graph(cp.poset)
    anti = atom_graph_action(ag, atoms, cp.antipodal)
    refl = atom_graph_action(ag, atoms, cp.reflection)
    tw = twisted_product(_flip_action(), anti, refl)
    if not tw.graph.is_loopless():
        raise ValueError("spherical graph acquired a loop")
    return SphericalGraph(k, m, tw.graph, tw.right_action, tw, cp)


@dataclass(frozen=True)
class SystemMap:
    """The support-induced homomorphism S(k,m+1) -> S(k,m)."""

    k: int
    m: int
    source: SphericalGraph  # S(k, m+1)
    target: SphericalGraph  # S(k, m)
    mapping: tuple[int, ...]


def system_map(k: int, m: int, guards: Guards = DEFAULT_GUARDS) -> SystemMap:
    """Connecting map of the direct system, induced by chain -> max element.

    Atom-graph vertices of the source are the elements of the previous face
    poset; sending each element (an index-sorted tuple whose last entry is
    its maximum) to its maximum lands in the atoms of that poset, which are
    the atom-graph vertices of the target.  The map descends through the
    twisted product because taking maxima commutes with both actions.
    """
    src = spherical_graph(k, m + 1, guards)
    dst = spherical_graph(k, m, guards)
    p_src, p_dst = src.cross.poset, dst.cross.poset
    _, src_atoms = atom_graph(p_src)
    dst_ag, dst_atoms = atom_graph(p_dst)
    dst_pos = {a: i for i, a in enumerate(dst_atoms)}
    vertex_map = []
    for a in src_atoms:
        (x,) = p_src.elements[a]  # singleton chain over the previous poset
        y = p_dst.elements[x][-1]  # maximum entry = poset maximum
        vertex_map.append(dst_pos[p_dst.index[(y,)]])
    nh_src = len(src_atoms)
    nh_dst = dst_ag.n
    mapping = [-1] * src.graph.n
    for t in range(2):
        for a in range(nh_src):
            v = src.twisted.orbit_of[t * nh_src + a]
            w = dst.twisted.orbit_of[t * nh_dst + vertex_map[a]]
            if mapping[v] not in (-1, w):
                raise ValueError("support map is not constant on orbits")
            mapping[v] = w
    if not check_homomorphism(mapping, src.graph, dst.graph):
        raise ValueError("support map failed to induce a homomorphism")
    return SystemMap(k, m, src, dst, tuple(mapping))


# ---------------------------------------------------------------------------
# twisted toroidal graphs T(k,m)


@dataclass(frozen=True)
class ToroidalGraph:
    """T(k,m): k-fold left-associated twisted product of K2 with 2m-cycles."""

    k: int
    m: int
    graph: Graph
    right_action: GraphAction  # reflection on the last cycle factor


def twisted_toroidal(k: int, m: int,
                     guards: Guards = DEFAULT_GUARDS) -> ToroidalGraph:
    if k < 0:
        raise ValueError("toroidal graph needs k >= 0")
    if m < 2:
        raise ValueError("toroidal graph needs m >= 2")
    act = _flip_action()
    graph = act.graph
    for _ in range(k):
        _, anti, refl = _cycle_actions(m)
        tw = twisted_product(act, anti, refl)
        graph, act = tw.graph, tw.right_action
        if not graph.is_loopless():
            raise ValueError("toroidal graph acquired a loop")
    return ToroidalGraph(k, m, graph, act)


# ---------------------------------------------------------------------------
# generalized Mycielski construction


def mycielski(g: Graph, m: int) -> Graph:
    """Quotient of looped-path x g collapsing the far path end to an apex.

    The result has m*|V(g)|+1 vertices; the apex is the last vertex.
    """
    if m < 1:
        raise ValueError("Mycielski construction needs m >= 1")
    if g.n == 0:
        raise ValueError("Mycielski construction needs a nonempty graph")
    prod = product(looped_path(m), g)
    blocks = [[i] for i in range(m * g.n)]
    blocks.append(list(range(m * g.n, (m + 1) * g.n)))
    return quotient(prod, Partition.from_blocks(prod.n, blocks))


def iterated_mycielski(g: Graph, m: int, k: int) -> Graph:
    if k < 0:
        raise ValueError("negative iteration count")
    for _ in range(k):
        g = mycielski(g, m)
    return g


# ---------------------------------------------------------------------------
# explicit colorings


@dataclass(frozen=True)
class SubdivisionColoring:
    """A proper coloring of the twisted double subdivision of a free complex."""

    twisted: TwistedProduct
    coloring: tuple[int, ...]
    target: Graph
    phi: tuple[int, ...]  # color of each chain of the input poset


def subdivision_coloring(p: Poset, action: PosetAction,
                         guards: Guards = DEFAULT_GUARDS
                         ) -> SubdivisionColoring:
    """Color the edge-twist of the second subdivision of a free complex.

    ``p`` is the face poset of a regular complex of dimension n carrying a
    free involution.  Each chain c of ``p`` receives the color
    max{height(q) : q in S and q in c} when that set is nonempty and n+1
    otherwise, where S holds the minimum-index representative of every
    orbit.  Assembling the chain colors over the twisted product of the
    double subdivision's skeleton with an edge yields a proper coloring
    with at most n+2 colors, which is validated before returning.
    """
    if action.group.order != 2:
        raise ValueError("the action must be an involution")
    act = as_left(action)
    assert_valid_action(act)
    if not is_free(act):
        raise ValueError("the action is not free")
    heights = p.heights
    n = max(heights)
    reps = {block[0] for block in orbits(act)}

    cp = chain_poset(p, guards)
    phi = []
    for chain in cp.elements:
        picked = [heights[q] for q in chain if q in reps]
        phi.append(max(picked) if picked else n + 1)

    cact = chain_poset_action(cp, act)
    cp2 = chain_poset(cp, guards)
    c2act = chain_poset_action(cp2, cact)
    ag, atoms = atom_graph(cp2)
    gact = atom_graph_action(ag, atoms, c2act)
    tw = twisted_product(_flip_action(), gact)

    chain_of = [cp2.elements[a][0] for a in atoms]
    tau = cact.maps[1]
    coloring = []
    for t, a in tw.pairs:
        c = chain_of[a]
        coloring.append(phi[c] if t == 0 else phi[tau[c]])
    target = complete_graph(n + 2)
    if not check_homomorphism(coloring, tw.graph, target):
        raise ValueError("subdivision coloring failed validation")
    return SubdivisionColoring(tw, tuple(coloring), target, tuple(phi))


def _swap01(n: int) -> tuple[int, ...]:
    return (1, 0) + tuple(range(2, n))


def _hexagon_identification() -> tuple[tuple[int, ...], ...]:
    """All labelings of the reflexive hexagon by the looped vertices of K3^K2
    that are cycle isomorphisms intertwining shift-by-3 with argument swap
    and reflection with the value swap of colors 0,1; sorted for determinism.
    """
    k2, k3 = complete_graph(2), complete_graph(3)
    ex = exponential(k2, k3)
    emaps = exponential_vertex_maps(k2, k3)
    eidx = {f: i for i, f in enumerate(emaps)}
    looped = [v for v in range(ex.n) if ex.has_edge(v, v)]
    arg_swap = {v: eidx[(emaps[v][1], emaps[v][0])] for v in looped}
    val_swap = {v: eidx[tuple(_swap01(3)[x] for x in emaps[v])]
                for v in looped}
    found = []
    for start in looped:
        nbrs = [w for w in looped if w != start and ex.has_edge(start, w)]
        for second in nbrs:
            walk = [start, second]
            while len(walk) < 6:
                nxt = [w for w in looped
                       if w not in walk and ex.has_edge(walk[-1], w)]
                if len(nxt) != 1:
                    break
                walk.append(nxt[0])
            if len(walk) != 6 or not ex.has_edge(walk[-1], walk[0]):
                continue
            if all(walk[(j + 3) % 6] == arg_swap[walk[j]] for j in range(6)) \
                    and all(walk[(5 - j) % 6] == val_swap[walk[j]]
                            for j in range(6)):
                found.append(tuple(walk))
    return tuple(sorted(found))


def _cycle_collapse(m: int) -> tuple[int, ...]:
    """The equivariant squeeze of a reflexive 2m-cycle onto a reflexive hexagon."""
    col = [0] * (2 * m)
    for i in range(1, m - 1):
        col[i] = 1
    col[m - 1] = 2
    col[m] = 3
    for j in range(m + 1, 2 * m - 1):
        col[j] = 4
    col[2 * m - 1] = 5
    return tuple(col)


@dataclass(frozen=True)
class EquivariantColoring:
    """An equivariant proper coloring of a twisted product with a 2m-cycle."""

    twisted: TwistedProduct
    coloring: tuple[int, ...]
    target: Graph


def equivariant_coloring_step(t_act: GraphAction, coloring: Sequence[int],
                              n: int, m: int,
                              guards: Guards = DEFAULT_GUARDS
                              ) -> EquivariantColoring:
    """Extend an equivariant (n+2)-coloring of T to one of T x_Z2 C(2m) with n+3.

    ``t_act`` is a right involution on T; ``coloring`` must be a proper
    homomorphism T -> K_{n+2} intertwining the involution with the swap of
    colors 0 and 1.  The result composes the squeeze of the 2m-cycle onto a
    hexagon, the identification of that hexagon with the looped part of
    K3^K2, the extension of such functions by x -> x+1 on colors above 2,
    and evaluation at the given coloring.  Both properness and equivariance
    of the output are validated.
    """
    if m < 3:
        raise ValueError("coloring step needs m >= 3")
    if t_act.side != "right" or t_act.group.order != 2:
        raise ValueError("need a right involution on the base graph")
    t = t_act.graph
    source = complete_graph(n + 2)
    col = list(coloring)
    if not check_homomorphism(col, t, source):
        raise ValueError("base coloring is not a proper homomorphism")
    sw = _swap01(n + 2)
    tau = t_act.maps[1]
    if any(col[tau[v]] != sw[col[v]] for v in range(t.n)):
        raise ValueError("base coloring is not equivariant")

    _, anti, refl = _cycle_actions(m)
    tw = twisted_product(t_act, anti, refl)
    walk = _hexagon_identification()[0]
    emaps = exponential_vertex_maps(complete_graph(2), complete_graph(3))
    squeeze = _cycle_collapse(m)
    out = []
    for tt, hh in tw.pairs:
        f = emaps[walk[squeeze[hh]]]
        c = col[tt]
        out.append(f[c] if c < 2 else c + 1)
    target = complete_graph(n + 3)
    assert check_homomorphism(out, tw.graph, target)
    sw3 = _swap01(n + 3)
    rho = tw.right_action.maps[1]
    assert all(out[rho[v]] == sw3[out[v]] for v in range(tw.graph.n))
    return EquivariantColoring(tw, tuple(out), target)


# ---------------------------------------------------------------------------
# coindex certificates and index upper bounds


@dataclass(frozen=True)
class CoindexCertificate:
    """A homomorphism S(k,m) -> G witnessing coindex >= k."""

    k: int
    m: int
    mapping: tuple[int, ...]
    source: SphericalGraph


def coindex_certificate(g: Graph, k: int, m_max: int,
                        guards: Guards = DEFAULT_GUARDS
                        ) -> Optional[CoindexCertificate]:
    """Search for a homomorphism from S(k,m) into g for m <= m_max.

    A hit certifies that the coindex of the edge Hom poset of g is at
    least k; absence up to m_max proves nothing.
    """
    if k < 0 or m_max < 0:
        raise ValueError("need k >= 0 and m_max >= 0")
    for m in range(m_max + 1):
        s = spherical_graph(k, m, guards)
        f = find_homomorphism(s.graph, g)
        if f is not None:
            return CoindexCertificate(k, m, tuple(f), s)
    return None


@dataclass(frozen=True)
class IndexBound:
    """Truncated minimum of chromatic numbers of twisted clique-graph iterates."""

    value: Optional[int]
    terms: tuple[int, ...]


def index_upper_bound(t_act: GraphAction, g: Graph, i_max: int,
                      guards: Guards = DEFAULT_GUARDS) -> IndexBound:
    """min over 0 <= i <= i_max of the chromatic number of the edge-twist of
    the i-th clique-graph iterate of the looped part of g^T.

    ``t_act`` must be a right involution on T flipping at least one edge.
    When T has no homomorphism into g the bound is undefined (value None).
    """
    if i_max < 0:
        raise ValueError("need i_max >= 0")
    if t_act.side != "right" or t_act.group.order != 2:
        raise ValueError("need a right involution on the base graph")
    t = t_act.graph
    tau = t_act.maps[1]
    if not any(t.has_edge(v, tau[v]) for v in range(t.n)):
        raise ValueError("the involution must flip an edge")
    assert_valid_action(t_act)
    ex = exponential(t, g, guards)
    act = exponential_action(t_act, g, ex)
    sub, verts = looped_subgraph_S(ex)
    if sub.n == 0:
        return IndexBound(None, ())
    pos = {v: i for i, v in enumerate(verts)}
    cur = sub
    cur_maps = tuple(tuple(pos[mp[v]] for v in verts) for mp in act.maps)
    k2_left = _flip_action("left")
    terms = []
    for i in range(i_max + 1):
        cur_act = GraphAction(z2_group(), cur, "left", cur_maps)
        tw = twisted_product(as_right(cur_act), k2_left)
        terms.append(chromatic_number(tw.graph))
        if i == i_max:
            break
        bg, members = clique_graph_B(cur, guards)
        midx = {mem: j for j, mem in enumerate(members)}
        cur_maps = tuple(tuple(midx[tuple(sorted(mp[v] for v in mem))]
                               for mem in members) for mp in cur_maps)
        cur = bg
    return IndexBound(min(terms), tuple(terms))


# ---------------------------------------------------------------------------
# Csorba and universality constructions


def _validated_free_face_action(x: SimplicialComplex, group: FiniteGroup,
                                vertex_maps: Sequence[Sequence[int]]
                                ) -> tuple[Poset, PosetAction]:
    fp = face_poset(x)
    try:
        act = face_poset_action(fp, group, [tuple(vm) for vm in vertex_maps],
                                "left")
    except KeyError:
        raise ValueError("the maps are not simplicial automorphisms")
    assert_valid_action(act)
    if not is_free(act):
        raise ValueError("the action is not free")
    return fp, act


def csorba_graph(x: SimplicialComplex, involution: Sequence[int],
                 guards: Guards = DEFAULT_GUARDS) -> Graph:
    """Edge-twist of the subdivision skeleton of a complex with free involution.

    Realizes the complex, up to homotopy, as the edge Hom poset of the
    resulting loopless graph.
    """
    ident = tuple(range(x.n))
    fp, act = _validated_free_face_action(x, z2_group(),
                                          (ident, tuple(involution)))
    cp = chain_poset(fp, guards)
    cact = chain_poset_action(cp, act)
    ag, atoms = atom_graph(cp)
    gact = atom_graph_action(ag, atoms, cact)
    tw = twisted_product(_flip_action(), gact)
    assert tw.graph.is_loopless()
    return tw.graph


def universality_graph(x: SimplicialComplex, n: int,
                       vertex_maps: Sequence[Sequence[int]] | str,
                       guards: Guards = DEFAULT_GUARDS) -> Graph:
    """K_n twisted with the triple subdivision skeleton of a free S_n complex.

    ``vertex_maps`` gives one vertex permutation of the complex per element
    of the canonical symmetric group on n points (in its element order);
    the string "regular" selects the left regular action, which requires
    the complex to have exactly n! vertices identified with the group
    elements.  Realizes the complex, up to homotopy, as Hom(K_n, result).
    """
    if n < 2:
        raise ValueError("universality construction needs n >= 2")
    group = symmetric_group(n)
    if isinstance(vertex_maps, str):
        if vertex_maps != "regular":
            raise ValueError(f"unknown action shorthand '{vertex_maps}'")
        if x.n != group.order:
            raise ValueError("regular action needs n! vertices")
        maps: Sequence[Sequence[int]] = left_regular_maps(group)
    else:
        maps = vertex_maps
    fp, act = _validated_free_face_action(x, group, maps)
    p, a = fp, act
    for _ in range(3):
        p2 = chain_poset(p, guards)
        a = chain_poset_action(p2, a)
        p = p2
    ag, atoms = atom_graph(p)
    ga = atom_graph_action(ag, atoms, a)
    kn_right = GraphAction(group, complete_graph(n), "right",
                           tuple(group.elements[group.inv(i)]
                                 for i in range(group.order)))
    tw = twisted_product(kn_right, ga)
    assert tw.graph.is_loopless()
    return tw.graph


# ---------------------------------------------------------------------------
# dispatch for CLI-facing identifiers


def family_graph(spec: FamilySpec, guards: Guards = DEFAULT_GUARDS) -> Graph:
    """Build the graph named by a parameter-only family specification."""
    if spec.family == "spherical":
        return spherical_graph(spec.k, spec.m, guards).graph
    if spec.family == "toroidal":
        return twisted_toroidal(spec.k, spec.m, guards).graph
    if spec.family == "mycielski":
        return iterated_mycielski(complete_graph(2), spec.m,
                                  1 if spec.k is None else spec.k)
    raise ValueError(f"family '{spec.family}' needs an explicit complex")
