"""Hom posets: enumeration against brute force, induced actions, and the
structural comparison maps (currying, splitting, quotients, loop addition)."""

import itertools
import random

import pytest

from homlab.actions import (GraphAction, trivial_group, twisted_product,
                            validate_action, z2_group)
from homlab.graphs import (Graph, bits, complete_graph, cycle_graph,
                           exponential, is_isomorphic, looped_path, one_graph,
                           product, reflexive_closure, reflexive_cycle)
from homlab.homology import poset_homology
from homlab.homposets import (AdjunctionReport, HomPoset, adjunction_report,
                              compose_multihoms, curry, equivariant_atoms,
                              exponential_action, hom_poset,
                              identity_multihom, induced_hom_action,
                              is_multihom, loop_addition_maps,
                              multihom_violation, poset_adjunction_report,
                              poset_curry, poset_uncurry, product_merge,
                              product_split, pullback_multihom,
                              quotient_compare, rank_of, split_report,
                              twisted_hom_report, uncurry)
from homlab.limits import DEFAULT_GUARDS, GuardExceeded
from homlab.posets import face_poset, make_complex

SQUARE = make_complex(4, [[0, 1], [1, 2], [2, 3], [0, 3]])


def z2_graph_action(g, perm, side="left"):
    return GraphAction(z2_group(), g, side,
                       (tuple(range(g.n)), tuple(perm)))


def brute_hom_elements(g, h):
    full = range(1, 1 << h.n)
    out = []
    for combo in itertools.product(full, repeat=g.n):
        if is_multihom(g, h, combo):
            out.append(tuple(combo))
    return sorted(out)


def brute_hom_count(g, h):
    """Independent count of graph homomorphisms (the atoms)."""
    count = 0
    for f in itertools.product(range(h.n), repeat=g.n):
        if all(h.adj[f[u]] >> f[v] & 1 for u, v in g.directed_edges()):
            count += 1
    return count


def test_hom_poset_known_counts():
    hp = hom_poset(complete_graph(2), complete_graph(3))
    assert hp.m == 12 and len(hp.atoms) == 6
    assert all(hp.rank(i) == 0 for i in hp.atoms)
    assert hom_poset(complete_graph(4), complete_graph(3)).m == 0
    # Hom(1,G) is the poset of cliques of looped vertices
    from homlab.graphs import clique_graph_B
    c6 = reflexive_cycle(6)
    h1 = hom_poset(one_graph(), c6)
    _, members = clique_graph_B(c6)
    assert sorted(tuple(sorted(mem)) for mem in members) == \
        sorted(tuple(bits(e[0])) for e in h1.elements)


def test_hom_poset_brute_force():
    rng = random.Random(7)
    for _ in range(12):
        gn = rng.randint(1, 3)
        hn = rng.randint(1, 4)
        g = Graph.from_edges(gn, [(u, v) for u in range(gn)
                                  for v in range(u, gn)
                                  if rng.random() < 0.6])
        h = Graph.from_edges(hn, [(u, v) for u in range(hn)
                                  for v in range(u, hn)
                                  if rng.random() < 0.6])
        hp = hom_poset(g, h)
        assert list(hp.elements) == brute_hom_elements(g, h)
        assert len(hp.atoms) == brute_hom_count(g, h)
        for e in hp.elements:
            assert multihom_violation(g, h, e) is None


def test_hom_poset_relation_and_guards():
    hp = hom_poset(complete_graph(2), complete_graph(3))
    p = hp.poset
    for i in range(hp.m):
        for j in range(hp.m):
            want = all(x & ~y == 0 for x, y in
                       zip(hp.elements[i], hp.elements[j]))
            assert p.leq(i, j) == want == hp.leq(i, j)
    with pytest.raises(GuardExceeded):
        hom_poset(complete_graph(2), complete_graph(5),
                  DEFAULT_GUARDS.scaled(hom_elements=100))
    small = hom_poset(complete_graph(2), complete_graph(3),
                      DEFAULT_GUARDS.scaled(poset_relation=5))
    with pytest.raises(GuardExceeded):
        small.poset


def test_multihom_violations():
    g, h = complete_graph(2), complete_graph(3)
    assert "length" in multihom_violation(g, h, (1,))
    assert "empty" in multihom_violation(g, h, (0, 1))
    assert "outside" in multihom_violation(g, h, (1 << 5, 1))
    assert "edge" in multihom_violation(g, h, (0b011, 0b010))


def test_compose_multihoms():
    g, h = complete_graph(2), complete_graph(3)
    hp = hom_poset(g, h)
    hq = hom_poset(h, h)
    ident = identity_multihom(h)
    for e in hp.elements:
        assert compose_multihoms(e, ident) == e
        for b in hq.elements:
            c = compose_multihoms(e, b)
            assert is_multihom(g, h, c)
            for v in range(2):
                acc = 0
                for x in bits(e[v]):
                    acc |= b[x]
                assert c[v] == acc
    # atoms compose as plain functions
    a1 = hp.elements[hp.atoms[0]]
    for bi in hq.atoms:
        b = hq.elements[bi]
        comp = compose_multihoms(a1, b)
        assert rank_of(comp) == 0


def test_induced_action_flip_on_source():
    k2, k3 = complete_graph(2), complete_graph(3)
    hp = hom_poset(k2, k3)
    flip = z2_graph_action(k2, (1, 0))
    act = induced_hom_action(hp, source_action=flip)
    assert validate_action(act)
    from homlab.actions import is_free, orbits
    assert is_free(act)
    assert len(orbits(act)) == 6
    # trivial action is the identity action
    triv = GraphAction(trivial_group(), k3, "left", (tuple(range(3)),))
    ia = induced_hom_action(hp, target_action=triv)
    assert ia.maps == (tuple(range(hp.m)),)
    # a looped target creates fixed points
    lp = looped_path(2)
    hp2 = hom_poset(k2, lp)
    act2 = induced_hom_action(hp2, source_action=flip)
    assert validate_action(act2) and not is_free(act2)
    with pytest.raises(ValueError):
        induced_hom_action(hp)
    with pytest.raises(ValueError):
        induced_hom_action(hp, source_action=z2_graph_action(k3, (1, 0, 2)))


def test_equivariant_atoms_gap():
    """Fixed atoms can be strictly fewer than minimal fixed elements."""
    k2, c4 = complete_graph(2), reflexive_cycle(4)
    hp = hom_poset(k2, c4)
    anti = z2_graph_action(c4, (2, 3, 0, 1))
    act = induced_hom_action(hp, target_action=anti)
    fixed_atoms, minimal_fixed = equivariant_atoms(hp, act)
    assert fixed_atoms == ()
    assert len(minimal_fixed) > 0
    assert all(hp.rank(i) > 0 for i in minimal_fixed)


def test_adjunction_small():
    k2, k3 = complete_graph(2), complete_graph(3)
    rep = adjunction_report(k2, k2, k3)
    assert rep.roundtrip_identity and rep.increasing and rep.closure_ok
    assert rep.phi.is_monotone() and rep.psi.is_monotone()
    # explicit element: curry of an atom consists of the section functions
    alpha = rep.hom_product.elements[rep.hom_product.atoms[0]]
    beta = curry(k2, k2, k3, alpha)
    assert uncurry(k2, k2, k3, beta) == alpha
    emaps = list(itertools.product(range(3), repeat=2))
    for y in range(2):
        nh = 2
        for fi in bits(beta[y]):
            f = emaps[fi]
            assert all(alpha[s * nh + y] >> f[s] & 1 for s in range(2))


def test_adjunction_equivariance():
    """phi commutes with the induced actions on both sides."""
    k2, k3 = complete_graph(2), complete_graph(3)
    h = reflexive_cycle(4)
    t_flip = z2_graph_action(k2, (1, 0), side="right")
    h_anti = z2_graph_action(h, (2, 3, 0, 1))
    rep = adjunction_report(k2, h, k3)
    tw = twisted_product(t_flip, h_anti)
    act_prod = induced_hom_action(rep.hom_product,
                                  source_action=tw.diagonal)
    expo = exponential(k2, k3)
    e_act = exponential_action(t_flip, k3, expo)
    act_cur = induced_hom_action(rep.hom_curried,
                                 source_action=h_anti, target_action=e_act)
    assert validate_action(act_prod) and validate_action(act_cur)
    phi = rep.phi.image
    for i in range(rep.hom_product.m):
        assert phi[act_prod.maps[1][i]] == act_cur.maps[1][phi[i]]


def test_poset_adjunction():
    fp = face_poset(SQUARE)
    c4 = reflexive_cycle(4)
    rep = poset_adjunction_report(fp, c4)
    assert rep.roundtrip_identity and rep.decreasing
    assert rep.maps_checked > 0
    from homlab.posets import enumerate_poset_maps
    count = sum(1 for _ in enumerate_poset_maps(fp, rep.hom_single.poset))
    assert rep.maps_checked == count
    # explicit small roundtrip: a two-chain against a looped edge
    two_chain = face_poset(make_complex(2, [[0, 1]]))
    lp = looped_path(2)
    rep2 = poset_adjunction_report(two_chain, lp)
    assert rep2.roundtrip_identity and rep2.decreasing
    # hand-run one curry/uncurry pair on that instance
    from homlab.posets import atom_graph
    ag, atoms = atom_graph(two_chain)
    hom_ag = hom_poset(ag, lp)
    h1 = hom_poset(one_graph(), lp)
    for e in hom_ag.elements:
        f = poset_curry(two_chain, atoms, e, h1)
        assert poset_uncurry(f, atoms, h1) == e


def test_product_split():
    k2 = complete_graph(2)
    rep = split_report(k2, k2, k2)
    assert rep.hom_pair.m == 4
    assert rep.identity_on_pairs and rep.increasing and rep.atom_preserving
    rep2 = split_report(k2, complete_graph(3), k2)
    assert rep2.identity_on_pairs and rep2.increasing
    assert rep2.hom_pair.m >= rep2.hom_g.m  # merge is injective
    # merge formula spot check
    merged = product_merge((0b01, 0b10), (0b11, 0b01), 2)
    assert merged == (0b0011, 0b0100)
    assert product_split(merged, 2) == ((0b01, 0b10), (0b11, 0b01))


def test_quotient_compare_prism():
    k2 = complete_graph(2)
    g = product(complete_graph(2), reflexive_cycle(6))
    diag = z2_graph_action(g, tuple((1 - x // 6) * 6 + (x % 6 + 3) % 6
                                    for x in range(12)))
    rep = quotient_compare(k2, g, diag)
    assert rep.cycle_lengths == (4,)
    assert rep.hypothesis_ok and rep.violation is None
    assert rep.free and rep.strongly_regular
    assert rep.iso and rep.rank_preserved
    assert rep.warning is None
    assert rep.quotient.guaranteed
    # the quotient target is Hom(K2, prism)
    prism = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5),
                                 (3, 5), (0, 3), (1, 4), (2, 5)])
    assert is_isomorphic(rep.hom_quotient_target.target, prism)


def test_quotient_compare_trivial_group():
    k2, k3 = complete_graph(2), complete_graph(3)
    triv = GraphAction(trivial_group(), k3, "left", (tuple(range(3)),))
    rep = quotient_compare(k2, k3, triv)
    assert rep.hypothesis_ok and rep.iso and rep.rank_preserved
    assert rep.map.image == tuple(range(rep.hom_source.m))


def test_quotient_compare_violated_hypothesis():
    k2 = complete_graph(2)
    c6 = reflexive_cycle(6)
    anti = z2_graph_action(c6, (3, 4, 5, 0, 1, 2))
    rep = quotient_compare(k2, c6, anti)
    assert not rep.hypothesis_ok
    assert rep.violation is not None and rep.violation[2] in rep.cycle_lengths
    assert rep.warning is not None
    # computed outcome recorded: projection collapses too much to be iso
    assert not rep.iso


def test_tree_cycle_lengths():
    from homlab.homposets import _tree_cycle_lengths
    assert _tree_cycle_lengths(complete_graph(2)) == ()
    assert _tree_cycle_lengths(complete_graph(3)) == (3,)
    assert _tree_cycle_lengths(cycle_graph(5)) == (5,)
    assert _tree_cycle_lengths(reflexive_cycle(4))[0] == 1  # loops
    two_triangles = Graph.from_edges(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert _tree_cycle_lengths(two_triangles) == (3,)


def test_loop_addition_c6():
    k2 = complete_graph(2)
    c6 = reflexive_cycle(6)
    rep = loop_addition_maps(k2, c6)
    assert rep.j_dominates_reflexive_top
    assert rep.i_j_below_h and rep.h_dominates_top
    assert rep.i.is_monotone() and rep.j.is_monotone() \
        and rep.h.is_monotone()
    # i embeds Hom(T°,G) into Hom(T,G)
    assert len(set(rep.i.image)) == rep.hom_reflexive.m
    # homotopy-level agreement: equal homology
    assert poset_homology(rep.hom_reflexive.poset) == \
        poset_homology(rep.hom_plain.poset)


def test_loop_addition_requirements():
    k2 = complete_graph(2)
    with pytest.raises(ValueError, match="fine"):
        loop_addition_maps(k2, complete_graph(3))
    with pytest.raises(ValueError, match="isolated"):
        loop_addition_maps(Graph.from_edges(3, [(0, 1)]), reflexive_cycle(6))
    refl = reflexive_closure(k2)
    rep = loop_addition_maps(refl, reflexive_cycle(6))
    assert rep.hom_plain.elements == rep.hom_reflexive.elements
    assert rep.i.image == tuple(range(rep.hom_plain.m))


def test_twisted_hom_report():
    t_flip = z2_graph_action(complete_graph(2), (1, 0), side="right")
    c6 = reflexive_cycle(6)
    anti = z2_graph_action(c6, (3, 4, 5, 0, 1, 2))
    tw = twisted_product(t_flip, anti)
    rep = twisted_hom_report(tw, complete_graph(3))
    assert rep.iso
    assert sorted(rep.image) == list(rep.fixed)
    assert set(rep.fixed_atoms) <= set(rep.minimal_fixed)
    # the pullback matches the orders elementwise
    pos = {i: k for k, i in enumerate(rep.fixed)}
    tw_poset = rep.hom_twisted.poset
    for a in range(rep.hom_twisted.m):
        for b in range(rep.hom_twisted.m):
            assert tw_poset.leq(a, b) == rep.fixed_poset.leq(
                pos[rep.image[a]], pos[rep.image[b]])
    # pullback of an atom stays an atom
    for i in rep.hom_twisted.atoms:
        e = rep.hom_twisted.elements[i]
        assert rank_of(pullback_multihom(tw.orbit_of, e)) == 0
