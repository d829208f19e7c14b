"""Poset layer: chain functor, face posets, atom graphs, poset maps."""

from __future__ import annotations

import itertools
import random

import pytest

from homlab.graphs import cycle_graph, is_isomorphic, reflexive_cycle
from homlab.limits import DEFAULT_GUARDS, GuardExceeded
from homlab.posets import (
    Poset,
    PosetMap,
    SimplicialComplex,
    atom_graph,
    chain_poset,
    chain_power,
    closure_image,
    complex_from_json,
    complex_to_json,
    enumerate_poset_maps,
    face_poset,
    from_leq_pairs,
    has_atom_lub,
    identity_map,
    induced_subposet,
    is_closure_map,
    iter_chains,
    make_complex,
    maximal_chains,
    order_complex,
    pointwise_leq,
    poset_from_json,
    poset_maps,
    poset_to_json,
    support_map,
)

SQUARE = make_complex(4, [[0, 1], [1, 2], [2, 3], [0, 3]])
OCTAHEDRON = make_complex(6, [[x, y, z]
                              for x in (0, 1) for y in (2, 3) for z in (4, 5)])


def _random_poset(rng: random.Random, n: int, p: float = 0.3) -> Poset:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return from_leq_pairs(n, pairs)


def _brute_chains(p: Poset) -> set[tuple[int, ...]]:
    out = set()
    for r in range(1, p.m + 1):
        for sub in itertools.combinations(range(p.m), r):
            if all(p.comparable(a, b) for a, b in itertools.combinations(sub, 2)):
                out.add(sub)
    return out


def test_poset_validation():
    with pytest.raises(ValueError):
        Poset(2, (0b11, 0b11))  # antisymmetry
    with pytest.raises(ValueError):
        Poset(2, (0b10, 0b10))  # not reflexive at 0
    with pytest.raises(ValueError):
        Poset(3, (0b011, 0b110, 0b100))  # 0<1<2 but not 0<2
    with pytest.raises(ValueError):
        from_leq_pairs(2, [(0, 1), (1, 0)])
    p = from_leq_pairs(3, [(0, 1), (1, 2)])
    assert p.leq(0, 2)  # transitive closure
    assert p.atoms == (0,)
    assert p.heights == (0, 1, 2)
    assert p.maximal_mask == 0b100


def test_dual():
    p = from_leq_pairs(3, [(0, 2), (1, 2)])
    d = p.dual()
    assert d.leq(2, 0) and not d.leq(0, 2)
    assert d.dual().above == p.above


def test_face_poset_counts():
    edge = make_complex(2, [[0, 1]])
    fp = face_poset(edge)
    assert fp.m == 3 and len(fp.atoms) == 2
    assert face_poset(SQUARE).m == 8
    assert face_poset(OCTAHEDRON).m == 26  # 6 + 12 + 8
    with pytest.raises(ValueError):
        face_poset(SimplicialComplex(0, ()))


def test_face_poset_relation_is_containment():
    fp = face_poset(OCTAHEDRON)
    for i, a in enumerate(fp.elements):
        for j, b in enumerate(fp.elements):
            assert fp.leq(i, j) == (set(a) <= set(b))


def test_chain_poset_small():
    antichain = from_leq_pairs(2, [])
    assert chain_poset(antichain).m == 2
    two = from_leq_pairs(2, [(0, 1)])
    cp = chain_poset(two)
    assert cp.m == 3
    assert cp.elements == ((0,), (1,), (0, 1))
    assert chain_poset(face_poset(SQUARE)).m == 16


def test_chain_poset_matches_brute_force():
    rng = random.Random(3)
    for _ in range(15):
        p = _random_poset(rng, rng.randint(1, 6))
        cp = chain_poset(p)
        brute = _brute_chains(p)
        assert set(cp.elements) == brute
        for i, a in enumerate(cp.elements):
            for j, b in enumerate(cp.elements):
                assert cp.leq(i, j) == (set(a) <= set(b))


def test_chain_guard():
    p = from_leq_pairs(8, [(i, j) for i in range(8) for j in range(i + 1, 8)])
    with pytest.raises(GuardExceeded):
        chain_poset(p, DEFAULT_GUARDS.scaled(chain_elements=10))


def test_chain_power():
    two = from_leq_pairs(2, [(0, 1)])
    assert chain_power(two, 0).above == two.above
    assert chain_power(two, 1).m == 3
    assert chain_power(two, 2).m == 5  # 3 singletons + 2 two-chains in the vee
    sq = face_poset(SQUARE)
    assert chain_power(sq, 2).m == 32  # doubling: 16-gon face poset


def test_atom_graph_of_polygon_face_poset():
    g, atoms = atom_graph(face_poset(SQUARE))
    assert is_isomorphic(g, reflexive_cycle(4))
    assert len(atoms) == 4
    g6, _ = atom_graph(chain_poset(from_leq_pairs(1, [])))
    assert g6.n == 1 and g6.has_edge(0, 0)


def test_atom_graph_of_chain_poset_is_comparability():
    rng = random.Random(9)
    for _ in range(10):
        p = _random_poset(rng, rng.randint(1, 6))
        cp = chain_poset(p)
        g, atoms = atom_graph(cp)
        # atoms of Chain P are the singleton chains, indexed like P itself
        assert len(atoms) == p.m
        assert tuple(cp.elements[a] for a in atoms) == \
            tuple((i,) for i in range(p.m))
        for i in range(p.m):
            for j in range(p.m):
                assert g.has_edge(i, j) == p.comparable(i, j)


def test_atom_graph_antichain():
    g, _ = atom_graph(from_leq_pairs(3, []))
    assert g.n == 3 and g.edges() == [(0, 0), (1, 1), (2, 2)]


def test_order_complex():
    two = from_leq_pairs(2, [(0, 1)])
    assert order_complex(two).facets == ((0, 1),)
    oc = order_complex(face_poset(SQUARE))
    assert oc.n == 8 and len(oc.facets) == 8
    assert all(len(f) == 2 for f in oc.facets)
    g_vertices = set(v for f in oc.facets for v in f)
    assert g_vertices == set(range(8))


def test_maximal_chains_oracle():
    rng = random.Random(31)
    for _ in range(10):
        p = _random_poset(rng, rng.randint(1, 6))
        brute = {c for c in _brute_chains(p)
                 if not any(set(c) < set(d) for d in _brute_chains(p))}
        got = {tuple(sorted(c)) for c in maximal_chains(p)}
        assert got == brute


def test_iter_chains_each_once():
    p = face_poset(SQUARE)
    chains = [tuple(sorted(c)) for c in iter_chains(p)]
    assert len(chains) == len(set(chains)) == 16


def test_support_map():
    p = face_poset(SQUARE)
    s = support_map(p)
    assert s.is_monotone()
    assert set(s.image) >= set(range(p.m))  # surjective
    cp = s.domain
    for i, chain in enumerate(cp.elements):
        top = s(i)
        assert all(p.leq(e, top) for e in chain) and top in chain


def test_closure_maps():
    p = from_leq_pairs(3, [(0, 1), (1, 2)])
    assert is_closure_map(identity_map(p))
    const_top = PosetMap(p, p, (2, 2, 2))
    assert is_closure_map(const_top, "up")
    assert not is_closure_map(const_top, "down")
    const_bot = PosetMap(p, p, (0, 0, 0))
    assert is_closure_map(const_bot, "down")
    img, kept = closure_image(const_top)
    assert img.m == 1 and kept == (2,)
    # monotone, increasing, but not idempotent
    p4 = from_leq_pairs(4, [(0, 1), (1, 2), (2, 3)])
    shift = PosetMap(p4, p4, (1, 2, 3, 3))
    assert not is_closure_map(shift)
    with pytest.raises(ValueError):
        is_closure_map(PosetMap(p, from_leq_pairs(2, []), (0, 0, 1)))


def test_poset_maps_counts():
    two = from_leq_pairs(2, [(0, 1)])
    assert poset_maps(two, two).m == 3
    single = from_leq_pairs(1, [])
    q = from_leq_pairs(3, [(0, 1)])
    mp = poset_maps(single, q)
    assert mp.m == 3
    assert [mp.leq(i, j) for i in range(3) for j in range(3)] == \
        [q.leq(i, j) for i in range(3) for j in range(3)]
    anti = from_leq_pairs(2, [])
    assert poset_maps(anti, two).m == 4


def test_poset_maps_matches_brute_force():
    rng = random.Random(17)
    for _ in range(12):
        p = _random_poset(rng, rng.randint(1, 4))
        q = _random_poset(rng, rng.randint(1, 4))
        mp = poset_maps(p, q)
        brute = set()
        for f in itertools.product(range(q.m), repeat=p.m):
            if all(q.leq(f[i], f[j]) for i in range(p.m)
                   for j in bits_above(p, i)):
                brute.add(f)
        assert set(mp.elements) == brute
        for i, f in enumerate(mp.elements):
            for j, g in enumerate(mp.elements):
                assert mp.leq(i, j) == pointwise_leq(q, f, g)


def bits_above(p: Poset, i: int):
    return [j for j in range(p.m) if p.leq(i, j)]


def test_enumerate_poset_maps_deterministic_and_guarded():
    p = face_poset(SQUARE)
    first = list(enumerate_poset_maps(p, p))
    second = list(enumerate_poset_maps(p, p))
    assert first == second and len(first) == len(set(first))
    with pytest.raises(GuardExceeded):
        list(enumerate_poset_maps(p, p, limit=5))


def test_has_atom_lub():
    assert has_atom_lub(face_poset(SQUARE))
    assert has_atom_lub(face_poset(OCTAHEDRON))
    assert has_atom_lub(chain_poset(face_poset(SQUARE)))
    # two atoms with two minimal upper bounds and no join
    bowtie = from_leq_pairs(4, [(0, 2), (1, 2), (0, 3), (1, 3)])
    assert not has_atom_lub(bowtie)


def test_induced_subposet_keeps_payload():
    fp = face_poset(SQUARE)
    sub, kept = induced_subposet(fp, [0, 1, 4])
    assert sub.m == 3
    assert sub.elements == tuple(fp.elements[v] for v in kept)
    assert sub.leq(0, 2) == fp.leq(kept[0], kept[2])


def test_poset_json_round_trip():
    rng = random.Random(41)
    for _ in range(8):
        p = _random_poset(rng, rng.randint(1, 6))
        back = poset_from_json(poset_to_json(p))
        assert back.above == p.above


def test_complex_json_round_trip():
    back = complex_from_json(complex_to_json(OCTAHEDRON))
    assert back == OCTAHEDRON


def test_make_complex_drops_subsumed_faces():
    x = make_complex(3, [[0, 1, 2], [0, 1], [2]])
    assert x.facets == ((0, 1, 2),)
    assert x.euler_characteristic() == 1
    assert SQUARE.euler_characteristic() == 0
