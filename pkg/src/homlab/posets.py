"""Finite posets, chain (subdivision) functors, and simplicial complexes.

Elements are dense indices 0..m-1. The order is stored as a tuple of
"above" bitmasks: bit j of above[i] is set iff i <= j. Each poset may
carry a payload tuple (chains, faces, map images) describing what its
elements are; payloads never influence the order and are preserved by
subposet constructions.

Chains and faces are canonically encoded as index-sorted tuples, and the
element order of every constructed poset sorts by (length, tuple), which
is a linear extension of containment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterator, Optional, Sequence

from .graphs import Graph, bits
from .limits import DEFAULT_GUARDS, GuardExceeded, Guards

# full consistency checks are O(sum of up-set sizes); skipped above this size
_VALIDATE_LIMIT = 1024


@dataclass(frozen=True)
class Poset:
    m: int
    above: tuple[int, ...]
    elements: Optional[tuple] = None

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("negative element count")
        if len(self.above) != self.m:
            raise ValueError("above mask count mismatch")
        if self.elements is not None and len(self.elements) != self.m:
            raise ValueError("payload length mismatch")
        full = (1 << self.m) - 1
        for i, a in enumerate(self.above):
            if a & ~full:
                raise ValueError("above mask out of range")
            if not a >> i & 1:
                raise ValueError(f"relation not reflexive at {i}")
        if self.m <= _VALIDATE_LIMIT:
            for i in range(self.m):
                for j in bits(self.above[i]):
                    if j != i and self.above[j] >> i & 1:
                        raise ValueError(f"antisymmetry fails at {i},{j}")
                    if self.above[j] & ~self.above[i]:
                        raise ValueError(f"transitivity fails at {i},{j}")

    def leq(self, i: int, j: int) -> bool:
        return bool(self.above[i] >> j & 1)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    def element(self, i: int):
        return i if self.elements is None else self.elements[i]

    @cached_property
    def index(self) -> dict:
        """Payload -> element index (identity when there is no payload)."""
        if self.elements is None:
            return {i: i for i in range(self.m)}
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def below(self) -> tuple[int, ...]:
        out = [0] * self.m
        for i, a in enumerate(self.above):
            bit = 1 << i
            for j in bits(a):
                out[j] |= bit
        return tuple(out)

    @cached_property
    def covers(self) -> tuple[int, ...]:
        """covers[i] = bitmask of upper covers of i."""
        out = []
        for i in range(self.m):
            up = self.above[i] & ~(1 << i)
            cov = up
            for j in bits(up):
                cov &= ~(self.above[j] & ~(1 << j))
            out.append(cov)
        return tuple(out)

    @cached_property
    def lower_covers(self) -> tuple[int, ...]:
        out = [0] * self.m
        for i, cov in enumerate(self.covers):
            bit = 1 << i
            for j in bits(cov):
                out[j] |= bit
        return tuple(out)

    @cached_property
    def minimal_mask(self) -> int:
        return sum(1 << i for i in range(self.m) if self.below[i] == 1 << i)

    @cached_property
    def maximal_mask(self) -> int:
        return sum(1 << i for i in range(self.m) if self.above[i] == 1 << i)

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        """Minimal elements, ascending."""
        return tuple(bits(self.minimal_mask))

    @cached_property
    def heights(self) -> tuple[int, ...]:
        h = [0] * self.m
        for i in sorted(range(self.m), key=lambda v: self.below[v].bit_count()):
            low = self.lower_covers[i]
            h[i] = 1 + max(h[j] for j in bits(low)) if low else 0
        return tuple(h)

    def dual(self) -> "Poset":
        return Poset(self.m, self.below, self.elements)


def from_leq_pairs(m: int, pairs: Sequence[tuple[int, int]],
                   elements: Optional[tuple] = None) -> Poset:
    """Poset from generating relations; reflexive-transitive closure taken."""
    rows = [1 << i for i in range(m)]
    for lo, hi in pairs:
        if not (0 <= lo < m and 0 <= hi < m):
            raise ValueError("relation index out of range")
        rows[lo] |= 1 << hi
    for k in range(m):
        rk = rows[k]
        for i in range(m):
            if rows[i] >> k & 1:
                rows[i] |= rk
    for i in range(m):
        for j in bits(rows[i]):
            if j != i and rows[j] >> i & 1:
                raise ValueError(f"relations create a cycle through {i},{j}")
    return Poset(m, tuple(rows), elements)


from_covers = from_leq_pairs


def induced_subposet(p: Poset, keep: Sequence[int]) -> tuple[Poset, tuple[int, ...]]:
    """Subposet on `keep` (made ascending); returns it plus the kept indices."""
    keep = tuple(sorted(set(keep)))
    pos = {v: i for i, v in enumerate(keep)}
    above = []
    for v in keep:
        a = 0
        for j in bits(p.above[v]):
            if j in pos:
                a |= 1 << pos[j]
        above.append(a)
    payload = None if p.elements is None else tuple(p.elements[v] for v in keep)
    return Poset(len(keep), tuple(above), payload), keep


# ---------------------------------------------------------------------------
# simplicial complexes


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    facets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for f in self.facets:
            if not f:
                raise ValueError("empty facet")
            if list(f) != sorted(set(f)):
                raise ValueError(f"facet not strictly sorted: {f}")
            if f[0] < 0 or f[-1] >= self.n:
                raise ValueError(f"facet vertex out of range: {f}")
            if f in seen:
                raise ValueError(f"duplicate facet: {f}")
            seen.add(f)
        if len(self.facets) <= 2000:
            masks = [sum(1 << v for v in f) for f in self.facets]
            for i, a in enumerate(masks):
                for j, b in enumerate(masks):
                    if i != j and a & ~b == 0:
                        raise ValueError("facet contained in another facet")

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def all_faces(self, limit: Optional[int] = None) -> list[tuple[int, ...]]:
        """Every nonempty face, sorted by (dimension, vertex tuple)."""
        seen = set()
        for f in self.facets:
            for r in range(1, len(f) + 1):
                for sub in itertools.combinations(f, r):
                    seen.add(sub)
                    if limit is not None and len(seen) > limit:
                        raise GuardExceeded("complex_faces", limit, len(seen))
        return sorted(seen, key=lambda t: (len(t), t))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(f) - 1) for f in self.all_faces())


def make_complex(n: int, faces: Sequence[Sequence[int]]) -> SimplicialComplex:
    """Complex generated by `faces`; non-maximal entries dropped."""
    norm = sorted({tuple(sorted(set(f))) for f in faces if f},
                  key=lambda t: (-len(t), t))
    masks: list[int] = []
    facets = []
    for f in norm:
        m = sum(1 << v for v in f)
        if any(m & ~big == 0 for big in masks):
            continue
        masks.append(m)
        facets.append(f)
    return SimplicialComplex(n, tuple(sorted(facets, key=lambda t: (len(t), t))))


def complex_to_json(x: SimplicialComplex) -> dict:
    return {"n": x.n, "facets": [list(f) for f in x.facets]}


def complex_from_json(data: dict) -> SimplicialComplex:
    return SimplicialComplex(int(data["n"]),
                             tuple(tuple(f) for f in data["facets"]))


# ---------------------------------------------------------------------------
# chains and the face/chain posets


def iter_chains(p: Poset, limit: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All nonempty chains of p, each exactly once, as ascending-in-p tuples."""
    count = 0
    stack = [(i,) for i in range(p.m - 1, -1, -1)]
    while stack:
        chain = stack.pop()
        count += 1
        if limit is not None and count > limit:
            raise GuardExceeded("chain_elements", limit, count)
        yield chain
        ext = p.above[chain[-1]] & ~(1 << chain[-1])
        for j in bits(ext):
            stack.append(chain + (j,))


def maximal_chains(p: Poset, limit: Optional[int] = None) -> list[tuple[int, ...]]:
    """Saturated bottom-to-top chains, ascending in p, sorted lexicographically."""
    out = []
    stack = [(i,) for i in bits(p.minimal_mask)]
    while stack:
        chain = stack.pop()
        cov = p.covers[chain[-1]]
        if not cov:
            out.append(chain)
            if limit is not None and len(out) > limit:
                raise GuardExceeded("chain_elements", limit, len(out))
        else:
            for j in bits(cov):
                stack.append(chain + (j,))
    out.sort()
    return out


def _containment_poset(members: list[tuple[int, ...]], payload=None) -> Poset:
    """Poset of index-sorted tuples closed under one-element removal."""
    members = sorted(members, key=lambda t: (len(t), t))
    idx = {c: i for i, c in enumerate(members)}
    m = len(members)
    up: list[list[int]] = [[] for _ in range(m)]
    for j, d in enumerate(members):
        if len(d) > 1:
            for t in range(len(d)):
                up[idx[d[:t] + d[t + 1:]]].append(j)
    above = [0] * m
    for i in range(m - 1, -1, -1):
        a = 1 << i
        for j in up[i]:
            a |= above[j]
        above[i] = a
    return Poset(m, tuple(above), tuple(members) if payload is None else payload)


def chain_poset(p: Poset, guards: Guards = DEFAULT_GUARDS) -> Poset:
    """Nonempty chains of p ordered by containment (barycentric subdivision)."""
    chains = [tuple(sorted(c)) for c in iter_chains(p, guards.chain_elements)]
    return _containment_poset(chains)


def chain_power(p: Poset, k: int, guards: Guards = DEFAULT_GUARDS) -> Poset:
    if k < 0:
        raise ValueError("negative chain power")
    for _ in range(k):
        p = chain_poset(p, guards)
    return p


def face_poset(x: SimplicialComplex) -> Poset:
    """Nonempty faces ordered by containment; atoms are the vertices."""
    faces = x.all_faces()
    if not faces:
        raise ValueError("face poset of an empty complex")
    return _containment_poset(faces)


def atom_graph(p: Poset) -> tuple[Graph, tuple[int, ...]]:
    """The reflexive graph on minimal elements: adjacent iff a common upper bound."""
    atoms = p.atoms
    pos = {a: i for i, a in enumerate(atoms)}
    adj = [0] * len(atoms)
    for i, a in enumerate(atoms):
        for j, b in enumerate(atoms):
            if p.above[a] & p.above[b]:
                adj[i] |= 1 << j
    labels = tuple(str(p.element(a)) for a in atoms)
    return Graph(len(atoms), tuple(adj), labels), atoms


def order_complex(p: Poset, guards: Guards = DEFAULT_GUARDS) -> SimplicialComplex:
    """Vertices = elements of p, facets = maximal chains."""
    facets = [tuple(sorted(c)) for c in
              maximal_chains(p, guards.chain_elements)]
    facets.sort(key=lambda t: (len(t), t))
    return SimplicialComplex(p.m, tuple(facets))


# ---------------------------------------------------------------------------
# poset maps


@dataclass(frozen=True)
class PosetMap:
    domain: Poset
    codomain: Poset
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.domain.m:
            raise ValueError("image length mismatch")
        for v in self.image:
            if not 0 <= v < self.codomain.m:
                raise ValueError("image value out of range")

    def __call__(self, i: int) -> int:
        return self.image[i]

    def is_monotone(self) -> bool:
        dom, img, above = self.domain, self.image, self.codomain.above
        for i in range(dom.m):
            fi = img[i]
            for j in bits(dom.above[i]):
                if not above[fi] >> img[j] & 1:
                    return False
        return True

    def after(self, other: "PosetMap") -> "PosetMap":
        """self ∘ other."""
        if (other.codomain.m, other.codomain.above) != \
                (self.domain.m, self.domain.above):
            raise ValueError("composition domain mismatch")
        return PosetMap(other.domain, self.codomain,
                        tuple(self.image[v] for v in other.image))


def identity_map(p: Poset) -> PosetMap:
    return PosetMap(p, p, tuple(range(p.m)))


def support_map(p: Poset, cp: Optional[Poset] = None,
                guards: Guards = DEFAULT_GUARDS) -> PosetMap:
    """Chain poset -> p, sending a chain to its maximum element."""
    if cp is None:
        cp = chain_poset(p, guards)
    tops = []
    for c in cp.elements:
        t = c[0]
        for e in c[1:]:
            if p.leq(t, e):
                t = e
        tops.append(t)
    return PosetMap(cp, p, tuple(tops))


def is_closure_map(c: PosetMap, direction: str = "up") -> bool:
    """Monotone idempotent endomap with c(x) >= x ("up") or <= x ("down")."""
    p = c.domain
    if (c.codomain.m, c.codomain.above) != (p.m, p.above):
        raise ValueError("closure test requires an endomap")
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    if not c.is_monotone():
        return False
    img = c.image
    if any(img[img[x]] != img[x] for x in range(p.m)):
        return False
    if direction == "up":
        return all(p.leq(x, img[x]) for x in range(p.m))
    return all(p.leq(img[x], x) for x in range(p.m))


def closure_image(c: PosetMap) -> tuple[Poset, tuple[int, ...]]:
    """Subposet of fixed points of an (assumed) closure map."""
    return induced_subposet(c.domain, [x for x in range(c.domain.m)
                                       if c.image[x] == x])


def _extension_order(p: Poset) -> list[int]:
    """Linear extension; greedily prefers elements with many lower covers."""
    placed = 0
    order = []
    remaining = set(range(p.m))
    while remaining:
        best = None
        for x in remaining:
            if p.below[x] & ~placed & ~(1 << x):
                continue
            key = (-(p.lower_covers[x].bit_count()), x)
            if best is None or key < best[0]:
                best = (key, x)
        x = best[1]
        order.append(x)
        placed |= 1 << x
        remaining.discard(x)
    return order


def enumerate_poset_maps(p: Poset, q: Poset,
                         limit: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All monotone maps p -> q as image tuples; deterministic order.

    Backtracks along a linear extension of p; the candidate set for x is the
    intersection of up-sets of the images of already-placed elements below x.
    """
    if p.m == 0:
        yield ()
        return
    order = _extension_order(p)
    preds = []
    for t, x in enumerate(order):
        preds.append([order[s] for s in range(t) if p.leq(order[s], x)])
    full = (1 << q.m) - 1
    image = [0] * p.m
    count = 0

    def rec(t: int) -> Iterator[tuple[int, ...]]:
        nonlocal count
        if t == p.m:
            count += 1
            if limit is not None and count > limit:
                raise GuardExceeded("poset_map_elements", limit, count)
            yield tuple(image)
            return
        x = order[t]
        cand = full
        for y in preds[t]:
            cand &= q.above[image[y]]
            if not cand:
                return
        for v in bits(cand):
            image[x] = v
            yield from rec(t + 1)

    yield from rec(0)


def poset_maps(p: Poset, q: Poset, guards: Guards = DEFAULT_GUARDS) -> Poset:
    """Poset of all monotone maps p -> q under the pointwise order."""
    maps = sorted(enumerate_poset_maps(p, q, guards.poset_map_elements))
    m = len(maps)
    if m > guards.poset_relation:
        raise GuardExceeded("poset_relation", guards.poset_relation, m)
    geq = [[0] * q.m for _ in range(p.m)]
    for j, g in enumerate(maps):
        bit = 1 << j
        for x in range(p.m):
            for v in bits(q.below[g[x]]):
                geq[x][v] |= bit
    full = (1 << m) - 1
    above = []
    for f in maps:
        a = full
        for x in range(p.m):
            a &= geq[x][f[x]]
        above.append(a)
    return Poset(m, tuple(above), tuple(maps))


def pointwise_leq(q: Poset, f: Sequence[int], g: Sequence[int]) -> bool:
    return all(q.leq(a, b) for a, b in zip(f, g))


def has_atom_lub(p: Poset) -> bool:
    """True iff for every x the atoms below x have a least upper bound."""
    amask = p.minimal_mask
    for x in range(p.m):
        ub = (1 << p.m) - 1
        for a in bits(p.below[x] & amask):
            ub &= p.above[a]
        if not any(ub & ~p.above[u] == 0 for u in bits(ub)):
            return False
    return True


# ---------------------------------------------------------------------------
# serialization


def poset_to_json(p: Poset) -> dict:
    pairs = [[i, j] for i in range(p.m) for j in bits(p.covers[i])]
    return {"m": p.m, "covers": pairs}


def poset_from_json(data: dict) -> Poset:
    return from_covers(int(data["m"]),
                       [(int(a), int(b)) for a, b in data["covers"]])
