"""Generators of complexes with known invariants.

Every generator returns a :class:`CertifiedComplex`: the complex together
with the invariants its construction guarantees (number of generators of
π₁, first Betti numbers, expected g₂) and a trace of the gluing steps.
These certificates are the ground truth the verification harness compares
against.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from math import comb
from typing import Iterable, Sequence

from .complex import SimplicialComplex, bit_ids, build_complex, popcount
from .errors import ConstructionError, MalformedInputError


@dataclass(frozen=True)
class CertifiedComplex:
    complex: SimplicialComplex
    m: int | None = None
    b1: dict = field(default_factory=dict)  # field string -> b_1
    g2: int | None = None
    trace: tuple = ()
    name: str = ""
    stacked: bool = False  # built from simplex boundaries by connected sums and handles only

    def certificate(self) -> dict:
        return {
            "name": self.name,
            "stacked": self.stacked,
            "m": self.m,
            "b1": dict(self.b1),
            "g2": self.g2,
            "trace": [list(step) for step in self.trace],
        }


def _every_field(value: int) -> dict:
    return {"q": value, "p:2": value, "p:3": value, "p:5": value}


def simplex_boundary(d: int, labels: Sequence | None = None) -> CertifiedComplex:
    """∂Δ^{d+1}: all (d+1)-subsets of d+2 vertices."""
    if d < 1:
        raise MalformedInputError("simplex boundary needs d >= 1")
    labels = list(range(d + 2)) if labels is None else list(labels)
    if len(labels) != d + 2:
        raise MalformedInputError("need exactly d+2 labels")
    full = (1 << (d + 2)) - 1
    c = SimplicialComplex(tuple(labels), tuple(sorted(full ^ (1 << i) for i in range(d + 2))))
    return CertifiedComplex(c, m=0, b1=_every_field(0), g2=0,
                            trace=(("simplex-boundary", d),), name=f"sphere-{d}", stacked=True)


def _check_facet(c: SimplicialComplex, face) -> int:
    m = c.mask_of(face, strict=False)
    if m is None or m not in c.facets:
        raise ConstructionError(f"{tuple(face)!r} is not a facet", witness=tuple(face))
    return m


def _glue(labels: list, facets: Iterable[int], ident: dict[int, int]) -> tuple[list, list[int]]:
    """Apply a vertex identification ``ident`` (id -> id) to facet masks."""
    out = []
    for f in facets:
        m = 0
        for i in bit_ids(f):
            m |= 1 << ident.get(i, i)
        out.append(m)
    return labels, out


def _sum_certs(a: CertifiedComplex, b: CertifiedComplex) -> dict:
    m = a.m + b.m if a.m is not None and b.m is not None else None
    b1 = {k: a.b1[k] + b.b1[k] for k in a.b1 if k in b.b1}
    g2 = a.g2 + b.g2 if a.g2 is not None and b.g2 is not None else None
    return {"m": m, "b1": b1, "g2": g2}


def connected_sum(a: CertifiedComplex, b: CertifiedComplex, fa, fb,
                  matching: dict | None = None) -> CertifiedComplex:
    """Delete facet ``fa`` of ``a`` and ``fb`` of ``b`` and glue along their boundaries.

    ``matching`` maps labels of ``fa`` to labels of ``fb``; it defaults to
    pairing both facets in sorted order.  Vertices of ``fb`` take the labels
    of their partners in ``fa``.
    """
    ca, cb = a.complex, b.complex
    if set(ca.labels) & set(cb.labels):
        raise ConstructionError("summands must be vertex-disjoint")
    if ca.dim != cb.dim:
        raise ConstructionError("summands must have the same dimension")
    ma = _check_facet(ca, fa)
    mb = _check_facet(cb, fb)
    fa_l, fb_l = ca.face_of(ma), cb.face_of(mb)
    if matching is None:
        matching = dict(zip(fa_l, fb_l))
    if set(matching) != set(fa_l) or set(matching.values()) != set(fb_l):
        raise ConstructionError("matching must be a bijection between the two facets")
    inverse = {v: u for u, v in matching.items()}
    labels = list(ca.labels)
    b_ids = {}
    for lab in cb.labels:
        if lab in inverse:
            b_ids[lab] = ca.index[inverse[lab]]
        else:
            b_ids[lab] = len(labels)
            labels.append(lab)
    facets = [f for f in ca.facets if f != ma]
    for f in cb.facets:
        if f == mb:
            continue
        m = 0
        for i in bit_ids(f):
            m |= 1 << b_ids[cb.labels[i]]
        facets.append(m)
    c = SimplicialComplex.from_masks(labels, facets)
    cert = _sum_certs(a, b)
    step = ("connected-sum", [str(x) for x in fa_l], [str(x) for x in fb_l])
    return CertifiedComplex(c, trace=a.trace + b.trace + (step,), name=a.name or "sum",
                            stacked=a.stacked and b.stacked, **cert)


def _handle_identification(c: SimplicialComplex, m1: int, m2: int, matching: dict[int, int]):
    """Validate the handle gluing of facets ``m1``/``m2``; return the glued facet masks.

    Raises :class:`ConstructionError` with a witness when some face would
    contain an identified pair or two faces other than matching subfaces of
    the deleted facets would be merged.
    """
    ident = {v: u for u, v in matching.items()}  # id in m2 -> id in m1

    def image(f):
        m = 0
        for i in bit_ids(f):
            m |= 1 << ident.get(i, i)
        return m

    seen: dict[int, int] = {}
    for f in c.face_set:
        if f & m2 and f & ~m2 == 0:
            continue  # subfaces of the second facet merge onto the first by design
        img = image(f)
        if popcount(img) != popcount(f):
            raise ConstructionError("a face contains an identified pair", witness=c.face_of(f))
        other = seen.get(img)
        if other is not None:
            raise ConstructionError("two faces would be identified",
                                    witness=(c.face_of(other), c.face_of(f)))
        seen[img] = f
    return [image(f) for f in c.facets if f not in (m1, m2)]


def handle_addition(a: CertifiedComplex, f1, f2, matching: dict | None = None) -> CertifiedComplex:
    """Delete two disjoint facets and identify them through ``matching`` (labels of f1 -> f2).

    The vertices of ``f2`` disappear.  For the stacked family m and b₁ grow
    by one and g₂ by C(d+2, 2).
    """
    c = a.complex
    m1 = _check_facet(c, f1)
    m2 = _check_facet(c, f2)
    if m1 & m2:
        raise ConstructionError("handle facets must be disjoint", witness=(tuple(f1), tuple(f2)))
    l1, l2 = c.face_of(m1), c.face_of(m2)
    if matching is None:
        matching = dict(zip(l1, l2))
    if set(matching) != set(l1) or set(matching.values()) != set(l2):
        raise ConstructionError("matching must be a bijection between the two facets")
    id_match = {c.index[u]: c.index[v] for u, v in matching.items()}
    facets = _handle_identification(c, m1, m2, id_match)
    glued = SimplicialComplex.from_masks(c.labels, facets)
    d = c.dim
    m = a.m + (2 if d == 2 else 1) if a.m is not None else None
    if d >= 3:
        b1 = {k: v + 1 for k, v in a.b1.items()}
    elif d == 2:
        b1 = {k: v + 2 for k, v in a.b1.items() if k == "p:2"}
    else:
        b1 = {}
    g2 = a.g2 + comb(d + 2, 2) if a.g2 is not None else None
    step = ("handle", [str(x) for x in l1], [str(x) for x in l2])
    return CertifiedComplex(glued, m=m, b1=b1, g2=g2, trace=a.trace + (step,), name=a.name,
                            stacked=a.stacked)


def _stack(cx: CertifiedComplex, facet_mask: int, new_label) -> CertifiedComplex:
    """Connected sum with a fresh simplex boundary at one facet (stellar subdivision)."""
    c = cx.complex
    d = c.dim
    fresh_labels = list(c.face_of(facet_mask)) + [new_label]
    fresh = simplex_boundary(d, labels=[("fresh", i) for i in range(d + 2)])
    renamed = CertifiedComplex(fresh.complex.relabel(lambda x: new_label if x == ("fresh", d + 1) else x),
                               m=0, b1=fresh.b1, g2=0, trace=(), stacked=True)
    matching = {lab: ("fresh", i) for i, lab in enumerate(fresh_labels[:-1])}
    out = connected_sum(cx, renamed, c.face_of(facet_mask), [("fresh", i) for i in range(d + 1)], matching)
    step = ("stack", [str(x) for x in c.face_of(facet_mask)], str(new_label))
    return replace(out, trace=cx.trace + (step,))


def _handle_candidates(c: SimplicialComplex, rng: random.Random):
    facets = list(c.facets)
    pairs = [(f, g) for f, g in itertools.combinations(facets, 2) if not f & g]
    rng.shuffle(pairs)
    adj = c.adjacency
    for f, g in pairs:
        fi, gi = bit_ids(f), bit_ids(g)
        if any(adj[u] & g for u in fi):
            continue
        if all(adj[u] & adj[v] == 0 for u, v in zip(fi, gi)):
            yield f, g


def stacked_manifold(d: int, stackings: int = 0, handles: int = 0, seed: int = 0) -> CertifiedComplex:
    """A stacked d-manifold with ``handles`` handles, built deterministically from ``seed``.

    Starts from ∂Δ^{d+1} and stacks fresh simplex boundaries onto facets
    through the newest vertex, which keeps the 1-skeleton long and thin.
    Handles join a seeded-random admissible pair of facets with the
    sorted-order matching.  When no admissible pair exists, further
    stackings are added until one does; ``stackings`` is a minimum.
    """
    if d < 2:
        raise MalformedInputError("stacked manifolds need d >= 2")
    rng = random.Random(seed)
    cx = simplex_boundary(d)
    cx = replace(cx, name=f"stacked-d{d}-s{stackings}-h{handles}-seed{seed}")
    next_label = d + 2
    newest = d + 1

    def grow(cx):
        nonlocal next_label, newest
        c = cx.complex
        if newest not in c.index:
            # the tip vanished in a handle identification; continue from the largest label
            newest = max(c.labels)
        bit = 1 << c.index[newest]
        choices = [f for f in c.facets if f & bit]
        f = rng.choice(choices)
        cx = _stack(cx, f, next_label)
        newest = next_label
        next_label += 1
        return cx

    for _ in range(stackings):
        cx = grow(cx)
    extra = 0
    for _ in range(handles):
        while True:
            c = cx.complex
            done = False
            for f, g in _handle_candidates(c, rng):
                try:
                    cx = handle_addition(cx, c.face_of(f), c.face_of(g))
                except ConstructionError:
                    continue
                done = True
                break
            if done:
                break
            cx = grow(cx)
            extra += 1
    if extra:
        cx = replace(cx, trace=cx.trace + (("auto-grow", extra),))
    return cx


def gale_evenness(subset: Sequence[int], n: int) -> bool:
    """Whether a d-subset of ``1..n`` satisfies Gale's evenness condition.

    Every maximal run of consecutive elements that is bounded by
    non-elements on both sides must have even length.
    """
    s = set(subset)
    run = 0
    start_bounded = False
    for x in range(1, n + 1):
        if x in s:
            if run == 0:
                start_bounded = x > 1
            run += 1
        else:
            if run and start_bounded and run % 2:
                return False
            run = 0
    return True


def cyclic_boundary(n: int, dim: int = 4) -> CertifiedComplex:
    """Boundary of the cyclic polytope C(n, dim) on vertices ``1..n`` via Gale evenness."""
    if dim != 4:
        raise MalformedInputError("only 4-dimensional cyclic polytopes are supported")
    if n < dim + 2:
        raise MalformedInputError("cyclic polytope boundary needs n >= 6")
    facets = [S for S in itertools.combinations(range(1, n + 1), dim) if gale_evenness(S, n)]
    c = build_complex(facets)
    c = SimplicialComplex.from_masks(tuple(range(1, n + 1)), [c.mask_of(S) for S in facets]) \
        if c.labels != tuple(range(1, n + 1)) else c
    return CertifiedComplex(c, m=0, b1=_every_field(0), g2=None,
                            trace=(("cyclic", n, dim),), name=f"cyclic-{dim}-{n}")


def disjoint_union(parts: Iterable) -> SimplicialComplex:
    """Disjoint union; labels become ``(index, label)`` unless only one part is non-void."""
    cs = [p.complex if isinstance(p, CertifiedComplex) else p for p in parts]
    nonvoid = [(i, c) for i, c in enumerate(cs) if not c.is_void]
    if not nonvoid:
        return SimplicialComplex.void()
    if len(nonvoid) == 1:
        return nonvoid[0][1]
    labels: list = []
    facets: list[int] = []
    for i, c in nonvoid:
        off = len(labels)
        labels.extend((i, lab) for lab in c.labels)
        facets.extend(f << off for f in c.facets if f)
    if not facets:
        return SimplicialComplex.empty()
    return SimplicialComplex.from_masks(labels, facets)


def csaszar_torus() -> CertifiedComplex:
    """The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + \
           [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    c = build_complex(tris)
    return CertifiedComplex(c, m=2, b1=_every_field(2), trace=(("torus-7",),), name="torus-7")


def projective_plane() -> CertifiedComplex:
    """The 6-vertex real projective plane (10 triangles)."""
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
            (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)]
    c = build_complex(tris)
    return CertifiedComplex(c, m=1, b1={"q": 0, "p:2": 1, "p:3": 0, "p:5": 0},
                            trace=(("rp2-6",),), name="rp2-6")
