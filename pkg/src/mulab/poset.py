"""Simplicial posets, relative poset pairs, and their μ-numbers.

A simplicial poset is given by face records ``(id, rank, covers)`` where
``covers`` lists the codimension-one subfaces.  The minimal element has
rank 0.  Homology of a poset pair is always computed through the
barycentric subdivision, i.e. the order complex of the nonempty faces.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Hashable, Iterable, Sequence

from .complex import FVector, HVector, RelativePair, SimplicialComplex, h_from_f, popcount
from .errors import MalformedInputError, ResourceError
from .homology import QQ, Field, matrix_rank, reduced_betti
from .musigma import DEFAULT_LINK_BUDGET, ENUMERATION_LIMIT, MuVector

FaceId = Hashable


@dataclass(frozen=True)
class PosetFace:
    id: FaceId
    rank: int
    covers: tuple
    vertices: frozenset = frozenset()


class SimplicialPoset:
    """Validated simplicial poset; faces are kept in a fixed order (root first).

    The position of a face in :attr:`faces` is its tie-breaking order.
    """

    def __init__(self, faces: Sequence[PosetFace], root: FaceId):
        self.faces = tuple(faces)
        self.root = root
        self.pos = {f.id: i for i, f in enumerate(self.faces)}
        self.by_id = {f.id: f for f in self.faces}

    @property
    def is_void(self) -> bool:
        return not self.faces

    @cached_property
    def vertices(self) -> tuple:
        return tuple(f.id for f in self.faces if f.rank == 1)

    @cached_property
    def rank(self) -> int:
        return max((f.rank for f in self.faces), default=-1)

    @property
    def dim(self) -> int | None:
        return None if self.is_void else self.rank - 1

    @cached_property
    def downsets(self) -> dict:
        """Face id -> frozenset of the ids of all faces below it (itself included)."""
        down: dict = {}
        for f in sorted(self.faces, key=lambda x: x.rank):
            d = {f.id}
            for c in f.covers:
                d |= down.get(c, {c})
            down[f.id] = frozenset(d)
        return down

    @cached_property
    def maximal(self) -> tuple:
        covered = set()
        for f in self.faces:
            covered.update(f.covers)
        return tuple(f.id for f in self.faces if f.id not in covered)

    def vertex_set(self, fid) -> frozenset:
        return self.by_id[fid].vertices

    def leq(self, a, b) -> bool:
        """Whether ``a`` ⪯ ``b``."""
        return a in self.downsets[b]

    def __len__(self) -> int:
        return len(self.faces)

    def __repr__(self) -> str:
        return f"SimplicialPoset(faces={len(self.faces)}, vertices={len(self.vertices)}, rank={self.rank})"


def _vertex_sets(faces: Sequence[PosetFace], root) -> list[PosetFace]:
    by_id = {f.id: f for f in faces}
    out = {}
    for f in sorted(faces, key=lambda x: x.rank):
        if f.rank == 0:
            vs = frozenset()
        elif f.rank == 1:
            vs = frozenset([f.id])
        else:
            vs = frozenset().union(*(out[c].vertices for c in f.covers))
        out[f.id] = PosetFace(f.id, f.rank, f.covers, vs)
    return [out[f.id] for f in faces]


def build_poset(records: Iterable, validate: bool = True) -> SimplicialPoset:
    """Build a simplicial poset from ``(id, rank, covers)`` records.

    Records may be dicts with keys ``id``, ``rank``, ``covers`` or
    tuples.  The minimal element may be given as a rank-0 record; otherwise
    one is added with id ``None``.  Rank-1 faces may list ``[]`` as covers.
    Validation checks gradedness, that every interval below a face is a
    Boolean lattice (binomial counts plus distinct vertex sets), and hence
    atomicity.
    """
    recs = []
    for r in records:
        if isinstance(r, dict):
            fid, rank, covers = r["id"], r["rank"], r.get("covers", [])
        elif isinstance(r, PosetFace):
            fid, rank, covers = r.id, r.rank, r.covers
        else:
            fid, rank, covers = r
        if not isinstance(rank, int) or rank < 0:
            raise MalformedInputError(f"face {fid!r}: rank must be a non-negative integer")
        recs.append((fid, rank, tuple(covers)))
    roots = [fid for fid, rank, _ in recs if rank == 0]
    if len(roots) > 1:
        raise MalformedInputError(f"more than one minimal element: {roots!r}")
    root = roots[0] if roots else None
    ids = [fid for fid, _, _ in recs]
    if len(set(ids)) != len(ids):
        raise MalformedInputError("duplicate face id")
    if not roots:
        if None in ids:
            raise MalformedInputError("id null is reserved for the minimal element")
        recs.insert(0, (None, 0, ()))
    else:
        recs.sort(key=lambda r: r[1] != 0)
    rank_of = {fid: rank for fid, rank, _ in recs}
    faces = []
    for fid, rank, covers in recs:
        if rank == 1 and covers in ((), (root,)):
            covers = (root,)
        if rank == 0 and covers:
            raise MalformedInputError(f"face {fid!r}: the minimal element covers nothing")
        for c in covers:
            if c not in rank_of:
                raise MalformedInputError(f"face {fid!r}: unknown cover {c!r}")
            if rank_of[c] != rank - 1:
                raise MalformedInputError(f"face {fid!r}: cover {c!r} does not have rank {rank - 1}")
        if validate and rank >= 1 and len(covers) != rank:
            raise MalformedInputError(f"face {fid!r}: rank {rank} face must cover exactly {rank} faces")
        if len(set(covers)) != len(covers):
            raise MalformedInputError(f"face {fid!r}: repeated cover")
        faces.append(PosetFace(fid, rank, covers))
    faces = _vertex_sets(faces, root)
    poset = SimplicialPoset(faces, root)
    if validate:
        _validate_boolean(poset)
    return poset


def _validate_boolean(p: SimplicialPoset) -> None:
    down: dict = {}
    for f in sorted(p.faces, key=lambda x: x.rank):
        d = {f.id}
        for c in f.covers:
            d |= down[c]
        down[f.id] = d
        r = f.rank
        if len(f.vertices) != r:
            raise MalformedInputError(f"face {f.id!r}: has {len(f.vertices)} vertices, expected {r}")
        counts = [0] * (r + 1)
        vsets = set()
        for g in d:
            counts[p.by_id[g].rank] += 1
            vsets.add(p.by_id[g].vertices)
        for k in range(r + 1):
            if counts[k] != comb(r, k):
                raise MalformedInputError(
                    f"face {f.id!r}: interval below is not Boolean ({counts[k]} faces of rank {k})")
        if len(vsets) != len(d):
            raise MalformedInputError(f"face {f.id!r}: two faces below it share a vertex set")


def face_poset(c: SimplicialComplex) -> SimplicialPoset:
    """Face poset of a complex; ids are label tuples and the root is ``()``."""
    if c.is_void:
        return SimplicialPoset((), None)
    faces = []
    for k, lev in enumerate(c.levels):
        for m in lev:
            fid = c.face_of(m)
            covers = tuple(c.face_of(m ^ b) for b in _bits(m)) if k else ()
            faces.append(PosetFace(fid, k, covers, frozenset((c.labels[i],) for i in _ids(m))))
    return SimplicialPoset(faces, ())


def _bits(m: int):
    while m:
        b = m & -m
        yield b
        m ^= b


def _ids(m: int):
    return [b.bit_length() - 1 for b in _bits(m)]


def _subposet(p: SimplicialPoset, keep, root) -> SimplicialPoset:
    """Faces in ``keep`` (a lower ideal above ``root``); covers are filtered accordingly."""
    faces = []
    for f in p.faces:
        if f.id in keep:
            faces.append(f)
    return SimplicialPoset(faces, root)


def poset_link(v, p: SimplicialPoset) -> SimplicialPoset:
    """``{F : v ⪯ F}`` with ``v`` as the new minimal element and ranks shifted by one."""
    f = p.by_id.get(v)
    if f is None or f.rank != 1:
        raise MalformedInputError(f"{v!r} is not a vertex")
    faces = []
    for g in p.faces:
        if v in g.vertices:
            covers = tuple(c for c in g.covers if v in p.by_id[c].vertices) if g.rank > 1 else ()
            faces.append(PosetFace(g.id, g.rank - 1, covers))
    return SimplicialPoset(_vertex_sets(faces, v), v)


def poset_face_link(fid, p: SimplicialPoset) -> SimplicialPoset:
    """``{G : F ⪯ G}`` re-rooted at ``F``, ranks shifted down by the rank of ``F``."""
    f = p.by_id.get(fid)
    if f is None:
        raise MalformedInputError(f"unknown face {fid!r}")
    down = p.downsets
    faces = []
    for g in p.faces:
        if fid in down[g.id]:
            covers = tuple(c for c in g.covers if fid in down[c]) if g.rank > f.rank else ()
            faces.append(PosetFace(g.id, g.rank - f.rank, covers))
    return SimplicialPoset(_vertex_sets(faces, fid), fid)


def poset_restriction(p: SimplicialPoset, w: Iterable) -> SimplicialPoset:
    """``Δ_W = {F : V(F) ⊆ W}``."""
    ws = frozenset(w)
    unknown = ws - set(p.vertices)
    if unknown:
        raise MalformedInputError(f"unknown vertices {sorted(map(str, unknown))}")
    return SimplicialPoset(tuple(f for f in p.faces if f.vertices <= ws), p.root)


def _order_complex(p: SimplicialPoset, keep=None) -> SimplicialComplex:
    """Order complex of the nonempty faces (restricted to ``keep`` if given)."""
    faces = [f for f in p.faces if keep is None or f.id in keep]
    if not faces:
        return SimplicialComplex.void()
    nonempty = [f for f in faces if f.rank > 0]
    if not nonempty:
        return SimplicialComplex.empty()
    labels = [f.id for f in nonempty]
    index = {fid: i for i, fid in enumerate(labels)}
    covered = set()
    for f in nonempty:
        covered.update(f.covers)
    chains: list[int] = []

    def walk(fid, mask):
        f = p.by_id[fid]
        mask |= 1 << index[fid]
        if f.rank == 1:
            chains.append(mask)
            return
        for c in f.covers:
            walk(c, mask)

    for f in nonempty:
        if f.id not in covered:
            walk(f.id, 0)
    return SimplicialComplex.from_masks(labels, chains)


def barycentric_subdivision(p: SimplicialPoset) -> SimplicialComplex:
    """Order complex of ``Δ ∖ {∅}``; vertex labels are face ids."""
    return _order_complex(p)


class RelativePosetPair:
    """``(Δ, Γ)`` with ``Γ`` a lower ideal of ``Δ`` given by face ids."""

    def __init__(self, delta: SimplicialPoset, gamma: Iterable = ()):
        g = frozenset(gamma)
        unknown = [x for x in g if x not in delta.by_id]
        if unknown:
            raise MalformedInputError(f"Γ mentions unknown faces {unknown!r}")
        for fid in g:
            for c in delta.by_id[fid].covers:
                if c not in g:
                    raise MalformedInputError(f"Γ is not a lower ideal: {fid!r} in Γ but {c!r} is not")
        self.delta = delta
        self.gamma = g

    @cached_property
    def rel_faces(self) -> tuple:
        return tuple(f for f in self.delta.faces if f.id not in self.gamma)

    @property
    def dim(self) -> int | None:
        if not self.rel_faces:
            return None
        return max(f.rank for f in self.rel_faces) - 1

    @property
    def vertices(self) -> tuple:
        return self.delta.vertices

    def sd_pair(self) -> RelativePair:
        """``(sd Δ, sd Γ)`` as a relative simplicial complex."""
        sd_d = _order_complex(self.delta)
        sd_g = _order_complex(self.delta, self.gamma)
        return RelativePair(sd_d, sd_g)

    def link(self, v) -> "RelativePosetPair":
        lk = poset_link(v, self.delta)
        return RelativePosetPair(lk, frozenset(f.id for f in lk.faces) & self.gamma)

    def face_link(self, fid) -> "RelativePosetPair":
        lk = poset_face_link(fid, self.delta)
        return RelativePosetPair(lk, frozenset(f.id for f in lk.faces) & self.gamma)

    @cached_property
    def facets(self) -> tuple:
        """Maximal faces of ``Δ ∖ Γ``."""
        return tuple(fid for fid in self.delta.maximal if fid not in self.gamma)

    def restriction(self, w) -> "RelativePosetPair":
        r = poset_restriction(self.delta, w)
        return RelativePosetPair(r, frozenset(f.id for f in r.faces) & self.gamma)

    def __repr__(self) -> str:
        return f"RelativePosetPair({self.delta!r}, gamma={len(self.gamma)} faces)"


def _ppair(p) -> RelativePosetPair:
    if isinstance(p, RelativePosetPair):
        return p
    if isinstance(p, SimplicialPoset):
        return RelativePosetPair(p)
    raise MalformedInputError("expected a simplicial poset or a relative poset pair")


def poset_betti(p, field: Field | str = QQ) -> tuple[int, ...]:
    """Reduced Betti numbers ``(b̃_{-1}, b̃_0, ...)`` of a poset pair via its subdivision."""
    pair = _ppair(p)
    sd = pair.sd_pair()
    if sd.is_void:
        return ()
    return reduced_betti(sd, field).reduced


def cellular_betti(p, field: Field | str = QQ) -> tuple[int, ...]:
    """Reduced Betti numbers from the cellular chain complex of the faces of ``Δ ∖ Γ``.

    Every lower interval is Boolean, so the facet of ``F`` missing vertex
    ``v`` is unique; its incidence sign is ``(-1)^k`` where ``v`` is the
    k-th vertex of ``F`` in the global vertex order.  This is independent
    of the subdivision route taken by :func:`poset_betti`.
    """
    pair = _ppair(p)
    k = Field.parse(field)
    if pair.dim is None:
        return ()
    delta = pair.delta
    vpos = {v: i for i, v in enumerate(delta.vertices)}
    top = pair.dim + 1
    cells: list[list] = [[] for _ in range(top + 1)]
    for f in pair.rel_faces:
        cells[f.rank].append(f.id)
    index = [{fid: i for i, fid in enumerate(lev)} for lev in cells]
    ranks = [0] * (top + 2)
    for r in range(1, top + 1):
        cols = []
        for fid in cells[r]:
            f = delta.by_id[fid]
            order = sorted(f.vertices, key=vpos.__getitem__)
            col = {}
            for c in f.covers:
                j = index[r - 1].get(c)
                if j is None:
                    continue
                (missing,) = f.vertices - delta.by_id[c].vertices
                col[j] = -1 if order.index(missing) % 2 else 1
            cols.append(col)
        ranks[r] = matrix_rank(cols, k)
    return tuple(len(cells[r]) - ranks[r] - ranks[r + 1] for r in range(top + 1))


def sd_ordering(p, ordering: Sequence) -> list:
    """Extend an ordering of the vertices to the vertices of the subdivision.

    Just before each ``v_k`` come the barycenters of the faces of
    ``Δ_{v_1..v_k}`` of dimension at least one that contain ``v_k``, in
    increasing dimension with ties broken by face order.  With this
    placement every inserted barycenter contributes nothing to μ and the
    contribution of ``v_k`` is that of its link in the poset.
    """
    poset = p.delta if isinstance(p, RelativePosetPair) else p
    _check_ordering(poset, ordering)
    out = []
    seen: set = set()
    for v in ordering:
        seen.add(v)
        block = [f for f in poset.faces
                 if f.rank >= 2 and v in f.vertices and f.vertices <= seen]
        block.sort(key=lambda f: (f.rank, poset.pos[f.id]))
        out.extend(f.id for f in block)
        out.append(v)
    return out


def _check_ordering(poset: SimplicialPoset, ordering: Sequence) -> None:
    if sorted(map(poset.pos.__getitem__, ordering)) != sorted(poset.pos[v] for v in poset.vertices) \
            or len(ordering) != len(poset.vertices):
        raise MalformedInputError("ordering is not a permutation of the poset's vertices")


def poset_f_h(p, d: int | None = None) -> tuple[FVector, HVector]:
    """f counts faces of ``Δ ∖ Γ`` by rank; h by the usual alternating sum."""
    pair = _ppair(p)
    if pair.dim is None and d is None:
        return FVector((0,), void=True), HVector((0,), 0)
    if d is None:
        d = pair.dim + 1
    counts = [0] * (d + 1)
    for f in pair.rel_faces:
        if f.rank <= d:
            counts[f.rank] += 1
    return FVector(tuple(counts), void=pair.dim is None), HVector(h_from_f(counts, d), d)


def _width(pair: RelativePosetPair) -> int:
    return 0 if pair.dim is None else pair.dim + 1


def _link_contribution(pair: RelativePosetPair, v, prefix: frozenset, width: int, field) -> list[int]:
    lk = pair.restriction(prefix).link(v)
    b = poset_betti(lk, field)
    return [b[i] if i < len(b) else 0 for i in range(width)]


def poset_mu_ordering(p, ordering: Sequence, field: Field | str = QQ) -> MuVector:
    """μ^ς_i = Σ_k b̃_{i-1} of the link pair of ``v_k`` in the restriction to ``{v_1..v_k}``."""
    pair = _ppair(p)
    k = Field.parse(field)
    _check_ordering(pair.delta, ordering)
    width = _width(pair)
    mu = [0] * width
    prefix: set = set()
    for v in ordering:
        prefix.add(v)
        for i, b in enumerate(_link_contribution(pair, v, frozenset(prefix), width, k)):
            mu[i] += b
    return MuVector(tuple(Fraction(x) for x in mu),
                    {"method": "ordering", "ordering": [str(v) for v in ordering]}, k)


def poset_mu_enumerated(p, field: Field | str = QQ, limit: int = ENUMERATION_LIMIT) -> MuVector:
    """Exact average of :func:`poset_mu_ordering` over all orderings."""
    pair = _ppair(p)
    k = Field.parse(field)
    verts = pair.vertices
    if len(verts) > limit:
        raise ResourceError(f"{len(verts)} vertices exceed the enumeration limit {limit}")
    width = _width(pair)
    memo: dict = {}
    totals = [0] * width
    for perm in itertools.permutations(verts):
        prefix: set = set()
        for v in perm:
            prefix.add(v)
            key = (v, frozenset(prefix))
            c = memo.get(key)
            if c is None:
                c = memo[key] = _link_contribution(pair, v, key[1], width, k)
            for i, b in enumerate(c):
                totals[i] += b
    nf = factorial(len(verts))
    return MuVector(tuple(Fraction(t, nf) for t in totals), {"method": "enumerated", "orderings": nf}, k)


def poset_sigma_tilde(p, field: Field | str = QQ, width: int | None = None,
                      budget: int = DEFAULT_LINK_BUDGET) -> tuple[Fraction, ...]:
    """σ̃_{i-1} of a poset pair from Hochster sums over its induced subposets."""
    pair = _ppair(p)
    k = Field.parse(field)
    if width is None:
        width = pair.dim + 2 if pair.dim is not None else 1
    verts = pair.vertices
    return _hochster(lambda w: poset_betti(pair.restriction(w), k), verts, width, budget)


def _hochster(betti_of, verts: Sequence, width: int, budget: int) -> tuple[Fraction, ...]:
    n = len(verts)
    if n > budget:
        raise ResourceError(f"{n} vertices exceed the subset budget {budget}")
    sums = [[0] * width for _ in range(n + 1)]
    for size in range(n + 1):
        for w in itertools.combinations(verts, size):
            b = betti_of(w)
            for i in range(min(width, len(b))):
                sums[size][i] += b[i]
    out = []
    for i in range(width):
        s = sum((Fraction(sums[size][i], comb(n, size)) for size in range(n + 1)), Fraction(0))
        out.append(s / (n + 1))
    return tuple(out)


def poset_vertex_sigma(p, v, field: Field | str = QQ, width: int | None = None,
                       budget: int = DEFAULT_LINK_BUDGET) -> tuple[Fraction, ...]:
    """σ̃_{i-1} of the link pair of ``v``, from Hochster sums over its neighbours.

    The link of ``v`` inside ``Δ_{W ∪ v}`` depends on ``W`` only through the
    vertices of Δ joined to ``v``, not through the vertices of the link
    poset (several faces above ``v`` may share a vertex set), so the sum
    runs over subsets ``W`` of those neighbours.  For complexes this is the
    σ̃-vector of the link.
    """
    pair = _ppair(p)
    k = Field.parse(field)
    if width is None:
        width = _width(pair)
    nbrs = set()
    for f in pair.delta.faces:
        if v in f.vertices:
            nbrs |= f.vertices
    nbrs.discard(v)
    verts = [u for u in pair.vertices if u in nbrs]
    return _hochster(lambda w: _link_contribution(pair, v, frozenset(w) | {v}, width, k),
                     verts, width, budget)


def poset_mu_exact(p, field: Field | str = QQ, budget: int = DEFAULT_LINK_BUDGET,
                   upto: int | None = None) -> MuVector:
    """μ_i = Σ_v σ̃_{i-1} of the link pair of v, exact (see :func:`poset_vertex_sigma`)."""
    pair = _ppair(p)
    k = Field.parse(field)
    width = _width(pair)
    if upto is not None:
        width = min(width, upto + 1)
    mu = [Fraction(0)] * width
    for v in pair.vertices:
        sig = poset_vertex_sigma(pair, v, k, width, budget)
        for i in range(width):
            mu[i] += sig[i]
    return MuVector(tuple(mu), {"method": "exact-hochster", "path": "poset"}, k)


# --------------------------------------------------------------------------
# examples and random instances


def three_parallel_edges() -> SimplicialPoset:
    """Two vertices joined by three edges."""
    return build_poset([
        {"id": "v1", "rank": 1, "covers": []},
        {"id": "v2", "rank": 1, "covers": []},
        {"id": "e1", "rank": 2, "covers": ["v1", "v2"]},
        {"id": "e2", "rank": 2, "covers": ["v1", "v2"]},
        {"id": "e3", "rank": 2, "covers": ["v1", "v2"]},
    ])


def random_simplicial_poset(n: int, seed: int, max_rank: int = 3, density: float = 0.5,
                            max_copies: int = 2) -> SimplicialPoset:
    """A random simplicial poset on ``n`` vertices, built rank by rank.

    A new face of rank r is glued onto a choice of r faces of rank r-1, one
    per (r-1)-subset of an r-subset of vertices, whose own boundaries agree
    pairwise; up to ``max_copies`` faces share the same boundary.
    """
    rng = random.Random(seed)
    records = [{"id": f"v{i}", "rank": 1, "covers": []} for i in range(n)]
    vsets: dict[str, frozenset] = {f"v{i}": frozenset([i]) for i in range(n)}
    covers_of: dict[str, tuple] = {f"v{i}": () for i in range(n)}
    by_vset: dict[frozenset, list[str]] = {frozenset([i]): [f"v{i}"] for i in range(n)}

    def below(fid: str) -> set:
        out = {fid}
        for c in covers_of[fid]:
            out |= below(c)
        return out

    counter = 0
    for r in range(2, max_rank + 1):
        for vs in itertools.combinations(range(n), r):
            s = frozenset(vs)
            if rng.random() >= density:
                continue
            options = [by_vset.get(s - {v}, []) for v in vs]
            if any(not o for o in options):
                continue
            for _ in range(rng.randint(1, max_copies)):
                for _attempt in range(6):
                    choice = [rng.choice(o) for o in options]
                    # boundaries must agree: faces below the chosen facets with equal vertex sets coincide
                    seen: dict[frozenset, str] = {}
                    ok = True
                    for c in choice:
                        for g in below(c):
                            prev = seen.setdefault(vsets[g], g)
                            if prev != g:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        break
                else:
                    continue
                fid = f"f{counter}"
                counter += 1
                records.append({"id": fid, "rank": r, "covers": choice})
                vsets[fid] = s
                covers_of[fid] = tuple(choice)
                by_vset.setdefault(s, []).append(fid)
    return build_poset(records)
