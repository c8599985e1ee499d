"""Hypothesis checkers: purity, normal pseudomanifolds, Serre's condition, Buchsbaum."""
from __future__ import annotations

from dataclasses import dataclass, field

from .complex import RelativePair, SimplicialComplex, bit_ids, connected_components, popcount
from .homology import QQ, Field, betti_of_levels
from .poset import RelativePosetPair, SimplicialPoset, poset_betti


@dataclass(frozen=True)
class RecognizerVerdict:
    """``holds`` is true exactly when ``witnesses`` is empty.

    Each witness is ``(face labels, clause)``; ``notes`` records
    conventions applied (vacuous cases and the like).
    """

    holds: bool
    witnesses: tuple = ()
    notes: tuple = ()
    field: str | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witnesses": [[[str(v) for v in face], clause] for face, clause in self.witnesses],
            "notes": list(self.notes),
            "field": self.field,
        }


def _verdict(witnesses, notes=(), field=None) -> RecognizerVerdict:
    w = tuple(witnesses)
    return RecognizerVerdict(not w, w, tuple(notes), field)


def _pair(p):
    if isinstance(p, (RelativePair, RelativePosetPair)):
        return p
    if isinstance(p, SimplicialPoset):
        return RelativePosetPair(p)
    return RelativePair(p)


def _poset_pure(pair: RelativePosetPair) -> RecognizerVerdict:
    if pair.dim is None:
        return _verdict((), ("void pair: vacuously pure",))
    top = pair.dim + 1
    by_id = pair.delta.by_id
    bad = [((fid,), f"facet of dimension {by_id[fid].rank - 1} below top {top - 1}")
           for fid in pair.facets if by_id[fid].rank != top]
    return _verdict(bad)


def is_pure(p) -> RecognizerVerdict:
    """All facets of ``Δ ∖ Γ`` have the top dimension."""
    pair = _pair(p)
    if isinstance(pair, RelativePosetPair):
        return _poset_pure(pair)
    if pair.is_void:
        return _verdict((), ("void pair: vacuously pure",))
    top = pair.dim + 1
    bad = [(pair.delta.face_of(f), f"facet of dimension {popcount(f) - 1} below top {top - 1}")
           for f in pair.facets if popcount(f) != top]
    return _verdict(bad)


def _link_graph_connected(c: SimplicialComplex, face: int) -> bool:
    """Whether the 1-skeleton of lk(face) is connected (and nonempty)."""
    k = popcount(face)
    adj: dict[int, int] = {}
    lv = c.levels
    if len(lv) <= k + 1:
        return False
    for f in lv[k + 1]:
        if f & face == face:
            adj.setdefault(f ^ face, 0)
    if len(lv) > k + 2:
        for f in lv[k + 2]:
            if f & face == face:
                a, b = bit_ids(f ^ face)
                adj[1 << a] |= 1 << b
                adj[1 << b] |= 1 << a
    if not adj:
        return False
    verts = 0
    for v in adj:
        verts |= v
    start = verts & -verts
    seen = frontier = start
    while frontier:
        nb = 0
        f = frontier
        while f:
            b = f & -f
            f ^= b
            nb |= adj[b]
        frontier = nb & ~seen
        seen |= frontier
    return seen == verts


def is_normal_pseudomanifold(c: SimplicialComplex, all_witnesses: bool = True) -> RecognizerVerdict:
    """Pure; every ridge in exactly two facets; links of nonempty faces of dim <= d-2 connected."""
    if isinstance(c, RelativePair):
        c = c.delta
    if c.is_void or c.dim < 1:
        return _verdict([((), "dimension below 1")])
    d = c.dim
    witnesses = list(is_pure(c).witnesses)
    if witnesses and not all_witnesses:
        return _verdict(witnesses)
    count: dict[int, int] = {}
    for f in c.facets:
        for b in bit_ids(f):
            r = f & ~(1 << b)
            count[r] = count.get(r, 0) + 1
    for r in c.levels[d]:
        k = count.get(r, 0)
        if k != 2:
            witnesses.append((c.face_of(r), f"ridge in {k} facets"))
            if not all_witnesses:
                return _verdict(witnesses)
    for size in range(d - 1, 0, -1):
        for f in c.levels[size]:
            if not _link_graph_connected(c, f):
                witnesses.append((c.face_of(f), "disconnected link"))
                if not all_witnesses:
                    return _verdict(witnesses)
    return _verdict(witnesses)


def _serre_witnesses(pair: RelativePair, r: int, p: int, all_witnesses: bool) -> list:
    out = []
    lv = pair.delta.levels
    for size in range(len(lv) - 1, -1, -1):
        for face in lv[size]:
            levels = pair.link_faces(face)
            ldim = len(levels) - 2  # dimension of the link pair; -2 when void
            bound = min(r - 1, ldim)
            if bound <= -1:
                continue
            betti = betti_of_levels(levels[: bound + 2], p)
            for i in range(-1, bound):
                if betti[i + 1]:
                    out.append((pair.delta.face_of(face), f"reduced H_{i} of link is nonzero"))
                    break
            if out and not all_witnesses:
                return out
    return out


def _poset_serre_witnesses(pair: RelativePosetPair, r: int, k: Field, all_witnesses: bool) -> list:
    out = []
    faces = sorted(pair.delta.faces, key=lambda f: (-f.rank, pair.delta.pos[f.id]))
    for f in faces:
        lk = pair.face_link(f.id)
        if lk.dim is None:
            continue
        bound = min(r - 1, lk.dim)
        if bound <= -1:
            continue
        betti = poset_betti(lk, k)
        for i in range(-1, bound):
            if i + 1 < len(betti) and betti[i + 1]:
                out.append(((f.id,), f"reduced H_{i} of link is nonzero"))
                break
        if out and not all_witnesses:
            return out
    return out


def serre_condition(p, r: int, field: Field | str = QQ, all_witnesses: bool = False) -> RecognizerVerdict:
    """(S_r): for every face F of Δ, including ∅, H̃_i(lk pair) = 0 for i < min(r-1, dim lk pair).

    Faces are visited by descending dimension; the search stops at the
    first witness unless ``all_witnesses`` is set.
    """
    pair = _pair(p)
    k = Field.parse(field)
    notes = []
    if r <= 1:
        notes.append("r <= 1: vacuous")
        return _verdict((), notes, str(k))
    if pair.delta.is_void:
        return _verdict((), ("void pair",), str(k))
    if isinstance(pair, RelativePosetPair):
        return _verdict(_poset_serre_witnesses(pair, r, k, all_witnesses), notes, str(k))
    return _verdict(_serre_witnesses(pair, r, k.p, all_witnesses), notes, str(k))


def vertex_links_serre(p, r: int, field: Field | str = QQ, all_witnesses: bool = False) -> RecognizerVerdict:
    """Apply (S_r) to the link pair of every vertex of Δ."""
    pair = _pair(p)
    k = Field.parse(field)
    witnesses = []
    notes = []
    if isinstance(pair, RelativePosetPair):
        links = [(v, pair.link(v)) for v in pair.vertices]
    else:
        links = [(lab, pair.link((lab,))) for lab in pair.labels]
    for lab, lp in links:
        if _no_vertices(lp):
            notes.append(f"vertex {lab}: link has no vertices, condition vacuous")
            continue
        sub = serre_condition(lp, r, k, all_witnesses)
        for face, clause in sub.witnesses:
            witnesses.append(((lab,) + tuple(face), f"link of {lab}: {clause}"))
        if witnesses and not all_witnesses:
            break
    return _verdict(witnesses, notes, str(k))


def _no_vertices(lp) -> bool:
    if isinstance(lp, RelativePosetPair):
        return not lp.delta.vertices
    return lp.delta.is_void or lp.delta.facets == (0,)


def connected_links(x, max_dim: int | None = None) -> RecognizerVerdict:
    """Connected, and every nonempty face of dimension ``<= max_dim`` has a connected link.

    ``max_dim`` defaults to ``dim - 2``.  Works for complexes and posets
    (links of poset faces are tested through their subdivisions).
    """
    pair = _pair(x)
    if pair.dim is None or pair.dim < 0:
        return _verdict([((), "no vertices")])
    if max_dim is None:
        max_dim = pair.dim - 2
    witnesses = []
    if isinstance(pair, RelativePosetPair):
        if poset_betti(RelativePosetPair(pair.delta), QQ)[1:2] != (0,):
            witnesses.append(((), "disconnected"))
        for f in pair.delta.faces:
            if 1 <= f.rank <= max_dim + 1:
                b = poset_betti(RelativePosetPair(pair.delta).face_link(f.id), QQ)
                if len(b) < 2 or b[0] or b[1]:
                    witnesses.append(((f.id,), "disconnected link"))
        return _verdict(witnesses)
    c = pair.delta
    if len(connected_components(c)) != 1:
        witnesses.append(((), "disconnected"))
    for size in range(1, max_dim + 2):
        if size >= len(c.levels):
            break
        for f in c.levels[size]:
            if not _link_graph_connected(c, f):
                witnesses.append((c.face_of(f), "disconnected link"))
    return _verdict(witnesses)


def is_buchsbaum(p, field: Field | str = QQ, all_witnesses: bool = False) -> RecognizerVerdict:
    """Pure, and every vertex link pair satisfies (S_d) with d the dimension of the pair."""
    pair = _pair(p)
    k = Field.parse(field)
    pure = is_pure(pair)
    if not pure:
        return RecognizerVerdict(False, tuple((f, "not pure: " + c) for f, c in pure.witnesses),
                                 pure.notes, str(k))
    if pair.dim is None:
        return _verdict((), ("void pair",), str(k))
    sub = vertex_links_serre(pair, max(pair.dim, 1), k, all_witnesses)
    return RecognizerVerdict(sub.holds, sub.witnesses, sub.notes, str(k))
