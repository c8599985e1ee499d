"""Finite simplicial complexes and relative pairs.

A face is stored as an integer bitmask over a dense vertex table: bit ``i``
set means vertex id ``i`` is in the face.  The empty face is ``0``.  Python
integers are unbounded, so the same representation works for any number of
vertices; subset tests are single ``&`` operations, which is what the
subset-sum kernels in :mod:`mulab.musigma` rely on.

Two degenerate complexes are kept apart on purpose:

* the *void* complex has no faces at all (``facets == ()``);
* the *empty* complex ``{∅}`` has exactly one face, the empty one
  (``facets == (0,)``).

The link of a non-face is void, while the link of a facet is ``{∅}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Hashable, Iterable, Sequence

from .errors import MalformedInputError

Label = Hashable


def popcount(mask: int) -> int:
    return mask.bit_count()


def iter_bits(mask: int):
    """Yield the single-bit masks of ``mask`` from lowest to highest."""
    while mask:
        b = mask & -mask
        yield b
        mask ^= b


def bit_ids(mask: int) -> list[int]:
    return [b.bit_length() - 1 for b in iter_bits(mask)]


def maximal_masks(masks: Iterable[int]) -> tuple[int, ...]:
    """Drop duplicates and every mask contained in another one."""
    ordered = sorted(set(masks), key=lambda m: (-popcount(m), m))
    kept: list[int] = []
    for m in ordered:
        if not any(m & ~k == 0 for k in kept):
            kept.append(m)
    return tuple(sorted(kept))


def submasks(mask: int):
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex given by its facets.

    ``labels[i]`` is the user-facing name of vertex id ``i``.  Every label
    occurs in at least one facet.  Facets are bitmasks, sorted, with no
    facet contained in another.  Use :func:`build_complex` or
    :meth:`from_masks` rather than the raw constructor.
    """

    labels: tuple
    facets: tuple[int, ...]

    @classmethod
    def from_masks(cls, labels: Sequence[Label], masks: Iterable[int]) -> "SimplicialComplex":
        """Build from masks over ``labels``; unused labels are dropped and ids compacted."""
        facets = maximal_masks(masks)
        used = 0
        for f in facets:
            used |= f
        if used == (1 << len(labels)) - 1:
            return cls(tuple(labels), facets)
        ids = bit_ids(used)
        remap = {old: new for new, old in enumerate(ids)}
        new_facets = []
        for f in facets:
            m = 0
            for i in bit_ids(f):
                m |= 1 << remap[i]
            new_facets.append(m)
        return cls(tuple(labels[i] for i in ids), tuple(sorted(new_facets)))

    @classmethod
    def void(cls) -> "SimplicialComplex":
        return cls((), ())

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls((), (0,))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def is_void(self) -> bool:
        return not self.facets

    @cached_property
    def dim(self) -> int | None:
        """Top face dimension; ``None`` for the void complex."""
        if not self.facets:
            return None
        return max(popcount(f) for f in self.facets) - 1

    @cached_property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def mask_of(self, face: Iterable[Label], strict: bool = True) -> int | None:
        m = 0
        for lab in face:
            i = self.index.get(lab)
            if i is None:
                if strict:
                    raise MalformedInputError(f"unknown vertex label {lab!r}")
                return None
            m |= 1 << i
        return m

    def face_of(self, mask: int) -> tuple:
        return tuple(self.labels[i] for i in bit_ids(mask))

    def contains(self, mask: int) -> bool:
        """Face membership by descent from the facets."""
        return any(mask & ~f == 0 for f in self.facets)

    def __contains__(self, face) -> bool:
        m = self.mask_of(face, strict=False)
        return m is not None and self.contains(m)

    @cached_property
    def face_set(self) -> frozenset[int]:
        out: set[int] = set()
        for f in self.facets:
            if f in out:
                continue
            out.update(submasks(f))
        return frozenset(out)

    @cached_property
    def levels(self) -> tuple[tuple[int, ...], ...]:
        """``levels[k]`` is the sorted tuple of faces with ``k`` vertices."""
        if not self.facets:
            return ()
        top = self.dim + 1
        buckets: list[list[int]] = [[] for _ in range(top + 1)]
        for m in self.face_set:
            buckets[popcount(m)].append(m)
        return tuple(tuple(sorted(b)) for b in buckets)

    def faces(self, dim: int | None = None) -> list[tuple]:
        """Faces as label tuples, optionally only those of one dimension."""
        lv = self.levels
        if dim is None:
            return [self.face_of(m) for lev in lv for m in lev]
        if dim + 1 >= len(lv) or dim < -1:
            return []
        return [self.face_of(m) for m in lv[dim + 1]]

    def facet_list(self) -> list[tuple]:
        return [self.face_of(m) for m in self.facets]

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Neighbour mask of every vertex in the 1-skeleton."""
        adj = [0] * self.n
        for f in self.facets:
            for i in bit_ids(f):
                adj[i] |= f
        return tuple(a & ~(1 << i) for i, a in enumerate(adj))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(lev) for lev in self.levels)

    def relabel(self, mapping) -> "SimplicialComplex":
        labels = tuple(mapping(lab) if callable(mapping) else mapping[lab] for lab in self.labels)
        if len(set(labels)) != len(labels):
            raise MalformedInputError("relabeling is not injective")
        return SimplicialComplex(labels, self.facets)

    def canonical(self) -> frozenset:
        """Label-level facet set, for comparisons independent of ids."""
        return frozenset(frozenset(self.face_of(f)) for f in self.facets)

    def __repr__(self) -> str:
        if self.is_void:
            return "SimplicialComplex(void)"
        return f"SimplicialComplex(n={self.n}, dim={self.dim}, facets={len(self.facets)})"


def build_complex(facet_list: Iterable[Iterable[Label]]) -> SimplicialComplex:
    """Build a complex from label sets; ids are assigned by first occurrence.

    An empty ``facet_list`` gives the void complex; ``[[]]`` gives ``{∅}``.
    """
    index: dict = {}
    labels: list = []
    masks: list[int] = []
    for raw in facet_list:
        raw = list(raw)
        if len(set(raw)) != len(raw):
            raise MalformedInputError(f"duplicate vertex in facet {raw!r}")
        m = 0
        for lab in raw:
            i = index.get(lab)
            if i is None:
                i = index[lab] = len(labels)
                labels.append(lab)
            m |= 1 << i
        masks.append(m)
    return SimplicialComplex(tuple(labels), maximal_masks(masks))


def link(c: SimplicialComplex, face: Iterable[Label]) -> SimplicialComplex:
    """``{G : F ∪ G ∈ Δ, F ∩ G = ∅}``; void when ``F`` is not a face."""
    m = c.mask_of(face, strict=False)
    if m is None:
        return SimplicialComplex.void()
    return SimplicialComplex.from_masks(c.labels, [f & ~m for f in c.facets if m & ~f == 0])


def induced(c: SimplicialComplex, vertices: Iterable[Label]) -> SimplicialComplex:
    """The induced subcomplex ``Δ_W``."""
    w = c.mask_of(vertices)
    if c.is_void:
        return c
    return SimplicialComplex.from_masks(c.labels, [f & w for f in c.facets])


def cone(apex: Label, c: SimplicialComplex) -> SimplicialComplex:
    if apex in c.index:
        raise MalformedInputError(f"cone apex {apex!r} is already a vertex")
    if c.is_void:
        return c
    bit = 1 << c.n
    return SimplicialComplex(c.labels + (apex,), tuple(sorted(f | bit for f in c.facets)))


def connected_components(c: SimplicialComplex) -> list[tuple]:
    """Vertex classes of the 1-skeleton, each as a label tuple in id order."""
    adj = c.adjacency
    remaining = c.vertex_mask
    comps = []
    while remaining:
        comp = frontier = remaining & -remaining
        while frontier:
            nb = 0
            for b in iter_bits(frontier):
                nb |= adj[b.bit_length() - 1]
            frontier = nb & ~comp
            comp |= frontier
        remaining &= ~comp
        comps.append(c.face_of(comp))
    return comps


@dataclass(frozen=True)
class FVector:
    f: tuple[int, ...]  # f[0] is f_{-1}
    void: bool = False

    def __getitem__(self, i: int) -> int:
        """``fv[i]`` is ``f_i`` for ``i >= -1``; zero beyond the top."""
        j = i + 1
        return self.f[j] if 0 <= j < len(self.f) else 0


@dataclass(frozen=True)
class HVector:
    h: tuple[int, ...]
    d: int

    def __getitem__(self, i: int) -> int:
        return self.h[i] if 0 <= i < len(self.h) else 0

    @property
    def g2(self) -> int | None:
        if self.d < 2:
            return None
        return self.h[2] - self.h[1]


def h_from_f(f: Sequence[int], d: int) -> tuple[int, ...]:
    """``h_i = Σ_j (-1)^(i-j) C(d-j, i-j) f_{j-1}`` with ``f[j] = f_{j-1}``."""
    fj = lambda j: f[j] if j < len(f) else 0
    return tuple(
        sum((-1) ** (i - j) * comb(d - j, i - j) * fj(j) for j in range(i + 1))
        for i in range(d + 1)
    )


class RelativePair:
    """A relative complex ``(Δ, Γ)``, identified with the face set ``Δ ∖ Γ``.

    ``gamma`` may be void (the default), which makes the pair the absolute
    complex ``Δ``.  Faces of ``gamma`` are re-expressed over ``delta``'s
    vertex ids, so all masks of a pair live in one id space.
    """

    def __init__(self, delta: SimplicialComplex, gamma: SimplicialComplex | None = None):
        gamma = SimplicialComplex.void() if gamma is None else gamma
        gf = []
        for f in gamma.facets:
            m = delta.mask_of(gamma.face_of(f), strict=False)
            if m is None or not delta.contains(m):
                raise MalformedInputError(f"Γ face {gamma.face_of(f)!r} is not a face of Δ")
            gf.append(m)
        self.delta = delta
        self.gamma = gamma
        self.gamma_facets = tuple(gf)

    @classmethod
    def absolute(cls, c: SimplicialComplex) -> "RelativePair":
        return cls(c)

    @property
    def labels(self) -> tuple:
        return self.delta.labels

    @property
    def n(self) -> int:
        return self.delta.n

    @property
    def is_absolute(self) -> bool:
        return not self.gamma_facets

    def in_gamma(self, mask: int) -> bool:
        return any(mask & ~g == 0 for g in self.gamma_facets)

    @cached_property
    def levels(self) -> tuple[tuple[int, ...], ...]:
        """Faces of ``Δ ∖ Γ`` by cardinality (index 0 holds ∅ if present)."""
        if not self.gamma_facets:
            return self.delta.levels
        lv = [tuple(m for m in lev if not self.in_gamma(m)) for lev in self.delta.levels]
        while lv and not lv[-1]:
            lv.pop()
        return tuple(lv)

    @cached_property
    def dim(self) -> int | None:
        """Largest face dimension in ``Δ ∖ Γ``; ``None`` if that set is empty."""
        for k in range(len(self.levels) - 1, -1, -1):
            if self.levels[k]:
                return k - 1
        return None

    @property
    def is_void(self) -> bool:
        return self.dim is None

    @cached_property
    def facets(self) -> tuple[int, ...]:
        """Maximal faces of ``Δ ∖ Γ``; these are exactly the facets of Δ outside Γ."""
        return tuple(f for f in self.delta.facets if not self.in_gamma(f))

    @cached_property
    def vertex_mask(self) -> int:
        m = 0
        for f in self.facets:
            m |= f
        return m

    def link_faces(self, mask: int) -> list[list[int]]:
        """Relative faces of ``(lk(F,Δ), lk(F,Γ))`` by cardinality: ``{G : G ⊔ F ∈ Δ∖Γ}``."""
        k0 = popcount(mask)
        out: list[list[int]] = []
        for k in range(k0, len(self.levels)):
            out.append([f ^ mask for f in self.levels[k] if f & mask == mask])
        while out and not out[-1]:
            out.pop()
        return out

    def link(self, face: Iterable[Label]) -> "RelativePair":
        """The link pair ``(lk(F,Δ), lk(F,Γ))``."""
        d = link(self.delta, face)
        g = link(self.gamma, face)
        return RelativePair(d, g)

    def induced(self, vertices: Iterable[Label]) -> "RelativePair":
        w = list(vertices)
        d = induced(self.delta, w)
        gw = [v for v in w if v in self.gamma.index]
        g = induced(self.gamma, gw) if not self.gamma.is_void else self.gamma
        return RelativePair(d, g)

    def __repr__(self) -> str:
        return f"RelativePair(delta={self.delta!r}, gamma={self.gamma!r})"


def f_h_vectors(p: RelativePair | SimplicialComplex, d: int | None = None) -> tuple[FVector, HVector]:
    """f- and h-vector of a pair; ``d`` defaults to ``dim + 1``.

    The void pair gets ``f = (0,)``, ``h = (0,)`` and is flagged ``void``.
    """
    if isinstance(p, SimplicialComplex):
        p = RelativePair(p)
    if p.is_void and d is None:
        return FVector((0,), void=True), HVector((0,), 0)
    if d is None:
        d = p.dim + 1
    counts = [len(lev) for lev in p.levels]
    f = tuple(counts[j] if j < len(counts) else 0 for j in range(d + 1))
    return FVector(f, void=p.is_void), HVector(h_from_f(counts, d), d)
