"""Reduced and relative simplicial homology over prime fields and ℚ.

Everything is exact.  Over F_2 boundary columns are packed into Python
integers and reduced with XOR; over F_p they are sparse dicts reduced
modulo p; over ℚ they are sparse integer dicts reduced fraction-free
(cross-multiplication followed by content division), which keeps the rank
exact without ever forming a rational number.

The rank of ∂₁ never needs elimination: a (relative) graph incidence matrix
has rank equal to the size of a spanning forest once all vertices of Γ are
collapsed to a single ground node, over every field.

The low-level entry point is :func:`betti_of_levels`, which takes a relative
face set grouped by cardinality and is what the subset-sum kernels call in
their inner loops.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .complex import RelativePair, SimplicialComplex, bit_ids
from .errors import MalformedInputError, ResourceError

DEFAULT_FACE_BUDGET = 2_000_000


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``p == 0`` means ℚ, otherwise F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and (self.p >= 2**31 or not _is_prime(self.p)):
            raise MalformedInputError(f"field characteristic {self.p} is not a prime below 2^31")

    @classmethod
    def parse(cls, text: "str | int | Field") -> "Field":
        """Accept ``q``/``Q``/``0``, ``p:5``, ``F5`` or a bare prime."""
        if isinstance(text, Field):
            return text
        if isinstance(text, int):
            return cls(text)
        t = str(text).strip().lower()
        if t in ("q", "qq", "rational", "rationals", "0"):
            return cls(0)
        for prefix in ("p:", "gf", "f"):
            if t.startswith(prefix):
                t = t[len(prefix):]
                break
        try:
            return cls(int(t))
        except ValueError:
            raise MalformedInputError(f"cannot parse field {text!r}") from None

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "q" if self.p == 0 else f"p:{self.p}"


QQ = Field(0)
GF2 = Field(2)


# --------------------------------------------------------------------------
# rank kernels


def _graph_rank(vertices: Sequence[int], edges: Sequence[int]) -> int:
    rows = set(vertices)
    parent: dict[int, int] = {}

    def find(x):
        root = x
        while True:
            p = parent.get(root)
            if p is None:
                break
            root = p
        while x != root:
            nxt = parent[x]
            parent[x] = root
            x = nxt
        return root

    rank = 0
    limit = len(rows)
    for e in edges:
        a = e & -e
        b = e ^ a
        if a not in rows:
            a = 0
        if b not in rows:
            b = 0
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            rank += 1
            if rank == limit:
                break
    return rank


def _rank_f2(rows: Sequence[int], cols: Sequence[int]) -> int:
    idx = {m: i for i, m in enumerate(rows)}
    get = idx.get
    pivots: dict[int, int] = {}
    limit = min(len(rows), len(cols))
    for face in cols:
        c = 0
        m = face
        while m:
            b = m & -m
            m ^= b
            j = get(face ^ b)
            if j is not None:
                c |= 1 << j
        while c:
            low = c.bit_length() - 1
            q = pivots.get(low)
            if q is None:
                pivots[low] = c
                break
            c ^= q
        if len(pivots) == limit:
            break
    return len(pivots)


def _reduce_sparse(columns: Iterable[dict], p: int, limit: int) -> int:
    """Rank of sparse integer columns over F_p (p > 2) or ℚ (p == 0)."""
    pivots: dict[int, dict] = {}
    for c in columns:
        if p:
            while c:
                low = max(c)
                q = pivots.get(low)
                if q is None:
                    inv = pow(c[low], -1, p)
                    if inv != 1:
                        c = {r: v * inv % p for r, v in c.items()}
                    pivots[low] = c
                    break
                f = c[low]
                for r, v in q.items():
                    nv = (c.get(r, 0) - f * v) % p
                    if nv:
                        c[r] = nv
                    else:
                        c.pop(r, None)
        else:
            while c:
                low = max(c)
                q = pivots.get(low)
                if q is None:
                    pivots[low] = c
                    break
                a = q[low]
                f = c[low]
                if a == 1 or a == -1:
                    t = f * a
                else:
                    g = gcd(a, f)
                    a //= g
                    t = f // g
                    c = {r: a * v for r, v in c.items()}
                for r, v in q.items():
                    nv = c.get(r, 0) - t * v
                    if nv:
                        c[r] = nv
                    else:
                        c.pop(r, None)
                if c:
                    g = 0
                    for v in c.values():
                        g = gcd(g, v)
                        if g == 1:
                            break
                    if g > 1:
                        c = {r: v // g for r, v in c.items()}
        if len(pivots) == limit:
            break
    return len(pivots)


def _boundary_columns(rows: Sequence[int], cols: Sequence[int], p: int):
    idx = {m: i for i, m in enumerate(rows)}
    get = idx.get
    neg = p - 1 if p else -1
    for face in cols:
        c = {}
        sign = 1
        m = face
        while m:
            b = m & -m
            m ^= b
            j = get(face ^ b)
            if j is not None:
                c[j] = sign
            sign = neg if sign == 1 else 1
        yield c


def boundary_rank(rows: Sequence[int], cols: Sequence[int], p: int) -> int:
    """Rank of the boundary map from faces ``cols`` to faces ``rows``.

    Faces of ``cols`` whose boundary faces are missing from ``rows`` are
    treated as relative chains (the missing faces lie in Γ).
    """
    if not rows or not cols:
        return 0
    if p == 2:
        return _rank_f2(rows, cols)
    return _reduce_sparse(_boundary_columns(rows, cols, p), p, min(len(rows), len(cols)))


def matrix_rank(columns: Iterable[dict], field: Field | int) -> int:
    """Rank of an integer matrix given as sparse ``{row: value}`` columns."""
    p = field.p if isinstance(field, Field) else field
    cols = []
    for col in columns:
        if p:
            c = {r: v % p for r, v in col.items() if v % p}
        else:
            c = {r: v for r, v in col.items() if v}
        cols.append(c)
    return _reduce_sparse(cols, p, len(cols))


def level_ranks(levels: Sequence[Sequence[int]], p: int) -> list[int]:
    """``ranks[k]`` is the rank of ∂ from ``k``-element faces to ``(k-1)``-element faces."""
    K = len(levels)
    ranks = [0] * (K + 1)
    if K > 1 and levels[0] and levels[1]:
        ranks[1] = 1
    if K > 2 and levels[2] and levels[1]:
        ranks[2] = _graph_rank(levels[1], levels[2])
    for k in range(3, K):
        if levels[k] and levels[k - 1]:
            ranks[k] = boundary_rank(levels[k - 1], levels[k], p)
    return ranks


def betti_of_levels(levels: Sequence[Sequence[int]], p: int) -> list[int]:
    """Reduced Betti numbers ``[b̃_{-1}, b̃_0, ...]`` of a relative face set.

    ``levels[k]`` lists the faces with ``k`` vertices; ``levels[0]`` is
    ``[0]`` when the empty face is a chain, else empty.  Only degrees up to
    ``len(levels) - 2`` are reported, so callers truncate to save work.
    """
    ranks = level_ranks(levels, p)
    return [len(levels[k]) - ranks[k] - ranks[k + 1] for k in range(len(levels))]


# --------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class ChainComplex:
    """Augmented relative chain complex with explicit sparse boundaries.

    ``bases[k]`` are the chain-group bases (masks) for faces with ``k``
    vertices, and ``boundaries[k]`` holds the columns of ∂ from ``bases[k]``
    to ``bases[k-1]`` as ``{row index: coefficient}`` dicts.
    """

    labels: tuple
    bases: tuple
    boundaries: tuple
    field: Field

    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    def ranks(self) -> tuple[int, ...]:
        p = self.field.p
        out = [0]
        for k in range(1, len(self.bases)):
            cols = [dict(c) for c in self.boundaries[k]]
            out.append(_reduce_sparse(cols, p, min(len(self.bases[k - 1]), len(cols))) if cols else 0)
        return tuple(out)

    def check(self) -> None:
        """Raise if some ∂_{k-1} ∘ ∂_k is nonzero."""
        p = self.field.p
        for k in range(2, len(self.bases)):
            lower = self.boundaries[k - 1]
            for col in self.boundaries[k]:
                acc: dict[int, int] = {}
                for r, v in col.items():
                    for r2, v2 in lower[r].items():
                        acc[r2] = acc.get(r2, 0) + v * v2
                bad = [r for r, v in acc.items() if (v % p if p else v)]
                if bad:
                    raise AssertionError(f"∂∂ ≠ 0 in degree {k - 1}")


def _pair(p) -> RelativePair:
    return p if isinstance(p, RelativePair) else RelativePair(p)


def boundary_matrices(p, field: Field | str = QQ, budget: int = DEFAULT_FACE_BUDGET,
                      check: bool = True) -> ChainComplex:
    pair = _pair(p)
    k = Field.parse(field)
    levels = pair.levels
    total = sum(len(lev) for lev in levels)
    if total > budget:
        raise ResourceError(f"pair has {total} faces, budget is {budget}")
    bases = tuple(tuple(lev) for lev in levels)
    bnds = [()]
    for j in range(1, len(bases)):
        bnds.append(tuple(_boundary_columns(bases[j - 1], bases[j], k.p)))
    cc = ChainComplex(pair.labels, bases, tuple(bnds), k)
    if check:
        cc.check()
    return cc


@dataclass(frozen=True)
class BettiVector:
    """``reduced[0]`` is b̃_{-1}; ``unreduced[0]`` is b_0."""

    reduced: tuple[int, ...]
    unreduced: tuple[int, ...]
    field: Field
    ranks: tuple[int, ...] = field(default=(), compare=False)

    def tilde(self, i: int) -> int:
        j = i + 1
        return self.reduced[j] if 0 <= j < len(self.reduced) else 0

    def b(self, i: int) -> int:
        return self.unreduced[i] if 0 <= i < len(self.unreduced) else 0

    def euler(self) -> int:
        return sum((-1) ** i * v for i, v in enumerate(self.reduced, start=-1))


def reduced_betti(p, field: Field | str = QQ, budget: int = DEFAULT_FACE_BUDGET,
                  max_dim: int | None = None) -> BettiVector:
    """Reduced and unreduced Betti numbers of a pair.

    ``max_dim`` truncates the computation to degrees ``<= max_dim``.
    """
    pair = _pair(p)
    k = Field.parse(field)
    levels = list(pair.levels)
    total = sum(len(lev) for lev in levels)
    if total > budget:
        raise ResourceError(f"pair has {total} faces, budget is {budget}")
    if max_dim is not None:
        levels = levels[: max_dim + 3]
    ranks = level_ranks(levels, k.p)
    top = len(levels)
    if max_dim is not None:
        top = min(top, max_dim + 2)
    reduced = tuple(len(levels[j]) - ranks[j] - ranks[j + 1] for j in range(top))
    unreduced = tuple(len(levels[j]) - (ranks[j] if j >= 2 else 0) - ranks[j + 1]
                      for j in range(1, top))
    return BettiVector(reduced, unreduced, k, tuple(ranks))


def euler_characteristic(p) -> int:
    """Reduced Euler characteristic Σ (-1)^i f_i over the relative faces (i ≥ -1)."""
    pair = _pair(p)
    return sum((-1) ** (k - 1) * len(lev) for k, lev in enumerate(pair.levels))
