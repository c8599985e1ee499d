"""Edge-path presentations of π₁, Tietze simplification, and brackets on m(Δ).

Words are tuples of nonzero ints: ``+(i+1)`` is generator ``i`` and
``-(i+1)`` its inverse.  The upper bound on the minimum number of
generators comes from simplifying the edge-path presentation; the lower
bound is the largest first Betti number over the checked fields.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import RelativePair, SimplicialComplex, bit_ids, connected_components
from .errors import MalformedInputError
from .homology import Field, matrix_rank, reduced_betti

DEFAULT_TIETZE_BUDGET = 10_000
DEFAULT_PRIMES = (2, 3, 5, 7, 11)

Word = tuple[int, ...]


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def invert(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def _canonical(word: Word) -> Word:
    """Least rotation of the word or its inverse; identifies equivalent relators."""
    if not word:
        return word
    best = None
    for w in (word, invert(word)):
        for i in range(len(w)):
            r = w[i:] + w[:i]
            if best is None or r < best:
                best = r
    return best


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def word_str(self, word: Word) -> str:
        if not word:
            return "1"
        return " ".join(self.generators[abs(x) - 1] + ("" if x > 0 else "^-1") for x in word)

    def exponent_columns(self) -> list[dict]:
        """Exponent-sum matrix as sparse columns, one per relator."""
        cols = []
        for r in self.relators:
            c: dict[int, int] = {}
            for x in r:
                g = abs(x) - 1
                c[g] = c.get(g, 0) + (1 if x > 0 else -1)
            cols.append({g: v for g, v in c.items() if v})
        return cols

    def abelian_dimension(self, field: Field | str | int) -> int:
        """dim H₁(G; 𝕂) = #generators − rank of the exponent matrix over 𝕂."""
        k = Field.parse(field)
        return len(self.generators) - matrix_rank(self.exponent_columns(), k)

    def abelian_invariants(self) -> tuple[int, tuple[int, ...]]:
        """Free rank and torsion coefficients (>1) of the abelianization, via Smith normal form."""
        n = len(self.generators)
        if n == 0:
            return 0, ()
        cols = self.exponent_columns()
        if not cols:
            return n, ()
        from sympy import Matrix
        from sympy.matrices.normalforms import invariant_factors
        from sympy.polys.domains import ZZ

        m = Matrix(n, len(cols), lambda i, j: cols[j].get(i, 0))
        factors = [abs(int(x)) for x in invariant_factors(m, domain=ZZ)]
        nonzero = [x for x in factors if x]
        return n - len(nonzero), tuple(sorted(x for x in nonzero if x > 1))

    def to_dict(self) -> dict:
        return {"generators": list(self.generators),
                "relators": [self.word_str(r) for r in self.relators]}


def edge_path_presentation(c: SimplicialComplex) -> GroupPresentation:
    """Spanning tree by BFS from vertex 0; one generator per non-tree edge, one relator per triangle."""
    if c.is_void or c.n == 0:
        raise MalformedInputError("π₁ needs at least one vertex")
    if len(connected_components(c)) != 1:
        raise MalformedInputError("complex is disconnected; split it by component first")
    adj = c.adjacency
    parent = {0: None}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in bit_ids(adj[v]):
            if u not in parent:
                parent[u] = v
                queue.append(u)
    tree = {frozenset((u, v)) for u, v in parent.items() if v is not None}
    lv = c.levels
    edges = lv[2] if len(lv) > 2 else ()
    gens: list[str] = []
    gen_of: dict[int, int] = {}
    for e in edges:
        a, b = bit_ids(e)
        if frozenset((a, b)) in tree:
            continue
        gen_of[e] = len(gens) + 1
        gens.append(f"{c.labels[a]}-{c.labels[b]}")

    def letter(a: int, b: int) -> list[int]:
        g = gen_of.get((1 << a) | (1 << b))
        if g is None:
            return []
        return [g] if a < b else [-g]

    rels = []
    for t in (lv[3] if len(lv) > 3 else ()):
        a, b, d = bit_ids(t)
        rels.append(free_reduce(letter(a, b) + letter(b, d) + letter(d, a)))
    return GroupPresentation(tuple(gens), tuple(rels))


@dataclass
class _State:
    alive: list[int]
    relators: list[Word]
    moves: int = 0


def _tidy(rels: Iterable[Word]) -> list[Word]:
    seen = set()
    out = []
    for r in rels:
        r = cyclic_reduce(r)
        if not r:
            continue
        key = _canonical(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def _eliminate_once(rels: list[Word]) -> tuple[int, list[Word]] | None:
    order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), i))
    for i in order:
        r = rels[i]
        counts: dict[int, int] = {}
        for x in r:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        single = sorted(g for g, k in counts.items() if k == 1)
        if not single:
            continue
        g = single[0]
        pos = next(j for j, x in enumerate(r) if abs(x) == g)
        rot = r[pos:] + r[:pos]
        rest = rot[1:]
        # rot = x^e · rest = 1, so x^e = rest^-1
        replacement = invert(rest) if rot[0] > 0 else rest
        inv_rep = invert(replacement)
        new = []
        for j, s in enumerate(rels):
            if j == i:
                continue
            w: list[int] = []
            for x in s:
                if x == g:
                    w.extend(replacement)
                elif x == -g:
                    w.extend(inv_rep)
                else:
                    w.append(x)
            new.append(tuple(w))
        return g, new
    return None


def _shorten_once(rels: list[Word]) -> list[Word] | None:
    """Replace a long piece of some relator by the inverse of the short remainder of another."""
    order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), i))
    for i in order:
        r = rels[i]
        L = len(r)
        pieces = []
        for w in (r, invert(r)):
            for k in range(L):
                rot = w[k:] + w[:k]
                for cut in range(L // 2 + 1, L + 1):
                    pieces.append((rot[:cut], invert(rot[cut:])))
        for j in order:
            if j == i or len(rels[j]) < len(r) // 2 + 1:
                continue
            s = rels[j]
            ss = s + s
            for piece, repl in pieces:
                p = len(piece)
                if p > len(s):
                    continue
                for start in range(len(s)):
                    if ss[start:start + p] == piece:
                        rot = ss[start:start + len(s)]
                        cand = cyclic_reduce(repl + rot[p:])
                        if len(cand) < len(s):
                            out = list(rels)
                            out[j] = cand
                            return out
    return None


@dataclass(frozen=True)
class TietzeResult:
    presentation: GroupPresentation
    m_ub: int
    moves: int
    exhausted: bool


def tietze_simplify(g: GroupPresentation, budget: int = DEFAULT_TIETZE_BUDGET) -> TietzeResult:
    """Deterministic Tietze passes until a fixpoint or the move budget.

    Each pass tidies relators (cyclic reduction, empty and duplicate
    removal), then eliminates the lowest generator that occurs exactly once
    in the shortest possible relator, and only when no elimination applies
    shortens a relator by substitution.
    """
    if budget < 0:
        raise MalformedInputError("budget must be non-negative")
    alive = list(range(1, len(g.generators) + 1))
    rels = _tidy(g.relators)
    moves = 0
    exhausted = False
    while True:
        if moves >= budget:
            exhausted = _eliminate_once(rels) is not None or _shorten_once(rels) is not None
            break
        step = _eliminate_once(rels)
        if step is not None:
            gen, rels = step
            alive.remove(gen)
            rels = _tidy(rels)
            moves += 1
            continue
        shorter = _shorten_once(rels)
        if shorter is None:
            break
        rels = _tidy(shorter)
        moves += 1
    renum = {old: new for new, old in enumerate(alive, start=1)}
    new_rels = tuple(tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in r) for r in rels)
    pres = GroupPresentation(tuple(g.generators[i - 1] for i in alive), new_rels)
    return TietzeResult(pres, len(alive), moves, exhausted)


@dataclass(frozen=True)
class MBracket:
    m_lb: int
    m_ub: int
    field_evidence: dict
    status: str  # "exact" or "bracket"
    exhausted: bool = False
    abelian_check: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def to_dict(self) -> dict:
        return {
            "m_lb": self.m_lb,
            "m_ub": self.m_ub,
            "status": self.status,
            "exhausted": self.exhausted,
            "field_evidence": dict(self.field_evidence),
            "abelian_check": {k: list(v) for k, v in self.abelian_check.items()},
        }


CHECK_PRIMES = (2, 3, 5)


def m_bracket(c, primes: Sequence[int] = DEFAULT_PRIMES,
              budget: int = DEFAULT_TIETZE_BUDGET) -> MBracket:
    """Bracket ``m_lb <= m(Δ) <= m_ub`` for a connected complex.

    Also records, for p in {2, 3, 5}, the mod-p dimension of the
    abelianization before and after simplification; these must agree.
    """
    if isinstance(c, RelativePair):
        c = c.delta
    pres = edge_path_presentation(c)
    result = tietze_simplify(pres, budget)
    evidence = {}
    for k in [Field(0)] + [Field(p) for p in primes]:
        evidence[str(k)] = reduced_betti(c, k, max_dim=1).b(1)
    m_lb = max(evidence.values())
    check = {}
    for p in CHECK_PRIMES:
        check[f"p:{p}"] = (pres.abelian_dimension(p), result.presentation.abelian_dimension(p))
    if any(a != b for a, b in check.values()):
        raise AssertionError(f"Tietze moves changed the abelianization: {check}")
    m_ub = result.m_ub
    if m_lb > m_ub:
        raise AssertionError(f"lower bound {m_lb} exceeds upper bound {m_ub}")
    status = "exact" if m_lb == m_ub else "bracket"
    return MBracket(m_lb, m_ub, evidence, status, result.exhausted, check)
