"""Verification of the lower-bound inequalities on single subjects and whole corpora.

Every verifier returns a :class:`VerificationReport`.  Outcomes:

``verified``
    every checked inequality holds against the conservative end of the
    m-bracket, with exact arithmetic;
``violated``
    some inequality fails with an exact witness, or a certified equality
    does not hold;
``inconclusive``
    the m-bracket straddles a threshold, or a budget stopped a computation;
``not-applicable``
    the hypotheses fail.  Everything is still computed and recorded, and
    an identity that needs no hypotheses can still be ``violated``.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Sequence

from .complex import RelativePair, SimplicialComplex, connected_components, f_h_vectors
from .constructors import (CertifiedComplex, csaszar_torus, cyclic_boundary, projective_plane,
                           simplex_boundary, stacked_manifold)
from .errors import MalformedInputError, ResourceError
from .homology import QQ, Field, reduced_betti
from .musigma import (DEFAULT_GRAPH_BAG_LIMIT, DEFAULT_LINK_BUDGET, MuVector, mu_exact,
                      mu_ordering, sample_ordering, sigma01_graph, sigma_tilde, thread_count,
                      vertex_sigmas)
from .pi1 import DEFAULT_TIETZE_BUDGET, m_bracket
from .poset import (RelativePosetPair, SimplicialPoset, barycentric_subdivision, cellular_betti,
                    face_poset, poset_betti, poset_f_h, poset_mu_exact, poset_mu_ordering,
                    poset_vertex_sigma, random_simplicial_poset, sd_ordering, three_parallel_edges)
from .recognizers import (connected_links, is_buchsbaum, is_normal_pseudomanifold, is_pure,
                          vertex_links_serre)

VERIFIED = "verified"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not-applicable"

CSV_COLUMNS = ("subject", "theorem", "d", "n", "g2", "mu0", "mu1", "m_lb", "m_ub", "outcome", "slack")

THEOREMS = ("g2-lower-bound", "h2-lower-bound", "hi-lower-bounds", "sd-mu-invariance",
            "morse-inequalities")


def _q(x) -> str | None:
    return None if x is None else str(x)


@dataclass
class VerificationReport:
    subject: str
    theorem: str
    hypotheses: dict = field(default_factory=dict)
    quantities: dict = field(default_factory=dict)
    outcome: str = VERIFIED
    slack: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return all(v["holds"] for v in self.hypotheses.values())

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "theorem": self.theorem,
            "hypotheses": self.hypotheses,
            "hypotheses_hold": self.hypotheses_hold,
            "quantities": self.quantities,
            "checks": self.checks,
            "outcome": self.outcome,
            "slack": self.slack,
            "notes": self.notes,
        }

    def csv_row(self) -> dict:
        q = self.quantities
        mu = q.get("mu") or []
        main = next(iter(self.slack.values()), None)
        return {
            "subject": self.subject,
            "theorem": self.theorem,
            "d": q.get("d"),
            "n": q.get("n"),
            "g2": q.get("g2"),
            "mu0": mu[0] if len(mu) > 0 else None,
            "mu1": mu[1] if len(mu) > 1 else None,
            "m_lb": q.get("m_lb"),
            "m_ub": q.get("m_ub"),
            "outcome": self.outcome,
            "slack": main,
        }

    # ------------------------------------------------------------------
    def check(self, name: str, outcome: str, slack=None, **detail) -> str:
        entry = {"name": name, "outcome": outcome}
        if slack is not None:
            entry["slack"] = _q(slack)
            self.slack.setdefault(name, _q(slack))
        entry.update({k: (_q(v) if isinstance(v, Fraction) else v) for k, v in detail.items()})
        self.checks.append(entry)
        return outcome

    def finish(self, unconditional: Sequence[str] = ()) -> "VerificationReport":
        """Fold check outcomes into the report outcome.

        Checks named in ``unconditional`` need no hypotheses; the rest are
        only asserted when the hypotheses hold.
        """
        asserted = [c for c in self.checks if self.hypotheses_hold or c["name"] in unconditional]
        outs = {c["outcome"] for c in asserted}
        if VIOLATED in outs:
            self.outcome = VIOLATED
        elif not self.hypotheses_hold:
            self.outcome = NOT_APPLICABLE
            self.notes.append("hypotheses fail: the inequalities are recorded but not asserted")
        elif INCONCLUSIVE in outs:
            self.outcome = INCONCLUSIVE
        else:
            self.outcome = VERIFIED
        return self


def _ineq(lhs: Fraction, rhs: Fraction) -> tuple[str, Fraction]:
    slack = Fraction(lhs) - Fraction(rhs)
    return (VERIFIED if slack >= 0 else VIOLATED), slack


def _bracket_check(lhs, coef, m_lb, m_ub) -> tuple[str, Fraction | None]:
    """``lhs >= coef * m`` with ``m`` known only to lie in ``[m_lb, m_ub]``.

    Slack is taken against ``m_ub``.  Holding for ``m_ub`` verifies; failing
    already for ``m_lb`` violates; anything between is inconclusive.
    """
    if m_lb is None:
        return INCONCLUSIVE, None
    lhs = Fraction(lhs)
    if m_ub is not None and lhs >= coef * m_ub:
        return VERIFIED, lhs - coef * m_ub
    if lhs < coef * m_lb:
        return VIOLATED, lhs - coef * m_lb
    return INCONCLUSIVE, (lhs - coef * m_ub) if m_ub is not None else None


def _unwrap(x):
    if isinstance(x, CertifiedComplex):
        return x.complex, x
    return x, None


def _m_info(c: SimplicialComplex, cert: CertifiedComplex | None, report: VerificationReport,
            tietze_budget: int) -> tuple[int | None, int | None]:
    """m-bracket, tightened by a certificate when one exists."""
    m_lb = m_ub = None
    try:
        br = m_bracket(c, budget=tietze_budget)
        report.quantities["m_bracket"] = br.to_dict()
        m_lb, m_ub = br.m_lb, br.m_ub
    except MalformedInputError as e:
        report.notes.append(f"no m-bracket: {e}")
    if cert is not None and cert.m is not None:
        report.quantities["m_certificate"] = cert.m
        if m_lb is not None and not (m_lb <= cert.m <= m_ub):
            report.check("certificate-in-bracket", VIOLATED, m_lb=m_lb, m_ub=m_ub, m=cert.m)
        m_lb = m_ub = cert.m
    report.quantities["m_lb"] = m_lb
    report.quantities["m_ub"] = m_ub
    return m_lb, m_ub


def _hyp(report: VerificationReport, name: str, verdict) -> None:
    report.hypotheses[name] = verdict if isinstance(verdict, dict) else verdict.to_dict()


def _flag(holds: bool, reason: str = "") -> dict:
    return {"holds": holds, "witnesses": [] if holds else [[[], reason]], "notes": [], "field": None}


# ----------------------------------------------------------------------
# g2 >= C(d+2,2) m and the μ form


def verify_g2_bound(x, field: Field | str = QQ, samples: int = 50, seed: int = 0,
                    subject: str | None = None, tietze_budget: int = DEFAULT_TIETZE_BUDGET,
                    bag_limit: int = DEFAULT_GRAPH_BAG_LIMIT) -> VerificationReport:
    """g₂ against C(d+2,2)·m, C(d+2,2)·(μ₁−μ₀+1), and μ₁^ς−μ₀^ς against m−b₀.

    Hypotheses: normal pseudomanifold, connected, dim >= 3.  For certified
    stacked members the equalities g₂ = C(d+2,2)·m = C(d+2,2)·(μ₁−μ₀+1) =
    C(d+2,2)·b₁ are asserted as well (dim >= 3).
    """
    c, cert = _unwrap(x)
    k = Field.parse(field)
    r = VerificationReport(subject or (cert.name if cert else "complex"), "g2-lower-bound")
    if isinstance(c, RelativePair):
        c = c.delta
    d = c.dim
    r.quantities.update({"d": d, "n": c.n, "field": str(k)})
    _hyp(r, "normal-pseudomanifold", is_normal_pseudomanifold(c, all_witnesses=False))
    _hyp(r, "connected", _flag(not c.is_void and len(connected_components(c)) == 1, "disconnected"))
    _hyp(r, "dim>=3", _flag(d is not None and d >= 3, f"dimension {d}"))
    if d is None or d < 2:
        r.notes.append("g2 undefined below dimension 2")
        return r.finish()
    f, h = f_h_vectors(c)
    g2 = h.g2
    coef = comb(d + 2, 2)
    r.quantities.update({"f": list(f.f), "h": list(h.h), "g2": g2, "coefficient": coef})
    betti = reduced_betti(c, k, max_dim=1)
    b0, b1 = betti.b(0), betti.b(1)
    r.quantities.update({"b0": b0, "b1": b1})
    m_lb, m_ub = _m_info(c, cert, r, tietze_budget)

    mu = None
    try:
        mu = mu_exact(c, k, upto=1, bag_limit=bag_limit)
        r.quantities["mu"] = [_q(v) for v in mu.mu]
    except ResourceError as e:
        r.notes.append(f"exact μ unavailable: {e}")

    if mu is not None:
        excess = mu[1] - mu[0] + 1
        r.quantities["mu1-mu0+1"] = _q(excess)
        out, slack = _ineq(Fraction(g2), coef * excess)
        r.check("g2>=C(d+2,2)(mu1-mu0+1)", out, slack)
        out, slack = _bracket_check(excess, 1, m_lb, m_ub)
        r.check("mu1-mu0+1>=m", out, slack)
        out, slack = _ineq(excess, Fraction(b1))
        r.check("mu1-mu0+1>=b1", out, slack)
    else:
        r.check("g2>=C(d+2,2)(mu1-mu0+1)", INCONCLUSIVE)
        r.check("mu1-mu0+1>=m", INCONCLUSIVE)

    out, slack = _bracket_check(g2, coef, m_lb, m_ub)
    r.check("g2>=C(d+2,2)m", out, slack)

    if m_lb is not None and samples > 0:
        worst = None
        worst_out = VERIFIED
        for idx in range(samples):
            perm = [c.labels[i] for i in sample_ordering(c.n, seed, idx)]
            ms = mu_ordering(c, perm, k)
            lhs = ms[1] - ms[0]
            out, slack = _bracket_check(lhs + b0, 1, m_lb, m_ub)
            if worst is None or (slack is not None and slack < worst):
                worst = slack
            if out == VIOLATED or (out == INCONCLUSIVE and worst_out == VERIFIED):
                worst_out = out
        r.check("mu1^s-mu0^s>=m-b0", worst_out, worst, samples=samples, seed=seed)

    if cert is not None and cert.stacked and d >= 3 and cert.m is not None:
        eq_m = g2 == coef * cert.m
        eq_b = g2 == coef * b1
        eq_mu = mu is not None and g2 == coef * (mu[1] - mu[0] + 1)
        ok = eq_m and eq_b and (mu is None or eq_mu)
        r.check("stacked-equality", VERIFIED if ok else VIOLATED,
                Fraction(g2 - coef * cert.m), g2_eq_m=eq_m, g2_eq_b1=eq_b, g2_eq_mu=eq_mu)
    if mu is not None:
        r.quantities["equality_mu_form"] = g2 == coef * (mu[1] - mu[0] + 1)
    if m_lb is not None and m_lb == m_ub:
        r.quantities["equality_m_form"] = g2 == coef * m_lb
    return r.finish(unconditional=("certificate-in-bracket",))


# ----------------------------------------------------------------------
# h2 >= C(d+1,2) m


def verify_h2_bound(x, field: Field | str = QQ, subject: str | None = None,
                    tietze_budget: int = DEFAULT_TIETZE_BUDGET) -> VerificationReport:
    """h₂ against C(d+1,2)·m for a complex or a simplicial poset.

    Hypotheses: pure, connected, dim >= 2, links of faces of dim <= d−2
    connected.  For posets m is bracketed through the subdivision.
    """
    obj, cert = _unwrap(x)
    k = Field.parse(field)
    r = VerificationReport(subject or (cert.name if cert else "subject"), "h2-lower-bound")
    if isinstance(obj, RelativePair):
        obj = obj.delta
    if isinstance(obj, RelativePosetPair):
        obj = obj.delta
    if isinstance(obj, SimplicialPoset):
        d = obj.dim
        f, h = poset_f_h(obj)
        sd = barycentric_subdivision(obj)
        r.quantities.update({"d": d, "n": len(obj.vertices), "kind": "poset"})
        m_source = sd
    else:
        d = obj.dim
        f, h = f_h_vectors(obj)
        r.quantities.update({"d": d, "n": obj.n, "kind": "complex"})
        m_source = obj
    r.quantities["field"] = str(k)
    _hyp(r, "pure", is_pure(obj))
    _hyp(r, "connected-links", connected_links(obj))
    _hyp(r, "dim>=2", _flag(d is not None and d >= 2, f"dimension {d}"))
    if d is None or d < 2:
        r.notes.append("h2 undefined below dimension 2")
        return r.finish()
    coef = comb(d + 1, 2)
    r.quantities.update({"f": list(f.f), "h": list(h.h), "h2": h[2], "g2": h.g2, "coefficient": coef})
    m_lb, m_ub = _m_info(m_source, cert, r, tietze_budget)
    out, slack = _bracket_check(h[2], coef, m_lb, m_ub)
    r.check("h2>=C(d+1,2)m", out, slack)
    return r.finish(unconditional=("certificate-in-bracket",))


# ----------------------------------------------------------------------
# h_i bounds, the link inequality and the link-sum identity


def _as_pair(x):
    obj, cert = _unwrap(x)
    if isinstance(obj, SimplicialComplex):
        return RelativePair(obj), cert
    if isinstance(obj, SimplicialPoset):
        return RelativePosetPair(obj), cert
    if isinstance(obj, (RelativePair, RelativePosetPair)):
        return obj, cert
    raise MalformedInputError(f"cannot verify {type(obj).__name__}")


def _vertex_links(pair) -> list:
    if isinstance(pair, RelativePosetPair):
        return [(v, pair.link(v)) for v in pair.vertices]
    return [(lab, pair.link((lab,))) for lab in pair.labels]


def _fh(pair, d=None):
    if isinstance(pair, RelativePosetPair):
        return poset_f_h(pair, d)
    return f_h_vectors(pair, d)


def _mu_upto(pair, k: Field, upto: int, budget: int, bag_limit: int, notes: list) -> list:
    """Exact μ_0..μ_upto where affordable; a shorter list when a budget stops the rest."""
    if upto < 0:
        return []
    try:
        if isinstance(pair, RelativePosetPair):
            return list(poset_mu_exact(pair, k, budget, upto=upto).mu)
        return list(mu_exact(pair, k, upto=upto, budget=budget, bag_limit=bag_limit).mu)
    except ResourceError as e:
        notes.append(f"μ up to degree {upto} unavailable: {e}")
    if upto >= 2 and isinstance(pair, RelativePair) and pair.is_absolute:
        try:
            return list(mu_exact(pair, k, upto=1, bag_limit=bag_limit).mu)
        except ResourceError as e:
            notes.append(f"μ_0, μ_1 unavailable: {e}")
    return []


def _link_sigma(pair, v, lp, k: Field, width: int, budget: int, bag_limit: int):
    """σ̃_{-1}..σ̃_{width-2} of a vertex link pair, or None when over budget."""
    if isinstance(pair, RelativePosetPair):
        return poset_vertex_sigma(pair, v, k, width, budget)
    if lp.is_absolute and width <= 2:
        return sigma01_graph(lp.delta, bag_limit)[:width]
    if lp.delta.n > budget:
        raise ResourceError(f"vertex link with {lp.delta.n} vertices exceeds budget {budget}")
    try:
        return vertex_sigmas(pair, k, budget)[pair.delta.index[v]][:width]
    except ResourceError:
        pass  # some other link is too large; compute this one alone
    sig = sigma_tilde(lp, k, budget=budget)
    return tuple(sig.at(j - 1) for j in range(width))


def verify_hi_bounds(x, r: int | None = None, field: Field | str = QQ, subject: str | None = None,
                     budget: int = DEFAULT_LINK_BUDGET,
                     bag_limit: int = DEFAULT_GRAPH_BAG_LIMIT) -> VerificationReport:
    """h_i ≥ C(D+1,i)(Σ_{j=1}^i (−1)^{i−j} μ_{j−1} + (−1)^i f_{−1}) for i ≤ r.

    ``D`` is the dimension of the pair; ``r`` defaults to ``D``.  Also
    checks, on every vertex link satisfying (S_r), the alternating σ̃ bound
    against the link's h-vector (parameter ``D``) for i ≤ r−1, and the
    identity i·h_i + (D−i+2)·h_{i−1} = Σ_v h_{i−1}(lk v) for i = 1..D+1.
    Buchsbaum inputs are checked for all i ≤ D.
    """
    pair, cert = _as_pair(x)
    k = Field.parse(field)
    rep = VerificationReport(subject or (cert.name if cert else "pair"), "hi-lower-bounds")
    D = pair.dim
    n = len(pair.vertices) if isinstance(pair, RelativePosetPair) else pair.n
    rep.quantities.update({"d": D, "n": n, "field": str(k)})
    _hyp(rep, "pure", is_pure(pair))
    if D is None or D < 0:
        rep.notes.append("void or {∅}: nothing to check")
        return rep.finish()
    if r is None:
        r = D
    if not 0 <= r <= D:
        raise MalformedInputError(f"r must lie in 0..{D}")
    serre = vertex_links_serre(pair, r, k, all_witnesses=True) if rep.hypotheses["pure"]["holds"] \
        else None
    buchs = is_buchsbaum(pair, k)
    rep.hypotheses["vertex-links-serre"] = serre.to_dict() if serre is not None else \
        _flag(False, "not pure")
    rep.quantities["buchsbaum"] = buchs.holds
    r_eff = D if buchs.holds else r
    rep.quantities["r"] = r
    rep.quantities["r_effective"] = r_eff
    f, h = _fh(pair)
    rep.quantities.update({"f": list(f.f), "h": list(h.h)})
    f_1 = f[-1]

    # (i) h_i bounds
    mu = _mu_upto(pair, k, r_eff - 1, budget, bag_limit, rep.notes)
    rep.quantities["mu"] = [_q(v) for v in mu]
    for i in range(r_eff + 1):
        name = f"h{i}-bound"
        if i - 1 >= len(mu):
            rep.check(name, INCONCLUSIVE, reason="μ over budget")
            continue
        alt = sum(((-1) ** (i - j) * mu[j - 1] for j in range(1, i + 1)), Fraction(0)) + (-1) ** i * f_1
        rhs = comb(D + 1, i) * alt
        out, slack = _ineq(Fraction(h[i]), rhs)
        rep.check(name, out, slack, lhs=h[i], rhs=rhs)

    # (ii) link inequality on links satisfying (S_r), and (iii) the link-sum identity
    link_h_sum = [0] * (D + 1)
    serre_bad = {tuple(map(str, w[0][:1])) for w in (serre.witnesses if serre else ())}
    link_worst: list = [None] * max(r, 0)
    link_out = [VERIFIED] * max(r, 0)
    counts = {"links_total": 0, "links_checked": 0, "links_skipped_serre": 0, "links_over_budget": 0}
    for v, lp in _vertex_links(pair):
        counts["links_total"] += 1
        _, lh = _fh(lp, D)
        for j in range(D + 1):
            link_h_sum[j] += lh[j]
        if serre is None or (str(v),) in serre_bad or r < 1:
            counts["links_skipped_serre"] += r >= 1
            continue
        width = r  # σ̃_{-1}..σ̃_{r-2}
        try:
            sig = _link_sigma(pair, v, lp, k, width, budget, bag_limit)
        except ResourceError as e:
            rep.notes.append(f"link of {v}: σ̃ unavailable ({e})")
            counts["links_over_budget"] += 1
            for i in range(r):
                link_out[i] = INCONCLUSIVE if link_out[i] == VERIFIED else link_out[i]
            continue
        counts["links_checked"] += 1
        for i in range(r):
            lhs = sum(((-1) ** (i - j) * sig[j] for j in range(i + 1)), Fraction(0))
            rhs = sum((Fraction((-1) ** (i - j) * lh[j], comb(D, j)) for j in range(i + 1)),
                      Fraction(0)) / (D + 1)
            out, slack = _ineq(rhs, lhs)
            if link_worst[i] is None or slack < link_worst[i]:
                link_worst[i] = slack
            if out == VIOLATED:
                link_out[i] = VIOLATED
                rep.notes.append(f"link of {v}: σ̃ inequality fails at i={i}")
    rep.quantities.update(counts)
    for i in range(r):
        rep.check(f"link-sigma-bound-{i}", link_out[i], link_worst[i])
    for i in range(1, D + 2):
        lhs = i * h[i] + (D - i + 2) * h[i - 1]
        rhs = link_h_sum[i - 1]
        rep.check(f"link-sum-identity-{i}", VERIFIED if lhs == rhs else VIOLATED,
                  Fraction(lhs - rhs), lhs=lhs, rhs=rhs)
    return rep.finish(unconditional=tuple(f"link-sum-identity-{i}" for i in range(1, D + 2)))


# ----------------------------------------------------------------------
# orderings of posets and their subdivisions


def _orderings(verts: Sequence, samples: int, seed: int, exhaustive_limit: int = 5) -> list:
    if len(verts) <= exhaustive_limit:
        return [list(p) for p in itertools.permutations(verts)]
    return [[verts[i] for i in sample_ordering(len(verts), seed, idx)] for idx in range(samples)]


def verify_poset_sd(x, field: Field | str = QQ, samples: int = 20, seed: int = 0,
                    subject: str | None = None) -> VerificationReport:
    """μ^ς of a poset pair against μ^{sd(ς)} of the subdivided pair, and Betti preservation.

    All orderings are tried on at most five vertices, ``samples`` seeded
    ones otherwise.  Betti numbers via the subdivision are compared with the
    cellular chain complex over F₂ and ℚ.
    """
    pair, _ = _as_pair(x)
    if isinstance(pair, RelativePair):
        pair = RelativePosetPair(face_poset(pair.delta),
                                 [f.id for f in face_poset(pair.gamma).faces] if not pair.is_absolute
                                 else ())
    k = Field.parse(field)
    rep = VerificationReport(subject or "poset", "sd-mu-invariance")
    verts = list(pair.vertices)
    rep.quantities.update({"d": pair.dim, "n": len(verts), "field": str(k)})
    sd = pair.sd_pair()
    orderings = _orderings(verts, samples, seed)
    rep.quantities["orderings"] = len(orderings)
    rep.quantities["exhaustive"] = len(verts) <= 5
    mismatches = 0
    first = None
    for perm in orderings:
        a = poset_mu_ordering(pair, perm, k).mu
        b = mu_ordering(sd, sd_ordering(pair, perm), k).mu if not sd.is_void else ()
        if a != b:
            mismatches += 1
            if first is None:
                first = {"ordering": [str(v) for v in perm], "poset": [_q(v) for v in a],
                         "sd": [_q(v) for v in b]}
    rep.check("mu-equality", VERIFIED if not mismatches else VIOLATED, Fraction(-mismatches),
              mismatches=mismatches, first_mismatch=first)
    for kk in (Field(2), QQ):
        via_sd = list(poset_betti(pair, kk))
        cell = list(cellular_betti(pair, kk))
        w = max(len(via_sd), len(cell))
        via_sd += [0] * (w - len(via_sd))
        cell += [0] * (w - len(cell))
        rep.quantities[f"betti[{kk}]"] = via_sd
        rep.check(f"betti-preserved[{kk}]", VERIFIED if via_sd == cell else VIOLATED, cellular=cell)
    return rep.finish()


# ----------------------------------------------------------------------
# Morse inequalities


def _betti_unreduced(pair, k: Field) -> list[int]:
    if isinstance(pair, RelativePosetPair):
        sd = pair.sd_pair()
        bv = reduced_betti(sd, k)
    else:
        bv = reduced_betti(pair, k)
    return list(bv.unreduced)


def _defects(mu: Sequence[Fraction], betti: Sequence[int]) -> list[Fraction]:
    out = []
    acc = Fraction(0)
    for i in range(len(mu)):
        acc = -acc + mu[i] - (betti[i] if i < len(betti) else 0)
        out.append(acc)
    return out


def verify_morse(x, field: Field | str = QQ, samples: int = 50, seed: int = 0,
                 subject: str | None = None, budget: int = DEFAULT_LINK_BUDGET,
                 bag_limit: int = DEFAULT_GRAPH_BAG_LIMIT) -> VerificationReport:
    """All partial alternating sums Σ_{j≤i} (−1)^{i−j}(μ_j − b_j) are non-negative.

    Checked for ``samples`` seeded orderings and for exact μ where affordable.
    """
    pair, cert = _as_pair(x)
    k = Field.parse(field)
    rep = VerificationReport(subject or (cert.name if cert else "pair"), "morse-inequalities")
    poset = isinstance(pair, RelativePosetPair)
    verts = list(pair.vertices) if poset else list(pair.labels)
    rep.quantities.update({"d": pair.dim, "n": len(verts), "field": str(k)})
    if pair.dim is None:
        rep.notes.append("void pair")
        return rep.finish()
    betti = _betti_unreduced(pair, k)
    rep.quantities["betti"] = betti
    worst = None
    violations = 0
    for idx in range(samples):
        perm = [verts[i] for i in sample_ordering(len(verts), seed, idx)]
        mu = (poset_mu_ordering if poset else mu_ordering)(pair, perm, k).mu
        for dft in _defects(mu, betti):
            if worst is None or dft < worst:
                worst = dft
            if dft < 0:
                violations += 1
    rep.check("sampled-orderings", VERIFIED if not violations else VIOLATED, worst,
              samples=samples, seed=seed, violations=violations)
    mu = _mu_upto(pair, k, pair.dim, budget, bag_limit, rep.notes)
    rep.quantities["mu"] = [_q(v) for v in mu]
    if len(mu) == pair.dim + 1:
        ds = _defects(mu, betti)
        rep.check("exact-mu", VERIFIED if min(ds) >= 0 else VIOLATED, min(ds))
    elif mu:
        ds = _defects(mu, betti)
        rep.check("exact-mu-partial", VERIFIED if min(ds) >= 0 else VIOLATED, min(ds),
                  degrees=len(mu))
    return rep.finish()


# ----------------------------------------------------------------------
# corpora


def default_config() -> dict:
    subjects: list[dict] = []
    for d in (3, 4, 5):
        subjects.append({"id": f"sphere-{d}", "kind": "sphere", "d": d})
    for d in (3, 4):
        for h in (0, 1, 2):
            for s in (3, 4, 5, 6):
                subjects.append({"id": f"stacked-d{d}-s{s}-h{h}", "kind": "stacked",
                                 "d": d, "stackings": s, "handles": h, "seed": 0})
    for n in range(6, 10):
        subjects.append({"id": f"cyclic-{n}", "kind": "cyclic", "n": n})
    subjects += [
        {"id": "torus-7", "kind": "torus"},
        {"id": "rp2-6", "kind": "rp2"},
        {"id": "cone-rp2", "kind": "cone-rp2"},
        {"id": "three-parallel-edges", "kind": "three-edges"},
        {"id": "torus-7-poset", "kind": "face-poset", "of": {"kind": "torus"}},
    ]
    for s in range(4):
        subjects.append({"id": f"random-poset-5-{s}", "kind": "random-poset", "n": 5, "seed": s})
    subjects.append({"id": "random-poset-6-0", "kind": "random-poset", "n": 6, "seed": 0})
    subjects.append({"id": "corrupted-stacked-d4", "kind": "corrupted-stacked",
                     "d": 4, "stackings": 3, "handles": 1, "seed": 0})
    return {
        "subjects": subjects,
        "field": "q",
        "samples": 50,
        "sd_samples": 20,
        "seed": 0,
        "budgets": {"link_vertices": DEFAULT_LINK_BUDGET, "tietze": DEFAULT_TIETZE_BUDGET,
                    "bag_limit": DEFAULT_GRAPH_BAG_LIMIT},
        "theorems": list(THEOREMS),
    }


SUBJECT_KINDS = ("sphere", "stacked", "cyclic", "torus", "rp2", "cone-rp2", "three-edges",
                 "face-poset", "random-poset", "corrupted-stacked", "file")


def build_subject(spec: dict):
    """Instantiate one corpus subject from its config entry."""
    from .complex import cone
    from .formats import load

    kind = spec.get("kind")
    if kind == "sphere":
        return simplex_boundary(int(spec["d"]))
    if kind == "stacked":
        return stacked_manifold(int(spec["d"]), int(spec.get("stackings", 0)),
                                int(spec.get("handles", 0)), int(spec.get("seed", 0)))
    if kind == "cyclic":
        return cyclic_boundary(int(spec["n"]))
    if kind == "torus":
        return csaszar_torus()
    if kind == "rp2":
        return projective_plane()
    if kind == "cone-rp2":
        c = cone("apex", projective_plane().complex)
        return CertifiedComplex(c, m=0, name="cone-rp2")
    if kind == "three-edges":
        return three_parallel_edges()
    if kind == "face-poset":
        inner = build_subject(spec["of"])
        return face_poset(inner.complex if isinstance(inner, CertifiedComplex) else inner)
    if kind == "random-poset":
        return random_simplicial_poset(int(spec["n"]), int(spec.get("seed", 0)),
                                       int(spec.get("max_rank", 3)), float(spec.get("density", 0.5)))
    if kind == "corrupted-stacked":
        cx = stacked_manifold(int(spec["d"]), int(spec.get("stackings", 0)),
                              int(spec.get("handles", 0)), int(spec.get("seed", 0)))
        c = cx.complex
        return SimplicialComplex.from_masks(c.labels, c.facets[1:])
    if kind == "file":
        return load(spec["path"])
    raise MalformedInputError(f"unknown subject kind {kind!r}")


def _applicable(obj) -> tuple[str, ...]:
    inner = obj.complex if isinstance(obj, CertifiedComplex) else obj
    if isinstance(inner, (SimplicialPoset, RelativePosetPair)):
        absolute = isinstance(inner, SimplicialPoset) or not inner.gamma
        return (("h2-lower-bound",) if absolute else ()) + \
            ("hi-lower-bounds", "sd-mu-invariance", "morse-inequalities")
    if isinstance(inner, RelativePair) and not inner.is_absolute:
        return ("hi-lower-bounds", "morse-inequalities")
    return ("g2-lower-bound", "h2-lower-bound", "hi-lower-bounds", "morse-inequalities")


def _run_subject(args) -> list[dict]:
    spec, config = args
    sid = spec.get("id") or spec.get("kind")
    k = Field.parse(config.get("field", "q"))
    samples = int(config.get("samples", 50))
    seed = int(config.get("seed", 0))
    budgets = config.get("budgets", {})
    link_budget = int(budgets.get("link_vertices", DEFAULT_LINK_BUDGET))
    tietze = int(budgets.get("tietze", DEFAULT_TIETZE_BUDGET))
    bag = int(budgets.get("bag_limit", DEFAULT_GRAPH_BAG_LIMIT))
    wanted = set(config.get("theorems", THEOREMS))
    obj = build_subject(spec)
    reports = []
    for th in _applicable(obj):
        if th not in wanted:
            continue
        if th == "g2-lower-bound":
            rep = verify_g2_bound(obj, k, samples, seed, sid, tietze, bag)
        elif th == "h2-lower-bound":
            rep = verify_h2_bound(obj, k, sid, tietze)
        elif th == "hi-lower-bounds":
            rep = verify_hi_bounds(obj, spec.get("r"), k, sid, link_budget, bag)
        elif th == "sd-mu-invariance":
            rep = verify_poset_sd(obj, k, int(config.get("sd_samples", 20)), seed, sid)
        else:
            rep = verify_morse(obj, k, samples, seed, sid, link_budget, bag)
        reports.append(rep.to_dict())
    return reports


@dataclass
class CorpusResult:
    reports: list

    @property
    def violated(self) -> bool:
        return any(r["outcome"] == VIOLATED for r in self.reports)

    @property
    def exit_code(self) -> int:
        return 1 if self.violated else 0

    def to_json(self) -> str:
        counts: dict[str, int] = {}
        for r in self.reports:
            counts[r["outcome"]] = counts.get(r["outcome"], 0) + 1
        return json.dumps({"reports": self.reports, "summary": counts}, indent=1, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.reports:
            rep = VerificationReport(r["subject"], r["theorem"], r["hypotheses"], r["quantities"],
                                     r["outcome"], r["slack"], r["notes"], r["checks"])
            w.writerow(rep.csv_row())
        return buf.getvalue()


def validate_config(config: Any) -> dict:
    if not isinstance(config, dict):
        raise MalformedInputError("config must be a JSON object")
    subjects = config.get("subjects")
    if not isinstance(subjects, list) or not subjects:
        raise MalformedInputError('config needs a non-empty "subjects" list')
    ids = []
    for s in subjects:
        if not isinstance(s, dict) or "kind" not in s:
            raise MalformedInputError(f"bad subject entry {s!r}")
        if s["kind"] not in SUBJECT_KINDS:
            raise MalformedInputError(f"unknown subject kind {s['kind']!r}")
        ids.append(s.get("id") or s["kind"])
    if len(set(ids)) != len(ids):
        raise MalformedInputError("subject ids must be unique")
    for th in config.get("theorems", THEOREMS):
        if th not in THEOREMS:
            raise MalformedInputError(f"unknown theorem {th!r}")
    Field.parse(config.get("field", "q"))
    return config


def corpus_run(config: dict | None = None, threads: int | None = None) -> CorpusResult:
    """Run every applicable verifier on every subject; report order follows the subject list."""
    config = validate_config(default_config() if config is None else config)
    jobs = [(s, config) for s in config["subjects"]]
    nthreads = thread_count(threads)
    if nthreads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=nthreads) as ex:
            results = list(ex.map(_run_subject, jobs))
    else:
        results = [_run_subject(j) for j in jobs]
    return CorpusResult([r for rs in results for r in rs])
