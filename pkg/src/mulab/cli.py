"""Command-line interface: ``mulab inspect|mu|pi1|gen|verify|corpus``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .complex import RelativePair, f_h_vectors
from .constructors import CertifiedComplex, cyclic_boundary, simplex_boundary, stacked_manifold
from .errors import ConstructionError, MalformedInputError, ResourceError
from .formats import format_facets, parse_facets, parse_poset
from .homology import Field, reduced_betti
from .musigma import mu_enumerated, mu_exact, mu_ordering, mu_sampled
from .pi1 import DEFAULT_TIETZE_BUDGET, edge_path_presentation, m_bracket, tietze_simplify
from .poset import (RelativePosetPair, poset_betti, poset_f_h, poset_mu_enumerated, poset_mu_exact,
                    poset_mu_ordering)
from .recognizers import is_buchsbaum, is_normal_pseudomanifold, is_pure, serre_condition
from .verify import (CorpusResult, VerificationReport, corpus_run, default_config, verify_g2_bound,
                     verify_h2_bound, verify_hi_bounds, verify_morse, verify_poset_sd)


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--field", default=d("q"), help="q or p:<prime> (default q)")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--samples", type=int, default=d(50))
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--budget-subsets", type=int, default=d(None),
                   help="largest vertex count for subset sums (default depends on the computation)")
    p.add_argument("--budget-tietze", type=int, default=d(DEFAULT_TIETZE_BUDGET))
    p.add_argument("--poset", action="store_true", default=d(False),
                   help="read the input file as poset JSON")


def _read(args):
    path = Path(args.input)
    text = path.read_text()
    if args.poset or path.suffix.lower() == ".json":
        return parse_poset(text)
    return parse_facets(text)


def _emit(obj, args, out=None) -> None:
    out = out or sys.stdout
    if args.format == "csv" and isinstance(obj, list) and obj and isinstance(obj[0], dict):
        import csv
        keys = list(obj[0])
        w = csv.DictWriter(out, fieldnames=keys, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for row in obj:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in row.items()})
        return
    out.write(json.dumps(obj, indent=1, sort_keys=True, default=str) + "\n")


# ----------------------------------------------------------------------


def cmd_inspect(args) -> int:
    x = _read(args)
    k = Field.parse(args.field)
    out: dict = {"field": str(k)}
    if isinstance(x, RelativePosetPair):
        f, h = poset_f_h(x)
        out.update({"kind": "poset", "vertices": len(x.vertices), "dim": x.dim,
                    "betti_reduced": list(poset_betti(x, k))})
    else:
        f, h = f_h_vectors(x)
        out.update({"kind": "complex" if x.is_absolute else "relative", "vertices": x.n, "dim": x.dim})
        if not x.is_void:
            out["betti_reduced"] = list(reduced_betti(x, k).reduced)
    out.update({"f": list(f.f), "h": list(h.h), "g2": h.g2})
    checks = {}
    for spec in args.check or []:
        for item in spec.split(","):
            item = item.strip()
            if item == "pure":
                checks[item] = is_pure(x).to_dict()
            elif item == "npm":
                if isinstance(x, RelativePosetPair) or not x.is_absolute:
                    raise MalformedInputError("npm needs an absolute simplicial complex")
                checks[item] = is_normal_pseudomanifold(x.delta, args.all_witnesses).to_dict()
            elif item.startswith("serre:"):
                r = int(item.split(":", 1)[1])
                checks[item] = serre_condition(x, r, k, args.all_witnesses).to_dict()
            elif item == "buchsbaum":
                checks[item] = is_buchsbaum(x, k, args.all_witnesses).to_dict()
            elif item:
                raise MalformedInputError(f"unknown check {item!r}")
    if checks:
        out["checks"] = checks
    _emit(out, args)
    return 0


def cmd_mu(args) -> int:
    x = _read(args)
    k = Field.parse(args.field)
    poset = isinstance(x, RelativePosetPair)
    if args.ordering:
        order = [s.strip() for s in args.ordering.split(",")]
        if not poset:
            lookup = {str(lab): lab for lab in x.labels}
            order = [lookup.get(s, s) for s in order]
        mu = (poset_mu_ordering if poset else mu_ordering)(x, order, k)
    elif args.method == "enumerated":
        mu = (poset_mu_enumerated if poset else mu_enumerated)(x, k)
    elif args.method == "sampled":
        if poset:
            raise MalformedInputError("sampling is implemented for complexes only")
        mu = mu_sampled(x, k, args.samples, args.seed)
    else:
        if poset:
            mu = poset_mu_exact(x, k, **({"budget": args.budget_subsets} if args.budget_subsets else {}),
                                upto=args.upto)
        else:
            mu = mu_exact(x, k, upto=args.upto, budget=args.budget_subsets)
    _emit(mu.to_dict(), args)
    return 0


def cmd_pi1(args) -> int:
    x = _read(args)
    c = x.delta if isinstance(x, RelativePair) else None
    if c is None:
        from .poset import barycentric_subdivision
        c = barycentric_subdivision(x.delta)
    try:
        primes = tuple(int(q) for q in args.primes.split(",") if q.strip())
    except ValueError:
        raise MalformedInputError(f"bad prime list {args.primes!r}") from None
    for q in primes:
        Field(q)
    budget = args.budget if args.budget is not None else args.budget_tietze
    pres = edge_path_presentation(c)
    res = tietze_simplify(pres, budget)
    br = m_bracket(c, primes, budget=budget)
    out = {"edge_path": {"generators": len(pres.generators), "relators": len(pres.relators)},
           "simplified": res.presentation.to_dict(), "moves": res.moves,
           "abelianization": list(res.presentation.abelian_invariants()),
           "bracket": br.to_dict()}
    _emit(out, args)
    return 0


def cmd_gen(args) -> int:
    if args.family == "stacked":
        cx = stacked_manifold(args.d, args.stackings, args.handles, args.seed)
    elif args.family == "cyclic":
        cx = cyclic_boundary(args.n)
    else:
        cx = simplex_boundary(args.d)
    text = format_facets(cx.complex)
    cert = cx.certificate()
    if args.output:
        out = Path(args.output)
        out.write_text(text)
        side = out.with_name(out.name + ".cert.json")
        side.write_text(json.dumps(cert, indent=1, sort_keys=True) + "\n")
        sys.stderr.write(f"wrote {out} and {side}\n")
    else:
        sys.stdout.write(text)
    return 0


def _certified(args, x):
    """Attach a certificate sidecar (written by ``gen``) when one sits next to the input."""
    side = Path(args.input + ".cert.json")
    if not isinstance(x, RelativePair) or not x.is_absolute or not side.exists():
        return x.delta if isinstance(x, RelativePair) and x.is_absolute else x
    data = json.loads(side.read_text())
    return CertifiedComplex(x.delta, m=data.get("m"), b1=data.get("b1", {}), g2=data.get("g2"),
                            name=data.get("name", ""), stacked=bool(data.get("stacked")))


def cmd_verify(args) -> int:
    x = _read(args)
    k = Field.parse(args.field)
    subj = args.subject or Path(args.input).stem
    obj = _certified(args, x)
    theorems = args.theorem or ["all"]
    if "all" in theorems:
        poset = isinstance(x, RelativePosetPair)
        relative = not poset and not x.is_absolute
        theorems = ["hi", "morse"] + ([] if relative else ["h2"]) + \
            (["sd"] if poset else []) + ([] if poset or relative else ["g2"])
    budget = {"budget": args.budget_subsets} if args.budget_subsets else {}
    reports: list[VerificationReport] = []
    for th in theorems:
        if th == "g2":
            reports.append(verify_g2_bound(obj, k, args.samples, args.seed, subj, args.budget_tietze))
        elif th == "h2":
            reports.append(verify_h2_bound(obj, k, subj, args.budget_tietze))
        elif th == "hi":
            reports.append(verify_hi_bounds(obj, args.r, k, subj, **budget))
        elif th == "sd":
            reports.append(verify_poset_sd(obj, k, args.samples, args.seed, subj))
        elif th == "morse":
            reports.append(verify_morse(obj, k, args.samples, args.seed, subj, **budget))
    res = CorpusResult([r.to_dict() for r in reports])
    sys.stdout.write(res.to_csv() if args.format == "csv" else res.to_json() + "\n")
    return res.exit_code


def cmd_corpus(args) -> int:
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"config is not JSON: {e}") from None
    else:
        config = default_config()
        config["field"] = args.field
        config["seed"] = args.seed
        config["samples"] = args.samples
        config["budgets"]["tietze"] = args.budget_tietze
        if args.budget_subsets:
            config["budgets"]["link_vertices"] = args.budget_subsets
    if args.print_default:
        _emit(default_config(), args)
        return 0
    res = corpus_run(config, threads=args.threads)
    if args.json:
        Path(args.json).write_text(res.to_json() + "\n")
    if args.csv:
        Path(args.csv).write_text(res.to_csv())
    if not args.json and not args.csv:
        sys.stdout.write(res.to_csv() if args.format == "csv" else res.to_json() + "\n")
    return res.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mulab", description=__doc__)
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    s = sub.add_parser("inspect", parents=[common], help="f/h-vectors, Betti numbers, hypothesis checks")
    s.add_argument("input")
    s.add_argument("--check", action="append", help="pure, npm, serre:<r>, buchsbaum (comma separated)")
    s.add_argument("--all-witnesses", action="store_true")
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("mu", parents=[common], help="μ-numbers")
    s.add_argument("input")
    s.add_argument("--method", choices=("exact", "enumerated", "sampled"), default="exact")
    s.add_argument("--ordering", help="comma-separated vertex labels; computes μ^ς")
    s.add_argument("--upto", type=int, help="highest degree for the exact method")
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("pi1", parents=[common], help="π₁ presentation and m-bracket")
    s.add_argument("input")
    s.add_argument("--primes", default="2,3,5,7,11", help="primes for the homology lower bound")
    s.add_argument("--budget", type=int, help="Tietze move budget (overrides --budget-tietze)")
    s.set_defaults(func=cmd_pi1)

    s = sub.add_parser("gen", parents=[common], help="generate a certified complex")
    s.add_argument("family", choices=("stacked", "cyclic", "simplex-boundary"))
    s.add_argument("-d", type=int, default=4, help="dimension (stacked, simplex-boundary)")
    s.add_argument("-n", type=int, default=8, help="vertex count (cyclic)")
    s.add_argument("--stackings", type=int, default=3)
    s.add_argument("--handles", type=int, default=0)
    s.add_argument("-o", "--output", help="facet file; a .cert.json sidecar is written next to it")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("verify", parents=[common], help="verify lower bounds on one input")
    s.add_argument("input")
    s.add_argument("--theorem", action="append", choices=("all", "g2", "h2", "hi", "sd", "morse"))
    s.add_argument("-r", type=int, help="Serre index for the h_i bounds (default: dimension)")
    s.add_argument("--subject", help="subject id in the report (default: file stem)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", parents=[common], help="run the verification corpus")
    s.add_argument("--config", help="JSON config (see `mulab corpus --print-default`)")
    s.add_argument("--json", help="write the JSON report here")
    s.add_argument("--csv", help="write the CSV summary here")
    s.add_argument("--threads", type=int, help="worker processes (default: MULAB_THREADS or 1)")
    s.add_argument("--print-default", action="store_true", help="print the default config and exit")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MalformedInputError, ConstructionError) as e:
        sys.stderr.write(f"mulab: error: {e}\n")
        return 2
    except ResourceError as e:
        sys.stderr.write(f"mulab: budget exceeded: {e}\n")
        return 3
    except FileNotFoundError as e:
        sys.stderr.write(f"mulab: error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
