"""Text formats: facet lists (optionally with [DELTA]/[GAMMA] sections) and poset JSON."""
from __future__ import annotations

import json
from pathlib import Path

from .complex import RelativePair, SimplicialComplex, build_complex
from .errors import MalformedInputError
from .poset import RelativePosetPair, SimplicialPoset, build_poset


def _facet_lines(lines) -> list[list[str]]:
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def parse_facets(text: str) -> RelativePair:
    """One facet per line, whitespace-separated labels, ``#`` comments.

    With ``[DELTA]`` and ``[GAMMA]`` section headers the file describes a
    relative pair; Γ must be a subcomplex of Δ.  A section containing only
    the line ``{}`` denotes ``{∅}``; an empty section is the void complex.
    """
    sections: dict[str, list[str]] = {}
    current = None
    plain: list[str] = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped.upper() in ("[DELTA]", "[GAMMA]"):
            current = stripped.upper()[1:-1]
            if current in sections:
                raise MalformedInputError(f"section [{current}] appears twice")
            sections[current] = []
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            raise MalformedInputError(f"unknown section {stripped}")
        (sections[current] if current else plain).append(raw)
    if sections and any(line.split("#", 1)[0].strip() for line in plain):
        raise MalformedInputError("facet lines before the first section header")
    if not sections:
        return RelativePair(_complex(plain))
    if "DELTA" not in sections:
        raise MalformedInputError("relative file needs a [DELTA] section")
    delta = _complex(sections["DELTA"])
    gamma = _complex(sections.get("GAMMA", []))
    return RelativePair(delta, gamma)


def _complex(lines) -> SimplicialComplex:
    facets = _facet_lines(lines)
    if facets == [["{}"]]:
        return SimplicialComplex.empty()
    return build_complex(facets)


def format_facets(p) -> str:
    """Inverse of :func:`parse_facets`."""
    if isinstance(p, SimplicialComplex):
        return _format_complex(p)
    if p.is_absolute:
        return _format_complex(p.delta)
    return "[DELTA]\n" + _format_complex(p.delta) + "[GAMMA]\n" + _format_complex(p.gamma)


def _format_complex(c: SimplicialComplex) -> str:
    if c.facets == (0,):
        return "{}\n"
    return "".join(" ".join(str(x) for x in f) + "\n" for f in c.facet_list())


def parse_poset(text: str) -> RelativePosetPair:
    """``{"faces": [{"id", "rank", "covers"}...], "gamma": [ids]}``; ``null`` in gamma is the minimal element."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"poset file is not JSON: {e}") from None
    if not isinstance(data, dict) or not isinstance(data.get("faces"), list):
        raise MalformedInputError('poset JSON needs a "faces" list')
    for rec in data["faces"]:
        if not isinstance(rec, dict) or "id" not in rec or "rank" not in rec:
            raise MalformedInputError(f"bad face record {rec!r}")
    poset = build_poset(data["faces"])
    gamma = data.get("gamma", [])
    if not isinstance(gamma, list):
        raise MalformedInputError('"gamma" must be a list of face ids')
    return RelativePosetPair(poset, [poset.root if g is None else g for g in gamma])


def format_poset(p) -> str:
    pair = p if isinstance(p, RelativePosetPair) else RelativePosetPair(p)
    faces = [{"id": f.id, "rank": f.rank, "covers": [c for c in f.covers if f.rank > 1]}
             for f in pair.delta.faces if f.rank > 0]
    out = {"faces": faces}
    if pair.gamma:
        root = pair.delta.root
        out["gamma"] = [None if g == root else g for g in
                        sorted(pair.gamma, key=pair.delta.pos.__getitem__)]
    return json.dumps(out, indent=1, sort_keys=True)


def load(path: str | Path):
    """Load a facet-list file, or a poset JSON file (``.json``)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_poset(text)
    return parse_facets(text)
