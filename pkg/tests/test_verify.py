from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import pytest

from mulab.constructors import (CertifiedComplex, csaszar_torus, cyclic_boundary, projective_plane,
                                simplex_boundary, stacked_manifold)
from mulab.errors import MalformedInputError
from mulab.poset import face_poset, three_parallel_edges
from mulab.verify import (CSV_COLUMNS, INCONCLUSIVE, NOT_APPLICABLE, VERIFIED, VIOLATED, build_subject,
                          corpus_run, default_config, validate_config, verify_g2_bound, verify_h2_bound,
                          verify_hi_bounds, verify_morse, verify_poset_sd)


def check_names(report):
    return {c["name"]: c for c in report.checks}


def test_stacked_d4_one_handle_attains_equality():
    r = verify_g2_bound(stacked_manifold(4, 5, 1))
    assert r.outcome == VERIFIED
    q = r.quantities
    assert q["g2"] == 15 and q["m_lb"] == q["m_ub"] == 1
    assert q["equality_mu_form"] and q["equality_m_form"]
    assert check_names(r)["stacked-equality"]["outcome"] == VERIFIED


def test_sphere_is_trivially_tight():
    r = verify_g2_bound(simplex_boundary(4))
    assert r.outcome == VERIFIED
    assert r.quantities["g2"] == 0 and r.quantities["m_ub"] == 0


def test_cyclic_nine_is_tight_in_mu_form_only():
    r = verify_g2_bound(cyclic_boundary(9))
    assert r.outcome == VERIFIED
    assert r.quantities["mu"] == ["1", "1"]
    assert r.quantities["equality_mu_form"] and not r.quantities["equality_m_form"]


def test_slack_is_non_negative_when_verified():
    r = verify_g2_bound(stacked_manifold(3, 4, 2))
    assert r.outcome == VERIFIED
    assert all(Fraction(s) >= 0 for s in r.slack.values())


def test_dimension_two_is_not_applicable():
    r = verify_g2_bound(csaszar_torus())
    assert r.outcome == NOT_APPLICABLE
    assert not r.hypotheses["dim>=3"]["holds"]


def test_wrong_certificate_is_reported_as_violation():
    bogus = CertifiedComplex(simplex_boundary(4).complex, m=3, name="bogus")
    assert verify_g2_bound(bogus).outcome == VIOLATED


def test_corrupted_subject_fails_hypotheses():
    r = verify_g2_bound(build_subject({"id": "c", "kind": "corrupted-stacked", "d": 4,
                                       "stackings": 3, "handles": 1, "seed": 0}))
    assert r.outcome == NOT_APPLICABLE
    assert not r.hypotheses["normal-pseudomanifold"]["holds"]


def test_h2_bound_on_torus_and_projective_plane():
    t = verify_h2_bound(csaszar_torus())
    assert t.outcome == VERIFIED and t.quantities["h2"] == 10 and t.quantities["m_ub"] == 2
    assert verify_h2_bound(projective_plane()).outcome == VERIFIED


def test_h2_bound_on_face_poset():
    assert verify_h2_bound(face_poset(csaszar_torus().complex)).outcome == VERIFIED


def test_three_parallel_edges_are_gated_out():
    assert verify_h2_bound(three_parallel_edges()).outcome == NOT_APPLICABLE


@pytest.mark.parametrize("d", [3, 4, 5])
def test_hi_bounds_on_simplex_boundaries(d):
    r = verify_hi_bounds(simplex_boundary(d))
    assert r.outcome == VERIFIED
    names = check_names(r)
    assert all(f"h{i}-bound" in names for i in range(d + 1))
    assert all(f"link-sum-identity-{i}" in names for i in range(1, d + 2))


def test_hi_bounds_on_cyclic_eight():
    assert verify_hi_bounds(cyclic_boundary(8), 3).outcome == VERIFIED


def test_hi_bounds_reject_out_of_range_r():
    with pytest.raises(MalformedInputError):
        verify_hi_bounds(cyclic_boundary(8), 4)


def test_hi_bounds_on_torus():
    assert verify_hi_bounds(csaszar_torus()).outcome == VERIFIED


def test_subdivision_check_on_posets():
    for p in (three_parallel_edges(), face_poset(projective_plane().complex)):
        assert verify_poset_sd(p, samples=5).outcome == VERIFIED


def test_morse_check():
    for cx in (csaszar_torus(), projective_plane(), cyclic_boundary(7)):
        assert verify_morse(cx, samples=10).outcome == VERIFIED


def test_report_serializes():
    r = verify_g2_bound(stacked_manifold(3, 3, 1))
    d = r.to_dict()
    json.dumps(d)
    assert set(r.csv_row()) == set(CSV_COLUMNS)


def small_config():
    cfg = default_config()
    keep = {"sphere-3", "torus-7", "three-parallel-edges", "stacked-d3-s3-h1", "random-poset-5-0"}
    cfg["subjects"] = [s for s in cfg["subjects"] if s["id"] in keep]
    cfg["samples"] = 5
    cfg["sd_samples"] = 3
    return cfg


def test_corpus_outputs_and_determinism():
    a = corpus_run(small_config())
    b = corpus_run(small_config())
    assert a.to_json() == b.to_json() and a.to_csv() == b.to_csv()
    assert a.exit_code == 0 and not a.violated
    rows = list(csv.DictReader(io.StringIO(a.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    outcomes = {r["outcome"] for r in rows}
    assert outcomes <= {VERIFIED, VIOLATED, INCONCLUSIVE, NOT_APPLICABLE}


def test_config_validation():
    cfg = small_config()
    cfg["theorems"] = ["nonsense"]
    with pytest.raises(MalformedInputError):
        validate_config(cfg)
    with pytest.raises(MalformedInputError):
        validate_config({"subjects": [{"id": "x", "kind": "unknown"}]})
