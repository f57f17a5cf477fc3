"""Acceptance gate: ``luroth verify --seed 7`` on the standard surface, run twice.

Each test prints one PASS/FAIL line.  The full run takes several minutes.
"""
import json
import subprocess
import sys

import pytest

SEED = "7"


def _verify(path):
    cmd = [sys.executable, "-m", "luroth.cli", "verify", "--seed", SEED, "--json", str(path)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode in (0, 1), proc.stderr
    return proc.returncode, json.loads(path.read_text())


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("verify")
    return [_verify(base / f"run{k}.json") for k in (1, 2)]


@pytest.fixture(scope="module")
def checks(runs):
    _, doc = runs[0]
    return {c["id"]: c for c in doc["checks"]}


def report(capsys, number, ok, text):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")


def test_criterion_1_hexahedral_structure(checks, capsys):
    surfaces = checks["1"]["details"]["surfaces"]
    ok = len(surfaces) >= 3 and all(
        s["exact_lines_on_surface"] and s["lines"] == 27 and s["max_line_residual"] < 1e-10
        and s["skew_degrees"] == [16] and s["meeting_degrees"] == [10] and s["double_sixes"] == 36
        and s["within_time_budget"] for s in surfaces)
    report(capsys, 1, ok and checks["1"]["passed"],
           f"{len(surfaces)} surfaces, worst line residual {max(s['max_line_residual'] for s in surfaces):.1e}")
    assert ok and checks["1"]["passed"]


def test_criterion_2_cremona_planes(checks, capsys):
    d = checks["2"]["details"]
    ok = (d["sigma_min_involutory_points"] < 1e-8 and d["max_residual_against_hexahedral_plane"] < 1e-8
          and d["planes"] == 36 and d["min_pairwise_plane_distance"] > 0 and d["planes_with_12_plus_15_pattern"] == 36)
    report(capsys, 2, ok and checks["2"]["passed"],
           f"sigma {d['sigma_min_involutory_points']:.1e}, {d['planes_with_12_plus_15_pattern']}/36 planes 12+15")
    assert ok and checks["2"]["passed"]


def test_criterion_3_off_six_points(checks, capsys):
    d = checks["3"]["details"]
    ok = (d["displayed_vertices_reproduced"] and d["displayed_point_reproduced"]
          and d["hexahedral_points_exactly_on_plane"] and d["other_double_sixes"] == 35
          and d["max_residual_other_double_sixes"] < 1e-8)
    report(capsys, 3, ok and checks["3"]["passed"],
           f"displayed points exact, other double-sixes within {d['max_residual_other_double_sixes']:.1e}")
    assert ok and checks["3"]["passed"]


def test_criterion_4_line_profiles(checks, capsys):
    lines = checks["4"]["details"]["lines"]
    ok = len(lines) >= 5 and all(
        l["pattern"] == {"1": 16, "2": 10} and l["involutory_distinct"]
        and l["lengths"] == {"involutory": 32, "non_involutory": 40, "total": 72} for l in lines)
    report(capsys, 4, ok and checks["4"]["passed"], f"lines {[l['line'] for l in lines]} have pattern 1^16 2^10")
    assert ok and checks["4"]["passed"]


def test_criterion_5_projection_dichotomy(checks, capsys):
    d = checks["5"]["details"]
    inv, non = d["involutory"], d["non_involutory"]
    on, off = d["cremona_plane_points"], d["off_plane_points"]
    parts = {
        "L1": len(inv) >= 5 and all(e.get("kind") == "L1" for e in inv),
        "L2": len(non) >= 5 and all(e.get("kind") == "L2" for e in non),
        "on-plane": len(on) >= 10 and all(e["smooth"] and e["fit_residual"] < 1e-8 for e in on),
        "off-plane": len(off) >= 10 and all(e["smooth"] and e["fit_residual"] > 1e-4 and e["starts"] >= 50
                                            for e in off),
    }
    ok = all(parts.values())
    low = sorted(e["fit_residual"] for e in off if e["fit_residual"] <= 1e-4)
    report(capsys, 5, ok and checks["5"]["passed"],
           ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in parts.items())
           + (f"; off-plane residuals at or below 1e-4: {low}" if low else ""))
    assert ok and checks["5"]["passed"]


def test_criterion_6_determinant_identity(checks, capsys):
    d = checks["6"]["details"]
    ok = d["trials"] >= 25 and d["identity_holds"] == d["trials"] and d["rank_at_concurrence"] == [2]
    report(capsys, 6, ok and checks["6"]["passed"], f"{d['identity_holds']}/{d['trials']} identities, rank 2")
    assert ok and checks["6"]["passed"]


def test_criterion_7_nets(checks, capsys):
    d = checks["7"]["details"]
    ok = (d["polar_nets"] >= 25 and d["pfaffian_zero"] == d["polar_nets"] == d["perturbed_nonzero"]
          and d["salmon_trials"] >= 50 and all(v == d["salmon_trials"] for v in d["salmon_passed"].values()))
    report(capsys, 7, ok and checks["7"]["passed"], f"pfaffian {d['pfaffian_zero']}/{d['polar_nets']}, "
           f"salmon {d['salmon_passed']}")
    assert ok and checks["7"]["passed"]


def test_criterion_8_moduli(checks, capsys):
    d = checks["8"]["details"]
    classes = d["classes"]
    ok = (classes["h_bar"] == {"lambda": "9", "delta0": "-1", "delta1": "-3"}
          and classes["D"] == {"lambda": "252", "delta0": "-27", "delta1": "-72"}
          and classes["L"] == {"lambda": "504", "delta0": "-54", "delta1": "-144"}
          and classes["Cat"] == {"lambda": "56", "delta0": "-6", "delta1": "-16"}
          and all(d["matches"].values()))
    report(capsys, 8, ok and checks["8"]["passed"], "h_bar, D, L = 2D and Cat match")
    assert ok and checks["8"]["passed"]


def test_criterion_9_determinism(runs, capsys):
    (code1, doc1), (code2, doc2) = runs
    ok = doc1 == doc2 and code1 == code2 and doc1["schema"] == 1
    report(capsys, 9, ok, "two runs with seed 7 give identical JSON")
    assert ok
