import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fusioncox import __version__
from fusioncox.cli import run
from fusioncox.fusion_ring import build_rep_s3, build_tensor_product, build_verlinde
from fusioncox.io import (
    builtin_graph,
    coxeter_from_dot,
    coxeter_to_dot,
    ring_from_dict,
    ring_to_dict,
)
from fusioncox.realisation import INF, CoxeterMatrix

DATA = Path(__file__).parent / "data"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def cli_json(*argv):
    code, out, err = cli(*argv)
    return code, json.loads(out) if out else None, err


# -- formats ------------------------------------------------------------------------

def test_ring_json_round_trip():
    ring = build_tensor_product(build_verlinde(4), build_rep_s3())
    d = ring_to_dict(ring)
    assert d["mult"] == sorted(d["mult"])
    assert ring_from_dict(json.loads(json.dumps(d))) == ring


def test_dot_round_trip_keeps_labels():
    cm = CoxeterMatrix.from_rows([[1, 0, 3], [0, 1, 5], [3, 5, 1]], ["(1,s)", "(V,s)", "a b"])
    text = coxeter_to_dot(cm)
    assert 'label="∞"' in text and 'label="5"' in text and 'label="3"' not in text
    back = coxeter_from_dot(text)
    assert back.entries == cm.entries and back.names == cm.names


@pytest.mark.parametrize("spec,rows", [
    ("i2:5", [[1, 5], [5, 1]]),
    ("i2:inf", [[1, 0], [0, 1]]),
    ("a:3", [[1, 3, 2], [3, 1, 3], [2, 3, 1]]),
    ("affine-a:1", [[1, 0], [0, 1]]),
    ("affine-a:2", [[1, 3, 3], [3, 1, 3], [3, 3, 1]]),
    ("h:3", [[1, 5, 2], [5, 1, 3], [2, 3, 1]]),
])
def test_builtin_graphs(spec, rows):
    assert builtin_graph(spec).to_rows() == rows


# -- verbs ----------------------------------------------------------------------------

def test_ring_validate_ok_and_broken():
    code, rep, _ = cli_json("ring", "validate", DATA / "rep_s3.json")
    assert code == 0 and rep["result"]["ok"]
    code, rep, _ = cli_json("ring", "validate", DATA / "broken_ring.json")
    assert code == 2
    assert "unit-pairing" in {v["axiom"] for v in rep["result"]["violations"]}


def test_ring_reader_rejects_negative_coefficients():
    code, out, err = cli("ring", "validate", DATA / "negative_ring.json")
    assert code == 1 and out == "" and "negative" in err


def test_ring_show_lists_fpdims():
    code, rep, _ = cli_json("ring", "show", DATA / "rep_s3.json")
    assert code == 0
    assert rep["result"]["fpdim"]["V"] == pytest.approx(2.0)
    assert rep["result"]["products"]["V*V"] == "1 + V + sgn"


def test_report_header():
    code, rep, _ = cli_json("--tolerance", "1e-8", "roots", "--builtin", "i2:5")
    assert rep["schema"] == 1 and rep["version"] == __version__
    assert rep["command"] == "roots"
    assert rep["flags"]["tolerance"] == 1e-8
    assert rep["flags"]["builtin"] == "i2:5" and rep["flags"]["variant"] == "standard"


def test_tolerance_environment_and_override(monkeypatch):
    monkeypatch.setenv("FUSIONCOX_TOLERANCE", "1e-7")
    _, rep, _ = cli_json("roots", "--builtin", "a:2")
    assert rep["flags"]["tolerance"] == 1e-7
    _, rep, _ = cli_json("--tolerance", "1e-10", "roots", "--builtin", "a:2")
    assert rep["flags"]["tolerance"] == 1e-10
    monkeypatch.setenv("FUSIONCOX_TOLERANCE", "tiny")
    assert cli("roots", "--builtin", "a:2")[0] == 1


def test_realise_build_and_check():
    code, rep, _ = cli_json("realise", "build", "--builtin", "i2:5", "--variant", "even")
    assert code == 0
    assert rep["result"]["cartan"] == [[[2, 0], [0, -1]], [[0, -1], [2, 0]]]
    code, rep, _ = cli_json("realise", "check", DATA / "pentagon.json")
    assert code == 0 and rep["result"]["relations"]["ok"]
    code, rep, _ = cli_json("realise", "check", "--builtin", "i2:7", "--relation-cap", "6")
    assert code == 3 and not rep["result"]["relations"]["complete"]


def test_realise_check_graph_files():
    assert cli("realise", "check", DATA / "h3.json", "--variant", "even")[0] == 0
    assert cli("realise", "check", DATA / "a4.dot")[0] == 0


def test_unfold_graph_dot_is_a4_path():
    code, out, _ = cli("unfold", "graph", "--builtin", "i2:5", "--variant", "even", "--format", "dot")
    assert code == 0
    g = coxeter_from_dot(out)
    assert g.rank == 4
    edges = sorted(tuple(sorted((g.names[a], g.names[b]))) for a in range(4) for b in range(a + 1, 4)
                   if g.label(a, b) != 2)
    assert edges == [("(1,s)", "(D2(5),t)"), ("(1,t)", "(D2(5),s)"), ("(D2(5),s)", "(D2(5),t)")]


def test_unfold_graph_json_and_cartan():
    code, rep, _ = cli_json("unfold", "graph", DATA / "rep_s3_affine.json")
    assert code == 0 and len(rep["result"]["edges"]) == 5
    code, rep, _ = cli_json("unfold", "cartan", DATA / "rep_s3_affine.json")
    assert code == 0 and rep["result"]["symmetric"]
    assert len(rep["result"]["cartan"]) == 6


def test_unfold_phi_word_image():
    code, rep, _ = cli_json("unfold", "phi", DATA / "rep_s3_affine.json", "--word", "s,t")
    assert code == 0
    assert rep["result"]["phi"]["s"] == ["(1,s)", "(V,s)", "(sgn,s)"]
    assert rep["result"]["image"][3:] == ["(1,t)", "(V,t)", "(sgn,t)"]
    assert rep["result"]["psi_check"]["ok"]
    assert cli("unfold", "phi", DATA / "rep_s3_affine.json", "--word", "q")[0] == 1


def test_roots_folded_and_truncated():
    code, rep, _ = cli_json("roots", "--builtin", "i2:5", "--variant", "even")
    assert code == 0 and rep["result"]["count"] == 5
    code, rep, _ = cli_json("roots", "--builtin", "affine-a:1", "--variant", "infty_S3",
                            "--system", "unfolded", "--depth", "3")
    assert code == 3 and not rep["result"]["complete"]
    assert rep["result"]["classification"] == "affine"


def test_hyperplanes_verify_pentagon():
    code, rep, _ = cli_json("hyperplanes", "verify", "--builtin", "i2:5", "--variant", "even")
    assert code == 0
    r = rep["result"]
    assert (r["folded"], r["unfolded"], r["fibers"]) == (5, 10, [2, 2, 2, 2, 2])


def test_hyperplanes_verify_infinite_is_inconclusive():
    code, rep, _ = cli_json("hyperplanes", "verify", DATA / "rep_s3_affine.json")
    assert code == 3 and rep["result"]["status"] == "not-applicable"


def test_hyperplanes_restrict():
    code, rep, _ = cli_json("hyperplanes", "restrict", DATA / "rep_s3_affine.json", "--root", "1,1,0,0,1,1")
    assert code == 0
    assert rep["result"]["restricted"] == pytest.approx([2 ** -0.5, 2 ** -0.5])
    code, rep, _ = cli_json("hyperplanes", "restrict", "--builtin", "i2:5", "--variant", "even")
    assert code == 0 and len(rep["result"]["restrictions"]) == 10


def test_orbit_outcomes():
    code, rep, _ = cli_json("orbit", DATA / "rep_s3_affine.json", "--root", "1,1,0,0,1,1",
                            "--length-bound", "8")
    assert code == 3
    assert rep["result"]["meets"]["outcome"] == "not-up-to-bound"
    code, rep, _ = cli_json("orbit", "--builtin", "i2:5", "--functional", "1,0", "--length-bound", "3")
    assert code == 0 and rep["result"]["meets"]["outcome"] == "yes"
    assert cli("orbit", "--builtin", "i2:5", "--length-bound", "13")[0] == 1


def test_fold_check_files():
    for graph in ("a4.dot", "a4.json"):
        code, rep, _ = cli_json("fold", "check", DATA / graph, DATA / "a4_partition.json")
        assert code == 0 and rep["result"]["folded"] == [[1, 5], [5, 1]]
    code, rep, _ = cli_json("fold", "check", DATA / "a4.dot", DATA / "a4_bad_partition.json")
    assert code == 2 and rep["result"]["failure"]["condition"] == "fiber-independent"


def test_fold_check_unfolding():
    code, rep, _ = cli_json("fold", "check", "--builtin", "h:3", "--variant", "even")
    assert code == 0 and rep["result"]["matches_source"]
    code, rep, _ = cli_json("fold", "check", "--realisation", DATA / "rep_s3_affine.json")
    assert code == 0


def test_usage_and_io_errors():
    assert cli("frobnicate")[0] == 1
    assert cli("roots", "--no-such-flag")[0] == 1
    assert cli("ring", "validate", DATA / "missing.json")[0] == 1
    assert cli("roots")[0] == 1
    assert cli("roots", "--builtin", "q:3")[0] == 1


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fusioncox.cli", "roots", "--builtin", "a:3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["count"] == 6
