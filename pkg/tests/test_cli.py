import subprocess
import sys
from pathlib import Path

import pytest

from matcons.cli import emit_report, main, run

ROOT = Path(__file__).resolve().parents[1]


def tsv(argv):
    status, text = run(list(argv) + ["--format", "tsv"])
    records = [line.split("\t", 1) for line in text.splitlines()]
    assert all(len(r) == 2 for r in records)
    return status, dict(records), text


def test_modus_ponens_exit_zero():
    status, rec, _ = tsv(["check", "--use", "CL2", "--premises", "p,(imp p q)", "--conclusion", "q"])
    assert status == 0 and rec["entails"] == "true"


def test_failed_entailment_prints_countermodel():
    status, rec, _ = tsv(["check", "--use", "L3", "--conclusion", "(or p (neg p))"])
    assert status == 1 and rec["entails"] == "false"
    assert rec["countermodel.valuation"] == "p=1"


def test_uniformity_witness():
    status, rec, _ = tsv(["uniformity", "--use", "NU", "--vars", "p,q", "--depth", "1"])
    assert status == 1
    assert (rec["witness.X"], rec["witness.Y"], rec["witness.alpha"]) == ("{}", "{q}", "(imp p p)")
    assert rec["witness.revalidated"] == "true"
    assert rec["budget.seed"] == "0" and "stats.candidates" in rec


def test_semantic_uniformity():
    status, rec, _ = tsv(["uniformity", "--mode", "semantic", "--use", "NU"])
    assert status == 1 and rec["check"] == "uniform-bundle"
    assert rec["witness.revalidated"] == "true"
    status, _, _ = tsv(["uniformity", "--mode", "semantic", "--use", "CL2"])
    assert status == 0


def test_semantic_uniformity_needs_bundle():
    assert main(["uniformity", "--mode", "semantic", "--use", "CL2,L3"]) == 2


@pytest.mark.parametrize("mode", ["syntactic", "semantic"])
def test_couniformity_witness(mode):
    status, rec, _ = tsv(["couniformity", "--mode", mode, "--use", "FG1,FG2"])
    assert status == 1
    assert rec["witness.X_1"] == "{(f p)}" and rec["witness.X_2"] == "{(g q)}"
    assert rec["witness.revalidated"] == "true"


def test_no_counterexample_record():
    status, rec, _ = tsv(["couniformity", "--use", "CL2", "--samples", "500"])
    assert status == 0 and rec["outcome"] == "no-counterexample"
    assert "stats.candidates" in rec and "witness.X_1" not in rec


def test_product():
    status, rec, _ = tsv(["product", "--use", "CL2,L3"])
    assert status == 0 and rec["carrier"] == "6" and rec["filter_sizes"] == "3,2"


def test_sigma_and_theories():
    status, rec, _ = tsv(["sigma", "--use", "L3", "--vars", "p", "--depth", "1"])
    assert status == 0 and rec["member.0.properly_extendable"] == "true"
    status, rec, _ = tsv(["theories", "--use", "CL2", "--vars", "p", "--depth", "1"])
    assert status == 0 and int(rec["theories"]) >= 1
    _, brute, _ = tsv(["theories", "--use", "CL2", "--vars", "p", "--depth", "1", "--method", "brute"])
    assert brute["theories"] == rec["theories"]


def test_single_matrix():
    status, rec, _ = tsv(["single-matrix", "--use", "CL2", "--samples", "500"])
    assert status == 0 and rec["classification"].startswith("consistent")
    status, rec, _ = tsv(["single-matrix", "--use", "NU", "--samples", "500"])
    assert status == 1 and rec["uniform-syntactic.outcome"] == "counterexample"


def test_wojcicki():
    status, rec, _ = tsv(["wojcicki", "--extend", "r1,r2", "--premises", "r1,(imp r1 r2)",
                          "--conclusion", "r2"])
    assert status == 0 and rec["found"] == "true" and rec["witness.revalidated"] == "true"
    assert rec["witness.beta"] == "q"
    status, rec, _ = tsv(["wojcicki", "--extend", "r1", "--conclusion", "r1"])
    assert status == 1 and rec["lifted_entails"] == "false"


def test_conservativity():
    status, rec, _ = tsv(["conservativity", "--extend", "r1", "--vars", "p", "--depth", "1"])
    assert status == 0 and rec["stats.candidates"] == "80"


def test_matrix_file(tmp_path):
    f = tmp_path / "m.mat"
    f.write_text("signature neg/1 imp/2\nalgebra B carrier 2\nop B neg 0:1 1:0\n"
                 "op B imp 0,0:1 0,1:1 1,0:0 1,1:1\natlas NU algebra B filters {1};{}\n")
    status, rec, _ = tsv(["uniformity", "--matrices", str(f), "--use", "NU"])
    assert status == 1 and rec["witness.alpha"] == "(imp p p)"


@pytest.mark.parametrize("argv", [
    ["check", "--conclusion", "(neg p q)"],
    ["check", "--use", "NOPE", "--conclusion", "p"],
    ["check", "--matrices", "/nonexistent/file", "--conclusion", "p"],
    ["theories", "--vars", "p,q,r,s", "--depth", "2"],
    ["bogus"],
    ["check"],
])
def test_usage_and_resource_errors_exit_two(argv, capsys):
    assert main(argv) == 2


def test_emit_report_formats():
    recs = [("outcome", "no-counterexample"), ("stats.candidates", "3")]
    assert emit_report(recs, "tsv") == "outcome\tno-counterexample\nstats.candidates\t3\n"
    assert emit_report(recs, "text").splitlines()[0] == "outcome           no-counterexample"


def test_byte_identical_reruns():
    argv = [sys.executable, "-m", "matcons.cli", "uniformity", "--use", "L3", "--vars", "p,q,r",
            "--depth", "1", "--samples", "800", "--seed", "5", "--format", "tsv"]
    a = subprocess.run(argv, capture_output=True, cwd=ROOT)
    b = subprocess.run(argv, capture_output=True, cwd=ROOT)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_reports_do_not_depend_on_backend():
    import os
    argv = [sys.executable, "-m", "matcons.cli", "single-matrix", "--use", "L3", "--vars", "p,q",
            "--samples", "1500", "--seed", "2", "--format", "tsv"]
    compiled = subprocess.run(argv, capture_output=True, cwd=ROOT)
    pure = subprocess.run(argv, capture_output=True, cwd=ROOT,
                          env=dict(os.environ, MATCONS_PURE="1"))
    assert compiled.stdout == pure.stdout and compiled.returncode == pure.returncode
