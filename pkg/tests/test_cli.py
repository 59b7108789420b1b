import subprocess
import sys

import pytest

from signedblock.cli import check, main
from signedblock.graphcore import read_edgelist, write_edgelist
from signedblock.models import BisectionSpec
from signedblock.sampler import Seed, sample, sample_bisection

from conftest import homogeneous


@pytest.fixture
def sparse_graph(tmp_path):
    out = tmp_path / "g.edges"
    argv = ["sample", "--k", "50", "--gamma1", "10", "--gamma2", "1", "--s", "0.1",
            "--setting", "sparse", "--seed", "7", "--out", str(out)]
    assert main(argv) == 0
    return out, argv


class TestSample:
    def test_writes_edge_list(self, sparse_graph):
        out, _ = sparse_graph
        text = out.read_text()
        assert "# seed=7" in text and "# setting=sparse" in text
        g = read_edgelist(out)
        spec = BisectionSpec.sparse(50, 10, 1, 0.1)
        assert g == sample_bisection(spec, Seed(7))[0]

    def test_byte_identical_rerun(self, sparse_graph):
        out, argv = sparse_graph
        first = out.read_bytes()
        out.unlink()
        assert main(argv) == 0
        assert out.read_bytes() == first

    def test_explicit_probabilities(self, tmp_path):
        out = tmp_path / "g.edges"
        assert main(["sample", "--k", "5", "--p", "0.5", "--q", "0.2", "--s", "0.1", "--seed", "1", "--out", str(out)]) == 0
        assert read_edgelist(out) == sample_bisection(BisectionSpec(5, 0.5, 0.2, 0.1), Seed(1))[0]

    @pytest.mark.parametrize(
        "extra",
        [
            ["--setting", "dense", "--gamma1", "10", "--gamma2", "1"],  # p = 10/sqrt(50) > 1
            ["--setting", "sparse", "--gamma1", "10"],  # gamma2 missing
            ["--setting", "sparse", "--gamma1", "10", "--gamma2", "1", "--bogus", "1"],
        ],
    )
    def test_validation_exit_1(self, tmp_path, extra):
        argv = ["sample", "--k", "50", "--s", "0.1", "--seed", "7", "--out", str(tmp_path / "x")] + extra
        assert main(argv) == 1

    def test_seed_required(self, tmp_path):
        argv = ["sample", "--k", "50", "--s", "0.1", "--setting", "sparse", "--gamma1", "10",
                "--gamma2", "1", "--out", str(tmp_path / "x")]
        assert main(argv) == 1

    def test_unwritable_output_exit_2(self, tmp_path):
        argv = ["sample", "--k", "5", "--p", "0.5", "--q", "0.2", "--s", "0.1", "--seed", "1",
                "--out", str(tmp_path / "missing" / "g.edges")]
        assert main(argv) == 2


class TestConfigFile:
    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# defaults\nk=50\ngamma1=10\ngamma2=1\ns=0.3\nsetting=sparse\nseed=7\n")
        out = tmp_path / "g.edges"
        assert main(["sample", "--config", str(cfg), "--s", "0.1", "--out", str(out)]) == 0
        text = out.read_text()
        assert "# s=0.1" in text and "# k=50" in text
        assert read_edgelist(out) == sample_bisection(BisectionSpec.sparse(50, 10, 1, 0.1), Seed(7))[0]

    @pytest.mark.parametrize("body", ["k=abc\n", "colour=blue\n", "no equals sign\n", "setting=medium\n"])
    def test_bad_file(self, tmp_path, body):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(body)
        assert main(["sample", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1

    def test_missing_file_exit_2(self, tmp_path):
        assert main(["sample", "--config", str(tmp_path / "nope.cfg")]) == 2


class TestSpectrumAndDetect:
    def test_spectrum(self, sparse_graph, tmp_path):
        out, _ = sparse_graph
        spec_out = tmp_path / "spec.csv"
        assert main(["spectrum", "--in", str(out), "--matrix", "adjacency", "--out", str(spec_out)]) == 0
        rows = [l for l in spec_out.read_text().splitlines() if not l.startswith("#")]
        assert rows[0] == "index,eigenvalue" and len(rows) == 101
        vals = [float(r.split(",")[1]) for r in rows[1:]]
        assert vals == sorted(vals)

    def test_detect(self, sparse_graph, tmp_path):
        out, _ = sparse_graph
        labels = tmp_path / "labels.csv"
        assert main(["detect", "--in", str(out), "--out", str(labels)]) == 0
        lines = labels.read_text().splitlines()
        assert any(l.startswith("# lambda1=") for l in lines)
        body = [l for l in lines if not l.startswith("#")]
        assert [int(l.split(",")[0]) for l in body] == list(range(100))
        assert {l.split(",")[1] for l in body} <= {"1", "-1"}

    def test_detect_refuses_degenerate(self, tmp_path):
        # two disjoint positive edges: lambda1 = 0 twice
        path = tmp_path / "g.edges"
        path.write_text("n=4\n0,1,1\n2,3,1\n")
        assert main(["detect", "--in", str(path), "--out", str(tmp_path / "l.csv")]) == 1
        assert main(["detect", "--in", str(path), "--out", str(tmp_path / "l.csv"), "--allow-degenerate"]) == 0

    def test_malformed_input_exit_1(self, tmp_path, capsys):
        path = tmp_path / "g.edges"
        path.write_text("n=3\n0,1,1\n0,1\n")
        assert main(["detect", "--in", str(path), "--out", str(tmp_path / "l.csv")]) == 1
        assert "line 3" in capsys.readouterr().err

    def test_missing_input_exit_2(self, tmp_path):
        assert main(["detect", "--in", str(tmp_path / "none"), "--out", str(tmp_path / "l.csv")]) == 2


class TestCheck:
    def test_balanced_k4(self, tmp_path, balanced_k4, capsys):
        path = tmp_path / "k4.edges"
        write_edgelist(path, balanced_k4)
        assert check(["--in", str(path)]) == 0
        out = capsys.readouterr().out
        assert "eta2(sigma)=0" in out and "FAIL" not in out

    def test_triangle(self, tmp_path, triangle_one_negative, capsys):
        path = tmp_path / "tri.edges"
        write_edgelist(path, triangle_one_negative)
        # both eta2 inequalities hold; the eta1 lower side 1/2 <= 1/3 does not
        assert check(["--in", str(path), "--oracle", "eta2"]) == 0
        assert check(["--in", str(path)]) == 1
        out = capsys.readouterr().out
        assert "eta1 deletions=1 balanced=no" in out
        assert "[FAIL] lambda1(Laplacian)/2" in out

    def test_size_refusal(self, tmp_path, capsys):
        path = tmp_path / "big.edges"
        write_edgelist(path, sample(*homogeneous(30, 0.3, 0.2), Seed(1)))
        assert check(["--in", str(path), "--oracle", "eta1"]) == 1
        assert "refused" in capsys.readouterr().err


class TestExperiment:
    def test_experiment_and_summarize(self, tmp_path):
        res = tmp_path / "results.csv"
        argv = ["experiment", "--setting", "sparse", "--k", "50,60", "--trials", "2", "--gamma1", "10",
                "--gamma2", "1", "--s", "0.1", "--seed", "42", "--out", str(res)]
        assert main(argv) == 0
        first = res.read_bytes()
        assert main(argv + ["--jobs", "2"]) == 0
        assert res.read_bytes() == first
        body = [l for l in first.decode().splitlines() if not l.startswith("#")]
        assert len(body) == 5
        summ = tmp_path / "summary.csv"
        assert main(["summarize", "--in", str(res), "--out", str(summ)]) == 0
        body = [l for l in summ.read_text().splitlines() if not l.startswith("#")]
        assert body[0].startswith("setting,k,s,trials,lambda1_mean") and len(body) == 3

    def test_cap_refusal(self, tmp_path):
        argv = ["experiment", "--setting", "dense", "--k", "3000", "--trials", "1", "--seed", "1",
                "--out", str(tmp_path / "r.csv")]
        assert main(argv) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "signedblock", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "experiment" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "signedblock", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 1
