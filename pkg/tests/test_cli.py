import subprocess
import sys

import numpy as np
import pytest

from mobcover import EmbeddingSet, read_selection, write_mobe
from mobcover.cli import mean_relative_slope


def run_cli(*args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "mobcover.cli", *args],
        capture_output=True,
        text=True,
        **kw,
    )


@pytest.fixture
def pair(tmp_path):
    rng = np.random.default_rng(101)
    v_path = tmp_path / "v.mobe"
    p_path = tmp_path / "p.mobe"
    write_mobe(EmbeddingSet(rng.normal(size=(30, 6))), "f64", v_path)
    write_mobe(EmbeddingSet(rng.normal(size=(4, 6))), "f64", p_path)
    return str(v_path), str(p_path)


class TestPrune:
    def test_manual_budget(self, pair, tmp_path):
        v, p = pair
        out = tmp_path / "sel.json"
        proc = run_cli("prune", "--visual", v, "--prompt", p, "--budget", "10",
                       "--kp", "4", "--fold", "2", "--out", str(out))
        assert proc.returncode == 0
        assert "eta=" in proc.stdout
        sel = read_selection(out)
        assert len(sel.retained) == 10

    def test_budget_equals_population(self, pair, tmp_path):
        v, p = pair
        out = tmp_path / "sel.json"
        proc = run_cli("prune", "--visual", v, "--prompt", p, "--budget", "30",
                       "--kp", "4", "--fold", "2", "--out", str(out))
        assert proc.returncode == 0
        sel = read_selection(out)
        assert sorted(sel.retained) == list(range(30))
        assert sel.eps_v == 0.0

    def test_prior_echoes_derived_budgets(self, pair, tmp_path):
        v, p = pair
        proc = run_cli("prune", "--visual", v, "--prompt", p, "--budget", "64",
                       "--eta-prior", "weak", "--tier", "high",
                       "--out", str(tmp_path / "s.json"))
        assert proc.returncode == 0
        assert "K_p=32 k=4" in proc.stdout

    def test_missing_prompt_usage_error(self, pair, tmp_path):
        v, _ = pair
        proc = run_cli("prune", "--visual", v, "--budget", "8",
                       "--kp", "2", "--fold", "1", "--out", str(tmp_path / "s.json"))
        assert proc.returncode == 2
        assert proc.stderr

    def test_conflicting_modes(self, pair, tmp_path):
        v, p = pair
        proc = run_cli("prune", "--visual", v, "--prompt", p, "--budget", "8",
                       "--kp", "2", "--fold", "1", "--eta-prior", "weak",
                       "--tier", "low", "--out", str(tmp_path / "s.json"))
        assert proc.returncode == 2

    def test_missing_input_is_io_error(self, tmp_path):
        proc = run_cli("prune", "--visual", str(tmp_path / "none.mobe"),
                       "--prompt", str(tmp_path / "none2.mobe"), "--budget", "4",
                       "--kp", "1", "--fold", "1", "--out", str(tmp_path / "s.json"))
        assert proc.returncode == 3


class TestCoupling:
    def test_reports_and_classifies(self, pair):
        v, p = pair
        proc = run_cli("coupling", "--visual", v, "--prompt", p, "--tau", "0.7")
        assert proc.returncode == 0
        lines = dict(ln.split("=", 1) for ln in proc.stdout.strip().splitlines())
        assert float(lines["eta"]) >= 0
        assert lines["classification"] in ("strong", "weak")

    def test_unclassified_without_tau(self, pair):
        v, p = pair
        proc = run_cli("coupling", "--visual", v, "--prompt", p)
        assert "classification=unclassified" in proc.stdout


class TestCalibrate:
    def test_threshold_from_file(self, tmp_path):
        path = tmp_path / "etas.txt"
        path.write_text("0.1\n0.12\n0.9\n0.92\n", encoding="utf-8")
        proc = run_cli("calibrate", "--etas", str(path))
        assert proc.returncode == 0
        assert "tau=0.50999999999999995" in proc.stdout or "tau=0.51" in proc.stdout

    def test_degenerate_sample(self, tmp_path):
        path = tmp_path / "etas.txt"
        path.write_text("1\n1\n1\n1\n", encoding="utf-8")
        proc = run_cli("calibrate", "--etas", str(path))
        assert proc.returncode == 2


class TestGenFitDim:
    def test_gen_then_fit(self, tmp_path):
        v_path = str(tmp_path / "v.mobe")
        p_path = str(tmp_path / "p.mobe")
        proc = run_cli("gen", "--manifold", "circle", "--nv", "256", "--np", "16",
                       "--dim", "8", "--eta", "0.8", "--seed", "3",
                       "--out-visual", v_path, "--out-prompt", p_path)
        assert proc.returncode == 0
        assert "measured_eta=" in proc.stdout
        fit = run_cli("fit-dim", "--input", v_path)
        assert fit.returncode == 0
        d_eff = float(dict(
            ln.split("=", 1) for ln in fit.stdout.strip().splitlines() if "=" in ln
        )["d_eff_hat"])
        assert 0.8 <= d_eff <= 1.2

    def test_infeasible_eta_exit_code(self, tmp_path):
        proc = run_cli("gen", "--manifold", "grid2d", "--nv", "400", "--np", "3",
                       "--dim", "8", "--eta", "0.001", "--seed", "1",
                       "--out-visual", str(tmp_path / "v.mobe"),
                       "--out-prompt", str(tmp_path / "p.mobe"))
        assert proc.returncode == 2


class TestSweep:
    def test_csv_structure_and_monotone_eps_v(self, pair, tmp_path):
        import csv

        v, p = pair
        out = tmp_path / "sweep.csv"
        proc = run_cli("sweep", "--input", f"{v}:{p}", "--budgets", "8,16",
                       "--kp", "2,4", "--folds", "2", "--out", str(out))
        assert proc.returncode == 0
        lines = out.read_text().splitlines()
        main = [ln for ln in lines if not ln.startswith("#")]
        rows = list(csv.reader(main[: lines.index("# summary")]))
        header = rows[0]
        assert header[:5] == ["input", "K", "K_p", "k", "seed"]
        col = {name: i for i, name in enumerate(header)}
        data = rows[1:]
        # eps_v non-increasing in K_v at fixed K_p within each K block
        for kp in ("2", "4"):
            block = [r for r in data if r[col["K_p"]] == kp]
            block.sort(key=lambda r: int(r[col["K"]]))
            eps = [float(r[col["eps_v"]]) for r in block]
            assert all(b <= a + 1e-12 for a, b in zip(eps, eps[1:]))
        assert any(ln == "# summary" for ln in lines)

    def test_constants_emit_floor_and_bound_columns(self, tmp_path):
        import csv

        out = tmp_path / "sweep.csv"
        proc = run_cli(
            "sweep", "--gen", "grid2d:nv=144,np=16,dim=8,eta=8.0,seed=2",
            "--budgets", "12,24,48", "--kp", "3,6", "--folds", "2",
            "--constants", "a=0.09,b=0.7,a_prime=0.5,b_prime=0.9,d_eff=1.6,z=2.0,C=1",
            "--out", str(out),
        )
        assert proc.returncode == 0
        lines = out.read_text().splitlines()
        rows = list(csv.reader(lines[: lines.index("# summary")]))
        col = {name: i for i, name in enumerate(rows[0])}
        data = rows[1:]
        assert data
        for r in data:
            floor = float(r[col["floor"]])
            bound = float(r[col["bound"]])
            product = float(r[col["product"]])
            assert floor > 0 and bound > 0
            assert product >= 0.9 * floor
        # visual radius non-increasing as K_v grows at fixed K_p
        for kp in ("3", "6"):
            block = [r for r in data if r[col["K_p"]] == kp]
            block.sort(key=lambda r: int(r[col["K"]]))
            eps = [float(r[col["eps_v"]]) for r in block]
            assert len(eps) == 3
            assert all(b <= a + 1e-12 for a, b in zip(eps, eps[1:]))

    def test_rejects_grid_pair_with_kp_over_k(self, pair):
        v, p = pair
        proc = run_cli("sweep", "--input", f"{v}:{p}", "--budgets", "8",
                       "--kp", "12", "--folds", "1")
        assert proc.returncode == 2
        assert "exceeds" in proc.stderr

    def test_gen_input_and_threads_deterministic(self, tmp_path):
        args = ("sweep", "--gen", "grid2d:nv=64,np=8,dim=6,eta=5.0",
                "--budgets", "8,16", "--kp", "0.5", "--folds", "1,2",
                "--seeds", "1,2")
        one = run_cli(*args, "--threads", "1")
        four = run_cli(*args, "--threads", "4")
        assert one.returncode == four.returncode == 0

        def strip_wall(text):
            return [
                ",".join(ln.split(",")[:-1]) if ln and ln[0] != "#" else ln
                for ln in text.splitlines()
            ]

        assert strip_wall(one.stdout) == strip_wall(four.stdout)


class TestBench:
    def test_cost_model_reference_values(self):
        proc = run_cli("bench", "--cost-model", "576", "10", "64", "4096")
        assert proc.returncode == 0
        assert "flops_hausdorff=23592960" in proc.stdout
        assert "flops_mob=174587904" in proc.stdout
        proc = run_cli("bench", "--cost-model", "2880", "10", "320", "4096")
        assert "3.89e-03 TFLOPs" in proc.stdout

    def test_requires_a_mode(self):
        proc = run_cli("bench")
        assert proc.returncode == 2


class TestHelp:
    @pytest.mark.parametrize(
        "cmd", ["prune", "coupling", "calibrate", "sweep", "gen", "fit-dim", "bench"]
    )
    def test_subcommand_help_exits_zero(self, cmd):
        proc = run_cli(cmd, "--help")
        assert proc.returncode == 0
        assert "--" in proc.stdout


class TestSlopeMetric:
    def test_constant_sequence(self):
        assert mean_relative_slope([0, 1, 2], [5.0, 5.0, 5.0]) == 0.0

    def test_reference_value(self):
        assert mean_relative_slope([0, 1, 2], [1.0, 1.1, 1.21]) == pytest.approx(10.0)
