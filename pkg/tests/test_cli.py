import os

import numpy as np
import pytest

from lps.cli import ConfigError, RunConfig, build_config, main, parse_config


def write_config(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


BASE = """
alpha = 0.0
count = 5
seed = 42
cutoff = 4
quad_order = 32
"""


class TestConfigParsing:
    def test_round_trip(self, tmp_path):
        path = write_config(
            tmp_path,
            "alpha = 0.3, -0.5\ntask = verify\nseed = 7\ncount = 10\n# comment\n",
        )
        values = parse_config(path)
        assert values["alpha"] == (0.3, -0.5)
        assert values["task"] == "verify"
        assert values["seed"] == 7

    def test_unknown_key_is_error(self, tmp_path):
        path = write_config(tmp_path, "alpha = 0.0\nbogus_key = 3\n")
        with pytest.raises(ConfigError, match="bogus_key"):
            parse_config(path)

    def test_bad_value_names_field(self, tmp_path):
        path = write_config(tmp_path, "alpha = 0.0\ncount = many\n")
        with pytest.raises(ConfigError, match="count"):
            parse_config(path)

    def test_missing_alpha_is_error(self, tmp_path):
        path = write_config(tmp_path, "task = basis\n")

        class Args:
            config = path
            task = "basis"
            seed = None
            out = ""
            format = ""
            threads = ""
            no_timestamp = False

        with pytest.raises(ConfigError, match="alpha"):
            build_config(Args())


class TestValidation:
    def test_czscan_requires_cz_range(self):
        cfg = RunConfig(alpha=(-0.9,), task="czscan", seed=1)
        with pytest.raises(ConfigError, match=r"-1/2"):
            cfg.validate()

    def test_seed_required_for_sampled_tasks(self):
        cfg = RunConfig(alpha=(0.0,), task="gfun")
        with pytest.raises(ConfigError, match="seed"):
            cfg.validate()

    def test_dimension_mismatch(self):
        cfg = RunConfig(alpha=(0.0, 0.0), task="basis", dimension=3)
        with pytest.raises(ConfigError, match="dimension"):
            cfg.validate()

    def test_thread_env_override(self, monkeypatch):
        cfg = RunConfig(alpha=(0.0,), task="basis", threads="2")
        assert cfg.thread_count() == 2
        monkeypatch.setenv("LPS_THREADS", "5")
        assert cfg.thread_count() == 5

    def test_bad_threads(self):
        cfg = RunConfig(alpha=(0.0,), task="basis", threads="zero")
        with pytest.raises(ConfigError, match="threads"):
            cfg.thread_count()


class TestExitCodes:
    def test_invalid_config_exits_2(self, tmp_path, capsys):
        path = write_config(tmp_path, "alpha = -0.9\nseed = 1\ncount = 3\n")
        code = main(["czscan", "--config", path, "--out", str(tmp_path / "r.csv")])
        assert code == 2
        assert "-1/2" in capsys.readouterr().err

    def test_verify_below_range_exits_2(self, tmp_path, capsys):
        path = write_config(tmp_path, "alpha = -0.9\nseed = 1\ncount = 3\n")
        code = main(["verify", "--config", path, "--out", str(tmp_path / "r.csv")])
        assert code == 2
        assert "-1/2" in capsys.readouterr().err

    def test_verify_passes(self, tmp_path):
        path = write_config(tmp_path, BASE)
        out = str(tmp_path / "verify.csv")
        code = main(["verify", "--config", path, "--out", out, "--no-timestamp"])
        assert code == 0
        lines = open(out).read().splitlines()
        assert lines[1].startswith("t,")  # header row after the info line
        devs = [float(r.split(",")[-1]) for r in lines[2:] if r.split(",")[-1]]
        assert all(d <= 1e-6 for d in devs if d == d)

    def test_basis_task(self, tmp_path):
        path = write_config(tmp_path, "alpha = 0.3\ncutoff = 3\nquad_order = 32\n")
        out = str(tmp_path / "basis.csv")
        assert main(["basis", "--config", path, "--out", out, "--no-timestamp"]) == 0

    def test_czscan_refine_flag(self, tmp_path):
        path = write_config(
            tmp_path,
            "alpha = 0.0\nseed = 5\ncount = 6\nkind = dT\nzeta_order = 6\n"
            "zeta_levels = 16\nrefine = true\n",
        )
        out = str(tmp_path / "scan.csv")
        assert main(["czscan", "--config", path, "--out", out, "--no-timestamp"]) == 0

    def test_row_count_matches_sample_count(self, tmp_path):
        path = write_config(tmp_path, "alpha = 0.0\nseed = 3\ncount = 7\nkind = dT\nzeta_order = 6\nzeta_levels = 12\n")
        out = str(tmp_path / "scan.csv")
        assert main(["czscan", "--config", path, "--out", out, "--no-timestamp"]) == 0
        rows = [r for r in open(out).read().splitlines() if not r.startswith("#")][1:]
        assert len(rows) == 3 * 7  # growth + two smoothness scans

    def test_single_estimate_rows_equal_pairs(self, tmp_path):
        path = write_config(
            tmp_path,
            "alpha = -0.5\nseed = 3\ncount = 100\nkind = dT\nestimate = growth\n"
            "zeta_order = 6\nzeta_levels = 12\n",
        )
        out = str(tmp_path / "growth.csv")
        assert main(["czscan", "--config", path, "--out", out, "--no-timestamp"]) == 0
        rows = [r for r in open(out).read().splitlines() if not r.startswith("#")][1:]
        assert len(rows) == 100
        ratios = [float(r.split(",")[7]) for r in rows]
        assert all(np.isfinite(ratios))


class TestReproducibility:
    def test_byte_identical_reports(self, tmp_path):
        path = write_config(tmp_path, "alpha = 0.0\nseed = 9\ncount = 4\nkind = hT\nzeta_order = 6\nzeta_levels = 12\n")
        out1 = str(tmp_path / "a.csv")
        out2 = str(tmp_path / "b.csv")
        assert main(["czscan", "--config", path, "--out", out1, "--no-timestamp"]) == 0
        assert main(["czscan", "--config", path, "--out", out2, "--no-timestamp"]) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_jsonl_format(self, tmp_path):
        import json

        path = write_config(tmp_path, "alpha = 0.0\nseed = 9\ncount = 3\nkind = dT\nzeta_order = 6\nzeta_levels = 12\nformat = jsonl\n")
        out = str(tmp_path / "scan.jsonl")
        assert main(["czscan", "--config", path, "--out", out, "--no-timestamp"]) == 0
        lines = open(out).read().splitlines()
        header = json.loads(lines[0])
        assert "header" in header
        rec = json.loads(lines[1])
        assert rec["kind"] == "dT"

    def test_threads_give_same_rows(self, tmp_path):
        base = "alpha = 0.0\nseed = 9\ncount = 6\nkind = dP\nzeta_order = 6\nzeta_levels = 12\n"
        p1 = write_config(tmp_path, base + "threads = 1\n", "one.cfg")
        p2 = write_config(tmp_path, base + "threads = 3\n", "three.cfg")
        o1 = str(tmp_path / "t1.csv")
        o2 = str(tmp_path / "t3.csv")
        assert main(["czscan", "--config", p1, "--out", o1, "--no-timestamp"]) == 0
        assert main(["czscan", "--config", p2, "--out", o2, "--no-timestamp"]) == 0
        assert open(o1).read() == open(o2).read()
