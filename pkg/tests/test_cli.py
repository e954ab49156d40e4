import csv
import io
import json

import pytest

from risfso import cli, runner

MINIMAL = """
[scenario]
name = "I"
metric = "sop"
rs = 0.5

[mc]
trials = 4000
seed = 7

[sweep]
variable = "gamma1_db"
values = [0.0, 10.0, 20.0]
"""


@pytest.fixture
def config(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text(MINIMAL)
    return p


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestConfigRuns:
    def test_minimal_run(self, config, tmp_path):
        out = tmp_path / "out.csv"
        assert cli.main(["--config", str(config), "--output", str(out), "--workers", "1"]) == 0
        table = rows(out.read_text())
        assert len(table) == 3
        assert list(table[0]) == list(runner.COLUMNS)
        assert all(r["flags"] == "" for r in table)
        assert [float(r["gamma1_db"]) for r in table] == [0.0, 10.0, 20.0]
        for r in table:
            assert abs(float(r["value_analytic"]) - float(r["value_mc"])) < 0.05

    def test_manifest_replay_is_byte_identical(self, config, tmp_path):
        out, again = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(["--config", str(config), "--output", str(out), "--workers", "1"]) == 0
        man = runner.manifest_path(out)
        doc = json.loads(open(man).read())
        assert doc["master_seed"] == 7 and "flags_summary" in doc and "timestamp" in doc
        assert cli.main(["--config", man, "--output", str(again), "--workers", "3"]) == 0
        assert out.read_bytes() == again.read_bytes()

    def test_analytic_only(self, config, capsys):
        assert cli.main(["--config", str(config), "--analytic-only"]) == 0
        table = rows(capsys.readouterr().out)
        assert all(r["value_mc"] == "" for r in table)

    def test_flag_overrides(self, config, capsys):
        args = ["--config", str(config), "--analytic-only", "--scenario", "III", "--metric", "ip"]
        assert cli.main(args) == 0
        table = rows(capsys.readouterr().out)
        assert {r["scenario"] for r in table} == {"III"} and {r["metric"] for r in table} == {"ip"}

    def test_numbers_have_twelve_digits(self, config, capsys):
        assert cli.main(["--config", str(config), "--analytic-only"]) == 0
        v = rows(capsys.readouterr().out)[1]["value_analytic"]
        assert float(v) == float(f"{float(v):.12g}")


class TestErrors:
    def test_asc_in_scenario_two(self, config, capsys):
        code = cli.main(["--config", str(config), "--metric", "asc", "--scenario", "II", "--analytic-only"])
        assert code == 2
        assert "ASC" in capsys.readouterr().err

    def test_unknown_key(self, tmp_path, capsys):
        p = tmp_path / "bad.toml"
        p.write_text(MINIMAL + "\n[rf]\nK9 = 1\n")
        assert cli.main(["--config", str(p)]) == 2
        assert "rf.K9" in capsys.readouterr().err

    def test_corrupted_toml(self, tmp_path, capsys):
        p = tmp_path / "bad.toml"
        p.write_text("[scenario\nname = ")
        assert cli.main(["--config", str(p)]) == 2
        assert capsys.readouterr().err

    def test_unknown_figure(self, capsys):
        assert cli.main(["--figure", "fig99", "--analytic-only"]) == 2

    def test_mutually_exclusive_modes(self, config):
        with pytest.raises(SystemExit):
            cli.main(["--config", str(config), "--analytic-only", "--mc-only"])


class TestFigures:
    def test_fig6_has_four_curves(self, capsys):
        assert cli.main(["--figure", "fig6", "--analytic-only"]) == 0
        table = rows(capsys.readouterr().out)
        assert len({r["curve"] for r in table}) == 4

    def test_fig11_has_three_scenarios(self, capsys):
        assert cli.main(["--figure", "fig11", "--analytic-only"]) == 0
        table = rows(capsys.readouterr().out)
        assert {r["scenario"] for r in table} == {"I", "II", "III"}

    def test_override_is_recorded(self, tmp_path):
        out = tmp_path / "f.csv"
        code = cli.main(["--figure", "fig2", "--analytic-only", "--set", "fso.gamma2_db=15",
                         "--output", str(out)])
        assert code == 0
        doc = json.loads(open(runner.manifest_path(out)).read())
        assert doc["run"]["overrides"] == {"fso.gamma2_db": 15}
        assert {r["gamma2_db"] for r in rows(out.read_text())} == {"15"}
