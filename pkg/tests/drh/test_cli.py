import json

import pytest
from typer.testing import CliRunner

import logging_config  # pyright: ignore[reportMissingImports]
import main  # pyright: ignore[reportMissingImports]
from drh.catalog.manifest import load_manifest

runner = CliRunner()


@pytest.fixture(autouse=True)
def small_caps(monkeypatch):
    monkeypatch.setenv("DRH_EPS_CAP", "2")
    monkeypatch.setenv("DRH_UDEG_CAP", "5")
    monkeypatch.setenv("DRH_PMAX", "1")
    monkeypatch.setenv("DRH_TDEG_CAP", "2")


class TestVerify:
    def test_kdv_passes(self):
        result = runner.invoke(
            main.app, ["verify", "--cohft", "kdv", "--eps", "2", "--pmax", "1", "--udeg", "6"]
        )
        assert result.exit_code == 0, result.output
        assert "PASS" in result.output

    def test_json_report(self):
        result = runner.invoke(
            main.app,
            ["verify", "--cohft", "kdv", "--suite", "string", "--pmax", "1", "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["passed"] is True
        assert data["title"] == "verify kdv"
        assert {r["suite"] for r in data["results"]} == {"string"}

    def test_parallel_jobs_match_serial(self):
        args = ["verify", "--cohft", "kdv", "--suite", "string,commute", "--pmax", "1"]
        serial = runner.invoke(main.app, [*args, "--format", "json"])
        parallel = runner.invoke(main.app, [*args, "--jobs", "2", "--format", "json"])
        assert parallel.exit_code == 0, parallel.output
        assert json.loads(parallel.stdout) == json.loads(serial.stdout)
        suites = [r["suite"] for r in json.loads(parallel.stdout)["results"]]
        assert suites.index("string") < suites.index("commute")

    def test_unknown_cohft(self):
        result = runner.invoke(main.app, ["verify", "--cohft", "nope"])
        assert result.exit_code == 2

    def test_unknown_suite(self):
        result = runner.invoke(main.app, ["verify", "--suite", "string,nope"])
        assert result.exit_code == 2
        assert "nope" in result.output


class TestWk:
    def test_text_table(self):
        result = runner.invoke(main.app, ["wk", "--genus", "1", "--points", "1", "--degree", "1"])
        assert result.exit_code == 0
        assert "1/24" in result.output

    def test_json(self):
        result = runner.invoke(
            main.app, ["wk", "--genus", "1", "--points", "1", "--degree", "1", "--format", "json"]
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout) == [{"genus": 1, "degrees": [1], "value": "1/24"}]

    def test_writes_file(self, tmp_path):
        target = tmp_path / "wk.json"
        result = runner.invoke(
            main.app, ["wk", "--genus", "0", "--points", "4", "--degree", "1", "--out", str(target)]
        )
        assert result.exit_code == 0, result.output
        rows = json.loads(target.read_text(encoding="utf-8"))
        assert {"genus": 0, "degrees": [0, 0, 0], "value": "1"} in rows
        assert {"genus": 0, "degrees": [0, 0, 0, 1], "value": "1"} in rows


class TestCatalog:
    def test_list(self):
        result = runner.invoke(main.app, ["catalog", "list"])
        assert result.exit_code == 0, result.output
        assert "kdv" in result.output

    def test_show_exports_manifest(self, tmp_path):
        target = tmp_path / "3spin.json"
        result = runner.invoke(main.app, ["catalog", "show", "3spin", "--out", str(target)])
        assert result.exit_code == 0, result.output
        assert target.exists()
        assert load_manifest(target).n == 2

    def test_show_unknown(self):
        result = runner.invoke(main.app, ["catalog", "show", "nope"])
        assert result.exit_code == 2


class TestRun:
    def test_sets_up_logging_before_app(self, mocker):
        setup = mocker.patch.object(logging_config, "setup_logging")
        app = mocker.patch.object(main, "app")
        main.run()
        setup.assert_called_once_with()
        app.assert_called_once_with()
