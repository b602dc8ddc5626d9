import json

import pytest
from click.testing import CliRunner

from siskit.cli import main
from siskit.fixtures import fixture_path

DEPLOYMENT = str(fixture_path("deployment"))
CASE_STUDY = str(fixture_path("case_study"))
TABLE3 = str(fixture_path("normalization_reference"))


@pytest.fixture
def runner():
    return CliRunner()


class TestValidate:
    def test_clean_fixture(self, runner):
        result = runner.invoke(main, ["validate", "--input", CASE_STUDY])
        assert result.exit_code == 0
        assert result.output == ""

    def test_warning_fixture(self, runner, tmp_path):
        doc = json.loads(fixture_path("deployment").read_text())
        doc["weights"] = {"importance_weight": 0.9, "risk_weight": 0.9}
        path = tmp_path / "warn.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate", "--input", str(path)])
        assert result.exit_code == 0
        assert "WARNING weights" in result.output
        strict = runner.invoke(main, ["validate", "--input", str(path), "--strict"])
        assert strict.exit_code == 1

    def test_unknown_dimension(self, runner, tmp_path):
        doc = json.loads(fixture_path("deployment").read_text())
        doc["quality_attributes"][0]["dimension"] = "X"
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate", "--input", str(path)])
        assert result.exit_code == 2

    def test_unreadable_file(self, runner):
        result = runner.invoke(main, ["validate", "--input", "/nonexistent/model.json"])
        assert result.exit_code == 3


class TestPriorities:
    def test_case_study_table(self, runner):
        result = runner.invoke(main, ["priorities", "--input", CASE_STUDY])
        assert result.exit_code == 0
        lines = [l for l in result.output.splitlines() if l and not l.startswith("-")]
        assert len(lines) == 19  # header + 18 QAs
        assert any("traceability" in l and "3.00" in l and "1.00" in l for l in lines)
        assert any("admission_control" in l and "2.50" in l and "0.78" in l for l in lines)
        assert any("analysability" in l and "1.50" in l and "0.33" in l for l in lines)
        assert any("monetary_cost" in l and "0.10" in l for l in lines)

    def test_json_format(self, runner):
        result = runner.invoke(main, ["priorities", "--input", CASE_STUDY, "--format", "json"])
        rows = json.loads(result.output)
        by_id = {r["qa"]: r for r in rows}
        assert by_id["traceability"]["normalized_priority"] == 1.0
        assert by_id["admission_control"]["normalized_priority"] == 0.78


class TestScore:
    def test_deployment_raw_mode(self, runner):
        result = runner.invoke(
            main, ["score", "--input", DEPLOYMENT, "--raw-priorities"]
        )
        assert result.exit_code == 0
        assert "Non-normalized SIS" in result.output
        assert "Normalized SIS (%)" in result.output
        assert "0.00" in result.output
        assert "11.00" in result.output
        assert "31.00" in result.output
        assert "35.48" in result.output
        assert "100.00" in result.output

    def test_normalization_reference_values(self, runner):
        result = runner.invoke(
            main, ["score", "--input", TABLE3, "--raw-priorities"]
        )
        for pct in ("76.51", "28.41", "0.00", "100.00"):
            assert pct in result.output

    def test_missing_optimal_message(self, runner, tmp_path):
        doc = json.loads(fixture_path("deployment").read_text())
        for alt in doc["alternatives"]:
            alt["is_theoretical_optimal"] = False
        path = tmp_path / "no_opt.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["score", "--input", str(path)])
        assert result.exit_code == 2
        assert "is_theoretical_optimal" in result.stderr

    def test_determinism(self, runner):
        a = runner.invoke(main, ["score", "--input", CASE_STUDY]).output
        b = runner.invoke(main, ["score", "--input", CASE_STUDY]).output
        assert a == b

    def test_json_round_trip(self, runner):
        out = runner.invoke(main, ["score", "--input", CASE_STUDY, "--format", "json"]).output
        doc = json.loads(out)
        again = json.loads(
            runner.invoke(main, ["score", "--input", CASE_STUDY, "--format", "json"]).output
        )
        assert doc == again
        assert {p["dim_from"] + "-" + p["dim_to"] for p in doc["pairs"]} >= {
            "T-T", "T-Ec", "T-En", "T-S", "S-Ec",
        }


class TestWhatif:
    def patch_file(self, tmp_path, overrides):
        path = tmp_path / "patch.json"
        path.write_text(json.dumps({"overrides": overrides}))
        return str(path)

    def test_latency_cost_override(self, runner, tmp_path):
        patch = self.patch_file(
            tmp_path,
            [
                {
                    "alternative": "containerization",
                    "dim_from": "T",
                    "dim_to": "Ec",
                    "row": "latency",
                    "col": "cost_efficiency",
                    "effect": 0,
                }
            ],
        )
        result = runner.invoke(
            main, ["whatif", "--input", DEPLOYMENT, patch, "--raw-priorities"]
        )
        assert result.exit_code == 0
        line = next(l for l in result.output.splitlines() if "containerization" in l)
        assert "11.00" in line and "18.00" in line
        assert "35.48" in line and "58.06" in line

    def test_empty_patch(self, runner, tmp_path):
        patch = self.patch_file(tmp_path, [])
        result = runner.invoke(main, ["whatif", "--input", DEPLOYMENT, patch, "--raw-priorities"])
        assert result.exit_code == 0
        assert "0.00" in result.output

    def test_unknown_cell_exit_code(self, runner, tmp_path):
        patch = self.patch_file(
            tmp_path,
            [
                {
                    "alternative": "containerization",
                    "dim_from": "T",
                    "dim_to": "Ec",
                    "row": "latency",
                    "col": "ghost",
                    "effect": 0,
                }
            ],
        )
        result = runner.invoke(main, ["whatif", "--input", DEPLOYMENT, patch, "--raw-priorities"])
        assert result.exit_code == 2
        assert "ghost" in result.stderr

    def test_optimal_edit_requires_flag(self, runner, tmp_path):
        override = {
            "alternative": "theoretical_optimal",
            "dim_from": "T",
            "dim_to": "Ec",
            "row": "latency",
            "col": "vendor_independence",
            "effect": 1,
        }
        patch = self.patch_file(tmp_path, [override])
        refused = runner.invoke(main, ["whatif", "--input", DEPLOYMENT, patch, "--raw-priorities"])
        assert refused.exit_code == 2
        assert "theoretical optimal" in refused.stderr
        allowed = runner.invoke(
            main,
            ["whatif", "--input", DEPLOYMENT, patch, "--raw-priorities", "--allow-optimal-edit"],
        )
        assert allowed.exit_code == 0


class TestReport:
    def test_case_study_report(self, runner):
        result = runner.invoke(main, ["report", "--input", CASE_STUDY])
        assert result.exit_code == 0
        out = result.output
        assert "adaptability → reproducibility" in out
        assert "variability → reproducibility" in out
        assert "## Synergy chains" in out
        assert "resource_utilization" in out

    def test_empty_dmap_section(self, runner, tmp_path):
        doc = {
            "schema_version": "1",
            "weights": {"importance_weight": 0.5, "risk_weight": 0.5},
            "quality_attributes": [
                {"id": "t1", "dimension": "T", "importance": 1, "risk": 1}
            ],
            "alternatives": [
                {"id": "a", "dmap": {"nodes": [{"qa": "t1", "dimension": "T"}], "edges": []}},
                {
                    "id": "opt",
                    "is_theoretical_optimal": True,
                    "dmap": {"nodes": [{"qa": "t1", "dimension": "T"}], "edges": []},
                },
            ],
        }
        path = tmp_path / "empty.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["report", "--input", str(path)])
        assert result.exit_code == 0
        assert "no effects identified" in result.output

    def test_deployment_grid_shows_negative_cell(self, runner):
        result = runner.invoke(main, ["report", "--input", DEPLOYMENT, "--raw-priorities"])
        serverless_section = result.output.split("### Serverless")[1].split("###")[0]
        row = next(
            l for l in serverless_section.splitlines() if l.startswith("| scalability")
        )
        # scalability row: + on cost efficiency, − on vendor independence
        assert row.replace(" ", "") == "|scalability|+|−|"
