"""Test output handlers and run manifests."""

import json

import numpy as np
import pytest
from rich.console import Console

from src.errors import DataError
from src.models import (
    AucCurve,
    BiasRow,
    BiasTable,
    CascadeReport,
    Embedding,
    EstimateReport,
    RunConfig,
)
from src.output import (
    CSVOutput,
    JSONOutput,
    TerminalOutput,
    format_value,
    write_auc_curve,
    write_embedding,
    write_error,
    write_manifest,
    write_timing,
)


def bias_table():
    return BiasTable(study="A", rho=0.3, rows=[
        BiasRow(sweep=100.0, method="no-latent", mean_rho_hat=0.41, bias=0.11, mc_se=0.004, reps=200),
        BiasRow(sweep=100.0, method="bias-corrected", mean_rho_hat=0.31, bias=0.01, mc_se=0.005, reps=200),
    ])


def estimate_report(specification="main", method="bias-corrected"):
    return EstimateReport(
        coefficients={"u1": 0.2, "intercept": 0.1, "peer_grad": 0.45},
        std_errors={"u1": 0.05, "intercept": 0.03, "peer_grad": 0.12},
        peer_columns=["peer_grad"], latent_columns=["u1"],
        method=method, n_obs=380, condition_number=12.5, specification=specification,
    )


def cascade_report(label="lsi>90"):
    return CascadeReport(
        label=label, targeting="lsi-percentile", lsi_percentile=90.0, buddy_weight=2.0,
        threshold=0.512, targeted_count=40, treated_count=12, failures_true=150,
        below_threshold_pre=160, below_threshold_post=141, n=380,
    )


class TestFormatValue:
    """Test CSV cell formatting."""

    def test_values(self):
        """Test floats round-trip and missing values are empty."""
        assert format_value(0.1) == "0.1"
        assert float(format_value(1 / 3)) == 1 / 3
        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value(7) == "7"


class TestCSVOutput:
    """Test CSV layouts."""

    def test_bias_table(self, tmp_path):
        """Test the long bias format."""
        path = tmp_path / "bias_table.csv"
        CSVOutput(path).write([bias_table()])
        lines = path.read_text().splitlines()
        assert lines[0] == "sweep,method,mean_rho_hat,bias,mc_se"
        assert lines[1] == "100.0,no-latent,0.41,0.11,0.004"
        assert len(lines) == 3

    def test_estimates(self, tmp_path):
        """Test one row per report with coefficient and SE columns."""
        path = tmp_path / "estimates.csv"
        CSVOutput(path).write([estimate_report(), estimate_report("binarized", "homophily-ols")])
        lines = path.read_text().splitlines()
        assert lines[0].startswith("specification,method,n_obs,condition_number,coef_u1,se_u1")
        assert lines[2].startswith("binarized,homophily-ols,380")

    def test_cascade_summary(self, tmp_path):
        """Test one column per run."""
        path = tmp_path / "cascade_summary.csv"
        CSVOutput(path).write([cascade_report(), cascade_report("lsi>80")])
        lines = path.read_text().splitlines()
        assert lines[0] == "quantity,lsi>90,lsi>80"
        assert "Residents treated,12,12" in lines

    def test_unknown_result_type(self, tmp_path):
        """Test results without a CSV layout are refused."""
        curve = AucCurve(dims=[1], auc=[0.7], chosen_d=1)
        with pytest.raises(TypeError, match="AucCurve"):
            CSVOutput(tmp_path / "x.csv").write([curve])

    def test_embedding_and_auc(self, tmp_path):
        """Test embeddings and AUC curves are written with headers."""
        embedding = Embedding(uhat=np.array([[0.5, 0.1], [0.4, -0.2]]), singular_values=np.array([2.0, 1.0]))
        write_embedding(embedding, tmp_path / "embedding.csv")
        assert (tmp_path / "embedding.csv").read_text().splitlines()[0] == "u1,u2"
        write_auc_curve(AucCurve(dims=[1, 2], auc=[0.7, 0.8], chosen_d=2), tmp_path / "auc.csv")
        assert (tmp_path / "auc.csv").read_text() == "d,auc\n1,0.7\n2,0.8\n"


class TestJSONOutput:
    """Test JSON output."""

    def test_deterministic(self, tmp_path):
        """Test repeated writes are byte-identical and keys sorted."""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        JSONOutput(first).write([estimate_report()])
        JSONOutput(second).write([estimate_report()])
        assert first.read_bytes() == second.read_bytes()
        payload = json.loads(first.read_text())
        assert list(payload[0]) == sorted(payload[0])
        assert payload[0]["coefficients"]["peer_grad"] == 0.45


class TestTerminalOutput:
    """Test the rich terminal view."""

    def test_renders_all_kinds(self):
        """Test tables are printed for every result kind."""
        target = Console(record=True, width=160)
        TerminalOutput(target).write([bias_table(), estimate_report(), cascade_report()])
        text = target.export_text()
        assert "Study A" in text
        assert "peer_grad" in text
        assert "Buddy intervention" in text

    def test_empty(self):
        """Test an empty result list prints a notice."""
        target = Console(record=True)
        TerminalOutput(target).write([])
        assert "No results" in target.export_text()


class TestManifest:
    """Test manifests, timing and error files."""

    def test_manifest_contents(self, tmp_path):
        """Test the manifest echoes the run without timestamps."""
        run = RunConfig(subcommand="simulate", output_dir=str(tmp_path), seed=7,
                        options={"study": "A", "reps": 2})
        path = write_manifest(tmp_path, run, ["bias_table.csv", "bias_table.json"])
        manifest = json.loads(path.read_text())
        assert manifest["seed"] == 7
        assert manifest["run"]["options"] == {"study": "A", "reps": 2}
        assert manifest["outputs"] == ["bias_table.csv", "bias_table.json"]
        assert "numpy" in manifest["versions"] and "rolemodel" in manifest["versions"]

    def test_manifest_deterministic(self, tmp_path):
        """Test equal runs give byte-identical manifests."""
        run = RunConfig(subcommand="embed", output_dir="out", seed=1)
        first = write_manifest(tmp_path / "a", run, ["embedding.csv"]).read_bytes()
        second = write_manifest(tmp_path / "b", run, ["embedding.csv"]).read_bytes()
        assert first == second

    def test_timing(self, tmp_path):
        """Test timings are rounded seconds per step."""
        path = write_timing(tmp_path, {"embed": 0.12345678})
        assert json.loads(path.read_text()) == {"embed": 0.123457}

    def test_error_file(self, tmp_path):
        """Test errors are written with their exit code and row."""
        path = write_error(tmp_path, DataError("bad value", row=4, path="events.csv"))
        payload = json.loads(path.read_text())
        assert payload["exit_code"] == 3 and payload["row"] == 4
        assert payload["message"] == "events.csv: bad value (row 4)"
