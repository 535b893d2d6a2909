import json

import numpy as np
import pytest

from illclust.cli import main
from illclust.io import read_csv, write_csv
from illclust.experiment import generate_synthetic
from illclust.matrix import DataMatrix


@pytest.fixture(scope="module")
def blob_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "blobs.csv"
    m, _ = generate_synthetic(32, 80, 3, 10.0, 1.0, seed=30)
    write_csv(m, str(path))
    return str(path)


@pytest.fixture(scope="module")
def tones_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "tones.csv"
    x = np.arange(192)
    rows = [np.sin(2 * np.pi * (f + 3) * x / 192) for f in range(24)]
    write_csv(DataMatrix(np.vstack(rows)), str(path))
    return str(path)


@pytest.fixture(scope="module")
def fast_cfg(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "fast.cfg"
    path.write_text("k_max=5\nkmeans_restarts=5\n")
    return str(path)


class TestSynth:
    def test_writes_matrix_and_labels(self, tmp_path):
        out = tmp_path / "m.csv"
        labels = tmp_path / "labels.txt"
        code = main([
            "synth", "--n-vars", "16", "--n-samples", "40", "--true-k", "3",
            "--seed", "1", "--out", str(out), "--labels-out", str(labels),
        ])
        assert code == 0
        m = read_csv(str(out))
        assert m.values.shape == (16, 40)
        assert len(labels.read_text().split()) == 40

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["synth", "--n-vars", "8", "--n-samples", "20",
                         "--seed", "7", "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestCommands:
    def test_condition(self, blob_csv, fast_cfg, tmp_path, capsys):
        out = tmp_path / "cond.json"
        code = main(["condition", "--in", blob_csv, "--config", fast_cfg,
                     "--out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "RAW" in printed and "PCA-W" in printed
        doc = json.loads(out.read_text())
        assert list(doc["condition_numbers"]) == ["RAW", "EMD", "PCA-K", "PCA-W"]

    def test_emd(self, blob_csv, tmp_path):
        out = tmp_path / "imf.csv"
        assert main(["emd", "--in", blob_csv, "--out", str(out)]) == 0
        m = read_csv(str(out))
        assert m.values.shape == (32, 80)

    def test_pca_select_variants(self, blob_csv, tmp_path):
        for select in ("kaiser", "wishart", "top:2"):
            out = tmp_path / f"scores_{select.replace(':', '_')}.csv"
            assert main(["pca", "--in", blob_csv, "--select", select,
                         "--out", str(out)]) == 0
            assert out.exists()

    def test_kmeans(self, blob_csv, tmp_path):
        out = tmp_path / "part.json"
        assert main(["kmeans", "--in", blob_csv, "--k", "3", "--seed", "2",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["k"] == 3
        assert len(doc["assignments"]) == 80
        assert len(doc["centroids"]) == 3

    def test_sweep(self, blob_csv, fast_cfg, tmp_path):
        out = tmp_path / "sweep.json"
        assert main(["sweep", "--in", blob_csv, "--kmax", "5",
                     "--config", fast_cfg, "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["k_values"] == [2, 3, 4, 5]
        assert doc["optimal_k"] == 3

    def test_pipeline_all_with_plots(self, blob_csv, fast_cfg, tmp_path):
        out = tmp_path / "report.json"
        plots = tmp_path / "plots"
        code = main(["pipeline", "--in", blob_csv, "--variant", "all",
                     "--config", fast_cfg, "--out", str(out),
                     "--plot-dir", str(plots)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert len(doc["variants"]) == 4
        assert (plots / "clusters.tsv").exists()
        assert (plots / "components.tsv").exists()

    def test_pipeline_single_variant(self, blob_csv, fast_cfg, tmp_path):
        out = tmp_path / "raw.json"
        assert main(["pipeline", "--in", blob_csv, "--variant", "raw",
                     "--config", fast_cfg, "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert [v["variant"] for v in doc["variants"]] == ["RAW"]

    def test_theorem(self, blob_csv, fast_cfg, tmp_path, capsys):
        out = tmp_path / "theorem.json"
        code = main(["theorem", "--in", blob_csv, "--config", fast_cfg,
                     "--out", str(out)])
        assert code == 0
        assert "K*" in capsys.readouterr().out
        doc = json.loads(out.read_text())
        assert "theorem" in doc

    def test_write_config_round_trips(self, tmp_path):
        out = tmp_path / "default.cfg"
        assert main(["write-config", "--out", str(out)]) == 0
        from illclust.config import PipelineConfig, load_config

        assert load_config(str(out)) == PipelineConfig()


class TestExitCodes:
    def test_missing_file_is_input_error(self, tmp_path):
        assert main(["condition", "--in", str(tmp_path / "nope.csv")]) == 2

    def test_ragged_csv_is_input_error(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1,2,3\n4,5\n")
        assert main(["condition", "--in", str(path)]) == 2

    def test_empty_selection_exit_code(self, tones_csv, fast_cfg, tmp_path):
        out = tmp_path / "r.json"
        code = main(["pipeline", "--in", tones_csv, "--variant", "all",
                     "--config", fast_cfg, "--out", str(out)])
        assert code == 4
        doc = json.loads(out.read_text())
        assert doc["components"]["wishart"] == "no_informative_components"

    def test_pca_wishart_empty_exit_code(self, tones_csv, tmp_path):
        code = main(["pca", "--in", tones_csv, "--select", "wishart",
                     "--out", str(tmp_path / "s.csv")])
        assert code == 4

    def test_byte_identical_reports_same_seed(self, blob_csv, fast_cfg, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert main(["pipeline", "--in", blob_csv, "--variant", "all",
                         "--config", fast_cfg, "--seed", "3",
                         "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()
