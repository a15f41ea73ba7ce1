import csv
import json

import numpy as np
import pytest

from chaostex.cli import main
from chaostex.features_io import read_features

pytestmark = pytest.mark.filterwarnings("ignore:smallest class")


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def synth_dir(workspace):
    out = workspace / "synth"
    assert main(["synth", "--out", str(out), "--per-class", "6", "--size", "16"]) == 0
    return out


@pytest.fixture(scope="module")
def features_csv(workspace, synth_dir):
    out = workspace / "features.csv"
    code = main([
        "extract", "--data", str(synth_dir), "--map", "circle",
        "--n-iter", "1", "--delta", "0.5", "--lbp", "8,1",
        "--out", str(out), "--no-cache",
    ])
    assert code == 0
    return out


class TestSynth:
    def test_layout(self, synth_dir):
        classes = sorted(d.name for d in synth_dir.iterdir() if d.is_dir())
        assert len(classes) == 4
        for class_dir in synth_dir.iterdir():
            assert len(list(class_dir.glob("*.png"))) == 6

    def test_deterministic_given_seed(self, workspace):
        a = workspace / "synth_a"
        b = workspace / "synth_b"
        main(["synth", "--out", str(a), "--per-class", "2", "--size", "16", "--seed", "3"])
        main(["synth", "--out", str(b), "--per-class", "2", "--size", "16", "--seed", "3"])
        for pa, pb in zip(sorted(a.rglob("*.png")), sorted(b.rglob("*.png"))):
            assert pa.read_bytes() == pb.read_bytes()


class TestExtract:
    def test_csv_output(self, features_csv):
        features = read_features(features_csv)
        assert features.matrix.shape == (24, 30)
        assert features.config["n_iter"] == 1

    def test_binary_output_with_sidecar(self, workspace, synth_dir):
        out = workspace / "features.ctxf"
        code = main([
            "extract", "--data", str(synth_dir), "--map", "tent",
            "--n-iter", "1", "--delta", "0.5", "--out", str(out), "--no-cache",
        ])
        assert code == 0
        assert out.read_bytes()[:4] == b"CTXF"
        sidecar = json.loads((workspace / "features.ctxf.json").read_text())
        assert sidecar["config"]["map"] == "tent"
        features = read_features(out)
        assert features.matrix.shape == (24, 30)

    def test_multiple_lbp_pairs(self, workspace, synth_dir):
        out = workspace / "features_multi.csv"
        code = main([
            "extract", "--data", str(synth_dir), "--map", "gauss",
            "--n-iter", "1", "--delta", "0.5",
            "--lbp", "8,1", "--lbp", "4,2",
            "--out", str(out), "--no-cache",
        ])
        assert code == 0
        assert read_features(out).matrix.shape == (24, 3 * (10 + 6))

    def test_missing_dataset_is_data_error(self, workspace):
        code = main([
            "extract", "--data", str(workspace / "nowhere"), "--map", "tent",
            "--out", str(workspace / "x.csv"),
        ])
        assert code == 3

    def test_bad_map_is_usage_error(self, workspace, synth_dir):
        with pytest.raises(SystemExit) as excinfo:
            main(["extract", "--data", str(synth_dir), "--map", "lorenz",
                  "--out", str(workspace / "x.csv")])
        assert excinfo.value.code == 2

    def test_missing_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2


class TestEvaluate:
    def test_results_fields(self, workspace, features_csv):
        out = workspace / "results.json"
        code = main([
            "evaluate", "--features", str(features_csv), "--protocol", "half",
            "--rounds", "3", "--seed", "5", "--out", str(out),
        ])
        assert code == 0
        results = json.loads(out.read_text())
        assert len(results["per_round_accuracy"]) == 3
        assert 0.0 <= results["mean_accuracy"] <= 1.0
        assert results["config"]["seed"] == 5
        assert np.array(results["confusion"]).shape == (4, 4)

    def test_same_seed_byte_identical(self, workspace, features_csv):
        out_a = workspace / "results_a.json"
        out_b = workspace / "results_b.json"
        for out in (out_a, out_b):
            assert main([
                "evaluate", "--features", str(features_csv), "--protocol", "half",
                "--rounds", "4", "--seed", "12", "--out", str(out),
            ]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_grouped_protocol_without_groups_is_data_error(self, workspace, features_csv):
        code = main([
            "evaluate", "--features", str(features_csv), "--protocol", "grouped",
            "--out", str(workspace / "never.json"),
        ])
        assert code == 3

    def test_explicit_pca_dimension(self, workspace, features_csv):
        out = workspace / "results_pca.json"
        code = main([
            "evaluate", "--features", str(features_csv), "--protocol", "half",
            "--rounds", "2", "--pca", "5", "--out", str(out),
        ])
        assert code == 0

    def test_grouped_protocol_through_feature_file(self, workspace, synth_dir):
        # rebuild the synth images under class/group subdirectories so the
        # group ids survive extract -> CSV -> evaluate
        grouped_root = workspace / "grouped_data"
        for class_dir in sorted(d for d in synth_dir.iterdir() if d.is_dir()):
            images = sorted(class_dir.glob("*.png"))
            for i, img in enumerate(images):
                target = grouped_root / class_dir.name / f"g{i % 3}" / img.name
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_bytes(img.read_bytes())
        features = workspace / "grouped_features.csv"
        assert main(["extract", "--data", str(grouped_root), "--map", "circle",
                     "--n-iter", "1", "--delta", "0.5", "--out", str(features),
                     "--no-cache"]) == 0
        out = workspace / "grouped_results.json"
        assert main(["evaluate", "--features", str(features), "--protocol", "grouped",
                     "--out", str(out)]) == 0
        results = json.loads(out.read_text())
        assert len(results["per_round_accuracy"]) == 3  # one round per group


class TestConfusion:
    def test_csv_matrix(self, workspace, features_csv):
        results_path = workspace / "res_for_cm.json"
        assert main(["evaluate", "--features", str(features_csv), "--protocol", "half",
                     "--rounds", "2", "--out", str(results_path)]) == 0
        out = workspace / "cm.csv"
        assert main(["confusion", "--results", str(results_path), "--out", str(out)]) == 0
        with out.open() as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], rows[1:]
        assert len(header) == 4
        assert len(body) == 4
        results = json.loads(results_path.read_text())
        assert header == results["labels"]
        assert [[int(v) for v in row] for row in body] == results["confusion"]

    def test_missing_results_is_data_error(self, workspace):
        code = main(["confusion", "--results", str(workspace / "ghost.json"),
                     "--out", str(workspace / "cm2.csv")])
        assert code == 3


class TestAnalyzeLogistic:
    def test_report_columns_and_consistency(self, workspace):
        out = workspace / "series.csv"
        code = main(["analyze-logistic", "--mu", "3.8", "--order", "4",
                     "--steps", "3", "--points", "5", "--out", str(out)])
        assert code == 0
        with out.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x0", "n", "direct", "series", "closed_approx", "abs_error"]
        assert len(rows) == 1 + 5 * 4  # header + points * (steps+1)
        for record in rows[1:]:
            direct, series, abs_error = float(record[2]), float(record[3]), float(record[5])
            assert abs_error == pytest.approx(abs(series - direct), abs=1e-15)

    def test_mu_below_one_is_data_error(self, workspace):
        code = main(["analyze-logistic", "--mu", "0.5",
                     "--out", str(workspace / "no.csv")])
        assert code == 3
