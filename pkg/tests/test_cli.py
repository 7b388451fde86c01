"""
tests/test_cli.py
Command-line contract: outputs and exit codes
"""

import json

import pytest

from harness.cli import build_parser, cli_main
from imaging.raster import load_image


@pytest.fixture
def first_image(small_dataset):
    return small_dataset.manifest.paths[0]


def test_evaluate_writes_report_labelled_synthetic(small_dataset, tmp_path):
    report = tmp_path / "out.json"

    code = cli_main([
        "evaluate", "--manifest", str(small_dataset.manifest_path),
        "--classifier", "knn", "--k", "4", "--seed", "7", "--report", str(report),
    ])

    assert code == 0
    data = json.loads(report.read_text(encoding="utf-8"))
    assert list(data)[:10] == [
        "classifier", "k", "seed", "dataset", "feature_mode",
        "confusion", "per_grade", "tpr", "fpr", "average_accuracy",
    ]
    assert (data["classifier"], data["k"], data["seed"], data["dataset"]) == ("knn", 4, 7, "synthetic")


def test_unknown_subcommand(capsys):
    assert cli_main(["polish"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_subcommand():
    assert cli_main([]) == 1


def test_missing_image_is_a_data_error(tmp_path):
    manifest = tmp_path / "m.csv"
    manifest.write_text(
        "".join(f"{grade}_{i}.ppm,{grade}\n" for grade in (
            "Soft_Small", "Soft_Large", "Semi_Hard_Small", "Semi_Hard_Large", "Hard_Small", "Hard_Large"
        ) for i in range(2)),
        encoding="utf-8",
    )
    assert cli_main(["evaluate", "--manifest", str(manifest), "--k", "1"]) == 2


def test_unknown_grade_in_manifest(tmp_path):
    manifest = tmp_path / "m.csv"
    manifest.write_text("x.ppm,Mushy\n", encoding="utf-8")
    assert cli_main(["evaluate", "--manifest", str(manifest)]) == 2


def test_bad_config_file_is_a_usage_error(tmp_path, first_image):
    config = tmp_path / "bad.conf"
    config.write_text("colour = red\n", encoding="utf-8")
    assert cli_main(["--config", str(config), "features", "--in", str(first_image)]) == 1


def test_bad_angle_count_is_a_usage_error(first_image):
    assert cli_main(["features", "--in", str(first_image), "--n-angles", "6"]) == 1


def test_features_rows(first_image, capsys):
    assert cli_main(["features", "--in", str(first_image), "--shape"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    assert len(lines[0].split(",")) == 6

    assert cli_main(["features", "--in", str(first_image), "--texture"]) == 0
    assert len(capsys.readouterr().out.strip().split(",")) == 2


def test_features_dumps(first_image, tmp_path, capsys):
    lbp, hist = tmp_path / "lbp.pgm", tmp_path / "hist.csv"

    assert cli_main(["features", "--in", str(first_image), "--dump-lbp", str(lbp), "--dump-hist", str(hist)]) == 0

    capsys.readouterr()
    image = load_image(first_image)
    assert load_image(lbp).width == image.width - 2
    rows = hist.read_text(encoding="utf-8").splitlines()
    assert [row.split(",")[0] for row in rows] == [str(code) for code in range(10)]


def test_preprocess_outputs(first_image, tmp_path):
    mask, contour = tmp_path / "mask.pgm", tmp_path / "contour.csv"

    assert cli_main(["preprocess", "--in", str(first_image), "--out-mask", str(mask), "--out-contour", str(contour)]) == 0

    assert load_image(mask).is_gray
    first = contour.read_text(encoding="utf-8").splitlines()[0]
    assert len(first.split(",")) == 2


def test_train_then_grade(small_dataset, tmp_path, capsys):
    model = tmp_path / "grader.model"

    assert cli_main([
        "train", "--manifest", str(small_dataset.manifest_path), "--model", str(model), "--classifier", "centroid",
    ]) == 0
    assert model.read_text(encoding="utf-8").startswith("gradepipe-model v1 centroid k=4")

    images = [str(p) for p in small_dataset.manifest.paths[:2]]
    assert cli_main(["grade", "--model", str(model), "--in", *images]) == 0
    rows = [line.split(",") for line in capsys.readouterr().out.splitlines()]
    assert [row[0] for row in rows] == images
    assert all(row[1] in {"Soft_Small", "Soft_Large", "Semi_Hard_Small", "Semi_Hard_Large", "Hard_Small", "Hard_Large"}
               for row in rows)


def test_synth_prints_manifest_path(tmp_path, capsys):
    assert cli_main(["synth", "--n-per-grade", "2", "--seed", "4", "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip() == str(tmp_path / "manifest.csv")


def test_missing_model_file(tmp_path, first_image):
    assert cli_main(["grade", "--model", str(tmp_path / "none.model"), "--in", str(first_image)]) == 2


def test_parser_defaults_leave_config_unset():
    args = build_parser().parse_args(["train", "--manifest", "m.csv", "--model", "x.model"])
    assert args.k is None
    assert args.normalize is None
