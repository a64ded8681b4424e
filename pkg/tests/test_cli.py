import numpy as np
import pytest

from ldlkit import Variant, load_model, save_dataset, synth_lowrank
from ldlkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def synth_file(tmp_path):
    path = tmp_path / "synth.txt"
    save_dataset(synth_lowrank(60, 6, 4, 2, 0.1, seed=0), path)
    return str(path)


def test_synth_writes_dataset(tmp_path, capsys):
    out = tmp_path / "ds.txt"
    code, stdout, _ = run(capsys, "synth", "--n", "30", "--d", "4", "--m", "3",
                          "--r", "2", "--seed", "1", "--out", str(out))
    assert code == 0
    assert out.exists()
    assert "n=30 d=4 m=3" in stdout


def test_train_reports_and_writes_model(tmp_path, capsys, synth_file):
    model_path = tmp_path / "model.npz"
    code, stdout, _ = run(capsys, "train", synth_file, "--model-out", str(model_path),
                          "--format", "csv")
    assert code == 0
    assert model_path.exists()
    assert "iterations=" in stdout and "converged=yes" in stdout
    assert "dataset,variant,metric,mean,std" in stdout


def test_train_variant_tag_round_trips(tmp_path, capsys, synth_file):
    model_path = tmp_path / "b.npz"
    code, _, _ = run(capsys, "train", synth_file, "--model-out", str(model_path),
                     "--variant", "ablation-b")
    assert code == 0
    assert load_model(model_path).variant is Variant.ABLATION_B


def test_invalid_threshold_is_a_clean_error(tmp_path, capsys, synth_file):
    code, _, stderr = run(capsys, "train", synth_file, "--model-out",
                          str(tmp_path / "x.npz"), "--degrade", "threshold:1.5")
    assert code != 0
    assert "threshold" in stderr and "(0, 1)" in stderr


def test_missing_dataset_is_a_clean_error(tmp_path, capsys):
    code, _, stderr = run(capsys, "evaluate", str(tmp_path / "nope.txt"),
                          "--model", str(tmp_path / "nope.npz"))
    assert code != 0
    assert "error:" in stderr


def test_predict_and_evaluate_round_trip(tmp_path, capsys, synth_file):
    model_path = tmp_path / "model.npz"
    run(capsys, "train", synth_file, "--model-out", str(model_path))
    pred_path = tmp_path / "pred.txt"
    code, _, _ = run(capsys, "predict", synth_file, "--model", str(model_path),
                     "--out", str(pred_path))
    assert code == 0
    rows = np.loadtxt(pred_path)
    assert rows.shape == (60, 4)
    np.testing.assert_allclose(rows.sum(axis=1), 1.0, atol=1e-12)
    code, stdout, _ = run(capsys, "evaluate", synth_file, "--model", str(model_path),
                          "--format", "csv")
    assert code == 0
    assert stdout.count("\n") == 7  # header + six metrics


def test_cv_three_variants_row_shape(capsys, synth_file):
    code, stdout, _ = run(capsys, "cv", synth_file, "--variants",
                          "full,ablation-a,ablation-b", "--folds", "4", "--format", "csv")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0] == "dataset,variant,metric,mean,std"
    assert len(lines) == 1 + 3 * 6
    variants = {line.split(",")[1] for line in lines[1:]}
    assert variants == {"full", "ablation-a", "ablation-b"}


def test_cv_is_byte_deterministic(capsys, synth_file):
    args = ("cv", synth_file, "--folds", "4", "--seed", "9", "--format", "csv")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_cv_two_label_dataset_smoke(tmp_path, capsys):
    # smallest label count that occurs in published benchmarks
    path = tmp_path / "m2.txt"
    save_dataset(synth_lowrank(50, 5, 2, 2, 0.2, seed=3), path)
    code, stdout, _ = run(capsys, "cv", str(path), "--folds", "5", "--format", "csv")
    assert code == 0
    cheb = [float(line.split(",")[3]) for line in stdout.strip().splitlines()[1:]
            if line.split(",")[2] == "chebyshev"]
    assert 0.0 <= cheb[0] <= 1.0


def test_cv_with_grid_search(capsys, tmp_path):
    path = tmp_path / "tiny.txt"
    save_dataset(synth_lowrank(40, 4, 3, 2, 0.1, seed=4), path)
    code, stdout, _ = run(capsys, "cv", str(path), "--folds", "3", "--format", "csv",
                          "--grid", "alpha=0.05,0.1;lambda=0.1")
    assert code == 0
    assert len(stdout.strip().splitlines()) == 7


def test_ablate_emits_three_variants(capsys, synth_file):
    code, stdout, _ = run(capsys, "ablate", synth_file, "--holdout", "0.25",
                          "--seed", "2", "--format", "csv")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert len(lines) == 1 + 3 * 6
    assert lines[1].startswith("synth,full,chebyshev,")


def test_degrade_counts_and_matrix_file(tmp_path, capsys):
    # single Fig.-1-style instance: threshold 0.5 selects two labels
    path = tmp_path / "one.txt"
    path.write_text("1 1 4\n0.0\n0.25 0.4 0.25 0.1\n", encoding="utf-8")
    out = tmp_path / "L.txt"
    code, stdout, _ = run(capsys, "degrade", str(path), "--degrade", "threshold:0.5",
                          "--out", str(out), "--format", "csv")
    assert code == 0
    assert stdout.splitlines()[0] == "instance,positives"
    assert stdout.splitlines()[1] == "0,2"
    body = out.read_text(encoding="utf-8").splitlines()
    assert body[0] == "1 4"
    assert body[1] == "1 1 0 0"


def test_sweep_emits_row_per_candidate(capsys, tmp_path):
    path = tmp_path / "s.txt"
    save_dataset(synth_lowrank(40, 4, 3, 2, 0.1, seed=5), path)
    code, stdout, _ = run(capsys, "sweep", str(path), "--param", "alpha",
                          "--folds", "3", "--format", "md")
    assert code == 0
    lines = [l for l in stdout.strip().splitlines() if l.startswith("| s |")]
    assert len(lines) == 7  # default candidate set
    assert "full[alpha=0.005]" in lines[0]


def test_nonconvergence_is_reported_not_an_error(tmp_path, capsys, synth_file):
    # starving the solver of iterations must not flip the exit code
    code, stdout, _ = run(capsys, "train", synth_file, "--model-out",
                          str(tmp_path / "nc.npz"), "--max-iters", "1")
    assert code == 0
    assert "converged=NO" in stdout


def test_sweep_csv_variant_tags(capsys, tmp_path):
    path = tmp_path / "s2.txt"
    save_dataset(synth_lowrank(30, 4, 3, 2, 0.1, seed=6), path)
    code, stdout, _ = run(capsys, "sweep", str(path), "--param", "lambda",
                          "--values", "0.1,1", "--folds", "3", "--format", "csv")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert len(lines) == 1 + 2 * 6
    assert lines[1].split(",")[1] == "full[lambda=0.1]"
