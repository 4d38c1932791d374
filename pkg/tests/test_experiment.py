import json

import numpy as np
import pytest

from conftest import BUNDLED
from tsqubo.baselines import accuracy_report
from tsqubo.cli import main
from tsqubo.dataio import Dataset, TimeSeries
from tsqubo.experiment import (
    ExperimentConfig,
    PipelineError,
    emit_qubo_histogram,
    parse_overrides,
    read_config,
    run_baselines,
    run_experiment,
    write_config,
)
from tsqubo.pulling import SubsetFamily
from tsqubo.qubo import build_qubo

FAST = dict(num_reads=40, num_sweeps=100)


def small_dataset(n_train=6, n_test=8, length=32, seed=0):
    rng = np.random.default_rng(seed)
    t = np.linspace(0, 2 * np.pi, length)

    def make(k, i):
        base = np.sin(t) if k == 1 else np.sign(np.sin(2 * t))
        return TimeSeries(base + 0.2 * rng.normal(size=length), k, i)

    train = [make(1 + i % 2, i) for i in range(n_train)]
    test = [make(1 + i % 2, n_train + i) for i in range(n_test)]
    return Dataset("toy", train, test)


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# comment\nword_length = 6\nprune_empty = false\nbeta_initial = none\nA = 3  # inline\n")
    kwargs = read_config(path)
    assert kwargs == {"word_length": 6, "prune_empty": False, "beta_initial": None, "A": 3.0}
    assert parse_overrides(["metric=num_common"]) == {"metric": "num_common"}
    with pytest.raises(ValueError):
        parse_overrides(["bogus=1"])
    cfg = ExperimentConfig.from_preset("beetlefly", **kwargs)
    assert (cfg.dataset, cfg.word_length, cfg.alphabet_size) == ("BeetleFly", 6, 5)
    assert ExperimentConfig.from_preset("sony").word_length == 8
    echoed = tmp_path / "echo.cfg"
    echoed.write_text(write_config(cfg))
    assert ExperimentConfig(**read_config(echoed)) == cfg


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(A=1, B=1).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(alphabet_size=1).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(metric="other").validate()


def test_single_train_series_labels_everything():
    ds = small_dataset()
    one = Dataset("one", ds.train[:1], ds.test)
    report = run_experiment(ExperimentConfig(**FAST), one)
    assigned = {r.assigned_label for r in report.items}
    assert assigned <= {ds.train[0].label, "unassigned"}
    share = sum(t.label == ds.train[0].label for t in ds.test) / len(ds.test)
    if assigned == {ds.train[0].label}:
        assert report.accuracy["weighted"] == pytest.approx(share)


def test_report_is_deterministic_and_recomputable(tmp_path):
    ds = small_dataset()
    cfg = ExperimentConfig(seed=9, **FAST)
    a = run_experiment(cfg, ds).write(tmp_path / "a")
    b = run_experiment(cfg, ds).write(tmp_path / "b")
    for name in ("reports.jsonl", "summary.json", "qubo_sizes.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    lines = [json.loads(l) for l in (a / "reports.jsonl").read_text().splitlines()]
    recomputed = accuracy_report([l["true_label"] for l in lines], [l["assigned_label"] for l in lines])
    summary = json.loads((a / "summary.json").read_text())
    assert summary["accuracy"]["weighted"] == recomputed["weighted"]


def test_test_labels_not_used_before_scoring():
    ds = small_dataset()
    relabeled = Dataset("toy", ds.train, [TimeSeries(t.values, 3 - t.label, t.id) for t in ds.test])
    cfg = ExperimentConfig(seed=2, **FAST)
    a, b = run_experiment(cfg, ds), run_experiment(cfg, relabeled)
    assert [r.assigned_label for r in a.items] == [r.assigned_label for r in b.items]


def test_histogram_rows():
    ds = small_dataset()
    report = run_experiment(ExperimentConfig(max_test=3, **FAST), ds)
    rows = emit_qubo_histogram([report]).splitlines()
    assert rows[0] == "dataset,test_id,n_vars,n_quadratic_terms"
    assert len(rows) == 4
    for row, item in zip(rows[1:], report.items):
        assert row == f"toy,{item.test_id},{item.n_vars},{item.n_quadratic}"
    with pytest.raises(ValueError):
        emit_qubo_histogram([])


def test_stage_failure_names_item(monkeypatch):
    import tsqubo.experiment as exp

    def boom(test, *a, **k):
        raise RuntimeError("solver died")

    monkeypatch.setattr(exp, "reconstruct", boom)
    with pytest.raises(PipelineError, match="6"):
        run_experiment(ExperimentConfig(**FAST), small_dataset())


def test_baselines_smoke():
    ds = small_dataset(n_test=2)
    rep = run_baselines(ExperimentConfig(), ds)
    assert len(rep.knn_labels) == 2 and len(rep.cluster_labels) == 2
    assert 0 <= rep.knn_accuracy["weighted"] <= 1
    assert "knn1_dtw" in json.loads(rep.summary_json())


def test_cli_solve(tmp_path, capsys):
    q = build_qubo(SubsetFamily.from_sets(2, [{0}, {0, 1}]))
    path = tmp_path / "q.txt"
    q.save(path)
    assert main(["solve", str(path), "--num-reads", "20", "--num-sweeps", "50"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "assignment_hex,energy,multiplicity"
    assert float(out[1].split(",")[1]) == 1.0
    assert main(["solve", str(path), "--exhaustive", "--out", str(tmp_path / "s.csv")]) == 0
    assert (tmp_path / "s.csv").read_text().splitlines()[1].split(",")[1] == "1.0"


def test_cli_encode_and_run(tmp_path, capsys):
    common = ["--dataset", "ChinatownSubset", "--data-root", str(BUNDLED)]
    assert main(["encode", *common, "--out", str(tmp_path / "enc")]) == 0
    words = (tmp_path / "enc" / "words.tsv").read_text().splitlines()
    assert len(words) == 1 + 20 + 22 and words[1].split("\t")[0] == "train"
    assert json.loads((tmp_path / "enc" / "encoder.json").read_text())["kind"] == "SFA"

    args = ["run", *common, "--max-test", "2", "--num-reads", "20", "--num-sweeps", "50",
            "--out", str(tmp_path / "run")]
    assert main(args) == 0
    assert len((tmp_path / "run" / "reports.jsonl").read_text().splitlines()) == 2
    assert main(["baseline", *common, "--max-test", "4", "--out", str(tmp_path / "base")]) == 0
    assert (tmp_path / "base" / "baseline_labels.csv").exists()


def test_cli_failure_exit_code(tmp_path, capsys):
    assert main(["run", "--dataset", "Missing", "--data-root", str(tmp_path)]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "nope.txt")]) == 1
