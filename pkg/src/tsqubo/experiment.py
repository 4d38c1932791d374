"""End-to-end runs: encode, reconstruct every test series, label, score."""

from __future__ import annotations

import dataclasses
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from tsqubo.baselines import accuracy_report, cluster2_dtw, knn1_dtw
from tsqubo.classifier import LARGEST_COMMON, METRICS, ReconstructionReport, reconstruct
from tsqubo.dataio import Dataset, load_dataset, load_ucr, znormalize
from tsqubo.encoder import SAX, SFA, encode, fit_sax, fit_sfa
from tsqubo.solver import AnnealParams

log = logging.getLogger(__name__)


class PipelineError(RuntimeError):
    pass


# word length / alphabet size used per dataset
PRESETS = {
    "sonyaiborobotsurface1": {"dataset": "SonyAIBORobotSurface1", "word_length": 8, "alphabet_size": 8},
    "gunpoint": {"dataset": "GunPoint", "word_length": 5, "alphabet_size": 5},
    "twoleadecg": {"dataset": "TwoLeadECG", "word_length": 5, "alphabet_size": 5},
    "twoleadecg-sax": {"dataset": "TwoLeadECG", "word_length": 5, "alphabet_size": 5, "encoder": SAX},
    "ecg200": {"dataset": "ECG200", "word_length": 5, "alphabet_size": 5},
    "beetlefly": {"dataset": "BeetleFly", "word_length": 5, "alphabet_size": 5},
    "chinatown": {"dataset": "Chinatown", "word_length": 5, "alphabet_size": 5},
}
PRESETS["sony"] = PRESETS["sonyaiborobotsurface1"]


@dataclass
class ExperimentConfig:
    dataset: str = "Chinatown"
    data_root: str | None = None
    train_path: str | None = None
    test_path: str | None = None
    delimiter: str = "tab"
    normalize: bool = True
    encoder: str = SFA
    word_length: int = 5
    alphabet_size: int = 5
    include_dc: bool = False
    binning: str = "equi-depth"
    A: float = 2.0
    B: float = 1.0
    num_reads: int = 2000
    num_sweeps: int = 1000
    beta_initial: float | None = None
    beta_final: float | None = None
    interpolation: str = "geometric"
    seed: int = 0
    metric: str = LARGEST_COMMON
    prune_empty: bool = True
    worst_case_M: bool = False
    vote: bool = False
    max_test: int | None = None
    workers: int = 1
    dtw_window: int | None = None
    dtw_squared: bool = False
    output_dir: str | None = None

    def validate(self) -> "ExperimentConfig":
        if not 0 < self.B < self.A:
            raise ValueError(f"need 0 < B < A, got A={self.A}, B={self.B}")
        if self.word_length < 1 or self.alphabet_size < 2:
            raise ValueError("need word_length >= 1 and alphabet_size >= 2")
        if self.encoder not in (SFA, SAX):
            raise ValueError(f"unknown encoder {self.encoder!r}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        self.anneal_params()
        return self

    def anneal_params(self, seed: int | None = None) -> AnnealParams:
        return AnnealParams(
            self.num_reads,
            self.num_sweeps,
            self.beta_initial,
            self.beta_final,
            self.interpolation,
            self.seed if seed is None else seed,
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "ExperimentConfig":
        key = name.lower()
        if key not in PRESETS:
            raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
        return cls(**{**PRESETS[key], **overrides})


def _coerce(cfg_field: dataclasses.Field, raw: str):
    text = raw.strip()
    kind = str(cfg_field.type)
    if text.lower() in ("none", "null", "") and "None" in kind:
        return None
    if kind.startswith("bool"):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{cfg_field.name}: not a boolean: {raw!r}")
    if kind.startswith("int"):
        return int(text)
    if kind.startswith("float"):
        return float(text)
    return text


def parse_overrides(pairs) -> dict:
    """``["key=value", ...]`` to typed config kwargs."""
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"expected key=value, got {pair!r}")
        key, value = (s.strip() for s in pair.split("=", 1))
        if key not in fields:
            raise ValueError(f"unknown config key {key!r}")
        out[key] = _coerce(fields[key], value)
    return out


def read_config(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return parse_overrides(lines)


def write_config(config: ExperimentConfig) -> str:
    return "".join(f"{k} = {v}\n" for k, v in config.to_dict().items())


def _delimiter(name: str):
    return {"tab": "\t", "comma": ",", "space": None, "whitespace": None}.get(name, name)


def load_config_dataset(config: ExperimentConfig) -> Dataset:
    delim = _delimiter(config.delimiter)
    if config.train_path and config.test_path:
        train = load_ucr(config.train_path, delim)
        test = load_ucr(config.test_path, delim, id_offset=len(train))
        if config.normalize:
            train = [znormalize(t) for t in train]
            test = [znormalize(t) for t in test]
        return Dataset(config.dataset, train, test)
    return load_dataset(config.dataset, config.data_root, delim, config.normalize)


def item_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


@dataclass
class RunReport:
    dataset: str
    items: list[ReconstructionReport]
    accuracy: dict
    config: dict
    timings: dict = field(default_factory=dict)

    @property
    def qubo_sizes(self) -> list[int]:
        return [r.n_vars for r in self.items]

    def reports_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.items)

    def summary_json(self) -> str:
        acc = {"per_class": {str(k): v for k, v in self.accuracy["per_class"].items()},
               "weighted": self.accuracy["weighted"]}
        return json.dumps({"dataset": self.dataset, "accuracy": acc, "config": self.config},
                          indent=2, sort_keys=True) + "\n"

    def write(self, outdir) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "reports.jsonl").write_text(self.reports_jsonl())
        (outdir / "summary.json").write_text(self.summary_json())
        (outdir / "qubo_sizes.csv").write_text(emit_qubo_histogram([self]))
        # wall times vary run to run, so they stay out of the files above
        (outdir / "timings.json").write_text(json.dumps(self.timings, indent=2) + "\n")
        return outdir


def _reconstruct_item(args):
    word, train_words, config, seed = args
    try:
        return reconstruct(
            word,
            train_words,
            A=config.A,
            B=config.B,
            params=config.anneal_params(seed),
            metric=config.metric,
            prune_empty=config.prune_empty,
            worst_case_M=config.worst_case_M,
            vote=config.vote,
        )
    except Exception as exc:
        raise PipelineError(f"test item {word.source_id}: {exc}") from exc


def run_experiment(config: ExperimentConfig, dataset: Dataset | None = None) -> RunReport:
    config.validate()
    timings = {}
    t0 = time.perf_counter()
    if dataset is None:
        dataset = load_config_dataset(config)
    test_series = dataset.test[: config.max_test] if config.max_test else dataset.test
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if config.encoder == SFA:
        model = fit_sfa(dataset.train, config.word_length, config.alphabet_size,
                        config.include_dc, config.binning)
    else:
        model = fit_sax(config.word_length, config.alphabet_size, len(dataset.train[0]))
    train_words = [encode(model, ts) for ts in dataset.train]
    test_words = [encode(model, ts, keep_label=False) for ts in test_series]
    timings["encode"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    jobs = [(w, train_words, config, item_seed(config.seed, k)) for k, w in enumerate(test_words)]
    items = []
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            items.extend(pool.map(_reconstruct_item, jobs))
    else:
        for k, job in enumerate(jobs):
            items.append(_reconstruct_item(job))
            log.info("item %d/%d (id %s) done", k + 1, len(jobs), job[0].source_id)
    timings["reconstruct"] = time.perf_counter() - t0

    for rep, ts in zip(items, test_series):
        rep.true_label = ts.label
    accuracy = accuracy_report([ts.label for ts in test_series], [r.assigned_label for r in items])
    return RunReport(dataset.name, items, accuracy, config.to_dict(), timings)


@dataclass
class BaselineReport:
    dataset: str
    knn_labels: list
    knn_accuracy: dict
    cluster_labels: list
    cluster_accuracy: dict
    true_labels: list
    config: dict

    def summary_json(self) -> str:
        def fmt(acc):
            return {"per_class": {str(k): v for k, v in acc["per_class"].items()}, "weighted": acc["weighted"]}

        return json.dumps(
            {
                "dataset": self.dataset,
                "knn1_dtw": fmt(self.knn_accuracy),
                "cluster2_dtw": fmt(self.cluster_accuracy),
                "config": self.config,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"

    def labels_csv(self) -> str:
        buf = io.StringIO()
        buf.write("index,true_label,knn1_dtw,cluster2_dtw\n")
        for i, (t, k, c) in enumerate(zip(self.true_labels, self.knn_labels, self.cluster_labels)):
            buf.write(f"{i},{t},{k},{c}\n")
        return buf.getvalue()

    def write(self, outdir) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "baseline_summary.json").write_text(self.summary_json())
        (outdir / "baseline_labels.csv").write_text(self.labels_csv())
        return outdir


def run_baselines(config: ExperimentConfig, dataset: Dataset | None = None) -> BaselineReport:
    if dataset is None:
        dataset = load_config_dataset(config)
    test = dataset.test[: config.max_test] if config.max_test else dataset.test
    truth = [ts.label for ts in test]
    unlabeled = [ts.unlabeled() for ts in test]
    knn = knn1_dtw(dataset.train, unlabeled, config.dtw_window, config.dtw_squared)
    clusters = cluster2_dtw(unlabeled, truth, config.dtw_window, config.dtw_squared)
    return BaselineReport(
        dataset.name,
        knn,
        accuracy_report(truth, knn),
        clusters.predicted,
        accuracy_report(truth, clusters.predicted),
        truth,
        config.to_dict(),
    )


def emit_qubo_histogram(reports) -> str:
    """CSV rows ``dataset,test_id,n_vars,n_quadratic_terms`` for every reconstructed item."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports")
    buf = io.StringIO()
    buf.write("dataset,test_id,n_vars,n_quadratic_terms\n")
    for run in reports:
        for item in run.items:
            buf.write(f"{run.dataset},{item.test_id},{item.n_vars},{item.n_quadratic}\n")
    return buf.getvalue()
