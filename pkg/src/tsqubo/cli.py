"""Command line entry point: ``tsqubo {run,baseline,solve,encode}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from tsqubo.encoder import SAX, encode, fit_sax, fit_sfa
from tsqubo.experiment import (
    ExperimentConfig,
    load_config_dataset,
    parse_overrides,
    read_config,
    run_baselines,
    run_experiment,
)
from tsqubo.qubo import Qubo
from tsqubo.solver import AnnealParams, anneal, exhaustive


def _config_from_args(args) -> ExperimentConfig:
    kwargs = {}
    if args.config:
        kwargs.update(read_config(args.config))
    for key in ("dataset", "data_root", "train_path", "test_path", "seed", "num_reads", "num_sweeps",
                "max_test", "metric", "output_dir"):
        value = getattr(args, key, None)
        if value is not None:
            kwargs[key] = value
    kwargs.update(parse_overrides(args.set or []))
    if args.preset:
        return ExperimentConfig.from_preset(args.preset, **kwargs).validate()
    return ExperimentConfig(**kwargs).validate()


def _add_config_flags(p):
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--preset", help="dataset preset (chinatown, beetlefly, gunpoint, ...)")
    p.add_argument("--dataset")
    p.add_argument("--data-root", dest="data_root", help="directory holding <name>/<name>_TRAIN.tsv")
    p.add_argument("--train", dest="train_path")
    p.add_argument("--test", dest="test_path")
    p.add_argument("--seed", type=int)
    p.add_argument("--num-reads", dest="num_reads", type=int)
    p.add_argument("--num-sweeps", dest="num_sweeps", type=int)
    p.add_argument("--max-test", dest="max_test", type=int)
    p.add_argument("--metric")
    p.add_argument("--out", dest="output_dir")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")


def cmd_run(args):
    config = _config_from_args(args)
    report = run_experiment(config)
    acc = report.accuracy
    print(f"{report.dataset}: " + "/".join(f"{v:.2f}" for v in acc["per_class"].values())
          + f"/{acc['weighted']:.2f} (per class/weighted) over {len(report.items)} items")
    if config.output_dir:
        report.write(config.output_dir)
    return 0


def cmd_baseline(args):
    config = _config_from_args(args)
    report = run_baselines(config)
    for name, acc in (("1-NN DTW", report.knn_accuracy), ("2-medoid DTW", report.cluster_accuracy)):
        print(f"{report.dataset} {name}: " + "/".join(f"{v:.2f}" for v in acc["per_class"].values())
              + f"/{acc['weighted']:.2f}")
    if config.output_dir:
        report.write(config.output_dir)
    return 0


def cmd_solve(args):
    q = Qubo.load(args.qubo)
    if args.exhaustive:
        result = exhaustive(q)
    else:
        result = anneal(q, AnnealParams(args.num_reads, args.num_sweeps, seed=args.seed))
    text = result.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_encode(args):
    config = _config_from_args(args)
    dataset = load_config_dataset(config)
    if config.encoder == SAX:
        model = fit_sax(config.word_length, config.alphabet_size, len(dataset.train[0]))
    else:
        model = fit_sfa(dataset.train, config.word_length, config.alphabet_size,
                        config.include_dc, config.binning)
    lines = ["split\tid\tlabel\tword"]
    for split, series in (("train", dataset.train), ("test", dataset.test)):
        for ts in series:
            lines.append(f"{split}\t{ts.id}\t{ts.label}\t{encode(model, ts)}")
    text = "\n".join(lines) + "\n"
    if config.output_dir:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "words.tsv").write_text(text)
        (out / "encoder.json").write_text(model.to_json() + "\n")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsqubo", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="QUBO reconstruction + labeling over a dataset")
    _add_config_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("baseline", help="1-NN DTW and 2-medoid DTW baselines")
    _add_config_flags(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("solve", help="anneal a QUBO text file, CSV sample table out")
    p.add_argument("qubo")
    p.add_argument("--num-reads", type=int, default=100)
    p.add_argument("--num-sweeps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("encode", help="dump symbolic words for every series")
    _add_config_flags(p)
    p.set_defaults(func=cmd_encode)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # any stage failure -> nonzero exit
        print(f"tsqubo: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
