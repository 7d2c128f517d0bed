"""Command-line entry points.

Exit codes: 0 success, 1 data problem (missing or malformed inputs),
2 configuration problem (bad keys, values, or command usage).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench as benchmod
from . import classifiers, experiment, metrics
from .config import ExperimentConfig, build_config, parse_config_file, validate_for
from .conllu import read_conllu
from .corpus import Document
from .errors import ConfigError, DataError
from .features import vectorize, write_feature_tsv
from .fusion import decide
from .possibility import to_possibility
from .signature import save_score_matrix


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stylosig", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-c", "--config", help="key = value config file")
        p.add_argument(
            "-O",
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config key (repeatable)",
        )
        p.add_argument("--output-dir", help="shortcut for -O output_dir=...")

    p = sub.add_parser("train", help="fit a stylome model on a whole corpus")
    common(p)

    p = sub.add_parser("attribute", help="attribute text files with a trained model")
    common(p)
    p.add_argument("--model", required=True, help="model .npz written by train")
    p.add_argument("--scores", help="also write the possibility matrix as CSV")
    p.add_argument("texts", nargs="+", help=".txt files to attribute")

    p = sub.add_parser("sigscore", help="baseline-score held-out signatures")
    common(p)

    p = sub.add_parser("chimeric", help="write the author+writer pairing manifest")
    common(p)

    p = sub.add_parser("eval", help="run the configured protocol end to end")
    common(p)

    p = sub.add_parser("bench", help="measure pipeline scaling on synthetic corpora")
    common(p)
    p.add_argument("--sizes", default="8,16,32", help="comma-separated docs per subject")
    p.add_argument("--repeats", type=int, default=5)

    return parser


def _config_from_args(args) -> ExperimentConfig:
    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {}
    problems = []
    for item in args.override:
        key, sep, value = item.partition("=")
        if not sep or not key.strip() or not value.strip():
            problems.append(f"override {item!r} is not KEY=VALUE")
            continue
        overrides[key.strip()] = value.strip()
    if problems:
        raise ConfigError(problems)
    if args.output_dir:
        overrides["output_dir"] = args.output_dir
    return build_config(file_values, overrides)


def cmd_train(args, config: ExperimentConfig) -> int:
    model, pooled = experiment.train_on_corpus(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    model_path = out / "model.npz"
    classifiers.save_model(model, model_path)
    write_feature_tsv(
        ((f, pooled[f]) for f in model.vocab.features), out / "vocabulary.tsv"
    )
    print(
        f"trained {config.classifier} on {model.n_subjects} subjects, "
        f"{len(model.vocab)} features -> {model_path}"
    )
    return 0


def _document_from_path(path: Path) -> Document:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    sidecar = path.with_suffix(".conllu")
    tree = read_conllu(sidecar) if sidecar.is_file() else None
    return Document(str(path), 0, text, tree)


def cmd_attribute(args, config: ExperimentConfig) -> int:
    model = classifiers.load_model(args.model)
    vocab = model.vocab
    rows = []
    for name in args.texts:
        doc = _document_from_path(Path(name))
        vector = vectorize(vocab.model.extract(doc), vocab)
        pi = to_possibility(classifiers.posterior(model, vector))
        subject, tie = decide(pi)
        rows.append((name, pi))
        flag = " (tie)" if tie else ""
        print(f"{name}\t{model.subject_labels[subject]}{flag}")
    if args.scores:
        from .signature import ScoreMatrix

        matrix = ScoreMatrix(
            tuple(name for name, _ in rows),
            model.subject_labels,
            np.vstack([pi for _, pi in rows]),
        )
        save_score_matrix(matrix, args.scores)
    return 0


def cmd_sigscore(args, config: ExperimentConfig) -> int:
    matrix = experiment.signature_matrix_from_dir(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "signature_scores.csv"
    save_score_matrix(matrix, path)
    print(f"scored {len(matrix.item_ids)} probes against {len(matrix.subject_labels)} writers -> {path}")
    return 0


def cmd_chimeric(args, config: ExperimentConfig) -> int:
    manifest = experiment.chimeric_manifest(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "chimeric.json"
    metrics.write_summary_json(manifest, path)
    counts = manifest["counts"]
    print(
        f"{counts['subjects']} chimeric subjects, {counts['test_items']} test items, "
        f"{counts['claims']} claims -> {path}"
    )
    return 0


def cmd_eval(args, config: ExperimentConfig) -> int:
    if config.protocol == "chimeric":
        result = experiment.run_chimeric(config)
    else:
        result = experiment.run_rolling(config)
    for name in sorted(result["summaries"]):
        summary = result["summaries"][name]
        acc = summary["accuracy"]
        print(
            f"{name}: accuracy {acc['value']:.4f} "
            f"[{acc['ci_low']:.4f}, {acc['ci_high']:.4f}], "
            f"best F {summary['best_fscore']['value']:.4f}, "
            f"MSH overlap {summary['msh_overlap']:.4f}"
        )
    print(f"bundles under {config.output_dir}")
    return 0


def cmd_bench(args, config: ExperimentConfig) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise ConfigError([f"--sizes {args.sizes!r} is not a comma-separated int list"]) from None
    try:
        report = benchmod.run_scaling(sizes, repeats=args.repeats)
    except ValueError as exc:
        raise ConfigError([str(exc)]) from None
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "sizes": list(report.sizes),
        "seconds": [list(t) for t in report.seconds],
        "mean_seconds": list(report.mean_seconds),
        "ratios": list(report.ratios),
        "loglog_slope": report.loglog_slope,
    }
    metrics.write_summary_json(payload, out / "bench.json")
    for size, mean in zip(report.sizes, report.mean_seconds):
        print(f"{size:6d} docs/subject: {mean:.4f}s")
    print(f"ratios: {', '.join(f'{r:.3f}' for r in report.ratios)}; log-log slope {report.loglog_slope:.3f}")
    return 0


_COMMANDS = {
    "train": cmd_train,
    "attribute": cmd_attribute,
    "sigscore": cmd_sigscore,
    "chimeric": cmd_chimeric,
    "eval": cmd_eval,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        validate_for(config, args.command)
        return _COMMANDS[args.command](args, config)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
