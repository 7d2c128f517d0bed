"""Sweep the vocabulary profile size over a rolling-window evaluation.

For each profile size the full protocol is rerun from scratch and one line
is printed: accuracy with its interval, best F score, and the match score
histogram overlap.  Reports land in OUT/m{size} for closer inspection.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from stylosig.config import build_config
from stylosig.experiment import run_rolling


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus_dir", type=Path, help="corpus root (one directory per subject)")
    parser.add_argument("--sizes", default="500,1000,2000,5000,10000", help="comma-separated profile sizes")
    parser.add_argument("--train-window", type=int, default=8)
    parser.add_argument("--test-window", type=int, default=5)
    parser.add_argument("--orders", default="1,2", help="n-gram orders, e.g. 1,2")
    parser.add_argument("--alpha", type=float, default=0.01)
    parser.add_argument("--classifier", choices=("mnb", "pnb"), default="mnb")
    parser.add_argument("--out", type=Path, default=Path("out/sweep"))
    args = parser.parse_args(argv)

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    for m in sizes:
        config = build_config(
            overrides={
                "corpus_dir": str(args.corpus_dir),
                "train_window": str(args.train_window),
                "test_window": str(args.test_window),
                "ngram_orders": args.orders,
                "alpha": str(args.alpha),
                "classifier": args.classifier,
                "profile_size": str(m),
                "output_dir": str(args.out / f"m{m}"),
            }
        )
        summary = run_rolling(config)["summaries"][args.classifier]
        acc = summary["accuracy"]
        fold = summary["fold_accuracy"]
        print(
            f"m={m:>6}  accuracy {acc['value']:.4f} [{acc['ci_low']:.4f}, {acc['ci_high']:.4f}]  "
            f"fold mean {fold['mean']:.4f}  best F {summary['best_fscore']['value']:.4f}  "
            f"MSH overlap {summary['msh_overlap']:.4f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
