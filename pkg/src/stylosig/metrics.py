"""Evaluation metrics for identification and verification experiments.

Verification metrics run over claims: every (test item, claimed subject)
pair, genuine when the claim names the item's true subject.  A claim is
accepted at threshold t when its score is >= t.  Identification metrics
(accuracy, CMC) run over the per-item score rows directly.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import DegenerateInputWarning
from .signature import ScoreMatrix

DEFAULT_GRID_POINTS = 101
DEFAULT_MSH_BINS = 20
DEFAULT_CONFIDENCE = 0.95


def default_grid(points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Evenly spaced thresholds covering [0, 1] inclusive."""
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    return np.arange(points) / (points - 1)


# ---------------------------------------------------------------------------
# claims

@dataclass(frozen=True)
class ClaimSet:
    scores: np.ndarray  # (N,) float64
    genuine: np.ndarray  # (N,) bool
    item_index: np.ndarray  # (N,) int, row of the source matrix
    claimed: np.ndarray  # (N,) int, claimed subject column

    @property
    def n_genuine(self) -> int:
        return int(self.genuine.sum())

    @property
    def n_imposter(self) -> int:
        return int((~self.genuine).sum())

    def __len__(self):
        return len(self.scores)


def expand_claims(matrix: ScoreMatrix, truth: Sequence[int]) -> ClaimSet:
    """Expand a score matrix into one claim per (item, subject) pair."""
    n_items, n_subjects = matrix.scores.shape
    truth = np.asarray(truth, dtype=np.int64)
    if truth.shape != (n_items,):
        raise ValueError("need one true subject per matrix row")
    if truth.min() < 0 or truth.max() >= n_subjects:
        raise ValueError("true subject out of range")
    item_index = np.repeat(np.arange(n_items), n_subjects)
    claimed = np.tile(np.arange(n_subjects), n_items)
    return ClaimSet(
        scores=matrix.scores.reshape(-1).copy(),
        genuine=claimed == truth[item_index],
        item_index=item_index,
        claimed=claimed,
    )


def confusion(claims: ClaimSet, threshold: float) -> tuple[int, int, int, int]:
    """(TP, FP, FN, TN) when accepting scores >= threshold."""
    accept = claims.scores >= threshold
    tp = int(np.count_nonzero(accept & claims.genuine))
    fp = int(np.count_nonzero(accept & ~claims.genuine))
    fn = claims.n_genuine - tp
    tn = claims.n_imposter - fp
    return tp, fp, fn, tn


# ---------------------------------------------------------------------------
# accuracy with confidence intervals

@dataclass(frozen=True)
class AccuracyReport:
    accuracy: float
    ci_low: float
    ci_high: float
    method: str
    n: int
    confidence: float


def accuracy(correct=None, *, folds=None, confidence: float = DEFAULT_CONFIDENCE) -> AccuracyReport:
    """Point accuracy with a confidence interval.

    Pass ``correct`` (per-item booleans) for a normal-approximation
    interval, or ``folds`` (per-fold accuracies) for a Student-t interval
    over the fold mean.  Bounds are reported raw, without clamping to
    [0, 1].
    """
    if (correct is None) == (folds is None):
        raise ValueError("pass exactly one of correct= or folds=")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    if correct is not None:
        correct = np.asarray(correct, dtype=bool)
        n = correct.size
        if n == 0:
            raise ValueError("no decisions to score")
        p = float(correct.mean())
        z = float(stats.norm.ppf(1.0 - (1.0 - confidence) / 2.0))
        half = z * math.sqrt(p * (1.0 - p) / n)
        return AccuracyReport(p, p - half, p + half, "wald", n, confidence)
    folds = np.asarray(folds, dtype=np.float64)
    n = folds.size
    if n < 2:
        raise ValueError("need at least 2 folds for a t interval")
    mean = float(folds.mean())
    sd = float(folds.std(ddof=1))
    t = float(stats.t.ppf(1.0 - (1.0 - confidence) / 2.0, df=n - 1))
    half = t * sd / math.sqrt(n)
    return AccuracyReport(mean, mean - half, mean + half, "student-t", n, confidence)


# ---------------------------------------------------------------------------
# threshold curves

@dataclass(frozen=True)
class Curve:
    xs: np.ndarray
    ys: np.ndarray
    x_name: str
    y_name: str


@dataclass(frozen=True)
class DetCurve:
    thresholds: np.ndarray
    far: np.ndarray
    frr: np.ndarray
    area: float


def _accept_counts(claims: ClaimSet, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # (G,) true accepts and false accepts per threshold
    accept = claims.scores[None, :] >= grid[:, None]
    tp = accept[:, claims.genuine].sum(axis=1)
    fp = accept[:, ~claims.genuine].sum(axis=1)
    return tp, fp


def fscore(claims: ClaimSet, threshold: float) -> float:
    """F-measure 2TP / (2TP + FP + FN); empty denominator scores 0 with a warning."""
    tp, fp, fn, _ = confusion(claims, threshold)
    denom = 2 * tp + fp + fn
    if denom == 0:
        warnings.warn("F-measure undefined (no genuine claims, none accepted)", DegenerateInputWarning)
        return 0.0
    return 2.0 * tp / denom


def fscore_curve(claims: ClaimSet, grid: np.ndarray | None = None) -> Curve:
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    tp, fp = _accept_counts(claims, grid)
    fn = claims.n_genuine - tp
    denom = 2 * tp + fp + fn
    if np.any(denom == 0):
        warnings.warn("F-measure undefined at some thresholds, reporting 0", DegenerateInputWarning)
    ys = np.where(denom == 0, 0.0, 2.0 * tp / np.where(denom == 0, 1, denom))
    return Curve(grid, ys, "threshold", "fscore")


def recall_curve(claims: ClaimSet, grid: np.ndarray | None = None) -> Curve:
    """Recall (true accept rate over genuine claims) across the threshold sweep."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if claims.n_genuine == 0:
        raise ValueError("recall needs at least one genuine claim")
    tp, _ = _accept_counts(claims, grid)
    return Curve(grid, tp / claims.n_genuine, "threshold", "recall")


def det_curve(claims: ClaimSet, grid: np.ndarray | None = None) -> DetCurve:
    """FAR/FRR tradeoff over the sweep, with trapezoid area under FRR(FAR)."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if claims.n_genuine == 0 or claims.n_imposter == 0:
        raise ValueError("DET needs both genuine and imposter claims")
    tp, fp = _accept_counts(claims, grid)
    far = fp / claims.n_imposter
    frr = (claims.n_genuine - tp) / claims.n_genuine
    area = float(abs(np.trapezoid(frr, far)))
    return DetCurve(grid, far, frr, area)


# ---------------------------------------------------------------------------
# identification: ranks and CMC

def genuine_ranks(matrix: ScoreMatrix, truth: Sequence[int]) -> np.ndarray:
    """Pessimistic rank of each item's true subject (ties count as worse)."""
    truth = np.asarray(truth, dtype=np.int64)
    n_items, n_subjects = matrix.scores.shape
    if truth.shape != (n_items,):
        raise ValueError("need one true subject per matrix row")
    if truth.min() < 0 or truth.max() >= n_subjects:
        raise ValueError("true subject out of range")
    own = matrix.scores[np.arange(n_items), truth]
    return (matrix.scores >= own[:, None]).sum(axis=1)


def cmc_curve(matrix: ScoreMatrix, truth: Sequence[int]) -> Curve:
    """Fraction of items whose true subject ranks within the top k, for k=1..S."""
    ranks = genuine_ranks(matrix, truth)
    n_subjects = matrix.scores.shape[1]
    ks = np.arange(1, n_subjects + 1)
    ys = (ranks[None, :] <= ks[:, None]).mean(axis=1)
    return Curve(ks.astype(np.float64), ys, "rank", "identification_rate")


# ---------------------------------------------------------------------------
# match-score histograms

@dataclass(frozen=True)
class MatchScoreHistogram:
    edges: np.ndarray  # (bins + 1,)
    genuine: np.ndarray  # (bins,) frequencies, sum 1 when the class is non-empty
    imposter: np.ndarray
    n_genuine: int
    n_imposter: int
    overlap: float


def _bin_indices(scores: np.ndarray, edges: np.ndarray) -> np.ndarray:
    # right-open bins except the last, which also takes scores == 1.0
    idx = np.searchsorted(edges, scores, side="right") - 1
    return np.clip(idx, 0, len(edges) - 2)


def msh(claims: ClaimSet, bins: int = DEFAULT_MSH_BINS) -> MatchScoreHistogram:
    """Genuine and imposter score histograms over [0, 1] plus their overlap.

    Overlap is the summed bin-wise minimum of the two normalized
    histograms: 0 for perfectly separated classes, 1 for identical ones.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if np.any(claims.scores < 0.0) or np.any(claims.scores > 1.0):
        raise ValueError("match scores must lie in [0, 1]")
    edges = np.arange(bins + 1) / bins
    gen_scores = claims.scores[claims.genuine]
    imp_scores = claims.scores[~claims.genuine]
    gen_counts = np.bincount(_bin_indices(gen_scores, edges), minlength=bins).astype(np.float64)
    imp_counts = np.bincount(_bin_indices(imp_scores, edges), minlength=bins).astype(np.float64)
    if gen_scores.size == 0 or imp_scores.size == 0:
        warnings.warn("one claim class is empty, overlap is trivially 0", DegenerateInputWarning)
    genuine = gen_counts / gen_scores.size if gen_scores.size else gen_counts
    imposter = imp_counts / imp_scores.size if imp_scores.size else imp_counts
    overlap = float(np.minimum(genuine, imposter).sum())
    return MatchScoreHistogram(edges, genuine, imposter, gen_scores.size, imp_scores.size, overlap)


# ---------------------------------------------------------------------------
# paired comparison

@dataclass(frozen=True)
class TTestResult:
    statistic: float
    pvalue: float
    df: int
    degenerate: bool


def paired_ttest(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-sided paired t-test on matched samples.

    Zero-variance differences make the statistic undefined; that case is
    flagged and scored p=0 when the means differ, p=1 when they do not.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("paired samples must be 1-D and the same length")
    n = a.size
    if n < 2:
        raise ValueError("need at least 2 pairs")
    d = a - b
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    df = n - 1
    if sd == 0.0:
        warnings.warn("zero-variance differences, t statistic undefined", DegenerateInputWarning)
        if mean == 0.0:
            return TTestResult(0.0, 1.0, df, True)
        return TTestResult(math.copysign(math.inf, mean), 0.0, df, True)
    t = mean / (sd / math.sqrt(n))
    p = 2.0 * float(stats.t.sf(abs(t), df=df))
    return TTestResult(t, p, df, False)


# ---------------------------------------------------------------------------
# deterministic exports

def _fmt(value) -> str:
    return repr(float(value))


def write_curve_csv(curve: Curve, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([curve.x_name, curve.y_name])
        for x, y in zip(curve.xs, curve.ys):
            writer.writerow([_fmt(x), _fmt(y)])


def write_det_csv(det: DetCurve, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["threshold", "far", "frr"])
        for t, fa, fr in zip(det.thresholds, det.far, det.frr):
            writer.writerow([_fmt(t), _fmt(fa), _fmt(fr)])


def write_msh_csv(hist: MatchScoreHistogram, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bin_low", "bin_high", "genuine", "imposter"])
        for i in range(len(hist.genuine)):
            writer.writerow(
                [_fmt(hist.edges[i]), _fmt(hist.edges[i + 1]), _fmt(hist.genuine[i]), _fmt(hist.imposter[i])]
            )


def write_summary_json(summary: dict, path: str | Path) -> None:
    """Stable JSON: sorted keys, two-space indent, trailing newline."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
