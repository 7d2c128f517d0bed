"""Online signature data, the direction-histogram matcher, and score matrices.

Signature capture files hold one point per line (x y t pen, optionally
azimuth altitude pressure) after a first line giving the point count.
The baseline matcher reduces a signature to a histogram of stroke
directions and scores a probe against a set of templates by histogram
intersection, so it is translation- and time-shift-invariant by
construction.
"""

from __future__ import annotations

import csv
import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, DegenerateInputWarning

DEFAULT_DELTA_ALPHA = 25.0
GENUINE_PER_WRITER = 20

_SVC_NAME = re.compile(r"^U(\d+)S(\d+)\.txt$", re.IGNORECASE)


@dataclass(frozen=True)
class SignatureSample:
    writer: int
    index: int
    points: np.ndarray  # (P, 4) or (P, 7) int64: x y t pen [az alt pressure]

    @property
    def item_id(self) -> str:
        return f"U{self.writer}S{self.index}"


@dataclass(frozen=True)
class SignatureCorpus:
    writers: tuple[int, ...]
    by_writer: dict[int, tuple[SignatureSample, ...]]

    def __len__(self):
        return sum(len(v) for v in self.by_writer.values())


def _parse_sample(path: Path, writer: int, index: int) -> SignatureSample:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise DataError(f"{path}: empty file")
    try:
        declared = int(lines[0].split()[0])
    except (ValueError, IndexError):
        raise DataError(f"{path}:1: expected the point count") from None
    rows = []
    width = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if width is None:
            if len(parts) not in (4, 7):
                raise DataError(f"{path}:{lineno}: expected 4 or 7 columns, got {len(parts)}")
            width = len(parts)
        elif len(parts) != width:
            raise DataError(f"{path}:{lineno}: expected {width} columns, got {len(parts)}")
        try:
            rows.append([int(v) for v in parts])
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-integer value") from None
    if len(rows) != declared:
        raise DataError(f"{path}: declared {declared} points but found {len(rows)}")
    if not rows:
        raise DataError(f"{path}: no points")
    return SignatureSample(writer, index, np.array(rows, dtype=np.int64))


def load_svc(root: str | Path, genuine_max: int = GENUINE_PER_WRITER) -> SignatureCorpus:
    """Load U{writer}S{sample}.txt capture files under ``root``.

    Samples numbered above ``genuine_max`` are skilled forgeries in this
    naming scheme and are skipped; only genuine samples are returned.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"signature root {root} is not a directory")
    found: dict[int, list[SignatureSample]] = {}
    for path in sorted(root.iterdir()):
        match = _SVC_NAME.match(path.name)
        if not match:
            continue
        writer, index = int(match.group(1)), int(match.group(2))
        if index > genuine_max:
            continue
        found.setdefault(writer, []).append(_parse_sample(path, writer, index))
    if not found:
        raise DataError(f"no signature files named like U1S1.txt under {root}")
    writers = tuple(sorted(found))
    by_writer = {w: tuple(sorted(found[w], key=lambda s: s.index)) for w in writers}
    return SignatureCorpus(writers, by_writer)


# ---------------------------------------------------------------------------
# direction histograms

@dataclass(frozen=True)
class DirectionHistogram:
    delta_alpha: float
    weights: np.ndarray  # (B,), sums to 1 when any stroke direction exists
    n_angles: int


def stroke_angles(points: np.ndarray) -> np.ndarray:
    """Directions (degrees in [0, 360)) of pen-down steps with real motion."""
    pen = points[:, 3]
    dx = np.diff(points[:, 0].astype(np.float64))
    dy = np.diff(points[:, 1].astype(np.float64))
    keep = (pen[:-1] == 1) & (pen[1:] == 1) & ((dx != 0) | (dy != 0))
    return np.degrees(np.arctan2(dy[keep], dx[keep])) % 360.0


def direction_histogram(sample: SignatureSample, delta_alpha: float = DEFAULT_DELTA_ALPHA) -> DirectionHistogram:
    """Soft-binned histogram of stroke directions.

    Bin centers sit at multiples of delta_alpha; each angle splits unit
    mass linearly between its two nearest centers (wrapping at 360), and
    the histogram is normalized by the number of angles.
    """
    if not 0.0 < delta_alpha <= 360.0:
        raise ValueError("delta_alpha must be in (0, 360]")
    n_bins = math.ceil(360.0 / delta_alpha)
    angles = stroke_angles(sample.points)
    weights = np.zeros(n_bins, dtype=np.float64)
    if angles.size:
        offset = angles / delta_alpha
        lower = np.floor(offset).astype(np.int64) % n_bins
        frac = offset - np.floor(offset)
        np.add.at(weights, lower, 1.0 - frac)
        np.add.at(weights, (lower + 1) % n_bins, frac)
        weights /= angles.size
    return DirectionHistogram(delta_alpha, weights, int(angles.size))


def intersection(a: DirectionHistogram, b: DirectionHistogram) -> float:
    if a.weights.shape != b.weights.shape:
        raise ValueError("histograms have different bin counts")
    return float(np.minimum(a.weights, b.weights).sum())


def baseline_score(templates, probe: SignatureSample, delta_alpha: float = DEFAULT_DELTA_ALPHA) -> float:
    """Best histogram intersection between the probe and any template.

    A probe with no pen-down motion matches nothing and scores 0.0 (with
    a warning); templates without motion are skipped the same way.
    """
    templates = list(templates)
    if not templates:
        raise ValueError("need at least one template signature")
    probe_hist = direction_histogram(probe, delta_alpha)
    if probe_hist.n_angles == 0:
        warnings.warn("probe signature has no pen-down motion", DegenerateInputWarning)
        return 0.0
    best = 0.0
    usable = 0
    for template in templates:
        hist = direction_histogram(template, delta_alpha)
        if hist.n_angles == 0:
            continue
        usable += 1
        best = max(best, intersection(hist, probe_hist))
    if usable == 0:
        warnings.warn("no template signature has pen-down motion", DegenerateInputWarning)
        return 0.0
    return best


# ---------------------------------------------------------------------------
# score matrices (ours, or imported from an external matcher)

@dataclass(frozen=True)
class ScoreMatrix:
    item_ids: tuple[str, ...]
    subject_labels: tuple[str, ...]
    scores: np.ndarray  # (items, subjects) float64 in [0, 1]

    def __post_init__(self):
        if self.scores.shape != (len(self.item_ids), len(self.subject_labels)):
            raise ValueError("score matrix shape does not match its labels")


def score_matrix_from_templates(probes, template_sets, subject_labels, delta_alpha=DEFAULT_DELTA_ALPHA) -> ScoreMatrix:
    """Score every probe against every subject's template set.

    ``probes`` is a list of (item_id, sample); histograms are computed once
    per sample, which keeps the full matrix linear in the data size.
    """
    template_hists = [
        [h for h in (direction_histogram(t, delta_alpha) for t in templates) if h.n_angles > 0]
        for templates in template_sets
    ]
    if len(template_hists) != len(subject_labels):
        raise ValueError("one template set per subject label required")
    item_ids = []
    rows = np.zeros((len(probes), len(subject_labels)), dtype=np.float64)
    for i, (item_id, probe) in enumerate(probes):
        item_ids.append(item_id)
        probe_hist = direction_histogram(probe, delta_alpha)
        if probe_hist.n_angles == 0:
            warnings.warn(f"probe {item_id} has no pen-down motion", DegenerateInputWarning)
            continue
        for j, hists in enumerate(template_hists):
            if hists:
                rows[i, j] = max(intersection(h, probe_hist) for h in hists)
    return ScoreMatrix(tuple(item_ids), tuple(subject_labels), rows)


def save_score_matrix(matrix: ScoreMatrix, path: str | Path) -> None:
    """Write scores as CSV; floats are printed with repr so they reload bit-exactly."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["item_id", *matrix.subject_labels])
        for item_id, row in zip(matrix.item_ids, matrix.scores):
            writer.writerow([item_id, *(repr(float(v)) for v in row)])


def load_score_matrix(path: str | Path) -> ScoreMatrix:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty score matrix") from None
            if not header or header[0] != "item_id" or len(header) < 2:
                raise DataError(f"{path}: header must be item_id followed by subject labels")
            labels = tuple(header[1:])
            item_ids = []
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(header):
                    raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
                item_ids.append(row[0])
                try:
                    values = [float(v) for v in row[1:]]
                except ValueError:
                    raise DataError(f"{path}:{lineno}: non-numeric score") from None
                rows.append(values)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: no score rows")
    if len(set(item_ids)) != len(item_ids):
        raise DataError(f"{path}: duplicate item ids")
    scores = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(scores)) or scores.min() < 0.0 or scores.max() > 1.0:
        raise DataError(f"{path}: scores must be finite and within [0, 1]")
    return ScoreMatrix(tuple(item_ids), labels, scores)
