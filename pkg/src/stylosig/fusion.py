"""Score-level fusion of two match-score sources and the final decision rule."""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInputWarning

OPERATORS = ("average", "sum", "product")


def fuse(a, b, operator: str = "average") -> np.ndarray:
    """Combine two aligned score vectors (or matrices) elementwise.

    "average" keeps fused scores on the [0, 1] scale of the inputs; "sum"
    and "product" rank identically to it for two sources but are exposed
    for experimentation.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"score shapes differ: {a.shape} vs {b.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("scores must be finite")
    if operator == "average":
        return (a + b) / 2.0
    if operator == "sum":
        return a + b
    if operator == "product":
        return a * b
    raise ValueError(f"unknown fusion operator {operator!r}")


class Decision(NamedTuple):
    subject: int
    tie: bool


def decide(scores) -> Decision:
    """Pick the best-scoring subject; exact ties go to the lowest id, flagged."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1 or scores.size == 0:
        raise ValueError("expected a non-empty 1-D score vector")
    best = int(np.argmax(scores))
    tie = bool(np.count_nonzero(scores == scores[best]) > 1)
    if tie:
        warnings.warn("tied top score, keeping the lowest subject id", DegenerateInputWarning)
    return Decision(best, tie)
