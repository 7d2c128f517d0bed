"""Probability-to-possibility transform.

The possibility of outcome j is the sum of min(p_a, p_j) over all
outcomes a.  Computed directly that is quadratic; sorting once turns each
entry into (sum of the probabilities <= p_j) + p_j * (count of larger
ones), which a cumulative sum answers in O(S log S) total.
"""

from __future__ import annotations

import numpy as np

SUM_TOLERANCE = 1e-6


def to_possibility(p) -> np.ndarray:
    """Map a probability vector to its possibility distribution.

    Input must be 1-D, non-negative, and sum to 1 within 1e-6.  Every
    argmax entry comes out exactly 1.0 and the output is clamped to
    [0, 1]; order is preserved (p_i <= p_j implies pi_i <= pi_j).
    """
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("expected a non-empty 1-D probability vector")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and non-negative")
    total = float(p.sum())
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise ValueError(f"probabilities must sum to 1 within {SUM_TOLERANCE}, got {total!r}")

    sorted_p = np.sort(p)
    cumulative = np.cumsum(sorted_p)
    # rank[j]: how many entries are <= p_j (>= 1 since p_j is among them)
    rank = np.searchsorted(sorted_p, p, side="right")
    pi = cumulative[rank - 1] + p * (p.size - rank)
    pi[p == p.max()] = 1.0  # the sum above lands within float error of 1
    return np.clip(pi, 0.0, 1.0)
