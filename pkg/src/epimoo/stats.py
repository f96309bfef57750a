"""Two-sided Wilcoxon signed-rank test.

Zero differences are dropped (Wilcoxon's prescription), tied absolute
differences get average ranks, and W = min(W+, W-).  For n <= 25 pairs the
p-value comes from exact enumeration of the signed-rank distribution
(a subset-sum count over doubled ranks, which stays exact under ties);
for larger n a normal approximation with tie correction and continuity
correction is used.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import rankdata

from epimoo.errors import DegenerateSampleError, DimensionError

EXACT_LIMIT = 25
SIGNIFICANCE_LEVEL = 0.05


def _exact_p_two_sided(doubled_ranks: np.ndarray, doubled_w: int) -> float:
    """P(W+ <= w) * 2 via the distribution of subset sums of the ranks."""
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in doubled_ranks:
        r = int(r)
        counts[r:] += counts[: total + 1 - r].copy()
    cdf = counts[: doubled_w + 1].sum() / counts.sum()
    return min(1.0, 2.0 * cdf)


def _normal_p_two_sided(w: float, ranks: np.ndarray) -> float:
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    variance -= (tie_counts**3 - tie_counts).sum() / 48.0
    if variance <= 0:
        raise DegenerateSampleError("all absolute differences tied at a single value")
    z = (w + 0.5 - mean) / math.sqrt(variance)  # continuity-corrected lower tail
    return min(1.0, math.erfc(-z / math.sqrt(2.0)))


def wilcoxon_signed_rank(baseline, variant) -> tuple[float, float]:
    """Paired two-sided test; returns (W, p).

    W is min(W+, W-) over the signed ranks of the non-zero paired
    differences baseline - variant.
    """
    baseline = np.asarray(baseline, dtype=float)
    variant = np.asarray(variant, dtype=float)
    if baseline.shape != variant.shape or baseline.ndim != 1:
        raise DimensionError("paired samples must be 1-D arrays of equal length")
    if not (np.all(np.isfinite(baseline)) and np.all(np.isfinite(variant))):
        raise ValueError("paired samples must be finite")

    diffs = baseline - variant
    diffs = diffs[diffs != 0.0]
    if len(diffs) == 0:
        raise DegenerateSampleError("all paired differences are zero")

    ranks = rankdata(np.abs(diffs))
    w_plus = ranks[diffs > 0].sum()
    w_minus = ranks[diffs < 0].sum()
    w = min(w_plus, w_minus)

    if len(diffs) <= EXACT_LIMIT:
        doubled = np.round(2.0 * ranks).astype(int)
        p = _exact_p_two_sided(doubled, int(round(2.0 * w)))
    else:
        p = _normal_p_two_sided(w, ranks)
    return float(w), float(p)
