"""Descriptive statistics and the Wilcoxon signed-rank paired test.

The Wilcoxon statistic is min(W+, W-). The two-sided p-value is exact — from
the full distribution of signed-rank sums over all sign assignments — whenever
there are at most 25 nonzero differences and no tied magnitudes; otherwise a
normal approximation with tie correction and a 0.5 continuity correction is
used. Zero differences are dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from potionlab import _kernels

__all__ = [
    "DescriptiveStats",
    "WilcoxonResult",
    "descriptive_stats",
    "wilcoxon_signed_rank",
    "EXACT_LIMIT",
]

EXACT_LIMIT = 25


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    sd: float
    min: float
    q1: float
    median: float
    q3: float
    max: float


class WilcoxonResult(NamedTuple):
    w: float
    p: float
    n_effective: int


def _quantile(sorted_values: Sequence[float], fraction: float) -> float:
    """Linear interpolation between order statistics at (n-1) * fraction."""
    n = len(sorted_values)
    if n == 1:
        return float(sorted_values[0])
    position = (n - 1) * fraction
    lo = math.floor(position)
    hi = min(lo + 1, n - 1)
    weight = position - lo
    return sorted_values[lo] + (sorted_values[hi] - sorted_values[lo]) * weight


def descriptive_stats(values: Sequence[float]) -> DescriptiveStats:
    """Five-number summary plus mean and sample sd (n-1; 0 for a singleton)."""
    if len(values) == 0:
        raise ValueError("descriptive_stats needs at least one value")
    ordered = sorted(float(v) for v in values)
    n = len(ordered)
    mean = sum(ordered) / n
    if n > 1:
        sd = math.sqrt(sum((v - mean) ** 2 for v in ordered) / (n - 1))
    else:
        sd = 0.0
    return DescriptiveStats(
        n=n,
        mean=mean,
        sd=sd,
        min=ordered[0],
        q1=_quantile(ordered, 0.25),
        median=_quantile(ordered, 0.5),
        q3=_quantile(ordered, 0.75),
        max=ordered[-1],
    )


def _midranks(magnitudes: Sequence[float]) -> list[float]:
    """Ranks of the values with tied runs sharing their average rank."""
    order = sorted(range(len(magnitudes)), key=lambda i: magnitudes[i])
    ranks = [0.0] * len(magnitudes)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and magnitudes[order[j + 1]] == magnitudes[order[i]]:
            j += 1
        average = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def _exact_two_sided_p(w: float, n: int) -> float:
    counts = _kernels.signed_rank_counts(n)
    cumulative = sum(counts[: int(w) + 1])
    return min(1.0, 2.0 * cumulative / 2**n)


def _approx_two_sided_p(w: float, ranks: Sequence[float]) -> float:
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0
    # tie correction: each run of t equal magnitudes removes (t^3 - t) / 48
    seen: dict[float, int] = {}
    for r in ranks:
        seen[r] = seen.get(r, 0) + 1
    for t in seen.values():
        if t > 1:
            variance -= (t**3 - t) / 48.0
    if variance <= 0:
        return 1.0
    z = (w - mean + 0.5) / math.sqrt(variance)
    if z >= 0:
        return 1.0
    return math.erfc(-z / math.sqrt(2.0))


def wilcoxon_signed_rank(
    pre: Sequence[float], post: Sequence[float], method: str = "auto"
) -> WilcoxonResult:
    """Two-sided paired test on post - pre.

    method: "auto" (exact when possible, see module docstring), "exact"
    (raises if ties or too many pairs), or "approx".
    """
    if len(pre) != len(post):
        raise ValueError(f"paired samples differ in length: {len(pre)} vs {len(post)}")
    if len(pre) == 0:
        raise ValueError("paired test needs at least one pair")
    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")

    diffs = [float(b) - float(a) for a, b in zip(pre, post)]
    nonzero = [d for d in diffs if d != 0.0]
    n = len(nonzero)
    if n == 0:
        return WilcoxonResult(w=0.0, p=1.0, n_effective=0)

    magnitudes = [abs(d) for d in nonzero]
    ranks = _midranks(magnitudes)
    w_plus = sum(r for r, d in zip(ranks, nonzero) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, nonzero) if d < 0)
    w = min(w_plus, w_minus)

    has_ties = len(set(magnitudes)) != n
    if method == "auto":
        method = "exact" if (n <= EXACT_LIMIT and not has_ties) else "approx"
    if method == "exact":
        if has_ties:
            raise ValueError("exact p-value is undefined with tied magnitudes")
        if n > 62:
            raise ValueError(f"exact p-value unavailable for n={n}")
        p = _exact_two_sided_p(w, n)
    else:
        p = _approx_two_sided_p(w, ranks)
    return WilcoxonResult(w=float(w), p=p, n_effective=n)
