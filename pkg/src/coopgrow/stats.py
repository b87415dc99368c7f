"""Degree-distribution summaries used to verify the growth mechanisms."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .network import Network
from .simulation import _write_metadata

__all__ = [
    "DegreeHistogram",
    "InsufficientTailError",
    "degree_histogram",
    "exponential_tail_check",
    "powerlaw_exponent",
    "write_histogram_csv",
]


class InsufficientTailError(ValueError):
    """Raised when too few nodes lie above the requested degree cutoff."""


@dataclass
class DegreeHistogram:
    """Exact node counts per degree value; counts[k] = nodes of degree k."""

    counts: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.counts.sum())

    @property
    def max_degree(self) -> int:
        return len(self.counts) - 1


def degree_histogram(net: Network) -> DegreeHistogram:
    return DegreeHistogram(np.bincount(net.degrees))


def powerlaw_exponent(hist: DegreeHistogram, k_min: int) -> tuple[float, float]:
    """Maximum-likelihood power-law exponent of the tail k >= k_min.

    Uses the discrete estimator with the continuous half-step correction,

        gamma = 1 + m / sum_i ln(k_i / (k_min - 0.5)),

    over the m tail samples, with standard error (gamma - 1) / sqrt(m).
    Needs at least 100 tail samples spanning more than one degree value.
    """
    if k_min < 1:
        raise ValueError(f"k_min must be >= 1, got {k_min}")
    counts = hist.counts
    tail = counts[k_min:] if k_min < len(counts) else np.zeros(0, dtype=counts.dtype)
    m = int(tail.sum())
    if m < 100:
        raise InsufficientTailError(f"need >= 100 samples with degree >= {k_min}, got {m}")
    ks = np.nonzero(tail)[0] + k_min
    if len(ks) < 2:
        raise ValueError(f"degenerate tail: every sample has degree {ks[0]}")
    log_sum = float(np.sum(counts[ks] * np.log(ks / (k_min - 0.5))))
    gamma = 1.0 + m / log_sum
    return gamma, (gamma - 1.0) / np.sqrt(m)


def exponential_tail_check(hist: DegreeHistogram, k_min: int) -> tuple[float, float]:
    """Fit ln(survival) against degree for k >= k_min by least squares.

    Returns (decay rate, R^2): the rate is the negated slope, positive for
    an exponentially decaying tail. A high R^2 means the survival function
    is close to geometric; power-law tails fit visibly worse.
    """
    if k_min < 0:
        raise ValueError(f"k_min must be >= 0, got {k_min}")
    counts = hist.counts
    if k_min > hist.max_degree:
        raise InsufficientTailError(
            f"no nodes with degree >= {k_min} (max degree {hist.max_degree})"
        )
    # survival[k] = fraction of nodes with degree >= k, k = k_min..max_degree
    tail_counts = counts[k_min:]
    survival = tail_counts[::-1].cumsum()[::-1] / hist.n_nodes
    ks = np.arange(k_min, len(counts))
    keep = survival > 0
    ks, survival = ks[keep], survival[keep]
    if len(ks) < 3:
        raise InsufficientTailError(f"only {len(ks)} tail points above degree {k_min}")
    log_s = np.log(survival)
    slope, intercept = np.polyfit(ks, log_s, 1)
    residual = log_s - (slope * ks + intercept)
    total = log_s - log_s.mean()
    ss_tot = float(total @ total)
    if ss_tot == 0.0:
        raise ValueError("survival function is flat; no decay to fit")
    r_squared = 1.0 - float(residual @ residual) / ss_tot
    return float(-slope), r_squared


def write_histogram_csv(hist: DegreeHistogram, path, metadata: dict | None = None) -> None:
    """Write `k,count` rows (nonzero counts only) with a `#` metadata header."""
    own = isinstance(path, (str, os.PathLike))
    fh = open(path, "w") if own else path
    try:
        if metadata:
            _write_metadata(fh, metadata)
        fh.write("k,count\n")
        for k in np.nonzero(hist.counts)[0]:
            fh.write(f"{k},{hist.counts[k]}\n")
    finally:
        if own:
            fh.close()
