"""Ensemble protocols: the cooperation phase transition and fixation curves.

Both experiments grow ensembles of independent realizations under defector
influx (newcomers never cooperate). Trials get their seeds from
``derive_seed(master_seed, tag, trial_index)``, so results are reproducible,
extendable by index, and identical for any worker count: the worker pool
only changes wall time, never the aggregation order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .network import GrowthMechanism
from .seeds import derive_seed
from .simulation import SimParams, _write_metadata, _fmt, run_realization, stationary_mean

__all__ = [
    "FixationCurve",
    "NoTransitionError",
    "RcEstimate",
    "SeedSizeNotFound",
    "TransitionCurve",
    "cooperative_seed_size",
    "estimate_rc",
    "fixation_probability",
    "transition_curve",
    "wilson_interval",
    "write_fixation_csv",
    "write_transition_csv",
]


class NoTransitionError(ValueError):
    """The curve never crosses the threshold inside the sampled r range."""


class SeedSizeNotFound(ValueError):
    """No initial cooperator count reached fixation probability ~ 1."""


@dataclass
class TransitionCurve:
    """Ensemble means of the stationary cooperation fraction per r value."""

    r_values: np.ndarray
    mean_coop: np.ndarray
    stderr: np.ndarray
    nonstationary_frac: np.ndarray
    realizations: int
    mechanism: GrowthMechanism
    L: int
    beta: float
    n: float
    ni: int
    nmax: int
    window: int
    master_seed: int

    def metadata(self) -> dict:
        return {
            "mechanism": self.mechanism.value,
            "L": self.L,
            "beta": self.beta,
            "n": self.n,
            "pc_growth": 0.0,
            "ni": self.ni,
            "nmax": self.nmax,
            "window": self.window,
            "realizations": self.realizations,
            "master_seed": self.master_seed,
        }


@dataclass
class FixationCurve:
    """Fraction of majority-cooperative runs per initial cooperator count."""

    ni_values: np.ndarray
    successes: np.ndarray
    trials: int
    pf: np.ndarray
    wilson_low: np.ndarray
    wilson_high: np.ndarray
    r: float
    n_target: int
    mechanism: GrowthMechanism
    L: int
    beta: float
    n: float
    master_seed: int

    def metadata(self) -> dict:
        return {
            "mechanism": self.mechanism.value,
            "L": self.L,
            "beta": self.beta,
            "n": self.n,
            "pc_growth": 0.0,
            "r": self.r,
            "M": self.trials,
            "n_target": self.n_target,
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True)
class RcEstimate:
    """Bracket around the critical benefit-cost ratio."""

    lower: float
    upper: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _transition_task(task) -> tuple[float, bool]:
    params, ni, nmax, window = task
    return stationary_mean(run_realization(params, ni, nmax), window)


def _fixation_task(task) -> bool:
    params, ni, n_target = task
    return run_realization(params, ni, n_target).final_fraction > 0.5


def _run_tasks(fn, tasks, workers: int) -> list:
    if workers <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def transition_curve(
    *,
    mechanism: GrowthMechanism,
    L: int,
    beta: float,
    n: float,
    r_grid,
    ni: int,
    nmax: int,
    realizations: int,
    master_seed: int,
    window: int = 50,
    workers: int = 1,
) -> TransitionCurve:
    """Sweep r over an ascending grid of defector-influx ensembles.

    For each r, ``realizations`` independent runs grow a core of ``ni``
    cooperators to ``nmax`` under pc_growth = 0; the per-run stationary means
    are averaged, with their standard error and the fraction of runs whose
    stationarity check failed.
    """
    r_grid = np.asarray(r_grid, dtype=np.float64)
    if len(r_grid) == 0:
        raise ValueError("r grid is empty")
    if np.any(np.diff(r_grid) <= 0):
        raise ValueError("r grid must be strictly ascending")
    if realizations < 1:
        raise ValueError(f"need at least one realization, got {realizations}")
    tasks = []
    for ri, r in enumerate(r_grid):
        for k in range(realizations):
            seed = derive_seed(master_seed, "transition", ri * realizations + k)
            params = SimParams(
                r=float(r), beta=beta, n=n, L=L,
                mechanism=mechanism, pc_growth=0.0, seed=seed,
            )
            tasks.append((params, ni, nmax, window))
    results = _run_tasks(_transition_task, tasks, workers)
    means = np.array([m for m, _ in results]).reshape(len(r_grid), realizations)
    flags = np.array([f for _, f in results]).reshape(len(r_grid), realizations)
    if realizations > 1:
        stderr = means.std(axis=1, ddof=1) / math.sqrt(realizations)
    else:
        stderr = np.zeros(len(r_grid))
    return TransitionCurve(
        r_values=r_grid,
        mean_coop=means.mean(axis=1),
        stderr=stderr,
        nonstationary_frac=1.0 - flags.mean(axis=1),
        realizations=realizations,
        mechanism=mechanism,
        L=L,
        beta=beta,
        n=n,
        ni=ni,
        nmax=nmax,
        window=window,
        master_seed=master_seed,
    )


def estimate_rc(
    curve,
    means=None,
    threshold: float = 0.5,
    *,
    evaluate=None,
    tol: float = 0.1,
) -> RcEstimate:
    """Bracket the r value where the ensemble mean crosses ``threshold``.

    Accepts a TransitionCurve or a pair of (r_values, means) arrays. The
    bracket is the last upward grid crossing: the largest r whose mean lies
    below the threshold, paired with the next grid point at or above it
    (for a monotone curve this is exactly the largest-below / smallest-above
    pair). Pass ``evaluate`` (a callable r -> ensemble mean) to narrow the
    bracket by bisection until its width is at most ``tol``.
    """
    if isinstance(curve, TransitionCurve):
        r_values, means = curve.r_values, curve.mean_coop
    else:
        r_values = np.asarray(curve, dtype=np.float64)
        means = np.asarray(means, dtype=np.float64)
    if means is None or len(r_values) != len(means):
        raise ValueError("need matching r and mean arrays")
    below = means < threshold
    if not below.any():
        raise NoTransitionError(f"every sampled mean is already >= {threshold}")
    lo_idx = int(np.nonzero(below)[0][-1])
    if lo_idx + 1 >= len(r_values):
        raise NoTransitionError(f"no r in the grid reaches a mean >= {threshold}")
    lower, upper = float(r_values[lo_idx]), float(r_values[lo_idx + 1])
    if evaluate is not None:
        while upper - lower > tol:
            mid = 0.5 * (lower + upper)
            if evaluate(mid) >= threshold:
                upper = mid
            else:
                lower = mid
    return RcEstimate(lower, upper)


def wilson_interval(successes, trials: int, z: float = 1.959963984540054):
    """Wilson 95% score interval for a binomial proportion (vectorized).

    The default z is the 97.5% standard-normal quantile.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    s = np.asarray(successes, dtype=np.float64)
    phat = s / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * np.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    return center - half, center + half


def fixation_probability(
    *,
    mechanism: GrowthMechanism,
    L: int,
    beta: float,
    n: float,
    r: float,
    ni_list,
    M: int,
    n_target: int,
    master_seed: int,
    workers: int = 1,
) -> FixationCurve:
    """Estimate the chance a cooperator core of each size survives growth.

    For every initial size in ``ni_list``, M independent runs grow to
    ``n_target`` under defector influx; a run counts as fixed when it ends
    with a cooperation fraction above one half. Uncertainty per point is the
    Wilson 95% interval.
    """
    ni_values = np.asarray(list(ni_list), dtype=np.int64)
    if len(ni_values) == 0:
        raise ValueError("ni list is empty")
    if np.any(np.diff(ni_values) <= 0):
        raise ValueError("ni list must be strictly ascending")
    if M < 1:
        raise ValueError(f"need at least one trial, got M={M}")
    if n_target < ni_values[-1]:
        raise ValueError(f"target size {n_target} below largest core {ni_values[-1]}")
    tasks = []
    for ii, ni in enumerate(ni_values):
        for k in range(M):
            seed = derive_seed(master_seed, "fixation", ii * M + k)
            params = SimParams(
                r=r, beta=beta, n=n, L=L,
                mechanism=mechanism, pc_growth=0.0, seed=seed,
            )
            tasks.append((params, int(ni), n_target))
    results = _run_tasks(_fixation_task, tasks, workers)
    fixed = np.array(results, dtype=np.int64).reshape(len(ni_values), M)
    successes = fixed.sum(axis=1)
    low, high = wilson_interval(successes, M)
    return FixationCurve(
        ni_values=ni_values,
        successes=successes,
        trials=M,
        pf=successes / M,
        wilson_low=low,
        wilson_high=high,
        r=r,
        n_target=n_target,
        mechanism=mechanism,
        L=L,
        beta=beta,
        n=n,
        master_seed=master_seed,
    )


def cooperative_seed_size(curve: FixationCurve, eps: float | None = None) -> int:
    """Smallest initial size whose fixation probability stays >= 1 - eps.

    Every larger sampled size must also stay above 1 - eps, so a noise dip
    after a first crossing moves the estimate to the later crossing.
    ``eps`` defaults to 2 / trials.
    """
    if eps is None:
        eps = 2.0 / curve.trials
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    ok = curve.pf >= 1.0 - eps
    failing = np.nonzero(~ok)[0]
    if len(failing) == 0:
        return int(curve.ni_values[0])
    if failing[-1] == len(ok) - 1:
        raise SeedSizeNotFound(
            f"no sampled core size holds fixation probability >= {1 - eps:.4g}"
        )
    return int(curve.ni_values[failing[-1] + 1])


def write_transition_csv(curve: TransitionCurve, path, metadata: dict | None = None) -> None:
    """Write `r,mean_coop,stderr,nonstationary_frac,realizations` rows."""
    own = isinstance(path, (str, os.PathLike))
    fh = open(path, "w") if own else path
    try:
        _write_metadata(fh, curve.metadata() if metadata is None else metadata)
        fh.write("r,mean_coop,stderr,nonstationary_frac,realizations\n")
        for i in range(len(curve.r_values)):
            fh.write(
                f"{_fmt(curve.r_values[i])},{_fmt(curve.mean_coop[i])},"
                f"{_fmt(curve.stderr[i])},{_fmt(curve.nonstationary_frac[i])},"
                f"{curve.realizations}\n"
            )
    finally:
        if own:
            fh.close()


def write_fixation_csv(curve: FixationCurve, path, metadata: dict | None = None) -> None:
    """Write `ni,M,Mc,pf,wilson_lo,wilson_hi` rows."""
    own = isinstance(path, (str, os.PathLike))
    fh = open(path, "w") if own else path
    try:
        _write_metadata(fh, curve.metadata() if metadata is None else metadata)
        fh.write("ni,M,Mc,pf,wilson_lo,wilson_hi\n")
        for i in range(len(curve.ni_values)):
            fh.write(
                f"{curve.ni_values[i]},{curve.trials},{curve.successes[i]},"
                f"{_fmt(curve.pf[i])},{_fmt(curve.wilson_low[i])},"
                f"{_fmt(curve.wilson_high[i])}\n"
            )
    finally:
        if own:
            fh.close()
