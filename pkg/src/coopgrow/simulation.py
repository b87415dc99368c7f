"""One complete realization: cooperative core, growth, synchronous updates.

A realization starts from a core of ``ni`` cooperators grown (without any
strategy updates) from the seed clique, then alternates growth steps with
synchronous generations until the population reaches ``nmax``. Newcomers
during the measured phase cooperate with probability ``pc_growth`` and take
part in the very next generation with full payoff.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numpy as np

from .game import GameParams, synchronous_generation
from .growth import GrowthSchedule
from .network import GrowthMechanism, Network

__all__ = [
    "SimParams",
    "Trajectory",
    "build_cooperative_core",
    "cooperation_fraction",
    "run_realization",
    "stationary_mean",
    "write_trajectory_csv",
]


@dataclass(frozen=True)
class SimParams:
    """All parameters of one realization, including its RNG seed.

    The seed clique size equals L, so the first newcomer can always place
    L distinct links.
    """

    r: float
    beta: float
    n: float = 0.001
    L: int = 4
    mechanism: GrowthMechanism = GrowthMechanism.PREFERENTIAL
    pc_growth: float = 0.0
    seed: int = 0

    def __post_init__(self):
        GameParams(self.r, self.beta)  # validates r and beta
        if self.n <= 0.0:
            raise ValueError(f"growth fraction must be positive, got n={self.n}")
        if self.L < 1:
            raise ValueError(f"links per new node must be >= 1, got L={self.L}")
        if not isinstance(self.mechanism, GrowthMechanism):
            raise ValueError(f"mechanism must be a GrowthMechanism, got {self.mechanism!r}")
        if not 0.0 <= self.pc_growth <= 1.0:
            raise ValueError(f"pc_growth must lie in [0, 1], got {self.pc_growth}")

    @property
    def game(self) -> GameParams:
        return GameParams(self.r, self.beta)


@dataclass
class Trajectory:
    """Per-generation record of one realization.

    Row g holds the population and cooperation fraction after g growth +
    update steps; row 0 is the initial cooperative core. ``absorbed`` marks
    runs that hit zero cooperators under pc_growth = 0 and stopped early
    (the remaining generations stay at 0 by definition and are not stored).
    """

    params: SimParams
    initial_cooperators: int
    max_population: int
    populations: np.ndarray = field(repr=False)
    coop_fraction: np.ndarray = field(repr=False)
    absorbed: bool = False

    def __len__(self) -> int:
        return len(self.coop_fraction)

    @property
    def generations(self) -> np.ndarray:
        return np.arange(len(self.coop_fraction))

    @property
    def final_fraction(self) -> float:
        return float(self.coop_fraction[-1])


def build_cooperative_core(
    params: SimParams, ni: int, rng: np.random.Generator
) -> tuple[Network, np.ndarray]:
    """Grow an all-cooperator network of ``ni`` nodes from the seed clique.

    No strategy updates happen during construction: the core is posited as
    the starting condition, not evolved.
    """
    if ni < params.L:
        raise ValueError(f"core size {ni} is below the seed clique size L={params.L}")
    net = Network(params.L)
    while net.num_nodes < ni:
        net.add_node(params.mechanism, params.L, rng)
    return net, np.ones(ni, dtype=np.int8)


def cooperation_fraction(strategies: np.ndarray) -> float:
    """Fraction of cooperators in a strategy vector."""
    if len(strategies) == 0:
        raise ValueError("empty strategy vector")
    return float(np.count_nonzero(strategies)) / len(strategies)


def run_realization(params: SimParams, ni: int, nmax: int) -> Trajectory:
    """Run one realization from ``ni`` cooperators up to population ``nmax``.

    Each iteration adds the nodes the growth schedule calls for (possibly
    none), assigns each newcomer Cooperate with probability pc_growth, and
    applies one synchronous generation. Stops early once cooperation is
    extinct and no cooperators can ever enter again (pc_growth = 0).
    """
    if not params.L <= ni <= nmax:
        raise ValueError(f"need L <= ni <= nmax, got L={params.L}, ni={ni}, nmax={nmax}")
    rng = np.random.default_rng(params.seed)
    net, strategies = build_cooperative_core(params, ni, rng)
    schedule = GrowthSchedule(ni, params.n)
    game = params.game
    populations = [ni]
    fractions = [1.0]
    absorbed = False
    while net.num_nodes < nmax:
        count = schedule.nodes_before_next_update()
        if count:
            for _ in range(count):
                net.add_node(params.mechanism, params.L, rng)
            newcomers = (rng.random(count) < params.pc_growth).astype(np.int8)
            strategies = np.concatenate([strategies, newcomers])
        strategies = synchronous_generation(net, strategies, game, rng)
        cooperators = int(np.count_nonzero(strategies))
        populations.append(net.num_nodes)
        fractions.append(cooperators / net.num_nodes)
        if cooperators == 0 and params.pc_growth == 0.0:
            absorbed = True
            break
    return Trajectory(
        params=params,
        initial_cooperators=ni,
        max_population=nmax,
        populations=np.asarray(populations, dtype=np.int64),
        coop_fraction=np.asarray(fractions, dtype=np.float64),
        absorbed=absorbed,
    )


def stationary_mean(traj: Trajectory, window: int = 50) -> tuple[float, bool]:
    """Mean cooperation fraction over the final ``window`` generations.

    The second return value flags stationarity: the two halves of the window
    must agree to within 0.05. Absorbed trajectories are (0, stationary) by
    definition.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if traj.absorbed:
        return 0.0, True
    if len(traj) < window:
        raise ValueError(f"trajectory has {len(traj)} records, window needs {window}")
    tail = traj.coop_fraction[-window:]
    half = window // 2
    drift = abs(tail[:half].mean() - tail[half:].mean()) if half else 0.0
    return float(tail.mean()), bool(drift < 0.05)


def write_trajectory_csv(traj: Trajectory, path, metadata: dict | None = None) -> None:
    """Write `generation,population,coop_fraction` rows with a `#` header.

    ``metadata`` replaces the default header block (derived from the
    trajectory's own parameters) when given; values are written as
    ``# key=value`` lines, floats with 6 significant digits.
    """
    p = traj.params
    if metadata is None:
        metadata = {
            "r": p.r,
            "beta": p.beta,
            "n": p.n,
            "L": p.L,
            "mechanism": p.mechanism.value,
            "pc_growth": p.pc_growth,
            "seed": p.seed,
            "ni": traj.initial_cooperators,
            "nmax": traj.max_population,
        }
    extra = {
        "absorbed": int(traj.absorbed),
        "log_growth_factor": float(np.log1p(p.n)),
    }
    own = isinstance(path, (str, os.PathLike))
    fh = open(path, "w") if own else path
    try:
        _write_metadata(fh, {**metadata, **extra})
        fh.write("generation,population,coop_fraction\n")
        for g, (pop, frac) in enumerate(zip(traj.populations, traj.coop_fraction)):
            fh.write(f"{g},{pop},{_fmt(frac)}\n")
    finally:
        if own:
            fh.close()


def _fmt(value) -> str:
    """Fixed 6-significant-digit float formatting for byte-stable CSV output."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{value:.6g}"
    return str(value)


def _write_metadata(fh: io.TextIOBase, metadata: dict) -> None:
    for key in sorted(metadata):
        fh.write(f"# {key}={_fmt(metadata[key])}\n")
