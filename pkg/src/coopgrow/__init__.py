"""Cooperation dynamics on growing networks.

A simulation library for the evolution of cooperation when a population
grows while its members imitate successful neighbors: prisoner's dilemma
payoffs on an undirected graph, synchronous Fermi-rule strategy updates,
and exponential growth by preferential or uniform attachment. On top of the
single-realization machinery sit two ensemble experiments: the phase
transition of the stationary cooperation level in the benefit-cost ratio,
and the fixation probability of an initial cooperator core, including the
smallest core size that makes cooperation essentially certain to persist.
"""

from .config import ConfigError, RunConfig, parse_config, r_grid
from .experiments import (
    FixationCurve,
    NoTransitionError,
    RcEstimate,
    SeedSizeNotFound,
    TransitionCurve,
    cooperative_seed_size,
    estimate_rc,
    fixation_probability,
    transition_curve,
    wilson_interval,
    write_fixation_csv,
    write_transition_csv,
)
from .game import (
    COOPERATE,
    DEFECT,
    GameParams,
    fermi,
    payoff,
    payoffs,
    synchronous_generation,
)
from .growth import GrowthSchedule
from .network import GrowthMechanism, Network, write_edge_list
from .seeds import derive_seed
from .simulation import (
    SimParams,
    Trajectory,
    build_cooperative_core,
    cooperation_fraction,
    run_realization,
    stationary_mean,
    write_trajectory_csv,
)
from .stats import (
    DegreeHistogram,
    InsufficientTailError,
    degree_histogram,
    exponential_tail_check,
    powerlaw_exponent,
    write_histogram_csv,
)

__version__ = "0.1.0"
