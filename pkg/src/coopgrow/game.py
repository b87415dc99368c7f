"""Prisoner's dilemma payoffs and the synchronous Fermi imitation update.

Strategies are stored as int8 vectors: 1 for a cooperator, 0 for a defector.
With the cost normalized to 1 and the benefit equal to the benefit-cost
ratio ``r``, a cooperator with ``kc`` cooperating neighbors out of ``k``
earns ``r*kc - k`` and a defector earns ``r*kc``. The selection intensity
``beta`` is expressed in these normalized payoff units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Network

__all__ = [
    "COOPERATE",
    "DEFECT",
    "GameParams",
    "fermi",
    "payoff",
    "payoffs",
    "synchronous_generation",
]

COOPERATE = np.int8(1)
DEFECT = np.int8(0)

# exp() overflows above ~709; clamping the exponent keeps fermi() finite.
_EXP_CLAMP = 700.0
# 1/(1+exp(-700)) rounds to 1.0 in doubles; capping one ulp below keeps the
# returned probability strictly inside (0, 1).
_BELOW_ONE = np.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class GameParams:
    """Benefit-cost ratio r (> 1) and selection intensity beta (>= 0)."""

    r: float
    beta: float

    def __post_init__(self):
        if not self.r > 1.0:
            raise ValueError(f"benefit-cost ratio must exceed 1, got r={self.r}")
        if self.beta < 0.0:
            raise ValueError(f"selection intensity must be >= 0, got beta={self.beta}")


def fermi(beta: float, payoff_gap):
    """Imitation probability 1 / (1 + exp(-beta * payoff_gap)).

    Accepts scalars or arrays; monotone nondecreasing in the gap, 0.5 at
    beta = 0 or gap = 0.
    """
    z = np.clip(np.multiply(beta, payoff_gap), -_EXP_CLAMP, _EXP_CLAMP)
    return np.minimum(1.0 / (1.0 + np.exp(-z)), _BELOW_ONE)


def payoffs(net: Network, strategies: np.ndarray, r: float) -> np.ndarray:
    """Accumulated game payoff of every node against all its neighbors."""
    n = net.num_nodes
    if len(strategies) != n:
        raise ValueError(f"strategy vector has {len(strategies)} entries for {n} nodes")
    coop = strategies.astype(np.float64, copy=False)
    eu, ev = net.edges
    kc = np.bincount(eu, weights=coop[ev], minlength=n)
    kc += np.bincount(ev, weights=coop[eu], minlength=n)
    return r * kc - net.degrees * coop


def payoff(net: Network, strategies: np.ndarray, params: GameParams, i: int) -> float:
    """Payoff of a single node; 0 for a node with no neighbors."""
    nbrs = net.neighbors(i)
    kc = int(strategies[nbrs].sum()) if len(nbrs) else 0
    if strategies[i]:
        return params.r * kc - len(nbrs)
    return params.r * kc


def synchronous_generation(
    net: Network, strategies: np.ndarray, params: GameParams, rng: np.random.Generator
) -> np.ndarray:
    """Apply one synchronous generation and return the new strategy vector.

    Payoffs are computed once from the input strategies. Every node then
    independently picks one of its neighbors uniformly at random and adopts
    that neighbor's *old* strategy with probability
    ``fermi(beta, P_neighbor - P_own)``, otherwise keeps its own. Nodes
    without neighbors never change. The input vector is not modified.
    """
    n = net.num_nodes
    pay = payoffs(net, strategies, params.r)
    deg = net.degrees
    # floor(u * deg) is uniform over 0..deg-1; the clip guards the one-in-2^53
    # rounding case where u * deg lands exactly on deg.
    pick = np.minimum((rng.random(n) * deg).astype(np.int64), np.maximum(deg - 1, 0))
    j = net.neighbor_table[np.arange(n), pick]
    w = fermi(params.beta, pay[j] - pay)
    adopt = (rng.random(n) < w) & (deg > 0)
    return np.where(adopt, strategies[j], strategies).astype(np.int8, copy=False)
