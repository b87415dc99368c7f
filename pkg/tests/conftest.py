"""Shared fixtures, independent oracles, and the acceptance summary hook."""

import math
import re

import numpy as np
import pytest

from coopgrow import Network


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion."""
    pattern = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            match = pattern.search(report.nodeid)
            if match:
                verdict = "PASS" if outcome == "passed" else "FAIL"
                lines[int(match.group(1))] = (match.group(2), verdict)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            name, verdict = lines[num]
            terminalreporter.write_line(f"criterion {num} ({name}): {verdict}")


# -- independent oracles (no calls into the code paths they check) -----------


def brute_payoff(net: Network, strategies, r: float, i: int) -> float:
    """Payoff of node i straight from the game definition, by neighbor loop."""
    nbrs = [int(x) for x in net.neighbors(i)]
    cooperating = sum(int(strategies[j]) for j in nbrs)
    if strategies[i]:
        return r * cooperating - len(nbrs)
    return r * cooperating


def flip_probabilities(net: Network, strategies, r: float, beta: float) -> list[float]:
    """Exact per-node probability of switching strategy in one generation.

    Enumerates every (neighbor choice, imitation coin) outcome: node i flips
    iff it picks a neighbor of the opposite strategy (probability 1/k each)
    and the Fermi coin succeeds.
    """
    payoffs = [brute_payoff(net, strategies, r, i) for i in range(net.num_nodes)]
    probs = []
    for i in range(net.num_nodes):
        nbrs = [int(x) for x in net.neighbors(i)]
        total = 0.0
        for j in nbrs:
            if strategies[j] != strategies[i]:
                z = max(-700.0, min(700.0, beta * (payoffs[j] - payoffs[i])))
                total += 1.0 / (1.0 + math.exp(-z)) / len(nbrs)
        probs.append(total)
    return probs


def random_simple_graph(rng: np.random.Generator, n: int, mean_degree: float = 4.0) -> Network:
    """Erdos-Renyi style test graph built through the validating constructor."""
    p = min(1.0, mean_degree / max(n - 1, 1))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Network.from_edges(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
