import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coopgrow import (
    COOPERATE,
    DEFECT,
    GameParams,
    Network,
    fermi,
    payoff,
    payoffs,
    synchronous_generation,
)

from conftest import brute_payoff, flip_probabilities, random_simple_graph


def four_star(center_strategy, leaf_strategies):
    net = Network.from_edges(5, [(0, i) for i in range(1, 5)])
    strategies = np.array([center_strategy, *leaf_strategies], dtype=np.int8)
    return net, strategies


class TestGameParams:
    def test_r_must_exceed_one(self):
        with pytest.raises(ValueError):
            GameParams(1.0, 1.0)
        with pytest.raises(ValueError):
            GameParams(0.5, 1.0)

    def test_beta_nonnegative(self):
        with pytest.raises(ValueError):
            GameParams(2.0, -0.1)
        GameParams(2.0, 0.0)


class TestPayoff:
    def test_cooperator_two_of_four(self):
        net, s = four_star(COOPERATE, [COOPERATE, COOPERATE, DEFECT, DEFECT])
        assert payoff(net, s, GameParams(2.0, 1.0), 0) == 2 * 2 - 4 == 0

    def test_defector_three_of_four(self):
        net, s = four_star(DEFECT, [COOPERATE, COOPERATE, COOPERATE, DEFECT])
        assert payoff(net, s, GameParams(2.0, 1.0), 0) == 6

    def test_all_defector_neighborhood(self):
        net, s = four_star(DEFECT, [DEFECT] * 4)
        p = GameParams(2.0, 1.0)
        assert payoff(net, s, p, 0) == 0
        s[0] = COOPERATE
        assert payoff(net, s, p, 0) == -4

    def test_isolated_node_scores_zero(self):
        net = Network.from_edges(3, [(0, 1)])
        s = np.array([1, 1, 1], dtype=np.int8)
        assert payoff(net, s, GameParams(2.0, 1.0), 2) == 0

    def test_vectorized_matches_brute_force(self, rng):
        for _ in range(20):
            net = random_simple_graph(rng, 30)
            s = (rng.random(30) < 0.5).astype(np.int8)
            r = 2.5
            vec = payoffs(net, s, r)
            brute = [brute_payoff(net, s, r, i) for i in range(30)]
            assert np.allclose(vec, brute, atol=1e-12)

    def test_total_payoff_identity_exact(self, rng):
        # sum of payoffs = (r-1) * (2 * CC edges + CD edges); dyadic r keeps
        # the float arithmetic exact so equality can be asserted literally
        dyadic = [1.25, 1.5, 2.0, 2.75, 3.5, 4.0]
        for _ in range(100):
            n = int(rng.integers(2, 201))
            net = random_simple_graph(rng, n)
            s = (rng.random(n) < rng.random()).astype(np.int8)
            r = float(dyadic[rng.integers(0, len(dyadic))])
            eu, ev = net.edges
            cc = int(np.sum(s[eu] & s[ev]))
            cd = int(np.sum(s[eu] ^ s[ev]))
            assert payoffs(net, s, r).sum() == (r - 1) * (2 * cc + cd)


class TestFermi:
    def test_neutral_selection(self):
        assert fermi(0.0, 123.4) == 0.5
        assert fermi(0.0, -123.4) == 0.5

    def test_zero_gap(self):
        assert fermi(7.3, 0.0) == 0.5

    def test_closed_form_value(self):
        assert abs(fermi(1.0, math.log(3)) - 0.75) < 1e-12

    def test_extreme_gaps_stay_inside_unit_interval(self):
        lo = float(fermi(100.0, -1e6))
        hi = float(fermi(100.0, 1e6))
        assert 0.0 < lo < hi < 1.0
        assert math.isfinite(lo) and math.isfinite(hi)

    def test_symmetry_on_grid(self):
        betas = [0.0, 0.01, 0.1, 1.0, 10.0, 100.0]
        gaps = np.linspace(-40, 40, 401)
        for beta in betas:
            total = fermi(beta, gaps) + fermi(beta, -gaps)
            assert np.all(np.abs(total - 1.0) < 1e-12)

    @settings(max_examples=200)
    @given(
        beta=st.floats(0, 1e3, allow_nan=False),
        gap=st.floats(-1e6, 1e6, allow_nan=False),
    )
    def test_symmetry_and_monotonicity(self, beta, gap):
        w = float(fermi(beta, gap))
        assert 0.0 < w < 1.0
        assert abs(w + float(fermi(beta, -gap)) - 1.0) < 1e-12
        assert float(fermi(beta, gap + 1.0)) >= w - 1e-15


class TestSynchronousGeneration:
    def test_all_cooperators_fixed_point(self, rng):
        net = random_simple_graph(rng, 50)
        s = np.ones(50, dtype=np.int8)
        for beta in (0.0, 1.0, 10.0):
            out = synchronous_generation(net, s, GameParams(5.0, beta), rng)
            assert np.array_equal(out, s)

    def test_all_defectors_fixed_point(self, rng):
        net = random_simple_graph(rng, 50)
        s = np.zeros(50, dtype=np.int8)
        out = synchronous_generation(net, s, GameParams(2.0, 1.0), rng)
        assert np.array_equal(out, s)

    def test_length_mismatch_rejected(self, rng):
        net = Network(4)
        with pytest.raises(ValueError):
            synchronous_generation(net, np.ones(3, dtype=np.int8), GameParams(2, 1), rng)

    def test_isolated_node_keeps_strategy(self, rng):
        net = Network.from_edges(3, [(0, 1)])
        s = np.array([0, 0, 1], dtype=np.int8)
        for _ in range(20):
            out = synchronous_generation(net, s, GameParams(2.0, 10.0), rng)
            assert out[2] == 1

    @pytest.mark.parametrize("beta", [0.0, 1.0])
    def test_path_flip_rates_match_enumeration(self, beta, rng):
        # C-D-C path; at beta=0 each node flips with (opposite fraction)/2
        net = Network.from_edges(3, [(0, 1), (1, 2)])
        s = np.array([1, 0, 1], dtype=np.int8)
        expected = flip_probabilities(net, s, 2.0, beta)
        if beta == 0.0:
            assert expected == [0.5, 0.5, 0.5]
        trials = 30_000
        flips = np.zeros(3)
        params = GameParams(2.0, beta)
        for _ in range(trials):
            out = synchronous_generation(net, s, params, rng)
            flips += out != s
        freq = flips / trials
        se = np.sqrt(np.multiply(expected, 1.0 - np.asarray(expected)) / trials)
        assert np.all(np.abs(freq - expected) <= 3 * np.maximum(se, 1e-4))

    def test_permutation_equivariance(self, rng):
        # relabeling nodes relabels the per-node flip distribution
        edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4), (3, 5)]
        s = np.array([1, 0, 1, 0, 1, 1], dtype=np.int8)
        perm = np.array([3, 5, 0, 2, 4, 1])  # image of each original node
        net = Network.from_edges(6, edges)
        relabeled = Network.from_edges(6, [(perm[a], perm[b]) for a, b in edges])
        s_rel = np.empty(6, dtype=np.int8)
        s_rel[perm] = s
        exact = np.asarray(flip_probabilities(net, s, 2.0, 1.0))
        exact_rel = np.asarray(flip_probabilities(relabeled, s_rel, 2.0, 1.0))
        assert np.allclose(exact, exact_rel[perm], atol=1e-12)
        trials = 20_000
        params = GameParams(2.0, 1.0)
        flips = np.zeros(6)
        flips_rel = np.zeros(6)
        for _ in range(trials):
            flips += synchronous_generation(net, s, params, rng) != s
            flips_rel += synchronous_generation(relabeled, s_rel, params, rng) != s_rel
        se = np.sqrt(np.maximum(exact * (1 - exact), 1e-8) / trials)
        assert np.all(np.abs(flips / trials - (flips_rel / trials)[perm]) <= 6 * se)
