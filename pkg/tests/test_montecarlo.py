import numpy as np
import pytest

from condorcet import (
    Culture,
    McConfig,
    Method,
    WinnerMode,
    case17_culture,
    cyclic_minimizer_culture,
    exact_winner_probability,
    impartial_culture,
    limiting_probability,
    mc_convergence_sweep,
    mc_winner_probability,
)
from conftest import random_culture


class TestDeterminism:
    def test_same_seed_same_estimate(self):
        c = impartial_culture(3)
        cfg = McConfig(trials=50_000, seed=42)
        a = mc_winner_probability(c, 7, cfg)
        b = mc_winner_probability(c, 7, cfg)
        assert a.value == b.value
        assert a.stderr == b.stderr

    def test_different_seed_differs(self):
        c = impartial_culture(3)
        a = mc_winner_probability(c, 7, McConfig(trials=50_000, seed=1))
        b = mc_winner_probability(c, 7, McConfig(trials=50_000, seed=2))
        assert a.value != b.value

    def test_worker_split_is_deterministic(self, monkeypatch):
        c = impartial_culture(3)
        cfg = McConfig(trials=40_000, seed=5)
        monkeypatch.setenv("CONDORCET_THREADS", "3")
        a = mc_winner_probability(c, 5, cfg)
        b = mc_winner_probability(c, 5, cfg)
        assert a.value == b.value
        assert a.detail["workers"] == 3


class TestEstimates:
    def test_degenerate_culture_is_exactly_one(self):
        p = np.zeros(6)
        p[3] = 1.0
        r = mc_winner_probability(Culture(3, p), 11, McConfig(trials=10_000, seed=0))
        assert r.method is Method.MONTE_CARLO
        assert r.value == 1.0
        assert r.stderr == 0.0

    def test_cyclic_n3_near_7_9(self):
        r = mc_winner_probability(
            cyclic_minimizer_culture(3), 3, McConfig(trials=1_000_000, seed=7)
        )
        assert abs(r.value - 7 / 9) <= 4 * r.stderr

    def test_impartial_n5_near_exact(self):
        c = impartial_culture(3)
        exact = exact_winner_probability(c, 5).value
        r = mc_winner_probability(c, 5, McConfig(trials=1_000_000, seed=8))
        assert abs(r.value - exact) <= 4 * r.stderr

    def test_weak_mode_at_even_n_exceeds_strong(self):
        c = impartial_culture(3)
        strong = mc_winner_probability(c, 6, McConfig(trials=200_000, seed=3))
        weak = mc_winner_probability(
            c, 6, McConfig(trials=200_000, seed=3, mode=WinnerMode.WEAK)
        )
        assert weak.value > strong.value

    def test_coverage_over_random_cultures(self):
        rng = np.random.default_rng(31415)
        hits = 0
        for _ in range(50):
            c = random_culture(rng)
            n = int(rng.choice([2, 3, 4, 5, 6, 7]))
            exact = exact_winner_probability(c, n).value
            r = mc_winner_probability(c, n, McConfig(trials=100_000, seed=int(rng.integers(2**32))))
            if abs(r.value - exact) <= 4 * max(r.stderr, 1e-12):
                hits += 1
        assert hits >= 48

    def test_stderr_scaling(self):
        c = impartial_culture(3)
        small = mc_winner_probability(c, 6, McConfig(trials=40_000, seed=9))
        large = mc_winner_probability(c, 6, McConfig(trials=160_000, seed=10))
        ratio = large.stderr / small.stderr
        assert 0.5 * 0.8 <= ratio <= 0.5 * 1.2


class TestConvergenceSweep:
    def test_n1_matches_exact(self, rng):
        c = random_culture(rng)
        ((n, r),) = mc_convergence_sweep(c, [1], McConfig(trials=5_000, seed=0))
        assert n == 1
        assert r.value == 1.0

    def test_impartial_approaches_limit_from_above(self):
        c = impartial_culture(3)
        rows = mc_convergence_sweep(c, [11, 101, 1001], McConfig(trials=200_000, seed=12))
        limit = limiting_probability(c).value
        estimates = [r.value for _, r in rows]
        stderrs = [r.stderr for _, r in rows]
        # decreasing toward the limit, allowing sampling noise
        assert estimates[0] > limit
        for earlier, later, se_a, se_b in zip(estimates, estimates[1:], stderrs, stderrs[1:]):
            assert later <= earlier + 3 * (se_a + se_b)
        assert abs(estimates[-1] - limit) <= 4 * stderrs[-1] + 0.01

    def test_cycle_culture_decays_to_zero(self):
        rows = mc_convergence_sweep(
            case17_culture(), [101, 2001], McConfig(trials=100_000, seed=13)
        )
        assert rows[-1][1].value < 0.1
        assert rows[-1][1].value < rows[0][1].value

    def test_validation(self, rng):
        c = random_culture(rng)
        with pytest.raises(ValueError):
            mc_convergence_sweep(c, [], McConfig(trials=10, seed=0))
        with pytest.raises(ValueError):
            mc_convergence_sweep(c, [5, 3], McConfig(trials=10, seed=0))


class TestConfig:
    def test_trials_validated(self):
        with pytest.raises(ValueError):
            McConfig(trials=0)

    def test_seed_validated(self):
        with pytest.raises(ValueError):
            McConfig(trials=1, seed=-1)
        with pytest.raises(ValueError):
            McConfig(trials=1, seed=2**64)
