import itertools
import math

import numpy as np
import pytest

from condorcet import (
    TABLE1,
    Culture,
    DegenerateVarianceError,
    Method,
    audit_table1,
    bacon_recursion,
    orthant_mc,
    case7_culture,
    case17_culture,
    classify_deltas,
    classify_m3,
    correlation_matrix,
    cyclic_minimizer_culture,
    ic_curve,
    ic_limit_closed,
    ic_limit_sampford,
    impartial_culture,
    lambda_matrix,
    limiting_probability,
    may_bound,
    pairwise_win_probability,
    sign_pattern_culture,
)
from conftest import random_culture, random_dual_culture

NEG = -math.inf
POS = math.inf

ALL_SIGN_TRIPLES = list(itertools.product((-1, 0, 1), repeat=3))


class TestLambdaMatrix:
    def test_impartial_all_zero(self):
        for m in (2, 3, 4):
            assert np.allclose(lambda_matrix(impartial_culture(m)), 0.0, atol=1e-15)

    def test_dual_culture_all_zero(self, rng):
        for m in (3, 4):
            lam = lambda_matrix(random_dual_culture(rng, m))
            assert np.allclose(lam, 0.0, atol=1e-14)

    def test_cyclic_values(self):
        lam = lambda_matrix(cyclic_minimizer_culture(3))
        assert lam[0, 1] == pytest.approx(1 / 3, abs=1e-15)
        assert lam[0, 2] == pytest.approx(-1 / 3, abs=1e-15)
        assert lam[1, 2] == pytest.approx(1 / 3, abs=1e-15)

    def test_antisymmetric(self, rng):
        for m in (3, 4):
            lam = lambda_matrix(random_culture(rng, m))
            assert np.allclose(lam, -lam.T, atol=1e-15)
            assert np.all(np.diag(lam) == 0.0)

    def test_margin_is_twice_win_probability_minus_one(self, rng):
        for m in (3, 4):
            c = random_culture(rng, m)
            lam = lambda_matrix(c)
            for i, j in itertools.permutations(range(m), 2):
                expected = 2.0 * pairwise_win_probability(c, i, j) - 1.0
                assert lam[i, j] == pytest.approx(expected, abs=1e-12)


class TestCorrelationMatrix:
    @pytest.mark.parametrize("m", [3, 4, 5, 6])
    def test_impartial_is_equicorrelated_one_third(self, m):
        for i in range(m):
            r = correlation_matrix(impartial_culture(m), i)
            off = r[~np.eye(m - 1, dtype=bool)]
            assert np.allclose(off, 1 / 3, atol=1e-12)
            assert np.all(np.diag(r) == 1.0)

    def test_m3_candidate0_entry_formula(self, rng):
        # direct expansion of the (1,2) entry for the first candidate
        c = random_culture(rng)
        p = c.probs
        lam = lambda_matrix(c)
        joint = p[0] + p[1] + p[3] + p[5] - p[2] - p[4]
        expected = (joint - lam[0, 1] * lam[0, 2]) / math.sqrt(
            (1 - lam[0, 1] ** 2) * (1 - lam[0, 2] ** 2)
        )
        assert correlation_matrix(c, 0)[0, 1] == pytest.approx(expected, abs=1e-12)

    def test_positive_semidefinite(self, rng):
        for m in (3, 4, 5):
            for _ in range(10):
                c = random_culture(rng, m)
                r = correlation_matrix(c, int(rng.integers(m)))
                assert np.min(np.linalg.eigvalsh(r)) >= -1e-9
                assert np.max(np.abs(r)) <= 1.0 + 1e-12

    def test_degenerate_margin_rejected(self):
        p = np.zeros(6)
        p[0] = 1.0
        with pytest.raises(DegenerateVarianceError):
            correlation_matrix(Culture(3, p), 0)

    def test_candidate_out_of_range(self):
        with pytest.raises(ValueError):
            correlation_matrix(impartial_culture(3), 3)


class TestClassifyDeltas:
    def test_impartial_all_zero(self):
        deltas = classify_deltas(lambda_matrix(impartial_culture(3)))
        assert set(deltas.values()) == {0.0}

    def test_cyclic_pattern(self):
        deltas = classify_deltas(lambda_matrix(cyclic_minimizer_culture(3)))
        assert deltas[(0, 2)] == POS
        assert deltas[(0, 1)] == NEG
        assert deltas[(1, 2)] == NEG

    def test_tolerance_window(self):
        lam = np.array([[0.0, 5e-13], [-5e-13, 0.0]])
        assert classify_deltas(lam, tol=1e-12)[(0, 1)] == 0.0
        assert classify_deltas(lam, tol=1e-14)[(0, 1)] == NEG

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValueError):
            classify_deltas(np.zeros((2, 2)), tol=-1.0)


class TestLimitingProbability:
    def test_impartial_m3(self):
        expected = 0.75 + 3.0 / (2.0 * math.pi) * math.asin(1 / 3)
        r = limiting_probability(impartial_culture(3))
        assert r.method is Method.LIMIT
        assert r.stderr is None
        assert r.value == pytest.approx(expected, abs=1e-12)
        assert r.detail["case"] == 1

    def test_case7_is_exactly_one(self):
        r = limiting_probability(case7_culture())
        assert r.value == 1.0
        assert r.detail["case"] == 7

    def test_case17_is_exactly_zero(self):
        r = limiting_probability(case17_culture())
        assert r.value == 0.0
        assert r.detail["case"] == 17

    def test_degenerate_culture_is_one(self):
        p = np.zeros(6)
        p[2] = 1.0
        r = limiting_probability(Culture(3, p))
        assert r.value == 1.0
        assert [t["L"] for t in r.detail["terms"]] == [0.0, 1.0, 0.0]

    def test_m2(self):
        assert limiting_probability(Culture(2, np.array([0.5, 0.5]))).value == 1.0
        assert limiting_probability(Culture(2, np.array([0.9, 0.1]))).value == 1.0

    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_impartial_matches_equicorrelated_integral(self, m):
        r = limiting_probability(impartial_culture(m))
        assert r.value == pytest.approx(ic_limit_sampford(m), abs=1e-9)

    def test_dual_m4_closed_form_terms_match_mc(self, rng):
        c = random_dual_culture(rng, 4)
        r = limiting_probability(c)
        for i, term in enumerate(r.detail["terms"]):
            sub = np.array(term["correlation"])
            est, se = orthant_mc(sub, 2_000_000, seed=50 + i)
            assert abs(term["L"] - est) <= 4 * se + 1e-6

    def test_dual_m5_uses_mc_and_reports_stderr(self, rng):
        c = random_dual_culture(rng, 5)
        r = limiting_probability(c, mc_samples=100_000)
        assert all(t["method"] == "monte-carlo" for t in r.detail["terms"])
        assert all(t["stderr"] > 0 for t in r.detail["terms"])
        assert r.stderr is None  # per-term stderr lives in the detail payload

    def test_term_sum_at_most_one(self, rng):
        for _ in range(50):
            c = random_culture(rng)
            r = limiting_probability(c)
            assert r.detail["terms_sum"] <= 1.0 + 1e-10

    def test_cyclic_every_term_vanishes(self):
        r = limiting_probability(cyclic_minimizer_culture(3))
        assert r.value == 0.0
        assert all(t["L"] == 0.0 for t in r.detail["terms"])


class TestClassifyM3:
    def test_impartial_case1(self):
        case, value = classify_m3(impartial_culture(3))
        assert case == 1
        assert value == pytest.approx(3 * (0.25 + math.asin(1 / 3) / (2 * math.pi)), abs=1e-12)

    def test_worked_examples(self):
        assert classify_m3(case7_culture()) == (7, 1.0)
        assert classify_m3(case17_culture()) == (17, 0.0)

    def test_cyclic_is_the_zero_cycle_case(self):
        assert classify_m3(cyclic_minimizer_culture(3)) == (17, 0.0)

    def test_m_not_3_rejected(self):
        with pytest.raises(ValueError):
            classify_m3(impartial_culture(4))

    def test_all_27_patterns_reachable_and_consistent(self):
        seen = set()
        for signs in ALL_SIGN_TRIPLES:
            c = sign_pattern_culture(signs)
            case, value = classify_m3(c)
            seen.add(case)
            row = next(r for r in TABLE1 if r.number == case)
            assert row.signs == signs
            limit = limiting_probability(c).value
            assert value == pytest.approx(limit, abs=1e-10)
        assert seen == set(range(1, 28))

    def test_matches_limiting_probability_on_random_cultures(self):
        rng = np.random.default_rng(9001)
        for _ in range(200):
            c = random_culture(rng)
            _, value = classify_m3(c)
            assert value == pytest.approx(limiting_probability(c).value, abs=1e-10)


class TestTable1Data:
    def test_27_distinct_sign_patterns(self):
        assert len(TABLE1) == 27
        assert len({row.signs for row in TABLE1}) == 27

    def test_value_census(self):
        # 12 sure-winner rows, 2 sure-cycle rows, the rest involve correlations
        kinds = [row.kind for row in TABLE1]
        assert kinds.count("one") == 12
        assert kinds.count("zero") == 2
        assert kinds.count("half") == 6
        assert kinds.count("arcsin") == 6
        assert kinds.count("sum3") == 1

    def test_audit_small_sample(self):
        rows = audit_table1(samples=100_000, seed=77)
        assert len(rows) == 27
        assert all(r.passed for r in rows)
        by_number = {r.number: r for r in rows}
        assert by_number[7].formula_value == 1.0
        assert by_number[17].formula_value == 0.0
        assert by_number[17].mc_value == 0.0
        assert by_number[17].mc_stderr == 0.0


class TestImpartialLimits:
    def test_m3_closed_form(self):
        expected = 0.75 + 3.0 / (2.0 * math.pi) * math.asin(1 / 3)
        assert ic_limit_closed(3) == pytest.approx(expected, abs=1e-15)

    def test_m4_closed_form(self):
        expected = 0.5 * (1.0 + 6.0 / math.pi * math.asin(1 / 3))
        assert ic_limit_closed(4) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
    def test_closed_matches_integral(self, m):
        assert ic_limit_closed(m) == pytest.approx(ic_limit_sampford(m), abs=1e-6)

    def test_closed_form_domain(self):
        with pytest.raises(ValueError):
            ic_limit_closed(2)
        with pytest.raises(ValueError):
            ic_limit_closed(8)

    def test_sampford_m2_is_one(self):
        assert ic_limit_sampford(2) == pytest.approx(1.0, abs=1e-9)

    def test_recursion_reproduces_m6(self):
        assert 6 * bacon_recursion(1 / 3, 5) == pytest.approx(
            ic_limit_sampford(6), abs=1e-6
        )

    def test_largest_supported_candidate_count(self):
        # m = 8 is the enumeration cap: 40320 orders, all margins balanced
        lam = lambda_matrix(impartial_culture(8))
        assert np.allclose(lam, 0.0, atol=1e-13)
        r = correlation_matrix(impartial_culture(8), 0)
        assert np.allclose(r[~np.eye(7, dtype=bool)], 1 / 3, atol=1e-12)

    def test_sampford_decreasing(self):
        values = [ic_limit_sampford(m) for m in range(2, 26)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_sampford_below_bound_sample(self):
        for m in (2, 3, 10, 25, 100, 200):
            assert ic_limit_sampford(m) <= may_bound(m)

    def test_m25_positive_below_bound(self):
        value = ic_limit_sampford(25)
        assert 0.0 < value < may_bound(25)
        assert may_bound(25) == pytest.approx(2 * math.pi * math.sqrt(2) / math.sqrt(51), abs=1e-12)


class TestMayBound:
    def test_m3_value(self):
        assert may_bound(3) == pytest.approx(2 * math.pi * math.sqrt(2) / math.sqrt(7), abs=1e-12)
        assert may_bound(3) == pytest.approx(3.3585, abs=5e-4)

    def test_scaling_ratio(self):
        assert may_bound(200) / may_bound(50) == pytest.approx(math.sqrt(101 / 401), abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            may_bound(1)


class TestIcCurve:
    def test_against_closed_forms(self):
        rows = ic_curve([3, 4, 5, 6, 7])
        for m, value in rows:
            assert value == pytest.approx(ic_limit_closed(m), abs=1e-6)

    def test_strictly_decreasing_probabilities_in_unit_interval(self):
        rows = ic_curve(list(range(2, 15)))
        values = [v for _, v in rows]
        assert all(0.0 < v <= 1.0 for v in values)
        assert all(a > b for a, b in zip(values, values[1:]))


class TestSignPatternCulture:
    def test_rejects_bad_signs(self):
        with pytest.raises(ValueError):
            sign_pattern_culture((2, 0, 0))

    def test_rejects_oversized_magnitude(self):
        with pytest.raises(ValueError):
            sign_pattern_culture((1, 1, 1), magnitude=0.9)

    def test_hits_requested_margins(self):
        lam = lambda_matrix(sign_pattern_culture((1, -1, 0), magnitude=0.1))
        assert lam[0, 1] == pytest.approx(0.1, abs=1e-12)
        assert lam[0, 2] == pytest.approx(-0.1, abs=1e-12)
        assert abs(lam[1, 2]) < 1e-12
