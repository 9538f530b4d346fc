"""Unit tests for the product-tail and Cesàro-mean checks."""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from theory import (
    ProductExperiment,
    cesaro_drift,
    cesaro_path,
    cesaro_table,
    drift_std,
    empirical_product_tail,
    expected_log_factor,
    hoeffding_bound,
    tail_table,
)
from utils.errors import DomainError


class TestHoeffding:
    def test_arithmetic(self):
        assert hoeffding_bound(-10.0, 100, 0.5, 2.0, 1.0) == pytest.approx(0.3532, abs=1e-4)

    def test_vanishes_for_large_gap(self):
        assert hoeffding_bound(-1e4, 100, 0.5, 2.0, 1.0) < 1e-300

    def test_zero_width_support(self):
        with pytest.raises(DomainError):
            hoeffding_bound(-10.0, 100, 0.9, 0.9, 1.0)

    def test_outside_regime(self):
        with pytest.raises(DomainError):
            hoeffding_bound(0.5, 100, 0.5, 2.0, 1.0)


class TestProducts:
    @pytest.mark.parametrize("eps,expected", [(0.5, 0.0), (0.3, 1.0)])
    def test_constant_factor(self, eps, expected):
        exp = ProductExperiment(family="constant", value=0.9, horizon=10, trials=50, eps=eps)
        assert empirical_product_tail(exp, seed=0) == expected

    def test_two_point_drift(self):
        assert expected_log_factor(ProductExperiment()) == pytest.approx(-0.1438, abs=1e-4)

    def test_uniform_drift_matches_sample_mean(self):
        exp = ProductExperiment(family="uniform", low=0.5, high=1.5)
        sample = exp.sample_log_factors(np.random.default_rng(0), 200_000)
        assert expected_log_factor(exp) == pytest.approx(sample.mean(), abs=5e-3)

    def test_two_point_tail_below_bound(self):
        exp = ProductExperiment()
        n = exp.horizon
        freq = empirical_product_tail(exp, seed=1)
        bound = hoeffding_bound(n * expected_log_factor(exp), n, exp.alpha, exp.beta, exp.eps)
        assert freq <= bound

    def test_seeded(self):
        exp = ProductExperiment(horizon=20, trials=3000)
        assert empirical_product_tail(exp, seed=4) == empirical_product_tail(exp, seed=4)

    def test_rejects_inverted_support(self):
        with pytest.raises(ValidationError):
            ProductExperiment(low=2.0, high=1.0)

    def test_tail_table_skips_outside_regime(self):
        exp = ProductExperiment(trials=500)
        # ln 1e-30 is below n E[ln Z] for n = 10, so that cell has no bound
        frame = tail_table(exp, [1.0, 1e-30], [10, 100], seed=0)
        assert list(frame.columns) == ["n", "eps", "empirical_freq", "hoeffding_bound"]
        assert len(frame) == 2
        assert (frame["empirical_freq"] <= 1).all()


class TestCesaro:
    def test_zero_family(self):
        assert cesaro_drift("zero", 0.75, 1000, seed=0) == 0.0

    @pytest.mark.parametrize("p", [0.5, 0.2])
    def test_exponent_must_exceed_half(self, p):
        with pytest.raises(DomainError):
            cesaro_drift("rademacher", p, 100, seed=0)

    def test_paths_extend(self):
        path = cesaro_path("uniform", 0.75, [10, 100, 1000], seed=3)
        assert path[0] == pytest.approx(cesaro_drift("uniform", 0.75, 10, seed=3))

    def test_bounded_by_scale(self):
        n = 500
        value = cesaro_drift("rademacher", 1.0, n, seed=2, scale=2.0)
        assert abs(value) <= 2.0

    def test_drift_std(self):
        assert drift_std("uniform") == pytest.approx(1 / math.sqrt(3))
        assert drift_std("rademacher", 2.0) == 2.0

    def test_table(self):
        frame = cesaro_table("rademacher", 0.75, [10, 100], seeds=3)
        assert list(frame.columns) == ["seed", "n", "drift"]
        assert len(frame) == 6
