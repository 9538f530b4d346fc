"""Randomised checks of the information and divergence machinery."""
import itertools
import math

import numpy as np
import pytest

from design import angular_determinant, default_angles, fim_single, range_fim
from detection import ExponentialProfile, FriisModel, FriisParams, RangeModel
from diagnostics import decay_certificate, kl_profile, kl_sequence
from estimation import Box, uniform_grid

pytestmark = pytest.mark.integration


def random_model(rng):
    if rng.random() < 0.5:
        return FriisModel(FriisParams(p_t=float(rng.uniform(0.5, 5.0))))
    return RangeModel(ExponentialProfile(float(rng.uniform(0.6, 0.95)), float(rng.uniform(0.02, 0.3)),
                                         float(rng.uniform(5.0, 20.0))))


def expected_hessian(model, s, x, h=1e-3):
    ell = float(model.detection_probability(s, x))
    steps = np.eye(2) * h
    total = np.zeros((2, 2))
    for d, weight in ((1, ell), (0, 1.0 - ell)):
        f = lambda p: float(model.log_likelihood(d, p, x))
        for a in range(2):
            for b in range(2):
                total[a, b] -= weight * (f(s + steps[a] + steps[b]) - f(s + steps[a] - steps[b])
                                         - f(s - steps[a] + steps[b]) + f(s - steps[a] - steps[b])) / (4 * h * h)
    return total


class TestFisher:
    def test_single_reading_matches_expected_hessian(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            model = random_model(rng)
            s = rng.uniform(-20, 20, 2)
            bearing = rng.uniform(0, 2 * math.pi)
            x = s + rng.uniform(3.0, 25.0) * np.array([math.cos(bearing), math.sin(bearing)])
            info = fim_single(s, x, model).matrix
            oracle = expected_hessian(model, s, x)
            scale = np.abs(oracle).max()
            np.testing.assert_allclose(info, oracle, rtol=1e-4, atol=1e-4 * scale)

    def test_range_closed_form(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            model = random_model(rng)
            s = rng.uniform(-20, 20, 2)
            xs = rng.uniform(-40, 40, (4, 2))
            generic = sum((fim_single(s, x, model).matrix for x in xs), np.zeros((2, 2)))
            closed = range_fim(s, xs, model.range_profile()).matrix
            np.testing.assert_allclose(closed, generic, rtol=1e-10, atol=1e-16)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
    def test_no_random_bearings_beat_design(self, n):
        best = angular_determinant(default_angles(n))
        rng = np.random.default_rng(n)
        dets = [angular_determinant(rng.uniform(0, 2 * math.pi, n)) for _ in range(10_000)]
        assert max(dets) <= best * (1 + 1e-9)


class TestDivergences:
    def test_enumeration_up_to_ten_locations(self):
        rng = np.random.default_rng(2)
        model = FriisModel()
        for n in range(1, 11):
            xs = rng.uniform(-30, 30, (n, 2))
            s, x = rng.uniform(-30, 30, 2), rng.uniform(-30, 30, 2)
            ell_s = model.detection_probability(s, xs)
            ell_x = model.detection_probability(x, xs)
            total = 0.0
            for bits in itertools.product((0, 1), repeat=n):
                d = np.array(bits)
                log_p = np.sum(np.where(d == 1, np.log(ell_s), np.log1p(-ell_s)))
                log_q = np.sum(np.where(d == 1, np.log(ell_x), np.log1p(-ell_x)))
                total += math.exp(log_p) * (log_p - log_q)
            assert kl_sequence(s, x, xs, model) == pytest.approx(total, abs=1e-10)

    def test_pinsker(self):
        rng = np.random.default_rng(3)
        for _ in range(10_000):
            model = random_model(rng)
            xs = rng.uniform(-30, 30, (3, 2))
            s, x = rng.uniform(-30, 30, 2), rng.uniform(-30, 30, 2)
            gap = model.detection_probability(s, xs) - model.detection_probability(x, xs)
            assert kl_sequence(s, x, xs, model) >= 2 * np.sum(gap ** 2) - 1e-12

    def test_mu_sum_identity(self):
        rng = np.random.default_rng(4)
        cs = uniform_grid(10, Box.centred(100.0))
        for _ in range(50):
            model = random_model(rng)
            xs = rng.uniform(-40, 40, (4, 2))
            s = rng.uniform(-40, 40, 2)
            values = kl_profile(s, xs, cs, model)
            i, j = rng.choice(cs.size, 2, replace=False)
            assert decay_certificate(i, j, s, xs, cs, model) == pytest.approx(values[j] - values[i], abs=1e-10)
