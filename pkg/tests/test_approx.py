import math

import numpy as np
import pytest

from surprisal.approx import (
    cantelli_envelopes,
    envelope_slacks,
    exact_smin,
    flat_approximation,
    smoothed_divergences,
    steep_approximation,
    variance_spread,
)
from surprisal.core import dichotomy, measures, relative_entropy, trace_distance
from surprisal.errors import ExactSearchTooLarge, InvalidEpsilon
from surprisal.harness import SamplerConfig, sample_dichotomy
from surprisal.lorenz import dominates, eval_at, exact_transition, lorenz_curve


def random_cases(n, seed, dim=(1, 8), eps_range=(0.01, 0.99)):
    cfg = SamplerConfig(seed=seed, dim=dim)
    for i in range(n):
        rng = cfg.rng(i)
        d = sample_dichotomy(cfg, rng, zero_prob=0.2)
        yield d, float(rng.uniform(*eps_range))


def brute_smin(d, eps):
    """Independent subset search with plain loops."""
    p, s = d.p.values, d.s.values
    best = math.inf
    for mask in range(1, 2**d.dim):
        inside = [i for i in range(d.dim) if mask >> i & 1]
        out = math.fsum(p[i] for i in range(d.dim) if i not in inside)
        if out <= eps + 1e-12:
            best = min(best, math.fsum(s[i] for i in inside))
    return max(0.0, -math.log2(best))


class TestFlat:
    def test_zero_eps_identity(self):
        d = dichotomy([0.7, 0.2, 0.1])
        assert np.array_equal(flat_approximation(d, 0.0).spectrum.values, d.p.values)

    def test_large_eps_returns_reference(self):
        d = dichotomy([0.7, 0.2, 0.1], [0.5, 0.3, 0.2])
        out = flat_approximation(d, 0.3)
        assert np.allclose(out.spectrum.values, d.s.values)

    def test_hand_example(self):
        d = dichotomy([0.7, 0.2, 0.1])
        out = flat_approximation(d, 0.05)
        assert out.spectrum.values == pytest.approx([0.65, 0.2, 0.15])
        assert out.indices == (1, 3)
        assert exact_transition(d, out.dichotomy(d.s)).decision

    def test_block_ordering(self):
        for d, eps in random_cases(1000, 11):
            out = flat_approximation(d, eps)
            if trace_distance(d.p, d.s) >= eps and d.dim > 1:
                M, N = out.indices
                assert M <= N

    def test_optimal_against_ball_samples(self):
        # every state of the ball must dominate the flat one
        rng = np.random.default_rng(12)
        checked = 0
        for d, eps in random_cases(200, 12, dim=(2, 6), eps_range=(0.01, 0.3)):
            flat = lorenz_curve(flat_approximation(d, eps).dichotomy(d.s))
            for _ in range(5):
                while True:
                    move = rng.normal(size=d.dim)
                    move -= move.mean()
                    move *= eps / max(np.abs(move).sum() / 2, 1e-300) * rng.uniform()
                    q = d.p.values + move
                    if np.all(q >= 0):
                        break
                assert trace_distance(q / q.sum(), d.p) <= eps + 1e-12
                v = dominates(lorenz_curve(dichotomy(q / q.sum(), d.s)), flat)
                assert v.decision, (d, eps, q)
                checked += 1
        assert checked == 1000


class TestSteep:
    def test_hand_example(self):
        out = steep_approximation(dichotomy([0.7, 0.2, 0.1]), 0.1)
        assert out.spectrum.values == pytest.approx([0.8, 0.2, 0.0])

    def test_point_mass(self):
        out = steep_approximation(dichotomy([0.7, 0.2, 0.1]), 0.31)
        assert np.array_equal(out.spectrum.values, [1.0, 0.0, 0.0])

    def test_partial_cut(self):
        out = steep_approximation(dichotomy([0.4, 0.3, 0.2, 0.1]), 0.15)
        assert out.spectrum.values == pytest.approx([0.55, 0.3, 0.15, 0.0])
        assert out.indices[0] == 3

    def test_only_top_entry_grows(self):
        for d, eps in random_cases(1000, 13):
            out = steep_approximation(d, eps).spectrum.values
            grew = np.nonzero(out > d.p.values + 1e-15)[0]
            assert grew.size <= 1
            if grew.size:
                assert grew[0] == d.sigma_order[0]


class TestCertificates:
    @pytest.mark.parametrize("approx", [flat_approximation, steep_approximation])
    def test_within_ball(self, approx):
        for d, eps in random_cases(1000, 14, eps_range=(0.0, 1.0)):
            assert trace_distance(approx(d, eps).spectrum, d.p) <= eps + 1e-12

    def test_sandwich(self):
        cfg = SamplerConfig(seed=15, dim=(1, 8))
        for i in range(1000):
            rng = cfg.rng(i)
            d = sample_dichotomy(cfg, rng, zero_prob=0.2)
            e1, e2 = np.sort(rng.uniform(0.0, 0.99, size=2))
            chain = [
                steep_approximation(d, e2),
                steep_approximation(d, e1),
                None,
                flat_approximation(d, e1),
                flat_approximation(d, e2),
            ]
            curves = [lorenz_curve(d if a is None else a.dichotomy(d.s)) for a in chain]
            for upper, lower in zip(curves, curves[1:]):
                assert dominates(upper, lower).decision

    @pytest.mark.parametrize("approx", [flat_approximation, steep_approximation])
    @pytest.mark.parametrize("eps", [-0.01, 1.01, float("nan")])
    def test_invalid_eps(self, approx, eps):
        with pytest.raises(InvalidEpsilon):
            approx(dichotomy([0.5, 0.5]), eps)


class TestCantelli:
    def test_flat_state_envelopes_coincide(self):
        d = dichotomy([0.5, 0.5, 0.0, 0.0])
        lo, hi = cantelli_envelopes(d, 0.3)
        assert lo == pytest.approx(2 ** relative_entropy(d))
        assert hi == pytest.approx(lo)

    def test_eps_near_one(self):
        d = dichotomy([0.6, 0.3, 0.1])
        lo, hi = cantelli_envelopes(d, 1 - 1e-12)
        assert lo == pytest.approx(hi, rel=1e-5)

    def test_random_envelopes_hold(self):
        worst = math.inf
        for d, eps in random_cases(1000, 16):
            worst = min(worst, *envelope_slacks(d, eps))
        assert worst >= -1e-12

    @pytest.mark.parametrize("eps", [0.0, 1.0])
    def test_open_interval(self, eps):
        with pytest.raises(InvalidEpsilon):
            cantelli_envelopes(dichotomy([0.5, 0.5]), eps)

    def test_spread_factor(self):
        d = dichotomy([0.6, 0.3, 0.1])
        assert variance_spread(d, 0.2, factor=2.0) == pytest.approx(
            variance_spread(d, 0.2) * math.sqrt(9 / 4)
        )


class TestSmoothed:
    def test_hand_example(self):
        d = dichotomy([0.5, 0.25, 0.25])
        assert exact_smin(d, 0.25) == pytest.approx(-math.log2(2 / 3))

    def test_exact_matches_brute(self):
        for d, eps in random_cases(300, 17, dim=(1, 7)):
            assert exact_smin(d, eps) == pytest.approx(brute_smin(d, eps), abs=1e-12)

    def test_small_eps_recovers_unsmoothed(self):
        d = dichotomy([0.6, 0.3, 0.1], [0.2, 0.5, 0.3])
        b = smoothed_divergences(d, 1e-12)
        m = measures(d)
        assert b.smax_eps == pytest.approx(m.Smax, abs=1e-9)
        assert b.smin_eps_lower == pytest.approx(m.Smin, abs=1e-9)
        assert b.smin_eps_exact == pytest.approx(m.Smin, abs=1e-9)

    def test_variance_bounds(self):
        gap = 0.0
        for d, eps in random_cases(1000, 18, dim=(1, 10)):
            b = smoothed_divergences(d, eps)
            S = relative_entropy(d)
            assert b.smax_eps - S <= b.f_sigma + 1e-9
            assert S - b.smin_eps_exact <= b.f_sigma + 1e-9
            assert b.smin_eps_exact >= b.smin_eps_lower - 1e-9
            gap = max(gap, b.smin_eps_exact - b.smin_eps_lower)
        # the steep construction is not optimal in general
        assert gap > 0

    def test_exact_search_cap(self):
        d = dichotomy(np.full(17, 1 / 17))
        assert smoothed_divergences(d, 0.1).smin_eps_exact is None
        with pytest.raises(ExactSearchTooLarge):
            smoothed_divergences(d, 0.1, exact=True)

    def test_smax_is_flat_curve_slope(self):
        for d, eps in random_cases(200, 19):
            flat = lorenz_curve(flat_approximation(d, eps).dichotomy(d.s))
            assert 2 ** smoothed_divergences(d, eps, exact=False).smax_eps == pytest.approx(
                flat.slopes().max()
            )
            assert eval_at(flat, 1.0) == 1.0
