import numpy as np
import pytest

from surprisal.core import dichotomy
from surprisal.errors import UnknownSuite
from surprisal.harness import (
    SUITES,
    SamplerConfig,
    digest,
    push_forward,
    render_report,
    replay,
    run_suite,
    sample_bistochastic,
    sample_dichotomy,
    sample_spectrum,
    sample_stochastic,
    suite_names,
)


class TestSamplers:
    def test_same_seed_same_draws(self):
        a, b = SamplerConfig(seed=9), SamplerConfig(seed=9)
        for i in range(20):
            x, y = sample_dichotomy(a, a.rng(i)), sample_dichotomy(b, b.rng(i))
            assert np.array_equal(x.p.values, y.p.values) and np.array_equal(x.s.values, y.s.values)

    def test_different_offsets_differ(self):
        cfg = SamplerConfig(seed=9, dim=4)
        assert not np.array_equal(sample_spectrum(cfg, cfg.rng(0)).values, sample_spectrum(cfg, cfg.rng(1)).values)

    def test_fixed_and_ranged_dims(self):
        assert sample_spectrum(SamplerConfig(dim=5)).dim == 5
        cfg = SamplerConfig(seed=1, dim=(2, 3))
        assert {sample_spectrum(cfg, cfg.rng(i)).dim for i in range(50)} == {2, 3}

    def test_zero_probability_keeps_one_entry(self):
        cfg = SamplerConfig(seed=2, dim=6)
        for i in range(200):
            p = sample_spectrum(cfg, cfg.rng(i), zero_prob=0.95).values
            assert np.count_nonzero(p) >= 1 and p.sum() == pytest.approx(1.0)

    def test_reference_floor(self):
        cfg = SamplerConfig(seed=3, dim=8, concentration=0.1)
        for i in range(100):
            assert sample_dichotomy(cfg, cfg.rng(i), s_floor=1e-3).s.values.min() >= 1e-3 - 1e-15

    def test_stochastic_rows(self):
        cfg = SamplerConfig(seed=4)
        E = sample_stochastic(cfg, 4, 6)
        assert E.shape == (4, 6) and np.allclose(E.sum(axis=1), 1.0) and np.all(E >= 0)

    @pytest.mark.parametrize("d, k", [(2, 1), (4, 3), (6, 5)])
    def test_bistochastic(self, d, k):
        B = sample_bistochastic(SamplerConfig(seed=5), d, k)
        assert np.allclose(B.sum(axis=0), 1.0) and np.allclose(B.sum(axis=1), 1.0)

    def test_uniform_is_fixed_by_bistochastic(self):
        B = sample_bistochastic(SamplerConfig(seed=6), 5, 4)
        u = np.full(5, 0.2)
        assert np.allclose(u @ B, u)

    def test_push_forward_maps_both(self):
        d = dichotomy([0.7, 0.3], [0.4, 0.6])
        E = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
        out = push_forward(d, E)
        assert np.allclose(out.p.values, [0.35, 0.5, 0.15])
        assert np.allclose(out.s.values, [0.2, 0.5, 0.3])


class TestSuites:
    def test_registry(self):
        assert set(suite_names()) == {
            "majorization", "sufficiency", "cantelli", "smoothed", "monotone", "production",
            "marginal", "continuity", "subadditivity", "eta_chi", "cumulant", "spectral",
            "local_monotonicity", "sandwich",
        }
        assert all(SUITES[n].description for n in suite_names())

    @pytest.mark.parametrize("name", suite_names())
    def test_honest_run_passes(self, name):
        rep = run_suite(name, SamplerConfig(seed=51, trials=150))
        assert rep.passed, render_report(rep)
        assert rep.checked > 0 and rep.trials == 150

    @pytest.mark.parametrize("name", suite_names())
    def test_mutation_is_detected(self, name):
        rep = run_suite(name, SamplerConfig(seed=52, trials=300), mutate=True)
        assert not rep.passed

    def test_sufficiency_records_false_negatives(self):
        rep = run_suite("sufficiency", SamplerConfig(seed=53, trials=50))
        assert rep.notes["false_negatives"] >= 1

    def test_unknown(self):
        with pytest.raises(UnknownSuite):
            run_suite("nope", SamplerConfig())
        with pytest.raises(KeyError):
            replay("nope", SamplerConfig(), 0)


class TestReplay:
    def test_replay_reproduces_trial(self):
        cfg = SamplerConfig(seed=54, trials=30)
        rep = run_suite("monotone", cfg, mutate=True)
        assert rep.violations
        offset, dig, slack = rep.violations[0]
        inputs = replay("monotone", cfg, offset)
        assert digest(inputs) == dig
        assert SUITES["monotone"].check(inputs, 0.0) == pytest.approx(slack)

    def test_digest_is_stable_and_sensitive(self):
        a = {"x": np.array([0.1, 0.9]), "y": np.array([2.0])}
        assert digest(a) == digest({"y": np.array([2.0]), "x": np.array([0.1, 0.9])})
        assert digest(a) != digest({"x": np.array([0.9, 0.1]), "y": np.array([2.0])})
        assert len(digest(a)) == 16

    def test_report_is_deterministic_without_timing(self):
        cfg = SamplerConfig(seed=55, trials=40)
        first = render_report(run_suite("cantelli", cfg))
        assert first == render_report(run_suite("cantelli", cfg))
        assert "runtime" not in first
        assert "runtime:" in render_report(run_suite("cantelli", cfg), timing=True)

    def test_report_lists_violations(self):
        text = render_report(run_suite("cumulant", SamplerConfig(seed=56, trials=20), mutate=True))
        assert "violation offset:" in text and "digest:" in text
