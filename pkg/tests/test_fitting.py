import math

import numpy as np
import pytest

from uslkit import (
    MODE_AUTO,
    MODE_NORMALIZED,
    MODE_RAW3,
    Dataset,
    DegenerateDataError,
    DomainError,
    FitOptions,
    FitResult,
    InsufficientDataError,
    MismatchedDatasetError,
    MissingBaselineError,
    UslParams,
    ZeroBaselineError,
    bootstrap_confidence,
    capacity_ratios,
    compare_fits,
    evaluate_fit,
    fit_usl,
    usl_capacity,
)
from oracles import sum_squared_residuals

LEVELS = [1, 2, 4, 8, 16, 32]


def exact_dataset(alpha, beta, x1, levels=LEVELS):
    p = UslParams(alpha, beta)
    return Dataset.from_pairs([(n, x1 * usl_capacity(n, p)) for n in levels])


def noisy_dataset(alpha, beta, x1, noise, seed, levels=LEVELS):
    p = UslParams(alpha, beta)
    rng = np.random.default_rng(seed)
    pairs = []
    for n in levels:
        x = x1 * usl_capacity(n, p) * (1.0 + rng.normal(0.0, noise))
        pairs.append((n, max(x, 0.0)))
    return Dataset.from_pairs(pairs)


class TestDataset:
    def test_sorts_and_exposes_arrays(self):
        d = Dataset.from_pairs([(8, 80.0), (1, 10.0), (4, 41.0)])
        assert list(d.ns) == [1.0, 4.0, 8.0]
        assert list(d.xs) == [10.0, 41.0, 80.0]
        assert d.baseline.x == 10.0
        assert d.has_baseline

    def test_rejects_duplicate_levels(self):
        with pytest.raises(DomainError):
            Dataset.from_pairs([(2, 10.0), (2, 11.0)])

    def test_rejects_single_point(self):
        with pytest.raises(DomainError):
            Dataset.from_pairs([(1, 10.0)])

    def test_normalization_follows_baseline(self):
        assert Dataset.from_pairs([(1, 1.0), (2, 1.8)]).normalization == MODE_NORMALIZED
        assert Dataset.from_pairs([(2, 1.8), (4, 3.0)]).normalization == MODE_RAW3

    def test_significance_warning_under_six_points(self):
        assert Dataset.from_pairs([(1, 1.0), (2, 1.8)]).significance_warning
        six = exact_dataset(0.05, 0.001, 100.0)
        assert not six.significance_warning


class TestCapacityRatios:
    def test_values_relative_to_baseline(self):
        d = Dataset.from_pairs([(1, 50.0), (2, 90.0), (4, 150.0)])
        ratios = capacity_ratios(d)
        assert ratios[0] == (1.0, 1.0)
        assert ratios[1] == (2.0, pytest.approx(1.8, rel=1e-15))
        assert ratios[2] == (4.0, pytest.approx(3.0, rel=1e-15))

    def test_requires_baseline(self):
        with pytest.raises(MissingBaselineError):
            capacity_ratios(Dataset.from_pairs([(2, 90.0), (4, 150.0)]))

    def test_rejects_zero_baseline(self):
        with pytest.raises(ZeroBaselineError):
            capacity_ratios(Dataset.from_pairs([(1, 0.0), (2, 90.0)]))


class TestRoundTrip:
    # same coefficient grid the noiseless recovery gate uses
    GRID = [(a, b) for a in (0.0, 0.02, 0.1, 0.3) for b in (0.0, 1e-4, 5e-3)]

    @pytest.mark.parametrize("alpha,beta", GRID)
    def test_normalized_mode_recovers_exactly(self, alpha, beta):
        fit = fit_usl(exact_dataset(alpha, beta, 100.0))
        assert fit.mode == MODE_NORMALIZED
        assert fit.params.alpha == pytest.approx(alpha, rel=1e-6, abs=1e-8)
        assert fit.params.beta == pytest.approx(beta, rel=1e-6, abs=1e-8)
        assert fit.params.x1 == 100.0  # pinned, not estimated

    def test_raw3_mode_recovers_all_three(self):
        # no n = 1 point, so x1 must come out of the optimisation
        d = exact_dataset(0.08, 0.002, 750.0, levels=[2, 4, 8, 16, 32, 64])
        fit = fit_usl(d)
        assert fit.mode == MODE_RAW3
        assert fit.params.alpha == pytest.approx(0.08, rel=1e-6, abs=1e-8)
        assert fit.params.beta == pytest.approx(0.002, rel=1e-6, abs=1e-8)
        assert fit.params.x1 == pytest.approx(750.0, rel=1e-6)

    def test_forced_raw3_with_baseline_present(self):
        d = exact_dataset(0.08, 0.002, 750.0)
        fit = fit_usl(d, FitOptions(mode=MODE_RAW3))
        assert fit.params.x1 == pytest.approx(750.0, rel=1e-6)

    def test_superlinear_data_lands_on_boundary(self):
        pairs = [(n, float(n) ** 1.2 * 50.0) for n in [1, 2, 4, 8, 16]]
        fit = fit_usl(Dataset.from_pairs(pairs))
        assert fit.params.alpha == 0.0
        assert fit.params.beta == 0.0

    def test_r_squared_is_one_on_exact_data(self):
        fit = fit_usl(exact_dataset(0.1, 0.001, 200.0))
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.sse == pytest.approx(0.0, abs=1e-12)


class TestDeterminism:
    def test_bit_identical_repeat(self):
        d = noisy_dataset(0.06, 0.001, 120.0, 0.03, seed=9)
        f1, f2 = fit_usl(d), fit_usl(d)
        assert f1.params.alpha == f2.params.alpha
        assert f1.params.beta == f2.params.beta
        assert f1.params.x1 == f2.params.x1
        assert f1.sse == f2.sse

    def test_scale_equivariance(self):
        d = noisy_dataset(0.06, 0.001, 120.0, 0.01, seed=5)
        scaled = Dataset.from_pairs([(p.n, p.x * 1000.0) for p in d.points])
        f1, f2 = fit_usl(d), fit_usl(scaled)
        assert f2.params.alpha == pytest.approx(f1.params.alpha, abs=1e-9)
        assert f2.params.beta == pytest.approx(f1.params.beta, abs=1e-9)
        assert f2.params.x1 == pytest.approx(f1.params.x1 * 1000.0, rel=1e-9)

    def test_local_optimality_certificate(self):
        d = noisy_dataset(0.08, 0.003, 90.0, 0.02, seed=13)
        fit = fit_usl(d)
        a, b = fit.params.alpha, fit.params.beta
        x1 = d.baseline.x
        points = [(p.n, p.x) for p in d.points]
        base = sum_squared_residuals(points, a, b, x1)
        for da in (-1e-3, 0.0, 1e-3):
            for db in (-1e-3, 0.0, 1e-3):
                if da == db == 0.0:
                    continue
                pa = min(max(a + da, 0.0), 1.0 - 1e-12)
                pb = max(b + db, 0.0)
                perturbed = sum_squared_residuals(points, pa, pb, x1)
                assert perturbed >= base * (1.0 - 1e-9)


class TestEvaluateAndCompare:
    def test_diagnostics_match_stored_and_oracle(self):
        d = noisy_dataset(0.05, 0.002, 300.0, 0.04, seed=21)
        fit = fit_usl(d)
        diag = evaluate_fit(fit, d)
        points = [(p.n, p.x) for p in d.points]
        oracle = sum_squared_residuals(points, fit.params.alpha, fit.params.beta, fit.params.x1)
        assert diag.sse == pytest.approx(fit.sse, rel=1e-12)
        assert diag.sse == pytest.approx(oracle, rel=1e-12)
        assert diag.r_squared == pytest.approx(fit.r_squared, rel=1e-12)
        assert diag.max_relative_residual < 0.2

    def test_mismatched_levels_rejected(self):
        d = exact_dataset(0.05, 0.001, 100.0)
        other = exact_dataset(0.05, 0.001, 100.0, levels=[1, 2, 4])
        fit = fit_usl(d)
        with pytest.raises(MismatchedDatasetError):
            evaluate_fit(fit, other)

    @staticmethod
    def _result(alpha, beta):
        return FitResult(
            params=UslParams(alpha, beta),
            sse=0.0,
            r_squared=1.0,
            residuals=(),
            significance_warning=False,
            mode=MODE_NORMALIZED,
        )

    def test_compare_known_systems(self):
        # two tuned releases of the same cache workload
        a = self._result(0.0255, 0.0210)
        b = self._result(0.0988, 0.0209)
        cmp = compare_fits(a, b)
        assert cmp.alpha_delta == pytest.approx(0.0733, rel=1e-12)
        assert cmp.beta_delta == pytest.approx(-0.0001, rel=1e-10)
        assert cmp.peak_a == pytest.approx(6.812104073247993, rel=1e-12)
        assert cmp.peak_b == pytest.approx(6.56655291799894, rel=1e-12)
        assert cmp.peak_delta == pytest.approx(-0.2455511552490529, rel=1e-10)
        assert cmp.scales_further == "a"

    def test_compare_both_unbounded_is_tie(self):
        cmp = compare_fits(self._result(0.1, 0.0), self._result(0.3, 0.0))
        assert cmp.peak_delta == 0.0
        assert cmp.scales_further == "tie"

    def test_compare_finite_vs_unbounded(self):
        cmp = compare_fits(self._result(0.1, 0.001), self._result(0.1, 0.0))
        assert math.isinf(cmp.peak_delta)
        assert cmp.scales_further == "b"

    def test_halving_coherency_stretches_peak_by_sqrt2(self):
        fa = fit_usl(exact_dataset(0.05, 0.004, 100.0))
        fb = fit_usl(exact_dataset(0.05, 0.002, 100.0))
        assert fb.peak / fa.peak == pytest.approx(math.sqrt(2.0), rel=1e-9)


class TestFitErrors:
    def test_all_zero_throughput_is_degenerate(self):
        with pytest.raises(DegenerateDataError):
            fit_usl(Dataset.from_pairs([(1, 0.0), (2, 0.0), (4, 0.0)]))

    def test_normalized_needs_three_points(self):
        with pytest.raises(InsufficientDataError):
            fit_usl(Dataset.from_pairs([(1, 10.0), (2, 18.0)]))

    def test_raw3_needs_four_points(self):
        with pytest.raises(InsufficientDataError):
            fit_usl(Dataset.from_pairs([(2, 18.0), (4, 30.0), (8, 44.0)]))

    def test_normalized_without_baseline(self):
        d = Dataset.from_pairs([(2, 18.0), (4, 30.0), (8, 44.0), (16, 50.0)])
        with pytest.raises(MissingBaselineError):
            fit_usl(d, FitOptions(mode=MODE_NORMALIZED))

    def test_zero_baseline(self):
        d = Dataset.from_pairs([(1, 0.0), (2, 18.0), (4, 30.0)])
        with pytest.raises(ZeroBaselineError):
            fit_usl(d, FitOptions(mode=MODE_NORMALIZED))

    def test_bad_options_rejected(self):
        with pytest.raises(DomainError):
            FitOptions(mode="least-squares")
        with pytest.raises(DomainError):
            FitOptions(beta_max=0.0)

    def test_significance_warning_propagates(self):
        fit = fit_usl(exact_dataset(0.05, 0.001, 100.0, levels=[1, 2, 4]))
        assert fit.significance_warning
        assert not fit_usl(exact_dataset(0.05, 0.001, 100.0)).significance_warning


class TestBootstrap:
    def test_smoke_and_determinism(self):
        d = noisy_dataset(0.05, 0.002, 100.0, 0.03, seed=2)
        r1 = bootstrap_confidence(d, replicates=25, seed=3)
        r2 = bootstrap_confidence(d, replicates=25, seed=3)
        assert r1 == r2
        assert r1.alpha_interval[0] <= r1.alpha_interval[1]
        assert r1.beta_interval[0] <= r1.beta_interval[1]
        assert r1.x1_interval[0] <= r1.x1_interval[1]
        assert 0.0 <= r1.alpha_interval[0] and r1.alpha_interval[1] < 1.0
        assert r1.beta_interval[0] >= 0.0
        assert r1.replicates == 25 and r1.seed == 3 and r1.level == 0.95

    def test_pinned_x1_collapses_interval(self):
        d = noisy_dataset(0.05, 0.002, 100.0, 0.03, seed=2)
        r = bootstrap_confidence(d, replicates=10, seed=1)
        lo, hi = r.x1_interval
        assert lo == hi == d.baseline.x

    def test_rejects_bad_settings(self):
        d = exact_dataset(0.05, 0.001, 100.0)
        with pytest.raises(DomainError):
            bootstrap_confidence(d, replicates=1)
        with pytest.raises(DomainError):
            bootstrap_confidence(d, level=1.0)
