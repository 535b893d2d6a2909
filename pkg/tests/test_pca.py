import numpy as np
import pytest

from illclust.errors import EmptySelection
from illclust.matrix import DataMatrix, correlation_matrix, standardize, symmetric_eigen
from illclust.pca import (
    mp_density,
    project,
    select_kaiser,
    select_wishart,
    wishart_bound,
)


def spectrum_of(values):
    m = standardize(DataMatrix(values))
    return m, symmetric_eigen(correlation_matrix(m))


class TestWishartBound:
    def test_study_shape(self):
        b = wishart_bound(96, 208)
        assert b.lambda_plus == pytest.approx(2.8203, abs=5e-4)
        assert b.lambda_minus == pytest.approx((1 - np.sqrt(96 / 208)) ** 2, abs=1e-12)
        assert b.ratio_r == pytest.approx(96 / 208)

    def test_square_case_closes_support_at_zero(self):
        b = wishart_bound(50, 50)
        assert b.lambda_minus == pytest.approx(0.0, abs=1e-12)
        assert b.lambda_plus == pytest.approx(4.0, abs=1e-12)

    def test_tall_limit_collapses_toward_one(self):
        b = wishart_bound(1, 10**6)
        assert b.lambda_plus == pytest.approx(1.002001, abs=1e-9)
        assert b.lambda_minus <= 1.0 <= b.lambda_plus

    def test_exact_formulas(self):
        for n, t in [(10, 40), (30, 31), (7, 7), (12, 100)]:
            b = wishart_bound(n, t)
            r = n / t
            assert b.lambda_plus == pytest.approx((1 + np.sqrt(r)) ** 2, abs=1e-12)
            assert b.lambda_minus == pytest.approx((1 - np.sqrt(r)) ** 2, abs=1e-12)


class TestMpDensity:
    def test_zero_outside_support(self):
        b = wishart_bound(25, 100)
        assert mp_density(b.lambda_minus - 0.01, b) == 0.0
        assert mp_density(b.lambda_plus + 0.01, b) == 0.0
        assert mp_density(-1.0, b) == 0.0

    def test_zero_at_end_points(self):
        b = wishart_bound(25, 100)
        assert mp_density(b.lambda_minus, b) == 0.0
        assert mp_density(b.lambda_plus, b) == 0.0

    def test_nonnegative_inside(self):
        b = wishart_bound(46, 100)
        lam = np.linspace(b.lambda_minus, b.lambda_plus, 1000)
        assert np.all(mp_density(lam, b) >= 0.0)

    def test_integrates_to_one_r_quarter(self):
        b = wishart_bound(25, 100)
        assert (b.lambda_minus, b.lambda_plus) == (0.25, 2.25)
        lam = np.linspace(0.25, 2.25, 100_000)
        integral = np.trapezoid(mp_density(lam, b), lam)
        assert integral == pytest.approx(1.0, abs=1e-3)


class TestSelection:
    def fake_spectrum(self, eigenvalues):
        n = len(eigenvalues)
        from illclust.matrix import EigenSpectrum

        return EigenSpectrum(
            eigenvalues=np.array(eigenvalues, dtype=float), eigenvectors=np.eye(n)
        )

    def test_kaiser_threshold_inclusive(self):
        spec = self.fake_spectrum([2.5, 1.0, 0.3, 0.2])
        assert select_kaiser(spec) == [0, 1]
        assert select_kaiser(spec, inclusive=False) == [0]

    def test_kaiser_on_identity_correlation_keeps_all(self):
        spec = self.fake_spectrum([1.0, 1.0, 1.0])
        assert select_kaiser(spec) == [0, 1, 2]

    def test_kaiser_matches_scan_oracle(self):
        rng = np.random.default_rng(0)
        _, spec = spectrum_of(rng.standard_normal((96, 208)))
        expected = [i for i, lam in enumerate(spec.eigenvalues) if lam >= 1.0]
        assert select_kaiser(spec) == expected

    def test_wishart_strict_threshold(self):
        spec = self.fake_spectrum([5.1, 2.9, 2.7, 1.0])
        b = wishart_bound(96, 208)  # lambda_plus ~ 2.8203
        assert select_wishart(spec, b) == [0, 1]

    def test_wishart_never_larger_than_kaiser(self):
        b = wishart_bound(96, 208)
        for seed in range(10):
            rng = np.random.default_rng(seed)
            _, spec = spectrum_of(rng.standard_normal((96, 208)))
            assert len(select_wishart(spec, b)) <= len(select_kaiser(spec))

    def test_wishart_on_noise_rarely_selects(self):
        # iid Gaussian input: at most occasional single finite-size excursions
        b = wishart_bound(96, 208)
        small = 0
        for seed in range(25):
            rng = np.random.default_rng(seed)
            _, spec = spectrum_of(rng.standard_normal((96, 208)))
            if len(select_wishart(spec, b)) <= 1:
                small += 1
        assert small >= 24  # >= 95%

    def test_selections_are_prefixes(self):
        b = wishart_bound(30, 100)
        for seed in range(5):
            rng = np.random.default_rng(seed)
            _, spec = spectrum_of(rng.standard_normal((30, 100)))
            for sel in (select_kaiser(spec), select_wishart(spec, b)):
                assert sel == list(range(len(sel)))


class TestProject:
    def test_full_basis_reconstructs(self):
        rng = np.random.default_rng(1)
        m, spec = spectrum_of(rng.standard_normal((6, 40)))
        red = project(m, spec, range(6))
        recon = spec.eigenvectors @ red.scores
        assert np.max(np.abs(recon - m.values)) < 1e-8
        assert red.explained_fraction == pytest.approx(1.0, abs=1e-12)

    def test_rank_one_matrix_fully_explained_by_first(self):
        rng = np.random.default_rng(2)
        base = rng.standard_normal(30)
        values = np.vstack([2.0 * base, -1.0 * base, 0.5 * base])
        m, spec = spectrum_of(values)
        red = project(m, spec, [0])
        assert red.explained_fraction == pytest.approx(1.0, abs=1e-8)

    def test_three_groups_separate_in_two_components(self):
        rng = np.random.default_rng(3)
        t_per, n = 30, 10
        centers = np.array([[0.0, 0.0], [8.0, 0.0], [0.0, 8.0]])
        latent = np.repeat(centers, t_per, axis=0).T  # 2 x 90
        q, _ = np.linalg.qr(rng.standard_normal((n, 2)))
        values = q @ latent + 0.5 * rng.standard_normal((n, 3 * t_per))
        m, spec = spectrum_of(values)
        red = project(m, spec, [0, 1])
        labels = np.repeat([0, 1, 2], t_per)
        cents = np.array([red.scores[:, labels == g].mean(axis=1) for g in range(3)])
        spreads = [
            np.sqrt(np.mean(np.sum((red.scores[:, labels == g].T - cents[g]) ** 2, axis=1)))
            for g in range(3)
        ]
        for a in range(3):
            for b in range(a + 1, 3):
                gap = np.sqrt(np.sum((cents[a] - cents[b]) ** 2))
                assert gap > 3.0 * max(spreads)

    def test_variance_preserved_by_full_projection(self):
        rng = np.random.default_rng(4)
        m, spec = spectrum_of(rng.standard_normal((8, 60)))
        red = project(m, spec, range(8))
        row_vars = red.scores.var(axis=1)  # population convention
        assert np.sum(row_vars) == pytest.approx(spec.total_variance, abs=1e-8)
        assert np.allclose(np.sort(row_vars)[::-1], spec.eigenvalues, atol=1e-8)

    def test_normalized_scores_have_unit_variance(self):
        rng = np.random.default_rng(5)
        m, spec = spectrum_of(rng.standard_normal((8, 60)))
        red = project(m, spec, range(4), normalized=True)
        assert np.allclose(red.scores.var(axis=1), 1.0, atol=1e-8)

    def test_empty_selection_raises(self):
        rng = np.random.default_rng(6)
        m, spec = spectrum_of(rng.standard_normal((4, 20)))
        with pytest.raises(EmptySelection):
            project(m, spec, [])
