import numpy as np
import pytest

from illclust.emd import (
    _count_extrema,
    _count_zero_crossings,
    decompose,
    first_imf_matrix,
)
from illclust.errors import SignalTooShort
from illclust.matrix import DataMatrix, condition_number, standardize


def two_tone(t=256, f=4):
    x = np.arange(t)
    low = np.sin(2 * np.pi * f * x / t)
    high = np.sin(2 * np.pi * 4 * f * x / t)
    return low + high, high


class TestDecompose:
    def test_constant_signal_has_no_modes(self):
        dec = decompose(np.full(32, 3.5))
        assert dec.imfs == ()
        assert np.array_equal(dec.residual, np.full(32, 3.5))

    def test_too_short_raises(self):
        with pytest.raises(SignalTooShort):
            decompose(np.arange(7.0))

    def test_pure_sinusoid_is_its_own_first_mode(self):
        t = np.arange(256)
        sig = np.sin(2 * np.pi * 8 * t / 256)
        dec = decompose(sig)
        imf1 = dec.imfs[0]
        assert np.corrcoef(imf1, sig)[0, 1] > 0.99
        assert np.abs(sig - imf1).max() < 0.05 * np.abs(sig).max()

    def test_two_tone_first_mode_tracks_fast_component(self):
        sig, high = two_tone()
        dec = decompose(sig)
        assert np.corrcoef(dec.imfs[0], high)[0, 1] > 0.95

    def test_reconstruction_on_random_signals(self):
        rng = np.random.default_rng(0)
        for i in range(50):
            sig = rng.standard_normal(rng.integers(32, 200))
            dec = decompose(sig)
            scale = np.abs(sig).max()
            assert np.abs(dec.reconstruct() - sig).max() <= 1e-8 * scale

    def test_mode_criterion_on_every_imf(self):
        rng = np.random.default_rng(1)
        for i in range(20):
            sig = rng.standard_normal(128)
            dec = decompose(sig)
            for imf in dec.imfs:
                ext = _count_extrema(imf)
                zc = _count_zero_crossings(imf)
                assert abs(ext - zc) <= 1

    def test_mode_count_respects_cap(self):
        rng = np.random.default_rng(2)
        sig = rng.standard_normal(256)
        dec = decompose(sig, max_imfs=2)
        assert len(dec.imfs) <= 2

    def test_residual_terminates_cleanly(self):
        # decomposition ends with a residual that is monotone-ish (< 2
        # extrema) or a numerically negligible leftover
        rng = np.random.default_rng(3)
        for i in range(10):
            sig = rng.standard_normal(200) + np.linspace(0, 4, 200)
            dec = decompose(sig, max_imfs=12)
            assert (
                _count_extrema(dec.residual) < 2
                or np.ptp(dec.residual) <= 1e-10 * np.ptp(sig)
            )

    def test_zero_crossing_counts_weakly_ordered(self):
        # each later mode oscillates no faster than its predecessor
        rng = np.random.default_rng(4)
        for i in range(10):
            dec = decompose(rng.standard_normal(256))
            zcs = [_count_zero_crossings(imf) for imf in dec.imfs]
            for a, b in zip(zcs, zcs[1:]):
                assert b <= a + 1


class TestHelpers:
    def test_extrema_count_simple(self):
        sig = np.array([0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0])
        assert _count_extrema(sig) == 3

    def test_plateau_counts_once(self):
        sig = np.array([0.0, 1.0, 1.0, 1.0, 0.0, -1.0, 0.0])
        assert _count_extrema(sig) == 2

    def test_zero_crossings(self):
        assert _count_zero_crossings(np.array([1.0, -1.0, 1.0, -1.0])) == 3
        assert _count_zero_crossings(np.array([1.0, 0.0, -1.0])) == 1
        assert _count_zero_crossings(np.array([1.0, 2.0, 3.0])) == 0


class TestFirstImfMatrix:
    def test_constant_rows_pass_through_flagged(self):
        values = np.vstack([np.full(16, 2.0), np.full(16, -1.0)])
        result = first_imf_matrix(DataMatrix(values))
        assert np.array_equal(result.matrix.values, values)
        assert result.passthrough_rows == (0, 1)

    def test_sinusoid_rows_nearly_unchanged(self):
        t = np.arange(256)
        rows = np.vstack([
            np.sin(2 * np.pi * 8 * t / 256),
            np.cos(2 * np.pi * 12 * t / 256),
        ])
        result = first_imf_matrix(DataMatrix(rows))
        assert result.passthrough_rows == ()
        for i in range(2):
            rel = np.abs(result.matrix.values[i] - rows[i]).max() / np.abs(rows[i]).max()
            assert rel < 0.05

    def test_shape_and_labels_preserved(self):
        rng = np.random.default_rng(5)
        m = DataMatrix(rng.standard_normal((4, 64)), row_labels=("a", "b", "c", "d"))
        result = first_imf_matrix(m)
        assert result.matrix.values.shape == (4, 64)
        assert result.matrix.row_labels == ("a", "b", "c", "d")

    def test_conditioning_improves_on_trended_ar_rows(self):
        # AR(1) rows plus a shared trend: taking the first mode must shrink
        # the condition number, as the pipeline relies on
        rng = np.random.default_rng(6)
        t = np.linspace(0, 1, 208)
        trend = np.outer(rng.standard_normal(96), 3.0 * t)
        ar = np.empty((96, 208))
        ar[:, 0] = rng.standard_normal(96)
        eps = rng.standard_normal((96, 208))
        for j in range(1, 208):
            ar[:, j] = 0.9 * ar[:, j - 1] + eps[:, j]
        m = standardize(DataMatrix(trend + ar))
        result = first_imf_matrix(m)
        out = standardize(result.matrix)
        assert (
            condition_number(out).condition_number
            < condition_number(m).condition_number
        )
