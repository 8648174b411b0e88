"""Jump indicator and two-pass classification."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fourierknots import (
    Grid1D,
    Grid2D,
    classify_jumps,
    detect_jumps,
    fft_forward,
    jump_filter,
    jump_indicator,
    jump_indicator_2d,
)
from fourierknots.datagen import SignalSpec, generate

# window sized to the rescaled indicator's tail around a strong value jump
# (about m/20 cells; the default 5 only covers the pass-1 spike width)
FIG6_WINDOW = 40


def brute_force_indicator(samples, x_eval=None):
    """Direct evaluation of the concentration-filtered partial sum.

    Independent of the FFT/IFFT code path: coefficients by explicit
    quadrature sums, indicator by explicit complex exponential sums at
    arbitrary evaluation points.
    """
    f = np.asarray(samples, dtype=float)
    m = f.size
    k = np.rint(np.fft.fftfreq(m) * m).astype(int)
    coeffs = np.array(
        [np.sum(f * np.exp(-2j * np.pi * np.arange(m) * n / m)) for n in k]
    )
    mult = jump_filter(m).multipliers
    if x_eval is None:
        x_eval = np.arange(m) / m
    out = np.array(
        [np.sum(mult * coeffs * np.exp(2j * np.pi * k * x)) / m for x in x_eval]
    )
    return out.real


def sawtooth(m, location=0.5, size=1.0):
    x = np.arange(m) / m
    return Grid1D(size * (0.5 - ((x - location) % 1.0)))


class TestIndicator:
    def test_constant_signal(self):
        J = jump_indicator(Grid1D(np.full(64, 4.2)))
        assert np.max(np.abs(J)) < 1e-12

    def test_smooth_signal_exponentially_small(self):
        m = 256
        x = np.arange(m) / m
        g = Grid1D(np.sin(2 * np.pi * x))
        J = jump_indicator(g)
        assert np.max(np.abs(J)) < 1e-6
        # threshold confirmed by the direct-summation oracle
        oracle = brute_force_indicator(g.samples)
        assert np.max(np.abs(oracle)) < 1e-6
        assert_allclose(J, oracle, rtol=0, atol=1e-10)

    def test_sawtooth_peak_location_and_height(self):
        m = 256
        g = sawtooth(m, 0.5, 1.0)
        J = jump_indicator(g)
        peak = int(np.argmax(np.abs(J)))
        assert abs(peak - 128) <= 1
        assert 0.5 <= np.abs(J[peak]) <= 2.0
        # dense oracle: the underlying filtered sum peaks at the jump
        dense_x = np.linspace(0.47, 0.53, 241)
        dense = brute_force_indicator(g.samples, dense_x)
        assert abs(dense_x[np.argmax(np.abs(dense))] - 0.5) < 1.5 / m
        assert 0.5 <= np.max(np.abs(dense)) <= 2.0

    def test_matches_oracle_on_grid(self):
        g = sawtooth(128, 0.3, 2.0)
        assert_allclose(
            jump_indicator(g), brute_force_indicator(g.samples), rtol=0, atol=1e-9
        )


class TestClassify:
    def test_constant_signal_empty_report(self):
        g = Grid1D(np.full(64, 1.0))
        report = classify_jumps(jump_indicator(g), 64, threshold=0.5, window=5)
        assert len(report) == 0

    def test_fig6_style_two_jumps(self):
        m = 600
        spec = SignalSpec.piecewise(
            [(0.5, "C1", 12.0), (0.75, "C0", 1.0)], base="two_tone"
        )
        g = generate(spec, m)
        report = classify_jumps(
            jump_indicator(g), m, threshold=0.3, window=FIG6_WINDOW
        )
        assert len(report) == 2
        c0 = report.of_kind("C0")
        c1 = report.of_kind("C1")
        assert len(c0) == 1 and len(c1) == 1
        assert abs(c0[0].u * (m - 1) - 0.75 * m) <= 1.0
        assert abs(c1[0].u * (m - 1) - 0.5 * m) <= 1.0

    def test_threshold_screens_small_jumps(self):
        m = 512
        spec = SignalSpec.piecewise(
            [(0.3, "C0", 1.0), (0.7, "C0", 0.3)], base="two_tone"
        )
        g = generate(spec, m)
        report = classify_jumps(jump_indicator(g), m, threshold=0.5, window=25)
        c0 = report.of_kind("C0")
        assert len(c0) == 1
        assert abs(c0[0].u * (m - 1) - 0.3 * m) <= 1.0

    def test_magnitude_linear_in_jump_size(self):
        m = 512
        peaks = []
        for size in (1.0, 2.0):
            J = jump_indicator(sawtooth(m, 0.5, size))
            peaks.append(np.max(np.abs(J)))
        assert peaks[1] / peaks[0] == pytest.approx(2.0, rel=0.05)

    def test_localization_of_separated_jumps(self):
        m, w = 600, 10
        spec = SignalSpec.piecewise(
            [(0.25, "C0", 1.0), (0.65, "C0", -1.5)], base="two_tone"
        )
        g = generate(spec, m)
        report = classify_jumps(jump_indicator(g), m, threshold=0.4, window=w)
        found = sorted(e.index for e in report.of_kind("C0"))
        assert len(found) == 2
        assert abs(found[0] - 0.25 * m) <= 1
        assert abs(found[1] - 0.65 * m) <= 1

    def test_exclusion_invariants(self):
        m = 600
        spec = SignalSpec.piecewise(
            [(0.5, "C1", 12.0), (0.75, "C0", 1.0)], base="two_tone"
        )
        g = generate(spec, m)
        report = classify_jumps(jump_indicator(g), m, threshold=0.3, window=FIG6_WINDOW)
        idx = [e.index for e in report.entries]
        for i, a in enumerate(idx):
            for b in idx[i + 1 :]:
                d = abs(a - b) % m
                assert min(d, m - d) > FIG6_WINDOW
        assert [e.u for e in report.entries] == sorted(e.u for e in report.entries)

    def test_determinism(self):
        g = generate(
            SignalSpec.piecewise([(0.4, "C0", 1.0)], base="two_tone"), 300
        )
        r1 = detect_jumps(g, window=20)
        r2 = detect_jumps(g, window=20)
        assert r1 == r2

    def test_rejects_bad_parameters(self):
        from fourierknots import InvalidInputError

        J = np.zeros(32)
        with pytest.raises(InvalidInputError):
            classify_jumps(J, 32, threshold=0.0)
        with pytest.raises(InvalidInputError):
            classify_jumps(J, 32, threshold=0.5, window=0)
        with pytest.raises(InvalidInputError):
            classify_jumps(J, 16, threshold=0.5)


class TestDirectional2D:
    def test_constant_field(self):
        g = Grid2D(np.full((32, 24), 3.0))
        for dim in (1, 2):
            assert np.max(np.abs(jump_indicator_2d(g, dim))) < 1e-12

    def test_jump_line_detected_only_along_first_dim(self):
        # dim-2 extent long enough for the indicator's exponential decay
        # to reach the assertion threshold
        m1, m2 = 128, 256
        x = np.arange(m1) / m1
        y = np.arange(m2) / m2
        step = 0.5 - ((x - 0.5) % 1.0)
        f = np.outer(step, np.ones(m2)) + 0.2 * np.sin(2 * np.pi * y)[None, :]
        g = Grid2D(f)
        j1 = jump_indicator_2d(g, 1)
        j2 = jump_indicator_2d(g, 2)
        rows = np.argmax(np.abs(j1), axis=0)
        assert np.all(np.abs(rows - 64) <= 1)
        assert np.max(np.abs(j2)) < 1e-6

    def test_separable_field_rows_match_1d_oracle(self):
        m1, m2 = 96, 48
        y = np.arange(m2) / m2
        profile = 1.0 + 0.5 * np.cos(2 * np.pi * y)
        saw = sawtooth(m1, 0.5, 1.0)
        f = np.outer(saw.samples, profile)
        j1 = jump_indicator_2d(Grid2D(f), 1)
        base = jump_indicator(saw)
        # per-strand linearity: column j is the 1-D indicator scaled by s(y_j)
        for j in (0, 11, 29):
            assert_allclose(j1[:, j], profile[j] * base, rtol=0, atol=1e-10)
