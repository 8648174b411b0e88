"""Transforms, frequency bookkeeping, and filter application."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fourierknots import (
    Grid1D,
    Grid2D,
    InvalidInputError,
    SpectralFilter,
    Spectrum,
    SpectrumSymmetryError,
    apply_filter,
    apply_filter_strands,
    fft_forward,
    fft_forward_2d,
    fft_inverse,
    fft_inverse_2d,
    frequency_vector,
    mode_indices,
)


def random_grid(m, seed=0):
    rng = np.random.default_rng(seed)
    return Grid1D(rng.standard_normal(m))


class TestGrid:
    def test_rejects_short_signal(self):
        with pytest.raises(InvalidInputError):
            Grid1D([1.0])

    def test_rejects_bad_domain(self):
        with pytest.raises(InvalidInputError):
            Grid1D([1.0, 2.0], domain=(1.0, 1.0))

    def test_spacing_is_periodic_convention(self):
        g = Grid1D(np.zeros(10), domain=(0.0, 2.0))
        assert g.h == pytest.approx(0.2)
        assert g.x[-1] == pytest.approx(2.0 - 0.2)

    def test_fit_params_reach_one(self):
        g = Grid1D(np.zeros(5))
        assert_allclose(g.params, [0.0, 0.25, 0.5, 0.75, 1.0])


class TestForward:
    def test_constant_signal_is_dc_only(self):
        c = 3.25
        spec = fft_forward(Grid1D(np.full(16, c)))
        assert spec.coeffs[0] == pytest.approx(16 * c)
        assert np.max(np.abs(spec.coeffs[1:])) < 1e-12

    def test_single_tone(self):
        n = 8
        x = np.arange(n) / n
        spec = fft_forward(Grid1D(np.sin(2 * np.pi * x)))
        mags = np.abs(spec.coeffs)
        nonzero = np.flatnonzero(mags > 1e-9)
        assert set(spec.mode_indices[nonzero]) == {1, -1}
        assert_allclose(mags[nonzero], n / 2, rtol=1e-12)

    def test_roundtrip_random(self):
        g = random_grid(64)
        back = fft_inverse(fft_forward(g))
        assert_allclose(back, g.samples, rtol=0, atol=1e-12 * np.abs(g.samples).max())

    def test_rejects_single_sample(self):
        with pytest.raises(InvalidInputError):
            Grid1D([1.0])


class TestInverse:
    def test_zero_spectrum(self):
        spec = Spectrum(np.zeros(8, dtype=complex), mode_indices(8))
        assert_allclose(fft_inverse(spec), np.zeros(8))

    def test_dc_only_gives_constant(self):
        coeffs = np.zeros(10, dtype=complex)
        coeffs[0] = 10 * 1.5
        assert_allclose(fft_inverse(Spectrum(coeffs, mode_indices(10))), 1.5)

    def test_residue_guard_trips_on_broken_symmetry(self):
        coeffs = np.zeros(8, dtype=complex)
        coeffs[1] = 1.0  # no conjugate partner at index -1
        with pytest.raises(SpectrumSymmetryError):
            fft_inverse(Spectrum(coeffs, mode_indices(8)))


class TestFrequencyVector:
    def test_single_mode(self):
        assert_allclose(frequency_vector(1, 1.0), [0.0])

    def test_length_four_unit_domain(self):
        assert_allclose(
            frequency_vector(4, 1.0),
            [0.0, 2 * np.pi, -4 * np.pi, -2 * np.pi],
        )

    def test_two_pi_domain_gives_integers(self):
        assert_allclose(frequency_vector(5, 2 * np.pi), [0, 1, 2, -2, -1])

    def test_rejects_bad_args(self):
        with pytest.raises(InvalidInputError):
            frequency_vector(0, 1.0)
        with pytest.raises(InvalidInputError):
            frequency_vector(4, 0.0)


class TestApplyFilter:
    def test_identity(self):
        spec = fft_forward(random_grid(32))
        out = apply_filter(spec, SpectralFilter(np.ones(32)))
        assert_allclose(out.coeffs, spec.coeffs)
        assert_allclose(out.mode_indices, spec.mode_indices)

    def test_zero_filter(self):
        spec = fft_forward(random_grid(32))
        out = apply_filter(spec, SpectralFilter(np.zeros(32)))
        assert np.all(out.coeffs == 0)

    def test_chain_equals_combined(self):
        rng = np.random.default_rng(3)
        spec = fft_forward(random_grid(48, seed=1))
        k1 = SpectralFilter(rng.standard_normal(48) + 1j * rng.standard_normal(48))
        k2 = SpectralFilter(rng.standard_normal(48) + 1j * rng.standard_normal(48))
        chained = apply_filter(apply_filter(spec, k1), k2)
        combined = apply_filter(spec, k1.chained(k2))
        assert_allclose(chained.coeffs, combined.coeffs, rtol=0,
                        atol=1e-14 * np.abs(combined.coeffs).max())

    def test_length_mismatch(self):
        spec = fft_forward(random_grid(32))
        with pytest.raises(InvalidInputError):
            apply_filter(spec, SpectralFilter(np.ones(31)))


class TestTwoDimensional:
    def test_constant_field_dc_only(self):
        spec = fft_forward_2d(Grid2D(np.full((6, 8), 2.0)))
        coeffs = spec.coeffs.copy()
        assert coeffs[0, 0] == pytest.approx(6 * 8 * 2.0)
        coeffs[0, 0] = 0.0
        assert np.max(np.abs(coeffs)) < 1e-10

    def test_product_tone_has_four_modes(self):
        m1, m2 = 16, 12
        x = np.arange(m1) / m1
        y = np.arange(m2) / m2
        f = np.outer(np.sin(2 * np.pi * x), np.cos(2 * np.pi * y))
        spec = fft_forward_2d(Grid2D(f))
        big = np.abs(spec.coeffs) > 1e-9
        assert big.sum() == 4
        idx1 = spec.mode_indices1[np.where(big)[0]]
        idx2 = spec.mode_indices2[np.where(big)[1]]
        assert set(np.abs(idx1)) == {1} and set(np.abs(idx2)) == {1}

    def test_roundtrip(self):
        rng = np.random.default_rng(5)
        g = Grid2D(rng.standard_normal((16, 12)))
        back = fft_inverse_2d(fft_forward_2d(g))
        assert_allclose(back, g.samples, rtol=0, atol=1e-12)

    def test_strand_identity(self):
        g = Grid2D(np.random.default_rng(0).standard_normal((8, 6)))
        spec = fft_forward_2d(g)
        out = apply_filter_strands(spec, SpectralFilter(np.ones(8)), dim=1)
        assert_allclose(out.coeffs, spec.coeffs)

    def test_strand_dims_commute(self):
        rng = np.random.default_rng(11)
        g = Grid2D(rng.standard_normal((10, 14)))
        spec = fft_forward_2d(g)
        k1 = SpectralFilter(rng.standard_normal(10) + 1j * rng.standard_normal(10))
        k2 = SpectralFilter(rng.standard_normal(14) + 1j * rng.standard_normal(14))
        ab = apply_filter_strands(apply_filter_strands(spec, k1, 1), k2, 2)
        ba = apply_filter_strands(apply_filter_strands(spec, k2, 2), k1, 1)
        assert_allclose(ab.coeffs, ba.coeffs, rtol=0,
                        atol=1e-14 * np.abs(ab.coeffs).max())

    def test_strand_derivative_of_product_tone(self):
        from fourierknots import derivative_filter

        m1, m2 = 32, 24
        x = np.arange(m1) / m1
        y = np.arange(m2) / m2
        g = Grid2D(np.outer(np.sin(2 * np.pi * x), np.cos(2 * np.pi * y)))
        filt = derivative_filter(frequency_vector(m1, 1.0), 1)
        out = fft_inverse_2d(apply_filter_strands(fft_forward_2d(g), filt, 1))
        expected = 2 * np.pi * np.outer(np.cos(2 * np.pi * x), np.cos(2 * np.pi * y))
        assert_allclose(out, expected, rtol=0, atol=1e-10)

    def test_strand_length_mismatch(self):
        spec = fft_forward_2d(Grid2D(np.zeros((8, 6)) + 1.0))
        with pytest.raises(InvalidInputError):
            apply_filter_strands(spec, SpectralFilter(np.ones(6)), dim=1)


class TestInvariants:
    @pytest.mark.parametrize("m", [2, 3, 5, 8, 17, 64, 255, 256, 1024, 4095, 4096])
    def test_roundtrip_many_lengths(self, m):
        g = random_grid(m, seed=m)
        back = fft_inverse(fft_forward(g))
        scale = max(np.abs(g.samples).max(), 1.0)
        assert np.max(np.abs(back - g.samples)) < 1e-12 * scale

    def test_linearity(self):
        rng = np.random.default_rng(21)
        f, g = rng.standard_normal(40), rng.standard_normal(40)
        alpha, beta = 1.7, -0.4
        lhs = fft_forward(Grid1D(alpha * f + beta * g)).coeffs
        rhs = alpha * fft_forward(Grid1D(f)).coeffs + beta * fft_forward(Grid1D(g)).coeffs
        assert_allclose(lhs, rhs, rtol=0, atol=1e-12 * np.abs(rhs).max())

    @pytest.mark.parametrize("m", [16, 17])
    def test_conjugate_symmetry(self, m):
        spec = fft_forward(random_grid(m, seed=2))
        c = spec.coeffs
        for n in range(1, m):
            assert c[m - n] == pytest.approx(np.conj(c[n]), abs=1e-12)
