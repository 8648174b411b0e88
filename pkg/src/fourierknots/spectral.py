"""Discrete Fourier transforms, frequency bookkeeping, and filter application.

Conventions used throughout the package:

* Samples are uniform on ``[a, b)`` with spacing ``h = (b - a) / m``; the
  last sample is *not* a duplicate of the first (periodic convention).
* The forward transform is the unnormalized DFT
  ``F_n = sum_k f_k exp(-2 pi i k n / N)``; the inverse carries ``1/N``.
* Mode indices are signed: index ``k`` for ``k < ceil(N/2)``, else
  ``k - N``, matching the layout of ``numpy.fft.fftfreq``.
* Angular frequencies are ``xi_k = 2 pi k_signed / L`` for domain length
  ``L``.

Fitting, by contrast, parameterizes sample ``i`` at ``u_i = i/(m-1)``
(see :class:`Grid1D.params`).  The two conventions are deliberately kept
side by side; transforms always use the periodic one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, SpectrumSymmetryError

# Conjugate-symmetry defect (relative to the peak coefficient) above which
# an inverse transform refuses to discard the imaginary part: it indicates
# a filter bug, not roundoff.
SYMMETRY_TOL = 1e-9


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InvalidInputError(f"{name} must be nonempty")
    return arr


@dataclass(frozen=True)
class Grid1D:
    """Uniformly sampled real signal on ``[a, b)``.

    Parameters
    ----------
    samples : array_like
        Real sample values, length ``m >= 2``.
    domain : tuple of float
        Physical bounds ``(a, b)`` with ``b > a``.  Defaults to ``(0, 1)``.
    """

    samples: np.ndarray
    domain: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        arr = _as_float_array(self.samples, "samples")
        if arr.ndim != 1 or arr.size < 2:
            raise InvalidInputError("Grid1D needs a 1-D signal of length >= 2")
        a, b = float(self.domain[0]), float(self.domain[1])
        if not b > a:
            raise InvalidInputError(f"domain must satisfy b > a, got ({a}, {b})")
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "domain", (a, b))

    @property
    def m(self) -> int:
        return self.samples.size

    @property
    def length(self) -> float:
        a, b = self.domain
        return b - a

    @property
    def h(self) -> float:
        """Grid spacing under the periodic convention."""
        return self.length / self.m

    @property
    def x(self) -> np.ndarray:
        """Physical sample locations ``a + i h``."""
        return self.domain[0] + np.arange(self.m) * self.h

    @property
    def params(self) -> np.ndarray:
        """Fit parameters ``u_i = i / (m - 1)`` on [0, 1]."""
        return np.linspace(0.0, 1.0, self.m)


@dataclass(frozen=True)
class Grid2D:
    """Uniformly sampled real field on a rectangle, shape ``(m1, m2)``."""

    samples: np.ndarray
    domain: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (0.0, 1.0))

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 2 or min(arr.shape) < 2:
            raise InvalidInputError("Grid2D needs a 2-D field with both extents >= 2")
        doms = []
        for a, b in self.domain:
            a, b = float(a), float(b)
            if not b > a:
                raise InvalidInputError(f"domain must satisfy b > a, got ({a}, {b})")
            doms.append((a, b))
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "domain", (doms[0], doms[1]))

    @property
    def shape(self) -> tuple[int, int]:
        return self.samples.shape

    @property
    def m1(self) -> int:
        return self.samples.shape[0]

    @property
    def m2(self) -> int:
        return self.samples.shape[1]

    def length(self, dim: int) -> float:
        a, b = self.domain[dim - 1]
        return b - a

    def spacing(self, dim: int) -> float:
        return self.length(dim) / self.shape[dim - 1]

    def params(self, dim: int) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.shape[dim - 1])

    def axis_grid(self, dim: int) -> Grid1D:
        """A 1-D grid descriptor for the chosen dimension (1 or 2)."""
        first = self.samples[:, 0] if dim == 1 else self.samples[0, :]
        return Grid1D(first, self.domain[dim - 1])


def mode_indices(n: int) -> np.ndarray:
    """Signed DFT mode indices ``[0, 1, ..., ceil(n/2)-1, -floor(n/2), ..., -1]``."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    return np.rint(np.fft.fftfreq(n) * n).astype(int)


def frequency_vector(n: int, domain_length: float) -> np.ndarray:
    """Angular frequencies ``xi_k = 2 pi k_signed / L`` in DFT order."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if not domain_length > 0:
        raise InvalidInputError("domain_length must be positive")
    return 2.0 * np.pi * mode_indices(n) / domain_length


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT coefficients with their signed mode indices.

    ``noise_floor`` is an absolute bound on per-coefficient roundoff
    inherited from the transform that built the spectrum; filters scale it
    along with the coefficients.  The inverse transform uses it to tell a
    symmetry-breaking filter bug from roundoff-level asymmetry.
    """

    coeffs: np.ndarray
    mode_indices: np.ndarray
    domain_length: float = 1.0
    noise_floor: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        idx = np.asarray(self.mode_indices, dtype=int)
        if c.ndim != 1 or c.size < 1:
            raise InvalidInputError("Spectrum needs a nonempty 1-D coefficient vector")
        if idx.shape != c.shape:
            raise InvalidInputError("mode_indices must match coeffs in length")
        if not self.domain_length > 0:
            raise InvalidInputError("domain_length must be positive")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "mode_indices", idx)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def frequencies(self) -> np.ndarray:
        """Angular frequency of each coefficient."""
        return 2.0 * np.pi * self.mode_indices / self.domain_length

    def with_coeffs(self, coeffs: np.ndarray) -> "Spectrum":
        """Same metadata, new coefficients."""
        return Spectrum(coeffs, self.mode_indices, self.domain_length,
                        self.noise_floor)


@dataclass(frozen=True)
class Spectrum2D:
    """2-D DFT coefficients with per-dimension signed mode indices."""

    coeffs: np.ndarray
    mode_indices1: np.ndarray
    mode_indices2: np.ndarray
    domain_lengths: tuple[float, float] = (1.0, 1.0)
    noise_floor: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 2:
            raise InvalidInputError("Spectrum2D needs a 2-D coefficient array")
        i1 = np.asarray(self.mode_indices1, dtype=int)
        i2 = np.asarray(self.mode_indices2, dtype=int)
        if i1.size != c.shape[0] or i2.size != c.shape[1]:
            raise InvalidInputError("mode index vectors must match the coefficient shape")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "mode_indices1", i1)
        object.__setattr__(self, "mode_indices2", i2)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape

    def frequencies(self, dim: int) -> np.ndarray:
        idx = self.mode_indices1 if dim == 1 else self.mode_indices2
        return 2.0 * np.pi * idx / self.domain_lengths[dim - 1]

    def with_coeffs(self, coeffs: np.ndarray) -> "Spectrum2D":
        """Same metadata, new coefficients."""
        return Spectrum2D(coeffs, self.mode_indices1, self.mode_indices2,
                          self.domain_lengths, self.noise_floor)


@dataclass(frozen=True)
class SpectralFilter:
    """Per-mode complex multipliers, applied by pointwise product."""

    multipliers: np.ndarray
    label: str = field(default="", compare=False)

    def __post_init__(self):
        mult = np.asarray(self.multipliers, dtype=complex)
        if mult.ndim != 1 or mult.size < 1:
            raise InvalidInputError("multipliers must be a nonempty 1-D vector")
        object.__setattr__(self, "multipliers", mult)

    def __len__(self) -> int:
        return self.multipliers.size

    def chained(self, other: "SpectralFilter") -> "SpectralFilter":
        """Pointwise product of two filters; composition of applications."""
        if len(self) != len(other):
            raise InvalidInputError("cannot chain filters of different lengths")
        return SpectralFilter(self.multipliers * other.multipliers)


def fft_forward(g: Grid1D) -> Spectrum:
    """Unnormalized forward DFT of a 1-D grid."""
    if g.m < 2:
        raise InvalidInputError("signal length must be >= 2")
    floor = np.finfo(float).eps * g.m * float(np.max(np.abs(g.samples), initial=0.0))
    return Spectrum(np.fft.fft(g.samples), mode_indices(g.m), g.length, floor)


def _assert_conjugate_symmetric(coeffs: np.ndarray, noise_floor: float) -> None:
    """Require ``C[-k] == conj(C[k])`` within SYMMETRY_TOL of the peak.

    Checked on the spectrum rather than on the inverse transform's
    imaginary residue: when the true output cancels to machine noise (an
    indicator over a smooth signal, say) the residue is the same size as
    the real part, so a residue-relative test cannot tell a symmetric
    spectrum from a broken one.  Defects below the propagated roundoff
    floor are likewise roundoff, not bugs, even when a filter has crushed
    the peak coefficient to a comparable size.
    """
    c = coeffs
    if c.ndim == 1:
        rev = c[(-np.arange(c.size)) % c.size]
    else:
        m1, m2 = c.shape
        rev = c[np.ix_((-np.arange(m1)) % m1, (-np.arange(m2)) % m2)]
    gap = float(np.max(np.abs(c - np.conj(rev))))
    scale = float(np.max(np.abs(c)))
    if gap <= 16.0 * noise_floor:
        return
    if gap > SYMMETRY_TOL * max(scale, np.finfo(float).tiny):
        raise SpectrumSymmetryError(
            f"conjugate-symmetry defect {gap:.3e} exceeds {SYMMETRY_TOL:.0e} of "
            f"the peak coefficient {scale:.3e}; a filter broke the symmetry "
            f"of a real signal's spectrum"
        )


def fft_inverse(s: Spectrum) -> np.ndarray:
    """1/N-normalized inverse DFT, returning real samples.

    The spectrum must be conjugate-symmetric (the transform of a real
    signal, possibly filtered by symmetry-preserving filters); the
    roundoff-level imaginary residue of the inverse is then discarded.
    """
    _assert_conjugate_symmetric(s.coeffs, s.noise_floor)
    return np.fft.ifft(s.coeffs).real.copy()


def apply_filter(s: Spectrum, k: SpectralFilter) -> Spectrum:
    """Hadamard product of filter multipliers with the coefficients."""
    if len(k) != s.n:
        raise InvalidInputError(
            f"filter length {len(k)} does not match spectrum length {s.n}"
        )
    floor = s.noise_floor * float(np.max(np.abs(k.multipliers), initial=0.0))
    return Spectrum(s.coeffs * k.multipliers, s.mode_indices, s.domain_length,
                    floor)


def fft_forward_2d(g: Grid2D) -> Spectrum2D:
    """Separable row-column forward DFT of a 2-D grid."""
    floor = np.finfo(float).eps * g.m1 * g.m2 * float(
        np.max(np.abs(g.samples), initial=0.0)
    )
    return Spectrum2D(
        np.fft.fft2(g.samples),
        mode_indices(g.m1),
        mode_indices(g.m2),
        (g.length(1), g.length(2)),
        floor,
    )


def fft_inverse_2d(s: Spectrum2D) -> np.ndarray:
    """Inverse 2-D DFT, returning a real field; symmetry checked as in 1-D."""
    _assert_conjugate_symmetric(s.coeffs, s.noise_floor)
    return np.fft.ifft2(s.coeffs).real.copy()


def apply_filter_strands(s: Spectrum2D, k: SpectralFilter, dim: int) -> Spectrum2D:
    """Apply a 1-D filter independently to every strand along ``dim``.

    A strand along dimension 1 is a column of coefficients with the second
    index fixed (and vice versa); the other dimension is untouched.
    """
    if dim not in (1, 2):
        raise InvalidInputError("dim must be 1 or 2")
    if len(k) != s.shape[dim - 1]:
        raise InvalidInputError(
            f"filter length {len(k)} does not match extent {s.shape[dim - 1]} of dim {dim}"
        )
    mult = k.multipliers[:, None] if dim == 1 else k.multipliers[None, :]
    floor = s.noise_floor * float(np.max(np.abs(k.multipliers), initial=0.0))
    return Spectrum2D(
        s.coeffs * mult, s.mode_indices1, s.mode_indices2, s.domain_lengths,
        floor,
    )


def apply_multipliers_2d(s: Spectrum2D, multipliers: np.ndarray) -> Spectrum2D:
    """Pointwise product with a full 2-D multiplier array (e.g. smoothing)."""
    mult = np.asarray(multipliers, dtype=complex)
    if mult.shape != s.shape:
        raise InvalidInputError("multiplier array shape must match the spectrum")
    floor = s.noise_floor * float(np.max(np.abs(mult), initial=0.0))
    return Spectrum2D(
        s.coeffs * mult, s.mode_indices1, s.mode_indices2, s.domain_lengths,
        floor,
    )
