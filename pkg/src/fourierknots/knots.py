"""Knot vector construction from derivative features and detected jumps.

The placement rule turns the magnitude of a high-order derivative into a
density: the feature ``|f^(q)|^(1/q)`` is integrated into a normalized CDF
and interior knots are taken at equal CDF increments, so every knot span
receives the same amount of integrated feature.  Detected discontinuities
additionally receive repeated knots: multiplicity ``q`` at a value jump
(which fully decouples the fit across the knot) and ``q - 1`` at a
derivative jump.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, KnotBudgetError
from .filters import (
    derivative_filter,
    smoothing_filter_2d,
    spectral_derivative,
    truncate_noise_floor,
)
from .jumps import (
    C0,
    DEFAULT_WINDOW,
    JumpReport,
    classify_jumps,
    default_threshold,
    detect_jumps,
    jump_indicator_2d,
)
from .spectral import (
    Grid1D,
    Grid2D,
    apply_filter_strands,
    apply_multipliers_2d,
    fft_forward_2d,
    fft_inverse_2d,
    frequency_vector,
)

METHODS = ("uniform", "di_f", "di_fs", "di_fj")


@dataclass(frozen=True)
class FeatureCdf:
    """Discrete strictly increasing CDF of a feature function on [0, 1]."""

    u_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if u.shape != v.shape or u.ndim != 1 or u.size < 2:
            raise InvalidInputError("u_grid and values must be matching 1-D arrays")
        if np.any(np.diff(v) <= 0):
            raise InvalidInputError("CDF values must be strictly increasing")
        object.__setattr__(self, "u_grid", u)
        object.__setattr__(self, "values", v)

    def forward(self, u) -> np.ndarray:
        """CDF value at ``u`` by piecewise-linear interpolation."""
        return np.interp(u, self.u_grid, self.values)

    def inverse(self, t) -> np.ndarray:
        """Inverse CDF by interpolation on the flipped table."""
        return np.interp(t, self.values, self.u_grid)


@dataclass(frozen=True)
class KnotVector:
    """Clamped nondecreasing knot sequence on [0, 1] with spline order q.

    ``len(knots) == n + q`` for ``n`` control points; the first and last
    ``q`` knots are pinned to 0 and 1, and no interior value repeats more
    than ``q`` times.
    """

    knots: np.ndarray
    order: int

    def __post_init__(self):
        q = int(self.order)
        if q < 2:
            raise InvalidInputError("spline order q must be >= 2")
        arr = np.asarray(self.knots, dtype=float)
        if arr.ndim != 1 or arr.size < 2 * q:
            raise InvalidInputError("knot vector must hold at least 2q knots")
        if np.any(np.diff(arr) < 0):
            raise InvalidInputError("knots must be nondecreasing")
        if np.any(arr < 0) or np.any(arr > 1):
            raise InvalidInputError("knots must lie in [0, 1]")
        if np.any(arr[:q] != 0.0) or np.any(arr[-q:] != 1.0):
            raise InvalidInputError("knot vector must be clamped: q zeros and q ones")
        interior = arr[q:-q]
        if interior.size:
            _, counts = np.unique(interior, return_counts=True)
            if np.any(counts > q):
                raise InvalidInputError("interior knot multiplicity exceeds q")
            if np.any(interior <= 0) or np.any(interior >= 1):
                raise InvalidInputError("interior knots must lie strictly inside (0, 1)")
        object.__setattr__(self, "knots", arr)
        object.__setattr__(self, "order", q)

    @property
    def q(self) -> int:
        return self.order

    @property
    def degree(self) -> int:
        return self.order - 1

    @property
    def n(self) -> int:
        """Number of control points."""
        return self.knots.size - self.order

    @property
    def interior(self) -> np.ndarray:
        return self.knots[self.order : -self.order]

    def multiplicity(self, value: float, tol: float = 0.0) -> int:
        if tol:
            return int(np.sum(np.abs(self.knots - value) <= tol))
        return int(np.sum(self.knots == value))

    def spans(self) -> list[tuple[float, float]]:
        """Nonempty spans between consecutive distinct knots (clamps included)."""
        distinct = np.unique(self.knots)
        return list(zip(distinct[:-1], distinct[1:]))

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "order": self.order,
            "control_count": self.n,
            "knots": [float(v) for v in self.knots],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KnotVector":
        return cls(np.asarray(data["knots"], dtype=float), int(data["order"]))


def feature_function(deriv_samples: np.ndarray, q: int) -> np.ndarray:
    """Pointwise feature ``|f^(q)|^(1/q)``, the knot density driver."""
    if q < 1:
        raise InvalidInputError("feature order q must be >= 1")
    return np.abs(np.asarray(deriv_samples, dtype=float)) ** (1.0 / q)


def feature_cdf(
    feature: np.ndarray,
    eps: float | None = None,
    u_grid: np.ndarray | None = None,
) -> FeatureCdf:
    """Normalized cumulative integral of a nonnegative feature, perturbed
    to be strictly increasing.

    The trapezoid-rule integral is normalized to end at 1, then perturbed by
    ``eps * u`` and renormalized; the perturbation makes the CDF invertible
    even where the feature vanishes (an all-zero feature yields the identity
    CDF).  ``eps`` defaults to ``1 / (1000 m)``.
    """
    F = np.asarray(feature, dtype=float)
    if F.ndim != 1 or F.size < 2:
        raise InvalidInputError("feature must be a 1-D array of length >= 2")
    if np.any(F < 0):
        raise InvalidInputError("feature values must be nonnegative")
    m = F.size
    if eps is None:
        eps = 1.0 / (1000.0 * m)
    if not eps > 0:
        raise InvalidInputError("eps must be positive")
    u = np.linspace(0.0, 1.0, m) if u_grid is None else np.asarray(u_grid, dtype=float)
    if u.shape != F.shape:
        raise InvalidInputError("u_grid must match the feature length")
    du = np.diff(u)
    cum = np.concatenate(([0.0], np.cumsum(0.5 * du * (F[:-1] + F[1:]))))
    total = cum[-1]
    if total > 0:
        cum = cum / total
    perturbed = cum + eps * u
    perturbed = perturbed / perturbed[-1]
    return FeatureCdf(u, perturbed)


def knots_from_cdf(cdf: FeatureCdf, n: int, q: int) -> KnotVector:
    """Clamped knot vector with interior knots at equal CDF increments.

    Interior knot ``j`` (of ``n - q``) sits at the inverse CDF of
    ``(j + 1) / (n - q + 1)``, so consecutive knots bracket equal shares of
    integrated feature.
    """
    if q < 2:
        raise InvalidInputError("spline order q must be >= 2")
    if n < q:
        raise InvalidInputError(f"control count n={n} must be >= order q={q}")
    targets = np.arange(1, n - q + 1) / (n - q + 1)
    interior = cdf.inverse(targets)
    knots = np.concatenate((np.zeros(q), interior, np.ones(q)))
    return KnotVector(knots, q)


def uniform_knots(n: int, q: int) -> KnotVector:
    """Clamped knot vector with ``n - q + 1`` equal interior spans."""
    if q < 2:
        raise InvalidInputError("spline order q must be >= 2")
    if n < q:
        raise InvalidInputError(f"control count n={n} must be >= order q={q}")
    interior = np.arange(1, n - q + 1) / (n - q + 1)
    return KnotVector(np.concatenate((np.zeros(q), interior, np.ones(q))), q)


def merge_jump_knots(cdf: FeatureCdf, jumps: JumpReport, n: int, q: int) -> KnotVector:
    """High-multiplicity knots at detected jumps, CDF knots elsewhere.

    Each value jump receives a knot of multiplicity ``q`` and each
    derivative jump one of multiplicity ``q - 1``; the leftover interior
    budget is filled by :func:`knots_from_cdf` on the supplied (smoothed)
    feature CDF.  A CDF-placed knot landing within half a grid cell of a
    jump knot is moved to the nearest grid midpoint clear of all jump
    knots, so jump multiplicities stay exact.
    """
    if q < 2:
        raise InvalidInputError("spline order q must be >= 2")
    if n < q:
        raise InvalidInputError(f"control count n={n} must be >= order q={q}")
    for e in jumps.entries:
        if not 0.0 < e.u < 1.0:
            raise InvalidInputError(
                f"jump location u={e.u} must lie strictly inside (0, 1)"
            )

    available = n - q
    cost = sum(q if e.kind == C0 else q - 1 for e in jumps.entries)
    if cost > available:
        raise KnotBudgetError(cost, available)

    jump_knots: list[float] = []
    jump_sites: list[float] = []
    for e in jumps.entries:
        mult = q if e.kind == C0 else q - 1
        jump_sites.append(e.u)
        jump_knots.extend([e.u] * mult)

    remaining = available - cost
    placed: list[float] = []
    if remaining > 0:
        base = knots_from_cdf(cdf, remaining + q, q).interior
        half_cell = 0.5 * float(np.mean(np.diff(cdf.u_grid)))
        mids = 0.5 * (cdf.u_grid[:-1] + cdf.u_grid[1:])
        free = mids[
            [all(abs(mid - s) >= half_cell for s in jump_sites) for mid in mids]
        ]
        for k in base:
            if jump_sites and min(abs(k - s) for s in jump_sites) < half_cell:
                if free.size == 0:
                    raise KnotBudgetError(cost + 1, available)
                k = float(free[np.argmin(np.abs(free - k))])
            placed.append(float(k))

    interior = np.sort(np.asarray(jump_knots + placed))
    knots = np.concatenate((np.zeros(q), interior, np.ones(q)))
    return KnotVector(knots, q)


def finite_difference_derivative(
    samples: np.ndarray, h: float, q: int, periodic: bool = False
) -> np.ndarray:
    """Repeated first-order central differences.

    With ``periodic`` the stencil wraps around; otherwise one-sided
    differences are used at the boundaries (the fallback for a dimension
    that is not periodic).
    """
    f = np.asarray(samples, dtype=float)
    if q < 1 or int(q) != q:
        raise InvalidInputError("derivative order q must be a positive integer")
    if not h > 0:
        raise InvalidInputError("spacing h must be positive")
    if f.size <= 2 * q:
        raise InvalidInputError("signal too short for the requested order")
    out = f
    for _ in range(int(q)):
        if periodic:
            out = (np.roll(out, -1) - np.roll(out, 1)) / (2.0 * h)
        else:
            grad = np.empty_like(out)
            grad[1:-1] = (out[2:] - out[:-2]) / (2.0 * h)
            grad[0] = (out[1] - out[0]) / h
            grad[-1] = (out[-1] - out[-2]) / h
            out = grad
    return out


def choose_knots(
    g: Grid1D,
    n: int,
    q: int,
    method: str = "di_f",
    threshold: float | None = None,
    window: int = DEFAULT_WINDOW,
) -> KnotVector:
    """Build a knot vector for a 1-D grid by the named method.

    ``uniform``
        equal interior spans.
    ``di_f``
        derivative-informed: feature CDF of the spectral q-th derivative.
    ``di_fs``
        as ``di_f`` but on the implicitly smoothed signal (noisy data).
    ``di_fj``
        jump detection first, high-multiplicity knots at jumps, remaining
        knots by ``di_fs`` on the smoothed feature CDF.
    """
    if method not in METHODS:
        raise InvalidInputError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "uniform":
        return uniform_knots(n, q)
    if method in ("di_f", "di_fs"):
        deriv = spectral_derivative(g, q, smooth=(method == "di_fs"))
        return knots_from_cdf(feature_cdf(feature_function(deriv, q)), n, q)
    report = detect_jumps(g, threshold=threshold, window=window)
    deriv = spectral_derivative(g, q, smooth=True)
    cdf = feature_cdf(feature_function(deriv, q))
    return merge_jump_knots(cdf, report, n, q)


def collapsed_feature_2d(partials: np.ndarray, q: int, dim: int) -> np.ndarray:
    """Collapse a field of q-th partial derivatives to a 1-D feature.

    The pointwise feature ``|partial|^(1/q)`` is summed over the other
    dimension's samples, leaving a profile over the parameters of ``dim``:
    large wherever any strand of the field needs knots near that parameter.
    """
    if dim not in (1, 2):
        raise InvalidInputError("dim must be 1 or 2")
    arr = np.asarray(partials, dtype=float)
    if arr.ndim != 2:
        raise InvalidInputError("partials must be a 2-D array")
    pointwise = feature_function(arr, q)
    return pointwise.sum(axis=2 - dim)


def _spectral_partials(
    g: Grid2D, q: int, dim: int, smooth: bool
) -> np.ndarray:
    """q-th partial derivatives along ``dim`` via strand filters."""
    spec = fft_forward_2d(g)
    spec = spec.with_coeffs(truncate_noise_floor(spec.coeffs))
    if smooth:
        mult = smoothing_filter_2d(
            frequency_vector(g.m1, g.length(1)),
            frequency_vector(g.m2, g.length(2)),
            g.spacing(1),
            g.spacing(2),
        )
        spec = apply_multipliers_2d(spec, mult)
    m_dim = g.shape[dim - 1]
    filt = derivative_filter(frequency_vector(m_dim, g.length(dim)), q)
    return fft_inverse_2d(apply_filter_strands(spec, filt, dim))


def _fd_partials(g: Grid2D, q: int, dim: int) -> np.ndarray:
    """Finite-difference partials along a non-periodic dimension."""
    h = g.length(dim) / (g.shape[dim - 1] - 1)
    return np.apply_along_axis(
        finite_difference_derivative, dim - 1, g.samples, h, q, False
    )


def _collapse_indicator(indicator: np.ndarray, dim: int) -> np.ndarray:
    """Profile of a directional 2-D indicator along ``dim``: the signed
    value of largest magnitude across the other dimension."""
    mags = np.abs(indicator)
    other = 2 - dim
    pick = np.argmax(mags, axis=other)
    return np.take_along_axis(
        indicator, np.expand_dims(pick, axis=other), axis=other
    ).squeeze(axis=other)


def knots_2d(
    g: Grid2D,
    n1: int,
    n2: int,
    q: int,
    smooth: bool = False,
    jumps: bool = False,
    periodic_dims: tuple[bool, bool] = (True, True),
    threshold: float | None = None,
    window: int = DEFAULT_WINDOW,
) -> tuple[KnotVector, KnotVector]:
    """Per-dimension knot vectors for a 2-D grid.

    Each dimension runs the 1-D pipeline on collapsed features: spectral
    partial derivatives along periodic dimensions (finite differences on
    dimensions flagged non-periodic), pointwise feature, collapse, CDF,
    knots.  With ``jumps`` enabled, directional indicators contribute
    high-multiplicity knots per dimension.
    """
    counts = (n1, n2)
    out = []
    for dim in (1, 2):
        n = counts[dim - 1]
        if periodic_dims[dim - 1]:
            partials = _spectral_partials(g, q, dim, smooth)
        else:
            partials = _fd_partials(g, q, dim)
        profile = collapsed_feature_2d(partials, q, dim)
        cdf = feature_cdf(profile, eps=1.0 / (1000.0 * g.shape[dim - 1]))
        if jumps and periodic_dims[dim - 1]:
            indicator = _collapse_indicator(jump_indicator_2d(g, dim), dim)
            thr = threshold if threshold is not None else default_threshold(g.samples)
            report = classify_jumps(indicator, g.shape[dim - 1], thr, window)
            out.append(merge_jump_knots(cdf, report, n, q))
        else:
            out.append(knots_from_cdf(cdf, n, q))
    return out[0], out[1]
