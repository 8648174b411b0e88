"""B-spline basis evaluation, least-squares fitting, and error metrics.

Basis functions follow the Cox-de Boor recurrence with the half-open span
convention; ``u = 1`` is assigned to the last nonempty span so clamped
curves interpolate their final control point.  Fitting minimizes the
discrete L2 error; rank-deficient collocation systems (Schoenberg-Whitney
violated) resolve to the minimum-norm minimizer through a rank-revealing
LAPACK driver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import InvalidInputError
from .knots import KnotVector
from .spectral import Grid1D, Grid2D

# Singular values below this fraction of the largest are treated as zero
# when solving the least-squares system.
RANK_TOL = 1e-12


def _find_spans(kv: KnotVector, u: np.ndarray) -> np.ndarray:
    """Index of the nonempty knot span containing each parameter."""
    spans = np.searchsorted(kv.knots, u, side="right") - 1
    return np.clip(spans, kv.degree, kv.n - 1)


def _basis_matrix(kv: KnotVector, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero basis values at each parameter.

    Returns ``(spans, values)`` where ``values[i, r]`` is basis function
    ``spans[i] - p + r`` evaluated at ``u[i]``; each row holds the p+1
    possibly nonzero entries and sums to 1.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0) or np.any(u > 1.0):
        raise InvalidInputError("parameters must lie in [0, 1]")
    p = kv.degree
    knots = kv.knots
    spans = _find_spans(kv, u)
    npts = u.size
    values = np.zeros((npts, p + 1))
    values[:, 0] = 1.0
    left = np.zeros((npts, p + 1))
    right = np.zeros((npts, p + 1))
    for j in range(1, p + 1):
        left[:, j] = u - knots[spans + 1 - j]
        right[:, j] = knots[spans + j] - u
        saved = np.zeros(npts)
        for r in range(j):
            denom = right[:, r + 1] + left[:, j - r]
            temp = values[:, r] / denom
            values[:, r] = saved + right[:, r + 1] * temp
            saved = left[:, j - r] * temp
        values[:, j] = saved
    return spans, values


def basis_eval(kv: KnotVector, u: float) -> list[tuple[int, float]]:
    """Nonzero basis functions at ``u`` as ``(index, value)`` pairs.

    At most ``p + 1`` pairs are returned; values are nonnegative and sum
    to 1 (partition of unity).
    """
    spans, values = _basis_matrix(kv, np.atleast_1d(float(u)))
    start = int(spans[0]) - kv.degree
    return [(start + r, float(v)) for r, v in enumerate(values[0])]


def build_collocation(kv: KnotVector, params: np.ndarray) -> scipy.sparse.csr_matrix:
    """Sparse design matrix: row i holds the basis values at ``params[i]``.

    Rows carry at most ``p + 1`` nonzeros and sum to 1.  Parameters must be
    nondecreasing in [0, 1].
    """
    u = np.asarray(params, dtype=float)
    if u.ndim != 1 or u.size < 1:
        raise InvalidInputError("params must be a nonempty 1-D array")
    if np.any(np.diff(u) < 0):
        raise InvalidInputError("params must be nondecreasing")
    spans, values = _basis_matrix(kv, u)
    p = kv.degree
    rows = np.repeat(np.arange(u.size), p + 1)
    cols = (spans[:, None] - p + np.arange(p + 1)[None, :]).ravel()
    mat = scipy.sparse.csr_matrix(
        (values.ravel(), (rows, cols)), shape=(u.size, kv.n)
    )
    return mat


@dataclass(frozen=True)
class FitReport:
    """Error summary of a least-squares fit."""

    rms_error: float
    max_error: float
    residuals: np.ndarray
    knot_count: int
    solve_rank: int

    def to_dict(self, include_residuals: bool = False) -> dict:
        data = {
            "schema_version": 1,
            "rms_error": self.rms_error,
            "max_error": self.max_error,
            "knot_count": self.knot_count,
            "solve_rank": self.solve_rank,
            "sample_count": int(self.residuals.size),
        }
        if include_residuals:
            data["residuals"] = [float(r) for r in self.residuals.ravel()]
        return data


@dataclass(frozen=True)
class BSplineModel:
    """Scalar-valued B-spline curve: knots plus control points."""

    knots: KnotVector
    control_points: np.ndarray
    domain: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        pts = np.asarray(self.control_points, dtype=float)
        if pts.ndim != 1 or pts.size != self.knots.n:
            raise InvalidInputError(
                f"need exactly {self.knots.n} control points, got {pts.size}"
            )
        object.__setattr__(self, "control_points", pts)

    @property
    def degree(self) -> int:
        return self.knots.degree

    def evaluate(self, u) -> np.ndarray | float:
        scalar = np.isscalar(u)
        arr = np.atleast_1d(np.asarray(u, dtype=float))
        spans, values = _basis_matrix(self.knots, arr)
        p = self.knots.degree
        idx = spans[:, None] - p + np.arange(p + 1)[None, :]
        out = np.sum(values * self.control_points[idx], axis=1)
        return float(out[0]) if scalar else out

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "order": self.knots.order,
            "knots": [float(v) for v in self.knots.knots],
            "control_points": [float(v) for v in self.control_points],
            "domain": [float(self.domain[0]), float(self.domain[1])],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BSplineModel":
        kv = KnotVector(np.asarray(data["knots"], dtype=float), int(data["order"]))
        return cls(
            kv,
            np.asarray(data["control_points"], dtype=float),
            tuple(data.get("domain", (0.0, 1.0))),
        )


@dataclass(frozen=True)
class TensorSplineModel:
    """Tensor-product B-spline surface with a scalar control net."""

    knots1: KnotVector
    knots2: KnotVector
    control_net: np.ndarray
    domain: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (0.0, 1.0))

    def __post_init__(self):
        net = np.asarray(self.control_net, dtype=float)
        if net.shape != (self.knots1.n, self.knots2.n):
            raise InvalidInputError(
                f"control net must be {self.knots1.n} x {self.knots2.n}, got {net.shape}"
            )
        if self.knots1.order != self.knots2.order:
            raise InvalidInputError("both knot vectors must share the spline order")
        object.__setattr__(self, "control_net", net)

    def evaluate_grid(self, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        """Surface values on the tensor grid ``u1 x u2``."""
        a1 = build_collocation(self.knots1, np.asarray(u1, dtype=float))
        a2 = build_collocation(self.knots2, np.asarray(u2, dtype=float))
        return a1 @ self.control_net @ a2.T

    def evaluate(self, u1: float, u2: float) -> float:
        return float(self.evaluate_grid(np.atleast_1d(u1), np.atleast_1d(u2))[0, 0])

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "order": self.knots1.order,
            "knots1": [float(v) for v in self.knots1.knots],
            "knots2": [float(v) for v in self.knots2.knots],
            "control_net": [[float(v) for v in row] for row in self.control_net],
            "domain": [list(self.domain[0]), list(self.domain[1])],
        }


def _solve_min_norm(design: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, int]:
    """Least-squares solve returning the minimum-norm minimizer and rank."""
    solution, _, rank, _ = scipy.linalg.lstsq(
        design, rhs, cond=RANK_TOL, lapack_driver="gelsd"
    )
    return solution, int(rank)


def _error_report(residuals: np.ndarray, knot_count: int, rank: int) -> FitReport:
    flat = residuals.ravel()
    rms = float(np.sqrt(np.mean(flat**2)))
    return FitReport(rms, float(np.max(np.abs(flat))), residuals, knot_count, rank)


def fit_least_squares(g: Grid1D, kv: KnotVector) -> tuple[BSplineModel, FitReport]:
    """Control points minimizing the discrete L2 misfit on the grid.

    Sample ``i`` is collocated at ``u_i = i/(m-1)``.  When the system is
    rank deficient the minimum-norm minimizer is returned; the effective
    rank is recorded in the report.
    """
    design = build_collocation(kv, g.params).toarray()
    coeffs, rank = _solve_min_norm(design, g.samples)
    model = BSplineModel(kv, coeffs, g.domain)
    residuals = design @ coeffs - g.samples
    return model, _error_report(residuals, kv.knots.size, rank)


def fit_tensor(
    g: Grid2D, knots1: KnotVector, knots2: KnotVector
) -> tuple[TensorSplineModel, FitReport]:
    """Tensor-product least squares on a full grid.

    Fits dimension 1 across every column, then dimension 2 on the
    intermediate coefficients.  On a full tensor grid this two-stage solve
    equals the minimum-norm solution of the full Kronecker system, because
    the pseudoinverse of a Kronecker product is the Kronecker product of
    the pseudoinverses.
    """
    a1 = build_collocation(knots1, g.params(1)).toarray()
    a2 = build_collocation(knots2, g.params(2)).toarray()
    stage1, rank1 = _solve_min_norm(a1, g.samples)
    net_t, rank2 = _solve_min_norm(a2, stage1.T)
    net = net_t.T
    model = TensorSplineModel(knots1, knots2, net, g.domain)
    residuals = a1 @ net @ a2.T - g.samples
    report = _error_report(
        residuals, knots1.knots.size + knots2.knots.size, rank1 * rank2
    )
    return model, report


def evaluate_spline(model: BSplineModel | TensorSplineModel, u, v=None):
    """Evaluate a fitted model at parameters in [0, 1]."""
    if isinstance(model, TensorSplineModel):
        if v is None:
            raise InvalidInputError("surface evaluation needs both parameters")
        return model.evaluate_grid(np.atleast_1d(u), np.atleast_1d(v))
    return model.evaluate(u)


def compute_errors(model: BSplineModel | TensorSplineModel, g: Grid1D | Grid2D) -> FitReport:
    """RMS and maximum error of a model against its originating grid."""
    if isinstance(model, TensorSplineModel):
        if not isinstance(g, Grid2D):
            raise InvalidInputError("surface models require a 2-D grid")
        predicted = model.evaluate_grid(g.params(1), g.params(2))
        knot_count = model.knots1.knots.size + model.knots2.knots.size
    else:
        if not isinstance(g, Grid1D):
            raise InvalidInputError("curve models require a 1-D grid")
        predicted = model.evaluate(g.params)
        knot_count = model.knots.knots.size
    residuals = predicted - g.samples
    return _error_report(residuals, knot_count, rank=0)
