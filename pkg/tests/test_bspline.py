"""Basis evaluation, least-squares fitting, and error metrics."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fourierknots import (
    BSplineModel,
    Grid1D,
    Grid2D,
    InvalidInputError,
    KnotVector,
    basis_eval,
    build_collocation,
    compute_errors,
    evaluate_spline,
    fit_least_squares,
    fit_tensor,
    uniform_knots,
)


def random_knots(rng, n, q):
    interior = np.sort(rng.uniform(0.05, 0.95, n - q))
    return KnotVector(np.concatenate((np.zeros(q), interior, np.ones(q))), q)


class TestBasis:
    def test_partition_of_unity_massive(self):
        rng = np.random.default_rng(42)
        kv = random_knots(rng, 14, 4)
        u = rng.uniform(0.0, 1.0, 1_000_000)
        design = build_collocation(kv, np.sort(u))
        sums = np.asarray(design.sum(axis=1)).ravel()
        assert np.max(np.abs(sums - 1.0)) < 1e-12

    def test_partition_of_unity_across_orders(self):
        rng = np.random.default_rng(7)
        for q in (2, 3, 4, 5):
            kv = random_knots(rng, q + 6, q)
            for u in rng.uniform(0, 1, 50):
                total = sum(v for _, v in basis_eval(kv, u))
                assert total == pytest.approx(1.0, abs=1e-12)

    def test_degree_zero_single_box(self):
        kv = uniform_knots(6, 2)
        # degree-1 order-2: at a generic point exactly two nonzero hats;
        # the base case of the recurrence is exercised through them
        pairs = basis_eval(kv, 0.4)
        assert len(pairs) == 2
        assert sum(v for _, v in pairs) == pytest.approx(1.0)

    def test_clamped_endpoints(self):
        kv = uniform_knots(9, 4)
        at0 = dict(basis_eval(kv, 0.0))
        at1 = dict(basis_eval(kv, 1.0))
        assert at0[0] == pytest.approx(1.0)
        assert sum(v for j, v in at0.items() if j != 0) == pytest.approx(0.0)
        assert at1[8] == pytest.approx(1.0)
        assert sum(v for j, v in at1.items() if j != 8) == pytest.approx(0.0)

    def test_values_nonnegative(self):
        rng = np.random.default_rng(3)
        kv = random_knots(rng, 11, 3)
        for u in rng.uniform(0, 1, 200):
            assert all(v >= 0 for _, v in basis_eval(kv, u))

    def test_local_support(self):
        rng = np.random.default_rng(5)
        kv = random_knots(rng, 12, 4)
        p = kv.degree
        u = np.linspace(0, 1, 2001)
        design = build_collocation(kv, u).toarray()
        for j in range(kv.n):
            lo, hi = kv.knots[j], kv.knots[j + p + 1]
            outside = (u < lo - 1e-12) | (u > hi + 1e-12)
            assert np.max(np.abs(design[outside, j])) == 0.0

    def test_rejects_out_of_range(self):
        kv = uniform_knots(6, 3)
        with pytest.raises(InvalidInputError):
            basis_eval(kv, 1.2)


class TestCollocation:
    def test_single_row_at_zero(self):
        kv = uniform_knots(7, 4)
        row = build_collocation(kv, np.array([0.0])).toarray()[0]
        assert row[0] == pytest.approx(1.0)
        assert_allclose(row[1:], 0.0)

    def test_rows_sum_to_one(self):
        kv = uniform_knots(10, 4)
        design = build_collocation(kv, np.linspace(0, 1, 200))
        assert_allclose(np.asarray(design.sum(axis=1)).ravel(), 1.0, atol=1e-12)

    def test_bandwidth(self):
        kv = uniform_knots(12, 4)
        design = build_collocation(kv, np.linspace(0, 1, 100))
        nnz_per_row = np.diff(design.indptr)
        assert np.max(nnz_per_row) <= kv.degree + 1

    def test_rejects_decreasing_params(self):
        kv = uniform_knots(6, 3)
        with pytest.raises(InvalidInputError):
            build_collocation(kv, np.array([0.5, 0.2]))


class TestFit1D:
    def test_recovers_spline_consistent_data(self):
        rng = np.random.default_rng(10)
        kv = random_knots(rng, 12, 4)
        truth = rng.standard_normal(12)
        u = np.linspace(0, 1, 150)
        data = build_collocation(kv, u) @ truth
        model, report = fit_least_squares(Grid1D(data), kv)
        assert_allclose(model.control_points, truth, atol=1e-9)
        assert report.max_error < 1e-9

    def test_constant_data(self):
        kv = uniform_knots(9, 4)
        model, report = fit_least_squares(Grid1D(np.full(80, 2.5)), kv)
        assert_allclose(model.control_points, 2.5, atol=1e-12)
        assert report.rms_error == pytest.approx(0.0, abs=1e-13)
        assert report.max_error == pytest.approx(0.0, abs=1e-13)

    def test_rank_deficient_minimum_norm_vs_pinv_oracle(self):
        # five knots clustered between two adjacent samples leave one basis
        # function with no data in its support: a genuinely singular
        # collocation matrix
        q = 4
        interior = np.array([0.501, 0.5015, 0.502, 0.5025, 0.503])
        kv = KnotVector(
            np.concatenate((np.zeros(q), interior, np.ones(q))), q
        )
        m = 25
        rng = np.random.default_rng(31)
        g = Grid1D(rng.standard_normal(m))
        design = build_collocation(kv, g.params).toarray()
        assert np.linalg.matrix_rank(design) < kv.n
        model, report = fit_least_squares(g, kv)
        oracle = np.linalg.pinv(design) @ g.samples
        assert_allclose(model.control_points, oracle, atol=1e-8)
        assert report.solve_rank < kv.n
        assert np.all(np.isfinite(model.control_points))

    def test_fit_is_projection(self):
        rng = np.random.default_rng(12)
        kv = random_knots(rng, 10, 4)
        g = Grid1D(np.sin(2 * np.pi * np.linspace(0, 1, 90)) + 0.1)
        model, _ = fit_least_squares(g, kv)
        refit, _ = fit_least_squares(Grid1D(model.evaluate(g.params)), kv)
        assert_allclose(refit.control_points, model.control_points, atol=1e-10)

    def test_decoupling_across_full_multiplicity_knot(self):
        q = 4
        kv = KnotVector(
            np.concatenate((np.zeros(q), [0.3, 0.5, 0.5, 0.5, 0.5, 0.7], np.ones(q))),
            q,
        )
        m = 161
        rng = np.random.default_rng(8)
        base = np.sin(2 * np.pi * np.linspace(0, 1, m))
        g1 = Grid1D(base)
        perturbed = base.copy()
        left = np.linspace(0, 1, m) < 0.5
        perturbed[left] += rng.standard_normal(left.sum())
        g2 = Grid1D(perturbed)
        m1, _ = fit_least_squares(g1, kv)
        m2, _ = fit_least_squares(g2, kv)
        # basis functions with support in [0.5, 1] start at the first knot
        # index equal to 0.5
        split = int(np.searchsorted(kv.knots, 0.5))
        assert_allclose(
            m1.control_points[split:], m2.control_points[split:], atol=1e-10
        )


class TestEvaluate:
    def test_constant_control_points(self):
        kv = uniform_knots(8, 4)
        model = BSplineModel(kv, np.full(8, 1.25))
        u = np.linspace(0, 1, 57)
        assert_allclose(model.evaluate(u), 1.25, atol=1e-12)

    def test_endpoint_interpolation(self):
        rng = np.random.default_rng(2)
        kv = random_knots(rng, 9, 3)
        pts = rng.standard_normal(9)
        model = BSplineModel(kv, pts)
        assert model.evaluate(0.0) == pytest.approx(pts[0], abs=1e-12)
        assert model.evaluate(1.0) == pytest.approx(pts[-1], abs=1e-12)

    def test_convex_hull(self):
        rng = np.random.default_rng(4)
        kv = random_knots(rng, 10, 4)
        pts = rng.standard_normal(10)
        model = BSplineModel(kv, pts)
        vals = model.evaluate(np.linspace(0, 1, 500))
        assert np.all(vals >= pts.min() - 1e-12)
        assert np.all(vals <= pts.max() + 1e-12)

    def test_evaluate_spline_dispatch(self):
        kv = uniform_knots(6, 3)
        model = BSplineModel(kv, np.arange(6.0))
        assert evaluate_spline(model, 0.0) == pytest.approx(0.0)


class TestTensorFit:
    def test_separable_spline_data_recovered(self):
        rng = np.random.default_rng(20)
        kv1, kv2 = random_knots(rng, 8, 4), random_knots(rng, 7, 4)
        c1, c2 = rng.standard_normal(8), rng.standard_normal(7)
        u1, u2 = np.linspace(0, 1, 40), np.linspace(0, 1, 30)
        a1 = build_collocation(kv1, u1).toarray()
        a2 = build_collocation(kv2, u2).toarray()
        data = np.outer(a1 @ c1, a2 @ c2)
        model, report = fit_tensor(Grid2D(data), kv1, kv2)
        assert report.max_error < 1e-8
        assert_allclose(model.control_net, np.outer(c1, c2), atol=1e-8)

    def test_constant_field(self):
        kv = uniform_knots(6, 3)
        model, report = fit_tensor(Grid2D(np.full((20, 25), 3.0)), kv, kv)
        assert_allclose(model.control_net, 3.0, atol=1e-11)
        assert report.max_error < 1e-11

    def test_matches_dense_kronecker_oracle(self):
        rng = np.random.default_rng(33)
        kv1, kv2 = random_knots(rng, 7, 4), random_knots(rng, 6, 4)
        g = Grid2D(rng.standard_normal((32, 24)))
        model, report = fit_tensor(g, kv1, kv2)
        a1 = build_collocation(kv1, g.params(1)).toarray()
        a2 = build_collocation(kv2, g.params(2)).toarray()
        full = np.kron(a1, a2)
        coeffs, *_ = np.linalg.lstsq(full, g.samples.ravel(), rcond=None)
        oracle = coeffs.reshape(kv1.n, kv2.n)
        assert_allclose(model.control_net, oracle, atol=1e-8)
        oracle_resid = (full @ coeffs).reshape(g.shape) - g.samples
        assert_allclose(report.residuals, oracle_resid, atol=1e-8)


class TestErrorMetrics:
    def test_perfect_fit(self):
        kv = uniform_knots(8, 4)
        g = Grid1D(np.linspace(0, 1, 60) * 0 + 7.0)
        model, _ = fit_least_squares(g, kv)
        report = compute_errors(model, g)
        assert report.rms_error == pytest.approx(0.0, abs=1e-12)
        assert report.max_error == pytest.approx(0.0, abs=1e-12)

    def test_uniform_offset(self):
        kv = uniform_knots(8, 4)
        g = Grid1D(np.sin(2 * np.pi * np.linspace(0, 1, 60)))
        model, _ = fit_least_squares(g, kv)
        shifted = Grid1D(model.evaluate(g.params) + 0.25)
        report = compute_errors(model, shifted)
        assert report.rms_error == pytest.approx(0.25, abs=1e-10)
        assert report.max_error == pytest.approx(0.25, abs=1e-10)

    def test_rms_and_max_formulas(self):
        kv = uniform_knots(2, 2)  # straight line through two control points
        model = BSplineModel(kv, np.array([0.0, 0.0]))
        g = Grid1D(np.array([-3.0, 4.0]))
        report = compute_errors(model, g)
        assert report.rms_error == pytest.approx(np.sqrt(25 / 2))
        assert report.max_error == pytest.approx(4.0)
        assert report.rms_error <= report.max_error
        assert report.residuals.size == 2
