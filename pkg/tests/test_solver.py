"""Solver backends against brute-force oracles and KKT conditions."""

import numpy as np
import pytest
import scipy.sparse as sp

from _oracles import vertex_lp_min
from bilicut.errors import EmptyModel, NumericalFailure
from bilicut.solver import (
    INFEASIBLE,
    OPTIMAL,
    SENSE_EQ,
    SENSE_GE,
    SENSE_LE,
    UNBOUNDED,
    LinearRow,
    QuadraticModel,
    SolveResult,
    model_objective,
    model_violation,
    solve,
)

BACKENDS = ("reference", "highs", "highs-ipm", "clarabel")


def random_bounded_lp(rng: np.random.Generator, dim: int):
    """Feasible bounded LP with at most 12 rows: coordinate floors, one
    simplex-style cap, and three random rows through the interior point 0."""
    rows = [(-np.eye(dim)[i], 1.0) for i in range(dim)]
    rows.append((np.ones(dim), 4.0))
    for _ in range(3):
        a = rng.normal(size=dim)
        rows.append((a, float(rng.uniform(0.2, 1.0))))
    a_mat = np.array([r[0] for r in rows])
    b = np.array([r[1] for r in rows])
    c = rng.normal(size=dim)
    return c, a_mat, b


def as_model(c, a_mat, b) -> QuadraticModel:
    rows = [
        LinearRow([(j, float(a_mat[i, j])) for j in range(c.size) if a_mat[i, j] != 0.0],
                  SENSE_LE, float(b[i]))
        for i in range(b.size)
    ]
    return QuadraticModel(c.size, np.asarray(c, dtype=float), rows=rows)


class TestLpAgainstVertexOracle:
    @pytest.mark.parametrize("backend", BACKENDS)
    def test_random_lps_match_oracle(self, backend):
        rng = np.random.default_rng(100)
        for t in range(12):
            dim = int(rng.integers(2, 9))
            c, a_mat, b = random_bounded_lp(rng, dim)
            want = vertex_lp_min(c, a_mat, b)
            res = solve(as_model(c, a_mat, b), backend=backend)
            assert res.status == OPTIMAL, f"draw {t}"
            assert res.objective == pytest.approx(want, abs=1e-6), f"draw {t}"

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_bounds_as_native_bounds_match_oracle(self, backend):
        # The same polytopes expressed through var_lo/var_hi where possible.
        rng = np.random.default_rng(101)
        for _ in range(6):
            dim = int(rng.integers(2, 7))
            c, a_mat, b = random_bounded_lp(rng, dim)
            want = vertex_lp_min(c, a_mat, b)
            rows = [
                LinearRow([(j, float(a_mat[i, j])) for j in range(dim) if a_mat[i, j] != 0.0],
                          SENSE_LE, float(b[i]))
                for i in range(dim, b.size)  # skip the coordinate floors
            ]
            model = QuadraticModel(dim, c, rows=rows, var_lo=np.full(dim, -1.0))
            res = solve(model, backend=backend)
            assert res.status == OPTIMAL
            assert res.objective == pytest.approx(want, abs=1e-6)


class TestStatuses:
    @pytest.mark.parametrize("backend", BACKENDS)
    def test_infeasible(self, backend):
        model = QuadraticModel(
            1,
            np.array([1.0]),
            rows=[LinearRow([(0, 1.0)], SENSE_GE, 3.0), LinearRow([(0, 1.0)], SENSE_LE, 2.0)],
        )
        assert solve(model, backend=backend).status == INFEASIBLE

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_unbounded(self, backend):
        model = QuadraticModel(1, np.array([-1.0]), var_lo=np.array([0.0]))
        assert solve(model, backend=backend).status == UNBOUNDED

    def test_empty_model(self):
        with pytest.raises(EmptyModel):
            solve(QuadraticModel(0, np.zeros(0)))

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            solve(QuadraticModel(1, np.zeros(1), var_lo=np.zeros(1), var_hi=np.ones(1)),
                  backend="simplex3000")

    def test_highs_rejects_quadratic(self):
        model = QuadraticModel(1, np.zeros(1), obj_quad=sp.eye(1, format="csr"),
                               var_lo=np.zeros(1), var_hi=np.ones(1))
        with pytest.raises(ValueError):
            solve(model, backend="highs")


class TestQuadratic:
    @pytest.mark.parametrize("backend", ("reference", "clarabel"))
    def test_unconstrained_interior_minimum(self, backend):
        # min (z0-1)^2 + (z1+2)^2 over a generous box.
        q = sp.csr_matrix(np.eye(2))
        model = QuadraticModel(
            2, np.array([-2.0, 4.0]), obj_quad=q,
            var_lo=np.full(2, -10.0), var_hi=np.full(2, 10.0),
        )
        res = solve(model, backend=backend)
        assert res.status == OPTIMAL
        np.testing.assert_allclose(res.point, [1.0, -2.0], atol=1e-6)
        assert res.objective == pytest.approx(-5.0, abs=1e-7)

    @pytest.mark.parametrize("backend", ("reference", "clarabel"))
    def test_box_clipped_minimum(self, backend):
        # Same bowl, box keeps the first coordinate below the minimizer.
        q = sp.csr_matrix(np.eye(2))
        model = QuadraticModel(
            2, np.array([-2.0, 4.0]), obj_quad=q,
            var_lo=np.array([-10.0, -10.0]), var_hi=np.array([0.5, 10.0]),
        )
        res = solve(model, backend=backend)
        np.testing.assert_allclose(res.point, [0.5, -2.0], atol=1e-6)

    @pytest.mark.parametrize("backend", ("reference", "clarabel"))
    def test_kkt_on_random_qps(self, backend):
        rng = np.random.default_rng(200)
        for t in range(8):
            dim = int(rng.integers(2, 6))
            f = rng.normal(size=(dim, dim))
            q_mat = f @ f.T + 0.1 * np.eye(dim)
            c = rng.normal(size=dim)
            rows = []
            for _ in range(3):
                a = rng.normal(size=dim)
                rows.append(LinearRow([(j, float(a[j])) for j in range(dim)],
                                      SENSE_LE, float(rng.uniform(0.5, 2.0))))
            lo = np.full(dim, -2.0)
            hi = np.full(dim, 2.0)
            model = QuadraticModel(dim, c, obj_quad=sp.csr_matrix(q_mat), rows=rows,
                                   var_lo=lo, var_hi=hi)
            res = solve(model, backend=backend)
            assert res.status == OPTIMAL, f"draw {t}"
            z = res.point
            assert model_violation(model, z) <= 1e-6
            # Stationarity: residual of grad + row duals must be explainable
            # by active bounds (positive residual pushes to the lower bound).
            grad = c + 2.0 * q_mat @ z
            for row, dual in zip(rows, res.duals):
                assert dual >= -1e-7  # <= rows carry nonnegative multipliers
                for j, val in row.coefficients:
                    grad[j] += dual * val
                lhs = sum(val * z[j] for j, val in row.coefficients)
                assert abs(dual * (lhs - row.rhs)) <= 1e-5  # complementarity
            for j in range(dim):
                if grad[j] > 1e-5:
                    assert z[j] <= lo[j] + 1e-5
                elif grad[j] < -1e-5:
                    assert z[j] >= hi[j] - 1e-5


class TestDuals:
    @pytest.mark.parametrize("backend", BACKENDS)
    def test_sign_convention_and_sensitivity(self, backend):
        # min -z s.t. z <= 2: dual d >= 0 and d(obj)/d(rhs) = -d.
        def lp(rhs):
            model = QuadraticModel(1, np.array([-1.0]),
                                   rows=[LinearRow([(0, 1.0)], SENSE_LE, rhs)],
                                   var_lo=np.array([0.0]))
            return solve(model, backend=backend)

        res = lp(2.0)
        assert res.duals[0] == pytest.approx(1.0, abs=1e-6)
        eps = 1e-3
        delta = lp(2.0 + eps).objective - res.objective
        assert delta == pytest.approx(-res.duals[0] * eps, abs=1e-6)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_ge_row_nonpositive_dual(self, backend):
        # min z s.t. z >= 1: multiplier convention gives d <= 0.
        model = QuadraticModel(1, np.array([1.0]),
                               rows=[LinearRow([(0, 1.0)], SENSE_GE, 1.0)],
                               var_hi=np.array([5.0]))
        res = solve(model, backend=backend)
        assert res.objective == pytest.approx(1.0, abs=1e-7)
        assert res.duals[0] == pytest.approx(-1.0, abs=1e-6)


class TestEqualityRows:
    @pytest.mark.parametrize("backend", BACKENDS)
    def test_equality_constrained_lp(self, backend):
        # min z0 + z1 s.t. z0 + 2 z1 = 2, z in [0, 3]^2 -> (0, 1).
        model = QuadraticModel(
            2, np.array([1.0, 1.0]),
            rows=[LinearRow([(0, 1.0), (1, 2.0)], SENSE_EQ, 2.0)],
            var_lo=np.zeros(2), var_hi=np.full(2, 3.0),
        )
        res = solve(model, backend=backend)
        assert res.status == OPTIMAL
        assert res.objective == pytest.approx(1.0, abs=1e-6)
        np.testing.assert_allclose(res.point, [0.0, 1.0], atol=1e-5)

    @pytest.mark.parametrize("backend", ("reference", "clarabel"))
    def test_equality_constrained_qp(self, backend):
        # min ||z||^2 s.t. z0 + z1 = 2 -> (1, 1).
        model = QuadraticModel(
            2, np.zeros(2), obj_quad=sp.csr_matrix(np.eye(2)),
            rows=[LinearRow([(0, 1.0), (1, 1.0)], SENSE_EQ, 2.0)],
        )
        res = solve(model, backend=backend)
        np.testing.assert_allclose(res.point, [1.0, 1.0], atol=1e-6)
        assert res.objective == pytest.approx(2.0, abs=1e-6)

    def test_reference_fixed_variable(self):
        # lo == hi has no barrier interior; handled as an equality row.
        model = QuadraticModel(
            2, np.array([1.0, 1.0]),
            var_lo=np.array([0.5, 0.0]), var_hi=np.array([0.5, 1.0]),
        )
        res = solve(model, backend="reference")
        assert res.status == OPTIMAL
        np.testing.assert_allclose(res.point, [0.5, 0.0], atol=1e-6)


class TestHelpers:
    def test_model_violation(self):
        model = QuadraticModel(2, np.zeros(2),
                               rows=[LinearRow([(0, 1.0), (1, 1.0)], SENSE_LE, 1.0)],
                               var_lo=np.zeros(2), var_hi=np.ones(2))
        assert model_violation(model, np.array([0.5, 0.4])) == 0.0
        assert model_violation(model, np.array([0.8, 0.8])) == pytest.approx(0.6)
        assert model_violation(model, np.array([-0.3, 0.0])) == pytest.approx(0.3)

    def test_model_objective(self):
        model = QuadraticModel(2, np.array([1.0, 0.0]), obj_quad=sp.csr_matrix(np.eye(2)))
        assert model_objective(model, np.array([2.0, 1.0])) == pytest.approx(7.0)

    def test_result_dataclass_fields(self):
        res = SolveResult(OPTIMAL, 0.0, np.zeros(1), None, 3, "reference")
        assert res.iterations == 3 and res.backend == "reference"
