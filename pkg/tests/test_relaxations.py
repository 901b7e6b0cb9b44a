"""Lifted-variable layouts and the two McCormick relaxations."""

import numpy as np
import pytest

from _oracles import bilinear_box_min, box_corners, sample_box
from bilicut.errors import NotConvex
from bilicut.instances import BilinearInstance, GenParams, generate, true_objective, validate
from bilicut.relaxations import (
    BILINEAR,
    SYMMETRIC,
    VariableMap,
    box_rows,
    build_bmc,
    build_smc,
    mccormick_rows,
)
from bilicut.solver import (
    SENSE_GE,
    SENSE_LE,
    model_objective,
    model_violation,
    solve,
)


def tiny_instance(a=1.0, q=0.0, r=0.0, ax=-1.0, bx=1.0, ay=-1.0, by=1.0):
    inst = BilinearInstance(
        n=1,
        m=1,
        A=np.array([[a]]),
        Q=np.array([[q]]),
        R=np.array([[r]]),
        ax=np.array([ax]),
        bx=np.array([bx]),
        ay=np.array([ay]),
        by=np.array([by]),
    )
    validate(inst)
    return inst


class TestVariableMap:
    def test_bilinear_layout_is_a_bijection(self):
        vm = VariableMap(BILINEAR, 3, 4)
        idx = [vm.x(i) for i in range(3)]
        idx += [vm.y(j) for j in range(4)]
        idx += [vm.w(i, j) for i in range(3) for j in range(4)]
        assert sorted(idx) == list(range(vm.num_vars))
        assert vm.num_vars == 3 + 4 + 12

    def test_symmetric_layout_is_a_bijection(self):
        vm = VariableMap(SYMMETRIC, 2, 3)
        p = 5
        idx = [vm.h(i) for i in range(p)]
        idx += [vm.hh(i, j) for i in range(p) for j in range(i, p)]
        assert sorted(idx) == list(range(vm.num_vars))
        assert vm.num_vars == p + p * (p + 1) // 2

    def test_hh_is_symmetric_in_its_arguments(self):
        vm = VariableMap(SYMMETRIC, 2, 2)
        for i in range(4):
            for j in range(4):
                assert vm.hh(i, j) == vm.hh(j, i)

    def test_lift_then_extract_round_trip_bilinear(self):
        vm = VariableMap(BILINEAR, 2, 3)
        x = np.array([0.3, -0.7])
        y = np.array([0.1, 0.9, -0.4])
        pt = vm.extract(vm.lift(x, y))
        np.testing.assert_allclose(pt.x, x)
        np.testing.assert_allclose(pt.y, y)
        np.testing.assert_allclose(pt.w, np.outer(x, y))

    def test_lift_then_extract_round_trip_symmetric(self):
        vm = VariableMap(SYMMETRIC, 2, 2)
        x = np.array([0.5, -0.25])
        y = np.array([-0.8, 0.6])
        pt = vm.extract(vm.lift(x, y))
        h = np.concatenate([x, y])
        np.testing.assert_allclose(pt.h, h)
        np.testing.assert_allclose(pt.hmat, np.outer(h, h))
        np.testing.assert_allclose(pt.w, np.outer(x, y))

    def test_lift_matches_componentwise_products(self):
        vm = VariableMap(SYMMETRIC, 1, 2)
        point = vm.lift(np.array([2.0]), np.array([3.0, -1.0]))
        h = np.array([2.0, 3.0, -1.0])
        for i in range(3):
            for j in range(i, 3):
                assert point[vm.hh(i, j)] == h[i] * h[j]


class TestMcCormickRows:
    def test_row_count_and_senses(self):
        rows = mccormick_rows(2, 0, 1, -1.0, 2.0, -3.0, 4.0)
        assert len(rows) == 4
        assert [r.sense for r in rows] == [SENSE_LE, SENSE_LE, SENSE_GE, SENSE_GE]

    def test_exact_products_satisfy_all_rows(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            a1, a2 = rng.uniform(-2, 1, 2)
            b1, b2 = a1 + rng.uniform(0.1, 3), a2 + rng.uniform(0.1, 3)
            rows = mccormick_rows(2, 0, 1, a1, b1, a2, b2)
            p1 = rng.uniform(a1, b1)
            p2 = rng.uniform(a2, b2)
            z = np.array([p1, p2, p1 * p2])
            for row in rows:
                lhs = sum(v * z[i] for i, v in row.coefficients)
                if row.sense == SENSE_LE:
                    assert lhs <= row.rhs + 1e-12
                else:
                    assert lhs >= row.rhs - 1e-12

    def test_rows_are_tight_at_box_corners(self):
        # At each corner of the factor box the envelope pinches to a point:
        # the product is forced to its exact value by the four rows.
        a1, b1, a2, b2 = -1.5, 0.5, -0.25, 2.0
        rows = mccormick_rows(2, 0, 1, a1, b1, a2, b2)
        for p1 in (a1, b1):
            for p2 in (a2, b2):
                lo, hi = -np.inf, np.inf
                for row in rows:
                    coeff = dict(row.coefficients)
                    resid = row.rhs - coeff.get(0, 0.0) * p1 - coeff.get(1, 0.0) * p2
                    if row.sense == SENSE_LE:
                        hi = min(hi, resid)
                    else:
                        lo = max(lo, resid)
                assert lo == pytest.approx(p1 * p2, abs=1e-12)
                assert hi == pytest.approx(p1 * p2, abs=1e-12)

    def test_square_term_merges_coefficients(self):
        rows = mccormick_rows(1, 0, 0, -1.0, 2.0, -1.0, 2.0)
        for row in rows:
            assert sorted(i for i, _ in row.coefficients) == [0, 1]
        # s >= 2*b*p - b^2 is the lower tangent at the upper endpoint.
        lower = [r for r in rows if r.sense == SENSE_GE]
        coeffs = {tuple(sorted(dict(r.coefficients).items())): r.rhs for r in lower}
        assert ((0, -(-1.0 + -1.0)), (1, 1.0)) in coeffs

    def test_envelope_lower_bound_matches_corner_minimum(self):
        # min of s subject to the two >= rows equals the corner minimum of
        # p1*p2 once the factors are free over the box.
        rng = np.random.default_rng(11)
        for _ in range(100):
            a1, a2 = rng.uniform(-2, 1, 2)
            b1, b2 = a1 + rng.uniform(0.1, 2), a2 + rng.uniform(0.1, 2)
            rows = mccormick_rows(2, 0, 1, a1, b1, a2, b2)
            best = np.inf
            for p1 in (a1, b1):
                for p2 in (a2, b2):
                    lo = -np.inf
                    for row in rows:
                        if row.sense != SENSE_GE:
                            continue
                        coeff = dict(row.coefficients)
                        lo = max(lo, row.rhs - coeff.get(0, 0.0) * p1 - coeff.get(1, 0.0) * p2)
                    best = min(best, lo)
            assert best == pytest.approx(bilinear_box_min(1.0, a1, b1, a2, b2), abs=1e-12)


class TestBuildBmc:
    def test_row_count(self):
        inst = generate(GenParams(n=3, m=4, seed=2))
        model, vm = build_bmc(inst)
        assert len(model.rows) == 4 * 3 * 4
        assert model.num_vars == vm.num_vars

    def test_rejects_nonconvex(self):
        inst = tiny_instance(q=-1.0)
        with pytest.raises(NotConvex):
            build_bmc(inst)

    def test_lifted_points_are_feasible_and_reproduce_objective(self):
        inst = generate(GenParams(n=3, m=3, density=1.0, seed=9))
        model, vm = build_bmc(inst)
        rng = np.random.default_rng(0)
        xs = sample_box(rng, inst.ax, inst.bx, 50)
        ys = sample_box(rng, inst.ay, inst.by, 50)
        for x, y in zip(xs, ys):
            z = vm.lift(x, y)
            assert model_violation(model, z) <= 1e-10
            assert model_objective(model, z) == pytest.approx(
                true_objective(inst, x, y), abs=1e-10
            )

    def test_known_value_single_product(self):
        # min x*y over [-1,1]^2 relaxes exactly to -1 (corner value).
        inst = tiny_instance()
        model, _ = build_bmc(inst)
        res = solve(model)
        assert res.objective == pytest.approx(-1.0, abs=1e-7)

    def test_exact_on_one_by_one(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = float(rng.uniform(-2, 2))
            ax, ay = rng.uniform(-2, 0, 2)
            bx, by = rng.uniform(0.1, 2, 2)
            inst = tiny_instance(a=a, ax=ax, bx=bx, ay=ay, by=by)
            model, _ = build_bmc(inst)
            res = solve(model)
            assert res.objective == pytest.approx(
                bilinear_box_min(a, ax, bx, ay, by), abs=1e-6
            )

    def test_lower_bounds_sampled_objective(self):
        inst = generate(GenParams(n=4, m=3, rank_frac_q=0.5, rank_frac_r=0.5, seed=21))
        model, _ = build_bmc(inst)
        lb = solve(model).objective
        rng = np.random.default_rng(4)
        xs = sample_box(rng, inst.ax, inst.bx, 500)
        ys = sample_box(rng, inst.ay, inst.by, 500)
        sampled = min(true_objective(inst, x, y) for x, y in zip(xs, ys))
        assert lb <= sampled + 1e-8


class TestBuildSmc:
    def test_row_count(self):
        inst = generate(GenParams(n=3, m=2, seed=6))
        model, vm = build_smc(inst)
        p = 5
        assert len(model.rows) == 4 * p * (p + 1) // 2
        assert model.obj_quad is None

    def test_lifted_points_are_feasible_and_reproduce_objective(self):
        inst = generate(GenParams(n=2, m=3, density=1.0, seed=13))
        model, vm = build_smc(inst)
        rng = np.random.default_rng(1)
        xs = sample_box(rng, inst.ax, inst.bx, 50)
        ys = sample_box(rng, inst.ay, inst.by, 50)
        for x, y in zip(xs, ys):
            z = vm.lift(x, y)
            assert model_violation(model, z) <= 1e-10
            assert model_objective(model, z) == pytest.approx(
                true_objective(inst, x, y), abs=1e-10
            )

    def test_known_value_single_product(self):
        inst = tiny_instance()
        model, _ = build_smc(inst)
        res = solve(model)
        assert res.objective == pytest.approx(-1.0, abs=1e-7)

    def test_known_value_pure_squares(self):
        # A = 0, Q = I_n, R = I_m over [-1,1]: each square term relaxes to
        # its secant minimum -1, so the bound is -(n + m).
        n, m = 2, 3
        inst = BilinearInstance(
            n=n,
            m=m,
            A=np.zeros((n, m)),
            Q=np.eye(n),
            R=np.eye(m),
            ax=-np.ones(n),
            bx=np.ones(n),
            ay=-np.ones(m),
            by=np.ones(m),
        )
        validate(inst)
        model, _ = build_smc(inst)
        res = solve(model)
        assert res.objective == pytest.approx(-(n + m), abs=1e-6)

    def test_never_above_bilinear_relaxation(self):
        # Dropping convex terms into the lifting can only weaken the bound.
        for seed in range(6):
            inst = generate(GenParams(n=3, m=3, rank_frac_q=0.5, rank_frac_r=0.5, seed=seed))
            lb_s = solve(build_smc(inst)[0]).objective
            lb_b = solve(build_bmc(inst)[0]).objective
            assert lb_s <= lb_b + 1e-6

    def test_agrees_with_bilinear_when_no_quadratics(self):
        # With Q = R = 0 both relaxations share the same McCormick rows on
        # the cross products; the extra square-term rows cannot matter.
        for seed in range(4):
            inst = generate(GenParams(n=2, m=3, seed=seed))
            zero = BilinearInstance(
                n=inst.n,
                m=inst.m,
                A=inst.A,
                Q=np.zeros((inst.n, inst.n)),
                R=np.zeros((inst.m, inst.m)),
                ax=inst.ax,
                bx=inst.bx,
                ay=inst.ay,
                by=inst.by,
            )
            validate(zero)
            lb_s = solve(build_smc(zero)[0]).objective
            lb_b = solve(build_bmc(zero)[0]).objective
            assert lb_s == pytest.approx(lb_b, abs=1e-6)


class TestBoxRows:
    def test_rows_encode_exactly_the_box(self):
        inst = generate(GenParams(n=2, m=2, seed=8))
        for build in (build_bmc, build_smc):
            model, vm = build(inst)
            rows = box_rows(vm, inst)
            assert len(rows) == 2 * (inst.n + inst.m)
            lo = np.concatenate([inst.ax, inst.ay])
            hi = np.concatenate([inst.bx, inst.by])
            for corner in box_corners(lo, hi):
                z = vm.lift(corner[: inst.n], corner[inst.n :])
                for row in rows:
                    lhs = sum(v * z[i] for i, v in row.coefficients)
                    if row.sense == SENSE_LE:
                        assert lhs <= row.rhs + 1e-12
                    else:
                        assert lhs >= row.rhs - 1e-12
            outside = lo - 0.5
            z = vm.lift(outside[: inst.n], outside[inst.n :])
            bad = max(
                (row.rhs - sum(v * z[i] for i, v in row.coefficients))
                for row in rows
                if row.sense == SENSE_GE
            )
            assert bad >= 0.5 - 1e-12
