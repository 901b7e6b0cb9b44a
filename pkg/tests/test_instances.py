"""Instance generation, validation, and JSON interchange."""

import json
import math

import numpy as np
import pytest

from bilicut.errors import (
    AsymmetricQ,
    BadDensity,
    BadRank,
    BoxInverted,
    DimensionMismatch,
    NonFinite,
    ParseError,
)
from bilicut.instances import (
    BilinearInstance,
    GenParams,
    from_json,
    generate,
    to_json,
    true_objective,
    validate,
)
from bilicut.rng import Xoshiro256StarStar


def small_instance(**overrides) -> BilinearInstance:
    base = dict(
        n=2,
        m=2,
        A=np.array([[1.0, 0.0], [0.0, -1.0]]),
        Q=np.eye(2),
        R=np.zeros((2, 2)),
        ax=-np.ones(2),
        bx=np.ones(2),
        ay=-np.ones(2),
        by=np.ones(2),
    )
    base.update(overrides)
    return BilinearInstance(**base)


class TestGenerate:
    def test_deterministic(self):
        p = GenParams(n=5, m=3, density=0.7, rank_frac_q=0.5, rank_frac_r=0.5, seed=11)
        a = generate(p)
        b = generate(p)
        for field in ("A", "Q", "R", "ax", "bx", "ay", "by"):
            np.testing.assert_array_equal(getattr(a, field), getattr(b, field))

    def test_seed_changes_data(self):
        a = generate(GenParams(n=4, m=4, seed=1))
        b = generate(GenParams(n=4, m=4, seed=2))
        assert not np.array_equal(a.A, b.A)

    def test_exact_nonzero_count(self):
        for density in (0.3, 0.5, 0.77, 1.0):
            inst = generate(GenParams(n=6, m=5, density=density, seed=3))
            assert np.count_nonzero(inst.A) == math.ceil(density * 30)

    def test_entry_ranges(self):
        inst = generate(GenParams(n=10, m=10, seed=4))
        nz = inst.A[inst.A != 0.0]
        assert np.all(nz >= -1.0) and np.all(nz < 1.0)
        np.testing.assert_array_equal(inst.ax, -np.ones(10))
        np.testing.assert_array_equal(inst.bx, np.ones(10))
        np.testing.assert_array_equal(inst.ay, -np.ones(10))
        np.testing.assert_array_equal(inst.by, np.ones(10))

    def test_psd_blocks_and_convex_flag(self):
        inst = generate(GenParams(n=7, m=4, rank_frac_q=0.5, rank_frac_r=0.75, seed=5))
        assert np.linalg.eigvalsh(inst.Q)[0] >= -1e-10
        assert np.linalg.eigvalsh(inst.R)[0] >= -1e-10
        assert inst.convex is True

    def test_rank_fractions_control_rank(self):
        inst = generate(GenParams(n=8, m=8, rank_frac_q=0.25, rank_frac_r=0.5, seed=6))
        rank_q = int(np.sum(np.linalg.eigvalsh(inst.Q) > 1e-10))
        rank_r = int(np.sum(np.linalg.eigvalsh(inst.R) > 1e-10))
        assert rank_q == math.ceil(0.25 * 8)
        assert rank_r == math.ceil(0.5 * 8)

    def test_draw_order_reproduced_from_stream(self):
        # Independent replay of the documented draw order: A nonzero
        # positions (partial Fisher-Yates over row-major indices), A values
        # in ascending position order, then the Q and R factors row-major.
        params = GenParams(n=4, m=3, density=0.5, rank_frac_q=0.5, rank_frac_r=1.0, seed=77)
        inst = generate(params)
        stream = Xoshiro256StarStar(77)
        total = 12
        k = math.ceil(0.5 * total)
        idx = list(range(total))
        for t in range(k):
            j = t + stream.randbelow(total - t)
            idx[t], idx[j] = idx[j], idx[t]
        expected_a = np.zeros((4, 3))
        for pos in sorted(idx[:k]):
            expected_a[pos // 3, pos % 3] = stream.uniform_pm1()
        np.testing.assert_array_equal(inst.A, expected_a)
        fq = np.array([[stream.uniform_pm1() for _ in range(2)] for _ in range(4)])
        np.testing.assert_allclose(inst.Q, fq @ fq.T, atol=0)
        fr = np.array([[stream.uniform_pm1() for _ in range(3)] for _ in range(3)])
        np.testing.assert_allclose(inst.R, fr @ fr.T, atol=0)

    def test_bad_parameters(self):
        with pytest.raises(BadDensity):
            generate(GenParams(n=2, m=2, density=0.0))
        with pytest.raises(BadDensity):
            generate(GenParams(n=2, m=2, density=1.5))
        with pytest.raises(BadRank):
            generate(GenParams(n=2, m=2, rank_frac_q=0.0))
        with pytest.raises(DimensionMismatch):
            generate(GenParams(n=0, m=2))


class TestValidate:
    def test_sets_convex_flag(self):
        inst = validate(small_instance())
        assert inst.convex is True
        indefinite = small_instance(Q=np.array([[1.0, 0.0], [0.0, -1.0]]))
        assert validate(indefinite).convex is False

    def test_box_inverted(self):
        with pytest.raises(BoxInverted):
            validate(small_instance(ax=np.array([2.0, 0.0])))

    def test_asymmetric_q_and_r(self):
        with pytest.raises(AsymmetricQ):
            validate(small_instance(Q=np.array([[1.0, 0.5], [0.0, 1.0]])))
        with pytest.raises(AsymmetricQ):
            validate(small_instance(R=np.array([[0.0, 1.0], [0.0, 0.0]])))

    def test_nonfinite(self):
        with pytest.raises(NonFinite):
            validate(small_instance(A=np.array([[np.inf, 0.0], [0.0, 0.0]])))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            validate(small_instance(A=np.zeros((3, 2))))


class TestJson:
    def test_round_trip_exact(self):
        inst = generate(GenParams(n=5, m=4, density=0.6, seed=9))
        back = from_json(to_json(inst))
        for field in ("A", "Q", "R", "ax", "bx", "ay", "by"):
            np.testing.assert_array_equal(getattr(inst, field), getattr(back, field))
        assert back.n == 5 and back.m == 4

    def test_schema_keys(self):
        payload = json.loads(to_json(generate(GenParams(n=2, m=2, seed=0))))
        assert set(payload) == {"n", "m", "A", "Q", "R", "ax", "bx", "ay", "by"}

    def test_missing_field(self):
        payload = json.loads(to_json(generate(GenParams(n=2, m=2, seed=0))))
        del payload["Q"]
        with pytest.raises(ParseError, match="Q"):
            from_json(json.dumps(payload))

    def test_syntax_error_reports_line(self):
        with pytest.raises(ParseError, match="line"):
            from_json('{"n": 1,\n "m": }')

    def test_wrong_type(self):
        payload = json.loads(to_json(generate(GenParams(n=2, m=2, seed=0))))
        payload["n"] = "two"
        with pytest.raises(ParseError, match="n"):
            from_json(json.dumps(payload))

    def test_bad_shape_is_parse_error(self):
        payload = json.loads(to_json(generate(GenParams(n=2, m=2, seed=0))))
        payload["A"] = [[1.0]]
        with pytest.raises(ParseError):
            from_json(json.dumps(payload))

    def test_non_numeric_matrix(self):
        payload = json.loads(to_json(generate(GenParams(n=2, m=2, seed=0))))
        payload["A"] = [["x", 1.0], [0.0, 0.0]]
        with pytest.raises(ParseError, match="A"):
            from_json(json.dumps(payload))

    def test_custom_boxes_survive(self):
        inst = small_instance(ax=np.array([-2.0, 0.0]), bx=np.array([1.0, 3.0]))
        validate(inst)
        back = from_json(to_json(inst))
        np.testing.assert_array_equal(back.ax, [-2.0, 0.0])
        np.testing.assert_array_equal(back.bx, [1.0, 3.0])


class TestTrueObjective:
    def test_value(self):
        inst = validate(small_instance())
        x = np.array([0.5, -0.5])
        y = np.array([1.0, 0.0])
        expected = x @ inst.A @ y + x @ inst.Q @ x + y @ inst.R @ y
        assert true_objective(inst, x, y) == pytest.approx(expected)
