"""The two McCormick-based relaxations of the bilinear-quadratic program.

Both replace products by lifted variables bounded with McCormick envelopes
over the box:

- bilinear lifting ("bmc"): W ~ x y' (n*m products), keeping the convex
  quadratic terms x'Qx + y'Ry in the objective. A convex QP; requires Q and
  R positive semidefinite.
- symmetric lifting ("smc"): h = (x; y), H ~ h h' (upper triangle, products
  of all variable pairs including squares), objective <Gamma, H> with
  Gamma = [[Q, A/2], [A'/2, R]]. Always an LP.

For a single product s = p1 p2 with p1 in [a1, b1], p2 in [a2, b2] the four
envelope rows are

    s <= b2 p1 + a1 p2 - a1 b2        s <= a2 p1 + b1 p2 - a2 b1
    s >= a2 p1 + a1 p2 - a1 a2        s >= b2 p1 + b1 p2 - b1 b2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import NotConvex
from .instances import CONVEXITY_TOL, BilinearInstance, validate
from .solver import SENSE_GE, SENSE_LE, LinearRow, QuadraticModel

BILINEAR = "bilinear"
SYMMETRIC = "symmetric"


@dataclass
class VariableMap:
    """Index layout of a lifted model's flat variable vector."""

    kind: str
    n: int
    m: int

    @property
    def num_vars(self) -> int:
        if self.kind == BILINEAR:
            return self.n + self.m + self.n * self.m
        p = self.n + self.m
        return p + p * (p + 1) // 2

    def x(self, i: int) -> int:
        return i

    def y(self, j: int) -> int:
        return self.n + j

    def w(self, i: int, j: int) -> int:
        """Index of the bilinear lift W[i, j]."""
        return self.n + self.m + i * self.m + j

    def h(self, i: int) -> int:
        return i

    def hh(self, i: int, j: int) -> int:
        """Index of the symmetric lift H[i, j], i <= j, upper triangle packed
        row by row after the h block."""
        p = self.n + self.m
        if i > j:
            i, j = j, i
        return p + i * p - i * (i - 1) // 2 + (j - i)

    def extract(self, point: np.ndarray) -> "LiftedPoint":
        point = np.asarray(point, dtype=float)
        n, m = self.n, self.m
        if self.kind == BILINEAR:
            return LiftedPoint(
                x=point[:n].copy(),
                y=point[n : n + m].copy(),
                w=point[n + m :].reshape(n, m).copy(),
            )
        p = n + m
        h = point[:p].copy()
        hmat = np.zeros((p, p))
        for i in range(p):
            for j in range(i, p):
                hmat[i, j] = hmat[j, i] = point[self.hh(i, j)]
        return LiftedPoint(x=h[:n], y=h[n:], w=hmat[:n, n:].copy(), h=h, hmat=hmat)

    def lift(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Exact lifting of a box point: W = x y' (and H = h h')."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == BILINEAR:
            return np.concatenate([x, y, np.outer(x, y).ravel()])
        h = np.concatenate([x, y])
        point = np.zeros(self.num_vars)
        point[: h.size] = h
        for i in range(h.size):
            for j in range(i, h.size):
                point[self.hh(i, j)] = h[i] * h[j]
        return point


@dataclass
class LiftedPoint:
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    h: np.ndarray | None = None
    hmat: np.ndarray | None = None


def mccormick_rows(
    prod: int, f1: int, f2: int, a1: float, b1: float, a2: float, b2: float
) -> list[LinearRow]:
    """The four envelope rows for variable `prod` ~ z[f1] * z[f2]. When
    f1 == f2 the two factor coefficients merge onto one index."""

    def row(c1: float, c2: float, sense: str, rhs: float) -> LinearRow:
        if f1 == f2:
            coeffs = [(prod, 1.0), (f1, -(c1 + c2))]
        else:
            coeffs = [(prod, 1.0), (f1, -c1), (f2, -c2)]
        return LinearRow(coeffs, sense, rhs)

    return [
        row(b2, a1, SENSE_LE, -a1 * b2),
        row(a2, b1, SENSE_LE, -a2 * b1),
        row(a2, a1, SENSE_GE, -a1 * a2),
        row(b2, b1, SENSE_GE, -b1 * b2),
    ]


def _ensure_validated(inst: BilinearInstance) -> BilinearInstance:
    if inst.convex is None:
        validate(inst)
    return inst


def build_bmc(inst: BilinearInstance) -> tuple[QuadraticModel, VariableMap]:
    """Convex QP over (x, y, W) with 4nm McCormick rows tying W to x, y.

    Raises NotConvex when Q or R has an eigenvalue below -1e-8.
    """
    inst = _ensure_validated(inst)
    if not inst.convex:
        raise NotConvex(f"Q or R has an eigenvalue below -{CONVEXITY_TOL}")
    n, m = inst.n, inst.m
    vm = VariableMap(BILINEAR, n, m)
    obj = np.zeros(vm.num_vars)
    for i in range(n):
        for j in range(m):
            obj[vm.w(i, j)] = inst.A[i, j]
    quad = sp.block_diag(
        (sp.csr_matrix(inst.Q), sp.csr_matrix(inst.R), sp.csr_matrix((n * m, n * m))),
        format="csr",
    )
    rows: list[LinearRow] = []
    for i in range(n):
        for j in range(m):
            rows.extend(
                mccormick_rows(
                    vm.w(i, j), vm.x(i), vm.y(j),
                    inst.ax[i], inst.bx[i], inst.ay[j], inst.by[j],
                )
            )
    lo = np.full(vm.num_vars, -np.inf)
    hi = np.full(vm.num_vars, np.inf)
    lo[:n], hi[:n] = inst.ax, inst.bx
    lo[n : n + m], hi[n : n + m] = inst.ay, inst.by
    model = QuadraticModel(vm.num_vars, obj, obj_quad=quad, rows=rows, var_lo=lo, var_hi=hi)
    return model, vm


def build_smc(inst: BilinearInstance) -> tuple[QuadraticModel, VariableMap]:
    """LP over (h, H): objective <Gamma, H>, McCormick rows for every
    unordered pair (i, j), i <= j, over the stacked box."""
    inst = _ensure_validated(inst)
    n, m = inst.n, inst.m
    p = n + m
    vm = VariableMap(SYMMETRIC, n, m)
    gamma = np.zeros((p, p))
    gamma[:n, :n] = inst.Q
    gamma[n:, n:] = inst.R
    gamma[:n, n:] = 0.5 * inst.A
    gamma[n:, :n] = 0.5 * inst.A.T
    lo_h = np.concatenate([inst.ax, inst.ay])
    hi_h = np.concatenate([inst.bx, inst.by])
    obj = np.zeros(vm.num_vars)
    rows: list[LinearRow] = []
    for i in range(p):
        for j in range(i, p):
            obj[vm.hh(i, j)] = gamma[i, i] if i == j else 2.0 * gamma[i, j]
            rows.extend(
                mccormick_rows(
                    vm.hh(i, j), vm.h(i), vm.h(j),
                    lo_h[i], hi_h[i], lo_h[j], hi_h[j],
                )
            )
    lo = np.full(vm.num_vars, -np.inf)
    hi = np.full(vm.num_vars, np.inf)
    lo[:p], hi[:p] = lo_h, hi_h
    model = QuadraticModel(vm.num_vars, obj, obj_quad=None, rows=rows, var_lo=lo, var_hi=hi)
    return model, vm


def box_rows(vm: VariableMap, inst: BilinearInstance) -> list[LinearRow]:
    """The box bounds on the original variables written as linear rows (used
    when bounds must participate explicitly, e.g. in cut generation)."""
    rows: list[LinearRow] = []
    if vm.kind == BILINEAR:
        bounds = [
            (vm.x(i), inst.ax[i], inst.bx[i]) for i in range(vm.n)
        ] + [(vm.y(j), inst.ay[j], inst.by[j]) for j in range(vm.m)]
    else:
        lo_h = np.concatenate([inst.ax, inst.ay])
        hi_h = np.concatenate([inst.bx, inst.by])
        bounds = [(vm.h(i), lo_h[i], hi_h[i]) for i in range(vm.n + vm.m)]
    for idx, lo, hi in bounds:
        rows.append(LinearRow([(idx, 1.0)], SENSE_GE, float(lo)))
        rows.append(LinearRow([(idx, 1.0)], SENSE_LE, float(hi)))
    return rows
