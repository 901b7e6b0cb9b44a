"""SVD-guided disjunctive cuts for the bilinear lifting.

Given an incumbent (x, y, W) of the relaxation, the violation matrix
M = W - x y' is decomposed; each significant singular pair (u, v) yields a
rank-one direction in which W disagrees with x y'. Writing

    p1 = u'x,  p2 = v'y,  r = <u v', W>,
    q1 = (p1 + p2) / 2,  q2 = (p1 - p2) / 2,

exactness of the lifting would mean r = p1 p2 = q1^2 - q2^2. Two convex
inequalities hold on the true set (with [l1, u1], [l2, u2] the box ranges of
q1, q2):

    sec1:   r + q2^2 <= (l1 + u1) q1 - l1 u1     (secant of q1^2)
    sec2:  -r + q1^2 <= (l2 + u2) q2 - l2 u2     (secant of q2^2)

Squares are tangent-linearized at the incumbent when a linear row is needed.
Four-way disjunctions split the q-intervals (secant flavour) or the
p-intervals (extended-McCormick flavour) at the incumbent, and a cut that is
valid for every disjunct yet violated at the incumbent is found by a
cut-generating LP (CGLP) over multipliers for each disjunct system.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import CglpNumericalFailure, DegenerateInterval, PsdViolated, RankDeficient
from .instances import BilinearInstance
from .linalg import interval_dot, svd, sym_eig
from .relaxations import BILINEAR, VariableMap
from .solver import (
    OPTIMAL,
    SENSE_EQ,
    SENSE_GE,
    SENSE_LE,
    LinearRow,
    QuadraticModel,
    solve,
)

SIGMA_REL_TOL = 1e-7
SPLIT_CLAMP = 0.05
MIN_INTERVAL_WIDTH = 1e-9
COEFF_ZERO_TOL = 1e-10
VIOLATION_THRESHOLD = 1e-6


@dataclass
class SingularPair:
    u: np.ndarray
    v: np.ndarray
    sigma: float
    index: int


def violation_svd(w: np.ndarray, x: np.ndarray, y: np.ndarray) -> list[SingularPair]:
    """Singular pairs of W - x y' with sigma_i > 1e-7 * max(1, sigma_1),
    strongest first. Empty list when the lifting is (numerically) exact."""
    m_mat = np.asarray(w, dtype=float) - np.outer(x, y)
    res = svd(m_mat)
    s = res.singular_values
    if s.size == 0:
        return []
    cutoff = SIGMA_REL_TOL * max(1.0, float(s[0]))
    pairs = []
    for i in range(s.size):
        if s[i] > cutoff:
            pairs.append(SingularPair(u=res.u[:, i].copy(), v=res.v[:, i].copy(), sigma=float(s[i]), index=i))
    return pairs


# ---------------------------------------------------------------------------
# Coefficient forms along a rank-one direction


def _w_coeffs(vm: VariableMap, u: np.ndarray, v: np.ndarray) -> list[tuple[int, float]]:
    coeffs = []
    for i in range(vm.n):
        ui = u[i]
        if ui == 0.0:
            continue
        for j in range(vm.m):
            val = ui * v[j]
            if val != 0.0:
                coeffs.append((vm.w(i, j), val))
    return coeffs


@dataclass
class SeparableForm:
    """Difference-of-squares view along (u, v): r = <u v', W>, rotated
    coordinates q1, q2 with their exact box ranges."""

    u: np.ndarray
    v: np.ndarray
    r_coeffs: list[tuple[int, float]]
    q1_coeffs: list[tuple[int, float]]
    q2_coeffs: list[tuple[int, float]]
    q1_bounds: tuple[float, float]
    q2_bounds: tuple[float, float]


@dataclass
class ProductForm:
    """Product view along (u, v): r = <u v', W> ~ p1 p2 with p1 = u'x,
    p2 = v'y and their exact box ranges."""

    u: np.ndarray
    v: np.ndarray
    r_coeffs: list[tuple[int, float]]
    p1_coeffs: list[tuple[int, float]]
    p2_coeffs: list[tuple[int, float]]
    p1_bounds: tuple[float, float]
    p2_bounds: tuple[float, float]


def separable_form(pair: SingularPair, inst: BilinearInstance, vm: VariableMap) -> SeparableForm:
    u, v = pair.u, pair.v
    n = inst.n
    q1 = [(vm.x(i), 0.5 * u[i]) for i in range(n) if u[i] != 0.0]
    q1 += [(vm.y(j), 0.5 * v[j]) for j in range(inst.m) if v[j] != 0.0]
    q2 = [(vm.x(i), 0.5 * u[i]) for i in range(n) if u[i] != 0.0]
    q2 += [(vm.y(j), -0.5 * v[j]) for j in range(inst.m) if v[j] != 0.0]
    half = np.concatenate([0.5 * u, 0.5 * v])
    half_neg = np.concatenate([0.5 * u, -0.5 * v])
    lo_h = np.concatenate([inst.ax, inst.ay])
    hi_h = np.concatenate([inst.bx, inst.by])
    return SeparableForm(
        u=u,
        v=v,
        r_coeffs=_w_coeffs(vm, u, v),
        q1_coeffs=q1,
        q2_coeffs=q2,
        q1_bounds=interval_dot(half, lo_h, hi_h),
        q2_bounds=interval_dot(half_neg, lo_h, hi_h),
    )


def product_form(pair: SingularPair, inst: BilinearInstance, vm: VariableMap) -> ProductForm:
    u, v = pair.u, pair.v
    p1 = [(vm.x(i), u[i]) for i in range(inst.n) if u[i] != 0.0]
    p2 = [(vm.y(j), v[j]) for j in range(inst.m) if v[j] != 0.0]
    return ProductForm(
        u=u,
        v=v,
        r_coeffs=_w_coeffs(vm, u, v),
        p1_coeffs=p1,
        p2_coeffs=p2,
        p1_bounds=interval_dot(u, inst.ax, inst.bx),
        p2_bounds=interval_dot(v, inst.ay, inst.by),
    )


# ---------------------------------------------------------------------------
# Secant inequalities and tangent linearization


@dataclass
class SecantQuadratic:
    """linear' z + (square' z)^2 <= rhs."""

    linear: list[tuple[int, float]]
    square: list[tuple[int, float]]
    rhs: float


def _merge(*coeff_lists: list[tuple[int, float]]) -> list[tuple[int, float]]:
    acc: dict[int, float] = {}
    for coeffs in coeff_lists:
        for idx, val in coeffs:
            acc[idx] = acc.get(idx, 0.0) + val
    return [(idx, val) for idx, val in acc.items() if val != 0.0]


def _scaled(coeffs: list[tuple[int, float]], factor: float) -> list[tuple[int, float]]:
    return [(idx, factor * val) for idx, val in coeffs]


def secant_inequalities(
    form: SeparableForm,
    q1_interval: tuple[float, float] | None = None,
    q2_interval: tuple[float, float] | None = None,
) -> tuple[SecantQuadratic, SecantQuadratic]:
    """sec1 over the q1 interval and sec2 over the q2 interval (defaults:
    the full box ranges). Valid for the true lifted set restricted to those
    intervals; tighter intervals give tighter right sides."""
    l1, u1 = q1_interval if q1_interval is not None else form.q1_bounds
    l2, u2 = q2_interval if q2_interval is not None else form.q2_bounds
    sec1 = SecantQuadratic(
        linear=_merge(form.r_coeffs, _scaled(form.q1_coeffs, -(l1 + u1))),
        square=form.q2_coeffs,
        rhs=-l1 * u1,
    )
    sec2 = SecantQuadratic(
        linear=_merge(_scaled(form.r_coeffs, -1.0), _scaled(form.q2_coeffs, -(l2 + u2))),
        square=form.q1_coeffs,
        rhs=-l2 * u2,
    )
    return sec1, sec2


def tangent_linearize(ineq: SecantQuadratic, point: np.ndarray) -> LinearRow:
    """Replace (g'z)^2 by its tangent 2 g(z^) g'z - g(z^)^2 at the point;
    the tangent minorizes the square, so the row relaxes the inequality."""
    g0 = sum(val * point[idx] for idx, val in ineq.square)
    coeffs = _merge(ineq.linear, _scaled(ineq.square, 2.0 * g0))
    return LinearRow(coeffs, SENSE_LE, ineq.rhs + g0 * g0)


def unit_vector_rows(inst: BilinearInstance, vm: VariableMap, point: np.ndarray) -> list[LinearRow]:
    """Tangentized sec1/sec2 for every coordinate direction pair
    (+-e_i, +-e_j): 8 n m rows (sign-flipped pairs repeat inequalities;
    the full count is kept)."""
    rows: list[LinearRow] = []
    n, m = inst.n, inst.m
    for i in range(n):
        for j in range(m):
            for su in (1.0, -1.0):
                for sv in (1.0, -1.0):
                    u = np.zeros(n)
                    v = np.zeros(m)
                    u[i] = su
                    v[j] = sv
                    pair = SingularPair(u=u, v=v, sigma=1.0, index=-1)
                    form = separable_form(pair, inst, vm)
                    sec1, sec2 = secant_inequalities(form)
                    rows.append(tangent_linearize(sec1, point))
                    rows.append(tangent_linearize(sec2, point))
    return rows


def extended_mccormick_rows(
    form: ProductForm,
    p1_interval: tuple[float, float] | None = None,
    p2_interval: tuple[float, float] | None = None,
) -> list[LinearRow]:
    """The four McCormick envelope rows for r ~ p1 p2 over the given
    intervals (defaults: the full box ranges)."""
    a1, b1 = p1_interval if p1_interval is not None else form.p1_bounds
    a2, b2 = p2_interval if p2_interval is not None else form.p2_bounds

    def row(c1: float, c2: float, sense: str, rhs: float) -> LinearRow:
        coeffs = _merge(form.r_coeffs, _scaled(form.p1_coeffs, -c1), _scaled(form.p2_coeffs, -c2))
        return LinearRow(coeffs, sense, rhs)

    return [
        row(b2, a1, SENSE_LE, -a1 * b2),
        row(a2, b1, SENSE_LE, -a2 * b1),
        row(a2, a1, SENSE_GE, -a1 * a2),
        row(b2, b1, SENSE_GE, -b1 * b2),
    ]


# ---------------------------------------------------------------------------
# Disjunctions


@dataclass
class Disjunction:
    """A cover of the feasible set: every feasible lifted point satisfies at
    least one disjunct's row list."""

    kind: str
    disjuncts: list[list[LinearRow]]
    splits: tuple[float, ...] = field(default=())


def _split_point(value: float, lo: float, hi: float) -> float:
    """Incumbent value clamped 5% of the width away from either end."""
    width = hi - lo
    if width < MIN_INTERVAL_WIDTH:
        raise DegenerateInterval(f"interval [{lo}, {hi}] is too narrow to split")
    margin = SPLIT_CLAMP * width
    return min(max(value, lo + margin), hi - margin)


def _interval_rows(coeffs: list[tuple[int, float]], lo: float, hi: float) -> list[LinearRow]:
    return [LinearRow(list(coeffs), SENSE_GE, lo), LinearRow(list(coeffs), SENSE_LE, hi)]


def _value(coeffs: list[tuple[int, float]], point: np.ndarray) -> float:
    return float(sum(val * point[idx] for idx, val in coeffs))


def disjunction_secant(form: SeparableForm, point: np.ndarray) -> Disjunction:
    """Four-way split of the (q1, q2) rectangle at the (clamped) incumbent.
    Each disjunct carries its sub-interval rows and the two secants for its
    sub-intervals, tangent-linearized at the incumbent."""
    l1, u1 = form.q1_bounds
    l2, u2 = form.q2_bounds
    t1 = _split_point(_value(form.q1_coeffs, point), l1, u1)
    t2 = _split_point(_value(form.q2_coeffs, point), l2, u2)
    disjuncts = []
    for s1 in ((l1, t1), (t1, u1)):
        for s2 in ((l2, t2), (t2, u2)):
            sec1, sec2 = secant_inequalities(form, q1_interval=s1, q2_interval=s2)
            rows = (
                _interval_rows(form.q1_coeffs, *s1)
                + _interval_rows(form.q2_coeffs, *s2)
                + [tangent_linearize(sec1, point), tangent_linearize(sec2, point)]
            )
            disjuncts.append(rows)
    return Disjunction(kind="secant", disjuncts=disjuncts, splits=(t1, t2))


def disjunction_mccormick(form: ProductForm, point: np.ndarray) -> Disjunction:
    """Four-way split of the (p1, p2) rectangle at the (clamped) incumbent.
    Each disjunct carries its sub-interval rows and the McCormick envelope of
    r ~ p1 p2 over the sub-rectangle."""
    a1, b1 = form.p1_bounds
    a2, b2 = form.p2_bounds
    t1 = _split_point(_value(form.p1_coeffs, point), a1, b1)
    t2 = _split_point(_value(form.p2_coeffs, point), a2, b2)
    disjuncts = []
    for s1 in ((a1, t1), (t1, b1)):
        for s2 in ((a2, t2), (t2, b2)):
            rows = (
                _interval_rows(form.p1_coeffs, *s1)
                + _interval_rows(form.p2_coeffs, *s2)
                + extended_mccormick_rows(form, p1_interval=s1, p2_interval=s2)
            )
            disjuncts.append(rows)
    return Disjunction(kind="mccormick", disjuncts=disjuncts, splits=(t1, t2))


def disjunction_symmetric_eig(
    vm: VariableMap, lo_h: np.ndarray, hi_h: np.ndarray, eigvec: np.ndarray, point: np.ndarray
) -> Disjunction:
    """Two-way disjunction for the symmetric lifting along an eigenvector z
    of the violation matrix H - h h': with p = z'h and s = <z z', H>, the
    true set satisfies s = p^2; the concave side s <= p^2 becomes a secant
    row on each half of the p interval."""
    p = lo_h.size
    p_coeffs = [(vm.h(i), float(eigvec[i])) for i in range(p) if eigvec[i] != 0.0]
    s_coeffs = []
    for i in range(p):
        for j in range(i, p):
            val = eigvec[i] * eigvec[j] * (1.0 if i == j else 2.0)
            if val != 0.0:
                s_coeffs.append((vm.hh(i, j), float(val)))
    lo, hi = interval_dot(eigvec, lo_h, hi_h)
    t = _split_point(_value(p_coeffs, point), lo, hi)
    disjuncts = []
    for sub in ((lo, t), (t, hi)):
        l, u = sub
        secant = LinearRow(_merge(s_coeffs, _scaled(p_coeffs, -(l + u))), SENSE_LE, -l * u)
        disjuncts.append(_interval_rows(p_coeffs, l, u) + [secant])
    return Disjunction(kind="symmetric", disjuncts=disjuncts, splits=(t,))


def top_eigenpair_violation(hmat: np.ndarray, h: np.ndarray) -> tuple[np.ndarray, float]:
    """Leading eigenvector and eigenvalue of H - h h'. Raises RankDeficient
    when no eigenvalue is positive beyond tolerance."""
    res = sym_eig(hmat - np.outer(h, h))
    top = float(res.values[0])
    if top <= SIGMA_REL_TOL * max(1.0, abs(float(res.values[-1]))):
        raise RankDeficient("violation matrix has no significantly positive eigenvalue")
    return res.vectors[:, 0].copy(), top


# ---------------------------------------------------------------------------
# Cut-generating LP


@dataclass
class Cut:
    row: LinearRow
    violation: float
    kind: str


def lifted_sup_bound(inst: BilinearInstance) -> float:
    """Upper bound on ||z||_inf over the feasible lifted set (x, y, x y')."""
    mx = np.maximum(np.abs(inst.ax), np.abs(inst.bx))
    my = np.maximum(np.abs(inst.ay), np.abs(inst.by))
    top = max(float(np.max(mx)), float(np.max(my)))
    if mx.size and my.size:
        top = max(top, float(np.max(mx)) * float(np.max(my)))
    return max(1.0, top)


def _le_form(rows: list[LinearRow]) -> list[tuple[list[tuple[int, float]], float]]:
    """Rows rewritten as <= constraints; = rows split into a +/- pair."""
    out = []
    for row in rows:
        if row.sense == SENSE_LE:
            out.append((row.coefficients, row.rhs))
        elif row.sense == SENSE_GE:
            out.append((_scaled(row.coefficients, -1.0), -row.rhs))
        else:
            out.append((row.coefficients, row.rhs))
            out.append((_scaled(row.coefficients, -1.0), -row.rhs))
    return out


def _system_matrix(le_rows, num_vars: int) -> tuple[sp.csc_matrix, np.ndarray]:
    data, ri, ci = [], [], []
    rhs = np.zeros(len(le_rows))
    for r, (coeffs, b) in enumerate(le_rows):
        rhs[r] = b
        for idx, val in coeffs:
            ri.append(r)
            ci.append(idx)
            data.append(val)
    return sp.csc_matrix((data, (ri, ci)), shape=(len(le_rows), num_vars)), rhs


def solve_cglp(
    base_rows: list[LinearRow],
    disjunction: Disjunction,
    point: np.ndarray,
    num_vars: int,
    z_bound: float,
    backend: str = "auto",
    threshold: float = VIOLATION_THRESHOLD,
) -> Cut | None:
    """Most-violated valid inequality for the union of the disjunct systems.

    Solves  max alpha' z^ - beta  over multipliers mu_k >= 0 for each
    disjunct system (base rows plus disjunct rows, in <= form) subject to
    alpha = C_k' mu_k, beta >= c_k' mu_k, and sum_k 1' mu_k = 1.

    The returned cut is hardened against solver tolerance: the right side is
    certified as max_k [c_k' mu_k + ||alpha - C_k' mu_k||_1 * z_bound], with
    z_bound an upper bound on ||z||_inf over the feasible lifted set, so the
    accepted row is valid whenever the disjunct systems are. Coefficients
    below 1e-10 of the sup norm are zeroed, the row is rescaled to sup norm
    one, and it is returned only when the violation at the incumbent exceeds
    the threshold (default 1e-6).
    """
    systems = []
    for rows in disjunction.disjuncts:
        le = _le_form(base_rows + rows)
        systems.append(_system_matrix(le, num_vars))
    k_count = len(systems)
    offsets = []
    total_mu = 0
    for c_mat, _ in systems:
        offsets.append(num_vars + 1 + total_mu)
        total_mu += c_mat.shape[0]
    n_cglp = num_vars + 1 + total_mu

    obj = np.zeros(n_cglp)
    obj[:num_vars] = -point[:num_vars]
    obj[num_vars] = 1.0

    rows_out: list[LinearRow] = []
    for k, (c_mat, rhs_k) in enumerate(systems):
        off = offsets[k]
        for t in range(num_vars):
            start, end = c_mat.indptr[t], c_mat.indptr[t + 1]
            coeffs = [(t, 1.0)]
            coeffs += [
                (off + int(c_mat.indices[s]), -float(c_mat.data[s])) for s in range(start, end)
            ]
            rows_out.append(LinearRow(coeffs, SENSE_EQ, 0.0))
        beta_row = [(num_vars, -1.0)] + [
            (off + r, float(rhs_k[r])) for r in range(rhs_k.size) if rhs_k[r] != 0.0
        ]
        rows_out.append(LinearRow(beta_row, SENSE_LE, 0.0))
    norm_row = []
    for k in range(k_count):
        norm_row += [(offsets[k] + r, 1.0) for r in range(systems[k][0].shape[0])]
    rows_out.append(LinearRow(norm_row, SENSE_EQ, 1.0))

    lo = np.concatenate([np.full(num_vars + 1, -np.inf), np.zeros(total_mu)])
    model = QuadraticModel(n_cglp, obj, rows=rows_out, var_lo=lo)
    res = solve(model, backend=backend)
    if res.status != OPTIMAL or res.point is None:
        raise CglpNumericalFailure(f"CGLP solve ended with status {res.status}")

    alpha = res.point[:num_vars].copy()
    sup = float(np.max(np.abs(alpha))) if alpha.size else 0.0
    if sup < 1e-12:
        return None
    alpha[np.abs(alpha) < COEFF_ZERO_TOL * sup] = 0.0

    beta = -np.inf
    for k, (c_mat, rhs_k) in enumerate(systems):
        mu = np.maximum(res.point[offsets[k] : offsets[k] + c_mat.shape[0]], 0.0)
        alpha_k = c_mat.T @ mu
        mismatch = float(np.sum(np.abs(alpha - alpha_k)))
        beta = max(beta, float(rhs_k @ mu) + mismatch * z_bound)

    alpha /= sup
    beta /= sup
    violation = float(alpha @ point[:num_vars]) - beta
    if violation <= threshold:
        return None
    coeffs = [(int(i), float(alpha[i])) for i in np.nonzero(alpha)[0]]
    return Cut(row=LinearRow(coeffs, SENSE_LE, beta), violation=violation, kind=disjunction.kind)


# ---------------------------------------------------------------------------
# Dominance of the two rank-one product bounds


def rhs_mccormick_avg(p1, p2, a1: float, b1: float, a2: float, b2: float):
    """Average of the two upper McCormick rows for s = p1 p2."""
    return 0.5 * (a2 + b2) * np.asarray(p1) + 0.5 * (a1 + b1) * np.asarray(p2) - 0.5 * (a1 * b2 + a2 * b1)


def rhs_secant(p1, p2, a1: float, b1: float, a2: float, b2: float):
    """Difference-of-squares upper bound: secant of q1^2 minus exact q2^2."""
    p1 = np.asarray(p1)
    p2 = np.asarray(p2)
    l1 = 0.5 * (a1 + a2)
    u1 = 0.5 * (b1 + b2)
    q1 = 0.5 * (p1 + p2)
    q2 = 0.5 * (p1 - p2)
    return (l1 + u1) * q1 - l1 * u1 - q2 * q2


@dataclass
class ComparisonReport:
    verdict: str
    min_diff: float
    max_diff: float


def compare_product_bounds(
    a1: float, b1: float, a2: float, b2: float, points: np.ndarray
) -> ComparisonReport:
    """Compare the two upper bounds on the sampled (p1, p2) points.

    diff = rhs_mccormick_avg - rhs_secant. Verdict: "equivalent" when |diff| <= 1e-10
    throughout, "secant_dominates" when diff >= -1e-10 throughout, else
    "incomparable".
    """
    pts = np.asarray(points, dtype=float)
    diff = rhs_mccormick_avg(pts[:, 0], pts[:, 1], a1, b1, a2, b2) - rhs_secant(
        pts[:, 0], pts[:, 1], a1, b1, a2, b2
    )
    lo = float(np.min(diff))
    hi = float(np.max(diff))
    if max(abs(lo), abs(hi)) <= 1e-10:
        verdict = "equivalent"
    elif lo >= -1e-10:
        verdict = "secant_dominates"
    else:
        verdict = "incomparable"
    return ComparisonReport(verdict=verdict, min_diff=lo, max_diff=hi)


# ---------------------------------------------------------------------------
# Relation between the symmetric and bilinear valid inequalities


@dataclass
class ImplicationCheck:
    sym_lhs: float
    bil_lhs: float
    chain: float
    holds: bool


def verify_symmetric_implies_bilinear(
    x: np.ndarray,
    y: np.ndarray,
    w_mat: np.ndarray,
    x_mat: np.ndarray,
    y_mat: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    tol: float = 1e-9,
) -> ImplicationCheck:
    """With z = (u; v)/sqrt(2) and H = [[X, W], [W', Y]]: whenever the
    symmetric inequality <z z', H> - (z'h)^2 <= 0 holds at (h, H) with
    X >= x x' and Y >= y y' (PSD order), the bilinear inequality
    <u v', W> - (u'x)(v'y) <= 0 holds as well. The two sides differ by

        chain = ((u'x)^2 - u'Xu + (v'y)^2 - v'Yv) / 2 <= 0.

    Raises PsdViolated when X - x x' or Y - y y' has an eigenvalue below
    -1e-8.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for name, mat, vec in (("X", x_mat, x), ("Y", y_mat, y)):
        gap = np.asarray(mat, dtype=float) - np.outer(vec, vec)
        if float(np.linalg.eigvalsh(0.5 * (gap + gap.T))[0]) < -1e-8:
            raise PsdViolated(f"{name} does not dominate its outer product")
    ux = float(u @ x)
    vy = float(v @ y)
    uxu = float(u @ x_mat @ u)
    vyv = float(v @ y_mat @ v)
    uwv = float(u @ w_mat @ v)
    sym_lhs = 0.5 * (uxu + 2.0 * uwv + vyv) - 0.5 * (ux + vy) ** 2
    bil_lhs = uwv - ux * vy
    chain = 0.5 * (ux * ux - uxu + vy * vy - vyv)
    holds = not (sym_lhs <= 0.0 and bil_lhs > tol)
    return ImplicationCheck(sym_lhs=sym_lhs, bil_lhs=bil_lhs, chain=chain, holds=holds)
