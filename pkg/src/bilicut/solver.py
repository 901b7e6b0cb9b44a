"""Convex QP/LP solving behind a uniform model and result surface.

A model is

    minimize  obj_lin' z + z' obj_quad z
    subject to  linear rows (<=, >=, =)  and  var_lo <= z <= var_hi,

with obj_quad symmetric positive semidefinite (possibly absent). Three
backends sit behind solve():

- "reference": dense Mehrotra predictor-corrector interior point method,
  written here. Normal-equations Cholesky when the model has no equality
  rows, symmetric quasi-definite augmented solve otherwise. Intended for
  small models and for oracle-checking the production backends.
- "highs" / "highs-ipm": scipy.optimize.linprog (bundled HiGHS), linear
  objectives only.
- "clarabel": sparse interior point, handles both LPs and QPs.

"auto" picks clarabel for quadratic objectives and highs otherwise.

Dual convention: duals[i] is the multiplier of row i in
L = objective + sum_i duals[i] * (lhs_i - rhs_i), so duals >= 0 on <= rows,
<= 0 on >= rows, and free on = rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import EmptyModel, NonFinite, NumericalFailure

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

SENSE_LE = "<="
SENSE_GE = ">="
SENSE_EQ = "="

_BACKENDS = ("auto", "reference", "highs", "highs-ipm", "clarabel")


@dataclass
class LinearRow:
    """Sparse row sum_j coeff_j z_j  (sense)  rhs, indices unique."""

    coefficients: list[tuple[int, float]]
    sense: str
    rhs: float

    def check(self, num_vars: int) -> None:
        if self.sense not in (SENSE_LE, SENSE_GE, SENSE_EQ):
            raise ValueError(f"unknown sense {self.sense!r}")
        seen = set()
        for idx, val in self.coefficients:
            if idx in seen:
                raise ValueError(f"duplicate variable index {idx} in row")
            seen.add(idx)
            if not (0 <= idx < num_vars):
                raise ValueError(f"variable index {idx} out of range")
            if not np.isfinite(val):
                raise NonFinite("row coefficient is not finite")
        if not np.isfinite(self.rhs):
            raise NonFinite("row rhs is not finite")


@dataclass
class QuadraticModel:
    """Model container; obj_quad is a sparse symmetric matrix or None."""

    num_vars: int
    obj_lin: np.ndarray
    obj_quad: sp.spmatrix | None = None
    rows: list[LinearRow] = field(default_factory=list)
    var_lo: np.ndarray | None = None
    var_hi: np.ndarray | None = None

    def __post_init__(self):
        self.obj_lin = np.asarray(self.obj_lin, dtype=float)
        if self.var_lo is None:
            self.var_lo = np.full(self.num_vars, -np.inf)
        if self.var_hi is None:
            self.var_hi = np.full(self.num_vars, np.inf)
        self.var_lo = np.asarray(self.var_lo, dtype=float)
        self.var_hi = np.asarray(self.var_hi, dtype=float)


@dataclass
class SolveResult:
    status: str
    objective: float | None
    point: np.ndarray | None
    duals: np.ndarray | None
    iterations: int
    backend: str


def _assemble(model: QuadraticModel):
    """Split rows into <= form and = form. Returns csr matrices, rhs vectors,
    and per-part lists mapping back to (row index, sign) in model order."""
    ub_r, ub_c, ub_v, ub_b, ub_map = [], [], [], [], []
    eq_r, eq_c, eq_v, eq_b, eq_map = [], [], [], [], []
    for i, row in enumerate(model.rows):
        sign = -1.0 if row.sense == SENSE_GE else 1.0
        if row.sense == SENSE_EQ:
            r = len(eq_b)
            for idx, val in row.coefficients:
                eq_r.append(r)
                eq_c.append(idx)
                eq_v.append(val)
            eq_b.append(row.rhs)
            eq_map.append(i)
        else:
            r = len(ub_b)
            for idx, val in row.coefficients:
                ub_r.append(r)
                ub_c.append(idx)
                ub_v.append(sign * val)
            ub_b.append(sign * row.rhs)
            ub_map.append((i, sign))
    nv = model.num_vars
    a_ub = sp.csr_matrix((ub_v, (ub_r, ub_c)), shape=(len(ub_b), nv))
    a_eq = sp.csr_matrix((eq_v, (eq_r, eq_c)), shape=(len(eq_b), nv))
    return a_ub, np.array(ub_b), ub_map, a_eq, np.array(eq_b), eq_map


def _row_duals(model: QuadraticModel, lam: np.ndarray, nu: np.ndarray, ub_map, eq_map) -> np.ndarray:
    duals = np.zeros(len(model.rows))
    for r, (i, sign) in enumerate(ub_map):
        duals[i] = sign * lam[r]
    for r, i in enumerate(eq_map):
        duals[i] = nu[r]
    return duals


def model_violation(model: QuadraticModel, point: np.ndarray) -> float:
    """Largest constraint/bound violation of a point (0 when feasible)."""
    worst = 0.0
    z = np.asarray(point, dtype=float)
    for row in model.rows:
        lhs = sum(val * z[idx] for idx, val in row.coefficients)
        if row.sense == SENSE_LE:
            worst = max(worst, lhs - row.rhs)
        elif row.sense == SENSE_GE:
            worst = max(worst, row.rhs - lhs)
        else:
            worst = max(worst, abs(lhs - row.rhs))
    finite_lo = np.isfinite(model.var_lo)
    finite_hi = np.isfinite(model.var_hi)
    if np.any(finite_lo):
        worst = max(worst, float(np.max(model.var_lo[finite_lo] - z[finite_lo])))
    if np.any(finite_hi):
        worst = max(worst, float(np.max(z[finite_hi] - model.var_hi[finite_hi])))
    return max(worst, 0.0)


def model_objective(model: QuadraticModel, point: np.ndarray) -> float:
    val = float(model.obj_lin @ point)
    if model.obj_quad is not None:
        val += float(point @ (model.obj_quad @ point))
    return val


def solve(model: QuadraticModel, backend: str = "auto") -> SolveResult:
    """Solve the model with the named backend ("auto" to pick one)."""
    if model.num_vars == 0:
        raise EmptyModel("model has no variables")
    if backend not in _BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {_BACKENDS}")
    has_quad = model.obj_quad is not None and model.obj_quad.nnz > 0
    if backend == "auto":
        backend = "clarabel" if has_quad else "highs"
    if backend in ("highs", "highs-ipm") and has_quad:
        raise ValueError("highs backend handles linear objectives only")
    if backend == "reference":
        result = _solve_reference(model)
    elif backend == "clarabel":
        result = _solve_clarabel(model)
    else:
        result = _solve_highs(model, method=backend)
    if result.status == OPTIMAL and result.point is not None:
        scale = 1.0 + float(np.max(np.abs(result.point)))
        if model_violation(model, result.point) > 1e-5 * scale:
            raise NumericalFailure(f"{result.backend} returned an infeasible 'optimal' point")
    return result


# ---------------------------------------------------------------------------
# HiGHS backend (scipy.optimize.linprog)


def _solve_highs(model: QuadraticModel, method: str) -> SolveResult:
    a_ub, b_ub, ub_map, a_eq, b_eq, eq_map = _assemble(model)
    bounds = []
    for lo, hi in zip(model.var_lo, model.var_hi):
        bounds.append((None if lo == -np.inf else lo, None if hi == np.inf else hi))
    res = linprog(
        model.obj_lin,
        A_ub=a_ub if a_ub.shape[0] else None,
        b_ub=b_ub if a_ub.shape[0] else None,
        A_eq=a_eq if a_eq.shape[0] else None,
        b_eq=b_eq if a_eq.shape[0] else None,
        bounds=bounds,
        method=method,
    )
    if res.status == 4:
        raise NumericalFailure(f"HiGHS numerical trouble: {res.message}")
    status = {0: OPTIMAL, 1: ITERATION_LIMIT, 2: INFEASIBLE, 3: UNBOUNDED}[res.status]
    duals = None
    point = None
    objective = None
    if status == OPTIMAL:
        point = np.asarray(res.x, dtype=float)
        objective = float(res.fun)
        lam = -np.asarray(res.ineqlin.marginals) if a_ub.shape[0] else np.zeros(0)
        nu = -np.asarray(res.eqlin.marginals) if a_eq.shape[0] else np.zeros(0)
        duals = _row_duals(model, lam, nu, ub_map, eq_map)
    return SolveResult(status, objective, point, duals, int(res.nit), f"highs:{method}")


# ---------------------------------------------------------------------------
# Clarabel backend


def _solve_clarabel(model: QuadraticModel) -> SolveResult:
    import clarabel

    a_ub, b_ub, ub_map, a_eq, b_eq, eq_map = _assemble(model)
    nv = model.num_vars
    # Finite bounds become extra nonnegative-cone rows (clarabel has no
    # native variable bounds).
    lo_idx = np.where(model.var_lo > -np.inf)[0]
    hi_idx = np.where(model.var_hi < np.inf)[0]
    blocks = [a_eq, a_ub]
    rhs = [b_eq, b_ub]
    if hi_idx.size:
        blocks.append(sp.csr_matrix((np.ones(hi_idx.size), (np.arange(hi_idx.size), hi_idx)), shape=(hi_idx.size, nv)))
        rhs.append(model.var_hi[hi_idx])
    if lo_idx.size:
        blocks.append(sp.csr_matrix((-np.ones(lo_idx.size), (np.arange(lo_idx.size), lo_idx)), shape=(lo_idx.size, nv)))
        rhs.append(-model.var_lo[lo_idx])
    a_all = sp.vstack(blocks, format="csc")
    b_all = np.concatenate(rhs)
    n_ineq = a_all.shape[0] - a_eq.shape[0]

    if model.obj_quad is not None and model.obj_quad.nnz > 0:
        # Clarabel objective is (1/2) z'Pz + q'z; ours is z' obj_quad z.
        p_mat = sp.triu(2.0 * model.obj_quad).tocsc()
    else:
        p_mat = sp.csc_matrix((nv, nv))
    cones = []
    if a_eq.shape[0]:
        cones.append(clarabel.ZeroConeT(a_eq.shape[0]))
    if n_ineq:
        cones.append(clarabel.NonnegativeConeT(n_ineq))
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    # Bound traces tolerate only 1e-7 noise; default 1e-8 relative gaps are
    # too loose once objectives reach tens in magnitude.
    settings.tol_gap_abs = 1e-9
    settings.tol_gap_rel = 1e-9
    settings.tol_feas = 1e-9
    solver = clarabel.DefaultSolver(p_mat, model.obj_lin, a_all, b_all, cones, settings)
    sol = solver.solve()
    name = str(sol.status)
    mapping = {
        "Solved": OPTIMAL,
        "AlmostSolved": OPTIMAL,
        "PrimalInfeasible": INFEASIBLE,
        "AlmostPrimalInfeasible": INFEASIBLE,
        "DualInfeasible": UNBOUNDED,
        "AlmostDualInfeasible": UNBOUNDED,
        "MaxIterations": ITERATION_LIMIT,
        "MaxTime": ITERATION_LIMIT,
    }
    if name not in mapping:
        raise NumericalFailure(f"clarabel failed: {name}")
    status = mapping[name]
    point = duals = None
    objective = None
    if status == OPTIMAL:
        point = np.asarray(sol.x, dtype=float)
        objective = model_objective(model, point)
        z = np.asarray(sol.z, dtype=float)
        nu = z[: a_eq.shape[0]]
        lam = z[a_eq.shape[0] : a_eq.shape[0] + a_ub.shape[0]]
        duals = _row_duals(model, lam, nu, ub_map, eq_map)
    return SolveResult(status, objective, point, duals, int(sol.iterations), "clarabel")


# ---------------------------------------------------------------------------
# Reference backend: dense Mehrotra predictor-corrector


def _solve_reference(model: QuadraticModel) -> SolveResult:
    lo = model.var_lo.copy()
    hi = model.var_hi.copy()
    extra_eq = []
    # Fixed variables (lo == hi) have no strict interior; move them into
    # equality rows so the barrier stays well defined.
    for j in np.where(lo == hi)[0]:
        extra_eq.append(LinearRow([(int(j), 1.0)], SENSE_EQ, float(lo[j])))
        lo[j], hi[j] = -np.inf, np.inf
    work = QuadraticModel(
        num_vars=model.num_vars,
        obj_lin=model.obj_lin,
        obj_quad=model.obj_quad,
        rows=model.rows + extra_eq,
        var_lo=lo,
        var_hi=hi,
    )
    status, obj, point, lam, nu, iters = _mehrotra(work)
    duals = None
    if lam is not None:
        a_ub, _, ub_map, a_eq, _, eq_map = _assemble(work)
        all_duals = _row_duals(work, lam, nu, ub_map, eq_map)
        duals = all_duals[: len(model.rows)]
    objective = model_objective(model, point) if point is not None and status == OPTIMAL else None
    return SolveResult(status, objective, point, duals, iters, "reference")


def _mehrotra(model: QuadraticModel):
    nv = model.num_vars
    a_ub, b_ub, _, a_eq, b_eq, _ = _assemble(model)
    a_ub_d = a_ub.toarray()
    a_eq_d = a_eq.toarray()
    k = a_ub_d.shape[0]
    e = a_eq_d.shape[0]
    c = model.obj_lin
    if model.obj_quad is not None and model.obj_quad.nnz > 0:
        p_mat = 2.0 * model.obj_quad.toarray()
        p_mat = 0.5 * (p_mat + p_mat.T)
    else:
        p_mat = None
    lo, hi = model.var_lo, model.var_hi
    il = np.where(lo > -np.inf)[0]
    iu = np.where(hi < np.inf)[0]
    nbl, nbu = il.size, iu.size
    ncomp = k + nbl + nbu

    z = np.zeros(nv)
    both = (lo > -np.inf) & (hi < np.inf)
    z[both] = 0.5 * (lo[both] + hi[both])
    only_lo = (lo > -np.inf) & ~both
    only_hi = (hi < np.inf) & ~both
    z[only_lo] = lo[only_lo] + 1.0
    z[only_hi] = hi[only_hi] - 1.0
    s = np.maximum(1.0, np.abs(a_ub_d @ z - b_ub)) if k else np.zeros(0)
    lam = np.ones(k)
    nu = np.zeros(e)
    zl = np.ones(nbl)
    zu = np.ones(nbu)

    scale_p = 1.0 + max(
        float(np.max(np.abs(b_ub))) if k else 0.0,
        float(np.max(np.abs(b_eq))) if e else 0.0,
        float(np.max(np.abs(lo[il]))) if nbl else 0.0,
        float(np.max(np.abs(hi[iu]))) if nbu else 0.0,
    )
    scale_d = 1.0 + float(np.max(np.abs(c))) if c.size else 1.0

    def grad(zv):
        g = c.copy()
        if p_mat is not None:
            g = g + p_mat @ zv
        return g

    def objective(zv):
        val = float(c @ zv)
        if p_mat is not None:
            val += 0.5 * float(zv @ (p_mat @ zv))
        return val

    def residuals(zv, sv, lamv, nuv, zlv, zuv):
        rd = grad(zv)
        if k:
            rd = rd + a_ub_d.T @ lamv
        if e:
            rd = rd + a_eq_d.T @ nuv
        if nbl:
            rd[il] -= zlv
        if nbu:
            rd[iu] += zuv
        rp = (a_ub_d @ zv + sv - b_ub) if k else np.zeros(0)
        re = (a_eq_d @ zv - b_eq) if e else np.zeros(0)
        return rd, rp, re

    def feas_violation(zv):
        worst = 0.0
        if k:
            worst = max(worst, float(np.max(a_ub_d @ zv - b_ub)))
        if e:
            worst = max(worst, float(np.max(np.abs(a_eq_d @ zv - b_eq))))
        return max(worst, 0.0)

    best = None  # (merit, status-ready tuple)
    mu0 = None
    stall = 0
    no_improve = 0
    iters_done = 0
    for it in range(200):
        iters_done = it + 1
        if not (
            np.isfinite(z).all()
            and np.isfinite(s).all()
            and np.isfinite(lam).all()
            and np.isfinite(nu).all()
            and np.isfinite(zl).all()
            and np.isfinite(zu).all()
        ):
            break
        # Floors keep the scaling ratios finite when a slack underflows.
        gl = np.maximum(z[il] - lo[il], 1e-300)
        gu = np.maximum(hi[iu] - z[iu], 1e-300)
        if k:
            s = np.maximum(s, 1e-300)
            lam = np.maximum(lam, 1e-300)
        zl = np.maximum(zl, 1e-300)
        zu = np.maximum(zu, 1e-300)
        rd, rp, re = residuals(z, s, lam, nu, zl, zu)
        comp = float(s @ lam + gl @ zl + gu @ zu)
        mu = comp / ncomp if ncomp else 0.0
        if mu0 is None:
            mu0 = max(mu, 1.0)
        viol = feas_violation(z)
        dinf = float(np.max(np.abs(rd))) / scale_d if nv else 0.0
        gap_rel = comp / (1.0 + abs(objective(z)))
        merit = max(viol / scale_p, dinf, gap_rel)
        if best is None or merit < 0.9 * best[0]:
            no_improve = 0
        else:
            no_improve += 1
        if best is None or merit < best[0]:
            best = (merit, z.copy(), lam.copy(), nu.copy(), objective(z))
        if viol <= 1e-8 * scale_p and dinf <= 1e-8 and gap_rel <= 1e-8:
            return OPTIMAL, objective(z), z, lam, nu, iters_done
        # Residuals stuck while complementarity keeps shrinking: the Newton
        # system has lost the information needed to make further progress.
        if no_improve >= 12 or (ncomp and mu < 1e-14 * mu0 and merit > 1e-8):
            break

        # Divergence: primal ray means unbounded, dual ray means infeasible.
        znorm = float(np.max(np.abs(z))) if nv else 0.0
        if znorm > 1e9:
            ray = z / znorm
            ok = True
            if k and float(np.max(a_ub_d @ ray)) > 1e-6:
                ok = False
            if e and float(np.max(np.abs(a_eq_d @ ray))) > 1e-6:
                ok = False
            if p_mat is not None and float(np.max(np.abs(p_mat @ ray))) > 1e-6:
                ok = False
            if nbl and float(np.min(ray[il])) < -1e-6:
                ok = False
            if nbu and float(np.max(ray[iu])) > 1e-6:
                ok = False
            if ok and float(c @ ray) < -1e-8:
                return UNBOUNDED, None, None, None, None, iters_done
            raise NumericalFailure("iterates diverged without an unboundedness certificate")
        dual_norm = max(
            float(np.max(np.abs(lam))) if k else 0.0,
            float(np.max(np.abs(nu))) if e else 0.0,
            float(np.max(zl)) if nbl else 0.0,
            float(np.max(zu)) if nbu else 0.0,
        )
        if dual_norm > 1e9 or (mu < 1e-10 * mu0 and viol > 1e-6 * scale_p):
            resid = np.zeros(nv)
            if k:
                resid += a_ub_d.T @ lam
            if e:
                resid += a_eq_d.T @ nu
            if nbl:
                resid[il] -= zl
            if nbu:
                resid[iu] += zu
            support = (
                -(b_ub @ lam if k else 0.0)
                - (b_eq @ nu if e else 0.0)
                + (lo[il] @ zl if nbl else 0.0)
                - (hi[iu] @ zu if nbu else 0.0)
            )
            if float(np.max(np.abs(resid))) <= 1e-6 * dual_norm and support > 1e-8 * dual_norm:
                return INFEASIBLE, None, None, None, None, iters_done
            if dual_norm > 1e9:
                raise NumericalFailure("dual iterates diverged without an infeasibility certificate")

        # Augmented quasi-definite KKT system (better conditioned in the
        # tail than normal equations, whose condition number is squared).
        h_mat = p_mat.copy() if p_mat is not None else np.zeros((nv, nv))
        diag = np.zeros(nv)
        if nbl:
            np.add.at(diag, il, zl / gl)
        if nbu:
            np.add.at(diag, iu, zu / gu)
        h_mat[np.diag_indices(nv)] += diag
        reg = 1e-10 * (1.0 + float(np.trace(h_mat)) / nv)
        dim = nv + k + e
        attempt = 0
        while True:
            kkt = np.zeros((dim, dim))
            kkt[:nv, :nv] = h_mat
            kkt[np.diag_indices(nv)] += reg
            if k:
                kkt[:nv, nv : nv + k] = a_ub_d.T
                kkt[nv : nv + k, :nv] = a_ub_d
                kkt[nv : nv + k, nv : nv + k] = -np.diag(s / lam)
            if e:
                kkt[:nv, nv + k :] = a_eq_d.T
                kkt[nv + k :, :nv] = a_eq_d
                kkt[nv + k :, nv + k :] = -reg * np.eye(e)
            try:
                solve_kkt = _make_lu_solver(kkt)
                break
            except np.linalg.LinAlgError:
                attempt += 1
                if attempt > 4:
                    raise NumericalFailure("KKT factorization failed after regularization boosts")
                reg *= 100.0

        def direction(rc_s, rc_l, rc_u):
            r1 = -rd.copy()
            if nbl:
                r1[il] -= rc_l / gl
            if nbu:
                r1[iu] += rc_u / gu
            r2 = (rc_s / lam - rp) if k else np.zeros(0)
            sol = solve_kkt(np.concatenate([r1, r2, -re]))
            dz = sol[:nv]
            dlam = sol[nv : nv + k]
            dnu = sol[nv + k :]
            ds = (-rp - a_ub_d @ dz) if k else np.zeros(0)
            dgl = dz[il] if nbl else np.zeros(0)
            dgu = -dz[iu] if nbu else np.zeros(0)
            dzl = (-(rc_l + zl * dgl) / gl) if nbl else np.zeros(0)
            dzu = (-(rc_u + zu * dgu) / gu) if nbu else np.zeros(0)
            return dz, dnu, ds, dlam, dgl, dgu, dzl, dzu

        def ratio(vec, dvec):
            neg = dvec < 0
            if not np.any(neg):
                return 1.0
            return min(1.0, float(np.min(-vec[neg] / dvec[neg])))

        # Predictor (affine scaling) step.
        rc_s = s * lam if k else np.zeros(0)
        rc_l = gl * zl if nbl else np.zeros(0)
        rc_u = gu * zu if nbu else np.zeros(0)
        aff = direction(rc_s, rc_l, rc_u)
        dz_a, dnu_a, ds_a, dlam_a, dgl_a, dgu_a, dzl_a, dzu_a = aff
        ap = min(ratio(s, ds_a), ratio(gl, dgl_a), ratio(gu, dgu_a))
        ad = min(ratio(lam, dlam_a), ratio(zl, dzl_a), ratio(zu, dzu_a))
        if ncomp:
            comp_aff = float(
                (s + ap * ds_a) @ (lam + ad * dlam_a)
                + (gl + ap * dgl_a) @ (zl + ad * dzl_a)
                + (gu + ap * dgu_a) @ (zu + ad * dzu_a)
            )
            mu_aff = comp_aff / ncomp
            sigma = (max(mu_aff, 0.0) / mu) ** 3 if mu > 0 else 0.0
            sigma = min(max(sigma, 1e-8), 1.0)
        else:
            sigma = 0.0

        # Corrector with centering.
        rc_s = (s * lam + ds_a * dlam_a - sigma * mu) if k else np.zeros(0)
        rc_l = (gl * zl + dgl_a * dzl_a - sigma * mu) if nbl else np.zeros(0)
        rc_u = (gu * zu + dgu_a * dzu_a - sigma * mu) if nbu else np.zeros(0)
        dz, dnu, ds, dlam, dgl, dgu, dzl, dzu = direction(rc_s, rc_l, rc_u)
        tau = 0.9995
        ap = min(1.0, tau * min(ratio(s, ds), ratio(gl, dgl), ratio(gu, dgu)))
        ad = min(1.0, tau * min(ratio(lam, dlam), ratio(zl, dzl), ratio(zu, dzu)))
        if ncomp == 0:
            ap = ad = 1.0
        z = z + ap * dz
        if k:
            s = s + ap * ds
        lam = lam + ad * dlam
        nu = nu + ad * dnu
        zl = zl + ad * dzl
        zu = zu + ad * dzu
        if max(ap, ad) < 1e-10:
            stall += 1
            if stall >= 3:
                break
        else:
            stall = 0

    # Iteration cap or stall: accept the best iterate at a looser tolerance.
    merit, bz, blam, bnu, bobj = best
    if merit <= 1e-7:
        return OPTIMAL, bobj, bz, blam, bnu, iters_done
    return ITERATION_LIMIT, bobj, bz, blam, bnu, iters_done


def _make_lu_solver(aug: np.ndarray):
    import scipy.linalg as sla

    lu, piv = sla.lu_factor(aug, check_finite=False)
    if not np.all(np.isfinite(lu)):
        raise np.linalg.LinAlgError("LU factor not finite")

    def solve_fn(rhs):
        return sla.lu_solve((lu, piv), rhs, check_finite=False)

    return solve_fn
