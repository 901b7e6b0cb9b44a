"""Cutting-plane driver and gap accounting.

One round: solve the bilinear relaxation, decompose the violation matrix
W - x y', take the strongest singular pairs (at most four), build one
four-way disjunction per pair, solve a CGLP per disjunction, add the
violated cuts, re-solve. Stops at the cut budget, when no CGLP produces a
violated cut, on the optional time limit, or on solver failure (recorded in
the trace rather than raised).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import cuts as cuts_mod
from .errors import CglpNumericalFailure, DegenerateInterval, NumericalFailure
from .instances import BilinearInstance, true_objective, validate
from .relaxations import VariableMap, box_rows, build_bmc
from .rng import Xoshiro256StarStar
from .solver import OPTIMAL, QuadraticModel, solve

VARIANTS = ("disj", "extdisj", "mixed")

NO_VIOLATED_CUT = "no_violated_cut"
CUT_LIMIT = "cut_limit"
TIME_LIMIT = "time_limit"
SOLVER_FAILURE = "solver_failure"


@dataclass
class LoopConfig:
    variant: str = "disj"
    max_n_cuts: int = 40
    max_pairs_per_round: int = 4
    violation_threshold: float = 1e-6
    time_limit: float | None = None
    backend: str = "auto"
    cglp_backend: str = "auto"


@dataclass
class RoundRecord:
    index: int
    lb: float
    cuts_added: int
    cumulative_cuts: int
    violations: list[float] = field(default_factory=list)


@dataclass
class BoundTrace:
    variant: str
    lb_root: float
    lb_final: float
    termination: str
    rounds: list[RoundRecord] = field(default_factory=list)
    cuts: list[cuts_mod.Cut] = field(default_factory=list)
    runtime: float = 0.0


def _pick_cglp_backend(config: LoopConfig, base_rows_count: int) -> str:
    if config.cglp_backend != "auto":
        return config.cglp_backend
    # Four disjunct systems share the base rows; above ~5000 multipliers the
    # HiGHS interior-point method beats its simplex on these CGLPs.
    return "highs-ipm" if 4 * base_rows_count > 5000 else "highs"


def _variant_extra_rows(
    variant: str,
    inst: BilinearInstance,
    vm: VariableMap,
    point: np.ndarray,
    pairs: list[cuts_mod.SingularPair],
):
    rows = []
    if variant in ("disj", "mixed"):
        rows.extend(cuts_mod.unit_vector_rows(inst, vm, point))
        for pair in pairs:
            form = cuts_mod.separable_form(pair, inst, vm)
            sec1, sec2 = cuts_mod.secant_inequalities(form)
            rows.append(cuts_mod.tangent_linearize(sec1, point))
            rows.append(cuts_mod.tangent_linearize(sec2, point))
    if variant in ("extdisj", "mixed"):
        for pair in pairs:
            form = cuts_mod.product_form(pair, inst, vm)
            rows.extend(cuts_mod.extended_mccormick_rows(form))
    return rows


def _pair_disjunctions(
    variant: str,
    inst: BilinearInstance,
    vm: VariableMap,
    point: np.ndarray,
    pair: cuts_mod.SingularPair,
) -> list[cuts_mod.Disjunction]:
    out = []
    if variant in ("disj", "mixed"):
        form = cuts_mod.separable_form(pair, inst, vm)
        out.append(cuts_mod.disjunction_secant(form, point))
    if variant in ("extdisj", "mixed"):
        form = cuts_mod.product_form(pair, inst, vm)
        out.append(cuts_mod.disjunction_mccormick(form, point))
    return out


def cutting_plane(inst: BilinearInstance, config: LoopConfig | None = None) -> BoundTrace:
    """Run the cutting-plane loop on the bilinear relaxation of inst."""
    config = config or LoopConfig()
    if config.variant not in VARIANTS:
        raise ValueError(f"unknown variant {config.variant!r}; choose from {VARIANTS}")
    started = time.monotonic()
    model, vm = build_bmc(inst)
    z_bound = cuts_mod.lifted_sup_bound(inst)
    boxes = box_rows(vm, inst)

    def out_of_time() -> bool:
        return config.time_limit is not None and time.monotonic() - started > config.time_limit

    def finish(trace: BoundTrace) -> BoundTrace:
        trace.runtime = time.monotonic() - started
        return trace

    try:
        res = solve(model, backend=config.backend)
    except NumericalFailure:
        return finish(BoundTrace("", float("nan"), float("nan"), SOLVER_FAILURE))
    if res.status != OPTIMAL:
        return finish(BoundTrace(config.variant, float("nan"), float("nan"), SOLVER_FAILURE))
    lb_root = res.objective
    trace = BoundTrace(config.variant, lb_root, lb_root, NO_VIOLATED_CUT)
    point = res.point
    cuts_total = 0

    while cuts_total < config.max_n_cuts:
        if out_of_time():
            trace.termination = TIME_LIMIT
            return finish(trace)
        lifted = vm.extract(point)
        pairs = cuts_mod.violation_svd(lifted.w, lifted.x, lifted.y)
        if not pairs:
            trace.termination = NO_VIOLATED_CUT
            return finish(trace)
        budget = config.max_n_cuts - cuts_total
        pairs = pairs[: min(config.max_pairs_per_round, budget)]
        base = model.rows + boxes + _variant_extra_rows(config.variant, inst, vm, point, pairs)
        backend = _pick_cglp_backend(config, len(base))
        accepted: list[cuts_mod.Cut] = []
        try:
            for pair in pairs:
                if out_of_time():
                    trace.termination = TIME_LIMIT
                    return finish(trace)
                best: cuts_mod.Cut | None = None
                try:
                    disjunctions = _pair_disjunctions(config.variant, inst, vm, point, pair)
                except DegenerateInterval:
                    continue
                for disj in disjunctions:
                    cut = cuts_mod.solve_cglp(
                        base,
                        disj,
                        point,
                        vm.num_vars,
                        z_bound,
                        backend=backend,
                        threshold=config.violation_threshold,
                    )
                    if cut is not None and (best is None or cut.violation > best.violation):
                        best = cut
                if best is not None:
                    accepted.append(best)
        except (CglpNumericalFailure, NumericalFailure):
            trace.termination = SOLVER_FAILURE
            return finish(trace)
        if not accepted:
            trace.termination = NO_VIOLATED_CUT
            return finish(trace)
        model.rows.extend(c.row for c in accepted)
        trace.cuts.extend(accepted)
        cuts_total += len(accepted)
        try:
            res = solve(model, backend=config.backend)
        except NumericalFailure:
            trace.termination = SOLVER_FAILURE
            return finish(trace)
        if res.status != OPTIMAL:
            trace.termination = SOLVER_FAILURE
            return finish(trace)
        point = res.point
        trace.lb_final = res.objective
        trace.rounds.append(
            RoundRecord(
                index=len(trace.rounds),
                lb=res.objective,
                cuts_added=len(accepted),
                cumulative_cuts=cuts_total,
                violations=[c.violation for c in accepted],
            )
        )
    trace.termination = CUT_LIMIT
    return finish(trace)


# ---------------------------------------------------------------------------
# Upper bounds by alternating box-QP descent


@dataclass
class UpperBound:
    value: float
    x: np.ndarray
    y: np.ndarray


def _partial_min(q_mat: np.ndarray, lin: np.ndarray, lo: np.ndarray, hi: np.ndarray, backend: str) -> np.ndarray:
    """argmin over the box of  v' q_mat v + lin' v  (q_mat PSD)."""
    if not np.any(q_mat):
        out = np.where(lin > 0.0, lo, hi)
        out[lin == 0.0] = lo[lin == 0.0]
        return out
    model = QuadraticModel(
        num_vars=lin.size,
        obj_lin=lin,
        obj_quad=sp.csr_matrix(q_mat),
        var_lo=lo,
        var_hi=hi,
    )
    res = solve(model, backend=backend)
    if res.status != OPTIMAL or res.point is None:
        raise NumericalFailure(f"box QP ended with status {res.status}")
    return np.clip(res.point, lo, hi)


def upper_bound(
    inst: BilinearInstance, starts: int = 32, seed: int = 0, backend: str = "auto"
) -> UpperBound:
    """Best point from multistart alternating minimization.

    Start 1 is the box center; the rest are uniform box draws from the
    package stream seeded with `seed`. Each start alternates exact partial
    minimizations in x (given y) and y (given x) until the objective
    improves by less than 1e-8 relative, then the best point over all
    starts is returned.
    """
    if inst.convex is None:
        validate(inst)
    stream = Xoshiro256StarStar(seed)
    best: UpperBound | None = None
    for start in range(starts):
        if start == 0:
            x = 0.5 * (inst.ax + inst.bx)
            y = 0.5 * (inst.ay + inst.by)
        else:
            x = np.array([inst.ax[i] + (inst.bx[i] - inst.ax[i]) * stream.next_float() for i in range(inst.n)])
            y = np.array([inst.ay[j] + (inst.by[j] - inst.ay[j]) * stream.next_float() for j in range(inst.m)])
        value = true_objective(inst, x, y)
        for _ in range(100):
            x = _partial_min(inst.Q, inst.A @ y, inst.ax, inst.bx, backend)
            y = _partial_min(inst.R, inst.A.T @ x, inst.ay, inst.by, backend)
            new_value = true_objective(inst, x, y)
            if abs(value - new_value) <= 1e-8 * max(1.0, abs(new_value)):
                value = new_value
                break
            value = new_value
        if best is None or value < best.value:
            best = UpperBound(value=value, x=x.copy(), y=y.copy())
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Gap accounting


def degenerate_denominator(z_bar: float) -> bool:
    """True when |z_bar| is too small for a meaningful relative gap."""
    return abs(z_bar) < 1e-8


def relative_gap(z_bar: float, lb: float) -> float:
    """(z_bar - lb) / max(|z_bar|, 1e-8), in percent."""
    return (z_bar - lb) / max(abs(z_bar), 1e-8) * 100.0


def gap_closed(z_bar: float, lb_root: float, lb_final: float) -> float:
    """(lb_final - lb_root) / (z_bar - lb_root), in percent, clamped to
    [0, 100]; a zero root gap counts as fully closed."""
    denom = z_bar - lb_root
    if denom <= 1e-9:
        return 100.0
    return float(np.clip((lb_final - lb_root) / denom * 100.0, 0.0, 100.0))


@dataclass
class GapReport:
    z_bar: float
    lb_root: float
    lb_final: float
    gap_root_pct: float
    gap_final_pct: float
    gap_closed_pct: float
    degenerate: bool


def gap_report(z_bar: float, trace: BoundTrace) -> GapReport:
    return GapReport(
        z_bar=z_bar,
        lb_root=trace.lb_root,
        lb_final=trace.lb_final,
        gap_root_pct=relative_gap(z_bar, trace.lb_root),
        gap_final_pct=relative_gap(z_bar, trace.lb_final),
        gap_closed_pct=gap_closed(z_bar, trace.lb_root, trace.lb_final),
        degenerate=degenerate_denominator(z_bar),
    )
