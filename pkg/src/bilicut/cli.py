"""Experiment harness and command line.

Verbs:
  generate   write instance JSON files (one instance or a whole grid)
  solve      bound a single instance file with one method
  compare    run the full suite, writing results.csv / summary.csv / traces
  verify     run the theorem-level property checks and optional single-cut
             experiment
  plot       turn a results.csv into grouped plot data (optionally SVG)

Exit codes: 0 success, 1 usage or verification failure, 2 numerical failure.
The default base seed comes from --seed, else the BILICUT_SEED environment
variable, else 0.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import cuts as cuts_mod
from .driver import (
    BoundTrace,
    LoopConfig,
    cutting_plane,
    degenerate_denominator,
    gap_closed,
    relative_gap,
    upper_bound,
)
from .errors import BilicutError, MissingColumns, NumericalFailure, RankDeficient
from .instances import BilinearInstance, GenParams, from_json, generate, to_json, validate
from .relaxations import box_rows, build_bmc, build_smc
from .rng import SplitMix64, Xoshiro256StarStar
from .solver import OPTIMAL, solve

DEFAULT_PAIRS = ((20, 4), (20, 8), (20, 16), (20, 20), (100, 4), (100, 20), (100, 40), (100, 80))
DEFAULT_DENSITIES = (0.5, 1.0)
DEFAULT_RANKS = (0.25, 0.5, 0.75, 1.0)
BOUND_METHODS = ("smc", "bmc")
LOOP_METHODS = ("disj", "extdisj", "mixed")

RESULT_COLUMNS = [
    "n", "m", "density", "rank_frac_q", "rank_frac_r", "seed", "method", "status",
    "lb_root", "lb_final", "z_bar", "gap_root_pct", "gap_final_pct",
    "gap_closed_pct", "degenerate", "cuts", "termination",
]


@dataclass
class ExperimentConfig:
    pairs: tuple[tuple[int, int], ...] = DEFAULT_PAIRS
    densities: tuple[float, ...] = DEFAULT_DENSITIES
    ranks: tuple[float, ...] = DEFAULT_RANKS
    methods: tuple[str, ...] = BOUND_METHODS
    base_seed: int = 0
    jobs: int = 1
    compute_upper: bool = True
    upper_starts: int = 32
    loop: LoopConfig = field(default_factory=LoopConfig)


def instance_grid(config: ExperimentConfig) -> list[GenParams]:
    """The suite's instances in deterministic order with derived seeds."""
    stream = SplitMix64(config.base_seed)
    grid = []
    for n, m in config.pairs:
        for density in config.densities:
            for rank in config.ranks:
                grid.append(
                    GenParams(
                        n=n, m=m, density=density,
                        rank_frac_q=rank, rank_frac_r=rank,
                        seed=stream.next_u64(),
                    )
                )
    return grid


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _solve_methods(params: GenParams, methods: tuple[str, ...], loop: LoopConfig,
                   compute_upper: bool, upper_starts: int):
    """Worker: one instance, all requested methods. Returns (rows, timings,
    traces); deterministic fields only in rows."""
    inst = generate(params)
    rows, timings, traces = [], [], []
    z_bar = float("nan")
    if compute_upper:
        ub = upper_bound(inst, starts=upper_starts, seed=params.seed)
        z_bar = ub.value
    meta = {
        "n": params.n, "m": params.m, "density": params.density,
        "rank_frac_q": params.rank_frac_q, "rank_frac_r": params.rank_frac_r,
        "seed": params.seed,
    }
    for method in methods:
        started = time.monotonic()
        row = dict(meta)
        row["method"] = method
        try:
            if method in BOUND_METHODS:
                model, _ = build_smc(inst) if method == "smc" else build_bmc(inst)
                res = solve(model, backend=loop.backend)
                row["status"] = res.status
                lb = res.objective if res.status == OPTIMAL else float("nan")
                row.update(lb_root=lb, lb_final=lb, cuts=0, termination="")
            elif method in LOOP_METHODS:
                trace = cutting_plane(inst, replace(loop, variant=method))
                row["status"] = "optimal" if trace.termination != "solver_failure" else "failed"
                row.update(
                    lb_root=trace.lb_root, lb_final=trace.lb_final,
                    cuts=len(trace.cuts), termination=trace.termination,
                )
                traces.append({**meta, "method": method, "trace": _trace_dict(trace)})
            else:
                raise ValueError(f"unknown method {method!r}")
        except NumericalFailure as exc:
            row.update(status="failed", lb_root=float("nan"), lb_final=float("nan"),
                       cuts=0, termination=f"numerical_failure: {exc}")
        row["z_bar"] = z_bar
        row["gap_root_pct"] = relative_gap(z_bar, row["lb_root"])
        row["gap_final_pct"] = relative_gap(z_bar, row["lb_final"])
        row["gap_closed_pct"] = gap_closed(z_bar, row["lb_root"], row["lb_final"])
        row["degenerate"] = degenerate_denominator(z_bar)
        rows.append(row)
        timings.append({**meta, "method": method, "runtime_s": time.monotonic() - started})
    return rows, timings, traces


def _trace_dict(trace: BoundTrace) -> dict:
    return {
        "variant": trace.variant,
        "lb_root": trace.lb_root,
        "lb_final": trace.lb_final,
        "termination": trace.termination,
        "runtime_s": trace.runtime,
        "rounds": [
            {
                "index": r.index, "lb": r.lb, "cuts_added": r.cuts_added,
                "cumulative_cuts": r.cumulative_cuts, "violations": r.violations,
            }
            for r in trace.rounds
        ],
    }


def run_suite(config: ExperimentConfig, out_dir: str | None = None):
    """Run every (instance, method) combination of the grid.

    Returns the list of result rows. When out_dir is given, writes
    results.csv (deterministic), summary.csv (per-size averages),
    timings.csv (wall clock; not reproducible), and traces.json.
    """
    grid = instance_grid(config)
    tasks = [(p, config.methods, config.loop, config.compute_upper, config.upper_starts) for p in grid]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outputs = list(pool.map(_solve_methods_star, tasks))
    else:
        outputs = [_solve_methods(*t) for t in tasks]
    rows, timings, traces = [], [], []
    for r, t, tr in outputs:
        rows.extend(r)
        timings.extend(t)
        traces.extend(tr)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        _write_csv(os.path.join(out_dir, "results.csv"), RESULT_COLUMNS, rows)
        _write_csv(
            os.path.join(out_dir, "timings.csv"),
            ["n", "m", "density", "rank_frac_q", "rank_frac_r", "seed", "method", "runtime_s"],
            timings,
        )
        _write_summary(os.path.join(out_dir, "summary.csv"), rows)
        with open(os.path.join(out_dir, "traces.json"), "w") as fh:
            json.dump(traces, fh, indent=2)
    return rows


def _solve_methods_star(args):
    return _solve_methods(*args)


def _write_csv(path: str, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(col, "")) for col in columns])


def _write_summary(path: str, rows: list[dict]) -> None:
    """Averages per (n, m, method) over finite values, Table-style."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["n"], row["m"], row["method"]), []).append(row)
    out = []
    for (n, m, method), members in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        def mean(key):
            vals = [r[key] for r in members if np.isfinite(r[key])]
            return float(np.mean(vals)) if vals else float("nan")
        out.append({
            "n": n, "m": m, "method": method, "count": len(members),
            "mean_gap_root_pct": mean("gap_root_pct"),
            "mean_gap_final_pct": mean("gap_final_pct"),
            "mean_gap_closed_pct": mean("gap_closed_pct"),
            "mean_cuts": mean("cuts"),
        })
    _write_csv(path, ["n", "m", "method", "count", "mean_gap_root_pct",
                      "mean_gap_final_pct", "mean_gap_closed_pct", "mean_cuts"], out)


# ---------------------------------------------------------------------------
# Plot data


def emit_plot_data(csv_path: str, out_dir: str, svg: bool = False) -> str:
    """Group a results.csv by size, density, and rank for plotting.

    Writes plot_data.csv with one row per (n, m, density, rank, method)
    carrying mean final gap and mean gap closed; with svg=True also renders
    one bar chart per (n, m) (requires matplotlib).
    """
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        have = reader.fieldnames or []
        missing = [c for c in RESULT_COLUMNS if c not in have]
        if missing:
            raise MissingColumns(f"results CSV lacks column(s): {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise MissingColumns("results CSV has no data rows")
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (int(row["n"]), int(row["m"]), float(row["density"]),
               float(row["rank_frac_q"]), row["method"])
        groups.setdefault(key, []).append(row)
    out = []
    for key in sorted(groups):
        members = groups[key]

        def mean(col):
            vals = [float(r[col]) for r in members if np.isfinite(float(r[col]))]
            return float(np.mean(vals)) if vals else float("nan")

        out.append({
            "n": key[0], "m": key[1], "density": key[2], "rank_frac": key[3],
            "method": key[4], "count": len(members),
            "mean_gap_final_pct": mean("gap_final_pct"),
            "mean_gap_closed_pct": mean("gap_closed_pct"),
        })
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, "plot_data.csv")
    _write_csv(out_path, ["n", "m", "density", "rank_frac", "method", "count",
                          "mean_gap_final_pct", "mean_gap_closed_pct"], out)
    if svg:
        _render_svg(out, out_dir)
    return out_path


def _render_svg(plot_rows: list[dict], out_dir: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    sizes = sorted({(r["n"], r["m"]) for r in plot_rows})
    for n, m in sizes:
        sub = [r for r in plot_rows if r["n"] == n and r["m"] == m]
        methods = sorted({r["method"] for r in sub})
        ranks = sorted({r["rank_frac"] for r in sub})
        fig, ax = plt.subplots(figsize=(7, 4))
        width = 0.8 / max(len(methods), 1)
        for k, method in enumerate(methods):
            xs, ys = [], []
            for i, rank in enumerate(ranks):
                vals = [r["mean_gap_final_pct"] for r in sub
                        if r["method"] == method and r["rank_frac"] == rank]
                xs.append(i + k * width)
                ys.append(float(np.mean(vals)) if vals else 0.0)
            ax.bar(xs, ys, width=width, label=method)
        ax.set_xticks([i + 0.4 - width / 2 for i in range(len(ranks))])
        ax.set_xticklabels([str(r) for r in ranks])
        ax.set_xlabel("rank fraction")
        ax.set_ylabel("mean final gap (%)")
        ax.set_title(f"n={n}, m={m}")
        ax.legend()
        fig.tight_layout()
        fig.savefig(os.path.join(out_dir, f"gaps_n{n}_m{m}.svg"))
        plt.close(fig)


# ---------------------------------------------------------------------------
# Verification routines (theorem-level checks and the single-cut experiment)


def verify_theorems(samples: int = 200, seed: int = 0) -> list[str]:
    """Randomized checks of the two structural results; returns a list of
    failure descriptions (empty when everything holds)."""
    failures = []
    rng = np.random.default_rng(seed)

    # Implication between the symmetric and bilinear inequalities.
    for t in range(samples):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        x = rng.uniform(-1, 1, n)
        y = rng.uniform(-1, 1, m)
        fx = rng.normal(size=(n, n + 1))
        fy = rng.normal(size=(m, m + 1))
        x_mat = np.outer(x, x) + fx @ fx.T * float(rng.uniform(0, 1))
        y_mat = np.outer(y, y) + fy @ fy.T * float(rng.uniform(0, 1))
        u = rng.normal(size=n)
        v = rng.normal(size=m)
        w_mat = rng.uniform(-1, 1, (n, m))
        z_vec = np.concatenate([u, v]) / np.sqrt(2.0)
        h_mat = np.block([[x_mat, w_mat], [w_mat.T, y_mat]])
        h_vec = np.concatenate([x, y])
        sym = float(z_vec @ h_mat @ z_vec) - float(z_vec @ h_vec) ** 2
        if sym > 0:
            # Shift W along u v' until the symmetric inequality holds.
            delta = sym / (float(u @ u) * float(v @ v)) + 1e-9
            w_mat = w_mat - delta * np.outer(u, v)
        check = cuts_mod.verify_symmetric_implies_bilinear(x, y, w_mat, x_mat, y_mat, u, v)
        if not check.holds:
            failures.append(f"implication failed on draw {t}")
        if check.chain > 1e-10:
            failures.append(f"chain term positive on draw {t}")

    # Dominance of the difference-of-squares bound for equal widths.
    for t in range(samples):
        a1 = float(rng.uniform(-2, 2))
        a2 = float(rng.uniform(-2, 2))
        w = float(rng.uniform(0.1, 2))
        g = np.linspace(0, 1, 41)
        p1, p2 = np.meshgrid(a1 + w * g, a2 + w * g)
        pts = np.column_stack([p1.ravel(), p2.ravel()])
        rep = cuts_mod.compare_product_bounds(a1, a1 + w, a2, a2 + w, pts)
        if rep.verdict not in ("secant_dominates", "equivalent"):
            failures.append(f"equal-width dominance failed on draw {t}: {rep}")
    return failures


@dataclass
class SingleCutResult:
    lb_bilinear_root: float
    lb_bilinear_cut: float
    lb_symmetric_root: float
    lb_symmetric_cut: float

    @property
    def bilinear_improvement(self) -> float:
        return self.lb_bilinear_cut - self.lb_bilinear_root

    @property
    def symmetric_improvement(self) -> float:
        return self.lb_symmetric_cut - self.lb_symmetric_root


def single_cut_experiment(inst: BilinearInstance, backend: str = "auto") -> SingleCutResult:
    """Add one disjunctive cut in each lifting and report the bound moves.

    Bilinear side: strongest singular pair of W - x y', secant-flavour
    disjunction, CGLP over the relaxation rows plus the coordinate secant
    rows. Symmetric side: leading eigenvector of H - h h', two-way secant
    disjunction, CGLP over the relaxation rows.
    """
    validate(inst)
    z_bound = cuts_mod.lifted_sup_bound(inst)

    model_b, vm_b = build_bmc(inst)
    res = solve(model_b, backend=backend)
    lb_b0 = res.objective
    lb_b1 = lb_b0
    lifted = vm_b.extract(res.point)
    pairs = cuts_mod.violation_svd(lifted.w, lifted.x, lifted.y)
    if pairs:
        form = cuts_mod.separable_form(pairs[0], inst, vm_b)
        sec1, sec2 = cuts_mod.secant_inequalities(form)
        base = (
            model_b.rows
            + box_rows(vm_b, inst)
            + cuts_mod.unit_vector_rows(inst, vm_b, res.point)
            + [cuts_mod.tangent_linearize(sec1, res.point), cuts_mod.tangent_linearize(sec2, res.point)]
        )
        disj = cuts_mod.disjunction_secant(form, res.point)
        cut = cuts_mod.solve_cglp(base, disj, res.point, vm_b.num_vars, z_bound)
        if cut is not None:
            model_b.rows.append(cut.row)
            res = solve(model_b, backend=backend)
            lb_b1 = res.objective

    model_s, vm_s = build_smc(inst)
    res = solve(model_s, backend=backend)
    lb_s0 = res.objective
    lb_s1 = lb_s0
    lifted = vm_s.extract(res.point)
    lo_h = np.concatenate([inst.ax, inst.ay])
    hi_h = np.concatenate([inst.bx, inst.by])
    try:
        eigvec, _ = cuts_mod.top_eigenpair_violation(lifted.hmat, lifted.h)
    except RankDeficient:
        eigvec = None
    if eigvec is not None:
        disj = cuts_mod.disjunction_symmetric_eig(vm_s, lo_h, hi_h, eigvec, res.point)
        base = model_s.rows + box_rows(vm_s, inst)
        zb = max(1.0, float(np.max(np.abs(np.concatenate([lo_h, hi_h])))) ** 2)
        cut = cuts_mod.solve_cglp(base, disj, res.point, vm_s.num_vars, zb)
        if cut is not None:
            model_s.rows.append(cut.row)
            res = solve(model_s, backend=backend)
            lb_s1 = res.objective

    return SingleCutResult(lb_b0, lb_b1, lb_s0, lb_s1)


# ---------------------------------------------------------------------------
# Command line


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_pairs(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in text.split(","):
        n_str, _, m_str = chunk.strip().partition("x")
        pairs.append((int(n_str), int(m_str)))
    return tuple(pairs)


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(c) for c in text.split(","))


def _parse_config_file(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip().strip('"').strip("'")
    return values


def _base_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("BILICUT_SEED")
    if env is not None:
        return int(env)
    return 0


def _apply_config_file(config: ExperimentConfig, values: dict[str, str]) -> ExperimentConfig:
    loop = config.loop
    for key, val in values.items():
        if key == "solver.backend":
            loop = replace(loop, backend=val)
        elif key == "solver.cglp_backend":
            loop = replace(loop, cglp_backend=val)
        elif key == "loop.variant":
            loop = replace(loop, variant=val)
        elif key == "loop.max_n_cuts":
            loop = replace(loop, max_n_cuts=int(val))
        elif key == "loop.violation_threshold":
            loop = replace(loop, violation_threshold=float(val))
        elif key == "loop.time_limit":
            loop = replace(loop, time_limit=float(val))
        elif key == "suite.pairs":
            config = replace(config, pairs=_parse_pairs(val))
        elif key == "suite.densities":
            config = replace(config, densities=_parse_floats(val))
        elif key == "suite.ranks":
            config = replace(config, ranks=_parse_floats(val))
        elif key == "suite.methods":
            config = replace(config, methods=tuple(v.strip() for v in val.split(",")))
        elif key == "suite.seed":
            config = replace(config, base_seed=int(val))
        elif key == "suite.jobs":
            config = replace(config, jobs=int(val))
        elif key == "suite.upper":
            config = replace(config, compute_upper=val.lower() in ("1", "true", "yes"))
        else:
            raise ValueError(f"unknown config key {key!r}")
    return replace(config, loop=loop)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bilicut", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="verb", required=True)

    gen = sub.add_parser("generate", help="write instance JSON")
    gen.add_argument("-o", "--out", required=True, help="output file (single) or directory (grid)")
    gen.add_argument("--n", type=int, help="rows of A (single instance)")
    gen.add_argument("--m", type=int, help="columns of A (single instance)")
    gen.add_argument("--density", type=float, default=1.0)
    gen.add_argument("--rank-q", type=float, default=1.0)
    gen.add_argument("--rank-r", type=float, default=1.0)
    gen.add_argument("--pairs", type=_parse_pairs, default=DEFAULT_PAIRS,
                     help="grid sizes, e.g. 20x4,20x8")
    gen.add_argument("--densities", type=_parse_floats, default=DEFAULT_DENSITIES)
    gen.add_argument("--ranks", type=_parse_floats, default=DEFAULT_RANKS)
    gen.add_argument("--seed", type=int, default=None)

    sol = sub.add_parser("solve", help="bound one instance")
    sol.add_argument("instance", help="instance JSON file")
    sol.add_argument("--method", default="bmc", choices=BOUND_METHODS + LOOP_METHODS)
    sol.add_argument("--backend", default="auto")
    sol.add_argument("--max-cuts", type=int, default=40)
    sol.add_argument("--time-limit", type=float, default=None)
    sol.add_argument("--no-upper", action="store_true", help="skip the multistart upper bound")
    sol.add_argument("--seed", type=int, default=None)

    cmp_p = sub.add_parser("compare", help="run the experiment suite")
    cmp_p.add_argument("-o", "--out", required=True, help="output directory")
    cmp_p.add_argument("--config", help="key = value config file")
    cmp_p.add_argument("--pairs", type=_parse_pairs, default=None)
    cmp_p.add_argument("--densities", type=_parse_floats, default=None)
    cmp_p.add_argument("--ranks", type=_parse_floats, default=None)
    cmp_p.add_argument("--methods", default=None, help="comma list from smc,bmc,disj,extdisj,mixed")
    cmp_p.add_argument("--jobs", type=int, default=None)
    cmp_p.add_argument("--no-upper", action="store_true")
    cmp_p.add_argument("--seed", type=int, default=None)

    ver = sub.add_parser("verify", help="theorem-level checks")
    ver.add_argument("--samples", type=int, default=200)
    ver.add_argument("--single-cut", action="store_true",
                     help="also run the one-cut bilinear vs symmetric experiment")
    ver.add_argument("--seed", type=int, default=None)

    plo = sub.add_parser("plot", help="derive plot data from results.csv")
    plo.add_argument("results", help="results.csv from compare")
    plo.add_argument("-o", "--out", required=True, help="output directory")
    plo.add_argument("--svg", action="store_true", help="also render SVG charts")
    return parser


def _cmd_generate(args) -> int:
    seed = _base_seed(args)
    if (args.n is None) != (args.m is None):
        print("generate: --n and --m must be given together", file=sys.stderr)
        return 1
    if args.n is not None:
        inst = generate(GenParams(n=args.n, m=args.m, density=args.density,
                                  rank_frac_q=args.rank_q, rank_frac_r=args.rank_r, seed=seed))
        with open(args.out, "w") as fh:
            fh.write(to_json(inst))
        print(f"wrote {args.out}")
        return 0
    config = ExperimentConfig(pairs=args.pairs, densities=args.densities,
                              ranks=args.ranks, base_seed=seed)
    os.makedirs(args.out, exist_ok=True)
    for params in instance_grid(config):
        inst = generate(params)
        name = (f"inst_n{params.n}_m{params.m}_d{params.density}"
                f"_rq{params.rank_frac_q}_rr{params.rank_frac_r}.json")
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(to_json(inst))
    print(f"wrote {len(instance_grid(config))} instances to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    with open(args.instance) as fh:
        inst = from_json(fh.read())
    seed = _base_seed(args)
    out: dict = {"method": args.method}
    loop = LoopConfig(variant=args.method if args.method in LOOP_METHODS else "disj",
                      max_n_cuts=args.max_cuts, time_limit=args.time_limit,
                      backend=args.backend)
    if args.method in BOUND_METHODS:
        model, _ = build_smc(inst) if args.method == "smc" else build_bmc(inst)
        res = solve(model, backend=args.backend)
        if res.status != OPTIMAL:
            print(json.dumps({"status": res.status}), file=sys.stderr)
            return 2
        out.update(status=res.status, lb=res.objective)
        lb_root = lb_final = res.objective
    else:
        trace = cutting_plane(inst, loop)
        if trace.termination == "solver_failure":
            print(json.dumps({"status": "solver_failure"}), file=sys.stderr)
            return 2
        out.update(status="optimal", lb=trace.lb_final,
                   lb_root=trace.lb_root, cuts=len(trace.cuts),
                   termination=trace.termination)
        lb_root, lb_final = trace.lb_root, trace.lb_final
    if not args.no_upper:
        ub = upper_bound(inst, seed=seed)
        out.update(z_bar=ub.value,
                   gap_pct=relative_gap(ub.value, lb_final),
                   gap_closed_pct=gap_closed(ub.value, lb_root, lb_final),
                   degenerate=degenerate_denominator(ub.value))
    print(json.dumps(out, indent=2))
    return 0


def _cmd_compare(args) -> int:
    config = ExperimentConfig(base_seed=_base_seed(args))
    if args.config:
        config = _apply_config_file(config, _parse_config_file(args.config))
    if args.pairs is not None:
        config = replace(config, pairs=args.pairs)
    if args.densities is not None:
        config = replace(config, densities=args.densities)
    if args.ranks is not None:
        config = replace(config, ranks=args.ranks)
    if args.methods is not None:
        config = replace(config, methods=tuple(m.strip() for m in args.methods.split(",")))
    if args.jobs is not None:
        config = replace(config, jobs=args.jobs)
    if args.no_upper:
        config = replace(config, compute_upper=False)
    rows = run_suite(config, out_dir=args.out)
    failures = [r for r in rows if r["status"] == "failed"]
    print(f"{len(rows)} runs -> {args.out} ({len(failures)} failed)")
    return 2 if failures else 0


def _cmd_verify(args) -> int:
    failures = verify_theorems(samples=args.samples, seed=_base_seed(args))
    for failure in failures:
        print(f"FAIL {failure}")
    if not failures:
        print(f"theorem checks passed ({args.samples} draws each)")
    if args.single_cut:
        stream = Xoshiro256StarStar(_base_seed(args) ^ 0xC5)
        for k in range(4):
            inst = generate(GenParams(n=20, m=4, density=1.0, seed=stream.next_u64()))
            inst.Q[:] = 0.0
            inst.R[:] = 0.0
            validate(inst)
            result = single_cut_experiment(inst)
            print(
                f"single-cut {k}: bilinear {result.lb_bilinear_root:+.6f} -> "
                f"{result.lb_bilinear_cut:+.6f} (moved {result.bilinear_improvement:+.2e}), "
                f"symmetric {result.lb_symmetric_root:+.6f} -> "
                f"{result.lb_symmetric_cut:+.6f} (moved {result.symmetric_improvement:+.2e})"
            )
    return 1 if failures else 0


def _cmd_plot(args) -> int:
    out_path = emit_plot_data(args.results, args.out, svg=args.svg)
    print(f"wrote {out_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "generate":
            return _cmd_generate(args)
        if args.verb == "solve":
            return _cmd_solve(args)
        if args.verb == "compare":
            return _cmd_compare(args)
        if args.verb == "verify":
            return _cmd_verify(args)
        if args.verb == "plot":
            return _cmd_plot(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (BilicutError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
