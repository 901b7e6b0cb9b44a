"""Problem data for box-constrained bilinear-plus-quadratic minimization.

An instance is

    minimize  x'Ay + x'Qx + y'Ry   over  ax <= x <= bx,  ay <= y <= by,

with Q (n x n) and R (m x m) symmetric. Generation is reproducible from a
single seed: one xoshiro256** stream per instance, draws consumed in a fixed
order (A nonzero positions, A values, Q factor row-major, R factor row-major).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetricQ,
    BadDensity,
    BadRank,
    BoxInverted,
    DimensionMismatch,
    NonFinite,
    ParseError,
)
from .linalg import gram
from .rng import Xoshiro256StarStar

CONVEXITY_TOL = 1e-8


@dataclass
class BilinearInstance:
    """Dense instance data; `convex` is filled in by validate()."""

    n: int
    m: int
    A: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    ax: np.ndarray
    bx: np.ndarray
    ay: np.ndarray
    by: np.ndarray
    convex: bool | None = field(default=None, compare=False)


@dataclass
class GenParams:
    """Generator controls; rank fractions apply to Q (over n) and R (over m)."""

    n: int
    m: int
    density: float = 1.0
    rank_frac_q: float = 1.0
    rank_frac_r: float = 1.0
    seed: int = 0


def _check_matrix(a: np.ndarray, shape: tuple[int, int], name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != shape:
        raise DimensionMismatch(f"{name} has shape {a.shape}, expected {shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} contains non-finite entries")
    return a


def validate(inst: BilinearInstance) -> BilinearInstance:
    """Check shapes, finiteness, box ordering, and symmetry of Q and R.

    Sets inst.convex: True when the smallest eigenvalues of Q and R are both
    above -1e-8, else False. Returns the same instance.
    """
    n, m = inst.n, inst.m
    if n < 1 or m < 1:
        raise DimensionMismatch(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    inst.A = _check_matrix(inst.A, (n, m), "A")
    inst.Q = _check_matrix(inst.Q, (n, n), "Q")
    inst.R = _check_matrix(inst.R, (m, m), "R")
    inst.ax = _check_matrix(inst.ax, (n,), "ax")  # type: ignore[arg-type]
    inst.bx = _check_matrix(inst.bx, (n,), "bx")  # type: ignore[arg-type]
    inst.ay = _check_matrix(inst.ay, (m,), "ay")  # type: ignore[arg-type]
    inst.by = _check_matrix(inst.by, (m,), "by")  # type: ignore[arg-type]
    if np.any(inst.ax > inst.bx) or np.any(inst.ay > inst.by):
        raise BoxInverted("a box lower bound exceeds its upper bound")
    for name, mat in (("Q", inst.Q), ("R", inst.R)):
        scale = max(1.0, float(np.max(np.abs(mat))))
        if float(np.max(np.abs(mat - mat.T))) > 1e-12 * scale:
            raise AsymmetricQ(f"{name} is not symmetric")
    min_eig = min(
        float(np.linalg.eigvalsh(inst.Q)[0]) if n else 0.0,
        float(np.linalg.eigvalsh(inst.R)[0]) if m else 0.0,
    )
    inst.convex = bool(min_eig >= -CONVEXITY_TOL)
    return inst


def _check_matrix_1d(a, length: int, name: str) -> np.ndarray:
    return _check_matrix(a, (length,), name)  # type: ignore[arg-type]


def generate(params: GenParams) -> BilinearInstance:
    """Draw a validated instance. All boxes are [-1, 1]; Q and R are Gram
    matrices F F' with ceil(frac * dim) factor columns, so convex is True."""
    n, m = params.n, params.m
    if n < 1 or m < 1:
        raise DimensionMismatch(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    if not (0.0 < params.density <= 1.0):
        raise BadDensity(f"density must be in (0, 1], got {params.density}")
    for frac in (params.rank_frac_q, params.rank_frac_r):
        if not (0.0 < frac <= 1.0):
            raise BadRank(f"rank fraction must be in (0, 1], got {frac}")

    stream = Xoshiro256StarStar(params.seed)
    total = n * m
    k = math.ceil(params.density * total)

    # Nonzero positions: partial Fisher-Yates prefix of a row-major index
    # permutation, then sorted so values are assigned in row-major order.
    idx = list(range(total))
    for t in range(k):
        j = t + stream.randbelow(total - t)
        idx[t], idx[j] = idx[j], idx[t]
    positions = sorted(idx[:k])

    a_mat = np.zeros((n, m))
    for pos in positions:
        a_mat[pos // m, pos % m] = stream.uniform_pm1()

    rq = math.ceil(params.rank_frac_q * n)
    rr = math.ceil(params.rank_frac_r * m)
    fq = np.array([[stream.uniform_pm1() for _ in range(rq)] for _ in range(n)])
    fr = np.array([[stream.uniform_pm1() for _ in range(rr)] for _ in range(m)])

    inst = BilinearInstance(
        n=n,
        m=m,
        A=a_mat,
        Q=gram(fq),
        R=gram(fr),
        ax=-np.ones(n),
        bx=np.ones(n),
        ay=-np.ones(m),
        by=np.ones(m),
    )
    return validate(inst)


_JSON_FIELDS = ("n", "m", "A", "Q", "R", "ax", "bx", "ay", "by")


def to_json(inst: BilinearInstance) -> str:
    """Serialize to the interchange schema (matrices as nested row lists)."""
    payload = {
        "n": inst.n,
        "m": inst.m,
        "A": inst.A.tolist(),
        "Q": inst.Q.tolist(),
        "R": inst.R.tolist(),
        "ax": inst.ax.tolist(),
        "bx": inst.bx.tolist(),
        "ay": inst.ay.tolist(),
        "by": inst.by.tolist(),
    }
    return json.dumps(payload, indent=2)


def from_json(text: str) -> BilinearInstance:
    """Parse and validate. Structural problems raise ParseError naming the
    offending field; domain problems raise their specific validation error."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise ParseError("top-level JSON value must be an object")
    missing = [name for name in _JSON_FIELDS if name not in payload]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")
    for name in ("n", "m"):
        if not isinstance(payload[name], int) or isinstance(payload[name], bool):
            raise ParseError(f"field '{name}' must be an integer")
    n, m = payload["n"], payload["m"]

    def to_array(name: str) -> np.ndarray:
        try:
            arr = np.asarray(payload[name], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"field '{name}' is not numeric: {exc}") from exc
        return arr

    inst = BilinearInstance(
        n=n,
        m=m,
        A=to_array("A"),
        Q=to_array("Q"),
        R=to_array("R"),
        ax=to_array("ax"),
        bx=to_array("bx"),
        ay=to_array("ay"),
        by=to_array("by"),
    )
    try:
        return validate(inst)
    except DimensionMismatch as exc:
        raise ParseError(str(exc)) from exc


def true_objective(inst: BilinearInstance, x: np.ndarray, y: np.ndarray) -> float:
    """x'Ay + x'Qx + y'Ry."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(x @ inst.A @ y + x @ inst.Q @ x + y @ inst.R @ y)
