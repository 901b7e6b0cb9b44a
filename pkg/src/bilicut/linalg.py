"""Dense symmetric eigendecompositions, SVDs, and interval arithmetic.

Results are deterministically normalized: factors are ordered by decreasing
eigenvalue/singular value, and each left vector is sign-fixed so its first
component of nonnegligible magnitude is nonnegative. For equal values the
tie order produced by the underlying kernel is kept, which is stable for a
fixed input in a fixed environment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFinite, NonSymmetric

SYM_TOL = 1e-12


@dataclass
class EigResult:
    """Eigenvalues in decreasing order; vectors[:, k] belongs to values[k]."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass
class SvdResult:
    """M = U diag(s) V'; singular values decreasing, U/V columns sign-fixed."""

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray


def _check_finite(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} contains non-finite entries")
    return a


def _fix_signs(u: np.ndarray, *coupled: np.ndarray) -> None:
    """Flip columns of u (and coupled arrays) so the first component of each
    column whose magnitude exceeds 1e-12 of the column max is nonnegative."""
    for k in range(u.shape[1]):
        col = u[:, k]
        scale = np.max(np.abs(col))
        if scale == 0.0:
            continue
        idx = np.argmax(np.abs(col) > 1e-12 * scale)
        if col[idx] < 0.0:
            u[:, k] = -col
            for other in coupled:
                other[:, k] = -other[:, k]


def sym_eig(m: np.ndarray) -> EigResult:
    """Spectral decomposition of a symmetric matrix, largest eigenvalue first."""
    m = _check_finite(m, "matrix")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)
    if m.size and float(np.max(np.abs(m - m.T))) > SYM_TOL * scale:
        raise NonSymmetric("matrix is not symmetric to 1e-12")
    w, z = np.linalg.eigh(m)
    order = np.argsort(w, kind="stable")[::-1]
    w = w[order]
    z = z[:, order].copy()
    _fix_signs(z)
    return EigResult(values=w, vectors=z)


def svd(m: np.ndarray) -> SvdResult:
    """Full SVD with decreasing singular values and sign-fixed factor columns."""
    m = _check_finite(m, "matrix")
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {m.shape}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    v = vt.T.copy()
    u = u.copy()
    _fix_signs(u, v)
    return SvdResult(u=u, singular_values=s, v=v)


def interval_dot(c: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[float, float]:
    """Exact range of c'z for z in the box [lo, hi]."""
    c = _check_finite(c, "coefficients")
    lo = _check_finite(lo, "lower bounds")
    hi = _check_finite(hi, "upper bounds")
    if c.shape != lo.shape or c.shape != hi.shape:
        raise DimensionMismatch("coefficient and bound shapes differ")
    pos = np.maximum(c, 0.0)
    neg = np.minimum(c, 0.0)
    lo_val = float(pos @ lo + neg @ hi)
    hi_val = float(pos @ hi + neg @ lo)
    return lo_val, hi_val


def gram(f: np.ndarray) -> np.ndarray:
    """F F', symmetrized; positive semidefinite by construction."""
    f = _check_finite(f, "factor")
    if f.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d factor, got shape {f.shape}")
    g = f @ f.T
    return 0.5 * (g + g.T)
