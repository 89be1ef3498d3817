"""Comparison methods: per-mediator Baron-Kenny with Sobel/BH, and two-stage lasso."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np
from scipy import stats

from .admm import PathResult, SolverOptions, fit_path
from .core import PenaltySpec, StandardizedDataset


@dataclass(frozen=True)
class BkPathwayResult:
    mediator: str
    a_hat: float
    se_a: float
    b_hat: float
    se_b: float
    c_hat: float
    ab_hat: float
    z_stat: float
    p_value: float
    selected: bool = False
    degenerate: bool = False


def _ols_with_se(x: np.ndarray, y: np.ndarray):
    """Coefficients and homoskedastic standard errors; None if rank deficient."""
    n, p = x.shape
    coef, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    if rank < p or n <= p:
        return None
    resid = y - x @ coef
    sigma2 = resid @ resid / (n - p)
    cov = sigma2 * np.linalg.inv(x.T @ x)
    return coef, np.sqrt(np.maximum(np.diag(cov), 0.0))


def sobel_test(a: float, se_a: float, b: float, se_b: float):
    """Delta-method z statistic and two-sided normal p-value for ``a*b``.

    With a zero standard error the p-value is 0 for a nonzero product and 1
    for a zero product.
    """
    if se_a < 0 or se_b < 0:
        raise ValueError("standard errors must be nonnegative")
    ab = a * b
    se_ab = np.sqrt(a * a * se_b * se_b + b * b * se_a * se_a)
    if se_ab == 0:
        if ab == 0:
            return 0.0, 1.0
        return float(np.sign(ab) * np.inf), 0.0
    z = ab / se_ab
    return float(z), float(2.0 * stats.norm.sf(abs(z)))


def bh_select(pvalues: Sequence[float], q: float = 0.05) -> np.ndarray:
    """Benjamini-Hochberg step-up selection at FDR level ``q``."""
    p = np.asarray(pvalues, dtype=float)
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    if np.any((p < 0) | (p > 1)):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    out = np.zeros(m, dtype=bool)
    if m == 0:
        return out
    order = np.argsort(p, kind="stable")
    below = p[order] <= q * np.arange(1, m + 1) / m
    if below.any():
        kmax = np.max(np.flatnonzero(below))
        out[order[: kmax + 1]] = True
    return out


def bk_fit(data, q: float = 0.05, intercept: Optional[bool] = None) -> List[BkPathwayResult]:
    """Baron-Kenny analysis of each mediator on its own.

    For mediator j: OLS of M_j on Z gives ``a``; OLS of R on (Z, M_j) gives
    ``b`` and the direct effect.  Intercepts are dropped on standardized data
    and included otherwise.  A rank-deficient (Z, M_j) marks the mediator
    degenerate with p = 1.
    """
    if intercept is None:
        intercept = not isinstance(data, StandardizedDataset)
    z, m, r = data.z, data.m, data.r
    n = z.shape[0]
    if n < 4:
        raise ValueError("Baron-Kenny needs at least 4 observations")
    ones = [np.ones(n)] if intercept else []
    off = 1 if intercept else 0
    xa = np.column_stack(ones + [z])
    out = []
    for j in range(m.shape[1]):
        name = data.column_names[j]
        fa = _ols_with_se(xa, m[:, j])
        fb = _ols_with_se(np.column_stack(ones + [z, m[:, j]]), r)
        if fa is None or fb is None:
            out.append(BkPathwayResult(name, np.nan, np.nan, np.nan, np.nan,
                                       np.nan, np.nan, 0.0, 1.0, degenerate=True))
            continue
        (ca, sa), (cb, sb) = fa, fb
        a, se_a = ca[off], sa[off]
        b, se_b = cb[off + 1], sb[off + 1]
        zs, p = sobel_test(a, se_a, b, se_b)
        out.append(BkPathwayResult(name, float(a), float(se_a), float(b), float(se_b),
                                   float(cb[off]), float(a * b), zs, p))
    sel = bh_select([res.p_value for res in out], q)
    return [replace(res, selected=bool(s)) for res, s in zip(out, sel)]


def tslasso_path(data, omega_grid: Sequence[float],
                 opts: Optional[SolverOptions] = None, phi: float = 2.0,
                 w1=1.0, w2: float = 1.0, cutoff: float = 1e-3) -> PathResult:
    """Two-stage lasso: the pathway criterion with ``lam = 0`` along an omega grid."""
    omegas = np.asarray(omega_grid, dtype=float)
    if np.any(omegas <= 0):
        raise ValueError("omega grid must be positive")
    if np.any(np.diff(omegas) > 0):
        raise ValueError("omega grid must be decreasing")
    specs = [PenaltySpec(lam=0.0, phi=phi, omega=float(om), w1=w1, w2=w2)
             for om in omegas]
    return fit_path(data, specs, opts, method="TSLasso", cutoff=cutoff)
