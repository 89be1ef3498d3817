"""Post-selection refit, bootstrap intervals and proportion mediated."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional

import numpy as np

from .core import PathwayCoefficients, StandardizedDataset, ols

BOOTSTRAP_STREAM = 3_000_003


@dataclass(frozen=True)
class RefitRow:
    pathway: str
    index: int
    ab_refit: float
    ci_low: float
    ci_high: float
    significant: bool
    proportion_mediated: float
    covers_estimate: bool = True


@dataclass
class RefitReport:
    rows: List[RefitRow]
    total_effect: float
    resamples: int
    level: float
    coefs: PathwayCoefficients
    degenerate_draws: int = 0
    seed: int = 0
    ab_samples: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def selected(self) -> List[int]:
        return [row.index for row in self.rows]


def _selection(selected: Iterable[int], k: int) -> List[int]:
    sel = sorted({int(j) for j in selected})
    if sel and (sel[0] < 0 or sel[-1] >= k):
        raise ValueError(f"selected indices must lie in 0..{k - 1}")
    return sel


def _intercept(data, intercept):
    return not isinstance(data, StandardizedDataset) if intercept is None else intercept


def refit_selected(data, selected: Iterable[int],
                   intercept: Optional[bool] = None) -> PathwayCoefficients:
    """Unpenalized refit restricted to the selected pathways.

    ``a_j`` comes from OLS of M_j on Z and ``(C, b_S)`` from OLS of R on
    ``(Z, M_S)``; every other coefficient is 0.  Intercepts are fitted (and
    discarded) unless the data are standardized.
    """
    k, n = data.k, data.n
    sel = _selection(selected, k)
    if len(sel) > n - 2:
        raise ValueError(f"too many selected pathways ({len(sel)}) for n = {n}")
    use_int = _intercept(data, intercept)
    ones = [np.ones(n)] if use_int else []
    off = len(ones)
    a = np.zeros(k)
    b = np.zeros(k)
    if not sel:
        return PathwayCoefficients(a, b, _slope(data.z, data.r, use_int))
    xz = np.column_stack(ones + [data.z])
    coef_m = ols(xz, data.m[:, sel])
    a[sel] = coef_m[off]
    coef_r = ols(np.column_stack(ones + [data.z, data.m[:, sel]]), data.r)
    b[sel] = coef_r[off + 1:]
    return PathwayCoefficients(a, b, float(coef_r[off]))


def _slope(z, r, use_int):
    if np.ptp(z) == 0:
        raise ValueError("constant column: Z")
    if use_int:
        z = z - z.mean()
        r = r - r.mean()
    return float(z @ r / (z @ z))


def proportion_mediated(ab, total: float):
    """Pathway effect as a signed fraction of the total effect."""
    if total == 0:
        raise ValueError("total effect is zero; proportion mediated undefined")
    return np.asarray(ab, dtype=float) / total if np.ndim(ab) else float(ab) / total


def bootstrap_ci(data, selected: Iterable[int], resamples: int = 500, level: float = 0.95,
                 seed: int = 0, intercept: Optional[bool] = None,
                 max_degenerate: float = 0.2) -> RefitReport:
    """Case-resampling percentile intervals for the refitted pathway effects.

    Rows are drawn with replacement from ``SeedSequence(seed)``'s bootstrap
    stream.  A resample whose refit is not identifiable is redrawn; more than
    ``max_degenerate * resamples`` such redraws is an error.
    """
    if resamples < 1:
        raise ValueError("resamples must be positive")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    sel = _selection(selected, data.k)
    use_int = _intercept(data, intercept)
    coefs = refit_selected(data, sel, intercept=use_int)
    total = _slope(data.z, data.r, use_int)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(BOOTSTRAP_STREAM,)))
    draws = np.empty((resamples, len(sel)))
    bad = 0
    limit = max_degenerate * resamples
    i = 0
    while sel and i < resamples:
        rows = rng.integers(0, data.n, size=data.n)
        try:
            c = refit_selected(data.subset(rows), sel, intercept=use_int)
        except (np.linalg.LinAlgError, ValueError):
            bad += 1
            if bad > limit:
                raise ValueError(f"{bad} degenerate bootstrap resamples exceed "
                                   f"{max_degenerate:.0%} of {resamples}")
            continue
        draws[i] = c.ab[sel]
        i += 1
    tail = (1.0 - level) / 2.0
    lo = np.quantile(draws, tail, axis=0) if sel else np.empty(0)
    hi = np.quantile(draws, 1.0 - tail, axis=0) if sel else np.empty(0)
    names = data.column_names
    rows_out = []
    for pos, j in enumerate(sel):
        ab = float(coefs.ab[j])
        rows_out.append(RefitRow(
            pathway=names[j], index=j, ab_refit=ab,
            ci_low=float(lo[pos]), ci_high=float(hi[pos]),
            significant=bool(lo[pos] > 0 or hi[pos] < 0),
            proportion_mediated=float(proportion_mediated(ab, total)) if total != 0 else float("nan"),
            covers_estimate=bool(lo[pos] <= ab <= hi[pos])))
    return RefitReport(rows_out, total, resamples, level, coefs, bad, seed, draws)
