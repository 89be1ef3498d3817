"""Selection rules, accuracy metrics, matched comparisons and cross-validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from .admm import AdmmState, PathResult, SolverOptions, fit, precompute
from .core import PathwayCoefficients, PenaltySpec, loss

DEFAULT_CUTOFF = 1e-3


@dataclass(frozen=True)
class SelectionResult:
    selected: frozenset
    cutoff: float
    source: str = ""


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    @property
    def points(self):
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


@dataclass
class CvReport:
    grid: List[PenaltySpec]
    mean_loss: np.ndarray
    fold_losses: np.ndarray     # shape (folds, grid points)
    chosen: int
    folds: int
    seed: int
    fold_ids: np.ndarray
    converged: np.ndarray = field(default=None)

    @property
    def chosen_spec(self) -> PenaltySpec:
        return self.grid[self.chosen]


def select_pathways(ab, cutoff: float = DEFAULT_CUTOFF, source: str = "") -> SelectionResult:
    """Indices j with ``|ab_j| > cutoff`` (0-based)."""
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    ab = np.asarray(ab, dtype=float)
    return SelectionResult(frozenset(int(j) for j in np.flatnonzero(np.abs(ab) > cutoff)),
                           cutoff, source)


def f1_score(selected, truth) -> float:
    selected, truth = set(selected), set(truth)
    if not truth:
        raise ValueError("truth set must be nonempty")
    tp = len(selected & truth)
    precision = tp / len(selected) if selected else 0.0
    recall = tp / len(truth)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _rates(selected_sets, truth, k):
    truth = set(truth)
    if not truth or len(truth) >= k:
        raise ValueError("ROC needs a truth set that is nonempty and not all mediators")
    neg = k - len(truth)
    fpr = np.array([len(set(s) - truth) / neg for s in selected_sets])
    tpr = np.array([len(set(s) & truth) / len(truth) for s in selected_sets])
    return fpr, tpr


def _auc_from_points(fpr, tpr) -> RocCurve:
    """Anchor (0,0) and (1,1), make tpr non-decreasing in fpr, integrate."""
    fpr = np.concatenate([[0.0], fpr, [1.0]])
    tpr = np.concatenate([[0.0], tpr, [1.0]])
    order = np.lexsort((tpr, fpr))
    fpr = fpr[order]
    tpr = np.maximum.accumulate(tpr[order])
    keep = np.ones(fpr.size, dtype=bool)
    keep[1:] = (np.diff(fpr) != 0) | (np.diff(tpr) != 0)
    fpr, tpr = fpr[keep], tpr[keep]
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(fpr, tpr, auc)


def roc_curve(path_or_pvalues, truth, k: Optional[int] = None,
              cutoff: float = DEFAULT_CUTOFF) -> RocCurve:
    """ROC curve and AUC.

    For a :class:`PathResult`, each grid point contributes one operating
    point from its ``|ab| > cutoff`` selection.  For a p-value vector the
    threshold is swept over every distinct p-value.
    """
    if isinstance(path_or_pvalues, PathResult):
        path = path_or_pvalues
        k = path.fits[0].coefs.k
        sets = [select_pathways(f.coefs.ab, cutoff).selected for f in path.fits]
    else:
        p = np.asarray(path_or_pvalues, dtype=float)
        k = p.size
        sets = [frozenset(np.flatnonzero(p <= t).tolist()) for t in np.unique(p)]
    fpr, tpr = _rates(sets, truth, k)
    return _auc_from_points(fpr, tpr)


def mse_ab(ab_hat, ab_true) -> float:
    """Total squared error of the pathway effects, summed over mediators."""
    ab_hat = np.asarray(ab_hat, dtype=float)
    ab_true = np.asarray(ab_true, dtype=float)
    if ab_hat.shape != ab_true.shape:
        raise ValueError("length mismatch")
    return float(np.sum((ab_hat - ab_true) ** 2))


def jaccard(s1, s2) -> float:
    s1, s2 = set(s1), set(s2)
    if not s1 and not s2:
        return 1.0
    return len(s1 & s2) / len(s1 | s2)


def l2_difference(ab1, ab2) -> float:
    ab1 = np.asarray(ab1, dtype=float)
    ab2 = np.asarray(ab2, dtype=float)
    if ab1.shape != ab2.shape:
        raise ValueError("length mismatch")
    return float(np.linalg.norm(ab1 - ab2))


def _tuning_key(spec: PenaltySpec):
    return (spec.lam, spec.omega)


def _nearest(values, target, specs):
    """Index of the value nearest ``target``; ties go to the smaller tuning value."""
    values = np.asarray(values, dtype=float)
    dist = np.abs(values - target)
    cands = np.flatnonzero(dist == dist.min())
    return int(min(cands, key=lambda i: _tuning_key(specs[i])))


def matched_curves(paths: Mapping[str, PathResult], truth, ab_true=None,
                   n_l1: int = 50) -> Dict[str, List[dict]]:
    """Compare methods at equal support size and at equal l1 norm of ab.

    Returns ``{"support": rows, "l1": rows}``.  Support rows hold the F1 score
    of each method at every support size seen on any path; l1 rows hold the
    pathway-effect MSE at ``n_l1`` targets evenly spaced from 0 to the largest
    l1 norm seen.  The l1 table needs ``ab_true``.
    """
    if not paths:
        raise ValueError("no paths given")
    for name, path in paths.items():
        if len(path) < 1:
            raise ValueError(f"path {name!r} is empty")
    sizes = sorted({s for p in paths.values() for s in p.support_sizes})
    support_rows = []
    for s in sizes:
        for name, path in paths.items():
            i = _nearest(path.support_sizes, s, path.grid)
            support_rows.append({
                "method": name, "target_support": s, "grid_index": i,
                "lam": path.grid[i].lam, "omega": path.grid[i].omega,
                "support": path.support_sizes[i],
                "f1": f1_score(path.selected[i], truth)})
    l1_rows = []
    if ab_true is not None:
        top = max(max(p.l1_norms) for p in paths.values())
        for target in np.linspace(0.0, top, n_l1):
            for name, path in paths.items():
                i = _nearest(path.l1_norms, target, path.grid)
                l1_rows.append({
                    "method": name, "target_l1": float(target), "grid_index": i,
                    "lam": path.grid[i].lam, "omega": path.grid[i].omega,
                    "l1": path.l1_norms[i],
                    "mse": mse_ab(path.fits[i].coefs.ab, ab_true)})
    return {"support": support_rows, "l1": l1_rows}


def fold_assignment(n: int, folds: int, seed: int) -> np.ndarray:
    """Random fold label per observation; fold sizes differ by at most one."""
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if folds > n:
        raise ValueError(f"folds ({folds}) exceeds number of observations ({n})")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(2_000_003,)))
    perm = rng.permutation(n)
    ids = np.empty(n, dtype=int)
    for f, rows in enumerate(np.array_split(perm, folds)):
        ids[rows] = f
    return ids


def heldout_loss(data, coefs: PathwayCoefficients) -> float:
    """Unpenalized loss with identity weights."""
    return loss(data, coefs)


def _fold_losses(args):
    """Held-out losses of one fold along the grid (module level so it pickles)."""
    data, specs, train_rows, test_rows, opts, warm_start = args
    train = data.subset(train_rows)
    test = data.subset(test_rows)
    pre = precompute(train, specs[0], opts.rho)
    state: Optional[AdmmState] = None
    losses = np.empty(len(specs))
    conv = np.ones(len(specs), dtype=bool)
    for i, spec in enumerate(specs):
        res = fit(train, spec, opts, init=state if warm_start else None, pre=pre)
        losses[i] = heldout_loss(test, res.coefs)
        conv[i] = res.converged
        state = res.state
    return losses, conv


def cross_validate(data, specs: Sequence[PenaltySpec], folds: int = 10, seed: int = 0,
                   opts: Optional[SolverOptions] = None, warm_start: bool = True,
                   map_fn: Callable = map) -> CvReport:
    """K-fold cross-validation of the held-out loss over a tuning grid.

    Folds are cut from the data as given (no per-fold re-standardization).
    Within a fold the grid is fitted in order with warm starts; nothing is
    carried across folds.  The chosen spec minimizes the mean held-out loss
    (first index on ties).  ``map_fn`` may be an executor's ``map`` to run
    folds concurrently; results are assembled in fold order either way.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("empty grid")
    opts = opts or SolverOptions()
    ids = fold_assignment(data.n, folds, seed)
    jobs = [(data, specs, np.flatnonzero(ids != f), np.flatnonzero(ids == f), opts, warm_start)
            for f in range(folds)]
    out = list(map_fn(_fold_losses, jobs))
    losses = np.array([o[0] for o in out])
    conv = np.array([o[1] for o in out])
    mean = losses.mean(axis=0)
    return CvReport(specs, mean, losses, int(np.argmin(mean)), folds, seed, ids, conv)
