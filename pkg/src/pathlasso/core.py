"""Data containers, standardization and the penalized criterion.

The mediation model is

    M = Z A + E1            (n x K mediator block)
    R = Z C + M B + E2      (outcome)

and the criterion minimized by the solver is ``loss/2 + lam*P1 + omega*P2``
with

    loss = tr[W1 (M - ZA)'(M - ZA)] + w2 |R - ZC - MB|^2
    P1   = sum_j (|A_j B_j| + phi (A_j^2 + B_j^2)) + |C|
    P2   = sum_j (|A_j| + |B_j|)

``W1`` is diagonal here and stored as a length-K vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class MediationDataset:
    """Treatment ``z`` (n,), mediators ``m`` (n, K) and outcome ``r`` (n,)."""

    z: np.ndarray
    m: np.ndarray
    r: np.ndarray
    column_names: Optional[tuple] = None

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float).ravel()
        m = np.asarray(self.m, dtype=float)
        if m.ndim == 1:
            m = m[:, None]
        r = np.asarray(self.r, dtype=float).ravel()
        n = z.shape[0]
        if m.ndim != 2 or m.shape[0] != n or r.shape[0] != n:
            raise ValueError(
                f"dimension mismatch: z has {n} rows, m {m.shape}, r {r.shape}")
        if n < 3:
            raise ValueError("need at least 3 observations")
        if m.shape[1] < 1:
            raise ValueError("need at least one mediator")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(m))
                and np.all(np.isfinite(r))):
            raise ValueError("dataset contains non-finite values")
        if np.ptp(z) == 0:
            raise ValueError("constant column: Z")
        names = self.column_names
        if names is None:
            names = tuple(f"M{j + 1}" for j in range(m.shape[1]))
        elif len(names) != m.shape[1]:
            raise ValueError("column_names must have one label per mediator")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "column_names", tuple(names))

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def k(self) -> int:
        return self.m.shape[1]

    @property
    def x(self) -> np.ndarray:
        """Augmented design ``(Z, M)``, shape (n, K+1)."""
        return np.column_stack([self.z, self.m])

    def subset(self, rows) -> "MediationDataset":
        rows = np.asarray(rows)
        return MediationDataset(self.z[rows], self.m[rows], self.r[rows],
                                self.column_names)


@dataclass(frozen=True)
class StandardizedDataset:
    """A dataset whose columns have mean 0 and sample sd 1 (ddof=1).

    ``centers`` and ``scales`` hold the (z, m..., r) column means and sds of
    the raw data, in that order.
    """

    dataset: MediationDataset
    centers: np.ndarray
    scales: np.ndarray
    standardized: bool = field(default=True, init=False)

    # convenience passthroughs so solvers can take either type
    @property
    def z(self):
        return self.dataset.z

    @property
    def m(self):
        return self.dataset.m

    @property
    def r(self):
        return self.dataset.r

    @property
    def n(self):
        return self.dataset.n

    @property
    def k(self):
        return self.dataset.k

    @property
    def x(self):
        return self.dataset.x

    @property
    def column_names(self):
        return self.dataset.column_names

    def subset(self, rows) -> "StandardizedDataset":
        """Rows of the standardized data; centers/scales are kept unchanged."""
        return StandardizedDataset(self.dataset.subset(rows), self.centers, self.scales)

    def to_raw_scale(self, coefs: "PathwayCoefficients") -> "PathwayCoefficients":
        """Map standardized-scale coefficients back to the raw data scale."""
        sz, sm, sr = self.scales[0], self.scales[1:-1], self.scales[-1]
        return PathwayCoefficients(a=coefs.a * sm / sz,
                                   b=coefs.b * sr / sm,
                                   c=coefs.c * sr / sz)


def _as_dataset(data) -> MediationDataset:
    return data.dataset if isinstance(data, StandardizedDataset) else data


@dataclass(frozen=True)
class PathwayCoefficients:
    a: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("a and b must be vectors of equal length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))
                and np.isfinite(self.c)):
            raise ValueError("coefficients must be finite")

    @property
    def k(self) -> int:
        return self.a.shape[0]

    @property
    def ab(self) -> np.ndarray:
        return self.a * self.b

    @classmethod
    def zeros(cls, k: int) -> "PathwayCoefficients":
        return cls(np.zeros(k), np.zeros(k), 0.0)


@dataclass(frozen=True)
class PenaltySpec:
    """Tuning parameters and loss weights.

    ``w1`` may be given as a scalar (broadcast to all K mediators) or a
    length-K vector of positive weights.
    """

    lam: float
    phi: float = 2.0
    omega: float = 0.0
    w1: object = 1.0
    w2: float = 1.0

    def __post_init__(self):
        if not (self.lam >= 0 and np.isfinite(self.lam)):
            raise ValueError("lam must be finite and nonnegative")
        if not (self.omega >= 0 and np.isfinite(self.omega)):
            raise ValueError("omega must be finite and nonnegative")
        if not self.phi >= 0.5:
            raise ValueError("phi must be >= 1/2 for a convex penalty")
        if np.any(np.asarray(self.w1, dtype=float) <= 0):
            raise ValueError("w1 entries must be positive")
        if not self.w2 > 0:
            raise ValueError("w2 must be positive")

    def weights(self, k: int) -> np.ndarray:
        w1 = np.asarray(self.w1, dtype=float)
        if w1.ndim == 0:
            return np.full(k, float(w1))
        if w1.shape != (k,):
            raise ValueError(f"w1 has shape {w1.shape}, expected ({k},)")
        return w1

    def with_(self, **kw) -> "PenaltySpec":
        return replace(self, **kw)


@dataclass(frozen=True)
class AugmentedDesign:
    """Stacked design ``X = (Z, M)`` and the masks used by the ADMM blocks."""

    x: np.ndarray
    e1: np.ndarray
    j_mask: np.ndarray
    phi_mask: np.ndarray

    @classmethod
    def build(cls, data, phi: float) -> "AugmentedDesign":
        k = data.k
        e1 = np.zeros(k + 1)
        e1[0] = 1.0
        j_mask = np.ones(k + 1)
        j_mask[0] = 0.0
        return cls(x=data.x, e1=e1, j_mask=j_mask, phi_mask=phi * j_mask)


def standardize_columns(cols: np.ndarray, names=None):
    """Column-wise z-scores with ddof=1; returns ``(scaled, centers, scales)``."""
    cols = np.asarray(cols, dtype=float)
    centers = cols.mean(axis=0)
    scales = cols.std(axis=0, ddof=1)
    for j, col in enumerate(cols.T):
        if np.ptp(col) == 0:
            label = names[j] if names is not None else j
            raise ValueError(f"constant column: {label}")
    return (cols - centers) / scales, centers, scales


def standardize(dataset: MediationDataset) -> StandardizedDataset:
    """Center every column and scale it to unit sample sd (ddof=1)."""
    dataset = _as_dataset(dataset)
    cols = np.column_stack([dataset.z, dataset.m, dataset.r])
    names = ("Z",) + dataset.column_names + ("R",)
    out, centers, scales = standardize_columns(cols, names)
    std = MediationDataset(out[:, 0], out[:, 1:-1], out[:, -1],
                           dataset.column_names)
    return StandardizedDataset(std, centers, scales)


def _check_dims(data, coefs):
    if coefs.k != data.k:
        raise ValueError(
            f"dimension mismatch: data has K={data.k}, coefficients K={coefs.k}")


def residuals(data, coefs: PathwayCoefficients):
    """Mediator residuals (n, K) and outcome residuals (n,)."""
    _check_dims(data, coefs)
    e1 = data.m - np.outer(data.z, coefs.a)
    e2 = data.r - data.z * coefs.c - data.m @ coefs.b
    return e1, e2


def loss(data, coefs: PathwayCoefficients, spec: Optional[PenaltySpec] = None) -> float:
    """Weighted squared-error loss of both model blocks."""
    w1 = spec.weights(data.k) if spec is not None else np.ones(data.k)
    w2 = spec.w2 if spec is not None else 1.0
    e1, e2 = residuals(data, coefs)
    return float(np.sum(w1 * np.sum(e1 * e1, axis=0)) + w2 * (e2 @ e2))


def penalty_p1(coefs: PathwayCoefficients, phi: float) -> float:
    if phi < 0:
        raise ValueError("phi must be nonnegative")
    a, b = coefs.a, coefs.b
    return float(np.sum(np.abs(a * b) + phi * (a * a + b * b)) + abs(coefs.c))


def penalty_p2(coefs: PathwayCoefficients) -> float:
    return float(np.sum(np.abs(coefs.a)) + np.sum(np.abs(coefs.b)))


def objective(data, coefs: PathwayCoefficients, spec: PenaltySpec) -> float:
    val = 0.5 * loss(data, coefs, spec)
    if spec.lam:
        val += spec.lam * penalty_p1(coefs, spec.phi)
    if spec.omega:
        val += spec.omega * penalty_p2(coefs)
    return val


def pathway_effects(coefs: PathwayCoefficients):
    """Per-pathway products ``A_j B_j`` and their sum (total indirect effect)."""
    ab = coefs.a * coefs.b
    return ab, float(coefs.a @ coefs.b)


def total_effect(data) -> float:
    """OLS slope of R on Z; intercept included unless the data are standardized."""
    z, r = data.z, data.r
    if np.ptp(z) == 0:
        raise ValueError("constant column: Z")
    if isinstance(data, StandardizedDataset):
        return float(z @ r / (z @ z))
    zc = z - z.mean()
    return float(zc @ (r - r.mean()) / (zc @ zc))


def ols(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least-squares coefficients; raises on rank deficiency."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    coef, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    if rank < x.shape[1]:
        raise np.linalg.LinAlgError("design matrix is rank deficient")
    return coef


def ols_coefficients(data) -> PathwayCoefficients:
    """Unpenalized two-block fit (no intercepts); needs n > K + 1."""
    z = data.z
    a = (z @ data.m) / (z @ z)
    d = ols(data.x, data.r)
    return PathwayCoefficients(a, d[1:], d[0])


def names_for(k: int, names: Optional[Sequence[str]] = None):
    return tuple(names) if names is not None else tuple(f"M{j + 1}" for j in range(k))
