"""Closed-form minimizer of the two-variable pathway subproblem.

Every (alpha_j, beta_j) update of the ADMM solver reduces to

    minimize  lam*|a*b| + omega*(|a| + |b|) + phi1*a**2/2 + phi2*b**2/2
              - mu1*a - mu2*b

over (a, b) in R^2.  When ``min(phi1, phi2) > lam`` the problem is strictly
convex and the solution is one of seven closed-form branches selected by
mutually exclusive sign conditions.  Outside that regime the minimizer is
found by comparing the objective over the same finite candidate set, which
always contains the global minimizer because interior stationary points are
saddles there.

Branch numbering
----------------
0   ``lam == 0``: independent soft-thresholding of each coordinate
1   a > 0, b > 0
2   a > 0, b < 0
3   a < 0, b > 0
4   a < 0, b < 0
5   b == 0, a = S(mu1, omega) / phi1
6   a == 0, b = S(mu2, omega) / phi2
7   a == b == 0
-1  non-convex regime or boundary tie, solved by candidate enumeration

With ``omega == 0`` the same numbering is used for the reduced table: its
first two rows split into 1/4 and 2/3 by sign, its axis rows map to 5 and 6
and ``mu1 == mu2 == 0`` maps to 7.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit


@dataclass(frozen=True)
class ProxParams:
    """Parameters of one pairwise subproblem."""

    lam: float
    omega: float
    phi1: float
    phi2: float
    mu1: float
    mu2: float

    def __post_init__(self):
        vals = (self.lam, self.omega, self.phi1, self.phi2, self.mu1, self.mu2)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("prox parameters must be finite")
        if self.lam < 0 or self.omega < 0:
            raise ValueError("lam and omega must be nonnegative")
        if self.phi1 <= 0 or self.phi2 <= 0:
            raise ValueError("phi1 and phi2 must be positive")

    @property
    def convex(self) -> bool:
        return min(self.phi1, self.phi2) > self.lam


@dataclass(frozen=True)
class ProxSolution:
    a: float
    b: float
    condition_id: int


def soft_threshold(mu, omega):
    """Soft-thresholding ``sign(mu) * max(|mu| - omega, 0)``; works elementwise."""
    if np.any(np.asarray(omega) < 0):
        raise ValueError("omega must be nonnegative")
    return np.sign(mu) * np.maximum(np.abs(mu) - omega, 0.0)


def penalty_v(a, b, phi):
    """Pathway penalty ``|ab| + phi (a^2 + b^2)``."""
    return np.abs(a * b) + phi * (a * a + b * b)


def penalty_v_maxform(a, b, phi):
    """Same penalty written as a max of two convex quadratics plus a ridge term.

    Convex in (a, b) whenever ``phi >= 1/2``.
    """
    return (np.maximum(0.5 * (a + b) ** 2, 0.5 * (a - b) ** 2)
            + (phi - 0.5) * (a * a + b * b))


def pair_objective(a, b, lam, omega, phi1, phi2, mu1, mu2):
    """Value of the pairwise subproblem objective; broadcasts over arrays."""
    return (lam * np.abs(a * b) + omega * (np.abs(a) + np.abs(b))
            + 0.5 * phi1 * a * a + 0.5 * phi2 * b * b - mu1 * a - mu2 * b)


def table_conditions(lam, omega, phi1, phi2, mu1, mu2):
    """Boolean masks of the seven branch conditions, shape ``(7, ...)``.

    Strict inequalities are evaluated exactly as stated; no slack is added.
    """
    lam, omega, phi1, phi2, mu1, mu2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (lam, omega, phi1, phi2, mu1, mu2)))
    t1 = omega * (phi2 - lam)
    t2 = omega * (phi1 - lam)
    c1 = (phi2 * mu1 - lam * mu2 > t1) & (phi1 * mu2 - lam * mu1 > t2)
    c2 = (phi2 * mu1 + lam * mu2 > t1) & (phi1 * mu2 + lam * mu1 < -t2)
    c3 = (phi2 * mu1 + lam * mu2 < -t1) & (phi1 * mu2 + lam * mu1 > t2)
    c4 = (phi2 * mu1 - lam * mu2 < -t1) & (phi1 * mu2 - lam * mu1 < -t2)
    c5 = (np.abs(mu1) > omega) & (phi1 * np.abs(mu2) - lam * np.abs(mu1) <= t2)
    c6 = (np.abs(mu2) > omega) & (phi2 * np.abs(mu1) - lam * np.abs(mu2) <= t1)
    c7 = ~(c1 | c2 | c3 | c4 | c5 | c6)
    return np.stack([c1, c2, c3, c4, c5, c6, c7])


@njit(cache=True)
def _st(mu, omega):
    if mu > omega:
        return mu - omega
    if mu < -omega:
        return mu + omega
    return 0.0


@njit(cache=True)
def _objective(a, b, lam, omega, phi1, phi2, mu1, mu2):
    return (lam * abs(a * b) + omega * (abs(a) + abs(b))
            + 0.5 * phi1 * a * a + 0.5 * phi2 * b * b - mu1 * a - mu2 * b)


@njit(cache=True)
def _branch(k, lam, omega, phi1, phi2, mu1, mu2):
    """Closed-form (a, b) of branch ``k`` in 1..7."""
    if k >= 5:
        if k == 5:
            return _st(mu1, omega) / phi1, 0.0
        if k == 6:
            return 0.0, _st(mu2, omega) / phi2
        return 0.0, 0.0
    det = phi1 * phi2 - lam * lam
    if k == 1:
        x = phi2 * (mu1 - omega) - lam * (mu2 - omega)
        y = phi1 * (mu2 - omega) - lam * (mu1 - omega)
    elif k == 2:
        x = phi2 * (mu1 - omega) + lam * (mu2 + omega)
        y = phi1 * (mu2 + omega) + lam * (mu1 - omega)
    elif k == 3:
        x = phi2 * (mu1 + omega) + lam * (mu2 - omega)
        y = phi1 * (mu2 - omega) + lam * (mu1 + omega)
    else:
        x = phi2 * (mu1 + omega) - lam * (mu2 + omega)
        y = phi1 * (mu2 + omega) - lam * (mu1 + omega)
    return x / det, y / det


@njit(cache=True)
def _enumerate(lam, omega, phi1, phi2, mu1, mu2):
    """Objective-minimal branch output; exact ties go to the sparser point."""
    best_a, best_b = 0.0, 0.0
    best = 0.0
    best_nnz = 0
    scale = 1e-14 * (1.0 + abs(mu1) + abs(mu2))
    singular = phi1 * phi2 == lam * lam
    for k in range(1, 7):
        if k <= 4 and singular:
            continue
        a, b = _branch(k, lam, omega, phi1, phi2, mu1, mu2)
        val = _objective(a, b, lam, omega, phi1, phi2, mu1, mu2)
        nnz = (a != 0.0) + (b != 0.0)
        if val < best - scale or (val <= best + scale and nnz < best_nnz):
            best, best_a, best_b, best_nnz = val, a, b, nnz
    return best_a, best_b


@njit(cache=True)
def prox_scalar(lam, omega, phi1, phi2, mu1, mu2):
    """Scalar solver; returns ``(a, b, condition_id)``."""
    if lam == 0.0:
        return _st(mu1, omega) / phi1, _st(mu2, omega) / phi2, 0
    t1 = omega * (phi2 - lam)
    t2 = omega * (phi1 - lam)
    p1 = phi2 * mu1 - lam * mu2
    q1 = phi1 * mu2 - lam * mu1
    p2 = phi2 * mu1 + lam * mu2
    q2 = phi1 * mu2 + lam * mu1
    hits = 0
    first = 7
    if p1 > t1 and q1 > t2:
        hits += 1
        first = min(first, 1)
    if p2 > t1 and q2 < -t2:
        hits += 1
        first = min(first, 2)
    if p2 < -t1 and q2 > t2:
        hits += 1
        first = min(first, 3)
    if p1 < -t1 and q1 < -t2:
        hits += 1
        first = min(first, 4)
    if abs(mu1) > omega and phi1 * abs(mu2) - lam * abs(mu1) <= t2:
        hits += 1
        first = min(first, 5)
    if abs(mu2) > omega and phi2 * abs(mu1) - lam * abs(mu2) <= t1:
        hits += 1
        first = min(first, 6)
    if hits == 0:
        hits = 1
    if hits == 1 and min(phi1, phi2) > lam:
        a, b = _branch(first, lam, omega, phi1, phi2, mu1, mu2)
        return a, b, first
    a, b = _enumerate(lam, omega, phi1, phi2, mu1, mu2)
    return a, b, -1


@njit(cache=True)
def _prox_loop(lam, omega, phi1, phi2, mu1, mu2, a, b, cond):
    for i in range(a.shape[0]):
        a[i], b[i], cond[i] = prox_scalar(lam[i], omega[i], phi1[i], phi2[i],
                                          mu1[i], mu2[i])


def prox_pair_arrays(lam, omega, phi1, phi2, mu1, mu2):
    """Vectorized solver of the pairwise subproblem.

    All arguments broadcast against each other.  Returns ``(a, b, cond)``
    arrays where ``cond`` follows the module-level branch numbering.
    """
    args = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (lam, omega, phi1, phi2, mu1, mu2)))
    shape = args[0].shape
    flat = [np.ascontiguousarray(v).ravel() for v in args]
    if not all(np.all(np.isfinite(v)) for v in flat):
        raise ValueError("prox parameters must be finite")
    if np.any(flat[0] < 0) or np.any(flat[1] < 0):
        raise ValueError("lam and omega must be nonnegative")
    if np.any(flat[2] <= 0) or np.any(flat[3] <= 0):
        raise ValueError("phi1 and phi2 must be positive")
    a = np.empty(flat[0].size)
    b = np.empty(flat[0].size)
    cond = np.empty(flat[0].size, dtype=np.int64)
    _prox_loop(*flat, a, b, cond)
    return a.reshape(shape), b.reshape(shape), cond.reshape(shape)


def prox_pair(p: ProxParams) -> ProxSolution:
    """Solve one pairwise subproblem.

    Examples
    --------
    >>> s = prox_pair(ProxParams(1.0, 1.0, 1.5, 1.5, 1.5, 1.5))
    >>> round(s.a, 12), round(s.b, 12), s.condition_id
    (0.2, 0.2, 1)
    """
    a, b, cond = prox_pair_arrays(p.lam, p.omega, p.phi1, p.phi2, p.mu1, p.mu2)
    return ProxSolution(float(a), float(b), int(cond))
