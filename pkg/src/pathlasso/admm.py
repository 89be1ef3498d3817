"""ADMM solver for the pathway lasso criterion.

The problem is split as

    minimize  u(Theta, D) + v(alpha, beta)
    s.t.      Theta = alpha,  D = beta,  Theta[0] = 1

with ``Theta = (1, A_1..A_K)``, ``D = (C, B_1..B_K)``, ``u`` the smooth loss
and ``v`` the penalty.  The augmented Lagrangian uses ``nu_r h_r + rho h_r^2``
for each constraint, which gives the closed-form block updates below and
dual steps of size ``2 rho``.  Coefficients are read off ``(alpha, beta)`` so
that the exact zeros produced by the pairwise prox define the support.

The first coordinate pairs ``alpha_1`` (pinned to 1 by the constraint) with
``beta_1 = C``.  Its product penalty ``lam |alpha_1 beta_1|`` carries no ridge
term, so the split problem is non-convex in that coordinate and the iteration
can cycle once ``lam`` is of the order of ``rho``.  Because ``alpha_1 = 1`` on
the feasible set, the same criterion is obtained with ``lam |beta_1|``, which
keeps the split convex; this is the default (``c_penalty="l1"``).  The literal
product form is available as ``c_penalty="product"``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np
from numba import njit
from scipy import linalg

from .core import (PathwayCoefficients, PenaltySpec, StandardizedDataset,
                   objective)
from .prox import prox_pair_arrays, prox_scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 10000
    tol_primal: float = 1e-6
    tol_change: float = 1e-8
    rho: float = 1.0
    c_penalty: str = "l1"

    def __post_init__(self):
        if self.max_iter <= 0 or self.tol_primal <= 0 or self.tol_change <= 0 \
                or self.rho <= 0:
            raise ValueError("solver options must all be positive")
        if self.c_penalty not in ("product", "l1"):
            raise ValueError("c_penalty must be 'l1' or 'product'")


@dataclass
class AdmmState:
    theta: np.ndarray
    d: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray
    nu3: float
    rho: float
    iteration: int = 0

    @classmethod
    def cold(cls, k: int, rho: float = 1.0) -> "AdmmState":
        theta = np.zeros(k + 1)
        theta[0] = 1.0
        d = np.zeros(k + 1)
        return cls(theta, d, theta.copy(), d.copy(), np.zeros(k + 1),
                   np.zeros(k + 1), 0.0, rho)

    def copy(self) -> "AdmmState":
        return AdmmState(self.theta.copy(), self.d.copy(), self.alpha.copy(),
                         self.beta.copy(), self.nu1.copy(), self.nu2.copy(),
                         float(self.nu3), self.rho, self.iteration)

    def primal_residual(self) -> float:
        return max(np.max(np.abs(self.theta - self.alpha)),
                   np.max(np.abs(self.d - self.beta)),
                   abs(self.theta[0] - 1.0))

    def max_change(self, other: "AdmmState") -> float:
        return max(np.max(np.abs(self.theta - other.theta)),
                   np.max(np.abs(self.d - other.d)),
                   np.max(np.abs(self.alpha - other.alpha)),
                   np.max(np.abs(self.beta - other.beta)),
                   np.max(np.abs(self.nu1 - other.nu1)),
                   np.max(np.abs(self.nu2 - other.nu2)),
                   abs(self.nu3 - other.nu3))


@dataclass
class Precomp:
    """Quantities reused by every sweep at fixed data, weights and rho."""

    ztx_omega: np.ndarray       # Z'X Omega1, length K+1 (first entry 0)
    ztz: float
    theta_diag: np.ndarray      # diagonal of Z'Z Omega1 + 2 rho (I + e1 e1')
    d_matrix: np.ndarray        # w2 X'X + 2 rho I
    d_factor: tuple             # Cholesky factor of d_matrix
    w2xtr: np.ndarray
    rho: float
    spec: PenaltySpec
    # D = (v - X' (Q v)) / (2 rho) with Q = w2 (2 rho I + w2 X X')^-1 X  when n <= K
    x: np.ndarray = None
    q: np.ndarray = None
    d_inverse: np.ndarray = None

    @property
    def k(self) -> int:
        return self.ztx_omega.shape[0] - 1


@dataclass
class FitResult:
    coefs: PathwayCoefficients
    state: AdmmState
    converged: bool
    iterations: int
    objective: float
    spec: Optional[PenaltySpec] = None


@dataclass
class PathResult:
    grid: List[PenaltySpec]
    fits: List[FitResult]
    method: str = "PathLasso"
    cutoff: float = 1e-3
    selected: List[frozenset] = field(default_factory=list)
    l1_norms: List[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.selected:
            self.selected = [
                frozenset(int(j) for j in np.flatnonzero(np.abs(f.coefs.ab) > self.cutoff))
                for f in self.fits]
        if not self.l1_norms:
            self.l1_norms = [float(np.sum(np.abs(f.coefs.ab))) for f in self.fits]

    def __len__(self):
        return len(self.fits)

    @property
    def support_sizes(self) -> List[int]:
        return [len(s) for s in self.selected]

    @property
    def ab(self) -> np.ndarray:
        """Pathway effects, shape (grid points, K)."""
        return np.array([f.coefs.ab for f in self.fits])


def precompute(data, spec: PenaltySpec, rho: float = 1.0) -> Precomp:
    k = data.k
    x = data.x
    z = data.z
    w1 = spec.weights(k)
    omega1 = np.concatenate([[0.0], w1])
    ztz = float(z @ z)
    ztx = z @ x
    e1 = np.zeros(k + 1)
    e1[0] = 1.0
    theta_diag = ztz * omega1 + 2.0 * rho * (1.0 + e1)
    d_matrix = spec.w2 * (x.T @ x) + 2.0 * rho * np.eye(k + 1)
    try:
        d_factor = linalg.cho_factor(d_matrix, lower=True)
    except linalg.LinAlgError as exc:  # pragma: no cover - PD for rho > 0
        raise RuntimeError("D-update system is not positive definite") from exc
    n = x.shape[0]
    xc = np.ascontiguousarray(x)
    if n <= k:
        g = 2.0 * rho * np.eye(n) + spec.w2 * (xc @ xc.T)
        q = spec.w2 * linalg.cho_solve(linalg.cho_factor(g, lower=True), xc)
        d_inverse = None
    else:
        q = None
        d_inverse = linalg.cho_solve(d_factor, np.eye(k + 1))
        d_inverse = 0.5 * (d_inverse + d_inverse.T)
    return Precomp(ztx * omega1, ztz, theta_diag, d_matrix, d_factor,
                   spec.w2 * (x.T @ data.r), rho, spec, xc, q, d_inverse)


def update_theta(state: AdmmState, pre: Precomp) -> np.ndarray:
    rho = pre.rho
    rhs = pre.ztx_omega - state.nu1 + 2.0 * rho * state.alpha
    rhs[0] += 2.0 * rho - state.nu3
    return rhs / pre.theta_diag


def update_d(state: AdmmState, pre: Precomp) -> np.ndarray:
    rhs = pre.w2xtr - state.nu2 + 2.0 * pre.rho * state.beta
    return linalg.cho_solve(pre.d_factor, rhs)


def prox_inputs(state: AdmmState, spec: PenaltySpec):
    """Per-coordinate (lam, omega, phi1, phi2, mu1, mu2) for the pair update.

    The first coordinate carries only the product term ``lam |alpha_1 beta_1|``
    (no ridge, no l1 weight).
    """
    k = state.theta.shape[0] - 1
    rho = state.rho
    mask = np.ones(k + 1)
    mask[0] = 0.0
    phi_i = 2.0 * spec.lam * spec.phi * mask + 2.0 * rho
    mu1 = 2.0 * rho * state.theta + state.nu1
    mu2 = 2.0 * rho * state.d + state.nu2
    return spec.lam, spec.omega * mask, phi_i, phi_i, mu1, mu2


def update_alpha_beta(state: AdmmState, spec: PenaltySpec, c_l1: bool = True):
    """Coordinatewise pair prox; ``c_l1`` swaps the first coordinate's product
    term for ``lam |beta_1|``."""
    lam, om, p1, p2, mu1, mu2 = prox_inputs(state, spec)
    a, b, _ = prox_pair_arrays(lam, om, p1, p2, mu1, mu2)
    if c_l1:
        a[0] = mu1[0] / p1[0]
        b[0] = np.sign(mu2[0]) * max(abs(mu2[0]) - lam, 0.0) / p2[0]
    return a, b


def update_duals(state: AdmmState) -> AdmmState:
    """Dual ascent step; returns a new state."""
    two_rho = 2.0 * state.rho
    return replace(state,
                   nu1=state.nu1 + two_rho * (state.theta - state.alpha),
                   nu2=state.nu2 + two_rho * (state.d - state.beta),
                   nu3=state.nu3 + two_rho * (state.theta[0] - 1.0))


def sweep(state: AdmmState, pre: Precomp, c_l1: bool = True) -> AdmmState:
    """One full pass Theta -> D -> (alpha, beta) -> duals (reference numpy path)."""
    s = state.copy()
    s.theta = update_theta(s, pre)
    s.d = update_d(s, pre)
    s.alpha, s.beta = update_alpha_beta(s, pre.spec, c_l1)
    s = update_duals(s)
    s.iteration += 1
    return s


def extract(state: AdmmState) -> PathwayCoefficients:
    return PathwayCoefficients(state.alpha[1:].copy(), state.beta[1:].copy(),
                               float(state.beta[0]))


def fit(data, spec: PenaltySpec, opts: Optional[SolverOptions] = None,
        init: Optional[AdmmState] = None, pre: Optional[Precomp] = None) -> FitResult:
    """Minimize the penalized criterion for one set of tuning parameters.

    Parameters
    ----------
    data : StandardizedDataset
        Standardized data (raw datasets are accepted but not recommended).
    spec : PenaltySpec
    opts : SolverOptions, optional
    init : AdmmState, optional
        Warm start; defaults to ``Theta = e1``, ``D = 0`` and zero duals.
    pre : Precomp, optional
        Cached factorizations for this data, weights and rho.

    Returns
    -------
    FitResult
        ``converged`` is False when ``max_iter`` sweeps were not enough.
    """
    opts = opts or SolverOptions()
    if pre is None or pre.rho != opts.rho or pre.spec.w2 != spec.w2 \
            or not np.array_equal(pre.spec.weights(data.k), spec.weights(data.k)):
        pre = precompute(data, spec, opts.rho)
    else:
        pre = replace(pre, spec=spec)
    if init is None:
        state = AdmmState.cold(data.k, opts.rho)
    else:
        state = init.copy()
        state.rho = opts.rho
    state.iteration = 0

    nu3 = np.array([state.nu3])
    iters, converged = _run(
        state.theta, state.d, state.alpha, state.beta, state.nu1, state.nu2, nu3,
        pre.ztx_omega, pre.theta_diag, pre.w2xtr,
        pre.x, pre.q if pre.q is not None else np.zeros((1, 1)),
        pre.d_inverse if pre.d_inverse is not None else np.zeros((1, 1)),
        pre.q is not None, float(spec.lam), float(spec.omega), float(spec.phi),
        float(opts.rho), opts.c_penalty == "l1", int(opts.max_iter),
        float(opts.tol_primal), float(opts.tol_change))
    state.nu3 = float(nu3[0])
    state.iteration = int(iters)
    if not converged:
        logger.warning("ADMM did not converge in %d sweeps (lam=%g, omega=%g)",
                       opts.max_iter, spec.lam, spec.omega)
    coefs = extract(state)
    return FitResult(coefs, state, converged, state.iteration,
                     objective(data, coefs, spec), spec)


@njit(cache=True)
def _run(theta, d, alpha, beta, nu1, nu2, nu3, ztx_omega, theta_diag, w2xtr,
         x, q, d_inverse, woodbury, lam, omega, phi, rho, c_l1, max_iter,
         tol_primal, tol_change):
    """Compiled sweep loop; updates the state arrays in place."""
    p = theta.shape[0]
    two_rho = 2.0 * rho
    v = np.empty(p)
    for it in range(max_iter):
        change = 0.0
        for j in range(p):
            rhs = ztx_omega[j] - nu1[j] + two_rho * alpha[j]
            if j == 0:
                rhs += two_rho - nu3[0]
            new = rhs / theta_diag[j]
            change = max(change, abs(new - theta[j]))
            theta[j] = new
        for j in range(p):
            v[j] = w2xtr[j] - nu2[j] + two_rho * beta[j]
        if woodbury:
            dn = (v - np.dot(x.T, np.dot(q, v))) / two_rho
        else:
            dn = np.dot(d_inverse, v)
        for j in range(p):
            change = max(change, abs(dn[j] - d[j]))
            d[j] = dn[j]
        resid = abs(theta[0] - 1.0)
        for j in range(p):
            mu1 = two_rho * theta[j] + nu1[j]
            mu2 = two_rho * d[j] + nu2[j]
            if j == 0:
                if c_l1:
                    a = mu1 / two_rho
                    if mu2 > lam:
                        b = (mu2 - lam) / two_rho
                    elif mu2 < -lam:
                        b = (mu2 + lam) / two_rho
                    else:
                        b = 0.0
                else:
                    a, b, _ = prox_scalar(lam, 0.0, two_rho, two_rho, mu1, mu2)
            else:
                phi_i = 2.0 * lam * phi + two_rho
                a, b, _ = prox_scalar(lam, omega, phi_i, phi_i, mu1, mu2)
            change = max(change, abs(a - alpha[j]), abs(b - beta[j]))
            alpha[j] = a
            beta[j] = b
            h1 = theta[j] - a
            h2 = d[j] - b
            resid = max(resid, abs(h1), abs(h2))
            change = max(change, two_rho * abs(h1), two_rho * abs(h2))
            nu1[j] += two_rho * h1
            nu2[j] += two_rho * h2
        h3 = theta[0] - 1.0
        change = max(change, two_rho * abs(h3))
        nu3[0] += two_rho * h3
        if resid <= tol_primal and change <= tol_change:
            return it + 1, True
    return max_iter, False


def _check_order(specs: Sequence[PenaltySpec]):
    lams = np.array([s.lam for s in specs])
    omegas = np.array([s.omega for s in specs])
    if np.all(lams == lams[0]):
        if np.any(np.diff(omegas) > 0):
            raise ValueError("path grid must be sorted by decreasing omega")
    elif np.any(np.diff(lams) > 0):
        raise ValueError("path grid must be sorted by decreasing lambda")


def fit_path(data, specs: Sequence[PenaltySpec], opts: Optional[SolverOptions] = None,
             method: str = "PathLasso", cutoff: float = 1e-3) -> PathResult:
    """Fit a grid of tuning parameters, warm-starting each point from the last."""
    specs = list(specs)
    if not specs:
        raise ValueError("empty grid")
    _check_order(specs)
    opts = opts or SolverOptions()
    pre = precompute(data, specs[0], opts.rho)
    fits = []
    state = None
    for spec in specs:
        res = fit(data, spec, opts, init=state, pre=pre)
        fits.append(res)
        state = res.state
    return PathResult(specs, fits, method=method, cutoff=cutoff)


def lambda_grid(n_points: int = 50, lo: float = 1e-6, hi: float = 1e2) -> np.ndarray:
    """Log-spaced grid, largest value first."""
    return np.logspace(np.log10(hi), np.log10(lo), n_points)


OMEGA_RULES = ("zero", "0.1lambda", "lambda", "fixed")


def make_grid(lams, phi: float = 2.0, omega_rule: str = "zero",
              omega: float = 0.0, w1=1.0, w2: float = 1.0) -> List[PenaltySpec]:
    """Specs along a lambda grid under one of the omega rules."""
    rule = omega_rule.replace("λ", "lambda")
    out = []
    for lam in lams:
        if rule == "zero":
            om = 0.0
        elif rule == "0.1lambda":
            om = 0.1 * lam
        elif rule == "lambda":
            om = lam
        elif rule == "fixed":
            om = omega
        else:
            raise ValueError(f"unknown omega rule {omega_rule!r}; expected one of {OMEGA_RULES}")
        out.append(PenaltySpec(lam=float(lam), phi=phi, omega=float(om), w1=w1, w2=w2))
    return out
