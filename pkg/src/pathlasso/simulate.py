"""Synthetic mediation data.

Two generators are provided.  ``gen_proposed`` draws from the marginal model
``M = Z A + E1`` with correlated rows ``E1 ~ N(0, Sigma1)``; ``gen_full``
draws mediators sequentially from the full model in which earlier mediators
feed later ones through a strictly upper-triangular adjacency ``Delta``.  The
two are linked by ``A = a (I - Delta)^-1`` (see :func:`influence_transform`).

Randomness: the design (true coefficients, Sigma1 pairs) comes from
``SeedSequence(seed)``; replicate ``i`` draws its data from
``SeedSequence(seed, spawn_key=(i,))``.  Draw order inside a replicate is
Z, then the n x K mediator noise, then the outcome noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from .core import MediationDataset


@dataclass(frozen=True)
class SimulationDesign:
    n: int
    k: int
    a_true: np.ndarray
    b_true: np.ndarray
    c_true: float = 1.0
    sigma1: Optional[np.ndarray] = None
    rho_m: float = 0.0
    sigma2: float = 1.0
    seed: int = 0
    binary_treatment: bool = False

    def __post_init__(self):
        a = np.asarray(self.a_true, dtype=float)
        b = np.asarray(self.b_true, dtype=float)
        if a.shape != (self.k,) or b.shape != (self.k,):
            raise ValueError("a_true and b_true must have length k")
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")
        if not np.any(a * b != 0):
            raise ValueError("design needs at least one nonzero pathway")
        object.__setattr__(self, "a_true", a)
        object.__setattr__(self, "b_true", b)
        if self.sigma1 is None:
            sig = make_sigma1(self.k, self.rho_m, self.seed)
        else:
            sig = np.asarray(self.sigma1, dtype=float)
            if sig.shape != (self.k, self.k) or not np.allclose(sig, sig.T):
                raise ValueError("sigma1 must be a symmetric k x k matrix")
            if np.linalg.eigvalsh(sig).min() <= 0:
                raise ValueError("sigma1 must be positive definite")
        object.__setattr__(self, "sigma1", sig)

    @property
    def true_set(self) -> frozenset:
        return frozenset(int(j) for j in np.flatnonzero(self.a_true * self.b_true))

    @property
    def ab_true(self) -> np.ndarray:
        return self.a_true * self.b_true

    def standardized_truth(self) -> dict:
        """True coefficients on the unit-variance scale of every variable.

        Uses population moments: Var(Z) = 1, Var(M_j) = a_j^2 + Sigma1_jj and
        Var(R) = (c + a'b)^2 + b' Sigma1 b + sigma2^2.
        """
        return _standardized(self.a_true, self.b_true, self.c_true,
                             self.sigma1, self.sigma2)


def _standardized(a, b, c, sigma1, sigma2):
    sd_z = 1.0
    sd_m = np.sqrt(a * a + np.diag(sigma1))
    sd_r = np.sqrt((c + a @ b) ** 2 + b @ sigma1 @ b + sigma2 ** 2)
    a_s = a * sd_z / sd_m
    b_s = b * sd_m / sd_r
    return {"a": a_s, "b": b_s, "c": c * sd_z / sd_r, "ab": a * b * sd_z / sd_r}


@dataclass(frozen=True)
class FullModelDesign:
    n: int
    k: int
    a_small: np.ndarray
    b_true: np.ndarray
    delta: np.ndarray
    xi: np.ndarray
    c_true: float = 1.0
    sigma2: float = 1.0
    seed: int = 0
    binary_treatment: bool = False

    def __post_init__(self):
        delta = np.asarray(self.delta, dtype=float)
        _check_upper(delta, self.k)
        xi = np.asarray(self.xi, dtype=float)
        if xi.shape != (self.k,) or np.any(xi <= 0):
            raise ValueError("xi must hold k positive error variances")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "a_small", np.asarray(self.a_small, dtype=float))
        object.__setattr__(self, "b_true", np.asarray(self.b_true, dtype=float))

    @property
    def a_induced(self) -> np.ndarray:
        return influence_transform(self.a_small, self.delta)

    @property
    def sigma1(self) -> np.ndarray:
        """Covariance of the marginal mediator errors, (I - D')^-1 Xi (I - D)^-1."""
        inv = linalg.solve_triangular(np.eye(self.k) - self.delta, np.eye(self.k))
        return inv.T @ np.diag(self.xi) @ inv

    def standardized_truth(self) -> dict:
        return _standardized(self.a_induced, self.b_true, self.c_true,
                             self.sigma1, self.sigma2)


def _check_upper(delta, k):
    if delta.shape != (k, k):
        raise ValueError(f"delta must be {k} x {k}")
    if np.any(np.tril(delta) != 0):
        raise ValueError("delta must be strictly upper triangular")


def make_sigma1(k: int, rho_m: float, seed=0) -> np.ndarray:
    """Identity plus ``rho_m`` on floor((k-1)/2) disjoint random index pairs.

    Disjoint pairs make the matrix block diagonal with 2x2 blocks, so its
    eigenvalues are exactly ``1 +- rho_m`` (and 1 for any unpaired index).
    """
    if not abs(rho_m) < 1:
        raise ValueError("|rho_m| must be < 1")
    sig = np.eye(k)
    npairs = (k - 1) // 2
    if rho_m == 0 or npairs == 0:
        return sig
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1_000_003,)))
    idx = rng.permutation(k)[: 2 * npairs].reshape(npairs, 2)
    sig[idx[:, 0], idx[:, 1]] = rho_m
    sig[idx[:, 1], idx[:, 0]] = rho_m
    return sig


def default_design(n: int = 50, k: int = 50, rho_m: float = 0.0, seed: int = 0,
                   n_true: Optional[int] = None, c_true: float = 1.0,
                   sigma2: float = 1.0, binary_treatment: bool = False) -> SimulationDesign:
    """The package's default data-generating process.

    ``max(3, k // 10)`` true pathways at random positions, with ``a`` and ``b``
    each uniform on ``[1, 2]`` with an independent random sign; all other
    coefficients zero; ``c = 1`` and unit outcome noise.
    """
    s = n_true if n_true is not None else max(3, k // 10)
    if not 1 <= s <= k:
        raise ValueError("number of true pathways must be between 1 and k")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    pos = np.sort(rng.choice(k, size=s, replace=False))
    a = np.zeros(k)
    b = np.zeros(k)
    a[pos] = rng.uniform(1, 2, s) * rng.choice([-1.0, 1.0], s)
    b[pos] = rng.uniform(1, 2, s) * rng.choice([-1.0, 1.0], s)
    return SimulationDesign(n=n, k=k, a_true=a, b_true=b, c_true=c_true,
                            rho_m=rho_m, sigma2=sigma2, seed=seed,
                            binary_treatment=binary_treatment)


def replicate_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def _draw_z(rng, n, binary):
    if binary:
        z = np.repeat([1.0, -1.0], [n - n // 2, n // 2])
        return rng.permutation(z)
    return rng.standard_normal(n)


def gen_proposed(design: SimulationDesign, rep: int = 0):
    """Draw one replicate from the marginal model; returns ``(dataset, truth)``."""
    rng = replicate_rng(design.seed, rep)
    n, k = design.n, design.k
    z = _draw_z(rng, n, design.binary_treatment)
    chol = np.linalg.cholesky(design.sigma1)
    e1 = rng.standard_normal((n, k)) @ chol.T
    m = np.outer(z, design.a_true) + e1
    e2 = design.sigma2 * rng.standard_normal(n)
    r = z * design.c_true + m @ design.b_true + e2
    std = design.standardized_truth()
    truth = {
        "a_true": design.a_true.tolist(),
        "b_true": design.b_true.tolist(),
        "c_true": design.c_true,
        "ab_true_standardized": std["ab"].tolist(),
        "true_set": sorted(design.true_set),
        "rho_m": design.rho_m,
        "sigma2": design.sigma2,
        "seed": design.seed,
        "replicate": rep,
    }
    return MediationDataset(z, m, r), truth


def gen_full(design: FullModelDesign, rep: int = 0):
    """Draw one replicate from the sequential full model.

    Mediator j is ``Z a_j + sum_{l<j} M_l delta_lj + eps_j`` with independent
    ``eps_j ~ N(0, xi_j)``.  The truth record carries both the full-model
    coefficients and the induced marginal ``A``.
    """
    _check_upper(design.delta, design.k)
    rng = replicate_rng(design.seed, rep)
    n, k = design.n, design.k
    z = _draw_z(rng, n, design.binary_treatment)
    eps = rng.standard_normal((n, k)) @ np.linalg.cholesky(np.diag(design.xi)).T
    m = np.empty((n, k))
    for j in range(k):
        m[:, j] = z * design.a_small[j] + eps[:, j] + m[:, :j] @ design.delta[:j, j]
    e2 = design.sigma2 * rng.standard_normal(n)
    r = z * design.c_true + m @ design.b_true + e2
    a_ind = design.a_induced
    truth = {
        "a_small": design.a_small.tolist(),
        "delta": design.delta.tolist(),
        "a_true": a_ind.tolist(),
        "b_true": design.b_true.tolist(),
        "c_true": design.c_true,
        "ab_true_standardized": design.standardized_truth()["ab"].tolist(),
        "true_set": sorted(int(j) for j in np.flatnonzero(a_ind * design.b_true)),
        "seed": design.seed,
        "replicate": rep,
    }
    return MediationDataset(z, m, r), truth


def influence_transform(a, delta) -> np.ndarray:
    """Solve ``x (I - delta) = a`` for the row vector x by back-substitution."""
    a = np.asarray(a, dtype=float)
    delta = np.asarray(delta, dtype=float)
    _check_upper(delta, a.shape[0])
    # x (I - D) = a  <=>  (I - D)' x' = a'  (lower triangular, unit diagonal)
    return linalg.solve_triangular(np.eye(a.shape[0]) - delta, a, trans="T",
                                   unit_diagonal=True)
