"""Sparse Bayesian posterior over the flattened grid, fit by expectation maximization.

The observation model treats each confidence as a precision weight, so a
record (cell m, observation y, confidence c) contributes c to the posterior
precision of cell m and c*y to its weighted observation sum.  Because every
sensing row is one-hot, the posterior covariance is exactly diagonal and the
update runs in O(M) per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveConfidence, NumericalFailure
from .grid import GridSpec
from .sensing import SensingDataset

JITTER_LADDER = (1e-12, 1e-10, 1e-8)


@dataclass
class EmConfig:
    max_iters: int = 100
    tol: float = 1e-6
    a_m: float = 0.1
    b_m: float = 1.0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if 1.0 + 2.0 * self.a_m == 0.0:
            raise ValueError("1 + 2*a_m must be nonzero")


@dataclass
class BeliefPosterior:
    """Gaussian posterior: mean, covariance, and per-cell responsibilities."""

    mean: np.ndarray
    covariance: np.ndarray
    responsibilities: np.ndarray
    iterations: int = 0

    @property
    def num_cells(self) -> int:
        return self.mean.shape[0]

    def variance_diagonal(self) -> np.ndarray:
        return np.diag(self.covariance).copy()


def _estep(weight_sums: np.ndarray, weighted_obs: np.ndarray, gamma: np.ndarray):
    """Posterior variance diagonal and mean for fixed responsibilities."""
    precision = 1.0 / gamma + weight_sums
    if not np.all(np.isfinite(precision)) or np.any(precision <= 0):
        raise NumericalFailure("posterior precision is singular or non-finite")
    v_diag = 1.0 / precision
    mu = v_diag * weighted_obs
    return v_diag, mu


def gamma_update(posterior: BeliefPosterior, a_m: float, b_m: float) -> np.ndarray:
    """One M-step: responsibilities from the current variance diagonal and mean."""
    v_diag = np.diag(posterior.covariance)
    return (v_diag + posterior.mean**2 + 2.0 * b_m) / (1.0 + 2.0 * a_m)


def em_posterior(dataset: SensingDataset, grid: GridSpec, em_cfg: EmConfig | None = None) -> BeliefPosterior:
    """Alternate E and M steps until the responsibilities settle.

    Initialization is unit responsibilities.  Stops when the largest
    responsibility change drops below em_cfg.tol or max_iters is reached.
    """
    cfg = em_cfg or EmConfig()
    m_cells = grid.num_cells
    for rec in dataset:
        if rec.confidence_c <= 0:
            raise NonPositiveConfidence(f"record confidence {rec.confidence_c} must be > 0")

    d = dataset.weight_sums()
    s = dataset.weighted_observations()
    gamma = np.ones(m_cells)
    v_diag = gamma.copy()
    mu = np.zeros(m_cells)
    iters = 0
    for iters in range(1, cfg.max_iters + 1):
        v_diag, mu = _estep(d, s, gamma)
        gamma_new = (v_diag + mu**2 + 2.0 * cfg.b_m) / (1.0 + 2.0 * cfg.a_m)
        delta = np.max(np.abs(gamma_new - gamma)) if m_cells else 0.0
        gamma = gamma_new
        if delta < cfg.tol:
            break
    return BeliefPosterior(mean=mu, covariance=np.diag(v_diag), responsibilities=gamma, iterations=iters)


def jittered_cholesky(covariance: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, escalating diagonal jitter on failure."""
    try:
        return np.linalg.cholesky(covariance)
    except np.linalg.LinAlgError:
        pass
    eye = np.eye(covariance.shape[0])
    for jitter in JITTER_LADDER:
        try:
            return np.linalg.cholesky(covariance + jitter * eye)
        except np.linalg.LinAlgError:
            continue
    raise NumericalFailure(f"Cholesky failed after jitter up to {JITTER_LADDER[-1]}")


def sample_posterior(posterior: BeliefPosterior, rng: np.random.Generator) -> np.ndarray:
    """One draw from N(mean, covariance) using the jittered Cholesky factor."""
    chol = jittered_cholesky(posterior.covariance)
    z = rng.standard_normal(posterior.num_cells)
    return posterior.mean + chol @ z
