"""Thompson-sampling action selection.

One belief sample stands in for the truth; each candidate action is scored
by how far the posterior estimate after the pretended measurements would
land from that sample, plus a small penalty when the thresholded
most-confident sets disagree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .actions import CandidateAction, enumerate_candidates
from .belief import BeliefPosterior, sample_posterior
from .errors import NoCandidates
from .geometry import ZonePolygon
from .grid import GridSpec
from .sensing import SensingDataset

DEFAULT_LAMBDA = 0.01
DEFAULT_C_PLAN = 1.0


@dataclass(frozen=True)
class LossBreakdown:
    """The two loss terms and their weighted total for one candidate."""

    l2_term: float
    indicator_term: int
    lambda_weight: float
    total: float
    candidate_id: int = -1

    def __post_init__(self):
        if self.l2_term < 0:
            raise ValueError("l2 term must be nonnegative")
        if self.indicator_term not in (0, 1):
            raise ValueError("indicator term must be 0 or 1")


@dataclass(frozen=True)
class GutsConfig:
    lambda_weight: float = DEFAULT_LAMBDA
    c_plan: float = DEFAULT_C_PLAN

    def __post_init__(self):
        if self.lambda_weight < 0:
            raise ValueError("lambda must be nonnegative")
        if self.c_plan <= 0:
            raise ValueError("c_plan must be positive")


def hypothetical_estimate(
    dataset: SensingDataset,
    candidate: CandidateAction,
    beta_sample: np.ndarray,
    responsibilities: np.ndarray,
) -> np.ndarray:
    """Posterior mean after pretending the candidate's planned rows observed
    the sampled belief.

    Because every sensing row is one-hot, the joint precision is diagonal and
    the estimate decomposes per cell: past weighted sums plus planned weight
    on the sampled value, divided by total precision.  Cells untouched by
    both past data and the candidate come out exactly zero.
    """
    gamma = np.asarray(responsibilities, dtype=float)
    if np.any(gamma <= 0):
        raise ValueError("responsibilities must be positive")
    numer = dataset.weighted_observations().copy()
    denom = 1.0 / gamma + dataset.weight_sums()
    for row in candidate.planned_rows:
        numer[row.cell_index] += row.confidence_c * beta_sample[row.cell_index]
        denom[row.cell_index] += row.confidence_c
    return numer / denom


def indicator(beta_sample: np.ndarray, beta_hat: np.ndarray) -> int:
    """1 when the above-half-maximum sets of the two vectors differ, else 0."""
    beta_sample = np.asarray(beta_sample, dtype=float)
    beta_hat = np.asarray(beta_hat, dtype=float)
    if beta_sample.shape != beta_hat.shape:
        raise ValueError("vectors must have equal length")
    picked_sample = beta_sample > np.max(beta_sample) / 2.0
    picked_hat = beta_hat > np.max(beta_hat) / 2.0
    return 0 if np.array_equal(picked_sample, picked_hat) else 1


def evaluate_loss(
    beta_sample: np.ndarray,
    beta_hat: np.ndarray,
    lambda_weight: float = DEFAULT_LAMBDA,
    candidate_id: int = -1,
) -> LossBreakdown:
    if lambda_weight < 0:
        raise ValueError("lambda must be nonnegative")
    l2 = float(np.linalg.norm(np.asarray(beta_sample, dtype=float) - np.asarray(beta_hat, dtype=float)))
    ind = indicator(beta_sample, beta_hat)
    return LossBreakdown(
        l2_term=l2,
        indicator_term=ind,
        lambda_weight=lambda_weight,
        total=l2 + lambda_weight * ind,
        candidate_id=candidate_id,
    )


def select_action(
    dataset: SensingDataset,
    grid: GridSpec,
    zone: ZonePolygon,
    position,
    responsibilities: np.ndarray,
    rng: np.random.Generator,
    cfg: GutsConfig | None = None,
    robot_id: int = 0,
    beta_sample: np.ndarray | None = None,
) -> tuple[CandidateAction, LossBreakdown]:
    """Draw one belief sample and return the minimum-loss candidate.

    Exact loss ties are resolved by a uniform draw from the seeded stream
    over the tie set ordered by goal cell, so the outcome does not depend on
    candidate evaluation order.  Passing beta_sample skips the draw, which
    pins the sample for tests and replay tooling.
    """
    if cfg is None:
        cfg = GutsConfig()
    candidates = enumerate_candidates(grid, zone, position, c_plan=cfg.c_plan, robot_id=robot_id)
    if not candidates:
        raise NoCandidates("no candidate actions in zone")
    gamma = np.asarray(responsibilities, dtype=float)
    if beta_sample is None:
        precision = 1.0 / gamma + dataset.weight_sums()
        v_diag = 1.0 / precision
        mu = v_diag * dataset.weighted_observations()
        posterior = BeliefPosterior(
            mean=mu,
            covariance=np.diag(v_diag),
            responsibilities=gamma,
        )
        beta_sample = sample_posterior(posterior, rng)

    losses = []
    for idx, cand in enumerate(candidates):
        beta_hat = hypothetical_estimate(dataset, cand, beta_sample, gamma)
        losses.append(evaluate_loss(beta_sample, beta_hat, cfg.lambda_weight, candidate_id=idx))

    best_total = min(b.total for b in losses)
    tie_ids = [b.candidate_id for b in losses if b.total == best_total]
    tie_ids.sort(key=lambda i: candidates[i].goal_cell)
    if len(tie_ids) == 1:
        chosen = tie_ids[0]
    else:
        chosen = tie_ids[int(rng.integers(len(tie_ids)))]
    return candidates[chosen], losses[chosen]
