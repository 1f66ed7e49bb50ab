from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
import scipy.linalg

from .channel import GoalSubspace
from .matrep import SuperOp, vec
from .utils import (
    EIG_TOL,
    DimensionError,
    SpectralObstructionError,
    check_density,
    condition_number,
    real_value,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesConfig:
    tail_threshold: float = 1e-12
    patience: int = 64
    max_steps: int = 10 ** 6
    plateau_tol: float = 1e-6
    record_terms: int = 10_000


@dataclass
class MonitorSeries:
    """
    First-visit probabilities pi_r = Tr(PP T (QQ T)^(r-1) rho) summed until
    the tail is negligible.

    tau is infinite when the hitting probability plateaus below one.
    """

    terms: List[Tuple[int, float]] = field(default_factory=list)
    cumulative_prob: float = 0.0
    partial_tau: float = 0.0
    truncated_at: int = 0
    converged: bool = False
    diverged: bool = False

    @property
    def hitting_probability(self) -> float:
        return self.cumulative_prob

    @property
    def tau(self) -> float:
        return math.inf if self.diverged else self.partial_tau


def _check_dims(superop: SuperOp, subspace: GoalSubspace) -> None:
    if subspace.ambient_dim != superop.dim:
        raise DimensionError(
            f"Subspace lives in C^{subspace.ambient_dim}, channel acts on {superop.dim}x{superop.dim}"
        )


def _probability(value: complex) -> float:
    return min(max(real_value(value, "monitoring probability"), 0.0), 1.0)


def step_prob(superop: SuperOp, subspace: GoalSubspace, rho, r: int) -> float:
    """Probability Tr(PP T^r rho) of finding the walk in V at step r."""
    _check_dims(superop, subspace)
    rho = check_density(rho)
    if r < 1:
        raise ValueError(f"Step index must be at least 1, got {r}")
    state = np.linalg.matrix_power(superop.mat, r) @ vec(rho)
    return _probability(vec(subspace.P.T) @ state)


def first_visit_series(
    superop: SuperOp,
    subspace: GoalSubspace,
    rho,
    config: SeriesConfig = SeriesConfig(),
) -> MonitorSeries:
    _check_dims(superop, subspace)
    rho = check_density(rho)
    reader = vec(subspace.P.T)
    qq = subspace.QQ.mat
    state = vec(rho).astype(complex)

    series = MonitorSeries()
    quiet = 0
    for r in range(1, config.max_steps + 1):
        image = superop.mat @ state
        pi_r = _probability(reader @ image)
        state = qq @ image
        series.cumulative_prob += pi_r
        series.partial_tau += r * pi_r
        series.truncated_at = r
        if r <= config.record_terms:
            series.terms.append((r, pi_r))
        quiet = quiet + 1 if r * pi_r < config.tail_threshold else 0
        if quiet >= config.patience:
            series.converged = True
            break

    if series.converged and series.cumulative_prob < 1 - config.plateau_tol:
        series.diverged = True
    if not series.converged:
        logger.warning(
            "monitoring series hit the %d step cap (cumulative probability %.12g)",
            config.max_steps, series.cumulative_prob,
        )
    logger.debug(
        "series stopped at r=%d: probability %.12g, partial tau %.12g",
        series.truncated_at, series.cumulative_prob, series.partial_tau,
    )
    return series


def generating_function(superop: SuperOp, subspace: GoalSubspace, z: complex, tol: float = EIG_TOL) -> SuperOp:
    """
    G(z) = z T (I - z QQ T)^-1.

    Raises
        SpectralObstructionError - If 1 - z*lambda vanishes for an eigenvalue of QQ T.
    """
    _check_dims(superop, subspace)
    monitored = subspace.QQ.mat @ superop.mat
    spectrum = scipy.linalg.eigvals(monitored)
    offending = [complex(x) for x in spectrum if abs(1 - z * x) < tol]
    if offending:
        raise SpectralObstructionError(
            f"I - zQQT is singular at z={z}: eigenvalues {offending}", eigenvalues=offending
        )
    resolvent = np.eye(monitored.shape[0]) - z * monitored
    condition_number(resolvent, "I - zQQT")
    lu = scipy.linalg.lu_factor(resolvent)
    inverse = scipy.linalg.lu_solve(lu, np.eye(monitored.shape[0]))
    return SuperOp(z * superop.mat @ inverse, superop.dim)
