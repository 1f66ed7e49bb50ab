from __future__ import annotations

import logging
from typing import Iterable, Optional

import numpy as np
import scipy.linalg

from ..ginverse import GroupInverse, group_inverse
from ..qmc import QMC
from ..utils import EIG_TOL, PreconditionError, condition_number, spectrum_near
from .types import QmcHittingOperators, SiteAvailability

logger = logging.getLogger(__name__)


def qmc_hitting_operators(q: QMC, targets: Optional[Iterable[int]] = None, tol: float = EIG_TOL) -> QmcHittingOperators:
    """
    K^(i) = Phi (I - QQ_i Phi)^-2 for each target site i (all sites by default).

    A site whose monitored map QQ_i Phi has 1 as an eigenvalue is marked
    unavailable instead of failing the whole computation.
    """
    targets = range(q.n_sites) if targets is None else sorted(set(targets))
    _, complements = q.site_projectors()
    order = q.rep.shape[0]
    ops = QmcHittingOperators(q.n_sites, q.k)
    for i in targets:
        q.site_slice(i)  # range check
        monitored = complements[i] @ q.rep
        near, offending = spectrum_near(scipy.linalg.eigvals(monitored), 1.0, tol)
        if near:
            logger.debug("site %d: 1 in spectrum of QQ_i Phi (%s), hitting operator unavailable", i, offending)
            ops.availability[i] = SiteAvailability(False, offending)
            continue
        resolvent = np.eye(order) - monitored
        condition_number(resolvent, f"I - QQ_{i} Phi")
        lu = scipy.linalg.lu_factor(resolvent)
        inverse = scipy.linalg.lu_solve(lu, np.eye(order))
        ops.operators[i] = q.rep @ inverse @ inverse
        ops.availability[i] = SiteAvailability(True)
    logger.debug("hitting operators available at sites %s", ops.available_sites)
    return ops


def first_step_operator_L(q: QMC, ops: QmcHittingOperators) -> np.ndarray:
    """
    L = K - (K - D) Phi. Every block satisfies Tr(L_ij rho) = Tr(rho).

    Raises
        PreconditionError - If some site has no hitting operator.
    """
    if not ops.is_complete:
        missing = sorted(set(range(q.n_sites)) - set(ops.available_sites))
        raise PreconditionError(
            f"L needs hitting operators at every site, missing {missing}", precondition="assumption-I"
        )
    k = ops.K
    return k - (k - ops.D) @ q.rep


def solvability_residual(q: QMC, ops: QmcHittingOperators, gi: Optional[GroupInverse] = None) -> float:
    """Largest entry of (L - D Phi)(I - A#A), A = I - Phi; zero when K A = L - D Phi is consistent."""
    gi = group_inverse(np.eye(q.rep.shape[0]) - q.rep) if gi is None else gi
    lhs = first_step_operator_L(q, ops) - ops.D @ q.rep
    return float(np.max(np.abs(lhs @ gi.ergodic_projector)))
