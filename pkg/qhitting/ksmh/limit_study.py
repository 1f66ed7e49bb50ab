from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from ..channel import GoalSubspace, assumption_one_holds, randomize, validate
from ..ginverse import group_inverse, hunter_ginverse
from ..matrep import SuperOp, vec
from ..qmc import QMC
from ..utils import (
    LIMIT_TOL,
    ParameterError,
    ReducibleError,
    check_density,
    lagrange_at_zero,
    real_value,
    trace_of_vec,
)
from .kernel import ksmh_kernel
from .operators import qmc_hitting_operators
from .types import LimitStudyReport

logger = logging.getLogger(__name__)


def _tau(kernel: np.ndarray, size: int, rho: np.ndarray) -> float:
    block = kernel[:size, size:2 * size]
    return real_value(trace_of_vec(block @ vec(rho), rho.shape[0]), "mean hitting time")


def kernel_limit_study(
    t: SuperOp,
    m_prime: SuperOp,
    subspace: GoalSubspace,
    p_values: Sequence[float],
    rho,
    t_vec=None,
    f_vec=None,
) -> LimitStudyReport:
    """
    Follow the KSMH kernel H_p of the randomized channel p T + (1 - p) M'
    as p goes to 0.

    For each p the g-inverse is G_p = (I - Phi_p + |t><e_I|)^-1 + |f><e_I|
    (t defaults to e_1, f to 0). The three smallest p are extrapolated to
    p = 0 and, when 1 is not an eigenvalue of QQ M', compared with the
    group-inverse kernel of M' itself.

    Raises
        ReducibleError - If T is not irreducible.
        ParameterError - If fewer than three p are given or one lies outside (0, 1].
    """
    rho = check_density(rho)
    p_values = [float(p) for p in p_values]
    if len(p_values) < 3:
        raise ParameterError("The limit study needs at least three values of p")
    if any(not 0 < p <= 1 for p in p_values):
        raise ParameterError(f"p must lie in (0, 1], got {p_values}")
    if not validate(t).is_irreducible:
        raise ReducibleError("The limit study needs an irreducible channel T")

    size = t.dim ** 2
    order = 2 * size
    first = np.zeros(order, dtype=complex)
    first[0] = 1
    t_vec = first if t_vec is None else t_vec

    ordered = sorted(p_values, reverse=True)
    ginverses, kernels, taus, norms = [], [], [], []
    for p in ordered:
        q = QMC.induce(randomize(t, m_prime, p), subspace)
        ops = qmc_hitting_operators(q)
        gi = hunter_ginverse(q, t=t_vec, u=q.e_i, g=f_vec)
        kernel = ksmh_kernel(ops.D, gi, q.block_constant_E(), n_sites=2, k=q.k).kernel
        ginverses.append(gi.g)
        kernels.append(kernel)
        taus.append(_tau(kernel, size, rho))
        norms.append(float(np.max(np.abs(gi.g))))
        logger.debug("p=%.6g: tau %.12g, max |G_p| %.6e", p, taus[-1], norms[-1])

    nodes = ordered[-3:]
    extrapolated = lagrange_at_zero(nodes, kernels[-3:])
    tau_extrapolated = _tau(extrapolated, size, rho)

    check = assumption_one_holds(m_prime, subspace)
    direct: Optional[np.ndarray] = None
    tau_direct: Optional[float] = None
    if check.holds:
        q0 = QMC.induce(m_prime, subspace)
        ops0 = qmc_hitting_operators(q0)
        gi0 = group_inverse(np.eye(q0.rep.shape[0]) - q0.rep)
        direct = ksmh_kernel(ops0.D, gi0, q0.block_constant_E(), n_sites=2, k=q0.k).kernel
        tau_direct = _tau(direct, size, rho)
    else:
        logger.info("1 is an eigenvalue of QQ M' (%s); no direct p = 0 kernel", check.offending)

    g_diverges = all(b > a for a, b in zip(norms, norms[1:]))
    steps = [float(np.max(np.abs(b - a))) for a, b in zip(kernels, kernels[1:])]
    if direct is not None:
        h_converges = float(np.max(np.abs(extrapolated[:size] - direct[:size]))) < LIMIT_TOL
    else:
        h_converges = len(steps) < 2 or steps[-1] <= steps[-2]

    return LimitStudyReport(
        p_values=ordered,
        taus=taus,
        g_norms=norms,
        ginverses=ginverses,
        kernels=kernels,
        extrapolated=extrapolated,
        tau_extrapolated=tau_extrapolated,
        g_diverges=g_diverges,
        h_converges=h_converges,
        assumption_one_at_zero=check.holds,
        direct=direct,
        tau_direct=tau_direct,
    )
