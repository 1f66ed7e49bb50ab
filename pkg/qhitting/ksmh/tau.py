from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..channel import GoalSubspace, assumption_one_holds, validate
from ..ginverse import group_inverse, ksmh_ginverse
from ..hitting import analytic_HK, tau_from_K
from ..matrep import SuperOp, vec
from ..monitor import SeriesConfig, first_visit_series
from ..qmc import QMC
from ..utils import (
    EIG_TOL,
    DimensionError,
    PreconditionError,
    ReducibleError,
    check_density,
    real_value,
    trace_of_vec,
)
from .kernel import ksmh_kernel
from .operators import qmc_hitting_operators
from .types import TAU_METHODS, KsmhKernel, TauMethod, TauReport

logger = logging.getLogger(__name__)


def _trace_block(block: np.ndarray, rho: np.ndarray) -> float:
    return real_value(trace_of_vec(block @ vec(rho), rho.shape[0]), "mean hitting time")


def tau_irreducible_qmc(q: QMC, kernel: KsmhKernel, i: int, j: int, rho_j) -> float:
    """
    Mean time to reach site i from the density rho_j at site j: Tr(kernel_ij rho_j).

    Raises
        ReducibleError - If q has no unique stationary density.
    """
    if not q.has_unique_stationary():
        raise ReducibleError("Site hitting times through a g-inverse need a unique stationary density")
    rho_j = check_density(rho_j)
    if rho_j.shape != (q.k, q.k):
        raise DimensionError(f"rho_j has shape {rho_j.shape}, sites hold {q.k}x{q.k} blocks")
    if kernel.n_sites != q.n_sites or kernel.k != q.k:
        raise DimensionError("Kernel does not match the QMC")
    q.site_slice(i)
    q.site_slice(j)
    return _trace_block(kernel.block(i, j), rho_j)


def tau_channel(
    superop: SuperOp,
    subspace: GoalSubspace,
    rho,
    method: TauMethod = "ksmh-group",
    *,
    config: Optional[SeriesConfig] = None,
    dump: bool = False,
    tol: float = EIG_TOL,
) -> TauReport:
    """
    Mean hitting time of V from rho (supported in V-perp) by one of four routes:

        series          sum of r pi_r for the monitored walk
        analytic-K      Tr(K_12 rho) with K = T(I - QQ T)^-2
        ksmh-ginverse   Tr([D(I - G + G_d E)]_12 rho) on the induced QMC, T irreducible
        ksmh-group      Tr([D(I - A# + A#_d E)]_12 rho), 1 not an eigenvalue of QQ Phi

    Raises
        PreconditionError - Naming the failed precondition: "support",
            "irreducibility", "assumption-I" or "divergent-series".
    """
    if method not in TAU_METHODS:
        raise ValueError(f"Unknown method {method!r}, expected one of {TAU_METHODS}")
    rho = check_density(rho)
    if not subspace.supports(rho, "in_V_perp"):
        raise PreconditionError("rho must be supported in V-perp", precondition="support")
    report = TauReport(float("nan"), method, {"support": True})
    logger.debug("tau_channel: route %s", method)

    if method == "series":
        series = first_visit_series(superop, subspace, rho, config or SeriesConfig())
        if series.diverged:
            raise PreconditionError(
                f"Hitting probability plateaus at {series.cumulative_prob:.12g} < 1",
                precondition="divergent-series",
            )
        report.preconditions["series_converged"] = series.converged
        if not series.converged:
            report.notes.append(f"partial sum after {series.truncated_at} steps")
        report.tau = series.tau
        if dump:
            report.artifacts["series"] = series
        return report

    check = assumption_one_holds(superop, subspace, tol)
    report.preconditions["assumption_I"] = check.holds

    if method == "analytic-K":
        if not check.holds:
            raise PreconditionError(
                f"1 is an eigenvalue of QQ T (offending {check.offending})", precondition="assumption-I"
            )
        maps = analytic_HK(superop, subspace, tol)
        report.tau = tau_from_K(maps, rho, "in_V_perp")
        if dump:
            report.artifacts.update({"H": maps.H.mat, "K": maps.K.mat})
        return report

    q = QMC.induce(superop, subspace)
    e = q.block_constant_E()

    if method == "ksmh-ginverse":
        irreducible = validate(superop).is_irreducible
        report.preconditions["irreducible"] = irreducible
        if not irreducible:
            raise PreconditionError("The g-inverse route needs an irreducible channel", precondition="irreducibility")
        ops = qmc_hitting_operators(q, tol=tol)
        if 0 not in ops.available_sites:
            raise PreconditionError("No hitting operator for the goal site", precondition="assumption-I")
        gi = ksmh_ginverse(q)
        kernel = ksmh_kernel(ops.D, gi, e, n_sites=2, k=q.k)
        g_matrix = gi.g
    else:
        if not check.holds:
            raise PreconditionError(
                f"1 is an eigenvalue of QQ Phi (offending {check.offending})", precondition="assumption-I"
            )
        ops = qmc_hitting_operators(q, tol=tol)
        if 1 not in ops.available_sites:
            report.notes.append("K_22 unavailable: its D block is left zero")
        gi = group_inverse(np.eye(q.rep.shape[0]) - q.rep, tol)
        kernel = ksmh_kernel(ops.D, gi, e, n_sites=2, k=q.k)
        g_matrix = gi.asharp

    report.tau = _trace_block(kernel.block(0, 1), rho)
    if dump:
        report.artifacts.update({"Phi": q.rep, "D": ops.D, "G": g_matrix, "kernel": kernel.kernel})
    return report
