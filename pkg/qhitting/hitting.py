from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Literal, Optional, Sequence

import numpy as np
import scipy.linalg

from .channel import GoalSubspace, assumption_one_holds, validate
from .matrep import SuperOp, vec
from .utils import (
    EIG_TOL,
    NumericalError,
    ReducibleError,
    SpectralObstructionError,
    ValidationError,
    as_square,
    check_density,
    condition_number,
    pure_state,
    real_value,
    trace_of_vec,
)

logger = logging.getLogger(__name__)

Side = Literal["in_V", "in_V_perp"]
BLOCK_NAMES = ("11", "12", "21", "22")


def block_representation(superop: SuperOp, subspace: GoalSubspace) -> Dict[str, SuperOp]:
    """
    Split a map along V: "11" = (I-QQ) X (I-QQ), "12" = (I-QQ) X QQ,
    "21" = QQ X (I-QQ), "22" = QQ X QQ.
    """
    qq = subspace.QQ.mat
    pp = np.eye(qq.shape[0]) - qq
    sides = {"1": pp, "2": qq}
    return {
        name: SuperOp(sides[name[0]] @ superop.mat @ sides[name[1]], superop.dim)
        for name in BLOCK_NAMES
    }


@dataclass
class HittingMaps:
    H: SuperOp
    K: SuperOp
    subspace: GoalSubspace
    resolvent: np.ndarray = field(repr=False)
    H_blocks: Dict[str, SuperOp] = field(default_factory=dict, repr=False)
    K_blocks: Dict[str, SuperOp] = field(default_factory=dict, repr=False)

    @property
    def H_11(self) -> SuperOp:
        return self.H_blocks["11"]

    @property
    def H_12(self) -> SuperOp:
        return self.H_blocks["12"]

    @property
    def K_11(self) -> SuperOp:
        return self.K_blocks["11"]

    @property
    def K_12(self) -> SuperOp:
        return self.K_blocks["12"]

    @property
    def K_21(self) -> SuperOp:
        return self.K_blocks["21"]

    @property
    def K_22(self) -> SuperOp:
        return self.K_blocks["22"]


def analytic_HK(superop: SuperOp, subspace: GoalSubspace, tol: float = EIG_TOL) -> HittingMaps:
    """
    Hitting probability map H = T(I - QQ T)^-1 and mean hitting time map
    K = T(I - QQ T)^-2.

    Raises
        SpectralObstructionError - If 1 is an eigenvalue of QQ T.
    """
    check = assumption_one_holds(superop, subspace, tol)
    if not check.holds:
        raise SpectralObstructionError(
            f"1 is an eigenvalue of QQ T (offending {check.offending})", eigenvalues=check.offending
        )
    order = superop.mat.shape[0]
    monitored = np.eye(order) - subspace.QQ.mat @ superop.mat
    condition_number(monitored, "I - QQ T")
    lu = scipy.linalg.lu_factor(monitored)
    resolvent = scipy.linalg.lu_solve(lu, np.eye(order))
    h = SuperOp(superop.mat @ resolvent, superop.dim)
    k = SuperOp(h.mat @ resolvent, superop.dim)
    return HittingMaps(
        H=h,
        K=k,
        subspace=subspace,
        resolvent=resolvent,
        H_blocks=block_representation(h, subspace),
        K_blocks=block_representation(k, subspace),
    )


def _trace_against(block: SuperOp, rho: np.ndarray) -> complex:
    return trace_of_vec(block.mat @ vec(rho), block.dim)


def tau_from_K(maps: HittingMaps, rho, side: Side = "in_V_perp") -> float:
    """
    Mean hitting time Tr(K_12 rho) for rho in V-perp, or mean return time
    Tr(K_11 rho) for rho in V.

    Raises
        ValidationError - If rho is not a density supported on the declared side.
    """
    rho = check_density(rho)
    if not maps.subspace.supports(rho, side):
        raise ValidationError(f"rho is not supported {side.replace('_', ' ')}")
    block = maps.K_11 if side == "in_V" else maps.K_12
    tau = real_value(_trace_against(block, rho), "mean hitting time")
    if tau < 1 - EIG_TOL:
        raise NumericalError(f"Mean hitting time {tau:.12g} is below one step")
    return tau


def hitting_probability(maps: HittingMaps, rho) -> float:
    """Tr((I - QQ) H rho); equals 1 whenever 1 is outside the spectrum of QQ T."""
    rho = check_density(rho)
    pp = np.eye(maps.H.mat.shape[0]) - maps.subspace.QQ.mat
    return real_value(trace_of_vec(pp @ maps.H.mat @ vec(rho), maps.H.dim), "hitting probability")


@dataclass
class FundamentalMap:
    Z: SuperOp
    pi: np.ndarray = field(repr=False)

    def residual(self, superop: SuperOp) -> float:
        a = np.eye(superop.mat.shape[0]) - superop.mat
        return float(np.max(np.abs(a @ self.Z.mat @ a - a)))


def fundamental_map(superop: SuperOp, tol: float = EIG_TOL) -> FundamentalMap:
    """
    Z = (I - T + |vec pi><vec I|)^-1 for an irreducible channel with fixed density pi.

    Raises
        ReducibleError - If T is not irreducible.
        NumericalError - If Z fails (I - T) Z (I - T) = I - T.
    """
    diagnostics = validate(superop)
    if not diagnostics.is_irreducible:
        raise ReducibleError("The fundamental map needs an irreducible channel")
    n = superop.dim
    pi = diagnostics.fixed_state
    omega = np.outer(vec(pi), vec(np.eye(n)))
    order = n * n
    z = scipy.linalg.inv(np.eye(order) - superop.mat + omega)
    result = FundamentalMap(SuperOp(z, n), pi)
    residual = result.residual(superop)
    if residual > tol * max(1.0, float(np.linalg.norm(np.eye(order) - superop.mat, 2))):
        raise NumericalError(f"Fundamental map is not a g-inverse of I - T (residual {residual:.3e})")
    return result


def mhtf_tau(
    superop: SuperOp,
    subspace: GoalSubspace,
    psi,
    phi,
    z: Optional[FundamentalMap] = None,
    maps: Optional[HittingMaps] = None,
) -> float:
    """
    Mean hitting time of V from phi through the fundamental map:

        tau = Tr(K_11 (Z_11 rho_psi - Z_12 rho_phi))

    with psi any unit vector of V and phi a unit vector of V-perp.
    """
    if not subspace.contains(psi):
        raise ValidationError("psi must lie in V")
    if not subspace.is_orthogonal(phi):
        raise ValidationError("phi must be orthogonal to V")
    rho_psi = pure_state(psi, "psi")
    rho_phi = pure_state(phi, "phi")
    z = fundamental_map(superop) if z is None else z
    maps = analytic_HK(superop, subspace) if maps is None else maps
    z_blocks = block_representation(z.Z, subspace)
    inner = z_blocks["11"].mat @ vec(rho_psi) - z_blocks["12"].mat @ vec(rho_phi)
    value = trace_of_vec(maps.K_11.mat @ inner, superop.dim)
    return real_value(value, "mean hitting time")


def mhtf_psi_spread(superop: SuperOp, subspace: GoalSubspace, phi, psis: Sequence) -> float:
    """Largest difference of mhtf_tau over the given choices of psi in V."""
    z = fundamental_map(superop)
    maps = analytic_HK(superop, subspace)
    values = [mhtf_tau(superop, subspace, psi, phi, z, maps) for psi in psis]
    spread = max(values) - min(values)
    logger.debug("mhtf spread over %d choices of psi: %.3e", len(values), spread)
    return spread


def classical_mhtf(p) -> np.ndarray:
    """
    Mean first passage times of an irreducible column-stochastic chain.

    Entry [i, j] is the mean time to reach i from j, (Z_ii - Z_ij) / pi_i,
    with Z = (I - P + pi 1^T)^-1; the diagonal holds the return times 1 / pi_i.
    """
    p = np.asarray(as_square(p, "P").real)
    n = p.shape[0]
    _, _, vh = scipy.linalg.svd(np.eye(n) - p)
    pi = vh[-1].conj()
    pi = np.real(pi / pi.sum())
    if np.any(pi <= EIG_TOL):
        raise ReducibleError("Chain has no strictly positive stationary distribution")
    z = scipy.linalg.inv(np.eye(n) - p + np.outer(pi, np.ones(n)))
    m = (np.diag(z)[:, None] - z) / pi[:, None]
    m[np.diag_indices(n)] = 1 / pi
    return m
