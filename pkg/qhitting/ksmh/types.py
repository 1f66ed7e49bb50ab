from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional

import numpy as np

from ..utils import DimensionError, SpectralObstructionError

KernelVariant = Literal["standard", "omega-corrected", "group"]
TauMethod = Literal["series", "analytic-K", "ksmh-ginverse", "ksmh-group"]

TAU_METHODS = ("series", "analytic-K", "ksmh-ginverse", "ksmh-group")


@dataclass
class SiteAvailability:
    available: bool
    offending: List[complex] = field(default_factory=list)


def _block(matrix: np.ndarray, i: int, j: int, size: int) -> np.ndarray:
    return matrix[i * size:(i + 1) * size, j * size:(j + 1) * size]


@dataclass
class QmcHittingOperators:
    """
    Mean hitting time operators of a QMC.

    operators[i] is K^(i) = Phi (I - QQ_i Phi)^-2 for every computable
    target site i; block (i, j) of it, K_ij, gives the mean time to reach
    site i from a density at site j. Sites where 1 is an eigenvalue of
    QQ_i Phi are listed in availability with the offending eigenvalues.
    """

    n_sites: int
    k: int
    operators: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    availability: Dict[int, SiteAvailability] = field(default_factory=dict)

    @property
    def block_size(self) -> int:
        return self.k * self.k

    @property
    def order(self) -> int:
        return self.n_sites * self.block_size

    @property
    def available_sites(self) -> List[int]:
        return sorted(i for i, a in self.availability.items() if a.available)

    @property
    def is_complete(self) -> bool:
        return self.available_sites == list(range(self.n_sites))

    def block(self, i: int, j: int) -> np.ndarray:
        """
        Raises
            SpectralObstructionError - If K^(i) does not exist.
        """
        if i not in self.operators:
            offending = self.availability.get(i, SiteAvailability(False)).offending
            raise SpectralObstructionError(
                f"Hitting operator for site {i} is unavailable", eigenvalues=offending
            )
        return _block(self.operators[i], i, j, self.block_size)

    @property
    def D(self) -> np.ndarray:
        """diag(K_11, ..., K_nn); blocks of unavailable sites are zero."""
        d = np.zeros((self.order, self.order), dtype=complex)
        size = self.block_size
        for i in self.operators:
            d[i * size:(i + 1) * size, i * size:(i + 1) * size] = self.block(i, i)
        return d

    @property
    def K(self) -> np.ndarray:
        """Grid [K_ij]; rows of unavailable sites are zero."""
        k = np.zeros((self.order, self.order), dtype=complex)
        size = self.block_size
        for i, op in self.operators.items():
            k[i * size:(i + 1) * size, :] = op[i * size:(i + 1) * size, :]
        return k


@dataclass
class KsmhKernel:
    kernel: np.ndarray
    variant: KernelVariant
    ginverse_kind: str
    n_sites: int
    k: int

    def __post_init__(self) -> None:
        order = self.n_sites * self.k * self.k
        if self.kernel.shape != (order, order):
            raise DimensionError(
                f"Kernel of shape {self.kernel.shape} does not fit {self.n_sites} sites with k={self.k}"
            )

    @property
    def block_size(self) -> int:
        return self.k * self.k

    def block(self, i: int, j: int) -> np.ndarray:
        return _block(self.kernel, i, j, self.block_size)


@dataclass
class TauReport:
    tau: float
    method: TauMethod
    preconditions: Dict[str, bool] = field(default_factory=dict)
    artifacts: Dict[str, Any] = field(default_factory=dict, repr=False)
    notes: List[str] = field(default_factory=list)


@dataclass
class LimitStudyReport:
    """
    Per p (largest first): tau_p, max |G_p| entry, the g-inverse G_p and
    the kernel H_p. The p -> 0 extrapolate of H_p and, when it exists,
    the group-inverse kernel of M' close the study.
    """

    p_values: List[float]
    taus: List[float]
    g_norms: List[float]
    ginverses: List[np.ndarray] = field(repr=False)
    kernels: List[np.ndarray] = field(repr=False)
    extrapolated: np.ndarray = field(repr=False)
    tau_extrapolated: float
    g_diverges: bool
    h_converges: bool
    assumption_one_at_zero: bool
    direct: Optional[np.ndarray] = field(default=None, repr=False)
    tau_direct: Optional[float] = None
