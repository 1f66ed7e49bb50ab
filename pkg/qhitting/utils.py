from __future__ import annotations

import logging
import warnings
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)


ATOL: float = 1e-10
EIG_TOL: float = 1e-9
PSD_TOL: float = 1e-10
RANK_RTOL: float = 1e-10
IMAG_TOL: float = 1e-9
PAIRING_TOL: float = 1e-12
COND_WARN: float = 1e10
SPLIT_COND_WARN: float = 1e8
FIXED_STATE_TOL: float = 1e-8
HERMITIAN_TOL: float = 1e-8
NORM_TOL: float = 1e-8
LIMIT_TOL: float = 1e-4
EXTRAPOLATION_FLOOR: float = 1e-13
DISPLAY_IMAG_TOL: float = 1e-12


class QHittingError(Exception):
    def __init__(self, message="Hitting-time computation failed"):
        self.message = message
        super().__init__(self.message)


class DimensionError(QHittingError, ValueError):
    def __init__(self, message="Dimensions do not agree"):
        super().__init__(message)


class ValidationError(QHittingError, ValueError):
    def __init__(self, message="Input failed validation"):
        super().__init__(message)


class ParameterError(QHittingError, ValueError):
    def __init__(self, message="Parameter outside its admissible range"):
        super().__init__(message)


class SpectralObstructionError(QHittingError):
    def __init__(self, message="1 belongs to the spectrum of the monitored map", eigenvalues: Sequence[complex] = ()):
        self.eigenvalues = [complex(x) for x in eigenvalues]
        super().__init__(message)


class NoGroupInverseError(QHittingError):
    def __init__(self, message="Matrix has index >= 2 and no group inverse", index: int = 2):
        self.index = index
        super().__init__(message)


class ReducibleError(QHittingError):
    def __init__(self, message="Stationary density is not unique; use the group-inverse route"):
        super().__init__(message)


class PreconditionError(QHittingError):
    def __init__(self, message="Precondition not met", precondition: str = "unknown"):
        self.precondition = precondition
        super().__init__(message)


class NumericalError(QHittingError):
    def __init__(self, message="Numerical failure"):
        super().__init__(message)


class SpecError(QHittingError, ValueError):
    def __init__(self, message="Channel spec is malformed", path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


class NumericalWarning(UserWarning):
    pass


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """
    Coerce to a finite complex 2-D array.

    Raises
        DimensionError - If the input is not two dimensional.
        ValueError - If any entry is NaN or infinite.
    """
    matrix = np.asarray(value, dtype=complex)
    if matrix.ndim != 2:
        raise DimensionError(f"{name} must be two dimensional, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"{name} contains non-finite entries")
    return matrix


def as_square(value, name: str = "matrix") -> np.ndarray:
    matrix = as_matrix(value, name)
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {matrix.shape}")
    return matrix


def hermitize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2


def min_eigenvalue(matrix: np.ndarray) -> float:
    return float(scipy.linalg.eigvalsh(hermitize(matrix))[0])


def is_psd(matrix: np.ndarray, tol: float = PSD_TOL) -> bool:
    return min_eigenvalue(matrix) >= -tol


def is_density(matrix, atol: float = ATOL) -> bool:
    rho = np.asarray(matrix, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        return False
    if abs(np.trace(rho) - 1) > atol:
        return False
    return is_psd(rho)


def check_density(matrix, name: str = "rho", atol: float = ATOL) -> np.ndarray:
    rho = as_square(matrix, name)
    if not is_density(rho, atol):
        raise ValidationError(f"{name} is not a density matrix (Hermitian, PSD, unit trace)")
    return rho


def pure_state(vector, name: str = "state", atol: float = ATOL) -> np.ndarray:
    psi = np.asarray(vector, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > atol:
        raise ValidationError(f"{name} must be a unit vector, got norm {norm:.3e}")
    return np.outer(psi, psi.conj())


def real_value(value: complex, what: str = "value", tol: float = IMAG_TOL) -> float:
    value = complex(value)
    if abs(value.imag) > tol:
        raise NumericalError(f"{what} has imaginary part {value.imag:.3e} above {tol:.0e}")
    return value.real


def trace_of_vec(vector: np.ndarray, dim: int) -> complex:
    return complex(np.asarray(vector).reshape(dim, dim).trace())


def singular_values(matrix: np.ndarray) -> np.ndarray:
    return scipy.linalg.svd(matrix, compute_uv=False)


def numerical_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """
    Rank with singular values below rtol * sigma_max counted as zero.

    A singular value within a factor 10 of the threshold makes the decision
    ambiguous and emits a NumericalWarning.
    """
    if matrix.size == 0:
        return 0
    sigma = singular_values(matrix)
    if sigma[0] == 0:
        return 0
    threshold = rtol * sigma[0]
    ambiguous = (sigma > threshold / 10) & (sigma < threshold * 10)
    if np.any(ambiguous):
        warnings.warn(
            f"Rank decision ambiguous: singular values {sigma[ambiguous]} near threshold {threshold:.3e}",
            NumericalWarning,
        )
    return int(np.sum(sigma > threshold))


def kernel_dimension(matrix: np.ndarray, tol: float = EIG_TOL) -> int:
    """Number of singular values below an absolute threshold."""
    sigma = singular_values(matrix)
    ambiguous = (sigma >= tol) & (sigma < 10 * tol)
    if np.any(ambiguous):
        warnings.warn(
            f"Kernel dimension ambiguous: singular values {sigma[ambiguous]} near {tol:.0e}",
            NumericalWarning,
        )
    return int(np.sum(sigma < tol))


def condition_number(matrix: np.ndarray, what: str = "matrix", limit: float = COND_WARN) -> float:
    cond = float(np.linalg.cond(matrix))
    logger.debug("condition number of %s: %.3e", what, cond)
    if cond > limit:
        warnings.warn(f"{what} is ill-conditioned (condition number {cond:.3e})", NumericalWarning)
    return cond


def lagrange_at_zero(nodes: Sequence[float], values: Sequence[np.ndarray]) -> np.ndarray:
    # polynomial extrapolation of values(x) to x = 0
    weights: List[float] = []
    for i, xi in enumerate(nodes):
        w = 1.0
        for j, xj in enumerate(nodes):
            if i != j:
                w *= xj / (xj - xi)
        weights.append(w)
    return sum(w * v for w, v in zip(weights, values))


def sorted_spectrum(values: Sequence[complex]) -> List[complex]:
    return sorted((complex(v) for v in values), key=lambda z: (round(-abs(z), 12), round(np.angle(z), 12)))


def spectrum_near(values: Sequence[complex], target: complex, tol: float = EIG_TOL) -> Tuple[bool, List[complex]]:
    close = [complex(v) for v in values if abs(v - target) < tol]
    return bool(close), close
