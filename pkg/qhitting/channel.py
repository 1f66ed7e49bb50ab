from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .ginverse import group_inverse
from .matrep import SuperOp, conj_pair, unvec, vec
from .utils import (
    ATOL,
    EIG_TOL,
    FIXED_STATE_TOL,
    HERMITIAN_TOL,
    PSD_TOL,
    DimensionError,
    NoGroupInverseError,
    ParameterError,
    ValidationError,
    as_matrix,
    as_square,
    hermitize,
    is_psd,
    kernel_dimension,
    min_eigenvalue,
    numerical_rank,
    sorted_spectrum,
    spectrum_near,
)

logger = logging.getLogger(__name__)


class KrausChannel:
    """
    Channel T(X) = sum_i V_i X V_i*.

    Args
        kraus (list of matrices) - the V_i, all square of the same order.
        check (bool) - refuse lists with sum_i V_i* V_i != I.

    Raises
        ValidationError - If check is set and the list is not trace preserving.
    """

    def __init__(self, kraus: Sequence, check: bool = True, atol: float = ATOL) -> None:
        operators = [as_square(op, f"kraus[{i}]") for i, op in enumerate(kraus)]
        if not operators:
            raise ValidationError("At least one Kraus operator is required")
        dim = operators[0].shape[0]
        for i, op in enumerate(operators):
            if op.shape != (dim, dim):
                raise DimensionError(f"kraus[{i}] has shape {op.shape}, expected {(dim, dim)}")
        self.kraus = tuple(operators)
        self.dim = dim
        if check and self.trace_deviation > atol:
            raise ValidationError(
                f"Kraus operators are not trace preserving: ||sum V*V - I|| = {self.trace_deviation:.3e}"
            )

    @classmethod
    def unitary(cls, u, atol: float = ATOL) -> KrausChannel:
        u = as_square(u, "unitary")
        deviation = np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0]), 2)
        if deviation > atol:
            raise ValidationError(f"Matrix is not unitary: ||UU* - I|| = {deviation:.3e}")
        return cls([u], atol=atol)

    @property
    def trace_deviation(self) -> float:
        total = sum(op.conj().T @ op for op in self.kraus)
        return float(np.linalg.norm(total - np.eye(self.dim), 2))

    def represent(self) -> SuperOp:
        return SuperOp(sum(conj_pair(op) for op in self.kraus), self.dim)

    def __call__(self, rho) -> np.ndarray:
        rho = as_square(rho, "rho")
        return sum(op @ rho @ op.conj().T for op in self.kraus)

    def __repr__(self) -> str:
        return f"KrausChannel(dim={self.dim}, rank={len(self.kraus)})"


class GoalSubspace:
    """
    Subspace V of C^n with P the projection onto V and Q = I - P.

    PP, QQ and RR represent X -> PXP, X -> QXQ and X -> PXQ + QXP.
    """

    def __init__(self, vectors, ambient_dim: Optional[int] = None, atol: float = ATOL) -> None:
        columns = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
        if not columns:
            if ambient_dim is None:
                raise DimensionError("An empty subspace needs its ambient dimension")
            basis = np.zeros((ambient_dim, 0), dtype=complex)
        else:
            sizes = {c.size for c in columns}
            if len(sizes) != 1:
                raise DimensionError(f"Basis vectors have different lengths {sorted(sizes)}")
            stacked = np.column_stack(columns)
            if ambient_dim is not None and stacked.shape[0] != ambient_dim:
                raise DimensionError(f"Basis vectors have length {stacked.shape[0]}, expected {ambient_dim}")
            basis = scipy.linalg.orth(stacked)
            if basis.shape[1] != len(columns):
                raise ValidationError("Subspace basis vectors are linearly dependent")
        n = basis.shape[0]
        self.ambient_dim = n
        self.basis = basis
        self.P = basis @ basis.conj().T
        self.Q = np.eye(n) - self.P
        self.PP = SuperOp(conj_pair(self.P), n)
        self.QQ = SuperOp(conj_pair(self.Q), n)
        self.RR = SuperOp(np.eye(n * n) - self.PP.mat - self.QQ.mat, n)
        self.atol = atol

    @classmethod
    def span(cls, *vectors) -> GoalSubspace:
        return cls(list(vectors))

    @classmethod
    def whole(cls, n: int) -> GoalSubspace:
        return cls(list(np.eye(n)))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, psi) -> bool:
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        return bool(np.linalg.norm(self.Q @ psi) <= self.atol)

    def is_orthogonal(self, phi) -> bool:
        phi = np.asarray(phi, dtype=complex).reshape(-1)
        return bool(np.linalg.norm(self.P @ phi) <= self.atol)

    def supports(self, rho, side: str) -> bool:
        """True when rho lives in V ("in_V") or in its complement ("in_V_perp")."""
        if side not in ("in_V", "in_V_perp"):
            raise ValueError(f"side must be 'in_V' or 'in_V_perp', got {side!r}")
        rho = as_square(rho, "rho")
        proj = self.P if side == "in_V" else self.Q
        return bool(np.max(np.abs(proj @ rho @ proj - rho)) <= self.atol)

    def __repr__(self) -> str:
        return f"GoalSubspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


@dataclass
class ChannelDiagnostics:
    is_trace_preserving: bool
    is_unital: bool
    fixed_space_dim: int
    is_irreducible: bool
    peripheral_eigenvalues: List[complex]
    jordan_trivial_at_1: bool
    trace_deviation: float = 0.0
    is_completely_positive: bool = True
    fixed_state: Optional[np.ndarray] = field(default=None, repr=False)
    min_fixed_eigenvalue: Optional[float] = None

    @property
    def is_valid(self) -> bool:
        return self.is_trace_preserving and self.is_completely_positive


class AssumptionCheck(NamedTuple):
    holds: bool
    offending: List[complex]
    spectrum: List[complex]


ChannelLike = Union[KrausChannel, SuperOp]


def represent(ch: KrausChannel) -> SuperOp:
    return ch.represent()


def _superop(ch: ChannelLike) -> SuperOp:
    if isinstance(ch, KrausChannel):
        return ch.represent()
    if isinstance(ch, SuperOp):
        return ch
    raise TypeError(f"Expected KrausChannel or SuperOp, got {type(ch).__name__}")


def trace_deviation(superop: SuperOp) -> float:
    e = vec(np.eye(superop.dim))
    return float(np.max(np.abs(e @ superop.mat - e)))


def validate(ch: ChannelLike, atol: float = ATOL, tol: float = EIG_TOL) -> ChannelDiagnostics:
    """
    Diagnose a channel: trace preservation, unitality, fixed space,
    peripheral spectrum, Jordan structure at 1 and irreducibility.

    Irreducible means a one dimensional fixed space whose density is
    strictly positive.
    """
    superop = _superop(ch)
    n = superop.dim
    e = vec(np.eye(n))

    if isinstance(ch, KrausChannel):
        deviation = ch.trace_deviation
        cp = True
    else:
        deviation = trace_deviation(superop)
        cp = is_completely_positive(superop)
    tp = deviation <= atol
    unital = bool(np.max(np.abs(superop.mat @ e - e)) <= atol)

    eigenvalues = scipy.linalg.eigvals(superop.mat)
    peripheral = sorted_spectrum([x for x in eigenvalues if abs(x) > 1 - tol])

    a = superop.mat - np.eye(n * n)
    fixed_dim = kernel_dimension(a, tol)
    jordan_trivial = numerical_rank(a) == numerical_rank(a @ a)

    fixed_state = None
    min_eig = None
    irreducible = False
    if tp and fixed_dim >= 1:
        states = fixed_states(superop, tol)
        candidate = states[0]
        if abs(np.trace(candidate) - 1) <= FIXED_STATE_TOL and is_psd(candidate):
            fixed_state = candidate
            min_eig = min_eigenvalue(candidate)
            irreducible = fixed_dim == 1 and min_eig > tol

    logger.debug(
        "validate: tp=%s deviation=%.3e fixed_dim=%d irreducible=%s",
        tp, deviation, fixed_dim, irreducible,
    )
    return ChannelDiagnostics(
        is_trace_preserving=tp,
        is_unital=unital,
        fixed_space_dim=fixed_dim,
        is_irreducible=irreducible,
        peripheral_eigenvalues=peripheral,
        jordan_trivial_at_1=jordan_trivial,
        trace_deviation=deviation,
        is_completely_positive=cp,
        fixed_state=fixed_state,
        min_fixed_eigenvalue=min_eig,
    )


def fixed_states(superop: SuperOp, tol: float = EIG_TOL) -> List[np.ndarray]:
    """
    Basis of the fixed space of a trace-preserving map, as matrices.

    The first element is the fixed density obtained by projecting I/n with
    the ergodic projector; the rest complete the basis and carry unit
    Frobenius norm.
    """
    n = superop.dim
    a = superop.mat - np.eye(n * n)
    fixed_dim = kernel_dimension(a, tol)
    _, sigma, vh = scipy.linalg.svd(a)
    null = vh[sigma < tol].conj().T
    if fixed_dim == 0:
        return []

    try:
        projector = group_inverse(-a, tol).ergodic_projector
    except NoGroupInverseError:
        logger.warning("fixed_states: no group inverse for I - T, returning a raw kernel basis")
        return [unvec(c, n, n) for c in null.T]

    seed = vec(np.eye(n) / n)
    rho = hermitize(unvec(projector @ seed, n, n))
    trace = np.trace(rho)
    if abs(trace) <= tol:
        return [unvec(c, n, n) for c in null.T]
    rho = rho / trace.real

    direction = vec(rho) / np.linalg.norm(vec(rho))
    rest = null - np.outer(direction, direction.conj() @ null)
    if fixed_dim == 1:
        return [rho]
    left, _, _ = scipy.linalg.svd(rest, full_matrices=False)
    return [rho] + [unvec(c, n, n) for c in left[:, : fixed_dim - 1].T]


def assumption_one_holds(superop: SuperOp, subspace: GoalSubspace, tol: float = EIG_TOL) -> AssumptionCheck:
    """Check that 1 is not an eigenvalue of QQ T."""
    if subspace.ambient_dim != superop.dim:
        raise DimensionError(
            f"Subspace lives in C^{subspace.ambient_dim}, channel acts on {superop.dim}x{superop.dim}"
        )
    spectrum = scipy.linalg.eigvals(subspace.QQ.mat @ superop.mat)
    near, offending = spectrum_near(spectrum, 1.0, tol)
    return AssumptionCheck(not near, offending, sorted_spectrum(spectrum))


def randomize(s1: SuperOp, s2: SuperOp, p: float) -> SuperOp:
    if not 0 <= p <= 1:
        raise ParameterError(f"Randomization weight p must lie in [0, 1], got {p}")
    if s1.dim != s2.dim:
        raise DimensionError(f"Cannot randomize channels on {s1.dim} and {s2.dim} dimensions")
    return SuperOp(p * s1.mat + (1 - p) * s2.mat, s1.dim)


def mix_kraus(c1: KrausChannel, c2: KrausChannel, p: float) -> KrausChannel:
    if not 0 <= p <= 1:
        raise ParameterError(f"Randomization weight p must lie in [0, 1], got {p}")
    if c1.dim != c2.dim:
        raise DimensionError(f"Cannot randomize channels on {c1.dim} and {c2.dim} dimensions")
    ops = [np.sqrt(p) * v for v in c1.kraus] + [np.sqrt(1 - p) * w for w in c2.kraus]
    return KrausChannel([op for op in ops if np.any(op)])


def unitary_channel(u) -> KrausChannel:
    return KrausChannel.unitary(u)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def depolarizing(s: float) -> KrausChannel:
    """Qubit channel sqrt(1-3s/4) I, sqrt(s)/2 X, sqrt(s)/2 Y, sqrt(s)/2 Z."""
    if not 0 <= s <= 1:
        raise ParameterError(f"s must lie in [0, 1], got {s}")
    weight = np.sqrt(s) / 2
    return KrausChannel([
        np.sqrt(1 - 3 * s / 4) * np.eye(2),
        weight * PAULI_X,
        weight * PAULI_Y,
        weight * PAULI_Z,
    ])


def random_channel(dim: int, rank: int, rng: np.random.Generator) -> KrausChannel:
    """Kraus operators cut from a random isometry C^dim -> C^(rank*dim)."""
    shape = (rank * dim, dim)
    gaussian = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    isometry, _ = np.linalg.qr(gaussian)
    return KrausChannel([isometry[i * dim:(i + 1) * dim, :] for i in range(rank)])


def stochastic_channel(p, atol: float = ATOL) -> KrausChannel:
    """
    Embed a column-stochastic matrix as the channel with Kraus operators
    sqrt(P_ij)|i><j|; diagonal densities then evolve by P.
    """
    p = np.asarray(as_matrix(p, "P").real)
    n = p.shape[0]
    if p.shape != (n, n):
        raise DimensionError(f"Stochastic matrix must be square, got {p.shape}")
    if np.any(p < -atol):
        raise ValidationError("Stochastic matrix has negative entries")
    sums = p.sum(axis=0)
    if np.max(np.abs(sums - 1)) > atol:
        raise ValidationError(f"Columns of P must sum to 1, got {sums}")
    ops = []
    for i in range(n):
        for j in range(n):
            if p[i, j] > 0:
                op = np.zeros((n, n), dtype=complex)
                op[i, j] = np.sqrt(p[i, j])
                ops.append(op)
    return KrausChannel(ops, atol=atol)


def choi_matrix(superop: SuperOp) -> np.ndarray:
    """sum_{c,d} |c><d| (x) T(|c><d|)."""
    n = superop.dim
    blocks = superop.mat.reshape(n, n, n, n)
    return blocks.transpose(2, 0, 3, 1).reshape(n * n, n * n)


def is_completely_positive(superop: SuperOp, tol: float = PSD_TOL) -> bool:
    choi = choi_matrix(superop)
    if np.max(np.abs(choi - choi.conj().T)) > HERMITIAN_TOL:
        return False
    return is_psd(choi, tol)


def has_simple_spectrum(u, tol: float = EIG_TOL) -> bool:
    values = scipy.linalg.eigvals(as_square(u, "U"))
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) < tol:
                return False
    return True
