from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List, Literal, NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg

from .utils import (
    EIG_TOL,
    EXTRAPOLATION_FLOOR,
    PAIRING_TOL,
    SPLIT_COND_WARN,
    NoGroupInverseError,
    NumericalError,
    NumericalWarning,
    ParameterError,
    ReducibleError,
    as_square,
    lagrange_at_zero,
    numerical_rank,
)

if TYPE_CHECKING:
    from .qmc import QMC

logger = logging.getLogger(__name__)

GInverseKind = Literal["hunter-family", "group", "fundamental", "external"]

DEFAULT_Z_SCHEDULE = (1e-4, 1e-5, 1e-6)


def _scale(matrix: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(matrix, 2)))


def ginverse_residual(a: np.ndarray, g: np.ndarray) -> float:
    """Largest entry of AGA - A."""
    return float(np.max(np.abs(a @ g @ a - a))) if a.size else 0.0


@dataclass
class GInverse:
    a: np.ndarray
    g: np.ndarray
    kind: GInverseKind
    params: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return ginverse_residual(self.a, self.g)

    def verify(self, tol: float = EIG_TOL) -> bool:
        return self.residual <= tol * _scale(self.a)

    @classmethod
    def from_matrix(cls, a, g, kind: GInverseKind = "external", tol: float = EIG_TOL) -> GInverse:
        gi = cls(as_square(a, "A"), as_square(g, "G"), kind)
        if not gi.verify(tol):
            raise NumericalError(f"G is not a g-inverse of A (residual {gi.residual:.3e})")
        return gi

    def __repr__(self) -> str:
        return f"GInverse(kind={self.kind!r}, order={self.a.shape[0]})"


@dataclass
class GroupInverse:
    a: np.ndarray
    asharp: np.ndarray
    index: int
    split_condition: float = 1.0

    kind: GInverseKind = "group"

    @property
    def g(self) -> np.ndarray:
        return self.asharp

    @property
    def ergodic_projector(self) -> np.ndarray:
        return np.eye(self.a.shape[0]) - self.asharp @ self.a

    def axiom_residuals(self) -> Dict[str, float]:
        a, x = self.a, self.asharp
        if not a.size:
            return {"AXA=A": 0.0, "XAX=X": 0.0, "AX=XA": 0.0}
        return {
            "AXA=A": float(np.max(np.abs(a @ x @ a - a))),
            "XAX=X": float(np.max(np.abs(x @ a @ x - x))),
            "AX=XA": float(np.max(np.abs(a @ x - x @ a))),
        }

    def verify(self, tol: float = EIG_TOL) -> bool:
        bound = tol * _scale(self.a)
        return all(r <= bound for r in self.axiom_residuals().values())

    def __repr__(self) -> str:
        return f"GroupInverse(index={self.index}, order={self.a.shape[0]})"


class DrazinLimit(NamedTuple):
    value: np.ndarray
    residuals: List[float]
    z_schedule: Sequence[float]


def index(a) -> int:
    """
    Smallest m >= 0 with rank(A^m) == rank(A^(m+1)).

    Ranks count singular values above RANK_RTOL * sigma_max.
    """
    a = as_square(a, "A")
    n = a.shape[0]
    power = np.eye(n, dtype=complex)
    rank = n
    for m in range(n + 1):
        following = power @ a
        next_rank = numerical_rank(following)
        if next_rank == rank:
            return m
        power, rank = following, next_rank
    return n


def group_inverse(a, tol: float = EIG_TOL) -> GroupInverse:
    """
    Group inverse from an ordered Schur split.

    The complex Schur form is reordered so that eigenvalues within tol of 0
    lead, the leading block is decoupled with a Sylvester solve and the
    trailing block is inverted:

        A = X diag(0, C) X^-1  ->  A# = X diag(0, C^-1) X^-1

    Raises
        NoGroupInverseError - If Ind(A) >= 2.
    """
    a = as_square(a, "A")
    n = a.shape[0]
    ind = index(a)
    if ind >= 2:
        raise NoGroupInverseError(f"A has index {ind}; the group inverse needs index <= 1", index=ind)

    if ind == 0:
        result = GroupInverse(a, scipy.linalg.inv(a), 0)
        _check_axioms(result, tol)
        return result

    t, z, sdim = scipy.linalg.schur(a, output="complex", sort=lambda x: abs(x) < tol)
    kernel_dim = n - numerical_rank(a)
    if sdim != kernel_dim:
        warnings.warn(
            f"{sdim} eigenvalues within {tol:.0e} of zero but kernel dimension {kernel_dim}",
            NumericalWarning,
        )
    k = sdim
    if k == n:
        result = GroupInverse(a, np.zeros_like(a), ind)
        _check_axioms(result, tol)
        return result

    t11, t12, t22 = t[:k, :k], t[:k, k:], t[k:, k:]
    # T11 Y - Y T22 = -T12 decouples the kernel block
    y = scipy.linalg.solve_sylvester(t11, -t22, -t12)
    split = np.eye(n, dtype=complex)
    split[:k, k:] = y
    split_condition = float(np.linalg.cond(split))
    logger.debug("group inverse split condition %.3e (kernel dim %d)", split_condition, k)
    if split_condition > SPLIT_COND_WARN:
        warnings.warn(
            f"Kernel/range split is ill-conditioned ({split_condition:.3e})",
            NumericalWarning,
        )

    c_inv = scipy.linalg.inv(t22)
    core = np.zeros((n, n), dtype=complex)
    core[:k, k:] = y @ c_inv
    core[k:, k:] = c_inv
    asharp = z @ core @ z.conj().T

    result = GroupInverse(a, asharp, ind, split_condition)
    _check_axioms(result, tol)
    return result


def _check_axioms(gi: GroupInverse, tol: float) -> None:
    if not gi.verify(tol):
        warnings.warn(
            f"Group inverse axioms hold only loosely: {gi.axiom_residuals()}",
            NumericalWarning,
        )


def drazin_limit(a, z_schedule: Sequence[float] = DEFAULT_Z_SCHEDULE) -> DrazinLimit:
    """
    Evaluate (A^2 + zI)^-1 A along z_schedule and extrapolate to z = 0.

    Returns the extrapolate and, per z, the distance of the evaluation to it.

    Raises
        NumericalError - If the distances do not shrink with z.
    """
    a = as_square(a, "A")
    n = a.shape[0]
    a2 = a @ a
    evaluations = [scipy.linalg.solve(a2 + z * np.eye(n), a) for z in z_schedule]
    value = lagrange_at_zero(z_schedule, evaluations)
    residuals = [float(np.max(np.abs(e - value))) if n else 0.0 for e in evaluations]
    floor = EXTRAPOLATION_FLOOR * _scale(a)
    for previous, current in zip(residuals, residuals[1:]):
        if current > previous + floor:
            raise NumericalError(f"Drazin limit does not converge along z: residuals {residuals}")
    return DrazinLimit(value, residuals, tuple(z_schedule))


def ergodic_projector(gi: GroupInverse) -> np.ndarray:
    return gi.ergodic_projector


def verify_ginverse(a, g, tol: float = EIG_TOL) -> bool:
    a = as_square(a, "A")
    return ginverse_residual(a, as_square(g, "G")) <= tol * _scale(a)


def hunter_ginverse(
    q: QMC,
    t,
    u,
    f=None,
    g=None,
    tol: float = EIG_TOL,
) -> GInverse:
    """
    Member of the parametric g-inverse family of I - Phi

        G = (I - Phi + |t><u|)^-1 + |pi><f| + |g><e_I|

    Args
        q (QMC) - chain with a unique stationary density.
        t, u (vectors) - need <e_I|t> != 0 and <u|pi> != 0.
        f, g (vectors, optional) - free parameters, zero when omitted.

    Raises
        ReducibleError - If the stationary density is not unique.
        ParameterError - If a pairing condition fails.
        NumericalError - If the inner matrix is singular or AGA != A.
    """
    if not q.has_unique_stationary():
        raise ReducibleError("The parametric g-inverse family needs a unique stationary density")
    order = q.rep.shape[0]
    pi = q.stationary_density().data
    e_i = q.e_i
    t = _param(t, order, "t")
    u = _param(u, order, "u")
    f = np.zeros(order, dtype=complex) if f is None else _param(f, order, "f")
    g = np.zeros(order, dtype=complex) if g is None else _param(g, order, "g")

    if abs(np.vdot(e_i, t)) <= PAIRING_TOL:
        raise ParameterError("<e_I|t> must be nonzero")
    if abs(np.vdot(u, pi)) <= PAIRING_TOL:
        raise ParameterError("<u|pi> must be nonzero")

    a = np.eye(order) - q.rep
    inner = a + np.outer(t, u.conj())
    try:
        inverse = scipy.linalg.inv(inner)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise NumericalError(f"I - Phi + |t><u| is singular: {e}")
    matrix = inverse + np.outer(pi, f.conj()) + np.outer(g, e_i)

    gi = GInverse(a, matrix, "hunter-family", {"t": t, "u": u, "f": f, "g": g})
    if not gi.verify(tol):
        raise NumericalError(f"Parametric g-inverse fails AGA = A (residual {gi.residual:.3e})")
    return gi


def ksmh_ginverse(q: QMC, u=None, f=None, tol: float = EIG_TOL) -> GInverse:
    """G = (I - Phi + |u><e_I|)^-1 + |f><e_I|, with u and f defaulting to e_1."""
    order = q.rep.shape[0]
    first = np.zeros(order, dtype=complex)
    first[0] = 1
    u = first if u is None else u
    f = first if f is None else f
    return hunter_ginverse(q, t=u, u=q.e_i, f=None, g=f, tol=tol)


def _param(vector, order: int, name: str) -> np.ndarray:
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    if vector.size != order:
        raise ParameterError(f"|{name}> must have length {order}, got {vector.size}")
    return vector
