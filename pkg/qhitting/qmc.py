from __future__ import annotations

import logging
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import GoalSubspace
from .ginverse import group_inverse
from .matrep import SuperOp, conj_pair, unvec, vec
from .utils import (
    ATOL,
    EIG_TOL,
    FIXED_STATE_TOL,
    DimensionError,
    NumericalError,
    ReducibleError,
    ValidationError,
    as_matrix,
    as_square,
    hermitize,
    is_psd,
    kernel_dimension,
    min_eigenvalue,
)

logger = logging.getLogger(__name__)


class VecState:
    """Stacked vectorization [|rho_1>; ...; |rho_n>] of a QMC state."""

    def __init__(self, data, n_sites: int, k: int) -> None:
        data = np.asarray(data, dtype=complex).reshape(-1)
        if data.size != n_sites * k * k:
            raise DimensionError(
                f"State of length {data.size} does not fit {n_sites} sites of {k}x{k} blocks"
            )
        self.data = data
        self.n_sites = n_sites
        self.k = k

    @classmethod
    def from_blocks(cls, blocks: Sequence) -> VecState:
        mats = [as_square(b, f"block[{i}]") for i, b in enumerate(blocks)]
        k = mats[0].shape[0]
        for i, m in enumerate(mats):
            if m.shape != (k, k):
                raise DimensionError(f"block[{i}] has shape {m.shape}, expected {(k, k)}")
        return cls(np.concatenate([vec(m) for m in mats]), len(mats), k)

    @classmethod
    def at_site(cls, rho, site: int, n_sites: int) -> VecState:
        rho = as_square(rho, "rho")
        blocks = [np.zeros_like(rho) for _ in range(n_sites)]
        blocks[site] = rho
        return cls.from_blocks(blocks)

    def block(self, i: int) -> np.ndarray:
        size = self.k * self.k
        return unvec(self.data[i * size:(i + 1) * size], self.k, self.k)

    def blocks(self) -> List[np.ndarray]:
        return [self.block(i) for i in range(self.n_sites)]

    def trace(self) -> complex:
        return complex(sum(np.trace(b) for b in self.blocks()))

    def is_density(self, atol: float = ATOL) -> bool:
        for b in self.blocks():
            if np.max(np.abs(b - b.conj().T)) > atol or not is_psd(b):
                return False
        return abs(self.trace() - 1) <= atol

    def __repr__(self) -> str:
        return f"VecState(n_sites={self.n_sites}, k={self.k})"


class FixedMap:
    """Omega = |pi><e_I|, sending every state rho to Tr(rho) pi."""

    def __init__(self, pi: VecState, e_i: np.ndarray) -> None:
        self.pi = pi
        self.e_i = e_i
        self.omega = np.outer(pi.data, e_i)

    def apply(self, state) -> np.ndarray:
        data = state.data if isinstance(state, VecState) else np.asarray(state)
        return self.omega @ data

    def __repr__(self) -> str:
        return f"FixedMap(order={self.omega.shape[0]})"


class QMC:
    """
    Quantum Markov chain on n_sites vertices with k x k internal states.

    The chain is stored as its assembled representation, an
    n_sites x n_sites grid of k^2 x k^2 blocks; block (i, j) moves mass
    from site j to site i.

    Raises
        ValidationError - If check is set and <e_I| rep != <e_I|.
    """

    def __init__(self, rep, n_sites: int, k: int, check: bool = True, atol: float = ATOL) -> None:
        rep = as_square(rep, "QMC representation")
        order = n_sites * k * k
        if rep.shape[0] != order:
            raise DimensionError(
                f"Representation of order {rep.shape[0]} does not match {n_sites} sites with k={k}"
            )
        rep = rep.copy()
        rep.setflags(write=False)
        self.rep = rep
        self.n_sites = n_sites
        self.k = k
        if check:
            deviation = self.trace_deviation
            if deviation > atol:
                raise ValidationError(f"QMC is not trace preserving: deviation {deviation:.3e}")

    @classmethod
    def from_blocks(cls, grid: Sequence[Sequence], check: bool = True) -> QMC:
        n_sites = len(grid)
        rows = []
        for i, row in enumerate(grid):
            if len(row) != n_sites:
                raise DimensionError(f"Row {i} of the block grid has {len(row)} blocks, expected {n_sites}")
            rows.append([b.mat if isinstance(b, SuperOp) else as_square(b, f"block[{i}]") for b in row])
        order = rows[0][0].shape[0]
        k = int(round(np.sqrt(order)))
        if k * k != order:
            raise DimensionError(f"Blocks of order {order} are not superoperators on square matrices")
        return cls(np.block(rows), n_sites, k, check=check)

    @classmethod
    def from_oqw(cls, b: Sequence[Sequence], atol: float = ATOL) -> QMC:
        """
        Open quantum walk with transition operators B[i][j] from site j to site i.

        Raises
            ValidationError - If sum_i B_ij* B_ij != I for some column j.
        """
        n_sites = len(b)
        ops = [[as_square(op, f"B[{i}][{j}]") for j, op in enumerate(row)] for i, row in enumerate(b)]
        k = ops[0][0].shape[0]
        for j in range(n_sites):
            total = sum(ops[i][j].conj().T @ ops[i][j] for i in range(n_sites))
            deviation = float(np.max(np.abs(total - np.eye(k))))
            if deviation > atol:
                raise ValidationError(
                    f"Column {j} violates sum_i B_ij* B_ij = I (deviation {deviation:.3e})"
                )
        return cls.from_blocks([[conj_pair(op) for op in row] for row in ops])

    @classmethod
    def induce(cls, superop: SuperOp, subspace: GoalSubspace) -> QMC:
        """Two-site chain [[(I-QQ)T, (I-QQ)T], [QQ T, QQ T]]: site 0 is V, site 1 is V-perp."""
        if subspace.ambient_dim != superop.dim:
            raise DimensionError(
                f"Subspace lives in C^{subspace.ambient_dim}, channel acts on {superop.dim}x{superop.dim}"
            )
        qq = subspace.QQ.mat
        top = (np.eye(qq.shape[0]) - qq) @ superop.mat
        bottom = qq @ superop.mat
        return cls(np.block([[top, top], [bottom, bottom]]), 2, superop.dim)

    @classmethod
    def from_stochastic(cls, p, atol: float = ATOL) -> QMC:
        """Classical chain: column-stochastic P as a QMC with k = 1."""
        p = as_matrix(p, "P")
        return cls(p, p.shape[0], 1, atol=atol)

    @property
    def block_size(self) -> int:
        return self.k * self.k

    @property
    def e_i(self) -> np.ndarray:
        return np.tile(vec(np.eye(self.k, dtype=complex)), self.n_sites)

    @property
    def trace_deviation(self) -> float:
        e = self.e_i
        return float(np.max(np.abs(e @ self.rep - e)))

    def site_slice(self, i: int) -> slice:
        if not 0 <= i < self.n_sites:
            raise IndexError(f"Site {i} out of range for {self.n_sites} sites")
        return slice(i * self.block_size, (i + 1) * self.block_size)

    def block(self, i: int, j: int) -> SuperOp:
        return SuperOp(self.rep[self.site_slice(i), self.site_slice(j)], self.k)

    def site_projectors(self) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        order = self.rep.shape[0]
        projectors = []
        for i in range(self.n_sites):
            proj = np.zeros((order, order))
            s = self.site_slice(i)
            proj[s, s] = np.eye(self.block_size)
            projectors.append(proj)
        return projectors, [np.eye(order) - p for p in projectors]

    def block_constant_E(self) -> np.ndarray:
        return np.kron(np.ones((self.n_sites, self.n_sites)), np.eye(self.block_size))

    def fixed_space_dim(self, tol: float = EIG_TOL) -> int:
        return kernel_dimension(np.eye(self.rep.shape[0]) - self.rep, tol)

    def has_unique_stationary(self, tol: float = EIG_TOL) -> bool:
        return self.fixed_space_dim(tol) == 1

    def stationary_density(self) -> VecState:
        """
        Fixed density obtained by projecting the site-uniform maximally
        mixed state with the ergodic projector I - A#A, A = I - Phi.

        Cached on first use; rep is read-only.
        """
        return self._stationary

    @cached_property
    def _stationary(self) -> VecState:
        order = self.rep.shape[0]
        a = np.eye(order) - self.rep
        projector = group_inverse(a).ergodic_projector
        seed = self.e_i / (self.n_sites * self.k)
        data = projector @ seed
        mass = self.e_i @ data
        if abs(mass) <= EIG_TOL:
            raise NumericalError("Fixed space of the QMC contains no density")
        state = VecState(data / mass, self.n_sites, self.k)
        state = VecState.from_blocks([hermitize(b) for b in state.blocks()])
        residual = float(np.max(np.abs(self.rep @ state.data - state.data)))
        if residual > FIXED_STATE_TOL:
            raise NumericalError(f"Stationary density is not fixed (residual {residual:.3e})")
        logger.debug("stationary density residual %.3e", residual)
        return state

    def is_irreducible(self, tol: float = EIG_TOL) -> bool:
        """Unique stationary density with every site block strictly positive."""
        if not self.has_unique_stationary(tol):
            return False
        return all(min_eigenvalue(b) > tol for b in self.stationary_density().blocks())

    def fixed_map(self) -> FixedMap:
        """
        Raises
            ReducibleError - If the stationary density is not unique.
        """
        if not self.has_unique_stationary():
            raise ReducibleError(
                f"QMC has a {self.fixed_space_dim()}-dimensional fixed space; "
                "the fixed map is undefined, use the group inverse instead"
            )
        return FixedMap(self.stationary_density(), self.e_i)

    def check_block_positivity(self, samples: int = 8, rng: Optional[np.random.Generator] = None) -> bool:
        """Apply every block to random densities and test the images for positivity."""
        rng = np.random.default_rng(0) if rng is None else rng
        for _ in range(samples):
            w = rng.normal(size=(self.k, self.k)) + 1j * rng.normal(size=(self.k, self.k))
            rho = w @ w.conj().T
            rho /= np.trace(rho)
            for i in range(self.n_sites):
                for j in range(self.n_sites):
                    if not is_psd(self.block(i, j).apply(rho)):
                        return False
        return True

    def __repr__(self) -> str:
        return f"QMC(n_sites={self.n_sites}, k={self.k})"


def from_oqw(b: Sequence[Sequence]) -> QMC:
    return QMC.from_oqw(b)


def induce(superop: SuperOp, subspace: GoalSubspace) -> QMC:
    return QMC.induce(superop, subspace)


def stationary_density(q: QMC) -> VecState:
    return q.stationary_density()


def fixed_map(q: QMC) -> FixedMap:
    return q.fixed_map()


def site_projectors(q: QMC) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    return q.site_projectors()


def block_constant_E(q: QMC) -> np.ndarray:
    return q.block_constant_E()
