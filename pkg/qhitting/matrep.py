from __future__ import annotations

import numpy as np

from .utils import ATOL, DimensionError, as_matrix, as_square


def vec(matrix) -> np.ndarray:
    """Row-stacking vectorization: [[a, b], [c, d]] -> [a, b, c, d]."""
    return np.asarray(matrix).reshape(-1)


def unvec(vector, rows: int, cols: int) -> np.ndarray:
    vector = np.asarray(vector).reshape(-1)
    if vector.size != rows * cols:
        raise DimensionError(
            f"Cannot reshape a vector of length {vector.size} into {rows}x{cols}"
        )
    return vector.reshape(rows, cols)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def conj_pair(a) -> np.ndarray:
    """Representation a (x) conj(a) of the conjugation X -> a X a*."""
    a = np.asarray(a, dtype=complex)
    return np.kron(a, a.conj())


class SuperOp:
    """
    Matrix representation of a linear map on dim x dim matrices.

    The representation acts on row-stacked vectors, so the map X -> A X B*
    is kron(A, conj(B)).
    """

    def __init__(self, mat, dim: int | None = None) -> None:
        mat = as_square(mat, "superoperator")
        order = mat.shape[0]
        if dim is None:
            dim = int(round(np.sqrt(order)))
        if dim * dim != order:
            raise DimensionError(
                f"Superoperator of order {order} does not act on {dim}x{dim} matrices"
            )
        mat = mat.copy()
        mat.setflags(write=False)
        self.mat = mat
        self.dim = dim

    @classmethod
    def identity(cls, dim: int) -> SuperOp:
        return cls(np.eye(dim * dim), dim)

    @classmethod
    def zero(cls, dim: int) -> SuperOp:
        return cls(np.zeros((dim * dim, dim * dim)), dim)

    @classmethod
    def conjugation(cls, a) -> SuperOp:
        a = as_square(a, "operator")
        return cls(conj_pair(a), a.shape[0])

    def _check(self, other: SuperOp) -> None:
        if not isinstance(other, SuperOp):
            raise TypeError(f"Expected SuperOp, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(
                f"Superoperators act on different spaces ({self.dim} vs {other.dim})"
            )

    def apply(self, matrix) -> np.ndarray:
        matrix = as_matrix(matrix)
        if matrix.shape != (self.dim, self.dim):
            raise DimensionError(
                f"Expected a {self.dim}x{self.dim} matrix, got {matrix.shape}"
            )
        return unvec(self.mat @ vec(matrix), self.dim, self.dim)

    def compose(self, other: SuperOp) -> SuperOp:
        """self after other."""
        self._check(other)
        return SuperOp(self.mat @ other.mat, self.dim)

    def add(self, other: SuperOp) -> SuperOp:
        self._check(other)
        return SuperOp(self.mat + other.mat, self.dim)

    def scale(self, factor: complex) -> SuperOp:
        return SuperOp(factor * self.mat, self.dim)

    def power(self, exponent: int) -> SuperOp:
        if exponent < 0:
            raise ValueError("Superoperator powers must be nonnegative")
        return SuperOp(np.linalg.matrix_power(self.mat, exponent), self.dim)

    def allclose(self, other: SuperOp, atol: float = ATOL) -> bool:
        self._check(other)
        return bool(np.allclose(self.mat, other.mat, rtol=0, atol=atol))

    def __call__(self, matrix) -> np.ndarray:
        return self.apply(matrix)

    def __matmul__(self, other: SuperOp) -> SuperOp:
        return self.compose(other)

    def __add__(self, other: SuperOp) -> SuperOp:
        return self.add(other)

    def __sub__(self, other: SuperOp) -> SuperOp:
        return self.add(other.scale(-1))

    def __mul__(self, factor: complex) -> SuperOp:
        return self.scale(factor)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> SuperOp:
        return self.power(exponent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperOp):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.mat, other.mat)

    def __hash__(self) -> int:
        return hash((self.dim, self.mat.tobytes()))

    def __repr__(self) -> str:
        return f"SuperOp(dim={self.dim})"


def apply(superop: SuperOp, matrix) -> np.ndarray:
    return superop.apply(matrix)


def compose(s1: SuperOp, s2: SuperOp) -> SuperOp:
    return s1.compose(s2)


def add(s1: SuperOp, s2: SuperOp) -> SuperOp:
    return s1.add(s2)


def scale(superop: SuperOp, factor: complex) -> SuperOp:
    return superop.scale(factor)


def power(superop: SuperOp, exponent: int) -> SuperOp:
    return superop.power(exponent)
