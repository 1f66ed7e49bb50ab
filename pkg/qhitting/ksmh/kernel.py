from __future__ import annotations

from typing import Optional, Union

import numpy as np

from ..ginverse import GInverse, GroupInverse
from ..qmc import FixedMap
from ..utils import DimensionError, ParameterError, as_square
from .types import KernelVariant, KsmhKernel

GInverseLike = Union[np.ndarray, GInverse, GroupInverse]


def diag_blocks(m, n_sites: int, k: int) -> np.ndarray:
    """Keep the diagonal k^2 x k^2 blocks of m, zero the rest."""
    m = as_square(m, "M")
    size = k * k
    if m.shape[0] != n_sites * size:
        raise DimensionError(f"Matrix of order {m.shape[0]} does not split into {n_sites} blocks of order {size}")
    out = np.zeros_like(m)
    for i in range(n_sites):
        s = slice(i * size, (i + 1) * size)
        out[s, s] = m[s, s]
    return out


def ksmh_kernel(
    d,
    g: GInverseLike,
    e,
    omega: Optional[Union[FixedMap, np.ndarray]] = None,
    *,
    n_sites: int,
    k: int,
    variant: Optional[KernelVariant] = None,
) -> KsmhKernel:
    """
    Assemble a KSMH kernel.

        standard         D (I - G + G_d E)
        omega-corrected  D (Omega G - (Omega G)_d E + I - G + G_d E)
        group            D (I - A# + A#_d E)

    The variant defaults to "group" for a GroupInverse, to
    "omega-corrected" when omega is given and to "standard" otherwise.

    Raises
        ParameterError - If the omega-corrected variant is asked for without omega.
    """
    if isinstance(g, GroupInverse):
        matrix, kind = g.asharp, "group"
    elif isinstance(g, GInverse):
        matrix, kind = g.g, g.kind
    else:
        matrix, kind = as_square(g, "G"), "external"

    if variant is None:
        variant = "group" if kind == "group" else ("omega-corrected" if omega is not None else "standard")
    if variant == "omega-corrected" and omega is None:
        raise ParameterError("The omega-corrected kernel needs the fixed map Omega")

    d = as_square(d, "D")
    e = as_square(e, "E")
    for name, x in (("D", d), ("E", e)):
        if x.shape != matrix.shape:
            raise DimensionError(f"{name} has shape {x.shape}, G has shape {matrix.shape}")

    identity = np.eye(matrix.shape[0])
    inner = identity - matrix + diag_blocks(matrix, n_sites, k) @ e
    if variant == "omega-corrected":
        om = omega.omega if isinstance(omega, FixedMap) else as_square(omega, "Omega")
        omega_g = om @ matrix
        inner = inner + omega_g - diag_blocks(omega_g, n_sites, k) @ e
    return KsmhKernel(d @ inner, variant, kind, n_sites, k)
