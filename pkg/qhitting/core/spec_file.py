import json
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np

from ..channel import GoalSubspace, KrausChannel, depolarizing, mix_kraus, randomize
from ..matrep import SuperOp
from ..utils import NORM_TOL, QHittingError, SpecError, as_square, pure_state
from .types import ChannelSpecType, DensityType, MixType

KINDS = ("kraus", "unitary", "superop", "randomization", "depolarizing")


class ChannelSpec:
    '''
    Convert channel spec JSON to Class

    Args
        spec (ChannelSpecType) - parsed JSON document.
        path (str) - JSON path of spec inside its file, used in error messages.

    Raises
        SpecError - If the document does not describe a channel.
    '''

    def __init__(self, spec: ChannelSpecType, path: str = "$") -> None:
        if not isinstance(spec, dict):
            raise SpecError("expected an object", path)
        self.raw = spec
        self.kind = _field(spec, "kind", path)
        if self.kind not in KINDS:
            raise SpecError(f"unknown kind {self.kind!r}, expected one of {KINDS}", f"{path}.kind")
        self.dim = _dim(spec, path)
        self.kraus: Optional[KrausChannel] = None
        self.superop = self._build(spec, path)
        if self.superop.dim != self.dim:
            raise SpecError(f"channel acts on dimension {self.superop.dim}, dim says {self.dim}", f"{path}.dim")
        self.subspace = _subspace(spec, self.dim, path) if "subspace" in spec else None
        self.initial_state = _initial_state(spec, self.dim, path) if "initial_state" in spec else None

    def _build(self, spec: ChannelSpecType, path: str) -> SuperOp:
        try:
            if self.kind == "kraus":
                ops = _field(spec, "kraus", path)
                if not isinstance(ops, list) or not ops:
                    raise SpecError("expected a non-empty list of matrices", f"{path}.kraus")
                self.kraus = KrausChannel(
                    [parse_matrix(op, f"{path}.kraus[{i}]") for i, op in enumerate(ops)], check=False
                )
                return self.kraus.represent()
            if self.kind == "unitary":
                self.kraus = KrausChannel([parse_matrix(_field(spec, "unitary", path), f"{path}.unitary")], check=False)
                return self.kraus.represent()
            if self.kind == "depolarizing":
                self.kraus = depolarizing(float(_field(spec, "s", path)))
                return self.kraus.represent()
            if self.kind == "superop":
                return SuperOp(parse_matrix(_field(spec, "superop", path), f"{path}.superop"))
            return self._build_mix(spec, path)
        except SpecError:
            raise
        except (QHittingError, ValueError, TypeError) as e:
            raise SpecError(str(e), f"{path}.{self.kind}")

    def _build_mix(self, spec: ChannelSpecType, path: str) -> SuperOp:
        mix: MixType = _field(spec, "mix", path)
        if not isinstance(mix, dict):
            raise SpecError("expected an object", f"{path}.mix")
        p = _field(mix, "p", f"{path}.mix")
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise SpecError("p must be a number", f"{path}.mix.p")
        left = ChannelSpec(_field(mix, "left", f"{path}.mix"), f"{path}.mix.left")
        right = ChannelSpec(_field(mix, "right", f"{path}.mix"), f"{path}.mix.right")
        if left.kraus is not None and right.kraus is not None:
            self.kraus = mix_kraus(left.kraus, right.kraus, float(p))
        return randomize(left.superop, right.superop, float(p))

    @property
    def channel(self) -> Union[KrausChannel, SuperOp]:
        return self.kraus if self.kraus is not None else self.superop

    def __repr__(self) -> str:
        return f"ChannelSpec(kind={self.kind!r}, dim={self.dim!r})"


def load_channel_spec(path: Union[str, Path]) -> ChannelSpec:
    '''
    Read a channel spec file.

    Raises
        SpecError - If the file cannot be read, is not JSON or is malformed.
    '''
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e.strerror}")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    return ChannelSpec(document)


def _field(spec: dict, key: str, path: str) -> Any:
    if key not in spec:
        raise SpecError(f"missing field {key!r}", path)
    return spec[key]


def _dim(spec: ChannelSpecType, path: str) -> int:
    dim = _field(spec, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SpecError(f"dim must be a positive integer, got {dim!r}", f"{path}.dim")
    return dim


def parse_number(value: Any, path: str) -> complex:
    '''Real number, or complex number written as [re, im].'''
    if isinstance(value, bool):
        raise SpecError("expected a number", path)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        return complex(value[0], value[1])
    raise SpecError(f"expected a number or [re, im], got {value!r}", path)


def parse_vector(value: Any, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SpecError("expected a non-empty list", path)
    return np.array([parse_number(x, f"{path}[{i}]") for i, x in enumerate(value)], dtype=complex)


def parse_matrix(value: Any, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SpecError("expected a non-empty list of rows", path)
    rows = [parse_vector(row, f"{path}[{i}]") for i, row in enumerate(value)]
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise SpecError(f"row has {len(row)} entries, expected {width}", f"{path}[{i}]")
    return np.array(rows)


def _subspace(spec: ChannelSpecType, dim: int, path: str) -> GoalSubspace:
    vectors = spec["subspace"]
    if not isinstance(vectors, list):
        raise SpecError("expected a list of basis vectors", f"{path}.subspace")
    parsed: List[np.ndarray] = []
    for i, v in enumerate(vectors):
        vector = parse_vector(v, f"{path}.subspace[{i}]")
        if vector.size != dim:
            raise SpecError(f"vector has length {vector.size}, expected {dim}", f"{path}.subspace[{i}]")
        parsed.append(vector)
    try:
        return GoalSubspace(parsed, ambient_dim=dim)
    except QHittingError as e:
        raise SpecError(e.message, f"{path}.subspace")


def _initial_state(spec: ChannelSpecType, dim: int, path: str) -> np.ndarray:
    value: Union[list, DensityType] = spec["initial_state"]
    where = f"{path}.initial_state"
    try:
        if isinstance(value, dict):
            rho = as_square(parse_matrix(_field(value, "density", where), f"{where}.density"), "initial density")
            if rho.shape[0] != dim:
                raise SpecError(f"density has order {rho.shape[0]}, expected {dim}", f"{where}.density")
            return rho
        psi = parse_vector(value, where)
        if psi.size != dim:
            raise SpecError(f"vector has length {psi.size}, expected {dim}", where)
        norm = np.linalg.norm(psi)
        if abs(norm - 1) > NORM_TOL:
            raise SpecError(f"vector must have unit norm, got {norm:.12g}", where)
        return pure_state(psi / norm, "initial_state")
    except SpecError:
        raise
    except QHittingError as e:
        raise SpecError(e.message, where)
