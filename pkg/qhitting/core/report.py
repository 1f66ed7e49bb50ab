import json
import math
from typing import Any, Dict, List, Optional

import numpy as np

from ..channel import AssumptionCheck, ChannelDiagnostics
from ..utils import DISPLAY_IMAG_TOL
from .types import AssumptionType, DiagnosticsType

SIGNIFICANT = 12


def number(x: Any) -> Any:
    '''
    Round to 12 significant digits. Complex values with a negligible
    imaginary part become real, others become [re, im]; infinities and
    NaN become strings.
    '''
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        if abs(z.imag) <= DISPLAY_IMAG_TOL * max(1.0, abs(z.real)):
            return number(z.real)
        return [number(z.real), number(z.imag)]
    value = float(x)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    rounded = float(f"{value:.{SIGNIFICANT}g}")
    return 0.0 if rounded == 0 else rounded


def matrix(m) -> List[List[Any]]:
    return [[number(x) for x in row] for row in np.asarray(m)]


def encode(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.ndarray):
        return matrix(value) if value.ndim == 2 else [number(x) for x in value]
    if value is None or isinstance(value, str):
        return value
    return number(value)


def diagnostics(diag: ChannelDiagnostics, dim: int) -> DiagnosticsType:
    return {
        "dim": dim,
        "trace_preserving": diag.is_trace_preserving,
        "trace_deviation": number(diag.trace_deviation),
        "completely_positive": diag.is_completely_positive,
        "unital": diag.is_unital,
        "fixed_space_dim": diag.fixed_space_dim,
        "irreducible": diag.is_irreducible,
        "jordan_trivial_at_1": diag.jordan_trivial_at_1,
        "peripheral_eigenvalues": [number(x) for x in diag.peripheral_eigenvalues],
    }


def assumption(check: Optional[AssumptionCheck]) -> Optional[AssumptionType]:
    if check is None:
        return None
    return {"holds": check.holds, "offending": [number(x) for x in check.offending]}


def to_json(report: Dict[str, Any]) -> str:
    return json.dumps(encode(report), indent=2)


def to_text(report: Dict[str, Any]) -> str:
    '''Indented "key: value" lines; 2-D arrays are printed row by row.'''
    lines: List[str] = []
    _text(report, 0, lines)
    return "\n".join(lines)


def _scalar(value: Any) -> str:
    value = encode(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT}g}"
    if isinstance(value, list):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    return str(value)


def _text(value: Dict[str, Any], depth: int, lines: List[str]) -> None:
    pad = "  " * depth
    for key, item in value.items():
        if isinstance(item, dict):
            lines.append(f"{pad}{key}:")
            _text(item, depth + 1, lines)
        elif isinstance(item, list) and item and isinstance(item[0], dict):
            lines.append(f"{pad}{key}:")
            for element in item:
                lines.append(f"{pad}  -")
                _text(element, depth + 2, lines)
        elif isinstance(item, np.ndarray) and item.ndim == 2:
            lines.append(f"{pad}{key}:")
            for row in item:
                lines.append(f"{pad}  " + "  ".join(_scalar(x) for x in row))
        else:
            lines.append(f"{pad}{key}: {_scalar(item)}")
