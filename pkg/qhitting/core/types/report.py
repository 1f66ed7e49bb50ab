from typing import Any, Dict, List, Optional, TypedDict


class MethodResultType(TypedDict, total=False):
    '''
    JSON type of one route in a hitting report
    '''
    method: str
    ok: bool
    tau: Optional[float]
    error: str
    precondition: str
    numerical: bool
    preconditions: Dict[str, bool]
    notes: List[str]
    intermediates: Dict[str, Any]


class DiagnosticsType(TypedDict):
    '''
    JSON type of channel diagnostics
    '''
    dim: int
    trace_preserving: bool
    trace_deviation: float
    completely_positive: bool
    unital: bool
    fixed_space_dim: int
    irreducible: bool
    jordan_trivial_at_1: bool
    peripheral_eigenvalues: List[Any]


class AssumptionType(TypedDict):
    '''
    JSON type of the verdict on 1 not being an eigenvalue of QQ T
    '''
    holds: bool
    offending: List[Any]
