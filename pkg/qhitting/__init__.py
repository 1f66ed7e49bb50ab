__version__ = "0.1.0"

from .utils import (
    ATOL,
    EIG_TOL,
    QHittingError,
    DimensionError,
    ValidationError,
    ParameterError,
    SpectralObstructionError,
    NoGroupInverseError,
    ReducibleError,
    PreconditionError,
    NumericalError,
    SpecError,
    NumericalWarning,
)
from .matrep import SuperOp, vec, unvec, kron, conj_pair
from .channel import (
    KrausChannel,
    GoalSubspace,
    ChannelDiagnostics,
    validate,
    fixed_states,
    assumption_one_holds,
    randomize,
    mix_kraus,
    unitary_channel,
    depolarizing,
    random_channel,
    stochastic_channel,
    choi_matrix,
    is_completely_positive,
    has_simple_spectrum,
)
from .qmc import QMC, VecState, FixedMap
from .monitor import SeriesConfig, MonitorSeries, step_prob, first_visit_series, generating_function
from .hitting import (
    HittingMaps,
    FundamentalMap,
    analytic_HK,
    tau_from_K,
    hitting_probability,
    block_representation,
    fundamental_map,
    mhtf_tau,
    mhtf_psi_spread,
    classical_mhtf,
)
from .ginverse import (
    GInverse,
    GroupInverse,
    index,
    group_inverse,
    drazin_limit,
    ergodic_projector,
    verify_ginverse,
    hunter_ginverse,
    ksmh_ginverse,
)
from .ksmh import *
