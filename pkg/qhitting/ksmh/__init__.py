from .types import (
    KsmhKernel,
    LimitStudyReport,
    QmcHittingOperators,
    SiteAvailability,
    TauReport,
    TAU_METHODS,
)
from .operators import qmc_hitting_operators, first_step_operator_L, solvability_residual
from .kernel import diag_blocks, ksmh_kernel
from .tau import tau_irreducible_qmc, tau_channel
from .limit_study import kernel_limit_study
