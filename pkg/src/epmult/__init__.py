"""Schatten p->q norms, maximal output purity and multiplicativity checks
for linear maps on matrix algebras."""

from .channels import (
    ChannelMap,
    QubitDiagonalParams,
    depolarizing,
    from_kraus,
    generalized_depolarizing,
    identity_channel,
    is_cp,
    is_ep_in_basis,
    is_trace_preserving,
    qubit_from_diagonal,
    random_cp_channel,
    random_ep_cp_channel,
    tensor,
    two_positive_falsify,
    werner_holevo,
)
from .linalg import InputError, schatten_norm
from .norms import NormResult, OptimizerConfig, nu, p2q_norm
from .verify import (
    VerificationReport,
    check_theorem1,
    check_theorem2,
    check_theorem4,
    run_suite,
    wh_violation,
)

__version__ = "0.1.0"
