"""Three-level Lambda atom: Maxwell-Bloch dynamics, Bloch geometry and trapping windows."""

from .dynamics import (
    FieldSchedule,
    IntegrationAbort,
    StepSizeError,
    Trajectory,
    component_rhs,
    integrate,
    mbe_rhs,
    rotating_signal_field,
)
from .geometry import (
    BlochVector,
    RabiVector,
    RealComponentState,
    bloch_from_coherences,
    precession_rhs,
    rabi_vectors,
    reduced_rhs,
)
from .model import (
    AtomFieldParams,
    CoherenceState,
    ContractError,
    CouplingSpec,
    FieldState,
    ParamError,
    coupling_from_dipole,
    validate_params,
)
from .trapping import (
    RESONANCE,
    ContinuousWindow,
    TrapReport,
    TrapWindow,
    dark_coupling_element,
    dressed_basis,
    effective_couplings,
    hamiltonian_dark_overlap,
    solve_windows,
    trap_residual,
    verify_trapping,
    window_times_case1,
    window_times_case2,
)

__version__ = "0.1.0"
