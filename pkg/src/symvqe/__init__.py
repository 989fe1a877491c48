"""Symmetry-projected exchange-gate variational eigensolver for Heisenberg rings."""

from .hamiltonian import (
    HeisenbergRing,
    SpectrumResult,
    apply_h,
    energy,
    ground_state_fidelity,
    lanczos_ground,
    total_spin_sq,
    total_sz,
)
from .statevector import (
    Circuit,
    ESwap,
    GateOp,
    OneQubit,
    Permutation,
    StateVector,
    Swap,
    TwoQubit,
    apply_circuit,
    apply_gate,
    basis_state,
    dimer_state,
    eswap_matrix,
    fidelity,
    inner,
    singlet_product,
    triplet_tail_product,
    verify_eswap_decomposition,
)
from .symmetry import (
    CyclicGroup,
    MomentumSector,
    SwapNetwork,
    amida_decompose,
    character,
    momentum_sectors,
    project,
    swap_count_bound,
    theta_swap_params,
    translation_perm,
)
from .vqe import (
    Ansatz,
    NormFloorError,
    OptState,
    RunResult,
    SectorSpec,
    TraceRow,
    Workspace,
    berry_a,
    energy_gradient,
    metric_tensor,
    ngd_step,
    projected_energy,
    run_excited,
    run_ground,
    sector_spec,
    shifted_state,
    trial_state,
)

__version__ = "0.1.0"
