"""Coined quantum walk of two walkers moving in tandem on the integer
line, with entanglement measures and parameter-space search tools."""

__version__ = "0.1.0"

from .core import (
    BALANCED_ALPHA,
    TERM_THRESHOLD,
    UNITARITY_ATOL,
    CoinOperator,
    CollapseResult,
    ShiftOperator,
    Spin,
    WalkState,
    balanced_shift,
    evolve,
    hadamard_coin,
    initial_state,
    iter_steps,
    kempe_coin,
    measure_spin,
    orthonormality_residual,
    phase_factor,
    step,
    verify_shift_unitarity,
    z_coin,
)
from .entanglement import (
    AveragedEntanglement,
    EntanglementRecord,
    averaged_entanglement,
    entropy,
    normalized_entanglement,
    record_from_collapse,
    term_count,
    walk_entanglement_series,
)
from .analytic import (
    MODULUS_ATOL,
    Step2State,
    max_condition_up,
    phi1,
    psi_down_2,
    psi_up_2,
)
from .sweep import (
    MAXIMAL_ATOL,
    CoinFamily,
    MaxEntanglementHit,
    SearchMode,
    SweepMode,
    SweepSpec,
    family_coin,
    find_max_cases,
    grid_axis,
    grid_search,
    sweep_1d,
)

__all__ = [
    "__version__",
    "BALANCED_ALPHA",
    "TERM_THRESHOLD",
    "UNITARITY_ATOL",
    "MODULUS_ATOL",
    "MAXIMAL_ATOL",
    "Spin",
    "CoinOperator",
    "ShiftOperator",
    "WalkState",
    "CollapseResult",
    "hadamard_coin",
    "kempe_coin",
    "z_coin",
    "balanced_shift",
    "initial_state",
    "step",
    "iter_steps",
    "evolve",
    "measure_spin",
    "orthonormality_residual",
    "verify_shift_unitarity",
    "phase_factor",
    "entropy",
    "term_count",
    "normalized_entanglement",
    "EntanglementRecord",
    "AveragedEntanglement",
    "record_from_collapse",
    "walk_entanglement_series",
    "averaged_entanglement",
    "Step2State",
    "phi1",
    "psi_up_2",
    "psi_down_2",
    "max_condition_up",
    "CoinFamily",
    "SweepMode",
    "SweepSpec",
    "SearchMode",
    "MaxEntanglementHit",
    "family_coin",
    "grid_axis",
    "sweep_1d",
    "grid_search",
    "find_max_cases",
]
