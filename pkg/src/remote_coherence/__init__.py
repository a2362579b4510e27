"""Remote creation of quantum coherence through a quantum SWITCH of noisy channels."""

from .channels import (
    ControlSpec,
    KrausChannel,
    MeasurementResult,
    NullOutcomeError,
    SwitchChannel,
    apply_channel,
    apply_switch_to_second_qubit,
    complete_depolarizing,
    measure_register,
    partial_depolarizing,
    state_unitary,
    switch_channel,
    unitary_u,
)
from .linalg import (
    DensityMatrix,
    InvalidStateError,
    NotHermitianError,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_transpose,
)
from .measures import (
    CorrelationVector,
    DiscordBreakdown,
    classical_correlation,
    correlation_vector,
    discord_bell_diagonal,
    discord_bruteforce,
    discord_scenario_A,
    discord_scenario_B,
    is_ppt,
    l1_coherence,
    min_pt_eigenvalue,
    mutual_information,
    pt_eigs_scenario_B,
    von_neumann_entropy,
)
from .protocols import ProtocolReport, ScenarioParams, TargetQubit

__version__ = "0.1.0"
