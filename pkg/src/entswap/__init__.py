"""Entanglement and energy transfer between two exchange-coupled qubit pairs.

Two donor qubits share one excitation and pass it resonantly to two target
qubits, optionally through lossy targets.  The package provides the closed-
form solutions, spectral and RK4 propagation engines, negativity and energy
measures with their attainability frontier, and deterministic sweep tooling
with a command-line front end.
"""
from ._version import __version__
from .closed_form import (
    RabiParams,
    XStateAB,
    bound_residual,
    dissipative_elements,
    exchange_amplitude,
    frontier_negativity,
    global_state,
    rabi_params,
    unitary_elements,
)
from .dynamics import (
    Method,
    PropagationPlan,
    default_timestep,
    evolve_exact,
    lindblad_rhs,
    propagate_lindblad,
    propagate_state,
)
from .linalg import (
    HermitianSpectrum,
    hermitian_eig,
    kron,
    partial_trace_to_target,
    partial_transpose_first,
)
from .measures import ObservablePair, energy, negativity, xstate_observables
from .model import (
    SystemConfig,
    build_hamiltonian,
    excitation_number,
    initial_state,
    jump_operators,
    target_hamiltonian,
)
from .sweep import (
    Engine,
    Mode,
    SweepSpec,
    TrajectoryRecord,
    peak_negativity,
    run_bound_check,
    run_phase_diagram,
    run_time_series,
    run_verify,
)

__all__ = [
    "__version__",
    "RabiParams", "XStateAB", "bound_residual", "dissipative_elements",
    "exchange_amplitude", "frontier_negativity", "global_state", "rabi_params",
    "unitary_elements",
    "Method", "PropagationPlan", "default_timestep", "evolve_exact",
    "lindblad_rhs", "propagate_lindblad", "propagate_state",
    "HermitianSpectrum", "hermitian_eig", "kron", "partial_trace_to_target",
    "partial_transpose_first",
    "ObservablePair", "energy", "negativity", "xstate_observables",
    "SystemConfig", "build_hamiltonian", "excitation_number", "initial_state",
    "jump_operators", "target_hamiltonian",
    "Engine", "Mode", "SweepSpec", "TrajectoryRecord", "peak_negativity",
    "run_bound_check", "run_phase_diagram", "run_time_series", "run_verify",
]
