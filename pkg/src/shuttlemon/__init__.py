"""Desk-scale simulator for a shuttle-transmon device.

Workflow: express the device as lumped-element parameters (CircuitParams),
evaluate the coupling-coefficient ledger at a flux bias (coupling_set), build
dissipative models of the flux-driven state swap (protocol), and integrate
them (dynamics). Units: energies, frequencies, and rates are angular in
Grad/s, time in ns, everything else SI.
"""

__version__ = "0.1.0"

from .circuit import (
    CircuitParams,
    CouplingSet,
    DriveExpansion,
    FluxDrive,
    approx_drive_params,
    charging_energy,
    coupling_crossover,
    coupling_set,
    drive_amplitude_variant,
    flux_sweep,
    josephson_energy_pair,
    mass_from_x_zpf,
    modulated_coefficients,
    qubit_zpf,
    reference_params,
    symmetric_g1_variant,
    x_zpf_from_mass,
    xi_from_tunneling,
)
from .constants import (
    GRAD,
    KB_OVER_HBAR_GRAD,
    R_K,
    capacitance_from_charging_energy,
    charging_energy_from_capacitance,
    joules_to_grad,
)
from .dynamics import (
    LindbladModel,
    TimeSeries,
    evolve,
    lindblad_rhs,
    thermal_collapses,
    thermal_occupation,
)
from .errors import ConfigError, DomainError, IntegrationError, SimulatorError
from .hilbert import (
    OperatorSet,
    boson_lowering,
    check_density_matrix,
    expectation,
    make_operators,
    make_state,
    partial_trace,
    qubit_sigma,
    thermal_fock,
)
from .protocol import (
    EffectiveParams,
    ProtocolResult,
    ProtocolSchedule,
    bessel_j0_series,
    build_hold_model,
    build_lab_frame_model,
    build_rwa_model,
    compare_swap_models,
    effective_swap_params,
    fidelity,
    free_decay_baseline,
    run_swap_protocol,
)

__all__ = [
    "__version__",
    "CircuitParams",
    "CouplingSet",
    "DriveExpansion",
    "FluxDrive",
    "approx_drive_params",
    "charging_energy",
    "coupling_crossover",
    "coupling_set",
    "drive_amplitude_variant",
    "flux_sweep",
    "josephson_energy_pair",
    "mass_from_x_zpf",
    "modulated_coefficients",
    "qubit_zpf",
    "reference_params",
    "symmetric_g1_variant",
    "x_zpf_from_mass",
    "xi_from_tunneling",
    "GRAD",
    "KB_OVER_HBAR_GRAD",
    "R_K",
    "capacitance_from_charging_energy",
    "charging_energy_from_capacitance",
    "joules_to_grad",
    "LindbladModel",
    "TimeSeries",
    "evolve",
    "lindblad_rhs",
    "thermal_collapses",
    "thermal_occupation",
    "ConfigError",
    "DomainError",
    "IntegrationError",
    "SimulatorError",
    "OperatorSet",
    "boson_lowering",
    "check_density_matrix",
    "expectation",
    "make_operators",
    "make_state",
    "partial_trace",
    "qubit_sigma",
    "thermal_fock",
    "EffectiveParams",
    "ProtocolResult",
    "ProtocolSchedule",
    "bessel_j0_series",
    "build_hold_model",
    "build_lab_frame_model",
    "build_rwa_model",
    "compare_swap_models",
    "effective_swap_params",
    "fidelity",
    "free_decay_baseline",
    "run_swap_protocol",
]
