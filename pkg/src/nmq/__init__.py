"""nmq: open-system dynamics and thermodynamics of a time-cut XY ring.

A periodic XY spin chain has one bond ramped off over a window [0, S]
while every site talks to its own finite-temperature bosonic bath with
exponential memory.  The package integrates the memory-closure master
equation (plus its white-noise and closed limits), tracks heat current,
power, energy current, and adiabatic fidelity, and designs zero-area
sine pulses from Bessel-function zeros to protect adiabaticity.
"""

__version__ = "0.1.0"

from .bath import (
    BathSpec,
    CHANNEL_SIGMA_MINUS,
    CHANNEL_SIGMA_Z,
    CorrelationParams,
    correlation_params,
    lindblad_rhs,
    o_operator_rhs,
    spectral_density,
)
from .control import (
    NO_CONTROL,
    ControlSpec,
    PulseCondition,
    bessel_j,
    bessel_zero,
    condition_residual,
    design_pulse,
    pulse_value,
)
from .dynamics import (
    IntegratorConfig,
    NonMarkovianState,
    closed_evolve,
    evolve,
    lindblad_evolve,
    master_rhs,
    resolve_steps,
    simulation_space,
)
from .hilbert import HilbertSpec, expectation, hermitian_eigensystem, site_operator
from .model import (
    ChainSpec,
    controlled_hamiltonian,
    dhamiltonian_dt,
    energy_gap_E21,
    hamiltonian,
    initial_state,
    target_state,
)
from .runner import (
    SCENARIOS,
    ScenarioConfig,
    build_config,
    compare_baseline,
    run_scenario,
)
from .thermo import (
    ThermoRecord,
    ThermoSampler,
    accumulate,
    energy_current,
    fidelity,
    first_law_report,
    heat_current,
    power,
)

__all__ = [
    "BathSpec", "CHANNEL_SIGMA_MINUS", "CHANNEL_SIGMA_Z", "ChainSpec",
    "ControlSpec", "CorrelationParams", "HilbertSpec", "IntegratorConfig",
    "NO_CONTROL", "NonMarkovianState", "PulseCondition", "ThermoRecord",
    "ThermoSampler", "accumulate", "bessel_j", "bessel_zero", "closed_evolve",
    "condition_residual", "controlled_hamiltonian", "correlation_params",
    "design_pulse", "dhamiltonian_dt", "energy_current", "energy_gap_E21",
    "SCENARIOS", "ScenarioConfig", "build_config", "compare_baseline",
    "evolve", "expectation", "fidelity", "first_law_report", "hamiltonian",
    "heat_current", "hermitian_eigensystem", "initial_state", "lindblad_evolve",
    "lindblad_rhs", "master_rhs", "o_operator_rhs", "power", "pulse_value",
    "resolve_steps", "run_scenario", "simulation_space", "site_operator",
    "spectral_density", "target_state",
]
