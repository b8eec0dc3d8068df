//! Quantum Otto heat engine whose hot bath moves at relativistic velocity.
//!
//! * [`bath`] — Planck and moving-bath occupation numbers.
//! * [`media`] — qubit and oscillator steady states and energies.
//! * [`dynamics`] — Lindblad thermalization of both media.
//! * [`cycle`] — four-stroke energy, heat and work bookkeeping.
//! * [`performance`] — work maximization, efficiency at maximum work and the
//!   effective-temperature analysis.
//!
//! Natural units `ħ = k_B = 1` throughout.

pub mod bath;
pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod golden;
pub mod media;
mod ode;
pub mod performance;
pub mod quadrature;

pub use bath::{
    band_average_occupation_oracle, doppler_log_factor, moving_occupation, occupation_asymptote,
    planck_occupation, BathSpec, DimensionlessGap, Regime, U_MAX,
};
pub use cycle::{
    cycle_ledger, efficiency, engine_condition, limit_work, stroke_energies, CycleSpec,
    LimitWork, StrokeEnergies, StrokeLedger,
};
pub use dynamics::{
    distance_to_steady, evolve_oscillator, evolve_qubit, ground_state, relax_to_steady, LindbladSpec, RelaxOptions, Relaxation,
    StepControl, TrajectoryRecord,
};
pub use error::{OttoError, Result};
pub use media::{
    asymptotic_oscillator_state, asymptotic_qubit_state, fock_truncation_bound,
    oscillator_mean_energy, qubit_mean_energy, MediumKind, MediumState, OscillatorState,
    QubitState,
};
pub use performance::{
    effective_temperature_fit, effective_temperature_fit_on, efficiency_at_max_work_limit,
    efficiency_at_max_work_raw, maximize_limit_work, maximize_work_numeric,
    optimal_hot_frequency_limit, reference_bounds, EffectiveTemperatureReport, EngineParams,
    MismatchGrid, OptimizationResult, ReferenceBounds,
};
