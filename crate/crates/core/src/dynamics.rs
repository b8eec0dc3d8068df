//! Thermalization of the working media under their Lindblad master equations.
//!
//! Only populations (and, for the qubit, the single coherence) are evolved.
//! The Lamb shift commutes with the system Hamiltonian and never enters a
//! population, so it is left out.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, OttoError, Result};
use crate::media::{
    asymptotic_oscillator_state, asymptotic_qubit_state, fock_truncation_bound, MediumKind,
    MediumState, OscillatorState, QubitState,
};
use crate::ode::DormandPrince;
pub use crate::ode::{StepControl, NEGATIVITY_FLOOR};

/// Trace drift allowed per unit time during oscillator integration.
pub const TRACE_DRIFT_TOL: f64 = 1e-10;

/// Relaxation is abandoned after this many decay times `1/Γ₀`.
pub const RELAX_HORIZON: f64 = 1e4;

/// Dissipator parameters for one bath coupled to one medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladSpec {
    gamma0: f64,
    occupation: f64,
    omega: f64,
}

impl LindbladSpec {
    pub fn new(gamma0: f64, occupation: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            gamma0: positive("gamma0", gamma0)?,
            occupation: non_negative("N", occupation)?,
            omega: positive("omega", omega)?,
        })
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn occupation(&self) -> f64 {
        self.occupation
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Population relaxation rate of the qubit, `Γ₀ (2N + 1)`.
    pub fn qubit_rate(&self) -> f64 {
        self.gamma0 * (2.0 * self.occupation + 1.0)
    }
}

/// Exact solution of the qubit master equation after time `t`.
///
/// `p_e(t) = p_∞ + (p_e(0) - p_∞) e^{-Γ₀(2N+1)t}` with `p_∞ = N/(2N+1)`;
/// the coherence decays at half that rate and rotates at `ω`.
pub fn evolve_qubit(state: &QubitState, spec: &LindbladSpec, t: f64) -> Result<QubitState> {
    non_negative("t", t)?;
    if t == 0.0 {
        return Ok(*state);
    }
    let rate = spec.qubit_rate();
    let steady = spec.occupation / (2.0 * spec.occupation + 1.0);
    let decay = (-rate * t).exp();
    let p = steady + (state.p_excited() - steady) * decay;
    let coherence =
        state.coherence() * (-0.5 * rate * t).exp() * Complex64::from_polar(1.0, -spec.omega * t);
    QubitState::new(p.clamp(0.0, 1.0), coherence)
}

/// Right-hand side of the truncated birth–death chain, written as edge fluxes
/// so that the trace is conserved exactly. The top level reflects.
fn birth_death_rhs(gamma0: f64, occupation: f64) -> impl Fn(&[f64], &mut [f64]) {
    move |p, dp| {
        dp.iter_mut().for_each(|v| *v = 0.0);
        for n in 0..p.len() - 1 {
            let k = (n + 1) as f64;
            let flux = gamma0 * k * (occupation * p[n] - (occupation + 1.0) * p[n + 1]);
            dp[n] -= flux;
            dp[n + 1] += flux;
        }
    }
}

fn check_cutoff(state: &OscillatorState, occupation: f64) -> Result<()> {
    let required = fock_truncation_bound(occupation, state.trunc_budget());
    if state.n_max() < required {
        let ratio = occupation / (occupation + 1.0);
        return Err(OttoError::Truncation {
            n_max: state.n_max(),
            required,
            tail: ratio.powf((state.n_max() + 1) as f64),
            budget: state.trunc_budget(),
        });
    }
    Ok(())
}

fn finish_oscillator(
    populations: Vec<f64>,
    budget: f64,
    trace0: f64,
    elapsed: f64,
) -> Result<OscillatorState> {
    let drift = (populations.iter().sum::<f64>() - trace0).abs();
    if drift > TRACE_DRIFT_TOL * elapsed.max(1.0) {
        return Err(OttoError::Integration {
            time: elapsed,
            reason: format!("trace drifted by {drift:e}"),
        });
    }
    OscillatorState::new(populations, budget)
}

/// Integrates the oscillator populations for time `t`.
pub fn evolve_oscillator(
    state: &OscillatorState,
    spec: &LindbladSpec,
    t: f64,
    control: &StepControl,
) -> Result<OscillatorState> {
    non_negative("t", t)?;
    check_cutoff(state, spec.occupation)?;
    if t == 0.0 {
        return Ok(state.clone());
    }
    let mut y = state.populations().to_vec();
    let trace0 = state.trace();
    let mut stepper = DormandPrince::new(
        birth_death_rhs(spec.gamma0, spec.occupation),
        y.len(),
        *control,
    )
    .populations();
    let mut now = 0.0;
    stepper.advance(&mut y, &mut now, t, |_, _| false)?;
    finish_oscillator(y, state.trunc_budget(), trace0, t)
}

/// Sampled time evolution of one medium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<MediumState>,
    pub converged: bool,
    pub t_relax: Option<f64>,
}

impl TrajectoryRecord {
    fn new() -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
            converged: false,
            t_relax: None,
        }
    }

    /// Appends a sample; a time equal to the last one replaces that sample.
    fn push(&mut self, t: f64, state: MediumState) {
        if let Some(&last) = self.times.last() {
            debug_assert!(t >= last);
            if t == last {
                *self.states.last_mut().expect("paired with times") = state;
                return;
            }
        }
        self.times.push(t);
        self.states.push(state);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn csv_header(&self) -> String {
        match self.states.first() {
            Some(MediumState::Oscillator(s)) => {
                let mut cols = vec!["time".to_string()];
                cols.extend((0..=s.n_max()).map(|n| format!("p_{n}")));
                cols.join(",")
            }
            _ => "time,p_excited,re_coh,im_coh".to_string(),
        }
    }

    /// Writes the header line and one row per sample.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{}", self.csv_header())?;
        for (t, state) in self.times.iter().zip(&self.states) {
            match state {
                MediumState::Qubit(q) => writeln!(
                    out,
                    "{t},{},{},{}",
                    q.p_excited(),
                    q.coherence().re,
                    q.coherence().im
                )?,
                MediumState::Oscillator(o) => {
                    write!(out, "{t}")?;
                    for p in o.populations() {
                        write!(out, ",{p}")?;
                    }
                    writeln!(out)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOptions {
    /// Distance to the steady state that counts as relaxed.
    pub tol: f64,
    /// Spacing of recorded samples; `None` means `0.5 / Γ₀`.
    pub sample_interval: Option<f64>,
    pub control: StepControl,
}

impl RelaxOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            sample_interval: None,
            control: StepControl::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub state: MediumState,
    pub t_relax: f64,
    pub trajectory: TrajectoryRecord,
}

/// Distance from `state` to the analytic steady state of `spec`: trace
/// distance for the qubit, total variation for the oscillator.
pub fn distance_to_steady(state: &MediumState, spec: &LindbladSpec) -> Result<f64> {
    Ok(match state {
        MediumState::Qubit(q) => q.trace_distance(&asymptotic_qubit_state(spec.occupation)?),
        MediumState::Oscillator(o) => o.total_variation(&asymptotic_oscillator_state(
            spec.occupation,
            o.n_max(),
            o.trunc_budget(),
        )?),
    })
}

/// Evolves `state` until its distance to the steady state drops below
/// `opts.tol`, recording samples along the way.
///
/// For the qubit the crossing time is exact. For the oscillator it is the end
/// of the first accepted integrator step below tolerance.
pub fn relax_to_steady(
    state: &MediumState,
    spec: &LindbladSpec,
    opts: &RelaxOptions,
) -> Result<Relaxation> {
    let tol = positive("tol", opts.tol)?;
    let dt = positive(
        "sample_interval",
        opts.sample_interval.unwrap_or(0.5 / spec.gamma0),
    )?;
    let t_max = RELAX_HORIZON / spec.gamma0;

    let mut record = TrajectoryRecord::new();
    record.push(0.0, state.clone());
    let d0 = distance_to_steady(state, spec)?;
    if d0 < tol {
        record.converged = true;
        record.t_relax = Some(0.0);
        return Ok(Relaxation {
            state: state.clone(),
            t_relax: 0.0,
            trajectory: record,
        });
    }

    let (final_state, t_relax) = match state {
        MediumState::Qubit(q) => relax_qubit(q, spec, tol, dt, t_max, &mut record)?,
        MediumState::Oscillator(o) => {
            relax_oscillator(o, spec, tol, dt, t_max, &opts.control, &mut record)?
        }
    };
    record.converged = true;
    record.t_relax = Some(t_relax);
    Ok(Relaxation {
        state: final_state,
        t_relax,
        trajectory: record,
    })
}

fn relax_qubit(
    q: &QubitState,
    spec: &LindbladSpec,
    tol: f64,
    dt: f64,
    t_max: f64,
    record: &mut TrajectoryRecord,
) -> Result<(MediumState, f64)> {
    let steady = asymptotic_qubit_state(spec.occupation)?;
    let dp2 = (q.p_excited() - steady.p_excited()).powi(2);
    let c2 = q.coherence().norm_sqr();
    // distance² = dp² y² + |c|² y with y = e^{-κt}; positive root, cancellation-free.
    let y = 2.0 * tol * tol / (c2 + (c2 * c2 + 4.0 * dp2 * tol * tol).sqrt());
    let t_relax = -y.ln() / spec.qubit_rate();
    if !(t_relax <= t_max) {
        return Err(OttoError::NonConvergence {
            tol,
            t_max,
            distance: distance_to_steady(&MediumState::Qubit(evolve_qubit(q, spec, t_max)?), spec)?,
        });
    }
    let mut k = 1;
    while (k as f64) * dt < t_relax {
        let t = k as f64 * dt;
        record.push(t, MediumState::Qubit(evolve_qubit(q, spec, t)?));
        k += 1;
    }
    let last = MediumState::Qubit(evolve_qubit(q, spec, t_relax)?);
    record.push(t_relax, last.clone());
    Ok((last, t_relax))
}

fn relax_oscillator(
    o: &OscillatorState,
    spec: &LindbladSpec,
    tol: f64,
    dt: f64,
    t_max: f64,
    control: &StepControl,
    record: &mut TrajectoryRecord,
) -> Result<(MediumState, f64)> {
    check_cutoff(o, spec.occupation)?;
    let target = asymptotic_oscillator_state(spec.occupation, o.n_max(), o.trunc_budget())?;
    // The truncated chain relaxes to the renormalized law, so the distance
    // cannot fall below half the target's deficit.
    let floor = 0.5 * target.truncation_deficit();
    if tol <= floor {
        return Err(OttoError::NonConvergence {
            tol,
            t_max,
            distance: floor,
        });
    }
    let tv = |p: &[f64]| -> f64 {
        0.5 * p
            .iter()
            .zip(target.populations())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    };

    let mut y = o.populations().to_vec();
    let trace0 = o.trace();
    let mut stepper = DormandPrince::new(
        birth_death_rhs(spec.gamma0, spec.occupation),
        y.len(),
        *control,
    )
    .populations();
    let mut t = 0.0;
    let mut k = 1;
    loop {
        let t_next = (k as f64 * dt).min(t_max);
        let crossed = stepper.advance(&mut y, &mut t, t_next, |_, p| tv(p) < tol)?;
        let state = finish_oscillator(y.clone(), o.trunc_budget(), trace0, t)?;
        record.push(t, MediumState::Oscillator(state.clone()));
        if crossed {
            return Ok((MediumState::Oscillator(state), t));
        }
        if t >= t_max {
            return Err(OttoError::NonConvergence {
                tol,
                t_max,
                distance: tv(&y),
            });
        }
        k += 1;
    }
}

/// Initial condition for a relaxation run.
pub fn ground_state(kind: MediumKind, n_max: usize, trunc_budget: f64) -> Result<MediumState> {
    Ok(match kind {
        MediumKind::Qubit => MediumState::Qubit(QubitState::ground()),
        MediumKind::Oscillator => {
            MediumState::Oscillator(OscillatorState::vacuum(n_max, trunc_budget)?)
        }
    })
}
