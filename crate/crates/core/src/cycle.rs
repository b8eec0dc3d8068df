//! Four-stroke Otto cycle bookkeeping.
//!
//! Strokes: A(ω_c, β_c) → B(ω_h, β_c) isentropic compression, B → C(ω_h, β_h)
//! hot isochore with the moving bath, C → D(ω_c, β_h) isentropic expansion,
//! D → A cold isochore with the static bath. Works and heats are energy
//! changes of the medium (positive when the medium gains energy); the
//! output work is `W_out = Q_H + Q_C = -(W_AB + W_CD)`.

use serde::{Deserialize, Serialize};

use crate::bath::{check_velocity, doppler, moving, planck, Regime};
use crate::error::{domain, positive, Result};
use crate::media::MediumKind;

/// Gap above which a high-temperature formula is badly out of regime
/// (ten times the nominal `β ω ≤ 0.1`).
pub const HIGH_T_WARN_GAP: f64 = 1.0;

/// Cold gap below which a low-temperature formula is badly out of regime
/// (a tenth of the nominal `β_c ω_c ≥ 10`).
pub const LOW_T_WARN_COLD_GAP: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    omega_c: f64,
    omega_h: f64,
    beta_c: f64,
    beta_h: f64,
    u: f64,
    medium: MediumKind,
}

impl CycleSpec {
    /// Requires `ω_h > ω_c > 0`, positive inverse temperatures and `u` in
    /// `[0, U_MAX]`. A hotter hot bath (`β_h < β_c`) is usual but not required.
    pub fn new(
        omega_c: f64,
        omega_h: f64,
        beta_c: f64,
        beta_h: f64,
        u: f64,
        medium: MediumKind,
    ) -> Result<Self> {
        let spec = Self::unchecked_gap(omega_c, omega_h, beta_c, beta_h, u, medium)?;
        if !(omega_h > omega_c) {
            return Err(domain("omega_h", omega_h, "omega_h > omega_c"));
        }
        Ok(spec)
    }

    /// A closed-gap cycle (`ω_h = ω_c`), which exchanges no work.
    pub fn degenerate(omega: f64, beta_c: f64, beta_h: f64, u: f64, medium: MediumKind) -> Result<Self> {
        Self::unchecked_gap(omega, omega, beta_c, beta_h, u, medium)
    }

    fn unchecked_gap(
        omega_c: f64,
        omega_h: f64,
        beta_c: f64,
        beta_h: f64,
        u: f64,
        medium: MediumKind,
    ) -> Result<Self> {
        Ok(Self {
            omega_c: positive("omega_c", omega_c)?,
            omega_h: positive("omega_h", omega_h)?,
            beta_c: positive("beta_c", beta_c)?,
            beta_h: positive("beta_h", beta_h)?,
            u: check_velocity(u)?,
            medium,
        })
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }
    pub fn omega_h(&self) -> f64 {
        self.omega_h
    }
    pub fn beta_c(&self) -> f64 {
        self.beta_c
    }
    pub fn beta_h(&self) -> f64 {
        self.beta_h
    }
    pub fn velocity(&self) -> f64 {
        self.u
    }
    pub fn medium(&self) -> MediumKind {
        self.medium
    }

    /// `n(β_c ω_c)`, the cold-bath Planck occupation.
    pub fn cold_occupation(&self) -> f64 {
        planck(self.beta_c * self.omega_c)
    }

    /// `N(β_h ω_h, u)`, the moving hot-bath occupation.
    pub fn hot_occupation(&self) -> f64 {
        moving(self.beta_h * self.omega_h, self.u)
    }
}

/// Mean energies at the four corners of the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeEnergies {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeLedger {
    pub e_a: f64,
    pub e_b: f64,
    pub e_c: f64,
    pub e_d: f64,
    pub w_ab: f64,
    pub q_h: f64,
    pub w_cd: f64,
    pub q_c: f64,
    pub w_out: f64,
    /// `1 - ω_c/ω_h`, carried even when the cycle is not an engine.
    pub eta: f64,
    pub is_engine: bool,
}

impl StrokeLedger {
    /// The efficiency, only for cycles that produce work.
    pub fn efficiency(&self) -> Option<f64> {
        self.is_engine.then_some(self.eta)
    }

    /// `W_AB + Q_H + W_CD + Q_C`, zero for a closed cycle.
    pub fn first_law_residual(&self) -> f64 {
        self.w_ab + self.q_h + self.w_cd + self.q_c
    }
}

pub fn stroke_energies(spec: &CycleSpec) -> Result<StrokeEnergies> {
    let n_c = spec.cold_occupation();
    let n_h = spec.hot_occupation();
    let (wc, wh) = (spec.omega_c, spec.omega_h);
    Ok(match spec.medium {
        MediumKind::Qubit => {
            let (cold, hot) = (2.0 * (2.0 * n_c + 1.0), 2.0 * (2.0 * n_h + 1.0));
            StrokeEnergies {
                a: -wc / cold,
                b: -wh / cold,
                c: -wh / hot,
                d: -wc / hot,
            }
        }
        MediumKind::Oscillator => StrokeEnergies {
            a: wc * (n_c + 0.5),
            b: wh * (n_c + 0.5),
            c: wh * (n_h + 0.5),
            d: wc * (n_h + 0.5),
        },
    })
}

pub fn cycle_ledger(spec: &CycleSpec) -> Result<StrokeLedger> {
    let e = stroke_energies(spec)?;
    let n_c = spec.cold_occupation();
    let n_h = spec.hot_occupation();
    let (wc, wh) = (spec.omega_c, spec.omega_h);

    let (w_ab, q_h, w_cd, q_c) = match spec.medium {
        MediumKind::Qubit => {
            let (inv_c, inv_h) = (1.0 / (2.0 * n_c + 1.0), 1.0 / (2.0 * n_h + 1.0));
            (
                0.5 * (wc - wh) * inv_c,
                0.5 * wh * (inv_c - inv_h),
                0.5 * (wh - wc) * inv_h,
                0.5 * wc * (inv_h - inv_c),
            )
        }
        MediumKind::Oscillator => (
            (wh - wc) * (n_c + 0.5),
            wh * (n_h - n_c),
            -(wh - wc) * (n_h + 0.5),
            wc * (n_c - n_h),
        ),
    };
    let w_out = q_h + q_c;
    Ok(StrokeLedger {
        e_a: e.a,
        e_b: e.b,
        e_c: e.c,
        e_d: e.d,
        w_ab,
        q_h,
        w_cd,
        q_c,
        w_out,
        eta: efficiency(spec),
        is_engine: w_out > 0.0,
    })
}

/// `η = 1 - ω_c/ω_h`; independent of the bath velocity and temperatures.
pub fn efficiency(spec: &CycleSpec) -> f64 {
    1.0 - spec.omega_c / spec.omega_h
}

/// Positive output work; equivalent to `N(β_h ω_h, u) > n(β_c ω_c)` up to rounding.
pub fn engine_condition(spec: &CycleSpec) -> Result<bool> {
    Ok(cycle_ledger(spec)?.is_engine)
}

/// A closed-form work approximation in both sign conventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitWork {
    pub medium: MediumKind,
    pub regime: Regime,
    /// `⟨W⟩ = W_AB + W_CD` as the closed form is written (negative for an engine).
    pub mean_work: f64,
    /// `-⟨W⟩`, directly comparable with [`StrokeLedger::w_out`].
    pub output_work: f64,
    /// Regime-validity complaints; empty when the gaps are in range.
    pub warnings: Vec<String>,
}

/// `⟨W⟩` in the limit forms, with `D = D(u)` already evaluated.
///
/// * qubit, high T: `(ω_c-ω_h)(D β_c ω_c - β_h ω_h) / (4D)`
/// * qubit, low T: `(ω_c-ω_h)/2 · (1 - β_h ω_h/(2D))`
/// * oscillator, high T: `(1/β_c)(η/(1-η) - D (β_c/β_h) η)` with `η = 1 - ω_c/ω_h`
/// * oscillator, low T: `(ω_h-ω_c)/2 - (D/β_h)(1 - ω_c/ω_h)`
pub(crate) fn limit_mean_work(
    medium: MediumKind,
    regime: Regime,
    omega_c: f64,
    omega_h: f64,
    beta_c: f64,
    beta_h: f64,
    d: f64,
) -> f64 {
    match (medium, regime) {
        (MediumKind::Qubit, Regime::HighT) => {
            (omega_c - omega_h) * (d * beta_c * omega_c - beta_h * omega_h) / (4.0 * d)
        }
        (MediumKind::Qubit, Regime::LowT) => {
            0.5 * (omega_c - omega_h) * (1.0 - beta_h * omega_h / (2.0 * d))
        }
        (MediumKind::Oscillator, Regime::HighT) => {
            let eta = 1.0 - omega_c / omega_h;
            (eta / (1.0 - eta) - d * beta_c / beta_h * eta) / beta_c
        }
        (MediumKind::Oscillator, Regime::LowT) => {
            0.5 * (omega_h - omega_c) - d / beta_h * (1.0 - omega_c / omega_h)
        }
    }
}

/// Evaluates the high- or low-temperature closed form for `spec`.
pub fn limit_work(spec: &CycleSpec, regime: Regime) -> Result<LimitWork> {
    let d = doppler(spec.u);
    let mean_work = limit_mean_work(
        spec.medium,
        regime,
        spec.omega_c,
        spec.omega_h,
        spec.beta_c,
        spec.beta_h,
        d,
    );

    let (x_c, x_h) = (spec.beta_c * spec.omega_c, spec.beta_h * spec.omega_h);
    let mut warnings = Vec::new();
    match regime {
        Regime::HighT => {
            for (name, x) in [("beta_c*omega_c", x_c), ("beta_h*omega_h", x_h)] {
                if x > HIGH_T_WARN_GAP {
                    warnings.push(format!("high-T form used with {name} = {x}"));
                }
            }
        }
        Regime::LowT => {
            if x_c < LOW_T_WARN_COLD_GAP {
                warnings.push(format!("low-T form used with beta_c*omega_c = {x_c}"));
            }
            if x_h > HIGH_T_WARN_GAP {
                warnings.push(format!("low-T form needs a classical hot bath, got beta_h*omega_h = {x_h}"));
            }
        }
    }

    Ok(LimitWork {
        medium: spec.medium,
        regime,
        mean_work,
        output_work: -mean_work,
        warnings,
    })
}
