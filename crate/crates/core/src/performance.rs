//! Work maximization over the hot frequency, efficiency at maximum work,
//! reference bounds and the effective-temperature analysis.
//!
//! Closed forms are written through `D(u)` (see
//! [`doppler_log_factor`](crate::bath::doppler_log_factor)), which makes
//! `u = 0` a regular point.

use serde::{Deserialize, Serialize};

use crate::bath::{check_velocity, doppler, moving, planck, Regime};
use crate::cycle::{cycle_ledger, limit_mean_work, CycleSpec};
use crate::error::{positive, OttoError, Result};
use crate::golden::{GoldenSection, Maximum};
use crate::media::MediumKind;

/// Relative offset of the lower bracket end above `ω_c`.
pub const BRACKET_OFFSET: f64 = 1e-6;

/// Spectral mismatch below this counts as a Planckian (consistent) fit.
pub const CONSISTENT_MISMATCH: f64 = 1e-10;

/// Everything but the hot frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    pub omega_c: f64,
    pub beta_c: f64,
    pub beta_h: f64,
    pub u: f64,
}

impl EngineParams {
    pub fn new(omega_c: f64, beta_c: f64, beta_h: f64, u: f64) -> Result<Self> {
        Ok(Self {
            omega_c: positive("omega_c", omega_c)?,
            beta_c: positive("beta_c", beta_c)?,
            beta_h: positive("beta_h", beta_h)?,
            u: check_velocity(u)?,
        })
    }

    pub fn cycle(&self, omega_h: f64, medium: MediumKind) -> Result<CycleSpec> {
        CycleSpec::new(self.omega_c, omega_h, self.beta_c, self.beta_h, self.u, medium)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub omega_h_star: f64,
    pub w_star: f64,
    /// `1 - ω_c/ω_h*`.
    pub eta_star: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    /// The optimum landed on a bracket end.
    pub boundary: bool,
}

/// Exact output work `Q_H + Q_C` as a function of `ω_h`.
fn exact_work(medium: MediumKind, p: EngineParams) -> impl Fn(f64) -> f64 {
    let n_c = planck(p.beta_c * p.omega_c);
    move |omega_h| {
        let n_h = moving(p.beta_h * omega_h, p.u);
        let gap = omega_h - p.omega_c;
        match medium {
            MediumKind::Qubit => 0.5 * gap * (1.0 / (2.0 * n_c + 1.0) - 1.0 / (2.0 * n_h + 1.0)),
            MediumKind::Oscillator => gap * (n_h - n_c),
        }
    }
}

/// Sign-mapped limit work `-⟨W⟩` as a function of `ω_h`.
fn limit_work_fn(medium: MediumKind, regime: Regime, p: EngineParams) -> impl Fn(f64) -> f64 {
    let d = doppler(p.u);
    move |omega_h| -limit_mean_work(medium, regime, p.omega_c, omega_h, p.beta_c, p.beta_h, d)
}

/// `[ω_c(1+δ), ω_0]` where `ω_0` is the first zero of the work above `ω_c`.
fn engine_window(work: &impl Fn(f64) -> f64, omega_c: f64) -> Result<(f64, f64)> {
    let lo = omega_c * (1.0 + BRACKET_OFFSET);
    if !(work(lo) > 0.0) {
        return Err(OttoError::NonEngine(format!(
            "no positive work just above omega_c = {omega_c}"
        )));
    }
    let mut inside = lo;
    let mut outside = 2.0 * omega_c;
    let mut doublings = 0;
    while work(outside) > 0.0 {
        inside = outside;
        outside *= 2.0;
        doublings += 1;
        if doublings > 64 {
            return Err(OttoError::NonEngine(
                "work stays positive for every hot frequency".into(),
            ));
        }
    }
    while outside - inside > 1e-13 * outside {
        let mid = 0.5 * (inside + outside);
        if work(mid) > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok((lo, outside))
}

fn maximize(
    work: impl Fn(f64) -> f64,
    omega_c: f64,
    bracket: Option<(f64, f64)>,
) -> Result<OptimizationResult> {
    let (lo, hi) = match bracket {
        Some(b) => b,
        None => engine_window(&work, omega_c)?,
    };
    if !(lo > omega_c) {
        return Err(OttoError::Domain {
            name: "bracket.lo",
            value: lo,
            expected: "lo > omega_c",
        });
    }
    let Maximum {
        x,
        value,
        iterations,
        bracket,
        on_boundary,
    } = GoldenSection::default().maximize(&work, lo, hi)?;
    if !(value > 0.0) {
        return Err(OttoError::NonEngine(format!(
            "no positive work on [{lo}, {hi}]"
        )));
    }
    Ok(OptimizationResult {
        omega_h_star: x,
        w_star: value,
        eta_star: 1.0 - omega_c / x,
        iterations,
        bracket,
        boundary: on_boundary,
    })
}

/// Maximizes the exact output work over `ω_h`.
///
/// Without an explicit bracket the search runs over the engine window
/// `[ω_c(1+10⁻⁶), ω_0]`, `ω_0` being where the work returns to zero.
pub fn maximize_work_numeric(
    medium: MediumKind,
    params: &EngineParams,
    bracket: Option<(f64, f64)>,
) -> Result<OptimizationResult> {
    maximize(exact_work(medium, *params), params.omega_c, bracket)
}

/// Maximizes a closed-form limit work over `ω_h`.
pub fn maximize_limit_work(
    medium: MediumKind,
    regime: Regime,
    params: &EngineParams,
    bracket: Option<(f64, f64)>,
) -> Result<OptimizationResult> {
    maximize(limit_work_fn(medium, regime, *params), params.omega_c, bracket)
}

/// Stationary point of the limit work in `ω_h`.
///
/// | medium | regime | `ω_h*` |
/// |---|---|---|
/// | qubit | high T | `ω_c (D β_c + β_h) / (2 β_h)` |
/// | qubit | low T | `(2D/β_h + ω_c) / 2` |
/// | oscillator | high T | `ω_c √(D β_c / β_h)` |
/// | oscillator | low T | `√(2 D ω_c / β_h)` |
pub fn optimal_hot_frequency_limit(
    medium: MediumKind,
    regime: Regime,
    params: &EngineParams,
) -> Result<f64> {
    let EngineParams {
        omega_c,
        beta_c,
        beta_h,
        u,
    } = *params;
    let d = doppler(u);
    Ok(match (medium, regime) {
        (MediumKind::Qubit, Regime::HighT) => omega_c * (d * beta_c + beta_h) / (2.0 * beta_h),
        (MediumKind::Qubit, Regime::LowT) => 0.5 * (2.0 * d / beta_h + omega_c),
        (MediumKind::Oscillator, Regime::HighT) => omega_c * (d * beta_c / beta_h).sqrt(),
        (MediumKind::Oscillator, Regime::LowT) => (2.0 * d * omega_c / beta_h).sqrt(),
    })
}

fn eta_at_max_work(
    medium: MediumKind,
    regime: Regime,
    beta_c: f64,
    beta_h: f64,
    d: f64,
    omega_c: f64,
) -> f64 {
    match (medium, regime) {
        (MediumKind::Qubit, Regime::HighT) => 1.0 - 2.0 * beta_h / (d * beta_c + beta_h),
        (MediumKind::Qubit, Regime::LowT) => {
            (2.0 * d - beta_h * omega_c) / (2.0 * d + beta_h * omega_c)
        }
        (MediumKind::Oscillator, Regime::HighT) => 1.0 - (beta_h / (d * beta_c)).sqrt(),
        (MediumKind::Oscillator, Regime::LowT) => 1.0 - (beta_h * omega_c / (2.0 * d)).sqrt(),
    }
}

/// Closed-form efficiency at maximum work without the engine check; may fall
/// outside `(0, 1)` where the closed form stops describing an engine.
pub fn efficiency_at_max_work_raw(medium: MediumKind, regime: Regime, params: &EngineParams) -> f64 {
    eta_at_max_work(
        medium,
        regime,
        params.beta_c,
        params.beta_h,
        doppler(params.u),
        params.omega_c,
    )
}

/// Efficiency at maximum work from the closed forms. `ω_c` only enters the
/// low-temperature forms. Values outside `(0, 1)` are reported as
/// [`OttoError::NonEngine`].
pub fn efficiency_at_max_work_limit(
    medium: MediumKind,
    regime: Regime,
    params: &EngineParams,
) -> Result<f64> {
    let eta = efficiency_at_max_work_raw(medium, regime, params);
    if eta > 0.0 && eta < 1.0 {
        Ok(eta)
    } else {
        Err(OttoError::NonEngine(format!(
            "{medium} {regime} efficiency at maximum work is {eta}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    /// `1 - β_h/β_c`
    pub carnot: f64,
    /// `1 - √(β_h/β_c)`
    pub curzon_ahlborn: f64,
}

pub fn reference_bounds(beta_c: f64, beta_h: f64) -> Result<ReferenceBounds> {
    let ratio = positive("beta_h", beta_h)? / positive("beta_c", beta_c)?;
    Ok(ReferenceBounds {
        carnot: 1.0 - ratio,
        curzon_ahlborn: 1.0 - ratio.sqrt(),
    })
}

/// Log-spaced grid of `x = β_h ω` on which occupations are compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MismatchGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Default for MismatchGrid {
    fn default() -> Self {
        Self {
            x_min: 1e-3,
            x_max: 1e2,
            points: 241,
        }
    }
}

impl MismatchGrid {
    pub fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        let (a, b) = (self.x_min.ln(), self.x_max.ln());
        let n = self.points.max(2);
        (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveTemperatureReport {
    pub medium: MediumKind,
    pub regime: Regime,
    /// Rest-bath inverse temperature with the same efficiency at maximum work.
    pub beta_eff: Option<f64>,
    /// `sup_ω |N(β_h ω, u) - n(β_eff ω)|` over the grid.
    pub spectral_mismatch: Option<f64>,
    /// The rest bath at `β_eff` reproduces the moving-bath spectrum.
    pub consistent: bool,
    pub failure: Option<String>,
}

pub fn effective_temperature_fit(
    medium: MediumKind,
    regime: Regime,
    params: &EngineParams,
) -> Result<EffectiveTemperatureReport> {
    effective_temperature_fit_on(medium, regime, params, &MismatchGrid::default())
}

/// Solves `η^mw(β_eff, u = 0) = η^mw(β_h, u)` by bisection on
/// `(0, 10³ β_h]`, then measures how far the rest-bath spectrum at `β_eff`
/// is from the moving-bath spectrum.
pub fn effective_temperature_fit_on(
    medium: MediumKind,
    regime: Regime,
    params: &EngineParams,
    grid: &MismatchGrid,
) -> Result<EffectiveTemperatureReport> {
    let EngineParams {
        omega_c,
        beta_c,
        beta_h,
        u,
    } = *params;
    let target = eta_at_max_work(medium, regime, beta_c, beta_h, doppler(u), omega_c);
    // η^mw at rest is strictly decreasing in the hot inverse temperature.
    let at_rest = |beta: f64| eta_at_max_work(medium, regime, beta_c, beta, 1.0, omega_c);

    let mut report = EffectiveTemperatureReport {
        medium,
        regime,
        beta_eff: None,
        spectral_mismatch: None,
        consistent: false,
        failure: None,
    };
    let (mut lo, mut hi) = (0.0, 1e3 * beta_h);
    if !(target < 1.0) || at_rest(hi) > target {
        report.failure = Some(format!(
            "no root in (0, {hi}] for target efficiency {target}"
        ));
        return Ok(report);
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at_rest(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta_eff = if (at_rest(lo) - target).abs() < (at_rest(hi) - target).abs() && lo > 0.0 {
        lo
    } else {
        hi
    };

    let mismatch = grid
        .gaps()
        .map(|x| {
            let omega = x / beta_h;
            (moving(x, u) - planck(beta_eff * omega)).abs()
        })
        .fold(0.0f64, f64::max);

    report.beta_eff = Some(beta_eff);
    report.spectral_mismatch = Some(mismatch);
    report.consistent = mismatch < CONSISTENT_MISMATCH;
    Ok(report)
}

/// Checks that the exact optimum reproduces a cycle ledger value; used by the
/// CLI to attach the full ledger at `ω_h*`.
pub fn ledger_at_optimum(
    medium: MediumKind,
    params: &EngineParams,
    result: &OptimizationResult,
) -> Result<crate::cycle::StrokeLedger> {
    cycle_ledger(&params.cycle(result.omega_h_star, medium)?)
}
