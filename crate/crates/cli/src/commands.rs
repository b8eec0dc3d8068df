//! One function per subcommand. Each returns the rendered output and leaves
//! the choice of destination to the caller.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use otto_core::dynamics::ground_state;
use otto_core::media::MediumState;
use otto_core::{
    band_average_occupation_oracle, cycle_ledger, distance_to_steady,
    effective_temperature_fit_on, efficiency_at_max_work_raw, fock_truncation_bound, limit_work,
    maximize_work_numeric, moving_occupation, optimal_hot_frequency_limit, planck_occupation,
    reference_bounds, relax_to_steady, asymptotic_oscillator_state, asymptotic_qubit_state,
    CycleSpec, DimensionlessGap, EffectiveTemperatureReport, EngineParams, LimitWork,
    LindbladSpec, MediumKind, MismatchGrid, OttoError, Regime, RelaxOptions, StrokeLedger,
};
use otto_core::performance::CONSISTENT_MISMATCH;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{self, Cell, Table};

/// Rendered result of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Main output: CSV, report text or JSON.
    pub body: String,
    /// Short human summary printed next to a data body (e.g. `t_relax`).
    pub note: Option<String>,
}

impl Outcome {
    fn body(body: String) -> Self {
        Self { body, note: None }
    }
}

pub fn run(cfg: &RunConfig, json: bool) -> Result<Outcome, CliError> {
    match cfg.command() {
        Command::Occupation => occupation(cfg, json),
        Command::Cycle => cycle(cfg, json),
        Command::Figure => figure(cfg, json),
        Command::Optimize => optimize(cfg, json),
        Command::Efftemp => efftemp(cfg, json),
        Command::Relax => relax(cfg, json),
    }
}

fn table_outcome(cfg: &RunConfig, table: &Table, json: bool) -> Outcome {
    Outcome::body(if json {
        output::json(cfg, table)
    } else {
        output::csv(cfg, table)
    })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| match i {
                    0 => lo,
                    i if i == n - 1 => hi,
                    i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

/// `lo, lo + step, ...` up to `hi` (inclusive within rounding), each value
/// rounded to 12 decimals so that `0.05 * 3` prints as `0.15`.
pub fn linspace_step(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if hi < lo {
        return Vec::new();
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..n)
        .map(|i| ((lo + step * i as f64) * 1e12).round() / 1e12)
        .collect()
}

fn occupation(cfg: &RunConfig, json: bool) -> Result<Outcome, CliError> {
    let mut xs = cfg.list("x");
    if xs.is_empty() {
        xs = logspace(cfg.f64("x_min"), cfg.f64("x_max"), cfg.usize("x_points"));
    }
    if let Some(x) = xs.iter().find(|&&x| !(x > 0.0)) {
        return Err(CliError::Usage(format!("gap x = {x} must be positive")));
    }
    let us = cfg.list("u");
    cfg.check_umax(&us)?;
    let tol = cfg.f64("tol");

    let points: Vec<(f64, f64)> = us
        .iter()
        .flat_map(|&u| xs.iter().map(move |&x| (x, u)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(x, u)| -> Result<Vec<Cell>, OttoError> {
            let gap = DimensionlessGap::new(x)?;
            let n = moving_occupation(gap, u)?;
            let oracle = band_average_occupation_oracle(gap, u, tol)?;
            Ok(vec![
                x.into(),
                u.into(),
                n.into(),
                planck_occupation(gap).into(),
                oracle.into(),
                (n - oracle).abs().into(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(vec!["x", "u", "N", "planck", "band_oracle", "abs_diff"]);
    table.rows = rows;
    Ok(table_outcome(cfg, &table, json))
}

#[derive(Serialize)]
struct CycleReport {
    spec: CycleInputs,
    ledger: StrokeLedger,
    first_law_residual: f64,
    limit_work: Vec<LimitWork>,
}

#[derive(Serialize)]
struct CycleInputs {
    medium: MediumKind,
    omega_c: f64,
    omega_h: f64,
    beta_c: f64,
    beta_h: f64,
    u: f64,
}

fn cycle(cfg: &RunConfig, json: bool) -> Result<Outcome, CliError> {
    let u = cfg.f64("u");
    cfg.check_umax(&[u])?;
    let inputs = CycleInputs {
        medium: cfg.medium("medium"),
        omega_c: cfg.f64("omega_c"),
        omega_h: cfg.f64("omega_h"),
        beta_c: cfg.f64("beta_c"),
        beta_h: cfg.f64("beta_h"),
        u,
    };
    let spec = CycleSpec::new(
        inputs.omega_c,
        inputs.omega_h,
        inputs.beta_c,
        inputs.beta_h,
        u,
        inputs.medium,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let ledger = cycle_ledger(&spec)?;
    let limits = Regime::ALL
        .into_iter()
        .map(|r| limit_work(&spec, r))
        .collect::<Result<Vec<_>, _>>()?;
    let report = CycleReport {
        first_law_residual: ledger.first_law_residual(),
        spec: inputs,
        ledger,
        limit_work: limits,
    };
    if json {
        return Ok(Outcome::body(output::json(cfg, &report)));
    }

    let l = &report.ledger;
    let mut out = output::metadata(cfg);
    let s = &report.spec;
    let _ = writeln!(
        out,
        "{} cycle: omega_c={} omega_h={} beta_c={} beta_h={} u={}",
        s.medium, s.omega_c, s.omega_h, s.beta_c, s.beta_h, s.u
    );
    for (name, v) in [
        ("E_A", l.e_a),
        ("E_B", l.e_b),
        ("E_C", l.e_c),
        ("E_D", l.e_d),
        ("W_AB", l.w_ab),
        ("Q_H", l.q_h),
        ("W_CD", l.w_cd),
        ("Q_C", l.q_c),
        ("W_out", l.w_out),
        ("eta", l.eta),
    ] {
        let _ = writeln!(out, "{name:<10}{v}");
    }
    let _ = writeln!(out, "{:<10}{}", "is_engine", l.is_engine);
    let _ = writeln!(
        out,
        "conservation |W_AB+Q_H+W_CD+Q_C| = {:e}",
        report.first_law_residual.abs()
    );
    for lw in &report.limit_work {
        let _ = write!(
            out,
            "limit {}: <W> = {}, output work = {}",
            lw.regime, lw.mean_work, lw.output_work
        );
        if !lw.warnings.is_empty() {
            let _ = write!(out, " (outside regime: {})", lw.warnings.join("; "));
        }
        out.push('\n');
    }
    if !l.is_engine {
        out.push_str("not an engine: no positive output work for this spec\n");
    }
    Ok(Outcome::body(out))
}

fn figure(cfg: &RunConfig, json: bool) -> Result<Outcome, CliError> {
    let which = cfg.usize("which");
    let medium = match which {
        1 | 2 => MediumKind::Qubit,
        _ => MediumKind::Oscillator,
    };
    let us = cfg.list("u");
    cfg.check_umax(&us)?;
    if us.is_empty() {
        return Err(CliError::Usage("figure needs at least one velocity".into()));
    }
    let ratios = linspace_step(cfg.f64("ratio_min"), cfg.f64("ratio_max"), cfg.f64("ratio_step"));
    let (omega_c, beta_c) = (cfg.f64("omega_c"), cfg.f64("beta_c"));

    let table = if which % 2 == 1 {
        let etas = linspace_step(cfg.f64("eta_min"), cfg.f64("eta_max"), cfg.f64("eta_step"));
        if let Some(e) = etas.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
            return Err(CliError::Usage(format!("efficiency {e} outside (0, 1)")));
        }
        let points: Vec<(f64, f64, f64)> = us
            .iter()
            .flat_map(|&u| {
                let etas = &etas;
                ratios
                    .iter()
                    .flat_map(move |&r| etas.iter().map(move |&e| (e, r, u)))
            })
            .collect();
        let rows = points
            .par_iter()
            .map(|&(eta, ratio, u)| -> Result<Vec<Cell>, OttoError> {
                let spec = CycleSpec::new(
                    omega_c,
                    omega_c / (1.0 - eta),
                    beta_c,
                    ratio * beta_c,
                    u,
                    medium,
                )?;
                let w = limit_work(&spec, Regime::HighT)?.output_work;
                Ok(vec![eta.into(), ratio.into(), u.into(), w.into(), (w > 0.0).into()])
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut t = Table::new(vec!["eta", "beta_ratio", "u", "W_out", "engine"]);
        t.rows = rows;
        t
    } else {
        let points: Vec<(f64, f64)> = us
            .iter()
            .flat_map(|&u| ratios.iter().map(move |&r| (r, u)))
            .collect();
        let rows = points
            .par_iter()
            .map(|&(ratio, u)| -> Result<Vec<Cell>, OttoError> {
                let p = EngineParams::new(omega_c, beta_c, ratio * beta_c, u)?;
                let eta = efficiency_at_max_work_raw(medium, Regime::HighT, &p);
                let b = reference_bounds(beta_c, ratio * beta_c)?;
                Ok(vec![
                    ratio.into(),
                    u.into(),
                    eta.into(),
                    b.carnot.into(),
                    b.curzon_ahlborn.into(),
                    (eta > 0.0 && eta < 1.0).into(),
                ])
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut t = Table::new(vec!["beta_ratio", "u", "eta_mw", "eta_carnot", "eta_ca", "engine"]);
        t.rows = rows;
        t
    };
    Ok(table_outcome(cfg, &table, json))
}

#[derive(Serialize)]
struct OptimizeReport {
    medium: MediumKind,
    regime: Regime,
    params: EngineParams,
    numeric: Option<otto_core::OptimizationResult>,
    non_engine: Option<String>,
    closed_form_omega_h: f64,
    relative_gap: Option<f64>,
    /// Closed-form efficiency at maximum work per regime, unchecked.
    eta_mw: Vec<(Regime, f64)>,
    eta_carnot: f64,
    eta_ca: f64,
}

fn optimize(cfg: &RunConfig, json: bool) -> Result<Outcome, CliError> {
    let u = cfg.f64("u");
    cfg.check_umax(&[u])?;
    let medium = cfg.medium("medium");
    let regime = cfg.regime("regime");
    let params = EngineParams::new(cfg.f64("omega_c"), cfg.f64("beta_c"), cfg.f64("beta_h"), u)?;
    let bracket = match (cfg.f64("omega_lo"), cfg.f64("omega_hi")) {
        (lo, hi) if lo == 0.0 && hi == 0.0 => None,
        (lo, hi) if lo > params.omega_c && hi > lo => Some((lo, hi)),
        (lo, hi) => {
            return Err(CliError::Usage(format!(
                "bracket [{lo}, {hi}] must satisfy omega_c < lo < hi"
            )))
        }
    };

    let (numeric, non_engine) = match maximize_work_numeric(medium, &params, bracket) {
        Ok(r) => (Some(r), None),
        Err(OttoError::NonEngine(msg)) => (None, Some(msg)),
        Err(e) => return Err(e.into()),
    };
    let closed = optimal_hot_frequency_limit(medium, regime, &params)?;
    let bounds = reference_bounds(params.beta_c, params.beta_h)?;
    let report = OptimizeReport {
        medium,
        regime,
        params,
        relative_gap: numeric.map(|r| (r.omega_h_star - closed).abs() / closed),
        numeric,
        non_engine,
        closed_form_omega_h: closed,
        eta_mw: Regime::ALL
            .into_iter()
            .map(|r| (r, efficiency_at_max_work_raw(medium, r, &params)))
            .collect(),
        eta_carnot: bounds.carnot,
        eta_ca: bounds.curzon_ahlborn,
    };
    if json {
        return Ok(Outcome::body(output::json(cfg, &report)));
    }

    let mut out = output::metadata(cfg);
    let p = &report.params;
    let _ = writeln!(
        out,
        "{medium} optimum over omega_h: omega_c={} beta_c={} beta_h={} u={}",
        p.omega_c, p.beta_c, p.beta_h, p.u
    );
    match (&report.numeric, &report.non_engine) {
        (Some(r), _) => {
            let _ = writeln!(out, "numeric omega_h*       {}", r.omega_h_star);
            let _ = writeln!(out, "numeric W_out*         {}", r.w_star);
            let _ = writeln!(out, "numeric eta*           {}", r.eta_star);
            let _ = writeln!(
                out,
                "search bracket         [{}, {}] ({} iterations{})",
                r.bracket.0,
                r.bracket.1,
                r.iterations,
                if r.boundary { ", maximum on boundary" } else { "" }
            );
        }
        (None, Some(msg)) => {
            let _ = writeln!(out, "not an engine: {msg}");
        }
        (None, None) => unreachable!("either a result or a reason"),
    }
    let _ = writeln!(out, "closed-form omega_h* ({regime}) {closed}");
    if let Some(g) = report.relative_gap {
        let _ = writeln!(out, "relative gap           {g:e}");
    }
    for (r, eta) in &report.eta_mw {
        let flag = if *eta > 0.0 && *eta < 1.0 { "" } else { " (not an engine)" };
        let _ = writeln!(out, "eta_mw {:<16}{eta}{flag}", r.as_str());
    }
    let _ = writeln!(out, "eta_carnot             {}", report.eta_carnot);
    let _ = writeln!(out, "eta_ca                 {}", report.eta_ca);
    Ok(Outcome::body(out))
}

/// `v` rounded to `digits` significant digits, in plain notation when sensible.
pub fn sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-4..=6).contains(&mag) {
        return format!("{v:.*e}", digits.saturating_sub(1));
    }
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Serialize)]
struct EfftempReport {
    threshold: f64,
    rows: Vec<EffectiveTemperatureReport>,
    verdict: String,
}

fn efftemp(cfg: &RunConfig, json: bool) -> Result<Outcome, CliError> {
    let u = cfg.f64("u");
    cfg.check_umax(&[u])?;
    let params = EngineParams::new(cfg.f64("omega_c"), cfg.f64("beta_c"), cfg.f64("beta_h"), u)?;
    let grid = MismatchGrid {
        x_min: cfg.f64("x_min"),
        x_max: cfg.f64("x_max"),
        points: cfg.usize("x_points"),
    };
    let rows = MediumKind::ALL
        .into_iter()
        .flat_map(|m| Regime::ALL.into_iter().map(move |r| (m, r)))
        .map(|(m, r)| effective_temperature_fit_on(m, r, &params, &grid))
        .collect::<Result<Vec<_>, _>>()?;

    let worst = rows
        .iter()
        .filter_map(|r| r.spectral_mismatch)
        .fold(0.0f64, f64::max);
    let verdict = if rows.iter().all(|r| r.consistent) {
        format!(
            "verdict: consistent; the rest bath at beta_eff reproduces the spectrum (max mismatch {worst:.3e} < {CONSISTENT_MISMATCH:e})"
        )
    } else {
        format!(
            "verdict: no effective temperature; max spectral mismatch {worst:.3e} exceeds threshold {CONSISTENT_MISMATCH:e}"
        )
    };
    let report = EfftempReport {
        threshold: CONSISTENT_MISMATCH,
        rows,
        verdict,
    };
    if json {
        return Ok(Outcome::body(output::json(cfg, &report)));
    }

    let mut out = output::metadata(cfg);
    let _ = writeln!(
        out,
        "effective temperature: beta_h={} beta_c={} omega_c={} u={}",
        params.beta_h, params.beta_c, params.omega_c, params.u
    );
    let _ = writeln!(
        out,
        "{:<12}{:<9}{:>14}{:>20}  consistent",
        "medium", "regime", "beta_eff", "spectral_mismatch"
    );
    for r in &report.rows {
        let beta = r.beta_eff.map_or_else(|| "-".to_string(), |b| sig(b, 6));
        let mm = r
            .spectral_mismatch
            .map_or_else(|| "-".to_string(), |m| format!("{m:.3e}"));
        let _ = write!(
            out,
            "{:<12}{:<9}{beta:>14}{mm:>20}  {}",
            r.medium.as_str(),
            r.regime.as_str(),
            r.consistent
        );
        if let Some(f) = &r.failure {
            let _ = write!(out, "  fit failed: {f}");
        }
        out.push('\n');
    }
    out.push_str(&report.verdict);
    out.push('\n');
    Ok(Outcome::body(out))
}

fn relax(cfg: &RunConfig, json: bool) -> Result<Outcome, CliError> {
    let medium = cfg.medium("medium");
    let n = cfg.f64("n");
    let spec = LindbladSpec::new(cfg.f64("gamma0"), n, cfg.f64("omega"))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let eps = cfg.f64("trunc_eps");
    let n_max = match cfg.usize("n_max") {
        0 => fock_truncation_bound(n, eps),
        m => m,
    };
    let initial = match (cfg.str("initial"), medium) {
        ("steady", MediumKind::Qubit) => MediumState::Qubit(asymptotic_qubit_state(n)?),
        ("steady", MediumKind::Oscillator) => {
            MediumState::Oscillator(asymptotic_oscillator_state(n, n_max, eps)?)
        }
        _ => ground_state(medium, n_max, eps)?,
    };
    let mut opts = RelaxOptions::with_tol(cfg.f64("tol"));
    opts.sample_interval = match cfg.f64("dt") {
        dt if dt == 0.0 => None,
        dt if dt > 0.0 => Some(dt),
        dt => return Err(CliError::Usage(format!("dt = {dt} must be positive"))),
    };

    let result = relax_to_steady(&initial, &spec, &opts)?;
    let distance = distance_to_steady(&result.state, &spec)?;
    let note = format!(
        "t_relax={} converged={} samples={} final_distance={distance:e}",
        result.t_relax,
        result.trajectory.converged,
        result.trajectory.len()
    );
    let body = if json {
        #[derive(Serialize)]
        struct Body<'a> {
            t_relax: f64,
            final_distance: f64,
            trajectory: &'a otto_core::TrajectoryRecord,
        }
        output::json(
            cfg,
            &Body {
                t_relax: result.t_relax,
                final_distance: distance,
                trajectory: &result.trajectory,
            },
        )
    } else {
        let mut buf = Vec::new();
        result
            .trajectory
            .write_csv(&mut buf)
            .expect("writing to memory");
        let mut out = output::metadata(cfg);
        out.push_str(&String::from_utf8(buf).expect("utf-8 csv"));
        out
    };
    Ok(Outcome {
        body,
        note: Some(note),
    })
}
