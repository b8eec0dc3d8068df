//! Working-medium states, steady states and mean energies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, non_negative, positive, OttoError, Result};

// Slack for rounding in state invariants.
const STATE_SLACK: f64 = 1e-12;

/// Floor returned by [`fock_truncation_bound`].
pub const MIN_FOCK_CUTOFF: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediumKind {
    Qubit,
    Oscillator,
}

impl MediumKind {
    pub const ALL: [MediumKind; 2] = [MediumKind::Qubit, MediumKind::Oscillator];

    pub fn as_str(self) -> &'static str {
        match self {
            MediumKind::Qubit => "qubit",
            MediumKind::Oscillator => "oscillator",
        }
    }

    /// Steady-state mean energy of this medium at frequency `omega0`.
    pub fn mean_energy(self, omega0: f64, occupation: f64) -> Result<f64> {
        match self {
            MediumKind::Qubit => qubit_mean_energy(omega0, occupation),
            MediumKind::Oscillator => oscillator_mean_energy(omega0, occupation),
        }
    }
}

impl std::fmt::Display for MediumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MediumKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qubit" | "tls" | "two-level" => Ok(MediumKind::Qubit),
            "oscillator" | "ho" | "harmonic" => Ok(MediumKind::Oscillator),
            other => Err(format!("unknown medium '{other}' (expected qubit or oscillator)")),
        }
    }
}

/// Two-level density matrix in the energy basis: excited population and the
/// off-diagonal element `ρ_eg`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    p_excited: f64,
    coherence: Complex64,
}

impl QubitState {
    pub fn new(p_excited: f64, coherence: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_excited) {
            return Err(domain("p_excited", p_excited, "0 <= p <= 1"));
        }
        let bound = p_excited * (1.0 - p_excited);
        if !coherence.norm_sqr().is_finite() || coherence.norm_sqr() > bound + STATE_SLACK {
            return Err(domain(
                "|coherence|^2",
                coherence.norm_sqr(),
                "<= p_excited (1 - p_excited)",
            ));
        }
        Ok(Self {
            p_excited,
            coherence,
        })
    }

    pub fn diagonal(p_excited: f64) -> Result<Self> {
        Self::new(p_excited, Complex64::new(0.0, 0.0))
    }

    pub fn ground() -> Self {
        Self {
            p_excited: 0.0,
            coherence: Complex64::new(0.0, 0.0),
        }
    }

    pub fn p_excited(&self) -> f64 {
        self.p_excited
    }

    pub fn p_ground(&self) -> f64 {
        1.0 - self.p_excited
    }

    pub fn coherence(&self) -> Complex64 {
        self.coherence
    }

    /// `⟨H⟩` for `H = ω σ_z / 2`.
    pub fn mean_energy(&self, omega0: f64) -> f64 {
        0.5 * omega0 * (2.0 * self.p_excited - 1.0)
    }

    /// Trace distance `½‖ρ - σ‖₁`; equals the total-variation distance of the
    /// populations when both states are diagonal.
    pub fn trace_distance(&self, other: &QubitState) -> f64 {
        let dp = self.p_excited - other.p_excited;
        let dc = self.coherence - other.coherence;
        (dp * dp + dc.norm_sqr()).sqrt()
    }
}

/// Diagonal Fock-state populations `p_0 ..= p_{n_max}` of a truncated oscillator.
///
/// The populations are not renormalized: `1 - Σ p_n` is the truncation deficit
/// and must stay within the declared budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorState {
    populations: Vec<f64>,
    trunc_budget: f64,
}

impl OscillatorState {
    pub fn new(populations: Vec<f64>, trunc_budget: f64) -> Result<Self> {
        if !(trunc_budget > 0.0 && trunc_budget < 1.0) {
            return Err(domain("trunc_budget", trunc_budget, "0 < budget < 1"));
        }
        if populations.len() < 2 {
            return Err(domain("n_max", populations.len() as f64 - 1.0, "n_max >= 1"));
        }
        if let Some(&bad) = populations
            .iter()
            .find(|p| !(p.is_finite() && **p >= 0.0 && **p <= 1.0 + STATE_SLACK))
        {
            return Err(domain("population", bad, "0 <= p_n <= 1"));
        }
        let trace: f64 = populations.iter().sum();
        if trace > 1.0 + STATE_SLACK || trace < 1.0 - trunc_budget - STATE_SLACK {
            return Err(domain("trace", trace, "1 - budget <= sum p_n <= 1"));
        }
        Ok(Self {
            populations,
            trunc_budget,
        })
    }

    pub fn vacuum(n_max: usize, trunc_budget: f64) -> Result<Self> {
        let mut p = vec![0.0; n_max.max(1) + 1];
        p[0] = 1.0;
        Self::new(p, trunc_budget)
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn n_max(&self) -> usize {
        self.populations.len() - 1
    }

    pub fn trunc_budget(&self) -> f64 {
        self.trunc_budget
    }

    pub fn trace(&self) -> f64 {
        self.populations.iter().sum()
    }

    pub fn truncation_deficit(&self) -> f64 {
        1.0 - self.trace()
    }

    pub fn mean_occupation(&self) -> f64 {
        self.populations
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// `Σ ω (n + ½) p_n`.
    pub fn mean_energy(&self, omega0: f64) -> f64 {
        self.populations
            .iter()
            .enumerate()
            .map(|(n, p)| omega0 * (n as f64 + 0.5) * p)
            .sum()
    }

    /// Total-variation distance `½ Σ |p_n - q_n|` over the common support.
    pub fn total_variation(&self, other: &OscillatorState) -> f64 {
        let (long, short) = if self.populations.len() >= other.populations.len() {
            (&self.populations, &other.populations)
        } else {
            (&other.populations, &self.populations)
        };
        let common: f64 = short.iter().zip(long).map(|(a, b)| (a - b).abs()).sum();
        let rest: f64 = long[short.len()..].iter().map(|p| p.abs()).sum();
        0.5 * (common + rest)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MediumState {
    Qubit(QubitState),
    Oscillator(OscillatorState),
}

impl MediumState {
    pub fn kind(&self) -> MediumKind {
        match self {
            MediumState::Qubit(_) => MediumKind::Qubit,
            MediumState::Oscillator(_) => MediumKind::Oscillator,
        }
    }

    pub fn mean_energy(&self, omega0: f64) -> f64 {
        match self {
            MediumState::Qubit(s) => s.mean_energy(omega0),
            MediumState::Oscillator(s) => s.mean_energy(omega0),
        }
    }
}

/// Unique steady state `diag(N, N+1)/(2N+1)` of the qubit master equation.
pub fn asymptotic_qubit_state(occupation: f64) -> Result<QubitState> {
    let n = non_negative("N", occupation)?;
    QubitState::diagonal(n / (2.0 * n + 1.0))
}

/// Geometric steady state `p_n = (1/(N+1)) (N/(N+1))^n`, truncated at `n_max`.
pub fn asymptotic_oscillator_state(
    occupation: f64,
    n_max: usize,
    trunc_budget: f64,
) -> Result<OscillatorState> {
    let n = non_negative("N", occupation)?;
    if n_max < 1 {
        return Err(domain("n_max", n_max as f64, "n_max >= 1"));
    }
    if !(trunc_budget > 0.0 && trunc_budget < 1.0) {
        return Err(domain("trunc_budget", trunc_budget, "0 < budget < 1"));
    }
    let ratio = n / (n + 1.0);
    let tail = ratio.powf((n_max + 1) as f64);
    if tail >= trunc_budget {
        return Err(OttoError::Truncation {
            n_max,
            required: fock_truncation_bound(n, trunc_budget),
            tail,
            budget: trunc_budget,
        });
    }
    let populations = (0..=n_max)
        .map(|k| ratio.powi(k as i32) / (n + 1.0))
        .collect();
    OscillatorState::new(populations, trunc_budget)
}

/// `-ω₀ / (2 (2N + 1))`, the steady-state energy of `H = ω₀ σ_z / 2`.
pub fn qubit_mean_energy(omega0: f64, occupation: f64) -> Result<f64> {
    let omega0 = positive("omega0", omega0)?;
    let n = non_negative("N", occupation)?;
    Ok(-omega0 / (2.0 * (2.0 * n + 1.0)))
}

/// `ω₀ (N + ½)`.
pub fn oscillator_mean_energy(omega0: f64, occupation: f64) -> Result<f64> {
    let omega0 = positive("omega0", omega0)?;
    let n = non_negative("N", occupation)?;
    Ok(omega0 * (n + 0.5))
}

/// Smallest `n_max >= 8` whose geometric tail `(N/(N+1))^{n_max+1}` is below `eps`.
///
/// # Panics
///
/// If `occupation` is negative or `eps` is outside `(0, 1)`.
pub fn fock_truncation_bound(occupation: f64, eps: f64) -> usize {
    assert!(occupation >= 0.0 && occupation.is_finite(), "N must be >= 0");
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    if occupation == 0.0 {
        return MIN_FOCK_CUTOFF;
    }
    let ratio = occupation / (occupation + 1.0);
    let tail = |n_max: usize| ratio.powf((n_max + 1) as f64);
    // ln-based estimate, then walk to the exact threshold.
    let estimate = (eps.ln() / ratio.ln()).ceil() as usize;
    let mut n_max = estimate.saturating_sub(2);
    while tail(n_max) >= eps {
        n_max += 1;
    }
    while n_max > 0 && tail(n_max - 1) < eps {
        n_max -= 1;
    }
    n_max.max(MIN_FOCK_CUTOFF)
}
