//! Occupation statistics of static and relativistically moving thermal baths.
//!
//! Natural units (ħ = k_B = 1): every occupation depends on the inverse
//! temperature and the mode frequency only through `x = β ω`.
//!
//! A detector moving with velocity `u` (rapidity `θ = artanh u`) through a
//! thermal field sees the Planck occupation averaged over the Doppler band
//! `[x e^{-θ}, x e^{θ}]`:
//!
//! ```text
//! N(x, u) = ln[(1 - e^{-x e^θ}) / (1 - e^{-x e^{-θ}})] / (2 x sinh θ)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{domain, positive, Result};
use crate::quadrature::{integrate, QuadratureTolerance};

/// Largest supported bath velocity (fraction of c).
pub const U_MAX: f64 = 0.999;

/// Below this velocity the moving occupation uses its O(θ²) expansion.
pub const U_SWITCH: f64 = 1e-4;

/// Below this gap the Planck occupation uses its Laurent series.
pub const X_SERIES: f64 = 1e-8;

// Bands narrower than this are treated as a single frequency by the oracle.
const DEGENERATE_BAND_U: f64 = 1e-8;

/// Validates a bath velocity against `[0, U_MAX]`.
pub fn check_velocity(u: f64) -> Result<f64> {
    if (0.0..=U_MAX).contains(&u) {
        Ok(u)
    } else {
        Err(domain("u", u, "0 <= u <= 0.999"))
    }
}

/// Inverse temperature and velocity of one reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    beta: f64,
    u: f64,
}

impl BathSpec {
    pub fn new(beta: f64, u: f64) -> Result<Self> {
        Ok(Self {
            beta: positive("beta", beta)?,
            u: check_velocity(u)?,
        })
    }

    pub fn at_rest(beta: f64) -> Result<Self> {
        Self::new(beta, 0.0)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn velocity(&self) -> f64 {
        self.u
    }

    pub fn rapidity(&self) -> f64 {
        self.u.atanh()
    }

    pub fn gap(&self, omega: f64) -> Result<DimensionlessGap> {
        DimensionlessGap::from_beta_omega(self.beta, omega)
    }

    /// Mean quanta number this bath induces in a mode of frequency `omega`.
    pub fn occupation(&self, omega: f64) -> Result<f64> {
        moving_occupation(self.gap(omega)?, self.u)
    }
}

/// The product `β ħ ω`, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DimensionlessGap(f64);

impl DimensionlessGap {
    pub fn new(x: f64) -> Result<Self> {
        positive("x", x).map(Self)
    }

    pub fn from_beta_omega(beta: f64, omega: f64) -> Result<Self> {
        positive("beta", beta)?;
        positive("omega", omega)?;
        Self::new(beta * omega)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Bose–Einstein occupation `1/(e^x - 1)` of a static thermal mode.
pub fn planck_occupation(x: DimensionlessGap) -> f64 {
    planck(x.0)
}

pub(crate) fn planck(x: f64) -> f64 {
    if x < X_SERIES {
        1.0 / x - 0.5 + x / 12.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// `D(u) = √(1-u²) ln((1+u)/(1-u)) / (2u) = θ / sinh θ`.
///
/// Ratio of moving to static occupation in the classical limit; `D(0) = 1`
/// and `D` decreases monotonically toward zero as `u → 1`.
pub fn doppler_log_factor(u: f64) -> Result<f64> {
    check_velocity(u)?;
    Ok(doppler(u))
}

pub(crate) fn doppler(u: f64) -> f64 {
    if u < U_SWITCH {
        let u2 = u * u;
        1.0 - u2 / 6.0 - 11.0 * u2 * u2 / 120.0
    } else {
        u.atanh() * ((1.0 - u) * (1.0 + u)).sqrt() / u
    }
}

/// Occupation of a mode with gap `x` seen through a bath moving at `u`.
pub fn moving_occupation(x: DimensionlessGap, u: f64) -> Result<f64> {
    check_velocity(u)?;
    Ok(moving(x.0, u))
}

pub(crate) fn moving(x: f64, u: f64) -> f64 {
    let theta = u.atanh();
    if u < U_SWITCH {
        // Band average expanded about x: n + (θ²/6)(3x n' + x² n'').
        let n = planck(x);
        let slope = n * (n + 1.0);
        n + theta * theta / 6.0 * slope * (x * x * (2.0 * n + 1.0) - 3.0 * x)
    } else {
        let lower = x * (-theta).exp();
        let width = 2.0 * x * theta.sinh();
        // ln(1 + n(a) (1 - e^{-(b-a)})) / (b - a), free of cancellation.
        (planck(lower) * -(-width).exp_m1()).ln_1p() / width
    }
}

/// Independent route to [`moving_occupation`]: the mean of the Planck
/// occupation over the Doppler band, by adaptive quadrature.
///
/// `tol` is an absolute tolerance on the returned occupation.
pub fn band_average_occupation_oracle(x: DimensionlessGap, u: f64, tol: f64) -> Result<f64> {
    check_velocity(u)?;
    positive("tol", tol)?;
    let x = x.0;
    if u <= DEGENERATE_BAND_U {
        return Ok(planck(x));
    }
    let theta = u.atanh();
    let (lower, upper) = (x * (-theta).exp(), x * theta.exp());
    let width = upper - lower;
    // Logarithmic variable s = e^t keeps the 1/s growth near the lower edge smooth.
    let integral = integrate(
        |t: f64| {
            let s = t.exp();
            s * planck(s)
        },
        lower.ln(),
        upper.ln(),
        QuadratureTolerance {
            abs_tol: tol * width,
            rel_tol: 0.0,
            max_intervals: 4096,
        },
    )?;
    Ok(integral.value / width)
}

/// Temperature regime of a closed-form approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `β ω → 0` for both baths.
    HighT,
    /// Cold bath deep quantum (`β_c ω_c → ∞`), hot bath still classical.
    LowT,
}

impl Regime {
    pub const ALL: [Regime; 2] = [Regime::HighT, Regime::LowT];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::HighT => "high_t",
            Regime::LowT => "low_t",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "high_t" | "high" | "ht" => Ok(Regime::HighT),
            "low_t" | "low" | "lt" => Ok(Regime::LowT),
            other => Err(format!("unknown regime '{other}' (expected high_t or low_t)")),
        }
    }
}

/// Leading-order asymptote of [`moving_occupation`].
///
/// * `HighT`: `D(u)/x`, accurate to `O(x)` relative for `x ≪ 1`.
/// * `LowT`: `(e^{-a} - e^{-b}) / (b - a)` with band edges `a = x e^{-θ}`,
///   `b = x e^{θ}`; the leading term of the logarithm, accurate to
///   `O(e^{-a})` relative for `a ≫ 1`. At `u = 0` this is the Boltzmann
///   tail `e^{-x}`.
pub fn occupation_asymptote(x: DimensionlessGap, u: f64, regime: Regime) -> Result<f64> {
    check_velocity(u)?;
    let x = x.0;
    Ok(match regime {
        Regime::HighT => doppler(u) / x,
        Regime::LowT => {
            let theta = u.atanh();
            if theta == 0.0 {
                (-x).exp()
            } else {
                let lower = x * (-theta).exp();
                let width = 2.0 * x * theta.sinh();
                (-lower).exp() * -(-width).exp_m1() / width
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gap(x: f64) -> DimensionlessGap {
        DimensionlessGap::new(x).unwrap()
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let (a, b) = (lo.ln(), hi.ln());
        (0..n)
            .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn planck_reference_values() {
        // 1/(e - 1) to 40 digits: 0.58197670686932642438...
        assert!((planck_occupation(gap(1.0)) - 0.581_976_706_869_326_4).abs() < 1e-15);
        assert!(planck_occupation(gap(50.0)) < 2e-22);
        assert_relative_eq!(planck_occupation(gap(1e-10)), 1e10 - 0.5, max_relative = 1e-9);
    }

    #[test]
    fn planck_series_joins_direct_branch() {
        let below = planck(X_SERIES * (1.0 - 1e-12));
        let above = planck(X_SERIES * (1.0 + 1e-12));
        assert_relative_eq!(below, above, max_relative = 1e-7);
    }

    #[test]
    fn nonpositive_gap_is_rejected() {
        assert!(DimensionlessGap::new(0.0).is_err());
        assert!(DimensionlessGap::new(-1.0).is_err());
        assert!(DimensionlessGap::new(f64::NAN).is_err());
        assert!(DimensionlessGap::from_beta_omega(1.0, -2.0).is_err());
    }

    #[test]
    fn doppler_factor_values() {
        assert_eq!(doppler_log_factor(0.0).unwrap(), 1.0);
        // √0.75 · ln 3
        let expected = 0.75_f64.sqrt() * 3.0_f64.ln();
        assert!((doppler_log_factor(0.5).unwrap() - expected).abs() < 1e-15);
        assert!((doppler_log_factor(0.5).unwrap() - 0.951_426_150_896_346).abs() < 1e-12);
        let top = doppler_log_factor(U_MAX).unwrap();
        assert!(top > 0.0 && top < 0.2);
    }

    #[test]
    fn doppler_factor_is_continuous_at_switch() {
        let below = doppler(U_SWITCH * (1.0 - 1e-9));
        let above = doppler(U_SWITCH * (1.0 + 1e-9));
        assert!((below - above).abs() < 1e-13);
    }

    #[test]
    fn doppler_factor_decreases() {
        let mut grid: Vec<f64> = (0..20).map(|i| 0.05 * i as f64).collect();
        grid.push(U_MAX);
        let values: Vec<f64> = grid.iter().map(|&u| doppler_log_factor(u).unwrap()).collect();
        assert_eq!(values[0], 1.0);
        for w in values.windows(2) {
            assert!(w[1] < w[0] && w[1] > 0.0);
        }
    }

    #[test]
    fn velocity_domain() {
        assert!(doppler_log_factor(-0.1).is_err());
        assert!(doppler_log_factor(0.9995).is_err());
        assert!(moving_occupation(gap(1.0), 1.0).is_err());
        assert!(BathSpec::new(1.0, f64::NAN).is_err());
        assert!(BathSpec::new(0.0, 0.5).is_err());
    }

    #[test]
    fn moving_occupation_values() {
        assert!((moving_occupation(gap(1.0), 1e-8).unwrap() - 0.581_976_7).abs() < 1e-6);
        // 40-digit reference: 0.54510013913315333305...
        assert!((moving_occupation(gap(1.0), 0.5).unwrap() - 0.545_100_139_133_153_3).abs() < 1e-13);
        let d = doppler_log_factor(0.5).unwrap();
        assert_relative_eq!(moving_occupation(gap(1e-3), 0.5).unwrap(), d / 1e-3, max_relative = 1e-3);
    }

    #[test]
    fn moving_occupation_is_continuous_at_switch() {
        for x in [1e-3, 0.1, 1.0, 10.0, 30.0] {
            let below = moving(x, U_SWITCH * (1.0 - 1e-9));
            let above = moving(x, U_SWITCH * (1.0 + 1e-9));
            assert_relative_eq!(below, above, max_relative = 1e-11);
        }
    }

    #[test]
    fn oracle_reference_values() {
        let v = band_average_occupation_oracle(gap(1.0), 0.5, 1e-10).unwrap();
        assert!((v - 0.545_100_139_133_153_3).abs() < 1e-9);
        assert_eq!(
            band_average_occupation_oracle(gap(1.0), 1e-8, 1e-10).unwrap(),
            planck_occupation(gap(1.0))
        );
        assert_eq!(
            band_average_occupation_oracle(gap(2.0), 0.0, 1e-10).unwrap(),
            planck_occupation(gap(2.0))
        );
    }

    #[test]
    fn planck_recovery_on_log_grid() {
        for x in log_grid(1e-3, 30.0, 50) {
            let n = planck(x);
            let big_n = moving_occupation(gap(x), 1e-8).unwrap();
            assert!((big_n - n).abs() < 1e-6 * n, "x = {x}");
        }
    }

    #[test]
    fn asymptotes() {
        let d = doppler(0.5);
        let exact = moving(1e-4, 0.5);
        let high = occupation_asymptote(gap(1e-4), 0.5, Regime::HighT).unwrap();
        assert_relative_eq!(high, exact, max_relative = 1e-3);
        assert_relative_eq!(high, d / 1e-4, max_relative = 1e-15);
        assert_eq!(occupation_asymptote(gap(0.01), 0.0, Regime::HighT).unwrap(), 100.0);

        let exact = moving(30.0, 0.5);
        let low = occupation_asymptote(gap(30.0), 0.5, Regime::LowT).unwrap();
        assert_relative_eq!(low, exact, max_relative = 1e-2);
        // a = 30/√3 ≫ 1 so the e^{-b} term is invisible.
        let leading = (-30.0 / 3.0_f64.sqrt()).exp() * 0.75_f64.sqrt() / (2.0 * 0.5 * 30.0);
        assert_relative_eq!(low, leading, max_relative = 1e-12);
        assert_relative_eq!(
            occupation_asymptote(gap(30.0), 0.0, Regime::LowT).unwrap(),
            planck(30.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn bath_spec_rapidity() {
        let bath = BathSpec::new(0.5, 0.5).unwrap();
        assert_eq!(bath.rapidity(), 0.5_f64.atanh());
        assert_eq!(bath.occupation(2.0).unwrap(), moving(1.0, 0.5));
        assert_eq!(BathSpec::at_rest(2.0).unwrap().rapidity(), 0.0);
    }

    #[test]
    fn regime_parses() {
        assert_eq!("high_t".parse::<Regime>().unwrap(), Regime::HighT);
        assert_eq!("LOW-T".parse::<Regime>().unwrap(), Regime::LowT);
        assert!("medium".parse::<Regime>().is_err());
    }

    proptest! {
        #[test]
        fn oracle_matches_closed_form(lx in -3.0f64..1.477, u in 0.01f64..0.999) {
            let x = 10f64.powf(lx);
            let closed = moving_occupation(gap(x), u).unwrap();
            let oracle = band_average_occupation_oracle(gap(x), u, 1e-12).unwrap();
            prop_assert!((closed - oracle).abs() < 1e-10, "x={x} u={u}: {closed} vs {oracle}");
        }

        #[test]
        fn scale_invariance(lx in -3.0f64..1.4, u in 0.0f64..0.999, s in 0.1f64..10.0) {
            let (beta, omega) = (0.7, 10f64.powf(lx) / 0.7);
            let a = BathSpec::new(beta, u).unwrap().occupation(omega).unwrap();
            let b = BathSpec::new(beta * s, u).unwrap().occupation(omega / s).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs());
        }

        #[test]
        fn decreasing_in_gap(lx in -3.0f64..1.4, u in 0.0f64..0.999) {
            let x = 10f64.powf(lx);
            let n1 = moving(x, u);
            let n2 = moving(x * 1.01, u);
            prop_assert!(n2 < n1);
        }
    }
}
