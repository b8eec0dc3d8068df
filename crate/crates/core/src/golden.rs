//! Golden-section maximization of a unimodal scalar function.
//!
//! A coarse equispaced pre-scan locates the peak and rejects objectives with
//! more than one interior maximum before the interval is narrowed.

use crate::error::{OttoError, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 - 1)/2

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSection {
    /// Stop once the bracket is narrower than `rel_tol * |x|`.
    pub rel_tol: f64,
    pub max_iter: usize,
    pub prescan_points: usize,
}

impl Default for GoldenSection {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_iter: 500,
            prescan_points: 17,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
    /// The interval that was searched.
    pub bracket: (f64, f64),
    /// The maximum sits at an end of the bracket rather than inside it.
    pub on_boundary: bool,
}

impl GoldenSection {
    pub fn maximize<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<Maximum> {
        assert!(self.prescan_points >= 3, "pre-scan needs at least three points");
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(OttoError::Domain {
                name: "bracket",
                value: hi - lo,
                expected: "finite lo < hi",
            });
        }

        let m = self.prescan_points;
        let xs: Vec<f64> = (0..m)
            .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
            .collect();
        let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        if let Some(i) = fs.iter().position(|v| !v.is_finite()) {
            return Err(OttoError::NotUnimodal(format!(
                "objective is not finite at x = {}",
                xs[i]
            )));
        }
        let (peak, _) = fs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty pre-scan");

        let scale = fs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let slack = 1e-12 * scale;
        let rising = fs[..=peak].windows(2).all(|w| w[1] >= w[0] - slack);
        let falling = fs[peak..].windows(2).all(|w| w[1] <= w[0] + slack);
        if !(rising && falling) {
            return Err(OttoError::NotUnimodal(format!(
                "pre-scan of {m} points on [{lo}, {hi}] has several peaks"
            )));
        }

        let mut a = xs[peak.saturating_sub(1)];
        let mut b = xs[(peak + 1).min(m - 1)];
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        let mut iterations = 0;
        while iterations < self.max_iter && (b - a) > self.rel_tol * 0.5 * (c.abs() + d.abs()) {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = f(d);
            }
            iterations += 1;
        }

        let mut x = 0.5 * (a + b);
        let mut value = f(x);
        for (xe, fe) in [(c, fc), (d, fd), (xs[peak], fs[peak])] {
            if fe > value {
                x = xe;
                value = fe;
            }
        }
        let width = self.rel_tol.max(1e-12) * (hi - lo).abs().max(x.abs());
        let on_boundary = (x - lo).abs() <= width || (hi - x).abs() <= width;
        Ok(Maximum {
            x,
            value,
            iterations,
            bracket: (lo, hi),
            on_boundary,
        })
    }
}
