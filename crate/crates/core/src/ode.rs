//! Dormand–Prince 5(4) explicit integrator for autonomous linear-size systems.

use crate::error::{OttoError, Result};

/// Adaptive step-size control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; the controller adapts from here.
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h_init: 1e-4,
            h_max: 1.0,
            max_steps: 20_000_000,
        }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Populations this far below zero are rounding noise and get clipped.
pub const NEGATIVITY_FLOOR: f64 = 1e-14;

/// Stateful integrator; keeps its step size across calls to [`advance`](Self::advance).
pub(crate) struct DormandPrince<F> {
    rhs: F,
    control: StepControl,
    h: f64,
    steps: usize,
    k: [Vec<f64>; 7],
    trial: Vec<f64>,
    populations: bool,
}

impl<F: Fn(&[f64], &mut [f64])> DormandPrince<F> {
    pub(crate) fn new(rhs: F, dim: usize, control: StepControl) -> Self {
        Self {
            rhs,
            control,
            h: control.h_init.min(control.h_max),
            steps: 0,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            trial: vec![0.0; dim],
            populations: false,
        }
    }

    /// Treats the state as probabilities: steps that push a component below
    /// `-NEGATIVITY_FLOOR` are retried smaller, smaller negatives are clipped.
    pub(crate) fn populations(mut self) -> Self {
        self.populations = true;
        self
    }

    /// Integrates from `*t` to `t_end`, calling `on_step` after every accepted
    /// step. Returns early (with `Ok(true)`) when `on_step` returns `true`.
    pub(crate) fn advance(
        &mut self,
        y: &mut [f64],
        t: &mut f64,
        t_end: f64,
        mut on_step: impl FnMut(f64, &[f64]) -> bool,
    ) -> Result<bool> {
        let dim = y.len();
        let StepControl {
            rtol,
            atol,
            h_max,
            max_steps,
            ..
        } = self.control;

        while *t < t_end {
            if self.steps >= max_steps {
                return Err(OttoError::Integration {
                    time: *t,
                    reason: format!("step budget of {max_steps} exhausted"),
                });
            }
            let remaining = t_end - *t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };

            (self.rhs)(y, &mut self.k[0]);
            for stage in 1..7 {
                for i in 0..dim {
                    let mut acc = y[i];
                    for (j, a) in A[stage][..stage].iter().enumerate() {
                        acc += h * a * self.k[j][i];
                    }
                    self.trial[i] = acc;
                }
                (self.rhs)(&self.trial, &mut self.k[stage]);
            }
            // The seventh stage row equals the 5th-order weights, so trial is the new solution.

            // Max norm: every component individually within atol + rtol |y|.
            let mut err = 0.0f64;
            for i in 0..dim {
                let mut e = 0.0;
                for (j, w) in E.iter().enumerate() {
                    e += w * self.k[j][i];
                }
                let scale = atol + rtol * y[i].abs().max(self.trial[i].abs());
                err = err.max((h * e / scale).abs());
            }

            if !err.is_finite() {
                return Err(OttoError::Integration {
                    time: *t,
                    reason: "non-finite error estimate".into(),
                });
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };

            let negative = self
                .trial
                .iter()
                .enumerate()
                .filter(|_| self.populations)
                .find(|(_, v)| **v < -NEGATIVITY_FLOOR)
                .map(|(i, v)| (i, *v));

            if err <= 1.0 && negative.is_none() {
                self.steps += 1;
                for (dst, v) in y.iter_mut().zip(&self.trial) {
                    *dst = if self.populations { v.max(0.0) } else { *v };
                }
                *t = if last { t_end } else { *t + h };
                if !last {
                    self.h = (h * factor).min(h_max);
                }
                if on_step(*t, y) {
                    return Ok(true);
                }
            } else {
                self.h = if err <= 1.0 { 0.5 * h } else { h * factor.min(1.0) };
                if self.h < 1e-14 * t.abs().max(1.0) {
                    let reason = match negative {
                        Some((i, v)) => format!("population p_{i} = {v:e} went negative"),
                        None => format!("step size underflow (h = {:e})", self.h),
                    };
                    return Err(OttoError::Integration { time: *t, reason });
                }
            }
        }
        Ok(false)
    }
}
