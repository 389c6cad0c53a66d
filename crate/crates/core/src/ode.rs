//! Embedded Dormand-Prince 5(4) integrator over complex state vectors,
//! with PI step-size control.
//!
//! The independent variable is real; complex-plane contours are handled by
//! the callers through real parametrizations of each segment. The FSAL
//! property is exploited; the error norm treats each complex component as
//! a scalar with tolerance atol + rtol * |y|.

use crate::error::{Error, Result};
use num_complex::Complex64;

// Dormand-Prince RK5(4)7M tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights coincide with the last A row (FSAL); E = b5 - b4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_initial: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_initial: None, max_steps: 2_000_000 }
    }
}

/// Action requested by the per-step callback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepAction {
    Continue,
    /// State was modified in place (e.g. a coordinate-chart switch);
    /// stage cache is discarded.
    Restart,
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction), mutating
/// `y` in place. `on_step`, when given, runs after every accepted step.
pub fn integrate_to<F>(
    f: &F,
    x0: f64,
    x1: f64,
    y: &mut [Complex64],
    opts: &OdeOptions,
    mut on_step: Option<&mut dyn FnMut(f64, &mut [Complex64]) -> StepAction>,
) -> Result<()>
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let n = y.len();
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(());
    }
    let dir = span.signum();
    let mut x = x0;
    let mut h = opts.h_initial.unwrap_or(0.01 * span.abs()).min(span.abs()) * dir;
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; 7];
    let mut y_stage = vec![Complex64::new(0.0, 0.0); n];
    let mut y_new = vec![Complex64::new(0.0, 0.0); n];
    f(x, y, &mut k[0]);
    let mut err_prev: f64 = 1.0;
    let mut fsal_valid = true;

    let end_tol = 1e-12 * x1.abs().max(1e-6);
    for _ in 0..opts.max_steps {
        if (x - x1) * dir >= -end_tol {
            return Ok(());
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        if h.abs() < 1e-14 * x.abs().max(1e-6) {
            return Err(Error::SingularityEncountered { t: x, what: "step size underflow" });
        }
        if !fsal_valid {
            f(x, y, &mut k[0]);
            fsal_valid = true;
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                y_stage[i] = y[i] + h * acc;
            }
            f(x + C[s] * h, &y_stage, &mut k[s]);
        }
        // 5th-order solution is the last stage's argument (FSAL): y_stage
        y_new.copy_from_slice(&y_stage);
        // error estimate
        let mut err_sq = 0.0;
        for i in 0..n {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += E[j] * kj[i];
                }
            }
            let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            let r = (h * e).norm() / sc;
            err_sq += r * r;
        }
        let err = (err_sq / n as f64).sqrt().max(1e-300);
        if err <= 1.0 {
            x += h;
            y.copy_from_slice(&y_new);
            k.swap(0, 6); // FSAL
            // PI controller with the standard dopri5 exponents
            let fac = 0.9 * err.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
            h *= fac.clamp(0.2, 10.0);
            err_prev = err;
            if !y.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::SingularityEncountered { t: x, what: "non-finite state" });
            }
            if let Some(cb) = on_step.as_deref_mut() {
                if cb(x, y) == StepAction::Restart {
                    fsal_valid = false;
                }
            }
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
    Err(Error::ToleranceFailure { x })
}

/// Convenience wrapper returning the final state.
pub fn solve<F>(f: &F, x0: f64, x1: f64, y0: &[Complex64], opts: &OdeOptions) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let mut y = y0.to_vec();
    integrate_to(f, x0, x1, &mut y, opts, None)?;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let f = |_x: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = y[0];
        };
        let y = solve(&f, 0.0, 1.0, &[Complex64::new(1.0, 0.0)], &OdeOptions::default()).unwrap();
        assert!((y[0].re - 1.0f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn complex_rotation() {
        // y' = i y on [0, 2pi] returns to start
        let f = |_x: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = Complex64::new(0.0, 1.0) * y[0];
        };
        let y0 = [Complex64::new(1.0, 0.0)];
        let y = solve(&f, 0.0, 2.0 * std::f64::consts::PI, &y0, &OdeOptions::default()).unwrap();
        assert!((y[0] - y0[0]).norm() < 1e-8);
    }

    #[test]
    fn backward_integration() {
        let f = |x: f64, _y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = Complex64::new(2.0 * x, 0.0);
        };
        let y = solve(&f, 2.0, 1.0, &[Complex64::new(4.0, 0.0)], &OdeOptions::default()).unwrap();
        assert!((y[0].re - 1.0).abs() < 1e-10);
    }
}
