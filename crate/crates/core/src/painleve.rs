//! The nonlinear side: the first-order system for (y, v, u), asymptotic
//! seeds at t -> 0+ and t -> +infinity, adaptive integration between them,
//! extraction of the connection constants, and the sine-Gordon-type
//! reduction residual.
//!
//! # Integration charts
//!
//! The connection trajectory passes through genuine zeros and poles of
//! y(t) (in the t -> 0 regime |sigma s^2 t^sigma| = 2 exactly, so y rides
//! the degenerate circle of its leading form). The flow is regular in the
//! square-root chart
//!
//!     w = y^{1/2},  p = v/w:    w' = w/2 - p (w^2-1)^2 / t,
//!                               p' = 2 p^2 w (w^2-1)/t - p/2,
//!
//! which is smooth at y = 0, and in the reciprocal chart (W, P) = (1/w, vw),
//! smooth at y = infinity. The integrator switches between the two when
//! |w| (resp. |W|) exceeds 1.8. The third state slot carries
//! ln m = ln(u y^{1/2}), which satisfies (ln m)' = 1/2 identically:
//! d/dt ln u = v(y-1)^2/(t y) and d/dt ln w = 1/2 - v(y-1)^2/(t y), so the
//! singular parts cancel exactly. u itself has a pole (zero) at each zero
//! (pole) of y, so ln u is reconstructed per sample as ln m - ln w with a
//! continuously unwrapped ln w.

use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions, StepAction};
use crate::specialfn::gamma;
use num_complex::Complex64;
use std::cell::Cell;
use std::f64::consts::PI;

/// State of the nonlinear system at time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PVState {
    pub t: f64,
    pub y: Complex64,
    pub v: Complex64,
    pub u: Complex64,
}

impl PVState {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(Error::SingularState { what: "t must be positive" });
        }
        if self.y == Complex64::new(0.0, 0.0) || self.y == Complex64::new(1.0, 0.0) {
            return Err(Error::SingularState { what: "y in {0, 1}" });
        }
        if self.u == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularState { what: "u = 0" });
        }
        Ok(())
    }
}

/// Boundary data at t -> 0+: y, v, u are parametrized by (sigma, r) with
/// s^2 tied to sigma through `seed_s_squared`.
#[derive(Debug, Clone, Copy)]
pub struct SeedZero {
    pub sigma: Complex64,
    pub r: Complex64,
    pub s_squared: Complex64,
}

impl SeedZero {
    pub fn new(sigma: Complex64, r: Complex64) -> Result<Self> {
        if r == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularState { what: "r = 0" });
        }
        if !(0.0..1.0).contains(&sigma.re) {
            return Err(Error::DomainViolation("Re sigma must lie in [0, 1)"));
        }
        Ok(Self { sigma, r, s_squared: seed_s_squared(sigma)? })
    }
}

/// Boundary datum at t -> +infinity.
#[derive(Debug, Clone, Copy)]
pub struct SeedInf {
    pub u_hat: Complex64,
}

/// Right side of the system solved for the derivatives:
/// (dy/dt, dv/dt, d ln u/dt).
pub fn system_rhs(state: &PVState) -> Result<(Complex64, Complex64, Complex64)> {
    state.validate()?;
    let PVState { t, y, v, .. } = *state;
    let dy = y - 2.0 * v * (y - 1.0) * (y - 1.0) / t;
    let dv = (y * v * v - v * v / y) / t;
    let dlnu = (-2.0 * v + y * v + v / y) / t;
    Ok((dy, dv, dlnu))
}

/// Residual of the scalar second-order equation at (t, y, y', y'');
/// vanishes exactly when the triple comes from a solution.
pub fn pv_residual(t: f64, y: Complex64, y1: Complex64, y2: Complex64) -> Result<Complex64> {
    if t == 0.0 || y == Complex64::new(0.0, 0.0) || y == Complex64::new(1.0, 0.0) {
        return Err(Error::SingularState { what: "pv_residual at t=0 or y in {0,1}" });
    }
    let bracket = (0.5 / y + 1.0 / (y - 1.0)) * y1 * y1 - y1 / t + y / t
        - y * (y + 1.0) / (2.0 * (y - 1.0));
    Ok(y2 - bracket)
}

/// s^2 as a function of sigma:
/// s^2 = (i sigma^2 / 4 pi^3) (Gamma(-sigma)/Gamma(sigma))^2 Gamma(sigma/2)^6.
pub fn seed_s_squared(sigma: Complex64) -> Result<Complex64> {
    if sigma == Complex64::new(0.0, 0.0) {
        return Err(Error::GammaPole(sigma));
    }
    let gm = gamma(-sigma)?;
    let gp = gamma(sigma)?;
    let gh = gamma(sigma / 2.0)?;
    let ratio = gm / gp;
    Ok(Complex64::new(0.0, 1.0) * sigma * sigma / (4.0 * PI.powi(3)) * ratio * ratio * gh.powu(6))
}

/// Leading-order state at small t from the t -> 0+ expansion.
pub fn seed_at_zero(t: f64, seed: &SeedZero) -> Result<PVState> {
    if !(t > 0.0) {
        return Err(Error::SingularState { what: "t must be positive" });
    }
    let ts = (seed.sigma * t.ln()).exp(); // t^sigma
    let x = seed.sigma * seed.s_squared * ts;
    if (x - 2.0).norm() < 1e-12 || (x + 2.0).norm() < 1e-12 {
        return Err(Error::DegenerateSeed { x });
    }
    let y = (x - 2.0) * (x - 2.0) / ((x + 2.0) * (x + 2.0));
    let v = 1.0 / (4.0 * seed.s_squared * ts) - seed.sigma * seed.sigma * seed.s_squared * ts / 16.0;
    let u = -seed.r * (2.0 + x) / (2.0 - x);
    Ok(PVState { t, y, v, u })
}

pub const SEED_INF_T_FLOOR: f64 = 20.0;

/// Leading-order state at large t: y = -1 - 4/t, v = -t/8, u = u_hat e^{t/2}.
pub fn seed_at_infinity(t: f64, seed: &SeedInf) -> Result<PVState> {
    seed_at_infinity_with_floor(t, seed, SEED_INF_T_FLOOR)
}

pub fn seed_at_infinity_with_floor(t: f64, seed: &SeedInf, floor: f64) -> Result<PVState> {
    if t < floor {
        return Err(Error::DomainViolation("seed_at_infinity below its t floor"));
    }
    if seed.u_hat == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularState { what: "u_hat = 0" });
    }
    Ok(PVState {
        t,
        y: Complex64::new(-1.0 - 4.0 / t, 0.0),
        v: Complex64::new(-t / 8.0, 0.0),
        u: seed.u_hat * (t / 2.0).exp(),
    })
}

/// Higher-order seed with the u-component matched to y through the exact
/// first integral u y^{1/2} e^{-t/2} = i u_hat:
/// y = -1 - 4/t - 8/t^2, u = u_hat e^{t/2} (1 + 4/t + 8/t^2)^{-1/2}.
/// This realizes the (1 + o(1)) factor of the large-t behavior consistently;
/// the plain `seed_at_infinity` mis-sets u by O(1/t), which double-seeding
/// can only partly remove.
pub fn seed_at_infinity_matched(t: f64, seed: &SeedInf) -> Result<PVState> {
    if t < SEED_INF_T_FLOOR {
        return Err(Error::DomainViolation("seed_at_infinity below its t floor"));
    }
    if seed.u_hat == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularState { what: "u_hat = 0" });
    }
    let corr = 1.0 + 4.0 / t + 8.0 / (t * t);
    Ok(PVState {
        t,
        y: Complex64::new(-corr, 0.0),
        v: Complex64::new(-t / 8.0, 0.0),
        u: seed.u_hat * (t / 2.0).exp() / corr.sqrt(),
    })
}

/// Which seed produced a trajectory.
#[derive(Debug, Clone, Copy)]
pub enum SeedDescriptor {
    Infinity { u_hat: Complex64, t_seed: f64 },
    Zero { sigma: Complex64, r: Complex64 },
    Raw,
}

/// One recorded state, including the branch-continued square root of y.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub t: f64,
    pub y: Complex64,
    pub v: Complex64,
    pub ln_u: Complex64,
    pub sqrt_y: Complex64,
}

impl Sample {
    pub fn state(&self) -> PVState {
        PVState { t: self.t, y: self.y, v: self.v, u: self.ln_u.exp() }
    }
}

/// An integrated trajectory of the nonlinear system.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub seed: SeedDescriptor,
    pub rtol: f64,
    pub atol: f64,
    pub samples: Vec<Sample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chart {
    Sqrt,
    Recip,
}

const CHART_EXIT: f64 = 1.8;

fn chart_rhs(chart: Chart, t: f64, s: &[Complex64], ds: &mut [Complex64]) {
    let a = s[0];
    let b = s[1];
    let a2 = a * a;
    match chart {
        Chart::Sqrt => {
            // a = w, b = p
            let q = (a2 - 1.0) * (a2 - 1.0);
            ds[0] = a / 2.0 - b * q / t;
            ds[1] = 2.0 * b * b * a * (a2 - 1.0) / t - b / 2.0;
        }
        Chart::Recip => {
            // a = W = 1/w, b = P = v w
            let q = (1.0 - a2) * (1.0 - a2);
            ds[0] = -a / 2.0 + b * q / t;
            ds[1] = 2.0 * b * b * a * (1.0 - a2) / t + b / 2.0;
        }
    }
    ds[2] = Complex64::new(0.5, 0.0); // ln m = ln(u y^{1/2}); see module docs
}

fn chart_to_sample(chart: Chart, t: f64, s: &[Complex64], lnw_prev: &mut Complex64) -> Sample {
    let w = match chart {
        Chart::Sqrt => s[0],
        Chart::Recip => 1.0 / s[0],
    };
    let v = s[0] * s[1]; // w p in Sqrt, W P = v in Recip: both equal v
    let y = w * w;
    // continued logarithm of w: unwrap the argument increment
    let mut arg = w.arg();
    let prev = lnw_prev.im;
    let mut d = arg - prev;
    while d > PI {
        d -= 2.0 * PI;
        arg -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
        arg += 2.0 * PI;
    }
    let lnw = Complex64::new(w.norm().ln(), arg);
    *lnw_prev = lnw;
    Sample { t, y, v, ln_u: s[2] - lnw, sqrt_y: w }
}

/// Integrates the system from `from` through the strictly monotone `times`
/// (the first entry must equal `from.t`), recording one sample per time.
pub fn integrate_with_times(
    from: &PVState,
    times: &[f64],
    rtol: f64,
    atol: f64,
    seed: SeedDescriptor,
) -> Result<Trajectory> {
    from.validate()?;
    if times.is_empty() || (times[0] - from.t).abs() > 1e-12 * from.t.max(1.0) {
        return Err(Error::InvalidConfig("times must start at the seed t".into()));
    }
    for w in times.windows(2) {
        if (w[1] - w[0]) * (times[times.len() - 1] - times[0]).signum() <= 0.0 {
            return Err(Error::InvalidConfig("times must be strictly monotone".into()));
        }
        if w[1] <= 0.0 {
            return Err(Error::SingularState { what: "times must stay positive" });
        }
    }

    let w0 = from.y.sqrt();
    let chart = Cell::new(if w0.norm() <= 1.3 { Chart::Sqrt } else { Chart::Recip });
    let mut state = match chart.get() {
        Chart::Sqrt => vec![w0, from.v / w0, from.u.ln() + w0.ln()],
        Chart::Recip => vec![1.0 / w0, from.v * w0, from.u.ln() + w0.ln()],
    };
    let mut lnw_prev = w0.ln();
    let mut samples = Vec::with_capacity(times.len());
    samples.push(chart_to_sample(chart.get(), from.t, &state, &mut lnw_prev));

    let rhs = |t: f64, s: &[Complex64], ds: &mut [Complex64]| chart_rhs(chart.get(), t, s, ds);
    let mut switch = |_t: f64, s: &mut [Complex64]| -> StepAction {
        if s[0].norm() > CHART_EXIT {
            let a = s[0];
            let b = s[1];
            s[0] = 1.0 / a;
            s[1] = a * a * b; // (w,p)->(W,P) and (W,P)->(w,p) share this form
            chart.set(match chart.get() {
                Chart::Sqrt => Chart::Recip,
                Chart::Recip => Chart::Sqrt,
            });
            StepAction::Restart
        } else {
            StepAction::Continue
        }
    };

    let opts = OdeOptions { rtol, atol, h_initial: None, max_steps: 5_000_000 };
    for pair in times.windows(2) {
        ode::integrate_to(&rhs, pair[0], pair[1], &mut state, &opts, Some(&mut switch))?;
        samples.push(chart_to_sample(chart.get(), pair[1], &state, &mut lnw_prev));
    }
    Ok(Trajectory { seed, rtol, atol, samples })
}

pub const SAMPLES_PER_DECADE: usize = 64;

/// Geometric time grid between two endpoints, `SAMPLES_PER_DECADE` points
/// per decade, endpoints included.
pub fn geometric_times(t_from: f64, t_to: f64) -> Vec<f64> {
    if (t_from - t_to).abs() < 1e-15 * t_from.abs().max(1.0) {
        return vec![t_from];
    }
    let decades = (t_from / t_to).ln().abs() / std::f64::consts::LN_10;
    let n = ((SAMPLES_PER_DECADE as f64 * decades).ceil() as usize).max(1);
    let ratio = (t_to / t_from).powf(1.0 / n as f64);
    let mut ts: Vec<f64> = (0..n).map(|i| t_from * ratio.powi(i as i32)).collect();
    ts.push(t_to);
    ts
}

/// Adaptive trajectory from `from` to `t_target` on the default geometric
/// sample grid.
pub fn integrate(from: &PVState, t_target: f64, rtol: f64, atol: f64) -> Result<Trajectory> {
    integrate_with_times(from, &geometric_times(from.t, t_target), rtol, atol, SeedDescriptor::Raw)
}

/// alpha(t) = 2 v (1-y) / y^{1/2} on the supplied branch of the root.
pub fn extract_sigma(state: &PVState, sqrt_y: Complex64) -> Result<Complex64> {
    check_branch(state.y, sqrt_y)?;
    Ok(2.0 * state.v * (1.0 - state.y) / sqrt_y)
}

/// -u y^{1/2} on the supplied branch; tends to r as t -> 0+.
pub fn extract_r(state: &PVState, sqrt_y: Complex64) -> Result<Complex64> {
    check_branch(state.y, sqrt_y)?;
    Ok(-state.u * sqrt_y)
}

fn check_branch(y: Complex64, sqrt_y: Complex64) -> Result<()> {
    if sqrt_y == Complex64::new(0.0, 0.0) {
        return Err(Error::BranchAmbiguity("sqrt_y vanishes (trajectory at y = 0)"));
    }
    if (sqrt_y * sqrt_y - y).norm() > 1e-6 * y.norm().max(1.0) {
        return Err(Error::BranchAmbiguity("sqrt_y is not a square root of y"));
    }
    Ok(())
}

/// Model alpha including the -vt correction: the square root of
/// 4 (v^2 (1-y)^2 / y - v t), on the sign branch closest to extract_sigma.
pub fn alpha_model(state: &PVState, sqrt_y: Complex64) -> Result<Complex64> {
    let raw = extract_sigma(state, sqrt_y)?;
    let a2 = 4.0 * (state.v * state.v * (1.0 - state.y) * (1.0 - state.y) / state.y
        - state.v * state.t);
    let a = a2.sqrt();
    Ok(if (a - raw).norm() <= (-a - raw).norm() { a } else { -a })
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    /// Nearest sample to the requested time.
    pub fn sample_at(&self, t: f64) -> &Sample {
        self.samples
            .iter()
            .min_by(|a, b| {
                (a.t - t).abs().partial_cmp(&(b.t - t).abs()).expect("finite times")
            })
            .expect("trajectory has at least one sample")
    }

    pub fn sigma_at(&self, s: &Sample) -> Result<Complex64> {
        extract_sigma(&s.state(), s.sqrt_y)
    }

    pub fn r_at(&self, s: &Sample) -> Result<Complex64> {
        extract_r(&s.state(), s.sqrt_y)
    }

    /// -u y^{1/2} e^{-t/2}: the bias-free estimator of r (u y^{1/2} e^{-t/2}
    /// is a first integral of the system).
    pub fn r_compensated_at(&self, s: &Sample) -> Result<Complex64> {
        Ok(self.r_at(s)? * (-s.t / 2.0).exp())
    }

    /// Max normalized residual of the scalar equation along interior samples,
    /// with derivatives supplied by the first-order system and its
    /// t-derivative. Normalization by the largest constituent term keeps the
    /// check meaningful near the poles of y that the trajectory crosses.
    pub fn pv_residual_max(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for s in &self.samples {
            let st = s.state();
            if (st.y - 1.0).norm() < 1e-9 || st.y.norm() < 1e-9 {
                continue;
            }
            let (y1, v1, _) = system_rhs(&st)?;
            let (t, y, v) = (st.t, st.y, st.v);
            let y2 = y1 - 2.0 * (v1 * (y - 1.0) * (y - 1.0) + 2.0 * v * (y - 1.0) * y1) / t
                + 2.0 * v * (y - 1.0) * (y - 1.0) / (t * t);
            let res = pv_residual(t, y, y1, y2)?;
            let scale = y2
                .norm()
                .max(((0.5 / y + 1.0 / (y - 1.0)) * y1 * y1).norm())
                .max((y1 / t).norm())
                .max((y / t).norm())
                .max((y * (y + 1.0) / (2.0 * (y - 1.0))).norm())
                .max(1.0);
            worst = worst.max(res.norm() / scale);
        }
        Ok(worst)
    }
}

/// Max residual of x q'' - 2x sin 2q + q' + 2 sin q over the trajectory,
/// with q recovered from y = ((e^{iq}+1)/(e^{iq}-1))^2, t = 4x, and the
/// derivatives formed by centered differences. The trajectory must be
/// uniformly sampled in t.
pub fn sine_gordon_residual(traj: &Trajectory) -> Result<f64> {
    let n = traj.samples.len();
    if n < 5 {
        return Err(Error::InvalidConfig("need at least 5 uniform samples".into()));
    }
    let dt = traj.samples[1].t - traj.samples[0].t;
    for w in traj.samples.windows(2) {
        let d = w[1].t - w[0].t;
        if ((d - dt) / dt).abs() > 1e-8 {
            return Err(Error::InvalidConfig("samples are not uniformly spaced".into()));
        }
    }
    let h = dt.abs() / 4.0; // x = t/4
    // recover q continuously
    let mut qs = Vec::with_capacity(n);
    let mut prev: Option<Complex64> = None;
    for s in &traj.samples {
        let w = s.sqrt_y;
        if (w - 1.0).norm() < 1e-8 {
            return Err(Error::BranchAmbiguity("q-map singular near y = 1"));
        }
        let e = (w + 1.0) / (w - 1.0);
        let mut q = -Complex64::new(0.0, 1.0) * e.ln();
        if let Some(p) = prev {
            let k = ((q.re - p.re) / (2.0 * PI)).round();
            q -= 2.0 * PI * k;
        }
        prev = Some(q);
        qs.push(q);
    }
    let mut worst: f64 = 0.0;
    for i in 1..n - 1 {
        let x = traj.samples[i].t / 4.0;
        let q = qs[i];
        let (qa, qb) = if dt < 0.0 { (qs[i + 1], qs[i - 1]) } else { (qs[i - 1], qs[i + 1]) };
        let qp = (qb - qa) / (2.0 * h);
        let qpp = (qb - 2.0 * q + qa) / (h * h);
        let res = x * qpp - 2.0 * x * (2.0 * q).sin() + qp + 2.0 * q.sin();
        worst = worst.max(res.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rhs_spec_point() {
        let s = PVState { t: 8.0, y: c(-1.5, 0.0), v: c(-1.0, 0.0), u: c(1.0, 0.0) };
        let (dy, _, _) = system_rhs(&s).unwrap();
        assert!((dy - c(0.0625, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rhs_vanishing_v() {
        let s = PVState { t: 3.0, y: c(0.3, 0.7), v: c(0.0, 0.0), u: c(2.0, 0.0) };
        let (_, dv, dlnu) = system_rhs(&s).unwrap();
        assert_eq!(dv, c(0.0, 0.0));
        assert_eq!(dlnu, c(0.0, 0.0));
    }

    #[test]
    fn rhs_y_minus_one() {
        let v = c(0.4, -0.2);
        let s = PVState { t: 2.0, y: c(-1.0, 0.0), v, u: c(1.0, 0.0) };
        let (_, _, dlnu) = system_rhs(&s).unwrap();
        assert!((dlnu - (-4.0 * v / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_states_rejected() {
        let s = PVState { t: 1.0, y: c(0.0, 0.0), v: c(1.0, 0.0), u: c(1.0, 0.0) };
        assert!(system_rhs(&s).is_err());
        let s = PVState { t: 1.0, y: c(1.0, 0.0), v: c(1.0, 0.0), u: c(1.0, 0.0) };
        assert!(system_rhs(&s).is_err());
    }

    #[test]
    fn residual_definition() {
        // y'' chosen exactly as the bracket value -> residual 0
        let (t, y, y1) = (2.0, c(-1.2, 0.4), c(0.3, -0.1));
        let bracket = (0.5 / y + 1.0 / (y - 1.0)) * y1 * y1 - y1 / t + y / t
            - y * (y + 1.0) / (2.0 * (y - 1.0));
        assert_eq!(pv_residual(t, y, y1, bracket).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn residual_of_leading_asymptotics_is_small() {
        // y = -1 - 4/t, y' = 4/t^2, y'' = -8/t^3
        let f = |t: f64| {
            pv_residual(t, c(-1.0 - 4.0 / t, 0.0), c(4.0 / (t * t), 0.0), c(-8.0 / t.powi(3), 0.0))
                .unwrap()
                .norm()
        };
        let (r100, r200) = (f(100.0), f(200.0));
        assert!(r100 < 1e-3, "{r100}");
        // O(t^-2) decay: quartering within a factor
        assert!(r200 < 0.35 * r100, "{r100} {r200}");
    }

    #[test]
    fn seed_infinity_spec_values() {
        let s = seed_at_infinity(40.0, &SeedInf { u_hat: c(1.0, 0.0) }).unwrap();
        assert!((s.y - c(-1.1, 0.0)).norm() < 1e-15);
        assert!((s.v - c(-5.0, 0.0)).norm() < 1e-15);
        assert!((s.u - c(20.0f64.exp(), 0.0)).norm() < 1e-9 * s.u.norm());
        let si = seed_at_infinity(40.0, &SeedInf { u_hat: c(0.0, 1.0) }).unwrap();
        assert!((si.u - c(0.0, 20.0f64.exp())).norm() < 1e-9 * si.u.norm());
        assert!(seed_at_infinity(5.0, &SeedInf { u_hat: c(1.0, 0.0) }).is_err());
    }

    #[test]
    fn degenerate_seed_detected() {
        // craft s_squared so that sigma s^2 t^sigma = 2 at t = 1
        let sigma = c(0.5, 0.0);
        let seed = SeedZero { sigma, r: c(1.0, 0.0), s_squared: 2.0 / sigma };
        assert!(matches!(seed_at_zero(1.0, &seed), Err(Error::DegenerateSeed { .. })));
    }

    #[test]
    fn single_point_trajectory_is_identity() {
        let s = seed_at_infinity(40.0, &SeedInf { u_hat: c(1.0, 0.0) }).unwrap();
        let tr = integrate(&s, 40.0, 1e-10, 1e-12).unwrap();
        assert_eq!(tr.samples.len(), 1);
        assert!((tr.samples[0].y - s.y).norm() < 1e-14);
    }

    #[test]
    fn extract_on_y_minus_one_ray() {
        // y = -1, v = 0.25i: alpha = 2v * 2 / i = -4iv = 1
        let s = PVState { t: 0.1, y: c(-1.0, 0.0), v: c(0.0, 0.25), u: c(1.0, 0.0) };
        let alpha = extract_sigma(&s, c(0.0, 1.0)).unwrap();
        assert!((alpha - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn branch_mismatch_rejected() {
        let s = PVState { t: 0.1, y: c(-1.0, 0.0), v: c(0.0, 0.25), u: c(1.0, 0.0) };
        assert!(extract_sigma(&s, c(5.0, 0.0)).is_err());
    }
}
