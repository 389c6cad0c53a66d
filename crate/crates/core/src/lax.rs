//! The linear side: the lambda-system of the Lax pair, its constant gauge
//! transforms, canonical frames at the irregular singular point, contour
//! propagation in exponential-factored form, Stokes multiplier extraction,
//! and the zero-curvature compatibility residual.
//!
//! # Conditioning of the contours
//!
//! Frames are always propagated as Yhat = Y exp(-lambda t/2 sigma3), whose
//! ODE has bounded coefficients. Even so, any path whose dominance gap
//! exp(2 t Re lambda) rises and falls amplifies roundoff by the peak gap, so
//! multiplier contours run radially along the anti-Stokes rays (constant
//! gap) and cross between rays on a small arc of radius r0 = max(1.6, 3/t),
//! where the peak amplification exp(2 t r0) is harmless. Matching happens
//! on the shared anti-Stokes ray where both exponentials are unimodular;
//! each multiplier is read off by projecting the column difference onto the
//! shared recessive column (the mixed comparison), never by a raw inverse.

use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};
use crate::painleve::{system_rhs, PVState};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn mat_norm(a: &Mat2) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn mat_det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn identity() -> Mat2 {
    [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
     [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]]
}

/// Trace-free coefficient matrix [[a, b], [c, -a]] of a 2x2 linear system.
#[derive(Debug, Clone, Copy)]
pub struct LaxCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl LaxCoefficients {
    pub fn as_matrix(&self) -> Mat2 {
        [[self.a, self.b], [self.c, -self.a]]
    }
}

/// Exclusion radius around the regular singular points lambda = 0, 1.
pub const EXCLUSION_RADIUS: f64 = 0.05;

fn check_lambda(lambda: Complex64) -> Result<()> {
    if lambda == Complex64::new(0.0, 0.0) || lambda == Complex64::new(1.0, 0.0) {
        return Err(Error::SingularPoint(lambda));
    }
    Ok(())
}

/// Coefficients of the lambda-system at (lambda, state):
/// a = t/2 + v/l - v/(l-1), b = -uv/l + uyv/(l-1), c = (v/u)/l - v/(uy(l-1)).
pub fn lax_matrix(lambda: Complex64, state: &PVState) -> Result<LaxCoefficients> {
    check_lambda(lambda)?;
    let PVState { t, y, v, u } = *state;
    let l = lambda;
    Ok(LaxCoefficients {
        a: t / 2.0 + v / l - v / (l - 1.0),
        b: -u * v / l + u * y * v / (l - 1.0),
        c: (v / u) / l - v / (u * y * (l - 1.0)),
    })
}

/// Constant gauges that leave the Stokes matrices unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    Direct,
    /// Y -> [[1,0],[-1,1]] u^{-sigma3/2} Y
    Tilde,
    /// Y -> [[1,0],[1,1]] (-uy)^{-sigma3/2} Y
    Hat,
}

/// Coefficients of the gauged system.
pub fn gauge_coefficients(gauge: Gauge, lambda: Complex64, state: &PVState) -> Result<LaxCoefficients> {
    check_lambda(lambda)?;
    let base = lax_matrix(lambda, state)?;
    let PVState { y, u, .. } = *state;
    match gauge {
        Gauge::Direct => Ok(base),
        Gauge::Tilde => {
            if u == Complex64::new(0.0, 0.0) {
                return Err(Error::SingularState { what: "u = 0 in tilde gauge" });
            }
            let bb = base.b / u;
            let cb = base.c * u;
            Ok(LaxCoefficients { a: base.a + bb, b: bb, c: cb - bb - 2.0 * base.a })
        }
        Gauge::Hat => {
            let zeta = -u * y;
            if zeta == Complex64::new(0.0, 0.0) {
                return Err(Error::BranchAmbiguity("(-uy)^{1/2} undefined: uy = 0"));
            }
            let bh = base.b / zeta;
            let ch = base.c * zeta;
            Ok(LaxCoefficients { a: base.a - bh, b: bh, c: 2.0 * base.a + ch - bh })
        }
    }
}

/// Map lambda -> tilde-gauge coefficients for a fixed state.
pub fn gauge_tilde(state: PVState) -> impl Fn(Complex64) -> Result<LaxCoefficients> {
    move |lambda| gauge_coefficients(Gauge::Tilde, lambda, &state)
}

/// Map lambda -> hat-gauge coefficients for a fixed state.
pub fn gauge_hat(state: PVState) -> impl Fn(Complex64) -> Result<LaxCoefficients> {
    move |lambda| gauge_coefficients(Gauge::Hat, lambda, &state)
}

/// Constant gauge matrix G for frame normalization, principal square roots.
/// The multipliers are invariant under the root's sign.
pub fn gauge_matrix(gauge: Gauge, state: &PVState) -> Result<Mat2> {
    let z = Complex64::new(0.0, 0.0);
    match gauge {
        Gauge::Direct => Ok(identity()),
        Gauge::Tilde => {
            let s = state.u.sqrt();
            if s == z {
                return Err(Error::SingularState { what: "u = 0 in tilde gauge" });
            }
            Ok([[1.0 / s, z], [-1.0 / s, s]])
        }
        Gauge::Hat => {
            let s = (-state.u * state.y).sqrt();
            if s == z {
                return Err(Error::BranchAmbiguity("(-uy)^{1/2} undefined: uy = 0"));
            }
            Ok([[1.0 / s, z], [1.0 / s, s]])
        }
    }
}

/// 1/lambda coefficient of the canonical expansion at lambda = infinity.
pub fn y1_coefficient(state: &PVState) -> Mat2 {
    let PVState { t, y, v, u } = *state;
    let d = v - v * v * (1.0 - y) * (1.0 - y) / (t * y);
    [[d, u * v * (1.0 - y) / t], [v * (y - 1.0) / (u * y * t), -d]]
}

/// Polyline in the lambda plane along which frames are propagated.
#[derive(Debug, Clone)]
pub struct Contour {
    pub nodes: Vec<Complex64>,
    pub sector: i32,
}

impl Contour {
    pub fn new(nodes: Vec<Complex64>, sector: i32) -> Result<Self> {
        let c = Self { nodes, sector };
        c.validate()?;
        Ok(c)
    }

    /// Polyline approximating the arc |lambda| = r between two angles.
    pub fn arc(r: f64, theta_from: f64, theta_to: f64, sector: i32) -> Result<Self> {
        let n = ((theta_to - theta_from).abs() / (PI / 24.0)).ceil().max(2.0) as usize;
        let nodes = (0..=n)
            .map(|i| {
                let th = theta_from + (theta_to - theta_from) * i as f64 / n as f64;
                Complex64::from_polar(r, th)
            })
            .collect();
        Self::new(nodes, sector)
    }

    /// Radial segment on the ray arg lambda = theta.
    pub fn ray(theta: f64, r_from: f64, r_to: f64, sector: i32) -> Result<Self> {
        let e = Complex64::from_polar(1.0, theta);
        Self::new(vec![e * r_from, e * r_to], sector)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() < 2 {
            return Err(Error::InvalidConfig("contour needs at least two nodes".into()));
        }
        for seg in self.nodes.windows(2) {
            for sing in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] {
                if segment_distance(seg[0], seg[1], sing) < EXCLUSION_RADIUS - 1e-12 {
                    return Err(Error::SingularPointProximity { node: seg[0], near: sing });
                }
            }
        }
        Ok(())
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let denom = ab.norm_sqr();
    if denom == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a).re * ab.re + (p - a).im * ab.im) / denom;
    let s = s.clamp(0.0, 1.0);
    (a + s * ab - p).norm()
}

/// A fundamental-solution frame with exp(lambda t/2 sigma3) factored out.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalFrame {
    pub lambda: Complex64,
    pub m: Mat2,
    pub sector: i32,
    /// estimate of the initialization truncation error
    pub truncation: f64,
}

/// Central (anti-Stokes) ray of sector k: arg lambda = pi/2 + (k-2) pi.
pub fn sector_ray(sector: i32) -> f64 {
    PI / 2.0 + (sector - 2) as f64 * PI
}

pub fn r_min(t: f64) -> f64 {
    (200.0 / t).max(50.0)
}

/// Truncated canonical frame I + Y1/lambda at |lambda| = r on the sector's
/// central ray.
pub fn canonical_frame(state: &PVState, sector: i32, r: f64) -> Result<CanonicalFrame> {
    canonical_frame_gauged(state, sector, r, Gauge::Direct)
}

pub fn canonical_frame_gauged(
    state: &PVState,
    sector: i32,
    r: f64,
    gauge: Gauge,
) -> Result<CanonicalFrame> {
    state.validate()?;
    let rmin = r_min(state.t);
    if r < rmin {
        return Err(Error::RadiusTooSmall { r, r_min: rmin });
    }
    let lambda = Complex64::from_polar(r, sector_ray(sector));
    let y1 = y1_coefficient(state);
    let mut m = identity();
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] += y1[i][j] / lambda;
        }
    }
    let g = gauge_matrix(gauge, state)?;
    let m = mat_mul(&g, &m);
    let scale = mat_norm(&y1);
    let truncation = 4.0 * (scale / r) * (scale / r) + 1e-12;
    Ok(CanonicalFrame { lambda, m, sector, truncation })
}

/// Integrates the factored frame along a contour:
/// dYhat/dlambda = M(lambda) Yhat - (t/2) Yhat sigma3.
pub fn propagate(frame: &CanonicalFrame, contour: &Contour, state: &PVState) -> Result<CanonicalFrame> {
    propagate_gauged(frame, contour, state, Gauge::Direct, 1e-11)
}

pub fn propagate_gauged(
    frame: &CanonicalFrame,
    contour: &Contour,
    state: &PVState,
    gauge: Gauge,
    rtol: f64,
) -> Result<CanonicalFrame> {
    contour.validate()?;
    if (contour.nodes[0] - frame.lambda).norm() > 1e-9 * frame.lambda.norm().max(1.0) {
        return Err(Error::InvalidConfig("contour must start at the frame's lambda".into()));
    }
    let t = state.t;
    let mut y: Vec<Complex64> = frame.m.iter().flatten().copied().collect();
    let opts = OdeOptions { rtol, atol: 1e-13, h_initial: None, max_steps: 4_000_000 };
    for seg in contour.nodes.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let dl = b - a;
        let f = |s: f64, q: &[Complex64], dq: &mut [Complex64]| {
            let lambda = a + s * dl;
            // contour validation keeps lambda off 0 and 1
            let m = gauge_coefficients(gauge, lambda, state).expect("contour avoids 0 and 1");
            let mm = m.as_matrix();
            // dq = dl * (M q - (t/2) q sigma3), with q laid out row-major
            for i in 0..2 {
                for j in 0..2 {
                    let mq = mm[i][0] * q[j] + mm[i][1] * q[2 + j];
                    let sgn = if j == 0 { 1.0 } else { -1.0 };
                    dq[2 * i + j] = dl * (mq - sgn * (t / 2.0) * q[2 * i + j]);
                }
            }
        };
        ode::integrate_to(&f, 0.0, 1.0, &mut y, &opts, None)?;
    }
    Ok(CanonicalFrame {
        lambda: *contour.nodes.last().expect("validated contour"),
        m: [[y[0], y[1]], [y[2], y[3]]],
        sector: contour.sector,
        truncation: frame.truncation,
    })
}

/// Stokes multipliers with extraction diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct StokesData {
    pub s1: Complex64,
    pub s2: Complex64,
    pub t_used: f64,
    pub radius: f64,
    pub inner_radius: f64,
    /// matching rays for (s1, s2)
    pub rays: (f64, f64),
    /// relative off-structure residuals of the two matchings
    pub residual_s1: f64,
    pub residual_s2: f64,
    pub truncation: f64,
}

const STRUCTURE_TOLERANCE: f64 = 1e-2;

fn column(m: &Mat2, j: usize) -> [Complex64; 2] {
    [m[0][j], m[1][j]]
}

/// least-squares coefficient of d along c, plus the relative residual
fn project(d: [Complex64; 2], c: [Complex64; 2]) -> (Complex64, f64) {
    let num = c[0].conj() * d[0] + c[1].conj() * d[1];
    let den = c[0].norm_sqr() + c[1].norm_sqr();
    let s = num / den;
    let r0 = d[0] - s * c[0];
    let r1 = d[1] - s * c[1];
    let dn = (d[0].norm_sqr() + d[1].norm_sqr()).sqrt();
    let rn = (r0.norm_sqr() + r1.norm_sqr()).sqrt();
    (s, if dn > 0.0 { rn / dn } else { 0.0 })
}

pub fn stokes_multipliers(state: &PVState, r: f64) -> Result<StokesData> {
    stokes_multipliers_gauged(state, r, Gauge::Direct, 1e-11)
}

pub fn stokes_multipliers_gauged(
    state: &PVState,
    r: f64,
    gauge: Gauge,
    rtol: f64,
) -> Result<StokesData> {
    let t = state.t;
    let r0 = (3.0 / t).max(1.6);
    if r <= 2.0 * r0 {
        return Err(Error::RadiusTooSmall { r, r_min: 2.0 * r0 });
    }
    let frame_scale = |f: &CanonicalFrame| mat_norm(&f.m).max(1e-30);

    // s1: sector-1 frame carried from arg -pi/2 to arg +pi/2
    let f1 = canonical_frame_gauged(state, 1, r, gauge)?;
    let th1 = sector_ray(1);
    let th2 = sector_ray(2);
    let path_in = Contour::ray(th1, r, r0, 1)?;
    let cross = Contour::arc(r0, th1, th2, 1)?;
    let path_out = Contour::ray(th2, r0, r, 1)?;
    let f1 = propagate_gauged(&f1, &path_in, state, gauge, rtol)?;
    let f1 = propagate_gauged(&f1, &cross, state, gauge, rtol)?;
    let f1 = propagate_gauged(&f1, &path_out, state, gauge, rtol)?;
    let f2 = canonical_frame_gauged(state, 2, r, gauge)?;
    let lam_star = f2.lambda;
    let d = [
        column(&f2.m, 0)[0] - column(&f1.m, 0)[0],
        column(&f2.m, 0)[1] - column(&f1.m, 0)[1],
    ];
    let (s1, res1) = if (d[0].norm_sqr() + d[1].norm_sqr()).sqrt() < 1e-9 * frame_scale(&f2) {
        (Complex64::new(0.0, 0.0), 0.0)
    } else {
        let (p, res) = project(d, column(&f2.m, 1));
        ((lam_star * t).exp() * p, res)
    };

    // s2: sector-2 frame carried from arg pi/2 to arg 3pi/2
    let th3 = sector_ray(3);
    let path_in2 = Contour::ray(th2, r, r0, 2)?;
    let cross2 = Contour::arc(r0, th2, th3, 2)?;
    let path_out2 = Contour::ray(th3, r0, r, 2)?;
    let g2 = canonical_frame_gauged(state, 2, r, gauge)?;
    let g2 = propagate_gauged(&g2, &path_in2, state, gauge, rtol)?;
    let g2 = propagate_gauged(&g2, &cross2, state, gauge, rtol)?;
    let g2 = propagate_gauged(&g2, &path_out2, state, gauge, rtol)?;
    let f3 = canonical_frame_gauged(state, 3, r, gauge)?;
    let lam_star2 = f3.lambda;
    let d2 = [
        column(&f3.m, 1)[0] - column(&g2.m, 1)[0],
        column(&f3.m, 1)[1] - column(&g2.m, 1)[1],
    ];
    let (s2, res2) = if (d2[0].norm_sqr() + d2[1].norm_sqr()).sqrt() < 1e-9 * frame_scale(&f3) {
        (Complex64::new(0.0, 0.0), 0.0)
    } else {
        let (p, res) = project(d2, column(&f3.m, 0));
        ((-lam_star2 * t).exp() * p, res)
    };

    if res1 > STRUCTURE_TOLERANCE || res2 > STRUCTURE_TOLERANCE {
        return Err(Error::StructureViolation { residual: res1.max(res2) });
    }
    Ok(StokesData {
        s1,
        s2,
        t_used: t,
        radius: r,
        inner_radius: r0,
        rays: (th2, th3),
        residual_s1: res1,
        residual_s2: res2,
        truncation: f1.truncation,
    })
}

/// Frobenius norm of dM_lambda/dt - dM_t/dlambda + [M_lambda, M_t], with the
/// t-derivatives supplied by the nonlinear system. M_t is the compatible
/// t-direction matrix (lambda/2) sigma3 + (1/t) [[0, uv(y-1)], [v(y-1)/(uy), 0]].
pub fn zero_curvature_residual(state: &PVState, lambda: Complex64) -> Result<f64> {
    let (dy, dv, dlnu) = system_rhs(state)?;
    zero_curvature_residual_with(state, lambda, dy, dv, dlnu)
}

/// Same residual with caller-supplied derivatives (linear in each slot).
pub fn zero_curvature_residual_with(
    state: &PVState,
    lambda: Complex64,
    dy: Complex64,
    dv: Complex64,
    dlnu: Complex64,
) -> Result<f64> {
    check_lambda(lambda)?;
    let PVState { t, y, v, u } = *state;
    let du = u * dlnu;
    let l = lambda;
    let z = Complex64::new(0.0, 0.0);

    let m_l = lax_matrix(lambda, state)?.as_matrix();
    let n12 = u * v * (y - 1.0) / t;
    let n21 = v * (y - 1.0) / (u * y * t);
    let m_t = [[l / 2.0, n12], [n21, -l / 2.0]];

    // d/dt of the lambda-matrix: (1/2) sigma3 + A0'/l + A1'/(l-1)
    let da0 = [[dv, -(du * v + u * dv)], [(dv * u - v * du) / (u * u), -dv]];
    let uy = u * y;
    let duy = du * y + u * dy;
    let da1 = [
        [-dv, du * y * v + u * dy * v + u * y * dv],
        [-(dv * uy - v * duy) / (uy * uy), dv],
    ];
    let mut dt_ml = [[Complex64::new(0.5, 0.0), z], [z, Complex64::new(-0.5, 0.0)]];
    for i in 0..2 {
        for j in 0..2 {
            dt_ml[i][j] += da0[i][j] / l + da1[i][j] / (l - 1.0);
        }
    }
    // d/dlambda of the t-matrix
    let dl_mt = [[Complex64::new(0.5, 0.0), z], [z, Complex64::new(-0.5, 0.0)]];
    let comm = mat_sub(&mat_mul(&m_l, &m_t), &mat_mul(&m_t, &m_l));
    let mut res = [[z; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            res[i][j] = dt_ml[i][j] - dl_mt[i][j] + comm[i][j];
        }
    }
    Ok(mat_norm(&res))
}

/// Stokes data at several t along a trajectory, plus the maximum pairwise
/// relative deviation over the scan (per multiplier, then the worse one).
pub fn isomonodromy_scan(
    traj: &crate::painleve::Trajectory,
    t_points: &[f64],
    radius: impl Fn(f64) -> f64,
) -> Result<(f64, Vec<StokesData>)> {
    let mut data = Vec::with_capacity(t_points.len());
    for &t in t_points {
        let s = traj.sample_at(t);
        if (s.t - t).abs() > 1e-6 * t {
            return Err(Error::InvalidConfig(format!(
                "trajectory has no sample at t = {t} (nearest: {})",
                s.t
            )));
        }
        data.push(stokes_multipliers(&s.state(), radius(t))?);
    }
    let dev = |f: fn(&StokesData) -> Complex64| -> f64 {
        let vals: Vec<Complex64> = data.iter().map(f).collect();
        let scale = vals.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1e-30);
        let mut worst = 0.0f64;
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                worst = worst.max((vals[i] - vals[j]).norm() / scale);
            }
        }
        worst
    };
    let worst = dev(|d| d.s1).max(dev(|d| d.s2));
    Ok((worst, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_state() -> PVState {
        PVState { t: 8.0, y: c(-1.5, 0.0), v: c(-1.0, 0.0), u: c(1.0, 0.0) }
    }

    #[test]
    fn lax_matrix_v_zero_is_diagonal() {
        let s = PVState { t: 6.0, y: c(2.0, 1.0), v: c(0.0, 0.0), u: c(1.0, 2.0) };
        let m = lax_matrix(c(0.7, 0.3), &s).unwrap();
        assert_eq!(m.b, c(0.0, 0.0));
        assert_eq!(m.c, c(0.0, 0.0));
        assert!((m.a - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lax_matrix_large_lambda_limit() {
        let s = sample_state();
        let m = lax_matrix(c(1e9, 0.0), &s).unwrap();
        assert!((m.a - s.t / 2.0).norm() < 1e-8);
        assert!(m.b.norm() < 1e-6 && m.c.norm() < 1e-8);
    }

    #[test]
    fn residue_at_zero_has_zero_determinant() {
        // residue matrix [[v, -uv],[v/u, -v]]: det = -v^2 + uv^2/u = 0
        let s = sample_state();
        let (v, u) = (s.v, s.u);
        let res = [[v, -u * v], [v / u, -v]];
        assert!(mat_det(&res).norm() < 1e-15);
    }

    #[test]
    fn tilde_gauge_matches_conjugation() {
        let s = PVState { t: 233.0 / 100.0, y: c(0.7, -1.3), v: c(0.4, 0.2), u: c(1.5, 0.5) };
        for lam in [c(2.0, 1.0), c(-0.8, 0.6), c(3.0, -2.0)] {
            let tilde = gauge_coefficients(Gauge::Tilde, lam, &s).unwrap().as_matrix();
            let g = gauge_matrix(Gauge::Tilde, &s).unwrap();
            let gi = {
                let d = mat_det(&g);
                [[g[1][1] / d, -g[0][1] / d], [-g[1][0] / d, g[0][0] / d]]
            };
            let conj = mat_mul(&mat_mul(&g, &lax_matrix(lam, &s).unwrap().as_matrix()), &gi);
            assert!(mat_norm(&mat_sub(&tilde, &conj)) < 1e-12);
        }
    }

    #[test]
    fn hat_gauge_matches_conjugation_and_v0_limit() {
        let s = PVState { t: 1.7, y: c(-0.9, 0.8), v: c(-0.3, 0.55), u: c(0.8, -1.1) };
        let lam = c(1.9, -0.7);
        let hat = gauge_coefficients(Gauge::Hat, lam, &s).unwrap().as_matrix();
        let g = gauge_matrix(Gauge::Hat, &s).unwrap();
        let gi = {
            let d = mat_det(&g);
            [[g[1][1] / d, -g[0][1] / d], [-g[1][0] / d, g[0][0] / d]]
        };
        let conj = mat_mul(&mat_mul(&g, &lax_matrix(lam, &s).unwrap().as_matrix()), &gi);
        assert!(mat_norm(&mat_sub(&hat, &conj)) < 1e-12);

        // v = 0: C-hat = t exactly (and t + (2v - vy - v/y)/lambda in general)
        let s0 = PVState { t: 1.7, y: c(-0.9, 0.8), v: c(0.0, 0.0), u: c(0.8, -1.1) };
        let hat0 = gauge_coefficients(Gauge::Hat, lam, &s0).unwrap();
        assert!((hat0.c - c(1.7, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hat_c_entry_closed_form() {
        let s = PVState { t: 2.4, y: c(1.3, 0.7), v: c(-0.2, 0.9), u: c(1.1, 0.3) };
        for lam in [c(2.0, 2.0), c(-1.5, 0.4)] {
            let hat = gauge_coefficients(Gauge::Hat, lam, &s).unwrap();
            let expect = s.t + (2.0 * s.v - s.v * s.y - s.v / s.y) / lam;
            assert!((hat.c - expect).norm() < 1e-12, "{lam}");
        }
    }

    #[test]
    fn canonical_frame_v0_is_identity() {
        let s = PVState { t: 4.0, y: c(2.0, 0.0), v: c(0.0, 0.0), u: c(1.0, 0.0) };
        let f = canonical_frame(&s, 2, 60.0).unwrap();
        assert!(mat_norm(&mat_sub(&f.m, &identity())) < 1e-15);
    }

    #[test]
    fn radius_floor_enforced() {
        let s = sample_state();
        assert!(matches!(canonical_frame(&s, 1, 10.0), Err(Error::RadiusTooSmall { .. })));
    }

    #[test]
    fn zero_curvature_identity_and_linearity() {
        let s = sample_state();
        let lam = c(0.0, 2.0);
        let r = zero_curvature_residual(&s, lam).unwrap();
        assert!(r <= 1e-10, "residual {r}");

        let (dy, dv, dlnu) = system_rhs(&s).unwrap();
        let eps = 1e-3;
        let r1 = zero_curvature_residual_with(&s, lam, dy + eps, dv, dlnu).unwrap();
        let r2 = zero_curvature_residual_with(&s, lam, dy + 2.0 * eps, dv, dlnu).unwrap();
        assert!((r2 / r1 - 2.0).abs() < 1e-6, "linearity: {r1} {r2}");
    }

    #[test]
    fn zero_curvature_v0_exact() {
        let s = PVState { t: 3.0, y: c(0.4, 0.2), v: c(0.0, 0.0), u: c(1.0, 1.0) };
        assert!(zero_curvature_residual(&s, c(2.0, 0.5)).unwrap() < 1e-15);
    }

    #[test]
    fn contour_exclusion_discs() {
        assert!(Contour::new(vec![c(-1.0, 0.01), c(2.0, 0.01)], 1).is_err());
        assert!(Contour::new(vec![c(-1.0, 2.0), c(2.0, 2.0)], 1).is_ok());
    }

    #[test]
    fn propagate_v0_frame_constant() {
        let s = PVState { t: 4.0, y: c(2.0, 0.0), v: c(0.0, 0.0), u: c(1.0, 0.0) };
        let f = canonical_frame(&s, 2, 60.0).unwrap();
        let arc = Contour::arc(60.0, sector_ray(2), sector_ray(2) + 0.5, 2).unwrap();
        let g = propagate(&f, &arc, &s).unwrap();
        assert!(mat_norm(&mat_sub(&g.m, &f.m)) < 1e-10);
    }
}
