//! Modified Bessel functions I0, I1, K0, K1 for complex argument on an
//! arbitrary branch, plus the order-1 analytic-continuation formulas.
//!
//! Evaluation: the branch argument is first reduced by half-turns to the
//! sector (-pi/2, pi/2] using
//!     I1(z e^{i m pi}) = (-1)^m I1(z),        I0 unchanged,
//!     K1(z e^{i m pi}) = (-1)^m (K1(z) + m i pi I1(z)),
//!     K0(z e^{i m pi}) = K0(z) - m i pi I0(z),
//! then the principal-sector value comes from the power series or from the
//! compound asymptotic expansions. The series switchover radius is 30 within
//! |arg z| <= pi/4 and 16 beyond it: near the anti-Stokes rays the series
//! terms reach e^{|z|} while the value stays O(1), so f64 summation loses
//! |z|/ln 10 digits there, while the asymptotic sums are at their most
//! accurate (superasymptotic error ~ e^{-2|z|}).

use super::SectorArg;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577215664901532860606512;
const MAX_SERIES: usize = 200;
const MAX_ASYM: usize = 48;

fn series_radius(theta: f64) -> f64 {
    if theta.abs() <= PI / 4.0 { 30.0 } else { 16.0 }
}

/// All four kernels at one principal-sector point, |arg z| <= pi/2 + eps.
struct Quad {
    i0: Complex64,
    i1: Complex64,
    k0: Complex64,
    k1: Complex64,
}

fn series_quad(z: Complex64) -> Quad {
    let q = z * z * 0.25;
    let mut i0 = Complex64::new(1.0, 0.0);
    let mut i1 = Complex64::new(1.0, 0.0); // I1 = (z/2) * sum; this is the sum
    let mut k0s = Complex64::new(0.0, 0.0); // sum_{k>=1} H_k q^k / (k!)^2
    let mut k1s = Complex64::new(1.0, 0.0); // sum_k (H_k + H_{k+1}) q^k / (k!(k+1)!); k=0 term is 1
    let mut t0 = Complex64::new(1.0, 0.0); // q^k / (k!)^2
    let mut t1 = Complex64::new(1.0, 0.0); // q^k / (k!(k+1)!)
    let mut h = 0.0; // H_k
    for k in 1..MAX_SERIES {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        h += 1.0 / kf;
        i0 += t0;
        i1 += t1;
        k0s += t0 * h;
        k1s += t1 * (2.0 * h + 1.0 / (kf + 1.0)); // H_k + H_{k+1}
        if t0.norm() < 1e-18 * i0.norm() && t1.norm() < 1e-18 * i1.norm() {
            break;
        }
    }
    let i1 = 0.5 * z * i1;
    let lh = (0.5 * z).ln(); // principal: fine for |arg z| <= pi/2
    let k0 = -(lh + EULER_GAMMA) * i0 + k0s;
    let k1 = 1.0 / z + lh * i1 - 0.25 * z * (k1s - 2.0 * EULER_GAMMA * (i1 * 2.0 / z));
    Quad { i0, i1, k0, k1 }
}

/// Asymptotic coefficients a_k(nu), truncated at the smallest term.
fn asym_sum(nu: f64, z: Complex64, alternating: bool) -> Complex64 {
    let fournu2 = 4.0 * nu * nu;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut a = 1.0f64;
    let mut zp = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..=MAX_ASYM {
        let kf = k as f64;
        a *= (fournu2 - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (8.0 * kf);
        zp /= z;
        let sign = if alternating && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * a * zp;
        let tn = term.norm();
        if tn > last {
            break; // past the optimal truncation point
        }
        sum += term;
        last = tn;
        if tn < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn asym_quad(z: Complex64, theta: f64) -> Quad {
    let ez = z.exp();
    let emz = (-z).exp();
    let front_k = (PI / (2.0 * z)).sqrt();
    let front_i = 1.0 / (2.0 * PI * z).sqrt();
    let k0 = front_k * emz * asym_sum(0.0, z, false);
    let k1 = front_k * emz * asym_sum(1.0, z, false);
    // subdominant reflections: e^{-z +/- (nu + 1/2) pi i} terms
    let (s0, s1) = if theta >= 0.0 {
        (Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0))
    } else {
        (Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0))
    };
    let i0 = front_i * (ez * asym_sum(0.0, z, true) + s0 * emz * asym_sum(0.0, z, false));
    let i1 = front_i * (ez * asym_sum(1.0, z, true) + s1 * emz * asym_sum(1.0, z, false));
    Quad { i0, i1, k0, k1 }
}

/// Kernel quad at a principal-sector point; `theta` is the reduced argument.
fn quad_principal(z: Complex64, theta: f64) -> Quad {
    if z.norm() <= series_radius(theta) {
        series_quad(z)
    } else {
        asym_quad(z, theta)
    }
}

/// Reduce branch_arg into (-pi/2, pi/2] by half-turns; returns (m, z_p, theta').
fn reduce(z: &SectorArg) -> Result<(i32, Complex64, f64)> {
    z.validate()?;
    if z.branch_arg.abs() > 2.5 * PI + 1e-9 {
        return Err(Error::UnsupportedBranch { arg: z.branch_arg, max: 2.5 * PI });
    }
    let mut m = (z.branch_arg / PI).round() as i32;
    let mut theta = z.branch_arg - m as f64 * PI;
    if theta <= -PI / 2.0 {
        m -= 1;
        theta += PI;
    }
    let zp = Complex64::from_polar(z.value.norm(), theta);
    Ok((m, zp, theta))
}

struct BranchQuad {
    i0: Complex64,
    i1: Complex64,
    k0: Complex64,
    k1: Complex64,
    /// derivatives with respect to z at the branch point
    di1: Complex64,
    dk1: Complex64,
}

fn eval_branch(z: &SectorArg) -> Result<BranchQuad> {
    let (m, zp, theta) = reduce(z)?;
    let q = quad_principal(zp, theta);
    let mf = m as f64;
    let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
    let ipi = Complex64::new(0.0, PI);
    let i0 = q.i0;
    let i1 = sgn * q.i1;
    let k0 = q.k0 - mf * ipi * q.i0;
    let k1 = sgn * (q.k1 + mf * ipi * q.i1);
    // d/dz at the branch point: value(z) = (+-)(f(z_p) ...) with dz_p/dz = e^{-i m pi}
    let di1_p = q.i0 - q.i1 / zp;
    let dk1_p = -q.k0 - q.k1 / zp;
    let di1 = di1_p; // (-1)^m * (-1)^m
    let dk1 = dk1_p + mf * ipi * di1_p;
    Ok(BranchQuad { i0, i1, k0, k1, di1, dk1 })
}

/// Modified Bessel I1 on the requested branch. Entire in z, so the branch
/// only resolves which asymptotic representation applies.
pub fn bessel_i1(z: &SectorArg) -> Result<Complex64> {
    if z.value.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(eval_branch(z)?.i1)
}

/// Modified Bessel K1 on the requested branch (genuinely multivalued).
pub fn bessel_k1(z: &SectorArg) -> Result<Complex64> {
    if z.value.norm() == 0.0 {
        return Err(Error::OriginSingularity);
    }
    Ok(eval_branch(z)?.k1)
}

pub fn bessel_i0(z: &SectorArg) -> Result<Complex64> {
    if z.value.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(eval_branch(z)?.i0)
}

pub fn bessel_k0(z: &SectorArg) -> Result<Complex64> {
    if z.value.norm() == 0.0 {
        return Err(Error::OriginSingularity);
    }
    Ok(eval_branch(z)?.k0)
}

/// (I1, dI1/dz) on the branch.
pub fn bessel_i1_with_derivative(z: &SectorArg) -> Result<(Complex64, Complex64)> {
    if z.value.norm() == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)));
    }
    let q = eval_branch(z)?;
    Ok((q.i1, q.di1))
}

/// (K1, dK1/dz) on the branch.
pub fn bessel_k1_with_derivative(z: &SectorArg) -> Result<(Complex64, Complex64)> {
    if z.value.norm() == 0.0 {
        return Err(Error::OriginSingularity);
    }
    let q = eval_branch(z)?;
    Ok((q.k1, q.dk1))
}

/// Order-1 continuation pair: (K1, I1) at `z` expressed through values
/// rotated into lower sheets,
///     K1(z) = -K1(z e^{-2 pi i}) - 2 K1(z e^{-pi i}),
///     I1(z) = (1/(pi i)) (K1(z e^{-pi i}) + K1(z)).
/// Reduces to the direct kernels on the principal branch.
pub fn bessel_continuation(z: &SectorArg) -> Result<(Complex64, Complex64)> {
    if z.value.norm() == 0.0 {
        return Err(Error::OriginSingularity);
    }
    let k_m1 = bessel_k1(&z.rotate(-PI))?;
    let k_m2 = bessel_k1(&z.rotate(-2.0 * PI))?;
    let k_0 = bessel_k1(z)?;
    let k1 = -k_m2 - 2.0 * k_m1;
    let i1 = (k_m1 + k_0) / Complex64::new(0.0, PI);
    Ok((k1, i1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sa(re: f64, im: f64) -> SectorArg {
        SectorArg::principal(Complex64::new(re, im))
    }

    #[test]
    fn i1_at_zero_and_one() {
        assert_eq!(bessel_i1(&sa(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let v = bessel_i1(&sa(1.0, 0.0)).unwrap();
        assert!((v.re - 0.5651591039924850).abs() < 1e-13, "{v}");
    }

    #[test]
    fn k1_at_one() {
        let v = bessel_k1(&sa(1.0, 0.0)).unwrap();
        assert!((v.re - 0.6019072301972346).abs() < 1e-13, "{v}");
    }

    #[test]
    fn k1_origin_is_error() {
        assert!(matches!(bessel_k1(&sa(0.0, 0.0)), Err(Error::OriginSingularity)));
    }

    #[test]
    fn branch_cap() {
        let s = SectorArg::from_polar(2.0, 3.0 * PI);
        assert!(matches!(bessel_k1(&s), Err(Error::UnsupportedBranch { .. })));
    }

    #[test]
    fn wronskian_identity_on_rays() {
        // z (K1 I1' - I1 K1') = 1
        for &(r, th) in &[(0.7, 0.3), (3.0, -1.2), (9.0, 1.5), (25.0, 0.1), (40.0, -0.7)] {
            let z = SectorArg::from_polar(r, th);
            let (i1, di1) = bessel_i1_with_derivative(&z).unwrap();
            let (k1, dk1) = bessel_k1_with_derivative(&z).unwrap();
            let w = z.value * (k1 * di1 - i1 * dk1);
            assert!((w - 1.0).norm() < 1e-10, "r={r} th={th}: {w}");
        }
    }

    #[test]
    fn continuation_reduces_to_identity_on_principal_branch() {
        let z = SectorArg::principal(Complex64::new(1.0, 0.0));
        let (k1, i1) = bessel_continuation(&z).unwrap();
        assert!((k1 - bessel_k1(&z).unwrap()).norm() < 1e-10);
        assert!((i1 - bessel_i1(&z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn switchover_continuity() {
        // across the series/asymptotics radius on a benign ray and near pi/2
        for &(r_lo, r_hi, th) in &[(29.9, 30.1, 0.2), (15.9, 16.1, 1.4)] {
            for which in 0..2 {
                let f = |r: f64| {
                    let z = SectorArg::from_polar(r, th);
                    if which == 0 { bessel_i1(&z).unwrap() } else { bessel_k1(&z).unwrap() }
                };
                let a = f(r_lo);
                let b = f(r_hi);
                let mid = 0.5 * (a + b);
                assert!((a - b).norm() / mid.norm() < 1e-7, "which={which} th={th}: {a} vs {b}");
            }
        }
    }
}
