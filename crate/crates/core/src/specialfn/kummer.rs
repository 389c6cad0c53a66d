//! Kummer confluent hypergeometric functions M(a,b,z) = 1F1 and U(a,b,z),
//! and the Whittaker pair M_{kappa,mu}, W_{kappa,mu} built on them.
//!
//! Series are used inside direction-dependent radii (see module docs of
//! `specialfn`); beyond them the DLMF 13.7 compound expansions take over,
//! with the sector sign of the recessive term chosen from the branch
//! argument. U at nonpositive integer `a` terminates and is evaluated
//! exactly; integer `b` otherwise goes through a symmetric parameter nudge
//! at the Whittaker level (W is even in mu).

use super::{gamma, SectorArg};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_TERMS: usize = 600;
const MAX_ASYM: usize = 80;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-12 && z.re <= 1e-12 && (z.re - z.re.round()).abs() < 1e-12
}

fn near_integer(z: Complex64, tol: f64) -> bool {
    z.im.abs() < tol && (z.re - z.re.round()).abs() < tol
}

/// 1/Gamma, zero at the poles.
fn rgamma(z: Complex64) -> Complex64 {
    match gamma(z) {
        Ok(g) => 1.0 / g,
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

fn kummer_m_series(a: Complex64, b: Complex64, z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// 2F0-type asymptotic sum  sum_s (x)_s (y)_s / (s! w^s), truncated at the
/// smallest term.
fn poch_asym_sum(x: Complex64, y: Complex64, w: Complex64) -> Complex64 {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for s in 0..MAX_ASYM {
        let sf = s as f64;
        let next = term * (x + sf) * (y + sf) / ((sf + 1.0) * w);
        let tn = next.norm();
        if tn > last {
            break;
        }
        sum += next;
        term = next;
        last = tn;
        if tn < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn m_series_radius(theta: f64) -> f64 {
    if theta.abs() <= PI / 4.0 { 40.0 } else { 20.0 }
}

fn u_series_radius(theta: f64) -> f64 {
    if theta.abs() <= PI / 4.0 { 16.0 } else { 20.0 }
}

/// Kummer M(a, b, z) on the branch carried by `z` (M is entire; the branch
/// only selects the asymptotic representation).
pub fn kummer_m(a: Complex64, b: Complex64, z: &SectorArg) -> Result<Complex64> {
    z.validate()?;
    if is_nonpositive_integer(b) {
        return Err(Error::ParameterPole { context: "kummer_m: b nonpositive integer", value: b });
    }
    if z.branch_arg.abs() > 1.5 * PI + 1e-9 {
        return Err(Error::UnsupportedBranch { arg: z.branch_arg, max: 1.5 * PI });
    }
    if z.modulus() <= m_series_radius(z.branch_arg) {
        return Ok(kummer_m_series(a, b, z.value));
    }
    // DLMF 13.7.2: Gamma(b) [ e^{+-i pi a} z^{-a}/Gamma(b-a) S2 + e^z z^{a-b}/Gamma(a) S1 ]
    let upper = z.branch_arg >= 0.0;
    let phase = if upper {
        (Complex64::new(0.0, PI) * a).exp()
    } else {
        (Complex64::new(0.0, -PI) * a).exp()
    };
    let s2 = poch_asym_sum(a, a - b + 1.0, -z.value);
    let s1 = poch_asym_sum(b - a, 1.0 - a, z.value);
    let gb = gamma(b)?;
    let recessive = phase * z.powc(-a) * rgamma(b - a) * s2;
    let dominant = z.value.exp() * z.powc(a - b) * rgamma(a) * s1;
    Ok(gb * (recessive + dominant))
}

/// Kummer U(a, b, z) on the branch carried by `z`.
///
/// Exact terminating form at nonpositive integer `a`; otherwise the series
/// region uses the two-1F1 connection formula (which requires `b` away from
/// the integers) and the far region the 13.7.3 expansion.
pub fn kummer_u(a: Complex64, b: Complex64, z: &SectorArg) -> Result<Complex64> {
    z.validate()?;
    if z.branch_arg.abs() > 1.5 * PI + 1e-9 {
        return Err(Error::UnsupportedBranch { arg: z.branch_arg, max: 1.5 * PI });
    }
    if is_nonpositive_integer(a) {
        // series terminates: exact polynomial times z^{-a}
        let n = (-a.re).round() as usize;
        let mut sum = Complex64::new(1.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for s in 0..n {
            let sf = s as f64;
            term *= (a + sf) * (a - b + 1.0 + sf) / ((sf + 1.0) * (-z.value));
            sum += term;
        }
        return Ok(z.powc(-a) * sum);
    }
    if z.modulus() <= u_series_radius(z.branch_arg) {
        if near_integer(b, 1e-9) {
            return Err(Error::ParameterPole { context: "kummer_u: integer b", value: b });
        }
        let t1 = gamma(1.0 - b)? * rgamma(a - b + 1.0) * kummer_m_series(a, b, z.value);
        let t2 = gamma(b - 1.0)? * rgamma(a) * z.powc(1.0 - b) * kummer_m_series(a - b + 1.0, 2.0 - b, z.value);
        Ok(t1 + t2)
    } else {
        Ok(z.powc(-a) * poch_asym_sum(a, a - b + 1.0, -z.value))
    }
}

/// Whittaker M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu-kappa+1/2, 1+2mu, z).
pub fn whittaker_m(kappa: Complex64, mu: Complex64, z: &SectorArg) -> Result<Complex64> {
    let a = mu - kappa + 0.5;
    let b = 1.0 + 2.0 * mu;
    if is_nonpositive_integer(b) {
        return Err(Error::ParameterPole { context: "whittaker_m: 1+2mu nonpositive integer", value: b });
    }
    if z.modulus() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let pre = (-z.value / 2.0).exp() * z.powc(mu + 0.5);
    Ok(pre * kummer_m(a, b, z)?)
}

/// Whittaker W_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} U(mu-kappa+1/2, 1+2mu, z).
///
/// Even in mu; integer 1+2mu (away from the terminating case) is handled by
/// a symmetric nudge mu -> mu +- delta, accurate to ~1e-9.
pub fn whittaker_w(kappa: Complex64, mu: Complex64, z: &SectorArg) -> Result<Complex64> {
    let mu = if mu.re < 0.0 { -mu } else { mu };
    let a = mu - kappa + 0.5;
    let b = 1.0 + 2.0 * mu;
    if z.modulus() == 0.0 {
        return Err(Error::DomainViolation("whittaker_w at z = 0"));
    }
    let eval = |m: Complex64| -> Result<Complex64> {
        let a = m - kappa + 0.5;
        let b = 1.0 + 2.0 * m;
        let pre = (-z.value / 2.0).exp() * z.powc(m + 0.5);
        Ok(pre * kummer_u(a, b, z)?)
    };
    if is_nonpositive_integer(a) || z.modulus() > u_series_radius(z.branch_arg) {
        return eval(mu);
    }
    if near_integer(b, 1e-7) {
        let delta = 1e-5;
        let wp = eval(mu + delta)?;
        let wm = eval(mu - delta)?;
        return Ok(0.5 * (wp + wm));
    }
    eval(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    fn sa(re: f64, im: f64) -> SectorArg {
        SectorArg::principal(c(re, im))
    }

    #[test]
    fn whittaker_m_degenerate_identity() {
        // M_{1/2,0}(z) = z^{1/2} e^{-z/2}
        let v = whittaker_m(c(0.5, 0.0), c(0.0, 0.0), &sa(2.0, 0.0)).unwrap();
        let expect = 2.0_f64.sqrt() * (-1.0_f64).exp();
        assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-14);
    }

    #[test]
    fn whittaker_m_vanishes_at_origin() {
        let v = whittaker_m(c(0.5, 0.0), c(0.0, 0.0), &sa(0.0, 0.0)).unwrap();
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn whittaker_w_degenerate_identity() {
        // W_{mu+1/2,mu}(z) = e^{-z/2} z^{mu+1/2}; at mu=0, z=3
        let v = whittaker_w(c(0.5, 0.0), c(0.0, 0.0), &sa(3.0, 0.0)).unwrap();
        let expect = 3.0_f64.sqrt() * (-1.5_f64).exp();
        assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-14, "{v}");
    }

    #[test]
    fn whittaker_w_degenerate_large_z() {
        let v = whittaker_w(c(0.5, 0.0), c(0.0, 0.0), &sa(50.0, 0.0)).unwrap();
        let expect = 50.0_f64.sqrt() * (-25.0_f64).exp();
        assert!((v.re - expect).abs() < 1e-8 * expect.abs());
    }

    #[test]
    fn parameter_pole_rejected() {
        // 1+2mu = -1
        let r = whittaker_m(c(0.5, 0.0), c(-1.0, 0.0), &sa(1.0, 0.0));
        assert!(matches!(r, Err(Error::ParameterPole { .. })));
    }

    #[test]
    fn branch_cap() {
        let z = SectorArg::from_polar(2.0, 1.6 * PI);
        assert!(matches!(
            whittaker_m(c(0.5, 0.0), c(0.0, 0.1), &z),
            Err(Error::UnsupportedBranch { .. })
        ));
    }

    #[test]
    fn kummer_m_at_a_zero_is_one() {
        let v = kummer_m(c(0.0, 0.0), c(1.0, 0.3), &sa(5.0, 2.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }
}
