//! Serialization of trajectories and Stokes data: JSON records with a fixed
//! field order plus plot-ready CSV emitters.

use crate::lax::StokesData;
use crate::painleve::{SeedDescriptor, Trajectory};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedRecord {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_hat_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_hat_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_seed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_im: Option<f64>,
}

impl From<&SeedDescriptor> for SeedRecord {
    fn from(seed: &SeedDescriptor) -> Self {
        match seed {
            SeedDescriptor::Infinity { u_hat, t_seed } => SeedRecord {
                kind: "infinity".into(),
                u_hat_re: Some(u_hat.re),
                u_hat_im: Some(u_hat.im),
                t_seed: Some(*t_seed),
                sigma_re: None,
                sigma_im: None,
                r_re: None,
                r_im: None,
            },
            SeedDescriptor::Zero { sigma, r } => SeedRecord {
                kind: "zero".into(),
                u_hat_re: None,
                u_hat_im: None,
                t_seed: None,
                sigma_re: Some(sigma.re),
                sigma_im: Some(sigma.im),
                r_re: Some(r.re),
                r_im: Some(r.im),
            },
            SeedDescriptor::Raw => SeedRecord {
                kind: "raw".into(),
                u_hat_re: None,
                u_hat_im: None,
                t_seed: None,
                sigma_re: None,
                sigma_im: None,
                r_re: None,
                r_im: None,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    pub t: f64,
    pub y_re: f64,
    pub y_im: f64,
    pub v_re: f64,
    pub v_im: f64,
    pub ln_u_re: f64,
    pub ln_u_im: f64,
    /// branch-continued square root of y, carried for extraction
    pub sqrt_y_re: f64,
    pub sqrt_y_im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TolerancesRecord {
    pub rtol: f64,
    pub atol: f64,
}

/// JSON shape of a trajectory: {seed, tolerances, samples:[{t, ...}]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub seed: SeedRecord,
    pub tolerances: TolerancesRecord,
    pub samples: Vec<SampleRecord>,
}

impl From<&Trajectory> for TrajectoryRecord {
    fn from(tr: &Trajectory) -> Self {
        TrajectoryRecord {
            seed: (&tr.seed).into(),
            tolerances: TolerancesRecord { rtol: tr.rtol, atol: tr.atol },
            samples: tr
                .samples
                .iter()
                .map(|s| SampleRecord {
                    t: s.t,
                    y_re: s.y.re,
                    y_im: s.y.im,
                    v_re: s.v.re,
                    v_im: s.v.im,
                    ln_u_re: s.ln_u.re,
                    ln_u_im: s.ln_u.im,
                    sqrt_y_re: s.sqrt_y.re,
                    sqrt_y_im: s.sqrt_y.im,
                })
                .collect(),
        }
    }
}

/// CSV of (t, re/im/abs/arg of y, re/im v, re/im ln u), one row per sample.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = String::from("t,re_y,im_y,abs_y,arg_y,re_v,im_v,re_ln_u,im_ln_u\n");
    for s in &tr.samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.t,
            s.y.re,
            s.y.im,
            s.y.norm(),
            s.y.arg(),
            s.v.re,
            s.v.im,
            s.ln_u.re,
            s.ln_u.im
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StokesRecord {
    pub t_used: f64,
    pub radius: f64,
    pub inner_radius: f64,
    pub ray_s1: f64,
    pub ray_s2: f64,
    pub s1_re: f64,
    pub s1_im: f64,
    pub s2_re: f64,
    pub s2_im: f64,
    pub residual_s1: f64,
    pub residual_s2: f64,
    pub truncation: f64,
}

impl From<&StokesData> for StokesRecord {
    fn from(d: &StokesData) -> Self {
        StokesRecord {
            t_used: d.t_used,
            radius: d.radius,
            inner_radius: d.inner_radius,
            ray_s1: d.rays.0,
            ray_s2: d.rays.1,
            s1_re: d.s1.re,
            s1_im: d.s1.im,
            s2_re: d.s2.re,
            s2_im: d.s2.im,
            residual_s1: d.residual_s1,
            residual_s2: d.residual_s2,
            truncation: d.truncation,
        }
    }
}

pub fn stokes_csv(rows: &[StokesData]) -> String {
    let mut out = String::from(
        "t_used,radius,inner_radius,re_s1,im_s1,re_s2,im_s2,residual_s1,residual_s2,truncation\n",
    );
    for d in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            d.t_used,
            d.radius,
            d.inner_radius,
            d.s1.re,
            d.s1.im,
            d.s2.re,
            d.s2.im,
            d.residual_s1,
            d.residual_s2,
            d.truncation
        ));
    }
    out
}

/// CSV of an approximant comparison: eta, numeric, fitted model, rel error.
pub fn approximant_csv(rep: &crate::asymptotics::ApproximantReport) -> String {
    let mut out = String::from("re_eta,im_eta,re_numeric,im_numeric,re_model,im_model,rel_err\n");
    let scale = rep
        .numeric
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    for i in 0..rep.eta.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            rep.eta[i].re,
            rep.eta[i].im,
            rep.numeric[i].re,
            rep.numeric[i].im,
            rep.model_fit[i].re,
            rep.model_fit[i].im,
            (rep.numeric[i] - rep.model_fit[i]).norm() / scale
        ));
    }
    out
}
