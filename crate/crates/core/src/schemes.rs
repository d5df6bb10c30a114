//! Per-subcarrier SINR of the evaluated downlink schemes.
//!
//! All SINRs are lower bounds for conjugate beamforming with power-control
//! coefficients `eta`, estimate variances `alpha`, large-scale gains `beta`
//! and transmit SNR `gamma_t = P_d / sigma^2`. The spectral efficiency is
//! `log2(1 + SINR)` in every case.

use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView2;
use num_complex::Complex64;

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Every AP serves every user on every subcarrier.
    FullApMultiUser,
    /// Every AP serves the single user scheduled on the subcarrier.
    FullAp,
    /// The `M_s` strongest APs serve the user; the user decodes with statistical CSI.
    Oas,
    /// As [`Scheme::Oas`], with downlink pilots and coherent detection.
    OasDp,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::FullApMultiUser => "full_ap_multiuser",
            Scheme::FullAp => "full_ap",
            Scheme::Oas => "oas",
            Scheme::OasDp => "oas_dp",
        }
    }

    /// Whether the scheme serves the user from a selected AP subset.
    pub fn uses_selection(self) -> bool {
        matches!(self, Scheme::Oas | Scheme::OasDp)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_ap_multiuser" => Ok(Scheme::FullApMultiUser),
            "full_ap" => Ok(Scheme::FullAp),
            "oas" => Ok(Scheme::Oas),
            "oas_dp" => Ok(Scheme::OasDp),
            other => Err(Error::Config(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Transmit SNR of one AP, `scale * P_d / sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub downlink_power: f64,
    pub noise_power: f64,
    pub snr_scale: f64,
}

impl LinkBudget {
    pub fn gamma_t(&self) -> f64 {
        self.snr_scale * self.downlink_power / self.noise_power
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            snr_scale: self.snr_scale * factor,
            ..self
        }
    }
}

fn check_gamma_t(gamma_t: f64) -> Result<()> {
    if gamma_t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "transmit SNR must be positive, got {gamma_t}"
        )))
    }
}

/// Coherent beamforming gain `sum_m sqrt(eta_m) alpha_m`.
fn array_gain(alpha: &[f64], eta: &[f64]) -> f64 {
    alpha.iter().zip(eta).map(|(a, e)| e.sqrt() * a).sum()
}

fn single_user(alpha: &[f64], beta: &[f64], eta: &[f64], gamma_t: f64) -> Result<f64> {
    check_len(alpha.len(), beta.len())?;
    check_len(alpha.len(), eta.len())?;
    check_gamma_t(gamma_t)?;
    let gain = array_gain(alpha, eta);
    let leakage: f64 = beta
        .iter()
        .zip(eta.iter().zip(alpha))
        .map(|(b, (e, a))| b * (e * a))
        .sum();
    Ok(gain * gain / (leakage + 1.0 / gamma_t))
}

/// Conjugate beamforming with all `K` users on the same subcarrier.
///
/// Matrices are indexed `[ap, user]`; returns the SINR of every user.
pub fn sinr_full_ap_multiuser(
    alpha: ArrayView2<f64>,
    beta: ArrayView2<f64>,
    eta: ArrayView2<f64>,
    gamma_t: f64,
) -> Result<Vec<f64>> {
    if alpha.dim() != beta.dim() || alpha.dim() != eta.dim() {
        return Err(Error::Config(format!(
            "alpha {:?}, beta {:?} and eta {:?} must have the same shape",
            alpha.dim(),
            beta.dim(),
            eta.dim()
        )));
    }
    check_gamma_t(gamma_t)?;
    // sum_k' eta_mk' alpha_mk', the power AP m spends on all users
    let served: Vec<f64> = alpha
        .rows()
        .into_iter()
        .zip(eta.rows())
        .map(|(a, e)| e.iter().zip(a.iter()).map(|(e, a)| e * a).sum())
        .collect();
    let sinr = (0..alpha.ncols())
        .map(|k| {
            let a = alpha.column(k);
            let e = eta.column(k);
            let gain: f64 = a.iter().zip(e.iter()).map(|(a, e)| e.sqrt() * a).sum();
            let leakage: f64 = beta.column(k).iter().zip(&served).map(|(b, s)| b * s).sum();
            gain * gain / (leakage + 1.0 / gamma_t)
        })
        .collect();
    Ok(sinr)
}

/// All `M` APs serve one user on the subcarrier.
pub fn sinr_full_ap(alpha: &[f64], beta: &[f64], eta: &[f64], gamma_t: f64) -> Result<f64> {
    single_user(alpha, beta, eta, gamma_t)
}

/// Selected APs only, statistical CSI at the user. Inputs are restricted to the selection.
pub fn sinr_oas(alpha: &[f64], beta: &[f64], eta: &[f64], gamma_t: f64) -> Result<f64> {
    if alpha.is_empty() {
        return Err(Error::Domain("OAS needs at least one selected AP".into()));
    }
    single_user(alpha, beta, eta, gamma_t)
}

/// Selected APs with downlink pilots: the user decodes against the realized estimates.
pub fn sinr_oas_dp(
    estimates: &[Complex64],
    alpha: &[f64],
    beta: &[f64],
    eta: &[f64],
    gamma_t: f64,
) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::Domain(
            "OAS-DP needs at least one selected AP".into(),
        ));
    }
    check_len(estimates.len(), alpha.len())?;
    check_len(estimates.len(), beta.len())?;
    check_len(estimates.len(), eta.len())?;
    check_gamma_t(gamma_t)?;
    let gain: f64 = estimates
        .iter()
        .zip(eta)
        .map(|(g, e)| e.sqrt() * g.norm_sqr())
        .sum();
    let error: f64 = eta
        .iter()
        .zip(beta.iter().zip(alpha))
        .map(|(e, (b, a))| e * (b - a) * a)
        .sum();
    Ok(gain * gain / (error + 1.0 / gamma_t))
}

/// Spectral efficiency `log2(1 + sinr)` in bits/s/Hz.
pub fn se(sinr: f64) -> Result<f64> {
    if !(sinr >= 0.0) {
        return Err(Error::Domain(format!(
            "SINR must be non-negative, got {sinr}"
        )));
    }
    Ok(sinr.ln_1p() / std::f64::consts::LN_2)
}
