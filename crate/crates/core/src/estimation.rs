//! MMSE channel estimation at the statistics level.
//!
//! An MMSE estimate of a CN(0, beta) channel observed through uplink pilots
//! is CN(0, alpha) with `alpha = P_u beta^2 / (P_u beta + sigma^2)`, and the
//! error is CN(0, beta - alpha), uncorrelated with the estimate. Instead of
//! simulating pilots, [`split_estimate`] draws an (estimate, error) pair with
//! exactly these statistics that sums to the true channel.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::complex_normal;

/// Variance of the MMSE estimate of a link with large-scale gain `beta`.
pub fn mmse_alpha(beta: f64, uplink_power: f64, noise_power: f64) -> Result<f64> {
    if !(beta >= 0.0) || !(uplink_power > 0.0) || !(noise_power >= 0.0) {
        return Err(Error::Domain(format!(
            "mmse_alpha needs beta >= 0, P_u > 0, sigma^2 >= 0 (got {beta}, {uplink_power}, {noise_power})"
        )));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    let received = uplink_power * beta;
    Ok(received * beta / (received + noise_power))
}

/// Splits a channel sample into an MMSE estimate and its error.
///
/// Returns `(estimate, error)` with `estimate + error == g`. Conditioned on
/// `g ~ CN(0, beta)`, the estimate is `(alpha/beta) g + sqrt(alpha (beta - alpha) / beta) w`
/// with independent `w ~ CN(0, 1)`.
pub fn split_estimate<R: Rng + ?Sized>(
    g: Complex64,
    alpha: f64,
    beta: f64,
    rng: &mut R,
) -> Result<(Complex64, Complex64)> {
    if !(alpha >= 0.0) || !(beta >= 0.0) || alpha > beta {
        return Err(Error::Domain(format!(
            "split_estimate needs 0 <= alpha <= beta (got alpha={alpha}, beta={beta})"
        )));
    }
    if beta == 0.0 {
        return Ok((Complex64::ZERO, Complex64::ZERO));
    }
    if alpha == beta {
        return Ok((g, Complex64::ZERO));
    }
    if alpha == 0.0 {
        return Ok((Complex64::ZERO, g));
    }
    let w = complex_normal(rng);
    let estimate = g * (alpha / beta) + w * (alpha * (beta - alpha) / beta).sqrt();
    Ok((estimate, g - estimate))
}

/// Estimate and error of one link over a set of subcarriers.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedChannel {
    pub estimate: Vec<Complex64>,
    pub error: Vec<Complex64>,
    pub alpha: f64,
    pub beta: f64,
}

impl EstimatedChannel {
    pub fn from_response<R: Rng + ?Sized>(
        response: &[Complex64],
        alpha: f64,
        beta: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut estimate = Vec::with_capacity(response.len());
        let mut error = Vec::with_capacity(response.len());
        for g in response {
            let (e, x) = split_estimate(*g, alpha, beta, rng)?;
            estimate.push(e);
            error.push(x);
        }
        Ok(Self {
            estimate,
            error,
            alpha,
            beta,
        })
    }

    pub fn error_variance(&self) -> f64 {
        self.beta - self.alpha
    }
}
