//! Lévy probability density and sampling.
//!
//! The Lévy distribution is the one-sided stable law with location `mu` and
//! scale `gamma`; its heavy tail is what drives the exploratory coefficient
//! schedule of the Lévy-flight optimizer variant.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Draws are clamped to `mu + TAIL_CLAMP_FACTOR * gamma` so downstream
/// accumulators stay finite.
pub const TAIL_CLAMP_FACTOR: f64 = 1e9;

/// Location `mu` and scale `gamma` of the Lévy distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    pub mu: f64,
    pub gamma: f64,
}

impl LevyParams {
    pub fn new(mu: f64, gamma: f64) -> Result<Self> {
        let p = LevyParams { mu, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("levy mu must be finite, got {}", self.mu)));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "levy gamma must be positive and finite, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Density of the Lévy(`mu`, `gamma`) law at `eta`:
/// `sqrt(gamma/(2*pi)) * exp(-gamma / (2*(eta-mu))) * (eta-mu)^(-3/2)` for
/// `eta > mu`, and 0 otherwise.
pub fn levy_pdf(eta: f64, params: &LevyParams) -> Result<f64> {
    params.validate()?;
    if !eta.is_finite() {
        return Err(Error::InvalidParameter(format!("eta must be finite, got {eta}")));
    }
    let x = eta - params.mu;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let norm = (params.gamma / (2.0 * std::f64::consts::PI)).sqrt();
    Ok(norm * (-params.gamma / (2.0 * x)).exp() * x.powf(-1.5))
}

/// Exact draw from Lévy(`mu`, `gamma`) via the inverse-square-normal
/// construction: `mu + gamma / Z^2` with `Z` standard normal (resampled while
/// `|Z| < 1e-12`). Deterministic given the stream state; the result is
/// clamped at `mu + TAIL_CLAMP_FACTOR * gamma`.
pub fn levy_sample(params: &LevyParams, rng: &mut RngStream) -> Result<f64> {
    params.validate()?;
    let mut z = rng.next_gaussian();
    while z.abs() < 1e-12 {
        z = rng.next_gaussian();
    }
    let draw = params.mu + params.gamma / (z * z);
    Ok(draw.min(params.mu + TAIL_CLAMP_FACTOR * params.gamma))
}
