//! Seeded random streams and the distributions used by the optimizers and walks.
//!
//! All samplers take a `&mut RngStream`; equal seeds give bitwise-equal
//! sample sequences. Levy-stable steps come from Mantegna's algorithm
//! `s = u / |v|^(1/beta)`, `u ~ N(0, sigma_u^2)`, `v ~ N(0, 1)`.

mod levy;
mod rng;
pub mod special;
pub mod tail;

use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

pub use levy::{
    levy_tail_coefficient, mantegna_sigma_u, mantegna_transform, sample_levy_step, LevyParams,
};
pub use rng::{child_seed, splitmix64, RngStream, GENERATOR_ID};

/// Uniform sample from `[lo, hi]`. A degenerate interval returns `lo`.
pub fn sample_uniform(rng: &mut RngStream, lo: f64, hi: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::domain(format!(
            "uniform bounds must satisfy lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let x = lo + (hi - lo) * rng.next_f64();
    Ok(x.min(hi))
}

/// Standard normal draw.
pub fn standard_normal(rng: &mut RngStream) -> f64 {
    StandardNormal.sample(rng)
}

/// Gaussian sample `N(mean, sigma^2)`; `sigma == 0` returns `mean` exactly.
pub fn sample_gaussian(rng: &mut RngStream, mean: f64, sigma: f64) -> Result<f64> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::domain(format!(
            "gaussian sigma must be finite and >= 0, got {sigma}"
        )));
    }
    let z = standard_normal(rng);
    Ok(mean + sigma * z)
}

/// Location / scale of a Cauchy distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyParams {
    location: f64,
    scale: f64,
}

impl CauchyParams {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() || !(scale.is_finite() && scale > 0.0) {
            return Err(Error::domain(format!(
                "cauchy needs finite location and scale > 0, got ({location}, {scale})"
            )));
        }
        Ok(Self { location, scale })
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `p(x) = (1/pi) * gamma / (gamma^2 + (x - mu)^2)`
    pub fn pdf(&self, x: f64) -> f64 {
        let d = x - self.location;
        self.scale / (PI * (self.scale * self.scale + d * d))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        0.5 + ((x - self.location) / self.scale).atan() / PI
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.location + self.scale * (PI * (p - 0.5)).tan()
    }
}

/// Cauchy sample by inversion of the arctangent CDF.
pub fn sample_cauchy(rng: &mut RngStream, p: &CauchyParams) -> f64 {
    loop {
        let u = rng.next_f64();
        if u > 0.0 {
            return p.quantile(u);
        }
    }
}

/// One step of the logistic map `lambda * u * (1 - u)`.
pub fn logistic_step(u: f64, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!(
            "logistic state must lie in [0, 1], got {u}"
        )));
    }
    if !(0.0..=4.0).contains(&lambda) {
        return Err(Error::domain(format!(
            "logistic parameter must lie in [0, 4], got {lambda}"
        )));
    }
    Ok((lambda * u * (1.0 - u)).clamp(0.0, 1.0))
}

/// CDF of the arcsine law `Beta(1/2, 1/2)`, the invariant density of the
/// logistic map at `lambda = 4`.
pub fn arcsine_cdf(u: f64) -> f64 {
    (2.0 / PI) * u.clamp(0.0, 1.0).sqrt().asin()
}

/// Density `(1/pi) u^(-1/2) (1-u)^(-1/2)` on `(0, 1)`.
pub fn arcsine_pdf(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    1.0 / (PI * (u * (1.0 - u)).sqrt())
}
