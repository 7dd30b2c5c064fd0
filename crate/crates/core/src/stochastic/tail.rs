//! Logarithmic histograms and power-law tail fits for heavy-tailed samples.

use crate::stats;
use crate::{Error, Result};

/// Number of logarithmic bins used by [`tail_slope`].
pub const TAIL_BINS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    /// `count / (total * width)`: a density estimate of the magnitudes.
    pub density: f64,
}

impl LogBin {
    pub fn center(&self) -> f64 {
        (self.lo * self.hi).sqrt()
    }
}

/// Histogram of `magnitudes` over `bins` logarithmically spaced bins covering
/// `[lo, hi)`. Densities are normalized by the full sample size, including
/// values outside the window.
pub fn log_histogram(magnitudes: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Vec<LogBin>> {
    if !(lo > 0.0 && hi > lo) || bins == 0 {
        return Err(Error::domain(format!(
            "log histogram needs 0 < lo < hi and bins > 0, got [{lo}, {hi}) x {bins}"
        )));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let width = (lhi - llo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| (llo + width * i as f64).exp()).collect();
    let mut counts = vec![0u64; bins];
    for &m in magnitudes {
        if m >= lo && m < hi {
            let k = (((m.ln() - llo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    let total = magnitudes.len().max(1) as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| {
            let (a, b) = (edges[k], edges[k + 1]);
            LogBin {
                lo: a,
                hi: b,
                count,
                density: count as f64 / (total * (b - a)),
            }
        })
        .collect())
}

/// Result of a log-log regression on the tail of a sample.
#[derive(Clone, Debug, PartialEq)]
pub struct TailFit {
    /// Slope of `ln density` against `ln |s|`; `-(1 + beta)` for a Levy law.
    pub slope: f64,
    pub intercept: f64,
    pub lower: f64,
    pub upper: f64,
    pub bins: Vec<LogBin>,
}

/// Fits the power-law tail of `|samples|` over `[10 * median, q99.9]`.
pub fn tail_slope(samples: &[f64]) -> Result<TailFit> {
    let mags = stats::sorted(&samples.iter().map(|s| s.abs()).collect::<Vec<_>>());
    let median = stats::quantile_sorted(&mags, 0.5);
    let lower = 10.0 * median;
    let upper = stats::quantile_sorted(&mags, 0.999);
    if !(lower > 0.0 && upper > lower) {
        return Err(Error::Numerical(format!(
            "tail window [{lower}, {upper}] is empty; sample is not heavy-tailed enough"
        )));
    }
    let bins = log_histogram(&mags, lower, upper, TAIL_BINS)?;
    let (x, y): (Vec<f64>, Vec<f64>) = bins
        .iter()
        .filter(|b| b.count > 0)
        .map(|b| (b.center().ln(), b.density.ln()))
        .unzip();
    let (slope, intercept) = stats::ols(&x, &y)
        .ok_or_else(|| Error::Numerical("fewer than two occupied tail bins".into()))?;
    Ok(TailFit {
        slope,
        intercept,
        lower,
        upper,
        bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::RngStream;

    #[test]
    fn pareto_tail_slope() {
        // |s| = u^(-1/a) has density a s^(-1-a) above 1.
        let mut r = RngStream::new(4);
        let a = 1.2;
        let xs: Vec<f64> = (0..200_000)
            .map(|_| (1.0 - r.next_f64()).powf(-1.0 / a))
            .collect();
        let fit = tail_slope(&xs).unwrap();
        assert!((fit.slope + 1.0 + a).abs() < 0.1, "{}", fit.slope);
    }

    #[test]
    fn histogram_counts_within_window() {
        let bins = log_histogram(&[1.0, 2.0, 5.0, 9.99, 10.0, 0.5], 1.0, 10.0, 3).unwrap();
        assert_eq!(bins.iter().map(|b| b.count).sum::<u64>(), 4);
        assert!((bins[2].hi - 10.0).abs() < 1e-12);
        assert!(log_histogram(&[], 0.0, 1.0, 3).is_err());
    }

    #[test]
    fn constant_sample_has_no_tail() {
        assert!(tail_slope(&[1.0; 100]).is_err());
    }
}
