//! Monte Carlo harnesses. Everything here is `f64`.
//!
//! Trials are independent work units whose randomness is keyed by
//! `(seed, trial)`; counters are integers and real-valued per-trial results
//! are collected in trial order before summing, so every output is identical
//! for any number of worker threads.

mod definetti;
mod dof;
mod scaling;
mod tail;

pub use definetti::{exchangeability_check, ExchangeabilityPoint, Latent};
pub use dof::{estimate_dof, rate_curve, DofEstimate, RateCurve, RateCurveParams, Selector};
pub use scaling::{scaling_run, ScalingParams, ScalingPoint, ScalingRecord, ScalingSelector};
pub use tail::{
    tail_sweep, wishart_tail_run, TailEstimate, TailFlag, ThresholdFit, MIN_TRIALS,
    RESOLUTION_COUNT,
};

use crate::error::{Error, Result};

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10·log₁₀(snr)`.
pub fn linear_to_db(snr: f64) -> f64 {
    10.0 * snr.log10()
}

/// At least two finite SNRs above 1, strictly increasing.
pub(crate) fn check_snr_grid(snr_grid: &[f64]) -> Result<()> {
    if snr_grid.len() < 2 {
        return Err(Error::config("snr_db", "need ≥ 2 SNR points"));
    }
    if snr_grid.iter().any(|&s| !(s > 1.0 && s.is_finite())) {
        return Err(Error::config(
            "snr_db",
            "every SNR must be finite and above 0 dB",
        ));
    }
    if snr_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config(
            "snr_db",
            "SNR grid must be strictly increasing",
        ));
    }
    Ok(())
}

/// Ordinary least squares `y = a + b·x`; returns `(b, a, weights)` where
/// `b = Σ wᵢ yᵢ`.
pub(crate) fn ols(x: &[f64], y: &[f64]) -> (f64, f64, Vec<f64>) {
    let m = x.len() as f64;
    let xm = x.iter().sum::<f64>() / m;
    let ym = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|&xi| (xi - xm).powi(2)).sum();
    let w: Vec<f64> = x.iter().map(|&xi| (xi - xm) / sxx).collect();
    let b: f64 = w.iter().zip(y).map(|(wi, yi)| wi * yi).sum();
    (b, ym - b * xm, w)
}

/// Mean, standard error and standard deviation of samples in a fixed order.
pub(crate) fn moments(v: &[f64]) -> (f64, f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt(), var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-9);
        assert!((linear_to_db(db_to_linear(17.5)) - 17.5).abs() < 1e-12);
    }

    #[test]
    fn grid_checks() {
        assert!(check_snr_grid(&[100.0])
            .unwrap_err()
            .to_string()
            .contains("need ≥ 2 SNR points"));
        assert!(check_snr_grid(&[100.0, 10.0]).is_err());
        assert!(check_snr_grid(&[1.0, 10.0]).is_err());
        assert!(check_snr_grid(&[10.0, 100.0]).is_ok());
    }

    #[test]
    fn ols_exact_line() {
        let (b, a, _) = ols(&[1.0, 2.0, 3.0], &[5.0, 7.0, 9.0]);
        assert!((b - 2.0).abs() < 1e-12 && (a - 3.0).abs() < 1e-12);
    }

    #[test]
    fn moments_basic() {
        let (m, se, sd) = moments(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((sd - 2f64.sqrt()).abs() < 1e-12);
        assert!((se - 1.0).abs() < 1e-12);
    }
}
