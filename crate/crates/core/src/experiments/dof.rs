use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::{sample_network, ActiveSet, NetworkConfig};
use crate::rates::{self, RateMode};
use crate::rng::{self, Domain};
use crate::scheduling::{self, Objective};

use super::{check_snr_grid, moments, ols};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DofEstimate {
    pub snr_grid: Vec<f64>,
    /// Mean sum rate in bits per SNR.
    pub sum_rate_samples: Vec<f64>,
    /// Least-squares pre-log factor.
    pub slope: f64,
    pub intercept: f64,
    /// RMS deviation of the fitted points from the line.
    pub residual_rms: f64,
    pub points_used: usize,
}

/// Slope of `sum_rate` against `log₂ snr` over the top half of the grid
/// (at least two points).
pub fn estimate_dof(snr_grid: &[f64], sum_rates: &[f64]) -> Result<DofEstimate> {
    if snr_grid.len() != sum_rates.len() {
        return Err(Error::input(format!(
            "{} SNRs but {} sum rates",
            snr_grid.len(),
            sum_rates.len()
        )));
    }
    check_snr_grid(snr_grid)?;
    if sum_rates.iter().any(|r| !r.is_finite()) {
        return Err(Error::numeric("non-finite sum rate"));
    }
    let m = snr_grid.len().div_ceil(2).max(2);
    let start = snr_grid.len() - m;
    let x: Vec<f64> = snr_grid[start..].iter().map(|s| s.log2()).collect();
    let y = &sum_rates[start..];
    let (slope, intercept, _) = ols(&x, y);
    let residual_rms = (x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - intercept - slope * xi).powi(2))
        .sum::<f64>()
        / m as f64)
        .sqrt();
    Ok(DofEstimate {
        snr_grid: snr_grid.to_vec(),
        sum_rate_samples: sum_rates.to_vec(),
        slope,
        intercept,
        residual_rms,
        points_used: m,
    })
}

/// How the active set is chosen in each realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    /// Users `0..K`.
    #[default]
    First,
    Random,
    Partitioned,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateCurveParams {
    pub config: NetworkConfig,
    pub snr_grid: Vec<f64>,
    pub trials: u64,
    pub mode: RateMode,
    pub selector: Selector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCurve {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Slope of the mean sum rate.
    pub dof: DofEstimate,
    /// Mean of the per-realization slopes over the same grid points.
    pub mean_realization_slope: f64,
}

/// Mean sum rate per SNR over i.i.d. realizations of `config`, with the
/// selected active set re-chosen at every SNR.
pub fn rate_curve(params: &RateCurveParams) -> Result<RateCurve> {
    let cfg = &params.config;
    cfg.validate()?;
    check_snr_grid(&params.snr_grid)?;
    if params.trials == 0 {
        return Err(Error::config("trials", "need at least one trial"));
    }
    if params.mode == RateMode::Siso && cfg.antennas != 1 {
        return Err(Error::config("antennas", "siso rates need N = 1"));
    }
    let objective = if params.mode == RateMode::Siso {
        Objective::SumRateSiso
    } else {
        Objective::SumRateMimo
    };
    let (n, k) = (cfg.users, cfg.active);
    let per_trial: Vec<Vec<f64>> = (0..params.trials)
        .into_par_iter()
        .map(|trial| {
            let ch = sample_network::<f64>(cfg, trial)?;
            params
                .snr_grid
                .iter()
                .map(|&snr| {
                    let set = match params.selector {
                        Selector::First => ActiveSet::new((0..k).collect(), n)?,
                        Selector::Random => {
                            let mut rng = rng::stream(cfg.seed, Domain::Selection, 1, trial);
                            let mut m = index::sample(&mut rng, n, k).into_vec();
                            m.sort_unstable();
                            ActiveSet::new(m, n)?
                        }
                        Selector::Partitioned => {
                            scheduling::select_partitioned(&ch, snr, k, objective)?.set
                        }
                        Selector::Exhaustive => {
                            scheduling::select_exhaustive(&ch, snr, k, objective)?.set
                        }
                    };
                    Ok(rates::sum_rate(&set, &ch, snr, params.mode)?.sum)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let s_len = params.snr_grid.len();
    let (mut mean, mut stderr) = (Vec::with_capacity(s_len), Vec::with_capacity(s_len));
    for i in 0..s_len {
        let col: Vec<f64> = per_trial.iter().map(|r| r[i]).collect();
        let (m, se, _) = moments(&col);
        mean.push(m);
        stderr.push(se);
    }
    let dof = estimate_dof(&params.snr_grid, &mean)?;
    let slopes = per_trial
        .iter()
        .map(|r| estimate_dof(&params.snr_grid, r).map(|d| d.slope))
        .collect::<Result<Vec<_>>>()?;
    let mean_realization_slope = moments(&slopes).0;
    Ok(RateCurve {
        mean,
        stderr,
        dof,
        mean_realization_slope,
    })
}
