use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exporders::{self, theorem_bounds, TheoremBounds};
use crate::netmodel::{standard_complex_normal, ActiveSet, ChannelRealization};
use crate::rates::{self, RateMode};
use crate::rng::{self, Domain};

use super::{check_snr_grid, estimate_dof, moments, DofEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScalingSelector {
    /// Best `X_{U_i}` over the disjoint groups, in the order domain.
    #[default]
    XOrder,
    /// Best group sum rate, followed by the DoF slope.
    SumRate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingParams {
    pub xi: f64,
    pub k: usize,
    pub antennas: usize,
    /// `n = round(users_scale · snr^ξ)`; `1` gives the plain `snr^ξ` law.
    pub users_scale: f64,
    pub snr_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub selector: ScalingSelector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub snr: f64,
    pub users: usize,
    pub groups: usize,
    /// Mean over trials of the best group's `X` (or sum rate in bits).
    pub mean: f64,
    pub stderr: f64,
    pub sd: f64,
    /// `E|max − bound|`; only for the order-domain selector.
    pub mean_abs_dev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRecord {
    pub points: Vec<ScalingPoint>,
    pub bounds: TheoremBounds,
    /// Lower bound the statistic should concentrate at: `lb_siso` for one
    /// antenna, `lb_mimo` otherwise.
    pub bound: f64,
    /// Slope of the mean best-group sum rate (sum-rate selector only).
    pub dof: Option<DofEstimate>,
}

/// `X` of one `K`-user group with one antenna, from Exp(1) power gains.
fn x_siso_group<R: Rng>(rng: &mut R, k: usize, ln_snr: f64) -> f64 {
    let g: Vec<f64> = (0..k * k).map(|_| rng.sample(Exp1)).collect();
    let ord = |x: f64| (-x.ln() / ln_snr).max(0.0);
    (0..k)
        .map(|u| {
            let beta = (0..k)
                .filter(|&v| v != u)
                .map(|v| ord(g[u * k + v]).min(1.0))
                .fold(1.0, f64::min);
            exporders::z_siso(ord(g[u * k + u]), beta)
        })
        .sum()
}

fn group_channel<R: Rng>(
    rng: &mut R,
    k: usize,
    antennas: usize,
) -> Result<ChannelRealization<f64>> {
    let gains = (0..k * k * antennas * antennas)
        .map(|_| standard_complex_normal(rng))
        .collect();
    ChannelRealization::from_parts(k, antennas, gains, vec![1.0; k * k])
}

fn users_at(params: &ScalingParams, snr: f64) -> Result<usize> {
    let n = (params.users_scale * snr.powf(params.xi)).round();
    if !(n >= params.k as f64) {
        return Err(Error::config(
            "xi",
            format!("n = {n} at snr = {snr} is below K = {}", params.k),
        ));
    }
    if n > 1e9 {
        return Err(Error::config(
            "xi",
            format!("n = {n} at snr = {snr} is too large"),
        ));
    }
    Ok(n as usize)
}

/// For each SNR: `n = round(scale·snr^ξ)`, `M = ⌊n/K⌋` disjoint groups, and
/// the best group's statistic per trial. Group `i` of trial `t` draws its
/// channels from its own stream, so the same group sees the same fading at
/// every SNR and a larger `n` only adds groups.
pub fn scaling_run(params: &ScalingParams) -> Result<ScalingRecord> {
    check_snr_grid(&params.snr_grid)?;
    if params.k == 0 {
        return Err(Error::config("k", "must be positive"));
    }
    if params.antennas == 0 {
        return Err(Error::config("antennas", "must be positive"));
    }
    if !(params.users_scale > 0.0 && params.users_scale.is_finite()) {
        return Err(Error::config("users_scale", "must be positive and finite"));
    }
    if params.trials < 2 {
        return Err(Error::config("trials", "need at least two trials"));
    }
    let bounds = theorem_bounds(params.xi, params.k, params.antennas)?;
    let bound = if params.antennas == 1 {
        bounds.lb_siso
    } else {
        bounds.lb_mimo
    };
    let users = params
        .snr_grid
        .iter()
        .map(|&s| users_at(params, s))
        .collect::<Result<Vec<_>>>()?;
    let (k, n_ant) = (params.k, params.antennas);
    let domain = match params.selector {
        ScalingSelector::XOrder => Domain::OrderGroup,
        ScalingSelector::SumRate => Domain::RateGroup,
    };
    let mode = if n_ant == 1 {
        RateMode::Siso
    } else {
        RateMode::Mimo
    };
    let all = ActiveSet::new((0..k).collect(), k)?;

    let group_value = |trial: u64, group: usize, snr: f64| -> Result<f64> {
        let mut rng = rng::stream(params.seed, domain, group as u64, trial);
        match params.selector {
            ScalingSelector::XOrder if n_ant == 1 => Ok(x_siso_group(&mut rng, k, snr.ln())),
            ScalingSelector::XOrder => {
                Ok(
                    exporders::order_sample(&group_channel(&mut rng, k, n_ant)?, &all, snr, false)?
                        .x,
                )
            }
            ScalingSelector::SumRate => {
                Ok(rates::sum_rate(&all, &group_channel(&mut rng, k, n_ant)?, snr, mode)?.sum)
            }
        }
    };

    let mut points = Vec::with_capacity(params.snr_grid.len());
    for (&snr, &n) in params.snr_grid.iter().zip(&users) {
        let groups = n / k;
        let best: Vec<f64> = (0..params.trials)
            .into_par_iter()
            .map(|t| {
                (0..groups)
                    .map(|g| group_value(t, g, snr))
                    .try_fold(f64::NEG_INFINITY, |m, v| v.map(|v| m.max(v)))
            })
            .collect::<Result<Vec<_>>>()?;
        let (mean, stderr, sd) = moments(&best);
        let mean_abs_dev = match params.selector {
            ScalingSelector::XOrder => {
                Some(best.iter().map(|b| (b - bound).abs()).sum::<f64>() / best.len() as f64)
            }
            ScalingSelector::SumRate => None,
        };
        points.push(ScalingPoint {
            snr,
            users: n,
            groups,
            mean,
            stderr,
            sd,
            mean_abs_dev,
        });
    }
    let dof = match params.selector {
        ScalingSelector::SumRate => {
            let means: Vec<f64> = points.iter().map(|p| p.mean).collect();
            Some(estimate_dof(&params.snr_grid, &means)?)
        }
        ScalingSelector::XOrder => None,
    };
    Ok(ScalingRecord {
        points,
        bounds,
        bound,
        dof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(xi: f64, k: usize, selector: ScalingSelector) -> ScalingParams {
        ScalingParams {
            xi,
            k,
            antennas: 1,
            users_scale: 1.0,
            snr_grid: vec![100.0, 1000.0],
            trials: 200,
            seed: 3,
            selector,
        }
    }

    #[test]
    fn n_below_k_is_rejected() {
        assert!(scaling_run(&params(0.0, 2, ScalingSelector::XOrder)).is_err());
    }

    #[test]
    fn x_stays_in_range_and_echoes_n() {
        let rec = scaling_run(&params(0.5, 2, ScalingSelector::XOrder)).unwrap();
        assert_eq!(rec.points[0].users, 10);
        assert_eq!(rec.points[1].groups, 16);
        assert!(rec.points.iter().all(|p| p.mean >= 0.0 && p.mean <= 2.0));
        assert_eq!(rec.bound, 0.5);
    }

    #[test]
    fn fixed_network_sum_rate_saturates() {
        let mut p = params(0.0, 2, ScalingSelector::SumRate);
        p.users_scale = 2.0;
        p.snr_grid = vec![1e4, 1e6, 1e8];
        p.trials = 2000;
        let rec = scaling_run(&p).unwrap();
        assert!(rec.dof.unwrap().slope < 0.1);
    }
}
