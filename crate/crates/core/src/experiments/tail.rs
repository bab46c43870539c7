use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exporders::{self, AnalyticLaw, EigenOrders, TailEvent};
use crate::linalg::{self, CMatrix};
use crate::netmodel::standard_complex_normal;
use crate::rng::{self, Domain};

use super::{check_snr_grid, ols};

pub const MIN_TRIALS: u64 = 1_000;
/// Exceedance count at the largest SNR below which a fit is flagged.
pub const RESOLUTION_COUNT: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailFlag {
    /// Too few SNRs with a non-zero count; no exponent fitted.
    BelowResolution,
    /// Fewer than [`RESOLUTION_COUNT`] events at the largest SNR.
    LowCount,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdFit {
    pub threshold: f64,
    pub exponent: Option<f64>,
    pub stderr: Option<f64>,
    pub analytic: f64,
    /// Piecewise-linear form of the exponent (differs from `analytic` only
    /// between integer points of the multi-antenna and Wishart laws).
    pub piecewise: f64,
    pub flags: Vec<TailFlag>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEstimate {
    pub law: AnalyticLaw,
    pub thresholds: Vec<f64>,
    /// Linear SNRs.
    pub snr_grid: Vec<f64>,
    pub trials: u64,
    /// Event counts, `counts[snr][threshold]`.
    pub counts: Vec<Vec<u64>>,
    pub fits: Vec<ThresholdFit>,
}

impl TailEstimate {
    pub fn probability(&self, snr_idx: usize, threshold_idx: usize) -> f64 {
        self.counts[snr_idx][threshold_idx] as f64 / self.trials as f64
    }

    /// Binomial standard error of [`Self::probability`].
    pub fn probability_stderr(&self, snr_idx: usize, threshold_idx: usize) -> f64 {
        let p = self.probability(snr_idx, threshold_idx);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Clamped order of a power gain.
fn ord(g: f64, ln_snr: f64) -> f64 {
    if g <= 0.0 {
        f64::INFINITY
    } else {
        (-g.ln() / ln_snr).max(0.0)
    }
}

fn exp1<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<f64> {
    CMatrix::from_fn(rows, cols, |_, _| standard_complex_normal(rng))
}

/// Ascending eigenvalues of `H Hᴴ` for the direct and stacked interference
/// matrices of one multi-antenna receiver.
fn mimo_user<R: Rng>(rng: &mut R, k: usize, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let direct = gaussian_matrix(rng, n, n);
    let interf = gaussian_matrix(rng, n, (k - 1) * n);
    Ok((
        linalg::hermitian_eigenvalues(&direct.gram())?,
        linalg::hermitian_eigenvalues(&interf.gram())?,
    ))
}

fn z_mimo_at(mu: &[f64], lambda: &[f64], snr: f64, n: usize) -> Result<f64> {
    exporders::z_mimo(&EigenOrders::from_eigenvalues(mu, lambda, snr)?, n)
}

/// The law's statistic for one trial at every SNR of the grid.
fn sample_statistic<R: Rng>(law: &AnalyticLaw, rng: &mut R, snr_grid: &[f64]) -> Result<Vec<f64>> {
    let ln: Vec<f64> = snr_grid.iter().map(|s| s.ln()).collect();
    match *law {
        AnalyticLaw::ZSiso { k } => {
            let g: Vec<f64> = (0..k).map(|_| exp1(rng)).collect();
            Ok(ln
                .iter()
                .map(|&l| {
                    let beta = g[1..]
                        .iter()
                        .map(|&x| ord(x, l).min(1.0))
                        .fold(1.0, f64::min);
                    exporders::z_siso(ord(g[0], l), beta)
                })
                .collect())
        }
        AnalyticLaw::XSiso { k } => {
            let g: Vec<f64> = (0..k * k).map(|_| exp1(rng)).collect();
            Ok(ln
                .iter()
                .map(|&l| {
                    (0..k)
                        .map(|u| {
                            let beta = (0..k)
                                .filter(|&v| v != u)
                                .map(|v| ord(g[u * k + v], l).min(1.0))
                                .fold(1.0, f64::min);
                            exporders::z_siso(ord(g[u * k + u], l), beta)
                        })
                        .sum()
                })
                .collect())
        }
        AnalyticLaw::BetaAlpha => {
            let (direct, cross) = (exp1(rng), exp1(rng));
            Ok(ln
                .iter()
                .map(|&l| exporders::z_siso(ord(direct, l), ord(cross, l).min(1.0)))
                .collect())
        }
        AnalyticLaw::ZMimo { k, n } => {
            let (mu, lambda) = mimo_user(rng, k, n)?;
            snr_grid
                .iter()
                .map(|&s| z_mimo_at(&mu, &lambda, s, n))
                .collect()
        }
        AnalyticLaw::XMimo { k, n } => {
            let users = (0..k)
                .map(|_| mimo_user(rng, k, n))
                .collect::<Result<Vec<_>>>()?;
            snr_grid
                .iter()
                .map(|&s| {
                    users
                        .iter()
                        .map(|(mu, lambda)| z_mimo_at(mu, lambda, s, n))
                        .sum()
                })
                .collect()
        }
        AnalyticLaw::Wishart { p, q } => {
            let mu = linalg::hermitian_eigenvalues(&gaussian_matrix(rng, p, q).gram())?;
            Ok(ln
                .iter()
                .map(|&l| {
                    mu.iter()
                        .map(|&m| {
                            let alpha = if m > 0.0 { -m.ln() / l } else { f64::INFINITY };
                            (1.0 - alpha).max(0.0)
                        })
                        .sum()
                })
                .collect())
        }
    }
}

fn law_code(law: &AnalyticLaw) -> u64 {
    match law {
        AnalyticLaw::ZSiso { .. } => 1,
        AnalyticLaw::XSiso { .. } => 2,
        AnalyticLaw::BetaAlpha => 3,
        AnalyticLaw::ZMimo { .. } => 4,
        AnalyticLaw::XMimo { .. } => 5,
        AnalyticLaw::Wishart { .. } => 6,
    }
}

/// Estimates `P(stat > t)` (or `P(stat < t)` for the Wishart law) on the SNR
/// grid from `trials` shared samples, then regresses `−ln p̂` on `ln snr`.
///
/// A threshold needs `min(3, grid length)` SNRs with a non-zero count to get
/// an exponent; the standard error is the delta-method propagation of the
/// binomial variance of each `ln p̂` through the least-squares weights.
pub fn tail_sweep(
    law: AnalyticLaw,
    thresholds: &[f64],
    snr_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<TailEstimate> {
    law.validate()?;
    check_snr_grid(snr_grid)?;
    if trials < MIN_TRIALS {
        return Err(Error::config(
            "trials",
            format!("need at least {MIN_TRIALS} trials, got {trials}"),
        ));
    }
    if thresholds.is_empty() || thresholds.iter().any(|t| !t.is_finite()) {
        return Err(Error::config(
            "thresholds",
            "need at least one finite threshold",
        ));
    }
    let (s_len, t_len) = (snr_grid.len(), thresholds.len());
    let below = law.event() == TailEvent::Below;
    let code = law_code(&law);
    let flat = (0..trials)
        .into_par_iter()
        .try_fold(
            || vec![0u64; s_len * t_len],
            |mut acc, trial| {
                let mut rng = rng::stream(seed, Domain::Tail, code, trial);
                let stats = sample_statistic(&law, &mut rng, snr_grid)?;
                for (i, &s) in stats.iter().enumerate() {
                    for (j, &t) in thresholds.iter().enumerate() {
                        if (below && s < t) || (!below && s > t) {
                            acc[i * t_len + j] += 1;
                        }
                    }
                }
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(
            || vec![0u64; s_len * t_len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let counts: Vec<Vec<u64>> = flat.chunks(t_len).map(<[u64]>::to_vec).collect();
    let need = 3.min(s_len);
    let fits = thresholds
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mut flags = Vec::new();
            if counts[s_len - 1][j] < RESOLUTION_COUNT {
                flags.push(TailFlag::LowCount);
            }
            let pts: Vec<(f64, f64)> = (0..s_len)
                .filter(|&i| counts[i][j] > 0)
                .map(|i| (snr_grid[i].ln(), counts[i][j] as f64 / trials as f64))
                .collect();
            let (exponent, stderr) = if pts.len() < need {
                flags.insert(0, TailFlag::BelowResolution);
                (None, None)
            } else {
                let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
                let y: Vec<f64> = pts.iter().map(|p| -p.1.ln()).collect();
                let (slope, _, w) = ols(&x, &y);
                let var: f64 = w
                    .iter()
                    .zip(&pts)
                    .map(|(wi, &(_, p))| wi * wi * (1.0 - p) / (trials as f64 * p))
                    .sum();
                (Some(slope), Some(var.sqrt()))
            };
            Ok(ThresholdFit {
                threshold: t,
                exponent,
                stderr,
                analytic: exporders::analytic_tail_exponent(&law, t)?,
                piecewise: exporders::piecewise_tail_exponent(&law, t)?,
                flags,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailEstimate {
        law,
        thresholds: thresholds.to_vec(),
        snr_grid: snr_grid.to_vec(),
        trials,
        counts,
        fits,
    })
}

/// Lower-tail check of `Σ_m (1 − α_m)⁺` for `p × q` Gaussian matrices.
pub fn wishart_tail_run(
    p: usize,
    q: usize,
    r_grid: &[f64],
    snr_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<TailEstimate> {
    if let Some(r) = r_grid.iter().find(|&&r| !(r > 0.0 && r < p as f64)) {
        return Err(Error::config(
            "thresholds",
            format!("Wishart thresholds must lie in (0, {p}), got {r}"),
        ));
    }
    tail_sweep(
        AnalyticLaw::Wishart { p, q },
        r_grid,
        snr_grid,
        trials,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 3] = [100.0, 1000.0, 10000.0];

    #[test]
    fn negative_threshold_is_certain() {
        let est = tail_sweep(AnalyticLaw::BetaAlpha, &[-0.5], &GRID, 2000, 1).unwrap();
        assert!(est.counts.iter().all(|c| c[0] == 2000));
        assert_eq!(est.fits[0].exponent, Some(0.0));
        assert_eq!(est.fits[0].analytic, 0.0);
    }

    #[test]
    fn outside_support_is_flagged() {
        let est = tail_sweep(AnalyticLaw::ZSiso { k: 3 }, &[1.2], &GRID, 2000, 1).unwrap();
        assert!(est.counts.iter().all(|c| c[0] == 0));
        assert_eq!(est.fits[0].exponent, None);
        assert_eq!(
            est.fits[0].flags,
            vec![TailFlag::BelowResolution, TailFlag::LowCount]
        );
    }

    #[test]
    fn exceedance_is_monotone_in_threshold() {
        let est = tail_sweep(
            AnalyticLaw::XSiso { k: 2 },
            &[0.0, 0.2, 0.5, 1.0],
            &GRID,
            3000,
            4,
        )
        .unwrap();
        for row in &est.counts {
            assert!(row.windows(2).all(|w| w[1] <= w[0]), "{row:?}");
        }
    }

    #[test]
    fn preconditions() {
        assert!(tail_sweep(AnalyticLaw::BetaAlpha, &[0.3], &GRID, 999, 1).is_err());
        assert!(tail_sweep(AnalyticLaw::BetaAlpha, &[0.3], &[100.0], 1000, 1).is_err());
        assert!(tail_sweep(AnalyticLaw::BetaAlpha, &[], &GRID, 1000, 1).is_err());
        assert!(wishart_tail_run(2, 2, &[2.0], &GRID, 1000, 1).is_err());
        assert!(wishart_tail_run(3, 2, &[1.0], &GRID, 1000, 1).is_err());
    }

    #[test]
    fn wishart_exponent_vanishes_near_full_range() {
        let est = wishart_tail_run(1, 1, &[0.5, 0.9, 0.999], &GRID, 4000, 3).unwrap();
        assert!(
            est.fits[2].exponent.unwrap().abs() < 0.05,
            "{:?}",
            est.fits[2]
        );
        for row in &est.counts {
            assert!(row.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}
