use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Domain};

/// Mixing law of the latent variable that makes the sequence exchangeable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Latent {
    /// No latent randomness: `Xᵢ` i.i.d. N(0,1).
    #[default]
    Degenerate,
    /// `Y ~ N(0, sd²)`, then `Xᵢ | Y` i.i.d. N(Y, 1).
    SharedGaussianMean { sd: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExchangeabilityPoint {
    pub x: f64,
    /// `P̂(max ≤ x)`.
    pub lhs: f64,
    /// `P̂(X ≤ x)ⁿ` from the pooled marginal.
    pub rhs: f64,
    pub stderr: f64,
    /// `lhs − rhs`.
    pub margin: f64,
    /// `margin ≥ −3·stderr`.
    pub holds: bool,
}

/// Compares `P(max_i Xᵢ ≤ x)` with `P(X ≤ x)ⁿ` for an exchangeable sequence;
/// the former dominates for every conditionally i.i.d. family.
pub fn exchangeability_check(
    n: usize,
    x_grid: &[f64],
    trials: u64,
    seed: u64,
    latent: Latent,
) -> Result<Vec<ExchangeabilityPoint>> {
    if n == 0 {
        return Err(Error::config("n", "need at least one variable"));
    }
    if trials < 2 {
        return Err(Error::config("trials", "need at least two trials"));
    }
    if let Latent::SharedGaussianMean { sd } = latent {
        if !(sd >= 0.0 && sd.is_finite()) {
            return Err(Error::config(
                "latent",
                format!("sd must be finite and non-negative, got {sd}"),
            ));
        }
    }
    let g = x_grid.len();
    // [max ≤ x counts | marginal ≤ x counts]
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; 2 * g],
            |mut acc, t| {
                let mut rng = rng::stream(seed, Domain::Exchangeable, 0, t);
                let mean = match latent {
                    Latent::Degenerate => 0.0,
                    Latent::SharedGaussianMean { sd } => sd * rng.sample::<f64, _>(StandardNormal),
                };
                let mut max = f64::NEG_INFINITY;
                for _ in 0..n {
                    let x = mean + rng.sample::<f64, _>(StandardNormal);
                    max = max.max(x);
                    for (j, &xj) in x_grid.iter().enumerate() {
                        if x <= xj {
                            acc[g + j] += 1;
                        }
                    }
                }
                for (j, &xj) in x_grid.iter().enumerate() {
                    if max <= xj {
                        acc[j] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; 2 * g],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let tf = trials as f64;
    Ok(x_grid
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let lhs = counts[j] as f64 / tf;
            let q = counts[g + j] as f64 / (tf * n as f64);
            let rhs = q.powi(n as i32);
            let se_lhs = (lhs * (1.0 - lhs) / tf).sqrt();
            let se_rhs = n as f64 * q.powi(n as i32 - 1) * (q * (1.0 - q) / tf).sqrt();
            let stderr = se_lhs.hypot(se_rhs);
            let margin = lhs - rhs;
            ExchangeabilityPoint {
                x,
                lhs,
                rhs,
                stderr,
                margin,
                holds: margin >= -3.0 * stderr,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_sides_are_equal() {
        let pts = exchangeability_check(
            1,
            &[-1.0, 0.0, 1.0],
            5000,
            2,
            Latent::SharedGaussianMean { sd: 1.0 },
        )
        .unwrap();
        assert!(pts.iter().all(|p| p.lhs == p.rhs));
    }

    #[test]
    fn shared_mean_separates_the_sides() {
        let pts = exchangeability_check(
            10,
            &[1.5],
            20_000,
            2,
            Latent::SharedGaussianMean { sd: 1.0 },
        )
        .unwrap();
        assert!(pts[0].margin > 3.0 * pts[0].stderr, "{:?}", pts[0]);
    }

    #[test]
    fn bad_latent() {
        assert!(
            exchangeability_check(3, &[0.0], 100, 0, Latent::SharedGaussianMean { sd: -1.0 })
                .is_err()
        );
    }
}
