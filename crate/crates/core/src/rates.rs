//! Single-user-decoding rates: every receiver treats the other active
//! transmitters as Gaussian noise. Rates are in bits per channel use.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::netmodel::{ActiveSet, ChannelRealization};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RateMode {
    #[default]
    Siso,
    Mimo,
    MimoLb,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport<T> {
    /// `(user, rate)` in active-set order.
    pub per_user: Vec<(usize, T)>,
    pub sum: T,
    pub snr: T,
}

fn check_common<T: Real>(
    u: usize,
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
) -> Result<()> {
    if !set.contains(u) {
        return Err(Error::input(format!(
            "user {u} is not in the active set {set}"
        )));
    }
    if !(snr > T::zero()) || !snr.is_finite() {
        return Err(Error::input(format!(
            "snr must be positive and finite, got {snr}"
        )));
    }
    if let Some(&bad) = set.members().iter().find(|&&m| m >= ch.users()) {
        return Err(Error::input(format!(
            "user {bad} is out of range for a {}-user realization",
            ch.users()
        )));
    }
    Ok(())
}

/// `γ_uu|H_uu|² / (Σ_{v≠u} γ_uv|H_uv|² + 1/snr)` for a single-antenna network.
pub fn sinr_siso<T: Real>(
    u: usize,
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
) -> Result<T> {
    check_common(u, set, ch, snr)?;
    if ch.antennas() != 1 {
        return Err(Error::input(format!(
            "SISO SINR needs N = 1, realization has N = {}",
            ch.antennas()
        )));
    }
    let power = |v: usize| ch.pathloss(u, v) * ch.gain(u, v, 0, 0).norm_sqr();
    let interference: T = set.interferers(u).map(power).sum();
    Ok(power(u) / (interference + snr.recip()))
}

/// `log₂(1 + SINR)`.
pub fn rate_sd_siso<T: Real>(
    u: usize,
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
) -> Result<T> {
    Ok(sinr_siso(u, set, ch, snr)?.ln_1p() / T::LN_2())
}

/// `[√γ_{u,v} H_{u,v}]` over the interferers of `u`, `N × (K−1)N`. With
/// `common_gamma` every block is scaled by that value instead.
fn interference_matrix<T: Real>(
    u: usize,
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    common_gamma: Option<T>,
) -> CMatrix<T> {
    let blocks: Vec<CMatrix<T>> = set
        .interferers(u)
        .map(|v| {
            ch.block(u, v)
                .scale(common_gamma.unwrap_or_else(|| ch.pathloss(u, v)).sqrt())
        })
        .collect();
    CMatrix::hstack(ch.antennas(), &blocks)
}

/// `log₂ det[I + snr·γ_uu H_uuᴴ (I + snr·H_{u,V}H_{u,V}ᴴ)⁻¹ H_uu]`.
///
/// `B = I + snr·H_{u,V}H_{u,V}ᴴ` is factored as `L Lᴴ`; with `Y = L⁻¹ H_uu`
/// the argument becomes `I + snr·γ_uu YᴴY`, whose log-determinant is taken by
/// [`linalg::logdet_identity_plus`] to keep small rates accurate.
pub fn rate_sd_mimo<T: Real>(
    u: usize,
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
) -> Result<T> {
    check_common(u, set, ch, snr)?;
    let h_uu = ch.block(u, u);
    if !h_uu.all_finite() {
        return Err(Error::numeric("direct channel has non-finite entries"));
    }
    let h_int = interference_matrix(u, set, ch, None);
    if !h_int.all_finite() {
        return Err(Error::numeric(
            "interference channels have non-finite entries",
        ));
    }
    let b = h_int.gram().shifted_identity_plus(snr);
    let l = linalg::cholesky(&b)?;
    let y = linalg::solve_lower(&l, &h_uu);
    let m = (&y.adjoint() * &y).scale(snr * ch.pathloss(u, u));
    Ok(linalg::logdet_identity_plus(&m)? / T::LN_2())
}

/// `log₂(1 + det[snr·γ_uu H_uu H_uuᴴ] / det[I + snr·H̃H̃ᴴ])` where every
/// interferer block of `H̃` is scaled by the largest interferer path loss.
/// Never exceeds [`rate_sd_mimo`].
pub fn rate_sd_mimo_lb<T: Real>(
    u: usize,
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
) -> Result<T> {
    check_common(u, set, ch, snr)?;
    let n = T::of(ch.antennas() as f64);
    let h_uu = ch.block(u, u);
    let gamma_max = set
        .interferers(u)
        .map(|v| ch.pathloss(u, v))
        .fold(T::zero(), T::max);
    let h_tilde = interference_matrix(u, set, ch, Some(gamma_max));
    if !h_tilde.all_finite() {
        return Err(Error::numeric(
            "interference channels have non-finite entries",
        ));
    }
    let log_den = linalg::logdet_identity_plus(&h_tilde.gram().scale(snr))?;
    let log_abs = linalg::log_abs_det(&h_uu)?;
    if log_abs == T::neg_infinity() {
        return Ok(T::zero());
    }
    // det[snr γ H Hᴴ] = (snr γ)^N |det H|²
    let log_num = n * (snr * ch.pathloss(u, u)).ln() + log_abs * T::of(2.0);
    Ok(log1p_exp(log_num - log_den) / T::LN_2())
}

/// `ln(1 + eˣ)` without overflow.
fn log1p_exp<T: Real>(x: T) -> T {
    if x > T::of(30.0) {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Per-user rates for every member of `set` and their total.
pub fn sum_rate<T: Real>(
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
    mode: RateMode,
) -> Result<RateReport<T>> {
    if mode == RateMode::Siso && ch.antennas() != 1 {
        return Err(Error::input("siso mode needs a single-antenna realization"));
    }
    let rate = match mode {
        RateMode::Siso => rate_sd_siso::<T>,
        RateMode::Mimo => rate_sd_mimo::<T>,
        RateMode::MimoLb => rate_sd_mimo_lb::<T>,
    };
    let per_user = set
        .members()
        .iter()
        .map(|&u| rate(u, set, ch, snr).map(|r| (u, r)))
        .collect::<Result<Vec<_>>>()?;
    let sum = per_user.iter().map(|&(_, r)| r).sum();
    Ok(RateReport { per_user, sum, snr })
}
