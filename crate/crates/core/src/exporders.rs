//! Exponential-order calculus.
//!
//! A positive quantity `v` measured at SNR `ρ` has exponential order
//! `−ln v / ln ρ`. Channel gains become orders `α_{u,v}`, interference is
//! summarised by `β_u(V) = min_{v≠u} min(α_{u,v}, 1)`, and the per-user
//! pre-log `Z_u(V)` and per-set pre-log `X_V = Σ Z_u(V)` follow. This module
//! also carries the analytic tail exponents of those statistics and the
//! network-scaling bounds built on them.
//!
//! Orders that enter `Z`/`X` are clamped at zero: a gain above unity has the
//! same order as a unit gain. At finite SNR this keeps `Z_u ∈ [0, 1]`
//! (`[0, N]` with `N` antennas) exactly as in the asymptotic analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::netmodel::{ActiveSet, ChannelRealization};
use crate::scalar::Real;

/// `−ln v / ln snr`; `+∞` for `v ≤ 0`.
pub fn exp_order<T: Real>(v: T, snr: T) -> Result<T> {
    if !(snr > T::one()) {
        return Err(Error::input(format!(
            "exponential orders need snr > 1, got {snr}"
        )));
    }
    if !(v > T::zero()) {
        return Ok(T::infinity());
    }
    Ok(-v.ln() / snr.ln())
}

/// Order clamped at zero, the form used inside `Z` and `X`.
pub fn clamped_order<T: Real>(v: T, snr: T) -> Result<T> {
    Ok(exp_order(v, snr)?.max(T::zero()))
}

/// Square matrix of scalar orders `α_{u,v}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderMatrix<T> {
    size: usize,
    data: Vec<T>,
}

impl<T: Real> OrderMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::input("order matrix must be square"));
        }
        Ok(Self {
            size,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Clamped orders of `|H_{u,v}|²` (times `γ_{u,v}` when requested) for a
    /// single-antenna realization.
    pub fn from_channel(
        ch: &ChannelRealization<T>,
        snr: T,
        include_pathloss: bool,
    ) -> Result<Self> {
        if ch.antennas() != 1 {
            return Err(Error::input(
                "scalar orders need a single-antenna realization",
            ));
        }
        let n = ch.users();
        let mut data = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                let mut g = ch.gain(u, v, 0, 0).norm_sqr();
                if include_pathloss {
                    g *= ch.pathloss(u, v);
                }
                data.push(clamped_order(g, snr)?);
            }
        }
        Ok(Self { size: n, data })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, u: usize, v: usize) -> T {
        self.data[u * self.size + v]
    }
}

/// `β_u(V) = min_{v∈V, v≠u} min(α_{u,v}, 1)`; `1` when `u` has no interferers.
pub fn beta_set<T: Real>(u: usize, set: &ActiveSet, alpha: &OrderMatrix<T>) -> Result<T> {
    if !set.contains(u) {
        return Err(Error::input(format!(
            "user {u} is not in the active set {set}"
        )));
    }
    if set.members().iter().any(|&m| m >= alpha.size()) {
        return Err(Error::input("active set exceeds the order matrix"));
    }
    Ok(set
        .interferers(u)
        .map(|v| alpha.get(u, v).min(T::one()))
        .fold(T::one(), T::min))
}

/// `(β_u − α_uu)⁺`.
pub fn z_siso<T: Real>(alpha_uu: T, beta_u: T) -> T {
    (beta_u - alpha_uu).max(T::zero())
}

/// `X_V = Σ_u Z_u(V)`.
pub fn x_of_set<T: Real>(z: &[T]) -> T {
    z.iter().copied().sum()
}

/// Orders of the eigenvalues of `H_uu H_uuᴴ` (`direct`) and of `H̃_{u,V}H̃_{u,V}ᴴ`
/// (`interf`), both listed by ascending eigenvalue, i.e. descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenOrders<T> {
    pub direct: Vec<T>,
    pub interf: Vec<T>,
}

impl<T: Real> EigenOrders<T> {
    /// Clamped orders of the given ascending eigenvalues; non-positive
    /// eigenvalues get order `+∞`.
    pub fn from_eigenvalues(direct: &[T], interf: &[T], snr: T) -> Result<Self> {
        let conv = |ev: &[T]| {
            ev.iter()
                .map(|&l| clamped_order(l, snr))
                .collect::<Result<Vec<T>>>()
        };
        Ok(Self {
            direct: conv(direct)?,
            interf: conv(interf)?,
        })
    }
}

/// Eigen-orders for user `u` of `set`; the interference matrix uses the
/// largest interferer path loss for every block (with `include_pathloss`)
/// or none at all.
pub fn eigen_orders<T: Real>(
    u: usize,
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
    include_pathloss: bool,
) -> Result<EigenOrders<T>> {
    if !set.contains(u) {
        return Err(Error::input(format!(
            "user {u} is not in the active set {set}"
        )));
    }
    let n = ch.antennas();
    let mut direct = ch.block(u, u);
    if include_pathloss {
        direct = direct.scale(ch.pathloss(u, u).sqrt());
    }
    let gamma = if include_pathloss {
        set.interferers(u)
            .map(|v| ch.pathloss(u, v))
            .fold(T::zero(), T::max)
    } else {
        T::one()
    };
    let blocks: Vec<CMatrix<T>> = set
        .interferers(u)
        .map(|v| ch.block(u, v).scale(gamma.sqrt()))
        .collect();
    let interf = CMatrix::hstack(n, &blocks);
    let mu = linalg::hermitian_eigenvalues(&direct.gram())?;
    let lambda = linalg::hermitian_eigenvalues(&interf.gram())?;
    EigenOrders::from_eigenvalues(&mu, &lambda, snr)
}

/// `[Σ_m (1 − α_m) − Σ_m (1 − β_m)⁺]⁺` over the `N` eigen-orders.
pub fn z_mimo<T: Real>(e: &EigenOrders<T>, antennas: usize) -> Result<T> {
    if e.direct.len() != antennas || e.interf.len() != antennas {
        return Err(Error::input(format!(
            "eigen-order lists have lengths {} and {}, expected {antennas}",
            e.direct.len(),
            e.interf.len()
        )));
    }
    let gain: T = e.direct.iter().map(|&a| T::one() - a).sum();
    let loss: T = e
        .interf
        .iter()
        .map(|&b| (T::one() - b).max(T::zero()))
        .sum();
    Ok((gain - loss).max(T::zero()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrderDetail<T> {
    Siso { alpha: OrderMatrix<T>, beta: Vec<T> },
    Mimo { eigen: Vec<EigenOrders<T>> },
}

/// Orders and derived `Z`, `X` for one active set at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSample<T> {
    pub set: ActiveSet,
    pub snr: T,
    pub detail: OrderDetail<T>,
    /// `Z_u(V)` in member order.
    pub z: Vec<T>,
    pub x: T,
}

/// Builds the order sample of `set` from a realization. Single-antenna
/// realizations use scalar orders, multi-antenna ones eigen-orders.
pub fn order_sample<T: Real>(
    ch: &ChannelRealization<T>,
    set: &ActiveSet,
    snr: T,
    include_pathloss: bool,
) -> Result<OrderSample<T>> {
    if set.members().iter().any(|&m| m >= ch.users()) {
        return Err(Error::input(format!(
            "active set {set} exceeds the {}-user realization",
            ch.users()
        )));
    }
    let local = ch.restrict(set);
    let local_set = ActiveSet::from_sorted_unchecked((0..set.len()).collect());
    let (detail, z) = if ch.antennas() == 1 {
        let alpha = OrderMatrix::from_channel(&local, snr, include_pathloss)?;
        let beta = (0..set.len())
            .map(|u| beta_set(u, &local_set, &alpha))
            .collect::<Result<Vec<_>>>()?;
        let z = (0..set.len())
            .map(|u| z_siso(alpha.get(u, u), beta[u]))
            .collect();
        (OrderDetail::Siso { alpha, beta }, z)
    } else {
        let eigen = (0..set.len())
            .map(|u| eigen_orders(u, &local_set, &local, snr, include_pathloss))
            .collect::<Result<Vec<_>>>()?;
        let z = eigen
            .iter()
            .map(|e| z_mimo(e, ch.antennas()))
            .collect::<Result<Vec<_>>>()?;
        (OrderDetail::Mimo { eigen }, z)
    };
    let x = x_of_set(&z);
    Ok(OrderSample {
        set: set.clone(),
        snr,
        detail,
        z,
        x,
    })
}

/// Statistic whose tail law is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum AnalyticLaw {
    /// Per-user `Z_u(V)`, single antenna.
    ZSiso { k: usize },
    /// `X_V`, single antenna.
    XSiso { k: usize },
    /// `(β_{u,v} − α_{u,u})⁺` for one interferer.
    BetaAlpha,
    /// Per-user `Z_u(V)` with `n` antennas.
    ZMimo { k: usize, n: usize },
    /// `X_V` with `n` antennas.
    XMimo { k: usize, n: usize },
    /// `Σ_m (1 − α_m)⁺` for the eigen-orders of `AAᴴ`, `A` a `p × q` CN(0,1) matrix.
    Wishart { p: usize, q: usize },
}

/// Which tail the law's probability refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailEvent {
    /// `P(stat > t)`
    Above,
    /// `P(stat < t)`
    Below,
}

impl AnalyticLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AnalyticLaw::ZSiso { k } | AnalyticLaw::XSiso { k } if k == 0 => {
                Err(Error::config("k", "must be positive"))
            }
            AnalyticLaw::ZMimo { k, n } | AnalyticLaw::XMimo { k, n } if k < 2 || n == 0 => {
                Err(Error::config(
                    "k",
                    format!("multi-antenna laws need K ≥ 2 and N ≥ 1, got K = {k}, N = {n}"),
                ))
            }
            AnalyticLaw::Wishart { p, q } if p == 0 || p > q => Err(Error::config(
                "p",
                format!("Wishart law needs 1 ≤ p ≤ q, got p = {p}, q = {q}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AnalyticLaw::ZSiso { .. } => "z_siso",
            AnalyticLaw::XSiso { .. } => "x_siso",
            AnalyticLaw::BetaAlpha => "beta_alpha",
            AnalyticLaw::ZMimo { .. } => "z_mimo",
            AnalyticLaw::XMimo { .. } => "x_mimo",
            AnalyticLaw::Wishart { .. } => "wishart",
        }
    }

    pub fn event(&self) -> TailEvent {
        match self {
            AnalyticLaw::Wishart { .. } => TailEvent::Below,
            _ => TailEvent::Above,
        }
    }

    /// Closed support `[0, upper]` of the statistic.
    pub fn support_upper(&self) -> f64 {
        match *self {
            AnalyticLaw::ZSiso { .. } | AnalyticLaw::BetaAlpha => 1.0,
            AnalyticLaw::XSiso { k } => k as f64,
            AnalyticLaw::ZMimo { n, .. } => n as f64,
            AnalyticLaw::XMimo { k, n } => (k * n) as f64,
            AnalyticLaw::Wishart { p, .. } => p as f64,
        }
    }
}

/// Exponent `b` with `P(event) ≐ snr^{−b}` in its closed form.
///
/// | law        | exponent on the support |
/// |------------|-------------------------|
/// | Z_siso     | `(K−1)z`, `z ∈ [0,1]`   |
/// | X_siso     | `(K−1)x`, `x ∈ [0,K]`   |
/// | beta_alpha | `w`, `w ∈ [0,1]`        |
/// | Z_mimo     | `z(z+(K−2)N)`, `z ∈ [0,N]` |
/// | X_mimo     | `x(x+(K−2)N)`, `x ∈ [0,NK]` |
/// | wishart    | `(q−r)(p−r)`, `r ∈ [0,p]` |
///
/// Upper-tail laws give `0` below the support and `+∞` above it. The Wishart
/// law is a lower-tail event, so it is mirrored: `+∞` below, `0` above.
pub fn analytic_tail_exponent<T: Real>(law: &AnalyticLaw, point: T) -> Result<T> {
    law.validate()?;
    let upper = T::of(law.support_upper());
    let zero = T::zero();
    if law.event() == TailEvent::Below {
        if point < zero {
            return Ok(T::infinity());
        }
        if point > upper {
            return Ok(zero);
        }
    } else {
        if point < zero {
            return Ok(zero);
        }
        if point > upper {
            return Ok(T::infinity());
        }
    }
    let f = |v: usize| T::of(v as f64);
    Ok(match *law {
        AnalyticLaw::ZSiso { k } | AnalyticLaw::XSiso { k } => f(k - 1) * point,
        AnalyticLaw::BetaAlpha => point,
        AnalyticLaw::ZMimo { k, n } | AnalyticLaw::XMimo { k, n } => {
            point * (point + (f(k) - f(2)) * f(n))
        }
        AnalyticLaw::Wishart { p, q } => (f(q) - point) * (f(p) - point),
    })
}

/// Diversity-multiplexing style exponent of `P[Σ(1−α_m)⁺ < r]` for a `p × q`
/// Gaussian matrix: `(p−r)(q−r)` at integer `r`, linear in between.
pub fn interpolated_wishart_exponent<T: Real>(p: usize, q: usize, r: T) -> T {
    let pf = T::of(p as f64);
    if r <= T::zero() {
        return T::of((p * q) as f64);
    }
    if r >= pf {
        return T::zero();
    }
    let k = r.floor();
    let node = |k: T| (pf - k) * (T::of(q as f64) - k);
    let frac = r - k;
    node(k) * (T::one() - frac) + node(k + T::one()) * frac
}

/// Same as [`analytic_tail_exponent`] except for the multi-antenna and
/// Wishart laws, where the quadratic exponent is replaced by the piecewise
/// linear interpolation between its integer points. The two agree at integer
/// points; between them only the interpolated form matches simulation.
pub fn piecewise_tail_exponent<T: Real>(law: &AnalyticLaw, point: T) -> Result<T> {
    let closed = analytic_tail_exponent(law, point)?;
    let upper = T::of(law.support_upper());
    if point < T::zero() || point > upper {
        return Ok(closed);
    }
    Ok(match *law {
        AnalyticLaw::Wishart { p, q } => interpolated_wishart_exponent(p, q, point),
        AnalyticLaw::ZMimo { k, n } => {
            interpolated_wishart_exponent(n, (k - 1) * n, T::of(n as f64) - point)
        }
        AnalyticLaw::XMimo { k, n } => {
            let kf = T::of(k as f64);
            kf * interpolated_wishart_exponent(n, (k - 1) * n, T::of(n as f64) - point / kf)
        }
        _ => closed,
    })
}

/// Degrees-of-freedom bounds as functions of the scaling exponent `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremBounds {
    pub xi: f64,
    pub k: usize,
    pub antennas: usize,
    /// `min(K, ξ/(K−1))`, `K` when `K = 1`.
    pub lb_siso: f64,
    /// `K·min(1, 2ξ)`.
    pub ub_siso: f64,
    /// `(√((K−2)²N² + 4ξ) − (K−2)N) / 2`.
    pub zeta: f64,
    /// `min(NK, max(ξ/(NK−1), ζ))`.
    pub lb_mimo: f64,
}

pub fn theorem_bounds(xi: f64, k: usize, antennas: usize) -> Result<TheoremBounds> {
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(Error::config(
            "xi",
            format!("must be a finite non-negative number, got {xi}"),
        ));
    }
    if k == 0 {
        return Err(Error::config("k", "must be positive"));
    }
    if antennas == 0 {
        return Err(Error::config("antennas", "must be positive"));
    }
    let kf = k as f64;
    let nf = antennas as f64;
    let lb_siso = if k == 1 { kf } else { kf.min(xi / (kf - 1.0)) };
    let ub_siso = kf * (2.0 * xi).min(1.0);
    let c = (kf - 2.0) * nf;
    let zeta = ((c * c + 4.0 * xi).sqrt() - c) / 2.0;
    let nk = nf * kf;
    let pairing = if k * antennas == 1 {
        f64::INFINITY
    } else {
        xi / (nk - 1.0)
    };
    let lb_mimo = nk.min(pairing.max(zeta));
    Ok(TheoremBounds {
        xi,
        k,
        antennas,
        lb_siso,
        ub_siso,
        zeta,
        lb_mimo,
    })
}

/// Network-scaling conditions for reaching `d` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingConditions {
    pub k: usize,
    pub antennas: usize,
}

impl ScalingConditions {
    /// Sufficient single-antenna condition `ξ ≥ d(K−1)`.
    pub fn xi_sufficient(&self, d: f64) -> f64 {
        d * (self.k as f64 - 1.0)
    }

    /// Necessary single-antenna condition `ξ ≥ d/(2K)`.
    pub fn xi_necessary(&self, d: f64) -> f64 {
        d / (2.0 * self.k as f64)
    }

    /// Sufficient multi-antenna condition.
    pub fn xi_sufficient_mimo(&self, d: f64) -> f64 {
        let n = self.antennas as f64;
        let k = self.k as f64;
        if d <= 2.0 * n - 1.0 {
            d * d + d * (k - 2.0) * n
        } else {
            d * (n * k - 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_order_examples() {
        assert!((exp_order(0.01f64, 100.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(exp_order(1.0, 37.0).unwrap(), 0.0);
        assert!((exp_order(10.0f64, 100.0).unwrap() + 0.5).abs() < 1e-15);
        assert_eq!(exp_order(0.0, 100.0).unwrap(), f64::INFINITY);
        assert!(exp_order(0.5, 1.0).is_err());
        assert_eq!(clamped_order(10.0, 100.0).unwrap(), 0.0);
    }

    #[test]
    fn beta_examples() {
        let alpha =
            OrderMatrix::from_rows(vec![vec![0.3, 0.5, 1.3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        let set = ActiveSet::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(beta_set(0, &set, &alpha).unwrap(), 0.5);
        let high =
            OrderMatrix::from_rows(vec![vec![0.3, 1.5, 1.3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert_eq!(beta_set(0, &set, &high).unwrap(), 1.0);
        let alone = ActiveSet::new(vec![0], 3).unwrap();
        assert_eq!(beta_set(0, &alone, &alpha).unwrap(), 1.0);
        assert!(beta_set(1, &alone, &alpha).is_err());
    }

    #[test]
    fn z_and_x_examples() {
        assert!((z_siso(0.2, 0.5) - 0.3f64).abs() < 1e-15);
        assert_eq!(z_siso(0.5, 0.2), 0.0);
        assert_eq!(z_siso(0.0, 1.0), 1.0);
        assert!((x_of_set(&[0.3, 0.5, 0.2]) - 1.0f64).abs() < 1e-15);
        assert_eq!(x_of_set(&[0.0f64; 3]), 0.0);
        assert_eq!(x_of_set(&[1.0f64; 3]), 3.0);
    }

    #[test]
    fn z_mimo_examples() {
        let e = EigenOrders {
            direct: vec![0.2],
            interf: vec![0.5],
        };
        assert!((z_mimo(&e, 1).unwrap() - 0.3f64).abs() < 1e-15);
        assert!((z_mimo(&e, 1).unwrap() - z_siso(0.2, 0.5)).abs() < 1e-15);
        let free = EigenOrders {
            direct: vec![0.0; 3],
            interf: vec![1.0, 2.0, f64::INFINITY],
        };
        assert_eq!(z_mimo(&free, 3).unwrap(), 3.0);
        assert!(z_mimo(&free, 2).is_err());
    }

    #[test]
    fn analytic_examples() {
        let e = |law, p: f64| analytic_tail_exponent(&law, p).unwrap();
        assert!((e(AnalyticLaw::ZSiso { k: 3 }, 0.5) - 1.0).abs() < 1e-15);
        assert!((e(AnalyticLaw::ZMimo { k: 3, n: 2 }, 1.0) - 3.0).abs() < 1e-15);
        assert!((e(AnalyticLaw::Wishart { p: 2, q: 2 }, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(e(AnalyticLaw::BetaAlpha, -0.5), 0.0);
        assert_eq!(e(AnalyticLaw::BetaAlpha, 1.5), f64::INFINITY);
        assert_eq!(e(AnalyticLaw::ZSiso { k: 3 }, 1.2), f64::INFINITY);
        assert_eq!(e(AnalyticLaw::Wishart { p: 2, q: 3 }, 2.5), 0.0);
        assert_eq!(e(AnalyticLaw::Wishart { p: 2, q: 3 }, -0.1), f64::INFINITY);
        assert!(analytic_tail_exponent(&AnalyticLaw::ZMimo { k: 1, n: 2 }, 0.5).is_err());
        assert!(analytic_tail_exponent(&AnalyticLaw::Wishart { p: 3, q: 2 }, 0.5).is_err());
    }

    #[test]
    fn interpolated_exponents() {
        let w = |p, q, r: f64| interpolated_wishart_exponent(p, q, r);
        assert_eq!(w(1, 1, 0.5), 0.5);
        assert_eq!(w(2, 2, 1.0), 1.0);
        assert_eq!(w(2, 2, 1.5), 0.5);
        assert_eq!(w(2, 2, 0.0), 4.0);
        // single antenna reduces to (K−1)z
        let z = piecewise_tail_exponent(&AnalyticLaw::ZMimo { k: 3, n: 1 }, 0.5).unwrap();
        assert!((z - 1.0f64).abs() < 1e-15);
        let z = piecewise_tail_exponent(&AnalyticLaw::ZMimo { k: 2, n: 2 }, 0.5).unwrap();
        assert!((z - 0.5f64).abs() < 1e-15);
        // integer points agree with the closed-form law
        for law in [
            AnalyticLaw::ZMimo { k: 3, n: 2 },
            AnalyticLaw::Wishart { p: 2, q: 4 },
        ] {
            for pt in [0.0, 1.0, 2.0] {
                let a: f64 = analytic_tail_exponent(&law, pt).unwrap();
                let b = piecewise_tail_exponent(&law, pt).unwrap();
                assert!((a - b).abs() < 1e-12, "{law:?} {pt}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn bounds_examples() {
        let b = theorem_bounds(2.0, 3, 1).unwrap();
        assert_eq!((b.lb_siso, b.ub_siso), (1.0, 3.0));
        let b = theorem_bounds(0.0, 3, 1).unwrap();
        assert_eq!((b.lb_siso, b.ub_siso), (0.0, 0.0));
        let b = theorem_bounds(1.0, 2, 2).unwrap();
        assert_eq!(b.zeta, 1.0);
        assert_eq!(b.lb_mimo, 1.0);
        let single = theorem_bounds(0.7, 1, 1).unwrap();
        assert_eq!(single.lb_siso, 1.0);
        assert!(theorem_bounds(-1.0, 2, 1).is_err());
    }

    #[test]
    fn scaling_conditions() {
        let c = ScalingConditions { k: 3, antennas: 2 };
        assert_eq!(c.xi_sufficient(1.5), 3.0);
        assert_eq!(c.xi_necessary(3.0), 0.5);
        assert_eq!(c.xi_sufficient_mimo(1.0), 1.0 + 2.0);
        assert_eq!(c.xi_sufficient_mimo(4.0), 4.0 * 5.0);
        // continuous at d = 2N − 1
        let d = 3.0;
        assert!((d * d + d * 2.0 - d * 5.0f64).abs() < 1e-12);
    }
}
