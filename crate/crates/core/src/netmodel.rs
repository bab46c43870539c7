//! Network configurations and i.i.d. Rayleigh block-fading realizations.
//!
//! A realization holds every ordered transmitter/receiver pair of the
//! network: `gain(u, v, b, a)` is the coefficient from transmit antenna `a`
//! of user `v` to receive antenna `b` of user `u`. User indices are 0-based.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rng::{self, Domain};
use crate::scalar::Real;

/// Deterministic attenuation model for the `γ_{u,v}` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum PathLoss {
    /// `γ_{u,v} = 1` for every pair.
    #[default]
    Unit,
    /// i.i.d. `γ_{u,v}` with `ln γ` uniform on `[ln min, ln max]`, drawn once per
    /// network seed.
    LogUniform { min: f64, max: f64 },
}

impl PathLoss {
    fn validate(&self) -> Result<()> {
        match *self {
            PathLoss::Unit => Ok(()),
            PathLoss::LogUniform { min, max } => {
                if !(min > 0.0 && min.is_finite() && max.is_finite()) {
                    Err(Error::config(
                        "pathloss",
                        format!(
                            "log-uniform bounds must be positive and finite, got [{min}, {max}]"
                        ),
                    ))
                } else if max < min {
                    Err(Error::config(
                        "pathloss",
                        format!("log-uniform max {max} is below min {min}"),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Number of transmitter/receiver pairs `n`.
    pub users: usize,
    /// Active-set size `K`.
    pub active: usize,
    /// Antennas per node `N`.
    pub antennas: usize,
    #[serde(default)]
    pub pathloss: PathLoss,
    pub seed: u64,
}

impl NetworkConfig {
    pub fn new(users: usize, active: usize, antennas: usize, seed: u64) -> Self {
        Self {
            users,
            active,
            antennas,
            pathloss: PathLoss::Unit,
            seed,
        }
    }

    pub fn with_pathloss(mut self, pathloss: PathLoss) -> Self {
        self.pathloss = pathloss;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(Error::config("n", "need at least one user pair"));
        }
        if self.active == 0 {
            return Err(Error::config("k", "active-set size must be positive"));
        }
        if self.active > self.users {
            return Err(Error::config(
                "k",
                format!("active-set size {} exceeds n = {}", self.active, self.users),
            ));
        }
        if self.antennas == 0 {
            return Err(Error::config(
                "antennas",
                "need at least one antenna per node",
            ));
        }
        self.pathloss.validate()
    }

    /// The `n × n` path-loss matrix, row-major in `(u, v)`.
    pub fn pathloss_matrix<T: Real>(&self) -> Vec<T> {
        let n = self.users;
        match self.pathloss {
            PathLoss::Unit => vec![T::one(); n * n],
            PathLoss::LogUniform { min, max } => {
                let mut rng = rng::stream(self.seed, Domain::PathLoss, 0, 0);
                let (lo, hi) = (min.ln(), max.ln());
                (0..n * n)
                    .map(|_| {
                        let u: f64 = rng.random();
                        T::of((lo + (hi - lo) * u).exp())
                    })
                    .collect()
            }
        }
    }
}

/// Gains for all ordered pairs plus the path-loss matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    users: usize,
    antennas: usize,
    gains: Vec<Complex<T>>,
    pathloss: Vec<T>,
}

impl<T: Real> ChannelRealization<T> {
    /// Assembles a realization from raw parts, checking shape, finiteness and
    /// positivity of the path losses.
    pub fn from_parts(
        users: usize,
        antennas: usize,
        gains: Vec<Complex<T>>,
        pathloss: Vec<T>,
    ) -> Result<Self> {
        if users == 0 || antennas == 0 {
            return Err(Error::input(
                "realization needs at least one user and one antenna",
            ));
        }
        let expected = users * users * antennas * antennas;
        if gains.len() != expected {
            return Err(Error::input(format!(
                "gain tensor has {} entries, expected {expected}",
                gains.len()
            )));
        }
        if pathloss.len() != users * users {
            return Err(Error::input(format!(
                "path-loss matrix has {} entries, expected {}",
                pathloss.len(),
                users * users
            )));
        }
        if gains
            .iter()
            .any(|g| !(g.re.is_finite() && g.im.is_finite()))
        {
            return Err(Error::numeric("gain tensor has non-finite entries"));
        }
        if pathloss.iter().any(|&g| !(g > T::zero() && g.is_finite())) {
            return Err(Error::input("path losses must be positive and finite"));
        }
        Ok(Self {
            users,
            antennas,
            gains,
            pathloss,
        })
    }

    /// Scalar (N = 1) realization from `|n|×|n|` gain and path-loss matrices.
    pub fn siso(gains: Vec<Complex<T>>, pathloss: Vec<T>) -> Result<Self> {
        let n = (gains.len() as f64).sqrt().round() as usize;
        Self::from_parts(n, 1, gains, pathloss)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    fn offset(&self, u: usize, v: usize) -> usize {
        let nn = self.antennas * self.antennas;
        (u * self.users + v) * nn
    }

    /// `H_{u,v}[rx, tx]`.
    pub fn gain(&self, u: usize, v: usize, rx: usize, tx: usize) -> Complex<T> {
        self.gains[self.offset(u, v) + rx * self.antennas + tx]
    }

    /// `γ_{u,v}`.
    pub fn pathloss(&self, u: usize, v: usize) -> T {
        self.pathloss[u * self.users + v]
    }

    /// The `N × N` block `H_{u,v}`.
    pub fn block(&self, u: usize, v: usize) -> CMatrix<T> {
        let nn = self.antennas * self.antennas;
        let start = self.offset(u, v);
        CMatrix::from_row_major(
            self.antennas,
            self.antennas,
            self.gains[start..start + nn].to_vec(),
        )
    }

    /// Flat view of the tensor in `(u, v, rx, tx)` order.
    pub fn gains(&self) -> &[Complex<T>] {
        &self.gains
    }

    pub fn pathloss_values(&self) -> &[T] {
        &self.pathloss
    }

    /// Restriction to the users of `set`, renumbered `0..K` in member order.
    pub fn restrict(&self, set: &ActiveSet) -> ChannelRealization<T> {
        let k = set.len();
        let nn = self.antennas * self.antennas;
        let mut gains = Vec::with_capacity(k * k * nn);
        let mut pathloss = Vec::with_capacity(k * k);
        for &u in set.members() {
            for &v in set.members() {
                let start = self.offset(u, v);
                gains.extend_from_slice(&self.gains[start..start + nn]);
                pathloss.push(self.pathloss(u, v));
            }
        }
        ChannelRealization {
            users: k,
            antennas: self.antennas,
            gains,
            pathloss,
        }
    }
}

/// Draws the realization for `trial_id`.
///
/// Entries are i.i.d. CN(0,1): real and imaginary parts independent N(0, 1/2).
/// The result depends only on `(config.seed, trial_id)`.
pub fn sample_network<T: Real>(
    config: &NetworkConfig,
    trial_id: u64,
) -> Result<ChannelRealization<T>> {
    config.validate()?;
    let n = config.users;
    let nn = config.antennas * config.antennas;
    let mut rng = rng::stream(config.seed, Domain::Fading, 0, trial_id);
    let gains = (0..n * n * nn)
        .map(|_| standard_complex_normal(&mut rng))
        .collect();
    Ok(ChannelRealization {
        users: n,
        antennas: config.antennas,
        gains,
        pathloss: config.pathloss_matrix(),
    })
}

/// One CN(0,1) draw.
pub fn standard_complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(
        T::of(re * std::f64::consts::FRAC_1_SQRT_2),
        T::of(im * std::f64::consts::FRAC_1_SQRT_2),
    )
}

/// Ordered list of distinct active users.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActiveSet(Vec<usize>);

impl ActiveSet {
    /// Checks distinctness and range against `n` users.
    pub fn new(members: Vec<usize>, n: usize) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::input("active set is empty"));
        }
        if let Some(&bad) = members.iter().find(|&&m| m >= n) {
            return Err(Error::input(format!(
                "user {bad} is out of range for n = {n}"
            )));
        }
        let mut sorted = members.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("active set has repeated users"));
        }
        Ok(Self(members))
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        Self(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.0.contains(&u)
    }

    /// Members other than `u`.
    pub fn interferers(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied().filter(move |&v| v != u)
    }

    /// Indices of the single-antenna users that the antenna-pairing transform
    /// derives from this set.
    pub fn paired(&self, antennas: usize) -> ActiveSet {
        ActiveSet(
            self.0
                .iter()
                .flat_map(|&v| (0..antennas).map(move |a| v * antennas + a))
                .collect(),
        )
    }
}

impl fmt::Display for ActiveSet {
    /// 1-based, e.g. `{1,2,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", m + 1)?;
        }
        write!(f, "}}")
    }
}

/// `⌊n/K⌋` disjoint consecutive groups `{K(i−1), …, Ki−1}`; the trailing
/// `n mod K` users are dropped.
pub fn active_set_partition(n: usize, k: usize) -> Result<Vec<ActiveSet>> {
    if k == 0 {
        return Err(Error::config("k", "active-set size must be positive"));
    }
    if k > n {
        return Err(Error::config(
            "k",
            format!("active-set size {k} exceeds n = {n}"),
        ));
    }
    Ok((0..n / k)
        .map(|i| ActiveSet((i * k..(i + 1) * k).collect()))
        .collect())
}

/// Turns an `N`-antenna network of `n` users into an `nN`-user single-antenna one.
///
/// Derived user `(v, a)` has index `v·N + a`: transmit antenna `a` of user `v`
/// paired with receive antenna `a` of receiver `v`. The gain from derived
/// transmitter `(v, a)` to derived receiver `(u, b)` is `H_{u,v}[b, a]` and its
/// path loss is `γ_{u,v}`.
pub fn antenna_pairing_transform<T: Real>(ch: &ChannelRealization<T>) -> ChannelRealization<T> {
    let n = ch.users;
    let big_n = ch.antennas;
    let users = n * big_n;
    let mut gains = Vec::with_capacity(users * users);
    let mut pathloss = Vec::with_capacity(users * users);
    for u in 0..n {
        for b in 0..big_n {
            for v in 0..n {
                for a in 0..big_n {
                    gains.push(ch.gain(u, v, b, a));
                    pathloss.push(ch.pathloss(u, v));
                }
            }
        }
    }
    ChannelRealization {
        users,
        antennas: 1,
        gains,
        pathloss,
    }
}
