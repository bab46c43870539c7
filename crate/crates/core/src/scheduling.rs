//! Active-set selection: exhaustive best subset, best disjoint group, and a
//! uniformly random baseline.

use itertools::Itertools;
use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exporders;
use crate::netmodel::{active_set_partition, ActiveSet, ChannelRealization};
use crate::rates::{self, RateMode};
use crate::rng::{self, Domain};
use crate::scalar::Real;

/// Default bound on the number of subsets [`select_exhaustive`] will enumerate.
pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    SumRateSiso,
    SumRateMimo,
    /// `X_V` evaluated at the measurement SNR.
    XOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    Partitioned,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult<T> {
    pub set: ActiveSet,
    pub objective: T,
    pub strategy: Strategy,
    pub candidates_evaluated: usize,
}

/// Objective value of one candidate set.
pub fn evaluate<T: Real>(
    set: &ActiveSet,
    ch: &ChannelRealization<T>,
    snr: T,
    objective: Objective,
) -> Result<T> {
    match objective {
        Objective::SumRateSiso => Ok(rates::sum_rate(set, ch, snr, RateMode::Siso)?.sum),
        Objective::SumRateMimo => Ok(rates::sum_rate(set, ch, snr, RateMode::Mimo)?.sum),
        Objective::XOrder => Ok(exporders::order_sample(ch, set, snr, true)?.x),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::config(
            "k",
            format!("active-set size {k} must be in 1..={n}"),
        ));
    }
    Ok(())
}

/// Argmax over indexed candidates; ties go to the lowest index regardless of
/// the order in which the parallel reduction combines them.
fn argmax<T: Real>(scored: Vec<Result<(usize, T)>>) -> Result<(usize, T)> {
    let scored = scored.into_iter().collect::<Result<Vec<_>>>()?;
    if let Some(&(i, _)) = scored.iter().find(|(_, v)| v.is_nan()) {
        return Err(Error::numeric(format!("objective of candidate {i} is NaN")));
    }
    scored
        .into_iter()
        .reduce(|a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .ok_or_else(|| Error::input("no candidate sets"))
}

/// Best `K`-subset of all `n` users, with the cap [`DEFAULT_SEARCH_CAP`].
pub fn select_exhaustive<T: Real>(
    ch: &ChannelRealization<T>,
    snr: T,
    k: usize,
    objective: Objective,
) -> Result<SelectionResult<T>> {
    select_exhaustive_capped(ch, snr, k, objective, DEFAULT_SEARCH_CAP)
}

/// Best `K`-subset; candidates are enumerated in lexicographic order so the
/// lowest index is the lexicographically smallest member list.
pub fn select_exhaustive_capped<T: Real>(
    ch: &ChannelRealization<T>,
    snr: T,
    k: usize,
    objective: Objective,
    cap: u128,
) -> Result<SelectionResult<T>> {
    let n = ch.users();
    check_k(n, k)?;
    let count = binomial(n, k);
    if count > cap {
        return Err(Error::SearchCapExceeded { n, k, count, cap });
    }
    let candidates: Vec<ActiveSet> = (0..n)
        .combinations(k)
        .map(ActiveSet::from_sorted_unchecked)
        .collect();
    let scored = candidates
        .par_iter()
        .enumerate()
        .map(|(i, s)| evaluate(s, ch, snr, objective).map(|v| (i, v)))
        .collect();
    let (best, value) = argmax(scored)?;
    Ok(SelectionResult {
        set: candidates[best].clone(),
        objective: value,
        strategy: Strategy::Exhaustive,
        candidates_evaluated: candidates.len(),
    })
}

/// Best of the `⌊n/K⌋` disjoint groups of [`active_set_partition`]; each group
/// only needs its own channels.
pub fn select_partitioned<T: Real>(
    ch: &ChannelRealization<T>,
    snr: T,
    k: usize,
    objective: Objective,
) -> Result<SelectionResult<T>> {
    let groups = active_set_partition(ch.users(), k)?;
    let scored = groups
        .par_iter()
        .enumerate()
        .map(|(i, s)| evaluate(s, ch, snr, objective).map(|v| (i, v)))
        .collect();
    let (best, value) = argmax(scored)?;
    Ok(SelectionResult {
        set: groups[best].clone(),
        objective: value,
        strategy: Strategy::Partitioned,
        candidates_evaluated: groups.len(),
    })
}

/// Uniform `K`-subset of `n` users, sorted, deterministic in `seed`.
pub fn select_random(n: usize, k: usize, seed: u64) -> Result<ActiveSet> {
    check_k(n, k)?;
    let mut rng = rng::stream(seed, Domain::Selection, 0, 0);
    let mut members = index::sample(&mut rng, n, k).into_vec();
    members.sort_unstable();
    Ok(ActiveSet::from_sorted_unchecked(members))
}
