//! Exhaustive enumeration of committees.
//!
//! Committees of size `k` over `P` parties are visited in canonical order:
//! seat vectors in descending lexicographic order, so `(k, 0, …, 0)` comes
//! first. This is the same order as sorted clone lists in the embedded
//! election, which makes "first best committee found" agree with lowest-index
//! tie-breaking everywhere else.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Committee;

/// Default maximum number of committees an exact rule may enumerate.
pub const DEFAULT_CAP: u128 = 5_000_000;

/// Limits and parallelism for exhaustive rules and checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub cap: u128,
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: DEFAULT_CAP,
            threads: 1,
        }
    }
}

/// Number of multisets of size `k` over `parties` elements, `C(parties + k − 1, k)`, saturating.
pub fn committee_count(parties: usize, k: usize) -> u128 {
    if parties == 0 {
        return u128::from(k == 0);
    }
    let mut acc: u128 = 1;
    // C(parties - 1 + k, k) built incrementally stays integral at every step
    for i in 1..=k as u128 {
        acc = match acc.checked_mul(parties as u128 - 1 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// Calls `visit` on every seat vector of size `k` over `parties` parties with
/// `seats[0] == first`, in canonical order.
fn visit_with_first(parties: usize, k: usize, first: usize, visit: &mut impl FnMut(&Committee)) {
    fn rec(seats: &mut Vec<usize>, p: usize, left: usize, visit: &mut impl FnMut(&Committee)) {
        let last = seats.len() - 1;
        if p == last {
            seats[p] = left;
            visit(&Committee::new(seats.clone()));
            seats[p] = 0;
            return;
        }
        for s in (0..=left).rev() {
            seats[p] = s;
            rec(seats, p + 1, left - s, visit);
        }
        seats[p] = 0;
    }
    let mut seats = vec![0; parties];
    seats[0] = first;
    if parties == 1 {
        if first == k {
            visit(&Committee::new(seats));
        }
        return;
    }
    rec(&mut seats, 1, k - first, visit);
}

/// Visits every committee of size `k` in canonical order.
pub fn for_each_committee(parties: usize, k: usize, mut visit: impl FnMut(&Committee)) {
    if parties == 0 {
        return;
    }
    for first in (0..=k).rev() {
        visit_with_first(parties, k, first, &mut visit);
    }
}

pub(crate) fn check_cap(
    method: &'static str,
    fallback: &'static str,
    required: u128,
    config: &SearchConfig,
) -> Result<()> {
    if required > config.cap {
        return Err(Error::Capacity {
            method,
            required,
            cap: config.cap,
            fallback,
        });
    }
    Ok(())
}

/// The committee of size `k` with the largest score, first in canonical order on ties.
/// Committees scored `None` are skipped.
pub(crate) fn best_committee<S, F>(parties: usize, k: usize, config: &SearchConfig, score: F) -> Option<(Committee, S)>
where
    S: Ord + Send,
    F: Fn(&Committee) -> Option<S> + Sync,
{
    let chunk = |first: usize| {
        let mut best: Option<(Committee, S)> = None;
        visit_with_first(parties, k, first, &mut |w| {
            if let Some(s) = score(w) {
                if best.as_ref().is_none_or(|(_, b)| s > *b) {
                    best = Some((w.clone(), s));
                }
            }
        });
        best
    };
    let firsts: Vec<usize> = (0..=k).rev().collect();
    let chunks: Vec<Option<(Committee, S)>> = if config.threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool")
            .install(|| firsts.par_iter().map(|&f| chunk(f)).collect())
    } else {
        firsts.iter().map(|&f| chunk(f)).collect()
    };
    chunks.into_iter().flatten().fold(None, |best, (w, s)| match best {
        Some((bw, bs)) if bs >= s => Some((bw, bs)),
        _ => Some((w, s)),
    })
}
