//! Proportional approval voting and its sequential and local-search variants.
//!
//! Scores are exact. Internally every harmonic number `H_j` is scaled by
//! `L = lcm(1, …, m)` so that PAV scores become plain integers; `m` is the
//! largest utility a voter can reach in the computation at hand.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::model::{Committee, Election, Rational};
use crate::search::{best_committee, check_cap, committee_count, SearchConfig};

/// Harmonic numbers `H_0..=H_m`, all multiplied by `lcm(1..=m)`.
#[derive(Debug, Clone)]
pub(crate) struct Harmonic {
    scale: BigInt,
    scaled: Vec<BigInt>,
}

impl Harmonic {
    pub fn up_to(m: usize) -> Self {
        let scale = (1..=m.max(1)).fold(BigInt::one(), |acc, j| acc.lcm(&BigInt::from(j)));
        let mut scaled = vec![BigInt::zero()];
        for j in 1..=m {
            let next = &scaled[j - 1] + &scale / BigInt::from(j);
            scaled.push(next);
        }
        Harmonic { scale, scaled }
    }

    /// `L·H_u`.
    pub fn at(&self, u: usize) -> &BigInt {
        &self.scaled[u]
    }

    /// `L/u`, the scaled gain of the `u`-th approved seat.
    pub fn step(&self, u: usize) -> BigInt {
        &self.scale / BigInt::from(u)
    }

    pub fn unscale(&self, value: BigInt) -> Rational {
        Rational::new(value, self.scale.clone())
    }

    /// Scaled PAV score of a committee.
    pub fn score(&self, election: &Election, committee: &Committee) -> BigInt {
        election
            .ballots()
            .iter()
            .map(|b| {
                let u: usize = b.parties().iter().map(|&p| committee.get(p)).sum();
                self.at(u) * BigInt::from(b.multiplicity())
            })
            .sum()
    }
}

/// `PAV(W) = Σ_i H_{u_i(W)}`.
pub fn pav_score(election: &Election, committee: &Committee) -> Rational {
    let harmonic = Harmonic::up_to(committee.size());
    harmonic.unscale(harmonic.score(election, committee))
}

/// `MC(p, W) = PAV(W) − PAV(W − {p})`, for a party holding a seat.
pub fn marginal_contribution(election: &Election, committee: &Committee, party: usize) -> Rational {
    let mut smaller = committee.clone();
    smaller.remove_seat(party);
    pav_score(election, committee) - pav_score(election, &smaller)
}

/// PAV by exhaustive search over all `C(|P|+k−1, k)` committees.
pub fn pav_exact(election: &Election, config: &SearchConfig) -> Result<Committee> {
    let k = election.k();
    check_cap("pav", "lspav", committee_count(election.num_parties(), k), config)?;
    let harmonic = Harmonic::up_to(k);
    let (committee, _) = best_committee(election.num_parties(), k, config, |w| Some(harmonic.score(election, w)))
        .expect("at least one committee");
    Ok(committee)
}

/// One greedy step of sequential PAV.
#[derive(Debug, Clone, PartialEq)]
pub struct SeqPavStep {
    pub party: usize,
    pub gain: Rational,
}

/// Sequential PAV with the gain of every selection.
pub fn seq_pav_trace(election: &Election) -> Vec<SeqPavStep> {
    let k = election.k();
    let harmonic = Harmonic::up_to(k);
    let mut committee = Committee::empty(election.num_parties());
    let mut utility = vec![0usize; election.ballots().len()];
    let mut steps = Vec::with_capacity(k);
    for _ in 0..k {
        let mut gains = vec![BigInt::zero(); election.num_parties()];
        for (b, &u) in election.ballots().iter().zip(&utility) {
            let g = harmonic.step(u + 1) * BigInt::from(b.multiplicity());
            for &p in b.parties() {
                gains[p] += &g;
            }
        }
        let party = argmax_first(&gains);
        committee.add_seat(party);
        for (b, u) in election.ballots().iter().zip(utility.iter_mut()) {
            if b.approves(party) {
                *u += 1;
            }
        }
        steps.push(SeqPavStep {
            party,
            gain: harmonic.unscale(gains[party].clone()),
        });
    }
    steps
}

/// Sequential PAV: add the seat with the largest PAV gain, `k` times.
pub fn seq_pav(election: &Election) -> Committee {
    let mut committee = Committee::empty(election.num_parties());
    for step in seq_pav_trace(election) {
        committee.add_seat(step.party);
    }
    committee
}

/// Reverse sequential PAV: start from all `|P|·k` clones and repeatedly drop
/// the seat whose removal costs the least PAV score. On ties the seat of the
/// highest-index party goes, so lower-index candidates survive.
pub fn rev_seq_pav(election: &Election) -> Committee {
    let k = election.k();
    let parties = election.num_parties();
    let mut committee = Committee::new(vec![k; parties]);
    let max_utility = election
        .ballots()
        .iter()
        .map(|b| b.parties().len() * k)
        .max()
        .unwrap_or(k);
    let harmonic = Harmonic::up_to(max_utility);
    let mut utility = election.utilities(&committee);
    while committee.size() > k {
        let mut cost: Vec<Option<BigInt>> = (0..parties)
            .map(|p| (committee.get(p) > 0).then(BigInt::zero))
            .collect();
        for (b, &u) in election.ballots().iter().zip(&utility) {
            if u == 0 {
                continue;
            }
            let c = harmonic.step(u) * BigInt::from(b.multiplicity());
            for &p in b.parties() {
                if let Some(total) = cost[p].as_mut() {
                    *total += &c;
                }
            }
        }
        let mut drop: Option<usize> = None;
        for p in (0..parties).rev() {
            if let Some(c) = &cost[p] {
                if drop.is_none_or(|d| c < cost[d].as_ref().unwrap()) {
                    drop = Some(p);
                }
            }
        }
        let party = drop.expect("committee is nonempty");
        committee.remove_seat(party);
        for (b, u) in election.ballots().iter().zip(utility.iter_mut()) {
            if b.approves(party) {
                *u -= 1;
            }
        }
    }
    committee
}

/// The LS-PAV improvement threshold `1 / ((1 + 2(k−1))(k−1)k)`, for `k ≥ 2`.
pub fn ls_pav_epsilon(k: usize) -> Rational {
    assert!(k >= 2, "LS-PAV threshold needs k >= 2");
    let k = k as i64;
    Rational::new(BigInt::one(), BigInt::from((1 + 2 * (k - 1)) * (k - 1) * k))
}

/// Result of a local-search PAV run.
#[derive(Debug, Clone, PartialEq)]
pub struct LsPavOutcome {
    pub committee: Committee,
    /// Number of improving swaps performed.
    pub swaps: usize,
    /// Every committee visited, starting with the sequential PAV seed.
    pub visited: Vec<Committee>,
}

/// Local-search PAV with threshold [`ls_pav_epsilon`].
///
/// Starts from [`seq_pav`] and applies the first single-seat swap (in
/// `(p_out, p_in)` lexicographic order) that raises the PAV score by at
/// least ε, until none exists. The result is core-stable.
pub fn ls_pav_run(election: &Election) -> LsPavOutcome {
    let k = election.k();
    let start = seq_pav(election);
    if k == 1 {
        // seq_pav already maximises PAV for a single seat
        return LsPavOutcome {
            committee: start.clone(),
            swaps: 0,
            visited: vec![start],
        };
    }
    let harmonic = Harmonic::up_to(k);
    let epsilon = ls_pav_epsilon(k);
    // score gap ≥ ε  ⇔  gap_scaled · denom(ε) ≥ L
    let eps_denominator = epsilon.denom().clone();
    let threshold = harmonic.scale.clone();
    let parties = election.num_parties();
    let mut committee = start;
    let mut score = harmonic.score(election, &committee);
    let mut visited = vec![committee.clone()];
    let mut swaps = 0;
    'search: loop {
        for out in 0..parties {
            if committee.get(out) == 0 {
                continue;
            }
            for into in (0..parties).filter(|&p| p != out) {
                let mut candidate = committee.clone();
                candidate.remove_seat(out);
                candidate.add_seat(into);
                let candidate_score = harmonic.score(election, &candidate);
                if (&candidate_score - &score) * &eps_denominator >= threshold {
                    committee = candidate;
                    score = candidate_score;
                    visited.push(committee.clone());
                    swaps += 1;
                    continue 'search;
                }
            }
        }
        break;
    }
    LsPavOutcome {
        committee,
        swaps,
        visited,
    }
}

pub fn ls_pav(election: &Election) -> Committee {
    ls_pav_run(election).committee
}

/// Upper bound on the number of LS-PAV swaps: `⌈n·H_k / ε⌉`.
pub fn ls_pav_swap_budget(election: &Election) -> BigInt {
    let k = election.k();
    if k < 2 {
        return BigInt::zero();
    }
    let h = Harmonic::up_to(k);
    let bound = h.unscale(h.at(k) * BigInt::from(election.n())) / ls_pav_epsilon(k);
    bound.ceil().to_integer()
}

fn argmax_first(values: &[BigInt]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    fn two_singletons() -> Election {
        Election::from_names(&["A", "B"], &[(1, &["A"]), (1, &["B"])], 2).unwrap()
    }

    #[test]
    fn harmonic_scaling() {
        let h = Harmonic::up_to(4);
        assert_eq!(h.unscale(h.at(4).clone()), ratio(25, 12));
        assert_eq!(h.unscale(h.step(3)), ratio(1, 3));
    }

    #[test]
    fn scores_by_hand() {
        let e = two_singletons();
        assert_eq!(pav_score(&e, &Committee::new(vec![1, 1])), ratio(2, 1));
        assert_eq!(pav_score(&e, &Committee::new(vec![2, 0])), ratio(3, 2));
        assert_eq!(marginal_contribution(&e, &Committee::new(vec![2, 0]), 0), ratio(1, 2));
    }

    #[test]
    fn pav_exact_small() {
        let cfg = SearchConfig::default();
        assert_eq!(pav_exact(&two_singletons(), &cfg).unwrap().seats(), &[1, 1]);
        let single = Election::from_names(&["A"], &[(3, &["A"])], 4).unwrap();
        assert_eq!(pav_exact(&single, &cfg).unwrap().seats(), &[4]);
    }

    #[test]
    fn pav_exact_cap() {
        let e = two_singletons().with_k(2).unwrap();
        let cfg = SearchConfig { cap: 2, threads: 1 };
        assert!(matches!(pav_exact(&e, &cfg), Err(crate::Error::Capacity { .. })));
    }

    #[test]
    fn sequential_variants() {
        let e = two_singletons();
        assert_eq!(seq_pav(&e).seats(), &[1, 1]);
        assert_eq!(rev_seq_pav(&e).seats(), &[1, 1]);
        let unanimous = Election::from_names(&["A", "B"], &[(2, &["A"])], 3).unwrap();
        assert_eq!(seq_pav(&unanimous).seats(), &[3, 0]);
        assert_eq!(rev_seq_pav(&unanimous).seats(), &[3, 0]);
    }

    #[test]
    fn rev_seq_pav_voter_left_without_seats() {
        // the p2 voter loses every seat before the last removal
        let e = Election::from_names(&["p0", "p1", "p2"], &[(1, &["p0"]), (1, &["p2"]), (1, &["p1"])], 1).unwrap();
        assert_eq!(rev_seq_pav(&e).size(), 1);
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(ls_pav_epsilon(2), ratio(1, 6));
        assert_eq!(ls_pav_epsilon(3), ratio(1, 30));
    }

    #[test]
    fn ls_pav_unanimous() {
        let e = Election::from_names(&["A", "B"], &[(3, &["A"])], 4).unwrap();
        let run = ls_pav_run(&e);
        assert_eq!(run.committee.seats(), &[4, 0]);
        assert_eq!(run.swaps, 0);
    }

    #[test]
    fn ls_pav_improves_bad_seed() {
        // seq PAV picks {A,B} first here; swapping toward C and D raises the score
        let e = Election::from_names(
            &["AB", "C", "D"],
            &[
                (2, &["AB"]),
                (3, &["AB", "C"]),
                (3, &["AB", "D"]),
                (1, &["C"]),
                (1, &["D"]),
            ],
            3,
        )
        .unwrap();
        let run = ls_pav_run(&e);
        let best = pav_exact(&e, &SearchConfig::default()).unwrap();
        assert!(
            pav_score(&e, &run.committee)
                >= pav_score(&e, &best) - ls_pav_epsilon(3) * Rational::from_integer(BigInt::from(3))
        );
    }
}
