//! Approval voting, satisfaction approval voting, minimax approval voting and
//! Chamberlin–Courant.

use std::cmp::Reverse;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::model::{Committee, Election, Rational};
use crate::search::{best_committee, check_cap, committee_count, SearchConfig};

fn all_seats_to_best<S: PartialOrd>(election: &Election, scores: &[S]) -> Committee {
    let mut best = 0;
    for (p, s) in scores.iter().enumerate() {
        if *s > scores[best] {
            best = p;
        }
    }
    let mut committee = Committee::empty(election.num_parties());
    for _ in 0..election.k() {
        committee.add_seat(best);
    }
    committee
}

/// Approval voting: every seat goes to a party with the most approvals.
pub fn av(election: &Election) -> Committee {
    all_seats_to_best(election, &election.approval_counts())
}

/// Satisfaction scores `Σ_{i∈N_p} 1/|A_i|`.
pub fn sav_scores(election: &Election) -> Vec<Rational> {
    let mut scores = vec![Rational::zero(); election.num_parties()];
    for b in election.ballots() {
        let share = Rational::new(BigInt::from(b.multiplicity()), BigInt::from(b.parties().len()));
        for &p in b.parties() {
            scores[p] += &share;
        }
    }
    scores
}

/// Satisfaction approval voting: every seat goes to a party with the highest satisfaction score.
pub fn sav(election: &Election) -> Committee {
    all_seats_to_best(election, &sav_scores(election))
}

/// Largest Hamming distance `k(|A_i|+1) − 2u_i` between a ballot and the embedded committee.
pub fn mav_distance(election: &Election, committee: &Committee) -> usize {
    let k = committee.size();
    election
        .ballots()
        .iter()
        .map(|b| {
            let u: usize = b.parties().iter().map(|&p| committee.get(p)).sum();
            k * (b.parties().len() + 1) - 2 * u
        })
        .max()
        .unwrap_or(0)
}

/// Minimax approval voting by exhaustive search.
pub fn mav_exact(election: &Election, config: &SearchConfig) -> Result<Committee> {
    check_cap(
        "mav",
        "none",
        committee_count(election.num_parties(), election.k()),
        config,
    )?;
    let (committee, _) = best_committee(election.num_parties(), election.k(), config, |w| {
        Some(Reverse(mav_distance(election, w)))
    })
    .expect("at least one committee");
    Ok(committee)
}

/// Number of voters approving at least one seated party.
pub fn cc_score(election: &Election, committee: &Committee) -> u64 {
    election
        .ballots()
        .iter()
        .filter(|b| b.parties().iter().any(|&p| committee.get(p) > 0))
        .map(|b| b.multiplicity())
        .sum()
}

/// Chamberlin–Courant with approval utilities, by exhaustive search.
pub fn cc_av_exact(election: &Election, config: &SearchConfig) -> Result<Committee> {
    check_cap(
        "ccav",
        "greedyav",
        committee_count(election.num_parties(), election.k()),
        config,
    )?;
    let (committee, _) = best_committee(election.num_parties(), election.k(), config, |w| {
        Some(cc_score(election, w))
    })
    .expect("at least one committee");
    Ok(committee)
}
