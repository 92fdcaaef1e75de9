//! Clone embedding of party-approval elections into candidate-approval elections.
//!
//! Every party `p` becomes `k` interchangeable candidates `p^(1), …, p^(k)` and
//! a voter approves `p^(j)` exactly when they approve `p`. A candidate
//! committee maps back to a party committee by counting chosen clones.
//!
//! The rules in [`crate::rules`] work directly on seat counts. The
//! candidate-level rules in this module run the textbook definitions on the
//! embedded election and serve as an independent cross-check.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Committee, Election, Rational};

/// A clone candidate: `(party, clone)` with clone numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub party: usize,
    pub clone: usize,
}

/// A candidate-approval election obtained by [`embed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateElection {
    candidates: Vec<Candidate>,
    ballots: Vec<(Vec<usize>, u64)>,
    num_parties: usize,
    k: usize,
}

/// A set of exactly `k` candidate indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateCommittee(BTreeSet<usize>);

impl CandidateCommittee {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        CandidateCommittee(members.into_iter().collect())
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Replaces every party by `k` clones.
pub fn embed(election: &Election) -> CandidateElection {
    let k = election.k();
    let candidates = (0..election.num_parties())
        .flat_map(|party| (1..=k).map(move |clone| Candidate { party, clone }))
        .collect();
    let ballots = election
        .ballots()
        .iter()
        .map(|b| {
            let approved = b.parties().iter().flat_map(|&p| p * k..(p + 1) * k).collect();
            (approved, b.multiplicity())
        })
        .collect();
    CandidateElection {
        candidates,
        ballots,
        num_parties: election.num_parties(),
        k,
    }
}

impl CandidateElection {
    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    /// Approval sets over candidate indices, with multiplicities.
    pub fn ballots(&self) -> &[(Vec<usize>, u64)] {
        &self.ballots
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index_of(&self, candidate: Candidate) -> usize {
        candidate.party * self.k + candidate.clone - 1
    }

    /// `|A_i ∩ W|` for ballot class `voter`.
    pub fn utility(&self, voter: usize, committee: &CandidateCommittee) -> usize {
        self.ballots[voter].0.iter().filter(|c| committee.0.contains(c)).count()
    }

    /// Symmetric-difference distance between ballot class `voter` and the committee.
    pub fn hamming_distance(&self, voter: usize, committee: &CandidateCommittee) -> usize {
        let approved = &self.ballots[voter].0;
        let common = self.utility(voter, committee);
        approved.len() + committee.len() - 2 * common
    }

    fn approvers(&self) -> Vec<Vec<(usize, u64)>> {
        let mut approvers = vec![Vec::new(); self.candidates.len()];
        for (i, (set, m)) in self.ballots.iter().enumerate() {
            for &c in set {
                approvers[c].push((i, *m));
            }
        }
        approvers
    }
}

/// Counts the chosen clones of each party.
pub fn collapse(election: &CandidateElection, committee: &CandidateCommittee) -> Result<Committee> {
    let mut seats = vec![0usize; election.num_parties];
    for &c in committee.members() {
        let candidate = election
            .candidates
            .get(c)
            .ok_or_else(|| Error::Structural(format!("no candidate {c}")))?;
        seats[candidate.party] += 1;
    }
    Ok(Committee::new(seats))
}

/// The candidate committee taking the first `W(p)` clones of every party.
pub fn expand(election: &CandidateElection, committee: &Committee) -> CandidateCommittee {
    CandidateCommittee::new(
        committee
            .seats()
            .iter()
            .enumerate()
            .flat_map(|(p, &s)| (0..s).map(move |j| p * election.k + j)),
    )
}

/// Sequential PAV on candidates: add the candidate with the largest PAV gain,
/// lowest candidate index on ties.
pub fn seq_pav_candidates(election: &CandidateElection) -> CandidateCommittee {
    let approvers = election.approvers();
    let mut chosen = BTreeSet::new();
    let mut utility = vec![0usize; election.ballots.len()];
    for _ in 0..election.k {
        let mut best: Option<(usize, Rational)> = None;
        for c in (0..election.candidates.len()).filter(|c| !chosen.contains(c)) {
            let gain: Rational = approvers[c]
                .iter()
                .map(|&(i, m)| Rational::new(BigInt::from(m), BigInt::from(utility[i] + 1)))
                .sum();
            if best.as_ref().is_none_or(|(_, g)| gain > *g) {
                best = Some((c, gain));
            }
        }
        let (c, _) = best.expect("at least k candidates");
        chosen.insert(c);
        for &(i, _) in &approvers[c] {
            utility[i] += 1;
        }
    }
    CandidateCommittee(chosen)
}

fn top_k_by(election: &CandidateElection, score: impl Fn(usize) -> Rational) -> CandidateCommittee {
    let mut order: Vec<(Rational, usize)> = (0..election.candidates.len()).map(|c| (score(c), c)).collect();
    // descending score, ascending index
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    CandidateCommittee::new(order.into_iter().take(election.k).map(|(_, c)| c))
}

/// Approval voting on candidates: the `k` candidates with most approvals.
pub fn av_candidates(election: &CandidateElection) -> CandidateCommittee {
    let approvers = election.approvers();
    top_k_by(election, |c| {
        Rational::from_integer(BigInt::from(approvers[c].iter().map(|&(_, m)| m).sum::<u64>()))
    })
}

/// Satisfaction approval voting on candidates: score `Σ_{i∈N_c} 1/|A_i|`.
pub fn sav_candidates(election: &CandidateElection) -> CandidateCommittee {
    let approvers = election.approvers();
    top_k_by(election, |c| {
        approvers[c].iter().fold(Rational::zero(), |acc, &(i, m)| {
            acc + Rational::new(BigInt::from(m), BigInt::from(election.ballots[i].0.len()))
        })
    })
}
