//! Sequential Phragmén, Phragmén-STV and MaxPhragmén.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::flow::FlowNetwork;
use crate::model::{Committee, Election, Rational};
use crate::search::{best_committee, check_cap, committee_count, SearchConfig};

/// One round of sequential Phragmén: the bid of every party with approvers.
#[derive(Debug, Clone, PartialEq)]
pub struct PhragmenRound {
    pub bids: Vec<Option<Rational>>,
    pub winner: usize,
}

/// Sequential Phragmén with the full bid table.
///
/// The bid of `p` is `(1 + Σ_{i∈N_p} x_i) / |N_p|`, the load every approver
/// would carry if `p` were added; the lowest bid wins and its approvers' loads
/// are set to it.
pub fn seq_phragmen_trace(election: &Election) -> Vec<PhragmenRound> {
    let parties = election.num_parties();
    let mut load = vec![Rational::zero(); election.ballots().len()];
    let mut rounds = Vec::with_capacity(election.k());
    for _ in 0..election.k() {
        let mut total = vec![Rational::one(); parties];
        let mut approvers = vec![0u64; parties];
        for (b, x) in election.ballots().iter().zip(&load) {
            let weighted = x * BigInt::from(b.multiplicity());
            for &p in b.parties() {
                total[p] += &weighted;
                approvers[p] += b.multiplicity();
            }
        }
        let bids: Vec<Option<Rational>> = total
            .into_iter()
            .zip(&approvers)
            .map(|(t, &a)| (a > 0).then(|| t / BigInt::from(a)))
            .collect();
        let mut winner: Option<usize> = None;
        for (p, bid) in bids.iter().enumerate() {
            if let Some(b) = bid {
                if winner.is_none_or(|w| b < bids[w].as_ref().unwrap()) {
                    winner = Some(p);
                }
            }
        }
        let winner = winner.expect("some party has approvers");
        let new_load = bids[winner].clone().unwrap();
        for (b, x) in election.ballots().iter().zip(load.iter_mut()) {
            if b.approves(winner) {
                *x = new_load.clone();
            }
        }
        rounds.push(PhragmenRound { bids, winner });
    }
    rounds
}

pub fn seq_phragmen(election: &Election) -> Committee {
    let mut committee = Committee::empty(election.num_parties());
    for round in seq_phragmen_trace(election) {
        committee.add_seat(round.winner);
    }
    committee
}

/// One round of Phragmén-STV: every party's weighted approval score.
#[derive(Debug, Clone, PartialEq)]
pub struct StvRound {
    pub scores: Vec<Rational>,
    pub winner: usize,
}

/// Phragmén-STV with the score table.
///
/// Each voter starts with weight 1. The party with the highest weighted
/// approval score `s` wins; if `s > n/k` its approvers keep the fraction
/// `(s − n/k)/s` of their weight, otherwise their weight drops to 0.
pub fn phragmen_stv_trace(election: &Election) -> Vec<StvRound> {
    let parties = election.num_parties();
    let quota = Rational::new(BigInt::from(election.n()), BigInt::from(election.k()));
    let mut weight = vec![Rational::one(); election.ballots().len()];
    let mut rounds = Vec::with_capacity(election.k());
    for _ in 0..election.k() {
        let mut scores = vec![Rational::zero(); parties];
        for (b, f) in election.ballots().iter().zip(&weight) {
            let weighted = f * BigInt::from(b.multiplicity());
            for &p in b.parties() {
                scores[p] += &weighted;
            }
        }
        let mut winner = 0;
        for p in 1..parties {
            if scores[p] > scores[winner] {
                winner = p;
            }
        }
        let s = &scores[winner];
        let keep = if *s > quota { (s - &quota) / s } else { Rational::zero() };
        for (b, f) in election.ballots().iter().zip(weight.iter_mut()) {
            if b.approves(winner) {
                *f = &*f * &keep;
            }
        }
        rounds.push(StvRound { scores, winner });
    }
    rounds
}

pub fn phragmen_stv(election: &Election) -> Committee {
    let mut committee = Committee::empty(election.num_parties());
    for round in phragmen_stv_trace(election) {
        committee.add_seat(round.winner);
    }
    committee
}

/// Precision of the MaxPhragmén load search; committees within it count as tied.
pub const MAX_LOAD_TOLERANCE: f64 = 1e-9;

/// An optimal load distribution for a committee.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadDistribution {
    /// `loads[class][party]`: load each voter of the class carries for the party's seats.
    pub loads: Vec<Vec<f64>>,
    pub max_load: f64,
}

impl LoadDistribution {
    /// Load carried by one voter of `class`.
    pub fn voter_load(&self, class: usize) -> f64 {
        self.loads[class].iter().sum()
    }
}

/// Routes the committee's seats to voters with per-voter capacity `lambda`.
fn load_network(
    election: &Election,
    committee: &Committee,
    lambda: f64,
) -> (f64, FlowNetwork<f64>, Vec<Vec<Option<usize>>>) {
    let parties = election.num_parties();
    let classes = election.ballots().len();
    let (source, sink) = (0, 1);
    let party_node = |p: usize| 2 + p;
    let class_node = |i: usize| 2 + parties + i;
    let mut net = FlowNetwork::new(2 + parties + classes);
    for p in committee.support() {
        net.add_arc(source, party_node(p), committee.get(p) as f64);
    }
    let mut arcs = vec![vec![None; parties]; classes];
    for (i, b) in election.ballots().iter().enumerate() {
        for &p in b.parties() {
            if committee.get(p) > 0 {
                arcs[i][p] = Some(net.add_arc(party_node(p), class_node(i), f64::INFINITY));
            }
        }
        net.add_arc(class_node(i), sink, lambda * b.multiplicity() as f64);
    }
    let flow = net.max_flow(source, sink);
    (flow, net, arcs)
}

/// Smallest achievable maximum voter load, or `None` if a seated party has no approvers.
pub fn max_load(election: &Election, committee: &Committee) -> Option<f64> {
    if committee.support().any(|p| election.approval_counts()[p] == 0) {
        return None;
    }
    let k = committee.size() as f64;
    let feasible = |lambda: f64| load_network(election, committee, lambda).0 >= k - 1e-12 * k.max(1.0);
    let (mut lo, mut hi) = (0.0f64, k.max(1.0));
    while hi - lo > MAX_LOAD_TOLERANCE / 4.0 {
        let mid = (lo + hi) / 2.0;
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// An optimal load distribution, or `None` if a seated party has no approvers.
pub fn load_distribution(election: &Election, committee: &Committee) -> Option<LoadDistribution> {
    let max_load = max_load(election, committee)?;
    let (_, net, arcs) = load_network(election, committee, max_load);
    let loads = election
        .ballots()
        .iter()
        .zip(&arcs)
        .map(|(b, row)| {
            row.iter()
                .map(|a| a.map_or(0.0, |id| net.flow(id) / b.multiplicity() as f64))
                .collect()
        })
        .collect();
    Some(LoadDistribution { loads, max_load })
}

/// MaxPhragmén: the committee minimising the maximum voter load, by exhaustive search.
pub fn max_phragmen_bruteforce(election: &Election, config: &SearchConfig) -> Result<Committee> {
    check_cap(
        "maxphragmen",
        "seqphragmen",
        committee_count(election.num_parties(), election.k()),
        config,
    )?;
    let tick = MAX_LOAD_TOLERANCE;
    let best = best_committee(election.num_parties(), election.k(), config, |w| {
        max_load(election, w).map(|l| std::cmp::Reverse((l / tick).round() as i64))
    });
    // no committee is feasible only when k seats cannot all go to approved parties; k ≥ 1 and n ≥ 1 rule that out
    Ok(best.expect("some party has approvers").0)
}
