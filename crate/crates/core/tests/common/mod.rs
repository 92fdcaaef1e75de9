//! Independent oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use party_approval::instances::{random_election, BallotModel};
use party_approval::{Committee, Election};

/// Extended justified representation by scanning every sub-multiset of voters.
///
/// A group `S` with `|S|·k ≥ ℓ·n` whose members share an approved party must
/// contain a member with utility at least `ℓ`. Returns `true` when no group
/// violates this.
pub fn ejr_by_definition(election: &Election, committee: &Committee) -> bool {
    let ballots = election.ballots();
    let (n, k) = (election.n(), election.k() as u64);
    let utility = election.utilities(committee);
    let mut counts = vec![0u64; ballots.len()];
    loop {
        // next count vector in mixed radix
        let mut i = 0;
        while i < counts.len() && counts[i] == ballots[i].multiplicity() {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            return true;
        }
        counts[i] += 1;

        let members: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] > 0).collect();
        let size: u64 = counts.iter().sum();
        let shared = (0..election.num_parties()).any(|p| members.iter().all(|&c| ballots[c].approves(p)));
        if !shared {
            continue;
        }
        let best = members.iter().map(|&c| utility[c]).max().unwrap_or(0) as u64;
        for level in 1..=k {
            if size * k >= level * n && best < level {
                return false;
            }
        }
    }
}

/// Proportional justified representation by scanning every subset of voters
/// (voters in the same class are interchangeable, so class counts suffice).
pub fn pjr_by_definition(election: &Election, committee: &Committee) -> bool {
    let ballots = election.ballots();
    let (n, k) = (election.n(), election.k() as u64);
    let mut counts = vec![0u64; ballots.len()];
    loop {
        let mut i = 0;
        while i < counts.len() && counts[i] == ballots[i].multiplicity() {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            return true;
        }
        counts[i] += 1;

        let members: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] > 0).collect();
        let size: u64 = counts.iter().sum();
        let shared = (0..election.num_parties()).any(|p| members.iter().all(|&c| ballots[c].approves(p)));
        if !shared {
            continue;
        }
        let covered: u64 = (0..election.num_parties())
            .filter(|&p| members.iter().any(|&c| ballots[c].approves(p)))
            .map(|p| committee.get(p) as u64)
            .sum();
        if covered < size * k / n {
            return false;
        }
    }
}

/// Seeded instance number `i` of a sweep, cycling through the ballot models.
pub fn sweep_instance(i: u64, max_n: u64, max_parties: usize, max_k: usize) -> Election {
    let n = 1 + i % max_n;
    let parties = 1 + (i / max_n) as usize % max_parties;
    let k = 1 + (i / (max_n * max_parties as u64)) as usize % max_k;
    let model = match i % 3 {
        0 => BallotModel::UniformSubset { density: 0.4 },
        1 => BallotModel::Clustered {
            clusters: 2,
            noise: 0.25,
        },
        _ => BallotModel::UniformSubset { density: 0.7 },
    };
    random_election(i, n, parties, k, model).expect("valid sweep parameters")
}

/// Every committee of size `k` over `parties` parties.
pub fn all_committees(parties: usize, k: usize) -> Vec<Committee> {
    let mut out = Vec::new();
    party_approval::search::for_each_committee(parties, k, |c| out.push(c.clone()));
    out
}

/// Whether some `t` vertices are pairwise non-adjacent, by trying every vertex subset.
pub fn independent_set_exists(graph: &party_approval::instances::Graph, t: usize) -> bool {
    let v = graph.vertices();
    (0u32..1 << v).any(|set| {
        set.count_ones() as usize == t
            && graph
                .edges()
                .iter()
                .all(|&(a, b)| set >> a & 1 == 0 || set >> b & 1 == 0)
    })
}
