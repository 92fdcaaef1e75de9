//! Greedy approval voting, Hare approval voting and the Monroe rules.

use crate::error::Result;
use crate::flow::FlowNetwork;
use crate::model::{Committee, Election};
use crate::search::{best_committee, check_cap, committee_count, SearchConfig};

/// Party with the most active approvers; lowest index on ties.
fn most_active_approvers(election: &Election, active: &[u64]) -> (usize, u64) {
    let mut score = vec![0u64; election.num_parties()];
    for (b, &a) in election.ballots().iter().zip(active) {
        for &p in b.parties() {
            score[p] += a;
        }
    }
    let mut best = 0;
    for p in 1..score.len() {
        if score[p] > score[best] {
            best = p;
        }
    }
    (best, score[best])
}

/// Fills the remaining seats with unused clones in candidate order, which
/// always means further clones of party 0.
fn fill_up(committee: &mut Committee, k: usize) {
    while committee.size() < k {
        committee.add_seat(0);
    }
}

/// Shared loop of the two greedy approval rules; `remove(party, active)`
/// retires ballots after `party` wins a seat.
fn greedy_with(election: &Election, mut remove: impl FnMut(usize, &mut [u64])) -> Committee {
    let k = election.k();
    let mut active: Vec<u64> = election.ballots().iter().map(|b| b.multiplicity()).collect();
    let mut committee = Committee::empty(election.num_parties());
    while committee.size() < k && active.iter().any(|&a| a > 0) {
        let (party, _) = most_active_approvers(election, &active);
        committee.add_seat(party);
        remove(party, &mut active);
    }
    fill_up(&mut committee, k);
    committee
}

/// Greedy approval voting: the party with the most remaining approvers wins a
/// seat and all of its approvers leave.
pub fn greedy_av(election: &Election) -> Committee {
    greedy_with(election, |party, active| {
        for (b, a) in election.ballots().iter().zip(active.iter_mut()) {
            if b.approves(party) {
                *a = 0;
            }
        }
    })
}

/// Hare approval voting: like [`greedy_av`], but only `⌈n/k⌉` approvers leave
/// per seat, lowest voter index first.
pub fn hare_av(election: &Election) -> Committee {
    let quota = election.n().div_ceil(election.k() as u64);
    greedy_with(election, |party, active| {
        let mut left = quota;
        for (b, a) in election.ballots().iter().zip(active.iter_mut()) {
            if left == 0 {
                break;
            }
            if b.approves(party) {
                let take = left.min(*a);
                *a -= take;
                left -= take;
            }
        }
    })
}

/// One round of greedy Monroe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonroeRound {
    pub party: usize,
    /// Voters assigned to the new seat, as `(class, count)`.
    pub group: Vec<(usize, u64)>,
    /// Assigned voters who approve the party.
    pub represented: u64,
}

/// Size of the voter group assigned in round `t` (1-based).
pub fn monroe_group_size(n: u64, k: u64, t: u64) -> u64 {
    if t <= n - k * (n / k) {
        n.div_ceil(k)
    } else {
        n / k
    }
}

/// Greedy Monroe with the group assigned in every round.
///
/// Round `t` picks the party with the most active approvers, capped at the
/// group size, and assigns that many of its approvers (lowest index first),
/// topped up with other active voters when the party has too few.
pub fn greedy_monroe_trace(election: &Election) -> Vec<MonroeRound> {
    let (n, k) = (election.n(), election.k() as u64);
    let mut active: Vec<u64> = election.ballots().iter().map(|b| b.multiplicity()).collect();
    let mut rounds = Vec::with_capacity(k as usize);
    for t in 1..=k {
        let size = monroe_group_size(n, k, t);
        let mut score = vec![0u64; election.num_parties()];
        for (b, &a) in election.ballots().iter().zip(&active) {
            for &p in b.parties() {
                score[p] += a;
            }
        }
        let mut party = 0;
        for p in 1..score.len() {
            if score[p].min(size) > score[party].min(size) {
                party = p;
            }
        }
        let mut group = Vec::new();
        let mut left = size;
        let mut take_from = |approving: bool, left: &mut u64, active: &mut [u64]| {
            for (i, (b, a)) in election.ballots().iter().zip(active.iter_mut()).enumerate() {
                if *left == 0 {
                    break;
                }
                if b.approves(party) == approving && *a > 0 {
                    let take = (*left).min(*a);
                    *a -= take;
                    *left -= take;
                    group.push((i, take));
                }
            }
        };
        take_from(true, &mut left, &mut active);
        let represented = size - left;
        take_from(false, &mut left, &mut active);
        group.sort_unstable();
        rounds.push(MonroeRound {
            party,
            group,
            represented,
        });
    }
    rounds
}

pub fn greedy_monroe(election: &Election) -> Committee {
    let mut committee = Committee::empty(election.num_parties());
    for round in greedy_monroe_trace(election) {
        committee.add_seat(round.party);
    }
    committee
}

/// Monroe score: the most voters that can be matched to an approved seat
/// under a balanced assignment.
///
/// Every seat takes `⌊n/k⌋` voters and `n mod k` seats take one more. Any
/// partial assignment of approving voters within those bounds extends to a
/// full balanced one, so the score is a maximum flow.
pub fn monroe_score(election: &Election, committee: &Committee) -> u64 {
    let k = committee.size() as u64;
    if k == 0 {
        return 0;
    }
    let n = election.n();
    let (base, extra) = (n / k, n % k);
    let parties = election.num_parties();
    let classes = election.ballots().len();
    let (source, sink, bonus) = (0, 1, 2);
    let class_node = |i: usize| 3 + i;
    let party_node = |p: usize| 3 + classes + p;
    let mut net = FlowNetwork::<i64>::new(3 + classes + parties);
    for (i, b) in election.ballots().iter().enumerate() {
        net.add_arc(source, class_node(i), b.multiplicity() as i64);
        for &p in b.parties() {
            if committee.get(p) > 0 {
                net.add_arc(class_node(i), party_node(p), i64::MAX / 4);
            }
        }
    }
    for p in committee.support() {
        let seats = committee.get(p) as u64;
        net.add_arc(party_node(p), sink, (seats * base) as i64);
        if extra > 0 {
            net.add_arc(party_node(p), bonus, seats as i64);
        }
    }
    if extra > 0 {
        net.add_arc(bonus, sink, extra as i64);
    }
    net.max_flow(source, sink) as u64
}

/// Monroe's rule by exhaustive search.
pub fn monroe_exact(election: &Election, config: &SearchConfig) -> Result<Committee> {
    check_cap(
        "monroe",
        "greedymonroe",
        committee_count(election.num_parties(), election.k()),
        config,
    )?;
    let (committee, _) = best_committee(election.num_parties(), election.k(), config, |w| {
        Some(monroe_score(election, w))
    })
    .expect("at least one committee");
    Ok(committee)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_av_fills_with_first_party() {
        let e = Election::from_names(&["A", "B"], &[(4, &["B"])], 3).unwrap();
        assert_eq!(greedy_av(&e).seats(), &[2, 1]);
    }

    #[test]
    fn hare_removes_quota() {
        let e = Election::from_names(&["A", "B"], &[(4, &["A"]), (2, &["B"])], 3).unwrap();
        assert_eq!(hare_av(&e).seats(), &[2, 1]);
        assert_eq!(greedy_av(&e).seats(), &[2, 1]);
        let e = Election::from_names(&["A", "B"], &[(5, &["A"]), (1, &["B"])], 3).unwrap();
        assert_eq!(hare_av(&e).seats(), &[3, 0]);
    }

    #[test]
    fn group_sizes_sum_to_n() {
        for n in 1..30u64 {
            for k in 1..12u64 {
                let total: u64 = (1..=k).map(|t| monroe_group_size(n, k, t)).sum();
                assert_eq!(total, n, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn greedy_monroe_groups() {
        let e = Election::from_names(&["A", "B"], &[(3, &["A"]), (2, &["B"])], 2).unwrap();
        let trace = greedy_monroe_trace(&e);
        assert_eq!(trace[0].party, 0);
        assert_eq!(trace[0].group, vec![(0, 3)]);
        assert_eq!(trace[1].party, 1);
        assert_eq!(trace[1].represented, 2);
        assert_eq!(greedy_monroe(&e).seats(), &[1, 1]);
    }

    #[test]
    fn monroe_score_balanced() {
        let e = Election::from_names(&["A", "B"], &[(3, &["A"]), (1, &["B"])], 2).unwrap();
        assert_eq!(monroe_score(&e, &Committee::new(vec![2, 0])), 3);
        assert_eq!(monroe_score(&e, &Committee::new(vec![1, 1])), 3);
        assert_eq!(monroe_exact(&e, &SearchConfig::default()).unwrap().seats(), &[2, 0]);
    }
}
