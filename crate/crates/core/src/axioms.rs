//! Representation axioms and their checkers.
//!
//! Every failing verdict carries a witness that [`revalidate`] can check
//! against the axiom's definition by direct substitution. Coalitions are
//! reported as `(ballot class, voters)` pairs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::model::{quota, Committee, Election};
use crate::rules::Rule;
use crate::search::{check_cap, committee_count, for_each_committee, SearchConfig};

/// Largest electorate the subset-enumerating PJR checker accepts.
pub const PJR_BRUTEFORCE_LIMIT: u64 = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Jr,
    Pjr,
    Ejr,
    Core,
    Pr,
    Monotone,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Jr => "jr",
            Axiom::Pjr => "pjr",
            Axiom::Ejr => "ejr",
            Axiom::Core => "core",
            Axiom::Pr => "pr",
            Axiom::Monotone => "monotone",
        })
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "jr" => Axiom::Jr,
            "pjr" => Axiom::Pjr,
            "ejr" => Axiom::Ejr,
            "core" => Axiom::Core,
            "pr" => Axiom::Pr,
            "monotone" => Axiom::Monotone,
            _ => {
                return Err(Error::Unknown {
                    kind: "axiom",
                    name: s.to_string(),
                })
            }
        })
    }
}

/// Voters as `(ballot class, count)` pairs, ascending by class.
pub type Coalition = Vec<(usize, u64)>;

/// Evidence of a violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `coalition` all approve `party`, has at least `level·n/k` voters, and
    /// every member has utility below `level`. JR witnesses have `level = 1`.
    Cohesive {
        party: usize,
        level: usize,
        coalition: Coalition,
    },
    /// `coalition` all approve `party` but the parties they approve jointly
    /// hold `represented < q(coalition)` seats.
    Underrepresented {
        party: usize,
        coalition: Coalition,
        represented: usize,
    },
    /// Every member of `coalition` strictly prefers `deviation`, which has
    /// at most `q(coalition)` seats.
    Deviation { coalition: Coalition, deviation: Committee },
    /// No balanced assignment exists; `coalition` is a set of voters whose
    /// approved seats cannot absorb them.
    Unassignable { assigned: u64, coalition: Coalition },
    /// `smaller` (for `k`) is not contained in `larger` (for `k + 1`).
    NotMonotone {
        k: usize,
        smaller: Committee,
        larger: Committee,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    fn pass(axiom: Axiom) -> Self {
        AxiomVerdict {
            axiom,
            pass: true,
            witness: None,
        }
    }

    fn fail(axiom: Axiom, witness: Witness) -> Self {
        AxiomVerdict {
            axiom,
            pass: false,
            witness: Some(witness),
        }
    }
}

fn size(coalition: &Coalition) -> u64 {
    coalition.iter().map(|&(_, m)| m).sum()
}

fn whole_classes(election: &Election, classes: impl IntoIterator<Item = usize>) -> Coalition {
    classes
        .into_iter()
        .map(|i| (i, election.ballots()[i].multiplicity()))
        .collect()
}

/// Finds the first `(party, level)` whose approvers with utility below
/// `level` number at least `level·n/k`; `level` ranges over `1..=max_level`.
fn cohesive_violation(election: &Election, committee: &Committee, max_level: usize) -> Option<Witness> {
    let utility = election.utilities(committee);
    let (n, k) = (election.n() as u128, election.k() as u128);
    for party in 0..election.num_parties() {
        for level in 1..=max_level {
            let classes: Vec<usize> = (0..utility.len())
                .filter(|&i| election.ballots()[i].approves(party) && utility[i] < level)
                .collect();
            let coalition = whole_classes(election, classes);
            if size(&coalition) as u128 * k >= level as u128 * n && !coalition.is_empty() {
                return Some(Witness::Cohesive {
                    party,
                    level,
                    coalition,
                });
            }
        }
    }
    None
}

/// Justified representation.
pub fn check_jr(election: &Election, committee: &Committee) -> Result<AxiomVerdict> {
    election.check_committee(committee)?;
    Ok(match cohesive_violation(election, committee, 1) {
        Some(w) => AxiomVerdict::fail(Axiom::Jr, w),
        None => AxiomVerdict::pass(Axiom::Jr),
    })
}

/// Extended justified representation, by scanning every party and level.
pub fn check_ejr(election: &Election, committee: &Committee) -> Result<AxiomVerdict> {
    election.check_committee(committee)?;
    Ok(match cohesive_violation(election, committee, election.k()) {
        Some(w) => AxiomVerdict::fail(Axiom::Ejr, w),
        None => AxiomVerdict::pass(Axiom::Ejr),
    })
}

/// Proportional justified representation via one minimum cut per party.
///
/// For the approvers `N_p` of party `p`, minimises `n·s(S) − k·|S|` over
/// `S ⊆ N_p`, where `s(S)` counts seats of parties approved by someone in
/// `S`. The minimum is at most `−n` exactly when some `S` has `s(S) < q(S)`.
pub fn check_pjr_mincut(election: &Election, committee: &Committee) -> Result<AxiomVerdict> {
    election.check_committee(committee)?;
    let (n, k) = (election.n() as i64, election.k() as i64);
    let parties = election.num_parties();
    for party in 0..parties {
        let classes: Vec<usize> = (0..election.ballots().len())
            .filter(|&i| election.ballots()[i].approves(party))
            .collect();
        if classes.is_empty() {
            continue;
        }
        let (source, sink) = (0, 1);
        let class_node = |x: usize| 2 + x;
        let party_node = |q: usize| 2 + classes.len() + q;
        let mut net = FlowNetwork::<i64>::new(2 + classes.len() + parties);
        let mut supporters = 0i64;
        for (x, &i) in classes.iter().enumerate() {
            let b = &election.ballots()[i];
            supporters += b.multiplicity() as i64;
            net.add_arc(source, class_node(x), k * b.multiplicity() as i64);
            for &q in b.parties() {
                net.add_arc(class_node(x), party_node(q), i64::MAX / 4);
            }
        }
        for q in 0..parties {
            net.add_arc(party_node(q), sink, n * committee.get(q) as i64);
        }
        let cut = net.max_flow(source, sink);
        if cut - k * supporters <= -n {
            let side = net.source_side(source);
            let members = classes
                .iter()
                .enumerate()
                .filter(|&(x, _)| side[class_node(x)])
                .map(|(_, &i)| i);
            let coalition = whole_classes(election, members);
            let represented = represented_seats(election, committee, &coalition);
            return Ok(AxiomVerdict::fail(
                Axiom::Pjr,
                Witness::Underrepresented {
                    party,
                    coalition,
                    represented,
                },
            ));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Pjr))
}

/// Seats held by parties that some member of the coalition approves.
fn represented_seats(election: &Election, committee: &Committee, coalition: &Coalition) -> usize {
    let mut covered = vec![false; election.num_parties()];
    for &(i, _) in coalition {
        for &p in election.ballots()[i].parties() {
            covered[p] = true;
        }
    }
    (0..covered.len())
        .filter(|&p| covered[p])
        .map(|p| committee.get(p))
        .sum()
}

/// Proportional justified representation by enumerating all voter subsets.
pub fn check_pjr_bruteforce(election: &Election, committee: &Committee) -> Result<AxiomVerdict> {
    election.check_committee(committee)?;
    let n = election.n();
    if n > PJR_BRUTEFORCE_LIMIT {
        return Err(Error::Capacity {
            method: "pjr-bruteforce",
            required: 1u128 << n.min(127),
            cap: 1u128 << PJR_BRUTEFORCE_LIMIT,
            fallback: "pjr",
        });
    }
    let voters: Vec<usize> = election
        .ballots()
        .iter()
        .enumerate()
        .flat_map(|(i, b)| std::iter::repeat_n(i, b.multiplicity() as usize))
        .collect();
    let k = election.k() as u64;
    for mask in 1u32..(1 << voters.len()) {
        let members: Vec<usize> = (0..voters.len())
            .filter(|v| mask >> v & 1 == 1)
            .map(|v| voters[v])
            .collect();
        let common = (0..election.num_parties()).find(|&p| members.iter().all(|&i| election.ballots()[i].approves(p)));
        let Some(party) = common else { continue };
        let mut coalition: Coalition = Vec::new();
        for &i in &members {
            match coalition.last_mut() {
                Some((c, m)) if *c == i => *m += 1,
                _ => coalition.push((i, 1)),
            }
        }
        let represented = represented_seats(election, committee, &coalition);
        if (represented as u64) < quota(members.len() as u64, n, k) {
            return Ok(AxiomVerdict::fail(
                Axiom::Pjr,
                Witness::Underrepresented {
                    party,
                    coalition,
                    represented,
                },
            ));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Pjr))
}

/// Number of deviations the core checker enumerates.
pub fn core_search_size(election: &Election) -> u128 {
    let approved = election.approval_counts().iter().filter(|&&c| c > 0).count();
    (1..=election.k()).fold(0u128, |acc, s| acc.saturating_add(committee_count(approved, s)))
}

/// Core stability by enumerating every deviation `T` with `1 ≤ |T| ≤ k`.
///
/// For each `T` the coalition is the set of voters strictly better off
/// under `T`; the committee is unstable iff some nonempty coalition has
/// `q(S) ≥ |T|`. Only parties with approvers are considered for `T`. The
/// first witness in order of size, then canonical order, is reported.
pub fn check_core_bruteforce(
    election: &Election,
    committee: &Committee,
    config: &SearchConfig,
) -> Result<AxiomVerdict> {
    election.check_committee(committee)?;
    check_cap("core", "ejr", core_search_size(election), config)?;
    let approved: Vec<usize> = election
        .approval_counts()
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(p, _)| p)
        .collect();
    let current = election.utilities(committee);
    let (n, k) = (election.n(), election.k() as u64);
    let first_at_size = |s: usize| -> Option<Witness> {
        let mut found = None;
        for_each_committee(approved.len(), s, |t| {
            if found.is_some() {
                return;
            }
            let mut deviation = Committee::empty(election.num_parties());
            for (x, &p) in approved.iter().enumerate() {
                for _ in 0..t.get(x) {
                    deviation.add_seat(p);
                }
            }
            let gain = election.utilities(&deviation);
            let classes = (0..current.len()).filter(|&i| gain[i] > current[i]);
            let coalition = whole_classes(election, classes);
            if !coalition.is_empty() && s as u64 <= quota(size(&coalition), n, k) {
                found = Some(Witness::Deviation { coalition, deviation });
            }
        });
        found
    };
    let sizes: Vec<usize> = (1..=election.k()).collect();
    let witness = if config.threads > 1 {
        let found: Vec<Option<Witness>> = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool")
            .install(|| sizes.par_iter().map(|&s| first_at_size(s)).collect());
        found.into_iter().flatten().next()
    } else {
        sizes.iter().find_map(|&s| first_at_size(s))
    };
    Ok(match witness {
        Some(w) => AxiomVerdict::fail(Axiom::Core, w),
        None => AxiomVerdict::pass(Axiom::Core),
    })
}

/// Perfect representation: the voters split into `k` groups of `n/k`, each
/// assigned a distinct seat all its members approve. Defined only when `k | n`.
pub fn check_pr(election: &Election, committee: &Committee) -> Result<AxiomVerdict> {
    election.check_committee(committee)?;
    let (n, k) = (election.n(), election.k() as u64);
    if n % k != 0 {
        return Err(Error::Domain(format!(
            "perfect representation needs k | n (n = {n}, k = {k})"
        )));
    }
    let group = (n / k) as i64;
    let classes = election.ballots().len();
    let (source, sink) = (0, 1);
    let class_node = |i: usize| 2 + i;
    let party_node = |p: usize| 2 + classes + p;
    let mut net = FlowNetwork::<i64>::new(2 + classes + election.num_parties());
    for (i, b) in election.ballots().iter().enumerate() {
        net.add_arc(source, class_node(i), b.multiplicity() as i64);
        for &p in b.parties() {
            if committee.get(p) > 0 {
                net.add_arc(class_node(i), party_node(p), i64::MAX / 4);
            }
        }
    }
    for p in committee.support() {
        net.add_arc(party_node(p), sink, committee.get(p) as i64 * group);
    }
    let assigned = net.max_flow(source, sink) as u64;
    if assigned == n {
        return Ok(AxiomVerdict::pass(Axiom::Pr));
    }
    let side = net.source_side(source);
    let coalition = whole_classes(election, (0..classes).filter(|&i| side[class_node(i)]));
    Ok(AxiomVerdict::fail(
        Axiom::Pr,
        Witness::Unassignable { assigned, coalition },
    ))
}

/// Committee monotonicity of `rule` on this profile for committee sizes `1..=k_max`.
pub fn check_committee_monotonic(
    rule: &Rule,
    election: &Election,
    k_max: usize,
    config: &SearchConfig,
) -> Result<AxiomVerdict> {
    let mut previous: Option<Committee> = None;
    for k in 1..=k_max {
        let committee = rule.apply(&election.with_k(k)?, config)?;
        if let Some(smaller) = previous {
            if !smaller.is_subset_of(&committee) {
                return Ok(AxiomVerdict::fail(
                    Axiom::Monotone,
                    Witness::NotMonotone {
                        k: k - 1,
                        smaller,
                        larger: committee,
                    },
                ));
            }
        }
        previous = Some(committee);
    }
    Ok(AxiomVerdict::pass(Axiom::Monotone))
}

/// Re-checks a failing verdict's witness against the axiom definition.
///
/// Returns `true` when the witness is well-formed and demonstrates the
/// violation; passing verdicts always return `true`.
pub fn revalidate(election: &Election, committee: &Committee, verdict: &AxiomVerdict) -> bool {
    let Some(witness) = &verdict.witness else {
        return verdict.pass;
    };
    if verdict.pass {
        return false;
    }
    let valid_coalition = |c: &Coalition| {
        !c.is_empty()
            && c.windows(2).all(|w| w[0].0 < w[1].0)
            && c.iter()
                .all(|&(i, m)| i < election.ballots().len() && m >= 1 && m <= election.ballots()[i].multiplicity())
    };
    let (n, k) = (election.n(), election.k() as u64);
    let utility =
        |i: usize, w: &Committee| -> usize { election.ballots()[i].parties().iter().map(|&p| w.get(p)).sum() };
    match witness {
        Witness::Cohesive {
            party,
            level,
            coalition,
        } => {
            valid_coalition(coalition)
                && coalition.iter().all(|&(i, _)| election.ballots()[i].approves(*party))
                && coalition.iter().all(|&(i, _)| utility(i, committee) < *level)
                && quota(size(coalition), n, k) >= *level as u64
                && (verdict.axiom != Axiom::Jr || *level == 1)
        }
        Witness::Underrepresented {
            party,
            coalition,
            represented,
        } => {
            valid_coalition(coalition)
                && coalition.iter().all(|&(i, _)| election.ballots()[i].approves(*party))
                && *represented == represented_seats(election, committee, coalition)
                && (*represented as u64) < quota(size(coalition), n, k)
        }
        Witness::Deviation { coalition, deviation } => {
            valid_coalition(coalition)
                && deviation.seats().len() == election.num_parties()
                && deviation.size() >= 1
                && coalition
                    .iter()
                    .all(|&(i, _)| utility(i, deviation) > utility(i, committee))
                && deviation.size() as u64 <= quota(size(coalition), n, k)
        }
        Witness::Unassignable { assigned, .. } => {
            // Hall's condition: a maximum flow below n certifies that no assignment exists
            n % k == 0 && *assigned < n && check_pr(election, committee).is_ok_and(|v| !v.pass)
        }
        Witness::NotMonotone { smaller, larger, k } => {
            smaller.size() == *k && larger.size() == k + 1 && !smaller.is_subset_of(larger)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_election;

    fn ex1() -> Election {
        parse_election("parties: p0 p1 p2 p3\nk: 6\n2 : p0\n2 : p0,p1,p2\n1 : p1,p3\n1 : p2,p3\n").unwrap()
    }

    #[test]
    fn example_one_ejr() {
        let e = ex1();
        let w = Committee::new(vec![4, 1, 1, 0]);
        assert!(check_jr(&e, &w).unwrap().pass);
        let v = check_ejr(&e, &w).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::Cohesive {
                party: 3,
                level: 2,
                coalition: vec![(2, 1), (3, 1)]
            })
        );
        assert!(revalidate(&e, &w, &v));
        assert!(check_pjr_mincut(&e, &w).unwrap().pass);
        assert!(check_pjr_bruteforce(&e, &w).unwrap().pass);
    }

    #[test]
    fn jr_failure() {
        let e = Election::from_names(&["A", "B"], &[(6, &["A"]), (3, &["B"])], 3).unwrap();
        let w = Committee::new(vec![3, 0]);
        let v = check_jr(&e, &w).unwrap();
        assert!(!v.pass);
        assert!(revalidate(&e, &w, &v));
        assert!(!check_pjr_mincut(&e, &w).unwrap().pass);
        assert!(!check_pjr_bruteforce(&e, &w).unwrap().pass);
    }

    #[test]
    fn single_party_passes() {
        let e = Election::from_names(&["A"], &[(3, &["A"])], 2).unwrap();
        let w = Committee::new(vec![2]);
        for v in [
            check_jr(&e, &w).unwrap(),
            check_ejr(&e, &w).unwrap(),
            check_pjr_mincut(&e, &w).unwrap(),
            check_core_bruteforce(&e, &w, &SearchConfig::default()).unwrap(),
        ] {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn pr_feasibility() {
        let e = Election::from_names(&["A", "B"], &[(1, &["A"]), (1, &["B"])], 2).unwrap();
        assert!(check_pr(&e, &Committee::new(vec![1, 1])).unwrap().pass);
        let v = check_pr(&e, &Committee::new(vec![2, 0])).unwrap();
        assert!(!v.pass);
        assert!(revalidate(&e, &Committee::new(vec![2, 0]), &v));
        let odd = e.with_k(3).unwrap();
        assert!(matches!(
            check_pr(&odd, &Committee::new(vec![2, 1])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pjr_bruteforce_limit() {
        let e = Election::from_names(&["A"], &[(15, &["A"])], 1).unwrap();
        assert!(matches!(
            check_pjr_bruteforce(&e, &Committee::new(vec![1])),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn tampered_witness_rejected() {
        let e = ex1();
        let w = Committee::new(vec![4, 1, 1, 0]);
        let mut v = check_ejr(&e, &w).unwrap();
        if let Some(Witness::Cohesive { level, .. }) = v.witness.as_mut() {
            *level = 3;
        }
        assert!(!revalidate(&e, &w, &v));
    }

    #[test]
    fn monotonicity_sweep() {
        let e = ex1();
        let v = check_committee_monotonic(&Rule::Av, &e, 8, &SearchConfig::default()).unwrap();
        assert!(v.pass);
    }

    #[test]
    fn axiom_names() {
        for a in [
            Axiom::Jr,
            Axiom::Pjr,
            Axiom::Ejr,
            Axiom::Core,
            Axiom::Pr,
            Axiom::Monotone,
        ] {
            assert_eq!(a.to_string().parse::<Axiom>().unwrap(), a);
        }
    }
}
