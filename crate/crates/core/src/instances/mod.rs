//! Worked examples and counterexamples, hardness reductions and random elections.
//!
//! Each worked example ships with [`Expectation`]s that [`verify`] checks
//! against the library's own rules and checkers.

mod graphs;
mod random;

pub use graphs::{connected_graphs, cubic_graphs, dedup_isomorphic, reduce_is_to_maxphragmen, reduce_is_to_pav, Graph};
pub use random::{random_election, BallotModel};

use crate::apportionment::PortioningMethod;
use crate::axioms::{self, Axiom};
use crate::error::{Error, Result};
use crate::model::{ratio, to_f64, Ballot, Committee, Election, Portioning, Rational};
use crate::portioning::{self, RandomPriorityMode};
use crate::rules::{self, Rule};
use crate::search::SearchConfig;

/// Something a worked example is known to produce.
#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    /// A portioning method returns exactly these shares.
    ExactShares {
        method: &'static str,
        shares: Vec<Rational>,
    },
    /// A portioning method returns these shares up to `tolerance`.
    ApproxShares {
        method: &'static str,
        shares: Vec<f64>,
        tolerance: f64,
    },
    /// A rule returns this committee.
    Committee { rule: &'static str, seats: Vec<usize> },
    /// The rule's committee violates the axiom.
    Violates { rule: &'static str, axiom: Axiom },
    /// The rule's committee satisfies the axiom.
    Satisfies { rule: &'static str, axiom: Axiom },
    /// The committee violates the axiom.
    CommitteeViolates { seats: Vec<usize>, axiom: Axiom },
    /// Sequential Phragmén bids per round (`None` for parties not listed),
    /// compared to `digits` significant digits.
    PhragmenBids {
        bids: Vec<Vec<Option<f64>>>,
        winners: Vec<usize>,
        digits: u32,
    },
    /// Phragmén-STV scores per round for the listed parties, compared to `decimals` places.
    StvScores {
        parties: Vec<usize>,
        scores: Vec<Vec<f64>>,
        decimals: i32,
    },
}

impl std::fmt::Display for Expectation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expectation::ExactShares { method, .. } => write!(f, "{method} shares (exact)"),
            Expectation::ApproxShares { method, tolerance, .. } => write!(f, "{method} shares (±{tolerance:e})"),
            Expectation::Committee { rule, seats } => write!(f, "{rule} committee {seats:?}"),
            Expectation::Violates { rule, axiom } => write!(f, "{rule} violates {axiom}"),
            Expectation::Satisfies { rule, axiom } => write!(f, "{rule} satisfies {axiom}"),
            Expectation::CommitteeViolates { seats, axiom } => write!(f, "{seats:?} violates {axiom}"),
            Expectation::PhragmenBids { bids, .. } => write!(f, "seqphragmen bids for {} rounds", bids.len()),
            Expectation::StvScores { scores, .. } => write!(f, "phragmen-stv scores for {} rounds", scores.len()),
        }
    }
}

/// A worked example together with its expected outputs.
#[derive(Debug, Clone)]
pub struct PaperExample {
    pub id: &'static str,
    pub election: Election,
    pub expectations: Vec<Expectation>,
    /// Set when the parameter lies below the range where the construction is known to work.
    pub outside_guarantee: bool,
}

/// Example identifiers, each with its default committee size.
pub const EXAMPLE_IDS: [(&str, usize); 12] = [
    ("ex1", 6),
    ("ex2", 6),
    ("ex3", 16),
    ("seqpav-jr", 10),
    ("av-jr", 3),
    ("mav-jr", 3),
    ("seqphragmen-table", 5),
    ("seqphragmen-ejr", 282),
    ("stv-table", 7),
    ("stv-ejr", 18),
    ("greedyav-pjr", 3),
    ("monroe-pjr", 6),
];

fn build(parties: &[String], ballots: &[(u64, Vec<usize>)], k: usize) -> Result<Election> {
    Election::new(
        parties.to_vec(),
        ballots.iter().map(|(m, a)| Ballot::new(a.clone(), *m)).collect(),
        k,
    )
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn fractions(list: &[(i64, i64)]) -> Vec<Rational> {
    list.iter().map(|&(a, b)| ratio(a, b)).collect()
}

/// Ballots over `A, X1, …, X6` in the Phragmén-STV counterexample.
fn stv_core_ballots() -> Vec<(u64, Vec<usize>)> {
    vec![
        (120, vec![0, 1]),
        (120, vec![0, 2]),
        (122, vec![1, 3]),
        (70, vec![2, 4]),
        (120, vec![4, 5]),
        (121, vec![5, 6]),
        (61, vec![3]),
        (50, vec![4]),
        (65, vec![6]),
    ]
}

/// Builds a worked example; `k` overrides the default committee size.
pub fn paper_example(id: &str, k: Option<usize>) -> Result<PaperExample> {
    let default_k = EXAMPLE_IDS
        .iter()
        .find(|(name, _)| *name == id)
        .map(|&(_, k)| k)
        .ok_or_else(|| Error::Unknown {
            kind: "example",
            name: id.to_string(),
        })?;
    let k = k.unwrap_or(default_k);
    let fixed = |what: &str| -> Result<()> {
        if k != default_k {
            return Err(Error::Domain(format!("{what} is only defined for k = {default_k}")));
        }
        Ok(())
    };
    use Expectation::*;
    let (election, expectations, threshold) = match id {
        "ex1" => {
            fixed("ex1")?;
            let e = build(
                &names(&["p0", "p1", "p2", "p3"]),
                &[(2, vec![0]), (2, vec![0, 1, 2]), (1, vec![1, 3]), (1, vec![2, 3])],
                6,
            )?;
            let ex = vec![
                ExactShares {
                    method: "cu",
                    shares: fractions(&[(4, 6), (1, 6), (1, 6), (0, 1)]),
                },
                Committee {
                    rule: "cu+dhondt",
                    seats: vec![4, 1, 1, 0],
                },
                Committee {
                    rule: "cu+quota",
                    seats: vec![4, 1, 1, 0],
                },
                Violates {
                    rule: "cu+dhondt",
                    axiom: Axiom::Ejr,
                },
                Satisfies {
                    rule: "maj+dhondt",
                    axiom: Axiom::Ejr,
                },
            ];
            (e, ex, 6)
        }
        "ex2" => {
            fixed("ex2")?;
            let e = build(
                &names(&["p0", "p1", "p2", "p3"]),
                &[
                    (2, vec![0]),
                    (1, vec![0, 1, 2]),
                    (1, vec![0, 1, 3]),
                    (1, vec![1]),
                    (1, vec![2, 3]),
                ],
                6,
            )?;
            let mut ex = vec![
                ExactShares {
                    method: "rp",
                    shares: fractions(&[(23, 45), (23, 90), (7, 60), (7, 60)]),
                },
                ApproxShares {
                    method: "nash",
                    shares: vec![0.5302, 0.2651, 0.1023, 0.1023],
                    tolerance: 1e-3,
                },
            ];
            for rule in ["rp+dhondt", "rp+quota", "nash+dhondt", "nash+quota"] {
                ex.push(Committee {
                    rule,
                    seats: vec![4, 2, 0, 0],
                });
                ex.push(Violates { rule, axiom: Axiom::Jr });
            }
            (e, ex, 6)
        }
        "ex3" => {
            let e = build(
                &names(&["p0", "p1", "p2", "p3", "p4"]),
                &[
                    (4, vec![0, 1]),
                    (3, vec![1, 2]),
                    (1, vec![2]),
                    (4, vec![0, 3]),
                    (3, vec![3, 4]),
                    (1, vec![4]),
                ],
                k,
            )?;
            let mut ex = vec![ExactShares {
                method: "maj",
                shares: fractions(&[(1, 2), (0, 1), (1, 4), (0, 1), (1, 4)]),
            }];
            if k == 16 {
                ex.extend([
                    Committee {
                        rule: "maj+dhondt",
                        seats: vec![8, 0, 4, 0, 4],
                    },
                    Committee {
                        rule: "maj+quota",
                        seats: vec![8, 0, 4, 0, 4],
                    },
                    Violates {
                        rule: "maj+dhondt",
                        axiom: Axiom::Core,
                    },
                    Satisfies {
                        rule: "maj+dhondt",
                        axiom: Axiom::Ejr,
                    },
                    Satisfies {
                        rule: "pav",
                        axiom: Axiom::Core,
                    },
                    Satisfies {
                        rule: "lspav",
                        axiom: Axiom::Core,
                    },
                ]);
            }
            (e, ex, 1)
        }
        "seqpav-jr" => {
            let mut parties = names(&["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9", "P10", "P11"]);
            let mut ballots = vec![
                (81, vec![0, 1]),
                (81, vec![0, 2]),
                (80, vec![1]),
                (80, vec![2]),
                (81, vec![3, 4]),
                (81, vec![3, 5]),
                (80, vec![4]),
                (80, vec![5]),
                (49, vec![6, 7]),
                (49, vec![6, 8]),
                (49, vec![6, 9]),
                (96, vec![7]),
                (96, vec![8]),
                (96, vec![9]),
                (120, vec![10]),
            ];
            for j in 12..=k + 1 {
                ballots.push((120, vec![parties.len()]));
                parties.push(format!("P{j}"));
            }
            let e = build(&parties, &ballots, k)?;
            let mut ex = Vec::new();
            if k >= 10 {
                // P1..Pk take one seat each; the last party is left out
                let mut seats = vec![1; k];
                seats.push(0);
                ex.push(Committee { rule: "seqpav", seats });
                ex.push(Violates {
                    rule: "seqpav",
                    axiom: Axiom::Jr,
                });
            }
            (e, ex, 10)
        }
        "av-jr" => {
            let m = k as u64;
            let e = build(&names(&["A", "B"]), &[(2 * m, vec![0]), (m, vec![1])], k)?;
            let mut ex = Vec::new();
            for rule in ["av", "sav"] {
                ex.push(Committee {
                    rule,
                    seats: vec![k, 0],
                });
                ex.push(Violates { rule, axiom: Axiom::Jr });
            }
            (e, ex, 3)
        }
        "mav-jr" => {
            let m = k as u64;
            let e = build(&names(&["A", "B", "C", "D"]), &[(m, vec![0, 1, 2]), (m, vec![3])], k)?;
            let ex = vec![
                Committee {
                    rule: "mav",
                    seats: vec![k, 0, 0, 0],
                },
                Violates {
                    rule: "mav",
                    axiom: Axiom::Jr,
                },
            ];
            (e, ex, 3)
        }
        "seqphragmen-table" => {
            fixed("seqphragmen-table")?;
            let e = build(
                &names(&["A", "B", "C", "D", "X"]),
                &[
                    (1, vec![0, 4]),
                    (1, vec![1, 4]),
                    (1, vec![2, 4]),
                    (1, vec![3, 4]),
                    (7, vec![0, 1, 2, 3]),
                ],
                5,
            )?;
            let table = [
                [0.125, 0.125, 0.125, 0.125, 0.25],
                [0.25, 0.23438, 0.23438, 0.23438, 0.28125],
                [0.34570, 0.35938, 0.33008, 0.33008, 0.33984],
                [0.42944, 0.44312, 0.45508, 0.41382, 0.42236],
                [0.50272, 0.51639, 0.52835, 0.53882, 0.52582],
            ];
            let ex = vec![PhragmenBids {
                bids: table.iter().map(|row| row.iter().map(|&b| Some(b)).collect()).collect(),
                winners: vec![0, 1, 2, 3, 0],
                digits: 5,
            }];
            (e, ex, 5)
        }
        "seqphragmen-ejr" => {
            let m = k as u64;
            if m < 6 {
                return Err(Error::Domain("seqphragmen-ejr needs 2k − 11 ≥ 1".into()));
            }
            let e = build(
                &names(&["A", "B", "C", "D", "E", "X"]),
                &[
                    (1, vec![0, 5]),
                    (1, vec![1, 5]),
                    (1, vec![2, 5]),
                    (1, vec![3, 5]),
                    (7, vec![0, 1, 2, 3]),
                    (2 * m - 11, vec![4]),
                ],
                k,
            )?;
            let mut ex = vec![];
            if k >= 282 {
                ex.push(Committee {
                    rule: "seqphragmen",
                    seats: vec![1, 1, 1, 1, k - 4, 0],
                });
                ex.push(Violates {
                    rule: "seqphragmen",
                    axiom: Axiom::Ejr,
                });
            }
            (e, ex, 282)
        }
        "stv-table" => {
            fixed("stv-table")?;
            // only the voters approving A or X1..X6, with one seat per round shown
            let e = build(
                &names(&["A", "X1", "X2", "X3", "X4", "X5", "X6"]),
                &stv_core_ballots(),
                7,
            )?;
            let ex = vec![StvScores {
                parties: (0..=6).collect(),
                scores: vec![
                    vec![240.0, 242.0, 190.0, 183.0, 240.0, 241.0, 186.0],
                    vec![179.86, 120.71, 190.0, 121.86, 240.0, 241.0, 186.0],
                    vec![179.86, 120.71, 190.0, 121.86, 179.61, 119.71, 125.11],
                    vec![103.26, 120.71, 68.71, 121.86, 134.92, 119.71, 125.11],
                    vec![103.26, 120.71, 45.96, 121.86, 13.64, 66.13, 125.11],
                    vec![103.26, 120.71, 45.96, 121.86, 13.64, 7.86, 3.82],
                    vec![103.26, 60.14, 45.96, 0.57, 13.64, 7.86, 3.82],
                ],
                decimals: 2,
            }];
            (e, ex, 7)
        }
        "stv-ejr" => {
            if k < 18 {
                return Err(Error::Domain("stv-ejr needs k ≥ 18 for its singleton blocks".into()));
            }
            let mut parties = vec!["A".to_string()];
            parties.extend((1..=k).map(|j| format!("X{j}")));
            let mut ballots = stv_core_ballots();
            ballots.extend((7..=15).map(|j| (109, vec![j])));
            ballots.extend((16..=18).map(|j| (110, vec![j])));
            ballots.extend((19..=k).map(|j| (120, vec![j])));
            let e = build(&parties, &ballots, k)?;
            let mut seats = vec![0];
            seats.extend(std::iter::repeat_n(1, k));
            let ex = vec![
                Committee {
                    rule: "phragmen-stv",
                    seats,
                },
                Violates {
                    rule: "phragmen-stv",
                    axiom: Axiom::Ejr,
                },
            ];
            (e, ex, 18)
        }
        "greedyav-pjr" => {
            if k < 2 {
                return Err(Error::Domain("greedyav-pjr needs k ≥ 2".into()));
            }
            let mut parties = vec!["A".to_string()];
            parties.extend((1..=k).map(|j| format!("X{j}")));
            let mut ballots = vec![(2 * k as u64, vec![0])];
            ballots.extend((1..=k).map(|j| (1, vec![j])));
            let e = build(&parties, &ballots, k)?;
            // A once, then X1..X(k−1)
            let mut seats = vec![1; k];
            seats.push(0);
            let mut ex = Vec::new();
            for rule in ["greedyav", "ccav"] {
                ex.push(Committee {
                    rule,
                    seats: seats.clone(),
                });
                ex.push(Violates {
                    rule,
                    axiom: Axiom::Pjr,
                });
            }
            (e, ex, 3)
        }
        "monroe-pjr" => {
            if k < 4 {
                return Err(Error::Domain("monroe-pjr needs k ≥ 4".into()));
            }
            let mut parties = vec!["A".to_string()];
            parties.extend((1..=k - 3).map(|j| format!("X{j}")));
            let mut ballots = vec![(6, vec![0])];
            ballots.extend((1..=k - 3).map(|j| (1, vec![j])));
            let e = build(&parties, &ballots, k)?;
            let mut seats = vec![3];
            seats.extend(std::iter::repeat_n(1, k - 3));
            let mut ex = Vec::new();
            for rule in ["monroe", "greedymonroe", "hareav"] {
                ex.push(Committee {
                    rule,
                    seats: seats.clone(),
                });
                ex.push(Violates {
                    rule,
                    axiom: Axiom::Pjr,
                });
            }
            (e, ex, 6)
        }
        _ => unreachable!("id validated above"),
    };
    Ok(PaperExample {
        id: EXAMPLE_IDS.iter().find(|(name, _)| *name == id).unwrap().0,
        election,
        expectations,
        outside_guarantee: k < threshold,
    })
}

/// Outcome of checking one expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub description: String,
    pub pass: bool,
    pub detail: String,
}

fn portioning_by_name(election: &Election, method: &str) -> Result<Portioning> {
    let method: PortioningMethod = method.parse()?;
    match method {
        PortioningMethod::RandomPriority(_) => portioning::random_priority(election, RandomPriorityMode::Exact),
        other => other.apply(election),
    }
}

fn axiom_verdict(election: &Election, committee: &Committee, axiom: Axiom, config: &SearchConfig) -> Result<bool> {
    let verdict = match axiom {
        Axiom::Jr => axioms::check_jr(election, committee)?,
        Axiom::Pjr => axioms::check_pjr_mincut(election, committee)?,
        Axiom::Ejr => axioms::check_ejr(election, committee)?,
        Axiom::Core => axioms::check_core_bruteforce(election, committee, config)?,
        Axiom::Pr => axioms::check_pr(election, committee)?,
        Axiom::Monotone => {
            return Err(Error::Domain(
                "monotonicity is a property of rules, not committees".into(),
            ))
        }
    };
    if !verdict.pass && !axioms::revalidate(election, committee, &verdict) {
        return Err(Error::Structural(format!("{axiom} witness failed revalidation")));
    }
    Ok(verdict.pass)
}

fn significant(x: f64, digits: u32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(digits as i32 - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

/// Checks one expectation against the election.
pub fn check_expectation(election: &Election, expectation: &Expectation, config: &SearchConfig) -> Result<Check> {
    let rule_committee = |rule: &str| -> Result<Committee> { rule.parse::<Rule>()?.apply(election, config) };
    let (pass, detail) = match expectation {
        Expectation::ExactShares { method, shares } => {
            let got = portioning_by_name(election, method)?;
            let detail = got.display(election).to_string();
            (got.as_exact() == Some(shares.as_slice()), detail)
        }
        Expectation::ApproxShares {
            method,
            shares,
            tolerance,
        } => {
            let got = portioning_by_name(election, method)?.to_f64();
            let ok = got.len() == shares.len() && got.iter().zip(shares).all(|(a, b)| (a - b).abs() <= *tolerance);
            (ok, format!("{got:.4?}"))
        }
        Expectation::Committee { rule, seats } => {
            let got = rule_committee(rule)?;
            let detail = got.display(election).to_string();
            (got.seats() == seats.as_slice(), detail)
        }
        Expectation::Violates { rule, axiom } => {
            let pass = axiom_verdict(election, &rule_committee(rule)?, *axiom, config)?;
            (!pass, if pass { "satisfied" } else { "violated" }.to_string())
        }
        Expectation::Satisfies { rule, axiom } => {
            let pass = axiom_verdict(election, &rule_committee(rule)?, *axiom, config)?;
            (pass, if pass { "satisfied" } else { "violated" }.to_string())
        }
        Expectation::CommitteeViolates { seats, axiom } => {
            let pass = axiom_verdict(election, &Committee::new(seats.clone()), *axiom, config)?;
            (!pass, if pass { "satisfied" } else { "violated" }.to_string())
        }
        Expectation::PhragmenBids { bids, winners, digits } => {
            let trace = rules::seq_phragmen_trace(&election.with_k(bids.len())?);
            let mut ok = trace.iter().map(|r| r.winner).collect::<Vec<_>>() == *winners;
            for (round, expected) in trace.iter().zip(bids) {
                for (got, want) in round.bids.iter().zip(expected) {
                    let got = got.as_ref().map(|b| significant(to_f64(b), *digits));
                    ok &= got == want.map(|w| significant(w, *digits));
                }
            }
            let first = trace
                .iter()
                .map(|r| to_f64(r.bids[r.winner].as_ref().unwrap()))
                .collect::<Vec<_>>();
            (ok, format!("winning bids {first:.5?}"))
        }
        Expectation::StvScores {
            parties,
            scores,
            decimals,
        } => {
            let trace = rules::phragmen_stv_trace(election);
            let scale = 10f64.powi(*decimals);
            let round = |x: f64| (x * scale).round() / scale;
            let mut ok = trace.len() >= scores.len();
            for (r, expected) in trace.iter().zip(scores) {
                for (&p, &want) in parties.iter().zip(expected) {
                    ok &= round(to_f64(&r.scores[p])) == round(want);
                }
            }
            let winners: Vec<&str> = trace
                .iter()
                .take(scores.len())
                .map(|r| election.party_name(r.winner))
                .collect();
            (ok, format!("round winners {winners:?}"))
        }
    };
    Ok(Check {
        description: expectation.to_string(),
        pass,
        detail,
    })
}

/// Checks every expectation of an example.
pub fn verify(example: &PaperExample, config: &SearchConfig) -> Result<Vec<Check>> {
    example
        .expectations
        .iter()
        .map(|e| check_expectation(&example.election, e, config))
        .collect()
}
