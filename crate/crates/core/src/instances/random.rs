//! Seeded random elections.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Ballot, Election};

type Draw<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Vec<bool> + 'a>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallotModel {
    /// Each voter approves each party independently with probability `density`.
    UniformSubset { density: f64 },
    /// Parties are split into `blocks` contiguous groups; each voter approves one whole group.
    DisjointBlocks { blocks: usize },
    /// Each voter copies one of `clusters` random centre ballots and flips each
    /// party with probability `noise`.
    Clustered { clusters: usize, noise: f64 },
}

/// A random election with parties `p0, p1, …` and identical ballots merged.
///
/// Deterministic for a fixed seed. Ballots that come out empty are replaced
/// by a single uniformly drawn party.
pub fn random_election(seed: u64, n: u64, parties: usize, k: usize, model: BallotModel) -> Result<Election> {
    if parties == 0 {
        return Err(Error::Structural("need at least one party".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subset = |rng: &mut ChaCha8Rng, p: f64| -> Vec<bool> { (0..parties).map(|_| rng.gen_bool(p)).collect() };
    let draw: Draw<'_> = match model {
        BallotModel::UniformSubset { density } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(Error::Structural(format!("density {density} is not in [0, 1]")));
            }
            Box::new(move |rng| subset(rng, density))
        }
        BallotModel::DisjointBlocks { blocks } => {
            if blocks == 0 || blocks > parties {
                return Err(Error::Structural(format!(
                    "cannot split {parties} parties into {blocks} blocks"
                )));
            }
            Box::new(move |rng| {
                let b = rng.gen_range(0..blocks);
                (0..parties).map(|p| p * blocks / parties == b).collect()
            })
        }
        BallotModel::Clustered { clusters, noise } => {
            if clusters == 0 || !(0.0..=1.0).contains(&noise) {
                return Err(Error::Structural(
                    "clustered model needs clusters ≥ 1 and noise in [0, 1]".into(),
                ));
            }
            let centres: Vec<Vec<bool>> = (0..clusters).map(|_| subset(&mut rng, 0.5)).collect();
            Box::new(move |rng| {
                let centre = centres.choose(rng).expect("clusters ≥ 1");
                centre.iter().map(|&a| a ^ rng.gen_bool(noise)).collect()
            })
        }
    };
    let mut classes: Vec<(Vec<usize>, u64)> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for _ in 0..n {
        let mut approved: Vec<usize> = draw(&mut rng)
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect();
        if approved.is_empty() {
            approved.push(rng.gen_range(0..parties));
        }
        match index.get(&approved) {
            Some(&i) => classes[i].1 += 1,
            None => {
                index.insert(approved.clone(), classes.len());
                classes.push((approved, 1));
            }
        }
    }
    let names = (0..parties).map(|p| format!("p{p}")).collect();
    Election::new(names, classes.into_iter().map(|(a, m)| Ballot::new(a, m)).collect(), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::serialize_election;

    #[test]
    fn reproducible() {
        let model = BallotModel::UniformSubset { density: 0.4 };
        let a = serialize_election(&random_election(1, 6, 4, 3, model).unwrap());
        let b = serialize_election(&random_election(1, 6, 4, 3, model).unwrap());
        assert_eq!(a, b);
        assert_eq!(random_election(1, 6, 4, 3, model).unwrap().n(), 6);
    }

    #[test]
    fn full_density() {
        let e = random_election(5, 10, 3, 2, BallotModel::UniformSubset { density: 1.0 }).unwrap();
        assert_eq!(e.ballots().len(), 1);
        assert_eq!(e.ballots()[0].parties(), &[0, 1, 2]);
    }

    #[test]
    fn blocks_are_disjoint() {
        let e = random_election(2, 40, 4, 2, BallotModel::DisjointBlocks { blocks: 4 }).unwrap();
        assert!(e.ballots().iter().all(|b| b.parties().len() == 1));
        let e = random_election(2, 40, 6, 2, BallotModel::DisjointBlocks { blocks: 2 }).unwrap();
        assert!(e
            .ballots()
            .iter()
            .all(|b| b.parties() == [0, 1, 2] || b.parties() == [3, 4, 5]));
    }

    #[test]
    fn clustered_nonempty() {
        let e = random_election(
            9,
            25,
            5,
            3,
            BallotModel::Clustered {
                clusters: 2,
                noise: 0.2,
            },
        )
        .unwrap();
        assert_eq!(e.n(), 25);
        assert!(e.ballots().iter().all(|b| !b.parties().is_empty()));
    }

    #[test]
    fn bad_parameters() {
        assert!(random_election(0, 5, 3, 2, BallotModel::UniformSubset { density: 1.5 }).is_err());
        assert!(random_election(0, 5, 3, 2, BallotModel::DisjointBlocks { blocks: 4 }).is_err());
        assert!(random_election(0, 5, 0, 2, BallotModel::UniformSubset { density: 0.5 }).is_err());
    }
}
