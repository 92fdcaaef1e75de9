//! Portioning methods: from approval ballots to party vote shares.
//!
//! All four methods here are faithful: when every ballot approves a single
//! party, party `p` receives exactly the fraction of voters who approve it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{int, Election, Portioning, Rational};

/// Largest electorate for which random priority is averaged over all `n!` orders.
pub const RANDOM_PRIORITY_EXACT_LIMIT: u64 = 10;

/// Each voter is assigned to the approved party with the highest approval
/// count (lowest index on ties); shares are the assignment fractions.
pub fn conditional_utilitarian(election: &Election) -> Portioning {
    let counts = election.approval_counts();
    let mut assigned = vec![0u64; election.num_parties()];
    for ballot in election.ballots() {
        let best = ballot
            .parties()
            .iter()
            .copied()
            .fold(None, |best: Option<usize>, p| match best {
                Some(b) if counts[b] >= counts[p] => Some(b),
                _ => Some(p),
            })
            .expect("ballots are nonempty");
        assigned[best] += ballot.multiplicity();
    }
    fractions(&assigned, election.n())
}

/// One round of majoritarian portioning: `party` took the `voters` active approvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajoritarianRound {
    pub party: usize,
    pub voters: u64,
    /// Ballot classes deactivated in this round.
    pub classes: Vec<usize>,
}

/// The rounds of majoritarian portioning, in order.
pub fn majoritarian_rounds(election: &Election) -> Vec<MajoritarianRound> {
    let ballots = election.ballots();
    let mut active_party = vec![true; election.num_parties()];
    let mut active_class = vec![true; ballots.len()];
    let mut remaining = election.n();
    let mut rounds = Vec::new();
    while remaining > 0 {
        let mut support = vec![0u64; election.num_parties()];
        for (c, b) in ballots.iter().enumerate().filter(|(c, _)| active_class[*c]) {
            debug_assert!(c < active_class.len());
            for &p in b.parties() {
                support[p] += b.multiplicity();
            }
        }
        // strict comparison keeps the lowest index on ties
        let mut winner = None;
        for p in (0..support.len()).filter(|&p| active_party[p]) {
            if winner.is_none_or(|w: usize| support[p] > support[w]) {
                winner = Some(p);
            }
        }
        let party = winner.expect("an active voter approves an active party");
        let classes: Vec<usize> = (0..ballots.len())
            .filter(|&c| active_class[c] && ballots[c].approves(party))
            .collect();
        for &c in &classes {
            active_class[c] = false;
        }
        active_party[party] = false;
        remaining -= support[party];
        rounds.push(MajoritarianRound {
            party,
            voters: support[party],
            classes,
        });
    }
    rounds
}

/// Majoritarian portioning: repeatedly give the party with the most active
/// approvers the share of those approvers, then deactivate both.
pub fn majoritarian(election: &Election) -> Portioning {
    let mut weights = vec![0u64; election.num_parties()];
    for round in majoritarian_rounds(election) {
        weights[round.party] = round.voters;
    }
    fractions(&weights, election.n())
}

/// How random priority averages over voter orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomPriorityMode {
    /// Exact average over all `n!` orders (requires `n ≤ 10`).
    Exact,
    /// Monte Carlo average over `trials` uniformly random orders.
    Sampled { seed: u64, trials: usize },
}

/// Random priority portioning.
///
/// For a fixed voter order the feasible set starts as all parties; each voter
/// in turn narrows it to their approved parties if that leaves something, and
/// is skipped otherwise. The final feasible set shares the unit of mass
/// uniformly. The result is the average over voter orders.
pub fn random_priority(election: &Election, mode: RandomPriorityMode) -> Result<Portioning> {
    match mode {
        RandomPriorityMode::Exact => {
            if election.n() > RANDOM_PRIORITY_EXACT_LIMIT {
                return Err(Error::Capacity {
                    method: "random priority (exact)",
                    required: factorial(election.n()),
                    cap: factorial(RANDOM_PRIORITY_EXACT_LIMIT),
                    fallback: "random priority in sampled mode (--seed/--trials)",
                });
            }
            let mut solver = PriorityAverager {
                election,
                memo: HashMap::new(),
            };
            let all: Vec<usize> = (0..election.num_parties()).collect();
            let counts: Vec<u64> = election.ballots().iter().map(|b| b.multiplicity()).collect();
            Portioning::exact(solver.average(all, counts))
        }
        RandomPriorityMode::Sampled { seed, trials } => {
            if trials == 0 {
                return Err(Error::Structural(
                    "sampled random priority needs at least one trial".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order = election.voter_classes();
            let mut total = vec![0f64; election.num_parties()];
            for _ in 0..trials {
                order.shuffle(&mut rng);
                let feasible = priority_outcome(election, order.iter().copied());
                let share = 1.0 / feasible.len() as f64;
                for p in feasible {
                    total[p] += share;
                }
            }
            let mut shares: Vec<f64> = total.iter().map(|t| t / trials as f64).collect();
            let sum: f64 = shares.iter().sum();
            shares.iter_mut().for_each(|s| *s /= sum);
            Portioning::approximate(shares)
        }
    }
}

/// Final feasible set for one voter order (given as ballot class indices).
pub fn priority_outcome(election: &Election, order: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut feasible: Vec<usize> = (0..election.num_parties()).collect();
    for c in order {
        if feasible.len() == 1 {
            break;
        }
        let ballot = &election.ballots()[c];
        let narrowed: Vec<usize> = feasible.iter().copied().filter(|&p| ballot.approves(p)).collect();
        if !narrowed.is_empty() {
            feasible = narrowed;
        }
    }
    feasible
}

/// Expected outcome of the random-order process, computed over the multiset
/// of remaining ballot classes. Drawing the next voter uniformly among the
/// remaining ones reproduces the uniform average over all `n!` orders.
struct PriorityAverager<'a> {
    election: &'a Election,
    memo: HashMap<(Vec<usize>, Vec<u64>), Vec<Rational>>,
}

impl PriorityAverager<'_> {
    fn average(&mut self, feasible: Vec<usize>, counts: Vec<u64>) -> Vec<Rational> {
        let remaining: u64 = counts.iter().sum();
        let mut result = vec![Rational::zero(); self.election.num_parties()];
        if feasible.len() == 1 || remaining == 0 {
            let share = Rational::new(BigInt::from(1), BigInt::from(feasible.len()));
            for &p in &feasible {
                result[p] = share.clone();
            }
            return result;
        }
        let key = (feasible, counts);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (feasible, counts) = key;
        for c in 0..counts.len() {
            if counts[c] == 0 {
                continue;
            }
            let ballot = &self.election.ballots()[c];
            let narrowed: Vec<usize> = feasible.iter().copied().filter(|&p| ballot.approves(p)).collect();
            let next = if narrowed.is_empty() {
                feasible.clone()
            } else {
                narrowed
            };
            let mut rest = counts.clone();
            rest[c] -= 1;
            let weight = Rational::new(BigInt::from(counts[c]), BigInt::from(remaining));
            for (acc, v) in result.iter_mut().zip(self.average(next, rest)) {
                *acc += &weight * v;
            }
        }
        self.memo.insert((feasible, counts), result.clone());
        result
    }
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

/// Default stationarity tolerance for [`nash`].
pub const NASH_TOLERANCE: f64 = 1e-9;
const NASH_MAX_ITERATIONS: usize = 200_000;

/// Nash portioning: the point of the simplex maximising `Σ_i log(Σ_{p∈A_i} r(p))`.
///
/// Solved by projected gradient ascent with backtracking. Convergence is
/// declared when the projected-gradient residual `‖r − Π(r + ∇f(r))‖∞` drops
/// to `tolerance`.
pub fn nash(election: &Election, tolerance: f64) -> Result<Portioning> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::Structural("tolerance must be positive".into()));
    }
    let objective = NashObjective::new(election);
    let counts = election.approval_counts();
    let approved = counts.iter().filter(|&&c| c > 0).count() as f64;
    let mut r: Vec<f64> = counts
        .iter()
        .map(|&c| if c > 0 { 1.0 / approved } else { 0.0 })
        .collect();
    let mut value = objective.value(&r);
    let mut step = 1.0;
    let mut residual = f64::INFINITY;
    let mut next_polish = 1e-4;
    for _ in 0..NASH_MAX_ITERATIONS {
        let grad = objective.gradient(&r);
        residual = stationarity(&r, &grad);
        if residual <= tolerance {
            return Portioning::approximate(normalized(r));
        }
        if residual <= next_polish {
            next_polish = residual / 10.0;
            if let Some(polished) = objective.newton_polish(&r) {
                let polished_value = objective.value(&polished);
                if polished_value >= value && stationarity(&polished, &objective.gradient(&polished)) <= tolerance {
                    return Portioning::approximate(normalized(polished));
                }
            }
        }
        loop {
            let candidate = project_to_simplex(&r.iter().zip(&grad).map(|(x, g)| x + step * g).collect::<Vec<_>>());
            let candidate_value = objective.value(&candidate);
            let ascent: f64 = grad
                .iter()
                .zip(candidate.iter().zip(&r))
                .map(|(g, (c, x))| g * (c - x))
                .sum();
            if candidate_value.is_finite() && candidate_value >= value + 1e-4 * ascent {
                let moved = candidate.iter().zip(&r).any(|(a, b)| a != b);
                r = candidate;
                value = candidate_value;
                step = (step * 2.0).min(1e6);
                if !moved {
                    // no representable progress left at this precision
                    return Portioning::approximate(normalized(r));
                }
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                return Err(Error::Numerical {
                    method: "Nash portioning",
                    residual,
                    iterations: NASH_MAX_ITERATIONS,
                });
            }
        }
    }
    Err(Error::Numerical {
        method: "Nash portioning",
        residual,
        iterations: NASH_MAX_ITERATIONS,
    })
}

/// `Σ_i m_i log(Σ_{p∈A_i} r(p)) / n` and its gradient.
struct NashObjective<'a> {
    election: &'a Election,
}

impl<'a> NashObjective<'a> {
    fn new(election: &'a Election) -> Self {
        NashObjective { election }
    }

    fn support(ballot: &crate::model::Ballot, r: &[f64]) -> f64 {
        ballot.parties().iter().map(|&p| r[p]).sum()
    }

    fn value(&self, r: &[f64]) -> f64 {
        let n = self.election.n() as f64;
        self.election
            .ballots()
            .iter()
            .map(|b| b.multiplicity() as f64 * Self::support(b, r).ln())
            .sum::<f64>()
            / n
    }

    /// Newton's method restricted to the current support, with the sum kept at 1.
    fn newton_polish(&self, start: &[f64]) -> Option<Vec<f64>> {
        let n = self.election.n() as f64;
        let free: Vec<usize> = (0..start.len()).filter(|&p| start[p] > 1e-12).collect();
        let m = free.len();
        let mut r = start.to_vec();
        for _ in 0..100 {
            let grad = self.gradient(&r);
            // KKT system [H 1; 1ᵀ 0] [d; μ] = [−g; 0] on the free coordinates
            let mut a = vec![vec![0.0; m + 2]; m + 1];
            for b in self.election.ballots() {
                let s = Self::support(b, &r);
                let w = b.multiplicity() as f64 / (n * s * s);
                for (x, &p) in free.iter().enumerate() {
                    if !b.approves(p) {
                        continue;
                    }
                    for (y, &q) in free.iter().enumerate() {
                        if b.approves(q) {
                            a[x][y] -= w;
                        }
                    }
                }
            }
            for (x, &p) in free.iter().enumerate() {
                // tiny regularisation keeps directions the objective ignores at zero
                a[x][x] -= 1e-12;
                a[x][m] = 1.0;
                a[m][x] = 1.0;
                a[x][m + 1] = -grad[p];
            }
            let d = solve(a)?;
            let mut t = 1.0f64;
            for (x, &p) in free.iter().enumerate() {
                if d[x] < 0.0 {
                    t = t.min(-r[p] / d[x] * 0.999);
                }
            }
            let value = self.value(&r);
            let mut accepted = false;
            while t > 1e-12 {
                let mut candidate = r.clone();
                for (x, &p) in free.iter().enumerate() {
                    candidate[p] += t * d[x];
                }
                if self.value(&candidate) >= value - 1e-15 {
                    r = candidate;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            let size = d[..m].iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            if !accepted || size * t < 1e-15 {
                break;
            }
        }
        Some(r)
    }

    fn gradient(&self, r: &[f64]) -> Vec<f64> {
        let n = self.election.n() as f64;
        let mut grad = vec![0.0; r.len()];
        for b in self.election.ballots() {
            let w = b.multiplicity() as f64 / (n * Self::support(b, r));
            for &p in b.parties() {
                grad[p] += w;
            }
        }
        grad
    }
}

/// Welfare `Σ_i m_i log(Σ_{p∈A_i} r(p))` of a share vector; `-inf` if some voter gets nothing.
pub fn nash_log_welfare(election: &Election, shares: &[f64]) -> f64 {
    NashObjective::new(election).value(shares) * election.n() as f64
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let rows = a.len();
    for col in 0..rows {
        let pivot = (col..rows).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, values) in a.iter_mut().enumerate() {
            if row != col {
                let factor = values[col] / pivot_row[col];
                for (v, p) in values[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= factor * p;
                }
            }
        }
    }
    Some((0..rows).map(|i| a[i][rows] / a[i][i]).collect())
}

fn stationarity(r: &[f64], grad: &[f64]) -> f64 {
    let moved = project_to_simplex(&r.iter().zip(grad).map(|(x, g)| x + g).collect::<Vec<_>>());
    moved.iter().zip(r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

fn normalized(mut r: Vec<f64>) -> Vec<f64> {
    let total: f64 = r.iter().sum();
    r.iter_mut().for_each(|x| *x /= total);
    r
}

fn fractions(weights: &[u64], n: u64) -> Portioning {
    let n = int(n);
    Portioning::Exact(weights.iter().map(|&w| int(w) / &n).collect())
}
