//! Apportionment methods and their composition with portioning methods.
//!
//! Both methods satisfy lower quota and committee monotonicity. Quotient
//! ties go to the party with the lowest index.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::model::{Committee, Election, Portioning, Rational};
use crate::portioning::{self, RandomPriorityMode};

/// Share arithmetic needed by the divisor-style methods.
trait Share: Clone + PartialOrd {
    fn divided_by(&self, d: usize) -> Self;
    fn times(&self, m: usize) -> Self;
    fn from_count(c: usize) -> Self;
    fn is_positive_share(&self) -> bool;
}

impl Share for Rational {
    fn divided_by(&self, d: usize) -> Self {
        self / BigInt::from(d)
    }
    fn times(&self, m: usize) -> Self {
        self * BigInt::from(m)
    }
    fn from_count(c: usize) -> Self {
        Rational::from_integer(BigInt::from(c))
    }
    fn is_positive_share(&self) -> bool {
        self.is_positive()
    }
}

impl Share for f64 {
    fn divided_by(&self, d: usize) -> Self {
        self / d as f64
    }
    fn times(&self, m: usize) -> Self {
        self * m as f64
    }
    fn from_count(c: usize) -> Self {
        c as f64
    }
    fn is_positive_share(&self) -> bool {
        *self > 0.0
    }
}

/// Assigns `k` seats one at a time to the eligible party with the largest
/// `r(p) / (s(p) + 1)`. `eligible(p, seats, j)` is asked in iteration `j` (1-based).
fn highest_quotient<S: Share>(
    shares: &[S],
    k: usize,
    eligible: impl Fn(&S, usize, usize) -> bool,
) -> Option<Committee> {
    let mut committee = Committee::empty(shares.len());
    for j in 1..=k {
        let mut best: Option<(usize, S)> = None;
        for (p, share) in shares.iter().enumerate() {
            let seats = committee.get(p);
            if !eligible(share, seats, j) {
                continue;
            }
            let quotient = share.divided_by(seats + 1);
            if best.as_ref().is_none_or(|(_, b)| quotient > *b) {
                best = Some((p, quotient));
            }
        }
        committee.add_seat(best?.0);
    }
    Some(committee)
}

/// D'Hondt (Jefferson) method.
pub fn dhondt(portioning: &Portioning, k: usize) -> Committee {
    fn any<S>(_: &S, _: usize, _: usize) -> bool {
        true
    }
    match portioning {
        Portioning::Exact(v) => highest_quotient(v, k, any),
        Portioning::Approximate(v) => highest_quotient(v, k, any),
    }
    .expect("every party is eligible")
}

/// The quota method: D'Hondt restricted in iteration `j` to parties with `s(p)/j < r(p)`.
pub fn quota_method(portioning: &Portioning, k: usize) -> Result<Committee> {
    fn below_upper_quota<S: Share>(share: &S, seats: usize, j: usize) -> bool {
        S::from_count(seats) < share.times(j)
    }
    let result = match portioning {
        Portioning::Exact(v) => highest_quotient(v, k, below_upper_quota),
        Portioning::Approximate(v) => highest_quotient(v, k, below_upper_quota),
    };
    result.ok_or_else(|| {
        let positive = match portioning {
            Portioning::Exact(v) => v.iter().any(|s| s.is_positive_share()),
            Portioning::Approximate(v) => v.iter().any(|s| s.is_positive_share()),
        };
        Error::Structural(if positive {
            "quota method found no eligible party".into()
        } else {
            "quota method needs a portioning with a positive share".into()
        })
    })
}

/// `⌊k·r(p)⌋` for each party; the seats lower quota guarantees.
pub fn lower_quotas(shares: &[Rational], k: usize) -> Vec<usize> {
    shares
        .iter()
        .map(|s| {
            let scaled = s * BigInt::from(k);
            let floor = scaled.floor().to_integer();
            usize::try_from(floor).expect("nonnegative seat count")
        })
        .collect()
}

/// Portioning methods that can be composed with an apportionment method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortioningMethod {
    ConditionalUtilitarian,
    RandomPriority(RandomPriorityMode),
    Nash,
    Majoritarian,
}

impl PortioningMethod {
    pub fn apply(&self, election: &Election) -> Result<Portioning> {
        match self {
            PortioningMethod::ConditionalUtilitarian => Ok(portioning::conditional_utilitarian(election)),
            PortioningMethod::RandomPriority(mode) => portioning::random_priority(election, *mode),
            PortioningMethod::Nash => portioning::nash(election, portioning::NASH_TOLERANCE),
            PortioningMethod::Majoritarian => Ok(portioning::majoritarian(election)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PortioningMethod::ConditionalUtilitarian => "cu",
            PortioningMethod::RandomPriority(_) => "rp",
            PortioningMethod::Nash => "nash",
            PortioningMethod::Majoritarian => "maj",
        }
    }
}

impl FromStr for PortioningMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cu" => PortioningMethod::ConditionalUtilitarian,
            "rp" => PortioningMethod::RandomPriority(RandomPriorityMode::Exact),
            "nash" => PortioningMethod::Nash,
            "maj" => PortioningMethod::Majoritarian,
            _ => {
                return Err(Error::Unknown {
                    kind: "portioning method",
                    name: s.to_string(),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApportionmentMethod {
    DHondt,
    Quota,
}

impl ApportionmentMethod {
    pub fn apply(&self, portioning: &Portioning, k: usize) -> Result<Committee> {
        match self {
            ApportionmentMethod::DHondt => Ok(dhondt(portioning, k)),
            ApportionmentMethod::Quota => quota_method(portioning, k),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ApportionmentMethod::DHondt => "dhondt",
            ApportionmentMethod::Quota => "quota",
        }
    }
}

impl FromStr for ApportionmentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dhondt" => Ok(ApportionmentMethod::DHondt),
            "quota" => Ok(ApportionmentMethod::Quota),
            _ => Err(Error::Unknown {
                kind: "apportionment method",
                name: s.to_string(),
            }),
        }
    }
}

/// A party-approval rule built as portioning followed by apportionment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Composed {
    pub portioning: PortioningMethod,
    pub apportionment: ApportionmentMethod,
}

/// Composes a portioning method with an apportionment method.
pub fn compose(portioning: PortioningMethod, apportionment: ApportionmentMethod) -> Composed {
    Composed {
        portioning,
        apportionment,
    }
}

impl Composed {
    pub fn apply(&self, election: &Election) -> Result<Committee> {
        let shares = self.portioning.apply(election)?;
        self.apportionment.apply(&shares, election.k())
    }
}

impl fmt::Display for Composed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.portioning.name(), self.apportionment.name())
    }
}

impl FromStr for Composed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, a) = s.split_once('+').ok_or_else(|| Error::Unknown {
            kind: "composed rule",
            name: s.to_string(),
        })?;
        Ok(compose(p.parse()?, a.parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    fn exact(v: &[(i64, i64)]) -> Portioning {
        Portioning::exact(v.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    #[test]
    fn dhondt_examples() {
        assert_eq!(
            dhondt(&exact(&[(4, 6), (1, 6), (1, 6), (0, 1)]), 6).seats(),
            &[4, 1, 1, 0]
        );
        assert_eq!(dhondt(&exact(&[(1, 1), (0, 1)]), 7).seats(), &[7, 0]);
        assert_eq!(
            dhondt(&exact(&[(23, 45), (23, 90), (7, 60), (7, 60)]), 6).seats(),
            &[4, 2, 0, 0]
        );
    }

    #[test]
    fn quota_method_examples() {
        assert_eq!(
            quota_method(&exact(&[(23, 45), (23, 90), (7, 60), (7, 60)]), 6)
                .unwrap()
                .seats(),
            &[4, 2, 0, 0]
        );
        assert_eq!(
            quota_method(&exact(&[(1, 2), (1, 4), (1, 4)]), 16).unwrap().seats(),
            &[8, 4, 4]
        );
        assert_eq!(quota_method(&exact(&[(1, 1), (0, 1)]), 5).unwrap().seats(), &[5, 0]);
    }

    #[test]
    fn quota_method_differs_from_dhondt() {
        // D'Hondt over-rewards the large party here; upper quota stops the quota method
        let r = exact(&[(1, 2), (1, 10), (1, 10), (1, 10), (1, 10), (1, 10)]);
        assert_eq!(dhondt(&r, 3).seats(), &[3, 0, 0, 0, 0, 0]);
        assert_eq!(quota_method(&r, 3).unwrap().seats(), &[2, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn zero_seats_is_empty() {
        assert_eq!(dhondt(&exact(&[(1, 2), (1, 2)]), 0).size(), 0);
        assert_eq!(quota_method(&exact(&[(1, 2), (1, 2)]), 0).unwrap().size(), 0);
    }

    #[test]
    fn all_zero_shares_rejected() {
        let zero = Portioning::Approximate(vec![0.0, 0.0]);
        assert!(quota_method(&zero, 2).is_err());
    }

    #[test]
    fn approximate_ties_fall_back_to_index() {
        let r = Portioning::approximate(vec![0.25, 0.25, 0.5]).unwrap();
        assert_eq!(dhondt(&r, 2).seats(), &[1, 0, 1]);
        assert_eq!(dhondt(&r, 4).seats(), &[1, 1, 2]);
    }

    #[test]
    fn rule_names() {
        let rule: Composed = "maj+quota".parse().unwrap();
        assert_eq!(rule.to_string(), "maj+quota");
        assert!("maj".parse::<Composed>().is_err());
        assert!("foo+dhondt".parse::<Composed>().is_err());
    }

    #[test]
    fn lower_quota_values() {
        assert_eq!(lower_quotas(&[ratio(23, 45), ratio(23, 90)], 6), vec![3, 1]);
    }
}
