//! Party-approval elections, committees and portionings.
//!
//! An [`Election`] stores its ballots multiplicity-compressed: each
//! [`Ballot`] is one approval set together with the number of voters who cast
//! it. Every per-voter quantity (utilities, coalition sizes, quotas) is
//! weighted by that multiplicity, so `n` always counts individual voters.
//!
//! Party order is significant. It is the canonical tie-break order used by
//! every rule in the crate: among equally good parties the one declared first
//! wins.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number used for shares, loads and scores.
pub type Rational = BigRational;

/// Builds the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an unsigned integer.
pub fn int(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Lossy conversion used for reporting and for approximate comparisons.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// One class of identical approval ballots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ballot {
    parties: Vec<usize>,
    multiplicity: u64,
}

impl Ballot {
    /// Creates a ballot class. The approval set is sorted and deduplicated.
    pub fn new(mut parties: Vec<usize>, multiplicity: u64) -> Self {
        parties.sort_unstable();
        parties.dedup();
        Ballot { parties, multiplicity }
    }

    /// Approved party indices, ascending.
    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn approves(&self, party: usize) -> bool {
        self.parties.binary_search(&party).is_ok()
    }
}

/// A party-approval election `(N, P, A, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Election {
    parties: Vec<String>,
    ballots: Vec<Ballot>,
    k: usize,
    n: u64,
}

impl Election {
    /// Validates and builds an election.
    ///
    /// Rejects duplicate or empty party names, empty approval sets, party
    /// indices out of range, zero multiplicities, `k = 0` and elections
    /// without voters.
    pub fn new(parties: Vec<String>, ballots: Vec<Ballot>, k: usize) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::Structural("an election needs at least one party".into()));
        }
        for (i, name) in parties.iter().enumerate() {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == ',' || c == '=') {
                return Err(Error::Structural(format!("invalid party name `{name}`")));
            }
            if parties[..i].contains(name) {
                return Err(Error::Structural(format!("duplicate party `{name}`")));
            }
        }
        if k == 0 {
            return Err(Error::Structural("committee size must be at least 1".into()));
        }
        let mut n = 0u64;
        for (i, ballot) in ballots.iter().enumerate() {
            if ballot.parties.is_empty() {
                return Err(Error::Structural(format!("ballot class {i} approves no party")));
            }
            if let Some(&p) = ballot.parties.iter().find(|&&p| p >= parties.len()) {
                return Err(Error::Structural(format!(
                    "ballot class {i} refers to party index {p}, but there are only {} parties",
                    parties.len()
                )));
            }
            if ballot.multiplicity == 0 {
                return Err(Error::Structural(format!("ballot class {i} has multiplicity 0")));
            }
            n = n
                .checked_add(ballot.multiplicity)
                .ok_or_else(|| Error::Structural("voter count overflows".into()))?;
        }
        if n == 0 {
            return Err(Error::Structural("an election needs at least one voter".into()));
        }
        Ok(Election { parties, ballots, k, n })
    }

    /// Convenience constructor from party names and `(multiplicity, approved names)` pairs.
    pub fn from_names(parties: &[&str], ballots: &[(u64, &[&str])], k: usize) -> Result<Self> {
        let names: Vec<String> = parties.iter().map(|s| s.to_string()).collect();
        let mut classes = Vec::with_capacity(ballots.len());
        for (mult, approved) in ballots {
            let mut idx = Vec::with_capacity(approved.len());
            for name in approved.iter() {
                let p = names
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| Error::Structural(format!("unknown party `{name}`")))?;
                idx.push(p);
            }
            classes.push(Ballot::new(idx, *mult));
        }
        Election::new(names, classes, k)
    }

    /// The same profile with a different committee size.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Structural("committee size must be at least 1".into()));
        }
        Ok(Election { k, ..self.clone() })
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn party_name(&self, p: usize) -> &str {
        &self.parties[p]
    }

    pub fn party_index(&self, name: &str) -> Option<usize> {
        self.parties.iter().position(|x| x == name)
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    /// Committee size.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of voters, counting multiplicities.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of voters approving each party.
    pub fn approval_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.parties.len()];
        for b in &self.ballots {
            for &p in &b.parties {
                counts[p] += b.multiplicity;
            }
        }
        counts
    }

    /// Ballot class index of every voter, in voter order (classes expanded in file order).
    pub fn voter_classes(&self) -> Vec<usize> {
        self.ballots
            .iter()
            .enumerate()
            .flat_map(|(c, b)| std::iter::repeat_n(c, b.multiplicity as usize))
            .collect()
    }

    /// Per-class utilities `u_i(W)`.
    pub fn utilities(&self, committee: &Committee) -> Vec<usize> {
        self.ballots
            .iter()
            .map(|b| b.parties.iter().map(|&p| committee.seats[p]).sum())
            .collect()
    }

    pub(crate) fn check_committee(&self, committee: &Committee) -> Result<()> {
        if committee.seats.len() != self.parties.len() {
            return Err(Error::Structural(format!(
                "committee has {} entries but the election has {} parties",
                committee.seats.len(),
                self.parties.len()
            )));
        }
        Ok(())
    }

    /// Parses a committee in `name=seats` notation (comma or whitespace separated).
    /// Parties that are not mentioned get zero seats.
    pub fn parse_committee(&self, spec: &str) -> Result<Committee> {
        let mut seats = vec![0usize; self.parties.len()];
        for item in spec
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
        {
            let (name, count) = item
                .split_once('=')
                .ok_or_else(|| Error::Structural(format!("expected `party=seats`, got `{item}`")))?;
            let p = self
                .party_index(name.trim())
                .ok_or_else(|| Error::Structural(format!("unknown party `{name}`")))?;
            seats[p] = count
                .trim()
                .parse()
                .map_err(|_| Error::Structural(format!("invalid seat count in `{item}`")))?;
        }
        Ok(Committee::new(seats))
    }
}

/// `q(S) = ⌊k·|S|/n⌋`, the number of seats a group of `size` voters deserves.
pub fn quota(size: u64, n: u64, k: u64) -> u64 {
    ((k as u128 * size as u128) / n as u128) as u64
}

/// `u_i(W)`: seats the committee gives to parties approved by ballot class `voter`.
pub fn utility(election: &Election, voter: usize, committee: &Committee) -> Result<usize> {
    election.check_committee(committee)?;
    let ballot = election
        .ballots
        .get(voter)
        .ok_or_else(|| Error::Structural(format!("no ballot class {voter}")))?;
    Ok(ballot.parties.iter().map(|&p| committee.seats[p]).sum())
}

/// A committee: a multiset over parties, stored as seat counts in party order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Committee {
    seats: Vec<usize>,
}

impl Committee {
    pub fn new(seats: Vec<usize>) -> Self {
        Committee { seats }
    }

    pub fn empty(num_parties: usize) -> Self {
        Committee {
            seats: vec![0; num_parties],
        }
    }

    pub fn seats(&self) -> &[usize] {
        &self.seats
    }

    pub fn get(&self, p: usize) -> usize {
        self.seats[p]
    }

    /// `|W|`.
    pub fn size(&self) -> usize {
        self.seats.iter().sum()
    }

    pub fn add_seat(&mut self, p: usize) {
        self.seats[p] += 1;
    }

    /// Removes one seat from `p`. Panics if `p` has none.
    pub fn remove_seat(&mut self, p: usize) {
        assert!(self.seats[p] > 0, "party {p} has no seat to remove");
        self.seats[p] -= 1;
    }

    /// Multiset inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Committee) -> bool {
        self.seats.len() == other.seats.len() && self.seats.iter().zip(&other.seats).all(|(a, b)| a <= b)
    }

    /// Parties with at least one seat.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.seats.iter().enumerate().filter(|(_, &s)| s > 0).map(|(p, _)| p)
    }

    /// `name=seats` pairs for parties holding seats, in party order.
    pub fn display<'a>(&'a self, election: &'a Election) -> impl fmt::Display + 'a {
        CommitteeDisplay {
            committee: self,
            election,
        }
    }
}

impl std::ops::Add for &Committee {
    type Output = Committee;

    fn add(self, rhs: &Committee) -> Committee {
        Committee::new(self.seats.iter().zip(&rhs.seats).map(|(a, b)| a + b).collect())
    }
}

struct CommitteeDisplay<'a> {
    committee: &'a Committee,
    election: &'a Election,
}

impl fmt::Display for CommitteeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in self.committee.support() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}={}", self.election.party_name(p), self.committee.seats[p])?;
        }
        Ok(())
    }
}

/// Vote shares of the parties.
#[derive(Debug, Clone, PartialEq)]
pub enum Portioning {
    /// Exact rational shares summing to exactly one.
    Exact(Vec<Rational>),
    /// Floating-point shares summing to one within `1e-9`.
    Approximate(Vec<f64>),
}

impl Portioning {
    /// Validates exact shares: each in `[0, 1]`, total exactly one.
    pub fn exact(shares: Vec<Rational>) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if shares.iter().any(|s| *s < zero || *s > one) {
            return Err(Error::Structural("share outside [0, 1]".into()));
        }
        let total: Rational = shares.iter().sum();
        if total != one {
            return Err(Error::Structural(format!("shares sum to {total}, not 1")));
        }
        Ok(Portioning::Exact(shares))
    }

    /// Validates approximate shares: each in `[0, 1]`, total within `1e-9` of one.
    pub fn approximate(shares: Vec<f64>) -> Result<Self> {
        if shares.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::Structural("share outside [0, 1]".into()));
        }
        let total: f64 = shares.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Structural(format!("shares sum to {total}, not 1")));
        }
        Ok(Portioning::Approximate(shares))
    }

    pub fn len(&self) -> usize {
        match self {
            Portioning::Exact(v) => v.len(),
            Portioning::Approximate(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Portioning::Exact(_))
    }

    /// Shares as floats regardless of kind.
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Portioning::Exact(v) => v.iter().map(to_f64).collect(),
            Portioning::Approximate(v) => v.clone(),
        }
    }

    /// The exact shares, if this is an exact portioning.
    pub fn as_exact(&self) -> Option<&[Rational]> {
        match self {
            Portioning::Exact(v) => Some(v),
            Portioning::Approximate(_) => None,
        }
    }

    /// `name=num/den` (exact) or `name=float` (approximate) for every party.
    pub fn display<'a>(&'a self, election: &'a Election) -> impl fmt::Display + 'a {
        PortioningDisplay {
            portioning: self,
            election,
        }
    }
}

struct PortioningDisplay<'a> {
    portioning: &'a Portioning,
    election: &'a Election,
}

impl fmt::Display for PortioningDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.portioning.len() {
            if p > 0 {
                f.write_str(" ")?;
            }
            let name = self.election.party_name(p);
            match self.portioning {
                Portioning::Exact(v) => write!(f, "{name}={}", v[p])?,
                Portioning::Approximate(v) => write!(f, "{name}={}", v[p])?,
            }
        }
        Ok(())
    }
}

/// Parses the line-oriented ballot file format.
///
/// ```text
/// parties: p0 p1 p2 p3
/// k: 6
/// 2 : p0
/// 2 : p0,p1,p2
/// 1 : p1,p3   # comment
/// 1 : p2,p3
/// ```
pub fn parse_election(text: &str) -> Result<Election> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty());

    let err = |line: usize, message: String| Error::Parse { line, message };

    let (line_no, header) = lines.next().ok_or_else(|| err(1, "missing `parties:` line".into()))?;
    let names = header
        .strip_prefix("parties:")
        .ok_or_else(|| err(line_no, "expected `parties: <name> ...`".into()))?;
    let parties: Vec<String> = names.split_whitespace().map(str::to_string).collect();
    if parties.is_empty() {
        return Err(err(line_no, "no parties declared".into()));
    }
    for (i, name) in parties.iter().enumerate() {
        if parties[..i].contains(name) {
            return Err(err(line_no, format!("duplicate party `{name}`")));
        }
        if name.contains([',', '=', ':']) {
            return Err(err(line_no, format!("invalid party name `{name}`")));
        }
    }

    let (line_no, k_line) = lines
        .next()
        .ok_or_else(|| err(line_no + 1, "missing `k:` line".into()))?;
    let k_text = k_line
        .strip_prefix("k:")
        .ok_or_else(|| err(line_no, "expected `k: <integer>`".into()))?;
    let k: usize = k_text
        .trim()
        .parse()
        .map_err(|_| err(line_no, format!("invalid committee size `{}`", k_text.trim())))?;
    if k < 1 {
        return Err(err(line_no, "committee size must be at least 1".into()));
    }

    let mut ballots = Vec::new();
    for (line_no, line) in lines {
        let (mult, approved) = line
            .split_once(':')
            .ok_or_else(|| err(line_no, "expected `<multiplicity> : <party>,...`".into()))?;
        let multiplicity: u64 = mult
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("invalid multiplicity `{}`", mult.trim())))?;
        if multiplicity == 0 {
            return Err(err(line_no, "multiplicity must be at least 1".into()));
        }
        let mut set = Vec::new();
        for name in approved.split(',').map(str::trim) {
            if name.is_empty() {
                continue;
            }
            let p = parties
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| err(line_no, format!("unknown party `{name}`")))?;
            set.push(p);
        }
        if set.is_empty() {
            return Err(err(line_no, "empty approval set".into()));
        }
        ballots.push(Ballot::new(set, multiplicity));
    }
    if ballots.is_empty() {
        return Err(err(0, "no ballots".into()));
    }
    Election::new(parties, ballots, k).map_err(|e| err(0, e.to_string()))
}

/// Writes an election in the ballot file format accepted by [`parse_election`].
pub fn serialize_election(election: &Election) -> String {
    let mut out = format!("parties: {}\nk: {}\n", election.parties.join(" "), election.k);
    for b in &election.ballots {
        let names: Vec<&str> = b.parties.iter().map(|&p| election.party_name(p)).collect();
        out.push_str(&format!("{} : {}\n", b.multiplicity, names.join(",")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "parties: p0 p1 p2 p3\nk: 6\n2 : p0\n2 : p0,p1,p2\n1 : p1,p3\n1 : p2,p3\n";

    #[test]
    fn quota_examples() {
        assert_eq!(quota(2, 6, 6), 2);
        assert_eq!(quota(0, 10, 5), 0);
        assert_eq!(quota(14, 16, 16), 14);
        assert_eq!(quota(7, 7, 3), 3);
        assert_eq!(quota(5, 12, 5), 2);
    }

    #[test]
    fn parses_example_one() {
        let e = parse_election(EX1).unwrap();
        assert_eq!(e.n(), 6);
        assert_eq!(e.num_parties(), 4);
        assert_eq!(e.k(), 6);
        assert_eq!(e.ballots()[1].parties(), &[0, 1, 2]);
    }

    #[test]
    fn parses_single_ballot() {
        let e = parse_election("parties: A\nk: 3\n1: A\n").unwrap();
        assert_eq!(e.n(), 1);
        assert_eq!(e.k(), 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let e = parse_election("# header\n\nparties: A B # two\nk: 2\n\n3 : A, B # both\n").unwrap();
        assert_eq!(e.n(), 3);
        assert_eq!(e.ballots()[0].parties(), &[0, 1]);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            "parties: A\nk: 1\n1 : B\n",
            "parties: A\nk: 1\n1 : \n",
            "parties: A\nk: 0\n1 : A\n",
            "parties: A A\nk: 1\n1 : A\n",
            "k: 1\nparties: A\n1 : A\n",
            "parties: A\nk: 1\n0 : A\n",
            "parties: A\nk: 1\n",
            "parties: A\nk: x\n1 : A\n",
        ];
        for text in cases {
            assert!(matches!(parse_election(text), Err(Error::Parse { .. })), "{text:?}");
        }
    }

    #[test]
    fn unknown_party_reports_line() {
        match parse_election("parties: A\nk: 1\n1 : A\n1 : Z\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains('Z'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn serialize_round_trip() {
        let e = parse_election(EX1).unwrap();
        assert_eq!(parse_election(&serialize_election(&e)).unwrap(), e);
    }

    #[test]
    fn utility_examples() {
        let e = parse_election(EX1).unwrap();
        let w = Committee::new(vec![4, 1, 1, 0]);
        // fifth voter is ballot class 2
        assert_eq!(utility(&e, 2, &w).unwrap(), 1);
        assert_eq!(utility(&e, 2, &Committee::empty(4)).unwrap(), 0);
        assert!(utility(&e, 9, &w).is_err());
        assert!(utility(&e, 0, &Committee::empty(3)).is_err());
    }

    #[test]
    fn committee_notation() {
        let e = parse_election(EX1).unwrap();
        let w = e.parse_committee("p0=4, p1=1,p2=1").unwrap();
        assert_eq!(w.seats(), &[4, 1, 1, 0]);
        assert_eq!(w.display(&e).to_string(), "p0=4 p1=1 p2=1");
        assert!(e.parse_committee("p9=1").is_err());
        assert!(e.parse_committee("p0").is_err());
    }

    #[test]
    fn portioning_validation() {
        assert!(Portioning::exact(vec![ratio(1, 2), ratio(1, 2)]).is_ok());
        assert!(Portioning::exact(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(Portioning::approximate(vec![0.5, 0.5 + 1e-12]).is_ok());
        assert!(Portioning::approximate(vec![0.5, 0.6]).is_err());
    }

    #[test]
    fn multiset_inclusion() {
        let a = Committee::new(vec![1, 0, 2]);
        let b = Committee::new(vec![1, 1, 2]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!((&a + &b).seats(), &[2, 1, 4]);
    }
}
