//! Party-approval rules.
//!
//! Every rule works on seat counts and breaks ties toward the lowest party
//! index. For exhaustive rules this means the first optimal committee in
//! canonical order (see [`crate::search`]); greedy rules pick the lowest-index
//! party among those with the best score in each round.

mod approval;
mod greedy;
mod pav;
mod phragmen;

use std::fmt;
use std::str::FromStr;

pub use approval::{av, cc_av_exact, cc_score, mav_distance, mav_exact, sav, sav_scores};
pub use greedy::{
    greedy_av, greedy_monroe, greedy_monroe_trace, hare_av, monroe_exact, monroe_group_size, monroe_score, MonroeRound,
};
pub use pav::{
    ls_pav, ls_pav_epsilon, ls_pav_run, ls_pav_swap_budget, marginal_contribution, pav_exact, pav_score, rev_seq_pav,
    seq_pav, seq_pav_trace, LsPavOutcome, SeqPavStep,
};
pub use phragmen::{
    load_distribution, max_load, max_phragmen_bruteforce, phragmen_stv, phragmen_stv_trace, seq_phragmen,
    seq_phragmen_trace, LoadDistribution, PhragmenRound, StvRound, MAX_LOAD_TOLERANCE,
};

use crate::apportionment::Composed;
use crate::error::{Error, Result};
use crate::model::{Committee, Election};
use crate::search::SearchConfig;

/// A named party-approval rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Pav,
    LsPav,
    SeqPav,
    RevSeqPav,
    Av,
    Sav,
    Mav,
    SeqPhragmen,
    PhragmenStv,
    GreedyAv,
    HareAv,
    CcAv,
    GreedyMonroe,
    Monroe,
    MaxPhragmen,
    Composed(Composed),
}

impl Rule {
    /// Rules with a fixed name; composed rules are written `portioning+apportionment`.
    pub const NAMED: [Rule; 15] = [
        Rule::Pav,
        Rule::LsPav,
        Rule::SeqPav,
        Rule::RevSeqPav,
        Rule::Av,
        Rule::Sav,
        Rule::Mav,
        Rule::SeqPhragmen,
        Rule::PhragmenStv,
        Rule::GreedyAv,
        Rule::HareAv,
        Rule::CcAv,
        Rule::GreedyMonroe,
        Rule::Monroe,
        Rule::MaxPhragmen,
    ];

    pub fn apply(&self, election: &Election, config: &SearchConfig) -> Result<Committee> {
        Ok(match self {
            Rule::Pav => pav_exact(election, config)?,
            Rule::LsPav => ls_pav(election),
            Rule::SeqPav => seq_pav(election),
            Rule::RevSeqPav => rev_seq_pav(election),
            Rule::Av => av(election),
            Rule::Sav => sav(election),
            Rule::Mav => mav_exact(election, config)?,
            Rule::SeqPhragmen => seq_phragmen(election),
            Rule::PhragmenStv => phragmen_stv(election),
            Rule::GreedyAv => greedy_av(election),
            Rule::HareAv => hare_av(election),
            Rule::CcAv => cc_av_exact(election, config)?,
            Rule::GreedyMonroe => greedy_monroe(election),
            Rule::Monroe => monroe_exact(election, config)?,
            Rule::MaxPhragmen => max_phragmen_bruteforce(election, config)?,
            Rule::Composed(c) => c.apply(election)?,
        })
    }

    /// Whether the rule enumerates committees and is subject to the search cap.
    pub fn is_exhaustive(&self) -> bool {
        matches!(
            self,
            Rule::Pav | Rule::Mav | Rule::CcAv | Rule::Monroe | Rule::MaxPhragmen
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::Pav => "pav",
            Rule::LsPav => "lspav",
            Rule::SeqPav => "seqpav",
            Rule::RevSeqPav => "revseqpav",
            Rule::Av => "av",
            Rule::Sav => "sav",
            Rule::Mav => "mav",
            Rule::SeqPhragmen => "seqphragmen",
            Rule::PhragmenStv => "phragmen-stv",
            Rule::GreedyAv => "greedyav",
            Rule::HareAv => "hareav",
            Rule::CcAv => "ccav",
            Rule::GreedyMonroe => "greedymonroe",
            Rule::Monroe => "monroe",
            Rule::MaxPhragmen => "maxphragmen",
            Rule::Composed(c) => return c.fmt(f),
        };
        f.write_str(name)
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rule) = Rule::NAMED.iter().find(|r| r.to_string() == s) {
            return Ok(*rule);
        }
        if s.contains('+') {
            return Ok(Rule::Composed(s.parse()?));
        }
        Err(Error::Unknown {
            kind: "rule",
            name: s.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{av_candidates, collapse, embed, sav_candidates, seq_pav_candidates};

    #[test]
    fn names_round_trip() {
        for rule in Rule::NAMED {
            assert_eq!(rule.to_string().parse::<Rule>().unwrap(), rule);
        }
        assert_eq!("nash+quota".parse::<Rule>().unwrap().to_string(), "nash+quota");
        assert!(matches!("stv".parse::<Rule>(), Err(Error::Unknown { .. })));
    }

    #[test]
    fn candidate_level_agreement() {
        let e = Election::from_names(
            &["A", "B", "C", "D"],
            &[(2, &["A"]), (2, &["A", "B", "C"]), (1, &["B", "D"]), (1, &["C", "D"])],
            6,
        )
        .unwrap();
        let emb = embed(&e);
        assert_eq!(collapse(&emb, &seq_pav_candidates(&emb)).unwrap(), seq_pav(&e));
        assert_eq!(collapse(&emb, &av_candidates(&emb)).unwrap(), av(&e));
        assert_eq!(collapse(&emb, &sav_candidates(&emb)).unwrap(), sav(&e));
    }
}
