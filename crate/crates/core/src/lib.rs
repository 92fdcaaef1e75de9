//! Approval-based apportionment.
//!
//! Voters approve parties; a committee assigns `k` seats to parties, with
//! repetition. This crate provides portioning and apportionment methods,
//! the clone embedding into candidate-approval elections, a catalogue of
//! party-approval rules, and checkers for justified representation,
//! proportional justified representation, extended justified representation,
//! the core, perfect representation and committee monotonicity.
//!
//! ```
//! use party_approval::{parse_election, rules};
//!
//! let election = parse_election("parties: A B\nk: 3\n2 : A\n1 : B\n").unwrap();
//! let committee = rules::seq_phragmen(&election);
//! assert_eq!(committee.seats(), &[2, 1]);
//! ```

pub mod apportionment;
pub mod axioms;
pub mod embedding;
pub mod error;
mod flow;
pub mod instances;
pub mod model;
pub mod portioning;
pub mod rules;
pub mod search;

pub use apportionment::{compose, ApportionmentMethod, Composed, PortioningMethod};
pub use axioms::{Axiom, AxiomVerdict, Witness};
pub use error::{Error, Result};
pub use model::{parse_election, serialize_election, Ballot, Committee, Election, Portioning, Rational};
pub use rules::Rule;
pub use search::SearchConfig;
