//! Compiles and runs the guide's code snippets as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/elections.md")]
pub mod elections {}

#[doc = include_str!("../../../book/src/portioning.md")]
pub mod portioning {}

#[doc = include_str!("../../../book/src/apportionment.md")]
pub mod apportionment {}

#[doc = include_str!("../../../book/src/rules.md")]
pub mod rules {}

#[doc = include_str!("../../../book/src/axioms.md")]
pub mod axioms {}

#[doc = include_str!("../../../book/src/instances.md")]
pub mod instances {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
