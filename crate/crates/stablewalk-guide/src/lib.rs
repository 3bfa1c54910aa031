//! The guide's code blocks, compiled and run by `cargo test --doc`.
//!
//! mdBook cannot execute snippets against a local crate, so each chapter is
//! included as the documentation of an empty module here; rustdoc then
//! treats every fenced block as a doc-test. If a chapter drifts from the
//! library, the workspace test run fails.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/lattice-laws.md")]
pub mod lattice_laws {}

#[doc = include_str!("../../../book/src/stable-limit.md")]
pub mod stable_limit {}

#[doc = include_str!("../../../book/src/norming.md")]
pub mod norming {}

#[doc = include_str!("../../../book/src/exact-distributions.md")]
pub mod exact_distributions {}

#[doc = include_str!("../../../book/src/correlation.md")]
pub mod correlation {}

#[doc = include_str!("../../../book/src/log-averages.md")]
pub mod log_averages {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
