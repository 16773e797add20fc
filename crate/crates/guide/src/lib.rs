//! Runs the code samples in `book/` and the README as doctests, one module
//! per chapter so a failure points at its chapter. Keep the chapter list in
//! step with `SUMMARY.md`; the `chapters` test checks that.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/spines.md")]
pub mod spines {}
#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}
#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}
#[doc = include_str!("../../../book/src/moves.md")]
pub mod moves {}
#[doc = include_str!("../../../book/src/census.md")]
pub mod census {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
