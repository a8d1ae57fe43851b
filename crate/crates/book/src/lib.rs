//! The guide's chapters, compiled so that `cargo test` runs every code
//! listing as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/interning.md")]
pub mod interning {}
#[doc = include_str!("../../../book/src/memoization.md")]
pub mod memoization {}
#[doc = include_str!("../../../book/src/bdds.md")]
pub mod bdds {}
#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}
#[doc = include_str!("../../../book/src/lambda.md")]
pub mod lambda {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
