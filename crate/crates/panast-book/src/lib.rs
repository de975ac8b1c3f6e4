//! Doc-test harness for the guide in `book/`. mdBook renders `book/src`
//! directly but cannot run the snippets; inlining each chapter as a module
//! doc makes `cargo test --doc` compile and execute every Rust code block,
//! so the book cannot drift from the library it documents.
//!
//! One module per chapter keeps test failures attributable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}

#[doc = include_str!("../../../book/src/normalization.md")]
pub mod normalization {}

#[doc = include_str!("../../../book/src/scales.md")]
pub mod scales {}

#[doc = include_str!("../../../book/src/scoring.md")]
pub mod scoring {}

#[doc = include_str!("../../../book/src/corpus.md")]
pub mod corpus {}

#[doc = include_str!("../../../book/src/events.md")]
pub mod events {}

#[doc = include_str!("../../../book/src/charts.md")]
pub mod charts {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
