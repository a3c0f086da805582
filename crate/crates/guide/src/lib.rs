//! The book in `book/` cannot pull in `lll` when mdbook tests it, so each
//! chapter is attached to an empty module here and `cargo test --doc` runs
//! its code blocks instead.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/intervals.md")]
pub mod intervals {}
#[doc = include_str!("../../../book/src/criteria.md")]
pub mod criteria {}
#[doc = include_str!("../../../book/src/resampling.md")]
pub mod resampling {}
#[doc = include_str!("../../../book/src/witness_trees.md")]
pub mod witness_trees {}
#[doc = include_str!("../../../book/src/ramsey.md")]
pub mod ramsey {}
#[doc = include_str!("../../../book/src/hypergraphs.md")]
pub mod hypergraphs {}
#[doc = include_str!("../../../book/src/digraphs.md")]
pub mod digraphs {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/formats.md")]
pub mod formats {}
