//! Builds one consolidated knowledge graph out of many MediaWiki dumps.
//!
//! The stages are: infobox extraction per wiki ([`extract`]), tf-idf
//! featurization ([`featurize`]), clustering into a merge plan ([`hac`]),
//! pairwise matching ([`matching`]) and merging along the plan ([`merge`]),
//! closure and fusion ([`fuse`]), and reporting ([`analyze`]). [`pipeline`]
//! runs them over a resumable workspace directory.

pub mod analyze;
pub mod error;
pub mod extract;
pub mod featurize;
pub mod fuse;
pub mod hac;
pub mod kg;
pub mod matching;
pub mod merge;
pub mod pipeline;

mod fsutil;

pub use error::{Error, Result};
