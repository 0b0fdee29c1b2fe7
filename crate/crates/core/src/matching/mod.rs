//! Pairwise entity alignment between two graphs and 1:1 enforcement.

mod alignment;
mod builtin;
mod external;

pub use alignment::{extract_one_to_one, Alignment, Correspondence};
pub use builtin::{entity_labels, match_pair, normalize_label, MatcherConfig};
pub use external::{run_external_matcher, ExternalMatcher, ProcessLimit};

/// Which matcher a merge task uses.
#[derive(Clone, Debug)]
pub enum Matcher {
    Builtin(MatcherConfig),
    External(ExternalMatcher),
}
