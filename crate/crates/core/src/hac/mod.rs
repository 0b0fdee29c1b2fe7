//! Hierarchical agglomerative clustering of knowledge graphs and the
//! parallel merge plan derived from the resulting dendrogram.

mod dendrogram;
mod linkage;
mod matrix;
mod plan;

pub use dendrogram::{Dendrogram, Merge};
pub use linkage::{hac, Linkage};
pub use matrix::{distance_matrix, distance_matrix_with_block_size, pair_count, CondensedMatrix, DEFAULT_BLOCK_SIZE};
pub use plan::{plan_from_dendrogram, MergePlan, MergeTask, PlanStats};
