//! Cluster evaluation procedures.
//!
//! Everything here works on row and column indices; callers resolve their
//! identifiers (probe names, experiment labels, gene ids) to indices first.
//! Randomized comparisons draw matched random clusters through
//! [`crate::stats`], one generator stream per replicate.

mod enrichment;
mod negatives;
mod probes;
mod similarity;
mod summary;

pub use enrichment::{
    annotation_enrichment, default_alpha_grid, Annotations, BhScope, CurvePoint, EnrichmentParams,
    EnrichmentReport, EnrichmentResult,
};
pub use negatives::{negative_control_analysis, BreakdownCell, NegativeReport};
pub use probes::{redundant_pairs, redundant_probe_analysis, ProbeReport, SizeRow};
pub use similarity::{promoter_similarity, similarity_score, LabelSet, ScoreCell, SimilarityReport};
pub use summary::{cluster_mean_pearson, summarize, ClusterSummary, Spread};
