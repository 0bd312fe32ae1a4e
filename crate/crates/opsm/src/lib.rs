//! File formats, disk spilling and reporting around `opsm-core`, plus the
//! `opsm` command-line tool.

pub mod clusters_tsv;
pub mod header;
pub mod inputs;
pub mod matrix_tsv;
pub mod report;
pub mod spill;
pub mod universe;

pub use clusters_tsv::{load_clusters, read_clusters, write_clusters, ClusterRecord};
pub use header::Invocation;
pub use matrix_tsv::{load_matrix, read_matrix, write_matrix, LoadReport, MissingPolicy};
pub use spill::SpillSink;
pub use universe::Universe;
