//! Order-preserving submatrix (OPSM) and generalized OPSM mining.
//!
//! The pipeline turns an expression matrix into a database of column
//! permutations ([`sequencer`]), then grows column patterns level by level,
//! keeping the `k` best-supported patterns per level and only counting a row
//! as support when each new pattern element lies within `w` positions of the
//! previous one ([`miner`]). Rows that order a pattern in reverse are kept as
//! anti-correlated supporters when mining in both directions.
//!
//! Alongside the miner live an exhaustive [`oracle`] for small inputs, a
//! planted-structure generator ([`synthgen`]), the statistics kernel
//! ([`stats`]) and the cluster evaluation procedures ([`eval`]).
//!
//! The crate is `no_std` + `alloc`. The default `std` feature only adds
//! `std::error::Error` impls; `parallel` fans level expansion and permutation
//! replicates out over rayon. Results never depend on the worker count.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod eval;
pub mod matrix;
pub mod miner;
pub mod oracle;
pub mod sequencer;
pub mod stats;
pub mod synthgen;

pub use matrix::{ExpressionMatrix, MatrixError};
pub use miner::{
    mine, Cluster, Direction, MineError, MineReport, Mined, MiningParams, Orientation,
    OrientedSupport, ParamError, Pattern,
};
pub use oracle::{exact_mine, OracleError};
pub use sequencer::{to_sequence_db, SequenceDatabase};
