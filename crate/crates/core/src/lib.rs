//! Multi-layer false discovery rate control.
//!
//! The p-filter selects a set of hypotheses while controlling the group-level
//! FDR simultaneously for several arbitrary partitions ("layers") of the
//! hypotheses. With a single layer it reduces to the Benjamini-Hochberg
//! procedure (finest partition) or to the Simes global-null test (coarsest
//! partition).
//!
//! Modules:
//! - [`problem`]: p-values, layers, problem validation.
//! - [`classic`]: Simes p-value, BH, and group-level Simes + BH.
//! - [`engine`]: the p-filter fixed point and its exhaustive-grid oracle.
//! - [`comparators`]: the Benjamini-Bogomolov two-step procedure.
//! - [`simulate`]: synthetic designs, metrics and Monte-Carlo checks.
//!
//! Hypothesis and group indices are 0-based throughout the library. File
//! formats handled by the command-line front end are 1-based.

pub mod classic;
pub mod comparators;
pub mod engine;
mod error;
pub mod exact;
pub mod problem;
pub mod simulate;

pub use classic::{bh_khat, bh_reject, group_simes_bh, simes, GridPoint, SimesValue};
pub use comparators::{bb_flatten, bb_procedure, BbReport};
pub use engine::{
    brute_force_pfilter, estimated_fdp, layer_selection, pfilter, selection_set, threshold_update,
    DiscoveryReport, GridThreshold, PreparedProblem, ThresholdVector,
};
pub use error::{Error, Result};
pub use problem::{
    validate_layer, Layer, LayerViolation, MultiLayerProblem, PValueVector, TruthSet,
};
