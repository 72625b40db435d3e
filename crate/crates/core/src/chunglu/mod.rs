//! Chung-Lu power-law random graphs and simple-path counting.
//!
//! Includes exhaustive and Monte Carlo path censuses and the analytic path
//! bounds they are checked against.

mod bounds;
mod generate;
mod model;
mod paths;

pub use bounds::{
    composition_count, for_each_composition, lemma41_bound, lemma41_log_bound, lemma42_bound,
    n_enumeration, n_recurrence, ENUMERATION_CAP,
};
pub use generate::{generate, generate_trial};
pub use model::{build_model, ChungLuModel, ModelSpec, MAX_WEIGHT_CLASSES};
pub use paths::{
    count_simple_paths, estimate_gamma, expected_path_counts, path_count_trials,
    path_counts_from_masks, survival_sweep, CensusMode, PathCensus, SweepRow,
    EXPECTED_PATH_VERTEX_CAP, PATH_COUNT_VERTEX_CAP,
};
