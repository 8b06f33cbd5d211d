//! Synthetic data, the grouped and grid experiment designs, per-layer
//! FDP/power scoring and Monte-Carlo checks.
//!
//! P-values are generated as `1 - Phi(mu + Z)` with independent standard
//! normal noise; nulls have `mu = 0`.

mod checks;
mod design;
mod instances;
mod metrics;
mod normal;
mod trials;

pub use checks::{
    global_null_check, lemma1_check, lemma1_check_with, GlobalNullEstimate, ThresholdFunction,
};
pub use design::{
    design_grid, design_grouped, gen_pvalues, grid_index, Design, DesignKind, SignalPattern,
    GRID_SIDE, GROUPED_GROUP_SIZE, GROUPED_N,
};
pub use instances::{random_instance, random_layer, random_pvalues, INSTANCE_ALPHAS};
pub use metrics::{
    fdp_and_power, ks_critical_value, ks_uniform_statistic, score, Estimate, LayerOutcome,
};
pub use normal::{std_normal_cdf, std_normal_sample, std_normal_upper_tail};
pub use trials::{
    run_trial, run_trials, trial_rng, AggregateMetrics, LayerAggregate, Method, SimulationResult,
    TrialChecks, TrialConfig, TrialMetrics,
};

/// Default target level for every layer and method in the experiments.
pub const DEFAULT_ALPHA: f64 = 0.2;

/// Theoretical FDR bound `alpha * |null groups| / G` for one layer.
pub fn fdr_bound(alpha: f64, layer: &crate::Layer, truth: &crate::TruthSet) -> f64 {
    let nulls = truth.null_groups(layer).iter().filter(|&&b| b).count();
    alpha * nulls as f64 / layer.group_count() as f64
}
