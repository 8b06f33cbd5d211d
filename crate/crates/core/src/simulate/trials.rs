//! Monte-Carlo trials scoring several procedures on shared p-value draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classic::bh_reject;
use crate::comparators::{bb_flatten, bb_procedure};
use crate::engine::pfilter;
use crate::error::{Error, Result};
use crate::problem::MultiLayerProblem;

use super::design::{gen_pvalues, Design};
use super::metrics::{score, Estimate, LayerOutcome};

/// Generator for trial `trial` of a run seeded with `seed`. Each trial gets
/// its own ChaCha stream, so results do not depend on execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PFilter,
    Bh,
    Bb,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::PFilter, Method::Bh, Method::Bb];

    pub fn name(self) -> &'static str {
        match self {
            Self::PFilter => "pfilter",
            Self::Bh => "bh",
            Self::Bb => "bb",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pfilter" => Ok(Self::PFilter),
            "bh" => Ok(Self::Bh),
            "bb" => Ok(Self::Bb),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Per-layer outcomes of every requested method on one p-value draw.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialMetrics {
    pub methods: Vec<(Method, Vec<LayerOutcome>)>,
    /// The p-filter selection was not contained in the BH selection.
    pub conservativeness_violated: bool,
    pub pfilter_passes: usize,
    pub pass_bound: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerAggregate {
    pub layer: &'static str,
    pub alpha: f64,
    pub fdr: Estimate,
    pub power: Estimate,
    pub mean_selected_groups: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateMetrics {
    pub method: Method,
    pub layers: Vec<LayerAggregate>,
    pub trials: usize,
}

/// Trial-level checks accumulated over a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialChecks {
    pub trials: usize,
    pub conservativeness_violations: usize,
    pub pass_bound_violations: usize,
    pub max_passes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub mu: f64,
    pub methods: Vec<AggregateMetrics>,
    pub checks: TrialChecks,
}

impl SimulationResult {
    pub fn method(&self, method: Method) -> Option<&AggregateMetrics> {
        self.methods.iter().find(|m| m.method == method)
    }
}

/// Settings shared by every trial of a run.
#[derive(Debug, Clone)]
pub struct TrialConfig<'a> {
    pub design: &'a Design,
    pub methods: &'a [Method],
    /// One level per design layer. BH uses layer 0's level; the two-step
    /// comparator screens at the grouping layer's level and uses layer 0's
    /// level inside groups.
    pub alphas: &'a [f64],
    pub mu: f64,
    pub seed: u64,
}

impl TrialConfig<'_> {
    fn validate(&self) -> Result<()> {
        if self.alphas.len() != self.design.layers().len() {
            return Err(Error::AlphaCountMismatch {
                layers: self.design.layers().len(),
                alphas: self.alphas.len(),
            });
        }
        if let Some((layer, &value)) = self
            .alphas
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a >= 0.0))
        {
            return Err(Error::InvalidAlpha { layer, value });
        }
        Ok(())
    }
}

/// Runs trial number `trial`: one p-value draw scored by every method.
pub fn run_trial(config: &TrialConfig<'_>, trial: u64) -> Result<TrialMetrics> {
    config.validate()?;
    let design = config.design;
    let mut rng = trial_rng(config.seed, trial);
    let pvalues = gen_pvalues(&design.pattern(config.mu), &mut rng);
    let truth = design.truth();
    let null_groups: Vec<Vec<bool>> = design
        .layers()
        .iter()
        .map(|layer| truth.null_groups(layer))
        .collect();
    let alpha_entry = config.alphas[0];
    let bh = bh_reject(&pvalues, alpha_entry);

    let problem = MultiLayerProblem::new(
        pvalues.clone(),
        design.layers().to_vec(),
        config.alphas.to_vec(),
    )?;
    let report = pfilter(&problem);
    let conservativeness_violated = design.layers()[0].is_finest()
        && !report.selected.iter().all(|i| bh.binary_search(i).is_ok());

    let methods = config
        .methods
        .iter()
        .map(|&method| {
            let selected = match method {
                Method::PFilter => report.selected.clone(),
                Method::Bh => bh.clone(),
                Method::Bb => {
                    let m = design.bb_layer();
                    bb_flatten(&bb_procedure(
                        &pvalues,
                        &design.layers()[m],
                        config.alphas[m],
                        alpha_entry,
                    ))
                }
            };
            let outcomes = design
                .layers()
                .iter()
                .zip(&null_groups)
                .map(|(layer, nulls)| score(&selected, layer, nulls))
                .collect();
            (method, outcomes)
        })
        .collect();
    Ok(TrialMetrics {
        methods,
        conservativeness_violated,
        pfilter_passes: report.passes,
        pass_bound: report.pass_bound(),
    })
}

/// Runs `trials` independent trials (in parallel) and aggregates them in
/// trial order.
pub fn run_trials(config: &TrialConfig<'_>, trials: usize) -> Result<SimulationResult> {
    config.validate()?;
    let records: Vec<TrialMetrics> = (0..trials as u64)
        .into_par_iter()
        .map(|k| run_trial(config, k))
        .collect::<Result<_>>()?;

    let mut checks = TrialChecks {
        trials,
        ..TrialChecks::default()
    };
    for r in &records {
        checks.conservativeness_violations += usize::from(r.conservativeness_violated);
        checks.pass_bound_violations += usize::from(r.pfilter_passes > r.pass_bound);
        checks.max_passes = checks.max_passes.max(r.pfilter_passes);
    }

    let methods = config
        .methods
        .iter()
        .enumerate()
        .map(|(slot, &method)| {
            let layers = config
                .design
                .layer_names()
                .iter()
                .enumerate()
                .map(|(m, &name)| {
                    let outcomes: Vec<LayerOutcome> =
                        records.iter().map(|r| r.methods[slot].1[m]).collect();
                    let fdp: Vec<f64> = outcomes.iter().map(|o| o.fdp).collect();
                    let power: Vec<f64> = outcomes.iter().map(|o| o.power).collect();
                    let selected: f64 = outcomes.iter().map(|o| o.selected_groups as f64).sum();
                    LayerAggregate {
                        layer: name,
                        alpha: config.alphas[m],
                        fdr: Estimate::from_samples(&fdp),
                        power: Estimate::from_samples(&power),
                        mean_selected_groups: selected / trials.max(1) as f64,
                    }
                })
                .collect();
            AggregateMetrics {
                method,
                layers,
                trials,
            }
        })
        .collect();
    Ok(SimulationResult {
        mu: config.mu,
        methods,
        checks,
    })
}
