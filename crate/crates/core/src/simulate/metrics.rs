//! Per-layer false discovery proportion and power, and Monte-Carlo
//! averages with standard errors.

use crate::engine::layer_selection;
use crate::problem::{Layer, TruthSet};

/// Outcome of one selection scored against one layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerOutcome {
    /// `|S_m ∩ null groups| / max(1, |S_m|)`.
    pub fdp: f64,
    /// `|S_m ∩ non-null groups| / max(1, #non-null groups)`.
    pub power: f64,
    pub selected_groups: usize,
}

/// Scores `selected` at the group level of `layer`.
pub fn fdp_and_power(selected: &[usize], layer: &Layer, truth: &TruthSet) -> LayerOutcome {
    score(selected, layer, &truth.null_groups(layer))
}

/// As [`fdp_and_power`] with the null-group flags precomputed.
pub fn score(selected: &[usize], layer: &Layer, null_groups: &[bool]) -> LayerOutcome {
    let groups = layer_selection(selected, layer);
    let false_groups = groups.iter().filter(|&&g| null_groups[g]).count();
    let true_groups = groups.len() - false_groups;
    let non_null = null_groups.iter().filter(|&&b| !b).count();
    LayerOutcome {
        fdp: false_groups as f64 / groups.len().max(1) as f64,
        power: true_groups as f64 / non_null.max(1) as f64,
        selected_groups: groups.len(),
    }
}

/// Sample mean with its standard error `sd / sqrt(trials)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub trials: usize,
}

impl Estimate {
    /// Summarizes `values` in order; an empty input gives zeros.
    pub fn from_samples(values: &[f64]) -> Self {
        let trials = values.len();
        if trials == 0 {
            return Self {
                mean: 0.0,
                se: 0.0,
                trials,
            };
        }
        let mean = values.iter().sum::<f64>() / trials as f64;
        let se = if trials > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
            (var / trials as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, se, trials }
    }

    /// `mean <= bound + sigmas * se`.
    pub fn within_upper(&self, bound: f64, sigmas: f64) -> bool {
        self.mean <= bound + sigmas * self.se
    }

    /// `|mean - target| <= sigmas * se`.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.se
    }
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `values` and
/// Uniform[0, 1].
pub fn ks_uniform_statistic(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let above = (i + 1) as f64 / n - x;
            let below = x - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value `sqrt(-ln(level / 2) / 2) / sqrt(n)`.
pub fn ks_critical_value(n: usize, level: f64) -> f64 {
    (-(level / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}
