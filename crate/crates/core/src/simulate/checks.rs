//! Monte-Carlo checks of distributional guarantees under independent
//! uniform p-values.

use rand::Rng;
use rayon::prelude::*;

use crate::classic::bh_khat;
use crate::engine::pfilter;
use crate::exact::scaled_le;
use crate::problem::{Layer, MultiLayerProblem, PValueVector};

use super::metrics::Estimate;
use super::trials::trial_rng;

fn uniforms<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Nonincreasing random thresholds `f(P)` for the super-uniformity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdFunction {
    /// `alpha * khat_alpha(P) / n`, the BH rejection threshold.
    BhCutoff {
        alpha: f64,
    },
    Constant(f64),
}

/// Estimates `E[1{P_1 <= f(P)} / f(P)]` (with `0/0 = 0`) for `n` independent
/// uniforms.
pub fn lemma1_check_with(f: ThresholdFunction, n: usize, trials: usize, seed: u64) -> Estimate {
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let p = uniforms(&mut trial_rng(seed, k), n);
            match f {
                ThresholdFunction::BhCutoff { alpha } => {
                    let khat = bh_khat(&p, alpha);
                    let cutoff = alpha * khat as f64 / n as f64;
                    if cutoff == 0.0 {
                        0.0
                    } else if scaled_le(p[0], n as u64, alpha, khat as u64) {
                        1.0 / cutoff
                    } else {
                        0.0
                    }
                }
                ThresholdFunction::Constant(c) => {
                    if c > 0.0 && p[0] <= c {
                        1.0 / c
                    } else {
                        0.0
                    }
                }
            }
        })
        .collect();
    Estimate::from_samples(&samples)
}

/// [`lemma1_check_with`] for the BH cutoff at level `alpha`.
pub fn lemma1_check(alpha: f64, n: usize, trials: usize, seed: u64) -> Estimate {
    lemma1_check_with(ThresholdFunction::BhCutoff { alpha }, n, trials, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalNullEstimate {
    /// P(any rejection) for the p-filter with a finest layer at `alpha1` and a
    /// single-group layer at `alpha2`.
    pub pfilter: Estimate,
    /// P(any rejection) for BH at `alpha1`.
    pub bh: Estimate,
    /// Trials where the p-filter needed more than `G_1 + G_2 + 1` sweeps.
    pub pass_bound_violations: usize,
}

pub fn global_null_check(
    alpha1: f64,
    alpha2: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> GlobalNullEstimate {
    let layers = vec![Layer::finest(n), Layer::coarsest(n)];
    let draws: Vec<(f64, f64, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let p = uniforms(&mut trial_rng(seed, k), n);
            let bh_any = bh_khat(&p, alpha1) >= 1;
            let problem = MultiLayerProblem::new(
                PValueVector::new(p).expect("uniform draws lie in [0, 1)"),
                layers.clone(),
                vec![alpha1, alpha2],
            )
            .expect("valid problem");
            let report = pfilter(&problem);
            (
                f64::from(u8::from(!report.selected.is_empty())),
                f64::from(u8::from(bh_any)),
                report.passes > report.pass_bound(),
            )
        })
        .collect();
    let pf: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let bh: Vec<f64> = draws.iter().map(|d| d.1).collect();
    GlobalNullEstimate {
        pfilter: Estimate::from_samples(&pf),
        bh: Estimate::from_samples(&bh),
        pass_bound_violations: draws.iter().filter(|d| d.2).count(),
    }
}
