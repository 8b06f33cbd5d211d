//! The p-filter: multi-layer selection sets, estimated FDPs and the
//! threshold fixed point.
//!
//! Every layer `m` has a threshold on the grid `alpha_m * k / G_m`,
//! `k = 0..=G_m`. A hypothesis is selected when, in every layer, the Simes
//! p-value of its group is at most that layer's threshold. The fixed point
//! lowers each threshold in turn to the largest grid value whose estimated
//! FDP `G_m * t_m / max(1, |S_m|)` stays within `alpha_m`, until a full sweep
//! leaves every threshold unchanged.
//!
//! Grid thresholds are handled through their integer index `k`. For
//! `alpha_m > 0` the estimated-FDP constraint at index `k` is exactly
//! `k <= max(1, |S_m|)`, so the iteration itself uses no floating point. A
//! layer with `alpha_m = 0` has an all-zero grid and is never lowered.

mod brute_force;

pub use brute_force::{brute_force_pfilter, ENUMERATION_LIMIT};

use crate::classic::{group_simes, GridPoint};
use crate::error::{Error, Result};
use crate::problem::{Layer, MultiLayerProblem};

/// One layer's threshold `alpha * index / groups`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridThreshold {
    pub alpha: f64,
    pub index: usize,
    pub groups: usize,
}

impl GridThreshold {
    pub fn value(&self) -> f64 {
        self.point().value()
    }

    pub fn point(&self) -> GridPoint {
        GridPoint::new(self.alpha, self.index, self.groups)
    }
}

/// Thresholds for all `M` layers of a problem, each on its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdVector(Vec<GridThreshold>);

impl ThresholdVector {
    /// Every layer at the top of its grid, `t_m = alpha_m`.
    pub fn top(problem: &MultiLayerProblem) -> Self {
        let indices: Vec<usize> = problem.layers().iter().map(Layer::group_count).collect();
        Self::from_indices(problem, &indices).expect("top of grid is in range")
    }

    pub fn from_indices(problem: &MultiLayerProblem, indices: &[usize]) -> Result<Self> {
        if indices.len() != problem.layer_count() {
            return Err(Error::ThresholdCountMismatch {
                expected: problem.layer_count(),
                found: indices.len(),
            });
        }
        problem
            .layers()
            .iter()
            .zip(problem.alphas())
            .zip(indices)
            .map(|((layer, &alpha), &index)| {
                let groups = layer.group_count();
                if index > groups {
                    Err(Error::IndexOutOfRange {
                        index,
                        n: groups + 1,
                    })
                } else {
                    Ok(GridThreshold {
                        alpha,
                        index,
                        groups,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|t| t.index).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(GridThreshold::value).collect()
    }

    pub fn points(&self) -> Vec<GridPoint> {
        self.0.iter().map(GridThreshold::point).collect()
    }

    pub fn as_slice(&self) -> &[GridThreshold] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<GridThreshold>> for ThresholdVector {
    fn from(thresholds: Vec<GridThreshold>) -> Self {
        Self(thresholds)
    }
}

/// Output of the p-filter at its fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryReport {
    pub thresholds: ThresholdVector,
    /// Selected hypotheses, ascending.
    pub selected: Vec<usize>,
    /// Per layer, the groups that contain a selected hypothesis.
    pub layer_selected: Vec<Vec<usize>>,
    pub estimated_fdps: Vec<f64>,
    /// Outer sweeps performed, including the final unchanged one.
    pub passes: usize,
    /// Grid indices after each sweep.
    pub trace: Vec<Vec<usize>>,
}

impl DiscoveryReport {
    /// `G_1 + ... + G_M + 1`, the maximum number of sweeps.
    pub fn pass_bound(&self) -> usize {
        self.thresholds
            .as_slice()
            .iter()
            .map(|t| t.groups)
            .sum::<usize>()
            + 1
    }
}

/// A problem with the per-group Simes p-values resolved to grid entry
/// indices: group `g` of layer `m` passes at grid index `k` iff
/// `k >= entry[m][g]`. Groups that never pass get `G_m + 1`.
#[derive(Debug, Clone)]
pub struct PreparedProblem<'a> {
    problem: &'a MultiLayerProblem,
    entry: Vec<Vec<usize>>,
}

impl<'a> PreparedProblem<'a> {
    pub fn new(problem: &'a MultiLayerProblem) -> Self {
        let entry = problem
            .layers()
            .iter()
            .zip(problem.alphas())
            .map(|(layer, &alpha)| {
                let groups = layer.group_count();
                group_simes(problem.pvalues(), layer)
                    .iter()
                    .map(|s| s.entry_index(alpha, groups).unwrap_or(groups + 1))
                    .collect()
            })
            .collect();
        Self { problem, entry }
    }

    pub fn problem(&self) -> &'a MultiLayerProblem {
        self.problem
    }

    /// Entry index of every group in layer `m`.
    pub fn entry_indices(&self, m: usize) -> &[usize] {
        &self.entry[m]
    }

    fn passes_layer(&self, m: usize, i: usize, k: usize) -> bool {
        self.entry[m][self.problem.layers()[m].membership()[i]] <= k
    }

    /// Hypotheses selected at the given grid indices.
    pub fn selection(&self, indices: &[usize]) -> Vec<usize> {
        (0..self.problem.n())
            .filter(|&i| (0..indices.len()).all(|m| self.passes_layer(m, i, indices[m])))
            .collect()
    }

    /// Largest feasible grid index for layer `m` not above `indices[m]`,
    /// holding the other layers fixed.
    pub fn update_index(&self, m: usize, indices: &[usize]) -> usize {
        let current = indices[m];
        if self.problem.alphas()[m] == 0.0 {
            return current;
        }
        let layer = &self.problem.layers()[m];
        let mut alive = vec![false; layer.group_count()];
        for i in 0..self.problem.n() {
            let others = (0..indices.len())
                .filter(|&l| l != m)
                .all(|l| self.passes_layer(l, i, indices[l]));
            if others {
                alive[layer.membership()[i]] = true;
            }
        }
        // selected[k] = number of layer-m groups selected at index k
        let mut selected = vec![0usize; current + 1];
        for (g, _) in alive.iter().enumerate().filter(|(_, &a)| a) {
            let e = self.entry[m][g];
            if e <= current {
                selected[e] += 1;
            }
        }
        for k in 1..=current {
            selected[k] += selected[k - 1];
        }
        // feasibility is not monotone in k, so scan every index
        (1..=current)
            .rev()
            .find(|&k| k <= selected[k].max(1))
            .unwrap_or(current)
    }

    /// Runs the sweeps from the top of the grid with the standard update.
    pub fn fixed_point(&self) -> (Vec<usize>, usize, Vec<Vec<usize>>) {
        self.fixed_point_with(|prep, m, indices| prep.update_index(m, indices))
    }

    /// Runs the sweeps with a caller-supplied update rule. Stops after
    /// `G_1 + ... + G_M + 2` sweeps if the rule fails to converge.
    pub fn fixed_point_with<F>(&self, update: F) -> (Vec<usize>, usize, Vec<Vec<usize>>)
    where
        F: Fn(&Self, usize, &[usize]) -> usize,
    {
        let layers = self.problem.layers();
        let mut indices: Vec<usize> = layers.iter().map(Layer::group_count).collect();
        let cap = indices.iter().sum::<usize>() + 2;
        let mut trace = Vec::new();
        let mut passes = 0;
        loop {
            passes += 1;
            let mut changed = false;
            for m in 0..layers.len() {
                let next = update(self, m, &indices);
                if next != indices[m] {
                    indices[m] = next;
                    changed = true;
                }
            }
            trace.push(indices.clone());
            if !changed || passes >= cap {
                break;
            }
        }
        (indices, passes, trace)
    }

    /// Assembles the report for the given grid indices.
    pub fn report(
        &self,
        indices: &[usize],
        passes: usize,
        trace: Vec<Vec<usize>>,
    ) -> DiscoveryReport {
        let thresholds =
            ThresholdVector::from_indices(self.problem, indices).expect("indices on the grid");
        let selected = self.selection(indices);
        let layer_selected: Vec<Vec<usize>> = self
            .problem
            .layers()
            .iter()
            .map(|layer| layer_selection(&selected, layer))
            .collect();
        let estimated_fdps = thresholds
            .as_slice()
            .iter()
            .zip(&layer_selected)
            .map(|(t, groups)| fdp_on_grid(t, groups.len()))
            .collect();
        DiscoveryReport {
            thresholds,
            selected,
            layer_selected,
            estimated_fdps,
            passes,
            trace,
        }
    }
}

/// `alpha * k / max(1, s)`, which never rounds above `alpha` when
/// `k <= max(1, s)`.
fn fdp_on_grid(t: &GridThreshold, selected: usize) -> f64 {
    if t.alpha == 0.0 {
        return 0.0;
    }
    t.alpha * (t.index as f64 / selected.max(1) as f64)
}

/// Hypotheses whose group passes `thresholds[m]` in every layer `m`.
pub fn selection_set(
    pvalues: &[f64],
    layers: &[Layer],
    thresholds: &[GridPoint],
) -> Result<Vec<usize>> {
    if thresholds.len() != layers.len() {
        return Err(Error::ThresholdCountMismatch {
            expected: layers.len(),
            found: thresholds.len(),
        });
    }
    let passing: Vec<Vec<bool>> = layers
        .iter()
        .zip(thresholds)
        .map(|(layer, &t)| {
            group_simes(pvalues, layer)
                .iter()
                .map(|s| s.at_most(t))
                .collect()
        })
        .collect();
    Ok((0..pvalues.len())
        .filter(|&i| {
            layers
                .iter()
                .zip(&passing)
                .all(|(layer, pass)| pass[layer.membership()[i]])
        })
        .collect())
}

/// Groups of `layer` containing at least one selected hypothesis.
pub fn layer_selection(selected: &[usize], layer: &Layer) -> Vec<usize> {
    let mut hit = vec![false; layer.group_count()];
    for &i in selected {
        hit[layer.membership()[i]] = true;
    }
    hit.iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(g, _)| g)
        .collect()
}

/// Estimated FDP `groups * threshold / max(1, selected)`.
pub fn estimated_fdp(threshold: f64, groups: usize, selected: usize) -> f64 {
    groups as f64 * threshold / selected.max(1) as f64
}

/// One application of the threshold update to layer `m`.
pub fn threshold_update(
    problem: &MultiLayerProblem,
    thresholds: &ThresholdVector,
    m: usize,
) -> Result<GridThreshold> {
    if thresholds.len() != problem.layer_count() {
        return Err(Error::ThresholdCountMismatch {
            expected: problem.layer_count(),
            found: thresholds.len(),
        });
    }
    let prepared = PreparedProblem::new(problem);
    let index = prepared.update_index(m, &thresholds.indices());
    Ok(GridThreshold {
        index,
        ..thresholds.as_slice()[m]
    })
}

/// Runs the p-filter to its fixed point.
pub fn pfilter(problem: &MultiLayerProblem) -> DiscoveryReport {
    let prepared = PreparedProblem::new(problem);
    let (indices, passes, trace) = prepared.fixed_point();
    let report = prepared.report(&indices, passes, trace);
    debug_assert!(report.passes <= report.pass_bound());
    report
}
