//! JSON reports written by `pfilter run`.
//!
//! Hypothesis ids and group indices are 1-based. Thresholds carry their
//! grid position `grid_index / grid_size` next to the float value.

use std::collections::BTreeMap;

use pfilter::{DiscoveryReport, GridThreshold, ThresholdVector};
use serde::{Deserialize, Serialize};

use crate::io::LayerFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridValue {
    pub grid_index: usize,
    pub grid_size: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRef {
    pub index: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub name: String,
    pub alpha: f64,
    pub groups: usize,
    pub threshold: GridValue,
    pub estimated_fdp: f64,
    pub selected_groups: Vec<GroupRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfilterReport {
    pub n: usize,
    pub layers: Vec<LayerReport>,
    pub selected: Vec<usize>,
    pub passes: usize,
    pub pass_bound: usize,
    /// Grid indices after each sweep.
    pub trace: Vec<Vec<usize>>,
}

fn group_refs(groups: &[usize], labels: &[String]) -> Vec<GroupRef> {
    groups
        .iter()
        .map(|&g| GroupRef {
            index: g + 1,
            label: labels[g].clone(),
        })
        .collect()
}

fn one_based(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|i| i + 1).collect()
}

impl PfilterReport {
    pub fn new(report: &DiscoveryReport, layers: &[LayerFile], n: usize) -> Self {
        let layer_reports = layers
            .iter()
            .zip(report.thresholds.as_slice())
            .zip(&report.layer_selected)
            .zip(&report.estimated_fdps)
            .map(|(((file, t), selected), &fdp)| LayerReport {
                name: file.name(),
                alpha: t.alpha,
                groups: t.groups,
                threshold: GridValue {
                    grid_index: t.index,
                    grid_size: t.groups,
                    value: t.value(),
                },
                estimated_fdp: fdp,
                selected_groups: group_refs(selected, &file.labels),
            })
            .collect();
        Self {
            n,
            layers: layer_reports,
            selected: one_based(&report.selected),
            passes: report.passes,
            pass_bound: report.pass_bound(),
            trace: report.trace.clone(),
        }
    }

    /// Rebuilds the in-memory report.
    pub fn to_discovery_report(&self) -> DiscoveryReport {
        let thresholds: Vec<GridThreshold> = self
            .layers
            .iter()
            .map(|l| GridThreshold {
                alpha: l.alpha,
                index: l.threshold.grid_index,
                groups: l.threshold.grid_size,
            })
            .collect();
        DiscoveryReport {
            thresholds: ThresholdVector::from(thresholds),
            selected: self.selected.iter().map(|i| i - 1).collect(),
            layer_selected: self
                .layers
                .iter()
                .map(|l| l.selected_groups.iter().map(|g| g.index - 1).collect())
                .collect(),
            estimated_fdps: self.layers.iter().map(|l| l.estimated_fdp).collect(),
            passes: self.passes,
            trace: self.trace.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedGroup {
    pub index: usize,
    pub label: String,
    pub selected: Vec<usize>,
}

/// Output of `pfilter run`, tagged by method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum RunReport {
    Pfilter(PfilterReport),
    Bh {
        n: usize,
        alpha: f64,
        /// `alpha * khat / n`.
        cutoff: GridValue,
        selected: Vec<usize>,
    },
    Simes {
        n: usize,
        alpha: f64,
        simes: f64,
        rejected: bool,
    },
    GroupBh {
        n: usize,
        alpha: f64,
        layer: String,
        group_simes: Vec<f64>,
        selected_groups: Vec<GroupRef>,
        selected: Vec<usize>,
    },
    Bb {
        n: usize,
        alpha_group: f64,
        alpha_overall: f64,
        layer: String,
        selected_groups: Vec<SelectedGroup>,
        selected: Vec<usize>,
    },
}

impl RunReport {
    pub fn bh(n: usize, alpha: f64, khat: usize, selected: &[usize]) -> Self {
        Self::Bh {
            n,
            alpha,
            cutoff: GridValue {
                grid_index: khat,
                grid_size: n,
                value: pfilter::GridPoint::new(alpha, khat, n).value(),
            },
            selected: one_based(selected),
        }
    }

    pub fn group_bh(alpha: f64, file: &LayerFile, simes: Vec<f64>, groups: &[usize]) -> Self {
        let n = file.layer.n();
        let mut selected: Vec<usize> = groups
            .iter()
            .flat_map(|&g| file.layer.group(g).iter().copied())
            .collect();
        selected.sort_unstable();
        Self::GroupBh {
            n,
            alpha,
            layer: file.name(),
            group_simes: simes,
            selected_groups: group_refs(groups, &file.labels),
            selected: one_based(&selected),
        }
    }

    pub fn bb(
        alpha_group: f64,
        alpha_overall: f64,
        file: &LayerFile,
        within: &BTreeMap<usize, Vec<usize>>,
        flat: &[usize],
    ) -> Self {
        Self::Bb {
            n: file.layer.n(),
            alpha_group,
            alpha_overall,
            layer: file.name(),
            selected_groups: within
                .iter()
                .map(|(&g, ids)| SelectedGroup {
                    index: g + 1,
                    label: file.labels[g].clone(),
                    selected: one_based(ids),
                })
                .collect(),
            selected: one_based(flat),
        }
    }
}
