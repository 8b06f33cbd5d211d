//! The Benjamini-Bogomolov two-step procedure with Simes screening.
//!
//! Step one selects groups by BH at `alpha_grp` over the group Simes
//! p-values. Step two runs BH inside each selected group at the reduced level
//! `alpha_ov * |selected groups| / G`.

use std::collections::BTreeMap;

use crate::classic::{bh_reject_at, group_simes_bh, GridPoint};
use crate::problem::{Layer, TruthSet};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BbReport {
    /// Groups passing the screening step, ascending.
    pub selected_groups: Vec<usize>,
    /// Hypotheses selected inside each screened group. A screened group may
    /// end up with no selections.
    pub within: BTreeMap<usize, Vec<usize>>,
}

pub fn bb_procedure(pvalues: &[f64], layer: &Layer, alpha_grp: f64, alpha_ov: f64) -> BbReport {
    let selected_groups = group_simes_bh(pvalues, layer, alpha_grp);
    let level = GridPoint::new(alpha_ov, selected_groups.len(), layer.group_count());
    let within = selected_groups
        .iter()
        .map(|&g| {
            let members = layer.group(g);
            let group_p: Vec<f64> = members.iter().map(|&i| pvalues[i]).collect();
            let picked = bh_reject_at(&group_p, level)
                .into_iter()
                .map(|local| members[local])
                .collect();
            (g, picked)
        })
        .collect();
    BbReport {
        selected_groups,
        within,
    }
}

/// All hypotheses selected by the within-group step, ascending.
pub fn bb_flatten(report: &BbReport) -> Vec<usize> {
    let mut all: Vec<usize> = report.within.values().flatten().copied().collect();
    all.sort_unstable();
    all
}

/// Average within-group FDP over the screened groups:
/// `sum_g FDP_g / max(1, |selected groups|)`.
pub fn bb_average_within_fdp(report: &BbReport, truth: &TruthSet) -> f64 {
    let total: f64 = report
        .within
        .values()
        .map(|picked| {
            let false_picks = picked.iter().filter(|&&i| truth.is_null(i)).count();
            false_picks as f64 / picked.len().max(1) as f64
        })
        .sum();
    total / report.selected_groups.len().max(1) as f64
}
