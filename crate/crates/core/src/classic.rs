//! The Simes p-value, the Benjamini-Hochberg step-up procedure, and BH
//! applied to group-level Simes p-values.
//!
//! All comparisons are non-strict and evaluated exactly (see [`crate::exact`]),
//! so `simes(P) <= t` holds precisely when BH at level `t` rejects at least
//! one hypothesis.

use std::cmp::Ordering;

use crate::exact::{ceil_ratio, scaled_le};
use crate::problem::Layer;

/// A level `alpha * k / size`, kept as an exact multiple of `alpha`.
///
/// Grid thresholds of the p-filter are `alpha_m * k / G_m`; an ordinary level
/// `t` is `GridPoint::plain(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub alpha: f64,
    pub k: u64,
    pub size: u64,
}

impl GridPoint {
    pub fn new(alpha: f64, k: usize, size: usize) -> Self {
        debug_assert!(size > 0);
        Self {
            alpha,
            k: k as u64,
            size: size as u64,
        }
    }

    pub fn plain(level: f64) -> Self {
        Self {
            alpha: level,
            k: 1,
            size: 1,
        }
    }

    /// Floating-point value of the level.
    pub fn value(&self) -> f64 {
        self.alpha * self.k as f64 / self.size as f64
    }
}

/// A Simes p-value held exactly as `p * scale / rank`, where `p` is the
/// `rank`-th smallest p-value of a group of `scale` hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimesValue {
    pub p: f64,
    pub scale: u64,
    pub rank: u64,
}

impl SimesValue {
    /// Smallest double not below the exact value; `value() <= t` agrees with
    /// the exact comparison for every double `t`.
    pub fn value(&self) -> f64 {
        ceil_ratio(self.p, self.scale, self.rank)
    }

    pub fn at_most(&self, level: GridPoint) -> bool {
        scaled_le(
            self.p,
            self.scale * level.size,
            level.alpha,
            level.k * self.rank,
        )
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let le = scaled_le(
            self.p,
            self.scale * other.rank,
            other.p,
            other.scale * self.rank,
        );
        let ge = scaled_le(
            other.p,
            other.scale * self.rank,
            self.p,
            self.scale * other.rank,
        );
        match (le, ge) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    /// Smallest `k` in `0..=size` with `self <= alpha * k / size`, if any.
    pub fn entry_index(&self, alpha: f64, size: usize) -> Option<usize> {
        // passing is monotone in k
        let (mut lo, mut hi) = (0, size + 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.at_most(GridPoint::new(alpha, mid, size)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        (lo <= size).then_some(lo)
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Exact Simes p-value `min_k P_(k) * n / k` of a nonempty vector.
pub fn simes_exact(values: &[f64]) -> SimesValue {
    assert!(!values.is_empty(), "Simes p-value of an empty group");
    let n = values.len() as u64;
    sorted(values)
        .into_iter()
        .zip(1u64..)
        .map(|(p, rank)| SimesValue { p, scale: n, rank })
        .min_by(SimesValue::cmp_exact)
        .expect("nonempty")
}

/// Simes p-value of a nonempty vector, rounded up to the nearest double.
pub fn simes(values: &[f64]) -> f64 {
    simes_exact(values).value()
}

/// Exact Simes p-value of every group of `layer`.
pub fn group_simes(values: &[f64], layer: &Layer) -> Vec<SimesValue> {
    layer
        .groups()
        .iter()
        .map(|members| {
            let group: Vec<f64> = members.iter().map(|&i| values[i]).collect();
            simes_exact(&group)
        })
        .collect()
}

/// BH rejection count at an exact level: `max {k : P_(k) <= level * k / n}`,
/// or 0 when no `k` qualifies.
pub fn bh_khat_at(values: &[f64], level: GridPoint) -> usize {
    let n = values.len() as u64;
    let sorted = sorted(values);
    (1..=sorted.len())
        .rev()
        .find(|&k| {
            scaled_le(
                sorted[k - 1],
                n * level.size,
                level.alpha,
                level.k * k as u64,
            )
        })
        .unwrap_or(0)
}

/// BH rejection set at an exact level: `{i : P_i <= level * khat / n}`.
pub fn bh_reject_at(values: &[f64], level: GridPoint) -> Vec<usize> {
    let khat = bh_khat_at(values, level) as u64;
    if khat == 0 {
        return Vec::new();
    }
    let n = values.len() as u64;
    values
        .iter()
        .enumerate()
        .filter(|(_, &p)| scaled_le(p, n * level.size, level.alpha, level.k * khat))
        .map(|(i, _)| i)
        .collect()
}

/// Number of hypotheses BH rejects at level `alpha`.
pub fn bh_khat(values: &[f64], alpha: f64) -> usize {
    bh_khat_at(values, GridPoint::plain(alpha))
}

/// Indices (0-based, ascending) rejected by BH at level `alpha`.
pub fn bh_reject(values: &[f64], alpha: f64) -> Vec<usize> {
    bh_reject_at(values, GridPoint::plain(alpha))
}

/// Groups selected by BH at level `alpha` applied to the group Simes
/// p-values of `layer`.
pub fn group_simes_bh(values: &[f64], layer: &Layer, alpha: f64) -> Vec<usize> {
    let simes = group_simes(values, layer);
    let groups = simes.len();
    let mut order = simes.clone();
    order.sort_by(SimesValue::cmp_exact);
    let khat = (1..=groups)
        .rev()
        .find(|&k| order[k - 1].at_most(GridPoint::new(alpha, k, groups)))
        .unwrap_or(0);
    if khat == 0 {
        return Vec::new();
    }
    let cutoff = GridPoint::new(alpha, khat, groups);
    (0..groups).filter(|&g| simes[g].at_most(cutoff)).collect()
}
