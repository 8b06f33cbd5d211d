//! Domain types: p-values, partitions of the hypotheses, and the multi-layer
//! problem definition.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// A nonempty vector of p-values, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueVector(Vec<f64>);

impl PValueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyPValues);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidPValue { index, value });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for PValueVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for PValueVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// One way in which a proposed set of groups fails to partition `0..n`.
///
/// `Display` renders indices 1-based to match the file formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerViolation {
    NoGroups,
    EmptyGroup {
        group: usize,
    },
    OutOfRange {
        group: usize,
        index: usize,
    },
    Overlap {
        index: usize,
        first: usize,
        second: usize,
    },
    Uncovered {
        index: usize,
    },
}

impl fmt::Display for LayerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::NoGroups => write!(f, "layer has no groups"),
            Self::EmptyGroup { group } => write!(f, "group {} is empty", group + 1),
            Self::OutOfRange { group, index } => {
                write!(
                    f,
                    "group {} contains out-of-range index {}",
                    group + 1,
                    index + 1
                )
            }
            Self::Overlap {
                index,
                first,
                second,
            } => write!(
                f,
                "index {} in two groups ({} and {})",
                index + 1,
                first + 1,
                second + 1
            ),
            Self::Uncovered { index } => write!(f, "index {} uncovered", index + 1),
        }
    }
}

/// Checks that `groups` is an exact partition of `0..n` into nonempty sets.
///
/// Returns every violation found; an empty vector means the layer is valid.
pub fn validate_layer(groups: &[Vec<usize>], n: usize) -> Vec<LayerViolation> {
    let mut violations = Vec::new();
    if groups.is_empty() {
        violations.push(LayerViolation::NoGroups);
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (g, members) in groups.iter().enumerate() {
        if members.is_empty() {
            violations.push(LayerViolation::EmptyGroup { group: g });
        }
        for &i in members {
            match owner.get_mut(i) {
                None => violations.push(LayerViolation::OutOfRange { group: g, index: i }),
                Some(slot @ None) => *slot = Some(g),
                Some(Some(first)) => violations.push(LayerViolation::Overlap {
                    index: i,
                    first: *first,
                    second: g,
                }),
            }
        }
    }
    violations.extend(
        owner
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_none())
            .map(|(index, _)| LayerViolation::Uncovered { index }),
    );
    violations
}

/// A partition of the hypotheses `0..n` into disjoint nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    groups: Vec<Vec<usize>>,
    membership: Vec<usize>,
}

impl Layer {
    /// Builds a layer from explicit groups. Members are stored sorted.
    pub fn new(n: usize, mut groups: Vec<Vec<usize>>) -> Result<Self> {
        let violations = validate_layer(&groups, n);
        if !violations.is_empty() {
            return Err(Error::InvalidLayer(violations));
        }
        let mut membership = vec![0; n];
        for (g, members) in groups.iter_mut().enumerate() {
            members.sort_unstable();
            for &i in members.iter() {
                membership[i] = g;
            }
        }
        Ok(Self { groups, membership })
    }

    /// Builds a layer from a per-hypothesis group assignment. Group ids must
    /// cover `0..G` with no gaps.
    pub fn from_assignment(assignment: &[usize]) -> Result<Self> {
        let group_count = assignment.iter().max().map_or(0, |&g| g + 1);
        let mut groups = vec![Vec::new(); group_count];
        for (i, &g) in assignment.iter().enumerate() {
            groups[g].push(i);
        }
        Self::new(assignment.len(), groups)
    }

    /// `n` singleton groups in index order.
    pub fn finest(n: usize) -> Self {
        Self {
            groups: (0..n).map(|i| vec![i]).collect(),
            membership: (0..n).collect(),
        }
    }

    /// A single group holding every hypothesis.
    pub fn coarsest(n: usize) -> Self {
        Self {
            groups: vec![(0..n).collect()],
            membership: vec![0; n],
        }
    }

    /// Number of hypotheses covered.
    pub fn n(&self) -> usize {
        self.membership.len()
    }

    /// Number of groups `G`.
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group(&self, g: usize) -> &[usize] {
        &self.groups[g]
    }

    /// Group index of every hypothesis.
    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    /// The unique group containing hypothesis `i`.
    pub fn group_of(&self, i: usize) -> Result<usize> {
        self.membership
            .get(i)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            })
    }

    pub fn is_finest(&self) -> bool {
        self.groups.len() == self.n()
    }
}

/// P-values together with `M` layers and their target FDR levels.
///
/// Levels above 1 are accepted: any `alpha_m >= G_m` leaves layer `m`
/// without effect on the selection.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLayerProblem {
    pvalues: PValueVector,
    layers: Vec<Layer>,
    alphas: Vec<f64>,
}

impl MultiLayerProblem {
    pub fn new(pvalues: PValueVector, layers: Vec<Layer>, alphas: Vec<f64>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::NoLayers);
        }
        if layers.len() != alphas.len() {
            return Err(Error::AlphaCountMismatch {
                layers: layers.len(),
                alphas: alphas.len(),
            });
        }
        for (m, layer) in layers.iter().enumerate() {
            if layer.n() != pvalues.len() {
                return Err(Error::LayerSizeMismatch {
                    layer: m,
                    expected: pvalues.len(),
                    found: layer.n(),
                });
            }
        }
        if let Some((layer, &value)) = alphas
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a >= 0.0))
        {
            return Err(Error::InvalidAlpha { layer, value });
        }
        Ok(Self {
            pvalues,
            layers,
            alphas,
        })
    }

    pub fn pvalues(&self) -> &PValueVector {
        &self.pvalues
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn n(&self) -> usize {
        self.pvalues.len()
    }

    /// Number of layers `M`.
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }
}

/// The set of true nulls, used only for scoring simulations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthSet {
    null: Vec<bool>,
}

impl TruthSet {
    pub fn from_mask(null: Vec<bool>) -> Self {
        Self { null }
    }

    pub fn from_null_indices(n: usize, nulls: impl IntoIterator<Item = usize>) -> Self {
        let mut null = vec![false; n];
        for i in nulls {
            null[i] = true;
        }
        Self { null }
    }

    pub fn n(&self) -> usize {
        self.null.len()
    }

    pub fn is_null(&self, i: usize) -> bool {
        self.null[i]
    }

    pub fn null_count(&self) -> usize {
        self.null.iter().filter(|&&b| b).count()
    }

    /// Per-group flags: a group is null when every member is a true null.
    pub fn null_groups(&self, layer: &Layer) -> Vec<bool> {
        layer
            .groups()
            .iter()
            .map(|members| members.iter().all(|&i| self.null[i]))
            .collect()
    }
}
