//! Signal patterns and the two experiment layouts.

use rand::Rng;

use crate::problem::{Layer, PValueVector, TruthSet};

use super::normal::{std_normal_sample, std_normal_upper_tail};

/// Per-hypothesis signal strengths; zero marks a true null.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalPattern {
    mu: Vec<f64>,
}

impl SignalPattern {
    /// Panics if any entry is negative or not finite.
    pub fn new(mu: Vec<f64>) -> Self {
        assert!(
            mu.iter().all(|m| m.is_finite() && *m >= 0.0),
            "signal strengths must be finite and nonnegative"
        );
        Self { mu }
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn truth(&self) -> TruthSet {
        TruthSet::from_mask(self.mu.iter().map(|&m| m == 0.0).collect())
    }
}

/// Draws `p_i = 1 - Phi(mu_i + Z_i)` with independent standard normal `Z_i`.
pub fn gen_pvalues<R: Rng + ?Sized>(pattern: &SignalPattern, rng: &mut R) -> PValueVector {
    let values = pattern
        .mu
        .iter()
        .map(|&mu| std_normal_upper_tail(mu + std_normal_sample(rng)))
        .collect();
    PValueVector::new(values).expect("normal tail probabilities lie in [0, 1]")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    Grouped,
    Grid,
}

impl DesignKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Grouped => "grouped",
            Self::Grid => "grid",
        }
    }
}

impl std::str::FromStr for DesignKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grouped" => Ok(Self::Grouped),
            "grid" => Ok(Self::Grid),
            other => Err(format!(
                "unknown design '{other}' (expected grouped or grid)"
            )),
        }
    }
}

/// A fixed hypothesis layout: which hypotheses carry signal, and the layers
/// used to score and to run the procedures. Layer 0 is always the finest
/// partition and layer 1 is the grouping used by the two-step comparator.
#[derive(Debug, Clone)]
pub struct Design {
    kind: DesignKind,
    signals: Vec<bool>,
    layers: Vec<Layer>,
    layer_names: Vec<&'static str>,
}

impl Design {
    pub fn new(kind: DesignKind) -> Self {
        match kind {
            DesignKind::Grouped => design_grouped(),
            DesignKind::Grid => design_grid(),
        }
    }

    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.signals.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer_names(&self) -> &[&'static str] {
        &self.layer_names
    }

    pub fn signals(&self) -> &[bool] {
        &self.signals
    }

    pub fn signal_count(&self) -> usize {
        self.signals.iter().filter(|&&s| s).count()
    }

    /// Every signal at strength `mu`.
    pub fn pattern(&self, mu: f64) -> SignalPattern {
        SignalPattern::new(
            self.signals
                .iter()
                .map(|&s| if s { mu } else { 0.0 })
                .collect(),
        )
    }

    pub fn truth(&self) -> TruthSet {
        TruthSet::from_mask(self.signals.iter().map(|&s| !s).collect())
    }

    /// Index of the layer the two-step comparator groups by.
    pub fn bb_layer(&self) -> usize {
        1
    }
}

pub const GROUPED_N: usize = 1000;
pub const GROUPED_GROUP_SIZE: usize = 10;

/// 1000 hypotheses in 100 contiguous groups of 10; group `j` (1-based,
/// `j <= 10`) holds `j` signals in its first `j` positions.
pub fn design_grouped() -> Design {
    let groups = GROUPED_N / GROUPED_GROUP_SIZE;
    let assignment: Vec<usize> = (0..GROUPED_N).map(|i| i / GROUPED_GROUP_SIZE).collect();
    let mut signals = vec![false; GROUPED_N];
    for j in 1..=10 {
        let start = (j - 1) * GROUPED_GROUP_SIZE;
        signals[start..start + j].fill(true);
    }
    debug_assert_eq!(groups, 100);
    Design {
        kind: DesignKind::Grouped,
        signals,
        layers: vec![
            Layer::finest(GROUPED_N),
            Layer::from_assignment(&assignment).expect("contiguous blocks partition"),
        ],
        layer_names: vec!["entries", "groups"],
    }
}

pub const GRID_SIDE: usize = 100;
const BLOCK: usize = 15;

/// Row-major position of the 0-based cell `(row, col)`.
pub fn grid_index(row: usize, col: usize) -> usize {
    row * GRID_SIDE + col
}

/// A 100 x 100 grid scored by entries, rows and columns. Signals fill rows
/// 1-15 x cols 1-15 and rows 16-30 x cols 16-30 (1-based), plus 15 isolated
/// cells at (31, 31), (33, 33), ..., (59, 59).
pub fn design_grid() -> Design {
    let n = GRID_SIDE * GRID_SIDE;
    let mut signals = vec![false; n];
    for offset in [0, BLOCK] {
        for r in offset..offset + BLOCK {
            for c in offset..offset + BLOCK {
                signals[grid_index(r, c)] = true;
            }
        }
    }
    for k in 0..BLOCK {
        let d = 2 * BLOCK + 2 * k;
        signals[grid_index(d, d)] = true;
    }
    let rows: Vec<usize> = (0..n).map(|i| i / GRID_SIDE).collect();
    let cols: Vec<usize> = (0..n).map(|i| i % GRID_SIDE).collect();
    Design {
        kind: DesignKind::Grid,
        signals,
        layers: vec![
            Layer::finest(n),
            Layer::from_assignment(&rows).expect("rows partition"),
            Layer::from_assignment(&cols).expect("columns partition"),
        ],
        layer_names: vec!["entries", "rows", "columns"],
    }
}
