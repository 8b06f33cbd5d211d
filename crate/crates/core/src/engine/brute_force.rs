//! Exhaustive-grid oracle for the p-filter thresholds.
//!
//! Enumerates every grid point, recomputes the selection directly from the
//! group Simes p-values, keeps the points where every estimated FDP is within
//! its level, and returns their coordinatewise maximum. Intended for tests
//! on small problems only.

use crate::classic::{group_simes, GridPoint, SimesValue};
use crate::error::{Error, Result};
use crate::problem::MultiLayerProblem;

use super::ThresholdVector;

/// Largest grid `prod (G_m + 1)` the oracle will enumerate.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

struct Oracle<'a> {
    problem: &'a MultiLayerProblem,
    simes: Vec<Vec<SimesValue>>,
}

impl Oracle<'_> {
    fn feasible(&self, indices: &[usize]) -> bool {
        let layers = self.problem.layers();
        let alphas = self.problem.alphas();
        let passing: Vec<Vec<bool>> = (0..layers.len())
            .map(|m| {
                let point = GridPoint::new(alphas[m], indices[m], layers[m].group_count());
                self.simes[m].iter().map(|s| s.at_most(point)).collect()
            })
            .collect();
        let mut hit: Vec<Vec<bool>> = layers
            .iter()
            .map(|l| vec![false; l.group_count()])
            .collect();
        for i in 0..self.problem.n() {
            if (0..layers.len()).all(|m| passing[m][layers[m].membership()[i]]) {
                for m in 0..layers.len() {
                    hit[m][layers[m].membership()[i]] = true;
                }
            }
        }
        (0..layers.len()).all(|m| {
            let selected = hit[m].iter().filter(|&&h| h).count();
            // G * (alpha * k / G) / max(1, s) <= alpha
            alphas[m] == 0.0 || indices[m] <= selected.max(1)
        })
    }
}

/// Coordinatewise maximum of the feasible grid points, verified feasible.
pub fn brute_force_pfilter(problem: &MultiLayerProblem) -> Result<ThresholdVector> {
    let sizes: Vec<usize> = problem
        .layers()
        .iter()
        .map(|l| l.group_count() + 1)
        .collect();
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    if total > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            size: total,
            limit: ENUMERATION_LIMIT,
        });
    }
    let oracle = Oracle {
        problem,
        simes: problem
            .layers()
            .iter()
            .map(|layer| group_simes(problem.pvalues(), layer))
            .collect(),
    };
    let mut best = vec![0usize; sizes.len()];
    let mut point = vec![0usize; sizes.len()];
    'grid: loop {
        if oracle.feasible(&point) {
            for (b, &k) in best.iter_mut().zip(&point) {
                *b = (*b).max(k);
            }
        }
        // odometer increment
        for m in 0..point.len() {
            point[m] += 1;
            if point[m] < sizes[m] {
                continue 'grid;
            }
            point[m] = 0;
        }
        break;
    }
    if !oracle.feasible(&best) {
        return Err(Error::CornerNotFeasible);
    }
    ThresholdVector::from_indices(problem, &best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::bh_khat;
    use crate::problem::{Layer, PValueVector};

    fn problem(p: &[f64], layers: Vec<Layer>, alphas: &[f64]) -> MultiLayerProblem {
        MultiLayerProblem::new(
            PValueVector::new(p.to_vec()).unwrap(),
            layers,
            alphas.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn two_layer_example() {
        let prob = problem(
            &[0.05, 0.9],
            vec![Layer::finest(2), Layer::coarsest(2)],
            &[0.2, 0.2],
        );
        let t = brute_force_pfilter(&prob).unwrap();
        assert_eq!(t.indices(), vec![1, 1]);
    }

    #[test]
    fn finest_corner_is_bh() {
        let p = [0.01, 0.04, 0.5, 0.002, 0.03, 0.7];
        for alpha in [0.05, 0.1, 0.2, 0.5] {
            let t = brute_force_pfilter(&problem(&p, vec![Layer::finest(6)], &[alpha])).unwrap();
            assert_eq!(t.indices()[0], bh_khat(&p, alpha).max(1));
        }
    }

    #[test]
    fn all_ones_select_nothing() {
        let prob = problem(
            &[1.0; 5],
            vec![Layer::finest(5), Layer::coarsest(5)],
            &[0.1, 0.1],
        );
        let corner = brute_force_pfilter(&prob).unwrap();
        // k = 1 satisfies k <= max(1, 0); nothing passes at alpha / G < 1
        assert_eq!(corner.indices(), vec![1, 1]);
        let sel = crate::engine::selection_set(prob.pvalues(), prob.layers(), &corner.points());
        assert!(sel.unwrap().is_empty());
    }

    #[test]
    fn refuses_large_grids() {
        let n = 4000;
        let p = vec![0.5; n];
        let prob = problem(&p, vec![Layer::finest(n), Layer::finest(n)], &[0.1, 0.1]);
        assert!(matches!(
            brute_force_pfilter(&prob),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
