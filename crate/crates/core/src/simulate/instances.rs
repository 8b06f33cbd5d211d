//! Random small multi-layer problems for cross-checking the fixed point
//! against the exhaustive oracle.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::problem::{Layer, MultiLayerProblem, PValueVector};

/// Levels drawn for random instances.
pub const INSTANCE_ALPHAS: [f64; 4] = [0.05, 0.1, 0.2, 0.5];

const PALETTE: [f64; 9] = [0.0, 0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 1.0];

/// Mixes skewed-small, tied and plain uniform p-values.
pub fn random_pvalues<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| match rng.random_range(0..10) {
            0..=4 => rng.random::<f64>().powi(3),
            5 | 6 => *PALETTE.choose(rng).expect("nonempty"),
            _ => rng.random::<f64>(),
        })
        .collect()
}

/// A random partition of `0..n`: finest, coarsest, or random labels.
pub fn random_layer<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Layer {
    match rng.random_range(0..10) {
        0 | 1 => Layer::finest(n),
        2 => Layer::coarsest(n),
        _ => {
            let labels = rng.random_range(1..=n);
            let raw: Vec<usize> = (0..n).map(|_| rng.random_range(0..labels)).collect();
            // relabel by first appearance so no group is empty
            let mut map = vec![usize::MAX; labels];
            let mut next = 0;
            let assignment: Vec<usize> = raw
                .iter()
                .map(|&l| {
                    if map[l] == usize::MAX {
                        map[l] = next;
                        next += 1;
                    }
                    map[l]
                })
                .collect();
            Layer::from_assignment(&assignment).expect("relabelled assignment partitions")
        }
    }
}

/// A problem with `1..=max_n` hypotheses and `1..=max_m` random layers.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_n: usize,
    max_m: usize,
) -> MultiLayerProblem {
    let n = rng.random_range(1..=max_n.max(1));
    let m = rng.random_range(1..=max_m.max(1));
    let pvalues = PValueVector::new(random_pvalues(rng, n)).expect("values in [0, 1]");
    let layers = (0..m).map(|_| random_layer(rng, n)).collect();
    let alphas = (0..m)
        .map(|_| *INSTANCE_ALPHAS.choose(rng).expect("nonempty"))
        .collect();
    MultiLayerProblem::new(pvalues, layers, alphas).expect("consistent random problem")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::trial_rng;

    #[test]
    fn instances_respect_limits() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..200 {
            let p = random_instance(&mut rng, 12, 3);
            assert!((1..=12).contains(&p.n()));
            assert!((1..=3).contains(&p.layer_count()));
            assert!(p.alphas().iter().all(|a| INSTANCE_ALPHAS.contains(a)));
        }
    }
}
