//! Standard normal CDF and sampling.

use libm::erfc;
use rand::Rng;
use rand_distr::StandardNormal;

/// `Phi(x)`, evaluated through `erfc` so both tails keep relative accuracy.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// `1 - Phi(x)` without cancellation for large `x`.
pub fn std_normal_upper_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

pub fn std_normal_sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
