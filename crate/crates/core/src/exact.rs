//! Exact comparisons between scaled floating-point values.
//!
//! Every threshold test in this crate has the form `p * x <= b * y` where `p`
//! and `b` are nonnegative doubles and `x`, `y` are counts (group sizes,
//! ranks, grid indices). Evaluating both sides exactly, instead of forming
//! `b * y / x` in floating point, makes the Simes/BH equivalence and the
//! BH reductions of the p-filter hold bit-for-bit.

/// Splits a finite nonnegative double into `(mantissa, exponent)` with
/// `x == mantissa * 2^exponent`.
fn decompose(x: f64) -> (u64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

/// Returns whether `a * x <= b * y` holds exactly.
///
/// `a` and `b` must be nonnegative and not NaN; `b` may be `+inf`.
pub fn scaled_le(a: f64, x: u64, b: f64, y: u64) -> bool {
    debug_assert!(a >= 0.0 && b >= 0.0, "scaled_le needs nonnegative operands");
    if a == 0.0 || x == 0 {
        return true;
    }
    if b == 0.0 || y == 0 {
        return false;
    }
    if b.is_infinite() {
        return true;
    }
    if a.is_infinite() {
        return false;
    }
    let (ma, ea) = decompose(a);
    let (mb, eb) = decompose(b);
    // both products are below 2^117
    let lhs = u128::from(ma) * u128::from(x);
    let rhs = u128::from(mb) * u128::from(y);
    let lhs_top = (128 - lhs.leading_zeros()) as i32 + ea;
    let rhs_top = (128 - rhs.leading_zeros()) as i32 + eb;
    if lhs_top != rhs_top {
        return lhs_top < rhs_top;
    }
    // equal magnitudes: aligning exponents cannot overflow
    if ea >= eb {
        (lhs << (ea - eb) as u32) <= rhs
    } else {
        lhs <= (rhs << (eb - ea) as u32)
    }
}

/// Smallest double `q` with `a * x / y <= q` exactly (`y >= 1`).
pub fn ceil_ratio(a: f64, x: u64, y: u64) -> f64 {
    debug_assert!(y > 0);
    if a == 0.0 || x == 0 {
        return 0.0;
    }
    let mut q = a * x as f64 / y as f64;
    while !scaled_le(a, x, q, y) {
        q = q.next_up();
    }
    loop {
        let below = q.next_down();
        if below >= 0.0 && scaled_le(a, x, below, y) {
            q = below;
        } else {
            return q;
        }
    }
}
