//! Exact reference arithmetic for the counting kernel.

use std::cmp::Ordering;

use num_bigint::BigUint;

/// `C(s, n)` exactly.
pub fn binomial(s: u64, n: u64) -> BigUint {
    let k = n.min(s - n);
    let mut acc = BigUint::from(1u32);
    for i in 1..=k {
        acc *= s - k + i;
        acc /= i;
    }
    acc
}

/// Natural log of a positive big integer, from its top 64 bits.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top: BigUint = x >> shift;
    let mantissa = top.iter_u64_digits().next().unwrap_or(0) as f64;
    mantissa.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact ordering of `C(s, n)` against `w^(n-1)`.
pub fn compare_exact(s: u64, w: u64, n: u64) -> Ordering {
    binomial(s, n).cmp(&BigUint::from(w).pow((n - 1) as u32))
}
