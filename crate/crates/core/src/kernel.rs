//! The a-contrario counting kernel shared by every neuron.
//!
//! A fitted neuron is summarised by its total deviation `S` (the number of
//! atomic deviation elements) and its window count `W`. Under the null model
//! the `S` elements fall uniformly and independently into `W` windows, and the
//! expected number of windows holding an `n`-tuple is
//!
//! ```text
//! E(C_n) = C(S, n) / W^(n - 1)
//! ```
//!
//! An observed deviation `n` is an anomaly when `E(C_n) < 1`. Scores use the
//! log form `f(n) = -(ln C(S, n) - (n - 1) ln W) / S`, which is positive exactly
//! when the expectation is below one. For deviations beyond `S` the binomial
//! is not defined; its log is taken to be zero so the score continues linearly.

use crate::error::{Error, Result};

/// Below this many terms the log-binomial is summed directly, which keeps full
/// precision for very large `S` where the log-gamma differences cancel badly.
const DIRECT_SUM_TERMS: u64 = 64;

/// Natural log of the binomial coefficient `C(total, n)`.
pub fn log_binomial(total: u64, n: u64) -> Result<f64> {
    if n > total {
        return Err(Error::Domain { n, total });
    }
    let k = n.min(total - n);
    if k == 0 {
        return Ok(0.0);
    }
    if k <= DIRECT_SUM_TERMS {
        let base = (total - k) as f64;
        return Ok((1..=k).map(|i| ((base + i as f64) / i as f64).ln()).sum());
    }
    let s = total as f64;
    let k = k as f64;
    Ok(libm::lgamma(s + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(s - k + 1.0))
}

/// `E(C_n) = C(S, n) / W^(n-1)`, evaluated in log space.
pub fn expected_count(total: u64, windows: u64, n: u64) -> Result<f64> {
    Ok(log_expected_count(total, windows, n)?.exp())
}

/// `ln E(C_n)`. Exact ties `C(S, n) == W^(n-1)` return exactly `0.0` so the
/// anomaly decision never depends on rounding at the boundary.
pub fn log_expected_count(total: u64, windows: u64, n: u64) -> Result<f64> {
    if windows == 0 {
        return Err(Error::InvalidInput("window count must be at least 1".into()));
    }
    let log_binom = log_binomial(total, n)?;
    let log_windows = (windows as f64).ln();
    let value = log_binom - (n as f64 - 1.0) * log_windows;
    let tolerance = 1e-9 * log_binom.abs().max(1.0);
    if value.abs() <= tolerance && n >= 1 && power_divides_binomial(total, n, windows) {
        return Ok(0.0);
    }
    Ok(value)
}

/// True when `W^(n-1)` divides `C(S, n)`. Combined with `|ln E| < ln 2` this
/// pins the quotient to exactly one.
fn power_divides_binomial(total: u64, n: u64, windows: u64) -> bool {
    let exponent = n - 1;
    prime_factors(windows).into_iter().all(|(p, mult)| {
        let needed = (mult as u128) * (exponent as u128);
        legendre_binomial(total, n, p) as u128 >= needed
    })
}

/// Exponent of prime `p` in `C(total, n)` (Kummer/Legendre).
fn legendre_binomial(total: u64, n: u64, p: u64) -> u64 {
    let mut count = 0;
    let mut pk = p as u128;
    let (t, n, r) = (total as u128, n as u128, (total - n) as u128);
    while pk <= t {
        count += (t / pk - n / pk - r / pk) as u64;
        pk *= p as u128;
    }
    count
}

fn prime_factors(mut value: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= value {
        if value.is_multiple_of(p) {
            let mut mult = 0;
            while value.is_multiple_of(p) {
                value /= p;
                mult += 1;
            }
            out.push((p, mult));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if value > 1 {
        out.push((value, 1));
    }
    out
}

/// The fitted `(S, W)` pair and the score function it defines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AContrarioTest {
    pub total_deviation: u64,
    pub windows: u64,
}

impl AContrarioTest {
    pub fn new(total_deviation: u64, windows: u64) -> Self {
        Self { total_deviation, windows }
    }

    /// A test with no deviation mass has no contrast to fire on.
    pub fn is_degenerate(&self) -> bool {
        self.total_deviation == 0 || self.windows == 0
    }

    /// Score of deviation `n`; positive means anomaly.
    pub fn score(&self, n: u64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegenerateModel);
        }
        let s = self.total_deviation as f64;
        if n > self.total_deviation {
            let log_windows = (self.windows as f64).ln();
            return Ok((n as f64 - 1.0) * log_windows / s);
        }
        Ok(-log_expected_count(self.total_deviation, self.windows, n)? / s)
    }

    /// Like [`score`](Self::score) but a degenerate test yields `0.0`.
    pub fn score_or_zero(&self, n: u64) -> f64 {
        self.score(n).unwrap_or(0.0)
    }

    pub fn is_anomalous(&self, n: u64) -> bool {
        self.score_or_zero(n) > 0.0
    }

    /// `E(C_n)` when `n <= S`, `None` in the extended region or for a degenerate test.
    pub fn expected_count(&self, n: u64) -> Option<f64> {
        if self.is_degenerate() || n > self.total_deviation {
            return None;
        }
        expected_count(self.total_deviation, self.windows, n).ok()
    }
}
