//! The single perception neuron.
//!
//! Inputs are scaled to integers at a fixed number of decimals, the neuron
//! learns the integer median, the total absolute deviation `S` and the window
//! count `W`, and every value (seen or new) is judged by the a-contrario test
//! on its deviation `n = |z - median|`.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::AContrarioTest;

/// Upper bound on the decimal scale; keeps `S` from growing without limit.
pub const MAX_DECIMALS: u8 = 6;

/// Largest magnitude whose integer part is still exact in an `f64`.
const MAX_SCALED: f64 = 9_007_199_254_740_992.0;

const INTEGRALITY_TOLERANCE: f64 = 1e-9;

/// Smallest number of decimals at which every value is (to within 1e-9) an
/// integer multiple of `10^-d`, capped at [`MAX_DECIMALS`].
pub fn infer_decimals(values: &[f64]) -> u8 {
    (0..MAX_DECIMALS)
        .find(|&d| {
            let factor = 10f64.powi(d as i32);
            values.iter().all(|v| {
                let t = v * factor;
                (t - t.round()).abs() <= INTEGRALITY_TOLERANCE
            })
        })
        .unwrap_or(MAX_DECIMALS)
}

/// `round(value * 10^decimals)`, halves away from zero.
///
/// Products that sit within 1e-9 of a half are treated as exact halves, so a
/// decimal literal such as `-2.345` scales to `-235` even though its binary
/// product is `-234.49999999999997`.
pub fn scale_value(value: f64, decimals: u8) -> Result<i64> {
    if !value.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite value {value}")));
    }
    if decimals > MAX_DECIMALS {
        return Err(Error::InvalidInput(format!("decimals must be in 0..={MAX_DECIMALS}, got {decimals}")));
    }
    let t = value * 10f64.powi(decimals as i32);
    let frac = t - t.trunc();
    let rounded =
        if (frac.abs() - 0.5).abs() < INTEGRALITY_TOLERANCE { t.trunc() + t.signum() } else { t.round() };
    if rounded.abs() >= MAX_SCALED {
        return Err(Error::Range { value, decimals });
    }
    Ok(rounded as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerizedSeries {
    pub values: Vec<i64>,
    pub decimals: u8,
}

pub fn integerize(values: &[f64], decimals: u8) -> Result<IntegerizedSeries> {
    let values = values.iter().map(|&v| scale_value(v, decimals)).collect::<Result<Vec<_>>>()?;
    Ok(IntegerizedSeries { values, decimals })
}

/// Median of integers; for an even count the mean of the two central values
/// with halves rounded up, so shifting the data shifts the median by exactly
/// the same amount. `None` for an empty slice.
pub fn integer_median(values: &[i64]) -> Option<i64> {
    if values.is_empty() {
        return None;
    }
    let mut buf = values.to_vec();
    let mid = buf.len() / 2;
    let (lower, upper, _) = buf.select_nth_unstable(mid);
    let upper = *upper;
    if values.len() % 2 == 1 {
        return Some(upper);
    }
    let lower = *lower.iter().max().expect("even length >= 2");
    Some((lower as i128 + upper as i128 + 1).div_euclid(2) as i64)
}

/// How the window count `W` is taken from the fitted deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum WindowRule {
    /// Windows are the observations that deviate from the median; points at
    /// the median carry no deviation elements.
    #[default]
    OffMedian,
    /// Every fitted observation is a window.
    AllObservations,
}

impl WindowRule {
    pub(crate) fn code(self) -> u8 {
        match self {
            WindowRule::OffMedian => 0,
            WindowRule::AllObservations => 1,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(WindowRule::OffMedian),
            1 => Some(WindowRule::AllObservations),
            _ => None,
        }
    }

    /// Builds the test from a sequence of nonnegative deviations.
    pub fn test_for(self, deviations: impl IntoIterator<Item = u64>) -> Result<AContrarioTest> {
        let mut total: u64 = 0;
        let mut off_center = 0u64;
        let mut count = 0u64;
        for d in deviations {
            total = total
                .checked_add(d)
                .ok_or_else(|| Error::InvalidInput("total deviation overflows u64".into()))?;
            off_center += u64::from(d > 0);
            count += 1;
        }
        let windows = match self {
            WindowRule::OffMedian => off_center,
            WindowRule::AllObservations => count,
        };
        Ok(AContrarioTest::new(total, windows))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Anomaly,
    Normal,
}

impl Decision {
    pub fn from_score(score: f64) -> Self {
        if score > 0.0 {
            Decision::Anomaly
        } else {
            Decision::Normal
        }
    }

    pub fn is_anomaly(self) -> bool {
        self == Decision::Anomaly
    }

    /// `+1` for anomaly, `-1` for normal.
    pub fn vote(self) -> i64 {
        if self.is_anomaly() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Anomaly => "anomaly",
            Decision::Normal => "normal",
        })
    }
}

/// Everything a univariate neuron knows about its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NeuronModel {
    pub median: i64,
    pub test: AContrarioTest,
    /// Number of fitted observations (including those at the median).
    pub observations: u64,
    pub decimals: u8,
}

impl NeuronModel {
    pub fn fit(series: &IntegerizedSeries, rule: WindowRule) -> Result<Self> {
        let median = integer_median(&series.values)
            .ok_or_else(|| Error::InvalidInput("cannot fit a neuron on an empty series".into()))?;
        let test = rule.test_for(series.values.iter().map(|&x| x.abs_diff(median)))?;
        Ok(Self { median, test, observations: series.values.len() as u64, decimals: series.decimals })
    }

    /// Infers the decimal scale, integerizes and fits with the default window rule.
    pub fn fit_values(values: &[f64]) -> Result<Self> {
        let series = integerize(values, infer_decimals(values))?;
        Self::fit(&series, WindowRule::default())
    }

    pub fn total_deviation(&self) -> u64 {
        self.test.total_deviation
    }

    pub fn windows(&self) -> u64 {
        self.test.windows
    }

    pub fn is_degenerate(&self) -> bool {
        self.test.is_degenerate()
    }

    pub fn deviation(&self, z: f64) -> Result<u64> {
        Ok(scale_value(z, self.decimals)?.abs_diff(self.median))
    }

    /// Score of `z`. A degenerate model signals [`Error::DegenerateModel`].
    pub fn score(&self, z: f64) -> Result<f64> {
        self.test.score(self.deviation(z)?)
    }

    pub fn decide(&self, z: f64) -> Result<Decision> {
        self.score(z).map(Decision::from_score)
    }

    /// Scores every value in order. A degenerate model never fires: each point
    /// gets score 0 and a normal decision.
    pub fn score_series(&self, values: &[f64]) -> Result<Vec<ScoredPoint>> {
        values.iter().map(|&z| self.score_point(z)).collect()
    }

    pub fn score_point(&self, z: f64) -> Result<ScoredPoint> {
        let n = self.deviation(z)?;
        let score = self.test.score_or_zero(n);
        Ok(ScoredPoint {
            raw_value: z,
            deviation: n,
            score,
            expected_count: self.test.expected_count(n),
            decision: Decision::from_score(score),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredPoint {
    pub raw_value: f64,
    pub deviation: u64,
    pub score: f64,
    /// Absent when the deviation exceeds `S` or the model is degenerate.
    pub expected_count: Option<f64>,
    pub decision: Decision,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[i64]) -> IntegerizedSeries {
        IntegerizedSeries { values: values.to_vec(), decimals: 0 }
    }

    #[test]
    fn decimals_inference() {
        assert_eq!(infer_decimals(&[1.0, 2.0, 10.0]), 0);
        assert_eq!(infer_decimals(&[1.5, 2.25]), 2);
        assert_eq!(infer_decimals(&[0.1234567]), 6);
        assert_eq!(infer_decimals(&[66.5, 70.0]), 1);
    }

    #[test]
    fn scaling_rounds_half_away_from_zero() {
        assert_eq!(scale_value(66.5, 1).unwrap(), 665);
        assert_eq!(scale_value(3.0, 0).unwrap(), 3);
        assert_eq!(scale_value(-2.345, 2).unwrap(), -235);
        assert_eq!(scale_value(2.5, 0).unwrap(), 3);
        assert_eq!(scale_value(-2.5, 0).unwrap(), -3);
        assert_eq!(scale_value(2.4, 0).unwrap(), 2);
    }

    #[test]
    fn scaling_errors() {
        assert!(matches!(scale_value(1e300, 0), Err(Error::Range { .. })));
        assert!(matches!(scale_value(1e12, 6), Err(Error::Range { .. })));
        assert!(scale_value(f64::NAN, 0).is_err());
        assert!(scale_value(1.0, 7).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(integer_median(&[3, 1, 2]), Some(2));
        assert_eq!(integer_median(&[1, 2]), Some(2));
        assert_eq!(integer_median(&[-1, -2]), Some(-1));
        assert_eq!(integer_median(&[-1, 0]), Some(0));
        assert_eq!(integer_median(&[0, 1]), Some(1));
        assert_eq!(integer_median(&[1, 4]), Some(3));
        assert_eq!(integer_median(&[7]), Some(7));
        assert_eq!(integer_median(&[]), None);
        assert_eq!(integer_median(&[i64::MAX, i64::MAX - 1]), Some(i64::MAX));
    }

    #[test]
    fn fit_examples_all_observations() {
        let m = NeuronModel::fit(&series(&[1, 2, 3, 2, 2]), WindowRule::AllObservations).unwrap();
        assert_eq!((m.median, m.total_deviation(), m.windows()), (2, 2, 5));
        let m = NeuronModel::fit(&series(&[5, 5, 5]), WindowRule::AllObservations).unwrap();
        assert_eq!((m.median, m.total_deviation(), m.windows()), (5, 0, 3));
        assert!(m.is_degenerate());
    }

    #[test]
    fn fit_examples_off_median() {
        let m = NeuronModel::fit(&series(&[1, 2, 3, 2, 2]), WindowRule::OffMedian).unwrap();
        assert_eq!((m.median, m.total_deviation(), m.windows(), m.observations), (2, 2, 2, 5));
        let m = NeuronModel::fit(&series(&[5, 5, 5]), WindowRule::OffMedian).unwrap();
        assert_eq!((m.total_deviation(), m.windows()), (0, 0));
    }

    #[test]
    fn fit_rejects_empty() {
        assert!(matches!(NeuronModel::fit(&series(&[]), WindowRule::OffMedian), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn deviations() {
        let m =
            NeuronModel { median: 665, test: AContrarioTest::new(100, 10), observations: 10, decimals: 1 };
        assert_eq!(m.deviation(66.5).unwrap(), 0);
        assert_eq!(m.deviation(70.0).unwrap(), 35);
        assert!(m.deviation(f64::INFINITY).is_err());
        let m = NeuronModel { median: 2, decimals: 0, ..m };
        assert_eq!(m.deviation(100.0).unwrap(), 98);
    }

    #[test]
    fn in_sample_points_are_normal() {
        for rule in [WindowRule::OffMedian, WindowRule::AllObservations] {
            let m = NeuronModel::fit(&series(&[1, 2, 3, 2, 2]), rule).unwrap();
            let pts = m.score_series(&[1.0, 2.0, 3.0, 2.0, 2.0]).unwrap();
            assert!(pts.iter().all(|p| p.decision == Decision::Normal));
            assert!(pts.iter().all(|p| p.deviation <= m.total_deviation()));
        }
    }

    #[test]
    fn degenerate_model_never_fires() {
        let m = NeuronModel::fit(&series(&[5, 5, 5, 5]), WindowRule::OffMedian).unwrap();
        assert!(matches!(m.score(9.0), Err(Error::DegenerateModel)));
        let pts = m.score_series(&[5.0, 9.0, -100.0]).unwrap();
        assert!(pts.iter().all(|p| p.score == 0.0 && p.decision == Decision::Normal));
        assert!(pts.iter().all(|p| p.expected_count.is_none()));
    }

    #[test]
    fn scored_point_fields_agree() {
        let m = NeuronModel { median: 0, test: AContrarioTest::new(10, 5), observations: 5, decimals: 0 };
        let p = m.score_point(5.0).unwrap();
        assert_eq!(p.deviation, 5);
        assert!((p.expected_count.unwrap() - 0.4032).abs() < 1e-12);
        assert_eq!(p.decision, Decision::Anomaly);
        let p = m.score_point(-15.0).unwrap();
        assert_eq!(p.expected_count, None);
        assert_eq!(p.decision, Decision::Anomaly);
    }
}
