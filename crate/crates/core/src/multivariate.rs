//! Reduction of multivariate observations to deviation magnitudes.
//!
//! Each feature is scaled to integers at its own decimal scale, the center is
//! the component-wise integer median, and an observation's deviation is its L1
//! distance to that center. The deviations are fed straight into the
//! a-contrario test (no second centering), so for a single feature this is
//! exactly the univariate neuron.

use crate::error::{Error, Result};
use crate::kernel::AContrarioTest;
use crate::neuron::{infer_decimals, integer_median, scale_value, Decision, WindowRule};

/// Row-major integer matrix with one decimal scale per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<i64>,
    decimals: Vec<u8>,
}

impl ScaledMatrix {
    /// Scales a row-major `f64` buffer column by column.
    pub fn from_row_major(values: &[f64], n_cols: usize, decimals: &[u8]) -> Result<Self> {
        if n_cols == 0 || !values.len().is_multiple_of(n_cols) {
            return Err(Error::InvalidInput(format!(
                "buffer of {} values is not a whole number of {n_cols}-wide rows",
                values.len()
            )));
        }
        if decimals.len() != n_cols {
            return Err(Error::InvalidInput(format!(
                "{} decimal scales for {n_cols} features",
                decimals.len()
            )));
        }
        let scaled = values
            .iter()
            .enumerate()
            .map(|(i, &v)| scale_value(v, decimals[i % n_cols]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_rows: values.len() / n_cols, n_cols, values: scaled, decimals: decimals.to_vec() })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn decimals(&self) -> &[u8] {
        &self.decimals
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// Component-wise median over the selected rows (duplicates count).
    pub fn medians_of(&self, rows: &[usize]) -> Result<Vec<i64>> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("median of zero rows".into()));
        }
        let mut column = Vec::with_capacity(rows.len());
        (0..self.n_cols)
            .map(|j| {
                column.clear();
                column.extend(rows.iter().map(|&r| self.values[r * self.n_cols + j]));
                Ok(integer_median(&column).expect("non-empty"))
            })
            .collect()
    }
}

/// Per-feature decimal scales inferred column by column.
pub fn infer_feature_decimals(values: &[f64], n_cols: usize) -> Vec<u8> {
    (0..n_cols)
        .map(|j| {
            let column: Vec<f64> = values.iter().skip(j).step_by(n_cols).copied().collect();
            infer_decimals(&column)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureMedians {
    pub medians: Vec<i64>,
    pub decimals: Vec<u8>,
}

/// L1 deviation of each observation from the feature medians.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationSeries(pub Vec<u64>);

fn check_rows(rows: &[Vec<f64>], n_cols: usize) -> Result<()> {
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_cols) {
        return Err(Error::InvalidInput(format!("row {i} has {} features, expected {n_cols}", r.len())));
    }
    Ok(())
}

pub fn featurewise_median(rows: &[Vec<f64>], decimals: &[u8]) -> Result<FeatureMedians> {
    let n_cols = decimals.len();
    if rows.is_empty() || n_cols == 0 {
        return Err(Error::InvalidInput("need at least one row and one feature".into()));
    }
    check_rows(rows, n_cols)?;
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let matrix = ScaledMatrix::from_row_major(&flat, n_cols, decimals)?;
    let all: Vec<usize> = (0..matrix.n_rows()).collect();
    Ok(FeatureMedians { medians: matrix.medians_of(&all)?, decimals: decimals.to_vec() })
}

/// L1 distance between an integer row and the center.
pub fn l1_deviation(row: &[i64], center: &[i64]) -> u64 {
    row.iter().zip(center).map(|(&x, &m)| x.abs_diff(m)).sum()
}

pub fn deviation_reduce(rows: &[Vec<f64>], medians: &FeatureMedians) -> Result<DeviationSeries> {
    let n_cols = medians.medians.len();
    if medians.decimals.len() != n_cols {
        return Err(Error::InvalidInput("medians and scales differ in length".into()));
    }
    check_rows(rows, n_cols)?;
    rows.iter()
        .map(|row| {
            let scaled = row
                .iter()
                .zip(&medians.decimals)
                .map(|(&v, &d)| scale_value(v, d))
                .collect::<Result<Vec<_>>>()?;
            Ok(l1_deviation(&scaled, &medians.medians))
        })
        .collect::<Result<Vec<_>>>()
        .map(DeviationSeries)
}

/// The a-contrario test over deviation magnitudes: `S = Σ d_i`, windows by `rule`.
pub fn fit_deviation_neuron(devs: &DeviationSeries, rule: WindowRule) -> Result<AContrarioTest> {
    if devs.0.is_empty() {
        return Err(Error::InvalidInput("cannot fit on zero deviations".into()));
    }
    rule.test_for(devs.0.iter().copied())
}

/// A fitted multivariate neuron: feature center plus the deviation test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationModel {
    pub center: FeatureMedians,
    pub test: AContrarioTest,
}

impl DeviationModel {
    pub fn fit(rows: &[Vec<f64>], decimals: &[u8], rule: WindowRule) -> Result<Self> {
        let center = featurewise_median(rows, decimals)?;
        let devs = deviation_reduce(rows, &center)?;
        let test = fit_deviation_neuron(&devs, rule)?;
        Ok(Self { center, test })
    }

    /// Scores and decisions for each row; degenerate models never fire.
    pub fn score_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<(f64, Decision)>> {
        let devs = deviation_reduce(rows, &self.center)?;
        Ok(devs
            .0
            .into_iter()
            .map(|n| {
                let s = self.test.score_or_zero(n);
                (s, Decision::from_score(s))
            })
            .collect())
    }
}
