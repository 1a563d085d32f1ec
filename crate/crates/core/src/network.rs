//! The subsampling ensemble of perception neurons.
//!
//! Every neuron draws its own log-normal-sized random subsample (with
//! replacement by default), screens it once with the a-contrario test, ejects
//! what it flags, refits on the remainder and then scores every observation.
//! Output nodes add up the neuron scores (for ranking) and the `{-1, +1}`
//! votes (for the decision).
//!
//! Each neuron's randomness comes from its own ChaCha stream, keyed by the
//! master seed and the neuron index, and results are merged in neuron order,
//! so a fitted network and its predictions are identical for any thread count.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use rayon::prelude::*;

use crate::dataset::{Dataset, ScoreReport, ScoreRow};
use crate::error::{Error, Result};
use crate::kernel::AContrarioTest;
use crate::multivariate::{infer_feature_decimals, l1_deviation, ScaledMatrix};
use crate::neuron::{Decision, NeuronModel, WindowRule, MAX_DECIMALS};

/// Fewest retained points a neuron refits on after ejection.
pub const MIN_REFIT_POINTS: usize = 3;

/// `fixed_subsample` value meaning "every row, whatever N is".
pub const ALL_ROWS: usize = usize::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum DecimalsRule {
    #[default]
    Auto,
    Fixed(u8),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub n_neurons: usize,
    pub subsample_mu: f64,
    pub subsample_sigma: f64,
    /// Overrides the lower size bound `min(10, N)`.
    pub subsample_min: Option<usize>,
    /// Overrides the upper size bound `min(1000, N)`.
    pub subsample_max: Option<usize>,
    /// Every neuron draws exactly this many points.
    pub fixed_subsample: Option<usize>,
    pub with_replacement: bool,
    pub eject: bool,
    pub seed: u64,
    pub decimals: DecimalsRule,
    pub window_rule: WindowRule,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            n_neurons: 256,
            subsample_mu: 3.0,
            subsample_sigma: 2.0,
            subsample_min: None,
            subsample_max: None,
            fixed_subsample: None,
            with_replacement: true,
            eject: true,
            seed: 0,
            decimals: DecimalsRule::Auto,
            window_rule: WindowRule::default(),
        }
    }
}

impl NetworkConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_neurons(mut self, n: usize) -> Self {
        self.n_neurons = n;
        self
    }

    /// One neuron fitted on the whole dataset, no ejection: the plain perception algorithm.
    pub fn single_neuron() -> Self {
        Self {
            n_neurons: 1,
            with_replacement: false,
            eject: false,
            fixed_subsample: Some(ALL_ROWS),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_neurons == 0 {
            return Err(Error::InvalidInput("n_neurons must be at least 1".into()));
        }
        if !(self.subsample_sigma > 0.0 && self.subsample_sigma.is_finite()) {
            return Err(Error::InvalidInput("subsample_sigma must be positive and finite".into()));
        }
        if !self.subsample_mu.is_finite() {
            return Err(Error::InvalidInput("subsample_mu must be finite".into()));
        }
        if let DecimalsRule::Fixed(d) = self.decimals {
            if d > MAX_DECIMALS {
                return Err(Error::InvalidInput(format!("decimals must be in 0..={MAX_DECIMALS}")));
            }
        }
        Ok(())
    }

    /// Inclusive subsample-size range for a dataset of `n_rows`.
    pub fn size_bounds(&self, n_rows: usize) -> Result<(usize, usize)> {
        if n_rows == 0 {
            return Err(Error::InvalidInput("empty dataset".into()));
        }
        let lo = self.subsample_min.unwrap_or(n_rows.min(10));
        if let Some(fixed) = self.fixed_subsample {
            let fixed = if fixed == ALL_ROWS { n_rows } else { fixed };
            if fixed > n_rows || fixed < lo || fixed == 0 {
                return Err(Error::InvalidInput(format!(
                    "fixed subsample size {fixed} outside {lo}..={n_rows}"
                )));
            }
            return Ok((fixed, fixed));
        }
        let hi = self.subsample_max.unwrap_or(n_rows.min(1000));
        if lo == 0 || lo > hi {
            return Err(Error::InvalidInput(format!("invalid subsample bounds {lo}..={hi}")));
        }
        if !self.with_replacement && hi > n_rows {
            return Err(Error::InvalidInput(format!(
                "cannot draw {hi} of {n_rows} rows without replacement"
            )));
        }
        Ok((lo, hi))
    }

    fn size_distribution(&self) -> Result<LogNormal<f64>> {
        LogNormal::new(self.subsample_mu, self.subsample_sigma)
            .map_err(|e| Error::InvalidInput(format!("log-normal parameters: {e}")))
    }
}

/// The random stream owned by neuron `neuron_index`.
pub fn neuron_rng(seed: u64, neuron_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(neuron_index);
    rng
}

/// `clamp(round(exp(Normal(mu, sigma))), lo, hi)`; rounding happens before clamping.
pub fn draw_subsample_size<R: Rng + ?Sized>(
    rng: &mut R,
    n_rows: usize,
    config: &NetworkConfig,
) -> Result<usize> {
    let (lo, hi) = config.size_bounds(n_rows)?;
    if lo == hi {
        return Ok(lo);
    }
    let raw = config.size_distribution()?.sample(rng).round();
    // f64 -> usize saturates, so huge draws land on `hi`
    Ok((raw as usize).clamp(lo, hi))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsampleDraw {
    pub neuron_index: usize,
    pub indices: Vec<usize>,
    pub drawn_size: usize,
}

pub fn draw_subsample(config: &NetworkConfig, n_rows: usize, neuron_index: usize) -> Result<SubsampleDraw> {
    let mut rng = neuron_rng(config.seed, neuron_index as u64);
    let drawn_size = draw_subsample_size(&mut rng, n_rows, config)?;
    let indices = if config.with_replacement {
        (0..drawn_size).map(|_| rng.random_range(0..n_rows)).collect()
    } else if drawn_size == n_rows {
        (0..n_rows).collect()
    } else {
        index::sample(&mut rng, n_rows, drawn_size).into_vec()
    };
    Ok(SubsampleDraw { neuron_index, indices, drawn_size })
}

/// A trained neuron plus what happened while it learned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronRecord {
    pub index: u32,
    /// Component-wise median in scaled integer units (length F).
    pub center: Vec<i64>,
    pub test: AContrarioTest,
    pub drawn_size: u32,
    pub ejected_count: u32,
    /// Ejection flagged points but fewer than three would remain, so the
    /// pre-ejection model was kept.
    pub refit_skipped: bool,
}

impl NeuronRecord {
    pub fn retained_count(&self) -> u32 {
        self.drawn_size - self.ejected_count
    }

    pub fn is_degenerate(&self) -> bool {
        self.test.is_degenerate()
    }

    /// Score and vote for one scaled observation. Degenerate neurons give `(0, -1)`.
    pub fn respond(&self, row: &[i64]) -> (f64, Decision) {
        let score = self.test.score_or_zero(l1_deviation(row, &self.center));
        (score, Decision::from_score(score))
    }
}

/// Fit, screen once, eject, refit. `rows` may repeat.
pub fn train_on_rows(
    matrix: &ScaledMatrix,
    rows: &[usize],
    rule: WindowRule,
    eject: bool,
    index: u32,
) -> Result<NeuronRecord> {
    let fit = |rows: &[usize]| -> Result<(Vec<i64>, AContrarioTest)> {
        let center = matrix.medians_of(rows)?;
        let test = rule.test_for(rows.iter().map(|&r| l1_deviation(matrix.row(r), &center)))?;
        Ok((center, test))
    };
    let (center, test) = fit(rows)?;
    let mut record = NeuronRecord {
        index,
        center,
        test,
        drawn_size: rows.len() as u32,
        ejected_count: 0,
        refit_skipped: false,
    };
    if !eject || test.is_degenerate() {
        return Ok(record);
    }
    let kept: Vec<usize> = rows
        .iter()
        .copied()
        .filter(|&r| !test.is_anomalous(l1_deviation(matrix.row(r), &record.center)))
        .collect();
    let ejected = rows.len() - kept.len();
    if ejected == 0 {
        return Ok(record);
    }
    if kept.len() < MIN_REFIT_POINTS {
        record.refit_skipped = true;
        return Ok(record);
    }
    let (center, test) = fit(&kept)?;
    record.center = center;
    record.test = test;
    record.ejected_count = ejected as u32;
    Ok(record)
}

/// Outcome of training a univariate neuron on a subsample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainingStats {
    pub drawn_size: usize,
    pub ejected_count: usize,
    pub refit_skipped: bool,
}

impl TrainingStats {
    pub fn retained_count(&self) -> usize {
        self.drawn_size - self.ejected_count
    }
}

/// Univariate one-pass eject-and-refit training at `decimals`.
pub fn train_neuron(values: &[f64], decimals: u8, rule: WindowRule) -> Result<(NeuronModel, TrainingStats)> {
    if values.is_empty() {
        return Err(Error::InvalidInput("cannot train on an empty subsample".into()));
    }
    let matrix = ScaledMatrix::from_row_major(values, 1, &[decimals])?;
    let rows: Vec<usize> = (0..values.len()).collect();
    let rec = train_on_rows(&matrix, &rows, rule, true, 0)?;
    let stats = TrainingStats {
        drawn_size: rec.drawn_size as usize,
        ejected_count: rec.ejected_count as usize,
        refit_skipped: rec.refit_skipped,
    };
    let model = NeuronModel {
        median: rec.center[0],
        test: rec.test,
        observations: stats.retained_count() as u64,
        decimals,
    };
    Ok((model, stats))
}

/// Per-observation totals at the output nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateOutput {
    pub score_sum: f64,
    pub vote_sum: i64,
    pub decision: Decision,
}

impl AggregateOutput {
    fn from_sums(score_sum: f64, vote_sum: i64) -> Self {
        Self {
            score_sum,
            vote_sum,
            decision: if vote_sum > 0 { Decision::Anomaly } else { Decision::Normal },
        }
    }
}

pub fn to_report(outputs: &[AggregateOutput]) -> ScoreReport {
    ScoreReport {
        rows: outputs
            .iter()
            .enumerate()
            .map(|(index, o)| ScoreRow {
                index,
                score_sum: o.score_sum,
                vote_sum: o.vote_sum,
                anomaly: o.decision.is_anomaly(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    config: NetworkConfig,
    decimals: Vec<u8>,
    neurons: Vec<NeuronRecord>,
}

const PREDICT_CHUNK: usize = 512;

impl NetworkModel {
    /// Assembles a model; neurons are kept in ascending index order.
    pub fn from_parts(
        config: NetworkConfig,
        decimals: Vec<u8>,
        mut neurons: Vec<NeuronRecord>,
    ) -> Result<Self> {
        if decimals.is_empty() {
            return Err(Error::InvalidInput("network needs at least one feature".into()));
        }
        if neurons.is_empty() {
            return Err(Error::InvalidInput("network needs at least one neuron".into()));
        }
        if neurons.iter().any(|n| n.center.len() != decimals.len()) {
            return Err(Error::InvalidInput("neuron center width differs from feature count".into()));
        }
        neurons.sort_by_key(|n| n.index);
        if neurons.windows(2).any(|w| w[0].index == w[1].index) {
            return Err(Error::InvalidInput("duplicate neuron index".into()));
        }
        Ok(Self { config, decimals, neurons })
    }

    pub fn fit(data: &Dataset, config: &NetworkConfig) -> Result<Self> {
        config.validate()?;
        if data.is_empty() || data.n_cols() == 0 {
            return Err(Error::InvalidInput("cannot fit a network on an empty dataset".into()));
        }
        let n_rows = data.n_rows();
        config.size_bounds(n_rows)?;
        let decimals = match config.decimals {
            DecimalsRule::Auto => infer_feature_decimals(data.values(), data.n_cols()),
            DecimalsRule::Fixed(d) => vec![d; data.n_cols()],
        };
        let matrix = ScaledMatrix::from_row_major(data.values(), data.n_cols(), &decimals)?;
        let neurons = (0..config.n_neurons)
            .into_par_iter()
            .map(|i| {
                let draw = draw_subsample(config, n_rows, i)?;
                train_on_rows(&matrix, &draw.indices, config.window_rule, config.eject, i as u32)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(config.clone(), decimals, neurons)
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn decimals(&self) -> &[u8] {
        &self.decimals
    }

    pub fn n_features(&self) -> usize {
        self.decimals.len()
    }

    pub fn neurons(&self) -> &[NeuronRecord] {
        &self.neurons
    }

    pub fn n_neurons(&self) -> usize {
        self.neurons.len()
    }

    pub fn degenerate_count(&self) -> usize {
        self.neurons.iter().filter(|n| n.is_degenerate()).count()
    }

    pub fn total_drawn(&self) -> u64 {
        self.neurons.iter().map(|n| u64::from(n.drawn_size)).sum()
    }

    pub fn total_ejected(&self) -> u64 {
        self.neurons.iter().map(|n| u64::from(n.ejected_count)).sum()
    }

    fn scale(&self, data: &Dataset) -> Result<ScaledMatrix> {
        if data.n_cols() != self.n_features() {
            return Err(Error::InvalidInput(format!(
                "model expects {} features, data has {}",
                self.n_features(),
                data.n_cols()
            )));
        }
        ScaledMatrix::from_row_major(data.values(), data.n_cols(), &self.decimals)
    }

    /// Score and vote sums per observation, accumulated in ascending neuron index.
    pub fn predict(&self, data: &Dataset) -> Result<Vec<AggregateOutput>> {
        let matrix = self.scale(data)?;
        let rows: Vec<usize> = (0..matrix.n_rows()).collect();
        Ok(rows
            .par_chunks(PREDICT_CHUNK)
            .flat_map_iter(|chunk| {
                chunk.iter().map(|&r| {
                    let row = matrix.row(r);
                    let (score_sum, vote_sum) = self.neurons.iter().fold((0.0f64, 0i64), |(s, v), neuron| {
                        let (score, decision) = neuron.respond(row);
                        (s + score, v + decision.vote())
                    });
                    AggregateOutput::from_sums(score_sum, vote_sum)
                })
            })
            .collect())
    }

    /// Per-neuron scores for one observation, in neuron order.
    pub fn neuron_scores(&self, row: &[f64]) -> Result<Vec<f64>> {
        let data = Dataset::new("row", vec![String::new(); row.len()], row.to_vec(), 1, None)?;
        let matrix = self.scale(&data)?;
        Ok(self.neurons.iter().map(|n| n.respond(matrix.row(0)).0).collect())
    }

    /// A copy keeping a uniformly random subset of `keep` neurons.
    pub fn degrade<R: Rng + ?Sized>(&self, keep: usize, rng: &mut R) -> Result<Self> {
        if keep == 0 || keep > self.n_neurons() {
            return Err(Error::InvalidInput(format!("keep must be in 1..={}, got {keep}", self.n_neurons())));
        }
        let mut chosen = index::sample(rng, self.n_neurons(), keep).into_vec();
        chosen.sort_unstable();
        let neurons = chosen.into_iter().map(|i| self.neurons[i].clone()).collect();
        Self::from_parts(self.config.clone(), self.decimals.clone(), neurons)
    }
}

/// Scores from one neuron fitted on the whole dataset (vote sums are `±1`).
pub fn single_neuron_predict(
    data: &Dataset,
    decimals: DecimalsRule,
    rule: WindowRule,
) -> Result<(NetworkModel, Vec<AggregateOutput>)> {
    let config = NetworkConfig { decimals, window_rule: rule, ..NetworkConfig::single_neuron() };
    let model = NetworkModel::fit(data, &config)?;
    let out = model.predict(data)?;
    Ok((model, out))
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
