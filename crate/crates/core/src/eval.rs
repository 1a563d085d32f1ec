//! Metrics and the experiment harness: ROC-AUC, precision/recall/F1, runtime,
//! benchmark tables and the sweep experiments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::dataset::{format_sig9, Dataset};
use crate::error::{Error, Result};
use crate::network::{neuron_rng, single_neuron_predict, AggregateOutput, NetworkConfig, NetworkModel};
use crate::neuron::NeuronModel;

/// Stream used for degradation draws, kept away from the neuron streams.
const DEGRADE_STREAM: u64 = u64::MAX;

/// Mann–Whitney AUC with average ranks for ties.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidInput(format!("{} scores for {} labels", scores.len(), labels.len())));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidInput("NaN score".into()));
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedMetric("AUC needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start..end (1-based: start+1..=end) share their mean
        let mean_rank = (start + 1 + end) as f64 / 2.0;
        let pos_in_group = order[start..end].iter().filter(|&&i| labels[i] == 1).count();
        rank_sum_pos += mean_rank * pos_in_group as f64;
        start = end;
    }
    let p = positives as f64;
    let u = rank_sum_pos - p * (p + 1.0) / 2.0;
    Ok(u / (p * negatives as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf1 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Some denominator was zero and the affected value was set to 0.
    pub degenerate: bool,
}

pub fn prf1(decisions: &[bool], labels: &[u8]) -> Result<Prf1> {
    if decisions.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} decisions for {} labels",
            decisions.len(),
            labels.len()
        )));
    }
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (&d, &l) in decisions.iter().zip(labels) {
        match (d, l == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { None } else { Some(num as f64 / den as f64) };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fneg);
    let mut degenerate = precision.is_none() || recall.is_none();
    let (precision, recall) = (precision.unwrap_or(0.0), recall.unwrap_or(0.0));
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        degenerate = true;
        0.0
    };
    Ok(Prf1 { precision, recall, f1, degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalMetrics {
    pub auc: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub runtime_seconds: f64,
}

impl EvalMetrics {
    pub fn from_outputs(outputs: &[AggregateOutput], labels: &[u8], runtime_seconds: f64) -> Result<Self> {
        let scores: Vec<f64> = outputs.iter().map(|o| o.score_sum).collect();
        let decisions: Vec<bool> = outputs.iter().map(|o| o.decision.is_anomaly()).collect();
        let auc = roc_auc(&scores, labels)?;
        let p = prf1(&decisions, labels)?;
        Ok(Self { auc, precision: p.precision, recall: p.recall, f1: p.f1, runtime_seconds })
    }

    fn mean(items: &[EvalMetrics]) -> Self {
        let n = items.len() as f64;
        let avg = |f: fn(&EvalMetrics) -> f64| items.iter().map(f).sum::<f64>() / n;
        Self {
            auc: avg(|m| m.auc),
            precision: avg(|m| m.precision),
            recall: avg(|m| m.recall),
            f1: avg(|m| m.f1),
            runtime_seconds: avg(|m| m.runtime_seconds),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    SingleNeuron,
    Network,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::SingleNeuron => "Perception",
            Method::Network => "NeuralNetwork",
        }
    }
}

/// Single-neuron metrics; runtime covers fit and predict.
pub fn evaluate_single_neuron(data: &Dataset, config: &NetworkConfig) -> Result<EvalMetrics> {
    let labels = require_labels(data)?;
    let start = Instant::now();
    let (_, out) = single_neuron_predict(data, config.decimals, config.window_rule)?;
    let elapsed = start.elapsed().as_secs_f64();
    EvalMetrics::from_outputs(&out, labels, elapsed)
}

/// Network metrics for one seed; runtime covers fit and predict.
pub fn evaluate_network(data: &Dataset, config: &NetworkConfig) -> Result<EvalMetrics> {
    let labels = require_labels(data)?;
    let start = Instant::now();
    let model = NetworkModel::fit(data, config)?;
    let out = model.predict(data)?;
    let elapsed = start.elapsed().as_secs_f64();
    EvalMetrics::from_outputs(&out, labels, elapsed)
}

fn require_labels(data: &Dataset) -> Result<&[u8]> {
    data.labels().ok_or_else(|| Error::InvalidInput(format!("dataset '{}' has no labels", data.name)))
}

/// One line of the benchmark report. `seed` is `None` for deterministic
/// methods and for the mean row of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub dataset: String,
    pub method: String,
    pub seed: Option<u64>,
    pub is_mean: bool,
    pub metrics: EvalMetrics,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub notices: Vec<String>,
}

pub const REPORT_HEADER: &str = "dataset,method,seed,auc,precision,recall,f1,runtime_seconds";

fn fmt_metric(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format_sig9(x)
    }
}

impl EvalReport {
    /// The headline row for `(dataset, method)`: the mean row when one exists.
    pub fn summary(&self, dataset: &str, method: &str) -> Option<&EvalMetrics> {
        let mut candidates = self.rows.iter().filter(|r| r.dataset == dataset && r.method == method);
        let all: Vec<&EvalRow> = candidates.by_ref().collect();
        all.iter().find(|r| r.is_mean).or_else(|| all.iter().find(|r| r.seed.is_none())).map(|r| &r.metrics)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(REPORT_HEADER);
        s.push('\n');
        for r in &self.rows {
            let seed = match (r.is_mean, r.seed) {
                (true, _) => "mean".to_owned(),
                (false, Some(seed)) => seed.to_string(),
                (false, None) => String::new(),
            };
            let m = &r.metrics;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.dataset,
                r.method,
                seed,
                fmt_metric(m.auc),
                fmt_metric(m.precision),
                fmt_metric(m.recall),
                fmt_metric(m.f1),
                fmt_metric(m.runtime_seconds)
            );
        }
        s
    }

    /// Three tables (AUC, F1, runtime) with one row per dataset and one
    /// column per method, using the headline rows.
    pub fn to_markdown(&self) -> String {
        let datasets: Vec<&str> = ordered_unique(self.rows.iter().map(|r| r.dataset.as_str()));
        let mut methods: Vec<&str> = ordered_unique(self.rows.iter().map(|r| r.method.as_str()));
        methods.sort_unstable();
        let mut out = String::new();
        type Column = (&'static str, fn(&EvalMetrics) -> f64, usize);
        let tables: [Column; 3] =
            [("AUC", |m| m.auc, 2), ("F1", |m| m.f1, 3), ("Runtime (s)", |m| m.runtime_seconds, 3)];
        for (title, get, digits) in tables {
            let _ = writeln!(out, "### {title}\n");
            let _ = writeln!(out, "| Dataset | {} |", methods.join(" | "));
            let _ = writeln!(out, "|---|{}", "---:|".repeat(methods.len()));
            for d in &datasets {
                let cells: Vec<String> = methods
                    .iter()
                    .map(|m| match self.summary(d, m).map(get) {
                        Some(v) if !v.is_nan() => format!("{v:.digits$}"),
                        _ => "-".into(),
                    })
                    .collect();
                let _ = writeln!(out, "| {d} | {} |", cells.join(" | "));
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, csv_path: impl AsRef<Path>, markdown_path: impl AsRef<Path>) -> Result<()> {
        fs::write(csv_path, self.to_csv())?;
        fs::write(markdown_path, self.to_markdown())?;
        Ok(())
    }
}

fn ordered_unique<'a>(items: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
    let mut seen = Vec::new();
    for i in items {
        if !seen.contains(&i) {
            seen.push(i);
        }
    }
    seen
}

/// Externally produced scores for one dataset (e.g. HBOS or Isolation Forest).
///
/// Files live at `<dir>/<dataset>.<method>.csv` with a header containing a
/// `score` (or `score_sum`) column and optionally a 0/1 `decision` column, one
/// row per observation in dataset order.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineScores {
    pub method: String,
    pub scores: Vec<f64>,
    pub decisions: Option<Vec<bool>>,
}

pub fn load_baselines(dir: &Path, dataset: &str) -> Result<Vec<BaselineScores>> {
    let mut found = BTreeMap::new();
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let prefix = format!("{dataset}.");
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let Some(file) = path.file_name().and_then(|f| f.to_str()) else { continue };
        let Some(method) = file.strip_prefix(&prefix).and_then(|r| r.strip_suffix(".csv")) else {
            continue;
        };
        if method.is_empty() || method.contains('.') {
            continue;
        }
        found.insert(method.to_owned(), read_baseline(&path, method)?);
    }
    Ok(found.into_values().collect())
}

fn read_baseline(path: &Path, method: &str) -> Result<BaselineScores> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    let col = |name: &str| header.iter().position(|h| h.trim() == name);
    let score_col = col("score")
        .or_else(|| col("score_sum"))
        .ok_or_else(|| Error::MissingColumn { path: path.to_path_buf(), column: "score".into() })?;
    let decision_col = col("decision");
    let mut scores = Vec::new();
    let mut decisions = decision_col.map(|_| Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let cell = record.get(score_col).unwrap_or("").trim();
        let v: f64 = cell.parse().map_err(|_| Error::ParseCell {
            path: path.to_path_buf(),
            row: i + 2,
            column: "score".into(),
            cell: cell.to_owned(),
        })?;
        scores.push(v);
        if let (Some(c), Some(d)) = (decision_col, decisions.as_mut()) {
            let cell = record.get(c).unwrap_or("").trim();
            d.push(match cell {
                "1" => true,
                "0" => false,
                _ => {
                    return Err(Error::NonBinaryLabel {
                        path: path.to_path_buf(),
                        row: i + 2,
                        cell: cell.to_owned(),
                    })
                }
            });
        }
    }
    Ok(BaselineScores { method: method.to_owned(), scores, decisions })
}

#[derive(Debug, Clone)]
pub struct BenchmarkPlan<'a> {
    pub methods: &'a [Method],
    pub seeds: &'a [u64],
    pub config: NetworkConfig,
    pub baselines_dir: Option<&'a Path>,
}

/// Runs every method on every labelled dataset. Unlabelled datasets and
/// per-dataset failures are recorded as notices and skipped.
pub fn run_benchmark(datasets: &[Dataset], plan: &BenchmarkPlan<'_>) -> Result<EvalReport> {
    if plan.methods.contains(&Method::Network) && plan.seeds.is_empty() {
        return Err(Error::InvalidInput("network benchmarking needs at least one seed".into()));
    }
    let mut report = EvalReport::default();
    for data in datasets {
        if data.labels().is_none() {
            report.notices.push(format!("{}: no labels, skipped", data.name));
            continue;
        }
        if let Err(e) = bench_one(data, plan, &mut report) {
            report.notices.push(format!("{}: {e}", data.name));
        }
    }
    Ok(report)
}

fn bench_one(data: &Dataset, plan: &BenchmarkPlan<'_>, report: &mut EvalReport) -> Result<()> {
    let mut rows = Vec::new();
    for &method in plan.methods {
        match method {
            Method::SingleNeuron => rows.push(EvalRow {
                dataset: data.name.clone(),
                method: method.label().into(),
                seed: None,
                is_mean: false,
                metrics: evaluate_single_neuron(data, &plan.config)?,
            }),
            Method::Network => {
                // seeds run one after another so runtimes are not contended
                let per_seed = plan
                    .seeds
                    .iter()
                    .map(|&seed| evaluate_network(data, &plan.config.clone().with_seed(seed)))
                    .collect::<Result<Vec<_>>>()?;
                for (&seed, m) in plan.seeds.iter().zip(&per_seed) {
                    rows.push(EvalRow {
                        dataset: data.name.clone(),
                        method: method.label().into(),
                        seed: Some(seed),
                        is_mean: false,
                        metrics: *m,
                    });
                }
                rows.push(EvalRow {
                    dataset: data.name.clone(),
                    method: method.label().into(),
                    seed: None,
                    is_mean: true,
                    metrics: EvalMetrics::mean(&per_seed),
                });
            }
        }
    }
    if let Some(dir) = plan.baselines_dir {
        let labels = require_labels(data)?;
        for b in load_baselines(dir, &data.name)? {
            if b.scores.len() != data.n_rows() {
                report.notices.push(format!(
                    "{}: baseline {} has {} rows, expected {}",
                    data.name,
                    b.method,
                    b.scores.len(),
                    data.n_rows()
                ));
                continue;
            }
            let auc = roc_auc(&b.scores, labels)?;
            let p = match &b.decisions {
                Some(d) => Some(prf1(d, labels)?),
                None => None,
            };
            rows.push(EvalRow {
                dataset: data.name.clone(),
                method: b.method.clone(),
                seed: None,
                is_mean: false,
                metrics: EvalMetrics {
                    auc,
                    precision: p.map_or(f64::NAN, |p| p.precision),
                    recall: p.map_or(f64::NAN, |p| p.recall),
                    f1: p.map_or(f64::NAN, |p| p.f1),
                    runtime_seconds: f64::NAN,
                },
            });
        }
    }
    report.rows.extend(rows);
    Ok(())
}

/// `x` strictly increasing, one mean/std pair per `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub x: Vec<f64>,
    pub y_mean: Vec<f64>,
    pub y_std: Vec<f64>,
    pub seeds_used: usize,
}

impl SweepCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y_mean,y_std\n");
        for ((x, m), sd) in self.x.iter().zip(&self.y_mean).zip(&self.y_std) {
            let _ = writeln!(s, "{},{},{}", format_sig9(*x), format_sig9(*m), format_sig9(*sd));
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn check_sweep_axis(xs: &[usize], seeds: &[u64]) -> Result<()> {
    if xs.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidInput("sweep needs at least one point and one seed".into()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("sweep points must be strictly increasing".into()));
    }
    Ok(())
}

fn curve_from(xs: &[usize], per_point: Vec<Vec<f64>>, seeds_used: usize) -> SweepCurve {
    let (y_mean, y_std) = per_point.iter().map(|v| mean_std(v)).unzip();
    SweepCurve { x: xs.iter().map(|&x| x as f64).collect(), y_mean, y_std, seeds_used }
}

/// Per-seed AUC table `[point][seed]`, computed in parallel over seeds.
fn per_seed_aucs(
    seeds: &[u64],
    points: usize,
    run: impl Fn(u64) -> Result<Vec<f64>> + Sync,
) -> Result<Vec<Vec<f64>>> {
    let by_seed = seeds.par_iter().map(|&s| run(s)).collect::<Result<Vec<_>>>()?;
    Ok((0..points).map(|p| by_seed.iter().map(|row| row[p]).collect()).collect())
}

fn auc_of(model: &NetworkModel, data: &Dataset, labels: &[u8]) -> Result<f64> {
    let scores: Vec<f64> = model.predict(data)?.iter().map(|o| o.score_sum).collect();
    roc_auc(&scores, labels)
}

/// AUC mean and spread as the number of neurons grows.
///
/// Neuron `i` depends only on `(seed, i)`, so the network of `k` neurons is
/// the first `k` neurons of the largest one.
pub fn sweep_neuron_count(
    data: &Dataset,
    counts: &[usize],
    seeds: &[u64],
    base: &NetworkConfig,
) -> Result<SweepCurve> {
    check_sweep_axis(counts, seeds)?;
    let labels = require_labels(data)?;
    if counts[0] == 0 {
        return Err(Error::InvalidInput("neuron counts must be positive".into()));
    }
    let max = *counts.last().expect("non-empty");
    let table = per_seed_aucs(seeds, counts.len(), |seed| {
        let full = NetworkModel::fit(data, &base.clone().with_seed(seed).with_neurons(max))?;
        counts
            .iter()
            .map(|&k| {
                let mut cfg = full.config().clone();
                cfg.n_neurons = k;
                let sub =
                    NetworkModel::from_parts(cfg, full.decimals().to_vec(), full.neurons()[..k].to_vec())?;
                auc_of(&sub, data, labels)
            })
            .collect()
    })?;
    Ok(curve_from(counts, table, seeds.len()))
}

/// AUC at fixed subsample sizes.
pub fn sweep_subsample_size(
    data: &Dataset,
    sizes: &[usize],
    seeds: &[u64],
    base: &NetworkConfig,
) -> Result<SweepCurve> {
    check_sweep_axis(sizes, seeds)?;
    let labels = require_labels(data)?;
    for &s in sizes {
        NetworkConfig { fixed_subsample: Some(s), ..base.clone() }.size_bounds(data.n_rows())?;
    }
    let table = per_seed_aucs(seeds, sizes.len(), |seed| {
        sizes
            .iter()
            .map(|&s| {
                let cfg = NetworkConfig { fixed_subsample: Some(s), ..base.clone().with_seed(seed) };
                auc_of(&NetworkModel::fit(data, &cfg)?, data, labels)
            })
            .collect()
    })?;
    Ok(curve_from(sizes, table, seeds.len()))
}

/// AUC as random neurons are removed from a trained network.
pub fn sweep_degrade(
    data: &Dataset,
    keeps: &[usize],
    seeds: &[u64],
    base: &NetworkConfig,
) -> Result<SweepCurve> {
    check_sweep_axis(keeps, seeds)?;
    let labels = require_labels(data)?;
    let table = per_seed_aucs(seeds, keeps.len(), |seed| {
        let full = NetworkModel::fit(data, &base.clone().with_seed(seed))?;
        let mut rng = neuron_rng(seed, DEGRADE_STREAM);
        keeps.iter().map(|&k| auc_of(&full.degrade(k, &mut rng)?, data, labels)).collect()
    })?;
    Ok(curve_from(keeps, table, seeds.len()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub z: f64,
    pub deviation: u64,
    pub score: f64,
    /// `deviation > S`: the score is on the linear extension.
    pub linear: bool,
}

/// The neuron's score function tabulated at its own resolution `10^-d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreCurve {
    pub points: Vec<CurvePoint>,
    /// Inputs at which the deviation equals `S` (`median ± S`).
    pub boundary: (f64, f64),
}

const MAX_CURVE_POINTS: u64 = 2_000_000;

pub fn emit_score_curve(model: &NeuronModel, z_lo: f64, z_hi: f64) -> Result<ScoreCurve> {
    if model.is_degenerate() {
        return Err(Error::DegenerateModel);
    }
    if z_lo.is_nan() || z_hi.is_nan() || z_lo > z_hi {
        return Err(Error::InvalidInput("curve range is empty".into()));
    }
    let lo = crate::neuron::scale_value(z_lo, model.decimals)?;
    let hi = crate::neuron::scale_value(z_hi, model.decimals)?;
    if (hi - lo) as u64 >= MAX_CURVE_POINTS {
        return Err(Error::InvalidInput(format!("curve would exceed {MAX_CURVE_POINTS} points")));
    }
    let unit = 10f64.powi(model.decimals as i32);
    let s = model.total_deviation();
    let points = (lo..=hi)
        .map(|k| {
            let n = k.abs_diff(model.median);
            Ok(CurvePoint { z: k as f64 / unit, deviation: n, score: model.test.score(n)?, linear: n > s })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = model.median as f64;
    Ok(ScoreCurve { points, boundary: ((m - s as f64) / unit, (m + s as f64) / unit) })
}

impl ScoreCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("z,n,score,region\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                format_sig9(p.z),
                p.deviation,
                format_sig9(p.score),
                if p.linear { "linear" } else { "binomial" }
            );
        }
        s
    }

    /// The curve in sweep form (`x` = input value, `y_mean` = score).
    pub fn as_sweep(&self) -> SweepCurve {
        SweepCurve {
            x: self.points.iter().map(|p| p.z).collect(),
            y_mean: self.points.iter().map(|p| p.score).collect(),
            y_std: vec![0.0; self.points.len()],
            seeds_used: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::AContrarioTest;

    fn brute_auc(scores: &[f64], labels: &[u8]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, &li) in labels.iter().enumerate() {
            for (j, &lj) in labels.iter().enumerate() {
                if li == 1 && lj == 0 {
                    den += 1.0;
                    num += if scores[i] > scores[j] {
                        1.0
                    } else if scores[i] == scores[j] {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
        num / den
    }

    #[test]
    fn auc_examples() {
        assert_eq!(roc_auc(&[0.9, 0.8, 0.7, 0.6], &[1, 1, 0, 0]).unwrap(), 1.0);
        assert_eq!(brute_auc(&[0.9, 0.8, 0.7, 0.6], &[1, 0, 1, 0]), 0.75);
        assert_eq!(roc_auc(&[0.9, 0.8, 0.7, 0.6], &[1, 0, 1, 0]).unwrap(), 0.75);
        assert_eq!(roc_auc(&[1.0; 5], &[1, 0, 1, 0, 0]).unwrap(), 0.5);
    }

    #[test]
    fn auc_errors() {
        assert!(matches!(roc_auc(&[1.0, 2.0], &[1, 1]), Err(Error::UndefinedMetric(_))));
        assert!(roc_auc(&[1.0], &[1, 0]).is_err());
        assert!(roc_auc(&[f64::NAN, 1.0], &[1, 0]).is_err());
    }

    #[test]
    fn auc_matches_brute_force_with_ties() {
        let scores = [3.0, 1.0, 2.0, 2.0, 5.0, 1.0, 2.0, 0.0, 5.0];
        let labels = [1, 0, 1, 0, 1, 0, 0, 1, 0];
        assert!((roc_auc(&scores, &labels).unwrap() - brute_auc(&scores, &labels)).abs() < 1e-15);
    }

    #[test]
    fn prf1_examples() {
        let p = prf1(&[true, false, true], &[1, 0, 1]).unwrap();
        assert_eq!((p.precision, p.recall, p.f1, p.degenerate), (1.0, 1.0, 1.0, false));
        // TP=1, FP=1, FN=1
        let p = prf1(&[true, true, false, false], &[1, 0, 1, 0]).unwrap();
        assert_eq!((p.precision, p.recall, p.f1), (0.5, 0.5, 0.5));
        let p = prf1(&[false, false], &[1, 0]).unwrap();
        assert_eq!((p.precision, p.recall, p.f1, p.degenerate), (0.0, 0.0, 0.0, true));
        assert!(prf1(&[true], &[1, 0]).is_err());
    }

    #[test]
    fn sample_std() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    fn curve_model() -> NeuronModel {
        NeuronModel { median: 665, test: AContrarioTest::new(40, 9), observations: 12, decimals: 1 }
    }

    #[test]
    fn curve_is_symmetric_with_linear_tail() {
        let model = curve_model();
        let c = emit_score_curve(&model, 60.0, 73.0).unwrap();
        assert_eq!(c.points.len(), 131);
        let n = c.points.len();
        for i in 0..n {
            assert_eq!(c.points[i].score, c.points[n - 1 - i].score);
        }
        assert_eq!(c.boundary, (62.5, 70.5));
        let step = 9f64.ln() / 40.0;
        let tail: Vec<&CurvePoint> = c.points.iter().filter(|p| p.linear && p.z > 66.5).collect();
        assert!(tail.len() > 3);
        for w in tail.windows(2) {
            assert!((w[1].score - w[0].score - step).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_rejects_degenerate_and_bad_range() {
        let m = NeuronModel { test: AContrarioTest::new(0, 0), ..curve_model() };
        assert!(matches!(emit_score_curve(&m, 0.0, 1.0), Err(Error::DegenerateModel)));
        assert!(emit_score_curve(&curve_model(), 2.0, 1.0).is_err());
        assert!(emit_score_curve(&curve_model(), -1e9, 1e9).is_err());
    }

    #[test]
    fn report_csv_and_markdown() {
        let m = EvalMetrics { auc: 0.9, precision: 0.5, recall: 1.0, f1: 2.0 / 3.0, runtime_seconds: 0.01 };
        let report = EvalReport {
            rows: vec![
                EvalRow {
                    dataset: "a".into(),
                    method: "Perception".into(),
                    seed: None,
                    is_mean: false,
                    metrics: m,
                },
                EvalRow {
                    dataset: "a".into(),
                    method: "NeuralNetwork".into(),
                    seed: Some(1),
                    is_mean: false,
                    metrics: m,
                },
                EvalRow {
                    dataset: "a".into(),
                    method: "NeuralNetwork".into(),
                    seed: None,
                    is_mean: true,
                    metrics: m,
                },
            ],
            notices: vec![],
        };
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], REPORT_HEADER);
        assert_eq!(lines[1], "a,Perception,,0.9,0.5,1,0.666666667,0.01");
        assert!(lines[3].starts_with("a,NeuralNetwork,mean,"));
        let md = report.to_markdown();
        assert!(md.contains("| Dataset | NeuralNetwork | Perception |"));
        assert!(md.contains("| a | 0.90 | 0.90 |"));
    }
}
