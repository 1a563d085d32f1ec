//! CSV ingestion and score emission.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// An `N x F` matrix of finite reals (row-major) with optional 0/1 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub feature_names: Vec<String>,
    values: Vec<f64>,
    n_rows: usize,
    labels: Option<Vec<u8>>,
}

impl Dataset {
    pub fn from_rows(name: impl Into<String>, rows: Vec<Vec<f64>>, labels: Option<Vec<u8>>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let feature_names = (0..n_cols).map(|j| format!("x{j}")).collect();
        let n_rows = rows.len();
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidInput("rows differ in length".into()));
        }
        Self::new(name, feature_names, rows.into_iter().flatten().collect(), n_rows, labels)
    }

    /// A single-feature dataset.
    pub fn univariate(name: impl Into<String>, values: &[f64]) -> Result<Self> {
        Self::new(name, vec!["x".into()], values.to_vec(), values.len(), None)
    }

    pub fn new(
        name: impl Into<String>,
        feature_names: Vec<String>,
        values: Vec<f64>,
        n_rows: usize,
        labels: Option<Vec<u8>>,
    ) -> Result<Self> {
        if feature_names.len() * n_rows != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {n_rows} rows of {} features",
                values.len(),
                feature_names.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite value at flat index {i}")));
        }
        if let Some(l) = &labels {
            if l.len() != n_rows {
                return Err(Error::InvalidInput(format!("{} labels for {n_rows} rows", l.len())));
            }
            if l.iter().any(|&x| x > 1) {
                return Err(Error::InvalidInput("labels must be 0 or 1".into()));
            }
        }
        Ok(Self { name: name.into(), feature_names, values, n_rows, labels })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.feature_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_rows == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let f = self.n_cols();
        &self.values[i * f..(i + 1) * f]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().skip(j).step_by(self.n_cols()).copied().collect()
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    /// Appends rows (labelled normal if the dataset carries labels).
    pub fn with_extra_rows(&self, rows: &[Vec<f64>]) -> Result<Self> {
        let mut values = self.values.clone();
        for r in rows {
            if r.len() != self.n_cols() {
                return Err(Error::InvalidInput("appended row has wrong width".into()));
            }
            values.extend_from_slice(r);
        }
        let labels = self.labels.clone().map(|mut l| {
            l.extend(std::iter::repeat_n(0, rows.len()));
            l
        });
        Self::new(self.name.clone(), self.feature_names.clone(), values, self.n_rows + rows.len(), labels)
    }
}

/// Loads a headed CSV. Row numbers in errors are file line numbers (the header is row 1).
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let mut reader =
        csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(file);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let label_idx = match label_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn { path: path.to_path_buf(), column: name.to_owned() })?,
        ),
        None => None,
    };
    let feature_names: Vec<String> =
        header.iter().enumerate().filter(|(j, _)| Some(*j) != label_idx).map(|(_, h)| h.clone()).collect();

    let mut values = Vec::new();
    let mut labels = label_idx.map(|_| Vec::new());
    let mut n_rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                path: path.to_path_buf(),
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            if Some(j) == label_idx {
                let label = match cell {
                    "0" | "0.0" => 0,
                    "1" | "1.0" => 1,
                    _ => {
                        return Err(Error::NonBinaryLabel {
                            path: path.to_path_buf(),
                            row,
                            cell: cell.to_owned(),
                        })
                    }
                };
                labels.as_mut().expect("label column present").push(label);
            } else {
                let v: f64 =
                    cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| Error::ParseCell {
                        path: path.to_path_buf(),
                        row,
                        column: header[j].clone(),
                        cell: cell.to_owned(),
                    })?;
                values.push(v);
            }
        }
        n_rows += 1;
    }
    let name = path.file_stem().map_or_else(|| "dataset".to_owned(), |s| s.to_string_lossy().into_owned());
    Dataset::new(name, feature_names, values, n_rows, labels)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRow {
    pub index: usize,
    pub score_sum: f64,
    pub vote_sum: i64,
    pub anomaly: bool,
}

/// One row per observation, in input order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreReport {
    pub rows: Vec<ScoreRow>,
}

pub const SCORE_HEADER: &str = "index,score_sum,vote_sum,decision";

/// Renders `x` with nine significant digits, trailing zeros trimmed.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..9).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let decimals = (8 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        fixed
    }
}

pub fn write_scores_to<W: Write>(report: &ScoreReport, mut out: W) -> Result<()> {
    writeln!(out, "{SCORE_HEADER}")?;
    for r in &report.rows {
        writeln!(out, "{},{},{},{}", r.index, format_sig9(r.score_sum), r.vote_sum, u8::from(r.anomaly))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_scores(report: &ScoreReport, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_scores_to(report, io::BufWriter::new(file))
}

/// Parses a file produced by [`write_scores`].
pub fn read_scores(path: impl AsRef<Path>) -> Result<ScoreReport> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |what: &str| Error::Format(format!("{}: row {}: bad {what}", path.display(), i + 2));
        let field = |k: usize| record.get(k).unwrap_or("");
        rows.push(ScoreRow {
            index: field(0).parse().map_err(|_| bad("index"))?,
            score_sum: field(1).parse().map_err(|_| bad("score_sum"))?,
            vote_sum: field(2).parse().map_err(|_| bad("vote_sum"))?,
            anomaly: match field(3) {
                "0" => false,
                "1" => true,
                _ => return Err(bad("decision")),
            },
        });
    }
    Ok(ScoreReport { rows })
}
