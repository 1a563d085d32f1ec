use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use perception::dataset::{load_csv, write_scores_to, Dataset};
use perception::eval::{
    emit_score_curve, run_benchmark, sweep_degrade, sweep_neuron_count, sweep_subsample_size, BenchmarkPlan,
    Method,
};
use perception::network::{single_neuron_predict, to_report, with_threads};
use perception::neuron::integerize;
use perception::persist::{load_model, save_model};
use perception::{DecimalsRule, NetworkConfig, NetworkModel, NeuronModel, WindowRule};

/// Parameter-free anomaly detection with a-contrario neurons.
#[derive(Parser, Debug)]
#[command(name = "perception-net", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score a CSV with a single neuron fitted on all rows.
    Score(ScoreArgs),
    /// Fit a network on a CSV and score the same rows.
    NetScore(NetArgs),
    /// Fit a network and save it with --model.
    Fit(NetArgs),
    /// Score a CSV with a network loaded from --model.
    Predict(PredictArgs),
    /// Benchmark the single neuron and the network on labelled CSVs.
    Bench(BenchArgs),
    /// Parameter sweeps and score curves.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Input CSV with a header row.
    input: PathBuf,
    /// Column holding 0/1 labels; excluded from the features.
    #[arg(long = "label-col", value_name = "NAME")]
    label_col: Option<String>,
    /// Decimal places kept when scaling to integers: auto or 0..6.
    #[arg(long, default_value = "auto", value_parser = parse_decimals)]
    decimals: DecimalsRule,
    /// How the window count is chosen.
    #[arg(long, value_enum, default_value_t = WindowArg::OffMedian)]
    windows: WindowArg,
    /// Output path; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ThreadArgs {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "PERCEPTION_NET_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct NetFlags {
    #[arg(long, default_value_t = 256)]
    neurons: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "subsample-min")]
    subsample_min: Option<usize>,
    #[arg(long = "subsample-max")]
    subsample_max: Option<usize>,
    /// Every neuron draws exactly this many rows.
    #[arg(long = "fixed-subsample")]
    fixed_subsample: Option<usize>,
    /// Skip the eject-and-refit step.
    #[arg(long = "no-eject")]
    no_eject: bool,
    /// Draw subsamples without replacement.
    #[arg(long = "no-replacement")]
    no_replacement: bool,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    threads: ThreadArgs,
}

#[derive(Args, Debug)]
struct NetArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    net: NetFlags,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Model file to write.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Model file to read.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Labelled CSV files or directories of them.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long = "label-col", default_value = "label")]
    label_col: String,
    #[arg(long, default_value = "auto", value_parser = parse_decimals)]
    decimals: DecimalsRule,
    #[arg(long, value_enum, default_value_t = WindowArg::OffMedian)]
    windows: WindowArg,
    #[command(flatten)]
    net: NetFlags,
    /// Number of network seeds, starting at --seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Directory of `<dataset>.<method>.csv` score files for external baselines.
    #[arg(long)]
    baselines: Option<PathBuf>,
    /// Output prefix; writes PREFIX.csv and PREFIX.md.
    #[arg(long, short, default_value = "bench")]
    output: PathBuf,
    #[command(flatten)]
    threads: ThreadArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(value_enum)]
    kind: SweepKind,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    net: NetFlags,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Comma-separated sweep points (neuron counts, subsample sizes or neurons kept).
    #[arg(long, value_delimiter = ',')]
    points: Vec<usize>,
    /// Number of seeds per point, starting at --seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Curve range start (curve only); defaults to the data minimum.
    #[arg(long = "from", allow_negative_numbers = true)]
    z_from: Option<f64>,
    /// Curve range end (curve only); defaults to the data maximum.
    #[arg(long = "to", allow_negative_numbers = true)]
    z_to: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SweepKind {
    Neurons,
    Subsample,
    Degrade,
    Curve,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum WindowArg {
    /// Observations not equal to the median.
    OffMedian,
    /// All observations.
    All,
}

impl From<WindowArg> for WindowRule {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::OffMedian => WindowRule::OffMedian,
            WindowArg::All => WindowRule::AllObservations,
        }
    }
}

fn parse_decimals(s: &str) -> Result<DecimalsRule, String> {
    if s == "auto" {
        return Ok(DecimalsRule::Auto);
    }
    match s.parse::<u8>() {
        Ok(d) if d <= perception::neuron::MAX_DECIMALS => Ok(DecimalsRule::Fixed(d)),
        _ => Err(format!("expected 'auto' or 0..={}", perception::neuron::MAX_DECIMALS)),
    }
}

/// An invalid combination of flags, reported with exit code 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl NetFlags {
    fn config(&self, decimals: DecimalsRule, windows: WindowArg) -> anyhow::Result<NetworkConfig> {
        let config = NetworkConfig {
            n_neurons: self.neurons,
            subsample_min: self.subsample_min,
            subsample_max: self.subsample_max,
            fixed_subsample: self.fixed_subsample,
            with_replacement: !self.no_replacement,
            eject: !self.no_eject,
            seed: self.seed,
            decimals,
            window_rule: windows.into(),
            ..NetworkConfig::default()
        };
        config.validate().map_err(|e| usage(e.to_string()))?;
        Ok(config)
    }

    fn seeds(&self, count: u64) -> anyhow::Result<Vec<u64>> {
        if count == 0 {
            return Err(usage("--seeds must be at least 1"));
        }
        Ok((0..count).map(|i| self.seed.wrapping_add(i)).collect())
    }
}

fn check_bounds(config: &NetworkConfig, data: &Dataset) -> anyhow::Result<()> {
    config.size_bounds(data.n_rows()).map_err(|e| usage(e.to_string()))?;
    Ok(())
}

fn threads(t: &ThreadArgs) -> anyhow::Result<usize> {
    match t.threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(k) => Ok(k),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn load(input: &InputArgs) -> anyhow::Result<Dataset> {
    Ok(load_csv(&input.input, input.label_col.as_deref())?)
}

/// Writes to `path` or stdout.
fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut w =
                BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn report_training(model: &NetworkModel) {
    eprintln!(
        "trained {} neurons: {} rows drawn, {} ejected, {} degenerate",
        model.n_neurons(),
        model.total_drawn(),
        model.total_ejected(),
        model.degenerate_count()
    );
}

fn cmd_score(args: &ScoreArgs) -> anyhow::Result<()> {
    let data = load(&args.input)?;
    let k = threads(&args.threads)?;
    let (model, out) =
        with_threads(k, || single_neuron_predict(&data, args.input.decimals, args.input.windows.into()))??;
    if model.degenerate_count() > 0 {
        eprintln!("notice: the neuron is degenerate (zero total deviation); nothing can fire");
    }
    let flagged = out.iter().filter(|o| o.decision.is_anomaly()).count();
    eprintln!("{flagged} of {} rows flagged", out.len());
    emit(args.input.output.as_deref(), |w| Ok(write_scores_to(&to_report(&out), w)?))
}

fn fit_network(args: &NetArgs) -> anyhow::Result<(Dataset, NetworkModel)> {
    let data = load(&args.input)?;
    let config = args.net.config(args.input.decimals, args.input.windows)?;
    check_bounds(&config, &data)?;
    let k = threads(&args.threads)?;
    let model = with_threads(k, || NetworkModel::fit(&data, &config))??;
    report_training(&model);
    Ok((data, model))
}

fn cmd_net_score(args: &NetArgs) -> anyhow::Result<()> {
    let (data, model) = fit_network(args)?;
    if let Some(path) = &args.model {
        save_model(&model, path)?;
    }
    let k = threads(&args.threads)?;
    let out = with_threads(k, || model.predict(&data))??;
    emit(args.input.output.as_deref(), |w| Ok(write_scores_to(&to_report(&out), w)?))
}

fn cmd_fit(args: &NetArgs) -> anyhow::Result<()> {
    let Some(path) = &args.model else {
        return Err(usage("fit requires --model PATH"));
    };
    let (_, model) = fit_network(args)?;
    save_model(&model, path)?;
    Ok(())
}

fn cmd_predict(args: &PredictArgs) -> anyhow::Result<()> {
    let model = load_model(&args.model)?;
    let data = load(&args.input)?;
    let k = threads(&args.threads)?;
    let out = with_threads(k, || model.predict(&data))??;
    emit(args.input.output.as_deref(), |w| Ok(write_scores_to(&to_report(&out), w)?))
}

fn collect_csvs(inputs: &[PathBuf]) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "csv"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let config = args.net.config(args.decimals, args.windows)?;
    let seeds = args.net.seeds(args.seeds)?;
    let mut datasets = Vec::new();
    for path in collect_csvs(&args.inputs)? {
        match load_csv(&path, Some(&args.label_col)) {
            Ok(d) => datasets.push(d),
            Err(e) => eprintln!("skipping {}: {e}", path.display()),
        }
    }
    if datasets.is_empty() {
        bail!(perception::Error::InvalidInput("no loadable datasets".into()));
    }
    let plan = BenchmarkPlan {
        methods: &[Method::SingleNeuron, Method::Network],
        seeds: &seeds,
        config,
        baselines_dir: args.baselines.as_deref(),
    };
    let k = threads(&args.threads)?;
    let report = with_threads(k, || run_benchmark(&datasets, &plan))??;
    for n in &report.notices {
        eprintln!("{n}");
    }
    let csv = args.output.with_extension("csv");
    let md = args.output.with_extension("md");
    report.write(&csv, &md)?;
    eprintln!("wrote {} and {}", csv.display(), md.display());
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let data = load(&args.input)?;
    let config = args.net.config(args.input.decimals, args.input.windows)?;
    let k = threads(&args.threads)?;
    if let SweepKind::Curve = args.kind {
        if data.n_cols() != 1 {
            return Err(usage("curve needs a single feature column"));
        }
        let values = data.column(0);
        let decimals = match args.input.decimals {
            DecimalsRule::Auto => perception::neuron::infer_decimals(&values),
            DecimalsRule::Fixed(d) => d,
        };
        let model = NeuronModel::fit(&integerize(&values, decimals)?, args.input.windows.into())?;
        eprintln!("neuron: S={}, W={}, {} rows", model.total_deviation(), model.windows(), values.len());
        let lo = args.z_from.unwrap_or_else(|| values.iter().copied().fold(f64::INFINITY, f64::min));
        let hi = args.z_to.unwrap_or_else(|| values.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let curve = emit_score_curve(&model, lo, hi)?;
        eprintln!("linear region outside [{}, {}]", curve.boundary.0, curve.boundary.1);
        return emit(args.input.output.as_deref(), |w| Ok(w.write_all(curve.to_csv().as_bytes())?));
    }
    if args.points.is_empty() {
        return Err(usage("--points is required for this sweep"));
    }
    let seeds = args.net.seeds(args.seeds)?;
    let curve = with_threads(k, || match args.kind {
        SweepKind::Neurons => sweep_neuron_count(&data, &args.points, &seeds, &config),
        SweepKind::Subsample => sweep_subsample_size(&data, &args.points, &seeds, &config),
        SweepKind::Degrade => sweep_degrade(&data, &args.points, &seeds, &config),
        SweepKind::Curve => unreachable!("handled above"),
    })??;
    emit(args.input.output.as_deref(), |w| Ok(w.write_all(curve.to_csv().as_bytes())?))
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Score(a) => cmd_score(a),
        Command::NetScore(a) => cmd_net_score(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match err.chain().find_map(|e| e.downcast_ref::<perception::Error>()) {
        Some(e) if e.is_data_error() => 2,
        Some(perception::Error::Io(e)) if e.kind() == io::ErrorKind::NotFound => 2,
        _ => match err.chain().find_map(|e| e.downcast_ref::<io::Error>()) {
            Some(e) if matches!(e.kind(), io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied) => 2,
            _ => 3,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            if code == 1 {
                eprintln!("error: {e}\n\nRun with --help for usage.");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn galton() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/galton_heights.csv")
    }

    fn invoke(args: &[&str]) -> anyhow::Result<()> {
        let cli = Cli::try_parse_from(std::iter::once("perception-net").chain(args.iter().copied()))?;
        run(&cli)
    }

    fn code(args: &[&str]) -> u8 {
        match Cli::try_parse_from(std::iter::once("perception-net").chain(args.iter().copied())) {
            Err(_) => 1,
            Ok(cli) => run(&cli).err().map_or(0, |e| exit_code(&e)),
        }
    }

    fn flagged_rows(path: &Path) -> Vec<usize> {
        let report = perception::dataset::read_scores(path).unwrap();
        report.rows.iter().filter(|r| r.anomaly).map(|r| r.index).collect()
    }

    fn labelled_csv(dir: &Path) -> PathBuf {
        let mut body = String::from("a,b,label\n");
        for i in 0..300 {
            let far = i % 30 == 0;
            let (a, b) = if far { (100 + i, -50) } else { (i % 7, i % 5) };
            body.push_str(&format!("{a},{b},{}\n", u8::from(far)));
        }
        let path = dir.join("toy.csv");
        fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn score_galton() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.csv");
        invoke(&["score", galton().to_str().unwrap(), "--decimals", "1", "-o", out.to_str().unwrap()])
            .unwrap();
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.starts_with("index,score_sum,vote_sum,decision\n"));
        assert_eq!(flagged_rows(&out), vec![22, 125, 146, 288, 672, 779, 821, 889]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(code(&["score"]), 1);
        assert_eq!(code(&["score", "x.csv", "--decimals", "7"]), 1);
        assert_eq!(code(&["frobnicate"]), 1);
        assert_eq!(code(&["score", "/no/such/file.csv"]), 2);
        assert_eq!(code(&["fit", galton().to_str().unwrap()]), 1);
        assert_eq!(code(&["net-score", galton().to_str().unwrap(), "--fixed-subsample", "5000"]), 1);
        assert_eq!(code(&["net-score", galton().to_str().unwrap(), "--threads", "0"]), 1);
        assert_eq!(code(&["predict", galton().to_str().unwrap(), "--model", "/no/model.bin"]), 2);
    }

    #[test]
    fn usage_error_leaves_output_alone() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("never.csv");
        let g = galton();
        assert_eq!(
            code(&["net-score", g.to_str().unwrap(), "--neurons", "0", "-o", out.to_str().unwrap()]),
            1
        );
        assert!(!out.exists());
    }

    #[test]
    fn data_errors_exit_2() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.csv");
        fs::write(&bad, "x,y\n1,2\n3,oops\n").unwrap();
        assert_eq!(code(&["score", bad.to_str().unwrap()]), 2);
        let labels = dir.path().join("labels.csv");
        fs::write(&labels, "x,label\n1,0\n2,3\n").unwrap();
        assert_eq!(code(&["score", labels.to_str().unwrap(), "--label-col", "label"]), 2);
    }

    #[test]
    fn constant_column_flags_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("c.csv");
        fs::write(&input, "x\n4\n4\n4\n4\n").unwrap();
        let out = dir.path().join("o.csv");
        invoke(&["score", input.to_str().unwrap(), "-o", out.to_str().unwrap()]).unwrap();
        assert!(flagged_rows(&out).is_empty());
    }

    #[test]
    fn fit_then_predict_matches_net_score() {
        let dir = tempfile::tempdir().unwrap();
        let g = galton();
        let g = g.to_str().unwrap();
        let model = dir.path().join("m.bin");
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        let m = model.to_str().unwrap();
        invoke(&["fit", g, "--seed", "3", "--neurons", "40", "--model", m]).unwrap();
        invoke(&["predict", g, "--model", m, "-o", b.to_str().unwrap()]).unwrap();
        invoke(&["net-score", g, "--seed", "3", "--neurons", "40", "-o", a.to_str().unwrap()]).unwrap();
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }

    #[test]
    fn one_neuron_network_votes_plus_minus_one() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o.csv");
        invoke(&["net-score", galton().to_str().unwrap(), "--neurons", "1", "-o", out.to_str().unwrap()])
            .unwrap();
        let report = perception::dataset::read_scores(&out).unwrap();
        assert!(report.rows.iter().all(|r| r.vote_sum.abs() == 1 && r.anomaly == (r.vote_sum == 1)));
    }

    #[test]
    fn bench_writes_both_reports() {
        let dir = tempfile::tempdir().unwrap();
        labelled_csv(dir.path());
        fs::write(dir.path().join("unlabelled.csv"), "a,b\n1,2\n").unwrap();
        let prefix = dir.path().join("out/report");
        fs::create_dir(dir.path().join("out")).unwrap();
        invoke(&[
            "bench",
            dir.path().to_str().unwrap(),
            "--seeds",
            "3",
            "--neurons",
            "32",
            "-o",
            prefix.to_str().unwrap(),
        ])
        .unwrap();
        let csv = fs::read_to_string(prefix.with_extension("csv")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "dataset,method,seed,auc,precision,recall,f1,runtime_seconds");
        // one single-neuron row, three seeds and a mean for the network
        assert_eq!(lines.len(), 1 + 1 + 3 + 1);
        assert!(lines.iter().any(|l| l.starts_with("toy,NeuralNetwork,mean,")));
        let md = fs::read_to_string(prefix.with_extension("md")).unwrap();
        assert!(md.contains("| toy |"));
    }

    #[test]
    fn sweeps_emit_curves() {
        let dir = tempfile::tempdir().unwrap();
        let input = labelled_csv(dir.path());
        let input = input.to_str().unwrap();
        for (kind, points) in [("neurons", "4,16,32"), ("subsample", "10,50,200"), ("degrade", "8,64,256")] {
            let out = dir.path().join(format!("{kind}.csv"));
            invoke(&[
                "sweep",
                kind,
                input,
                "--label-col",
                "label",
                "--points",
                points,
                "--seeds",
                "2",
                "-o",
                out.to_str().unwrap(),
            ])
            .unwrap();
            let text = fs::read_to_string(&out).unwrap();
            assert_eq!(text.lines().count(), 4, "{kind}");
            assert!(text.starts_with("x,y_mean,y_std\n"));
        }
        assert_eq!(code(&["sweep", "neurons", input, "--label-col", "label"]), 1);
    }

    #[test]
    fn curve_on_galton() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("curve.csv");
        let g = galton();
        invoke(&[
            "sweep",
            "curve",
            g.to_str().unwrap(),
            "--from",
            "60",
            "--to",
            "73",
            "-o",
            out.to_str().unwrap(),
        ])
        .unwrap();
        let text = fs::read_to_string(out).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 131);
        assert!(rows[65].starts_with("66.5,0,"));
        assert_eq!(rows[0].split(',').nth(2), rows[130].split(',').nth(2));
    }

    #[test]
    fn decimals_parser() {
        assert_eq!(parse_decimals("auto"), Ok(DecimalsRule::Auto));
        assert_eq!(parse_decimals("3"), Ok(DecimalsRule::Fixed(3)));
        assert!(parse_decimals("7").is_err());
        assert!(parse_decimals("-1").is_err());
    }
}
