use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use odkit_core::datagen::{generate_static, generate_timeseries, Anomaly, StaticGenSpec, TsGenSpec};
use odkit_core::metrics::{output_performance, EvalReport};
use odkit_core::{LabelVector, RngSeed, TimeSeriesFrame};
use odkit_detectors::{algorithm_selection, fit, Algorithm, Category, DEFAULT_CONTAMINATION};
use odkit_store::{connect_server, parse_csv, write_csv, Connection, ConnectionConfig, StoreError, TableHandle};
use odkit_viz::{visualize_distribution, visualize_outlierscore, FigureSpec, PlotKind};

use crate::args::{Cli, DetectArgs, GenerateCommand, GenerateOut, IngestArgs, ListArgs, SeriesArgs, StaticArgs};
use crate::config::ConfigFile;
use crate::error::{CliError, Result};

pub const DEFAULT_DATA_DIR: &str = "odkit-data";
pub const DEFAULT_OUT_DIR: &str = "odkit-out";
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.7;
pub const SCORES_FILE: &str = "scores.csv";
pub const DISTRIBUTION_FILE: &str = "distribution.svg";
pub const OUTLIERSCORE_FILE: &str = "outlierscore.svg";
const BANNER: &str = "==============================";

/// Global connection settings after merging flags, environment and config.
pub struct Context {
    pub config: ConfigFile,
    pub connection: ConnectionConfig,
}

impl Context {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let config = match &cli.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let connection = ConnectionConfig {
            data_dir: config.pick(cli.data_dir.clone(), "data_dir")?.unwrap_or_else(|| DEFAULT_DATA_DIR.into()),
            host: config.pick(cli.host.clone(), "host")?.unwrap_or_else(|| "localhost".into()),
            user: config.pick(cli.user.clone(), "user")?.unwrap_or_else(|| "odkit".into()),
            password: config.pick(cli.password.clone(), "password")?.unwrap_or_else(|| "odkit".into()),
        };
        Ok(Self { config, connection })
    }

    fn connect(&self) -> Result<Connection> {
        Ok(connect_server(&self.connection)?)
    }
}

fn write_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::internal(format!("cannot write {}: {e}", path.display()))
}

pub fn ingest(ctx: &Context, args: &IngestArgs, out: &mut dyn Write) -> Result<()> {
    let database: String = ctx.config.require(args.database.clone(), "database")?;
    let table: String = ctx.config.require(args.table.clone(), "table")?;
    if !args.csv.is_file() {
        return Err(CliError::usage(format!("input file {} does not exist", args.csv.display())));
    }
    let conn = ctx.connect()?;
    let frame = parse_csv(&args.csv)?;
    let handle = match conn.open_table(&database, &table) {
        Ok(existing) => {
            if existing.schema != frame.columns() {
                return Err(CliError::data(schema_diff(&existing.schema, frame.columns())));
            }
            existing
        }
        Err(StoreError::UnknownTable { .. }) => TableHandle::new(&database, &table, frame.columns().to_vec()),
        Err(e) => return Err(e.into()),
    };
    let n = conn.ingest_frame(&handle, &frame)?;
    writeln!(out, "ingested {n} rows").map_err(|e| CliError::internal(e.to_string()))?;
    Ok(())
}

/// Human-readable difference between a stored schema and a CSV header.
pub fn schema_diff(stored: &[String], found: &[String]) -> String {
    let missing: Vec<&str> = stored.iter().filter(|c| !found.contains(c)).map(String::as_str).collect();
    let extra: Vec<&str> = found.iter().filter(|c| !stored.contains(c)).map(String::as_str).collect();
    let mut msg = format!("schema mismatch: table has [{}], file has [{}]", stored.join(", "), found.join(", "));
    if !missing.is_empty() {
        msg.push_str(&format!("; missing: {}", missing.join(", ")));
    }
    if !extra.is_empty() {
        msg.push_str(&format!("; unexpected: {}", extra.join(", ")));
    }
    if missing.is_empty() && extra.is_empty() {
        msg.push_str("; same columns in a different order");
    }
    msg
}

/// Listing-style report block. Metric lines read `n/a` when no ground truth
/// was supplied or the value is undefined.
pub fn report_block(algorithm: &str, report: Option<&EvalReport>, seconds: f64) -> String {
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"));
    let r = report;
    let mut s = String::new();
    s.push_str(BANNER);
    s.push('\n');
    s.push_str(&format!("Results in Algorithm {algorithm} are:\n"));
    s.push_str(&format!("accuracy_score: {}\n", fmt(r.map(|r| r.accuracy))));
    s.push_str(&format!("precision_score: {}\n", fmt(r.map(|r| r.precision))));
    s.push_str(&format!("recall_score: {}\n", fmt(r.map(|r| r.recall))));
    s.push_str(&format!("f1_score: {}\n", fmt(r.map(|r| r.f1))));
    s.push_str(&format!("roc_auc_score: {}\n", fmt(r.and_then(|r| r.roc_auc))));
    s.push_str(&format!("processing time: {seconds:.6} seconds\n"));
    s.push_str(BANNER);
    s.push('\n');
    s
}

fn parse_override(raw: &str) -> Result<(String, String)> {
    raw.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| CliError::usage(format!("--param expects key=value, got {raw:?}")))
}

/// Ground-truth labels for `timestamps`, read from a `timestamp,label` CSV.
pub fn read_labels(path: &Path, timestamps: &[i64]) -> Result<LabelVector> {
    if !path.is_file() {
        return Err(CliError::usage(format!("label file {} does not exist", path.display())));
    }
    let bad = |m: String| CliError::data(format!("{}: {m}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.len() != 2 || &header[0] != "timestamp" || &header[1] != "label" {
        return Err(bad(format!(
            "expected header timestamp,label, found {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut by_time = HashMap::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let line = i + 2;
        let t: i64 = rec[0].trim().parse().map_err(|_| bad(format!("line {line}: bad timestamp {:?}", &rec[0])))?;
        let l: u8 = match rec[1].trim() {
            "0" => 0,
            "1" => 1,
            other => return Err(bad(format!("line {line}: label must be 0 or 1, got {other:?}"))),
        };
        by_time.insert(t, l);
    }
    let labels = timestamps
        .iter()
        .map(|t| by_time.get(t).copied().ok_or_else(|| bad(format!("no label for timestamp {t}"))))
        .collect::<Result<Vec<u8>>>()?;
    Ok(LabelVector::new(labels)?)
}

/// Train and test frames per the split settings.
fn split(
    conn: &Connection,
    handle: &TableHandle,
    range: (i64, i64),
    fraction: Option<f64>,
    test_range: Option<(i64, i64)>,
) -> Result<(TimeSeriesFrame, TimeSeriesFrame)> {
    let data = conn.query_data(handle, range.0, range.1)?;
    let (train, test) = match test_range {
        Some((s, e)) => (data, conn.query_data(handle, s, e)?),
        None => {
            let f = fraction.unwrap_or(DEFAULT_TRAIN_FRACTION);
            if !(f > 0.0 && f < 1.0) {
                return Err(CliError::usage(format!("train fraction must lie in (0, 1), got {f}")));
            }
            let n_train = (f * data.n_rows() as f64).floor() as usize;
            (data.slice(0..n_train), data.slice(n_train..data.n_rows()))
        }
    };
    if train.is_empty() {
        return Err(CliError::data("training split is empty"));
    }
    if test.is_empty() {
        return Err(CliError::data("test split is empty"));
    }
    Ok((train, test))
}

pub fn detect(ctx: &Context, args: &DetectArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = &ctx.config;
    let name: String = cfg.require(args.algorithm.clone(), "algorithm")?;
    let contamination = cfg.pick(args.contamination, "contamination")?.unwrap_or(DEFAULT_CONTAMINATION);
    let seed = cfg.pick(args.seed, "seed")?.unwrap_or(0);
    let mut overrides = cfg.prefixed("param");
    for raw in &args.params {
        overrides.push(parse_override(raw)?);
    }
    let spec = algorithm_selection(&name, overrides, contamination, RngSeed(seed))?;

    let database: String = cfg.require(args.database.clone(), "database")?;
    let table: String = cfg.require(args.table.clone(), "table")?;
    let start = cfg.pick(args.start, "start")?.unwrap_or(i64::MIN);
    let end = cfg.pick(args.end, "end")?.unwrap_or(i64::MAX);
    let fraction = cfg.pick(args.train_fraction, "train_fraction")?;
    let test_range = match (cfg.pick(args.test_start, "test_start")?, cfg.pick(args.test_end, "test_end")?) {
        (Some(s), Some(e)) => Some((s, e)),
        (None, None) => None,
        _ => return Err(CliError::usage("test_start and test_end go together")),
    };
    if fraction.is_some() && test_range.is_some() {
        return Err(CliError::usage("give either a train fraction or a test range, not both"));
    }
    let out_dir: PathBuf = cfg.pick(args.out_dir.clone(), "out_dir")?.unwrap_or_else(|| DEFAULT_OUT_DIR.into());
    let labels_path: Option<PathBuf> = cfg.pick(args.labels.clone(), "labels")?;

    let conn = ctx.connect()?;
    let handle = conn.open_table(&database, &table)?;
    let (train, test) = split(&conn, &handle, (start, end), fraction, test_range)?;
    let truth = labels_path.as_deref().map(|p| read_labels(p, test.timestamps())).transpose()?;

    let started = Instant::now();
    let detector = fit(&spec, &train)?;
    let prediction = detector.predict(&test)?;
    let scores = detector.decision_function(&test)?;
    let elapsed = started.elapsed().as_secs_f64();

    fs::create_dir_all(&out_dir).map_err(write_err(&out_dir))?;
    let scores_path = out_dir.join(SCORES_FILE);
    write_scores(&scores_path, test.timestamps(), &scores, &prediction)?;
    if !args.no_figures {
        let figure = FigureSpec::default();
        let algo = spec.params.algorithm();
        let kind = if test.n_cols() == 2 && !algo.category().is_time_series() {
            PlotKind::Static
        } else {
            PlotKind::TimeSeries
        };
        visualize_distribution(&test, &scores, kind, &figure, &out_dir.join(DISTRIBUTION_FILE))?;
        visualize_outlierscore(
            test.timestamps(),
            &scores,
            detector.threshold(),
            &figure,
            &out_dir.join(OUTLIERSCORE_FILE),
        )?;
    }
    if let Some(path) = &args.save_model {
        let file = File::create(path).map_err(write_err(path))?;
        let mut w = BufWriter::new(file);
        detector.save(&mut w)?;
        w.flush().map_err(write_err(path))?;
    }

    let report = truth.map(|t| output_performance(&t, &prediction, &scores, elapsed)).transpose()?;
    let block = report_block(&spec.params.algorithm().name().to_lowercase(), report.as_ref(), elapsed);
    write!(out, "{block}").map_err(|e| CliError::internal(e.to_string()))?;
    Ok(())
}

fn write_scores(path: &Path, timestamps: &[i64], scores: &[f64], labels: &[u8]) -> Result<()> {
    let file = File::create(path).map_err(write_err(path))?;
    let mut w = BufWriter::new(file);
    let io = write_err(path);
    let result = (|| {
        writeln!(w, "timestamp,score,label")?;
        for ((t, s), l) in timestamps.iter().zip(scores).zip(labels) {
            writeln!(w, "{t},{s},{l}")?;
        }
        w.flush()
    })();
    result.map_err(io)
}

fn write_labels(path: &Path, frame: &TimeSeriesFrame, labels: &[u8]) -> Result<()> {
    let file = File::create(path).map_err(write_err(path))?;
    let mut w = BufWriter::new(file);
    let io = write_err(path);
    let result = (|| {
        writeln!(w, "timestamp,label")?;
        for (t, l) in frame.timestamps().iter().zip(labels) {
            writeln!(w, "{t},{l}")?;
        }
        w.flush()
    })();
    result.map_err(io)
}

fn write_generated(
    out: &GenerateOut,
    frame: &TimeSeriesFrame,
    labels: &LabelVector,
    sink: &mut dyn Write,
) -> Result<()> {
    write_csv(frame, &out.out).map_err(|e| CliError::internal(e.to_string()))?;
    write_labels(&out.labels_out, frame, labels)?;
    writeln!(
        sink,
        "wrote {} rows to {} and {} outlier labels to {}",
        frame.n_rows(),
        out.out.display(),
        labels.count_outliers(),
        out.labels_out.display()
    )
    .map_err(|e| CliError::internal(e.to_string()))
}

pub fn generate(cmd: &GenerateCommand, sink: &mut dyn Write) -> Result<()> {
    let (frame, labels, out) = match cmd {
        GenerateCommand::Static(a) => {
            let (f, l) = generate_static(&static_spec(a)).map_err(|e| CliError::usage(e.to_string()))?;
            (f, l, &a.out)
        }
        GenerateCommand::Series(a) => {
            let (f, l) = generate_timeseries(&series_spec(a)?).map_err(|e| CliError::usage(e.to_string()))?;
            (f, l, &a.out)
        }
    };
    write_generated(out, &frame, &labels, sink)
}

fn static_spec(a: &StaticArgs) -> StaticGenSpec {
    StaticGenSpec {
        n_inliers: a.n_inliers,
        dimension: a.dimension,
        contamination: a.contamination,
        centers: None,
        cluster_std: a.cluster_std,
        noise_low: a.noise_low,
        noise_high: a.noise_high,
        seed: RngSeed(a.seed),
    }
}

fn anomaly_fields(flag: &str, raw: &str, arity: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    let bad = || CliError::usage(format!("--{flag} expects {arity} colon-separated numbers, got {raw:?}"));
    if parts.len() != arity {
        return Err(bad());
    }
    parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn index(flag: &str, v: f64) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 {
        Ok(v as usize)
    } else {
        Err(CliError::usage(format!("--{flag}: position and extent must be nonnegative integers, got {v}")))
    }
}

fn series_spec(a: &SeriesArgs) -> Result<TsGenSpec> {
    let mut anomalies = Vec::new();
    for raw in &a.spike {
        let f = anomaly_fields("spike", raw, 2)?;
        anomalies.push(Anomaly::Spike { at: index("spike", f[0])?, magnitude: f[1] });
    }
    for raw in &a.drop {
        let f = anomaly_fields("drop", raw, 2)?;
        anomalies.push(Anomaly::Drop { at: index("drop", f[0])?, magnitude: f[1] });
    }
    for raw in &a.level_shift {
        let f = anomaly_fields("level-shift", raw, 3)?;
        anomalies.push(Anomaly::LevelShift {
            at: index("level-shift", f[0])?,
            magnitude: f[1],
            extent: index("level-shift", f[2])?,
        });
    }
    for raw in &a.trend_change {
        let f = anomaly_fields("trend-change", raw, 3)?;
        anomalies.push(Anomaly::TrendChange {
            at: index("trend-change", f[0])?,
            slope: f[1],
            extent: index("trend-change", f[2])?,
        });
    }
    Ok(TsGenSpec {
        length: a.length,
        amplitude: a.amplitude,
        period: a.period,
        trend: a.trend,
        noise_sigma: a.noise_sigma,
        anomalies,
        seed: RngSeed(a.seed),
    })
}

pub fn list_algos(args: &ListArgs, out: &mut dyn Write) -> Result<()> {
    let filter = match &args.category {
        None => None,
        Some(label) => Some(Category::from_label(label).ok_or_else(|| {
            let valid: Vec<&str> = Category::ALL.iter().map(|c| c.label()).collect();
            CliError::usage(format!("unknown category {label:?}; valid categories: {}", valid.join("; ")))
        })?),
    };
    for algo in Algorithm::ALL {
        if filter.is_none_or(|c| algo.category() == c) {
            writeln!(out, "{:<12}{}", algo.name(), algo.category()).map_err(|e| CliError::internal(e.to_string()))?;
        }
    }
    Ok(())
}
