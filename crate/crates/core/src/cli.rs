//! Command-line front end. The `wafomlab` binary is a thin wrapper around [`main_with_args`].
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 data invariant violation
//! (rank or shape), 4 capacity exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::f2core::{parse_net, write_net, LinearNet, NetPoint, NET_FILE_HEADER};
use crate::fmt_f64;
use crate::netgen::{faure_points, halton_points, sobol_net, SequentialGenerator, GEN_FILE_HEADER};
use crate::qmc::{
    asian_integrand, error_curve, error_curve_csv, error_curve_points, reference_price_with,
    walsh_spectrum, AsianParams, ErrorCurveRow, Integrand, DEFAULT_DIGITS, REFERENCE_LOG2_POINTS,
};
use crate::search::{
    search, SearchConfig, SearchResult, DEFAULT_STAGE1_TRIALS, DEFAULT_STAGE2_TRIALS,
};
use crate::wafom::{wafom_dual, wafom_inversion, wafom_sequential, WafomReport};

/// Largest nS accepted by the `spectrum` command.
pub const SPECTRUM_MAX_DIGITS: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "wafomlab",
    version,
    about = "Walsh figure of merit for digital nets over F2"
)]
pub struct Cli {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, env = "WAFOMLAB_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute WAFOM of a net file (wafom-net v1) or generator file (wafom-gen v1).
    Wafom(WafomArgs),
    /// Two-stage random search for a low-WAFOM sequential generator.
    Search(SearchArgs),
    /// Best searched WAFOM and Sobol WAFOM for a range of d.
    Figure1(Figure1Args),
    /// Integration error of searched nets and classical baselines.
    Figure2(Figure2Args),
    /// Walsh spectrum |f̂_n(A)| of an integrand at small n and S.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Dual,
    Inversion,
    Sequential,
    All,
}

#[derive(Debug, Args)]
pub struct WafomArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long = "d")]
    pub d: usize,
    #[arg(long = "n", default_value_t = 30)]
    pub n: usize,
    #[arg(long = "s", default_value_t = 4)]
    pub s: usize,
    #[arg(long, default_value_t = DEFAULT_STAGE1_TRIALS)]
    pub stage1: usize,
    #[arg(long, default_value_t = DEFAULT_STAGE2_TRIALS)]
    pub stage2: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for d<d>.net, d<d>.gen, d<d>.trace.csv and d<d>.manifest.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 10)]
    pub dmin: usize,
    #[arg(long, default_value_t = 22)]
    pub dmax: usize,
    #[arg(long = "n", default_value_t = 30)]
    pub n: usize,
    #[arg(long = "s", default_value_t = 4)]
    pub s: usize,
    /// Trial budget as STAGE1,STAGE2.
    #[arg(long, default_value = "5000,2000", value_parser = parse_budget)]
    pub budget: (usize, usize),
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; the manifest goes to <out>.manifest.json. Stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write each searched net as by the `search` command.
    #[arg(long)]
    pub save_nets: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegrandArg {
    Asian,
    Constant,
    Walsh,
}

#[derive(Debug, Args)]
pub struct Figure2Args {
    /// Directory of *.net files, e.g. written by `search` or `figure1 --save-nets`.
    #[arg(long)]
    pub nets: PathBuf,
    #[arg(long, value_enum, default_value = "asian")]
    pub integrand: IntegrandArg,
    /// Integrand parameter as key=value; repeatable.
    #[arg(long = "param", short = 'p', value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// log2 of the Sobol point count used for the reference value.
    #[arg(long, default_value_t = REFERENCE_LOG2_POINTS)]
    pub reference_log2: usize,
    /// Output directory for searched.csv, sobol.csv, halton.csv, faure.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long = "s")]
    pub s: usize,
    #[arg(long, value_enum, default_value = "asian")]
    pub integrand: IntegrandArg,
    #[arg(long = "param", short = 'p', value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_budget(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected STAGE1,STAGE2, got '{s}'"))?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|e| format!("bad value for {k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// A CLI failure carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                Error::Parse { .. } | Error::Invalid(_) | Error::Domain(_) | Error::Io(_) => 2,
                Error::Shape(_) | Error::Rank { .. } | Error::InvalidState(_) => 3,
                Error::Capacity { .. } => 4,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Provenance attached to every output, as a JSON sidecar or a leading `#` line.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, Value>,
    pub master_seed: Option<u64>,
    pub tool_version: String,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub results: BTreeMap<String, Value>,
}

impl RunManifest {
    fn new(command: &str, master_seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            config: BTreeMap::new(),
            master_seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: 0.0,
            results: BTreeMap::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.config.insert(key.to_string(), json!(value));
        self
    }

    fn result(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.results.insert(key.to_string(), json!(value));
        self
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    fn comment_line(&self) -> String {
        format!(
            "# {}\n",
            serde_json::to_string(self).expect("manifest serializes")
        )
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes `csv` to `path` plus a manifest sidecar, or to `stdout` behind a comment line.
fn emit_csv(
    path: Option<&Path>,
    manifest: &RunManifest,
    csv: &str,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, csv)?;
            fs::write(sidecar_path(p), manifest.to_json())?;
        }
        None => {
            stdout.write_all(manifest.comment_line().as_bytes())?;
            stdout.write_all(csv.as_bytes())?;
        }
    }
    Ok(())
}

/// Parses arguments, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let mut buf: Vec<u8> = Vec::new();
    pool.install(|| match cli.command {
        Command::Wafom(a) => cmd_wafom(&a, threads, &mut buf),
        Command::Search(a) => cmd_search(&a, threads, &mut buf),
        Command::Figure1(a) => cmd_figure1(&a, threads, &mut buf),
        Command::Figure2(a) => cmd_figure2(&a, threads, &mut buf),
        Command::Spectrum(a) => cmd_spectrum(&a, threads, &mut buf),
    })?;
    stdout.write_all(&buf)?;
    Ok(())
}

enum NetSource {
    Net(LinearNet),
    Generator(SequentialGenerator),
}

fn read_net_source(path: &Path) -> CliResult<NetSource> {
    let text = fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or("").trim_end();
    if header == GEN_FILE_HEADER {
        Ok(NetSource::Generator(SequentialGenerator::parse(&text)?))
    } else if header == NET_FILE_HEADER {
        Ok(NetSource::Net(parse_net(&text)?))
    } else {
        Err(Error::parse(
            1,
            format!("expected '{NET_FILE_HEADER}' or '{GEN_FILE_HEADER}'"),
        )
        .into())
    }
}

fn relative_deviation(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn cmd_wafom(args: &WafomArgs, threads: usize, stdout: &mut dyn Write) -> CliResult<()> {
    let start = Instant::now();
    let source = read_net_source(&args.file)?;
    let (net, generator) = match source {
        NetSource::Net(net) => (net, None),
        NetSource::Generator(g) => (g.to_linear_net()?, Some(g)),
    };
    let mut reports: Vec<WafomReport> = Vec::new();
    match args.method {
        MethodArg::Dual => reports.push(wafom_dual(&net)?),
        MethodArg::Inversion => reports.push(wafom_inversion(&net)?),
        MethodArg::Sequential => {
            let g = generator.as_ref().ok_or_else(|| {
                CliError::Usage("the sequential method needs a wafom-gen v1 generator file".into())
            })?;
            reports.push(wafom_sequential(g));
        }
        MethodArg::All => {
            match wafom_dual(&net) {
                Ok(r) => reports.push(r),
                Err(Error::Capacity { .. }) => {}
                Err(e) => return Err(e.into()),
            }
            reports.push(wafom_inversion(&net)?);
            if let Some(g) = &generator {
                reports.push(wafom_sequential(g));
            }
        }
    }
    let mut csv = format!("{}\n", WafomReport::CSV_HEADER);
    for r in &reports {
        writeln!(csv, "{}", r.csv_row()).unwrap();
    }
    let mut manifest = RunManifest::new("wafom", None);
    manifest
        .set("file", args.file.display().to_string())
        .set("method", format!("{:?}", args.method).to_lowercase())
        .set("threads", threads);
    if args.method == MethodArg::All {
        let mut max_dev: f64 = 0.0;
        for (i, a) in reports.iter().enumerate() {
            for b in &reports[i + 1..] {
                max_dev = max_dev.max(relative_deviation(a.value, b.value));
            }
        }
        writeln!(csv, "# max_rel_deviation={}", fmt_f64(max_dev)).unwrap();
        manifest.result("max_rel_deviation", max_dev);
    }
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    emit_csv(None, &manifest, &csv, stdout)
}

/// Writes d<d>.net, d<d>.gen, d<d>.trace.csv and d<d>.manifest.json into `dir`.
fn write_search_outputs(
    dir: &Path,
    result: &SearchResult,
    manifest: &RunManifest,
) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    let stem = format!("d{}", result.d());
    fs::write(dir.join(format!("{stem}.net")), write_net(&result.net()))?;
    fs::write(
        dir.join(format!("{stem}.gen")),
        result.generator().to_file_string(),
    )?;
    fs::write(dir.join(format!("{stem}.trace.csv")), result.trace_csv())?;
    fs::write(
        dir.join(format!("{stem}.manifest.json")),
        manifest.to_json(),
    )?;
    Ok(())
}

fn search_manifest(config: &SearchConfig, result: &SearchResult, threads: usize) -> RunManifest {
    let mut m = RunManifest::new("search", Some(config.master_seed));
    m.set("d", config.d)
        .set("n", config.n)
        .set("S", config.s)
        .set("stage1", config.stage1_trials)
        .set("stage2", config.stage2_trials)
        .set("threads", threads);
    m.result("poly", result.poly.coeffs())
        .result("stage1_best_wafom", result.stage1_best_wafom)
        .result("best_wafom", result.best_wafom)
        .result("best_stage2_trial", result.best_trial);
    m
}

fn search_config(
    d: usize,
    n: usize,
    s: usize,
    stage1: usize,
    stage2: usize,
    seed: u64,
) -> CliResult<SearchConfig> {
    let config = SearchConfig::new(d, n, s)
        .with_budget(stage1, stage2)
        .with_seed(seed);
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

pub fn cmd_search(args: &SearchArgs, threads: usize, stdout: &mut dyn Write) -> CliResult<()> {
    let start = Instant::now();
    let config = search_config(args.d, args.n, args.s, args.stage1, args.stage2, args.seed)?;
    let result = search(&config)?;
    let mut manifest = search_manifest(&config, &result, threads);
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    write_search_outputs(&args.out, &result, &manifest)?;
    writeln!(stdout, "d,n,S,stage1_best_wafom,best_wafom")?;
    writeln!(
        stdout,
        "{},{},{},{},{}",
        config.d,
        config.n,
        config.s,
        fmt_f64(result.stage1_best_wafom),
        fmt_f64(result.best_wafom)
    )?;
    Ok(())
}

/// Ordinary least-squares slope of y against x.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn cmd_figure1(args: &Figure1Args, threads: usize, stdout: &mut dyn Write) -> CliResult<()> {
    let start = Instant::now();
    if args.dmin == 0 || args.dmin > args.dmax {
        return Err(CliError::Usage(format!(
            "need 1 ≤ dmin ≤ dmax, got {}..{}",
            args.dmin, args.dmax
        )));
    }
    let (stage1, stage2) = args.budget;
    let mut csv = String::from(
        "d,best_wafom,log2_best_wafom,sobol_wafom,log2_sobol_wafom,stage1_best_wafom\n",
    );
    let (mut ds, mut best_logs, mut sobol_logs) = (Vec::new(), Vec::new(), Vec::new());
    for d in args.dmin..=args.dmax {
        let config = search_config(d, args.n, args.s, stage1, stage2, args.seed)?;
        let result = search(&config)?;
        if let Some(dir) = &args.save_nets {
            let mut m = search_manifest(&config, &result, threads);
            m.wall_time_s = start.elapsed().as_secs_f64();
            write_search_outputs(dir, &result, &m)?;
        }
        let sobol = wafom_inversion(&sobol_net(d, args.s, args.n.min(32))?)?.value;
        writeln!(
            csv,
            "{d},{},{},{},{},{}",
            fmt_f64(result.best_wafom),
            fmt_f64(result.best_wafom.log2()),
            fmt_f64(sobol),
            fmt_f64(sobol.log2()),
            fmt_f64(result.stage1_best_wafom)
        )
        .unwrap();
        ds.push(d as f64);
        best_logs.push(result.best_wafom.log2());
        sobol_logs.push(sobol.log2());
    }
    let mut manifest = RunManifest::new("figure1", Some(args.seed));
    manifest
        .set("dmin", args.dmin)
        .set("dmax", args.dmax)
        .set("n", args.n)
        .set("S", args.s)
        .set("stage1", stage1)
        .set("stage2", stage2)
        .set("threads", threads);
    if ds.len() >= 2 {
        manifest
            .result("slope_log2_best_wafom", ols_slope(&ds, &best_logs))
            .result("slope_log2_sobol_wafom", ols_slope(&ds, &sobol_logs));
    }
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    emit_csv(args.out.as_deref(), &manifest, &csv, stdout)
}

fn param_map(params: &[(String, f64)]) -> BTreeMap<String, f64> {
    params.iter().cloned().collect()
}

fn build_integrand(
    kind: IntegrandArg,
    s: usize,
    n: usize,
    params: &[(String, f64)],
) -> CliResult<Integrand> {
    let map = param_map(params);
    match kind {
        IntegrandArg::Asian => {
            let mut map = map;
            if let Some(&v) = map.get("S") {
                if v != s as f64 {
                    return Err(
                        Error::Shape(format!("parameter S={v} but point sets have S={s}")).into(),
                    );
                }
            }
            map.insert("S".into(), s as f64);
            Ok(asian_integrand(
                AsianParams::default().with_overrides(&map)?,
            )?)
        }
        IntegrandArg::Constant => {
            let mut c = 1.0;
            for (k, &v) in &map {
                match k.as_str() {
                    "c" => c = v,
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown constant parameter '{other}'"
                        )))
                    }
                }
            }
            Ok(Integrand::constant(c, s))
        }
        IntegrandArg::Walsh => {
            let mut index = 1.0;
            for (k, &v) in &map {
                match k.as_str() {
                    "index" => index = v,
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown walsh parameter '{other}'"
                        )))
                    }
                }
            }
            if index < 0.0 || index.fract() != 0.0 {
                return Err(CliError::Usage(format!(
                    "walsh index must be a nonnegative integer, got {index}"
                )));
            }
            let a = NetPoint::from_index(index as u64, n, s)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Integrand::walsh(&a))
        }
    }
}

fn load_nets(dir: &Path) -> CliResult<Vec<(PathBuf, LinearNet, Option<u64>)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "net"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Usage(format!(
            "no *.net files in {}",
            dir.display()
        )));
    }
    paths
        .into_iter()
        .map(|p| {
            let net = parse_net(&fs::read_to_string(&p)?)?;
            let seed = fs::read_to_string(p.with_extension("manifest.json"))
                .ok()
                .and_then(|t| serde_json::from_str::<Value>(&t).ok())
                .and_then(|v| v.get("master_seed").and_then(Value::as_u64));
            Ok((p, net, seed))
        })
        .collect()
}

fn log2_error_slope(rows: &[ErrorCurveRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.abs_error > 0.0)
        .map(|r| (r.d as f64, r.abs_error.log2()))
        .collect();
    (pts.len() >= 2).then(|| {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        ols_slope(&x, &y)
    })
}

pub fn cmd_figure2(args: &Figure2Args, threads: usize, stdout: &mut dyn Write) -> CliResult<()> {
    let start = Instant::now();
    let loaded = load_nets(&args.nets)?;
    let s = loaded[0].1.s();
    let n = loaded[0].1.n();
    if let Some((p, net, _)) = loaded.iter().find(|(_, net, _)| net.s() != s) {
        return Err(
            Error::Shape(format!("{} has S={}, expected {s}", p.display(), net.s())).into(),
        );
    }
    let f = build_integrand(args.integrand, s, n, &args.params)?;
    let reference = match (args.integrand, f.exact_integral()) {
        (_, Some(v)) => v,
        (IntegrandArg::Asian, None) => {
            let params = AsianParams::default().with_overrides(f.params())?;
            let dims: Vec<usize> = (1..=s).collect();
            reference_price_with(&params, args.reference_log2, &dims)?
        }
        (_, None) => unreachable!("constant and walsh integrands have exact integrals"),
    };

    let nets: Vec<LinearNet> = loaded.iter().map(|(_, net, _)| net.clone()).collect();
    let mut searched = error_curve(&nets, &f, reference)?;
    for row in &mut searched {
        row.seed = loaded
            .iter()
            .find(|(_, net, _)| net.dim() == row.d)
            .and_then(|(_, _, s)| *s);
    }
    let mut ds: Vec<usize> = nets.iter().map(LinearNet::dim).collect();
    ds.sort_unstable();
    ds.dedup();

    let sobol_nets = ds
        .iter()
        .map(|&d| sobol_net(d, s, DEFAULT_DIGITS))
        .collect::<Result<Vec<_>, _>>()?;
    let sobol = error_curve(&sobol_nets, &f, reference)?;
    let halton_sets: Vec<(usize, Vec<Vec<f64>>)> =
        ds.iter().map(|&d| (d, halton_points(1 << d, s))).collect();
    let halton = error_curve_points(&halton_sets, &f, reference)?;
    let faure_sets: Vec<(usize, Vec<Vec<f64>>)> =
        ds.iter().map(|&d| (d, faure_points(1 << d, s))).collect();
    let faure = error_curve_points(&faure_sets, &f, reference)?;

    fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new("figure2", None);
    manifest
        .set("nets", args.nets.display().to_string())
        .set("integrand", f.name())
        .set("params", f.params())
        .set("reference_log2", args.reference_log2)
        .set("threads", threads);
    manifest.result("reference", reference);
    for (name, rows) in [
        ("searched", &searched),
        ("sobol", &sobol),
        ("halton", &halton),
        ("faure", &faure),
    ] {
        fs::write(args.out.join(format!("{name}.csv")), error_curve_csv(rows))?;
        if let Some(slope) = log2_error_slope(rows) {
            manifest.result(&format!("slope_log2_error_{name}"), slope);
        }
    }
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    fs::write(args.out.join("figure2.manifest.json"), manifest.to_json())?;
    writeln!(stdout, "family,d,abs_error")?;
    for (name, rows) in [
        ("searched", &searched),
        ("sobol", &sobol),
        ("halton", &halton),
        ("faure", &faure),
    ] {
        for r in rows {
            writeln!(stdout, "{name},{},{}", r.d, fmt_f64(r.abs_error))?;
        }
    }
    Ok(())
}

pub fn cmd_spectrum(args: &SpectrumArgs, threads: usize, stdout: &mut dyn Write) -> CliResult<()> {
    let start = Instant::now();
    if args.n == 0 || args.s == 0 {
        return Err(CliError::Usage("n and S must be positive".into()));
    }
    if args.n * args.s > SPECTRUM_MAX_DIGITS {
        return Err(Error::Capacity {
            what: "Walsh spectrum",
            log2_size: args.n * args.s,
            cap: SPECTRUM_MAX_DIGITS,
        }
        .into());
    }
    let f = build_integrand(args.integrand, args.s, args.n, &args.params)?;
    let rows = walsh_spectrum(&f, args.n, args.s)?;
    let mut csv = String::from("index,mu,abs_fhat\n");
    for r in &rows {
        writeln!(csv, "{},{},{}", r.index, r.mu, fmt_f64(r.abs_coeff)).unwrap();
    }
    let mut manifest = RunManifest::new("spectrum", None);
    manifest
        .set("n", args.n)
        .set("S", args.s)
        .set("integrand", f.name())
        .set("params", f.params())
        .set("threads", threads);
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    emit_csv(args.out.as_deref(), &manifest, &csv, stdout)
}
