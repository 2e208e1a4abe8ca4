//! `hyperclus`: build EDVW hypergraphs from CSV, cluster them, verify the
//! spectral bounds on random instances, and benchmark methods.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage or input error,
//! 3 disconnected hypergraph, 4 non-convergence.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperclus::expansions::StarWeighting;
use hyperclus::hypergraph::EdvwHypergraph;
use hyperclus::ingestion::{
    apply_gamma_file, assign_edvw, featurize, load_csv, read_edvw_file, read_labels, write_edvw_file,
    write_labels, DatasetSchema,
};
use hyperclus::oracle::{verify, Property, VerifyConfig};
use hyperclus::pipeline::{run, Method, RunOptions, RunReport, REPORT_KEYS};
use hyperclus::spectral::KwayStrategy;
use hyperclus::Error;

#[derive(Parser)]
#[command(name = "hyperclus", version, about = "Spectral clustering of EDVW hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a labeled CSV into an .edvw hypergraph.
    Convert {
        csv: PathBuf,
        schema: PathBuf,
        out: PathBuf,
        /// `labels` (class counts), `unit` (all ones) or `file=PATH`
        /// (lines `edge vertex gamma` over unit weights).
        #[arg(long, default_value = "labels")]
        edvw: EdvwMode,
        /// Also write the class id of every row, one per line.
        #[arg(long)]
        truth_out: Option<PathBuf>,
    },
    /// Cluster an .edvw hypergraph.
    Cluster {
        edvw: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "hyperclus-g", value_parser = parse_method)]
        method: Method,
        #[arg(long, default_value = "best", value_parser = parse_strategy)]
        strategy: KwayStrategy,
        /// Labels file, one cluster id per line.
        #[arg(long)]
        out: PathBuf,
        /// Report file, `key<TAB>value` lines.
        #[arg(long)]
        report: PathBuf,
        /// Class ids of the vertices, enabling the F1 fields.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Dataset id written to the report (default: file stem).
        #[arg(long)]
        dataset: Option<String>,
        /// Record wall time instead of `NA` (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum, default_value_t = StarWeightingArg::Edge)]
        star_weighting: StarWeightingArg,
    },
    /// Check the spectral identities and bounds on seeded random hypergraphs.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true, value_parser = parse_property)]
        inject_fault: Option<Property>,
    },
    /// Run every method on every .edvw file of a directory.
    Bench {
        dir: PathBuf,
        /// Lines `dataset k strategy`; unlisted datasets use k = 2.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Debug)]
enum EdvwMode {
    Labels,
    Unit,
    File(PathBuf),
}

impl std::str::FromStr for EdvwMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "labels" => Ok(EdvwMode::Labels),
            "unit" => Ok(EdvwMode::Unit),
            _ => match s.strip_prefix("file=") {
                Some(path) if !path.is_empty() => Ok(EdvwMode::File(path.into())),
                _ => Err(format!("expected labels, unit or file=PATH, got {s:?}")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StarWeightingArg {
    /// ω(e)
    Edge,
    /// ω(e)/|e|
    Size,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_strategy(s: &str) -> Result<KwayStrategy, String> {
    s.parse()
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse()
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Disconnected { .. } | Error::DisconnectedSpectrum { .. } => 3,
            Error::NotConverged { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert {
            csv,
            schema,
            out,
            edvw,
            truth_out,
        } => cmd_convert(&csv, &schema, &out, &edvw, truth_out.as_deref()),
        Command::Cluster {
            edvw,
            k,
            method,
            strategy,
            out,
            report,
            truth,
            dataset,
            timing,
            star_weighting,
        } => {
            let mut opts = RunOptions::new(method, k, strategy);
            opts.star_weighting = match star_weighting {
                StarWeightingArg::Edge => StarWeighting::EdgeWeight,
                StarWeightingArg::Size => StarWeighting::SizeNormalized,
            };
            cmd_cluster(&edvw, &opts, &out, &report, truth.as_deref(), dataset, timing)
        }
        Command::Verify {
            n_max,
            trials,
            seed,
            inject_fault,
        } => cmd_verify(&VerifyConfig {
            n_max,
            trials,
            seed,
            fault: inject_fault,
        }),
        Command::Bench { dir, config, timing } => cmd_bench(&dir, config.as_deref(), timing),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_convert(csv: &Path, schema: &Path, out: &Path, mode: &EdvwMode, truth_out: Option<&Path>) -> Result<(), Failure> {
    let schema = DatasetSchema::from_path(schema)?;
    let table = load_csv(csv, &schema).map_err(|e| with_path(csv, e))?;
    let unit = featurize(&table, &schema)?;
    let h = match mode {
        EdvwMode::Labels => assign_edvw(&unit, &table.labels)?,
        EdvwMode::Unit => unit,
        EdvwMode::File(path) => apply_gamma_file(&unit, path).map_err(|e| with_path(path, e))?,
    };
    write_edvw_file(&h, out)?;
    if let Some(path) = truth_out {
        write_file(path, |w| write_labels(&table.labels, w))?;
    }
    log::info!(
        "{}: {} vertices, {} hyperedges, {} connections",
        out.display(),
        h.n_vertices(),
        h.n_edges(),
        h.n_connections()
    );
    Ok(())
}

/// Parse errors carry only a line number; prefix the file they came from.
fn with_path(path: &Path, e: Error) -> Failure {
    let mut f = Failure::from(e);
    if !f.message.contains(&path.display().to_string()) {
        f.message = format!("{}: {}", path.display(), f.message);
    }
    f
}

fn cmd_cluster(
    edvw: &Path,
    opts: &RunOptions,
    out: &Path,
    report_path: &Path,
    truth: Option<&Path>,
    dataset: Option<String>,
    timing: bool,
) -> Result<(), Failure> {
    let h = read_edvw_file(edvw).map_err(|e| with_path(edvw, e))?;
    let truth = truth.map(read_truth).transpose()?;
    let dataset = dataset.unwrap_or_else(|| dataset_id(edvw));
    let (part, mut report) = run(&h, &dataset, truth.as_deref(), opts)?;
    if !timing {
        report.seconds = None;
    }
    write_file(out, |w| write_labels(part.labels(), w))?;
    write_file(report_path, |w| w.write_all(report.to_key_values().as_bytes()))?;
    Ok(())
}

fn cmd_verify(config: &VerifyConfig) -> Result<(), Failure> {
    let report = verify(config)?;
    print!("{report}");
    if report.all_passed() {
        println!("all properties hold on {} instances", report.trials);
        Ok(())
    } else {
        let failing: Vec<&str> = report
            .outcomes
            .iter()
            .filter(|o| !o.passed())
            .map(|o| o.property.name())
            .collect();
        Err(Failure {
            code: 1,
            message: if failing.is_empty() {
                "some instances could not be analysed".to_string()
            } else {
                format!("property failure: {}", failing.join(", "))
            },
        })
    }
}

fn cmd_bench(dir: &Path, config: Option<&Path>, timing: bool) -> Result<(), Failure> {
    let runs = match config {
        Some(path) => read_bench_config(path)?,
        None => Vec::new(),
    };
    let mut datasets: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_failure(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "edvw"))
        .collect();
    datasets.sort();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let emit = |out: &mut std::io::StdoutLock, line: String| writeln!(out, "{line}").map_err(|e| io_failure(Path::new("<stdout>"), e));
    emit(&mut out, REPORT_KEYS.join("\t"))?;
    if datasets.is_empty() {
        log::warn!("no .edvw files in {}", dir.display());
        eprintln!("warning: no .edvw files in {}", dir.display());
        return Ok(());
    }
    for path in datasets {
        let name = dataset_id(&path);
        let settings: Vec<(usize, KwayStrategy)> = {
            let listed: Vec<_> = runs.iter().filter(|r| r.0 == name).map(|r| (r.1, r.2)).collect();
            if listed.is_empty() { vec![(2, KwayStrategy::Best)] } else { listed }
        };
        let loaded = load_bench_dataset(&path);
        for (k, strategy) in settings {
            for method in Method::ALL {
                let row = match &loaded {
                    Ok((h, truth)) => bench_row(h, &name, truth.as_deref(), method, k, strategy, timing),
                    Err(message) => Err(message.clone()),
                };
                let line = row.unwrap_or_else(|message| {
                    eprintln!("{name} {method} k={k}: {message}");
                    failed_row(&name, method, k, strategy)
                });
                emit(&mut out, line)?;
            }
        }
    }
    Ok(())
}

/// The hypergraph and, when a sibling `.labels` file exists, its classes.
fn load_bench_dataset(path: &Path) -> Result<(EdvwHypergraph, Option<Vec<usize>>), String> {
    let h = read_edvw_file(path).map_err(|e| e.to_string())?;
    let truth_path = path.with_extension("labels");
    let truth = if truth_path.exists() {
        Some(read_truth(&truth_path).map_err(|f| f.message)?)
    } else {
        None
    };
    Ok((h, truth))
}

fn bench_row(
    h: &EdvwHypergraph,
    name: &str,
    truth: Option<&[usize]>,
    method: Method,
    k: usize,
    strategy: KwayStrategy,
    timing: bool,
) -> Result<String, String> {
    let (_, mut report): (_, RunReport) =
        run(h, name, truth, &RunOptions::new(method, k, strategy)).map_err(|e| e.to_string())?;
    if !timing {
        report.seconds = None;
    }
    Ok(report.to_row())
}

fn failed_row(name: &str, method: Method, k: usize, strategy: KwayStrategy) -> String {
    let mut fields = vec![name.to_string(), method.to_string(), k.to_string(), strategy.name().to_string(), "FAILED".to_string()];
    fields.resize(REPORT_KEYS.len(), "NA".to_string());
    fields.join("\t")
}

fn read_bench_config(path: &Path) -> Result<Vec<(String, usize, KwayStrategy)>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut runs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Failure {
            code: 2,
            message: format!("{}: line {}: {msg}", path.display(), i + 1),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [name, k, strategy] = fields.as_slice() else {
            return Err(bad("expected `dataset k strategy`".to_string()));
        };
        let k = k.parse().map_err(|_| bad(format!("bad k {k:?}")))?;
        let strategy = strategy.parse().map_err(bad)?;
        runs.push((name.to_string(), k, strategy));
    }
    Ok(runs)
}

fn read_truth(path: &Path) -> Result<Vec<usize>, Failure> {
    let file = fs::File::open(path).map_err(|e| io_failure(path, e))?;
    read_labels(BufReader::new(file)).map_err(|e| with_path(path, e))
}

fn dataset_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned())
}

fn write_file(path: &Path, body: impl FnOnce(&mut std::io::BufWriter<fs::File>) -> std::io::Result<()>) -> Result<(), Failure> {
    let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure(path, e))
}
