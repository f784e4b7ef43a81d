//! `tensor-rigidity`: generate masks, certify them, and run sweeps.
//!
//! Exit codes: 0 on success, 2 on configuration errors (bad flags, unreadable
//! or malformed input), 3 when a size guard refuses the computation.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tensor_rigidity::completion::{crosscheck, SolverConfig};
use tensor_rigidity::experiments::{md_statistics, threshold_sweep, write_records_csv, write_rows_csv};
use tensor_rigidity::hypergraph::{gnm, gnp, md_process, random_dtree};
use tensor_rigidity::identifiability::global_rigid;
use tensor_rigidity::{
    Certificate, ExperimentError, FieldKind, Grid, HypergraphError, IdentifiabilityError, PartiteHypergraph,
    RigidityOptions, SweepConfig,
};

#[derive(Parser)]
#[command(name = "tensor-rigidity", version, about = "Rigidity certificates for low-rank tensor completion masks")]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random trials (meaning depends on the subcommand).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format. Graph-producing commands write the plain-text edge list for `csv`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for FieldKind {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => FieldKind::Real,
            FieldArg::Complex => FieldKind::Complex,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random mask from K^k_n.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Exactly m uniformly random edges.
        #[arg(long, conflicts_with_all = ["p", "md"])]
        m: Option<u64>,
        /// Each edge independently with probability p.
        #[arg(long, conflicts_with = "md")]
        p: Option<f64>,
        /// Random insertion until the minimum degree reaches this value.
        #[arg(long)]
        md: Option<usize>,
    },
    /// Evaluate every rigidity certificate of a mask.
    Certify {
        /// Mask file, JSON or plain-text edge list.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
    },
    /// Monte Carlo sweep over sizes and edge counts.
    Sweep {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Comma-separated part sizes n.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma-separated edge counts.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["p", "at_threshold"])]
        m: Vec<u64>,
        /// Comma-separated edge probabilities.
        #[arg(long, value_delimiter = ',', conflicts_with = "at_threshold")]
        p: Vec<f64>,
        /// Evaluate at the stopping times M_d and M_{d+1} of one trace.
        #[arg(long)]
        at_threshold: bool,
        /// Certificates to evaluate: local, global_1d, mm, co.
        #[arg(long, value_delimiter = ',', default_value = "local,global_1d")]
        cert: Vec<String>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Distribution of the minimum-degree stopping time M_d.
    MdStats {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Cross-check the real certificate against numerical completion.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 50)]
        starts: usize,
    },
    /// Random k-partite d-tree with the given part sizes.
    Dtree {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        d: usize,
        /// Comma-separated target part sizes (one per part).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
}

/// One trial of `md-stats --format csv`.
#[derive(serde::Serialize)]
struct MdRow {
    trial: usize,
    m_d: usize,
    density: f64,
}

enum CliError {
    Config(String),
    Guard(String),
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Output(_) => 1,
        }
    }
}

impl From<HypergraphError> for CliError {
    fn from(e: HypergraphError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<IdentifiabilityError> for CliError {
    fn from(e: IdentifiabilityError) -> Self {
        match e {
            IdentifiabilityError::Guard(m) => CliError::Guard(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Guard(m) => CliError::Guard(m),
            ExperimentError::Output(m) => CliError::Output(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

fn read_graph(path: &PathBuf) -> Result<PartiteHypergraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(PartiteHypergraph::parse(&text)?)
}

fn graph_output(g: &PartiteHypergraph, format: Format) -> Vec<u8> {
    match format {
        Format::Json => format!("{}\n", g.to_json()).into_bytes(),
        Format::Csv => g.to_text().into_bytes(),
    }
}

fn json_line(v: &impl serde::Serialize) -> Vec<u8> {
    let mut s = serde_json::to_string(v).expect("serialisable");
    s.push('\n');
    s.into_bytes()
}

fn run(cli: Cli) -> Result<Vec<u8>, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Gen { n, k, m, p, md } => {
            let g = match (m, p, md) {
                (Some(m), None, None) => gnm(n, k, m, cli.seed)?,
                (None, Some(p), None) => gnp(n, k, p, cli.seed)?,
                (None, None, Some(d)) => {
                    let trace = md_process(n, k, d, cli.seed)?;
                    trace.graph_at(trace.m_d)
                }
                _ => return Err(CliError::Config("give exactly one of --m, --p, --md".into())),
            };
            Ok(graph_output(&g, format))
        }
        Command::Dtree { k, d, sizes } => Ok(graph_output(&random_dtree(k, d, &sizes, cli.seed)?, format)),
        Command::Certify { graph, d, field } => {
            if d == 0 {
                return Err(CliError::Config("--d must be at least 1".into()));
            }
            let g = read_graph(&graph)?;
            let opts = RigidityOptions { trials: cli.trials.unwrap_or(3).max(1), ..RigidityOptions::with_seed(cli.seed) };
            let cert = global_rigid(&g, d, field.into(), &opts)?;
            Ok(match format {
                Format::Json => json_line(&cert),
                Format::Csv => {
                    let row = json!({
                        "d": cert.d,
                        "field": cert.field,
                        "local_1d": cert.local_1d,
                        "global_1d_real": cert.global_1d_real,
                        "global_1d_complex": cert.global_1d_complex,
                        "mm_i": cert.mm.i,
                        "mm_ii": cert.mm.ii,
                        "mm_iii": cert.mm.iii,
                        "co": cert.co,
                        "verdict": cert.verdict,
                        "min_degree": cert.evidence.min_degree,
                        "jacobian_rank": cert.evidence.jacobian_rank,
                        "stack_rank": cert.evidence.stack_rank,
                        "co_stack_rank": cert.evidence.co_stack_rank,
                    });
                    let obj = row.as_object().expect("object");
                    let cell = |v: &serde_json::Value| match v {
                        serde_json::Value::String(s) => s.clone(),
                        serde_json::Value::Null => String::new(),
                        other => other.to_string(),
                    };
                    let header: Vec<&str> = obj.keys().map(String::as_str).collect();
                    let values: Vec<String> = obj.values().map(cell).collect();
                    format!("{}\n{}\n", header.join(","), values.join(",")).into_bytes()
                }
            })
        }
        Command::Sweep { k, d, n, m, p, at_threshold, cert, threads } => {
            let grid = if at_threshold {
                Grid::AtThreshold
            } else if !m.is_empty() {
                Grid::Edges(m)
            } else if !p.is_empty() {
                Grid::Probabilities(p)
            } else {
                return Err(CliError::Config("give --m, --p or --at-threshold".into()));
            };
            let certificates =
                cert.iter().map(|c| c.parse::<Certificate>()).collect::<Result<Vec<_>, _>>()?;
            let mut cfg = SweepConfig::new(k, d, n, grid, cli.trials.unwrap_or(20), certificates, cli.seed);
            cfg.threads = threads;
            let records = threshold_sweep(&cfg)?;
            let mut buf = Vec::new();
            match format {
                Format::Json => buf = json_line(&records),
                Format::Csv => write_records_csv(&records, &mut buf)?,
            }
            Ok(buf)
        }
        Command::MdStats { n, k, d } => {
            let s = md_statistics(n, k, d, cli.trials.unwrap_or(100), cli.seed)?;
            let mut buf = Vec::new();
            match format {
                Format::Json => buf = json_line(&s),
                Format::Csv => {
                    let total = (n as f64).powi(k as i32);
                    let rows: Vec<MdRow> =
                        s.m_d.iter().enumerate().map(|(trial, &m_d)| MdRow { trial, m_d, density: m_d as f64 / total }).collect();
                    write_rows_csv(&rows, &mut buf)?;
                }
            }
            Ok(buf)
        }
        Command::Oracle { graph, d, starts } => {
            if d == 0 || starts == 0 {
                return Err(CliError::Config("--d and --starts must be at least 1".into()));
            }
            let g = read_graph(&graph)?;
            let cfg = SolverConfig { starts, ..Default::default() };
            let report = crosscheck(&g, d, cli.trials.unwrap_or(5), &cfg, cli.seed)?;
            let mut buf = Vec::new();
            match format {
                Format::Json => buf = json_line(&report),
                Format::Csv => write_rows_csv(&report.trials, &mut buf)?,
            }
            Ok(buf)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli).and_then(|bytes| match out {
        Some(path) => fs::write(&path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(&bytes).map_err(CliError::from),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::Config(m) => ("configuration error", m),
                CliError::Guard(m) => ("size guard", m),
                CliError::Output(m) => ("output error", m),
            };
            eprintln!("tensor-rigidity: {kind}: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
