use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entcov::linalg::DensityMatrix;
use entcov::states::{
    ghz, graph_state, schmidt_state, thermal_state, w_state, FieldKind, Graph, SchmidtParams, ThermalModel,
};
use entcov_cli::analyze::analyze;
use entcov_cli::graphs::{verify_graphs, DEFAULT_TOL};
use entcov_cli::scan::{scan_thermal, to_csv, Axis, ScanGrid};
use entcov_cli::sweep::random_sweep;
use entcov_cli::{emit, read_file, with_pool, CliError, CliResult};

#[derive(Parser)]
#[command(name = "entcov", version, about = "Covariance-matrix entanglement criteria for few-qubit states")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for random sweeps.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Margin below 1 that the SDP optimum must clear to count as detected.
    #[arg(long, global = true)]
    tol_detect: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every criterion on one state and print a JSON report.
    Analyze {
        #[command(subcommand)]
        source: Source,
    },
    /// Scan a thermal model over (kT, h) and write CSV.
    ScanThermal(ScanArgs),
    /// Detection fractions over random generalized-Schmidt states.
    RandomSweep {
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Check that graph states and their mimic states share all two-qubit
    /// reductions and that neither criterion detects the graph state.
    GraphVerify {
        /// Edge-list file (`n=<N>` header, then `i j` lines).
        file: Option<PathBuf>,
        /// Check every labeled connected graph on this many vertices instead.
        #[arg(long, conflicts_with = "file")]
        all_connected: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum Source {
    Ghz {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    W {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩, normalized.
    Schmidt {
        #[arg(long = "l", num_args = 5, required = true, allow_negative_numbers = true)]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
    Thermal {
        #[arg(long, default_value = "zxz")]
        model: FieldKind,
        #[arg(long)]
        kt: f64,
        #[arg(long)]
        h: f64,
    },
    /// Graph state from an edge-list file.
    Graph { file: PathBuf },
    /// Density matrix from a JSON file.
    File { path: PathBuf },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value = "zxz")]
    model: FieldKind,
    #[arg(long, default_value_t = 0.2)]
    kt_min: f64,
    #[arg(long, default_value_t = 10.0)]
    kt_max: f64,
    #[arg(long, default_value_t = 0.2)]
    kt_step: f64,
    #[arg(long, default_value_t = 0.0)]
    h_min: f64,
    #[arg(long, default_value_t = 14.0)]
    h_max: f64,
    #[arg(long, default_value_t = 0.2)]
    h_step: f64,
}

fn load_source(source: &Source) -> CliResult<(String, DensityMatrix)> {
    Ok(match source {
        Source::Ghz { n } => (format!("ghz(n={n})"), ghz(*n)?),
        Source::W { n } => (format!("w(n={n})"), w_state(*n)?),
        Source::Schmidt { lambdas, phi } => {
            let l: [f64; 5] = lambdas.as_slice().try_into().expect("clap enforces five values");
            (format!("schmidt(l={l:?}, phi={phi})"), schmidt_state(&SchmidtParams::normalized(l, *phi)?)?)
        }
        Source::Thermal { model, kt, h } => {
            (format!("thermal({model}, kT={kt}, h={h})"), thermal_state(&ThermalModel::new(*model, *h, *kt)?)?)
        }
        Source::Graph { file } => {
            let g = Graph::parse_edge_list(&read_file(file)?)?;
            (format!("graph({g})"), graph_state(&g)?)
        }
        Source::File { path } => (path.display().to_string(), entcov::io::density_from_json(&read_file(path)?)?),
    })
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn run(cli: Cli) -> CliResult<()> {
    let g = cli.global;
    let out = g.out.as_deref();
    match cli.command {
        Command::Analyze { source } => {
            let (label, rho) = load_source(&source)?;
            emit(out, &json(&analyze(&label, &rho, g.tol_detect)?))
        }
        Command::ScanThermal(a) => {
            let grid = ScanGrid::new(
                a.model,
                Axis::new(a.kt_min, a.kt_max, a.kt_step)?,
                Axis::new(a.h_min, a.h_max, a.h_step)?,
            )?;
            let rows = with_pool(g.jobs, || scan_thermal(&grid))?;
            emit(out, &to_csv(&rows))
        }
        Command::RandomSweep { count } => {
            let summary = with_pool(g.jobs, || random_sweep(count, g.seed))?;
            emit(out, &json(&summary))
        }
        Command::GraphVerify { file, all_connected, tol } => {
            let (graphs, single) = match (file, all_connected) {
                (Some(f), _) => (vec![Graph::parse_edge_list(&read_file(&f)?)?], true),
                (None, Some(n)) => (Graph::all_connected(n), false),
                (None, None) => {
                    return Err(
                        entcov::Error::InvalidParameter("give an edge-list file or --all-connected <n>".into()).into()
                    )
                }
            };
            let summary = with_pool(g.jobs, || verify_graphs(&graphs, tol, single))?;
            emit(out, &json(&summary))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entcov: {e}");
            ExitCode::from(CliError::exit_code(&e) as u8)
        }
    }
}
