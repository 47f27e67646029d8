use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::LevelFilter;

use sudsq::basis::gellmann_basis;
use sudsq::correlations::collective_bundle;
use sudsq::io::to_sorted_json;
use sudsq::many_body::NQuditState;
use sudsq::models::{HamiltonianSpec, ModelKind};
use sudsq::polytope::{coordinates, constraint_residual, vertices};
use sudsq::report::{evaluate, selftest, EvaluateOptions, Fault};
use sudsq::scan::{fig3_csv, fig3_data, fig3_sign_violations, limit_temperature, table, CriterionTag, ScanConfig};
use sudsq::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

#[derive(Parser)]
#[command(name = "sudsq", version, about = "su(d)-squeezing entanglement criteria for N-qudit states")]
struct Cli {
    /// Print progress information.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    SudSinglet,
    RandomCollective,
    Spin,
    SpinFerro,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::SudSinglet => ModelKind::SudSinglet,
            Model::RandomCollective => ModelKind::RandomCollective,
            Model::Spin => ModelKind::Spin,
            Model::SpinFerro => ModelKind::SpinFerro,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    Sud,
    Spin,
    Ppt,
}

impl From<Criterion> for CriterionTag {
    fn from(c: Criterion) -> Self {
        match c {
            Criterion::Sud => CriterionTag::Sud,
            Criterion::Spin => CriterionTag::Spin,
            Criterion::Ppt => CriterionTag::Ppt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InjectFault {
    BasisNormalization,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every criterion on a state file ({"d", "n", "rho"}).
    Evaluate {
        state: PathBuf,
        #[arg(long, default_value_t = sudsq::criteria::DETECTION_TOL)]
        tol: f64,
        /// Skip the PPT scan over bipartitions.
        #[arg(long)]
        no_ppt: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limit temperature of one criterion for a collective Hamiltonian.
    Scan {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        gamma: Option<f64>,
        /// Comma-separated coefficients for random-collective.
        #[arg(long, value_delimiter = ',')]
        c: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "sud")]
        criterion: Criterion,
        #[arg(long, default_value_t = 1e-3)]
        tmin: f64,
        #[arg(long, default_value_t = 20.0)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limit-temperature table 1, 2 or 3 as CSV.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagonal of 𝔘 for the three N=4 qutrit thermal states, as CSV.
    Fig3 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polytope vertices for a given ⟨G⟩, or for the ⟨G⟩ of a state file.
    Polytope {
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Comma-separated ⟨G_k⟩; zero if omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gexp: Option<Vec<f64>>,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        inject_fault: Option<InjectFault>,
    },
}

enum Failure {
    Usage(String),
    Input(String),
    Selftest(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_state(path: &PathBuf) -> Result<NQuditState, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let st = NQuditState::from_json(&text)?;
    Ok(st.clone().check_physical().unwrap_or(st))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Evaluate { state, tol, no_ppt, out } => {
            let st = read_state(&state)?;
            let report = evaluate(&st, &EvaluateOptions { tol, ppt: !no_ppt })?;
            emit(&(to_sorted_json(&report)? + "\n"), &out)
        }
        Command::Scan {
            model,
            n,
            d,
            gamma,
            c,
            criterion,
            tmin,
            tmax,
            grid,
            tol,
            seed,
            out,
        } => {
            let mut spec = HamiltonianSpec::new(model.into(), n, d);
            spec.gamma = gamma;
            spec.c = c;
            spec.seed = seed;
            let mut cfg = ScanConfig::new(spec, criterion.into());
            cfg.tmin = tmin;
            cfg.tmax = tmax;
            cfg.grid = grid;
            cfg.tol = tol;
            let result = limit_temperature(&cfg)?;
            let value = serde_json::json!({ "config": cfg, "result": result });
            emit(&(to_sorted_json(&value)? + "\n"), &out)
        }
        Command::Table { id, out } => emit(&table(id)?.to_csv(), &out),
        Command::Fig3 { out } => {
            let series = fig3_data()?;
            for v in fig3_sign_violations(&series) {
                log::warn!("{v}");
            }
            emit(&fig3_csv(&series), &out)
        }
        Command::Polytope { n, d, gexp, state, out } => {
            let (n, d, gexp, point) = match state {
                Some(path) => {
                    let st = read_state(&path)?;
                    let bundle = collective_bundle(&st, &gellmann_basis(st.d())?)?;
                    let p = coordinates(&bundle);
                    (st.n_sites(), st.d(), bundle.gexp.clone(), Some(p))
                }
                None => {
                    let n = n.ok_or_else(|| Failure::Usage("polytope needs --N or --state".into()))?;
                    let g = gexp.unwrap_or_else(|| vec![0.0; d * d - 1]);
                    (n, d, g, None)
                }
            };
            let spec = vertices(&gexp, n, d)?;
            let mut value = spec.to_json_value();
            if let Some(p) = point {
                value["state_coordinates"] = serde_json::json!(p.coords);
                value["state_constraint_residual"] = serde_json::json!(constraint_residual(&p, &gexp, n));
            }
            emit(&(to_sorted_json(&value)? + "\n"), &out)
        }
        Command::Selftest { seed, inject_fault } => {
            let fault = inject_fault.map(|InjectFault::BasisNormalization| Fault::BasisNormalization);
            let report = selftest(seed, fault);
            print!("{}", report.summary());
            if report.passed() {
                Ok(())
            } else {
                let names: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
                Err(Failure::Selftest(format!("failed checks: {}", names.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose { LevelFilter::Info } else { LevelFilter::Warn })
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Selftest(m)) => {
            eprintln!("{m}");
            ExitCode::from(EXIT_SELFTEST)
        }
    }
}
