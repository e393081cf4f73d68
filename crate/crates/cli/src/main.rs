//! `symspace`: command-line front end for the generalized polar
//! decomposition, the self-checks, the composition schemes and the PDE
//! experiments.
//!
//! Exit codes: 0 on success, 1 on a numerical failure, 2 on a usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symspace_core::experiments::{
    run_compose, run_experiment, write_compose_csv, write_rows_csv, ComposeConfig, ComposeScheme,
    ExperimentConfig, ExperimentId,
};
use symspace_core::gpd::generalized_polar;
use symspace_core::involutions::Involution;
use symspace_core::matcore::{read_matrix, write_matrix};
use symspace_core::series::TruncationOrder;
use symspace_core::verify::{run_suite, Suite};
use symspace_core::Error;

/// Environment variable supplying the default RNG seed.
const SEED_VAR: &str = "SYMSPACE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "symspace",
    version,
    about = "Generalized polar decompositions and symmetric compositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor a matrix as x = p·k with σ(p) = p⁻¹ and σ(k) = k.
    Polar {
        /// Matrix file (whitespace-separated rows).
        #[arg(long)]
        input: PathBuf,
        /// Involution: transpose-inverse, conjugate or inner:<matrix-file>.
        #[arg(long)]
        sigma: String,
        /// Truncation order of the commutator series (1–4).
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=4))]
        order: u32,
        /// Output prefix; writes <prefix>.p and <prefix>.k.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in numerical self-checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// RNG seed (defaults to $SYMSPACE_SEED, else 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Also print every individual check.
        #[arg(long, short)]
        verbose: bool,
    },
    /// Measure a composition scheme on an ODE test problem.
    Compose {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// Highest composition level (level 0 is the base method).
        #[arg(long, default_value_t = 3)]
        levels: u32,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        /// Largest step of the ladder hmax·2^{-i}.
        #[arg(long, default_value_t = 0.1)]
        hmax: f64,
        #[arg(long, default_value_t = 5)]
        rungs: usize,
        /// CSV output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the two PDE experiments.
    Experiment {
        #[arg(value_enum)]
        name: ExperimentArg,
        /// Points per dimension.
        #[arg(long)]
        grid: Option<usize>,
        /// Half-width of the periodic box [-L, L)².
        #[arg(long = "L")]
        half_width: Option<f64>,
        /// Grid spacing; overrides --grid.
        #[arg(long)]
        delta: Option<f64>,
        /// altdir: forward-Euler step; stiff: top rung of the ladder.
        #[arg(long)]
        h: Option<f64>,
        /// altdir: top rung of the Heun ladder.
        #[arg(long)]
        hmax: Option<f64>,
        #[arg(long)]
        rungs: Option<usize>,
        /// altdir: highest Thue–Morse level.
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long)]
        tend: Option<f64>,
        /// RNG seed (defaults to $SYMSPACE_SEED, else 0).
        #[arg(long)]
        seed: Option<u64>,
        /// CSV output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Scovel,
    Tm,
    Yoshida,
    Selfadjoint,
}

impl From<SchemeArg> for ComposeScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Scovel => ComposeScheme::Scovel,
            SchemeArg::Tm => ComposeScheme::ThueMorse,
            SchemeArg::Yoshida => ComposeScheme::Yoshida,
            SchemeArg::Selfadjoint => ComposeScheme::SelfAdjoint,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemArg {
    Harmonic,
    LinearSym,
    So3,
}

impl ProblemArg {
    fn name(self) -> &'static str {
        match self {
            ProblemArg::Harmonic => "harmonic",
            ProblemArg::LinearSym => "linear-sym",
            ProblemArg::So3 => "so3",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Altdir,
    Stiff,
}

impl From<ExperimentArg> for ExperimentId {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::Altdir => ExperimentId::Altdir,
            ExperimentArg::Stiff => ExperimentId::Stiff,
        }
    }
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    /// Ran fine but some checks failed; the report is already printed.
    ChecksFailed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) | Failure::ChecksFailed => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::UnsupportedOrder { .. }
            | Error::Parse(_)
            | Error::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn seed_or_env(seed: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

/// Opens `path` for writing, or stdout when absent.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Usage(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn polar(input: &Path, sigma: &str, order: u32, out: &Path) -> Result<(), Failure> {
    let order = TruncationOrder::new(order)?;
    let inv = Involution::from_id(sigma)?;
    let x = read_matrix(input)?;
    let f = generalized_polar(&x, &inv, order)?;
    write_matrix(with_extension(out, "p"), &f.p_factor)?;
    write_matrix(with_extension(out, "k"), &f.k_factor)?;
    println!("residual={:.16e}", f.residual);
    Ok(())
}

fn verify(selection: &str, seed: Option<u64>, verbose: bool) -> Result<(), Failure> {
    let seed = seed_or_env(seed)?;
    let suites = Suite::parse_selection(selection)?;
    let mut all_ok = true;
    for suite in suites {
        let report = run_suite(suite, seed)?;
        let ok = report.passed();
        all_ok &= ok;
        println!("{} {suite}", if ok { "PASS" } else { "FAIL" });
        if verbose || !ok {
            for c in &report.checks {
                println!("    {c}");
            }
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

fn compose(cfg: ComposeConfig, out: Option<&Path>) -> Result<(), Failure> {
    let rows = run_compose(&cfg)?;
    let mut w = sink(out)?;
    write_compose_csv(&rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn experiment(mut cfg: ExperimentConfig, delta: Option<f64>) -> Result<(), Failure> {
    if let Some(d) = delta {
        cfg = cfg.with_delta(d)?;
    }
    cfg.validate()?;
    log::info!("running {} with {cfg:?}", cfg.experiment);
    let rows = run_experiment(&cfg)?;
    let mut w = sink(cfg.out.as_deref())?;
    write_rows_csv(&rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Polar {
            input,
            sigma,
            order,
            out,
        } => polar(&input, &sigma, order, &out),
        Command::Verify {
            suite,
            seed,
            verbose,
        } => verify(&suite, seed, verbose),
        Command::Compose {
            scheme,
            levels,
            problem,
            hmax,
            rungs,
            out,
        } => compose(
            ComposeConfig {
                scheme: scheme.into(),
                levels,
                problem: problem.name().into(),
                hmax,
                rungs,
            },
            out.as_deref(),
        ),
        Command::Experiment {
            name,
            grid,
            half_width,
            delta,
            h,
            hmax,
            rungs,
            levels,
            tend,
            seed,
            out,
        } => {
            let mut cfg = ExperimentConfig::default_for(name.into());
            if let Some(v) = grid {
                cfg.grid = v;
            }
            if let Some(v) = half_width {
                cfg.half_width = v;
            }
            if h.is_some() {
                cfg.h = h;
            }
            if let Some(v) = hmax {
                cfg.hmax = v;
            }
            if let Some(v) = rungs {
                cfg.rungs = v;
            }
            if let Some(v) = levels {
                cfg.levels = v;
            }
            if let Some(v) = tend {
                cfg.t_end = v;
            }
            cfg.seed = seed_or_env(seed)?;
            cfg.out = out;
            experiment(cfg, delta)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Numerical(m) => eprintln!("numerical error: {m}"),
                Failure::ChecksFailed => eprintln!("some checks failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
