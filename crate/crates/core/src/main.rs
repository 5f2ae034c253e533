use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use schwinger_thermal::config::{
    resolve_model, resolve_optimizer, FileConfig, ModelOverrides, OptimizerOverrides,
};
use schwinger_thermal::optimizer::{minimize, ObjectiveSpec, OptimizerKind};
use schwinger_thermal::oracle::{string_tension_from_free_energies, Spectrum};
use schwinger_thermal::schwinger::GaussLawForm;
use schwinger_thermal::sweep::{run_study, StudyKind, SweepConfig, SweepMode};
use schwinger_thermal::{Error, Result};

/// Variational thermal simulation of the lattice Schwinger model:
/// Gibbs-state preparation, free energies, and string tension sweeps.
#[derive(Parser)]
#[command(name = "schwinger-thermal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hamiltonian term dump: one `<coefficient> <string>` line
    /// per Pauli term.
    Terms(TermsArgs),
    /// Exact Gibbs thermodynamics over a β (or T) grid as CSV rows
    /// `beta,F,E,S,sigma`.
    Exact(ExactArgs),
    /// Run one variational free-energy minimization.
    Optimize(OptimizeArgs),
    /// Parameter sweeps emitting the experiment tables.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ModelFlags {
    /// TOML config file (flags override file values).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of lattice sites N (even).
    #[arg(long)]
    n: Option<usize>,
    /// Fermion mass m.
    #[arg(long)]
    m: Option<f64>,
    /// Coupling g.
    #[arg(long)]
    g: Option<f64>,
    /// Lattice spacing a (hopping is 1/(2a)).
    #[arg(long)]
    a: Option<f64>,
    /// Hopping strength; alternative to --a.
    #[arg(long)]
    hopping: Option<f64>,
}

impl ModelFlags {
    fn file(&self) -> Result<FileConfig> {
        match &self.config {
            Some(path) => FileConfig::load(path),
            None => Ok(FileConfig::default()),
        }
    }

    fn overrides(&self, epsilon: Option<f64>, mu: Option<f64>) -> ModelOverrides {
        ModelOverrides {
            n: self.n,
            m: self.m,
            g: self.g,
            a: self.a,
            hopping: self.hopping,
            epsilon,
            mu,
        }
    }
}

#[derive(Args)]
struct OptimizerFlags {
    /// Independent optimizer restarts.
    #[arg(long)]
    restarts: Option<usize>,
    /// Iteration cap per restart.
    #[arg(long)]
    max_iters: Option<usize>,
    /// Convergence tolerance on |ΔF| over a 25-iteration window.
    #[arg(long)]
    tol: Option<f64>,
    /// Optimizer step size.
    #[arg(long)]
    step: Option<f64>,
    /// Optimization method.
    #[arg(long, value_enum)]
    optimizer: Option<OptimizerArg>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl OptimizerFlags {
    fn overrides(&self, depth: Option<usize>) -> OptimizerOverrides {
        OptimizerOverrides {
            depth,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            step: self.step,
            optimizer: self.optimizer.map(OptimizerArg::into_kind),
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OptimizerArg {
    Gradient,
    Simplex,
}

impl OptimizerArg {
    fn into_kind(self) -> OptimizerKind {
        match self {
            OptimizerArg::Gradient => OptimizerKind::Gradient,
            OptimizerArg::Simplex => OptimizerKind::Simplex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GaussLawArg {
    HalfFactor,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Variational,
    Exact,
    Both,
}

impl ModeArg {
    fn into_mode(self) -> SweepMode {
        match self {
            ModeArg::Variational => SweepMode::Variational,
            ModeArg::Exact => SweepMode::Exact,
            ModeArg::Both => SweepMode::Both,
        }
    }
}

#[derive(Args)]
struct TermsArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Background field ε.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Chemical potential μ.
    #[arg(long)]
    mu: Option<f64>,
    /// Gauss-law convention of the electric term.
    #[arg(long, value_enum)]
    gauss_law: Option<GaussLawArg>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Background field ε.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Chemical potential μ.
    #[arg(long)]
    mu: Option<f64>,
    /// Comma-separated β grid (exactly one of --beta/--t).
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    /// Comma-separated T grid.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    optimizer: OptimizerFlags,
    /// Background field ε.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Chemical potential μ.
    #[arg(long)]
    mu: Option<f64>,
    /// Inverse temperature β.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Circuit depth p.
    #[arg(long)]
    depth: Option<usize>,
    /// Write the optimized ansatz parameters as JSON.
    #[arg(long)]
    params_out: Option<PathBuf>,
    /// Print the full result as JSON instead of a text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(subcommand)]
    study: StudyCommand,
}

#[derive(Subcommand)]
enum StudyCommand {
    /// Free-energy convergence versus circuit depth (grid over β and p).
    Convergence(StudyFlags),
    /// String tension versus temperature (grid over β or T, and ε).
    Tension(StudyFlags),
    /// String tension over the (T, μ) plane at fixed ε.
    Surface(StudyFlags),
}

#[derive(Args)]
struct StudyFlags {
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    optimizer: OptimizerFlags,
    /// Comma-separated β grid (exactly one of --beta/--t).
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    /// Comma-separated T grid.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    /// Comma-separated ε grid.
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    /// Comma-separated μ grid.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    /// Comma-separated circuit-depth grid.
    #[arg(long, value_delimiter = ',')]
    depth: Option<Vec<usize>>,
    /// What to compute per grid point.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Output CSV path (a JSON audit sidecar is written next to it).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker-pool size.
    #[arg(long)]
    workers: Option<usize>,
    /// Grid-size budget.
    #[arg(long)]
    max_points: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::InvalidParams(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Terms(args) => run_terms(args),
        Command::Exact(args) => run_exact(args),
        Command::Optimize(args) => run_optimize(args),
        Command::Sweep(args) => match args.study {
            StudyCommand::Convergence(flags) => run_sweep(StudyKind::Convergence, flags),
            StudyCommand::Tension(flags) => run_sweep(StudyKind::Tension, flags),
            StudyCommand::Surface(flags) => run_sweep(StudyKind::Surface, flags),
        },
    }
}

fn run_terms(args: TermsArgs) -> Result<()> {
    let file = args.model.file()?;
    let params = resolve_model(&file.model, &args.model.overrides(args.epsilon, args.mu))?;
    let form = match args.gauss_law {
        Some(GaussLawArg::Literal) => GaussLawForm::Literal,
        Some(GaussLawArg::HalfFactor) => GaussLawForm::HalfFactor,
        None => file.model.gauss_law.unwrap_or_default(),
    };
    print!("{}", params.hamiltonian_with(form));
    Ok(())
}

fn run_exact(args: ExactArgs) -> Result<()> {
    let file = args.model.file()?;
    let params = resolve_model(&file.model, &args.model.overrides(args.epsilon, args.mu))?;

    let betas: Vec<f64> = match (args.beta, args.t) {
        (Some(b), None) => b,
        (None, Some(t)) => t.iter().map(|&t| 1.0 / t).collect(),
        (Some(_), Some(_)) => {
            return Err(Error::Config("supply exactly one of --beta and --t".into()))
        }
        (None, None) => {
            return Err(Error::Config(
                "supply a temperature grid with --beta or --t".into(),
            ))
        }
    };
    if betas.is_empty() {
        return Err(Error::Config("temperature grid is empty".into()));
    }

    let spectrum = Spectrum::new(&params.hamiltonian())?;
    let baseline = Spectrum::new(&params.with_background_field(0.0)?.hamiltonian())?;

    let mut out = String::from("beta,F,E,S,sigma\n");
    for &beta in &betas {
        let point = spectrum.thermo(beta)?;
        let f0 = baseline.thermo(beta)?.free_energy;
        let sigma = string_tension_from_free_energies(&params, point.free_energy, f0);
        let _ = writeln!(
            out,
            "{beta},{},{},{},{sigma}",
            point.free_energy, point.energy, point.entropy
        );
    }
    match args.out {
        Some(path) => std::fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(())
}

fn run_optimize(args: OptimizeArgs) -> Result<()> {
    let file = args.model.file()?;
    let params = resolve_model(&file.model, &args.model.overrides(args.epsilon, args.mu))?;
    let optimizer = resolve_optimizer(
        file.optimizer.as_ref(),
        &args.optimizer.overrides(args.depth),
    );

    let spec = ObjectiveSpec::new(params.hamiltonian(), args.beta)?;
    let result = minimize(&spec, &optimizer)?;
    let exact = Spectrum::new(spec.hamiltonian())?.thermo(args.beta)?;

    if let Some(path) = &args.params_out {
        std::fs::write(path, result.params.to_json())?;
    }

    if args.json {
        #[derive(serde::Serialize)]
        struct Summary<'a> {
            beta: f64,
            result: &'a schwinger_thermal::ThermalResult,
            f_exact: f64,
        }
        let doc = serde_json::to_string_pretty(&Summary {
            beta: args.beta,
            result: &result,
            f_exact: exact.free_energy,
        })
        .map_err(|e| Error::Serialization(e.to_string()))?;
        println!("{doc}");
    } else {
        println!("beta       = {}", args.beta);
        println!("F_var      = {}", result.free_energy);
        println!("E_var      = {}", result.energy);
        println!("S_var      = {}", result.entropy);
        println!("F_exact    = {}", exact.free_energy);
        println!("gap        = {}", result.free_energy - exact.free_energy);
        println!("converged  = {}", result.converged);
        println!("iterations = {}", result.trace.len());
        println!("restarts   = {}", result.restarts_used);
        println!("seed       = {}", result.seed);
    }
    Ok(())
}

fn run_sweep(kind: StudyKind, flags: StudyFlags) -> Result<()> {
    let file = flags.model.file()?;
    let params = resolve_model(&file.model, &flags.model.overrides(None, None))?;
    let optimizer = resolve_optimizer(file.optimizer.as_ref(), &flags.optimizer.overrides(None));

    let default_out = PathBuf::from(format!("sweep-{}.csv", study_name(kind)));
    let config = SweepConfig {
        model: params,
        beta_grid: flags.beta.or(file.sweep.beta),
        t_grid: flags.t.or(file.sweep.t),
        epsilon_grid: flags.epsilon.or(file.sweep.epsilon),
        mu_grid: flags.mu.or(file.sweep.mu),
        depth_grid: flags.depth.or(file.sweep.depth),
        mode: flags
            .mode
            .map(ModeArg::into_mode)
            .or(file.sweep.mode)
            .unwrap_or(SweepMode::Both),
        output_path: flags.out.or(file.sweep.out).unwrap_or(default_out),
        workers: flags.workers.or(file.sweep.workers).unwrap_or(1),
        max_points: flags
            .max_points
            .or(file.sweep.max_points)
            .unwrap_or(schwinger_thermal::sweep::DEFAULT_MAX_GRID_POINTS),
        optimizer,
    };

    let rows = run_study(kind, &config)?;
    eprintln!(
        "wrote {} rows to {} (audit: {})",
        rows.len(),
        config.output_path.display(),
        config.output_path.with_extension("json").display()
    );
    Ok(())
}

fn study_name(kind: StudyKind) -> &'static str {
    match kind {
        StudyKind::Convergence => "convergence",
        StudyKind::Tension => "tension",
        StudyKind::Surface => "surface",
    }
}
