//! `vmge`: geometric entanglement of stored states, spin-model field sweeps,
//! benchmark validation and ground-state export.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use vmge_core::optimizer::{compute_ge, compute_ge_symmetric, OptimizerConfig};
use vmge_core::spin::{
    build_hamiltonian, lanczos_ground_state, ring_lattice, square_lattice, LanczosConfig,
};
use vmge_core::sweep::{
    run_sweep, run_validate_family, sweep_csv, sweep_metadata, validate_csv, Metadata,
    PartitionChoice, SweepSpec, ValidationSpec, VALIDATION_FAMILIES,
};
use vmge_core::{state_file, Error, ModelKind, SpinModelSpec};

use config::{Config, ConfigError};

const CONFIG_KEYS: &[&str] = &[
    "n_init",
    "layers",
    "top_k",
    "seed",
    "out",
    "partition",
    "threads",
    "strict",
    "bfgs_grad_tol",
    "bfgs_max_iter",
    "fd_step",
    "lanczos_tol",
    "lanczos_max_restarts",
    "krylov_dim",
    "model",
    "lattice",
    "n",
    "rows",
    "cols",
    "open",
    "j",
    "r",
    "delta",
    "h",
    "h_min",
    "h_max",
    "h_steps",
    "p_steps",
];

#[derive(Parser, Debug)]
#[command(
    name = "vmge",
    version,
    about = "Variational geometric entanglement toolkit"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Sobol points in the global scan [default: 2000].
    #[arg(long, global = true)]
    n_init: Option<usize>,
    /// Circuit blocks per party [default: 1].
    #[arg(long, global = true)]
    layers: Option<usize>,
    /// Scan points refined by BFGS [default: 1].
    #[arg(long, global = true)]
    top_k: Option<usize>,
    /// Seed for the Lanczos start vector and the brute-force oracle.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `global`, `symmetric`, or parties such as `0,1|2,3`.
    #[arg(long, global = true)]
    partition: Option<String>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exit with status 4 when any solver fails to converge.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true)]
    bfgs_grad_tol: Option<f64>,
    #[arg(long, global = true)]
    bfgs_max_iter: Option<usize>,
    #[arg(long, global = true)]
    fd_step: Option<f64>,
    #[arg(long, global = true)]
    lanczos_tol: Option<f64>,
    #[arg(long, global = true)]
    lanczos_max_restarts: Option<usize>,
    #[arg(long, global = true)]
    krylov_dim: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// `xy` or `xxz` [default: xy].
    #[arg(long)]
    model: Option<String>,
    /// `ring` or `square` [default: ring].
    #[arg(long)]
    lattice: Option<String>,
    /// Ring length [default: 8].
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Open boundaries for the square lattice.
    #[arg(long)]
    open: bool,
    /// Coupling [default: 1 for xy, 0.25 for xxz].
    #[arg(long)]
    j: Option<f64>,
    /// XY anisotropy [default: 1].
    #[arg(long)]
    r: Option<f64>,
    /// XXZ anisotropy [default: 1].
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// GE of a stored state across a partition.
    Ge { state: PathBuf },
    /// Ground-state GE over a field grid, written as CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        h_min: Option<f64>,
        #[arg(long)]
        h_max: Option<f64>,
        /// Grid points [default: 50].
        #[arg(long)]
        h_steps: Option<usize>,
    },
    /// Benchmark families against their oracles; one CSV per family.
    Validate {
        /// p grid points [default: 21].
        #[arg(long)]
        p_steps: Option<usize>,
    },
    /// Lanczos ground state written in the state-file format.
    Groundstate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        h: Option<f64>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    NonConvergence(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Input(m)
            | CliError::NonConvergence(m)
            | CliError::Other(m) => m,
        }
    }

    /// Maps errors raised while reading user inputs.
    fn input(e: Error) -> Self {
        match e {
            Error::Format { .. } | Error::Io(_) => CliError::Input(e.to_string()),
            other => CliError::from(other),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Format { .. } => CliError::Input(e.to_string()),
            Error::NonConvergence { .. } => CliError::Other(e.to_string()),
            Error::Io(_) => CliError::Other(e.to_string()),
            Error::InvalidArgument(_)
            | Error::Partition(_)
            | Error::UnsupportedDimension { .. } => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Other(format!("{}: {e}", path.display()))
}

/// Effective settings after merging flags, config file and defaults.
struct Settings {
    cfg: Config,
    config_path: Option<PathBuf>,
    optimizer: OptimizerConfig,
    layers: usize,
    lanczos: LanczosConfig,
    seed: u64,
    strict: bool,
    out: Option<PathBuf>,
    partition: Option<String>,
    threads: Option<usize>,
}

impl Settings {
    fn resolve(c: &Common) -> Result<Self, CliError> {
        let cfg = match &c.config {
            Some(p) => Config::load(p, CONFIG_KEYS)?,
            None => Config::default(),
        };
        let d = OptimizerConfig::default();
        let optimizer = OptimizerConfig {
            n_init: cfg.pick(c.n_init, "n_init", d.n_init)?,
            top_k: cfg.pick(c.top_k, "top_k", d.top_k)?,
            bfgs_grad_tol: cfg.pick(c.bfgs_grad_tol, "bfgs_grad_tol", d.bfgs_grad_tol)?,
            bfgs_max_iter: cfg.pick(c.bfgs_max_iter, "bfgs_max_iter", d.bfgs_max_iter)?,
            fd_step: cfg.pick(c.fd_step, "fd_step", d.fd_step)?,
            ..d
        };
        optimizer.validate()?;
        let ld = LanczosConfig::default();
        let seed = cfg.pick(c.seed, "seed", ld.seed)?;
        let lanczos = LanczosConfig {
            tol: cfg.pick(c.lanczos_tol, "lanczos_tol", ld.tol)?,
            max_restarts: cfg.pick(
                c.lanczos_max_restarts,
                "lanczos_max_restarts",
                ld.max_restarts,
            )?,
            krylov_dim: cfg.pick(c.krylov_dim, "krylov_dim", ld.krylov_dim)?,
            seed,
        };
        let layers = cfg.pick(c.layers, "layers", 1)?;
        if layers == 0 {
            return Err(CliError::Usage("layers must be at least 1".into()));
        }
        Ok(Settings {
            optimizer,
            layers,
            lanczos,
            seed,
            strict: cfg.pick(c.strict.then_some(true), "strict", false)?,
            out: cfg.pick_opt(c.out.clone(), "out")?,
            partition: cfg.pick_opt(c.partition.clone(), "partition")?,
            threads: cfg.pick_opt(c.threads, "threads")?,
            cfg,
            config_path: c.config.clone(),
        })
    }

    fn model(&self, m: &ModelArgs, h: f64) -> Result<SpinModelSpec, CliError> {
        let cfg = &self.cfg;
        let name: String = cfg.pick(m.model.clone(), "model", "xy".into())?;
        let kind = match name.as_str() {
            "xy" => ModelKind::Xy {
                r: cfg.pick(m.r, "r", 1.0)?,
            },
            "xxz" => ModelKind::Xxz {
                delta: cfg.pick(m.delta, "delta", 1.0)?,
            },
            other => {
                return Err(CliError::Usage(format!(
                    "unknown model `{other}` (expected xy or xxz)"
                )))
            }
        };
        let default_j = if matches!(kind, ModelKind::Xy { .. }) {
            1.0
        } else {
            0.25
        };
        let geometry: String = cfg.pick(m.lattice.clone(), "lattice", "ring".into())?;
        let lattice = match geometry.as_str() {
            "ring" => ring_lattice(cfg.pick(m.n, "n", 8)?)?,
            "square" => {
                let open = cfg.pick(m.open.then_some(true), "open", false)?;
                square_lattice(
                    cfg.pick(m.rows, "rows", 4)?,
                    cfg.pick(m.cols, "cols", 4)?,
                    !open,
                )?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown lattice `{other}` (expected ring or square)"
                )))
            }
        };
        Ok(SpinModelSpec {
            kind,
            j: cfg.pick(m.j, "j", default_j)?,
            h,
            lattice,
        })
    }

    fn partition_choice(&self, n: usize) -> Result<PartitionChoice, CliError> {
        Ok(PartitionChoice::parse(
            self.partition.as_deref().unwrap_or("global"),
            n,
        )?)
    }

    fn metadata(&self, command: &str) -> Metadata {
        let mut m = Metadata::new();
        m.push("command", command);
        self.echo(&mut m);
        m
    }

    fn echo(&self, m: &mut Metadata) {
        m.push("seed", self.seed).push("strict", self.strict);
        if let Some(p) = &self.config_path {
            m.push("config", p.display());
        }
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn cmd_ge(s: &Settings, state_path: &Path) -> Result<(), CliError> {
    let state = state_file::load(state_path).map_err(CliError::input)?;
    let choice = s.partition_choice(state.n_qubits())?;
    let r = match &choice {
        PartitionChoice::Symmetric => compute_ge_symmetric(&state, &s.optimizer)?,
        PartitionChoice::Global => compute_ge(
            &state,
            &vmge_core::Partition::global(state.n_qubits())?,
            &s.optimizer,
            s.layers,
        )?,
        PartitionChoice::Custom(p) => compute_ge(&state, p, &s.optimizer, s.layers)?,
    };
    let mut rec = Metadata::new();
    rec.push("ge", format!("{:.15e}", r.ge))
        .push("max_overlap", format!("{:.15e}", r.max_overlap))
        .push("sobol_best", format!("{:.15e}", r.sobol_best_overlap))
        .push("bfgs_iters", r.bfgs_iterations)
        .push("converged", r.converged)
        .push("evaluations", r.objective_evaluations);
    let text: String = rec.entries()[1..]
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    print!("{text}");
    if let Some(out) = &s.out {
        write_file(out, &text)?;
        let mut meta = s.metadata("ge");
        meta.push("state", state_path.display())
            .push("n_qubits", state.n_qubits())
            .push("partition", choice.label())
            .optimizer(&s.optimizer, s.layers);
        write_file(&sidecar(out), &meta.render())?;
    }
    if s.strict && !r.converged {
        return Err(CliError::NonConvergence(
            "BFGS did not reach the gradient tolerance".into(),
        ));
    }
    Ok(())
}

fn cmd_sweep(
    s: &Settings,
    model: &ModelArgs,
    h_min: Option<f64>,
    h_max: Option<f64>,
    h_steps: Option<usize>,
) -> Result<(), CliError> {
    let template = s.model(model, 0.0)?;
    let spec = SweepSpec {
        h_min: s.cfg.pick(h_min, "h_min", 0.0)?,
        h_max: s.cfg.pick(h_max, "h_max", 2.0)?,
        h_steps: s.cfg.pick(h_steps, "h_steps", 50)?,
        partition: s.partition_choice(template.n_sites())?,
        optimizer: s.optimizer.clone(),
        layers: s.layers,
        lanczos: s.lanczos.clone(),
        model: template,
    };
    let rows = run_sweep(&spec)?;
    let csv = sweep_csv(&rows);
    let mut meta = sweep_metadata(&spec);
    s.echo(&mut meta);
    let meta_text = meta.render();
    match &s.out {
        Some(out) => {
            write_file(out, &csv)?;
            write_file(&sidecar(out), &meta_text)?;
            info!("wrote {} rows to {}", rows.len(), out.display());
        }
        None => print!("{csv}"),
    }
    let failed = rows.iter().filter(|r| !r.converged).count();
    if s.strict && failed > 0 {
        return Err(CliError::NonConvergence(format!(
            "{failed} grid point(s) did not converge"
        )));
    }
    Ok(())
}

fn cmd_validate(s: &Settings, p_steps: Option<usize>) -> Result<(), CliError> {
    let spec = ValidationSpec {
        optimizer: s.optimizer.clone(),
        layers: s.layers,
        p_steps: s.cfg.pick(p_steps, "p_steps", 21)?,
        oracle_seeds: (0..3).map(|k| s.seed.wrapping_add(k)).collect(),
    };
    let dir = s
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("vmge-validate"));
    let mut meta = s.metadata("validate");
    meta.push("p_steps", spec.p_steps)
        .push("oracle_seeds", format!("{:?}", spec.oracle_seeds))
        .optimizer(&spec.optimizer, spec.layers);
    let mut unconverged = 0;
    for family in VALIDATION_FAMILIES {
        let rows = run_validate_family(&spec, family)?;
        let worst = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
        let spread = rows.iter().map(|r| r.oracle_spread).fold(0.0, f64::max);
        unconverged += rows.iter().filter(|r| !r.converged).count();
        write_file(
            &dir.join(format!("{}.csv", family.name())),
            &validate_csv(&rows),
        )?;
        println!(
            "{} rows = {} max_abs_err = {worst:.3e} oracle_spread = {spread:.3e}",
            family.name(),
            rows.len()
        );
        meta.push(
            &format!("{}_max_abs_err", family.name()),
            format!("{worst:.6e}"),
        );
    }
    write_file(&dir.join("validate.meta"), &meta.render())?;
    if s.strict && unconverged > 0 {
        return Err(CliError::NonConvergence(format!(
            "{unconverged} validation point(s) did not converge"
        )));
    }
    Ok(())
}

fn cmd_groundstate(s: &Settings, model: &ModelArgs, h: Option<f64>) -> Result<(), CliError> {
    let spec = s.model(model, s.cfg.pick(h, "h", 0.0)?)?;
    let gs = match lanczos_ground_state(&build_hamiltonian(&spec), &s.lanczos) {
        Ok(gs) => gs,
        Err(e @ Error::NonConvergence { .. }) if s.strict => {
            return Err(CliError::NonConvergence(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let out = s
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("groundstate.txt"));
    write_file(&out, &state_file::to_string(&gs.state))?;
    let mut meta = s.metadata("groundstate");
    meta.push("energy", format!("{:.15e}", gs.energy))
        .push("residual", format!("{:.3e}", gs.residual))
        .push("h", spec.h)
        .model(&spec)
        .lanczos(&s.lanczos);
    write_file(&sidecar(&out), &meta.render())?;
    println!("energy = {:.15e}", gs.energy);
    println!("residual = {:.3e}", gs.residual);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let s = Settings::resolve(&cli.common)?;
    if let Some(t) = s.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Other(e.to_string()))?;
    }
    match &cli.command {
        Command::Ge { state } => cmd_ge(&s, state),
        Command::Sweep {
            model,
            h_min,
            h_max,
            h_steps,
        } => cmd_sweep(&s, model, *h_min, *h_max, *h_steps),
        Command::Validate { p_steps } => cmd_validate(&s, *p_steps),
        Command::Groundstate { model, h } => cmd_groundstate(&s, model, *h),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
