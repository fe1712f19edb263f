//! Field sweeps over spin-model ground states and the benchmark validation
//! run, both rendered as CSV.

use std::f64::consts::PI;
use std::fmt::Write as _;

use log::warn;
use rayon::prelude::*;

use crate::ansatz::Partition;
use crate::error::{invalid, Result};
use crate::optimizer::{compute_ge, compute_ge_symmetric, GeResult, OptimizerConfig};
use crate::oracles::{
    brute_force_ge, make_benchmark_state, schmidt_max_overlap, BenchmarkFamily, BenchmarkStateSpec,
    BruteForceConfig,
};
use crate::spin::{
    build_hamiltonian, lanczos_ground_state, lanczos_lowest, saturation_field, Eigenpair,
    LanczosConfig, SpinModelSpec,
};

/// Gap `E₁ − E₀` below which a grid point is flagged degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

pub const SWEEP_HEADER: &str =
    "h,energy,ge,max_overlap,sobol_best,bfgs_iters,converged,degenerate_flag";
pub const VALIDATE_HEADER: &str = "p,phi,ge_vmge,ge_oracle,abs_err";

#[derive(Clone, Debug, PartialEq)]
pub enum PartitionChoice {
    Global,
    /// Translation-invariant product ansatz, two parameters.
    Symmetric,
    Custom(Partition),
}

impl PartitionChoice {
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        match text.trim() {
            "global" => Ok(PartitionChoice::Global),
            "symmetric" => Ok(PartitionChoice::Symmetric),
            other => Ok(PartitionChoice::Custom(Partition::parse(other, n_qubits)?)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PartitionChoice::Global => "global".into(),
            PartitionChoice::Symmetric => "symmetric".into(),
            PartitionChoice::Custom(p) => p.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Template; its field is replaced at every grid point.
    pub model: SpinModelSpec,
    pub h_min: f64,
    pub h_max: f64,
    pub h_steps: usize,
    pub partition: PartitionChoice,
    pub optimizer: OptimizerConfig,
    pub layers: usize,
    pub lanczos: LanczosConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.h_steps == 0 {
            return Err(invalid("h_steps must be at least 1"));
        }
        if !(self.h_min.is_finite() && self.h_max.is_finite() && self.h_min <= self.h_max) {
            return Err(invalid(format!(
                "invalid field range [{}, {}]",
                self.h_min, self.h_max
            )));
        }
        if self.layers == 0 {
            return Err(invalid("layers must be at least 1"));
        }
        if let PartitionChoice::Custom(p) = &self.partition {
            if p.n_qubits() != self.model.n_sites() {
                return Err(invalid("partition does not match the lattice size"));
            }
        }
        self.optimizer.validate()
    }

    pub fn grid(&self) -> Vec<f64> {
        field_grid(self.h_min, self.h_max, self.h_steps)
    }
}

/// `steps` evenly spaced values, endpoints included; one step gives `[lo]`.
pub fn field_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub h: f64,
    pub energy: Option<f64>,
    pub gap: Option<f64>,
    pub ge: Option<GeResult>,
    /// Lanczos and BFGS both converged.
    pub converged: bool,
    pub degenerate: bool,
}

fn ground_with_gap(spec: &SpinModelSpec, cfg: &LanczosConfig) -> Result<(Eigenpair, Option<f64>)> {
    let h = build_hamiltonian(spec);
    match lanczos_lowest(&h, 2, cfg) {
        Ok(mut pairs) => {
            let gap = pairs[1].energy - pairs[0].energy;
            Ok((pairs.swap_remove(0), Some(gap)))
        }
        Err(_) => {
            warn!(
                "first excited state did not converge at h = {}; gap unknown",
                spec.h
            );
            Ok((lanczos_ground_state(&h, cfg)?, None))
        }
    }
}

fn sweep_point(spec: &SweepSpec, h: f64) -> SweepRow {
    let model = spec.model.with_field(h);
    let (gs, gap) = match ground_with_gap(&model, &spec.lanczos) {
        Ok(v) => v,
        Err(e) => {
            warn!("ground state failed at h = {h}: {e}");
            return SweepRow {
                h,
                energy: None,
                gap: None,
                ge: None,
                converged: false,
                degenerate: false,
            };
        }
    };
    let degenerate = gap.is_some_and(|g| g < DEGENERACY_GAP);
    if degenerate {
        warn!(
            "h = {h}: gap {:.3e} below {DEGENERACY_GAP:e}, eigenvector choice is arbitrary",
            gap.unwrap_or(0.0)
        );
    }
    let ge = match &spec.partition {
        PartitionChoice::Symmetric => compute_ge_symmetric(&gs.state, &spec.optimizer),
        PartitionChoice::Global => Partition::global(model.n_sites())
            .and_then(|p| compute_ge(&gs.state, &p, &spec.optimizer, spec.layers)),
        PartitionChoice::Custom(p) => compute_ge(&gs.state, p, &spec.optimizer, spec.layers),
    };
    match ge {
        Ok(r) => SweepRow {
            h,
            energy: Some(gs.energy),
            gap,
            converged: r.converged,
            ge: Some(r),
            degenerate,
        },
        Err(e) => {
            warn!("GE failed at h = {h}: {e}");
            SweepRow {
                h,
                energy: Some(gs.energy),
                gap,
                ge: None,
                converged: false,
                degenerate,
            }
        }
    }
}

/// Runs every grid point (concurrently) and returns the rows in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .grid()
        .par_iter()
        .map(|&h| sweep_point(spec, h))
        .collect())
}

fn num(v: f64) -> String {
    format!("{v:.15e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let g = r.ge.as_ref();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(r.h),
            opt(r.energy),
            opt(g.map(|g| g.ge)),
            opt(g.map(|g| g.max_overlap)),
            opt(g.map(|g| g.sobol_best_overlap)),
            g.map(|g| g.bfgs_iterations.to_string()).unwrap_or_default(),
            r.converged,
            r.degenerate,
        );
    }
    out
}

/// Flat `key = value` lines for metadata sidecars.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata(Vec<(String, String)>);

impl Metadata {
    pub fn new() -> Self {
        Metadata(vec![(
            "vmge_version".into(),
            env!("CARGO_PKG_VERSION").into(),
        )])
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn optimizer(&mut self, cfg: &OptimizerConfig, layers: usize) -> &mut Self {
        self.push("n_init", cfg.n_init)
            .push("seed_interval_min", cfg.seed_interval.0)
            .push("seed_interval_max", cfg.seed_interval.1)
            .push("bfgs_grad_tol", cfg.bfgs_grad_tol)
            .push("bfgs_max_iter", cfg.bfgs_max_iter)
            .push("fd_step", cfg.fd_step)
            .push("top_k", cfg.top_k)
            .push("layers", layers)
    }

    pub fn lanczos(&mut self, cfg: &LanczosConfig) -> &mut Self {
        self.push("lanczos_tol", cfg.tol)
            .push("lanczos_max_restarts", cfg.max_restarts)
            .push("lanczos_krylov_dim", cfg.krylov_dim)
            .push("lanczos_seed", cfg.seed)
    }

    pub fn model(&mut self, spec: &SpinModelSpec) -> &mut Self {
        match spec.kind {
            crate::spin::ModelKind::Xy { r } => self.push("model", "xy").push("r", r),
            crate::spin::ModelKind::Xxz { delta } => self.push("model", "xxz").push("delta", delta),
        };
        self.push("j", spec.j)
            .push("n_sites", spec.n_sites())
            .push("geometry", format!("{:?}", spec.lattice.geometry()))
            .push("critical_field_estimate", saturation_field(spec))
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

pub fn sweep_metadata(spec: &SweepSpec) -> Metadata {
    let mut m = Metadata::new();
    m.push("command", "sweep")
        .model(&spec.model)
        .push("h_min", spec.h_min)
        .push("h_max", spec.h_max)
        .push("h_steps", spec.h_steps)
        .push("partition", spec.partition.label())
        .optimizer(&spec.optimizer, spec.layers)
        .lanczos(&spec.lanczos)
        .push("degeneracy_gap", DEGENERACY_GAP);
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationSpec {
    pub optimizer: OptimizerConfig,
    pub layers: usize,
    pub p_steps: usize,
    /// Brute-force seeds for the families without a closed form.
    pub oracle_seeds: Vec<u64>,
}

impl Default for ValidationSpec {
    fn default() -> Self {
        ValidationSpec {
            optimizer: OptimizerConfig::default(),
            layers: 1,
            p_steps: 21,
            oracle_seeds: vec![11, 23, 47],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationRow {
    pub family: BenchmarkFamily,
    pub p: f64,
    pub phi: f64,
    pub ge_vmge: f64,
    pub ge_oracle: f64,
    pub abs_err: f64,
    /// Largest disagreement among brute-force seeds (zero for Schmidt).
    pub oracle_spread: f64,
    pub converged: bool,
}

pub const VALIDATION_FAMILIES: [BenchmarkFamily; 4] = [
    BenchmarkFamily::PsiP,
    BenchmarkFamily::WPPhi,
    BenchmarkFamily::GwPPhi,
    BenchmarkFamily::BbP,
];

pub fn validation_partition(family: BenchmarkFamily) -> Partition {
    let text = match family {
        BenchmarkFamily::PsiP => "0|1",
        BenchmarkFamily::WPPhi | BenchmarkFamily::GwPPhi => "0|1|2",
        BenchmarkFamily::BbP => "0,2|1,3",
    };
    Partition::parse(text, family.n_qubits()).expect("static partition")
}

fn validate_point(
    spec: &ValidationSpec,
    family: BenchmarkFamily,
    p: f64,
    phi: f64,
) -> Result<ValidationRow> {
    let state = make_benchmark_state(&BenchmarkStateSpec { family, p, phi })?;
    let part = validation_partition(family);
    let r = compute_ge(&state, &part, &spec.optimizer, spec.layers)?;
    let (ge_oracle, spread) = if part.n_parties() == 2 {
        (1.0 - schmidt_max_overlap(&state, &part)?, 0.0)
    } else {
        let mut vals = Vec::with_capacity(spec.oracle_seeds.len());
        for &seed in &spec.oracle_seeds {
            let cfg = BruteForceConfig {
                seed,
                ..BruteForceConfig::for_qubits(family.n_qubits())
            };
            vals.push(brute_force_ge(&state, &part, &cfg)?);
        }
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi - lo)
    };
    Ok(ValidationRow {
        family,
        p,
        phi,
        ge_vmge: r.ge,
        ge_oracle,
        abs_err: (r.ge - ge_oracle).abs(),
        oracle_spread: spread,
        converged: r.converged,
    })
}

/// Rows for one family: the p grid crossed with `φ ∈ {0, π}` where a phase
/// applies.
pub fn run_validate_family(
    spec: &ValidationSpec,
    family: BenchmarkFamily,
) -> Result<Vec<ValidationRow>> {
    if spec.p_steps == 0 || spec.oracle_seeds.is_empty() {
        return Err(invalid(
            "validation needs at least one p point and one oracle seed",
        ));
    }
    let phis: &[f64] = if family.has_phase() {
        &[0.0, PI]
    } else {
        &[0.0]
    };
    let points: Vec<(f64, f64)> = phis
        .iter()
        .flat_map(|&phi| {
            field_grid(0.0, 1.0, spec.p_steps)
                .into_iter()
                .map(move |p| (p, phi))
        })
        .collect();
    points
        .par_iter()
        .map(|&(p, phi)| validate_point(spec, family, p, phi))
        .collect()
}

pub fn validate_csv(rows: &[ValidationRow]) -> String {
    let mut out = String::from(VALIDATE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(r.p),
            num(r.phi),
            num(r.ge_vmge),
            num(r.ge_oracle),
            num(r.abs_err)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{ring_lattice, ModelKind};

    fn xy_ring(n: usize) -> SpinModelSpec {
        SpinModelSpec {
            kind: ModelKind::Xy { r: 1.0 },
            j: 1.0,
            h: 0.0,
            lattice: ring_lattice(n).unwrap(),
        }
    }

    fn spec(steps: usize) -> SweepSpec {
        SweepSpec {
            model: xy_ring(4),
            h_min: 0.5,
            h_max: 2.0,
            h_steps: steps,
            partition: PartitionChoice::Global,
            optimizer: OptimizerConfig {
                n_init: 128,
                ..Default::default()
            },
            layers: 1,
            lanczos: LanczosConfig::default(),
        }
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(field_grid(0.3, 2.0, 1), vec![0.3]);
        let g = field_grid(0.0, 2.0, 5);
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn single_step_gives_one_row() {
        let rows = run_sweep(&spec(1)).unwrap();
        assert_eq!(rows.len(), 1);
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().next().unwrap(), SWEEP_HEADER);
    }

    #[test]
    fn csv_columns_and_precision() {
        let rows = run_sweep(&spec(3)).unwrap();
        let csv = sweep_csv(&rows);
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols.len(), 8);
            let mantissa = cols[0].split('e').next().unwrap().replace(['.', '-'], "");
            assert!(mantissa.len() >= 12, "{}", cols[0]);
            assert!(cols[2].parse::<f64>().unwrap() >= 0.0);
        }
        assert_eq!(csv, sweep_csv(&run_sweep(&spec(3)).unwrap()));
    }

    #[test]
    fn failed_ground_state_leaves_blank_ge() {
        let mut s = spec(1);
        s.lanczos = LanczosConfig {
            tol: 1e-30,
            max_restarts: 0,
            krylov_dim: 2,
            ..Default::default()
        };
        let rows = run_sweep(&s).unwrap();
        assert!(!rows[0].converged && rows[0].ge.is_none());
        let line = sweep_csv(&rows).lines().nth(1).unwrap().to_string();
        assert!(line.ends_with(",,,,,,false,false"), "{line}");
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = spec(0);
        assert!(run_sweep(&s).is_err());
        s.h_steps = 3;
        s.h_min = 3.0;
        assert!(run_sweep(&s).is_err());
    }

    #[test]
    fn partition_choice_parse() {
        assert_eq!(
            PartitionChoice::parse("symmetric", 4).unwrap(),
            PartitionChoice::Symmetric
        );
        assert_eq!(
            PartitionChoice::parse("global", 4).unwrap(),
            PartitionChoice::Global
        );
        assert!(matches!(
            PartitionChoice::parse("0,1|2,3", 4).unwrap(),
            PartitionChoice::Custom(_)
        ));
        assert!(PartitionChoice::parse("0,1|1,2", 3).is_err());
    }

    #[test]
    fn validation_examples() {
        let vs = ValidationSpec {
            optimizer: OptimizerConfig {
                n_init: 256,
                ..Default::default()
            },
            p_steps: 5,
            ..Default::default()
        };
        let rows = run_validate_family(&vs, BenchmarkFamily::PsiP).unwrap();
        assert_eq!(rows.len(), 5);
        let quarter = &rows[1];
        assert!((quarter.p - 0.25).abs() < 1e-15);
        assert!((quarter.ge_oracle - 0.25).abs() < 1e-12);
        assert!(quarter.abs_err < 1e-5);
        let rows = run_validate_family(&vs, BenchmarkFamily::WPPhi).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(validate_csv(&rows).starts_with(VALIDATE_HEADER));
    }

    #[test]
    fn metadata_echoes_config() {
        let text = sweep_metadata(&spec(4)).render();
        for key in [
            "n_init = 128",
            "h_steps = 4",
            "lanczos_seed = ",
            "partition = global",
            "bfgs_grad_tol = ",
        ] {
            assert!(text.contains(key), "{key} missing from\n{text}");
        }
    }
}
