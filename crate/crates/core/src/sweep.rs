//! Parameter sweeps over (β or T, ε, μ, p): machine-readable tables for the
//! free-energy convergence study, the tension-versus-temperature study and
//! the (T, μ) tension surface.
//!
//! Rows are ordered by grid index (β outermost, then ε, μ, depth), never by
//! completion time, so `workers = 1` and `workers = k` emit identical rows.
//! Every variational solve derives its seed from the master seed and its
//! grid coordinates, which makes sweeps byte-reproducible except for the
//! `wall_time_ms` column. Free energies at ε = 0 are solved once per
//! (β, μ, depth) and shared across the ε grid, so σ = 0 is exact on ε = 0
//! rows.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::{self, minimize, ObjectiveSpec, OptimizerConfig, ThermalResult};
use crate::oracle::{string_tension_from_free_energies, Spectrum};
use crate::schwinger::SchwingerParams;

/// Hard cap on grid size unless overridden in the config.
pub const DEFAULT_MAX_GRID_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Variational,
    Exact,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Convergence,
    Tension,
    Surface,
}

impl StudyKind {
    fn name(self) -> &'static str {
        match self {
            StudyKind::Convergence => "convergence",
            StudyKind::Tension => "tension",
            StudyKind::Surface => "surface",
        }
    }

    /// Tension-style studies compute σ from free-energy differences;
    /// the convergence study reports free energies only.
    fn computes_sigma(self) -> bool {
        !matches!(self, StudyKind::Convergence)
    }

    /// The tension table carries extra `ln σ` columns for the log-linear
    /// decay analysis.
    fn ln_columns(self) -> bool {
        matches!(self, StudyKind::Tension)
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Model template; grid axes override its ε and μ per point.
    pub model: SchwingerParams,
    /// Exactly one of `beta_grid` / `t_grid` must be supplied.
    pub beta_grid: Option<Vec<f64>>,
    pub t_grid: Option<Vec<f64>>,
    /// Defaults to the template's ε.
    pub epsilon_grid: Option<Vec<f64>>,
    /// Defaults to the template's μ.
    pub mu_grid: Option<Vec<f64>>,
    /// Defaults to the optimizer's depth.
    pub depth_grid: Option<Vec<usize>>,
    pub optimizer: OptimizerConfig,
    pub mode: SweepMode,
    pub output_path: PathBuf,
    pub workers: usize,
    pub max_points: usize,
}

impl SweepConfig {
    pub fn new(model: SchwingerParams, optimizer: OptimizerConfig, output_path: PathBuf) -> Self {
        Self {
            model,
            beta_grid: None,
            t_grid: None,
            epsilon_grid: None,
            mu_grid: None,
            depth_grid: None,
            optimizer,
            mode: SweepMode::Both,
            output_path,
            workers: 1,
            max_points: DEFAULT_MAX_GRID_POINTS,
        }
    }
}

/// One emitted table row. Optional fields are empty in the CSV when the
/// mode or study does not produce them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub depth: usize,
    pub f_var: Option<f64>,
    pub e_var: Option<f64>,
    pub s_var: Option<f64>,
    pub f_exact: Option<f64>,
    pub sigma_var: Option<f64>,
    pub sigma_exact: Option<f64>,
    pub converged: Option<bool>,
    pub seed: u64,
    pub wall_time_ms: u64,
}

/// Free-energy convergence versus circuit depth (grid over β and p).
pub fn run_convergence_study(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_study(StudyKind::Convergence, config)
}

/// String tension versus temperature (grid over β or T, and ε; single μ).
pub fn run_tension_vs_temperature(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_study(StudyKind::Tension, config)
}

/// String tension over the (T, μ) plane at fixed ε.
pub fn run_tension_surface(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_study(StudyKind::Surface, config)
}

/// Run a sweep, write the CSV table and the JSON audit sidecar, and return
/// the rows.
pub fn run_study(kind: StudyKind, config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let grid = ResolvedGrid::build(kind, config)?;
    let rows_with_traces = compute_rows(kind, config, &grid)?;
    let rows: Vec<SweepRow> = rows_with_traces.iter().map(|(r, _)| r.clone()).collect();

    let csv = render_csv(&rows, kind.ln_columns());
    std::fs::write(&config.output_path, csv)?;
    let audit = render_audit(kind, config, &grid, &rows_with_traces)?;
    std::fs::write(config.output_path.with_extension("json"), audit)?;

    Ok(rows)
}

/// Render the fixed-order CSV table. Tension tables append
/// `ln_sigma_var,ln_sigma_exact` after the standard columns; the logs are
/// empty wherever σ ≤ 0.
pub fn render_csv(rows: &[SweepRow], ln_columns: bool) -> String {
    let mut out = String::new();
    out.push_str("T,beta,epsilon,mu,depth,F_var,E_var,S_var,F_exact,sigma_var,sigma_exact,converged,seed,wall_time_ms");
    if ln_columns {
        out.push_str(",ln_sigma_var,ln_sigma_exact");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.beta,
            r.epsilon,
            r.mu,
            r.depth,
            opt(r.f_var),
            opt(r.e_var),
            opt(r.s_var),
            opt(r.f_exact),
            opt(r.sigma_var),
            opt(r.sigma_exact),
            r.converged.map_or(String::new(), |c| c.to_string()),
            r.seed,
            r.wall_time_ms
        );
        if ln_columns {
            let _ = write!(out, ",{},{}", ln_opt(r.sigma_var), ln_opt(r.sigma_exact));
        }
        out.push('\n');
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn ln_opt(v: Option<f64>) -> String {
    match v {
        Some(x) if x > 0.0 => x.ln().to_string(),
        _ => String::new(),
    }
}

/// Least-squares line `y = slope·x + intercept` and its R².
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "linear fit needs two equal-length samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParams("degenerate abscissa for linear fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

struct ResolvedGrid {
    /// (T, β) per β-grid entry.
    temps: Vec<(f64, f64)>,
    epsilons: Vec<f64>,
    mus: Vec<f64>,
    depths: Vec<usize>,
}

impl ResolvedGrid {
    fn build(kind: StudyKind, config: &SweepConfig) -> Result<Self> {
        let temps = match (&config.beta_grid, &config.t_grid) {
            (Some(betas), None) => betas.iter().map(|&b| (1.0 / b, b)).collect::<Vec<_>>(),
            (None, Some(ts)) => ts.iter().map(|&t| (t, 1.0 / t)).collect(),
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "supply exactly one of the beta and T grids, got both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "supply exactly one of the beta and T grids, got neither".into(),
                ))
            }
        };
        if temps.is_empty() {
            return Err(Error::Config("temperature grid is empty".into()));
        }
        for &(t, b) in &temps {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::Config(format!(
                    "grid temperatures must be positive and finite, got T = {t}"
                )));
            }
        }

        let epsilons = config
            .epsilon_grid
            .clone()
            .unwrap_or_else(|| vec![config.model.background_field()]);
        let mus = config
            .mu_grid
            .clone()
            .unwrap_or_else(|| vec![config.model.chemical_potential()]);
        let depths = config
            .depth_grid
            .clone()
            .unwrap_or_else(|| vec![config.optimizer.depth]);
        if epsilons.is_empty() || mus.is_empty() || depths.is_empty() {
            return Err(Error::Config("grids must be non-empty".into()));
        }
        if kind == StudyKind::Tension && mus.len() != 1 {
            return Err(Error::Config(
                "the tension study sweeps β and ε at a single chemical potential".into(),
            ));
        }
        if kind == StudyKind::Surface && epsilons.len() != 1 {
            return Err(Error::Config(
                "the surface study sweeps T and μ at a fixed background field".into(),
            ));
        }
        if config.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }

        let grid = Self {
            temps,
            epsilons,
            mus,
            depths,
        };
        let total = grid.len();
        if total > config.max_points {
            return Err(Error::Config(format!(
                "grid has {total} points, budget is {}",
                config.max_points
            )));
        }
        Ok(grid)
    }

    fn len(&self) -> usize {
        self.temps.len() * self.epsilons.len() * self.mus.len() * self.depths.len()
    }

    /// Deterministic row order: β outermost, then ε, μ, depth.
    fn coords(&self) -> Vec<PointCoords> {
        let mut out = Vec::with_capacity(self.len());
        for (ib, &(t, beta)) in self.temps.iter().enumerate() {
            for (ie, &epsilon) in self.epsilons.iter().enumerate() {
                for (im, &mu) in self.mus.iter().enumerate() {
                    for (id, &depth) in self.depths.iter().enumerate() {
                        out.push(PointCoords {
                            ib,
                            ie,
                            im,
                            id,
                            t,
                            beta,
                            epsilon,
                            mu,
                            depth,
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct PointCoords {
    ib: usize,
    ie: usize,
    im: usize,
    id: usize,
    t: f64,
    beta: f64,
    epsilon: f64,
    mu: f64,
    depth: usize,
}

const SEED_TAG_BASELINE: u64 = 0xF0;
const SEED_TAG_POINT: u64 = 0x9017;

fn point_seed(master: u64, tag: u64, idx: &[u64]) -> u64 {
    let mut s = optimizer::restart_seed(master, tag);
    for &i in idx {
        s = optimizer::restart_seed(s, i.wrapping_add(0x51));
    }
    s
}

type RowWithTrace = (SweepRow, Option<ThermalResult>);

fn compute_rows(
    kind: StudyKind,
    config: &SweepConfig,
    grid: &ResolvedGrid,
) -> Result<Vec<RowWithTrace>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;

    let wants_exact = config.mode != SweepMode::Variational;
    let wants_var = config.mode != SweepMode::Exact;
    let sigma = kind.computes_sigma();

    // Exact spectra: one diagonalization per (ε, μ) pair, plus the ε = 0
    // baselines needed by the tension formula.
    let mut exact_pairs: HashMap<(usize, usize), Spectrum> = HashMap::new();
    let mut exact_baselines: HashMap<usize, Spectrum> = HashMap::new();
    if wants_exact {
        let pair_list: Vec<(usize, usize)> = (0..grid.epsilons.len())
            .flat_map(|ie| (0..grid.mus.len()).map(move |im| (ie, im)))
            .collect();
        let spectra: Vec<Spectrum> = pool.install(|| {
            pair_list
                .par_iter()
                .map(|&(ie, im)| {
                    let params = config
                        .model
                        .with_background_field(grid.epsilons[ie])?
                        .with_chemical_potential(grid.mus[im])?;
                    Spectrum::new(&params.hamiltonian())
                })
                .collect::<Result<Vec<_>>>()
        })?;
        exact_pairs = pair_list.into_iter().zip(spectra).collect();

        if sigma {
            let baselines: Vec<Spectrum> = pool.install(|| {
                (0..grid.mus.len())
                    .into_par_iter()
                    .map(|im| {
                        let params = config
                            .model
                            .with_background_field(0.0)?
                            .with_chemical_potential(grid.mus[im])?;
                        Spectrum::new(&params.hamiltonian())
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            exact_baselines = baselines.into_iter().enumerate().collect();
        }
    }

    // Variational ε = 0 baselines: one solve per (β, μ, depth), computed
    // before the grid dispatch and shared across the ε axis.
    let mut var_baselines: HashMap<(usize, usize, usize), ThermalResult> = HashMap::new();
    if wants_var && sigma {
        let keys: Vec<(usize, usize, usize)> = (0..grid.temps.len())
            .flat_map(|ib| {
                (0..grid.mus.len()).flat_map(move |im| {
                    (0..grid.depths.len()).map(move |id| (ib, im, id))
                })
            })
            .collect();
        let solves: Vec<ThermalResult> = pool.install(|| {
            keys.par_iter()
                .map(|&(ib, im, id)| {
                    let params = config
                        .model
                        .with_background_field(0.0)?
                        .with_chemical_potential(grid.mus[im])?;
                    let spec = ObjectiveSpec::new(params.hamiltonian(), grid.temps[ib].1)?;
                    let mut opt = config.optimizer;
                    opt.depth = grid.depths[id];
                    opt.seed = point_seed(
                        config.optimizer.seed,
                        SEED_TAG_BASELINE,
                        &[ib as u64, im as u64, id as u64],
                    );
                    minimize(&spec, &opt)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        var_baselines = keys.into_iter().zip(solves).collect();
    }

    let coords = grid.coords();
    let rows: Vec<RowWithTrace> = pool.install(|| {
        coords
            .par_iter()
            .map(|&c| compute_point(kind, config, c, &exact_pairs, &exact_baselines, &var_baselines))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(rows)
}

fn compute_point(
    kind: StudyKind,
    config: &SweepConfig,
    c: PointCoords,
    exact_pairs: &HashMap<(usize, usize), Spectrum>,
    exact_baselines: &HashMap<usize, Spectrum>,
    var_baselines: &HashMap<(usize, usize, usize), ThermalResult>,
) -> Result<RowWithTrace> {
    let started = Instant::now();
    let wants_exact = config.mode != SweepMode::Variational;
    let wants_var = config.mode != SweepMode::Exact;
    let sigma = kind.computes_sigma();

    let params = config
        .model
        .with_background_field(c.epsilon)?
        .with_chemical_potential(c.mu)?;

    let mut row = SweepRow {
        t: c.t,
        beta: c.beta,
        epsilon: c.epsilon,
        mu: c.mu,
        depth: c.depth,
        f_var: None,
        e_var: None,
        s_var: None,
        f_exact: None,
        sigma_var: None,
        sigma_exact: None,
        converged: None,
        seed: point_seed(
            config.optimizer.seed,
            SEED_TAG_POINT,
            &[c.ib as u64, c.ie as u64, c.im as u64, c.id as u64],
        ),
        wall_time_ms: 0,
    };

    if wants_exact {
        let spectrum = &exact_pairs[&(c.ie, c.im)];
        let thermo = spectrum.thermo(c.beta)?;
        row.f_exact = Some(thermo.free_energy);
        if sigma {
            let f0 = exact_baselines[&c.im].thermo(c.beta)?.free_energy;
            row.sigma_exact = Some(string_tension_from_free_energies(
                &params,
                thermo.free_energy,
                f0,
            ));
        }
    }

    let mut solve = None;
    if wants_var {
        let result = if sigma && c.epsilon == 0.0 {
            // ε = 0 rows reuse the shared baseline solve, so their σ is
            // exactly zero and the baseline is solved once per (β, μ, p).
            var_baselines[&(c.ib, c.im, c.id)].clone()
        } else {
            let spec = ObjectiveSpec::new(params.hamiltonian(), c.beta)?;
            let mut opt = config.optimizer;
            opt.depth = c.depth;
            opt.seed = row.seed;
            minimize(&spec, &opt)?
        };
        row.seed = result.seed;
        row.f_var = Some(result.free_energy);
        row.e_var = Some(result.energy);
        row.s_var = Some(result.entropy);
        row.converged = Some(result.converged);
        if sigma {
            let f0 = var_baselines[&(c.ib, c.im, c.id)].free_energy;
            row.sigma_var = Some(string_tension_from_free_energies(
                &params,
                result.free_energy,
                f0,
            ));
        }
        solve = Some(result);
    }

    row.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok((row, solve))
}

#[derive(Serialize)]
struct Audit<'a> {
    study: &'static str,
    mode: SweepMode,
    master_seed: u64,
    workers: usize,
    model: &'a SchwingerParams,
    optimizer: &'a OptimizerConfig,
    t_grid: Vec<f64>,
    beta_grid: Vec<f64>,
    epsilon_grid: &'a [f64],
    mu_grid: &'a [f64],
    depth_grid: &'a [usize],
    rows: Vec<AuditRow>,
}

#[derive(Serialize)]
struct AuditRow {
    t: f64,
    beta: f64,
    epsilon: f64,
    mu: f64,
    depth: usize,
    seed: u64,
    f_var: Option<f64>,
    f_exact: Option<f64>,
    sigma_var: Option<f64>,
    sigma_exact: Option<f64>,
    converged: Option<bool>,
    restarts_used: Option<usize>,
    trace: Option<Vec<(usize, f64)>>,
}

fn render_audit(
    kind: StudyKind,
    config: &SweepConfig,
    grid: &ResolvedGrid,
    rows: &[RowWithTrace],
) -> Result<String> {
    let audit = Audit {
        study: kind.name(),
        mode: config.mode,
        master_seed: config.optimizer.seed,
        workers: config.workers,
        model: &config.model,
        optimizer: &config.optimizer,
        t_grid: grid.temps.iter().map(|&(t, _)| t).collect(),
        beta_grid: grid.temps.iter().map(|&(_, b)| b).collect(),
        epsilon_grid: &grid.epsilons,
        mu_grid: &grid.mus,
        depth_grid: &grid.depths,
        rows: rows
            .iter()
            .map(|(r, solve)| AuditRow {
                t: r.t,
                beta: r.beta,
                epsilon: r.epsilon,
                mu: r.mu,
                depth: r.depth,
                seed: r.seed,
                f_var: r.f_var,
                f_exact: r.f_exact,
                sigma_var: r.sigma_var,
                sigma_exact: r.sigma_exact,
                converged: r.converged,
                restarts_used: solve.as_ref().map(|s| s.restarts_used),
                trace: solve.as_ref().map(|s| s.trace.clone()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&audit).map_err(|e| Error::Serialization(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::OptimizerKind;
    use tempfile::tempdir;

    fn cheap_optimizer() -> OptimizerConfig {
        OptimizerConfig {
            depth: 1,
            restarts: 2,
            max_iters: 150,
            tol: 1e-7,
            step: 0.05,
            optimizer: OptimizerKind::Gradient,
            seed: 11,
        }
    }

    fn small_model() -> SchwingerParams {
        SchwingerParams::from_hopping(2, 1.0, 1.0, 1.0, 0.5, 0.0).unwrap()
    }

    fn base_config(dir: &std::path::Path, name: &str) -> SweepConfig {
        SweepConfig::new(small_model(), cheap_optimizer(), dir.join(name))
    }

    #[test]
    fn grid_validation_errors() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "a.csv");
        assert!(matches!(
            run_convergence_study(&config),
            Err(Error::Config(_))
        ));

        config.beta_grid = Some(vec![1.0]);
        config.t_grid = Some(vec![1.0]);
        assert!(matches!(
            run_convergence_study(&config),
            Err(Error::Config(_))
        ));

        config.t_grid = None;
        config.depth_grid = Some(vec![]);
        assert!(matches!(
            run_convergence_study(&config),
            Err(Error::Config(_))
        ));

        config.depth_grid = Some(vec![0, 1]);
        config.max_points = 1;
        assert!(matches!(
            run_convergence_study(&config),
            Err(Error::Config(_))
        ));

        config.max_points = DEFAULT_MAX_GRID_POINTS;
        config.workers = 0;
        assert!(matches!(
            run_convergence_study(&config),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn tension_requires_single_mu_and_surface_single_epsilon() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "b.csv");
        config.beta_grid = Some(vec![1.0]);
        config.mu_grid = Some(vec![0.0, 1.0]);
        assert!(matches!(
            run_tension_vs_temperature(&config),
            Err(Error::Config(_))
        ));

        let mut config = base_config(dir.path(), "c.csv");
        config.t_grid = Some(vec![1.0]);
        config.epsilon_grid = Some(vec![0.0, 0.5]);
        assert!(matches!(
            run_tension_surface(&config),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn convergence_rows_are_ordered_and_complete() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "conv.csv");
        config.beta_grid = Some(vec![0.5, 2.0]);
        config.depth_grid = Some(vec![0, 1]);
        let rows = run_convergence_study(&config).unwrap();
        assert_eq!(rows.len(), 4);
        let coords: Vec<(f64, usize)> = rows.iter().map(|r| (r.beta, r.depth)).collect();
        assert_eq!(coords, vec![(0.5, 0), (0.5, 1), (2.0, 0), (2.0, 1)]);
        for r in &rows {
            assert!(r.f_var.is_some() && r.f_exact.is_some());
            assert!(r.sigma_var.is_none() && r.sigma_exact.is_none());
            assert!((r.t - 1.0 / r.beta).abs() < 1e-15);
            // Variational bound in mode = both.
            assert!(r.f_var.unwrap() >= r.f_exact.unwrap() - 1e-9);
        }
        assert!(config.output_path.exists());
        assert!(config.output_path.with_extension("json").exists());
    }

    #[test]
    fn tension_rows_recompute_sigma_from_free_energies() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "ten.csv");
        config.t_grid = Some(vec![1.0, 2.0]);
        config.epsilon_grid = Some(vec![0.0, 0.5]);
        let rows = run_tension_vs_temperature(&config).unwrap();
        assert_eq!(rows.len(), 4);

        let norm = 2.0 * 1.0 * 0.5; // N g a
        for r in &rows {
            if r.epsilon == 0.0 {
                assert_eq!(r.sigma_var, Some(0.0));
                assert_eq!(r.sigma_exact, Some(0.0));
                continue;
            }
            let f0_var = rows
                .iter()
                .find(|x| x.beta == r.beta && x.epsilon == 0.0)
                .and_then(|x| x.f_var)
                .unwrap();
            let offset = small_model()
                .with_background_field(r.epsilon)
                .unwrap()
                .trial_charge_offset();
            let expect = (r.f_var.unwrap() - f0_var - offset) / norm;
            assert!((r.sigma_var.unwrap() - expect).abs() < 1e-12);

            let f0_exact = rows
                .iter()
                .find(|x| x.beta == r.beta && x.epsilon == 0.0)
                .and_then(|x| x.f_exact)
                .unwrap();
            let expect = (r.f_exact.unwrap() - f0_exact - offset) / norm;
            assert!((r.sigma_exact.unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn full_convergence_grid_emits_beta_times_depth_rows() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "grid.csv");
        config.optimizer.restarts = 1;
        config.optimizer.max_iters = 40;
        config.beta_grid = Some(vec![0.1, 1.0, 10.0]);
        config.depth_grid = Some(vec![1, 2, 3, 4, 5, 6]);
        let rows = run_convergence_study(&config).unwrap();
        assert_eq!(rows.len(), 18);

        // The audit sidecar carries per-row optimizer traces.
        let audit: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(config.output_path.with_extension("json")).unwrap(),
        )
        .unwrap();
        assert_eq!(audit["rows"].as_array().unwrap().len(), 18);
        assert!(audit["rows"][0]["trace"].as_array().unwrap().len() > 1);
        assert_eq!(audit["study"], "convergence");
    }

    #[test]
    fn exact_mode_leaves_variational_columns_empty() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "ex.csv");
        config.mode = SweepMode::Exact;
        config.t_grid = Some(vec![1.0]);
        config.epsilon_grid = Some(vec![0.5]);
        let rows = run_tension_vs_temperature(&config).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert!(r.f_var.is_none() && r.converged.is_none() && r.sigma_var.is_none());
        assert!(r.f_exact.is_some() && r.sigma_exact.is_some());
    }

    #[test]
    fn csv_is_deterministic_and_worker_independent() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "det1.csv");
        config.beta_grid = Some(vec![0.5, 1.0]);
        config.epsilon_grid = Some(vec![0.0, 0.5]);
        let rows1 = run_tension_vs_temperature(&config).unwrap();
        let csv1 = std::fs::read_to_string(&config.output_path).unwrap();

        let mut config2 = config.clone();
        config2.output_path = dir.path().join("det2.csv");
        config2.workers = 2;
        let rows2 = run_tension_vs_temperature(&config2).unwrap();
        let csv2 = std::fs::read_to_string(&config2.output_path).unwrap();

        assert_eq!(rows1.len(), rows2.len());
        for (a, b) in rows1.iter().zip(&rows2) {
            let mut a = a.clone();
            let mut b = b.clone();
            a.wall_time_ms = 0;
            b.wall_time_ms = 0;
            assert_eq!(a, b);
        }
        assert_eq!(strip_wall_time(&csv1), strip_wall_time(&csv2));
    }

    pub(crate) fn strip_wall_time(csv: &str) -> String {
        let mut out = String::new();
        for line in csv.lines() {
            let fields: Vec<&str> = line.split(',').collect();
            let kept: Vec<&str> = fields
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != 13)
                .map(|(_, f)| *f)
                .collect();
            out.push_str(&kept.join(","));
            out.push('\n');
        }
        out
    }

    #[test]
    fn ln_columns_only_for_positive_sigma() {
        let rows = vec![SweepRow {
            t: 1.0,
            beta: 1.0,
            epsilon: 0.0,
            mu: 0.0,
            depth: 1,
            f_var: Some(-1.0),
            e_var: Some(-0.5),
            s_var: Some(0.5),
            f_exact: Some(-1.1),
            sigma_var: Some(0.0),
            sigma_exact: Some(0.5),
            converged: Some(true),
            seed: 3,
            wall_time_ms: 1,
        }];
        let csv = render_csv(&rows, true);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].ends_with("ln_sigma_var,ln_sigma_exact"));
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields[14], "");
        assert_eq!(fields[15], (0.5f64).ln().to_string());
    }

    #[test]
    fn single_point_grid_gives_single_row() {
        let dir = tempdir().unwrap();
        let mut config = base_config(dir.path(), "one.csv");
        config.mode = SweepMode::Exact;
        config.t_grid = Some(vec![2.0]);
        config.epsilon_grid = Some(vec![0.5]);
        config.mu_grid = Some(vec![0.5]);
        let rows = run_tension_surface(&config).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mu, 0.5);
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| -2.0 * x + 0.7).collect();
        let (slope, intercept, r2) = linear_fit(&xs, &ys).unwrap();
        assert!((slope + 2.0).abs() < 1e-12);
        assert!((intercept - 0.7).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
        assert!(linear_fit(&xs[..1], &ys[..1]).is_err());
    }
}
