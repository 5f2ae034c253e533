//! Variational free-energy objective and its restart-capable minimizer.
//!
//! The objective is `F(ω; β) = Tr[ρ(ω)H] − β⁻¹ S(ω)` over the product-
//! spectrum ansatz. The default minimizer is gradient descent with
//! per-parameter adaptive moments and multi-start; a derivative-free
//! Nelder-Mead simplex is selectable by configuration. Identical seed and
//! configuration produce bit-identical results: restart `r` draws its
//! starting point from a counter-derived sub-seed of the master seed, and
//! restarts merge by lowest `F` with ties broken by lowest restart index.

mod evaluator;
mod simplex;

pub(crate) use evaluator::Evaluator;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::ansatz::{self, AnsatzParams};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Convergence is declared when |ΔF| over this many iterations drops below
/// the configured tolerance.
pub const CONVERGENCE_WINDOW: usize = 25;

/// Central-difference step of the diagnostic [`gradient`] operation.
pub const FD_STEP: f64 = 1e-4;

/// What to minimize: a Hamiltonian at an inverse temperature β = 1/T.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    hamiltonian: PauliSum,
    beta: f64,
}

impl ObjectiveSpec {
    pub fn new(hamiltonian: PauliSum, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!(
                "inverse temperature must be positive and finite, got {beta}"
            )));
        }
        Ok(Self { hamiltonian, beta })
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_sites(&self) -> usize {
        self.hamiltonian.n_sites()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Gradient,
    Simplex,
}

/// Knobs of [`minimize`]; every field has a CLI flag and a config-file key.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Circuit depth p (number of blocks).
    pub depth: usize,
    /// Independent starts; the best result wins.
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Convergence tolerance on |ΔF| over [`CONVERGENCE_WINDOW`] iterations.
    pub tol: f64,
    /// Base step size of the gradient optimizer (and the initial simplex
    /// displacement of the fallback).
    pub step: f64,
    pub optimizer: OptimizerKind,
    /// Master seed; restart sub-seeds derive from it by counter.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            depth: 2,
            restarts: 8,
            max_iters: 2000,
            tol: 1e-7,
            step: 0.05,
            optimizer: OptimizerKind::Gradient,
            seed: 42,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if self.max_iters < 1 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Config(format!("step must be positive, got {}", self.step)));
        }
        Ok(())
    }
}

/// Converged variational thermodynamics with optimizer metadata.
#[derive(Debug, Clone, Serialize)]
pub struct ThermalResult {
    pub free_energy: f64,
    pub energy: f64,
    pub entropy: f64,
    pub params: AnsatzParams,
    /// `(iteration, F)` pairs of the winning restart.
    pub trace: Vec<(usize, f64)>,
    pub seed: u64,
    pub restarts_used: usize,
    pub converged: bool,
}

/// `(F, E, S)` of the realized state: `E = Tr[ρ(ω)H]`, `S = S(θ)`,
/// `F = E − β⁻¹S`. This is the reference path through the full density
/// matrix; the optimizer's internal evaluator is cross-checked against it.
pub fn objective(spec: &ObjectiveSpec, params: &AnsatzParams) -> Result<(f64, f64, f64)> {
    if params.n_sites() != spec.n_sites() {
        return Err(Error::DimensionMismatch(format!(
            "ansatz spans {} sites, Hamiltonian {}",
            params.n_sites(),
            spec.n_sites()
        )));
    }
    let rho = ansatz::realize_state(params);
    let energy = spec.hamiltonian.expectation(&rho)?;
    let entropy = ansatz::entropy(params.theta());
    Ok((energy - entropy / spec.beta, energy, entropy))
}

/// Diagnostic gradient of `F`: central finite differences of the energy
/// with step [`FD_STEP`] per angle, with the entropy part of the θ-gradient
/// replaced by the analytic `dS/dθ_i = sin(2θ_i) ln(cot²θ_i)` (clamped near
/// pure states). Flat layout `[θ | per block: ζ, λ, α]`.
pub fn gradient(spec: &ObjectiveSpec, params: &AnsatzParams) -> Result<Vec<f64>> {
    if params.n_sites() != spec.n_sites() {
        return Err(Error::DimensionMismatch(format!(
            "ansatz spans {} sites, Hamiltonian {}",
            params.n_sites(),
            spec.n_sites()
        )));
    }
    let n = params.n_sites();
    let eval = Evaluator::new(&spec.hamiltonian, spec.beta, params.depth())?;
    let flat = params.to_flat();
    let ds = ansatz::entropy_theta_gradient(params.theta());
    let mut grad = Vec::with_capacity(flat.len());
    for k in 0..flat.len() {
        let mut plus = flat.clone();
        plus[k] += FD_STEP;
        let mut minus = flat.clone();
        minus[k] -= FD_STEP;
        let de = (eval.value(&plus).1 - eval.value(&minus).1) / (2.0 * FD_STEP);
        let entropy_part = if k < n { -ds[k] / spec.beta } else { 0.0 };
        grad.push(de + entropy_part);
    }
    Ok(grad)
}

/// Minimize the free energy over the ansatz parameters.
///
/// Runs `config.restarts` independent starts (concurrently; restarts are
/// embarrassingly parallel) and returns the best. Non-convergence is
/// reported through [`ThermalResult::converged`], never as an error.
pub fn minimize(spec: &ObjectiveSpec, config: &OptimizerConfig) -> Result<ThermalResult> {
    config.validate()?;
    let eval = Evaluator::new(&spec.hamiltonian, spec.beta, config.depth)?;

    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(&eval, config, r as u64))
        .collect();

    let winner = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.best_f.total_cmp(&b.best_f).then(ia.cmp(ib)))
        .map(|(_, o)| o)
        .expect("at least one restart");

    let params = AnsatzParams::from_flat(eval.n_sites(), config.depth, &winner.best_x)?;
    Ok(ThermalResult {
        free_energy: winner.best_f,
        energy: winner.best_e,
        entropy: winner.best_s,
        params,
        trace: winner.trace.into_iter().enumerate().collect(),
        seed: config.seed,
        restarts_used: config.restarts,
        converged: winner.converged,
    })
}

struct RestartOutcome {
    best_x: Vec<f64>,
    best_f: f64,
    best_e: f64,
    best_s: f64,
    trace: Vec<f64>,
    converged: bool,
}

/// SplitMix64 finalizer; the restart sub-seed stream.
fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed of restart `r` under master seed `seed`.
pub fn restart_seed(seed: u64, r: u64) -> u64 {
    splitmix64(seed ^ splitmix64(r.wrapping_add(1)))
}

/// Starting point: θ_i ~ U(0.05, π/2 − 0.05), circuit angles ~ N(0, 0.01).
fn initial_point(n: usize, depth: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let theta_dist = Uniform::new(0.05, FRAC_PI_2 - 0.05).expect("valid range");
    let angle_dist = Normal::new(0.0, 0.01).expect("valid normal");
    let mut x = Vec::with_capacity(AnsatzParams::flat_len(n, depth));
    for _ in 0..n {
        x.push(theta_dist.sample(rng));
    }
    for _ in 0..depth * (3 * n - 1) {
        x.push(angle_dist.sample(rng));
    }
    x
}

fn run_restart(eval: &Evaluator, config: &OptimizerConfig, r: u64) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(config.seed, r));
    let x0 = initial_point(eval.n_sites(), config.depth, &mut rng);
    match config.optimizer {
        OptimizerKind::Gradient => adam_descent(eval, config, x0),
        OptimizerKind::Simplex => {
            let out = simplex::nelder_mead(
                |x| eval.value(x).0,
                &x0,
                &simplex::SimplexOptions {
                    max_iters: config.max_iters,
                    tol: config.tol,
                    window: CONVERGENCE_WINDOW,
                    init_step: config.step.max(0.05),
                },
            );
            let (f, e, s) = eval.value(&out.best_x);
            debug_assert!((f - out.best_f).abs() < 1e-12);
            RestartOutcome {
                best_x: out.best_x,
                best_f: f,
                best_e: e,
                best_s: s,
                trace: out.trace,
                converged: out.converged,
            }
        }
    }
}

/// Gradient descent with Adam-style per-parameter moment scaling.
fn adam_descent(eval: &Evaluator, config: &OptimizerConfig, mut x: Vec<f64>) -> RestartOutcome {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    let d = x.len();
    let mut m = vec![0.0; d];
    let mut v = vec![0.0; d];
    let mut grad = vec![0.0; d];

    let mut trace = Vec::with_capacity(config.max_iters.min(4096));
    let mut best_f = f64::INFINITY;
    let mut best = (x.clone(), 0.0, 0.0);
    let mut converged = false;

    for it in 0..config.max_iters {
        let (f, e, s) = eval.value_and_grad(&x, &mut grad);
        trace.push(f);
        if f < best_f {
            best_f = f;
            best = (x.clone(), e, s);
        }
        if it >= CONVERGENCE_WINDOW && (trace[it] - trace[it - CONVERGENCE_WINDOW]).abs() < config.tol
        {
            converged = true;
            break;
        }
        let t = (it + 1) as f64;
        let bias1 = 1.0 - BETA1.powf(t);
        let bias2 = 1.0 - BETA2.powf(t);
        for k in 0..d {
            m[k] = BETA1 * m[k] + (1.0 - BETA1) * grad[k];
            v[k] = BETA2 * v[k] + (1.0 - BETA2) * grad[k] * grad[k];
            let m_hat = m[k] / bias1;
            let v_hat = v[k] / bias2;
            x[k] -= config.step * m_hat / (v_hat.sqrt() + EPS);
        }
    }

    RestartOutcome {
        best_x: best.0,
        best_f,
        best_e: best.1,
        best_s: best.2,
        trace,
        converged,
    }
}
