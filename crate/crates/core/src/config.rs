//! TOML config-file schema shared by the CLI subcommands.
//!
//! Precedence is defaults < config file < command-line flags. A full file
//! looks like:
//!
//! ```toml
//! [model]
//! n = 6
//! m = 1.0
//! g = 1.0
//! a = 0.5            # or: hopping = 1.0 (consistency-checked if both)
//! epsilon = 0.5
//! mu = 0.0
//!
//! [optimizer]
//! depth = 3
//! restarts = 8
//! max_iters = 2000
//! tol = 1e-7
//! step = 0.05
//! optimizer = "gradient"   # or "simplex"
//! seed = 42
//!
//! [sweep]
//! mode = "both"            # variational | exact | both
//! t = [0.5, 1.0, 2.0]      # or: beta = [...] (exactly one)
//! epsilon = [0.0, 0.5]
//! mu = [0.0]
//! depth = [3]
//! out = "rows.csv"
//! workers = 2
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::optimizer::OptimizerConfig;
use crate::schwinger::{GaussLawForm, SchwingerParams};
use crate::sweep::SweepMode;

/// Default model when neither file nor flags specify one: the N = 4,
/// m = g = ϖ = 1 instance.
pub const DEFAULT_N: usize = 4;
pub const DEFAULT_MASS: f64 = 1.0;
pub const DEFAULT_COUPLING: f64 = 1.0;
pub const DEFAULT_SPACING: f64 = 0.5;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub optimizer: Option<OptimizerConfig>,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: Option<usize>,
    pub m: Option<f64>,
    pub g: Option<f64>,
    pub a: Option<f64>,
    pub hopping: Option<f64>,
    pub epsilon: Option<f64>,
    pub mu: Option<f64>,
    pub gauss_law: Option<GaussLawForm>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub mode: Option<SweepMode>,
    pub beta: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub epsilon: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub depth: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub max_points: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Model values collected from command-line flags.
#[derive(Debug, Default, Clone, Copy)]
pub struct ModelOverrides {
    pub n: Option<usize>,
    pub m: Option<f64>,
    pub g: Option<f64>,
    pub a: Option<f64>,
    pub hopping: Option<f64>,
    pub epsilon: Option<f64>,
    pub mu: Option<f64>,
}

/// Merge file section and flag overrides into validated model parameters.
pub fn resolve_model(section: &ModelSection, flags: &ModelOverrides) -> Result<SchwingerParams> {
    let n = flags.n.or(section.n).unwrap_or(DEFAULT_N);
    let m = flags.m.or(section.m).unwrap_or(DEFAULT_MASS);
    let g = flags.g.or(section.g).unwrap_or(DEFAULT_COUPLING);
    let epsilon = flags.epsilon.or(section.epsilon).unwrap_or(0.0);
    let mu = flags.mu.or(section.mu).unwrap_or(0.0);
    let a = flags.a.or(section.a);
    let hopping = flags.hopping.or(section.hopping);
    match (a, hopping) {
        (Some(a), Some(w)) => SchwingerParams::checked(n, m, g, a, w, epsilon, mu),
        (Some(a), None) => SchwingerParams::from_spacing(n, m, g, a, epsilon, mu),
        (None, Some(w)) => SchwingerParams::from_hopping(n, m, g, w, epsilon, mu),
        (None, None) => SchwingerParams::from_spacing(n, m, g, DEFAULT_SPACING, epsilon, mu),
    }
}

/// Optimizer values collected from command-line flags.
#[derive(Debug, Default, Clone, Copy)]
pub struct OptimizerOverrides {
    pub depth: Option<usize>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub step: Option<f64>,
    pub optimizer: Option<crate::optimizer::OptimizerKind>,
    pub seed: Option<u64>,
}

pub fn resolve_optimizer(
    section: Option<&OptimizerConfig>,
    flags: &OptimizerOverrides,
) -> OptimizerConfig {
    let mut cfg = section.copied().unwrap_or_default();
    if let Some(v) = flags.depth {
        cfg.depth = v;
    }
    if let Some(v) = flags.restarts {
        cfg.restarts = v;
    }
    if let Some(v) = flags.max_iters {
        cfg.max_iters = v;
    }
    if let Some(v) = flags.tol {
        cfg.tol = v;
    }
    if let Some(v) = flags.step {
        cfg.step = v;
    }
    if let Some(v) = flags.optimizer {
        cfg.optimizer = v;
    }
    if let Some(v) = flags.seed {
        cfg.seed = v;
    }
    cfg
}
