//! Variational Gibbs-state simulation of the lattice Schwinger model.
//!
//! This crate prepares thermal (Gibbs) states of the lattice Schwinger
//! model with a product-spectrum ansatz — a parameterized product mixed
//! state whose entropy is analytic, conjugated by a layered circuit — and
//! evaluates the string tension between a pair of trial charges as a
//! normalized free-energy difference
//!
//! ```text
//! σ_ε(β) = (F_ε(β) − F₀(β) − f_ε) / (N g a).
//! ```
//!
//! Everything runs against an exact-diagonalization oracle at desk scale
//! (N ≤ 12 sites), so variational results are always checkable against
//! ground truth. The crate ships:
//!
//! * [`pauli`] — real-weighted Pauli-string sums and dense realizations;
//! * [`schwinger`] — the model Hamiltonian with background field ε and
//!   chemical potential μ, plus the trial-charge offset `f_ε`;
//! * [`ansatz`] — the product-spectrum ansatz ρ(ω) = U(φ) ρ₀(θ) U†(φ);
//! * [`optimizer`] — the free-energy objective and a restart-capable
//!   minimizer (adaptive gradient descent, simplex fallback);
//! * [`oracle`] — exact free energy, entropy and string tension by full
//!   diagonalization;
//! * [`sweep`] — reproducible parameter sweeps over (β or T, ε, μ, p)
//!   emitting CSV tables with JSON audit sidecars.
//!
//! The `schwinger-thermal` binary exposes all of it behind the `terms`,
//! `exact`, `optimize` and `sweep` subcommands.

pub mod ansatz;
pub mod config;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod oracle;
pub mod pauli;
pub mod schwinger;
pub mod sweep;

pub use ansatz::{AnsatzParams, Block, DensityMatrix};
pub use error::{Error, Result};
pub use optimizer::{ObjectiveSpec, OptimizerConfig, OptimizerKind, ThermalResult};
pub use oracle::{Spectrum, ThermoPoint};
pub use pauli::{Pauli, PauliSum, PauliTerm};
pub use schwinger::{GaussLawForm, SchwingerParams};
pub use sweep::{SweepConfig, SweepMode, SweepRow};
