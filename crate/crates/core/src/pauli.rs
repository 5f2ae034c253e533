//! Real-weighted sums of Pauli strings and their dense realizations.
//!
//! A [`PauliSum`] is the Hamiltonian representation used throughout the
//! crate: a list of tensor products of {I, X, Y, Z} over `n_sites` qubits,
//! each with a finite real coefficient. Sums are kept in canonical form:
//! terms sorted lexicographically by operator string, duplicates merged,
//! and coefficients below [`COEFF_TOLERANCE`] dropped.
//!
//! Sites are indexed 1-based with site 1 as the leftmost tensor factor.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::ansatz::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg;

/// Terms whose |coefficient| falls at or below this are dropped when a sum
/// is canonicalized.
pub const COEFF_TOLERANCE: f64 = 1e-12;

/// Dense realizations refuse registers larger than this (4096 x 4096).
pub const DENSE_SITE_LIMIT: usize = 12;

/// Expectation values discard an imaginary trace residue up to this bound
/// and report a numerical error beyond it.
pub const IMAG_TRACE_TOLERANCE: f64 = 1e-9;

/// Single-site Pauli operator. The derived ordering (I < X < Y < Z) gives
/// the lexicographic term order of canonical sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidParams(format!(
                "unknown Pauli operator '{other}'"
            ))),
        }
    }
}

/// One real-weighted Pauli string on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    coefficient: f64,
    operators: Vec<Pauli>,
}

impl PauliTerm {
    /// Coefficients must be finite; complex weights are unrepresentable by
    /// construction, which keeps every sum Hermitian.
    pub fn new(coefficient: f64, operators: Vec<Pauli>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::InvalidParams(format!(
                "non-finite Pauli coefficient {coefficient}"
            )));
        }
        if operators.is_empty() {
            return Err(Error::InvalidParams(
                "Pauli term needs at least one site".into(),
            ));
        }
        Ok(Self {
            coefficient,
            operators,
        })
    }

    /// The identity string `c · I⊗…⊗I` on `n` sites.
    pub fn identity(n: usize, coefficient: f64) -> Result<Self> {
        Self::new(coefficient, vec![Pauli::I; n])
    }

    /// `c · P_site` with identities elsewhere (`site` is 1-based).
    pub fn single(n: usize, site: usize, op: Pauli, coefficient: f64) -> Result<Self> {
        if site < 1 || site > n {
            return Err(Error::InvalidParams(format!(
                "site {site} out of range 1..={n}"
            )));
        }
        let mut ops = vec![Pauli::I; n];
        ops[site - 1] = op;
        Self::new(coefficient, ops)
    }

    /// `c · P_a ⊗ Q_b` with identities elsewhere (1-based, distinct sites).
    pub fn two_site(
        n: usize,
        site_a: usize,
        op_a: Pauli,
        site_b: usize,
        op_b: Pauli,
        coefficient: f64,
    ) -> Result<Self> {
        if site_a == site_b {
            return Err(Error::InvalidParams(format!(
                "two-site term needs distinct sites, got {site_a} twice"
            )));
        }
        if site_a < 1 || site_a > n || site_b < 1 || site_b > n {
            return Err(Error::InvalidParams(format!(
                "sites ({site_a}, {site_b}) out of range 1..={n}"
            )));
        }
        let mut ops = vec![Pauli::I; n];
        ops[site_a - 1] = op_a;
        ops[site_b - 1] = op_b;
        Self::new(coefficient, ops)
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn operators(&self) -> &[Pauli] {
        &self.operators
    }

    /// Operator at 1-based `site`.
    pub fn op_at(&self, site: usize) -> Pauli {
        self.operators[site - 1]
    }

    /// The string form, e.g. `ZZIIII`.
    pub fn op_string(&self) -> String {
        self.operators.iter().map(|p| p.as_char()).collect()
    }
}

/// A canonical real-weighted sum of Pauli strings on `n_sites` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_sites: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    /// The empty (zero) sum.
    pub fn empty(n_sites: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidParams("register needs at least one site".into()));
        }
        Ok(Self {
            n_sites,
            terms: Vec::new(),
        })
    }

    /// Build a sum from raw terms. Every term must span exactly `n_sites`
    /// sites; the result is canonicalized.
    pub fn from_terms(n_sites: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidParams("register needs at least one site".into()));
        }
        for t in &terms {
            if t.operators.len() != n_sites {
                return Err(Error::DimensionMismatch(format!(
                    "term {} spans {} sites, sum is registered for {}",
                    t.op_string(),
                    t.operators.len(),
                    n_sites
                )));
            }
        }
        Ok(Self {
            n_sites,
            terms: canonical_terms(terms),
        })
    }

    /// Return the canonical form. Sums built through [`PauliSum::from_terms`]
    /// are already canonical, so this is idempotent.
    pub fn canonicalize(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            terms: canonical_terms(self.terms.clone()),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the given operator string (0 if absent).
    pub fn coefficient(&self, operators: &[Pauli]) -> f64 {
        self.terms
            .iter()
            .find(|t| t.operators() == operators)
            .map_or(0.0, |t| t.coefficient())
    }

    /// Coefficient of the all-identity string.
    pub fn identity_coefficient(&self) -> f64 {
        self.coefficient(&vec![Pauli::I; self.n_sites])
    }

    /// Sum with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm::new(t.coefficient * factor, t.operators.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(self.n_sites, terms)
    }

    /// Canonical sum of `self` and `other`; both must share `n_sites`.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch(format!(
                "cannot add sums on {} and {} sites",
                self.n_sites, other.n_sites
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.n_sites, terms)
    }

    /// Dense Hermitian matrix `Σ_k c_k ⊗_j P_{k,j}` with site 1 as the
    /// leftmost tensor factor, under the default size limit.
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        self.to_dense_with_limit(DENSE_SITE_LIMIT)
    }

    /// Dense realization with an explicit site limit.
    pub fn to_dense_with_limit(&self, max_sites: usize) -> Result<DMatrix<C64>> {
        if self.n_sites > max_sites {
            return Err(Error::SizeLimit(format!(
                "dense realization of {} sites exceeds the {max_sites}-site budget",
                self.n_sites
            )));
        }
        let dim = 1usize << self.n_sites;
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        let data = m.as_mut_slice();
        for term in &self.terms {
            let masks = TermMasks::new(term, self.n_sites);
            for col in 0..dim {
                let row = col ^ masks.x_mask;
                data[col * dim + row] += masks.amplitude(col);
            }
        }
        Ok(m)
    }

    /// `Tr[ρ · H]`. The imaginary residue of the trace must stay below
    /// [`IMAG_TRACE_TOLERANCE`] and is discarded.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        let dim = 1usize << self.n_sites;
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "density matrix dimension {} does not match 2^{} = {dim}",
                rho.dim(),
                self.n_sites
            )));
        }
        let m = rho.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for term in &self.terms {
            let masks = TermMasks::new(term, self.n_sites);
            let mut term_acc = C64::new(0.0, 0.0);
            for b in 0..dim {
                // Tr[ρP] = Σ_b ρ[b, b'] · amp(b) with P|b> = amp(b)|b'>.
                term_acc += m[(b, b ^ masks.x_mask)] * masks.sign(b);
            }
            acc += term_acc * masks.coeff_phase;
        }
        if acc.im.abs() >= IMAG_TRACE_TOLERANCE {
            return Err(Error::Numerical(format!(
                "expectation trace has imaginary residue {:.3e}",
                acc.im
            )));
        }
        Ok(acc.re)
    }
}

impl fmt::Display for PauliSum {
    /// Term-dump format: one `<coefficient> <string>` line per term in
    /// canonical order, e.g. `0.5 ZZIIII`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for term in &self.terms {
            writeln!(f, "{} {}", term.coefficient(), term.op_string())?;
        }
        Ok(())
    }
}

/// Bit-mask view of one term: a Pauli string is a generalized permutation,
/// so column `b` holds the single entry `amp(b)` at row `b ^ x_mask`.
struct TermMasks {
    x_mask: usize,
    zy_mask: usize,
    coeff_phase: C64,
}

impl TermMasks {
    fn new(term: &PauliTerm, n: usize) -> Self {
        let mut x_mask = 0usize;
        let mut zy_mask = 0usize;
        let mut n_y = 0usize;
        for (idx, op) in term.operators().iter().enumerate() {
            let bit = 1usize << linalg::site_bit(n, idx + 1);
            match op {
                Pauli::I => {}
                Pauli::X => x_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    zy_mask |= bit;
                    n_y += 1;
                }
                Pauli::Z => zy_mask |= bit,
            }
        }
        let i_pow = match n_y % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        Self {
            x_mask,
            zy_mask,
            coeff_phase: i_pow * term.coefficient(),
        }
    }

    #[inline]
    fn sign(&self, b: usize) -> f64 {
        if (b & self.zy_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    fn amplitude(&self, col: usize) -> C64 {
        self.coeff_phase * self.sign(col)
    }
}

fn canonical_terms(terms: Vec<PauliTerm>) -> Vec<PauliTerm> {
    let mut merged: BTreeMap<Vec<Pauli>, f64> = BTreeMap::new();
    for t in terms {
        *merged.entry(t.operators).or_insert(0.0) += t.coefficient;
    }
    merged
        .into_iter()
        .filter(|(_, c)| c.abs() > COEFF_TOLERANCE)
        .map(|(ops, c)| PauliTerm {
            coefficient: c,
            operators: ops,
        })
        .collect()
}
