//! Qubit Hamiltonian of the lattice Schwinger model with a background
//! electric field and a chemical potential.
//!
//! The model is 1+1D QED with one fermion flavor, discretized with staggered
//! (Kogut-Susskind) fermions on an open chain of N sites (N even: fermion
//! and antifermion components alternate). Fixing the boundary electric field
//! `L_{0,1} = ε` lets the Gauss law resolve every link field in terms of the
//! fermion densities, so the gauge links drop out of the Hamiltonian at the
//! price of long-range density-density interactions. After a Jordan-Wigner
//! transformation with occupation `n_l = (Z_l + 1)/2` the qubit Hamiltonian
//! is
//!
//! ```text
//! H_ε = (ϖ/2) Σ_{j=1}^{N-1} (X_j X_{j+1} + Y_j Y_{j+1})
//!     + (m/2) Σ_{j=1}^{N}   (-1)^j Z_j
//!     + (g²a/2) Σ_{j=1}^{N-1} L_j²,
//!
//! L_j = ε + (1/2) Σ_{l=1}^{j} [Z_l + (-1)^l],
//! ```
//!
//! with hopping `ϖ = 1/(2a)`, mass `m`, coupling `g` and lattice spacing
//! `a`. String phases from the Jordan-Wigner transformation cancel for
//! nearest-neighbor hopping and are absorbed into the real coefficients.
//!
//! At finite density the Hamiltonian becomes
//! `G_ε(μ) = H_ε + (μ/2) Σ_j Z_j`: the chemical potential couples to the
//! net staggered charge `Q = (1/2) Σ_j Z_j` with the sign chosen so that
//! positive μ populates the charge sector that screens a positive
//! background field ε. A negative surplus charge near the left end lowers
//! every downstream link field `ε + Q_j`, so raising μ at fixed T weakens
//! the string tension and can drive it negative.
//!
//! The `ε`-only part of the electric energy,
//! `f_ε = (g²a(N-1)/2)(ε² − ε/2)`, is the trial-charge offset subtracted
//! from free-energy differences when evaluating the string tension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};

/// Tolerance on `ϖ = 1/(2a)` when both scales are supplied.
pub const SCALE_CONSISTENCY_TOL: f64 = 1e-12;

/// Which form of the Gauss-law field enters the electric energy.
///
/// `HalfFactor` (the default) is the form consistent with resolving the
/// Gauss law through the occupation `n_l = (Z_l + 1)/2`. `Literal` drops
/// the 1/2 inside the sum, `L_j = ε + Σ_l [Z_l + (-1)^l]`, and is provided
/// for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaussLawForm {
    #[default]
    HalfFactor,
    Literal,
}

/// Full physical specification of one Hamiltonian instance:
/// `(N, m, g, a, ϖ, ε, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchwingerParams {
    n_sites: usize,
    mass: f64,
    coupling: f64,
    lattice_spacing: f64,
    hopping: f64,
    background_field: f64,
    chemical_potential: f64,
}

impl SchwingerParams {
    /// Build from the lattice spacing; the hopping is `ϖ = 1/(2a)`.
    pub fn from_spacing(
        n_sites: usize,
        mass: f64,
        coupling: f64,
        spacing: f64,
        background_field: f64,
        chemical_potential: f64,
    ) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidParams(format!(
                "lattice spacing must be positive, got {spacing}"
            )));
        }
        Self::validated(
            n_sites,
            mass,
            coupling,
            spacing,
            1.0 / (2.0 * spacing),
            background_field,
            chemical_potential,
        )
    }

    /// Build from the hopping strength; the spacing is `a = 1/(2ϖ)`.
    pub fn from_hopping(
        n_sites: usize,
        mass: f64,
        coupling: f64,
        hopping: f64,
        background_field: f64,
        chemical_potential: f64,
    ) -> Result<Self> {
        if !(hopping.is_finite() && hopping > 0.0) {
            return Err(Error::InvalidParams(format!(
                "hopping must be positive, got {hopping}"
            )));
        }
        Self::validated(
            n_sites,
            mass,
            coupling,
            1.0 / (2.0 * hopping),
            hopping,
            background_field,
            chemical_potential,
        )
    }

    /// Build with both scales supplied; they must satisfy `ϖ = 1/(2a)`
    /// within [`SCALE_CONSISTENCY_TOL`].
    pub fn checked(
        n_sites: usize,
        mass: f64,
        coupling: f64,
        spacing: f64,
        hopping: f64,
        background_field: f64,
        chemical_potential: f64,
    ) -> Result<Self> {
        if spacing <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "lattice spacing must be positive, got {spacing}"
            )));
        }
        if (hopping - 1.0 / (2.0 * spacing)).abs() > SCALE_CONSISTENCY_TOL {
            return Err(Error::InvalidParams(format!(
                "hopping {hopping} inconsistent with 1/(2a) = {}",
                1.0 / (2.0 * spacing)
            )));
        }
        Self::validated(
            n_sites,
            mass,
            coupling,
            spacing,
            hopping,
            background_field,
            chemical_potential,
        )
    }

    fn validated(
        n_sites: usize,
        mass: f64,
        coupling: f64,
        lattice_spacing: f64,
        hopping: f64,
        background_field: f64,
        chemical_potential: f64,
    ) -> Result<Self> {
        if n_sites < 2 || !n_sites.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "staggered chain needs an even number of sites >= 2, got {n_sites}"
            )));
        }
        if n_sites > 64 {
            return Err(Error::InvalidParams(format!(
                "chains longer than 64 sites are unsupported, got {n_sites}"
            )));
        }
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::InvalidParams(format!(
                "coupling must be positive, got {coupling}"
            )));
        }
        for (name, v) in [
            ("mass", mass),
            ("lattice spacing", lattice_spacing),
            ("hopping", hopping),
            ("background field", background_field),
            ("chemical potential", chemical_potential),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self {
            n_sites,
            mass,
            coupling,
            lattice_spacing,
            hopping,
            background_field,
            chemical_potential,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn lattice_spacing(&self) -> f64 {
        self.lattice_spacing
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn background_field(&self) -> f64 {
        self.background_field
    }

    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    /// Same parameters with a different background field.
    pub fn with_background_field(mut self, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::InvalidParams(format!(
                "background field must be finite, got {epsilon}"
            )));
        }
        self.background_field = epsilon;
        Ok(self)
    }

    /// Same parameters with a different chemical potential.
    pub fn with_chemical_potential(mut self, mu: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParams(format!(
                "chemical potential must be finite, got {mu}"
            )));
        }
        self.chemical_potential = mu;
        Ok(self)
    }

    /// The canonical qubit Hamiltonian `G_ε(μ) = H_ε + (μ/2) Σ_j Z_j`
    /// (which is `H_ε` itself at μ = 0).
    pub fn hamiltonian(&self) -> PauliSum {
        self.hamiltonian_with(GaussLawForm::default())
    }

    /// Hamiltonian under an explicit Gauss-law convention.
    pub fn hamiltonian_with(&self, form: GaussLawForm) -> PauliSum {
        let n = self.n_sites;
        let mut terms = Vec::new();
        terms.extend(self.hopping_terms());
        terms.extend(self.mass_terms());
        terms.extend(self.electric_terms(form));
        terms.extend(self.chemical_terms());
        PauliSum::from_terms(n, terms).expect("validated parameters yield finite terms")
    }

    /// Nearest-neighbor hopping `(ϖ/2) Σ_j (X_j X_{j+1} + Y_j Y_{j+1})`.
    pub fn hopping_term(&self) -> PauliSum {
        PauliSum::from_terms(self.n_sites, self.hopping_terms())
            .expect("validated parameters yield finite terms")
    }

    /// Staggered mass `(m/2) Σ_j (-1)^j Z_j`.
    pub fn mass_term(&self) -> PauliSum {
        PauliSum::from_terms(self.n_sites, self.mass_terms())
            .expect("validated parameters yield finite terms")
    }

    /// Electric energy `(g²a/2) Σ_j L_j²`, fully expanded into identity,
    /// single-Z and Z_l Z_{l'} strings.
    pub fn electric_term(&self) -> PauliSum {
        self.electric_term_with(GaussLawForm::default())
    }

    /// Electric energy under an explicit Gauss-law convention.
    pub fn electric_term_with(&self, form: GaussLawForm) -> PauliSum {
        PauliSum::from_terms(self.n_sites, self.electric_terms(form))
            .expect("validated parameters yield finite terms")
    }

    /// The resolved electric field on link `j` (1-based, `1 <= j <= N-1`):
    /// `L_j = ε·I + (1/2) Σ_{l=1}^{j} [Z_l + (-1)^l]`.
    pub fn electric_field_operator(&self, link: usize) -> Result<PauliSum> {
        self.electric_field_operator_with(link, GaussLawForm::default())
    }

    /// Resolved link field under an explicit Gauss-law convention.
    pub fn electric_field_operator_with(&self, link: usize, form: GaussLawForm) -> Result<PauliSum> {
        if link < 1 || link >= self.n_sites {
            return Err(Error::InvalidParams(format!(
                "link index {link} out of range 1..={}",
                self.n_sites - 1
            )));
        }
        let field = self.link_field(link, form);
        PauliSum::from_terms(self.n_sites, field.into_terms(self.n_sites))
    }

    /// Trial-charge offset `f_ε = (g²a(N-1)/2)(ε² − ε/2)`: the ε-only part
    /// of the electric energy, subtracted from free-energy differences so
    /// the string tension reflects interaction energy only. Independent of
    /// the chemical potential.
    pub fn trial_charge_offset(&self) -> f64 {
        let eps = self.background_field;
        let n = self.n_sites as f64;
        self.coupling * self.coupling * self.lattice_spacing * (n - 1.0) / 2.0
            * (eps * eps - eps / 2.0)
    }

    fn hopping_terms(&self) -> Vec<PauliTerm> {
        let n = self.n_sites;
        let w = self.hopping / 2.0;
        let mut terms = Vec::with_capacity(2 * (n - 1));
        for j in 1..n {
            terms.push(PauliTerm::two_site(n, j, Pauli::X, j + 1, Pauli::X, w).unwrap());
            terms.push(PauliTerm::two_site(n, j, Pauli::Y, j + 1, Pauli::Y, w).unwrap());
        }
        terms
    }

    fn mass_terms(&self) -> Vec<PauliTerm> {
        let n = self.n_sites;
        (1..=n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                PauliTerm::single(n, j, Pauli::Z, sign * self.mass / 2.0).unwrap()
            })
            .collect()
    }

    fn chemical_terms(&self) -> Vec<PauliTerm> {
        let n = self.n_sites;
        (1..=n)
            .map(|j| PauliTerm::single(n, j, Pauli::Z, self.chemical_potential / 2.0).unwrap())
            .collect()
    }

    fn electric_terms(&self, form: GaussLawForm) -> Vec<PauliTerm> {
        let n = self.n_sites;
        let prefactor = self.coupling * self.coupling * self.lattice_spacing / 2.0;
        let mut acc = DiagonalSum::default();
        for j in 1..n {
            let field = self.link_field(j, form);
            acc.add_scaled_square(&field, prefactor);
        }
        acc.into_terms(n)
    }

    /// `L_j` as an affine combination of I and single-Z strings.
    fn link_field(&self, link: usize, form: GaussLawForm) -> DiagonalSum {
        let z_weight = match form {
            GaussLawForm::HalfFactor => 0.5,
            GaussLawForm::Literal => 1.0,
        };
        let staggered: f64 = (1..=link).map(|l| if l % 2 == 0 { 1.0 } else { -1.0 }).sum();
        let mut sum = DiagonalSum::default();
        sum.add(0, self.background_field + z_weight * staggered);
        for l in 1..=link {
            sum.add(1u64 << (l - 1), z_weight);
        }
        sum
    }
}

/// Sparse accumulator for sums of diagonal (I/Z-only) strings, keyed by a
/// Z-site bitmask (bit l-1 set means Z on site l). Products of diagonal
/// strings obey `Z_S · Z_T = Z_{S xor T}`, which makes squaring exact and
/// purely symbolic.
#[derive(Default)]
struct DiagonalSum {
    entries: std::collections::BTreeMap<u64, f64>,
}

impl DiagonalSum {
    fn add(&mut self, mask: u64, coeff: f64) {
        *self.entries.entry(mask).or_insert(0.0) += coeff;
    }

    /// `self += scale · other²`.
    fn add_scaled_square(&mut self, other: &DiagonalSum, scale: f64) {
        for (&m1, &c1) in &other.entries {
            for (&m2, &c2) in &other.entries {
                self.add(m1 ^ m2, scale * c1 * c2);
            }
        }
    }

    fn into_terms(self, n: usize) -> Vec<PauliTerm> {
        self.entries
            .into_iter()
            .map(|(mask, coeff)| {
                let ops: Vec<Pauli> = (0..n)
                    .map(|site| {
                        if (mask >> site) & 1 == 1 {
                            Pauli::Z
                        } else {
                            Pauli::I
                        }
                    })
                    .collect();
                PauliTerm::new(coeff, ops).expect("finite diagonal coefficient")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C64;

    fn ops(s: &str) -> Vec<Pauli> {
        s.chars().map(|c| Pauli::from_char(c).unwrap()).collect()
    }

    fn n2_params() -> SchwingerParams {
        SchwingerParams::from_spacing(2, 1.0, 1.0, 0.5, 0.0, 0.0).unwrap()
    }

    #[test]
    fn hopping_only_instance() {
        let p = SchwingerParams::from_hopping(2, 0.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let h = p.hopping_term();
        assert_eq!(h.len(), 2);
        assert_eq!(h.coefficient(&ops("XX")), 0.5);
        assert_eq!(h.coefficient(&ops("YY")), 0.5);

        // The g -> 0 limit of the full Hamiltonian: at sub-tolerance
        // coupling the electric coefficients cancel in canonicalization,
        // leaving exactly the hopping pair.
        let p = SchwingerParams::from_hopping(2, 0.0, 1e-8, 1.0, 0.0, 0.0).unwrap();
        let h = p.hamiltonian();
        assert_eq!(h.len(), 2);
        assert_eq!(h.coefficient(&ops("XX")), 0.5);
        assert_eq!(h.coefficient(&ops("YY")), 0.5);
    }

    #[test]
    fn n2_full_expansion_matches_hand_oracle() {
        // Independent hand expansion for N=2, m=1, g=1, a=0.5, ε=0, μ=0:
        // the only link field is L_1 = (Z_1 - 1)/2, so L_1² = (I - Z_1)/2 and
        // the electric term is (g²a/2)L_1² = 0.125·I − 0.125·Z_1. Together
        // with mass and hopping:
        let h = n2_params().hamiltonian();
        assert_eq!(h.len(), 5);
        assert!((h.coefficient(&ops("II")) - 0.125).abs() < 1e-15);
        assert!((h.coefficient(&ops("ZI")) - (-0.625)).abs() < 1e-15);
        assert!((h.coefficient(&ops("IZ")) - 0.5).abs() < 1e-15);
        assert!((h.coefficient(&ops("XX")) - 0.5).abs() < 1e-15);
        assert!((h.coefficient(&ops("YY")) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chemical_potential_shifts_z_coefficients() {
        // μ = 2 adds (μ/2)·Z per site to the μ = 0 sum and nothing else.
        let base = n2_params().hamiltonian();
        let shifted = n2_params()
            .with_chemical_potential(2.0)
            .unwrap()
            .hamiltonian();
        assert!((shifted.coefficient(&ops("ZI")) - (base.coefficient(&ops("ZI")) + 1.0)).abs() < 1e-15);
        assert!((shifted.coefficient(&ops("IZ")) - (base.coefficient(&ops("IZ")) + 1.0)).abs() < 1e-15);
        assert_eq!(shifted.coefficient(&ops("XX")), base.coefficient(&ops("XX")));
    }

    #[test]
    fn trial_charge_offset_examples() {
        let p = SchwingerParams::from_spacing(6, 1.0, 1.0, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(p.trial_charge_offset(), 0.0);
        let p = p.with_background_field(0.5).unwrap();
        assert_eq!(p.trial_charge_offset(), 0.0);
        let p = p.with_background_field(1.0).unwrap();
        assert!((p.trial_charge_offset() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn trial_charge_offset_roots_for_random_scales() {
        for (g, a, n) in [(0.7, 0.3, 4), (2.0, 1.5, 6), (1.3, 0.25, 8)] {
            for eps in [0.0, 0.5] {
                let p = SchwingerParams::from_spacing(n, 0.4, g, a, eps, 0.0).unwrap();
                assert_eq!(p.trial_charge_offset(), 0.0, "g={g} a={a} n={n} eps={eps}");
            }
        }
    }

    #[test]
    fn electric_field_operator_examples() {
        let p = n2_params();
        let l1 = p.electric_field_operator(1).unwrap();
        assert_eq!(l1.coefficient(&ops("II")), -0.5);
        assert_eq!(l1.coefficient(&ops("ZI")), 0.5);

        let p4 = SchwingerParams::from_spacing(4, 1.0, 1.0, 0.5, 0.0, 0.0).unwrap();
        let l2 = p4.electric_field_operator(2).unwrap();
        assert_eq!(l2.coefficient(&ops("IIII")), 0.0);
        assert_eq!(l2.coefficient(&ops("ZIII")), 0.5);
        assert_eq!(l2.coefficient(&ops("IZII")), 0.5);

        let p4e = p4.with_background_field(0.5).unwrap();
        let l2e = p4e.electric_field_operator(2).unwrap();
        assert_eq!(l2e.coefficient(&ops("IIII")), 0.5);

        assert!(p4.electric_field_operator(0).is_err());
        assert!(p4.electric_field_operator(4).is_err());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(SchwingerParams::from_spacing(3, 1.0, 1.0, 0.5, 0.0, 0.0).is_err());
        assert!(SchwingerParams::from_spacing(0, 1.0, 1.0, 0.5, 0.0, 0.0).is_err());
        assert!(SchwingerParams::from_spacing(2, 1.0, 0.0, 0.5, 0.0, 0.0).is_err());
        assert!(SchwingerParams::from_spacing(2, 1.0, -1.0, 0.5, 0.0, 0.0).is_err());
        assert!(SchwingerParams::from_spacing(2, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(SchwingerParams::checked(2, 1.0, 1.0, 0.5, 1.1, 0.0, 0.0).is_err());
        assert!(SchwingerParams::checked(2, 1.0, 1.0, 0.5, 1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn hopping_determines_spacing_and_back() {
        let p = SchwingerParams::from_hopping(4, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.lattice_spacing(), 0.5);
        let q = SchwingerParams::from_spacing(4, 1.0, 1.0, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(q.hopping(), 1.0);
    }

    #[test]
    fn gauge_sector_consistency_dense() {
        // The electric term must equal (g²a/2) Σ_j L_j² as dense matrices.
        let p = SchwingerParams::from_spacing(6, 1.0, 1.0, 0.5, 0.25, 0.0).unwrap();
        let electric = p.electric_term().to_dense().unwrap();
        let dim = electric.nrows();
        let mut expect = DMatrix::<C64>::zeros(dim, dim);
        for j in 1..6 {
            let lj = p.electric_field_operator(j).unwrap().to_dense().unwrap();
            expect += &lj * &lj;
        }
        expect *= C64::new(p.coupling().powi(2) * p.lattice_spacing() / 2.0, 0.0);
        let err = (&electric - &expect).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "gauge-sector mismatch {err:.3e}");
    }

    #[test]
    fn total_charge_is_conserved() {
        // [H, Σ_j Z_j] = 0 within 1e-10.
        let p = SchwingerParams::from_spacing(4, 1.0, 1.0, 0.5, 0.3, 0.7).unwrap();
        let h = p.hamiltonian().to_dense().unwrap();
        let n = p.n_sites();
        let terms = (1..=n)
            .map(|j| PauliTerm::single(n, j, Pauli::Z, 1.0).unwrap())
            .collect();
        let total_z = PauliSum::from_terms(n, terms).unwrap().to_dense().unwrap();
        let comm = &h * &total_z - &total_z * &h;
        let err = comm.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "charge commutator norm {err:.3e}");
    }

    #[test]
    fn identity_coefficient_is_quadratic_in_epsilon() {
        // d/dε of the identity coefficient is g²a Σ_j c_j with
        // c_j = ε − 1/2 (odd j), ε (even j); check against central
        // finite differences.
        let g = 1.3;
        let a = 0.4;
        let n = 6;
        let eps = 0.37;
        let h_step = 1e-4;

        let coeff_at = |e: f64| {
            SchwingerParams::from_spacing(n, 1.0, g, a, e, 0.0)
                .unwrap()
                .hamiltonian()
                .identity_coefficient()
        };
        let fd = (coeff_at(eps + h_step) - coeff_at(eps - h_step)) / (2.0 * h_step);

        let analytic: f64 = g * g * a
            * (1..n)
                .map(|j| if j % 2 == 1 { eps - 0.5 } else { eps })
                .sum::<f64>();
        assert!((fd - analytic).abs() < 1e-8, "fd {fd} vs analytic {analytic}");
    }

    #[test]
    fn literal_form_drops_the_half_factor() {
        // For N=2, ε=0 the literal field is L_1 = Z_1 − 1, so
        // L_1² = 2I − 2Z_1 and the electric term is (g²a/2)(2I − 2Z_1).
        let p = n2_params();
        let lit = p.electric_term_with(GaussLawForm::Literal);
        let pref = 0.25; // g²a/2 = 1·0.5/2
        assert!((lit.coefficient(&ops("II")) - 2.0 * pref).abs() < 1e-15);
        assert!((lit.coefficient(&ops("ZI")) - (-2.0 * pref)).abs() < 1e-15);
        // Default remains the half-factor convention.
        assert_eq!(p.hamiltonian(), p.hamiltonian_with(GaussLawForm::HalfFactor));
    }

    #[test]
    fn expectation_of_n2_hamiltonian_on_maximally_mixed_state() {
        // Tr(H)/4 computed through an independent dense trace.
        let h = n2_params().hamiltonian();
        let rho = crate::ansatz::DensityMatrix::maximally_mixed(2).unwrap();
        let fast = h.expectation(&rho).unwrap();
        let dense = h.to_dense().unwrap();
        let trace: C64 = dense.diagonal().iter().sum();
        assert!((fast - trace.re / 4.0).abs() < 1e-12);
        assert!((fast - 0.125).abs() < 1e-12);
    }

    #[test]
    fn electric_term_strings_are_diagonal_only() {
        let p = SchwingerParams::from_spacing(6, 1.0, 1.0, 0.5, 0.5, 0.0).unwrap();
        for term in p.electric_term().terms() {
            assert!(term
                .operators()
                .iter()
                .all(|&op| op == Pauli::I || op == Pauli::Z));
            let zs = term.operators().iter().filter(|&&op| op == Pauli::Z).count();
            assert!(zs <= 2, "electric expansion has a {zs}-Z string");
        }
    }
}
