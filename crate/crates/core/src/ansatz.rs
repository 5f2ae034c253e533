//! Product-spectrum ansatz: a parameterized product mixed state with
//! analytic entropy, conjugated by a layered parameterized unitary.
//!
//! The variational state is `ρ(ω) = U(φ) ρ₀(θ) U†(φ)` with
//!
//! * `ρ₀(θ) = ⊗_i [sin²θ_i |0><0| + cos²θ_i |1><1|]`, so the spectrum — and
//!   therefore the von Neumann entropy — depends on θ alone;
//! * `U(φ) = Π_{l=1}^{p} e^{-i H_zz(α_l)} e^{-i H_x(λ_l)} e^{-i H_z(ζ_l)}`,
//!   block 1 acting first, with `H_z(ζ) = Σ_i ζ_i Z_i`,
//!   `H_x(λ) = Σ_i λ_i X_i` and `H_zz(α) = Σ_i α_i Z_i Z_{i+1}`.
//!
//! Entropies are reported in nats. Each single-qubit mixed state is the
//! partial trace of a two-qubit pure state `cosθ|00> + sinθ|11>` prepared
//! with one ancilla; here the traced-out state is written down directly, so
//! no 2N-qubit purification is ever materialized.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Hermiticity tolerance of [`DensityMatrix`].
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Trace-one tolerance of [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues may undershoot zero by at most this much.
pub const PSD_TOL: f64 = 1e-10;

/// Probability clamp used by the analytic entropy *gradient* (the entropy
/// value itself is finite everywhere and uses the exact x·ln x → 0 limit).
pub const PROB_CLAMP: f64 = 1e-12;

/// One circuit block: Z-rotation angles, X-rotation angles, and
/// nearest-neighbor ZZ-rotation angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlock")]
pub struct Block {
    zeta: Vec<f64>,
    lambda: Vec<f64>,
    alpha: Vec<f64>,
}

#[derive(Deserialize)]
struct RawBlock {
    zeta: Vec<f64>,
    lambda: Vec<f64>,
    alpha: Vec<f64>,
}

impl TryFrom<RawBlock> for Block {
    type Error = Error;
    fn try_from(raw: RawBlock) -> Result<Self> {
        Block::new(raw.zeta, raw.lambda, raw.alpha)
    }
}

impl Block {
    /// `zeta` and `lambda` carry one angle per site, `alpha` one per bond.
    pub fn new(zeta: Vec<f64>, lambda: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        let n = zeta.len();
        if n == 0 {
            return Err(Error::InvalidParams("block needs at least one site".into()));
        }
        if lambda.len() != n || alpha.len() != n - 1 {
            return Err(Error::InvalidParams(format!(
                "block shape mismatch: zeta {}, lambda {}, alpha {} (want n, n, n-1)",
                n,
                lambda.len(),
                alpha.len()
            )));
        }
        for &v in zeta.iter().chain(&lambda).chain(&alpha) {
            if !v.is_finite() {
                return Err(Error::InvalidParams("non-finite circuit angle".into()));
            }
        }
        Ok(Self { zeta, lambda, alpha })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n], vec![0.0; n.saturating_sub(1)])
    }

    pub fn n_sites(&self) -> usize {
        self.zeta.len()
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }
}

/// The full variational parameter set ω = (θ, φ): N mixing angles plus `p`
/// circuit blocks.
///
/// Serializes to the checkpoint document
/// `{"theta": [...], "blocks": [{"zeta": [...], "lambda": [...], "alpha": [...]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAnsatzParams")]
pub struct AnsatzParams {
    theta: Vec<f64>,
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
struct RawAnsatzParams {
    theta: Vec<f64>,
    blocks: Vec<Block>,
}

impl TryFrom<RawAnsatzParams> for AnsatzParams {
    type Error = Error;
    fn try_from(raw: RawAnsatzParams) -> Result<Self> {
        AnsatzParams::new(raw.theta, raw.blocks)
    }
}

impl AnsatzParams {
    pub fn new(theta: Vec<f64>, blocks: Vec<Block>) -> Result<Self> {
        let n = theta.len();
        if n == 0 {
            return Err(Error::InvalidParams(
                "ansatz needs at least one mixing angle".into(),
            ));
        }
        for &t in &theta {
            if !t.is_finite() {
                return Err(Error::InvalidParams("non-finite mixing angle".into()));
            }
        }
        for (l, b) in blocks.iter().enumerate() {
            if b.n_sites() != n {
                return Err(Error::DimensionMismatch(format!(
                    "block {} spans {} sites, ansatz has {}",
                    l + 1,
                    b.n_sites(),
                    n
                )));
            }
        }
        Ok(Self { theta, blocks })
    }

    /// All angles zero at the given depth.
    pub fn zeros(n: usize, depth: usize) -> Result<Self> {
        let blocks = (0..depth).map(|_| Block::zeros(n)).collect::<Result<_>>()?;
        Self::new(vec![0.0; n], blocks)
    }

    pub fn n_sites(&self) -> usize {
        self.theta.len()
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of scalar parameters at size `n`, depth `p`: `n + p(3n - 1)`.
    pub fn flat_len(n: usize, depth: usize) -> usize {
        n + depth * (3 * n - 1)
    }

    /// Flatten as `[theta | per block: zeta, lambda, alpha]`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(Self::flat_len(self.n_sites(), self.depth()));
        out.extend_from_slice(&self.theta);
        for b in &self.blocks {
            out.extend_from_slice(&b.zeta);
            out.extend_from_slice(&b.lambda);
            out.extend_from_slice(&b.alpha);
        }
        out
    }

    /// Inverse of [`AnsatzParams::to_flat`].
    pub fn from_flat(n: usize, depth: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != Self::flat_len(n, depth) {
            return Err(Error::DimensionMismatch(format!(
                "flat parameter vector has {} entries, want {}",
                flat.len(),
                Self::flat_len(n, depth)
            )));
        }
        let theta = flat[..n].to_vec();
        let mut blocks = Vec::with_capacity(depth);
        let mut at = n;
        for _ in 0..depth {
            let zeta = flat[at..at + n].to_vec();
            at += n;
            let lambda = flat[at..at + n].to_vec();
            at += n;
            let alpha = flat[at..at + n - 1].to_vec();
            at += n - 1;
            blocks.push(Block::new(zeta, lambda, alpha)?);
        }
        Self::new(theta, blocks)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ansatz parameters serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator on the
/// 2^N-dimensional system space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<C64>,
    n_sites: usize,
}

impl DensityMatrix {
    /// Validates squareness, power-of-two dimension, Hermiticity and unit
    /// trace. Positivity is not eigen-checked here; use
    /// [`DensityMatrix::validate_spectrum`] where that matters.
    pub fn try_new(mat: DMatrix<C64>) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square with power-of-two dimension, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = linalg::hermiticity_error(&mat);
        if herm > HERMITICITY_TOL {
            return Err(Error::Numerical(format!(
                "density matrix is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr: C64 = mat.diagonal().iter().sum();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Numerical(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let n_sites = dim.trailing_zeros() as usize;
        Ok(Self { mat, n_sites })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let dim = 1usize << n;
        let mat = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self::try_new(mat)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.mat)
    }

    /// `-Σ λ ln λ` over the spectrum, in nats. Eigenvalues at or below zero
    /// contribute nothing (the x·ln x → 0 limit).
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues().iter().map(|&l| -xlnx(l)).sum()
    }

    /// Error unless every eigenvalue is ≥ -[`PSD_TOL`].
    pub fn validate_spectrum(&self) -> Result<()> {
        let min = self
            .eigenvalues()
            .first()
            .copied()
            .unwrap_or(f64::NAN);
        if min.is_nan() || min < -PSD_TOL {
            return Err(Error::Numerical(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }
}

#[inline]
fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Occupation probability of basis state |0> on one site: `sin²θ`.
#[inline]
pub fn site_prob(theta: f64) -> f64 {
    let s = theta.sin();
    s * s
}

/// Diagonal of `ρ₀(θ)` over the full register.
pub(crate) fn initial_diagonal(theta: &[f64]) -> Vec<f64> {
    let n = theta.len();
    let dim = 1usize << n;
    let probs: Vec<(f64, f64)> = theta
        .iter()
        .map(|&t| {
            let p = site_prob(t);
            (p, 1.0 - p)
        })
        .collect();
    let mut diag = vec![0.0; dim];
    for (b, entry) in diag.iter_mut().enumerate() {
        let mut q = 1.0;
        for (site, &(p0, p1)) in probs.iter().enumerate() {
            let bit = (b >> linalg::site_bit(n, site + 1)) & 1;
            q *= if bit == 0 { p0 } else { p1 };
        }
        *entry = q;
    }
    diag
}

/// The product mixed state `⊗_i ρ_i(θ_i)` with
/// `ρ_i = sin²θ_i |0><0| + cos²θ_i |1><1|`.
pub fn initial_state(theta: &[f64]) -> DensityMatrix {
    assert!(
        !theta.is_empty() && theta.len() <= crate::pauli::DENSE_SITE_LIMIT,
        "initial_state called for {} sites (dense limit {})",
        theta.len(),
        crate::pauli::DENSE_SITE_LIMIT
    );
    let diag = initial_diagonal(theta);
    let dim = diag.len();
    let mut mat = DMatrix::<C64>::zeros(dim, dim);
    for (b, &q) in diag.iter().enumerate() {
        mat[(b, b)] = C64::new(q, 0.0);
    }
    DensityMatrix::try_new(mat).expect("product state is a valid density matrix")
}

/// Analytic entropy of the product state in nats:
/// `Σ_i [-sin²θ_i ln sin²θ_i - cos²θ_i ln cos²θ_i]`,
/// with x·ln x = 0 at x = 0.
pub fn entropy(theta: &[f64]) -> f64 {
    theta
        .iter()
        .map(|&t| {
            let p = site_prob(t);
            -xlnx(p) - xlnx(1.0 - p)
        })
        .sum()
}

/// Analytic entropy gradient `dS/dθ_i = sin(2θ_i) · ln(cot²θ_i)`, with
/// `sin²θ` clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` against the log
/// divergence at pure states.
pub fn entropy_theta_gradient(theta: &[f64]) -> Vec<f64> {
    theta
        .iter()
        .map(|&t| {
            let p = site_prob(t).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
            (2.0 * t).sin() * ((1.0 - p) / p).ln()
        })
        .collect()
}

/// Phase diagonal of `e^{-i Σ_i zeta_i Z_i}`.
pub(crate) fn z_layer_diag(n: usize, zeta: &[f64]) -> Vec<C64> {
    let dim = 1usize << n;
    let mut d = Vec::with_capacity(dim);
    for b in 0..dim {
        let mut angle = 0.0;
        for (site, &z) in zeta.iter().enumerate() {
            angle -= z * linalg::z_sign(b, n, site + 1);
        }
        d.push(C64::from_polar(1.0, angle));
    }
    d
}

/// Phase diagonal of `e^{-i Σ_i alpha_i Z_i Z_{i+1}}`.
pub(crate) fn zz_layer_diag(n: usize, alpha: &[f64]) -> Vec<C64> {
    let dim = 1usize << n;
    let mut d = Vec::with_capacity(dim);
    for b in 0..dim {
        let mut angle = 0.0;
        for (bond, &a) in alpha.iter().enumerate() {
            angle -= a * linalg::z_sign(b, n, bond + 1) * linalg::z_sign(b, n, bond + 2);
        }
        d.push(C64::from_polar(1.0, angle));
    }
    d
}

/// `e^{-i λ X}` as a 2x2 gate.
pub(crate) fn x_gate(lambda: f64) -> [[C64; 2]; 2] {
    let c = C64::new(lambda.cos(), 0.0);
    let s = C64::new(0.0, -lambda.sin());
    [[c, s], [s, c]]
}

/// Apply one circuit block to `m` from the left: `m <- D_zz G_x G_z m`.
pub(crate) fn apply_block_left(m: &mut DMatrix<C64>, n: usize, block: &Block) {
    let zd = z_layer_diag(n, block.zeta());
    linalg::apply_diag_left(m, &zd);
    for (site, &l) in block.lambda().iter().enumerate() {
        linalg::apply_single_qubit_left(m, n, site + 1, &x_gate(l));
    }
    let ad = zz_layer_diag(n, block.alpha());
    linalg::apply_diag_left(m, &ad);
}

/// The layered unitary `U(φ)` as a dense matrix; an empty block list gives
/// the identity. Block 1 is the rightmost factor (acts first).
pub fn build_unitary(n: usize, blocks: &[Block]) -> DMatrix<C64> {
    assert!(
        (1..=crate::pauli::DENSE_SITE_LIMIT).contains(&n),
        "build_unitary called for {n} sites (dense limit {})",
        crate::pauli::DENSE_SITE_LIMIT
    );
    for b in blocks {
        assert_eq!(b.n_sites(), n, "block size does not match register");
    }
    let dim = 1usize << n;
    let mut u = DMatrix::<C64>::identity(dim, dim);
    for block in blocks {
        apply_block_left(&mut u, n, block);
    }
    u
}

/// Realize `ρ(ω) = U(φ) ρ₀(θ) U†(φ)` as a dense density matrix.
pub fn realize_state(params: &AnsatzParams) -> DensityMatrix {
    let n = params.n_sites();
    let u = build_unitary(n, params.blocks());
    let diag = initial_diagonal(params.theta());
    // V = U · diag(q), then ρ = V · U†.
    let mut v = u.clone();
    for (c, &q) in diag.iter().enumerate() {
        for r in 0..v.nrows() {
            v[(r, c)] *= q;
        }
    }
    let rho = v * u.adjoint();
    DensityMatrix::try_new(rho).expect("conjugated product state is a valid density matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

    pub(crate) fn random_params(n: usize, depth: usize, seed: u64) -> AnsatzParams {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..PI)).collect();
        let blocks = (0..depth)
            .map(|_| {
                Block::new(
                    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect(),
                )
                .unwrap()
            })
            .collect();
        AnsatzParams::new(theta, blocks).unwrap()
    }

    #[test]
    fn initial_state_all_zero_theta_is_all_ones_projector() {
        let rho = initial_state(&[0.0, 0.0, 0.0]);
        let dim = rho.dim();
        for b in 0..dim {
            let expect = if b == dim - 1 { 1.0 } else { 0.0 };
            assert!((rho.matrix()[(b, b)].re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn initial_state_quarter_pi_is_maximally_mixed() {
        let rho = initial_state(&[FRAC_PI_4; 3]);
        for b in 0..8 {
            assert!((rho.matrix()[(b, b)].re - 0.125).abs() < 1e-14);
        }
    }

    #[test]
    fn initial_state_single_site_pi_sixth() {
        let rho = initial_state(&[FRAC_PI_6]);
        assert!((rho.matrix()[(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&[FRAC_PI_4; 6]) - 6.0 * 2.0_f64.ln()).abs() < 1e-12);
        assert_eq!(entropy(&[0.0; 4]), 0.0);
        let expect = -(0.25_f64 * 0.25_f64.ln() + 0.75 * 0.75_f64.ln());
        assert!((entropy(&[FRAC_PI_6]) - expect).abs() < 1e-14);
    }

    #[test]
    fn entropy_gradient_vanishes_at_maximum() {
        let g = entropy_theta_gradient(&[FRAC_PI_4, FRAC_PI_4]);
        assert!(g.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn entropy_gradient_matches_finite_differences_away_from_edges() {
        let h = 1e-6;
        for &t in &[0.3, 0.7, 1.1, 2.0] {
            let g = entropy_theta_gradient(&[t])[0];
            let fd = (entropy(&[t + h]) - entropy(&[t - h])) / (2.0 * h);
            assert!((g - fd).abs() < 1e-7, "theta={t}: {g} vs {fd}");
        }
    }

    #[test]
    fn build_unitary_empty_and_zero_blocks_are_identity() {
        let u = build_unitary(2, &[]);
        assert_eq!(u, DMatrix::<C64>::identity(4, 4));
        let u = build_unitary(2, &[Block::zeros(2).unwrap()]);
        assert!((u - DMatrix::<C64>::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn build_unitary_single_z_rotation() {
        let b = Block::new(vec![FRAC_PI_4], vec![0.0], vec![]).unwrap();
        let u = build_unitary(1, &[b]);
        let expect0 = C64::from_polar(1.0, -FRAC_PI_4);
        let expect1 = C64::from_polar(1.0, FRAC_PI_4);
        assert!((u[(0, 0)] - expect0).norm() < 1e-15);
        assert!((u[(1, 1)] - expect1).norm() < 1e-15);
        assert!(u[(0, 1)].norm() < 1e-15);
        assert!(u[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn realize_state_identity_circuit_on_pure_product() {
        let params = AnsatzParams::zeros(3, 2).unwrap();
        let rho = realize_state(&params);
        assert!((rho.matrix()[(7, 7)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realize_state_maximally_mixed_is_circuit_invariant() {
        let params = AnsatzParams::new(
            vec![FRAC_PI_4; 2],
            random_params(2, 2, 7).blocks().to_vec(),
        )
        .unwrap();
        let rho = realize_state(&params);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let diff = (rho.matrix() - mixed.matrix()).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn realize_state_spectrum_from_seeded_circuit() {
        let circuit = random_params(2, 1, 42);
        let params =
            AnsatzParams::new(vec![FRAC_PI_6, 0.0], circuit.blocks().to_vec()).unwrap();
        let rho = realize_state(&params);
        let mut ev = rho.eigenvalues();
        ev.sort_by(f64::total_cmp);
        let expect = [0.0, 0.0, 0.25, 0.75];
        for (got, want) in ev.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{ev:?}");
        }
    }

    #[test]
    fn spectrum_matches_product_multiset_and_entropy() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 3);
            let params = random_params(n, 1 + seed as usize % 3, seed);
            let rho = realize_state(&params);

            let mut expect: Vec<f64> = initial_diagonal(params.theta());
            expect.sort_by(f64::total_cmp);
            let mut got = rho.eigenvalues();
            got.sort_by(f64::total_cmp);
            for (g, e) in got.iter().zip(&expect) {
                assert!((g - e).abs() < 1e-10, "seed {seed}: {got:?} vs {expect:?}");
            }
            assert!((rho.von_neumann_entropy() - entropy(params.theta())).abs() < 1e-9);
        }
    }

    #[test]
    fn unitarity_over_seeded_draws() {
        for seed in 0..50 {
            let n = 1 + (seed as usize % 4);
            let params = random_params(n, 1 + seed as usize % 2, 1000 + seed);
            let u = build_unitary(n, params.blocks());
            let dim = u.nrows();
            let err = (&u * u.adjoint() - DMatrix::<C64>::identity(dim, dim)).norm();
            assert!(err < 1e-10, "seed {seed}: unitarity error {err:.3e}");
        }
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = C64::new(0.7, 0.0);
        m[(1, 1)] = C64::new(0.7, 0.0);
        assert!(matches!(
            DensityMatrix::try_new(m),
            Err(Error::Numerical(_))
        ));

        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(0.5, 0.0); // not Hermitian
        assert!(DensityMatrix::try_new(m).is_err());

        let m = DMatrix::<C64>::identity(3, 3) * C64::new(1.0 / 3.0, 0.0);
        assert!(DensityMatrix::try_new(m).is_err()); // not a power of two
    }

    #[test]
    fn spectrum_validation_flags_negative_eigenvalues() {
        let params = random_params(2, 2, 5);
        assert!(realize_state(&params).validate_spectrum().is_ok());

        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        let rho = DensityMatrix::try_new(m).unwrap(); // Hermitian, trace 1
        assert!(rho.validate_spectrum().is_err());
    }

    #[test]
    fn json_round_trip_uses_contract_field_names() {
        let params = random_params(2, 1, 3);
        let text = params.to_json();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value.get("theta").is_some());
        let block = &value["blocks"][0];
        for key in ["zeta", "lambda", "alpha"] {
            assert!(block.get(key).is_some(), "missing key {key}");
        }
        let back = AnsatzParams::from_json(&text).unwrap();
        assert_eq!(back, params);
    }

    #[test]
    fn json_rejects_mismatched_block_shape() {
        let text = r#"{"theta":[0.1,0.2],"blocks":[{"zeta":[0.0],"lambda":[0.0],"alpha":[]}]}"#;
        assert!(AnsatzParams::from_json(text).is_err());
    }

    #[test]
    fn flat_round_trip() {
        let params = random_params(3, 2, 11);
        let flat = params.to_flat();
        assert_eq!(flat.len(), AnsatzParams::flat_len(3, 2));
        let back = AnsatzParams::from_flat(3, 2, &flat).unwrap();
        assert_eq!(back, params);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// sin²/cos² swap symmetry: θ -> π/2 - θ leaves the entropy fixed.
        #[test]
        fn entropy_swap_symmetry(theta in prop::collection::vec(-3.2..3.2f64, 1..5)) {
            let swapped: Vec<f64> = theta.iter().map(|t| std::f64::consts::FRAC_PI_2 - t).collect();
            prop_assert!((entropy(&theta) - entropy(&swapped)).abs() < 1e-10);
        }

        /// 0 <= S <= N ln 2, with the maximum only at θ = π/4 (mod π/2).
        #[test]
        fn entropy_bounds(theta in prop::collection::vec(-3.2..3.2f64, 1..5)) {
            let s = entropy(&theta);
            let max = theta.len() as f64 * 2.0_f64.ln();
            prop_assert!(s >= 0.0 && s <= max + 1e-12);
        }
    }

    #[test]
    fn entropy_maximum_attained_exactly_at_quarter_pi_mod_half_pi() {
        for k in -2i32..=2 {
            let t = FRAC_PI_4 + f64::from(k) * std::f64::consts::FRAC_PI_2;
            assert!((entropy(&[t]) - 2.0_f64.ln()).abs() < 1e-12);
        }
        assert!(entropy(&[FRAC_PI_4 + 0.05]) < 2.0_f64.ln());
    }
}
