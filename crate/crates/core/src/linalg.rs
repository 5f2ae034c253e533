//! Dense complex linear-algebra helpers shared by the Pauli, ansatz, oracle
//! and optimizer modules.
//!
//! Basis convention used everywhere in this crate: site 1 is the leftmost
//! tensor factor, so the state of 1-based site `s` on an `n`-site register
//! lives in bit `n - s` of the basis index (bit 0 is least significant).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Bit position of 1-based `site` in an `n`-site basis index.
#[inline]
pub fn site_bit(n: usize, site: usize) -> usize {
    debug_assert!(site >= 1 && site <= n, "site {site} out of range 1..={n}");
    n - site
}

/// ±1 eigenvalue of Z on `site` for basis index `b`.
#[inline]
pub fn z_sign(b: usize, n: usize, site: usize) -> f64 {
    if (b >> site_bit(n, site)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Largest `|m[r,c] - conj(m[c,r])|` over all entries.
pub fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0_f64;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// In-place `m <- (G on site) · m` for a single-qubit gate `g`.
pub fn apply_single_qubit_left(m: &mut DMatrix<C64>, n: usize, site: usize, g: &[[C64; 2]; 2]) {
    let dim = m.nrows();
    let cols = m.ncols();
    let mask = 1usize << site_bit(n, site);
    let (g00, g01, g10, g11) = (g[0][0], g[0][1], g[1][0], g[1][1]);
    let data = m.as_mut_slice(); // column-major
    for c in 0..cols {
        let base = c * dim;
        for r in 0..dim {
            if r & mask == 0 {
                let r1 = r | mask;
                let a = data[base + r];
                let b = data[base + r1];
                data[base + r] = g00 * a + g01 * b;
                data[base + r1] = g10 * a + g11 * b;
            }
        }
    }
}

/// In-place `m <- m · (G on site)†` for a single-qubit gate `g`.
pub fn apply_single_qubit_right_dag(m: &mut DMatrix<C64>, n: usize, site: usize, g: &[[C64; 2]; 2]) {
    let dim = m.nrows();
    let cols = m.ncols();
    let mask = 1usize << site_bit(n, site);
    let (c00, c01, c10, c11) = (
        g[0][0].conj(),
        g[0][1].conj(),
        g[1][0].conj(),
        g[1][1].conj(),
    );
    let data = m.as_mut_slice();
    for c in 0..cols {
        if c & mask == 0 {
            let c1 = c | mask;
            let base0 = c * dim;
            let base1 = c1 * dim;
            for r in 0..dim {
                let a = data[base0 + r];
                let b = data[base1 + r];
                // (m G†)[r, c] = m[r, c] conj(g00) + m[r, c1] conj(g01)
                data[base0 + r] = a * c00 + b * c01;
                data[base1 + r] = a * c10 + b * c11;
            }
        }
    }
}

/// In-place `m <- diag(d) · m`.
pub fn apply_diag_left(m: &mut DMatrix<C64>, d: &[C64]) {
    let dim = m.nrows();
    let cols = m.ncols();
    debug_assert_eq!(d.len(), dim);
    let data = m.as_mut_slice();
    for c in 0..cols {
        let base = c * dim;
        for r in 0..dim {
            data[base + r] *= d[r];
        }
    }
}

/// In-place `m <- m · diag(d)†`.
pub fn apply_diag_right_dag(m: &mut DMatrix<C64>, d: &[C64]) {
    let dim = m.nrows();
    let cols = m.ncols();
    debug_assert_eq!(d.len(), cols);
    let data = m.as_mut_slice();
    for (c, dc) in d.iter().enumerate().take(cols) {
        let factor = dc.conj();
        let base = c * dim;
        for r in 0..dim {
            data[base + r] *= factor;
        }
    }
}
