//! Derivative-free Nelder-Mead fallback for the free-energy minimization.

/// Outcome of one simplex run.
pub(crate) struct SimplexOutcome {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    /// Best vertex value per iteration (non-increasing by construction).
    pub trace: Vec<f64>,
    pub converged: bool,
}

pub(crate) struct SimplexOptions {
    pub max_iters: usize,
    pub tol: f64,
    pub window: usize,
    /// Per-coordinate displacement of the initial simplex.
    pub init_step: f64,
}

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

pub(crate) fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let f0 = f(x0);
    simplex.push((x0.to_vec(), f0));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += opts.init_step;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let mut trace = Vec::with_capacity(opts.max_iters);
    let mut converged = false;

    for it in 0..opts.max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        trace.push(simplex[0].1);
        if it >= opts.window && (trace[it] - trace[it - opts.window]).abs() < opts.tol {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let worst = simplex[d].clone();

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < simplex[0].1 {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + GAMMA * ALPHA * (c - w))
                .collect();
            let f_expand = f(&expand);
            simplex[d] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
            continue;
        }
        if f_reflect < simplex[d - 1].1 {
            simplex[d] = (reflect, f_reflect);
            continue;
        }

        // Contract toward the better of the worst vertex and its reflection.
        let (toward, f_toward) = if f_reflect < worst.1 {
            (&reflect, f_reflect)
        } else {
            (&worst.0, worst.1)
        };
        let contract: Vec<f64> = centroid
            .iter()
            .zip(toward)
            .map(|(c, t)| c + RHO * (t - c))
            .collect();
        let f_contract = f(&contract);
        if f_contract < f_toward {
            simplex[d] = (contract, f_contract);
            continue;
        }

        // Shrink everything toward the best vertex.
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + SIGMA * (v - b))
                .collect();
            let fx = f(&x);
            *vertex = (x, fx);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexOutcome {
        best_x: simplex[0].0.clone(),
        best_f: simplex[0].1,
        trace,
        converged,
    }
}
