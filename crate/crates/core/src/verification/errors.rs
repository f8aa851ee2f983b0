//! Error norms and convergence-order measurement for grid sweeps.

use crate::error::{Result, SolverError};
use crate::mesh::FieldState;

// Gauss-Legendre 5-point rule on [-1/2, 1/2] (nodes scaled from [-1, 1]).
const GAUSS5_NODES: [f64; 5] = [
    -0.453_089_922_969_332_0,
    -0.269_234_655_052_841_55,
    0.0,
    0.269_234_655_052_841_55,
    0.453_089_922_969_332_0,
];
const GAUSS5_WEIGHTS: [f64; 5] = [
    0.118_463_442_528_094_54,
    0.239_314_335_249_683_23,
    0.284_444_444_444_444_44,
    0.239_314_335_249_683_23,
    0.118_463_442_528_094_54,
];

/// Discrete L2 distance between two cell-average vectors on a grid of
/// spacing `dx`: sqrt(sum (a_i - b_i)^2 dx).
pub fn l2_error(a: &[f64], b: &[f64], dx: f64) -> f64 {
    assert_eq!(a.len(), b.len(), "l2_error: length mismatch");
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (sum * dx).sqrt()
}

/// Cell averages of one component of a field state.
pub fn avg_component(state: &FieldState, comp: usize) -> Vec<f64> {
    (0..state.n_cells).map(|i| state.avg(i)[comp]).collect()
}

/// Average of f over [a, b] by 5-point Gauss quadrature (exact to degree 9).
pub fn cell_average_of(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let h = b - a;
    GAUSS5_NODES
        .iter()
        .zip(GAUSS5_WEIGHTS)
        .map(|(z, w)| w * f(mid + z * h))
        .sum()
}

/// Average of a piecewise-smooth f over [a, b], splitting the cell at the
/// given breakpoints so each Gauss panel sees a smooth integrand.
pub fn cell_average_piecewise(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> f64 {
    let mut cuts = vec![a];
    for &x in breaks {
        if x > a + 1e-14 && x < b - 1e-14 {
            cuts.push(x);
        }
    }
    cuts.push(b);
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut acc = 0.0;
    for seg in cuts.windows(2) {
        acc += cell_average_of(f, seg[0], seg[1]) * (seg[1] - seg[0]);
    }
    acc / (b - a)
}

/// Restrict fine-grid cell averages onto a coarser grid whose cells each
/// contain `factor` fine cells, by block averaging (exact for averages).
pub fn coarsen_averages(fine: &[f64], factor: usize) -> Vec<f64> {
    assert!(factor > 0 && fine.len() % factor == 0, "coarsen: grid mismatch");
    fine.chunks(factor)
        .map(|block| block.iter().sum::<f64>() / factor as f64)
        .collect()
}

/// Result of a grid-refinement sweep: errors per level, pairwise observed
/// orders between consecutive doublings, and the least-squares fitted order.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub grid_sizes: Vec<usize>,
    pub errors: Vec<f64>,
    pub pairwise_orders: Vec<f64>,
    pub fitted_order: f64,
}

impl ConvergenceReport {
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (k, (&n, &e)) in self.grid_sizes.iter().zip(&self.errors).enumerate() {
            let rate = if k > 0 {
                format!("  order {:.3}", self.pairwise_orders[k - 1])
            } else {
                String::new()
            };
            out.push_str(&format!("N = {n:6}  error = {e:.6e}{rate}\n"));
        }
        out.push_str(&format!("fitted order: {:.3}\n", self.fitted_order));
        out
    }
}

/// Observed convergence order from a sweep of grid sizes and error norms.
///
/// Requires at least three levels with each grid size double the previous;
/// the fitted order is the least-squares slope of log(error) vs log(N),
/// negated so larger is better.
pub fn convergence_order(grid_sizes: &[usize], errors: &[f64]) -> Result<ConvergenceReport> {
    if grid_sizes.len() != errors.len() {
        return Err(SolverError::InvalidConfig(
            "convergence sweep: sizes and errors differ in length".into(),
        ));
    }
    if grid_sizes.len() < 3 {
        return Err(SolverError::InvalidConfig(
            "convergence sweep needs at least three grid levels".into(),
        ));
    }
    for pair in grid_sizes.windows(2) {
        if pair[1] != 2 * pair[0] {
            return Err(SolverError::InvalidConfig(format!(
                "convergence sweep requires doubling grids, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if errors.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return Err(SolverError::InvalidConfig(
            "convergence sweep requires finite positive errors".into(),
        ));
    }
    let pairwise_orders: Vec<f64> = errors
        .windows(2)
        .map(|e| (e[0] / e[1]).ln() / std::f64::consts::LN_2)
        .collect();
    // least-squares slope of ln(e) against ln(N)
    let xs: Vec<f64> = grid_sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    Ok(ConvergenceReport {
        grid_sizes: grid_sizes.to_vec(),
        errors: errors.to_vec(),
        pairwise_orders,
        fitted_order: -sxy / sxx,
    })
}

// ---------------------------------------------------------------------------
