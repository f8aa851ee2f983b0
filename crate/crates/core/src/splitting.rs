//! Operator splitting: Lie, Strang, and a weighted four-chain combination
//! that cancels the leading commutator errors, plus a numerical order probe
//! on linear two-by-two sub-flows.

use crate::error::{Result, SolverError};
use crate::mesh::FieldState;

/// A sub-step procedure advancing a state by `dt` under one split
/// subproblem. Applying it with `dt = 0` must be the identity.
pub type SubFlow<'a> = dyn Fn(&FieldState, f64) -> Result<FieldState> + 'a;

/// Weights of the four-chain combination. The second-order consistency
/// condition is 2 alpha_w + 2 beta_w = 1; only (2/3, -1/6) also cancels the
/// third-order commutator terms.
#[derive(Debug, Clone, Copy)]
pub struct SplitWeights {
    pub alpha_w: f64,
    pub beta_w: f64,
}

impl Default for SplitWeights {
    fn default() -> Self {
        SplitWeights { alpha_w: 2.0 / 3.0, beta_w: -1.0 / 6.0 }
    }
}

impl SplitWeights {
    /// Deviation from the consistency condition 2 alpha + 2 beta = 1.
    pub fn consistency_defect(&self) -> f64 {
        2.0 * self.alpha_w + 2.0 * self.beta_w - 1.0
    }
}

/// First-order splitting: f2 after f1, both over the full step.
pub fn lie_step(f1: &SubFlow, f2: &SubFlow, state: &FieldState, dt: f64) -> Result<FieldState> {
    f2(&f1(state, dt)?, dt)
}

/// Second-order Strang splitting: half f1, full f2, half f1.
pub fn strang_step(f1: &SubFlow, f2: &SubFlow, state: &FieldState, dt: f64) -> Result<FieldState> {
    f1(&f2(&f1(state, 0.5 * dt)?, dt)?, 0.5 * dt)
}

/// Third-order combination of two Lie and two Strang chains, all starting
/// from the same state:
///
///   U1 = f2(f1(U)), U2 = f1(f2(U)),
///   U3 = Strang(f1, f2), U4 = Strang(f2, f1),
///   result = alpha (U3 + U4) + beta (U1 + U2).
pub fn third_order_step(
    f1: &SubFlow,
    f2: &SubFlow,
    state: &FieldState,
    dt: f64,
    weights: SplitWeights,
) -> Result<FieldState> {
    let u1 = lie_step(f1, f2, state, dt)?;
    let u2 = lie_step(f2, f1, state, dt)?;
    let u3 = strang_step(f1, f2, state, dt)?;
    let u4 = strang_step(f2, f1, state, dt)?;

    let mut out = u3.clone();
    out.scale(weights.alpha_w);
    out.axpy(weights.alpha_w, &u4);
    out.axpy(weights.beta_w, &u1);
    out.axpy(weights.beta_w, &u2);
    out.time = u3.time;
    if !out.all_finite() {
        return Err(SolverError::NonFinite("splitting combination".into()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Numerical order probe on linear sub-flows
// ---------------------------------------------------------------------------

/// Observed convergence behaviour of one splitting scheme on the probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeOrder {
    /// All errors at round-off; the scheme is exact for this flow pair.
    Exact,
    /// Least-squares slope of log error against log dt.
    Slope(f64),
}

/// Per-scheme observed orders from [`splitting_order_probe`].
#[derive(Debug, Clone, Copy)]
pub struct SplitOrderReport {
    pub lie: SchemeOrder,
    pub strang: SchemeOrder,
    pub third: SchemeOrder,
}

type Mat2 = [[f64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn mat_vec(a: &Mat2, v: &[f64; 2]) -> [f64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

/// Matrix exponential of a 2 x 2 matrix by scaling and squaring with a Taylor
/// series on the scaled matrix.
pub fn expm2(a: &Mat2, t: f64) -> Mat2 {
    let norm = a
        .iter()
        .flatten()
        .fold(0.0_f64, |m, &v| m.max(v.abs()))
        * t.abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let s = t / f64::powi(2.0, squarings as i32);
    let b = [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]];

    // Taylor series sum_k B^k / k! on the scaled matrix (|B| <= 1/2).
    let mut result = [[1.0, 0.0], [0.0, 1.0]];
    let mut term = [[1.0, 0.0], [0.0, 1.0]];
    for k in 1..30 {
        term = mat_mul(&term, &b);
        let inv_k = 1.0 / k as f64;
        let mut max_entry = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                term[i][j] *= inv_k;
                result[i][j] += term[i][j];
                max_entry = max_entry.max(term[i][j].abs());
            }
        }
        if max_entry < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

fn linear_chain(
    scheme: &dyn Fn(&Mat2, &Mat2, &[f64; 2], f64) -> [f64; 2],
    f1: &Mat2,
    f2: &Mat2,
    u0: &[f64; 2],
    t_end: f64,
    dt: f64,
) -> [f64; 2] {
    let n_steps = (t_end / dt).round().max(1.0) as usize;
    let h = t_end / n_steps as f64;
    let mut u = *u0;
    for _ in 0..n_steps {
        u = scheme(f1, f2, &u, h);
    }
    u
}

fn lie_linear(f1: &Mat2, f2: &Mat2, u: &[f64; 2], dt: f64) -> [f64; 2] {
    mat_vec(&expm2(f2, dt), &mat_vec(&expm2(f1, dt), u))
}

fn strang_linear(f1: &Mat2, f2: &Mat2, u: &[f64; 2], dt: f64) -> [f64; 2] {
    let half = expm2(f1, 0.5 * dt);
    mat_vec(&half, &mat_vec(&expm2(f2, dt), &mat_vec(&half, u)))
}

fn third_linear(f1: &Mat2, f2: &Mat2, u: &[f64; 2], dt: f64, w: SplitWeights) -> [f64; 2] {
    let u1 = lie_linear(f1, f2, u, dt);
    let u2 = lie_linear(f2, f1, u, dt);
    let u3 = strang_linear(f1, f2, u, dt);
    let u4 = strang_linear(f2, f1, u, dt);
    [
        w.alpha_w * (u3[0] + u4[0]) + w.beta_w * (u1[0] + u2[0]),
        w.alpha_w * (u3[1] + u4[1]) + w.beta_w * (u1[1] + u2[1]),
    ]
}

fn fit_order(errors: &[(f64, f64)], scale: f64) -> SchemeOrder {
    if errors.iter().all(|&(_, e)| e < 1e-12 * scale) {
        return SchemeOrder::Exact;
    }
    // least-squares slope of ln e over ln dt
    let pts: Vec<(f64, f64)> = errors
        .iter()
        .filter(|&&(_, e)| e > 0.0)
        .map(|&(dt, e)| (dt.ln(), e.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    SchemeOrder::Slope((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Measure the observed global order of the three splitting schemes on the
/// linear system du/dt = (F1 + F2) u against the exact matrix exponential,
/// using exact sub-flows exp(F1 dt), exp(F2 dt).
pub fn splitting_order_probe(
    f1: &Mat2,
    f2: &Mat2,
    t_end: f64,
    dt_list: &[f64],
) -> SplitOrderReport {
    splitting_order_probe_with_weights(f1, f2, t_end, dt_list, SplitWeights::default())
}

/// Same probe with explicit combination weights (to demonstrate the order
/// drop for weight choices other than (2/3, -1/6)).
pub fn splitting_order_probe_with_weights(
    f1: &Mat2,
    f2: &Mat2,
    t_end: f64,
    dt_list: &[f64],
    weights: SplitWeights,
) -> SplitOrderReport {
    let u0 = [1.0, 0.7];
    let sum = [
        [f1[0][0] + f2[0][0], f1[0][1] + f2[0][1]],
        [f1[1][0] + f2[1][0], f1[1][1] + f2[1][1]],
    ];
    let exact = mat_vec(&expm2(&sum, t_end), &u0);
    let scale = exact[0].abs().max(exact[1].abs()).max(1.0);

    let mut errs = [Vec::new(), Vec::new(), Vec::new()];
    for &dt in dt_list {
        let runs = [
            linear_chain(&lie_linear, f1, f2, &u0, t_end, dt),
            linear_chain(&strang_linear, f1, f2, &u0, t_end, dt),
            linear_chain(
                &|a, b, u, h| third_linear(a, b, u, h, weights),
                f1,
                f2,
                &u0,
                t_end,
                dt,
            ),
        ];
        for (k, u) in runs.iter().enumerate() {
            let e = ((u[0] - exact[0]).powi(2) + (u[1] - exact[1]).powi(2)).sqrt();
            errs[k].push((dt, e));
        }
    }
    SplitOrderReport {
        lie: fit_order(&errs[0], scale),
        strang: fit_order(&errs[1], scale),
        third: fit_order(&errs[2], scale),
    }
}

// ---------------------------------------------------------------------------
