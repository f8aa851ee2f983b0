//! Method-of-characteristics solution of the inviscid Burgers equation for
//! smooth initial data before shock formation: u(x, t) = u0(x - u t), solved
//! pointwise by Newton iteration.

use std::f64::consts::TAU;

use crate::error::{Result, SolverError};

/// Solve u = u0(x - u t) for the characteristic value at (x, t).
///
/// `du0` is the derivative of `u0`; the initial profile must be defined on
/// all of R (use the periodic extension for periodic problems). Valid only
/// before the shock time 1/max|u0'|, where the Newton slope 1 + t u0' stays
/// positive along the iteration.
pub fn burgers_moc(
    u0: &dyn Fn(f64) -> f64,
    du0: &dyn Fn(f64) -> f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    let mut u = u0(x);
    if t == 0.0 {
        return Ok(u);
    }
    for _ in 0..100 {
        let foot = x - u * t;
        let g = u - u0(foot);
        let dg = 1.0 + t * du0(foot);
        if dg <= 0.0 {
            return Err(SolverError::RootFinding(format!(
                "characteristics cross at x = {x}, t = {t}"
            )));
        }
        let step = g / dg;
        u -= step;
        if step.abs() < 1e-15 * (1.0 + u.abs()) {
            return Ok(u);
        }
    }
    Err(SolverError::RootFinding(format!(
        "characteristic iteration did not converge at x = {x}, t = {t}"
    )))
}

/// The benchmark profile sin(2 pi x) / (2 pi) on the periodic unit interval;
/// its maximum slope is 1, so the first shock forms at t = 1 (at x = 1/2).
pub fn burgers_sine_ic(x: f64) -> f64 {
    (TAU * x).sin() / TAU
}

/// Exact smooth solution for the benchmark profile, valid for t < 1.
pub fn burgers_sine_exact(x: f64, t: f64) -> Result<f64> {
    burgers_moc(&burgers_sine_ic, &|x: f64| (TAU * x).cos(), x, t)
}

// ---------------------------------------------------------------------------
