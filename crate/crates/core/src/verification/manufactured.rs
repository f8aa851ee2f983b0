//! Manufactured solution for the viscous gas system:
//!
//!   rho = 1 + 0.1 t sin x,  u = 1 + 2 sin x,  p = 1 - 0.5 cos x
//!
//! with the forcing terms that make these fields satisfy the compressible
//! flow equations with viscous stress mu_v u_x and heat flux
//! -(mu_h/(gamma-1)) (p/rho)_x.

use crate::models::GasParams;

/// Primitive fields (rho, u, p) at (x, t).
pub fn manufactured_prim(x: f64, t: f64) -> [f64; 3] {
    let s = x.sin();
    [1.0 + 0.1 * t * s, 1.0 + 2.0 * s, 1.0 - 0.5 * x.cos()]
}

/// Equilibrium stress tau = mu_v u_x and heat flux
/// q = -(mu_h/(gamma-1)) d(p/rho)/dx at (x, t).
pub fn manufactured_relax(x: f64, t: f64, gas: &GasParams) -> [f64; 2] {
    let [rho, _, p] = manufactured_prim(x, t);
    let tau = gas.mu_v() * 2.0 * x.cos();
    // d(p/rho)/dx = p'/rho - p rho'/rho^2
    let dp = 0.5 * x.sin();
    let drho = 0.1 * t * x.cos();
    let g1 = dp / rho - p * drho / (rho * rho);
    [tau, -gas.mu_h() / (gas.gamma - 1.0) * g1]
}

/// Full conservative state (rho, rho u, rho E, tau, q) at (x, t) with the
/// relaxation variables at their equilibria.
pub fn manufactured_fields(x: f64, t: f64, gas: &GasParams) -> [f64; 5] {
    let [rho, u, p] = manufactured_prim(x, t);
    let [tau, q] = manufactured_relax(x, t, gas);
    [
        rho,
        rho * u,
        p / (gas.gamma - 1.0) + 0.5 * rho * u * u,
        tau,
        q,
    ]
}

/// Forcing terms (S1, S2, S3) of the conservative gas equations at (x, t).
pub fn manufactured_sources(x: f64, t: f64, gas: &GasParams) -> (f64, f64, f64) {
    let sn = x.sin();
    let cs = x.cos();
    let mu = gas.mu;
    let [rho, u, p] = manufactured_prim(x, t);

    let s1 = 0.1 * sn + (2.0 + 0.1 * t + 0.4 * t * sn) * cs;

    let s2 = (0.6 + 8.0 * mu / 3.0 + 0.2 * sn) * sn
        + (4.0 + 0.1 * t + 8.0 * sn + 0.8 * t * sn + 1.2 * t * sn * sn) * cs;

    // energy equation, term by term:
    // (rho E)_t
    let a = 0.05 * sn + 0.2 * sn * sn + 0.2 * sn * sn * sn;
    // d/dx [ c_p p u ] with c_p = gamma/(gamma-1)
    let c_p = gas.gamma / (gas.gamma - 1.0);
    let pressure_work = c_p * (2.0 * cs - cs * cs + 0.5 * sn + sn * sn);
    // d/dx [ rho u^3 / 2 ]
    let kinetic_flux = cs * (0.1 * t * u * u * u + 6.0 * rho * u * u) / 2.0;
    // -d/dx [ tau u ] with tau = 2 mu_v cos x
    let stress_work = 8.0 / 3.0 * mu * sn - 16.0 / 3.0 * mu * (cs * cs - sn * sn);
    // d/dx q = -(mu_h/(gamma-1)) g'' with g = p/rho
    let dp = 0.5 * sn;
    let ddp = 0.5 * cs;
    let drho = 0.1 * t * cs;
    let ddrho = -0.1 * t * sn;
    let g2 = ddp / rho - 2.0 * dp * drho / (rho * rho) - p * ddrho / (rho * rho)
        + 2.0 * p * drho * drho / (rho * rho * rho);
    let heat = -(gas.mu_h() / (gas.gamma - 1.0)) * g2;

    (s1, s2, a + pressure_work + kinetic_flux + stress_work + heat)
}

// ---------------------------------------------------------------------------
// Exact cell averages
// ---------------------------------------------------------------------------

/// Exact averages of the conservative fields over [a, b] at time t, using
/// closed-form antiderivatives; the relaxation variables average their
/// equilibria (q via the antiderivative of p/rho itself).
pub fn manufactured_cell_avg(a: f64, b: f64, t: f64, gas: &GasParams) -> [f64; 5] {
    let h = b - a;
    let i_sin = (a.cos() - b.cos()) / h;
    let i_cos = (b.sin() - a.sin()) / h;
    let i_sin2 = ((b - a) / 2.0 - ((2.0 * b).sin() - (2.0 * a).sin()) / 4.0) / h;
    let i_sin3 = {
        let f = |x: f64| -x.cos() + x.cos().powi(3) / 3.0;
        (f(b) - f(a)) / h
    };

    let rho = 1.0 + 0.1 * t * i_sin;
    // rho u = 1 + (2 + 0.1 t) sin x + 0.2 t sin^2 x
    let mom = 1.0 + (2.0 + 0.1 * t) * i_sin + 0.2 * t * i_sin2;
    // rho E = 3 - 1.25 cos x + (2 + 0.05 t) sin x + (2 + 0.2 t) sin^2 x
    //         + 0.2 t sin^3 x   (for gamma = 1.4)
    assert!(
        (gas.gamma - 1.4).abs() < 1e-12,
        "closed-form averages assume gamma = 1.4"
    );
    let energy = 3.0 - 1.25 * i_cos + (2.0 + 0.05 * t) * i_sin + (2.0 + 0.2 * t) * i_sin2
        + 0.2 * t * i_sin3;

    let tau = gas.mu_v() * 2.0 * i_cos;
    let g = |x: f64| {
        let [r, _, p] = manufactured_prim(x, t);
        p / r
    };
    let q = -(gas.mu_h() / (gas.gamma - 1.0)) * (g(b) - g(a)) / h;
    [rho, mom, energy, tau, q]
}

// ---------------------------------------------------------------------------
