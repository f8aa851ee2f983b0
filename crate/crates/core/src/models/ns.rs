//! Hyperbolic Navier-Stokes system: conservative gas variables augmented with
//! a relaxing viscous stress tau and heat flux q,
//! U = (rho, rho u, rho E, tau, q).
//!
//! The full flow is split into an inviscid sub-system (Euler transport, zero
//! flux in tau and q) and a viscous sub-system whose preconditioned flux
//! couples the gas variables to tau and q at the finite pseudo-speeds
//! a_v = sqrt((mu_v/rho)/T_v) and a_h = sqrt((mu_h/rho)/T_h).

use super::{
    cons_to_prim, euler_eigen, sound_speed, EigenSystem, ExtSource, GasParams, Model,
};
use crate::error::{Result, SolverError};
use nalgebra::Complex;

// ---------------------------------------------------------------------------
// Inviscid sub-system
// ---------------------------------------------------------------------------

/// Euler transport acting on the gas block; tau and q are passively carried
/// with zero flux.
#[derive(Debug, Clone, Copy)]
pub struct NsInviscidModel {
    pub gas: GasParams,
}

impl NsInviscidModel {
    pub fn new(gas: GasParams) -> NsInviscidModel {
        NsInviscidModel { gas }
    }
}

/// Eigendecomposition of the inviscid 5x5 Jacobian: Euler waves zero-padded
/// plus two zero-speed fields aligned with tau and q, sorted ascending.
pub fn ns_inviscid_eigen(u: &[f64], gas: &GasParams) -> Result<EigenSystem> {
    let gas_eig = euler_eigen(&u[..3], gas)?;
    let mut eig = EigenSystem::empty(5);
    for k in 0..3 {
        eig.values[k] = gas_eig.values[k];
        eig.right[k][..3].copy_from_slice(&gas_eig.right[k][..3]);
        eig.left[k][..3].copy_from_slice(&gas_eig.left[k][..3]);
    }
    eig.values[3] = 0.0;
    eig.values[4] = 0.0;
    eig.right[3][3] = 1.0;
    eig.left[3][3] = 1.0;
    eig.right[4][4] = 1.0;
    eig.left[4][4] = 1.0;
    eig.sort_ascending();
    Ok(eig)
}

impl Model for NsInviscidModel {
    fn n_vars(&self) -> usize {
        5
    }

    fn var_names(&self) -> &'static [&'static str] {
        &["rho", "rho_u", "rho_E", "tau", "q"]
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        let rho = u[0];
        let vel = u[1] / rho;
        let p = (self.gas.gamma - 1.0) * (u[2] - 0.5 * u[1] * vel);
        out[0] = u[1];
        out[1] = u[1] * vel + p;
        out[2] = (u[2] + p) * vel;
        out[3] = 0.0;
        out[4] = 0.0;
    }

    fn wave_speed(&self, u: &[f64]) -> f64 {
        let rho = u[0];
        let vel = u[1] / rho;
        let p = (self.gas.gamma - 1.0) * (u[2] - 0.5 * u[1] * vel);
        vel.abs() + sound_speed(rho, p, self.gas.gamma)
    }

    fn eigen(&self, u: &[f64]) -> Result<EigenSystem> {
        ns_inviscid_eigen(u, &self.gas)
    }

    fn check_admissible(&self, u: &[f64], x: f64) -> Result<()> {
        check_ns_admissible(u, &self.gas, x)
    }
}

// ---------------------------------------------------------------------------
// Viscous sub-system
// ---------------------------------------------------------------------------

/// Relaxation transport of (tau, q) coupled back into momentum and energy;
/// flux and source are in preconditioned form (the relaxation-time matrix has
/// been absorbed, leaving stiff -tau/T_v, -q/T_h source entries).
#[derive(Debug, Clone)]
pub struct NsViscousModel {
    pub gas: GasParams,
    pub ext: ExtSource,
    source_diag: [f64; 5],
}

impl NsViscousModel {
    pub fn new(gas: GasParams) -> NsViscousModel {
        NsViscousModel {
            gas,
            ext: ExtSource::None,
            source_diag: [0.0, 0.0, 0.0, -1.0 / gas.relax_v, -1.0 / gas.relax_h],
        }
    }

    pub fn with_source(mut self, ext: ExtSource) -> NsViscousModel {
        self.ext = ext;
        self
    }
}

/// Eigendecomposition of the viscous 5x5 Jacobian at `u`: analytic
/// eigenvectors for the waves (+-a_v, +-a_h) and the zero-speed density
/// field, sorted ascending. Fails when the normalized Prandtl ratio
/// Pr_n = a_v^2/a_h^2 degenerates to 1 (eigenvector basis collapses).
pub fn ns_viscous_eigen(u: &[f64], gas: &GasParams) -> Result<EigenSystem> {
    let rho = u[0];
    if !(rho > 0.0) {
        return Err(SolverError::Inadmissible {
            what: format!("density {rho}"),
            x: f64::NAN,
        });
    }
    let vel = u[1] / rho;
    let e_total = u[2] / rho;
    let tau = u[3];
    let (a_v, a_h) = gas.pseudo_speeds(rho);
    let pr_n = gas.prandtl_ratio();
    if (pr_n - 1.0).abs() < 1e-12 {
        return Err(SolverError::DegeneratePrandtl(pr_n));
    }
    let kappa = tau * pr_n / (a_v * (pr_n - 1.0));
    let tau_n = tau / (pr_n - 1.0);
    let b = 1.0 / (gas.gamma - 1.0);

    let mut eig = EigenSystem::empty(5);
    eig.values = [-a_v, a_v, -a_h, a_h, 0.0];

    eig.right[0] = [0.0, rho, rho * vel + kappa, rho * a_v, -tau_n];
    eig.right[1] = [0.0, rho, rho * vel - kappa, -rho * a_v, -tau_n];
    eig.right[2] = [0.0, 0.0, b, 0.0, -a_h * b];
    eig.right[3] = [0.0, 0.0, b, 0.0, a_h * b];
    eig.right[4] = [1.0, vel, e_total, 0.0, 0.0];

    let inv2rho = 0.5 / rho;
    eig.left[0] = [-vel * inv2rho, inv2rho, 0.0, inv2rho / a_v, 0.0];
    eig.left[1] = [-vel * inv2rho, inv2rho, 0.0, -inv2rho / a_v, 0.0];
    let half_g = 0.5 / b; // (gamma - 1) / 2
    eig.left[2] = [
        half_g * (-e_total + vel * vel + tau_n * vel / (rho * a_h)),
        half_g * (-vel - tau_n / (rho * a_h)),
        half_g,
        half_g * (-kappa / (rho * a_v)),
        half_g * (-1.0 / a_h),
    ];
    eig.left[3] = [
        half_g * (-e_total + vel * vel - tau_n * vel / (rho * a_h)),
        half_g * (-vel + tau_n / (rho * a_h)),
        half_g,
        half_g * (-kappa / (rho * a_v)),
        half_g * (1.0 / a_h),
    ];
    eig.left[4] = [1.0, 0.0, 0.0, 0.0, 0.0];

    eig.sort_ascending();
    Ok(eig)
}

impl Model for NsViscousModel {
    fn n_vars(&self) -> usize {
        5
    }

    fn var_names(&self) -> &'static [&'static str] {
        &["rho", "rho_u", "rho_E", "tau", "q"]
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        let rho = u[0];
        let vel = u[1] / rho;
        let e_total = u[2] / rho;
        let tau = u[3];
        let q = u[4];
        out[0] = 0.0;
        out[1] = -tau;
        out[2] = -tau * vel + q;
        out[3] = -(self.gas.mu_v() / self.gas.relax_v) * vel;
        out[4] = (self.gas.mu_h() / self.gas.relax_h) * (e_total - 0.5 * vel * vel);
    }

    fn wave_speed(&self, u: &[f64]) -> f64 {
        let (a_v, a_h) = self.gas.pseudo_speeds(u[0]);
        a_v.max(a_h)
    }

    fn eigen(&self, u: &[f64]) -> Result<EigenSystem> {
        ns_viscous_eigen(u, &self.gas)
    }

    fn check_admissible(&self, u: &[f64], x: f64) -> Result<()> {
        check_ns_admissible(u, &self.gas, x)
    }

    fn has_source(&self) -> bool {
        true
    }

    fn source_diag(&self) -> &[f64] {
        &self.source_diag
    }

    fn external_source(&self, x: f64, t: f64, out: &mut [f64]) {
        self.ext.eval(x, t, out);
    }
}

fn check_ns_admissible(u: &[f64], gas: &GasParams, x: f64) -> Result<()> {
    cons_to_prim(&u[..3], gas).map_err(|_| SolverError::Inadmissible {
        what: format!("gas state ({}, {}, {})", u[0], u[1], u[2]),
        x,
    })?;
    if u[3].is_finite() && u[4].is_finite() {
        Ok(())
    } else {
        Err(SolverError::Inadmissible {
            what: format!("non-finite stress/heat-flux ({}, {})", u[3], u[4]),
            x,
        })
    }
}

// ---------------------------------------------------------------------------
// Characteristic polynomial of the combined system
// ---------------------------------------------------------------------------

/// Coefficients of the degree-5 characteristic polynomial of the combined
/// (inviscid + viscous) primitive Jacobian:
///   p(l) = (u-l) c1 + l (u-l)^2 c2 + l c3 + l^2 (u-l)^3 - l^2 (u-l) c4
/// with c1 = a_v^2 a_h^2, c2 = a_v^2 + a_h^2, c3 = -a_h^2 a^2 / gamma,
/// c4 = a^2 - (gamma-1) tau / rho.
#[derive(Debug, Clone, Copy)]
pub struct CharCoeffs {
    pub u: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl CharCoeffs {
    /// Build from a primitive state (rho, u, p, tau, q) and gas parameters.
    pub fn from_primitive(q: &[f64; 5], gas: &GasParams) -> Result<CharCoeffs> {
        let (rho, vel, p, tau) = (q[0], q[1], q[2], q[3]);
        if !(rho > 0.0 && p > 0.0) {
            return Err(SolverError::Inadmissible {
                what: format!("primitive state rho {rho}, p {p}"),
                x: f64::NAN,
            });
        }
        let (a_v, a_h) = gas.pseudo_speeds(rho);
        let a2 = gas.gamma * p / rho;
        Ok(CharCoeffs::from_speeds(
            vel,
            a_v * a_v,
            a_h * a_h,
            a2,
            tau / rho,
            gas.gamma,
        ))
    }

    /// Build directly from squared speeds; used by the nondimensional
    /// parameter sweep where a_v, a_h, and a vary independently.
    pub fn from_speeds(
        u: f64,
        a_v2: f64,
        a_h2: f64,
        a2: f64,
        tau_over_rho: f64,
        gamma: f64,
    ) -> CharCoeffs {
        CharCoeffs {
            u,
            c1: a_v2 * a_h2,
            c2: a_v2 + a_h2,
            c3: -a_h2 * a2 / gamma,
            c4: a2 - (gamma - 1.0) * tau_over_rho,
        }
    }

    /// Evaluate p(lambda) in the factored form.
    pub fn eval(&self, l: f64) -> f64 {
        let d = self.u - l;
        d * self.c1 + l * d * d * self.c2 + l * self.c3 + l * l * d * d * d
            - l * l * d * self.c4
    }

    /// Monic coefficients (p4, p3, p2, p1, p0) of
    /// l^5 + p4 l^4 + p3 l^3 + p2 l^2 + p1 l + p0 = -p(l).
    pub fn monic(&self) -> [f64; 5] {
        let (u, c1, c2, c3, c4) = (self.u, self.c1, self.c2, self.c3, self.c4);
        [
            -3.0 * u,
            3.0 * u * u - c2 - c4,
            (2.0 * c2 + c4) * u - u * u * u,
            c1 - c2 * u * u - c3,
            -c1 * u,
        ]
    }

    /// All five characteristic roots.
    ///
    /// For u = 0 the quintic degenerates to lambda times a biquadratic and is
    /// solved in closed form; otherwise a Durand-Kerner iteration on the monic
    /// coefficients finds all roots simultaneously.
    pub fn roots(&self) -> Vec<Complex<f64>> {
        if self.u == 0.0 {
            // p(l) = -l (l^4 - (c2 + c4) l^2 + (c1 - c3)) exactly.
            let b = self.c2 + self.c4;
            let c = self.c1 - self.c3;
            let disc = Complex::new(b * b - 4.0 * c, 0.0).sqrt();
            let mut out = vec![Complex::new(0.0, 0.0)];
            for y in [(Complex::new(b, 0.0) + disc) * 0.5, (Complex::new(b, 0.0) - disc) * 0.5] {
                let r = y.sqrt();
                out.push(r);
                out.push(-r);
            }
            return out;
        }
        durand_kerner(&self.monic())
    }
}

/// Simultaneous (Durand-Kerner) iteration for all roots of a monic quintic
/// with real coefficients `[p4, p3, p2, p1, p0]`.
fn durand_kerner(p: &[f64; 5]) -> Vec<Complex<f64>> {
    let eval = |z: Complex<f64>| ((((z + p[0]) * z + p[1]) * z + p[2]) * z + p[3]) * z + p[4];
    // Fujiwara bound on the root magnitudes.
    let radius = 2.0 * [
        p[0].abs(),
        p[1].abs().sqrt(),
        p[2].abs().cbrt(),
        p[3].abs().powf(0.25),
        p[4].abs().powf(0.2),
    ]
    .iter()
    .fold(0.5_f64, |m, &v| m.max(v));

    // Distinct moduli and an angular offset break any root symmetry that
    // could stall the iteration.
    let mut z: Vec<Complex<f64>> = (0..5)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / 5.0 + 0.7;
            Complex::from_polar(radius * (0.35 + 0.13 * k as f64), ang)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..5 {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..5 {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * radius {
            break;
        }
    }
    z
}

/// Evaluate the combined-system characteristic polynomial at `lambda` for a
/// primitive state (rho, u, p, tau, q).
pub fn ns_char_poly(q: &[f64; 5], gas: &GasParams, lambda: f64) -> Result<f64> {
    Ok(CharCoeffs::from_primitive(q, gas)?.eval(lambda))
}

// ---------------------------------------------------------------------------
// Root-reality sweep
// ---------------------------------------------------------------------------

/// Summary of a sweep over the nondimensional parameter box checking that
/// every characteristic root is real (hyperbolicity of the combined system).
#[derive(Debug, Clone)]
pub struct RootsReport {
    pub cases: usize,
    pub max_abs_imag: f64,
    pub max_abs_real: f64,
    /// Parameters (u, a_v^2 rho, a_h^2 rho, rho, tau) of the worst case.
    pub worst: [f64; 5],
}

impl RootsReport {
    /// True when max |Im| <= ratio * max |Re| over the whole sweep.
    pub fn all_real(&self, ratio: f64) -> bool {
        self.max_abs_imag <= ratio * self.max_abs_real
    }
}

impl std::fmt::Display for RootsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} cases: max|Im| = {:.3e}, max|Re| = {:.3e}, worst at u={:.3} nu_v*={:.3} nu_h*={:.3} rho={:.3} tau={:.3}",
            self.cases,
            self.max_abs_imag,
            self.max_abs_real,
            self.worst[0],
            self.worst[1],
            self.worst[2],
            self.worst[3],
            self.worst[4]
        )
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Shear stress in the reality sweep is expressed in units of the freestream
/// viscous stress mu_ref a_ref / L_ref; with the gas benchmarks' reference
/// viscosity mu_ref = 0.01 and a_ref = L_ref = 1 this covers tau in
/// [-0.03, 0.03] in pressure units. Shear of pressure magnitude lies far
/// outside the viscous regime and genuinely loses hyperbolicity there.
pub const SWEEP_TAU_SCALE: f64 = 0.01;

/// Sweep the nondimensional box (u/a in [0,5], scaled viscous rates in
/// [0.1,10], rho/rho_ref in [0.1,20], viscous-scaled tau in [-3,3]) with
/// `samples_per_var` equally spaced samples per axis, computing all
/// characteristic roots per case. Reference scales: a_ref = rho_ref = 1,
/// gamma = 1.4, pressure fixed at its freestream value (a^2 = 1/rho).
pub fn real_roots_sweep(samples_per_var: usize) -> RootsReport {
    let gamma = 1.4;
    let us = linspace(0.0, 5.0, samples_per_var);
    let s_v = linspace(0.1, 10.0, samples_per_var);
    let s_h = linspace(0.1, 10.0, samples_per_var);
    let rhos = linspace(0.1, 20.0, samples_per_var);
    let taus = linspace(-3.0, 3.0, samples_per_var);

    let mut report = RootsReport {
        cases: 0,
        max_abs_imag: 0.0,
        max_abs_real: 0.0,
        worst: [0.0; 5],
    };
    for &u in &us {
        for &sv in &s_v {
            for &sh in &s_h {
                for &rho in &rhos {
                    for &tau_hat in &taus {
                        // a_ref^2 rho_ref = gamma p_ref => a^2 = 1/rho in sweep units
                        let a2 = 1.0 / rho;
                        let tau = tau_hat * SWEEP_TAU_SCALE;
                        let coeffs = CharCoeffs::from_speeds(
                            u,
                            sv / rho,
                            sh / rho,
                            a2,
                            tau / rho,
                            gamma,
                        );
                        report.cases += 1;
                        for root in coeffs.roots() {
                            if root.im.abs() > report.max_abs_imag {
                                report.max_abs_imag = root.im.abs();
                                report.worst = [u, sv, sh, rho, tau_hat];
                            }
                            report.max_abs_real = report.max_abs_real.max(root.re.abs());
                        }
                    }
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::super::{prim_to_cons, test_support::assert_inverse_pair};
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn pack(rho: f64, vel: f64, p: f64, tau: f64, q: f64, gas: &GasParams) -> [f64; 5] {
        let gas_u = prim_to_cons(&[rho, vel, p], gas).unwrap();
        [gas_u[0], gas_u[1], gas_u[2], tau, q]
    }

    #[test]
    fn inviscid_eigen_matches_euler_padding() {
        let gas = GasParams::default_air();
        let u = pack(1.0, 0.5, 1.0, 0.2, -0.1, &gas);
        let eig = ns_inviscid_eigen(&u, &gas).unwrap();
        assert_inverse_pair(&eig, 1e-12);
        // two zero eigenvalues present
        let zeros = (0..5).filter(|&k| eig.values[k] == 0.0).count();
        assert_eq!(zeros, 2);
        for k in 1..5 {
            assert!(eig.values[k] >= eig.values[k - 1]);
        }
    }

    #[test]
    fn viscous_eigenvalues_are_symmetric_pairs() {
        let gas = GasParams::default_air();
        let u = pack(1.3, 2.0, 2.4, 0.3, -0.2, &gas);
        let eig = ns_viscous_eigen(&u, &gas).unwrap();
        let (a_v, a_h) = gas.pseudo_speeds(1.3);
        // ascending: -a_h, -a_v, 0, a_v, a_h when a_v < a_h
        assert!(a_v < a_h);
        assert_relative_eq!(eig.values[0], -a_h, epsilon = 1e-14);
        assert_relative_eq!(eig.values[1], -a_v, epsilon = 1e-14);
        assert_relative_eq!(eig.values[2], 0.0, epsilon = 1e-14);
        assert_relative_eq!(eig.values[3], a_v, epsilon = 1e-14);
        assert_relative_eq!(eig.values[4], a_h, epsilon = 1e-14);
        assert_inverse_pair(&eig, 1e-11);
    }

    #[test]
    fn viscous_eigenvalues_independent_of_velocity() {
        let gas = GasParams::default_air();
        let a = pack(1.3, 0.0, 2.4, 0.3, -0.2, &gas);
        let b = pack(1.3, 5.0, 2.4, 0.3, -0.2, &gas);
        let ea = ns_viscous_eigen(&a, &gas).unwrap();
        let eb = ns_viscous_eigen(&b, &gas).unwrap();
        for k in 0..5 {
            assert_relative_eq!(ea.values[k], eb.values[k], epsilon = 1e-14);
        }
    }

    #[test]
    fn degenerate_prandtl_rejected() {
        // craft relaxation times so that mu_v/T_v == mu_h/T_h => a_v = a_h
        let mut gas = GasParams::default_air();
        gas.relax_v = 1.0;
        gas.relax_h = gas.mu_h() / gas.mu_v();
        let u = pack(1.0, 0.0, 1.0, 0.1, 0.0, &gas);
        match ns_viscous_eigen(&u, &gas) {
            Err(SolverError::DegeneratePrandtl(r)) => assert_relative_eq!(r, 1.0, epsilon = 1e-12),
            other => panic!("expected DegeneratePrandtl, got {other:?}"),
        }
    }

    #[test]
    fn char_poly_special_values() {
        let gas = GasParams::default_air();
        let q = [1.7, 0.8, 2.0, 0.4, -0.3];
        let coeffs = CharCoeffs::from_primitive(&q, &gas).unwrap();
        // p(u) = u c3, p(0) = u c1
        assert_relative_eq!(coeffs.eval(q[1]), q[1] * coeffs.c3, epsilon = 1e-13);
        assert_relative_eq!(coeffs.eval(0.0), q[1] * coeffs.c1, epsilon = 1e-15);
        // factored and monic forms agree
        for &l in &[-1.3, -0.2, 0.45, 1.0, 2.6] {
            let p = coeffs.monic();
            let monic_val =
                ((((l + p[0]) * l + p[1]) * l + p[2]) * l + p[3]) * l + p[4];
            assert_relative_eq!(-coeffs.eval(l), monic_val, epsilon = 1e-11, max_relative = 1e-11);
        }
    }

    /// Assemble the combined primitive Jacobian and verify its eigenvalues
    /// are the roots of the characteristic polynomial.
    #[test]
    fn char_poly_matches_primitive_jacobian() {
        let gas = GasParams::default_air();
        for q in [
            [1.0, 0.3, 1.0, 0.0, 0.0],
            [1.7, 0.8, 2.0, 0.4, -0.3],
            [0.4, -1.5, 0.3, -0.2, 0.1],
        ] {
            let (rho, vel, p, tau) = (q[0], q[1], q[2], q[3]);
            let (a_v, a_h) = gas.pseudo_speeds(rho);
            let (av2, ah2) = (a_v * a_v, a_h * a_h);
            let a2 = gas.gamma * p / rho;
            let g1 = gas.gamma - 1.0;
            #[rustfmt::skip]
            let b = DMatrix::from_row_slice(5, 5, &[
                vel, rho, 0.0, 0.0, 0.0,
                0.0, vel, 1.0 / rho, -1.0 / rho, 0.0,
                0.0, rho * a2 - g1 * tau, vel, 0.0, g1,
                0.0, -rho * av2, 0.0, 0.0, 0.0,
                -ah2 * a2 / (gas.gamma * g1), 0.0, ah2 / g1, 0.0, 0.0,
            ]);
            let coeffs = CharCoeffs::from_primitive(&q, &gas).unwrap();
            let mut jac_eigs: Vec<f64> = b
                .complex_eigenvalues()
                .iter()
                .map(|z| {
                    assert!(z.im.abs() < 1e-9, "complex Jacobian eigenvalue {z}");
                    z.re
                })
                .collect();
            jac_eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut roots: Vec<f64> = coeffs
                .roots()
                .iter()
                .map(|z| {
                    assert!(z.im.abs() < 1e-9, "complex characteristic root {z}");
                    z.re
                })
                .collect();
            roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let scale = jac_eigs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for k in 0..5 {
                assert!(
                    (jac_eigs[k] - roots[k]).abs() < 1e-7 * scale,
                    "root {k}: Jacobian {} vs polynomial {}",
                    jac_eigs[k],
                    roots[k]
                );
            }
            // polynomial itself vanishes on the Jacobian spectrum
            let poly_scale = coeffs.c1.abs().max(coeffs.c2.abs()).max(scale.powi(5));
            for &l in &jac_eigs {
                assert!(coeffs.eval(l).abs() < 1e-7 * poly_scale);
            }
        }
    }

    #[test]
    fn quintic_solver_recovers_known_roots() {
        // (l - 2)(l + 1)(l - 0.5)(l + 3)(l - 4)
        let known = [-3.0, -1.0, 0.5, 2.0, 4.0];
        let p = {
            // expand the monic product
            let mut c = vec![1.0];
            for &r in &known {
                let mut next = vec![0.0; c.len() + 1];
                for (k, &ck) in c.iter().enumerate() {
                    next[k] += ck;
                    next[k + 1] -= ck * r;
                }
                c = next;
            }
            [c[1], c[2], c[3], c[4], c[5]]
        };
        let mut got: Vec<f64> = durand_kerner(&p)
            .iter()
            .map(|z| {
                assert!(z.im.abs() < 1e-12, "spurious imaginary part {z}");
                z.re
            })
            .collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, r) in got.iter().zip(known.iter()) {
            assert_relative_eq!(g, r, epsilon = 1e-11);
        }
    }

    #[test]
    fn stationary_roots_use_closed_form() {
        // u = 0: roots are 0 and the +-sqrt pairs of the biquadratic
        let coeffs = CharCoeffs::from_speeds(0.0, 2.0, 5.0, 1.4, 0.3, 1.4);
        let mut roots: Vec<f64> = coeffs
            .roots()
            .iter()
            .map(|z| {
                assert_eq!(z.im, 0.0);
                z.re
            })
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(roots[2], 0.0);
        assert_relative_eq!(roots[0], -roots[4], epsilon = 1e-14);
        assert_relative_eq!(roots[1], -roots[3], epsilon = 1e-14);
        for &r in &roots {
            assert!(coeffs.eval(r).abs() < 1e-12 * coeffs.c1.max(1.0));
        }
    }

    #[test]
    fn roots_sweep_small_box_is_real() {
        let report = real_roots_sweep(3);
        assert_eq!(report.cases, 243);
        assert!(
            report.all_real(1e-8),
            "sweep found complex roots: {report}"
        );
    }

    #[test]
    fn viscous_flux_values() {
        let gas = GasParams::default_air();
        let m = NsViscousModel::new(gas);
        let u = pack(2.0, 1.0, 1.4, 0.5, -0.3, &gas);
        let mut f = [0.0; 5];
        m.flux(&u, &mut f);
        assert_relative_eq!(f[0], 0.0);
        assert_relative_eq!(f[1], -0.5);
        assert_relative_eq!(f[2], -0.5 * 1.0 + (-0.3));
        assert_relative_eq!(f[3], -(gas.mu_v() / gas.relax_v) * 1.0, epsilon = 1e-15);
        // e_int = p/rho/(gamma-1)
        let e_int = 1.4 / 2.0 / 0.4;
        assert_relative_eq!(f[4], (gas.mu_h() / gas.relax_h) * e_int, epsilon = 1e-14);
    }
}
