//! Equation-system definitions: Burgers, Euler, hyperbolic diffusion, and the
//! hyperbolic Navier-Stokes sub-systems. Each model exposes its
//! (preconditioned) flux, source, eigenstructure, and wave-speed bound.

mod burgers;
mod diffusion;
mod euler;
mod ns;

pub use burgers::{burgers_model, BurgersModel};
pub use diffusion::{diffusion_model, DiffusionModel, DiffusionParams};
pub use euler::{euler_eigen, EulerModel};
pub use ns::{
    ns_char_poly, ns_inviscid_eigen, ns_viscous_eigen, real_roots_sweep, NsInviscidModel,
    NsViscousModel, RootsReport,
};

use crate::error::{Result, SolverError};
use crate::mesh::MAX_VARS;

// ---------------------------------------------------------------------------
// EigenSystem
// ---------------------------------------------------------------------------

/// Eigendecomposition of a model Jacobian at one state: eigenvalues sorted
/// ascending with consistently permuted right eigenvectors (columns) and left
/// eigenvectors (rows), normalized so that L·R = I.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub n: usize,
    pub values: [f64; MAX_VARS],
    /// `right[k]` is the k-th right eigenvector.
    pub right: [[f64; MAX_VARS]; MAX_VARS],
    /// `left[k]` is the k-th left eigenvector.
    pub left: [[f64; MAX_VARS]; MAX_VARS],
}

impl EigenSystem {
    pub fn empty(n: usize) -> Self {
        EigenSystem {
            n,
            values: [0.0; MAX_VARS],
            right: [[0.0; MAX_VARS]; MAX_VARS],
            left: [[0.0; MAX_VARS]; MAX_VARS],
        }
    }

    /// Characteristic increment of field k: left[k] . u.
    #[inline]
    pub fn project(&self, k: usize, u: &[f64]) -> f64 {
        let mut w = 0.0;
        for c in 0..self.n {
            w += self.left[k][c] * u[c];
        }
        w
    }

    /// Sort eigenvalues ascending, permuting eigenvector pairs consistently.
    pub fn sort_ascending(&mut self) {
        let n = self.n;
        let mut idx: [usize; MAX_VARS] = [0, 1, 2, 3, 4];
        idx[..n].sort_by(|&a, &b| self.values[a].partial_cmp(&self.values[b]).unwrap());
        let vals = self.values;
        let right = self.right;
        let left = self.left;
        for (pos, &k) in idx[..n].iter().enumerate() {
            self.values[pos] = vals[k];
            self.right[pos] = right[k];
            self.left[pos] = left[k];
        }
    }
}

// ---------------------------------------------------------------------------
// Gas parameters
// ---------------------------------------------------------------------------

/// Ideal-gas and hyperbolization parameters shared by the Euler and
/// Navier-Stokes models. Derived viscosities: mu_v = 4 mu / 3 (combined
/// shear/bulk), mu_h = gamma mu / Pr (heat).
#[derive(Debug, Clone, Copy)]
pub struct GasParams {
    pub gamma: f64,
    pub prandtl: f64,
    pub mu: f64,
    /// Relaxation time of the stress equation, T_v.
    pub relax_v: f64,
    /// Relaxation time of the heat-flux equation, T_h.
    pub relax_h: f64,
}

impl GasParams {
    /// gamma = 1.4, Pr = 0.72, with relaxation times T = L^2/nu at a
    /// reference density of 1 and L = 1/(2 pi), mirroring the diffusion
    /// test's choice.
    pub fn default_air() -> GasParams {
        GasParams::with_viscosity(0.01)
    }

    pub fn with_viscosity(mu: f64) -> GasParams {
        let gamma = 1.4;
        let prandtl = 0.72;
        let l = 1.0 / (2.0 * std::f64::consts::PI);
        let mu_v = 4.0 * mu / 3.0;
        let mu_h = gamma * mu / prandtl;
        // nu = mu/rho_ref with rho_ref = 1
        let relax_v = if mu > 0.0 { l * l / mu_v } else { 1.0 };
        let relax_h = if mu > 0.0 { l * l / mu_h } else { 1.0 };
        GasParams {
            gamma,
            prandtl,
            mu,
            relax_v,
            relax_h,
        }
    }

    pub fn mu_v(&self) -> f64 {
        4.0 * self.mu / 3.0
    }

    pub fn mu_h(&self) -> f64 {
        self.gamma * self.mu / self.prandtl
    }

    /// Viscous pseudo-speeds at density rho: a_v = sqrt((mu_v/rho)/T_v),
    /// a_h = sqrt((mu_h/rho)/T_h).
    pub fn pseudo_speeds(&self, rho: f64) -> (f64, f64) {
        (
            (self.mu_v() / rho / self.relax_v).sqrt(),
            (self.mu_h() / rho / self.relax_h).sqrt(),
        )
    }

    /// Pr_n = a_v^2 / a_h^2; density-independent.
    pub fn prandtl_ratio(&self) -> f64 {
        (self.mu_v() / self.relax_v) / (self.mu_h() / self.relax_h)
    }
}

// ---------------------------------------------------------------------------
// External sources
// ---------------------------------------------------------------------------

/// Additive external source term (already in preconditioned form), attached
/// to a model by the problem presets.
#[derive(Debug, Clone)]
pub enum ExtSource {
    None,
    /// S_1(x) = amp * exp(rate * x) in component 0 (diffusion forcing).
    Exp { amp: f64, rate: f64 },
    /// Manufactured Navier-Stokes gas sources in components 0..3.
    Manufactured(GasParams),
}

impl ExtSource {
    pub fn eval(&self, x: f64, t: f64, out: &mut [f64]) {
        match self {
            ExtSource::None => {}
            ExtSource::Exp { amp, rate } => out[0] += amp * (rate * x).exp(),
            ExtSource::Manufactured(gas) => {
                let (s1, s2, s3) = crate::verification::manufactured_sources(x, t, gas);
                out[0] += s1;
                out[1] += s2;
                out[2] += s3;
            }
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, ExtSource::None)
    }
}

// ---------------------------------------------------------------------------
// Model trait
// ---------------------------------------------------------------------------

/// An equation system: flux, preconditioned source, eigenstructure, and
/// wave-speed bound. All methods are pure; models are immutable after
/// construction.
pub trait Model {
    fn n_vars(&self) -> usize;
    fn var_names(&self) -> &'static [&'static str];

    /// (Preconditioned) flux P.F evaluated at `u`, written to `out`.
    fn flux(&self, u: &[f64], out: &mut [f64]);

    /// Spectral radius of the flux Jacobian at `u`.
    fn wave_speed(&self, u: &[f64]) -> f64;

    /// Eigendecomposition at `u`, eigenvalues ascending, L.R = I.
    fn eigen(&self, u: &[f64]) -> Result<EigenSystem>;

    /// Reject states outside the admissible set (e.g. negative pressure).
    fn check_admissible(&self, u: &[f64], x: f64) -> Result<()>;

    fn has_source(&self) -> bool {
        false
    }

    /// Linear relaxation coefficients K: the relaxation part of the
    /// preconditioned source is K[c] * u[c] componentwise. Empty = none.
    fn source_diag(&self) -> &[f64] {
        &[]
    }

    /// External additive source at (x, t).
    fn external_source(&self, _x: f64, _t: f64, _out: &mut [f64]) {}

    /// Full preconditioned source P.S = K∘u + S_ext(x, t).
    fn precond_source(&self, u: &[f64], x: f64, t: f64, out: &mut [f64]) {
        out[..self.n_vars()].fill(0.0);
        let diag = self.source_diag();
        if !diag.is_empty() {
            for c in 0..self.n_vars() {
                out[c] = diag[c] * u[c];
            }
        }
        self.external_source(x, t, out);
    }
}

// ---------------------------------------------------------------------------
// Primitive <-> conservative conversion (gas systems)
// ---------------------------------------------------------------------------

/// (rho, u, p) -> (rho, rho u, rho E) with rho E = p/(gamma-1) + rho u^2/2.
pub fn prim_to_cons(q: &[f64; 3], gas: &GasParams) -> Result<[f64; 3]> {
    let (rho, u, p) = (q[0], q[1], q[2]);
    if !(rho > 0.0) {
        return Err(SolverError::Inadmissible {
            what: format!("density {rho}"),
            x: f64::NAN,
        });
    }
    if !(p > 0.0) {
        return Err(SolverError::Inadmissible {
            what: format!("pressure {p}"),
            x: f64::NAN,
        });
    }
    Ok([rho, rho * u, p / (gas.gamma - 1.0) + 0.5 * rho * u * u])
}

/// Inverse of [`prim_to_cons`]; rejects non-positive density or pressure.
pub fn cons_to_prim(u: &[f64], gas: &GasParams) -> Result<[f64; 3]> {
    let rho = u[0];
    if !(rho > 0.0) {
        return Err(SolverError::Inadmissible {
            what: format!("density {rho}"),
            x: f64::NAN,
        });
    }
    let vel = u[1] / rho;
    let p = (gas.gamma - 1.0) * (u[2] - 0.5 * rho * vel * vel);
    if !(p > 0.0) {
        return Err(SolverError::Inadmissible {
            what: format!("pressure {p}"),
            x: f64::NAN,
        });
    }
    Ok([rho, vel, p])
}

/// Sound speed a = sqrt(gamma p / rho).
pub fn sound_speed(rho: f64, p: f64, gamma: f64) -> f64 {
    (gamma * p / rho).sqrt()
}

// ---------------------------------------------------------------------------

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Finite-difference Jacobian of a model's flux (central differences,
    /// per-component steps so a small component next to a large one is not
    /// perturbed out of proportion).
    pub fn fd_jacobian(model: &dyn Model, u: &[f64]) -> Vec<Vec<f64>> {
        let m = model.n_vars();
        let mut jac = vec![vec![0.0; m]; m];
        let scale: f64 = u.iter().map(|v| v.abs()).fold(0.1f64, f64::max);
        let mut up = vec![0.0; m];
        let mut um = vec![0.0; m];
        let mut fp = vec![0.0; m];
        let mut fm = vec![0.0; m];
        for c in 0..m {
            let h = 1e-6 * u[c].abs().max(0.01 * scale);
            up.copy_from_slice(u);
            um.copy_from_slice(u);
            up[c] += h;
            um[c] -= h;
            model.flux(&up, &mut fp);
            model.flux(&um, &mut fm);
            for (r, row) in jac.iter_mut().enumerate() {
                row[c] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        jac
    }

    /// Reassemble R . diag(lambda) . L from an eigensystem.
    pub fn reassemble(eig: &EigenSystem) -> Vec<Vec<f64>> {
        let n = eig.n;
        let mut a = vec![vec![0.0; n]; n];
        for k in 0..n {
            for r in 0..n {
                for c in 0..n {
                    a[r][c] += eig.right[k][r] * eig.values[k] * eig.left[k][c];
                }
            }
        }
        a
    }

    /// Assert L.R = I and projector completeness to `tol` (absolute).
    pub fn assert_inverse_pair(eig: &EigenSystem, tol: f64) {
        let n = eig.n;
        for j in 0..n {
            for k in 0..n {
                let mut dot = 0.0;
                for c in 0..n {
                    dot += eig.left[j][c] * eig.right[k][c];
                }
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!(
                    (dot - expect).abs() < tol,
                    "L.R[{j}][{k}] = {dot}, expected {expect}"
                );
            }
        }
        // projector completeness: sum_k R_k L_k = I
        for r in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += eig.right[k][r] * eig.left[k][c];
                }
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!(
                    (s - expect).abs() < tol,
                    "projector sum [{r}][{c}] = {s}, expected {expect}"
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn prim_cons_examples() {
        let gas = GasParams::default_air();
        let u = prim_to_cons(&[1.0, 0.0, 1.0], &gas).unwrap();
        assert_relative_eq!(u[2], 2.5, epsilon = 1e-14);
        let u = prim_to_cons(&[0.125, 0.0, 0.1], &gas).unwrap();
        assert_relative_eq!(u[2], 0.25, epsilon = 1e-14);
        assert!(prim_to_cons(&[-1.0, 0.0, 1.0], &gas).is_err());
        assert!(cons_to_prim(&[1.0, 10.0, 2.5], &gas).is_err()); // negative p
    }

    proptest! {
        #[test]
        fn prim_cons_round_trip(rho in 0.05f64..20.0, u in -10.0f64..10.0, p in 0.01f64..50.0) {
            let gas = GasParams::default_air();
            let cons = prim_to_cons(&[rho, u, p], &gas).unwrap();
            let back = cons_to_prim(&cons, &gas).unwrap();
            prop_assert!((back[0] - rho).abs() <= 1e-13 * rho);
            prop_assert!((back[1] - u).abs() <= 1e-13 * (1.0 + u.abs()));
            prop_assert!((back[2] - p).abs() <= 1e-12 * p);
        }
    }

    #[test]
    fn fd_jacobian_matches_eigen_reassembly_all_models() {
        let gas = GasParams::default_air();
        let models: Vec<(Box<dyn Model>, Vec<Vec<f64>>)> = vec![
            (
                Box::new(burgers_model()),
                vec![vec![0.8], vec![-2.5], vec![4.0]],
            ),
            (
                Box::new(EulerModel::new(gas)),
                vec![
                    prim_to_cons(&[1.0, 0.3, 1.0], &gas).unwrap().to_vec(),
                    prim_to_cons(&[0.4, -2.0, 0.2], &gas).unwrap().to_vec(),
                    prim_to_cons(&[3.0, 1.5, 7.0], &gas).unwrap().to_vec(),
                ],
            ),
            (
                Box::new(diffusion_model(DiffusionParams::new(0.01, 2.5))),
                vec![vec![1.0, 0.2], vec![-0.5, 0.9]],
            ),
            (
                Box::new(NsInviscidModel::new(gas)),
                vec![vec![1.0, 0.3, 2.6, 0.2, -0.1]],
            ),
            (
                Box::new(NsViscousModel::new(gas)),
                vec![vec![1.0, 0.3, 2.6, 0.2, -0.1], vec![2.0, -1.0, 5.0, -0.3, 0.4]],
            ),
        ];
        for (model, states) in &models {
            for u in states {
                let eig = model.eigen(u).unwrap();
                let fd = fd_jacobian(model.as_ref(), u);
                let re = reassemble(&eig);
                let norm: f64 = fd.iter().flatten().map(|v| v.abs()).fold(0.1, f64::max);
                for r in 0..model.n_vars() {
                    for c in 0..model.n_vars() {
                        assert!(
                            (fd[r][c] - re[r][c]).abs() <= 1e-5 * norm,
                            "model {:?} entry ({r},{c}): fd {} vs RLambdaL {}",
                            model.var_names(),
                            fd[r][c],
                            re[r][c]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvalues_sorted_all_models() {
        let gas = GasParams::default_air();
        let models: Vec<(Box<dyn Model>, Vec<f64>)> = vec![
            (Box::new(EulerModel::new(gas)), prim_to_cons(&[1.3, -0.4, 2.0], &gas).unwrap().to_vec()),
            (Box::new(NsInviscidModel::new(gas)), vec![1.0, 2.0, 4.0, 0.1, 0.2]),
            (Box::new(NsViscousModel::new(gas)), vec![1.0, 2.0, 4.0, 0.1, 0.2]),
            (Box::new(diffusion_model(DiffusionParams::new(0.01, 2.5))), vec![0.3, -0.2]),
        ];
        for (model, u) in &models {
            let eig = model.eigen(u).unwrap();
            for k in 1..eig.n {
                assert!(eig.values[k] >= eig.values[k - 1]);
            }
            assert_inverse_pair(&eig, 1e-10);
        }
    }
}
