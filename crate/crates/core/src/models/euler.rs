//! 1D compressible Euler equations in conservative variables
//! U = (rho, rho u, rho E) with an ideal-gas closure.

use super::{cons_to_prim, sound_speed, EigenSystem, GasParams, Model};
use crate::error::{Result, SolverError};

#[derive(Debug, Clone, Copy)]
pub struct EulerModel {
    pub gas: GasParams,
}

impl EulerModel {
    pub fn new(gas: GasParams) -> EulerModel {
        EulerModel { gas }
    }
}

/// Analytic eigendecomposition of the Euler flux Jacobian at `u`,
/// eigenvalues (u-a, u, u+a) in ascending order.
pub fn euler_eigen(u: &[f64], gas: &GasParams) -> Result<EigenSystem> {
    let [rho, vel, p] = cons_to_prim(u, gas)?;
    let a = sound_speed(rho, p, gas.gamma);
    let e_total = u[2] / rho;
    let h = e_total + p / rho; // total specific enthalpy
    let b1 = (gas.gamma - 1.0) / (a * a);
    let b2 = 0.5 * b1 * vel * vel;

    let mut eig = EigenSystem::empty(3);
    eig.values[0] = vel - a;
    eig.values[1] = vel;
    eig.values[2] = vel + a;

    eig.right[0][..3].copy_from_slice(&[1.0, vel - a, h - vel * a]);
    eig.right[1][..3].copy_from_slice(&[1.0, vel, 0.5 * vel * vel]);
    eig.right[2][..3].copy_from_slice(&[1.0, vel + a, h + vel * a]);

    eig.left[0][..3].copy_from_slice(&[
        0.5 * (b2 + vel / a),
        -0.5 * (b1 * vel + 1.0 / a),
        0.5 * b1,
    ]);
    eig.left[1][..3].copy_from_slice(&[1.0 - b2, b1 * vel, -b1]);
    eig.left[2][..3].copy_from_slice(&[
        0.5 * (b2 - vel / a),
        -0.5 * (b1 * vel - 1.0 / a),
        0.5 * b1,
    ]);
    Ok(eig)
}

impl Model for EulerModel {
    fn n_vars(&self) -> usize {
        3
    }

    fn var_names(&self) -> &'static [&'static str] {
        &["rho", "rho_u", "rho_E"]
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        let rho = u[0];
        let vel = u[1] / rho;
        let p = (self.gas.gamma - 1.0) * (u[2] - 0.5 * u[1] * vel);
        out[0] = u[1];
        out[1] = u[1] * vel + p;
        out[2] = (u[2] + p) * vel;
    }

    fn wave_speed(&self, u: &[f64]) -> f64 {
        let rho = u[0];
        let vel = u[1] / rho;
        let p = (self.gas.gamma - 1.0) * (u[2] - 0.5 * u[1] * vel);
        vel.abs() + sound_speed(rho, p, self.gas.gamma)
    }

    fn eigen(&self, u: &[f64]) -> Result<EigenSystem> {
        euler_eigen(u, &self.gas)
    }

    fn check_admissible(&self, u: &[f64], x: f64) -> Result<()> {
        cons_to_prim(u, &self.gas).map(|_| ()).map_err(|_| {
            SolverError::Inadmissible {
                what: format!("state ({}, {}, {})", u[0], u[1], u[2]),
                x,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{prim_to_cons, test_support::assert_inverse_pair};
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rest_state_eigen() {
        let gas = GasParams::default_air();
        let u = prim_to_cons(&[1.0, 0.0, 1.0], &gas).unwrap();
        let eig = euler_eigen(&u, &gas).unwrap();
        let a = (1.4f64).sqrt();
        assert_relative_eq!(eig.values[0], -a, epsilon = 1e-14);
        assert_relative_eq!(eig.values[1], 0.0, epsilon = 1e-14);
        assert_relative_eq!(eig.values[2], a, epsilon = 1e-14);
        assert_inverse_pair(&eig, 1e-13);
    }

    #[test]
    fn sod_flux_values() {
        let gas = GasParams::default_air();
        let m = EulerModel::new(gas);
        let left = prim_to_cons(&[1.0, 0.0, 1.0], &gas).unwrap();
        let mut f = [0.0; 3];
        m.flux(&left, &mut f);
        assert_relative_eq!(f[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(f[1], 1.0, epsilon = 1e-15);
        assert_relative_eq!(f[2], 0.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn eigen_consistency(rho in 0.05f64..10.0, vel in -5.0f64..5.0, p in 0.01f64..20.0) {
            let gas = GasParams::default_air();
            let u = prim_to_cons(&[rho, vel, p], &gas).unwrap();
            let eig = euler_eigen(&u, &gas).unwrap();
            // L.R = I
            for j in 0..3 {
                for k in 0..3 {
                    let mut dot = 0.0;
                    for c in 0..3 {
                        dot += eig.left[j][c] * eig.right[k][c];
                    }
                    let expect = if j == k { 1.0 } else { 0.0 };
                    prop_assert!((dot - expect).abs() < 1e-10);
                }
            }
            // A r_k = lambda_k r_k via finite differences of the flux
            let m = EulerModel::new(gas);
            let fd = super::super::test_support::fd_jacobian(&m, &u);
            for k in 0..3 {
                for r in 0..3 {
                    let mut av = 0.0;
                    for c in 0..3 {
                        av += fd[r][c] * eig.right[k][c];
                    }
                    let scale = eig.values[k].abs().max(1.0) * eig.right[k][r].abs().max(1.0);
                    prop_assert!(
                        (av - eig.values[k] * eig.right[k][r]).abs() < 2e-4 * scale,
                        "k={} r={}: A r = {}, lambda r = {}", k, r, av, eig.values[k] * eig.right[k][r]
                    );
                }
            }
        }
    }
}
