//! Inviscid Burgers equation: u_t + (u^2/2)_x = 0.

use super::{EigenSystem, Model};
use crate::error::{Result, SolverError};

#[derive(Debug, Clone, Copy, Default)]
pub struct BurgersModel;

/// Convenience constructor mirroring the other model factories.
pub fn burgers_model() -> BurgersModel {
    BurgersModel
}

impl Model for BurgersModel {
    fn n_vars(&self) -> usize {
        1
    }

    fn var_names(&self) -> &'static [&'static str] {
        &["u"]
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        out[0] = 0.5 * u[0] * u[0];
    }

    fn wave_speed(&self, u: &[f64]) -> f64 {
        u[0].abs()
    }

    fn eigen(&self, u: &[f64]) -> Result<EigenSystem> {
        let mut eig = EigenSystem::empty(1);
        eig.values[0] = u[0];
        eig.right[0][0] = 1.0;
        eig.left[0][0] = 1.0;
        Ok(eig)
    }

    fn check_admissible(&self, u: &[f64], x: f64) -> Result<()> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err(SolverError::Inadmissible {
                what: format!("non-finite state {}", u[0]),
                x,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn flux_and_speed() {
        let m = burgers_model();
        let mut f = [0.0];
        m.flux(&[3.0], &mut f);
        assert_relative_eq!(f[0], 4.5);
        assert_relative_eq!(m.wave_speed(&[-2.0]), 2.0);
        let eig = m.eigen(&[0.7]).unwrap();
        assert_relative_eq!(eig.values[0], 0.7);
        assert_relative_eq!(eig.right[0][0] * eig.left[0][0], 1.0);
    }
}
