//! First-order hyperbolic reformulation of the heat equation
//! u_t = nu u_xx + S_1(x): variables (u, p) with p relaxing towards nu u_x.
//!
//! In preconditioned form the system reads
//!   u_t - p_x         = S_1(x)
//!   p_t - (nu/T) u_x  = -p / T
//! and propagates at the finite speed a_nu = sqrt(nu / T).

use super::{EigenSystem, ExtSource, Model};
use crate::error::{Result, SolverError};

#[derive(Debug, Clone, Copy)]
pub struct DiffusionParams {
    pub nu: f64,
    /// Relaxation time T.
    pub relax: f64,
}

impl DiffusionParams {
    pub fn new(nu: f64, relax: f64) -> DiffusionParams {
        DiffusionParams { nu, relax }
    }

    /// Characteristic speed a_nu = sqrt(nu / T).
    pub fn a_nu(&self) -> f64 {
        (self.nu / self.relax).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct DiffusionModel {
    pub params: DiffusionParams,
    pub ext: ExtSource,
    source_diag: [f64; 2],
}

pub fn diffusion_model(params: DiffusionParams) -> DiffusionModel {
    DiffusionModel {
        params,
        ext: ExtSource::None,
        source_diag: [0.0, -1.0 / params.relax],
    }
}

impl DiffusionModel {
    pub fn with_source(mut self, ext: ExtSource) -> DiffusionModel {
        self.ext = ext;
        self
    }
}

impl Model for DiffusionModel {
    fn n_vars(&self) -> usize {
        2
    }

    fn var_names(&self) -> &'static [&'static str] {
        &["u", "p"]
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        out[0] = -u[1];
        out[1] = -(self.params.nu / self.params.relax) * u[0];
    }

    fn wave_speed(&self, _u: &[f64]) -> f64 {
        self.params.a_nu()
    }

    fn eigen(&self, _u: &[f64]) -> Result<EigenSystem> {
        let a = self.params.a_nu();
        let mut eig = EigenSystem::empty(2);
        eig.values[0] = -a;
        eig.values[1] = a;
        eig.right[0][..2].copy_from_slice(&[1.0, a]);
        eig.right[1][..2].copy_from_slice(&[1.0, -a]);
        eig.left[0][..2].copy_from_slice(&[0.5, 0.5 / a]);
        eig.left[1][..2].copy_from_slice(&[0.5, -0.5 / a]);
        Ok(eig)
    }

    fn check_admissible(&self, u: &[f64], x: f64) -> Result<()> {
        if u[0].is_finite() && u[1].is_finite() {
            Ok(())
        } else {
            Err(SolverError::Inadmissible {
                what: format!("non-finite state ({}, {})", u[0], u[1]),
                x,
            })
        }
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
