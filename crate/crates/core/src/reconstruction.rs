//! Per-cell parabolic C0 reconstruction, global piecewise evaluation with a
//! one-ghost-cell margin, and the space-time cell integral used by source
//! terms.

use crate::boundary::GhostDofs;
use crate::error::{Result, SolverError};
use crate::mesh::{FieldState, Grid, MAX_VARS};

// ---------------------------------------------------------------------------
// CellParabola
// ---------------------------------------------------------------------------

/// Quadratic reconstruction on one cell in the scaled coordinate
/// xi = (x - x_i)/dx, xi in [-1/2, 1/2]:
/// u(xi) = coeff_quad * xi^2 + coeff_lin * xi + coeff_const.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellParabola {
    pub coeff_quad: f64,
    pub coeff_lin: f64,
    pub coeff_const: f64,
}

/// Build the parabola matching a cell average and the two face point values.
pub fn reconstruct_cell(avg: f64, left: f64, right: f64) -> CellParabola {
    CellParabola {
        coeff_quad: -3.0 * (2.0 * avg - left - right),
        coeff_lin: right - left,
        coeff_const: (6.0 * avg - left - right) / 4.0,
    }
}

impl CellParabola {
    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        (self.coeff_quad * xi + self.coeff_lin) * xi + self.coeff_const
    }

    /// Exact average over the cell (xi from -1/2 to 1/2).
    pub fn average(&self) -> f64 {
        self.coeff_quad / 12.0 + self.coeff_const
    }

    /// Spatial derivative du/dx at xi, given the cell width.
    pub fn deriv(&self, xi: f64, dx: f64) -> f64 {
        (2.0 * self.coeff_quad * xi + self.coeff_lin) / dx
    }
}

// ---------------------------------------------------------------------------
// Global reconstruction
// ---------------------------------------------------------------------------

/// Frozen piecewise-parabolic reconstruction of a full state, including one
/// ghost cell per side. Coefficients are stored per cell and variable; cell
/// index -1 and n map to the ghost parabolas.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub n_vars: usize,
    pub n_cells: usize,
    pub x_min: f64,
    pub dx: f64,
    /// (n_cells + 2) * n_vars parabolas; slot c = 0 is the left ghost.
    coefs: Vec<CellParabola>,
    /// Absolute tolerance for feet marginally outside the ghost margin.
    slack: f64,
}

impl Reconstruction {
    /// Build from a state and ghost DOFs supplied by the boundary module.
    pub fn build(grid: &Grid, state: &FieldState, ghosts: &GhostDofs) -> Reconstruction {
        let m = state.n_vars;
        let n = state.n_cells;
        let mut coefs = Vec::with_capacity((n + 2) * m);
        // left ghost cell: faces (outer_left, face 0)
        for c in 0..m {
            coefs.push(reconstruct_cell(
                ghosts.left_avg[c],
                ghosts.left_outer_face[c],
                state.face(0)[c],
            ));
        }
        for i in 0..n {
            for c in 0..m {
                coefs.push(reconstruct_cell(
                    state.avg(i)[c],
                    state.face(i)[c],
                    state.face(i + 1)[c],
                ));
            }
        }
        // right ghost cell: faces (face n, outer_right)
        for c in 0..m {
            coefs.push(reconstruct_cell(
                ghosts.right_avg[c],
                state.face(n)[c],
                ghosts.right_outer_face[c],
            ));
        }
        Reconstruction {
            n_vars: m,
            n_cells: n,
            x_min: grid.x_min,
            dx: grid.dx,
            coefs,
            slack: grid.dx * 1e-9,
        }
    }

    /// Cell lookup under the half-open convention; accepts the one-ghost
    /// margin with a small slack and clamps the boundary faces of the margin.
    #[inline]
    fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let n = self.n_cells as i64;
        let rel = (x - self.x_min) / self.dx;
        let mut cell = rel.floor() as i64;
        if cell < -1 || cell > n {
            // allow round-off slack at the extreme ghost edges
            if x >= self.x_min - self.dx - self.slack && x < self.x_min {
                cell = -1;
            } else if x <= self.x_min + (self.n_cells as f64) * self.dx + self.dx + self.slack
                && x >= self.x_min
            {
                cell = n;
            } else {
                return Err(SolverError::FootOutsideStencil {
                    foot: x,
                    lo: self.x_min - self.dx,
                    hi: self.x_min + (self.n_cells as f64 + 1.0) * self.dx,
                });
            }
        }
        let xi = rel - cell as f64 - 0.5;
        Ok(((cell + 1) as usize, xi))
    }

    /// Evaluate all variables at `x` into `out[..n_vars]`.
    #[inline]
    pub fn eval(&self, x: f64, out: &mut [f64]) -> Result<()> {
        let (slot, xi) = self.locate(x)?;
        let base = slot * self.n_vars;
        for c in 0..self.n_vars {
            out[c] = self.coefs[base + c].eval(xi);
        }
        Ok(())
    }

    /// Evaluate a single variable at `x`.
    #[inline]
    pub fn eval_comp(&self, x: f64, c: usize) -> Result<f64> {
        let (slot, xi) = self.locate(x)?;
        Ok(self.coefs[slot * self.n_vars + c].eval(xi))
    }

    /// Evaluate all variables into a fixed-capacity buffer (hot path).
    #[inline]
    pub fn eval_buf(&self, x: f64) -> Result<[f64; MAX_VARS]> {
        let mut out = [0.0; MAX_VARS];
        let (slot, xi) = self.locate(x)?;
        let base = slot * self.n_vars;
        for c in 0..self.n_vars {
            out[c] = self.coefs[base + c].eval(xi);
        }
        Ok(out)
    }

    /// Spatial derivative of one variable at `x`.
    pub fn deriv_comp(&self, x: f64, c: usize) -> Result<f64> {
        let (slot, xi) = self.locate(x)?;
        Ok(self.coefs[slot * self.n_vars + c].deriv(xi, self.dx))
    }

    /// The parabola of interior cell `i` for variable `c`.
    pub fn cell_parabola(&self, i: usize, c: usize) -> &CellParabola {
        &self.coefs[(i + 1) * self.n_vars + c]
    }
}

/// Spec-named convenience: evaluate a frozen reconstruction at `x`
/// (the reconstruction plays the role of the initial condition at t^n).
pub fn eval_reconstruction(recon: &Reconstruction, x: f64, out: &mut [f64]) -> Result<()> {
    recon.eval(x, out)
}

// ---------------------------------------------------------------------------
// Space-time cell integral
// ---------------------------------------------------------------------------

/// Space-time integral of the active-flux representation over one cell and
/// one step:
///
/// dx*dt*( avg_n + sum_sides [ 1/12 * u_new + 1/3 * u_half - 5/12 * u_old ] )
///
/// where each side contributes its face values at t^n, t^{n+1/2}, t^{n+1}.
#[allow(clippy::too_many_arguments)]
pub fn spacetime_cell_integral(
    avg_n: f64,
    left_n: f64,
    left_half: f64,
    left_new: f64,
    right_n: f64,
    right_half: f64,
    right_new: f64,
    dx: f64,
    dt: f64,
) -> f64 {
    let side = |old: f64, half: f64, new: f64| new / 12.0 + half / 3.0 - 5.0 * old / 12.0;
    dx * dt * (avg_n + side(left_n, left_half, left_new) + side(right_n, right_half, right_new))
}

// ---------------------------------------------------------------------------
