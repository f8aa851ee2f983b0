//! Uniform 1D grid and the active-flux degree-of-freedom container
//! (cell averages plus shared face point values).

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Result, SolverError};
use crate::models::Model;

/// Maximum number of variables any supported system carries (viscous
/// Navier-Stokes has five). Fixed-capacity buffers in hot paths are sized
/// with this.
pub const MAX_VARS: usize = 5;

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

/// Uniform 1D mesh: `n_cells` cells of width `dx` spanning `[x_min, x_max]`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dx: f64,
    pub cell_centers: Vec<f64>,
    pub face_coords: Vec<f64>,
}

/// Build a uniform grid. Rejects degenerate intervals and zero cell counts.
pub fn build_grid(x_min: f64, x_max: f64, n_cells: usize) -> Result<Grid> {
    if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
        return Err(SolverError::InvalidGrid(format!(
            "need finite x_max > x_min, got [{x_min}, {x_max}]"
        )));
    }
    if n_cells == 0 {
        return Err(SolverError::InvalidGrid("n_cells must be positive".into()));
    }
    let dx = (x_max - x_min) / n_cells as f64;
    let face_coords: Vec<f64> = (0..=n_cells)
        .map(|j| {
            if j == n_cells {
                x_max
            } else {
                x_min + j as f64 * dx
            }
        })
        .collect();
    let cell_centers: Vec<f64> = (0..n_cells)
        .map(|i| 0.5 * (face_coords[i] + face_coords[i + 1]))
        .collect();
    Ok(Grid {
        x_min,
        x_max,
        n_cells,
        dx,
        cell_centers,
        face_coords,
    })
}

impl Grid {
    pub fn cell_center(&self, i: usize) -> f64 {
        self.cell_centers[i]
    }

    pub fn face_x(&self, j: usize) -> f64 {
        self.face_coords[j]
    }

    /// Index of the cell owning `x` under the half-open convention
    /// `[x_{i-1/2}, x_{i+1/2})`; may return -1 or `n_cells` (ghost cells).
    pub fn cell_of(&self, x: f64) -> i64 {
        ((x - self.x_min) / self.dx).floor() as i64
    }
}

// ---------------------------------------------------------------------------
// FieldState
// ---------------------------------------------------------------------------

/// Solution degrees of freedom at one time level: `n_cells × n_vars` cell
/// averages and `(n_cells+1) × n_vars` face point values, stored row-major
/// by cell/face. Face values are single-valued per face (C0 continuity is
/// structural).
#[derive(Debug, Clone)]
pub struct FieldState {
    pub n_vars: usize,
    pub n_cells: usize,
    pub time: f64,
    pub cell_avgs: Vec<f64>,
    pub face_vals: Vec<f64>,
    /// Accumulated space-time source integral per variable since t = 0
    /// (units of sum_i dx * avg). Combined linearly when states are linearly
    /// combined; used by conservation accounting.
    pub source_budget: Vec<f64>,
}

impl FieldState {
    pub fn zeros(n_vars: usize, n_cells: usize) -> Self {
        FieldState {
            n_vars,
            n_cells,
            time: 0.0,
            cell_avgs: vec![0.0; n_vars * n_cells],
            face_vals: vec![0.0; n_vars * (n_cells + 1)],
            source_budget: vec![0.0; n_vars],
        }
    }

    pub fn avg(&self, i: usize) -> &[f64] {
        &self.cell_avgs[i * self.n_vars..(i + 1) * self.n_vars]
    }

    pub fn avg_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.cell_avgs[i * self.n_vars..(i + 1) * self.n_vars]
    }

    pub fn face(&self, j: usize) -> &[f64] {
        &self.face_vals[j * self.n_vars..(j + 1) * self.n_vars]
    }

    pub fn face_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.face_vals[j * self.n_vars..(j + 1) * self.n_vars]
    }

    pub fn all_finite(&self) -> bool {
        self.cell_avgs.iter().all(|v| v.is_finite()) && self.face_vals.iter().all(|v| v.is_finite())
    }

    /// Domain integral of each variable's cell averages: sum_i avg_i * dx.
    pub fn conserved_totals(&self, grid: &Grid) -> Vec<f64> {
        let mut tot = vec![0.0; self.n_vars];
        for i in 0..self.n_cells {
            for (c, t) in tot.iter_mut().enumerate() {
                *t += self.avg(i)[c] * grid.dx;
            }
        }
        tot
    }

    /// self := self + w * other, over averages, faces, and source budget.
    /// Time is not touched; callers manage it.
    pub fn axpy(&mut self, w: f64, other: &FieldState) {
        for (a, b) in self.cell_avgs.iter_mut().zip(&other.cell_avgs) {
            *a += w * b;
        }
        for (a, b) in self.face_vals.iter_mut().zip(&other.face_vals) {
            *a += w * b;
        }
        for (a, b) in self.source_budget.iter_mut().zip(&other.source_budget) {
            *a += w * b;
        }
    }

    pub fn scale(&mut self, w: f64) {
        self.cell_avgs.iter_mut().for_each(|v| *v *= w);
        self.face_vals.iter_mut().for_each(|v| *v *= w);
        self.source_budget.iter_mut().for_each(|v| *v *= w);
    }
}

// ---------------------------------------------------------------------------
// CFL timestep
// ---------------------------------------------------------------------------

/// Maximum wave speed over every degree of freedom (cell averages and face
/// values): face values can exceed averages near steep gradients.
pub fn max_wave_speed(state: &FieldState, model: &dyn Model) -> f64 {
    let mut a_max: f64 = 0.0;
    for i in 0..state.n_cells {
        a_max = a_max.max(model.wave_speed(state.avg(i)));
    }
    for j in 0..=state.n_cells {
        a_max = a_max.max(model.wave_speed(state.face(j)));
    }
    a_max
}

/// CFL timestep dt = courant * dx / A_max.
pub fn cfl_timestep(state: &FieldState, model: &dyn Model, courant: f64, grid: &Grid) -> Result<f64> {
    if !(courant > 0.0 && courant < 1.0) {
        return Err(SolverError::InvalidConfig(format!(
            "Courant number must lie in (0, 1), got {courant}"
        )));
    }
    if !state.all_finite() {
        return Err(SolverError::NonFinite("field state".into()));
    }
    let a_max = max_wave_speed(state, model);
    if a_max <= 0.0 {
        return Err(SolverError::NoWaveSpeed);
    }
    Ok(courant * grid.dx / a_max)
}

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

/// Write `cells.csv` (centers + averages) and `faces.csv` (face coordinates +
/// point values) into `dir`, 17 significant digits.
pub fn write_snapshot(dir: &Path, grid: &Grid, state: &FieldState, var_names: &[&str]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let header = {
        let mut h = String::from("x");
        for name in var_names {
            h.push(',');
            h.push_str(name);
        }
        h
    };
    let mut cells = std::io::BufWriter::new(std::fs::File::create(dir.join("cells.csv"))?);
    writeln!(cells, "{header}")?;
    for i in 0..state.n_cells {
        write!(cells, "{:.16e}", grid.cell_center(i))?;
        for v in state.avg(i) {
            write!(cells, ",{v:.16e}")?;
        }
        writeln!(cells)?;
    }
    let mut faces = std::io::BufWriter::new(std::fs::File::create(dir.join("faces.csv"))?);
    writeln!(faces, "{header}")?;
    for j in 0..=state.n_cells {
        write!(faces, "{:.16e}", grid.face_x(j))?;
        for v in state.face(j) {
            write!(faces, ",{v:.16e}")?;
        }
        writeln!(faces)?;
    }
    Ok(())
}

/// Read back a snapshot written by [`write_snapshot`]. Returns (xs, values)
/// with values row-major per line.
pub fn read_snapshot_file(path: &Path) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let file = std::fs::File::open(path)?;
    let mut xs = Vec::new();
    let mut rows = Vec::new();
    for (k, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if k == 0 {
            continue; // header
        }
        let mut it = line.split(',');
        let x: f64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| SolverError::InvalidConfig(format!("bad snapshot line: {line}")))?;
        let vals: std::result::Result<Vec<f64>, _> = it.map(|s| s.parse::<f64>()).collect();
        xs.push(x);
        rows.push(vals.map_err(|e| SolverError::InvalidConfig(format!("bad snapshot value: {e}")))?);
    }
    Ok((xs, rows))
}

// ---------------------------------------------------------------------------
