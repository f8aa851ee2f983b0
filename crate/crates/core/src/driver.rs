//! Benchmark problem drivers: initial data with exact cell averages, the
//! explicit active-flux step, dual-time physical marching, operator-split
//! gas dynamics, and grid-refinement sweeps for the five test problems.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::str::FromStr;

use crate::boundary::{euler_characteristic_bc, fill_ghosts, ns_viscous_boundary, GhostSpec};
use crate::error::{Result, SolverError};
use crate::evolution::{evolve_scalar, evolve_system_with_source, ModelSource};
use crate::mesh::{build_grid, cfl_timestep, write_snapshot, FieldState, Grid, MAX_VARS};
use crate::models::{
    burgers_model, diffusion_model, prim_to_cons, DiffusionParams, ExtSource,
    GasParams, Model, NsInviscidModel, NsViscousModel,
};
use crate::reconstruction::Reconstruction;
use crate::splitting::{third_order_step, SplitWeights};
use crate::update::{
    bdf_coeffs, conservative_update, dual_time_march, external_source_integral,
    linear_source_integral, simpson_flux, DualBc, DualTimeParams,
};
use crate::verification::{
    cell_average_piecewise, coarsen_averages, convergence_order, diffusion_bc,
    diffusion_reference, exact_sod, l2_error, manufactured_cell_avg, manufactured_fields,
    sod_wave_positions, ConvergenceReport, FdSolution, DIFFUSION_NU, DIFFUSION_SOURCE_AMP,
    DIFFUSION_SOURCE_RATE, DIFFUSION_X_MAX, DIFFUSION_X_MIN, SOD_LEFT, SOD_RIGHT,
};

// ---------------------------------------------------------------------------
// Problems and configuration
// ---------------------------------------------------------------------------

/// The built-in benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Burgers,
    Sod,
    Diffusion,
    NsManufactured,
    ShuOsher,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::Burgers,
        Problem::Sod,
        Problem::Diffusion,
        Problem::NsManufactured,
        Problem::ShuOsher,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Burgers => "burgers",
            Problem::Sod => "sod",
            Problem::Diffusion => "diffusion",
            Problem::NsManufactured => "ns_manufactured",
            Problem::ShuOsher => "shu_osher",
        }
    }

    /// Domain (x_min, x_max) of the benchmark setup.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Problem::Burgers => (0.0, 1.0),
            Problem::Sod => (-1.0, 1.0),
            Problem::Diffusion => (DIFFUSION_X_MIN, DIFFUSION_X_MAX),
            Problem::NsManufactured => (-PI, PI),
            Problem::ShuOsher => (-5.0, 5.0),
        }
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Problem> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "burgers" => Ok(Problem::Burgers),
            "sod" => Ok(Problem::Sod),
            "diffusion" => Ok(Problem::Diffusion),
            "ns_manufactured" => Ok(Problem::NsManufactured),
            "shu_osher" => Ok(Problem::ShuOsher),
            other => Err(SolverError::InvalidConfig(format!(
                "unknown problem '{other}' (expected one of: burgers, sod, diffusion, \
                 ns_manufactured, shu_osher)"
            ))),
        }
    }
}

/// One benchmark run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: Problem,
    pub n_cells: usize,
    /// Courant number of the explicit steps.
    pub courant: f64,
    pub t_end: f64,
    /// Backward-difference order of the dual-time physical march (bootstrapped
    /// from order one over the first steps).
    pub bdf_order: usize,
    /// Pseudo-time Courant number inside dual-time iterations.
    pub dual_courant: f64,
    /// Dual-time convergence tolerance on the pseudo residual.
    pub dual_tol: f64,
    pub dual_max_iters: usize,
    /// Fixed physical step of the dual-time march (diffusion benchmark);
    /// must divide t_end.
    pub physical_dt: f64,
    /// Write solution snapshots every this many steps (0: final state only).
    pub snapshot_every: usize,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Benchmark defaults for each problem.
    pub fn preset(problem: Problem) -> RunConfig {
        let base = RunConfig {
            problem,
            n_cells: 0,
            courant: 0.7,
            t_end: 0.0,
            bdf_order: 3,
            dual_courant: 0.9,
            dual_tol: 1e-10,
            dual_max_iters: 20_000,
            physical_dt: 0.1,
            snapshot_every: 0,
            out_dir: None,
        };
        match problem {
            Problem::Burgers => RunConfig { n_cells: 21, t_end: 2.0, ..base },
            Problem::Sod => RunConfig { n_cells: 80, t_end: 0.4, ..base },
            Problem::Diffusion => RunConfig { n_cells: 25, t_end: 20.0, ..base },
            Problem::NsManufactured => RunConfig { n_cells: 40, t_end: 0.8, ..base },
            Problem::ShuOsher => RunConfig { n_cells: 100, courant: 0.5, t_end: 1.8, ..base },
        }
    }

    fn dual_params(&self) -> DualTimeParams {
        DualTimeParams {
            courant: self.dual_courant,
            tol: self.dual_tol,
            max_iters: self.dual_max_iters,
        }
    }
}

/// Outcome of a benchmark run.
#[derive(Debug)]
pub struct RunReport {
    pub grid: Grid,
    pub state: FieldState,
    pub steps: usize,
    /// Conserved totals of the initial data.
    pub initial_totals: Vec<f64>,
    /// Largest final pseudo residual over all dual-time marches (0 when the
    /// run uses none).
    pub max_dual_residual: f64,
    pub total_dual_iters: usize,
}

// ---------------------------------------------------------------------------
// Benchmark constants and initial data
// ---------------------------------------------------------------------------

/// Shock-tube primitive states (rho, u, p) of the strong-shock/entropy-wave
/// interaction problem; the jump sits at x = -4.
pub const SHU_OSHER_LEFT: [f64; 3] = [3.857143, 2.629369, 10.33333];
pub const SHU_OSHER_JUMP: f64 = -4.0;

/// Density of the pre-shock entropy wave.
pub fn shu_osher_density(x: f64) -> f64 {
    1.0 + 0.2 * (PI * x).sin()
}

/// Relaxation time of the diffusion system at the benchmark length scale
/// L = 1/(2 pi): T = L^2 / nu.
pub fn diffusion_relax_time() -> f64 {
    (1.0 / TAU) * (1.0 / TAU) / DIFFUSION_NU
}

fn diffusion_benchmark_model() -> crate::models::DiffusionModel {
    diffusion_model(DiffusionParams::new(DIFFUSION_NU, diffusion_relax_time())).with_source(
        ExtSource::Exp {
            amp: DIFFUSION_SOURCE_AMP,
            rate: DIFFUSION_SOURCE_RATE,
        },
    )
}

/// Initial state of a benchmark problem on the given grid: exact cell
/// averages (antiderivatives, split at jumps) and pointwise face values.
pub fn init_state(problem: Problem, grid: &Grid, gas: &GasParams) -> Result<FieldState> {
    match problem {
        Problem::Burgers => {
            let mut state = FieldState::zeros(1, grid.n_cells);
            for i in 0..grid.n_cells {
                let (a, b) = (grid.face_x(i), grid.face_x(i + 1));
                // average of sin(2 pi x)/(2 pi) from the antiderivative
                state.avg_mut(i)[0] =
                    ((TAU * a).cos() - (TAU * b).cos()) / (TAU * TAU) / grid.dx;
            }
            for j in 0..=grid.n_cells {
                state.face_mut(j)[0] = (TAU * grid.face_x(j)).sin() / TAU;
            }
            Ok(state)
        }
        Problem::Sod => {
            // Five-component viscous state; the stress and heat flux start at
            // their equilibrium value (zero) of the two constant sides.
            let gl = prim_to_cons(&SOD_LEFT, gas)?;
            let gr = prim_to_cons(&SOD_RIGHT, gas)?;
            let ul = [gl[0], gl[1], gl[2], 0.0, 0.0];
            let ur = [gr[0], gr[1], gr[2], 0.0, 0.0];
            let mut state = FieldState::zeros(5, grid.n_cells);
            for i in 0..grid.n_cells {
                let (a, b) = (grid.face_x(i), grid.face_x(i + 1));
                let wl = ((0.0f64.min(b).max(a)) - a) / grid.dx;
                for c in 0..5 {
                    state.avg_mut(i)[c] = wl * ul[c] + (1.0 - wl) * ur[c];
                }
            }
            for j in 0..=grid.n_cells {
                let x = grid.face_x(j);
                let f = state.face_mut(j);
                for c in 0..5 {
                    // At the jump face take the low-density side: averaging
                    // would hand the downstream cell a face value far above
                    // its mean and its parabola would dip negative inside.
                    f[c] = if x.abs() < 1e-12 {
                        if ul[0] <= ur[0] {
                            ul[c]
                        } else {
                            ur[c]
                        }
                    } else if x < 0.0 {
                        ul[c]
                    } else {
                        ur[c]
                    };
                }
            }
            Ok(state)
        }
        Problem::Diffusion => {
            let nu = DIFFUSION_NU;
            let mut state = FieldState::zeros(2, grid.n_cells);
            for i in 0..grid.n_cells {
                let (a, b) = (grid.face_x(i), grid.face_x(i + 1));
                // u = cos x, p at the gradient equilibrium p = nu u_x
                state.avg_mut(i)[0] = (b.sin() - a.sin()) / grid.dx;
                state.avg_mut(i)[1] = nu * (b.cos() - a.cos()) / grid.dx;
            }
            for j in 0..=grid.n_cells {
                let x = grid.face_x(j);
                let f = state.face_mut(j);
                f[0] = x.cos();
                f[1] = -nu * x.sin();
            }
            Ok(state)
        }
        Problem::NsManufactured => {
            let mut state = FieldState::zeros(5, grid.n_cells);
            for i in 0..grid.n_cells {
                let avg = manufactured_cell_avg(grid.face_x(i), grid.face_x(i + 1), 0.0, gas);
                state.avg_mut(i).copy_from_slice(&avg);
            }
            for j in 0..=grid.n_cells {
                let vals = manufactured_fields(grid.face_x(j), 0.0, gas);
                state.face_mut(j).copy_from_slice(&vals);
            }
            Ok(state)
        }
        Problem::ShuOsher => init_shu_osher(grid, gas),
    }
}

/// Pre-shock pointwise state of the shock/entropy-wave problem, with the
/// relaxation variables at their gradient equilibria.
fn shu_osher_right_state(x: f64, gas: &GasParams) -> [f64; 5] {
    let rho = shu_osher_density(x);
    let drho = 0.2 * PI * (PI * x).cos();
    // u = 0, p = 1; tau = mu_v u_x = 0, q = -mu_h/(gamma-1) d(p/rho)/dx
    let q = gas.mu_h() / (gas.gamma - 1.0) * drho / (rho * rho);
    [rho, 0.0, 1.0 / (gas.gamma - 1.0), 0.0, q]
}

fn init_shu_osher(grid: &Grid, gas: &GasParams) -> Result<FieldState> {
    let base = prim_to_cons(&SHU_OSHER_LEFT, gas)?;
    let left = [base[0], base[1], base[2], 0.0, 0.0];
    let e_right = 1.0 / (gas.gamma - 1.0);
    let cq = gas.mu_h() / (gas.gamma - 1.0); // q = cq * rho'/rho^2, p = 1
    // antiderivatives over the smooth pre-shock region
    let int_rho = |x: f64| x - 0.2 / PI * (PI * x).cos();
    let int_q = |x: f64| -cq / shu_osher_density(x);

    let mut state = FieldState::zeros(5, grid.n_cells);
    for i in 0..grid.n_cells {
        let (a, b) = (grid.face_x(i), grid.face_x(i + 1));
        let split = SHU_OSHER_JUMP.clamp(a, b);
        let avg = state.avg_mut(i);
        for c in 0..5 {
            avg[c] = (split - a) * left[c];
        }
        avg[0] += int_rho(b) - int_rho(split);
        avg[2] += (b - split) * e_right;
        avg[4] += int_q(b) - int_q(split);
        for c in 0..5 {
            avg[c] /= grid.dx;
        }
    }
    for j in 0..=grid.n_cells {
        let x = grid.face_x(j);
        let right = shu_osher_right_state(x, gas);
        let f = state.face_mut(j);
        if (x - SHU_OSHER_JUMP).abs() < 1e-12 {
            // Low-density side of the jump, for the same admissibility
            // reason as in the shock tube above.
            let pick = if left[0] <= right[0] { &left } else { &right };
            f.copy_from_slice(pick);
        } else if x < SHU_OSHER_JUMP {
            f.copy_from_slice(&left);
        } else {
            f.copy_from_slice(&right);
        }
    }
    Ok(state)
}

// ---------------------------------------------------------------------------
// Explicit active-flux step
// ---------------------------------------------------------------------------

/// Boundary handling for the explicit step.
#[derive(Debug, Clone)]
pub enum ExplicitBc {
    Periodic,
    /// Transmissive reconstruction ghosts; boundary faces evolved by the
    /// gas-dynamics characteristic operator against far-field ghost states.
    GasCharacteristic { left: Vec<f64>, right: Vec<f64> },
    /// Same with the relaxation-system boundary operator (zero-speed density
    /// field pinned to the ghost).
    ViscousCharacteristic { left: Vec<f64>, right: Vec<f64> },
}

/// One explicit active-flux step of length `dt`: continuous parabolic
/// reconstruction, characteristic face evolution at dt/2 and dt, Simpson
/// time-integrated fluxes, space-time source integrals, and the conservative
/// average update. Advances `state.time` by dt.
pub fn explicit_af_step(
    model: &dyn Model,
    grid: &Grid,
    state: &mut FieldState,
    bc: &ExplicitBc,
    dt: f64,
) -> Result<()> {
    let m = model.n_vars();
    let n = grid.n_cells;
    let nf = n + 1;
    let t_n = state.time;
    let periodic = matches!(bc, ExplicitBc::Periodic);
    let (lspec, rspec) = if periodic {
        (GhostSpec::Periodic, GhostSpec::Periodic)
    } else {
        (GhostSpec::Transmissive, GhostSpec::Transmissive)
    };
    let ghosts = fill_ghosts(state, &lspec, &rspec);
    let recon = Reconstruction::build(grid, state, &ghosts);
    let src = ModelSource { model };

    let mut full = vec![0.0; nf * m];
    let mut half = vec![0.0; nf * m];
    let interior = if periodic { 0..n } else { 1..n };
    for j in interior {
        let x_f = grid.face_x(j);
        if m == 1 {
            // scalar transport: the value rides its own characteristic
            full[j] = evolve_scalar(&recon, &|u| u, x_f, dt)?;
            half[j] = evolve_scalar(&recon, &|u| u, x_f, 0.5 * dt)?;
        } else {
            let uf = evolve_system_with_source(model, &recon, &src, x_f, t_n, dt)?;
            full[j * m..(j + 1) * m].copy_from_slice(&uf[..m]);
            let uh = evolve_system_with_source(model, &recon, &src, x_f, t_n, 0.5 * dt)?;
            half[j * m..(j + 1) * m].copy_from_slice(&uh[..m]);
        }
    }
    match bc {
        ExplicitBc::Periodic => {
            for c in 0..m {
                full[n * m + c] = full[c];
                half[n * m + c] = half[c];
            }
        }
        ExplicitBc::GasCharacteristic { left, right } => {
            for (j, ghost, is_left) in [(0usize, left, true), (n, right, false)] {
                let x_f = grid.face_x(j);
                let uf = euler_characteristic_bc(model, &recon, ghost, x_f, is_left, dt)?;
                full[j * m..(j + 1) * m].copy_from_slice(&uf);
                let uh = euler_characteristic_bc(model, &recon, ghost, x_f, is_left, 0.5 * dt)?;
                half[j * m..(j + 1) * m].copy_from_slice(&uh);
            }
        }
        ExplicitBc::ViscousCharacteristic { left, right } => {
            for (j, ghost, is_left) in [(0usize, left, true), (n, right, false)] {
                let x_f = grid.face_x(j);
                let uf = ns_viscous_boundary(model, &recon, &src, ghost, x_f, is_left, t_n, dt)?;
                full[j * m..(j + 1) * m].copy_from_slice(&uf[..m]);
                let uh =
                    ns_viscous_boundary(model, &recon, &src, ghost, x_f, is_left, t_n, 0.5 * dt)?;
                half[j * m..(j + 1) * m].copy_from_slice(&uh[..m]);
            }
        }
    }

    // Simpson fluxes from the (old, half, new) face triplets
    let mut flux_int = vec![0.0; nf * m];
    let mut flux_j = [0.0; MAX_VARS];
    for j in 0..nf {
        simpson_flux(
            model,
            state.face(j),
            &half[j * m..(j + 1) * m],
            &full[j * m..(j + 1) * m],
            dt,
            &mut flux_j,
        );
        flux_int[j * m..(j + 1) * m].copy_from_slice(&flux_j[..m]);
    }
    if periodic {
        // bitwise telescoping of the wrapped face
        for c in 0..m {
            flux_int[n * m + c] = flux_int[c];
        }
    }

    let mut source_int = vec![0.0; n * m];
    if model.has_source() {
        let mut lin = [0.0; MAX_VARS];
        let mut ext = [0.0; MAX_VARS];
        let times = [t_n, t_n + 0.5 * dt, t_n + dt];
        for i in 0..n {
            let fl = [
                state.face(i),
                &half[i * m..(i + 1) * m],
                &full[i * m..(i + 1) * m],
            ];
            let fr = [
                state.face(i + 1),
                &half[(i + 1) * m..(i + 2) * m],
                &full[(i + 1) * m..(i + 2) * m],
            ];
            linear_source_integral(model, state.avg(i), fl, fr, grid.dx, dt, &mut lin);
            external_source_integral(
                model,
                grid.face_x(i),
                grid.face_x(i + 1),
                times,
                dt,
                &mut ext,
            );
            for c in 0..m {
                source_int[i * m + c] = lin[c] + ext[c];
            }
        }
    }

    conservative_update(state, &flux_int, &source_int, grid.dx);
    state.face_vals.copy_from_slice(&full);
    state.time = t_n + dt;
    if !state.all_finite() {
        return Err(SolverError::NonFinite(format!(
            "explicit step to t = {:.6}",
            state.time
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Problem drivers
// ---------------------------------------------------------------------------

struct SnapshotSink<'a> {
    config: &'a RunConfig,
    names: Vec<&'static str>,
}

impl<'a> SnapshotSink<'a> {
    fn new(config: &'a RunConfig, model: &dyn Model) -> Result<SnapshotSink<'a>> {
        let sink = SnapshotSink {
            config,
            names: model.var_names().to_vec(),
        };
        Ok(sink)
    }

    fn record(&self, grid: &Grid, state: &FieldState, step: usize, last: bool) -> Result<()> {
        let Some(dir) = &self.config.out_dir else {
            return Ok(());
        };
        let every = self.config.snapshot_every;
        let due = step == 0 || (every > 0 && step % every == 0);
        if !(due || last) {
            return Ok(());
        }
        let sub = if last {
            "final".to_string()
        } else {
            format!("step_{step:06}")
        };
        write_snapshot(&dir.join(sub), grid, state, &self.names)
    }
}

/// Run a benchmark problem to completion.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    if config.n_cells == 0 || !(config.t_end > 0.0) {
        return Err(SolverError::InvalidConfig(
            "run needs a positive cell count and end time".into(),
        ));
    }
    match config.problem {
        Problem::Burgers => run_burgers(config),
        Problem::Sod => run_sod(config),
        Problem::Diffusion => run_diffusion(config),
        Problem::NsManufactured => run_ns_manufactured(config),
        Problem::ShuOsher => run_shu_osher(config),
    }
}

fn benchmark_grid(config: &RunConfig) -> Result<Grid> {
    let (x_min, x_max) = config.problem.domain();
    build_grid(x_min, x_max, config.n_cells)
}

/// March an explicit problem to t_end with CFL-limited steps.
fn march_explicit(
    model: &dyn Model,
    grid: &Grid,
    state: &mut FieldState,
    bc: &ExplicitBc,
    config: &RunConfig,
    sink: &SnapshotSink,
) -> Result<usize> {
    let mut steps = 0;
    sink.record(grid, state, 0, false)?;
    while state.time < config.t_end - 1e-12 * config.t_end {
        let dt = cfl_timestep(state, model, config.courant, grid)?
            .min(config.t_end - state.time);
        explicit_af_step(model, grid, state, bc, dt)
            .map_err(|e| e.with_context(format!("step {} at t = {:.6}", steps + 1, state.time)))?;
        steps += 1;
        sink.record(grid, state, steps, false)?;
    }
    sink.record(grid, state, steps, true)?;
    Ok(steps)
}

fn run_burgers(config: &RunConfig) -> Result<RunReport> {
    let model = burgers_model();
    let grid = benchmark_grid(config)?;
    let mut state = init_state(Problem::Burgers, &grid, &GasParams::default_air())?;
    let initial_totals = state.conserved_totals(&grid);
    let sink = SnapshotSink::new(config, &model)?;
    let steps = march_explicit(&model, &grid, &mut state, &ExplicitBc::Periodic, config, &sink)?;
    Ok(RunReport {
        grid,
        state,
        steps,
        initial_totals,
        max_dual_residual: 0.0,
        total_dual_iters: 0,
    })
}

fn run_sod(config: &RunConfig) -> Result<RunReport> {
    let gas = GasParams::default_air();
    let inviscid = NsInviscidModel::new(gas);
    let viscous = NsViscousModel::new(gas);
    let grid = benchmark_grid(config)?;
    let mut state = init_state(Problem::Sod, &grid, &gas)?;
    let initial_totals = state.conserved_totals(&grid);

    let gl = prim_to_cons(&SOD_LEFT, &gas)?;
    let gr = prim_to_cons(&SOD_RIGHT, &gas)?;
    let ghost_left = vec![gl[0], gl[1], gl[2], 0.0, 0.0];
    let ghost_right = vec![gr[0], gr[1], gr[2], 0.0, 0.0];
    let inviscid_bc = ExplicitBc::GasCharacteristic {
        left: ghost_left.clone(),
        right: ghost_right.clone(),
    };
    let viscous_bc = ExplicitBc::ViscousCharacteristic {
        left: ghost_left,
        right: ghost_right,
    };
    let sink = SnapshotSink::new(config, &viscous)?;

    let mut steps = 0;
    sink.record(&grid, &state, 0, false)?;
    while state.time < config.t_end - 1e-12 * config.t_end {
        let dt = cfl_timestep(&state, &inviscid, config.courant, &grid)?
            .min(config.t_end - state.time);
        let f2 = |s: &FieldState, h: f64| -> Result<FieldState> {
            let mut out = s.clone();
            if h > 0.0 {
                explicit_af_step(&viscous, &grid, &mut out, &viscous_bc, h)?;
            }
            Ok(out)
        };
        state = split_gas_step(&inviscid, &grid, &state, &inviscid_bc, &f2, dt)
            .map_err(|e| e.with_context(format!("step {} at t = {:.6}", steps + 1, state.time)))?;
        steps += 1;
        sink.record(&grid, &state, steps, false)?;
    }
    sink.record(&grid, &state, steps, true)?;
    Ok(RunReport {
        grid,
        state,
        steps,
        initial_totals,
        max_dual_residual: 0.0,
        total_dual_iters: 0,
    })
}

fn run_diffusion(config: &RunConfig) -> Result<RunReport> {
    let model = diffusion_benchmark_model();
    let grid = benchmark_grid(config)?;
    let gas = GasParams::default_air();
    let mut state = init_state(Problem::Diffusion, &grid, &gas)?;
    let initial_totals = state.conserved_totals(&grid);
    let sink = SnapshotSink::new(config, &model)?;

    let dt = config.physical_dt;
    let n_steps = (config.t_end / dt).round() as usize;
    if n_steps == 0 || (n_steps as f64 * dt - config.t_end).abs() > 1e-9 * config.t_end {
        return Err(SolverError::InvalidConfig(format!(
            "physical step {dt} must divide t_end = {}",
            config.t_end
        )));
    }
    let (bcl, bcr) = diffusion_bc();
    let bc = DualBc::DiffusionDirichlet { left: bcl, right: bcr };
    let mask = [true, false];
    let params = config.dual_params();

    let mut history: VecDeque<FieldState> = VecDeque::new();
    let mut residual_rows: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_residual = 0.0f64;
    let mut total_iters = 0;
    sink.record(&grid, &state, 0, false)?;
    for step in 1..=n_steps {
        // bootstrap: first step backward Euler, then second order, then third
        let order = config.bdf_order.min(step);
        let bdf = bdf_coeffs(order)?;
        history.push_front(state.clone());
        history.truncate(3);
        let hist: Vec<&FieldState> = history.iter().take(order).collect();
        let t_target = step as f64 * dt;
        let mut log = Vec::new();
        let outcome = dual_time_march(
            &model,
            &grid,
            &mut state,
            &hist,
            bdf,
            &mask,
            dt,
            t_target,
            &bc,
            &params,
            Some(&mut log),
        )
        .map_err(|e| e.with_context(format!("physical step {step} to t = {t_target:.3}")))?;
        for (it, r) in log.iter().enumerate() {
            residual_rows.push((step, it + 1, *r));
        }
        max_residual = max_residual.max(outcome.final_residual);
        total_iters += outcome.iters;
        sink.record(&grid, &state, step, false)?;
    }
    sink.record(&grid, &state, n_steps, true)?;
    if let Some(dir) = &config.out_dir {
        write_residual_log(dir, &residual_rows)?;
    }
    Ok(RunReport {
        grid,
        state,
        steps: n_steps,
        initial_totals,
        max_dual_residual: max_residual,
        total_dual_iters: total_iters,
    })
}

fn write_residual_log(dir: &PathBuf, rows: &[(usize, usize, f64)]) -> Result<()> {
    use std::io::Write;
    std::fs::create_dir_all(dir)?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(dir.join("dual_residuals.csv"))?);
    writeln!(f, "step,iter,residual")?;
    for (step, iter, r) in rows {
        writeln!(f, "{step},{iter},{r:.16e}")?;
    }
    Ok(())
}

const NS_MASK: [bool; 5] = [true, true, true, false, false];

/// Gas-dynamics step by the third-order four-chain splitting: sub-flow one is
/// the explicit inviscid step, sub-flow two the viscous/relaxation system.
/// The viscous sub-flow owns the physical clock; the inviscid sub-flow leaves
/// it untouched so every chain ends at the same time.
#[allow(clippy::too_many_arguments)]
fn split_gas_step(
    inviscid: &NsInviscidModel,
    grid: &Grid,
    state: &FieldState,
    inviscid_bc: &ExplicitBc,
    viscous_flow: &dyn Fn(&FieldState, f64) -> Result<FieldState>,
    dt: f64,
) -> Result<FieldState> {
    let f1 = |s: &FieldState, h: f64| -> Result<FieldState> {
        let mut out = s.clone();
        if h > 0.0 {
            explicit_af_step(inviscid, grid, &mut out, inviscid_bc, h)?;
        }
        out.time = s.time;
        Ok(out)
    };
    let mut next = third_order_step(&f1, viscous_flow, state, dt, SplitWeights::default())?;
    next.time = state.time + dt;
    Ok(next)
}

fn run_ns_manufactured(config: &RunConfig) -> Result<RunReport> {
    let gas = GasParams::default_air();
    let inviscid = NsInviscidModel::new(gas);
    let viscous = NsViscousModel::new(gas).with_source(ExtSource::Manufactured(gas));
    let grid = benchmark_grid(config)?;
    let mut state = init_state(Problem::NsManufactured, &grid, &gas)?;
    let initial_totals = state.conserved_totals(&grid);
    let sink = SnapshotSink::new(config, &viscous)?;
    let params = config.dual_params();

    let mut steps = 0;
    let mut max_residual = 0.0f64;
    let total_iters = std::cell::Cell::new(0usize);
    let residual_cell = std::cell::Cell::new(0.0f64);
    sink.record(&grid, &state, 0, false)?;
    while state.time < config.t_end - 1e-12 * config.t_end {
        let dt = cfl_timestep(&state, &inviscid, config.courant, &grid)?
            .min(config.t_end - state.time);
        let f2 = |s: &FieldState, h: f64| -> Result<FieldState> {
            if h == 0.0 {
                return Ok(s.clone());
            }
            let base = s.clone();
            let mut out = s.clone();
            let outcome = dual_time_march(
                &viscous,
                &grid,
                &mut out,
                &[&base],
                bdf_coeffs(1)?,
                &NS_MASK,
                h,
                s.time + h,
                &DualBc::Periodic,
                &params,
                None,
            )?;
            residual_cell.set(residual_cell.get().max(outcome.final_residual));
            total_iters.set(total_iters.get() + outcome.iters);
            Ok(out)
        };
        state = split_gas_step(&inviscid, &grid, &state, &ExplicitBc::Periodic, &f2, dt)
            .map_err(|e| e.with_context(format!("step {} at t = {:.6}", steps + 1, state.time)))?;
        steps += 1;
        max_residual = max_residual.max(residual_cell.get());
        sink.record(&grid, &state, steps, false)?;
    }
    sink.record(&grid, &state, steps, true)?;
    Ok(RunReport {
        grid,
        state,
        steps,
        initial_totals,
        max_dual_residual: max_residual,
        total_dual_iters: total_iters.take(),
    })
}

fn run_shu_osher(config: &RunConfig) -> Result<RunReport> {
    let gas = GasParams::default_air();
    let inviscid = NsInviscidModel::new(gas);
    let viscous = NsViscousModel::new(gas);
    let grid = benchmark_grid(config)?;
    let mut state = init_state(Problem::ShuOsher, &grid, &gas)?;
    let initial_totals = state.conserved_totals(&grid);
    let sink = SnapshotSink::new(config, &viscous)?;

    let base_left = prim_to_cons(&SHU_OSHER_LEFT, &gas)?;
    let ghost_left = vec![base_left[0], base_left[1], base_left[2], 0.0, 0.0];
    let ghost_right = shu_osher_right_state(grid.x_max, &gas).to_vec();
    let inviscid_bc = ExplicitBc::GasCharacteristic {
        left: ghost_left.clone(),
        right: ghost_right.clone(),
    };
    let viscous_bc = ExplicitBc::ViscousCharacteristic {
        left: ghost_left,
        right: ghost_right,
    };

    let mut steps = 0;
    sink.record(&grid, &state, 0, false)?;
    while state.time < config.t_end - 1e-12 * config.t_end {
        let dt = cfl_timestep(&state, &inviscid, config.courant, &grid)?
            .min(config.t_end - state.time);
        // the viscous waves are far slower than the gas waves, so the
        // inviscid CFL step is stable for the explicit viscous sub-flow too
        let f2 = |s: &FieldState, h: f64| -> Result<FieldState> {
            let mut out = s.clone();
            if h > 0.0 {
                explicit_af_step(&viscous, &grid, &mut out, &viscous_bc, h)?;
            }
            Ok(out)
        };
        state = split_gas_step(&inviscid, &grid, &state, &inviscid_bc, &f2, dt)
            .map_err(|e| e.with_context(format!("step {} at t = {:.6}", steps + 1, state.time)))?;
        steps += 1;
        sink.record(&grid, &state, steps, false)?;
    }
    sink.record(&grid, &state, steps, true)?;
    Ok(RunReport {
        grid,
        state,
        steps,
        initial_totals,
        max_dual_residual: 0.0,
        total_dual_iters: 0,
    })
}

// ---------------------------------------------------------------------------
// Grid-refinement sweeps
// ---------------------------------------------------------------------------

fn density_run(problem: Problem, n: usize, courant: f64, t_end: f64) -> Result<Vec<f64>> {
    let mut cfg = RunConfig::preset(problem);
    cfg.n_cells = n;
    cfg.courant = courant;
    cfg.t_end = t_end;
    let report = run(&cfg)?;
    Ok(crate::verification::avg_component(&report.state, 0))
}

/// Self-referencing sweep: each level compared against the block-averaged
/// fine run (component 0).
fn self_reference_sweep(
    problem: Problem,
    levels: &[usize],
    ref_n: usize,
    courant: f64,
    t_end: f64,
) -> Result<ConvergenceReport> {
    let fine = density_run(problem, ref_n, courant, t_end)?;
    let (x_min, x_max) = problem.domain();
    let mut errors = Vec::new();
    for &n in levels {
        if ref_n % n != 0 {
            return Err(SolverError::InvalidConfig(format!(
                "reference grid {ref_n} is not a multiple of level {n}"
            )));
        }
        let coarse = density_run(problem, n, courant, t_end)?;
        let reference = coarsen_averages(&fine, ref_n / n);
        errors.push(l2_error(&coarse, &reference, (x_max - x_min) / n as f64));
    }
    convergence_order(levels, &errors)
}

/// Smooth-regime sweep against the fine self-reference.
pub fn converge_burgers(
    levels: &[usize],
    ref_n: usize,
    courant: f64,
    t_end: f64,
) -> Result<ConvergenceReport> {
    self_reference_sweep(Problem::Burgers, levels, ref_n, courant, t_end)
}

/// Shock-tube density sweep against the exact solution, cell-averaged with
/// the wave fronts as quadrature breakpoints.
pub fn converge_sod(levels: &[usize], courant: f64, t_end: f64) -> Result<ConvergenceReport> {
    let gas = GasParams::default_air();
    let waves = sod_wave_positions(t_end, SOD_LEFT, SOD_RIGHT, &gas)?;
    let (x_min, x_max) = Problem::Sod.domain();
    let mut errors = Vec::new();
    for &n in levels {
        let coarse = density_run(Problem::Sod, n, courant, t_end)?;
        let dx = (x_max - x_min) / n as f64;
        let density = |x: f64| exact_sod(x, t_end, SOD_LEFT, SOD_RIGHT, &gas).unwrap()[0];
        let reference: Vec<f64> = (0..n)
            .map(|i| {
                let a = x_min + i as f64 * dx;
                cell_average_piecewise(&density, a, a + dx, &waves)
            })
            .collect();
        errors.push(l2_error(&coarse, &reference, dx));
    }
    convergence_order(levels, &errors)
}

/// Relaxation-system sweep against the fourth-order finite-difference heat
/// solution, cell-averaged through its quartic interpolant.
pub fn converge_diffusion(
    levels: &[usize],
    template: &RunConfig,
    ref_points: usize,
) -> Result<(ConvergenceReport, f64)> {
    let fd = diffusion_reference(ref_points, template.t_end);
    let mut errors = Vec::new();
    let mut worst_residual = 0.0f64;
    for &n in levels {
        let mut cfg = template.clone();
        cfg.n_cells = n;
        cfg.out_dir = None;
        let report = run(&cfg)?;
        worst_residual = worst_residual.max(report.max_dual_residual);
        let coarse = crate::verification::avg_component(&report.state, 0);
        let reference: Vec<f64> = (0..n)
            .map(|i| fd_cell_average(&fd, report.grid.face_x(i), report.grid.face_x(i + 1)))
            .collect();
        errors.push(l2_error(&coarse, &reference, report.grid.dx));
    }
    Ok((convergence_order(levels, &errors)?, worst_residual))
}

fn fd_cell_average(fd: &FdSolution, a: f64, b: f64) -> f64 {
    crate::verification::cell_average_of(&|x| fd.eval(x), a, b)
}

/// Manufactured-solution density sweep against the exact cell averages.
pub fn converge_ns_manufactured(
    levels: &[usize],
    courant: f64,
    t_end: f64,
) -> Result<ConvergenceReport> {
    let gas = GasParams::default_air();
    let (x_min, x_max) = Problem::NsManufactured.domain();
    let mut errors = Vec::new();
    for &n in levels {
        let coarse = density_run(Problem::NsManufactured, n, courant, t_end)?;
        let dx = (x_max - x_min) / n as f64;
        let reference: Vec<f64> = (0..n)
            .map(|i| {
                let a = x_min + i as f64 * dx;
                manufactured_cell_avg(a, a + dx, t_end, &gas)[0]
            })
            .collect();
        errors.push(l2_error(&coarse, &reference, dx));
    }
    convergence_order(levels, &errors)
}

/// Shock/entropy-wave density sweep against the fine self-reference.
pub fn converge_shu_osher(
    levels: &[usize],
    ref_n: usize,
    courant: f64,
    t_end: f64,
) -> Result<ConvergenceReport> {
    self_reference_sweep(Problem::ShuOsher, levels, ref_n, courant, t_end)
}

/// L2 distance between the density profile at `n` cells and a block-averaged
/// finer profile (both from fresh runs unless the fine data is supplied).
pub fn profile_distance(coarse: &[f64], fine: &[f64], x_min: f64, x_max: f64) -> f64 {
    assert!(fine.len() % coarse.len() == 0, "profiles are not nested");
    let reference = coarsen_averages(fine, fine.len() / coarse.len());
    l2_error(coarse, &reference, (x_max - x_min) / coarse.len() as f64)
}

// ---------------------------------------------------------------------------
