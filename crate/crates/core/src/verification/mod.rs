//! Reference solutions, error norms, and convergence-order utilities used by
//! the benchmark problems and the acceptance suite.

mod errors;
mod fd_diffusion;
mod manufactured;
mod moc;
mod sod;

pub use errors::{
    avg_component, cell_average_of, cell_average_piecewise, coarsen_averages, convergence_order,
    l2_error, ConvergenceReport,
};
pub use fd_diffusion::{
    diffusion_bc, diffusion_reference, diffusion_source, diffusion_steady_exact, march_heat_fd,
    FdSolution, DIFFUSION_NU, DIFFUSION_SOURCE_AMP, DIFFUSION_SOURCE_RATE, DIFFUSION_X_MAX,
    DIFFUSION_X_MIN,
};
pub use manufactured::{
    manufactured_cell_avg, manufactured_fields, manufactured_prim, manufactured_relax,
    manufactured_sources,
};
pub use moc::{burgers_moc, burgers_sine_exact, burgers_sine_ic};
pub use sod::{exact_sod, riemann_star, sod_wave_positions, SOD_LEFT, SOD_RIGHT};
