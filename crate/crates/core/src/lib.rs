//! Third-order active flux solver for one-dimensional conservation laws with
//! stiff relaxation sources.
//!
//! The scheme carries cell averages and independently evolved, globally
//! continuous face values. Faces advance along characteristics from a frozen
//! parabolic reconstruction; averages follow from the exact conservation-law
//! balance with Simpson-in-time flux quadrature and a space-time source
//! integral. Parabolic problems (heat conduction, viscous gas flow) are
//! treated as hyperbolic relaxation systems marched in dual time.

pub mod boundary;
pub mod driver;
pub mod error;
pub mod evolution;
pub mod mesh;
pub mod models;
pub mod reconstruction;
pub mod splitting;
pub mod update;
pub mod verification;

pub use driver::{
    converge_burgers, converge_diffusion, converge_ns_manufactured, converge_shu_osher,
    converge_sod, explicit_af_step, init_state, profile_distance, run, ExplicitBc, Problem,
    RunConfig, RunReport,
};
pub use error::{Result, SolverError};
pub use mesh::{build_grid, cfl_timestep, FieldState, Grid, MAX_VARS};
pub use models::{EigenSystem, GasParams, Model};
pub use reconstruction::{reconstruct_cell, CellParabola, Reconstruction};
pub use splitting::{lie_step, strang_step, third_order_step, SplitWeights, SubFlow};
pub use update::{bdf_coeffs, dual_time_march, DualBc, DualOutcome, DualTimeParams};
