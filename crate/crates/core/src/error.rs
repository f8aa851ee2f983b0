use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("inadmissible state ({what}) at x = {x}")]
    Inadmissible { what: String, x: f64 },

    #[error("characteristic foot x = {foot:.6} outside reconstruction stencil [{lo:.6}, {hi:.6}]")]
    FootOutsideStencil { foot: f64, lo: f64, hi: f64 },

    #[error("no wave speed: maximum characteristic speed is zero over all degrees of freedom")]
    NoWaveSpeed,

    #[error("nonfinite value encountered in {0}")]
    NonFinite(String),

    #[error("degenerate Prandtl ratio: Pr_n = a_v^2/a_h^2 = {0} is too close to 1")]
    DegeneratePrandtl(f64),

    #[error(
        "dual time stalled: residual {residual:.3e} after {iters} iterations (tolerance {tol:.1e})"
    )]
    DualTimeStalled { residual: f64, iters: usize, tol: f64 },

    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<SolverError>,
    },
}

impl SolverError {
    /// Wrap an error with a location/phase label (face index, sub-step name, time).
    pub fn with_context(self, context: impl Into<String>) -> Self {
        SolverError::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, SolverError>;
