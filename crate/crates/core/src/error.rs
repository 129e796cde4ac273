use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not symmetric (max |C - C^T| = {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("expected dimension {expected}, got {found}")]
    BadDimension { expected: usize, found: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit index must be 1 or 2, got {0}")]
    BadQubit(usize),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("closed-form steady state requires the |+> reset state")]
    UnsupportedResetState,

    #[error("closed-form steady state undefined when r, gamma and g all vanish")]
    DegenerateLimit,

    #[error("steady state is not unique (second-smallest eigenvalue of L^dag L = {gap:e})")]
    DegenerateSteadyState { gap: f64 },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("state vector not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("direction vector has zero length")]
    ZeroDirection,

    #[error("at most 4 particles supported, got {0}")]
    TooManyParticles(usize),

    #[error("mean QFI {mean_f} outside [0, {n_particles}]")]
    OutOfRange { mean_f: f64, n_particles: usize },

    #[error("Fisher information must be positive, got {0}")]
    NonPositiveF(f64),

    #[error("number of measurements must be positive")]
    NoMeasurements,

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("branches lambda_x and lambda_yz do not cross on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("at {param} = {value}: {source}")]
    AtPoint {
        param: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any `AtPoint` annotation.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures of the numerical solvers rather than of the inputs.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self.root(),
            Error::NoConvergence { .. }
                | Error::DegenerateSteadyState { .. }
                | Error::DegenerateLimit
                | Error::NotHermitian { .. }
                | Error::NotSymmetric { .. }
                | Error::InvalidState(_)
                | Error::OutOfRange { .. }
                | Error::NoSignChange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
