use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum StateError {
    #[error("state vector is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("invalid density matrix: {0}")]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum NoiseError {
    #[error("depolarizing probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("over-rotation standard deviation {0} must be finite and non-negative")]
    InvalidSigma(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FidelityError {
    #[error("fidelity {0} lies outside [0, 1] beyond rounding tolerance")]
    OutOfRange(f64),
    #[error("noise model has coherent over-rotation but no error draw was supplied")]
    MissingDraw,
    #[error("error draw does not fit a {kind} decomposition: {reason}")]
    DrawMismatch { kind: &'static str, reason: &'static str },
    #[error("Monte Carlo average needs at least one repetition")]
    NoSamples,
    #[error("least-squares design matrix is rank deficient")]
    SingularFit,
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    State(#[from] StateError),
}

impl From<LinalgError> for FidelityError {
    fn from(e: LinalgError) -> Self {
        FidelityError::State(StateError::Linalg(e))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("grid `{name}`: {reason}")]
    InvalidGrid { name: &'static str, reason: &'static str },
    #[error("repetitions must be at least 1")]
    ZeroRepetitions,
    #[error("no decomposition kinds selected")]
    NoKinds,
    #[error(transparent)]
    Noise(#[from] NoiseError),
}
