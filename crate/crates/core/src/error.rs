use thiserror::Error;

/// Errors raised by the numerical routines. Payload numbers are reported in
/// `f64` regardless of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("non-finite value {value} at node {index} ({re}, {im})")]
    NonFinite {
        index: usize,
        re: f64,
        im: f64,
        value: String,
    },

    #[error("weight representation violated: {0}")]
    Representation(String),

    #[error("gauge infeasible: weight is not log-harmonic (max |laplacian ln rho| = {residual:e})")]
    GaugeInfeasible { residual: f64 },

    #[error("ill-conditioned gram matrix (eigenvalues in [{min_eig:e}, {max_eig:e}])")]
    IllConditioned { min_eig: f64, max_eig: f64 },

    #[error("degenerate kernel: K(t,t) = {0:e}")]
    DegenerateKernel(f64),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("stencil point ({re}, {im}) lies outside the domain")]
    Stencil { re: f64, im: f64 },

    #[error("diagonal singularity at z = w = ({re}, {im})")]
    Diagonal { re: f64, im: f64 },

    #[error("nonpositive weight {value:e} at ({re}, {im})")]
    Weight { re: f64, im: f64, value: f64 },

    #[error("linear solver failure: {0}")]
    Solver(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
