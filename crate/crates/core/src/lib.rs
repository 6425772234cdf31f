//! Weighted Bergman kernels on planar domains and their relation to the
//! Green's function of `P_rho = d/dconj(z) (1/rho) d/dz`:
//!
//! `K_rho(z, w) = -2 / (pi rho(z) rho(w)) d^2 G_rho(z, w) / dz dconj(w)`.
//!
//! Kernels come from Gram-matrix orthonormalization over area quadrature
//! ([`bergman`]) or closed forms; Green's functions from closed forms,
//! Moebius transport ([`green`]) or a finite-difference solver
//! ([`pdegreen`]). Every routine is generic over [`scalar::Real`]; the type
//! aliases below fix the scalar to `f64`.

pub mod bergman;
pub mod calculus;
pub mod desc;
pub mod error;
pub mod geometry;
pub mod green;
pub mod linalg;
pub mod pdegreen;
pub mod poly;
pub mod scalar;
pub mod weights;

pub use error::{Error, Result};

pub type Complex64 = scalar::Cplx<f64>;
pub type Domain = geometry::Domain<f64>;
pub type QuadratureRule = geometry::QuadratureRule<f64>;
pub type MoebiusMap = geometry::MoebiusMap<f64>;
pub type Exhaustion = geometry::Exhaustion<f64>;
pub type Polynomial = poly::Polynomial<f64>;
pub type Weight = weights::Weight<f64>;
pub type Gauge = weights::Gauge<f64>;
pub type BasisSpec = bergman::BasisSpec<f64>;
pub type ClosedFormKernel = bergman::ClosedFormKernel<f64>;
pub type KernelApproximation = bergman::KernelApproximation<f64>;
pub type ExtremalFunction = bergman::ExtremalFunction<f64>;
pub type GreenFunction = green::GreenFunction<f64>;
pub type WeightedGreen = green::WeightedGreen<f64>;
pub type GridSpec = pdegreen::GridSpec<f64>;
pub type DiscreteOperator = pdegreen::DiscreteOperator<f64>;
pub type DiscreteGreen = pdegreen::DiscreteGreen<f64>;
pub type FactoredOperator = pdegreen::FactoredOperator<f64>;
