//! Planar model domains, their exhaustions, disk automorphisms and area
//! quadrature.

mod domain;
mod exhaustion;
mod moebius;
mod quadrature;

pub use domain::{Domain, DomainKind};
pub use exhaustion::{exhaustion_sequence, Exhaustion};
pub use moebius::{moebius_inverse, moebius_map, MoebiusMap};
pub use quadrature::{build_quadrature, gauss_legendre, integrate, QuadratureRule};
