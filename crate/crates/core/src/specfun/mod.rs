//! Special functions: Gamma family and the Gauss hypergeometric function.

mod gamma;
mod hypergeom;

pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub(crate) use gamma::gamma_quotient;
pub use hypergeom::{
    boundary_class, hypergeom, hypergeom_derivative, hypergeom_series, hypergeom_transformed,
    BoundaryClass, BoundaryKind, HypergeomParams, MAX_TERMS,
};
