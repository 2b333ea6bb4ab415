//! Finsler norms, their polars, gradient identities and the anisotropic
//! Laplacian Δ_H u = div(H(∇u)∇H(∇u)).

mod checks;
mod laplacian;
mod norm;
mod product;

pub use checks::{bipolar_value, cauchy_schwarz_check, dual_gradient_identities_check, IdentityResiduals};
pub use laplacian::{
    default_step, divergence_fd, finsler_laplacian_fd, finsler_laplacian_of_gradient,
    finsler_laplacian_richardson, gradient_fd, MIN_GRADIENT,
};
pub use norm::{CustomNorm, FinslerNorm, NormFamily};
pub use product::{product_cauchy_schwarz, ProductNorm, Side};

/// H⁰(x); see [`FinslerNorm::dual`].
pub fn dual_norm(h: &FinslerNorm, x: &[f64]) -> crate::Result<f64> {
    h.dual(x)
}

pub(crate) use norm::{dot, euclidean_len};
