use super::norm::{euclidean_len, FinslerNorm};
use crate::error::{Error, Result};

/// Below this gradient magnitude the anisotropic Laplacian is undefined.
pub const MIN_GRADIENT: f64 = 1e-8;

/// Default finite-difference step max(1e−5, 1e−5|x|).
pub fn default_step(x: &[f64]) -> f64 {
    1e-5 * euclidean_len(x).max(1.0)
}

/// Central-difference gradient.
pub fn gradient_fd(u: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = u(&probe);
            probe[i] = x[i] - h;
            let um = u(&probe);
            probe[i] = x[i];
            (up - um) / (2.0 * h)
        })
        .collect()
}

/// Central-difference divergence of a vector field.
pub fn divergence_fd(field: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> f64 {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let fp = field(&probe)[i];
            probe[i] = x[i] - h;
            let fm = field(&probe)[i];
            probe[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .sum()
}

/// Δ_H u(x) = div(H(∇u)∇H(∇u)) for a function with known gradient.
pub fn finsler_laplacian_of_gradient(
    norm: &FinslerNorm,
    grad_u: &dyn Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    h: f64,
) -> Result<f64> {
    check_step(h)?;
    let g = euclidean_len(&grad_u(x));
    if g < MIN_GRADIENT {
        return Err(Error::GradientTooSmall(g));
    }
    let field = |y: &[f64]| norm.scaled_gradient(&grad_u(y));
    Ok(divergence_fd(&field, x, h))
}

/// Δ_H u(x) with both the gradient and the divergence taken by central
/// differences of step h. Accurate to O(h²).
pub fn finsler_laplacian_fd(norm: &FinslerNorm, u: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Result<f64> {
    let grad = |y: &[f64]| gradient_fd(u, y, h);
    finsler_laplacian_of_gradient(norm, &grad, x, h)
}

/// Richardson combination (4L(h/2) − L(h))/3 of [`finsler_laplacian_fd`].
pub fn finsler_laplacian_richardson(
    norm: &FinslerNorm,
    u: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
    h: f64,
) -> Result<f64> {
    let coarse = finsler_laplacian_fd(norm, u, x, h)?;
    let fine = finsler_laplacian_fd(norm, u, x, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("finite-difference step must be positive, got {h}")))
    }
}
