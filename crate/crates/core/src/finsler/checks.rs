use serde::{Deserialize, Serialize};

use super::norm::{dot, euclidean_len, FinslerNorm};
use crate::error::Result;

/// Residuals of the four gradient identities of a norm and its polar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// max over λ of |∇H(λξ) − sign(λ)∇H(ξ)|
    pub gradient_parity: f64,
    /// |⟨∇H(ξ), ξ⟩ − H(ξ)| / H(ξ)
    pub euler: f64,
    /// |H(∇H⁰(x)) − 1|
    pub unit_dual_gradient: f64,
    /// |∇H(∇H⁰(x)) − x/H⁰(x)| / |x/H⁰(x)|
    pub inverse_gradient: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.gradient_parity
            .max(self.euler)
            .max(self.unit_dual_gradient)
            .max(self.inverse_gradient)
    }
}

/// Evaluates the four identities at x (used both as ξ and as x).
pub fn dual_gradient_identities_check(h: &FinslerNorm, x: &[f64]) -> Result<IdentityResiduals> {
    let g = h.gradient(x)?;
    let mut gradient_parity = 0.0_f64;
    for lambda in [-2.5, -1.0, 0.5, 3.0] {
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let gl = h.gradient(&scaled)?;
        let sign = f64::signum(lambda);
        let diff: Vec<f64> = gl.iter().zip(&g).map(|(a, b)| a - sign * b).collect();
        gradient_parity = gradient_parity.max(euclidean_len(&diff));
    }
    let hx = h.eval(x);
    let euler = (dot(&g, x) - hx).abs() / hx;

    let dg = h.dual_gradient(x)?;
    let unit_dual_gradient = (h.eval(&dg) - 1.0).abs();
    let back = h.gradient(&dg)?;
    let h0 = h.dual(x)?;
    let target: Vec<f64> = x.iter().map(|v| v / h0).collect();
    let diff: Vec<f64> = back.iter().zip(&target).map(|(a, b)| a - b).collect();
    let inverse_gradient = euclidean_len(&diff) / euclidean_len(&target);
    Ok(IdentityResiduals {
        gradient_parity,
        euler,
        unit_dual_gradient,
        inverse_gradient,
    })
}

/// |⟨ξ, x⟩| ≤ H(ξ)H⁰(x)(1 + 1e−9).
pub fn cauchy_schwarz_check(h: &FinslerNorm, xi: &[f64], x: &[f64]) -> Result<bool> {
    Ok(dot(xi, x).abs() <= h.eval(xi) * h.dual(x)? * (1.0 + 1e-9))
}

/// (H⁰)⁰(ξ) computed by nesting the numerical polar construction.
pub fn bipolar_value(h: &FinslerNorm, xi: &[f64]) -> Result<f64> {
    let inner = h.clone();
    let polar = FinslerNorm::custom_with_bounds(
        h.dim(),
        "polar",
        move |v: &[f64]| inner.dual(v).unwrap_or(f64::NAN),
        1.0 / h.gamma2(),
        1.0 / h.gamma1(),
    )?;
    polar.dual(xi)
}
