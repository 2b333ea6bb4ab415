use serde::{Deserialize, Serialize};

use super::norm::{dot, FinslerNorm};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Φ(ξ, τ) = sqrt(H(ξ)² + τ²)
    Primal,
    /// Φ⁰(x, t) = sqrt(H⁰(x)² + t²)
    Polar,
}

/// The half-space norms Φ and Φ⁰ on ℝᴺ = ℝᴺ⁻¹ × ℝ built from a base
/// norm on ℝᴺ⁻¹ and the absolute value of the last coordinate.
#[derive(Debug, Clone)]
pub struct ProductNorm {
    base: FinslerNorm,
}

impl ProductNorm {
    pub fn new(base: FinslerNorm) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &FinslerNorm {
        &self.base
    }

    /// Ambient dimension N = dim(base) + 1.
    pub fn dim(&self) -> usize {
        self.base.dim() + 1
    }

    pub fn primal(&self, xi: &[f64], tau: f64) -> f64 {
        self.base.eval(xi).hypot(tau)
    }

    pub fn polar(&self, x: &[f64], t: f64) -> Result<f64> {
        Ok(self.base.dual(x)?.hypot(t))
    }

    pub fn eval(&self, x: &[f64], t: f64, side: Side) -> Result<f64> {
        if x.len() != self.base.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.base.dim(),
                got: x.len(),
            });
        }
        match side {
            Side::Primal => Ok(self.primal(x, t)),
            Side::Polar => self.polar(x, t),
        }
    }

    /// Φ(ξ,τ)∇Φ(ξ,τ) = (H(ξ)∇H(ξ), τ).
    pub fn scaled_gradient(&self, xi: &[f64], tau: f64) -> (Vec<f64>, f64) {
        (self.base.scaled_gradient(xi), tau)
    }

    /// Relative gap between Φ⁰(x,t) and sup ⟨(ξ,τ),(x,t)⟩ / Φ(ξ,τ), the
    /// latter computed numerically on the (N)-dimensional product space.
    pub fn dual_pair_check(&self, x: &[f64], t: f64) -> Result<f64> {
        let base = self.base.clone();
        let n = base.dim();
        let g1 = base.gamma1().min(1.0);
        let g2 = base.gamma2().max(1.0);
        let phi = FinslerNorm::custom_with_bounds(
            n + 1,
            "product",
            move |v: &[f64]| base.eval(&v[..n]).hypot(v[n]),
            g1,
            g2,
        )?;
        let mut z = x.to_vec();
        z.push(t);
        let numeric = phi.dual(&z)?;
        let closed = self.polar(x, t)?;
        Ok((numeric - closed).abs() / closed.max(f64::MIN_POSITIVE))
    }
}

/// |⟨ξ, x⟩| ≤ Φ(ξ,τ)Φ⁰(x,t) on the product space, with relative slack 1e−9.
pub fn product_cauchy_schwarz(p: &ProductNorm, xi: &[f64], tau: f64, x: &[f64], t: f64) -> Result<bool> {
    let lhs = (dot(xi, x) + tau * t).abs();
    Ok(lhs <= p.primal(xi, tau) * p.polar(x, t)? * (1.0 + 1e-9))
}
