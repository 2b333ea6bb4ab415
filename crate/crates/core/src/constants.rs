//! Sharp constants of the trace-Hardy inequality on the half-space and on
//! cones, and the angular profile of the extremal.
//!
//! The profile solves
//! `f'' − (N−2) tanθ f' − ((N−2)²/4 − (β−2)²/4) f = 0` and is written as
//! `w(sin²θ)` with
//! `w(y) = F(a₁,b₁,1/2;y) + k√y F(a₂,b₂,3/2;y)`,
//! `a₁ = (N+β)/4 − 1`, `b₁ = (N−β)/4`, `a₂ = a₁ + 1/2`, `b₂ = b₁ + 1/2`.
//! It stays bounded up to `θ = π/2` exactly when `k = −K(N,β)`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{boundary_class, gamma_quotient, hypergeom, hypergeom_derivative, HypergeomParams};

/// Below this |A| the cone constant is treated as degenerate.
pub const DEGENERATE_A: f64 = 1e-12;

/// Dimension N, weight exponent β and cone half-angle α (0 = half-space).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    #[serde(rename = "N")]
    pub n: usize,
    pub beta: f64,
    pub alpha: f64,
}

impl ProblemParams {
    pub fn new(n: usize, beta: f64, alpha: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::ParamOutOfRange(format!("N must be at least 3, got {n}")));
        }
        if !(beta >= 2.0 && beta < n as f64) {
            return Err(Error::ParamOutOfRange(format!(
                "beta must satisfy 2 <= beta < N = {n}, got {beta}"
            )));
        }
        if !(alpha.abs() < FRAC_PI_2) {
            return Err(Error::ParamOutOfRange(format!(
                "alpha must satisfy |alpha| < pi/2, got {alpha}"
            )));
        }
        Ok(Self { n, beta, alpha })
    }

    pub fn halfspace(n: usize, beta: f64) -> Result<Self> {
        Self::new(n, beta, 0.0)
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    /// Parameters of the even branch F(a₁, b₁, 1/2; y).
    pub fn even_branch(&self) -> HypergeomParams {
        let (n, b) = (self.dim(), self.beta);
        HypergeomParams {
            a: (n + b) / 4.0 - 1.0,
            b: (n - b) / 4.0,
            c: 0.5,
        }
    }

    /// Parameters of the odd branch F(a₁+1/2, b₁+1/2, 3/2; y).
    pub fn odd_branch(&self) -> HypergeomParams {
        let e = self.even_branch();
        HypergeomParams {
            a: e.a + 0.5,
            b: e.b + 0.5,
            c: 1.5,
        }
    }

    /// (β−2)²/4, the coefficient of the Hardy term.
    pub fn hardy_coefficient(&self) -> f64 {
        0.25 * (self.beta - 2.0).powi(2)
    }

    /// (N−2)²/4 − (β−2)²/4, the zeroth-order coefficient of the angular ODE.
    pub fn ode_coefficient(&self) -> f64 {
        0.25 * (self.dim() - 2.0).powi(2) - self.hardy_coefficient()
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.n, self.beta, alpha)
    }
}

/// K(N,β) = 2 Γ((N+β)/4 − 1/2) Γ((N−β)/4 + 1/2) / (Γ((N+β)/4 − 1) Γ((N−β)/4)).
pub fn sharp_constant_halfspace(n: usize, beta: f64) -> Result<f64> {
    let p = ProblemParams::halfspace(n, beta)?;
    Ok(halfspace_constant(&p))
}

fn halfspace_constant(p: &ProblemParams) -> f64 {
    let e = p.even_branch();
    2.0 * gamma_quotient([e.a + 0.5, e.b + 0.5], [e.a, e.b])
}

/// The angular profile w, its coefficient k and an overall scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalProfile {
    pub params: ProblemParams,
    pub k: f64,
    pub scale: f64,
}

impl ExtremalProfile {
    /// The bounded profile k = −K(N,β) normalised by w(0) = 1.
    pub fn halfspace(params: ProblemParams) -> Self {
        Self {
            params,
            k: -halfspace_constant(&params),
            scale: 1.0,
        }
    }

    /// An arbitrary branch combination, bounded or not.
    pub fn with_k(params: ProblemParams, k: f64) -> Self {
        Self { params, k, scale: 1.0 }
    }

    /// The bounded profile rescaled to equal 1 on the cone boundary θ = α.
    /// The divisor is f(α), which is A_{α,β} for α ≥ 0.
    pub fn cone(params: ProblemParams) -> Result<Self> {
        let unscaled = Self::halfspace(params);
        let f = unscaled.profile(params.alpha)?;
        if f.abs() < DEGENERATE_A {
            return Err(Error::DegenerateCone(f));
        }
        Ok(Self { scale: 1.0 / f, ..unscaled })
    }

    /// w(y) for 0 ≤ y < 1.
    pub fn angular_solution(&self, y: f64) -> Result<f64> {
        let f1 = hypergeom(&self.params.even_branch(), y)?;
        let f2 = hypergeom(&self.params.odd_branch(), y)?;
        Ok(self.scale * (f1 + self.k * y.sqrt() * f2))
    }

    /// w'(y) for 0 < y < 1 (the √y term makes w' singular at 0).
    pub fn angular_solution_derivative(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::OutOfDomain {
                value: y,
                domain: "0 < y < 1",
            });
        }
        let odd = self.params.odd_branch();
        let d1 = hypergeom_derivative(&self.params.even_branch(), y)?;
        let f2 = hypergeom(&odd, y)?;
        let d2 = hypergeom_derivative(&odd, y)?;
        let s = y.sqrt();
        Ok(self.scale * (d1 + self.k * (0.5 * f2 / s + s * d2)))
    }

    /// f(θ) = F₁(sin²θ) + k sinθ F₂(sin²θ) on |θ| < π/2. This is w(sin²θ)
    /// for θ ≥ 0 and its analytic continuation for θ < 0.
    pub fn profile(&self, theta: f64) -> Result<f64> {
        let s = theta.sin();
        let y = s * s;
        let f1 = hypergeom(&self.params.even_branch(), y)?;
        let f2 = hypergeom(&self.params.odd_branch(), y)?;
        Ok(self.scale * (f1 + self.k * s * f2))
    }

    /// f'(θ) = sin2θ F₁'(y) + k (cosθ F₂(y) + sinθ sin2θ F₂'(y)), y = sin²θ.
    pub fn profile_derivative(&self, theta: f64) -> Result<f64> {
        Ok(self.profile_with_derivative(theta)?.1)
    }

    /// (f(θ), f'(θ)) sharing the hypergeometric evaluations.
    pub fn profile_with_derivative(&self, theta: f64) -> Result<(f64, f64)> {
        let (s, c) = theta.sin_cos();
        let y = s * s;
        let even = self.params.even_branch();
        let odd = self.params.odd_branch();
        let f1 = hypergeom(&even, y)?;
        let f2 = hypergeom(&odd, y)?;
        let d1 = hypergeom_derivative(&even, y)?;
        let d2 = hypergeom_derivative(&odd, y)?;
        let s2 = 2.0 * s * c;
        let value = self.scale * (f1 + self.k * s * f2);
        let deriv = self.scale * (s2 * d1 + self.k * (c * f2 + s * s2 * d2));
        Ok((value, deriv))
    }

    /// f'(0) by the analytic limit: only the √y branch contributes, giving k.
    pub fn angular_derivative_at_zero(&self) -> f64 {
        self.scale * self.k
    }

    /// Relative size of the leading y → 1 singular coefficient of w,
    /// |C₁ + kC₂| / (|C₁| + |kC₂|). Zero for the bounded branch.
    pub fn boundedness_residual(&self) -> f64 {
        let c1 = boundary_class(&self.params.even_branch()).coefficient;
        let c2 = boundary_class(&self.params.odd_branch()).coefficient;
        let denom = c1.abs() + (self.k * c2).abs();
        (c1 + self.k * c2).abs() / denom
    }
}

/// A_{α,β} = F₁(sin²α) − K(N,β)|sinα| F₂(sin²α); exactly 1 at α = 0.
pub fn cone_coefficient_a(n: usize, beta: f64, alpha: f64) -> Result<f64> {
    let p = ProblemParams::new(n, beta, alpha)?;
    if alpha == 0.0 {
        return Ok(1.0);
    }
    let s = alpha.sin().abs();
    let a = ExtremalProfile::halfspace(p).profile(s.asin())?;
    if a.abs() < DEGENERATE_A {
        return Err(Error::DegenerateCone(a));
    }
    Ok(a)
}

/// K(N,α,β) = −sin(2α) w'(sin²α) / A_{α,β}, implemented as written.
///
/// At α = 0 the limit K(N,β) is returned. The formula is odd in α, so a
/// negative α yields −K(N,|α|,β); see [`cone_constant_continued`].
pub fn sharp_constant_cone(n: usize, beta: f64, alpha: f64) -> Result<f64> {
    let p = ProblemParams::new(n, beta, alpha)?;
    if alpha == 0.0 {
        return Ok(halfspace_constant(&p));
    }
    let a = cone_coefficient_a(n, beta, alpha)?;
    let s = alpha.sin();
    let w_prime = ExtremalProfile::halfspace(p).angular_solution_derivative(s * s)?;
    Ok(-(2.0 * alpha).sin() * w_prime / a)
}

/// −f'(α)/f(α) for the signed profile f. Equals [`sharp_constant_cone`] for
/// α ≥ 0 and continues it smoothly to α < 0.
pub fn cone_constant_continued(n: usize, beta: f64, alpha: f64) -> Result<f64> {
    let p = ProblemParams::new(n, beta, alpha)?;
    let (f, df) = ExtremalProfile::halfspace(p).profile_with_derivative(alpha)?;
    if f.abs() < DEGENERATE_A {
        return Err(Error::DegenerateCone(f));
    }
    Ok(-df / f)
}

/// Sharp constant and diagnostics for one (N, β, α).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpConstantReport {
    #[serde(flatten)]
    pub params: ProblemParams,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub boundedness_residual: f64,
    /// −f'(α)/f(α); differs from `K` only in sign, and only for α < 0.
    pub k_continued: f64,
}

impl SharpConstantReport {
    pub fn compute(params: ProblemParams) -> Result<Self> {
        let ProblemParams { n, beta, alpha } = params;
        Ok(Self {
            params,
            k: sharp_constant_cone(n, beta, alpha)?,
            a: cone_coefficient_a(n, beta, alpha)?,
            boundedness_residual: ExtremalProfile::halfspace(params).boundedness_residual(),
            k_continued: cone_constant_continued(n, beta, alpha)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

    #[test]
    fn halfspace_constant_examples() {
        assert!((sharp_constant_halfspace(4, 2.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        let k32 = 0.228_473_290_522_231_8;
        assert!((sharp_constant_halfspace(3, 2.0).unwrap() / k32 - 1.0).abs() < 1e-12);
        assert!(sharp_constant_halfspace(5, 5.0 - 1e-6).unwrap() < 1e-5);
        assert!(sharp_constant_halfspace(2, 1.5).is_err());
        assert!(sharp_constant_halfspace(4, 1.9).is_err());
        assert!(sharp_constant_halfspace(4, 4.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ProblemParams::new(4, 2.0, FRAC_PI_2).is_err());
        assert!(ProblemParams::new(4, 2.0, -1.5).is_ok());
    }

    #[test]
    fn profile_at_zero() {
        let p = ExtremalProfile::halfspace(ProblemParams::halfspace(5, 3.0).unwrap());
        assert_eq!(p.angular_solution(0.0).unwrap(), 1.0);
        assert_eq!(p.profile(0.0).unwrap(), 1.0);
        assert_eq!(p.angular_derivative_at_zero(), p.k);
        assert!((p.profile_derivative(0.0).unwrap() - p.k).abs() < 1e-15);
    }

    #[test]
    fn four_two_closed_forms() {
        // for N=4, β=2: f(θ) = (1 − 2θ/π)/cosθ, so A(π/4) = √2/2 and
        // K(α) = (2/π)/(1 − 2α/π) − tanα
        let a = cone_coefficient_a(4, 2.0, FRAC_PI_4).unwrap();
        assert!((a - 0.707_106_781_186_547_5).abs() < 1e-13);
        let k = sharp_constant_cone(4, 2.0, FRAC_PI_6).unwrap();
        assert!((k - 0.377_579_389_361_746_25).abs() < 1e-12, "{k}");
        assert_eq!(cone_coefficient_a(4, 2.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn negative_alpha_parity() {
        let pos = sharp_constant_cone(5, 2.5, 0.4).unwrap();
        let neg = sharp_constant_cone(5, 2.5, -0.4).unwrap();
        assert!((pos + neg).abs() < 1e-14 * pos.abs());
        assert_eq!(
            cone_coefficient_a(5, 2.5, 0.4).unwrap(),
            cone_coefficient_a(5, 2.5, -0.4).unwrap()
        );
        let cont = cone_constant_continued(5, 2.5, 0.4).unwrap();
        assert!((cont - pos).abs() < 1e-12 * pos);
        let exact = 2.0 / PI / (1.0 + 0.8 / PI) + 0.4f64.tan();
        assert!((cone_constant_continued(4, 2.0, -0.4).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn report_serializes_with_flat_fields() {
        let r = SharpConstantReport::compute(ProblemParams::halfspace(4, 2.0).unwrap()).unwrap();
        let json = serde_json::to_value(r).unwrap();
        for key in ["N", "beta", "alpha", "K", "A", "boundedness_residual"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert!(r.boundedness_residual < 1e-10);
    }
}
