//! The extremal φ(x,t) = ρ^{1−N/2} f(θ) in the polar coordinates
//! ρ = Φ⁰(x,t), θ = arctan(t/H⁰(x)), and the checks built on it: the PDE
//! Δ_Φ φ + (β−2)²/4 φ/ρ² = 0, the boundary normal derivative, and the
//! divergence-free flux field on the (N+1)-dimensional subgraph space.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::constants::{sharp_constant_halfspace, ExtremalProfile, ProblemParams};
use crate::error::{Error, Result};
use crate::finsler::{euclidean_len, finsler_laplacian_fd, FinslerNorm, NormFamily, ProductNorm};
use crate::specfun::hypergeom;

/// Relative tolerance of the PDE residual for norms with closed-form duals.
pub const PDE_TOL: f64 = 1e-4;
/// Looser PDE tolerance for custom norms whose duals are computed numerically.
pub const PDE_TOL_NUMERIC_DUAL: f64 = 1e-3;
/// Relative tolerance of the flux divergence check.
pub const DIVERGENCE_TOL: f64 = 1e-3;
/// Relative tolerance of the normal-derivative check.
pub const NORMAL_DERIVATIVE_TOL: f64 = 1e-5;

/// ρ = Φ⁰(x,t) and θ = atan2(t, H⁰(x)).
///
/// θ lies in [0, π/2] for t ≥ 0; negative t gives θ < 0, which the cone
/// extremals with α < 0 need. On the axis x = 0, θ = ±π/2 by continuity.
pub fn polar_coordinates(p: &ProductNorm, x: &[f64], t: f64) -> Result<(f64, f64)> {
    let h0 = p.base().dual(x)?;
    if h0 == 0.0 && t == 0.0 {
        return Err(Error::OriginSingularity);
    }
    Ok((h0.hypot(t), t.atan2(h0)))
}

/// φ built from a product norm and an angular profile.
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    product: ProductNorm,
    profile: ExtremalProfile,
}

impl ExtremalSolution {
    pub fn new(product: ProductNorm, profile: ExtremalProfile) -> Result<Self> {
        if product.dim() != profile.params.n {
            return Err(Error::DimensionMismatch {
                expected: profile.params.n,
                got: product.dim(),
            });
        }
        Ok(Self { product, profile })
    }

    /// The half-space extremal for a base norm on ℝᴺ⁻¹.
    pub fn halfspace(base: FinslerNorm, beta: f64) -> Result<Self> {
        let params = ProblemParams::halfspace(base.dim() + 1, beta)?;
        Self::new(ProductNorm::new(base), ExtremalProfile::halfspace(params))
    }

    /// φ/A_{α,β}, equal to ρ^{1−N/2} on the cone boundary θ = α.
    pub fn cone(base: FinslerNorm, beta: f64, alpha: f64) -> Result<Self> {
        let params = ProblemParams::new(base.dim() + 1, beta, alpha)?;
        Self::new(ProductNorm::new(base), ExtremalProfile::cone(params)?)
    }

    pub fn product(&self) -> &ProductNorm {
        &self.product
    }

    pub fn profile(&self) -> &ExtremalProfile {
        &self.profile
    }

    pub fn params(&self) -> &ProblemParams {
        &self.profile.params
    }

    fn exponent(&self) -> f64 {
        1.0 - 0.5 * self.params().dim()
    }

    /// φ(x,t) = ρ^{1−N/2} f(θ).
    pub fn eval(&self, x: &[f64], t: f64) -> Result<f64> {
        let (rho, theta) = polar_coordinates(&self.product, x, t)?;
        Ok(rho.powf(self.exponent()) * self.profile.profile(theta)?)
    }

    /// φ(x,t) = ρ^{1−N/2} F₁(t²/ρ²) + k t ρ^{−N/2} F₂(t²/ρ²), times the scale.
    pub fn eval_direct(&self, x: &[f64], t: f64) -> Result<f64> {
        let h0 = self.product.base().dual(x)?;
        let rho_sq = h0 * h0 + t * t;
        if rho_sq == 0.0 {
            return Err(Error::OriginSingularity);
        }
        let rho = rho_sq.sqrt();
        let y = t * t / rho_sq;
        let p = &self.profile;
        let f1 = hypergeom(&p.params.even_branch(), y)?;
        let f2 = hypergeom(&p.params.odd_branch(), y)?;
        let m = self.exponent();
        Ok(p.scale * (rho.powf(m) * f1 + p.k * t * rho.powf(m - 1.0) * f2))
    }

    /// (φ_ρ, φ_θ, ρ, θ) at a point off the axis x = 0.
    fn polar_derivatives(&self, x: &[f64], t: f64) -> Result<PolarJet> {
        let (rho, theta) = polar_coordinates(&self.product, x, t)?;
        self.polar_jet(rho, theta)
    }

    fn polar_jet(&self, rho: f64, theta: f64) -> Result<PolarJet> {
        let (f, df) = self.profile.profile_with_derivative(theta)?;
        let m = self.exponent();
        let rm = rho.powf(m);
        Ok(PolarJet {
            rho,
            theta,
            value: rm * f,
            d_rho: m * rm / rho * f,
            d_theta: rm * df,
        })
    }

    /// Closed-form gradient (∇ₓφ, φ_t). Requires x ≠ 0.
    pub fn gradient(&self, x: &[f64], t: f64) -> Result<(Vec<f64>, f64)> {
        let (rho, theta) = polar_coordinates(&self.product, x, t)?;
        let dual_grad = self.product.base().dual_gradient(x)?;
        let (_, gx, gt) = self.jet(rho, theta, &dual_grad)?;
        Ok((gx, gt))
    }

    /// (φ, ∇ₓφ, φ_t) from polar coordinates and ∇H⁰(x), which callers
    /// integrating over many points can reuse along a ray.
    pub fn jet(&self, rho: f64, theta: f64, dual_grad: &[f64]) -> Result<(f64, Vec<f64>, f64)> {
        let j = self.polar_jet(rho, theta)?;
        let (s, c) = theta.sin_cos();
        let coeff = j.d_rho * c - j.d_theta * s / rho;
        let grad_x = dual_grad.iter().map(|g| coeff * g).collect();
        let grad_t = j.d_rho * s + j.d_theta * c / rho;
        Ok((j.value, grad_x, grad_t))
    }

    /// H(∇ₓφ)∇H(∇ₓφ) in closed form, (φ_ρ/ρ − tanθ φ_θ/ρ²) x.
    pub fn hgrad_closed_form(&self, x: &[f64], t: f64) -> Result<Vec<f64>> {
        let j = self.polar_derivatives(x, t)?;
        let coeff = j.d_rho / j.rho - j.theta.tan() * j.d_theta / (j.rho * j.rho);
        Ok(x.iter().map(|v| coeff * v).collect())
    }

    /// Δ_Φ φ + (β−2)²/4 φ/ρ², by central differences (anisotropic Laplacian
    /// in x, second difference in t) with Richardson extrapolation over
    /// steps h and h/2.
    pub fn pde_residual(&self, x: &[f64], t: f64, h: f64) -> Result<f64> {
        let coarse = self.pde_residual_at_step(x, t, h)?;
        let fine = self.pde_residual_at_step(x, t, 0.5 * h)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    fn pde_residual_at_step(&self, x: &[f64], t: f64, h: f64) -> Result<f64> {
        let in_x = |y: &[f64]| self.eval(y, t).unwrap_or(f64::NAN);
        let lap_x = finsler_laplacian_fd(self.product.base(), &in_x, x, h)?;
        let phi = self.eval(x, t)?;
        let phi_tt = (self.eval(x, t + h)? - 2.0 * phi + self.eval(x, t - h)?) / (h * h);
        let rho = self.product.polar(x, t)?;
        let res = lap_x + phi_tt + self.params().hardy_coefficient() * phi / (rho * rho);
        if res.is_nan() {
            return Err(Error::OriginSingularity);
        }
        Ok(res)
    }

    /// The scale |φ|/ρ² against which PDE residuals are measured.
    pub fn pde_scale(&self, x: &[f64], t: f64) -> Result<f64> {
        let rho = self.product.polar(x, t)?;
        Ok(self.eval(x, t)?.abs() / (rho * rho))
    }

    /// Relative PDE tolerance appropriate for this norm family.
    pub fn pde_tolerance(&self) -> f64 {
        match self.product.base().family() {
            NormFamily::Custom(_) => PDE_TOL_NUMERIC_DUAL,
            _ => PDE_TOL,
        }
    }

    /// One-sided difference of φ_t at t = 0⁺ against −K(N,β) H⁰(x)^{−N/2}.
    pub fn normal_derivative_check(&self, x: &[f64]) -> Result<NormalDerivativeCheck> {
        let h0 = self.product.base().dual(x)?;
        if h0 == 0.0 {
            return Err(Error::OriginSingularity);
        }
        let eps = 1e-4 * h0;
        let phi0 = self.eval(x, 0.0)?;
        let d1 = (self.eval(x, eps)? - phi0) / eps;
        let d2 = (self.eval(x, 2.0 * eps)? - phi0) / (2.0 * eps);
        let numeric = 2.0 * d1 - d2;
        let params = self.params();
        let k = sharp_constant_halfspace(params.n, params.beta)?;
        let expected = -k * h0.powf(-0.5 * params.dim());
        Ok(NormalDerivativeCheck {
            numeric,
            expected,
            residual: (numeric - expected).abs() / expected.abs(),
        })
    }

    /// Values of φ along a ray pattern: one row per (ρ, θ) with the PDE
    /// residual, its tolerance and the verdict. Points are
    /// x = ρ cosθ e/H⁰(e), t = ρ sinθ.
    pub fn residual_sweep(&self, direction: &[f64], rhos: &[f64], thetas: &[f64]) -> Result<Vec<ResidualRow>> {
        let h0e = self.product.base().dual(direction)?;
        if h0e == 0.0 {
            return Err(Error::OriginSingularity);
        }
        let tol = self.pde_tolerance();
        let mut rows = Vec::with_capacity(rhos.len() * thetas.len());
        for &rho in rhos {
            for &theta in thetas {
                let (s, c) = theta.sin_cos();
                let x: Vec<f64> = direction.iter().map(|e| rho * c * e / h0e).collect();
                let t = rho * s;
                let step = 1e-3 * rho;
                let residual = self.pde_residual(&x, t, step)?;
                let tolerance = tol * self.pde_scale(&x, t)?;
                rows.push(ResidualRow {
                    rho,
                    theta,
                    residual,
                    tolerance,
                    pass: residual.abs() <= tolerance,
                });
            }
        }
        Ok(rows)
    }
}

struct PolarJet {
    rho: f64,
    theta: f64,
    value: f64,
    d_rho: f64,
    d_theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalDerivativeCheck {
    pub numeric: f64,
    pub expected: f64,
    /// |numeric − expected| / |expected|
    pub residual: f64,
}

impl NormalDerivativeCheck {
    pub fn passes(&self) -> bool {
        self.residual <= NORMAL_DERIVATIVE_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub rho: f64,
    pub theta: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The field on ℝᴺ × ℝ
/// F(z,h) = ((2h/φ) H(∇ₓφ)∇H(∇ₓφ), (2h/φ) φ_t, (h²/φ²)Φ²(∇φ) + c h²/ρ²)
/// with c = (β−2)²/4. Its divergence is (2h/φ)(Δ_Φ φ + c φ/ρ²).
#[derive(Debug, Clone)]
pub struct FluxField {
    solution: ExtremalSolution,
    hardy_coefficient: f64,
}

impl FluxField {
    pub fn new(solution: ExtremalSolution) -> Self {
        let hardy_coefficient = solution.params().hardy_coefficient();
        Self {
            solution,
            hardy_coefficient,
        }
    }

    /// A field whose Hardy coefficient need not match the extremal's β.
    pub fn with_hardy_coefficient(solution: ExtremalSolution, hardy_coefficient: f64) -> Self {
        Self {
            solution,
            hardy_coefficient,
        }
    }

    pub fn solution(&self) -> &ExtremalSolution {
        &self.solution
    }

    /// F at (x, t, h); `point` is (x₁..x_{N−1}, t, h).
    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>> {
        let n = self.solution.params().n;
        if point.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: point.len(),
            });
        }
        let (x, t, h) = (&point[..n - 1], point[n - 1], point[n]);
        let phi = self.solution.eval(x, t)?;
        let (gx, gt) = self.solution.gradient(x, t)?;
        let base = self.solution.product().base();
        let hgrad = base.scaled_gradient(&gx);
        let hx = base.eval(&gx);
        let rho = self.solution.product().polar(x, t)?;
        let ratio = 2.0 * h / phi;
        let mut out: Vec<f64> = hgrad.into_iter().map(|v| ratio * v).collect();
        out.push(ratio * gt);
        out.push(h * h / (phi * phi) * (hx * hx + gt * gt) + self.hardy_coefficient * h * h / (rho * rho));
        Ok(out)
    }

    /// Central-difference divergence in all N+1 variables, Richardson
    /// extrapolated over steps `step` and `step/2`.
    pub fn divergence_free_check(&self, point: &[f64], step: f64) -> Result<DivergenceCheck> {
        let coarse = self.divergence_at_step(point, step)?;
        let fine = self.divergence_at_step(point, 0.5 * step)?;
        let divergence = (4.0 * fine - coarse) / 3.0;
        let n = self.solution.params().n;
        let rho = self.solution.product().polar(&point[..n - 1], point[n - 1])?;
        let field_scale = euclidean_len(&self.eval(point)?) / rho;
        Ok(DivergenceCheck {
            divergence,
            field_scale,
            pass: divergence.abs() <= DIVERGENCE_TOL * field_scale,
        })
    }

    fn divergence_at_step(&self, point: &[f64], step: f64) -> Result<f64> {
        let mut probe = point.to_vec();
        let mut total = 0.0;
        for i in 0..point.len() {
            probe[i] = point[i] + step;
            let fp = self.eval(&probe)?[i];
            probe[i] = point[i] - step;
            let fm = self.eval(&probe)?[i];
            probe[i] = point[i];
            total += (fp - fm) / (2.0 * step);
        }
        Ok(total)
    }

    /// The divergence predicted by the PDE residual, (2h/φ)(Δ_Φ φ + c φ/ρ²)
    /// with Δ_Φ φ replaced by −(β−2)²/4 φ/ρ² (exact for the extremal).
    pub fn predicted_divergence(&self, point: &[f64]) -> Result<f64> {
        let n = self.solution.params().n;
        let (x, t, h) = (&point[..n - 1], point[n - 1], point[n]);
        let rho = self.solution.product().polar(x, t)?;
        let mismatch = self.hardy_coefficient - self.solution.params().hardy_coefficient();
        Ok(2.0 * h * mismatch / (rho * rho))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCheck {
    pub divergence: f64,
    /// |F|/ρ, the natural size of first derivatives of F.
    pub field_scale: f64,
    pub pass: bool,
}

/// θ = α boundary point of the cone at radius ρ in direction e.
pub fn cone_boundary_point(p: &ProductNorm, direction: &[f64], rho: f64, alpha: f64) -> Result<(Vec<f64>, f64)> {
    let h0e = p.base().dual(direction)?;
    if h0e == 0.0 || !(alpha.abs() < FRAC_PI_2) {
        return Err(Error::OriginSingularity);
    }
    let (s, c) = alpha.sin_cos();
    Ok((direction.iter().map(|e| rho * c * e / h0e).collect(), rho * s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(beta: f64, dim: usize) -> ExtremalSolution {
        ExtremalSolution::halfspace(FinslerNorm::euclidean(dim).unwrap(), beta).unwrap()
    }

    #[test]
    fn polar_coordinate_conventions() {
        let p = ProductNorm::new(FinslerNorm::euclidean(3).unwrap());
        let (r, th) = polar_coordinates(&p, &[1.0, 0.0, 0.0], 1.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15 && (th - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(polar_coordinates(&p, &[0.0, 0.0, 2.0], 0.0).unwrap(), (2.0, 0.0));
        assert_eq!(polar_coordinates(&p, &[0.0; 3], 1.0).unwrap(), (1.0, FRAC_PI_2));
        assert_eq!(polar_coordinates(&p, &[0.0; 3], 0.0), Err(Error::OriginSingularity));
    }

    #[test]
    fn boundary_trace_and_homogeneity() {
        let s = euclid(2.5, 3);
        let x = [0.3, -0.4, 1.2];
        let h0 = euclidean_len(&x);
        assert!((s.eval(&x, 0.0).unwrap() - h0.powf(-1.0)).abs() < 1e-15);
        let v = s.eval(&x, 0.7).unwrap();
        let x2: Vec<f64> = x.iter().map(|c| 2.0 * c).collect();
        assert!((s.eval(&x2, 1.4).unwrap() - 0.5 * v).abs() < 1e-14);
        assert!((s.eval_direct(&x, 0.7).unwrap() / v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_derivative_matches_constant() {
        let s = euclid(2.0, 3);
        let c = s.normal_derivative_check(&[1.0, 0.0, 0.0]).unwrap();
        assert!(c.passes(), "{c:?}");
        assert!((c.expected + 2.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn pde_residual_small_for_euclidean() {
        let s = euclid(2.0, 3);
        let x = [1.0, 0.0, 0.0];
        let r = s.pde_residual(&x, 1.0, 1e-3).unwrap();
        assert!(r.abs() <= PDE_TOL * s.pde_scale(&x, 1.0).unwrap(), "{r}");
    }

    #[test]
    fn flux_vanishes_on_h_zero() {
        let f = FluxField::new(euclid(3.0, 3));
        let v = f.eval(&[0.5, 0.2, -0.1, 0.8, 0.0]).unwrap();
        assert!(v.iter().all(|c| *c == 0.0));
    }
}
