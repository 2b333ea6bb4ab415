//! Quadrature verification of the trace-Hardy inequality
//!
//! ```text
//! K ∫_{∂D} u²/H⁰(x) dx ≤ ∫_D Φ²(∇u) dz − (β−2)²/4 ∫_D u²/Φ⁰(z)² dz
//! ```
//!
//! on the half-space D = {t > 0} and on cones D = {t > tanα H⁰(x)}, and the
//! Rayleigh quotients that approach the sharp constant.
//!
//! Integrals use the coordinates x = ρcosθ e/H⁰(e), t = ρsinθ with e on
//! the Euclidean unit sphere, in which
//! dz = ρ^{N−1} cos^{N−2}θ H⁰(e)^{1−N} dρ dθ dσ(e).

mod functions;
mod quadrature;

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use functions::{Bump, CustomFunction, Cutoff, CutoffExtremal, Family, GaussianProduct, Point, TestFunction};
pub use quadrature::{
    gauss_legendre, pairwise_sum, radial_rule, sphere_rule, QuadratureSpec, ABS_TOL, DEFAULT_REL_TOL,
    MIN_RESOLUTION,
};

use crate::constants::{cone_constant_continued, sharp_constant_halfspace, ExtremalProfile, ProblemParams};
use crate::error::{Error, Result};
use crate::finsler::{FinslerNorm, ProductNorm};

/// Below this boundary integral the Rayleigh quotient is undefined.
pub const MIN_BOUNDARY_INTEGRAL: f64 = 1e-14;

/// An integral value with the change under one coarsening step as its
/// error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

/// The three integrals of the inequality over one domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integrals {
    /// ∫ Φ²(∇u)
    pub energy: Integral,
    /// ∫ u²/Φ⁰², without the (β−2)²/4 factor
    pub inverse_square: Integral,
    /// ∫ u²/H⁰ over the boundary
    pub boundary: Integral,
}

#[derive(Debug, Clone, Copy)]
struct Raw {
    energy: f64,
    inverse_square: f64,
    boundary: f64,
}

struct Direction {
    omega: Vec<f64>,
    dual_grad: Vec<f64>,
    weight: f64,
}

fn directions(base: &FinslerNorm, n_sphere: usize) -> Result<Vec<Direction>> {
    let d = base.dim();
    sphere_rule(d, n_sphere)
        .into_iter()
        .map(|(e, w)| {
            let h0 = base.dual(&e)?;
            Ok(Direction {
                omega: e.iter().map(|v| v / h0).collect(),
                dual_grad: base.dual_gradient(&e)?,
                weight: w * h0.powi(-(d as i32)),
            })
        })
        .collect()
}

fn point(dir: &Direction, rho: f64, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point {
        x: dir.omega.iter().map(|v| rho * c * v).collect(),
        t: rho * s,
        rho,
        theta,
        dual_grad: dir.dual_grad.clone(),
    }
}

fn raw_integrals(u: &dyn TestFunction, p: &ProductNorm, theta0: f64, q: &QuadratureSpec) -> Result<Raw> {
    let base = p.base();
    let n = p.dim() as i32;
    let d = base.dim() as i32;
    let dirs = directions(base, q.n_sphere)?;
    let radial = radial_rule(q.r_in, q.r_out, &u.breakpoints(), u.support(), q.n_radial);
    let angular = gauss_legendre(q.n_angular, theta0, FRAC_PI_2);

    let volume: Vec<(f64, f64)> = radial
        .par_iter()
        .map(|&(rho, wr)| -> Result<(f64, f64)> {
            let mut energy = Vec::with_capacity(angular.len() * dirs.len());
            let mut inv_sq = Vec::with_capacity(angular.len() * dirs.len());
            for &(theta, wt) in &angular {
                let jac = wr * wt * rho.powi(n - 1) * theta.cos().powi(n - 2);
                for dir in &dirs {
                    let pt = point(dir, rho, theta);
                    let w = jac * dir.weight;
                    let (val, gx, gt) = u.value_and_gradient(&pt)?;
                    let hx = base.eval(&gx);
                    energy.push(w * (hx * hx + gt * gt));
                    inv_sq.push(w * val * val / (rho * rho));
                }
            }
            Ok((pairwise_sum(&energy), pairwise_sum(&inv_sq)))
        })
        .collect::<Result<_>>()?;

    let (s0, c0) = theta0.sin_cos();
    let boundary: Vec<f64> = radial
        .par_iter()
        .map(|&(rho, wr)| -> Result<f64> {
            let r = rho * c0;
            let jac = wr * r.powi(d - 2) * c0;
            let vals = dirs
                .iter()
                .map(|dir| {
                    let pt = Point {
                        x: dir.omega.iter().map(|v| r * v).collect(),
                        t: rho * s0,
                        rho,
                        theta: theta0,
                        dual_grad: dir.dual_grad.clone(),
                    };
                    let val = u.value(&pt)?;
                    Ok(jac * dir.weight * val * val)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(pairwise_sum(&vals))
        })
        .collect::<Result<_>>()?;

    let energy: Vec<f64> = volume.iter().map(|v| v.0).collect();
    let inverse_square: Vec<f64> = volume.iter().map(|v| v.1).collect();
    Ok(Raw {
        energy: pairwise_sum(&energy),
        inverse_square: pairwise_sum(&inverse_square),
        boundary: pairwise_sum(&boundary),
    })
}

fn converged(fine: f64, coarse: f64, q: &QuadratureSpec) -> Result<Integral> {
    let change = (fine - coarse).abs();
    let target = q.rel_tol * fine.abs() + ABS_TOL;
    if !(change <= 10.0 * target) {
        return Err(Error::QuadratureNotConverged { change, target });
    }
    Ok(Integral {
        value: fine,
        error_estimate: change,
    })
}

/// Energy, inverse-square and boundary integrals over the cone θ > α
/// (α = 0 is the half-space), each with a refinement error estimate.
pub fn domain_integrals(u: &dyn TestFunction, p: &ProductNorm, alpha: f64, q: &QuadratureSpec) -> Result<Integrals> {
    q.validate()?;
    if !(alpha.abs() < FRAC_PI_2) {
        return Err(Error::ParamOutOfRange(format!("alpha must satisfy |alpha| < pi/2, got {alpha}")));
    }
    let fine = raw_integrals(u, p, alpha, q)?;
    let coarse = raw_integrals(u, p, alpha, &q.coarsened())?;
    Ok(Integrals {
        energy: converged(fine.energy, coarse.energy, q)?,
        inverse_square: converged(fine.inverse_square, coarse.inverse_square, q)?,
        boundary: converged(fine.boundary, coarse.boundary, q)?,
    })
}

/// ∫ Φ²(∇u) over the truncated half-space r_in < Φ⁰ < r_out.
pub fn energy_integral(u: &dyn TestFunction, p: &ProductNorm, q: &QuadratureSpec) -> Result<Integral> {
    Ok(domain_integrals(u, p, 0.0, q)?.energy)
}

/// (β−2)²/4 ∫ u²/Φ⁰² over the truncated half-space.
pub fn hardy_integral(u: &dyn TestFunction, p: &ProductNorm, beta: f64, q: &QuadratureSpec) -> Result<Integral> {
    let c = 0.25 * (beta - 2.0).powi(2);
    if c == 0.0 {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let i = domain_integrals(u, p, 0.0, q)?.inverse_square;
    Ok(Integral {
        value: c * i.value,
        error_estimate: c * i.error_estimate,
    })
}

/// ∫ u²(x,0)/H⁰(x) dx over the boundary annulus r_in < H⁰ < r_out.
pub fn boundary_integral(u: &dyn TestFunction, h: &FinslerNorm, q: &QuadratureSpec) -> Result<Integral> {
    Ok(domain_integrals(u, &ProductNorm::new(h.clone()), 0.0, q)?.boundary)
}

/// The terms of the inequality for one test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    #[serde(flatten)]
    pub params: ProblemParams,
    pub family: String,
    pub r_in: f64,
    pub r_out: f64,
    /// the constant multiplying the boundary integral
    pub constant: f64,
    /// constant · ∫ u²/H⁰ over the boundary
    pub lhs_boundary: f64,
    /// ∫ Φ²(∇u)
    pub rhs_energy: f64,
    /// (β−2)²/4 ∫ u²/Φ⁰²
    pub hardy_term: f64,
    /// rhs_energy − hardy_term − lhs_boundary
    pub slack: f64,
    pub error_estimate: f64,
}

impl InequalityReport {
    fn assemble(params: ProblemParams, constant: f64, u: &dyn TestFunction, q: &QuadratureSpec, i: &Integrals) -> Self {
        let c = params.hardy_coefficient();
        let lhs_boundary = constant * i.boundary.value;
        let rhs_energy = i.energy.value;
        let hardy_term = c * i.inverse_square.value;
        Self {
            params,
            family: u.family().label().to_string(),
            r_in: q.r_in,
            r_out: q.r_out,
            constant,
            lhs_boundary,
            rhs_energy,
            hardy_term,
            slack: rhs_energy - hardy_term - lhs_boundary,
            error_estimate: i.energy.error_estimate
                + c * i.inverse_square.error_estimate
                + constant.abs() * i.boundary.error_estimate,
        }
    }

    /// slack ≥ −error_estimate.
    pub fn holds(&self) -> bool {
        self.slack >= -self.error_estimate
    }

    /// (energy − hardy)/boundary integral, i.e. the Rayleigh quotient.
    pub fn quotient(&self) -> f64 {
        (self.rhs_energy - self.hardy_term) * self.constant / self.lhs_boundary
    }
}

fn check_dims(p: &ProductNorm, n: usize) -> Result<()> {
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.dim(),
        });
    }
    Ok(())
}

/// Evaluates both sides of the half-space inequality with constant K(N,β).
pub fn check_inequality_halfspace(
    u: &dyn TestFunction,
    p: &ProductNorm,
    n: usize,
    beta: f64,
    q: &QuadratureSpec,
) -> Result<InequalityReport> {
    check_inequality_cone(u, p, n, beta, 0.0, q)
}

/// Evaluates both sides of the cone inequality on {t > tanα H⁰(x)}.
///
/// The constant is −f'(α)/f(α), which coincides with K(N,α,β) for α ≥ 0
/// and is its continuous extension for α < 0 (the literal formula changes
/// sign there).
pub fn check_inequality_cone(
    u: &dyn TestFunction,
    p: &ProductNorm,
    n: usize,
    beta: f64,
    alpha: f64,
    q: &QuadratureSpec,
) -> Result<InequalityReport> {
    let params = ProblemParams::new(n, beta, alpha)?;
    let constant = cone_constant(&params)?;
    check_inequality_with_constant(u, p, params, constant, q)
}

/// The inequality with an arbitrary boundary constant in place of the
/// sharp one; a constant above the sharp value must eventually fail.
pub fn check_inequality_with_constant(
    u: &dyn TestFunction,
    p: &ProductNorm,
    params: ProblemParams,
    constant: f64,
    q: &QuadratureSpec,
) -> Result<InequalityReport> {
    check_dims(p, params.n)?;
    let i = domain_integrals(u, p, params.alpha, q)?;
    Ok(InequalityReport::assemble(params, constant, u, q, &i))
}

/// The constant the cone check uses: K(N,β) at α = 0, else −f'(α)/f(α).
pub fn cone_constant(params: &ProblemParams) -> Result<f64> {
    if params.alpha == 0.0 {
        sharp_constant_halfspace(params.n, params.beta)
    } else {
        cone_constant_continued(params.n, params.beta, params.alpha)
    }
}

/// [∫Φ²(∇u) − (β−2)²/4 ∫u²/Φ⁰²] / ∫ u²/H⁰ on the half-space.
pub fn rayleigh_quotient(u: &dyn TestFunction, p: &ProductNorm, n: usize, beta: f64, q: &QuadratureSpec) -> Result<f64> {
    rayleigh_quotient_cone(u, p, n, beta, 0.0, q)
}

/// The Rayleigh quotient on the cone {t > tanα H⁰(x)}.
pub fn rayleigh_quotient_cone(
    u: &dyn TestFunction,
    p: &ProductNorm,
    n: usize,
    beta: f64,
    alpha: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    let params = ProblemParams::new(n, beta, alpha)?;
    check_dims(p, n)?;
    let i = domain_integrals(u, p, alpha, q)?;
    if i.boundary.value < MIN_BOUNDARY_INTEGRAL {
        return Err(Error::ZeroBoundaryTrace(i.boundary.value));
    }
    Ok((i.energy.value - params.hardy_coefficient() * i.inverse_square.value) / i.boundary.value)
}

/// ∫_α^{π/2} f(θ)² cos^{N−2}θ dθ for a profile normalised to f(α) = 1.
pub fn angular_energy(profile: &ExtremalProfile, alpha: f64) -> Result<f64> {
    let n = profile.params.n as i32;
    let f_alpha = profile.profile(alpha)?;
    let mut total = 0.0;
    for (theta, w) in gauss_legendre(64, alpha, FRAC_PI_2) {
        let f = profile.profile(theta)? / f_alpha;
        total += w * f * f * theta.cos().powi(n - 2);
    }
    Ok(total)
}

/// ∫η_s² ds / ∫η² ds in s = ln ρ for the cutoff of `u`.
pub fn cutoff_excess_factor(u: &CutoffExtremal) -> f64 {
    let len = (u.big_r / u.r).ln();
    match u.cutoff {
        Cutoff::LogSine => (std::f64::consts::PI / len).powi(2),
        Cutoff::DyadicRamp => {
            let ln2 = std::f64::consts::LN_2;
            (2.0 / ln2) / (len - 4.0 / 3.0 * ln2)
        }
    }
}

/// Exact Rayleigh quotient of a cutoff extremal on the untruncated domain:
/// K + S cos^{2−N}α ∫η_s²/∫η², with S from [`angular_energy`]. The
/// cross terms cancel because the extremal solves the Euler–Lagrange
/// equation with the boundary flux K.
pub fn predicted_cutoff_quotient(u: &CutoffExtremal) -> Result<f64> {
    let params = *u.solution.params();
    let constant = cone_constant(&params)?;
    let s = angular_energy(u.solution.profile(), params.alpha)?;
    let boundary_weight = params.alpha.cos().powi(params.n as i32 - 2);
    Ok(constant + s / boundary_weight * cutoff_excess_factor(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(n: usize) -> ProductNorm {
        ProductNorm::new(FinslerNorm::euclidean(n - 1).unwrap())
    }

    #[test]
    fn zero_function_gives_zero_report() {
        let zero = CustomFunction::new(Some((1.0, 2.0)), |_, _| 0.0);
        let q = QuadratureSpec::new(0.5, 3.0, (8, 8, 8)).unwrap();
        let r = check_inequality_halfspace(&zero, &euclid(3), 3, 2.5, &q).unwrap();
        assert_eq!((r.lhs_boundary, r.rhs_energy, r.hardy_term, r.slack), (0.0, 0.0, 0.0, 0.0));
        assert!(matches!(
            rayleigh_quotient(&zero, &euclid(3), 3, 2.5, &q),
            Err(Error::ZeroBoundaryTrace(_))
        ));
    }

    #[test]
    fn bump_satisfies_inequality() {
        let u = Bump::new(1.0, 2.0).unwrap();
        let q = QuadratureSpec::new(0.5, 3.0, (16, 12, 8)).unwrap();
        let r = check_inequality_halfspace(&u, &euclid(4), 4, 2.0, &q).unwrap();
        assert!(r.slack > 0.0 && r.holds(), "{r:?}");
        assert_eq!(r.hardy_term, 0.0);
    }

    #[test]
    fn log_sine_cutoff_matches_prediction() {
        let sol = crate::extremal::ExtremalSolution::halfspace(FinslerNorm::euclidean(3).unwrap(), 2.0).unwrap();
        let u = CutoffExtremal::new(sol, 1e-2, 1e2).unwrap();
        let q = QuadratureSpec::new(1e-2, 1e2, (16, 12, 6)).unwrap();
        let quotient = rayleigh_quotient(&u, &euclid(4), 4, 2.0, &q).unwrap();
        let predicted = predicted_cutoff_quotient(&u).unwrap();
        assert!((quotient / predicted - 1.0).abs() < 1e-6, "{quotient} vs {predicted}");
    }
}
