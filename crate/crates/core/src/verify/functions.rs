use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{polar_coordinates, ExtremalSolution};
use crate::finsler::{dot, ProductNorm};

/// A point of the half-space together with its polar data.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: Vec<f64>,
    pub t: f64,
    /// Φ⁰(x, t)
    pub rho: f64,
    /// atan2(t, H⁰(x))
    pub theta: f64,
    /// ∇H⁰(x)
    pub dual_grad: Vec<f64>,
}

impl Point {
    pub fn new(p: &ProductNorm, x: &[f64], t: f64) -> Result<Self> {
        let (rho, theta) = polar_coordinates(p, x, t)?;
        Ok(Self {
            x: x.to_vec(),
            t,
            rho,
            theta,
            dual_grad: p.base().dual_gradient(x)?,
        })
    }

    /// ∇ρ = (cosθ ∇H⁰(x), sinθ).
    pub fn rho_gradient(&self) -> (Vec<f64>, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.dual_grad.iter().map(|g| c * g).collect(), s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    Bump,
    CutoffExtremal,
    GaussianProduct,
    Custom,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Bump => "bump",
            Family::CutoffExtremal => "cutoff_extremal",
            Family::GaussianProduct => "gaussian",
            Family::Custom => "custom",
        }
    }
}

/// A function u(x, t) to be tested against the inequality.
pub trait TestFunction: Send + Sync {
    fn family(&self) -> Family;

    fn value(&self, pt: &Point) -> Result<f64>;

    /// (∇ₓu, u_t).
    fn gradient(&self, pt: &Point) -> Result<(Vec<f64>, f64)>;

    /// (u, ∇ₓu, u_t) in one call, for functions that share work between them.
    fn value_and_gradient(&self, pt: &Point) -> Result<(f64, Vec<f64>, f64)> {
        let (gx, gt) = self.gradient(pt)?;
        Ok((self.value(pt)?, gx, gt))
    }

    /// Annulus r < ρ < R outside of which u vanishes, if any.
    fn support(&self) -> Option<(f64, f64)>;

    /// Radii where u or its derivatives are not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        self.support().map(|(a, b)| vec![a, b]).unwrap_or_default()
    }
}

/// u = A sin⁴(π(ρ−r₁)/(r₂−r₁)) (1 + (⟨c,x⟩ + d t)/ρ) on r₁ < ρ < r₂.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub r1: f64,
    pub r2: f64,
    pub amplitude: f64,
    pub tilt_x: Vec<f64>,
    pub tilt_t: f64,
}

impl Bump {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
            return Err(Error::ParamOutOfRange(format!("bump needs 0 < r1 < r2, got ({r1}, {r2})")));
        }
        Ok(Self {
            r1,
            r2,
            amplitude: 1.0,
            tilt_x: Vec::new(),
            tilt_t: 0.0,
        })
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_tilt(mut self, tilt_x: Vec<f64>, tilt_t: f64) -> Self {
        self.tilt_x = tilt_x;
        self.tilt_t = tilt_t;
        self
    }

    fn profile(&self, rho: f64) -> (f64, f64) {
        if rho <= self.r1 || rho >= self.r2 {
            return (0.0, 0.0);
        }
        let scale = PI / (self.r2 - self.r1);
        let (s, c) = (scale * (rho - self.r1)).sin_cos();
        let s3 = s * s * s;
        (self.amplitude * s3 * s, self.amplitude * 4.0 * s3 * c * scale)
    }

    fn tilt_numerator(&self, pt: &Point) -> f64 {
        let cx = if self.tilt_x.is_empty() { 0.0 } else { dot(&self.tilt_x, &pt.x) };
        cx + self.tilt_t * pt.t
    }
}

impl TestFunction for Bump {
    fn family(&self) -> Family {
        Family::Bump
    }

    fn value(&self, pt: &Point) -> Result<f64> {
        let (b, _) = self.profile(pt.rho);
        Ok(b * (1.0 + self.tilt_numerator(pt) / pt.rho))
    }

    fn gradient(&self, pt: &Point) -> Result<(Vec<f64>, f64)> {
        let (b, db) = self.profile(pt.rho);
        let num = self.tilt_numerator(pt);
        let g = 1.0 + num / pt.rho;
        let (rx, rt) = pt.rho_gradient();
        let r2 = pt.rho * pt.rho;
        let gx: Vec<f64> = (0..pt.x.len())
            .map(|i| {
                let c = self.tilt_x.get(i).copied().unwrap_or(0.0);
                db * g * rx[i] + b * (c / pt.rho - num / r2 * rx[i])
            })
            .collect();
        let gt = db * g * rt + b * (self.tilt_t / pt.rho - num / r2 * rt);
        Ok((gx, gt))
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.r1, self.r2))
    }
}

/// Radial cutoff profiles η(ρ) for truncating the extremal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutoff {
    /// η = sin(π ln(ρ/r)/ln(R/r)) on r < ρ < R.
    LogSine,
    /// η = clamp(log₂(ρ/r)) · clamp(log₂(R/ρ)), ramps over one dyadic band
    /// at each end.
    DyadicRamp,
}

/// u = η(ρ) φ(x, t) for the extremal φ of a half-space or cone.
#[derive(Debug, Clone)]
pub struct CutoffExtremal {
    pub solution: ExtremalSolution,
    pub r: f64,
    pub big_r: f64,
    pub cutoff: Cutoff,
}

impl CutoffExtremal {
    pub fn new(solution: ExtremalSolution, r: f64, big_r: f64) -> Result<Self> {
        Self::with_cutoff(solution, r, big_r, Cutoff::LogSine)
    }

    pub fn with_cutoff(solution: ExtremalSolution, r: f64, big_r: f64, cutoff: Cutoff) -> Result<Self> {
        let min_ratio = match cutoff {
            Cutoff::LogSine => 1.0,
            Cutoff::DyadicRamp => 4.0,
        };
        if !(r > 0.0 && big_r > min_ratio * r && big_r.is_finite()) {
            return Err(Error::ParamOutOfRange(format!(
                "cutoff needs 0 < r and R > {min_ratio}r, got r = {r}, R = {big_r}"
            )));
        }
        Ok(Self {
            solution,
            r,
            big_r,
            cutoff,
        })
    }

    /// (η, dη/dρ).
    pub fn eta(&self, rho: f64) -> (f64, f64) {
        if rho <= self.r || rho >= self.big_r {
            return (0.0, 0.0);
        }
        match self.cutoff {
            Cutoff::LogSine => {
                let len = (self.big_r / self.r).ln();
                let arg = PI * (rho / self.r).ln() / len;
                (arg.sin(), arg.cos() * PI / (len * rho))
            }
            Cutoff::DyadicRamp => {
                let ln2 = std::f64::consts::LN_2;
                let up = (rho / self.r).ln() / ln2;
                let down = (self.big_r / rho).ln() / ln2;
                let (a, da) = if up < 1.0 { (up, 1.0 / (ln2 * rho)) } else { (1.0, 0.0) };
                let (b, db) = if down < 1.0 { (down, -1.0 / (ln2 * rho)) } else { (1.0, 0.0) };
                (a * b, da * b + a * db)
            }
        }
    }
}

impl TestFunction for CutoffExtremal {
    fn family(&self) -> Family {
        Family::CutoffExtremal
    }

    fn value(&self, pt: &Point) -> Result<f64> {
        let (eta, _) = self.eta(pt.rho);
        if eta == 0.0 {
            return Ok(0.0);
        }
        Ok(eta * self.solution.jet(pt.rho, pt.theta, &pt.dual_grad)?.0)
    }

    fn gradient(&self, pt: &Point) -> Result<(Vec<f64>, f64)> {
        let (_, gx, gt) = self.value_and_gradient(pt)?;
        Ok((gx, gt))
    }

    fn value_and_gradient(&self, pt: &Point) -> Result<(f64, Vec<f64>, f64)> {
        let (eta, deta) = self.eta(pt.rho);
        if eta == 0.0 && deta == 0.0 {
            return Ok((0.0, vec![0.0; pt.x.len()], 0.0));
        }
        let (phi, gx, gt) = self.solution.jet(pt.rho, pt.theta, &pt.dual_grad)?;
        let (rx, rt) = pt.rho_gradient();
        let gx = gx.iter().zip(&rx).map(|(g, r)| eta * g + deta * phi * r).collect();
        Ok((eta * phi, gx, eta * gt + deta * phi * rt))
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.r, self.big_r))
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self.cutoff {
            Cutoff::LogSine => vec![self.r, self.big_r],
            Cutoff::DyadicRamp => vec![self.r, 2.0 * self.r, 0.5 * self.big_r, self.big_r],
        }
    }
}

/// u = exp(−ρ²); for the Euclidean norm this is exp(−|x|² − t²).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaussianProduct;

impl TestFunction for GaussianProduct {
    fn family(&self) -> Family {
        Family::GaussianProduct
    }

    fn value(&self, pt: &Point) -> Result<f64> {
        Ok((-pt.rho * pt.rho).exp())
    }

    fn gradient(&self, pt: &Point) -> Result<(Vec<f64>, f64)> {
        let d = -2.0 * pt.rho * (-pt.rho * pt.rho).exp();
        let (rx, rt) = pt.rho_gradient();
        Ok((rx.into_iter().map(|r| d * r).collect(), d * rt))
    }

    fn support(&self) -> Option<(f64, f64)> {
        None
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0]
    }
}

type ScalarFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// A function given only by values; the gradient uses central differences
/// with step 1e−6·ρ.
#[derive(Clone)]
pub struct CustomFunction {
    eval: ScalarFn,
    support: Option<(f64, f64)>,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for CustomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFunction")
            .field("support", &self.support)
            .finish()
    }
}

impl CustomFunction {
    pub fn new<F>(support: Option<(f64, f64)>, eval: F) -> Self
    where
        F: Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            support,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }
}

impl TestFunction for CustomFunction {
    fn family(&self) -> Family {
        Family::Custom
    }

    fn value(&self, pt: &Point) -> Result<f64> {
        Ok((self.eval)(&pt.x, pt.t))
    }

    fn gradient(&self, pt: &Point) -> Result<(Vec<f64>, f64)> {
        let h = 1e-6 * pt.rho;
        let mut probe = pt.x.clone();
        let gx = (0..probe.len())
            .map(|i| {
                probe[i] = pt.x[i] + h;
                let up = (self.eval)(&probe, pt.t);
                probe[i] = pt.x[i] - h;
                let um = (self.eval)(&probe, pt.t);
                probe[i] = pt.x[i];
                (up - um) / (2.0 * h)
            })
            .collect();
        let gt = ((self.eval)(&pt.x, pt.t + h) - (self.eval)(&pt.x, pt.t - h)) / (2.0 * h);
        Ok((gx, gt))
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.breakpoints.clone();
        if let Some((lo, hi)) = self.support {
            b.extend([lo, hi]);
        }
        b
    }
}
