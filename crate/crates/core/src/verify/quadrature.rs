use std::f64::consts::{FRAC_PI_2, PI};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation radii (in ρ = Φ⁰) and tensor-grid resolutions.
///
/// `n_radial` Gauss–Legendre nodes per radial panel (in log ρ), `n_angular`
/// nodes in θ, and `n_sphere` controls the rule on the unit sphere of the
/// boundary directions (about n_sphere nodes per angle, see [`sphere_rule`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub r_in: f64,
    pub r_out: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub n_sphere: usize,
    /// Relative error target; a refinement change above 10× the target fails.
    pub rel_tol: f64,
}

pub const MIN_RESOLUTION: usize = 4;
pub const DEFAULT_REL_TOL: f64 = 1e-3;
/// Absolute floor of the error target, so that vanishing integrals pass.
pub const ABS_TOL: f64 = 1e-12;

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            r_in: 1e-3,
            r_out: 1e3,
            n_radial: 64,
            n_angular: 32,
            n_sphere: 32,
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

impl QuadratureSpec {
    pub fn new(r_in: f64, r_out: f64, resolution: (usize, usize, usize)) -> Result<Self> {
        let spec = Self {
            r_in,
            r_out,
            n_radial: resolution.0,
            n_angular: resolution.1,
            n_sphere: resolution.2,
            rel_tol: DEFAULT_REL_TOL,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_in > 0.0 && self.r_in < self.r_out && self.r_out.is_finite()) {
            return Err(Error::ParamOutOfRange(format!(
                "radii must satisfy 0 < r_in < r_out < inf, got ({}, {})",
                self.r_in, self.r_out
            )));
        }
        let res = [self.n_radial, self.n_angular, self.n_sphere];
        if res.iter().any(|&n| n < MIN_RESOLUTION) {
            return Err(Error::ParamOutOfRange(format!(
                "resolutions must be at least {MIN_RESOLUTION}, got {res:?}"
            )));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::ParamOutOfRange(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        Ok(())
    }

    /// The same spec with every resolution halved (at least 2).
    pub fn coarsened(&self) -> Self {
        Self {
            n_radial: (self.n_radial / 2).max(2),
            n_angular: (self.n_angular / 2).max(2),
            n_sphere: (self.n_sphere / 2).max(2),
            ..*self
        }
    }

    /// The same spec with every resolution doubled.
    pub fn refined(&self) -> Self {
        Self {
            n_radial: 2 * self.n_radial,
            n_angular: 2 * self.n_angular,
            n_sphere: 2 * self.n_sphere,
            ..*self
        }
    }
}

/// (node, weight) pairs of the n-point Gauss–Legendre rule on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n).expect("rule size must be positive");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GaussLegendre::new(n)
        .into_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Nodes e and weights on the Euclidean unit sphere S^{d−1} ⊂ ℝᵈ.
///
/// d = 1 is the two-point set {±1}. d = 2 splits the circle into its four
/// quadrants with ⌈n/2⌉ Gauss–Legendre nodes each; higher d adds one polar
/// angle φ at a time, with ⌈n/2⌉ Gauss–Legendre nodes on each of [0, π/2]
/// and [π/2, π] and the sin^{d−2}φ factor folded into the weights. Panel
/// edges lie on the coordinate hyperplanes, where p-norms and their duals
/// lose smoothness.
pub fn sphere_rule(d: usize, n: usize) -> Vec<(Vec<f64>, f64)> {
    let m = n.div_ceil(2).max(1);
    match d {
        0 => vec![(vec![], 1.0)],
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => (0..4)
            .flat_map(|k| gauss_legendre(m, k as f64 * FRAC_PI_2, (k + 1) as f64 * FRAC_PI_2))
            .map(|(phi, w)| (vec![phi.cos(), phi.sin()], w))
            .collect(),
        _ => {
            let lower = sphere_rule(d - 1, n);
            let polar = [gauss_legendre(m, 0.0, FRAC_PI_2), gauss_legendre(m, FRAC_PI_2, PI)].concat();
            let mut out = Vec::with_capacity(polar.len() * lower.len());
            for (phi, wphi) in polar {
                let (s, c) = phi.sin_cos();
                let w = wphi * s.powi(d as i32 - 2);
                for (e, we) in &lower {
                    let mut v = Vec::with_capacity(d);
                    v.push(c);
                    v.extend(e.iter().map(|x| s * x));
                    out.push((v, w * we));
                }
            }
            out
        }
    }
}

/// Log-radial panels: Gauss–Legendre in s = ln ρ on each interval between
/// consecutive breakpoints. Returns (ρ, weight of dρ) pairs.
pub fn radial_rule(r_in: f64, r_out: f64, breakpoints: &[f64], support: Option<(f64, f64)>, n: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = match support {
        Some((a, b)) => (r_in.max(a), r_out.min(b)),
        None => (r_in, r_out),
    };
    if !(lo < hi) {
        return Vec::new();
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > lo && b < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity(n * (cuts.len() - 1));
    for pair in cuts.windows(2) {
        for (s, w) in gauss_legendre(n, pair[0].ln(), pair[1].ln()) {
            let rho = s.exp();
            out.push((rho, w * rho));
        }
    }
    out
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, never on how they were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
