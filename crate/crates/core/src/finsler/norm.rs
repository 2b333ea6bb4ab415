use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Number of random directions used to estimate γ₁, γ₂ of a custom norm.
const BOUND_SAMPLES: usize = 10_000;
const BOUND_MARGIN: f64 = 0.01;

/// Iteration cap of the dual-norm ascent for custom norms.
const DUAL_ASCENT_ITERS: usize = 2000;
/// Sufficient-increase fraction; small values let the ascent zig-zag across
/// the optimum.
const ARMIJO: f64 = 0.25;
/// Relative gap between the two best starts above which the dual optimizer
/// reports a stall.
const DUAL_STALL_SPREAD: f64 = 1e-6;

/// Relative step for central differences of custom norms.
const FD_REL_STEP: f64 = 1e-6;

type NormFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A user-supplied norm given only through its evaluation.
///
/// Gradients come from central differences and the polar norm from a
/// multi-start projected ascent on the unit sphere of the norm.
#[derive(Clone)]
pub struct CustomNorm {
    name: String,
    eval: NormFn,
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNorm").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum NormFamily {
    Euclidean,
    /// H(ξ) = sqrt(ξᵀ A ξ) for a symmetric positive definite A.
    WeightedQuadratic {
        matrix: DMatrix<f64>,
        inverse: DMatrix<f64>,
    },
    /// H(ξ) = ‖ξ‖_p with 1 < p < ∞.
    PNorm { p: f64 },
    Custom(CustomNorm),
}

/// A Finsler norm H on ℝⁿ together with its polar H⁰.
///
/// Values are immutable after construction and cheap to clone.
#[derive(Debug, Clone)]
pub struct FinslerNorm {
    dim: usize,
    family: NormFamily,
    gamma1: f64,
    gamma2: f64,
}

impl FinslerNorm {
    pub fn euclidean(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            family: NormFamily::Euclidean,
            gamma1: 1.0,
            gamma2: 1.0,
        })
    }

    pub fn p_norm(dim: usize, p: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidNorm(format!(
                "p-norm requires 1 < p < inf (crystalline norms are unsupported), got p = {p}"
            )));
        }
        // ‖ξ‖_p vs ‖ξ‖_2 in n dimensions
        let ratio = (dim as f64).powf(1.0 / p - 0.5);
        let (gamma1, gamma2) = if p >= 2.0 { (ratio, 1.0) } else { (1.0, ratio) };
        Ok(Self {
            dim,
            family: NormFamily::PNorm { p },
            gamma1,
            gamma2,
        })
    }

    pub fn weighted_quadratic(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        check_dim(dim)?;
        if matrix.ncols() != dim {
            return Err(Error::InvalidNorm(format!(
                "matrix must be square, got {}x{}",
                dim,
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-12 * matrix.amax() {
            return Err(Error::InvalidNorm("matrix is not symmetric".into()));
        }
        let chol = matrix
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidNorm("matrix is not positive definite".into()))?;
        let inverse = chol.inverse();
        let eig = matrix.clone().symmetric_eigen().eigenvalues;
        let gamma1 = eig.min().sqrt();
        let gamma2 = eig.max().sqrt();
        Ok(Self {
            dim,
            family: NormFamily::WeightedQuadratic { matrix, inverse },
            gamma1,
            gamma2,
        })
    }

    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        Self::weighted_quadratic(DMatrix::from_diagonal(&DVector::from_column_slice(weights)))
    }

    /// A norm defined by an arbitrary evaluation closure. γ₁, γ₂ are
    /// estimated from 10 000 sampled directions with a 1% safety margin.
    pub fn custom<F>(dim: usize, name: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        check_dim(dim)?;
        let eval: NormFn = Arc::new(eval);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
        let mut dir = vec![0.0; dim];
        for _ in 0..BOUND_SAMPLES {
            for d in dir.iter_mut() {
                *d = StandardNormal.sample(&mut rng);
            }
            let len = euclidean_len(&dir);
            dir.iter_mut().for_each(|d| *d /= len);
            let h = eval(&dir);
            lo = lo.min(h);
            hi = hi.max(h);
        }
        if !(lo > 0.0 && hi.is_finite()) {
            return Err(Error::InvalidNorm(format!(
                "custom norm must be positive and finite on the unit sphere (min {lo}, max {hi})"
            )));
        }
        Ok(Self::custom_with_bounds_inner(
            dim,
            name.into(),
            eval,
            lo * (1.0 - BOUND_MARGIN),
            hi * (1.0 + BOUND_MARGIN),
        ))
    }

    /// A custom norm with caller-supplied bounds γ₁|ξ| ≤ H(ξ) ≤ γ₂|ξ|.
    pub fn custom_with_bounds<F>(
        dim: usize,
        name: impl Into<String>,
        eval: F,
        gamma1: f64,
        gamma2: f64,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        check_dim(dim)?;
        if !(gamma1 > 0.0 && gamma1 <= gamma2 && gamma2.is_finite()) {
            return Err(Error::InvalidNorm(format!(
                "bounds must satisfy 0 < gamma1 <= gamma2 < inf, got ({gamma1}, {gamma2})"
            )));
        }
        Ok(Self::custom_with_bounds_inner(
            dim,
            name.into(),
            Arc::new(eval),
            gamma1,
            gamma2,
        ))
    }

    fn custom_with_bounds_inner(
        dim: usize,
        name: String,
        eval: NormFn,
        gamma1: f64,
        gamma2: f64,
    ) -> Self {
        Self {
            dim,
            family: NormFamily::Custom(CustomNorm { name, eval }),
            gamma1,
            gamma2,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    /// Short label, e.g. `euclidean`, `pnorm:3`, `quad:1,0,0,2`.
    pub fn label(&self) -> String {
        match &self.family {
            NormFamily::Euclidean => "euclidean".into(),
            NormFamily::PNorm { p } => format!("pnorm:{p}"),
            NormFamily::WeightedQuadratic { matrix, .. } => {
                let entries: Vec<String> =
                    matrix.transpose().iter().map(|v| format!("{v}")).collect();
                format!("quad:{}", entries.join(","))
            }
            NormFamily::Custom(c) => format!("custom:{}", c.name),
        }
    }

    /// H(ξ).
    pub fn eval(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dim);
        match &self.family {
            NormFamily::Euclidean => euclidean_len(xi),
            NormFamily::PNorm { p } => p_norm_value(xi, *p),
            NormFamily::WeightedQuadratic { matrix, .. } => quadratic_form(matrix, xi).sqrt(),
            NormFamily::Custom(c) => (c.eval)(xi),
        }
    }

    /// ∇H(ξ), defined for ξ ≠ 0.
    pub fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        self.check_len(xi)?;
        let len = euclidean_len(xi);
        if len < 1e-300 {
            return Err(Error::GradientTooSmall(len));
        }
        Ok(match &self.family {
            NormFamily::Euclidean => xi.iter().map(|v| v / len).collect(),
            NormFamily::PNorm { p } => p_norm_gradient(xi, *p),
            NormFamily::WeightedQuadratic { matrix, .. } => quadratic_gradient(matrix, xi),
            NormFamily::Custom(c) => central_gradient(&*c.eval, xi, FD_REL_STEP * len),
        })
    }

    /// H(ξ)∇H(ξ) = ∇(H²/2)(ξ), extended by zero at the origin.
    pub fn scaled_gradient(&self, xi: &[f64]) -> Vec<f64> {
        match &self.family {
            NormFamily::Euclidean => xi.to_vec(),
            NormFamily::WeightedQuadratic { matrix, .. } => mat_vec(matrix, xi),
            _ => match self.gradient(xi) {
                Ok(g) => {
                    let h = self.eval(xi);
                    g.into_iter().map(|v| h * v).collect()
                }
                Err(_) => vec![0.0; xi.len()],
            },
        }
    }

    /// Polar norm H⁰(x) = sup ⟨ξ, x⟩ / H(ξ).
    pub fn dual(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x)?;
        match &self.family {
            NormFamily::Euclidean => Ok(euclidean_len(x)),
            NormFamily::PNorm { p } => Ok(p_norm_value(x, conjugate_exponent(*p))),
            NormFamily::WeightedQuadratic { inverse, .. } => Ok(quadratic_form(inverse, x).sqrt()),
            NormFamily::Custom(c) => custom_dual(&*c.eval, x).map(|(v, _)| v),
        }
    }

    /// ∇H⁰(x), defined for x ≠ 0. For custom norms this is the maximiser of
    /// ⟨ξ, x⟩ over the unit sphere of H.
    pub fn dual_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let len = euclidean_len(x);
        if len < 1e-300 {
            return Err(Error::GradientTooSmall(len));
        }
        match &self.family {
            NormFamily::Euclidean => Ok(x.iter().map(|v| v / len).collect()),
            NormFamily::PNorm { p } => Ok(p_norm_gradient(x, conjugate_exponent(*p))),
            NormFamily::WeightedQuadratic { inverse, .. } => Ok(quadratic_gradient(inverse, x)),
            NormFamily::Custom(c) => custom_dual(&*c.eval, x).map(|(_, arg)| arg),
        }
    }
}

impl FinslerNorm {
    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidNorm("dimension must be positive".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn euclidean_len(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn conjugate_exponent(p: f64) -> f64 {
    p / (p - 1.0)
}

fn p_norm_value(v: &[f64], p: f64) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn p_norm_gradient(v: &[f64], p: f64) -> Vec<f64> {
    let h = p_norm_value(v, p);
    v.iter()
        .map(|x| x.signum() * (x.abs() / h).powf(p - 1.0))
        .collect()
}

fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn quadratic_form(m: &DMatrix<f64>, v: &[f64]) -> f64 {
    dot(v, &mat_vec(m, v)).max(0.0)
}

fn quadratic_gradient(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let mv = mat_vec(m, v);
    let h = dot(v, &mv).sqrt();
    mv.into_iter().map(|x| x / h).collect()
}

fn central_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let fp = f(&probe);
            probe[i] = x[i] - h;
            let fm = f(&probe);
            probe[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// sup ⟨ξ, x⟩ over {H(ξ) = 1} by projected gradient ascent with Armijo
/// backtracking from the coordinate directions and from x itself.
/// Returns the value and the maximiser.
fn custom_dual(h: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    let len = euclidean_len(x);
    if len == 0.0 {
        return Ok((0.0, vec![0.0; x.len()]));
    }
    let u: Vec<f64> = x.iter().map(|v| v / len).collect();
    let n = x.len();
    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = if u[i] < 0.0 { -1.0 } else { 1.0 };
            e
        })
        .collect();
    starts.push(u.clone());

    // Starts far from a flat or sharply curved maximiser can converge
    // sublinearly, so the optimum only needs confirming by a second start.
    let mut runs: Vec<(f64, Vec<f64>)> = starts.into_iter().map(|s| ascend(h, &u, s)).collect();
    runs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let spread = (runs[0].0 - runs[1].0) / runs[0].0.abs().max(f64::MIN_POSITIVE);
    if spread > DUAL_STALL_SPREAD {
        return Err(Error::OptimizerStall { spread });
    }
    let (value, arg) = runs.swap_remove(0);
    Ok((value * len, arg))
}

fn ascend(h: &dyn Fn(&[f64]) -> f64, u: &[f64], start: Vec<f64>) -> (f64, Vec<f64>) {
    let normalize = |v: Vec<f64>| {
        let s = h(&v);
        v.into_iter().map(|c| c / s).collect::<Vec<f64>>()
    };
    let mut xi = normalize(start);
    let mut value = dot(&xi, u);
    let mut step = 1.0;
    for _ in 0..DUAL_ASCENT_ITERS {
        let grad_h = central_gradient(h, &xi, FD_REL_STEP * euclidean_len(&xi));
        // tangential ascent direction of ⟨ξ, u⟩ / H(ξ) at H(ξ) = 1
        let dir: Vec<f64> = u.iter().zip(&grad_h).map(|(a, g)| a - value * g).collect();
        let dir_sq = dot(&dir, &dir);
        if dir_sq < 1e-26 {
            break;
        }
        let mut accepted = false;
        while step > 1e-16 {
            let cand = normalize(xi.iter().zip(&dir).map(|(a, d)| a + step * d).collect());
            let cand_value = dot(&cand, u);
            if cand_value >= value + ARMIJO * step * dir_sq {
                xi = cand;
                value = cand_value;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (value, xi)
}
