//! Real Gamma, log-Gamma, reciprocal Gamma and digamma.
//!
//! Gamma uses the Lanczos approximation with `g = 7` and nine coefficients,
//! extended to `x < 1/2` by the reflection formula. Relative accuracy is
//! around `1e-15` on moderate arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance to the nearest integer below which a nonpositive argument is a pole.
const POLE_TOL: f64 = 1e-14;

/// Largest argument for which Γ(x) is finite in f64.
const GAMMA_OVERFLOW: f64 = 171.624_376_956_302_7;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < POLE_TOL
}

/// `sin(πx)` with argument reduction so that large |x| keeps full accuracy.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    // r in [0, 2)
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn lanczos_sum(z: f64) -> f64 {
    // z = x - 1
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

fn gamma_positive(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    if x > GAMMA_OVERFLOW {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power to stay finite right up to the overflow threshold
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(z)
}

/// Γ(x) for real `x`.
///
/// Fails with [`Error::PoleAtNonpositiveInteger`] when `x` is within `1e-14`
/// of `0, -1, -2, ...`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::OutOfDomain {
            value: x,
            domain: "real numbers",
        });
    }
    if is_pole(x) {
        return Err(Error::PoleAtNonpositiveInteger(x));
    }
    Ok(gamma_unchecked(x))
}

/// Γ(x) without the pole check; returns ±inf at poles.
pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        let s = sin_pi(x);
        if s == 0.0 {
            return f64::INFINITY;
        }
        PI / (s * gamma_positive(1.0 - x))
    } else {
        gamma_positive(x)
    }
}

/// 1/Γ(x), an entire function: exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        sin_pi(x) * gamma_positive(1.0 - x) / PI
    } else if x > GAMMA_OVERFLOW {
        0.0
    } else {
        1.0 / gamma_positive(x)
    }
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::PoleAtNonpositiveInteger(x));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        (PI / sin_pi(x).abs()).ln() - ln_gamma_unchecked(1.0 - x)
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
    }
}

/// Γ(a)Γ(b) / (Γ(c)Γ(d)) for positive arguments, switching to logarithms
/// when the individual factors would overflow.
pub(crate) fn gamma_quotient(num: [f64; 2], den: [f64; 2]) -> f64 {
    let big = num.iter().chain(den.iter()).any(|&v| v > 60.0);
    if big {
        let ln = ln_gamma_unchecked(num[0]) + ln_gamma_unchecked(num[1])
            - ln_gamma_unchecked(den[0])
            - ln_gamma_unchecked(den[1]);
        let sign = [num[0], num[1], den[0], den[1]]
            .iter()
            .map(|&v| gamma_unchecked(v.min(1.5)).signum())
            .product::<f64>();
        sign * ln.exp()
    } else {
        gamma_unchecked(num[0]) * gamma_unchecked(num[1])
            * rgamma(den[0])
            * rgamma(den[1])
    }
}

/// Digamma ψ(x) = Γ'(x)/Γ(x). NaN at the poles.
pub fn digamma(x: f64) -> f64 {
    if is_pole(x) {
        return f64::NAN;
    }
    if x < 0.0 {
        // ψ(x) = ψ(1-x) - π cot(πx)
        let cot = sin_pi(x + 0.5) / sin_pi(x);
        return digamma(1.0 - x) - PI * cot;
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli-number tail of the asymptotic expansion
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 * inv - tail
}
