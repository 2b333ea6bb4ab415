//! Norms, their polars and the identities tying them together.

use finsler_kato::finsler::{bipolar_value, dual_gradient_identities_check, FinslerNorm, ProductNorm};
use nalgebra::DMatrix;

fn main() -> finsler_kato::Result<()> {
    let quartic = FinslerNorm::custom(3, "quartic", |v: &[f64]| {
        let s2: f64 = v.iter().map(|x| x * x).sum();
        (v.iter().map(|x| x.powi(4)).sum::<f64>() + s2 * s2).powf(0.25)
    })?;
    let norms = [
        FinslerNorm::euclidean(3)?,
        FinslerNorm::p_norm(3, 3.0)?,
        FinslerNorm::weighted_quadratic(DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.0, 0.2, 0.1, 0.2, 1.5]))?,
        quartic,
    ];
    let x = [0.4, -1.1, 0.7];
    for h in &norms {
        let r = dual_gradient_identities_check(h, &x)?;
        println!(
            "{:<28} H(x) = {:.10}  H0(x) = {:.10}  bipolar = {:.10}  identities {:.1e}",
            h.label(),
            h.eval(&x),
            h.dual(&x)?,
            bipolar_value(h, &x)?,
            r.max()
        );
    }

    let p = ProductNorm::new(FinslerNorm::p_norm(3, 3.0)?);
    println!("\nproduct norm over pnorm:3: Phi0(x, 0.5) = {:.12}", p.polar(&x, 0.5)?);
    println!("pairing defect {:.1e}", p.dual_pair_check(&x, 0.5)?);
    Ok(())
}
