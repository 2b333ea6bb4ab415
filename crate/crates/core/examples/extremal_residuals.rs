//! The extremal solves the anisotropic Hardy equation: residuals on a
//! polar grid and the boundary flux law.

use finsler_kato::extremal::{ExtremalSolution, FluxField};
use finsler_kato::finsler::FinslerNorm;

fn main() -> finsler_kato::Result<()> {
    let base = FinslerNorm::diagonal(&[1.0, 2.0, 3.0])?;
    let solution = ExtremalSolution::halfspace(base, 3.0)?;
    let rows = solution.residual_sweep(&[1.0, 1.0, 1.0], &[0.5, 1.0, 2.0], &[0.2, 0.7, 1.2])?;
    println!("{:>6} {:>6} {:>12} {:>12}", "rho", "theta", "residual", "tolerance");
    for r in &rows {
        println!("{:>6.2} {:>6.2} {:>12.3e} {:>12.3e}", r.rho, r.theta, r.residual, r.tolerance);
    }

    let check = solution.normal_derivative_check(&[0.6, -0.3, 0.9])?;
    println!("\nnormal derivative {:.10} vs {:.10} (rel {:.1e})", check.numeric, check.expected, check.residual);

    let point = [0.5, -0.4, 0.8, 0.3, 0.7];
    let div = FluxField::new(solution.clone()).divergence_free_check(&point, 1e-3)?;
    println!("flux divergence {:.2e} against field scale {:.3}", div.divergence, div.field_scale);
    let off = FluxField::with_hardy_coefficient(solution, 0.25 + 0.5);
    let div = off.divergence_free_check(&point, 1e-3)?;
    println!("with a shifted Hardy coefficient: {:.6} (predicted {:.6})", div.divergence, off.predicted_divergence(&point)?);
    Ok(())
}
