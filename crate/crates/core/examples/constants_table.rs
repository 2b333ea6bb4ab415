//! Sharp half-space constants K(N, β) over a small grid.

use finsler_kato::constants::{sharp_constant_halfspace, ExtremalProfile, ProblemParams};

fn main() -> finsler_kato::Result<()> {
    println!("{:>3} {:>6} {:>22} {:>12}", "N", "beta", "K", "bounded");
    for n in 3..=7 {
        for step in 0..4 {
            let beta = 2.0 + step as f64 * (n as f64 - 2.0) / 4.0;
            let k = sharp_constant_halfspace(n, beta)?;
            let profile = ExtremalProfile::halfspace(ProblemParams::halfspace(n, beta)?);
            println!("{n:>3} {beta:>6.3} {k:>22.16} {:>12.2e}", profile.boundedness_residual());
        }
    }
    Ok(())
}
