//! Cone constants K(N, α, β) across opening angles, and the cone check
//! for one bump on each side of the half-space.

use finsler_kato::constants::{cone_coefficient_a, cone_constant_continued, sharp_constant_halfspace};
use finsler_kato::finsler::{FinslerNorm, ProductNorm};
use finsler_kato::verify::{check_inequality_cone, Bump, QuadratureSpec};

fn main() -> finsler_kato::Result<()> {
    let (n, beta) = (5, 3.0);
    println!("K(N, beta) = {:.12}", sharp_constant_halfspace(n, beta)?);
    for i in -4..=4 {
        let alpha = 0.3 * i as f64;
        let a = cone_coefficient_a(n, beta, alpha)?;
        println!("alpha = {alpha:>5.2}  A = {a:.10}  K = {:.10}", cone_constant_continued(n, beta, alpha)?);
    }

    let q = QuadratureSpec::new(1e-3, 1e3, (32, 16, 12))?;
    let p = ProductNorm::new(FinslerNorm::euclidean(n - 1)?);
    let bump = Bump::new(0.6, 1.8)?.with_tilt(vec![0.1, 0.0, -0.2, 0.1], 0.2);
    for alpha in [-0.4, 0.4] {
        let r = check_inequality_cone(&bump, &p, n, beta, alpha, &q)?;
        println!("cone alpha = {alpha}: constant {:.6}, slack {:.6}, holds {}", r.constant, r.slack, r.holds());
    }
    Ok(())
}
