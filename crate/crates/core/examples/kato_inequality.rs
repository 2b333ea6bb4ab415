//! Both sides of the trace-Hardy inequality for a batch of random bumps.

use finsler_kato::cli::bump_suite;
use finsler_kato::finsler::{FinslerNorm, ProductNorm};
use finsler_kato::verify::{check_inequality_halfspace, QuadratureSpec};

fn main() -> finsler_kato::Result<()> {
    let q = QuadratureSpec::new(1e-3, 1e3, (32, 16, 16))?;
    for base in [FinslerNorm::euclidean(3)?, FinslerNorm::p_norm(3, 3.0)?] {
        let p = ProductNorm::new(base.clone());
        println!("{}", base.label());
        for (i, bump) in bump_suite(1, 5, 3).iter().enumerate() {
            let r = check_inequality_halfspace(bump, &p, 4, 2.5, &q)?;
            println!(
                "  bump {i}: K*boundary = {:.6}  energy - hardy = {:.6}  slack = {:.6} +- {:.1e}",
                r.lhs_boundary,
                r.rhs_energy - r.hardy_term,
                r.slack,
                r.error_estimate
            );
        }
    }
    Ok(())
}
