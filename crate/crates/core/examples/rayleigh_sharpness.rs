//! Cut-off extremals drive the Rayleigh quotient down to K(N, β).

use finsler_kato::cli::{is_monotone, rayleigh_sweep};
use finsler_kato::constants::ProblemParams;
use finsler_kato::finsler::FinslerNorm;

fn main() -> finsler_kato::Result<()> {
    let params = ProblemParams::halfspace(4, 2.0)?;
    let rows = rayleigh_sweep(&FinslerNorm::p_norm(3, 3.0)?, params, 4, (48, 16, 16))?;
    println!("{:>2} {:>10} {:>14} {:>10} {:>10}", "j", "R", "quotient", "ratio", "err");
    for r in &rows {
        println!("{:>2} {:>10.0e} {:>14.10} {:>10.6} {:>10.1e}", r.j, r.big_r, r.quotient, r.ratio, r.err);
    }
    println!("monotone: {}", is_monotone(&rows));
    Ok(())
}
