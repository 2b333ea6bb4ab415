//! How 2F1(a, b; c; y) behaves as y → 1 in the three regimes, and how
//! only one combination of the two angular branches stays bounded.

use finsler_kato::constants::{ExtremalProfile, ProblemParams};
use finsler_kato::specfun::{boundary_class, hypergeom, HypergeomParams};

fn main() -> finsler_kato::Result<()> {
    for (a, b, c) in [(0.25, 0.25, 1.5), (1.0, 1.0, 2.0), (0.75, 0.75, 0.5)] {
        let p = HypergeomParams::new(a, b, c)?;
        let class = boundary_class(&p);
        println!("F({a}, {b}; {c}; y): {:?}, coefficient {:.12}", class.kind, class.coefficient);
        for y in [0.9, 0.999, 1.0 - 1e-6] {
            println!("    y = {y:<10} F = {:.12e}", hypergeom(&p, y)?);
        }
    }

    let params = ProblemParams::halfspace(5, 2.5)?;
    let sharp = ExtremalProfile::halfspace(params);
    println!("\nangular profile for N = 5, beta = 2.5 near the axis");
    for factor in [0.9, 1.0, 1.1] {
        let w = ExtremalProfile::with_k(params, factor * sharp.k);
        let near: Vec<String> = [0.99, 0.9999, 0.999999]
            .iter()
            .map(|&y| format!("{:>12.5e}", w.angular_solution(y).unwrap()))
            .collect();
        println!("k = {factor} * (-K): {}  residual {:.2e}", near.join(" "), w.boundedness_residual());
    }
    Ok(())
}
