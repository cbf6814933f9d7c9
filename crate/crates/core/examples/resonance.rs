//! Resonance lattice of a spectrum and the tail nonresonance certificate.

use locint::algebra::Scalar;
use locint::spectral::{certify_tail_nonresonant, resonance_lattice, TailCheck};

fn main() -> locint::Result<()> {
    let lambda: Vec<Scalar> = [0, 1, -2].iter().map(|&v| Scalar::from_int(v)).collect();
    let lattice = resonance_lattice(&lambda, 4)?;
    println!("resonances of (0, 1, -2) up to degree 4:");
    for m in &lattice.points {
        println!("  {}", m);
    }

    let tail = [Scalar::from_ratio(-1, 2), Scalar::from_int(-3)];
    match certify_tail_nonresonant(&tail, 8)? {
        TailCheck::Certified(c) => {
            for (d, b) in c.min_divisor.iter().enumerate() {
                println!("degree {}: min |<m, lambda>| = {}", d + 1, b);
            }
        }
        TailCheck::Resonant(m) => println!("resonant at {}", m),
    }
    Ok(())
}
