//! Curve of equilibria, the isolation test, and straightening.

use locint::algebra::{ExponentVec, Scalar, TruncSeries};
use locint::field::{JordanMatrix, VectorField};
use locint::integral::build_first_integral;
use locint::locus::{nonisolated_check, solve_curve, straighten, Verdict};

fn term(e: &[u32], c: i64) -> (ExponentVec, Scalar) {
    (ExponentVec::new(e.to_vec()), Scalar::from_int(c))
}

fn main() -> locint::Result<()> {
    let n = 8;
    // x1' = x1 x2 - x1^3, x2' = -x2 + x1^2 vanishes on x2 = x1^2
    let f1 = TruncSeries::from_terms(2, n, [term(&[1, 1], 1), term(&[3, 0], -1)]);
    let g = TruncSeries::from_terms(2, n, [term(&[2, 0], 1)]);
    let vf = VectorField::new(JordanMatrix::diagonal(vec![Scalar::from_int(-1)]), f1, vec![g], n)?;

    let phi = solve_curve(&vf, n)?;
    println!("phi(x1) = {}", phi.components()[0]);
    match nonisolated_check(&vf, &phi, n)? {
        Verdict::NonIsolated { degree } => println!("curve of equilibria through degree {}", degree),
        Verdict::Isolated { degree, coefficient } => {
            println!("isolated: f1 on the curve starts at degree {} with {}", degree, coefficient);
            return Ok(());
        }
    }
    let st = straighten(&vf, &phi, n)?;
    println!("u' = {}", st.f1());
    println!("v' = -v + {}", st.g()[0]);
    let h = build_first_integral(&st, n, 1, &Scalar::one())?;
    println!("H = {}", h.h);

    let iso = VectorField::new(
        JordanMatrix::diagonal(vec![Scalar::from_int(-1)]),
        TruncSeries::from_terms(2, 6, [term(&[2, 0], 1)]),
        vec![TruncSeries::zero(2, 6)],
        6,
    )?;
    let phi = solve_curve(&iso, 6)?;
    println!("x1' = x1^2: {:?}", nonisolated_check(&iso, &phi, 6)?);
    Ok(())
}
