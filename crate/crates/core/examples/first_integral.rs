//! Formal first integral of x1' = x1 x2, x2' = -x2 + x1 x2.

use locint::algebra::{ExponentVec, Scalar, TruncSeries};
use locint::field::{JordanMatrix, VectorField};
use locint::integral::{build_first_integral, residual};

fn main() -> locint::Result<()> {
    let n = 12;
    let x1x2 = || TruncSeries::from_terms(2, n, [(ExponentVec::new(vec![1, 1]), Scalar::one())]);
    let vf = VectorField::new(JordanMatrix::diagonal(vec![Scalar::from_int(-1)]), x1x2(), vec![x1x2()], n)?;

    let res = build_first_integral(&vf, n, 1, &Scalar::one())?;
    for d in 1..=4 {
        println!("H_{} = {}", d, res.h.grade(d)?);
    }
    for (d, s) in res.sup_norms.iter().enumerate().skip(1) {
        println!("sup |H_{}| = {:.4e}", d, s);
    }
    let r = residual(&vf, &res.h, n)?;
    println!("residual through degree {} is zero: {}", n, r.is_zero());
    Ok(())
}
