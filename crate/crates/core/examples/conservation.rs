//! Drift of a truncated first integral along RK4 trajectories.

use locint::algebra::{ExponentVec, Scalar, TruncSeries};
use locint::dynlab::{conservation_drift, integrate, FloatField};
use locint::field::{JordanMatrix, VectorField};
use locint::integral::build_first_integral;

fn main() -> locint::Result<()> {
    let n = 12;
    let x1x2 = || TruncSeries::from_terms(2, n, [(ExponentVec::new(vec![1, 1]), Scalar::one())]);
    let vf = VectorField::new(JordanMatrix::diagonal(vec![Scalar::from_int(-1)]), x1x2(), vec![x1x2()], n)?;
    let h = build_first_integral(&vf, n, 1, &Scalar::one())?.h;
    let ff = FloatField::from_field(&vf, 1.0)?;

    let mut prev = None;
    for r in [0.2, 0.1, 0.05] {
        let x0 = [r / 2f64.sqrt(); 2];
        let traj = integrate(&ff, &x0, 5.0, 1e-3)?;
        let drift = conservation_drift(&h, &traj)?;
        match prev {
            Some(p) => println!("r = {:<5} drift = {:.3e}  ratio = {:.0}", r, drift, p / drift),
            None => println!("r = {:<5} drift = {:.3e}", r, drift),
        }
        prev = Some(drift);
    }
    println!("expected ratio for degree {}: {}", n, 1u32 << (n + 1));
    Ok(())
}
