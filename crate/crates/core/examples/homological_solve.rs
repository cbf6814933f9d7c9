//! Solving the homological equation on a Jordan block.

use locint::algebra::{ExponentVec, HomogPoly, Scalar};
use locint::field::JordanMatrix;
use locint::homological::HomOperator;

fn main() -> locint::Result<()> {
    // B = [[-1, 1], [0, -1]]
    let b = JordanMatrix::new(vec![Scalar::from_int(-1), Scalar::from_int(-1)], vec![true])?;
    let op = HomOperator::assemble(&b, 0, 2);
    println!("basis (chain weight order):");
    for (i, e) in op.basis().iter().enumerate() {
        println!("  {} diag {}", e, op.diagonal()[i]);
    }
    let rhs = HomogPoly::monomial(ExponentVec::new(vec![0, 2, 0]), Scalar::one());
    let h = op.solve(&rhs)?;
    println!("L* h = y1^2  =>  h = {}", h);
    assert_eq!(op.apply(&h)?, rhs);

    let resonant = JordanMatrix::diagonal(vec![Scalar::from_int(1), Scalar::from_int(-1)]);
    let op = HomOperator::assemble(&resonant, 0, 2);
    for k in op.kernel_basis()? {
        println!("kernel for diag(1, -1): {}", k);
    }
    Ok(())
}
