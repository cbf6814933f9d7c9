mod common;

use common::*;
use num_traits::Zero;
use rand::Rng;

use locint::algebra::{ExponentVec, HomogPoly, Scalar};
use locint::field::JordanMatrix;
use locint::homological::HomOperator;
use locint::Error;

/// Dense `(1 + k) × (1 + k)` linear part with a zero row for `x1`.
fn linear_part(b: &JordanMatrix) -> Vec<Vec<Q>> {
    let k = b.dim();
    let mut a = vec![vec![Q::zero(); k + 1]; k + 1];
    for (i, row) in b.to_dense().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            a[i + 1][j + 1] = exact(v);
        }
    }
    a
}

fn random_block_poly<R: Rng>(rng: &mut R, basis: &[ExponentVec], density: f64) -> HomogPoly {
    let e0 = &basis[0];
    let mut h = HomogPoly::zero(e0.nvars(), e0.degree());
    for e in basis {
        if rng.gen_bool(density) {
            h.add_term(e.clone(), Scalar::rational(random_nonzero(rng, 9, 7)));
        }
    }
    h
}

fn coords(h: &HomogPoly, basis: &[ExponentVec]) -> Vec<Q> {
    basis
        .iter()
        .map(|e| h.coeff(e).map(exact).unwrap_or_else(Q::zero))
        .collect()
}

fn matrices() -> Vec<JordanMatrix> {
    let s = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| Scalar::rational(q(a, b))).collect::<Vec<_>>();
    vec![
        JordanMatrix::diagonal(s(&[(-1, 1)])),
        JordanMatrix::diagonal(s(&[(1, 1), (2, 1)])),
        JordanMatrix::diagonal(s(&[(-1, 2), (-3, 1), (-7, 3)])),
        JordanMatrix::new(s(&[(-1, 1), (-1, 1)]), vec![true]).unwrap(),
        JordanMatrix::new(s(&[(-1, 1), (-1, 1), (-3, 1)]), vec![true, false]).unwrap(),
        JordanMatrix::new(s(&[(2, 1), (2, 1), (2, 1)]), vec![true, true]).unwrap(),
    ]
}

#[test]
fn entries_match_symbolic_differentiation() {
    for b in matrices() {
        let a = linear_part(&b);
        for p in 0..=2u32 {
            for r in 1..=5 {
                let op = HomOperator::assemble(&b, p, r);
                assert_eq!(op.dim(), ExponentVec::count_of_degree(b.dim(), r));
                let lie = lie_matrix(&a, p as usize + r, op.basis());
                for t in 0..op.dim() {
                    for s in 0..op.dim() {
                        assert_eq!(exact(&op.entry(t, s)), lie[t][s], "{:?} p={} r={}", b, p, r);
                    }
                }
            }
        }
    }
}

#[test]
fn apply_matches_dense_product() {
    let mut rng = rng(11);
    for b in matrices() {
        let a = linear_part(&b);
        for r in 1..=4 {
            let op = HomOperator::assemble(&b, 1, r);
            let lie = lie_matrix(&a, 1 + r, op.basis());
            let h = random_block_poly(&mut rng, op.basis(), 0.6);
            let x = coords(&h, op.basis());
            let want: Vec<Q> = lie
                .iter()
                .map(|row| row.iter().zip(&x).fold(Q::zero(), |acc, (m, v)| acc + m * v))
                .collect();
            assert_eq!(coords(&op.apply(&h).unwrap(), op.basis()), want);
        }
    }
}

/// Sweep solve against Gaussian elimination for every block with
/// `n - 1 ≤ 3`, `r ≤ 6`.
#[test]
fn solve_matches_dense_elimination() {
    let mut rng = rng(7);
    for b in matrices() {
        let a = linear_part(&b);
        for p in [0u32, 2] {
            for r in 1..=6 {
                let op = HomOperator::assemble(&b, p, r);
                let lie = lie_matrix(&a, p as usize + r, op.basis());
                let rhs = random_block_poly(&mut rng, op.basis(), 0.5);
                let got = op.solve(&rhs).unwrap();
                let want = dense_solve(lie, coords(&rhs, op.basis())).expect("nonsingular");
                assert_eq!(coords(&got, op.basis()), want);
                assert_eq!(op.apply(&got).unwrap(), rhs);
            }
        }
    }
}

#[test]
fn resonant_block_kernel_and_zero_divisor() {
    // λ* = (1, -1): y1 y2 is resonant.
    let b = JordanMatrix::diagonal(vec![Scalar::from_int(1), Scalar::from_int(-1)]);
    let op = HomOperator::assemble(&b, 0, 2);
    let ker = op.kernel_basis().unwrap();
    assert_eq!(ker.len(), 1);
    assert_eq!(ker[0].terms().count(), 1);
    assert!(ker[0].coeff(&ev(&[0, 1, 1])).is_some());
    let rhs = HomogPoly::monomial(ev(&[0, 1, 1]), Scalar::one());
    assert!(matches!(op.solve(&rhs), Err(Error::ZeroDivisor(_))));
    // A zero numerator on a resonant slot is fine.
    let rhs = HomogPoly::monomial(ev(&[0, 2, 0]), Scalar::one());
    let h = op.solve(&rhs).unwrap();
    assert_eq!(op.apply(&h).unwrap(), rhs);
}

#[test]
fn kernel_dimension_matches_rank_deficit() {
    let s = |v: &[i64]| v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>();
    let cases = vec![
        JordanMatrix::diagonal(s(&[1, -1, 0])),
        JordanMatrix::new(s(&[0, 0]), vec![true]).unwrap(),
        JordanMatrix::new(s(&[1, 1, -2]), vec![true, false]).unwrap(),
    ];
    for b in cases {
        let a = linear_part(&b);
        for r in 1..=4 {
            let op = HomOperator::assemble(&b, 0, r);
            let lie = lie_matrix(&a, r, op.basis());
            let ker = op.kernel_basis().unwrap();
            assert_eq!(ker.len(), op.dim() - rank(lie), "{:?} r={}", b, r);
            for k in &ker {
                assert!(op.apply(k).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn rhs_outside_block_is_rejected() {
    let b = JordanMatrix::diagonal(vec![Scalar::from_int(-1)]);
    let op = HomOperator::assemble(&b, 1, 1);
    let rhs = HomogPoly::monomial(ev(&[2, 0]), Scalar::one());
    assert!(matches!(op.solve(&rhs), Err(Error::BadRhs(_))));
}
