mod common;

use common::*;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use locint::algebra::{Ball, ExponentVec, HomogPoly, Scalar, TruncSeries, Valuation};

fn series_strategy(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n), -9i64..=9, 1i64..=5),
        0..=max_terms,
    )
    .prop_map(move |raw| {
        let trunc = (max_deg as usize) * n;
        TruncSeries::from_terms(
            n,
            trunc,
            raw.into_iter()
                .map(|(e, a, b)| (ExponentVec::new(e), Scalar::rational(q(a, b)))),
        )
    })
}

/// Series without constant term (for substitution), truncated at `trunc`.
fn sub_strategy(n: usize, trunc: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec((prop::collection::vec(0u32..=2, n), -4i64..=4, 1i64..=3), 1..=4).prop_map(
        move |raw| {
            TruncSeries::from_terms(
                n,
                trunc,
                raw.into_iter()
                    .filter(|(e, _, _)| e.iter().sum::<u32>() >= 1)
                    .map(|(e, a, b)| (ExponentVec::new(e), Scalar::rational(q(a, b)))),
            )
        },
    )
}

fn poly(s: &TruncSeries, n: usize) -> TruncSeries {
    s.extend_polynomial(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_naive_convolution(a in series_strategy(2, 3, 6), b in series_strategy(2, 3, 6)) {
        let n = 6;
        let p = TruncSeries::mul(&poly(&a, n), &poly(&b, n), n).unwrap();
        prop_assert_eq!(terms_of(&p), naive_mul(&a, &b, n));
    }

    #[test]
    fn ring_axioms(a in series_strategy(2, 2, 4), b in series_strategy(2, 2, 4), c in series_strategy(2, 2, 4)) {
        let n = 5;
        let (a, b, c) = (poly(&a, n), poly(&b, n), poly(&c, n));
        let ab = TruncSeries::mul(&a, &b, n).unwrap();
        prop_assert_eq!(&ab, &TruncSeries::mul(&b, &a, n).unwrap());
        let ab_c = TruncSeries::mul(&ab, &c, n).unwrap();
        let a_bc = TruncSeries::mul(&a, &TruncSeries::mul(&b, &c, n).unwrap(), n).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let lhs = TruncSeries::mul(&a, &b.add(&c).unwrap(), n).unwrap();
        let rhs = ab.add(&TruncSeries::mul(&a, &c, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn valuation_is_additive(a in series_strategy(3, 2, 4), b in series_strategy(3, 2, 4)) {
        let n = 6;
        let (a, b) = (poly(&a, n), poly(&b, n));
        let p = TruncSeries::mul(&a, &b, n).unwrap();
        if let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation()) {
            if va + vb <= n {
                prop_assert_eq!(p.valuation(), Valuation::Finite(va + vb));
            }
        }
    }

    #[test]
    fn leibniz_rule(a in series_strategy(2, 3, 5), b in series_strategy(2, 3, 5), i in 0usize..2) {
        let n = 6;
        let (a, b) = (poly(&a, n), poly(&b, n));
        let lhs = TruncSeries::mul(&a, &b, n).unwrap().diff(i).unwrap();
        let da = a.diff(i).unwrap().extend_polynomial(n);
        let db = b.diff(i).unwrap().extend_polynomial(n);
        let rhs = TruncSeries::mul(&da, &b, n - 1).unwrap()
            .add(&TruncSeries::mul(&a, &db, n - 1).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grades_reassemble(a in series_strategy(3, 2, 6)) {
        let mut back = TruncSeries::zero(3, a.trunc());
        for d in 0..=a.trunc() {
            let g = a.grade(d).unwrap();
            for (e, _) in g.terms() {
                prop_assert_eq!(e.degree(), d);
            }
            back.add_part(g);
        }
        prop_assert_eq!(back, a);
    }

    #[test]
    fn composition_is_associative(
        s in series_strategy(2, 2, 4),
        t in prop::collection::vec(sub_strategy(2, 5), 2),
        u in prop::collection::vec(sub_strategy(2, 5), 2),
    ) {
        let n = 5;
        let s = poly(&s, n);
        let inner: Vec<TruncSeries> = t.iter().map(|ti| ti.compose(&u, n).unwrap()).collect();
        let left = s.compose(&inner, n).unwrap();
        let st = s.compose(&t, n).unwrap();
        let right = st.compose(&u, n).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_matches_power_expansion(s in series_strategy(2, 2, 4), t in prop::collection::vec(sub_strategy(2, 4), 2)) {
        let n = 4;
        let s = poly(&s, n);
        let got = s.compose(&t, n).unwrap();
        // expand each monomial with naive products
        let mut want: std::collections::BTreeMap<Vec<u32>, Q> = Default::default();
        for (e, c) in s.terms() {
            let mut acc = vec![(vec![0u32, 0], exact(c))];
            for (i, k) in e.iter().enumerate() {
                for _ in 0..k {
                    let mut next: std::collections::BTreeMap<Vec<u32>, Q> = Default::default();
                    for (ea, ca) in &acc {
                        for (eb, cb) in t[i].terms() {
                            let ee: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                            if ee.iter().sum::<u32>() as usize <= n {
                                *next.entry(ee).or_insert_with(Q::zero) += ca * exact(cb);
                            }
                        }
                    }
                    acc = next.into_iter().collect();
                }
            }
            for (ee, cc) in acc {
                *want.entry(ee).or_insert_with(Q::zero) += cc;
            }
        }
        let want: Vec<(Vec<u32>, Q)> = want.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        prop_assert_eq!(terms_of(&got), want);
    }

    #[test]
    fn balls_enclose_exact_results(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000, prec in 8u32..40) {
        let x = q(a, b);
        let y = q(c, d);
        let bx = Ball::from_rational(&x, prec);
        let by = Ball::from_rational(&y, prec);
        prop_assert!(bx.contains(&x));
        prop_assert!(bx.add(&by).contains(&(&x + &y)));
        prop_assert!(bx.sub(&by).contains(&(&x - &y)));
        prop_assert!(bx.mul(&by).contains(&(&x * &y)));
        if !y.is_zero() {
            if let Some(quo) = bx.div(&by) {
                prop_assert!(quo.contains(&(&x / &y)));
            }
        }
        let chain = bx.mul(&bx).sub(&by).mul(&by).add(&bx);
        prop_assert!(chain.contains(&((&x * &x - &y) * &y + &x)));
    }

    #[test]
    fn exact_scalars_stay_canonical(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let s = &Scalar::from_ratio(a, b) * &Scalar::from_ratio(c, d);
        let r = exact(&s);
        prop_assert!(r.denom() > &num_bigint::BigInt::zero());
        prop_assert_eq!(num_integer::Integer::gcd(r.numer(), r.denom()), if r.is_zero() { r.denom().clone() } else { num_bigint::BigInt::from(1) });
    }
}

#[test]
fn mixed_arithmetic_promotes_and_encloses() {
    let third = BigRational::new(1.into(), 3.into());
    let b = Scalar::Real(Ball::from_rational(&third, 64));
    let sum = &b + &Scalar::from_int(2);
    assert!(!sum.is_exact());
    assert!(sum.contains(&(third.clone() + qi(2))));
    let half_ball = Ball::from_rational(&q(1, 2), 64);
    let diff = b.to_ball(64).sub(&half_ball);
    assert!(diff.contains(&(third - q(1, 2))));
}

#[test]
fn homogeneous_part_monomial_display() {
    let p = HomogPoly::monomial(ev(&[1, 2]), Scalar::from_ratio(1, 2));
    assert_eq!(p.to_string(), "1/2 x1^1 x2^2");
}
