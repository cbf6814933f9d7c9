mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use locint::algebra::{Ball, Scalar, TruncSeries};
use locint::integral::build_first_integral;
use locint::smalldiv::*;
use locint::Error;

fn pow2(e: i64) -> Q {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Exact partial sum `Σ_{j ≤ 3} 2^(-a_j)`, with `a = 2, 8, 768`.
fn zeta3() -> Q {
    pow2(-2) + pow2(-8) + pow2(-768)
}

fn law(s: i64) -> Q {
    q(1, s) * Q::from_integer(BigInt::from(2).pow(s as u32)) / Q::from_integer(BigInt::from(3).pow(s as u32))
}

#[test]
fn schedule_and_midpoints() {
    let sch = LiouvilleSchedule::new();
    let a: Vec<BigInt> = (1..=3).map(|k| sch.exponent(k).unwrap().clone()).collect();
    assert_eq!(a, vec![BigInt::from(2), BigInt::from(8), BigInt::from(768)]);
    assert_eq!(sch.exponent(4).unwrap(), &(BigInt::from(4) << 768usize));
    assert_eq!(sch.exponent(4).unwrap().bits(), 771);
    assert!(matches!(sch.exponent(5), Err(Error::ScheduleOverflow(5))));

    let z1 = liouville_zeta(&sch, 1).unwrap();
    assert_eq!(z1.midpoint().to_rational(), q(1, 4));
    assert_eq!(z1.tail_log2(), BigInt::from(-7));
    let z2 = liouville_zeta(&sch, 2).unwrap();
    assert_eq!(z2.midpoint().to_rational(), q(65, 256));
    assert!(z2.ball(64).rad().to_dyadic().to_rational() <= pow2(-767));
    assert!(z2.ball(64).contains(&zeta3()));
    assert!(matches!(liouville_zeta(&sch, 4), Err(Error::ScheduleOverflow(4))));
}

#[test]
fn first_liouville_gap_is_tight() {
    let z = liouville_zeta(&LiouvilleSchedule::new(), 3).unwrap().ball(1024);
    let gap = z.sub(&Ball::from_rational(&q(1, 4), 1024));
    let lo = gap.abs_lower().to_rational();
    // the magnitude type is coarse; bound the upper end with the exact midpoint
    assert!(gap.rad().log2() < -1000.0);
    let hi = gap.mid().to_rational().abs() + pow2(-1000);
    assert!(lo >= pow2(-8));
    assert!(hi <= pow2(-8) * (Q::one() + pow2(-759)));
    assert!(hi < q(1, 4));
}

#[test]
fn liouville_instances_hold() {
    let z = liouville_zeta(&LiouvilleSchedule::new(), 3).unwrap();
    let inst = z.liouville_instances().unwrap();
    assert_eq!(inst.len(), 3);
    for i in &inst {
        assert!(i.holds(), "k = {}", i.k);
    }
    assert_eq!((inst[0].p.clone(), inst[0].q.clone()), (BigInt::from(1), BigInt::from(4)));
    assert_eq!((inst[1].p.clone(), inst[1].q.clone()), (BigInt::from(65), BigInt::from(256)));
    // k = 2 checked directly in rationals: |ζ - 65/256| < 256^-2
    let gap = zeta3() - q(65, 256);
    assert!(gap.is_positive() && gap < q(1, 65536));
}

#[test]
fn counterexample_coefficients_follow_the_law() {
    let z = liouville_zeta(&LiouvilleSchedule::new(), 3).unwrap();
    let vf = counterexample_field(&z.scalar(256), 12).unwrap();
    assert_eq!(exact(vf.f1().coeff(&ev(&[0, 1, 1])).unwrap()), q(2, 9));
    assert_eq!(exact(vf.f1().coeff(&ev(&[0, 3, 0])).unwrap()), q(8, 81));
    for g in vf.g() {
        assert!(g.is_zero());
    }
    assert!(vf.is_straightened());
    for s in 2..=12 {
        assert_eq!(coefficient_law(s), law(s as i64));
        for (e, c) in vf.f1().grade(s).unwrap().terms() {
            assert_eq!(e.get(0), 0);
            assert_eq!(exact(c), law(s as i64));
        }
        assert_eq!(vf.f1().grade(s).unwrap().terms().count(), s + 1);
    }
}

#[test]
fn closed_form_values() {
    let z = liouville_zeta(&LiouvilleSchedule::new(), 3).unwrap();
    let zs = z.scalar(1024);
    let c = h2_coefficients(&zs, 1, &Scalar::one(), &[(2, 0), (1, 1), (65, 256)]).unwrap();
    assert_eq!(exact(&c[0]), q(-1, 9));

    let want = -q(2, 9) / (Q::one() - zeta3());
    assert!(c[1].contains(&want));
    assert!((c[1].to_f64() - (-0.29772)).abs() < 5e-4);

    // 65 - 256 ζ = -2^-760 (1 + ε), so log2|c| = 760 + log2 law(321)
    let oracle = 760.0 + log2_rational(&law(321));
    let e = log2_abs_enclosure(&c[2]);
    assert!(e.lo <= oracle + 1e-9 && oracle - 1e-9 <= e.hi);
    assert!((e.mid() - 563.9).abs() <= 0.1);
}

#[test]
fn certified_precision_doubling_reaches_small_divisor() {
    let z = liouville_zeta(&LiouvilleSchedule::new(), 3).unwrap();
    let (bits, c) = h2_coefficients_certified(&z, 64, 1, &Scalar::one(), &[(65, 256)]).unwrap();
    assert!(bits > 760);
    assert!(c[0].width_log2() < -100.0);
}

#[test]
fn closed_form_matches_recursion_through_degree_twelve() {
    let z = liouville_zeta(&LiouvilleSchedule::new(), 3).unwrap();
    let zs = z.scalar(512);
    let vf = counterexample_field(&zs, 12).unwrap();
    let h = build_first_integral(&vf, 12, 1, &Scalar::one()).unwrap().h;
    for s in 2..=12u64 {
        let mstars: Vec<(u64, u64)> = (0..=s).map(|m2| (m2, s - m2)).collect();
        let closed = h2_coefficients(&zs, 1, &Scalar::one(), &mstars).unwrap();
        for (&(m2, m3), c) in mstars.iter().zip(&closed) {
            let rec = h.coeff(&ev(&[0, m2 as u32, m3 as u32])).expect("present");
            let diff = rec - c;
            assert!(diff.contains(&Q::from_integer(0.into())));
            assert!(diff.width_log2() < -100.0);
        }
    }
}

#[test]
fn root_norm_basics() {
    let geo: Vec<(usize, Vec<Scalar>)> = (1..=6)
        .map(|d| (d, vec![Scalar::rational(Q::from_integer(BigInt::from(3).pow(d as u32)))]))
        .collect();
    for r in root_norms(&geo).unwrap() {
        assert!(r.value.contains(3.0));
        assert!(r.value.width() < 1e-6);
    }
    let h = TruncSeries::from_terms(3, 5, [(ev(&[1, 0, 0]), Scalar::one())]);
    let rn = series_root_norms(&h).unwrap();
    for r in &rn[1..] {
        assert_eq!(r.value.hi, 0.0);
    }
}

/// Independent value of `log2 r_(d_k)` for the subsequence degrees: exact
/// rationals for `k ≤ 2`, the asymptotic closed form for `k = 3`.
fn oracle_log2_root_norm(k: usize) -> f64 {
    match k {
        1 | 2 => {
            let (p, qq) = if k == 1 { (1, 4) } else { (65, 256) };
            let d = p + qq;
            let div = (qi(p) - qi(qq) * zeta3()).abs();
            (log2_rational(&law(d)) - log2_rational(&div)) / d as f64
        }
        3 => {
            // q = 2^768, d = q (1 + ζ3), a4 - a3 = 4 q - 768
            let z = zeta3().to_f64().unwrap();
            let log2_d = 768.0 + (1.0 + z).log2();
            (2.0f64 / 3.0).log2() + 4.0 / (1.0 + z) - log2_d / 2f64.powf(log2_d)
        }
        _ => unreachable!(),
    }
}

#[test]
fn divergence_certificate_matches_oracle() {
    let cert = divergence_certificate(&LiouvilleSchedule::new(), 3).unwrap();
    assert_eq!(cert.records.len(), 3);
    assert!(cert.is_increasing());
    assert_eq!(cert.records[0].degree, BigInt::from(5));
    assert_eq!(cert.records[1].degree, BigInt::from(321));
    let expected = [0.151, 1.757, 2.61];
    for (rec, want) in cert.records.iter().zip(expected) {
        let o = oracle_log2_root_norm(rec.k);
        let e = rec.log2_root_norm;
        assert!(e.lo - 1e-9 <= o && o <= e.hi + 1e-9, "k={} {:?} vs {}", rec.k, e, o);
        assert!(e.width() < 1e-6);
        assert!((e.mid() - want).abs() < 0.01);
    }
    assert!(cert.records[1].log2_root_norm.exp2().lo > 3.0);
    assert!(matches!(divergence_certificate(&LiouvilleSchedule::new(), 4), Err(Error::ScheduleOverflow(4))));
}

#[test]
fn baseline_degrees_have_small_root_norms() {
    let z = liouville_zeta(&LiouvilleSchedule::new(), 3).unwrap();
    let rn = h2_root_norms(&z.scalar(256), 2..=40).unwrap();
    for r in &rn {
        let d = r.degree as i64;
        let oracle = (0..=d)
            .map(|m2| {
                let div = (qi(m2) - qi(d - m2) * zeta3()).abs();
                (log2_rational(&law(d)) - log2_rational(&div)) / d as f64
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(r.log2.lo - 1e-9 <= oracle && oracle <= r.log2.hi + 1e-9);
        if r.degree == 5 {
            assert!(r.value.lo > 1.0);
        } else {
            assert!(r.value.hi < 1.0, "d = {}: {:?}", r.degree, r.value);
        }
    }
}
