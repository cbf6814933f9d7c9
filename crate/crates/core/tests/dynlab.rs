mod common;

use common::*;

use locint::algebra::{Scalar, TruncSeries};
use locint::dynlab::{conservation_drift, curve_equilibrium_scan, integrate, FloatField};
use locint::field::{JordanMatrix, VectorField};
use locint::locus::{solve_curve, SeriesCurve};
use locint::Error;

fn series(n: usize, trunc: usize, terms: &[(&[u32], i64)]) -> TruncSeries {
    TruncSeries::from_terms(n, trunc, terms.iter().map(|(e, c)| (ev(e), Scalar::from_int(*c))))
}

#[test]
fn linear_decay_is_exact_to_high_accuracy() {
    let ff = FloatField::from_series(&[series(1, 3, &[(&[1], -1)])], 10.0).unwrap();
    let traj = integrate(&ff, &[1.0], 1.0, 1e-3).unwrap();
    assert_eq!(traj.states.len(), 1001);
    assert!((traj.last()[0] - (-1f64).exp()).abs() < 1e-10);
}

#[test]
fn harmonic_oscillator_keeps_energy() {
    let ff = FloatField::from_series(&[series(2, 3, &[(&[0, 1], 1)]), series(2, 3, &[(&[1, 0], -1)])], 10.0).unwrap();
    let traj = integrate(&ff, &[1.0, 0.0], 10.0, 1e-3).unwrap();
    let energy = series(2, 3, &[(&[2, 0], 1), (&[0, 2], 1)]);
    assert!(conservation_drift(&energy, &traj).unwrap() < 1e-8);
    let x = traj.last();
    assert!((x[0] - 10f64.cos()).abs() < 1e-9);
}

#[test]
fn axis_integral_of_decoupled_field_is_conserved() {
    let vf = VectorField::new(
        JordanMatrix::diagonal(vec![Scalar::from_int(-1)]),
        TruncSeries::zero(2, 4),
        vec![TruncSeries::zero(2, 4)],
        4,
    )
    .unwrap();
    let ff = FloatField::from_field(&vf, 1.0).unwrap();
    let traj = integrate(&ff, &[0.05, 0.07], 5.0, 1e-3).unwrap();
    let h = series(2, 4, &[(&[1, 0], 1)]);
    assert!(conservation_drift(&h, &traj).unwrap() < 1e-12);
    // non-integral control: H = x2 drifts by x2(0) (1 - e^-T)
    let h = series(2, 4, &[(&[0, 1], 1)]);
    let want = 0.07 * (1.0 - (-5f64).exp());
    assert!((conservation_drift(&h, &traj).unwrap() - want).abs() < 1e-10);
}

#[test]
fn planted_equilibria_stay_put() {
    let mut rng = rng(31);
    // degrees small enough that truncation at 8 keeps the planted field exact
    let p = plant(&mut rng, 2, 8, 2);
    let phi = SeriesCurve::new(p.curve.clone()).unwrap();
    let ff = FloatField::from_field(&p.field, 1.0).unwrap();
    let x1 = 0.05;
    let mut x0 = vec![x1];
    x0.extend(phi.eval_f64(x1));
    let traj = integrate(&ff, &x0, 5.0, 1e-3).unwrap();
    for (a, b) in traj.last().iter().zip(&x0) {
        assert!((a - b).abs() < 1e-10);
    }
    let scale = ff.eval(&[0.1, 0.1]).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(curve_equilibrium_scan(&ff, &phi, 41, 0.1).unwrap() <= 1e-10 * scale.max(1.0));
}

#[test]
fn truncated_curve_residual_scales_with_next_order() {
    // y' = -y + x1^2 + y^2; the curve through degree 7 misses x1^8 terms
    let n = 8;
    let g = series(2, n, &[(&[2, 0], 1), (&[0, 2], 1)]);
    let vf = VectorField::new(JordanMatrix::diagonal(vec![Scalar::from_int(-1)]), TruncSeries::zero(2, n), vec![g], n)
        .unwrap();
    let phi = solve_curve(&vf, n).unwrap();
    let cut = SeriesCurve::new(vec![phi.components()[0].truncate(7).extend_polynomial(n)]).unwrap();
    let ff = FloatField::from_field(&vf, 1.0).unwrap();
    let a = curve_equilibrium_scan(&ff, &cut, 21, 0.1).unwrap();
    let b = curve_equilibrium_scan(&ff, &cut, 21, 0.05).unwrap();
    let ratio = a / b;
    assert!((128.0..=512.0).contains(&ratio), "ratio {}", ratio);
    assert_eq!(curve_equilibrium_scan(&FloatField::from_field(&vf, 1.0).unwrap(), &phi, 5, 0.0).unwrap(), 0.0);
}

#[test]
fn blow_up_leaves_the_radius() {
    let ff = FloatField::from_series(&[series(1, 3, &[(&[2], 1)])], 1.0).unwrap();
    match integrate(&ff, &[0.5], 5.0, 1e-3) {
        Err(Error::RadiusExceeded { time }) => assert!(time > 0.9 && time < 1.1),
        other => panic!("{:?}", other.map(|t| t.states.len())),
    }
    assert!(matches!(integrate(&ff, &[2.0], 1.0, 1e-3), Err(Error::RadiusExceeded { .. })));
}
