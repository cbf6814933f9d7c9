//! Floating-point integration of truncated fields, used to watch how well a
//! truncated first integral is conserved.

use crate::algebra::TruncSeries;
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::locus::SeriesCurve;

/// A polynomial with `f64` coefficients, stored as `(exponents, coefficient)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly {
    terms: Vec<(Vec<i32>, f64)>,
}

impl FloatPoly {
    pub fn from_series(s: &TruncSeries) -> Self {
        FloatPoly {
            terms: s
                .terms()
                .map(|(e, c)| (e.iter().map(|k| k as i32).collect(), c.to_f64()))
                .collect(),
        }
    }

    /// Compensated sum of the terms at `x`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (k, v) in e.iter().zip(x) {
                if *k != 0 {
                    t *= v.powi(*k);
                }
            }
            // Neumaier summation
            let s = sum + t;
            if sum.abs() >= t.abs() {
                comp += (sum - s) + t;
            } else {
                comp += (t - s) + sum;
            }
            sum = s;
        }
        sum + comp
    }
}

/// The right-hand side of a truncated field in `f64`, valid inside `radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatField {
    comps: Vec<FloatPoly>,
    trunc: usize,
    radius: f64,
}

impl FloatField {
    pub fn from_series(comps: &[TruncSeries], radius: f64) -> Result<Self> {
        let nv = comps.len();
        if let Some(c) = comps.iter().find(|c| c.nvars() != nv) {
            return Err(Error::DimensionMismatch {
                expected: nv,
                found: c.nvars(),
            });
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius {} must be positive", radius)));
        }
        Ok(FloatField {
            comps: comps.iter().map(FloatPoly::from_series).collect(),
            trunc: comps.iter().map(TruncSeries::trunc).min().unwrap_or(0),
            radius,
        })
    }

    pub fn from_field(vf: &VectorField, radius: f64) -> Result<Self> {
        FloatField::from_series(&vf.components(), radius)
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|p| p.eval(x)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub step: f64,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.states.len()).map(move |i| i as f64 * self.step)
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("nonempty trajectory")
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Classical fourth-order Runge–Kutta with a compensated state update.
///
/// Fails with [`Error::RadiusExceeded`] as soon as the state leaves the
/// field's radius.
pub fn integrate(ff: &FloatField, x0: &[f64], t_end: f64, h: f64) -> Result<Trajectory> {
    if x0.len() != ff.dim() {
        return Err(Error::DimensionMismatch {
            expected: ff.dim(),
            found: x0.len(),
        });
    }
    if !(h > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("step {} and time {} must be positive", h, t_end)));
    }
    if norm(x0) > ff.radius {
        return Err(Error::RadiusExceeded { time: 0.0 });
    }
    let steps = (t_end / h).round() as usize;
    let n = ff.dim();
    let mut x = x0.to_vec();
    let mut comp = vec![0.0; n];
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x.clone());
    let mut tmp = vec![0.0; n];
    for step in 1..=steps {
        let k1 = ff.eval(&x);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        let k2 = ff.eval(&tmp);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        let k3 = ff.eval(&tmp);
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        let k4 = ff.eval(&tmp);
        for i in 0..n {
            let dx = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            let y = dx - comp[i];
            let t = x[i] + y;
            comp[i] = (t - x[i]) - y;
            x[i] = t;
        }
        if !x.iter().all(|v| v.is_finite()) || norm(&x) > ff.radius {
            return Err(Error::RadiusExceeded {
                time: step as f64 * h,
            });
        }
        states.push(x.clone());
    }
    Ok(Trajectory { step: h, states })
}

/// `max_t |H(x(t)) - H(x(0))|` along the trajectory.
pub fn conservation_drift(h: &TruncSeries, traj: &Trajectory) -> Result<f64> {
    if let Some(x) = traj.states.first() {
        if x.len() != h.nvars() {
            return Err(Error::DimensionMismatch {
                expected: h.nvars(),
                found: x.len(),
            });
        }
    }
    let hp = FloatPoly::from_series(h);
    let h0 = hp.eval(&traj.states[0]);
    Ok(traj
        .states
        .iter()
        .map(|x| (hp.eval(x) - h0).abs())
        .fold(0.0, f64::max))
}

/// `max |F(x1, φ(x1))|` (sup norm over components) for `samples` values of
/// `x1` spread evenly over `[-radius, radius]`.
pub fn curve_equilibrium_scan(
    ff: &FloatField,
    phi: &SeriesCurve,
    samples: usize,
    radius: f64,
) -> Result<f64> {
    if phi.trunc() < ff.trunc() {
        return Err(Error::TruncationBudget {
            requested: ff.trunc(),
            available: phi.trunc(),
        });
    }
    if phi.components().len() + 1 != ff.dim() {
        return Err(Error::DimensionMismatch {
            expected: ff.dim() - 1,
            found: phi.components().len(),
        });
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let x1 = -radius + 2.0 * radius * i as f64 / (samples - 1) as f64;
        let mut x = vec![x1];
        x.extend(phi.eval_f64(x1));
        for v in ff.eval(&x) {
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}
