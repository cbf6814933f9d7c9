//! The formal curve `y = φ(x1)` solving `B φ + g(x1, φ) = 0`, the test for a
//! nonisolated singular point, and the change of variables that flattens the
//! curve onto the `x1` axis.

use crate::algebra::{Scalar, SignQuery, TruncSeries};
use crate::error::{Error, Result};
use crate::field::VectorField;

/// One univariate series per tail coordinate, all without constant or
/// linear term.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCurve {
    comps: Vec<TruncSeries>,
}

impl SeriesCurve {
    pub fn new(comps: Vec<TruncSeries>) -> Result<Self> {
        for c in &comps {
            if c.nvars() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: c.nvars(),
                });
            }
        }
        Ok(SeriesCurve { comps })
    }

    pub fn components(&self) -> &[TruncSeries] {
        &self.comps
    }

    pub fn trunc(&self) -> usize {
        self.comps.iter().map(TruncSeries::trunc).min().unwrap_or(usize::MAX)
    }

    /// Components re-embedded as functions of variable 0 among `nvars`.
    pub fn lifted(&self, nvars: usize) -> Vec<TruncSeries> {
        self.comps.iter().map(|c| c.remap_vars(nvars, &[0])).collect()
    }

    /// `(x1, φ(x1))` as `n` univariate series, ready for substitution.
    pub fn graph(&self, n: usize) -> Vec<TruncSeries> {
        let mut subs = vec![TruncSeries::var(1, n, 0)];
        subs.extend(self.comps.iter().map(|c| c.truncate(n)));
        subs
    }

    pub fn eval_f64(&self, x1: f64) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval_f64(&[x1])).collect()
    }
}

/// Solves `B φ(x1) + g(x1, φ(x1)) = 0` through degree `n`.
///
/// The degree-`d` coefficient depends only on lower ones:
/// `φ_d = -B⁻¹ [g(x1, φ_{<d})]_d`.
pub fn solve_curve(vf: &VectorField, n: usize) -> Result<SeriesCurve> {
    if vf.trunc() < n {
        return Err(Error::TruncationBudget {
            requested: n,
            available: vf.trunc(),
        });
    }
    for lam in vf.tail_eigenvalues() {
        match lam.sign() {
            SignQuery::Zero => return Err(Error::SingularB),
            SignQuery::Undecided => {
                return Err(Error::PrecisionExhausted {
                    bits: lam.precision().unwrap_or(0),
                })
            }
            _ => {}
        }
    }
    let k = vf.tail_eigenvalues().len();
    let mut comps = vec![TruncSeries::zero(1, n); k];
    for d in 2..=n {
        let curve = SeriesCurve { comps: comps.clone() };
        let subs = curve.graph(d);
        let mut w = Vec::with_capacity(k);
        for gi in vf.g() {
            let on_curve = gi.compose(&subs, d)?;
            let c = on_curve
                .coeff(&crate::algebra::ExponentVec::new(vec![d as u32]))
                .cloned()
                .unwrap_or_else(Scalar::zero);
            w.push(-c);
        }
        let z = vf.tail_matrix().solve(&w)?;
        for (comp, zi) in comps.iter_mut().zip(z) {
            comp.add_term(crate::algebra::ExponentVec::new(vec![d as u32]), zi);
        }
    }
    Ok(SeriesCurve { comps })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `f1(x1, φ(x1))` vanishes through the checked degree.
    NonIsolated { degree: usize },
    /// Lowest certainly-nonzero coefficient of `f1(x1, φ(x1))`.
    Isolated { degree: usize, coefficient: Scalar },
}

impl Verdict {
    pub fn is_nonisolated(&self) -> bool {
        matches!(self, Verdict::NonIsolated { .. })
    }
}

/// Checks whether `f1` vanishes along the curve through degree `n`.
pub fn nonisolated_check(vf: &VectorField, phi: &SeriesCurve, n: usize) -> Result<Verdict> {
    check_curve(vf, phi, n)?;
    let r = vf.f1().compose(&phi.graph(n), n)?;
    for (d, part) in r.parts().iter().enumerate() {
        for (_, c) in part.terms() {
            if c.is_certainly_nonzero() {
                return Ok(Verdict::Isolated {
                    degree: d,
                    coefficient: c.clone(),
                });
            }
        }
    }
    Ok(Verdict::NonIsolated { degree: n })
}

fn check_curve(vf: &VectorField, phi: &SeriesCurve, n: usize) -> Result<()> {
    if phi.components().len() != vf.tail_eigenvalues().len() {
        return Err(Error::DimensionMismatch {
            expected: vf.tail_eigenvalues().len(),
            found: phi.components().len(),
        });
    }
    let avail = phi.trunc().min(vf.trunc());
    if avail < n {
        return Err(Error::TruncationBudget {
            requested: n,
            available: avail,
        });
    }
    Ok(())
}

/// Rewrites the field in coordinates `u1 = x1`, `v = y - φ(x1)`.
///
/// The new field is `u1' = F1`, `v' = B v + g̃` with `F1 = f1(u1, v + φ)`
/// and `g̃ = B φ + g(u1, v + φ) - φ'(u1) F1`, which vanishes on `v = 0`
/// exactly when `φ` is an invariant curve of equilibria.
pub fn straighten(vf: &VectorField, phi: &SeriesCurve, n: usize) -> Result<VectorField> {
    check_curve(vf, phi, n)?;
    let nv = vf.dim();
    let lifted = phi.lifted(nv);
    let mut subs = vec![TruncSeries::var(nv, n, 0)];
    for (i, p) in lifted.iter().enumerate() {
        subs.push(TruncSeries::var(nv, n, i + 1).add(&p.truncate(n))?);
    }
    let f1 = vf.f1().compose(&subs, n)?;
    let b_phi = vf.tail_matrix().apply(&lifted)?;
    let mut g = Vec::with_capacity(lifted.len());
    for (i, gi) in vf.g().iter().enumerate() {
        let composed = gi.compose(&subs, n)?;
        let dphi = lifted[i].diff(0)?;
        let transport = TruncSeries::mul(&dphi, &f1, n)?;
        g.push(b_phi[i].truncate(n).add(&composed)?.sub(&transport)?);
    }
    let tail: Vec<usize> = (1..nv).collect();
    for (comp, s) in std::iter::once(&f1).chain(&g).enumerate() {
        if s.restrict_zero(&tail).certified_valuation() != crate::algebra::Valuation::Infinity {
            let degree = s
                .restrict_zero(&tail)
                .certified_valuation()
                .finite()
                .expect("finite valuation");
            return Err(Error::CurveNotInvariant {
                component: comp,
                degree,
            });
        }
    }
    // Drop axis terms that are zero up to enclosure width.
    let clean = |s: &TruncSeries| s.filter(|e| e.iter().skip(1).any(|k| k > 0));
    let f1 = clean(&f1);
    let g: Vec<TruncSeries> = g.iter().map(clean).collect();
    VectorField::new(vf.tail_matrix().clone(), f1, g, n)
}
