//! Degree-by-degree construction of formal first integrals for straightened
//! fields, residual checks, and nonintegrability certificates.

use num_rational::BigRational;
use rayon::prelude::*;

use crate::algebra::{ExponentVec, HomogPoly, Scalar, TruncSeries, Valuation};
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::homological::HomOperator;
use crate::spectral::{certify_tail_nonresonant, TailCertificate, TailCheck};

#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegralResult {
    pub h: TruncSeries,
    pub leading_degree: usize,
    pub leading_coeff: Scalar,
    /// Coefficients chosen for `x1^d`, `d > m`, where the recursion leaves
    /// them free.
    pub free_constants: Vec<(usize, Scalar)>,
    /// Valuation of `⟨∇H, F⟩` through the truncation degree; certified
    /// (coefficients whose enclosure contains zero are ignored).
    pub residual_valuation: Valuation,
    /// Largest coefficient magnitude of `H` in each degree.
    pub sup_norms: Vec<f64>,
    pub certificate: TailCertificate,
}

fn certify(vf: &VectorField, cap: usize) -> Result<TailCertificate> {
    match certify_tail_nonresonant(vf.tail_eigenvalues(), cap)? {
        TailCheck::Certified(c) => Ok(c),
        TailCheck::Resonant(m) => Err(Error::ResonantTail(m)),
    }
}

/// Kernel of `L*` on all homogeneous polynomials of degree `m`.
///
/// Under tail nonresonance through `m` this is spanned by `x1^m`.
pub fn leading_kernel(vf: &VectorField, m: usize) -> Result<Vec<HomogPoly>> {
    certify(vf, m)?;
    let mut out = Vec::new();
    for p in 0..=m {
        let op = HomOperator::assemble(vf.tail_matrix(), p as u32, m - p);
        out.extend(op.kernel_basis()?);
    }
    Ok(out)
}

pub fn build_first_integral(
    vf: &VectorField,
    n: usize,
    m: usize,
    a_m: &Scalar,
) -> Result<FirstIntegralResult> {
    build_first_integral_with(vf, n, m, a_m, &[])
}

/// Like [`build_first_integral`], with `free[j]` used as the coefficient of
/// `x1^(m + 1 + j)` (zero when absent).
pub fn build_first_integral_with(
    vf: &VectorField,
    n: usize,
    m: usize,
    a_m: &Scalar,
    free: &[Scalar],
) -> Result<FirstIntegralResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("leading degree must be at least 1".into()));
    }
    if a_m.is_zero() {
        return Err(Error::InvalidArgument("leading coefficient must be nonzero".into()));
    }
    if n < m {
        return Err(Error::InvalidArgument(format!(
            "truncation {} below the leading degree {}",
            n, m
        )));
    }
    if !vf.is_straightened() {
        return Err(Error::NotStraightened);
    }
    let needed = n + 1 - m;
    if vf.trunc() < needed {
        return Err(Error::TruncationBudget {
            requested: needed,
            available: vf.trunc(),
        });
    }
    let certificate = certify(vf, n)?;

    let nv = vf.dim();
    let x1_pow = |d: usize| {
        let mut e = vec![0u32; nv];
        e[0] = d as u32;
        ExponentVec::new(e)
    };

    let mut h = TruncSeries::zero(nv, n);
    h.add_term(x1_pow(m), a_m.clone());
    // grads[k][i] = ∂H_k/∂x_i
    let mut grads: Vec<Vec<HomogPoly>> = vec![Vec::new(); n + 1];
    grads[m] = gradient(h.grade(m)?, nv);
    let mut free_constants = Vec::new();

    for d in m + 1..=n {
        let mut rhs = HomogPoly::zero(nv, d);
        for k in m..d {
            let s = d - k + 1;
            for (i, fi) in std::iter::once(vf.f1()).chain(vf.g()).enumerate() {
                let part = fi.grade(s)?;
                if !part.is_zero() && !grads[k][i].is_zero() {
                    part.mul_into(&grads[k][i], &mut rhs);
                }
            }
        }
        let rhs = rhs.neg();

        let blocks: Vec<Result<HomogPoly>> = (0..d)
            .into_par_iter()
            .map(|p| {
                let block = rhs.filter(|e| e.get(0) as usize == p);
                if block.is_zero() {
                    return Ok(HomogPoly::zero(nv, d));
                }
                HomOperator::assemble(vf.tail_matrix(), p as u32, d - p).solve(&block)
            })
            .collect();
        let axis = rhs.filter(|e| e.get(0) as usize == d);
        if let Some((e, _)) = axis.terms().next() {
            return Err(Error::BadRhs(e.clone()));
        }
        let mut hd = HomogPoly::zero(nv, d);
        for b in blocks {
            hd = hd.add(&b?);
        }
        let c = free.get(d - m - 1).cloned().unwrap_or_else(Scalar::zero);
        hd.add_term(x1_pow(d), c.clone());
        free_constants.push((d, c));
        grads[d] = gradient(&hd, nv);
        h.add_part(&hd);
    }

    let res = residual(vf, &h, n)?;
    let residual_valuation = if res.is_exact() {
        res.valuation()
    } else {
        res.certified_valuation()
    };
    Ok(FirstIntegralResult {
        sup_norms: h.degree_sup_norms(),
        h,
        leading_degree: m,
        leading_coeff: a_m.clone(),
        free_constants,
        residual_valuation,
        certificate,
    })
}

fn gradient(p: &HomogPoly, nv: usize) -> Vec<HomogPoly> {
    (0..nv).map(|i| p.diff(i)).collect()
}

/// `⟨∇H, F⟩` through degree `n`, with `F` the full right-hand side.
pub fn residual(vf: &VectorField, h: &TruncSeries, n: usize) -> Result<TruncSeries> {
    if h.nvars() != vf.dim() {
        return Err(Error::DimensionMismatch {
            expected: vf.dim(),
            found: h.nvars(),
        });
    }
    if h.trunc() < n {
        return Err(Error::TruncationBudget {
            requested: n,
            available: h.trunc(),
        });
    }
    let mut out = TruncSeries::zero(vf.dim(), n);
    for (i, fi) in vf.components().iter().enumerate() {
        let dh = h.diff(i)?;
        let term = TruncSeries::mul(fi, &dh, n)?;
        out = out.add(&term)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeBound {
    pub degree: usize,
    /// Lower bound on `min |⟨k, λ⟩|` over `|k| = degree`.
    pub min_divisor: BigRational,
}

/// Certificate that `h ↦ ⟨∇h, A x⟩` has trivial kernel on each degree.
#[derive(Clone, Debug, PartialEq)]
pub struct NonintReport {
    pub degree: usize,
    pub bounds: Vec<DegreeBound>,
    pub precision: Option<u32>,
}

/// For diagonal `A = diag(λ)`, certifies that no nonzero homogeneous
/// polynomial of degree `1..=n` is annihilated by `⟨∇h, A x⟩`, so that no
/// formal first integral exists through that degree.
pub fn nonintegrability_report(lambda: &[Scalar], n: usize) -> Result<NonintReport> {
    match certify_tail_nonresonant(lambda, n)? {
        TailCheck::Resonant(k) => Err(Error::ResonantSpectrum(k)),
        TailCheck::Certified(c) => Ok(NonintReport {
            degree: n,
            bounds: c
                .min_divisor
                .iter()
                .enumerate()
                .map(|(i, b)| DegreeBound {
                    degree: i + 1,
                    min_divisor: b.clone(),
                })
                .collect(),
            precision: c.precision,
        }),
    }
}
