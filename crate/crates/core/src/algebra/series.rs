use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use super::monomial::ExponentVec;
use super::poly::HomogPoly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Order of a series: least degree with a nonzero part, or infinity for the
/// zero series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(usize),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// Whether the valuation exceeds `n` (always true for infinity).
    pub fn exceeds(self, n: usize) -> bool {
        match self {
            Valuation::Finite(v) => v > n,
            Valuation::Infinity => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Multivariate power series known exactly through a truncation degree,
/// stored as its homogeneous parts.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries {
    nvars: usize,
    trunc: usize,
    parts: Vec<HomogPoly>,
}

impl TruncSeries {
    pub fn zero(nvars: usize, trunc: usize) -> Self {
        TruncSeries {
            nvars,
            trunc,
            parts: (0..=trunc).map(|d| HomogPoly::zero(nvars, d)).collect(),
        }
    }

    pub fn constant(nvars: usize, trunc: usize, c: Scalar) -> Self {
        let mut s = TruncSeries::zero(nvars, trunc);
        s.add_term(ExponentVec::zeros(nvars), c);
        s
    }

    pub fn one(nvars: usize, trunc: usize) -> Self {
        TruncSeries::constant(nvars, trunc, Scalar::one())
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(nvars: usize, trunc: usize, i: usize) -> Self {
        let mut s = TruncSeries::zero(nvars, trunc);
        s.add_term(ExponentVec::unit(nvars, i), Scalar::one());
        s
    }

    pub fn from_terms<I>(nvars: usize, trunc: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVec, Scalar)>,
    {
        let mut s = TruncSeries::zero(nvars, trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn from_parts(nvars: usize, parts: Vec<HomogPoly>) -> Self {
        assert!(!parts.is_empty(), "a series needs at least the degree-0 part");
        for (d, p) in parts.iter().enumerate() {
            assert_eq!(p.degree(), d);
            assert_eq!(p.nvars(), nvars);
        }
        TruncSeries {
            nvars,
            trunc: parts.len() - 1,
            parts,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn parts(&self) -> &[HomogPoly] {
        &self.parts
    }

    /// Adds `c * x^exp`; terms above the truncation degree are dropped.
    pub fn add_term(&mut self, exp: ExponentVec, c: Scalar) {
        assert_eq!(exp.nvars(), self.nvars, "exponent arity");
        let d = exp.degree();
        if d <= self.trunc {
            self.parts[d].add_term(exp, c);
        }
    }

    pub fn add_part(&mut self, part: &HomogPoly) {
        let d = part.degree();
        if d <= self.trunc {
            self.parts[d] = self.parts[d].add(part);
        }
    }

    pub fn coeff(&self, exp: &ExponentVec) -> Option<&Scalar> {
        self.parts.get(exp.degree()).and_then(|p| p.coeff(exp))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVec, &Scalar)> {
        self.parts.iter().flat_map(|p| p.terms())
    }

    pub fn num_terms(&self) -> usize {
        self.parts.iter().map(HomogPoly::len).sum()
    }

    /// The degree-`d` part.
    pub fn grade(&self, d: usize) -> Result<&HomogPoly> {
        self.parts.get(d).ok_or(Error::DegreeOutOfRange {
            degree: d,
            trunc: self.trunc,
        })
    }

    pub fn valuation(&self) -> Valuation {
        self.parts
            .iter()
            .position(|p| !p.is_zero())
            .map_or(Valuation::Infinity, Valuation::Finite)
    }

    /// Valuation that ignores coefficients whose enclosure contains zero.
    pub fn certified_valuation(&self) -> Valuation {
        self.parts
            .iter()
            .position(|p| p.terms().any(|(_, c)| c.is_certainly_nonzero()))
            .map_or(Valuation::Infinity, Valuation::Finite)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation() == Valuation::Infinity
    }

    /// Lowers the truncation degree to `min(trunc, n)`.
    pub fn truncate(&self, n: usize) -> TruncSeries {
        let n = n.min(self.trunc);
        TruncSeries {
            nvars: self.nvars,
            trunc: n,
            parts: self.parts[..=n].to_vec(),
        }
    }

    /// Raises the truncation degree, treating the series as a polynomial.
    pub fn extend_polynomial(&self, n: usize) -> TruncSeries {
        let mut out = self.clone();
        for d in self.trunc + 1..=n {
            out.parts.push(HomogPoly::zero(self.nvars, d));
        }
        out.trunc = out.trunc.max(n);
        out
    }

    fn check_dims(&self, other: &TruncSeries) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    fn zip_parts(
        &self,
        other: &TruncSeries,
        f: impl Fn(&HomogPoly, &HomogPoly) -> HomogPoly,
    ) -> Result<TruncSeries> {
        self.check_dims(other)?;
        let trunc = self.trunc.min(other.trunc);
        Ok(TruncSeries {
            nvars: self.nvars,
            trunc,
            parts: (0..=trunc)
                .map(|d| f(&self.parts[d], &other.parts[d]))
                .collect(),
        })
    }

    /// Sum, truncated to the smaller truncation degree.
    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.zip_parts(other, HomogPoly::add)
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.zip_parts(other, HomogPoly::sub)
    }

    pub fn neg(&self) -> TruncSeries {
        self.map_parts(HomogPoly::neg)
    }

    pub fn scale(&self, k: &Scalar) -> TruncSeries {
        self.map_parts(|p| p.scale(k))
    }

    pub fn map_parts(&self, f: impl Fn(&HomogPoly) -> HomogPoly) -> TruncSeries {
        TruncSeries {
            nvars: self.nvars,
            trunc: self.trunc,
            parts: self.parts.iter().map(f).collect(),
        }
    }

    /// Keeps only the monomials satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&ExponentVec) -> bool) -> TruncSeries {
        self.map_parts(|p| p.filter(&keep))
    }

    /// Restriction to the subspace where the listed variables vanish.
    pub fn restrict_zero(&self, vars: &[usize]) -> TruncSeries {
        self.filter(|e| vars.iter().all(|&i| e.get(i) == 0))
    }

    /// Highest degree through which `a * b` is determined by the operands.
    pub fn product_budget(a: &TruncSeries, b: &TruncSeries) -> Option<usize> {
        match (a.valuation(), b.valuation()) {
            (Valuation::Finite(va), Valuation::Finite(vb)) => Some((a.trunc + vb).min(b.trunc + va)),
            _ => None,
        }
    }

    /// Degree-`d` part of `a * b`.
    pub fn product_grade(a: &TruncSeries, b: &TruncSeries, d: usize) -> HomogPoly {
        let mut out = HomogPoly::zero(a.nvars, d);
        let lo = d.saturating_sub(b.trunc);
        let hi = d.min(a.trunc);
        for i in lo..=hi {
            let pa = &a.parts[i];
            let pb = &b.parts[d - i];
            if !pa.is_zero() && !pb.is_zero() {
                pa.mul_into(pb, &mut out);
            }
        }
        out
    }

    /// Graded Cauchy product, exact through degree `n`.
    pub fn mul(a: &TruncSeries, b: &TruncSeries, n: usize) -> Result<TruncSeries> {
        a.check_dims(b)?;
        if let Some(avail) = TruncSeries::product_budget(a, b) {
            if n > avail {
                return Err(Error::TruncationBudget {
                    requested: n,
                    available: avail,
                });
            }
        }
        let parts: Vec<HomogPoly> = if a.num_terms() * b.num_terms() > 4096 {
            (0..=n)
                .into_par_iter()
                .map(|d| TruncSeries::product_grade(a, b, d))
                .collect()
        } else {
            (0..=n).map(|d| TruncSeries::product_grade(a, b, d)).collect()
        };
        Ok(TruncSeries {
            nvars: a.nvars,
            trunc: n,
            parts,
        })
    }

    /// Product truncated at the largest determined degree (capped at `n`).
    pub fn mul_capped(a: &TruncSeries, b: &TruncSeries, n: usize) -> Result<TruncSeries> {
        let n = TruncSeries::product_budget(a, b).map_or(n, |avail| avail.min(n));
        TruncSeries::mul(a, b, n)
    }

    /// Partial derivative with respect to variable `i`; truncation drops by one.
    pub fn diff(&self, i: usize) -> Result<TruncSeries> {
        if i >= self.nvars {
            return Err(Error::BadVariable {
                index: i,
                nvars: self.nvars,
            });
        }
        if self.trunc == 0 {
            return Ok(TruncSeries::zero(self.nvars, 0));
        }
        Ok(TruncSeries {
            nvars: self.nvars,
            trunc: self.trunc - 1,
            parts: self.parts[1..].iter().map(|p| p.diff(i)).collect(),
        })
    }

    /// Substitutes `subs[i]` for variable `i`, exact through degree `n`.
    ///
    /// Every substituted series must have no constant term. The result lives
    /// in the variables of the substituted series.
    pub fn compose(&self, subs: &[TruncSeries], n: usize) -> Result<TruncSeries> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: subs.len(),
            });
        }
        let target_vars = subs.first().map_or(0, |s| s.nvars);
        let mut vmin = usize::MAX;
        let mut tmin = usize::MAX;
        for (i, s) in subs.iter().enumerate() {
            if s.nvars != target_vars {
                return Err(Error::DimensionMismatch {
                    expected: target_vars,
                    found: s.nvars,
                });
            }
            match s.valuation() {
                Valuation::Finite(0) => return Err(Error::ValuationTooLow { index: i }),
                Valuation::Finite(v) => vmin = vmin.min(v),
                Valuation::Infinity => {}
            }
            tmin = tmin.min(s.trunc);
        }
        if vmin != usize::MAX {
            let avail = ((self.trunc + 1) * vmin - 1).min(tmin);
            if n > avail {
                return Err(Error::TruncationBudget {
                    requested: n,
                    available: avail,
                });
            }
        }

        let mut cache: HashMap<ExponentVec, TruncSeries> = HashMap::new();
        let mut out = TruncSeries::zero(target_vars, n);
        for (e, c) in self.terms() {
            let value = monomial_value(e, subs, n, &mut cache)?;
            for p in &value.parts {
                for (ev, cv) in p.terms() {
                    out.add_term(ev.clone(), c * cv);
                }
            }
        }
        Ok(out)
    }

    /// Re-embeds the series into `nvars` variables, sending variable `i` to
    /// `mapping[i]`.
    pub fn remap_vars(&self, nvars: usize, mapping: &[usize]) -> TruncSeries {
        assert_eq!(mapping.len(), self.nvars);
        let mut out = TruncSeries::zero(nvars, self.trunc);
        for (e, c) in self.terms() {
            let mut v = vec![0u32; nvars];
            for (i, k) in e.iter().enumerate() {
                v[mapping[i]] += k;
            }
            out.add_term(ExponentVec::new(v), c.clone());
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.parts.iter().map(|p| p.eval_f64(x)).sum()
    }

    /// Largest coefficient magnitude per degree, as `f64`.
    pub fn degree_sup_norms(&self) -> Vec<f64> {
        self.parts.iter().map(HomogPoly::max_abs_f64).collect()
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> TruncSeries {
        self.map_parts(|p| p.map_coeffs(&f))
    }

    pub fn is_exact(&self) -> bool {
        self.terms().all(|(_, c)| c.is_exact())
    }
}

fn monomial_value(
    e: &ExponentVec,
    subs: &[TruncSeries],
    n: usize,
    cache: &mut HashMap<ExponentVec, TruncSeries>,
) -> Result<TruncSeries> {
    if let Some(v) = cache.get(e) {
        return Ok(v.clone());
    }
    let nvars = subs.first().map_or(0, |s| s.nvars);
    let value = match (0..e.nvars()).rev().find(|&i| e.get(i) > 0) {
        None => TruncSeries::one(nvars, n),
        Some(i) => {
            let rest = monomial_value(&e.lower(i).expect("positive"), subs, n, cache)?;
            let sub = subs[i].truncate(n).extend_polynomial(n);
            multiply_truncated(&rest, &sub, n)
        }
    };
    cache.insert(e.clone(), value.clone());
    Ok(value)
}

/// Product of two series both known through `n`, keeping degrees `<= n`.
fn multiply_truncated(a: &TruncSeries, b: &TruncSeries, n: usize) -> TruncSeries {
    let mut out = TruncSeries::zero(a.nvars, n);
    for (i, pa) in a.parts.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (j, pb) in b.parts.iter().enumerate() {
            if i + j > n {
                break;
            }
            if !pb.is_zero() {
                pa.mul_into(pb, &mut out.parts[i + j]);
            }
        }
    }
    out
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", p)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", self.trunc + 1)
    }
}
