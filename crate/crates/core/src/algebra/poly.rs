use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use super::monomial::ExponentVec;
use super::scalar::Scalar;

/// Homogeneous polynomial of fixed degree, stored sparsely.
///
/// Exactly-zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogPoly {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<ExponentVec, Scalar>,
}

impl HomogPoly {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        HomogPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exp: ExponentVec, coeff: Scalar) -> Self {
        let mut p = HomogPoly::zero(exp.nvars(), exp.degree());
        p.add_term(exp, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &ExponentVec) -> Option<&Scalar> {
        self.terms.get(exp)
    }

    pub fn terms(&self) -> btree_map::Iter<'_, ExponentVec, Scalar> {
        self.terms.iter()
    }

    /// Adds `coeff * x^exp` into the polynomial.
    pub fn add_term(&mut self, exp: ExponentVec, coeff: Scalar) {
        assert_eq!(exp.nvars(), self.nvars, "exponent arity");
        assert_eq!(exp.degree(), self.degree, "exponent degree");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Keeps only the terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&ExponentVec) -> bool) -> HomogPoly {
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> HomogPoly {
        let mut out = HomogPoly::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn add(&self, other: &HomogPoly) -> HomogPoly {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HomogPoly) -> HomogPoly {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> HomogPoly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, k: &Scalar) -> HomogPoly {
        if k.is_zero() {
            return HomogPoly::zero(self.nvars, self.degree);
        }
        self.map_coeffs(|c| c * k)
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        let mut out = HomogPoly::zero(self.nvars, self.degree + other.degree);
        self.mul_into(other, &mut out);
        out
    }

    /// Accumulates `self * other` into `out` (which must have the sum degree).
    pub fn mul_into(&self, other: &HomogPoly, out: &mut HomogPoly) {
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn diff(&self, i: usize) -> HomogPoly {
        let mut out = HomogPoly::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            let k = e.get(i);
            if k > 0 {
                let lowered = e.lower(i).expect("positive exponent");
                out.add_term(lowered, c * &Scalar::from_int(k as i64));
            }
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64()
                    * e.iter()
                        .zip(x)
                        .map(|(k, v)| v.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Largest coefficient magnitude, as `f64`.
    pub fn max_abs_f64(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for (i, p) in e.iter().enumerate() {
                if p > 0 {
                    write!(f, " x{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}
