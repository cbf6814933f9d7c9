//! The homological operator `L* = ⟨B y, ∂/∂y⟩` on one block of monomials
//! `x1^p y^q`, `|q| = r`.
//!
//! `L*` maps `x1^p y^q` to `⟨λ*, q⟩ x1^p y^q` plus, for each superdiagonal
//! link `i → i+1`, the term `q_i x1^p y^(q - e_i + e_(i+1))`. The nilpotent
//! part raises the chain weight `Σ i q_i` by one, so ordering monomials by
//! weight makes the operator triangular and a single sweep solves it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{ExponentVec, HomogPoly, Scalar, SignQuery};
use crate::error::{Error, Result};
use crate::field::JordanMatrix;
use crate::spectral::pairing;

#[derive(Clone, Debug)]
pub struct HomOperator {
    b: JordanMatrix,
    p: u32,
    r: usize,
    /// Full exponents `(p, q)`, ordered by chain weight then lexicographically.
    basis: Vec<ExponentVec>,
    index: HashMap<ExponentVec, usize>,
    diag: Vec<Scalar>,
    /// `sources[t]`: `(s, k)` such that `L*` sends basis `s` to `k` times basis `t`.
    sources: Vec<Vec<(usize, u32)>>,
}

fn chain_weight(e: &ExponentVec) -> usize {
    e.iter().enumerate().map(|(i, k)| i * k as usize).sum()
}

impl HomOperator {
    pub fn assemble(b: &JordanMatrix, p: u32, r: usize) -> HomOperator {
        let k = b.dim();
        let tail = b.eigenvalues();
        let mut qs = ExponentVec::all_of_degree(k, r);
        qs.sort_by(|a, c| chain_weight(a).cmp(&chain_weight(c)).then_with(|| a.cmp(c)));
        let full = |q: &ExponentVec| {
            let mut v = Vec::with_capacity(k + 1);
            v.push(p);
            v.extend(q.iter());
            ExponentVec::new(v)
        };
        let basis: Vec<ExponentVec> = qs.iter().map(full).collect();
        let index: HashMap<ExponentVec, usize> =
            basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let diag: Vec<Scalar> = qs.iter().map(|q| pairing(q, tail)).collect();
        let mut sources = vec![Vec::new(); basis.len()];
        for (s, q) in qs.iter().enumerate() {
            for i in 0..k.saturating_sub(1) {
                let qi = q.get(i);
                if b.is_linked(i) && qi > 0 {
                    let t = q.lower(i).expect("positive").raise(i + 1);
                    sources[index[&full(&t)]].push((s, qi));
                }
            }
        }
        HomOperator {
            b: b.clone(),
            p,
            r,
            basis,
            index,
            diag,
            sources,
        }
    }

    pub fn nvars(&self) -> usize {
        self.b.dim() + 1
    }

    pub fn degree(&self) -> usize {
        self.p as usize + self.r
    }

    pub fn spectator_power(&self) -> u32 {
        self.p
    }

    pub fn tail_degree(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ExponentVec] {
        &self.basis
    }

    /// Diagonal entries `⟨λ*, q⟩`, aligned with [`Self::basis`].
    pub fn diagonal(&self) -> &[Scalar] {
        &self.diag
    }

    /// Matrix entry `(row t, column s)` with respect to [`Self::basis`].
    pub fn entry(&self, t: usize, s: usize) -> Scalar {
        if t == s {
            return self.diag[t].clone();
        }
        self.sources[t]
            .iter()
            .find(|(src, _)| *src == s)
            .map_or_else(Scalar::zero, |(_, k)| Scalar::from_int(*k as i64))
    }

    fn check_block(&self, h: &HomogPoly) -> Result<()> {
        if h.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: h.nvars(),
            });
        }
        if h.degree() != self.degree() {
            return Err(Error::DegreeOutOfRange {
                degree: h.degree(),
                trunc: self.degree(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, h: &HomogPoly) -> Result<HomogPoly> {
        self.check_block(h)?;
        let mut out = HomogPoly::zero(self.nvars(), self.degree());
        for (e, c) in h.terms() {
            let &s = self.index.get(e).ok_or_else(|| Error::BadRhs(e.clone()))?;
            out.add_term(e.clone(), &self.diag[s] * c);
            let q = &e.as_slice()[1..];
            for i in 0..q.len().saturating_sub(1) {
                if self.b.is_linked(i) && q[i] > 0 {
                    let t = e.lower(i + 1).expect("positive").raise(i + 2);
                    out.add_term(t, c * &Scalar::from_int(q[i] as i64));
                }
            }
        }
        Ok(out)
    }

    /// Solves `L* h = rhs` in one sweep.
    ///
    /// A zero numerator yields a zero coefficient without division. A nonzero
    /// numerator over a vanishing diagonal entry is [`Error::ZeroDivisor`].
    pub fn solve(&self, rhs: &HomogPoly) -> Result<HomogPoly> {
        self.check_block(rhs)?;
        for (e, _) in rhs.terms() {
            if self.r == 0 || !self.index.contains_key(e) {
                return Err(Error::BadRhs(e.clone()));
            }
        }
        let mut coef: Vec<Scalar> = Vec::with_capacity(self.dim());
        let mut out = HomogPoly::zero(self.nvars(), self.degree());
        for (t, e) in self.basis.iter().enumerate() {
            let mut num = rhs.coeff(e).cloned().unwrap_or_else(Scalar::zero);
            for &(s, k) in &self.sources[t] {
                if !coef[s].is_zero() {
                    num -= &(&coef[s] * &Scalar::from_int(k as i64));
                }
            }
            let c = if num.is_zero() {
                Scalar::zero()
            } else {
                match self.diag[t].sign() {
                    SignQuery::Zero => return Err(Error::ZeroDivisor(e.clone())),
                    SignQuery::Undecided => {
                        return Err(Error::PrecisionExhausted {
                            bits: self.diag[t].precision().unwrap_or(0),
                        })
                    }
                    _ => num.checked_div(&self.diag[t]).expect("nonzero divisor"),
                }
            };
            out.add_term(e.clone(), c.clone());
            coef.push(c);
        }
        Ok(out)
    }

    /// Basis of `ker L*` on the block.
    ///
    /// The kernel lies in the span of monomials with `⟨λ*, q⟩ = 0`, where
    /// `L*` reduces to its integer nilpotent part.
    pub fn kernel_basis(&self) -> Result<Vec<HomogPoly>> {
        let mut zero_idx = Vec::new();
        for (i, d) in self.diag.iter().enumerate() {
            match d.sign() {
                SignQuery::Zero => zero_idx.push(i),
                SignQuery::Undecided => {
                    return Err(Error::PrecisionExhausted {
                        bits: d.precision().unwrap_or(0),
                    })
                }
                _ => {}
            }
        }
        let pos: HashMap<usize, usize> = zero_idx.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let z = zero_idx.len();
        let mut rows = vec![vec![BigRational::zero(); z]; z];
        for (a, &t) in zero_idx.iter().enumerate() {
            for &(s, k) in &self.sources[t] {
                if let Some(&col) = pos.get(&s) {
                    rows[a][col] = BigRational::from_integer(BigInt::from(k));
                }
            }
        }
        Ok(nullspace(rows, z)
            .into_iter()
            .map(|v| {
                let mut h = HomogPoly::zero(self.nvars(), self.degree());
                for (a, c) in v.into_iter().enumerate() {
                    h.add_term(self.basis[zero_idx[a]].clone(), Scalar::rational(c));
                }
                h
            })
            .collect())
    }
}

/// Rational nullspace basis via reduced row echelon form.
pub(crate) fn nullspace(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[i][free].clone();
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u32]) -> ExponentVec {
        ExponentVec::new(v.to_vec())
    }

    #[test]
    fn diagonal_solve() {
        let b = JordanMatrix::diagonal(vec![Scalar::from_int(-1)]);
        let op = HomOperator::assemble(&b, 1, 1);
        let rhs = HomogPoly::monomial(ev(&[1, 1]), Scalar::one());
        let h = op.solve(&rhs).unwrap();
        assert_eq!(h, HomogPoly::monomial(ev(&[1, 1]), Scalar::from_int(-1)));
    }

    #[test]
    fn jordan_solve() {
        let b = JordanMatrix::new(vec![Scalar::from_int(-1); 2], vec![true]).unwrap();
        let op = HomOperator::assemble(&b, 0, 1);
        // L*(a y1 + b y2) = -a y1 + (a - b) y2
        let rhs = HomogPoly::monomial(ev(&[0, 1, 0]), Scalar::one());
        let h = op.solve(&rhs).unwrap();
        assert_eq!(h.coeff(&ev(&[0, 1, 0])), Some(&Scalar::from_int(-1)));
        assert_eq!(h.coeff(&ev(&[0, 0, 1])), Some(&Scalar::from_int(-1)));
        assert_eq!(op.apply(&h).unwrap(), rhs);
    }

    #[test]
    fn zero_divisor_and_bad_rhs() {
        let b = JordanMatrix::diagonal(vec![Scalar::from_int(1), Scalar::from_int(-1)]);
        let op = HomOperator::assemble(&b, 0, 2);
        let rhs = HomogPoly::monomial(ev(&[0, 1, 1]), Scalar::one());
        assert_eq!(op.solve(&rhs), Err(Error::ZeroDivisor(ev(&[0, 1, 1]))));
        let op0 = HomOperator::assemble(&b, 2, 0);
        let rhs = HomogPoly::monomial(ev(&[2, 0, 0]), Scalar::one());
        assert_eq!(op0.solve(&rhs), Err(Error::BadRhs(ev(&[2, 0, 0]))));
    }

    #[test]
    fn kernels() {
        let b = JordanMatrix::diagonal(vec![Scalar::from_int(-1), Scalar::from_int(-2)]);
        let op = HomOperator::assemble(&b, 3, 0);
        let k = op.kernel_basis().unwrap();
        assert_eq!(k, vec![HomogPoly::monomial(ev(&[3, 0, 0]), Scalar::one())]);
        let b = JordanMatrix::diagonal(vec![Scalar::from_int(1), Scalar::from_int(-1)]);
        let op = HomOperator::assemble(&b, 0, 2);
        assert_eq!(op.kernel_basis().unwrap().len(), 1);
    }
}
