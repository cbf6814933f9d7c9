//! Resonance lattices, tail nonresonance certificates and the spectrum of the
//! homological operator.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{ExponentVec, Scalar, SignQuery};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 32;

/// Sign pattern of a list of eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignPattern {
    Empty,
    AllPositive,
    AllNegative,
    Mixed,
    /// Some value is zero or of undecided sign.
    Indefinite,
}

/// Eigenvalues `(λ1, ..., λn)` of the linear part, `λ1` being the zero one.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenData {
    values: Vec<Scalar>,
}

impl EigenData {
    pub fn new(values: Vec<Scalar>) -> Self {
        EigenData { values }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn tail(&self) -> &[Scalar] {
        &self.values[1.min(self.values.len())..]
    }

    pub fn tail_sign(&self) -> SignPattern {
        sign_pattern(self.tail())
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(Scalar::is_exact)
    }
}

pub fn sign_pattern(values: &[Scalar]) -> SignPattern {
    if values.is_empty() {
        return SignPattern::Empty;
    }
    let (mut pos, mut neg) = (false, false);
    for v in values {
        match v.sign() {
            SignQuery::Positive => pos = true,
            SignQuery::Negative => neg = true,
            _ => return SignPattern::Indefinite,
        }
    }
    match (pos, neg) {
        (true, false) => SignPattern::AllPositive,
        (false, true) => SignPattern::AllNegative,
        _ => SignPattern::Mixed,
    }
}

/// All `m ∈ Z_{≥0}^n` with `1 ≤ |m| ≤ cap` and `⟨m, λ⟩ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceLattice {
    pub cap: usize,
    /// Sorted by degree, then lexicographically.
    pub points: Vec<ExponentVec>,
}

impl ResonanceLattice {
    pub fn contains(&self, m: &ExponentVec) -> bool {
        self.points.binary_search_by(|p| order(p, m)).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.points.is_empty()
    }
}

fn order(a: &ExponentVec, b: &ExponentVec) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.cmp(b))
}

fn exact_values(lambda: &[Scalar]) -> Result<Vec<BigRational>> {
    lambda
        .iter()
        .map(|v| v.as_rational().cloned().ok_or(Error::NonRationalEigenvalues))
        .collect()
}

/// Enumerates the resonance lattice of rational eigenvalues.
///
/// Branches whose partial sum can no longer return to zero within the
/// remaining degree are pruned.
pub fn resonance_lattice(lambda: &[Scalar], cap: usize) -> Result<ResonanceLattice> {
    let lam = exact_values(lambda)?;
    let n = lam.len();
    // suffix extremes of min(0, λ) and max(0, λ) over indices i..n
    let mut lo = vec![BigRational::zero(); n + 1];
    let mut hi = vec![BigRational::zero(); n + 1];
    for i in (0..n).rev() {
        lo[i] = if lam[i] < lo[i + 1] { lam[i].clone() } else { lo[i + 1].clone() };
        hi[i] = if lam[i] > hi[i + 1] { lam[i].clone() } else { hi[i + 1].clone() };
    }
    let mut points = Vec::new();
    let mut m = vec![0u32; n];
    enumerate(&lam, &lo, &hi, 0, cap, &BigRational::zero(), &mut m, &mut points);
    points.sort_by(order);
    Ok(ResonanceLattice { cap, points })
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    lam: &[BigRational],
    lo: &[BigRational],
    hi: &[BigRational],
    i: usize,
    budget: usize,
    partial: &BigRational,
    m: &mut Vec<u32>,
    out: &mut Vec<ExponentVec>,
) {
    let n = lam.len();
    if i == n {
        if partial.is_zero() && m.iter().any(|&k| k > 0) {
            out.push(ExponentVec::new(m.clone()));
        }
        return;
    }
    let b = BigRational::from_integer(budget.into());
    let reach_lo = &lo[i] * &b;
    let reach_hi = &hi[i] * &b;
    let need = -partial;
    if need < reach_lo || need > reach_hi {
        return;
    }
    let mut s = partial.clone();
    for k in 0..=budget {
        m[i] = k as u32;
        enumerate(lam, lo, hi, i + 1, budget - k, &s, m, out);
        s += &lam[i];
    }
    m[i] = 0;
}

/// Lower bounds on `|⟨m*, λ*⟩|` over all tail exponents of each degree.
#[derive(Clone, Debug, PartialEq)]
pub struct TailCertificate {
    pub cap: usize,
    /// `min_divisor[d - 1]` bounds degree `d` from below; exact for rational
    /// eigenvalues.
    pub min_divisor: Vec<BigRational>,
    /// Working precision of the check, `None` when exact.
    pub precision: Option<u32>,
}

impl TailCertificate {
    pub fn bound(&self, degree: usize) -> Option<&BigRational> {
        degree.checked_sub(1).and_then(|i| self.min_divisor.get(i))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TailCheck {
    Certified(TailCertificate),
    /// Some `m*` with `1 ≤ |m*| ≤ cap` and `⟨m*, λ*⟩ = 0`.
    Resonant(ExponentVec),
}

/// `⟨m, λ⟩` in the arithmetic of `λ`.
pub fn pairing(m: &ExponentVec, lambda: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (k, l) in m.iter().zip(lambda) {
        if k > 0 && !l.is_zero() {
            acc += &(&Scalar::from_int(k as i64) * l);
        }
    }
    acc
}

/// Lower bound on `|s|` as a rational; zero when `s` may vanish.
pub fn abs_lower_bound(s: &Scalar) -> BigRational {
    match s {
        Scalar::Exact(q) => q.abs(),
        Scalar::Real(b) => b.abs_lower().to_rational(),
    }
}

/// Certifies `⟨m*, λ*⟩ ≠ 0` for all `1 ≤ |m*| ≤ cap`, or returns the first
/// resonant exponent (by degree, then lexicographically).
///
/// Fails with [`Error::PrecisionExhausted`] when an enclosure straddles zero.
pub fn certify_tail_nonresonant(tail: &[Scalar], cap: usize) -> Result<TailCheck> {
    let k = tail.len();
    let precision = tail.iter().filter_map(Scalar::precision).max();
    let mut min_divisor = Vec::with_capacity(cap);
    for d in 1..=cap {
        let mut best: Option<BigRational> = None;
        for m in ExponentVec::all_of_degree(k, d) {
            let s = pairing(&m, tail);
            match s.sign() {
                SignQuery::Zero => return Ok(TailCheck::Resonant(m)),
                SignQuery::Undecided => {
                    return Err(Error::PrecisionExhausted {
                        bits: precision.unwrap_or(0),
                    })
                }
                _ => {}
            }
            let lb = abs_lower_bound(&s);
            if best.as_ref().map_or(true, |b| lb < *b) {
                best = Some(lb);
            }
        }
        if let Some(b) = best {
            min_divisor.push(b);
        }
    }
    Ok(TailCheck::Certified(TailCertificate {
        cap,
        min_divisor,
        precision,
    }))
}

/// Eigenvalues of `h ↦ ⟨∇h, A x⟩ - ν h` on degree-`r` vector polynomials:
/// the numbers `⟨k, μ⟩ - ν_j`, listed by `k` (lexicographic), then `j`.
pub fn operator_spectrum(mu: &[Scalar], nu: &[Scalar], r: usize) -> Vec<Scalar> {
    let mut out = Vec::new();
    for k in ExponentVec::all_of_degree(mu.len(), r) {
        let base = pairing(&k, mu);
        for v in nu {
            out.push(&base - v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn lattice_examples() {
        let l = resonance_lattice(&ints(&[0, -1, -2]), 2).unwrap();
        let pts: Vec<Vec<u32>> = l.points.iter().map(|p| p.as_slice().to_vec()).collect();
        assert_eq!(pts, vec![vec![1, 0, 0], vec![2, 0, 0]]);

        let l = resonance_lattice(&ints(&[0, 1, -1]), 2).unwrap();
        let pts: Vec<Vec<u32>> = l.points.iter().map(|p| p.as_slice().to_vec()).collect();
        assert_eq!(pts, vec![vec![1, 0, 0], vec![0, 1, 1], vec![2, 0, 0]]);
    }

    #[test]
    fn tail_examples() {
        match certify_tail_nonresonant(&ints(&[-1, -2]), 4).unwrap() {
            TailCheck::Certified(c) => {
                assert!(c.min_divisor.iter().all(|b| *b >= BigRational::from_integer(1.into())));
            }
            other => panic!("unexpected {:?}", other),
        }
        assert_eq!(
            certify_tail_nonresonant(&ints(&[1, -1]), 4).unwrap(),
            TailCheck::Resonant(ExponentVec::new(vec![1, 1]))
        );
    }

    #[test]
    fn spectrum_example() {
        let s = operator_spectrum(&ints(&[1, 2]), &ints(&[1, 2]), 2);
        // k = (0,2), (1,1), (2,0) give ⟨k,μ⟩ = 4, 3, 2
        assert_eq!(s, ints(&[3, 2, 2, 1, 1, 0]));
    }
}
