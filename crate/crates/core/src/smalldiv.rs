//! Liouville-type tail eigenvalues and the divergence of first integrals they
//! cause.
//!
//! The field `x1' = f1(y)`, `y2' = y2`, `y3' = -ζ y3` with
//! `f1 = Σ_{|m*| ≥ 2} a(|m*|) y^m*` and `a(s) = (1/s)(2/3)^s` has the first
//! integral `H = x1 + H2`, where `H2` collects the monomials
//! `-a(|m*|) / (m2 - m3 ζ) y^m*`. When `ζ = Σ 2^(-a_k)` is a Liouville
//! number the divisors at `m* = (p_k, q_k)` are small enough that the root
//! norms of `H` grow without bound along `d_k = p_k + q_k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::ball::ldexp;
use crate::algebra::{
    log2_big, with_precision_doubling, Ball, Dyadic, ExponentVec, Mag, Scalar, SignQuery,
    TruncSeries, MAX_PRECISION,
};
use crate::error::{Error, Result};
use crate::field::{JordanMatrix, VectorField};

/// Absolute slack added around every floating-point logarithm.
const LOG2_SLACK: f64 = 1e-9;

/// Closed interval of `f64`, widened outward whenever it is computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty enclosure [{}, {}]", lo, hi);
        Enclosure { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Enclosure { lo: x, hi: x }
    }

    pub fn widen(self, by: f64) -> Self {
        Enclosure::new(self.lo - by, self.hi + by)
    }

    pub fn add(self, o: Enclosure) -> Self {
        Enclosure::new(self.lo + o.lo, self.hi + o.hi).widen(ulp_slack(self, o))
    }

    pub fn sub(self, o: Enclosure) -> Self {
        self.add(Enclosure::new(-o.hi, -o.lo))
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, o: &Enclosure) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// `2^self`.
    pub fn exp2(self) -> Enclosure {
        Enclosure::new(self.lo.exp2() * (1.0 - 1e-15), self.hi.exp2() * (1.0 + 1e-15))
    }
}

fn ulp_slack(a: Enclosure, b: Enclosure) -> f64 {
    let m = a.lo.abs().max(a.hi.abs()).max(b.lo.abs()).max(b.hi.abs());
    m * f64::EPSILON * 2.0
}

/// `a_1 = 2`, `a_(k+1) = (k+1) 2^(a_k)`.
///
/// Only `a_1..=a_4` fit in memory; `a_4 = 4 · 2^768` has 771 bits and `a_5`
/// would have about `2^770`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiouvilleSchedule {
    terms: Vec<BigInt>,
}

impl LiouvilleSchedule {
    pub const MATERIALIZED: usize = 4;

    pub fn new() -> Self {
        let mut terms = vec![BigInt::from(2)];
        for k in 1..Self::MATERIALIZED {
            let prev = terms[k - 1].to_usize().expect("small exponent");
            terms.push(BigInt::from(k + 1) << prev);
        }
        LiouvilleSchedule { terms }
    }

    /// `a_k` for `1 ≤ k ≤ 4`.
    pub fn exponent(&self, k: usize) -> Result<&BigInt> {
        if k == 0 {
            return Err(Error::InvalidArgument("schedule index starts at 1".into()));
        }
        self.terms.get(k - 1).ok_or(Error::ScheduleOverflow(k))
    }

    /// `(p_k, q_k)` with `q_k = 2^(a_k)` and `p_k / q_k = Σ_{j ≤ k} 2^(-a_j)`.
    pub fn convergent(&self, k: usize) -> Result<(BigInt, BigInt)> {
        let ak = self.small_exponent(k)?;
        let q = BigInt::one() << ak;
        let mut p = BigInt::zero();
        for j in 1..=k {
            p += BigInt::one() << (ak - self.small_exponent(j)?);
        }
        Ok((p, q))
    }

    /// `a_k` as a machine integer; fails past the point where `2^(a_k)` would
    /// not fit in memory.
    fn small_exponent(&self, k: usize) -> Result<usize> {
        self.exponent(k)?
            .to_usize()
            .filter(|&a| a <= 1 << 20)
            .ok_or(Error::ScheduleOverflow(k))
    }
}

impl Default for LiouvilleSchedule {
    fn default() -> Self {
        LiouvilleSchedule::new()
    }
}

/// `ζ` known to `K` terms with a rigorous tail bound.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedZeta {
    terms: usize,
    schedule: LiouvilleSchedule,
    midpoint: Dyadic,
}

/// `K ≤ 3`: the tail bound `2^(1 - a_(K+1))` needs `a_(K+1)` materialized,
/// and the partial sum needs `2^(a_K)` bits.
pub fn liouville_zeta(schedule: &LiouvilleSchedule, k: usize) -> Result<CertifiedZeta> {
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one term".into()));
    }
    if k > 3 {
        return Err(Error::ScheduleOverflow(k));
    }
    let mut mid = Dyadic::zero();
    for j in 1..=k {
        let a = schedule.small_exponent(j)? as i64;
        mid = mid.add(&Dyadic::pow2(-a));
    }
    Ok(CertifiedZeta {
        terms: k,
        schedule: schedule.clone(),
        midpoint: mid,
    })
}

impl CertifiedZeta {
    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn schedule(&self) -> &LiouvilleSchedule {
        &self.schedule
    }

    /// The exact partial sum `Σ_{j ≤ K} 2^(-a_j)`.
    pub fn midpoint(&self) -> &Dyadic {
        &self.midpoint
    }

    /// `log2` of the bound on `ζ - midpoint`, namely `1 - a_(K+1)`.
    pub fn tail_log2(&self) -> BigInt {
        BigInt::one() - self.schedule.exponent(self.terms + 1).expect("K ≤ 3")
    }

    /// Enclosure of `ζ` with the midpoint rounded to `prec` bits.
    pub fn ball(&self, prec: u32) -> Ball {
        let e = self.tail_log2().to_i64().unwrap_or(i64::MIN);
        Ball::new(self.midpoint.clone(), Mag::pow2(e), prec)
    }

    pub fn scalar(&self, prec: u32) -> Scalar {
        Scalar::Real(self.ball(prec))
    }

    /// Exponent-domain check that `0 < |ζ - p_j/q_j| < q_j^(-j)` for
    /// `j = 1..=K`.
    pub fn liouville_instances(&self) -> Result<Vec<LiouvilleInstance>> {
        (1..=self.terms)
            .map(|j| {
                let (p, q) = self.schedule.convergent(j)?;
                let aj = self.schedule.exponent(j)?.clone();
                let next = self.schedule.exponent(j + 1)?.clone();
                Ok(LiouvilleInstance {
                    k: j,
                    p,
                    q,
                    q_log2: aj.clone(),
                    gap_log2_lower: -next.clone(),
                    gap_log2_upper: BigInt::one() - next,
                    bound_log2: -(BigInt::from(j) * aj),
                })
            })
            .collect()
    }
}

/// `2^gap_log2_lower ≤ |ζ - p/q| < 2^gap_log2_upper`, compared with the
/// Liouville bound `q^(-k) = 2^bound_log2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiouvilleInstance {
    pub k: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub q_log2: BigInt,
    pub gap_log2_lower: BigInt,
    pub gap_log2_upper: BigInt,
    pub bound_log2: BigInt,
}

impl LiouvilleInstance {
    pub fn holds(&self) -> bool {
        self.gap_log2_upper < self.bound_log2
    }
}

/// `a(s) = (1/s)(2/3)^s`.
pub fn coefficient_law(s: usize) -> BigRational {
    let s32 = s as u32;
    BigRational::new(
        BigInt::from(2).pow(s32),
        BigInt::from(s) * BigInt::from(3).pow(s32),
    )
}

/// The three-dimensional field `x1' = Σ_{2 ≤ |m*| ≤ n} a(|m*|) y^m*`,
/// `y' = diag(1, -ζ) y`, truncated at degree `n`.
pub fn counterexample_field(zeta: &Scalar, n: usize) -> Result<VectorField> {
    if n < 2 {
        return Err(Error::InvalidArgument("truncation must be at least 2".into()));
    }
    let mut f1 = TruncSeries::zero(3, n);
    for s in 2..=n {
        let a = Scalar::rational(coefficient_law(s));
        for m2 in 0..=s as u32 {
            f1.add_term(ExponentVec::new(vec![0, m2, s as u32 - m2]), a.clone());
        }
    }
    let b = JordanMatrix::diagonal(vec![Scalar::one(), -zeta]);
    VectorField::new(b, f1, vec![TruncSeries::zero(3, n), TruncSeries::zero(3, n)], n)
}

/// Coefficients of `x1^(m-1) y^m*` in `H`, namely
/// `-m a_m a(|m*|) / (m2 - m3 ζ)`, for the given `m* = (m2, m3)`.
pub fn h2_coefficients(
    zeta: &Scalar,
    m: usize,
    a_m: &Scalar,
    mstars: &[(u64, u64)],
) -> Result<Vec<Scalar>> {
    let lead = &Scalar::from_int(m as i64) * a_m;
    mstars
        .iter()
        .map(|&(m2, m3)| {
            let s = (m2 + m3) as usize;
            if s < 2 {
                return Err(Error::InvalidArgument(format!(
                    "exponent ({}, {}) has degree below 2",
                    m2, m3
                )));
            }
            let div = divisor(zeta, m2, m3);
            match div.sign() {
                SignQuery::Zero => {
                    return Err(Error::ZeroDivisor(ExponentVec::new(vec![
                        m as u32 - 1,
                        m2 as u32,
                        m3 as u32,
                    ])))
                }
                SignQuery::Undecided => {
                    return Err(Error::PrecisionExhausted {
                        bits: div.precision().unwrap_or(0),
                    })
                }
                _ => {}
            }
            let num = -(&lead * &Scalar::rational(coefficient_law(s)));
            Ok(num.checked_div(&div).expect("certified nonzero"))
        })
        .collect()
}

/// `m2 - m3 ζ`; exact when `m3 = 0`.
pub fn divisor(zeta: &Scalar, m2: u64, m3: u64) -> Scalar {
    let m2s = Scalar::rational(BigRational::from_integer(BigInt::from(m2)));
    if m3 == 0 {
        return m2s;
    }
    &m2s - &(&Scalar::rational(BigRational::from_integer(BigInt::from(m3))) * zeta)
}

/// [`h2_coefficients`] with `ζ` re-enclosed at doubling precision until every
/// divisor sign is decided.
pub fn h2_coefficients_certified(
    zeta: &CertifiedZeta,
    start_precision: u32,
    m: usize,
    a_m: &Scalar,
    mstars: &[(u64, u64)],
) -> Result<(u32, Vec<Scalar>)> {
    let mut used = start_precision;
    let out = with_precision_doubling(start_precision, MAX_PRECISION, |bits| {
        used = bits;
        h2_coefficients(&zeta.scalar(bits), m, a_m, mstars)
    })?;
    Ok((used, out))
}

/// `log2 |c|` enclosure; lower end is `-inf` when `c` may vanish.
pub fn log2_abs_enclosure(c: &Scalar) -> Enclosure {
    match c {
        Scalar::Exact(q) => {
            if q.is_zero() {
                return Enclosure::point(f64::NEG_INFINITY);
            }
            let v = log2_big(q.numer()) - log2_big(q.denom());
            Enclosure::point(v).widen(LOG2_SLACK)
        }
        Scalar::Real(b) => {
            let hi = b.abs_upper().log2() + LOG2_SLACK;
            let low = b.abs_lower();
            let lo = if low.is_zero() {
                f64::NEG_INFINITY
            } else {
                low.log2_abs() - LOG2_SLACK
            };
            Enclosure::new(lo, hi)
        }
    }
}

/// `r_d = (max_{|α| = d} |c_α|)^(1/d)`, as an enclosure of `log2 r_d` and of
/// `r_d` itself.
#[derive(Clone, Debug, PartialEq)]
pub struct RootNorm {
    pub degree: usize,
    pub log2: Enclosure,
    pub value: Enclosure,
}

pub fn root_norms(by_degree: &[(usize, Vec<Scalar>)]) -> Result<Vec<RootNorm>> {
    by_degree
        .iter()
        .map(|(d, coeffs)| {
            if *d == 0 {
                return Err(Error::InvalidArgument("root norm needs degree ≥ 1".into()));
            }
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for c in coeffs {
                let e = log2_abs_enclosure(c);
                lo = lo.max(e.lo);
                hi = hi.max(e.hi);
            }
            let df = *d as f64;
            let log2 = Enclosure::new(lo / df, hi / df).widen(LOG2_SLACK);
            let value = if hi == f64::NEG_INFINITY {
                Enclosure::point(0.0)
            } else if lo == f64::NEG_INFINITY {
                Enclosure::new(0.0, log2.exp2().hi)
            } else {
                log2.exp2()
            };
            Ok(RootNorm {
                degree: *d,
                log2,
                value,
            })
        })
        .collect()
}

/// Root norms of a series, one per degree `1..=trunc`.
pub fn series_root_norms(s: &TruncSeries) -> Result<Vec<RootNorm>> {
    let parts: Vec<(usize, Vec<Scalar>)> = s
        .parts()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(d, p)| (d, p.terms().map(|(_, c)| c.clone()).collect()))
        .collect();
    root_norms(&parts)
}

/// Root norms of the pure-`y` part of `H` (with `m = 1`, `a_1 = 1`), from
/// the closed form, over the given degrees.
pub fn h2_root_norms(zeta: &Scalar, degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<RootNorm>> {
    let mut parts = Vec::new();
    for d in degrees {
        let mstars: Vec<(u64, u64)> = (0..=d as u64).map(|m2| (m2, d as u64 - m2)).collect();
        parts.push((d, h2_coefficients(zeta, 1, &Scalar::one(), &mstars)?));
    }
    root_norms(&parts)
}

/// One row of the divergence certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceRecord {
    pub k: usize,
    pub p: BigInt,
    pub q_log2: BigInt,
    pub degree: BigInt,
    /// `log2 |p - q ζ| = divisor_log2 + δ` with `0 ≤ δ ≤ 2^divisor_slack_log2`.
    pub divisor_log2: BigInt,
    pub divisor_slack_log2: BigInt,
    pub log2_root_norm: Enclosure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceCertificate {
    pub records: Vec<DivergenceRecord>,
}

impl DivergenceCertificate {
    /// Whether the enclosures of `log2 r_(d_k)` are strictly increasing.
    pub fn is_increasing(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].log2_root_norm.lo > w[0].log2_root_norm.hi)
    }
}

/// Exponent-domain enclosures of `log2 r_(d_k)` for `k = 1..=kmax`, where
/// `d_k = p_k + q_k` and `r_d` is the degree-`d` root norm of `H` (`m = 1`).
///
/// With `|ζ - p_k/q_k| = 2^(-a_(k+1)) (1 + ε)`, `0 ≤ ε ≤ 2^(1 - a_(k+1))`
/// (tighter when `a_(k+2)` is known):
/// `log2 r = log2(2/3) + (a_(k+1) - a_k)/d - log2(d)/d - log2(1 + ε)/d`.
pub fn divergence_certificate(schedule: &LiouvilleSchedule, kmax: usize) -> Result<DivergenceCertificate> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    if kmax > 3 {
        return Err(Error::ScheduleOverflow(kmax));
    }
    let log2_two_thirds = Enclosure::point(1.0 - 3f64.log2()).widen(LOG2_SLACK);
    let mut records = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let (p, q) = schedule.convergent(k)?;
        let ak = schedule.exponent(k)?.clone();
        let next = schedule.exponent(k + 1)?.clone();
        let d = &p + &q;

        let lead = quotient_enclosure(&(&next - &ak), &d);
        let log_d = Enclosure::point(log2_big(&d)).widen(LOG2_SLACK);
        let d_f = big_to_f64_enclosure(&d);
        let log_term = Enclosure::new(log_d.lo / d_f.hi, log_d.hi / d_f.lo).widen(f64::MIN_POSITIVE);
        // ε ≤ 2^(1 + a_(k+1) - a_(k+2)), or 2^(1 - a_(k+1)) past the schedule
        let slack_log2 = match schedule.exponent(k + 2) {
            Ok(after) => BigInt::from(2) + &next - after,
            Err(_) => BigInt::from(2) - &next,
        };
        let eps_term = Enclosure::new(
            -ldexp(1.0, slack_log2.to_i64().unwrap_or(-2000).max(-2000)) / d_f.lo,
            0.0,
        )
        .widen(f64::MIN_POSITIVE);
        let log2_root_norm = log2_two_thirds.add(lead).sub(log_term).add(eps_term);
        records.push(DivergenceRecord {
            k,
            p,
            q_log2: ak.clone(),
            degree: d,
            divisor_log2: &ak - &next,
            divisor_slack_log2: slack_log2,
            log2_root_norm,
        });
    }
    Ok(DivergenceCertificate { records })
}

fn quotient_enclosure(num: &BigInt, den: &BigInt) -> Enclosure {
    let (mid, e) = Dyadic::div_round(&Dyadic::new(num.clone(), 0), &Dyadic::new(den.clone(), 0), 96);
    let m = mid.to_f64();
    Enclosure::point(m).widen(m.abs() * 4.0 * f64::EPSILON + ldexp(1.0, e.max(-1074)))
}

fn big_to_f64_enclosure(v: &BigInt) -> Enclosure {
    let x = Dyadic::new(v.clone(), 0).to_f64();
    Enclosure::new(x * (1.0 - 4.0 * f64::EPSILON), x * (1.0 + 4.0 * f64::EPSILON))
}
