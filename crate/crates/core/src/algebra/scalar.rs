use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::{Ball, Dyadic, SignQuery};

/// A coefficient: an exact rational, or a certified real enclosure.
///
/// Mixed arithmetic promotes the exact operand to a ball at the precision of
/// the other operand.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Real(Ball),
}

/// Which arithmetic a pipeline runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    ExactRational,
    CertifiedReal { precision: u32 },
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(q: BigRational) -> Scalar {
        Scalar::Exact(q)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Real(_) => None,
        }
    }

    pub fn as_ball(&self) -> Option<&Ball> {
        match self {
            Scalar::Real(b) => Some(b),
            Scalar::Exact(_) => None,
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Real(b) => Some(b.precision()),
        }
    }

    /// Exactly zero (a point ball at zero counts).
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Real(b) => b.is_point_zero(),
        }
    }

    /// Whether the value is provably nonzero.
    pub fn is_certainly_nonzero(&self) -> bool {
        matches!(self.sign(), SignQuery::Negative | SignQuery::Positive)
    }

    pub fn sign(&self) -> SignQuery {
        match self {
            Scalar::Exact(q) => {
                if q.is_zero() {
                    SignQuery::Zero
                } else if q.is_positive() {
                    SignQuery::Positive
                } else {
                    SignQuery::Negative
                }
            }
            Scalar::Real(b) => b.sign(),
        }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            Scalar::Exact(q) => Ball::from_rational(q, prec),
            Scalar::Real(b) => b.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero or an undecided sign.
    pub fn checked_inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Scalar::Exact(q.recip()))
                }
            }
            Scalar::Real(b) => b.inv().map(Scalar::Real),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        other.checked_inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(num_traits::pow(q.clone(), e as usize)),
            Scalar::Real(_) => {
                let mut acc = Scalar::one();
                let mut base = self.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = &acc * &base;
                    }
                    base = &base * &base;
                    e >>= 1;
                }
                acc
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Real(b) => Scalar::Real(b.abs()),
        }
    }

    /// Nearest-ish `f64` (midpoint for balls).
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => rational_to_f64(q),
            Scalar::Real(b) => b.to_f64(),
        }
    }

    /// Whether `q` lies in the value (equality for exact scalars).
    pub fn contains(&self, q: &BigRational) -> bool {
        match self {
            Scalar::Exact(v) => v == q,
            Scalar::Real(b) => b.contains(q),
        }
    }

    /// Approximate `log2 |self|`.
    pub fn log2_abs(&self) -> f64 {
        match self {
            Scalar::Exact(q) => {
                if q.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    log2_big(q.numer()) - log2_big(q.denom())
                }
            }
            Scalar::Real(b) => b.mid().log2_abs(),
        }
    }

    /// Upper bound on the enclosure width (zero for exact values).
    pub fn width_log2(&self) -> f64 {
        match self {
            Scalar::Exact(_) => f64::NEG_INFINITY,
            Scalar::Real(b) => b.width().log2(),
        }
    }
}

pub(crate) fn log2_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    let shift = bits.saturating_sub(60);
    let m = (v.magnitude() >> shift).to_f64().unwrap_or(1.0);
    m.abs().log2() + shift as f64
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (q.numer().to_i64(), q.denom().to_i64()) {
        if n.unsigned_abs() < (1 << 53) && d < (1 << 53) {
            return n as f64 / d as f64;
        }
    }
    let num = Dyadic::new(q.numer().clone(), 0);
    let den = Dyadic::new(q.denom().clone(), 0);
    Dyadic::div_round(&num, &den, 64).0.to_f64()
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<Ball> for Scalar {
    fn from(b: Ball) -> Self {
        Scalar::Real(b)
    }
}

fn combine(
    a: &Scalar,
    b: &Scalar,
    exact: impl Fn(&BigRational, &BigRational) -> BigRational,
    real: impl Fn(&Ball, &Ball) -> Ball,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        (Scalar::Real(x), Scalar::Real(y)) => Scalar::Real(real(x, y)),
        (Scalar::Exact(x), Scalar::Real(y)) => {
            Scalar::Real(real(&Ball::from_rational(x, y.precision()), y))
        }
        (Scalar::Real(x), Scalar::Exact(y)) => {
            Scalar::Real(real(x, &Ball::from_rational(y, x.precision())))
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        combine(self, rhs, |x, y| x + y, |x, y| x.add(y))
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        combine(self, rhs, |x, y| x - y, |x, y| x.sub(y))
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        combine(self, rhs, |x, y| x * y, |x, y| x.mul(y))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q),
            Scalar::Real(b) => Scalar::Real(b.neg()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", q),
            Scalar::Real(b) => write!(f, "{}", b),
        }
    }
}
