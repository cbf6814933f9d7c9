//! Midpoint-radius ("ball") arithmetic over dyadic numbers.
//!
//! A [`Ball`] is a dyadic midpoint with arbitrary-precision mantissa and an
//! upper bound on the radius stored with a short mantissa. Every operation
//! returns a ball that contains the exact result of the same operation applied
//! to any points of the operand balls: midpoint rounding errors are pushed
//! into the radius, and radius computations round upward.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision for midpoints, in bits.
pub const DEFAULT_PRECISION: u32 = 256;
/// Largest precision the automatic doubling loop will try.
pub const MAX_PRECISION: u32 = 16384;

const MAG_BITS: u64 = 32;
/// Radii below `2^MIN_MAG_EXP` are rounded up to it.
pub(crate) const MIN_MAG_EXP: i64 = -(1 << 40);

/// Exact dyadic number `mant * 2^exp`, normalized so the mantissa is odd
/// (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Sign {
        self.mant.sign()
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent `t` with `2^(t-1) <= |self| < 2^t`. Meaningless for zero.
    pub fn top(&self) -> i64 {
        self.exp + self.bits() as i64
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// Exact sum. Cost grows with the exponent gap of the operands.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Parses a rational with power-of-two denominator.
    pub fn from_rational(q: &BigRational) -> Option<Dyadic> {
        let den = q.denom();
        let shift = den.trailing_zeros().unwrap_or(0);
        if den >> shift != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(q.numer().clone(), -(shift as i64)))
    }

    pub fn cmp_abs(&self, other: &Dyadic) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let e = self.exp.min(other.exp);
        let a = self.mant.abs() << (self.exp - e) as u64;
        let b = other.mant.abs() << (other.exp - e) as u64;
        a.cmp(&b)
    }

    /// Truncates toward zero to at most `prec` significant bits. Returns the
    /// rounded value and, when bits were dropped, the exponent `e` of the
    /// error bound `2^e`.
    pub fn round(&self, prec: u32) -> (Dyadic, Option<i64>) {
        let bits = self.bits();
        if bits <= prec as u64 {
            return (self.clone(), None);
        }
        let shift = bits - prec as u64;
        let mag = self.mant.magnitude() >> shift;
        let mant = BigInt::from_biguint(self.mant.sign(), mag);
        let exp = self.exp + shift as i64;
        (Dyadic::new(mant, exp), Some(exp))
    }

    /// Quotient `num / den` rounded toward zero to roughly `prec` bits,
    /// together with the exponent of an error bound.
    pub fn div_round(num: &Dyadic, den: &Dyadic, prec: u32) -> (Dyadic, i64) {
        assert!(!den.is_zero(), "division by zero dyadic");
        let s = prec as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let (n, d) = if s >= 0 {
            (num.mant.magnitude() << s as u64, den.mant.magnitude().clone())
        } else {
            (num.mant.magnitude().clone(), den.mant.magnitude() << (-s) as u64)
        };
        let q = n / d;
        let sign = if num.mant.sign() == den.mant.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let exp = num.exp - den.exp - s;
        (Dyadic::new(BigInt::from_biguint(sign, q), exp), exp)
    }

    /// Approximate value as `f64`, with graceful overflow to infinity and
    /// underflow to zero.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (m, e) = if bits > 60 {
            let shift = bits - 60;
            (&self.mant >> shift, self.exp + shift as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        ldexp(m.to_f64().unwrap_or(0.0), e)
    }

    /// Approximate `log2 |self|`.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.bits();
        let shift = bits.saturating_sub(60);
        let m = (self.mant.magnitude() >> shift).to_f64().unwrap_or(1.0);
        m.log2() + (self.exp + shift as i64) as f64
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mant)
        } else {
            write!(f, "{}p{}", self.mant, self.exp)
        }
    }
}

/// `x * 2^e` without intermediate overflow for moderate `x`.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let step = 1000i64;
    while e > step {
        x *= 2f64.powi(step as i32);
        e -= step;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -step {
        x *= 2f64.powi(-step as i32);
        e += step;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Nonnegative upper bound `mant * 2^exp` with a short mantissa.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mag {
    mant: u64,
    exp: i64,
}

fn bitlen(x: u64) -> u64 {
    64 - x.leading_zeros() as u64
}

impl Mag {
    pub const ZERO: Mag = Mag { mant: 0, exp: 0 };

    fn normalized(mut mant: u128, mut exp: i64) -> Mag {
        if mant == 0 {
            return Mag::ZERO;
        }
        loop {
            let bits = 128 - mant.leading_zeros() as u64;
            if bits <= MAG_BITS {
                break;
            }
            let shift = bits - MAG_BITS;
            mant = (mant >> shift) + 1;
            exp = exp.saturating_add(shift as i64);
        }
        let m = Mag {
            mant: mant as u64,
            exp,
        };
        if m.top() < MIN_MAG_EXP {
            Mag::pow2(MIN_MAG_EXP)
        } else {
            m
        }
    }

    pub fn pow2(e: i64) -> Mag {
        Mag {
            mant: 1,
            exp: e.max(MIN_MAG_EXP),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    pub fn top(&self) -> i64 {
        self.exp + bitlen(self.mant) as i64
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn mantissa(&self) -> u64 {
        self.mant
    }

    /// Upper bound for `|d|`.
    pub fn from_dyadic(d: &Dyadic) -> Mag {
        if d.is_zero() {
            return Mag::ZERO;
        }
        let bits = d.bits();
        if bits <= MAG_BITS {
            let m = d.mant.magnitude().to_u64().expect("short mantissa");
            return Mag::normalized(m as u128, d.exp);
        }
        let shift = bits - MAG_BITS;
        let m = (d.mant.magnitude() >> shift).to_u64().expect("short mantissa");
        Mag::normalized(m as u128 + 1, d.exp + shift as i64)
    }

    pub fn to_dyadic(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.mant), self.exp)
    }

    pub fn add(&self, other: &Mag) -> Mag {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        if small.top() <= big.exp {
            // small < 2^big.exp: one unit in the last place absorbs it.
            return Mag::normalized(big.mant as u128 + 1, big.exp);
        }
        let e = big.exp.min(small.exp);
        let a = (big.mant as u128) << (big.exp - e) as u32;
        let b = (small.mant as u128) << (small.exp - e) as u32;
        Mag::normalized(a + b, e)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalized(
            self.mant as u128 * other.mant as u128,
            self.exp.saturating_add(other.exp),
        )
    }

    /// Upper bound for `self / d`, `d != 0`.
    pub fn div_dyadic(&self, d: &Dyadic) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let t = d.bits() + MAG_BITS + 1;
        let num = BigInt::from(self.mant) << t;
        let (q, r) = num.div_rem(&d.mant.abs());
        let q = if r.is_zero() { q } else { q + 1 };
        let exp = self.exp - d.exp - t as i64;
        let q = Dyadic::new(q, exp);
        Mag::from_dyadic(&q)
    }

    /// Replaces a tiny bound by `2^floor` when it is smaller, so it can be
    /// combined exactly with values near `2^floor` without huge shifts.
    pub fn coarsen(&self, floor: i64) -> Mag {
        if !self.is_zero() && self.top() < floor {
            Mag::pow2(floor)
        } else {
            *self
        }
    }

    pub fn cmp_dyadic(&self, d: &Dyadic) -> Ordering {
        let d = d.abs();
        if self.is_zero() {
            return if d.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Less
            };
        }
        if d.is_zero() {
            return Ordering::Greater;
        }
        if self.top() < d.top() - 1 {
            return Ordering::Less;
        }
        if self.top() > d.top() + 1 {
            return Ordering::Greater;
        }
        self.to_dyadic().cmp_abs(&d)
    }

    pub fn to_f64(&self) -> f64 {
        ldexp(self.mant as f64, self.exp)
    }

    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            (self.mant as f64).log2() + self.exp as f64
        }
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 || self.mant == 0 {
            write!(f, "{}", self.mant)
        } else {
            write!(f, "{}p{}", self.mant, self.exp)
        }
    }
}

/// Outcome of a sign query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignQuery {
    Negative,
    Zero,
    Positive,
    Undecided,
}

/// Certified enclosure `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

impl Ball {
    /// Builds a ball, rounding the midpoint to `prec` bits.
    pub fn new(mid: Dyadic, rad: Mag, prec: u32) -> Ball {
        let (mid, err) = mid.round(prec);
        let rad = match err {
            Some(e) => rad.add(&Mag::pow2(e)),
            None => rad,
        };
        Ball { mid, rad, prec }
    }

    pub fn exact(mid: Dyadic, prec: u32) -> Ball {
        Ball::new(mid, Mag::ZERO, prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Ball {
        Ball::exact(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Ball {
        if let Some(d) = Dyadic::from_rational(q) {
            return Ball::exact(d, prec);
        }
        let num = Dyadic::new(q.numer().clone(), 0);
        let den = Dyadic::new(q.denom().clone(), 0);
        let (mid, e) = Dyadic::div_round(&num, &den, prec);
        Ball::new(mid, Mag::pow2(e), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Ball {
        Ball::new(self.mid.clone(), self.rad, prec)
    }

    pub fn is_point_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.rad.cmp_dyadic(&self.mid) != Ordering::Less
    }

    pub fn sign(&self) -> SignQuery {
        if self.is_point_zero() {
            return SignQuery::Zero;
        }
        if self.contains_zero() {
            return SignQuery::Undecided;
        }
        match self.mid.signum() {
            Sign::Minus => SignQuery::Negative,
            _ => SignQuery::Positive,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Ball {
        if self.contains_zero() {
            // [0, |mid| + rad] re-centred.
            let upper = Mag::from_dyadic(&self.mid).add(&self.rad).to_dyadic();
            let half = upper.mul(&Dyadic::pow2(-1));
            return Ball::new(half.clone(), Mag::from_dyadic(&half), self.prec);
        }
        Ball {
            mid: self.mid.abs(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let rad = self.rad.add(&other.rad);
        if self.mid.is_zero() {
            return Ball::new(other.mid.clone(), rad, prec);
        }
        if other.mid.is_zero() {
            return Ball::new(self.mid.clone(), rad, prec);
        }
        let gap = prec as i64 + 64;
        if self.mid.top() < other.mid.top() - gap {
            return Ball::new(other.mid.clone(), rad.add(&Mag::from_dyadic(&self.mid)), prec);
        }
        if other.mid.top() < self.mid.top() - gap {
            return Ball::new(self.mid.clone(), rad.add(&Mag::from_dyadic(&other.mid)), prec);
        }
        Ball::new(self.mid.add(&other.mid), rad, prec)
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let a = Mag::from_dyadic(&self.mid);
        let b = Mag::from_dyadic(&other.mid);
        let rad = a
            .mul(&other.rad)
            .add(&b.mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Ball::new(self.mid.mul(&other.mid), rad, prec)
    }

    /// Lower bound on `|x|` over the ball (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Dyadic {
        if self.contains_zero() {
            return Dyadic::zero();
        }
        let floor = self.mid.top() - self.prec as i64 - 128;
        let rad = self.rad.coarsen(floor).to_dyadic();
        let low = self.mid.abs().sub(&rad);
        if low.signum() == Sign::Minus {
            Dyadic::zero()
        } else {
            low
        }
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_dyadic(&self.mid).add(&self.rad)
    }

    /// Enclosure of `1/x`, or `None` when the ball contains zero.
    pub fn inv(&self) -> Option<Ball> {
        if self.contains_zero() {
            return None;
        }
        let (mid, e) = Dyadic::div_round(&Dyadic::from_int(1), &self.mid, self.prec);
        let m = self.mid.abs();
        // |1/x - 1/m| <= r / (|m| (|m| - r)); use |m| - r >= |m|/2 when it holds.
        let half = m.mul(&Dyadic::pow2(-1));
        let rad = if self.rad.cmp_dyadic(&half) != Ordering::Greater {
            self.rad
                .mul(&Mag::pow2(1))
                .div_dyadic(&m.mul(&m))
        } else {
            let low = m.sub(&self.rad.to_dyadic());
            self.rad.div_dyadic(&m.mul(&low))
        };
        Some(Ball::new(mid, rad.add(&Mag::pow2(e)), self.prec))
    }

    pub fn div(&self, other: &Ball) -> Option<Ball> {
        other.inv().map(|inv| self.mul(&inv))
    }

    /// Whether the exact rational `q` lies in the ball.
    pub fn contains(&self, q: &BigRational) -> bool {
        let diff = (q - self.mid.to_rational()).abs();
        if diff.is_zero() {
            return true;
        }
        if self.rad.is_zero() {
            return false;
        }
        let ex = diff.numer().bits() as i64 - diff.denom().bits() as i64;
        if self.rad.top() < ex - 4 {
            return false;
        }
        if self.rad.top() > ex + 4 {
            return true;
        }
        diff <= self.rad.to_dyadic().to_rational()
    }

    /// Full width `2 * rad` as an upper bound.
    pub fn width(&self) -> Mag {
        self.rad.mul(&Mag::pow2(1))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {}", self.mid, self.rad)
    }
}
