//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use locint::algebra::{ExponentVec, HomogPoly, Scalar, TruncSeries};
use locint::field::{JordanMatrix, VectorField};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ev(v: &[u32]) -> ExponentVec {
    ExponentVec::new(v.to_vec())
}

pub fn exact(s: &Scalar) -> Q {
    s.as_rational().expect("exact scalar").clone()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// All exponent vectors of length `n` and degree `d`, by brute-force
/// filtering of the box `[0, d]^n`.
pub fn brute_monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (d + 1).pow(n as u32);
    for mut code in 0..total {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push((code % (d + 1)) as u32);
            code /= d + 1;
        }
        if v.iter().sum::<u32>() as usize == d {
            out.push(v);
        }
    }
    out.sort();
    out
}

/// Gaussian elimination; `None` if the square system is singular.
pub fn dense_solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
                let t = &f * &b[c];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

pub fn rank(mut a: Vec<Vec<Q>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for k in c..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Characteristic polynomial `det(t I - M)` by Faddeev–LeVerrier, as
/// coefficients of `t^n, t^(n-1), ..., 1`.
pub fn charpoly(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    let mut coeffs = vec![Q::one()];
    let mut mk: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = M (M_{k-1} + c_{k-1} I)
        let mut inner = mk.clone();
        for (i, row) in inner.iter_mut().enumerate() {
            row[i] += &coeffs[k - 1];
        }
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    if !m[i][l].is_zero() && !inner[l][j].is_zero() {
                        s += &m[i][l] * &inner[l][j];
                    }
                }
                next[i][j] = s;
            }
        }
        let trace: Q = (0..n).map(|i| next[i][i].clone()).fold(Q::zero(), |a, b| a + b);
        coeffs.push(-trace / qi(k as i64));
        mk = next;
    }
    coeffs
}

/// Coefficients of `Π (t - r_i)`, highest degree first.
pub fn poly_from_roots(roots: &[Q]) -> Vec<Q> {
    let mut c = vec![Q::one()];
    for r in roots {
        let mut next = vec![Q::zero(); c.len() + 1];
        for (i, v) in c.iter().enumerate() {
            next[i] += v;
            next[i + 1] -= v * r;
        }
        c = next;
    }
    c
}

/// Naive product of two series: every pair of terms, kept when the degree
/// is at most `n`.
pub fn naive_mul(a: &TruncSeries, b: &TruncSeries, n: usize) -> Vec<(Vec<u32>, Q)> {
    let mut acc: std::collections::BTreeMap<Vec<u32>, Q> = Default::default();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let e: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() as usize <= n {
                *acc.entry(e).or_insert_with(Q::zero) += exact(ca) * exact(cb);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn terms_of(s: &TruncSeries) -> Vec<(Vec<u32>, Q)> {
    let mut v: Vec<(Vec<u32>, Q)> = s.terms().map(|(e, c)| (e.as_slice().to_vec(), exact(c))).collect();
    v.sort();
    v
}

pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    let n = rng.gen_range(-num..=num);
    let d = rng.gen_range(1..=den);
    q(n, d)
}

pub fn random_nonzero<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    loop {
        let r = random_rational(rng, num, den);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random sparse series in `n` variables with `terms` monomials of degree in
/// `lo..=hi`, filtered by `keep`.
pub fn random_series<R: Rng>(
    rng: &mut R,
    n: usize,
    trunc: usize,
    lo: usize,
    hi: usize,
    terms: usize,
    keep: impl Fn(&[u32]) -> bool,
) -> TruncSeries {
    let mut s = TruncSeries::zero(n, trunc);
    let mut placed = 0;
    while placed < terms {
        let d = rng.gen_range(lo..=hi);
        let mut e = vec![0u32; n];
        for _ in 0..d {
            e[rng.gen_range(0..n)] += 1;
        }
        if !keep(&e) {
            continue;
        }
        s.add_term(ExponentVec::new(e), Scalar::rational(random_nonzero(rng, 5, 4)));
        placed += 1;
    }
    s
}

/// Distinct same-sign rational tail eigenvalues with pairwise ratios chosen
/// so that the tail is nonresonant (all of one sign suffices).
pub fn random_tail<R: Rng>(rng: &mut R, k: usize) -> Vec<Scalar> {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    (0..k)
        .map(|_| Scalar::rational(q(sign * rng.gen_range(1..=7), rng.gen_range(1..=3))))
        .collect()
}

/// Straightened field: every nonlinear term contains some `y` variable.
pub fn random_straightened<R: Rng>(rng: &mut R, n: usize, trunc: usize, terms: usize) -> VectorField {
    let tail = random_tail(rng, n - 1);
    let on_y = |e: &[u32]| e[1..].iter().any(|&k| k > 0);
    let f1 = random_series(rng, n, trunc, 2, 3, terms, on_y);
    let g = (1..n)
        .map(|_| random_series(rng, n, trunc, 2, 3, terms, on_y))
        .collect();
    VectorField::new(JordanMatrix::diagonal(tail), f1, g, trunc).unwrap()
}

/// Dense matrix of `h ↦ ⟨∇h, F⟩` on degree-`d` polynomials for a linear
/// field `F_i = Σ_j a[i][j] x_j`, built by symbolic differentiation.
pub fn lie_matrix(a: &[Vec<Q>], d: usize, basis: &[ExponentVec]) -> Vec<Vec<Q>> {
    let n = a.len();
    let index: std::collections::HashMap<&ExponentVec, usize> =
        basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut m = vec![vec![Q::zero(); basis.len()]; basis.len()];
    for (col, e) in basis.iter().enumerate() {
        let h = HomogPoly::monomial(e.clone(), Scalar::one());
        let mut image = HomogPoly::zero(n, d);
        for i in 0..n {
            let mut lin = HomogPoly::zero(n, 1);
            for j in 0..n {
                if !a[i][j].is_zero() {
                    lin.add_term(ExponentVec::unit(n, j), Scalar::rational(a[i][j].clone()));
                }
            }
            h.diff(i).mul_into(&lin, &mut image);
        }
        for (t, c) in image.terms() {
            m[index[t]][col] = exact(c);
        }
    }
    m
}

pub fn log2_rational(x: &Q) -> f64 {
    let x = x.abs();
    let shift = x.numer().bits() as i64 - x.denom().bits() as i64 - 60;
    let scaled = if shift >= 0 {
        x / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        x * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_integer().to_f64().unwrap().log2() + shift as f64
}

/// A field vanishing on a planted curve `y = φ̂(x1)`.
pub struct Planted {
    pub field: VectorField,
    /// Univariate components of `φ̂`.
    pub curve: Vec<TruncSeries>,
    /// The field in coordinates `u = x1`, `v = y - φ̂`.
    pub straight: VectorField,
}

/// Random `φ̂` of degree `2..=max_deg` planted into a random straightened
/// field: `x1' = f̃1(x1, y - φ̂)`, `y' = B (y - φ̂) + g̃(x1, y - φ̂) + φ̂' x1'`.
pub fn plant<R: Rng>(rng: &mut R, n: usize, trunc: usize, max_deg: usize) -> Planted {
    let straight = random_straightened(rng, n, trunc, 3);
    let curve: Vec<TruncSeries> = (1..n)
        .map(|_| {
            let mut c = TruncSeries::zero(1, trunc);
            for d in 2..=max_deg {
                if rng.gen_bool(0.6) {
                    c.add_term(ExponentVec::new(vec![d as u32]), Scalar::rational(random_nonzero(rng, 4, 3)));
                }
            }
            c
        })
        .collect();
    let lifted: Vec<TruncSeries> = curve.iter().map(|c| c.remap_vars(n, &[0])).collect();
    let mut subs = vec![TruncSeries::var(n, trunc, 0)];
    for (i, p) in lifted.iter().enumerate() {
        subs.push(TruncSeries::var(n, trunc, i + 1).sub(p).unwrap());
    }
    let f1 = straight.f1().compose(&subs, trunc).unwrap();
    let lam = straight.tail_eigenvalues().to_vec();
    let g = (0..n - 1)
        .map(|i| {
            let shift = lifted[i].scale(&-lam[i].clone());
            let bent = straight.g()[i].compose(&subs, trunc).unwrap();
            let transport = TruncSeries::mul(&lifted[i].diff(0).unwrap(), &f1, trunc).unwrap();
            shift.add(&bent).unwrap().add(&transport).unwrap()
        })
        .collect();
    let field = VectorField::new(straight.tail_matrix().clone(), f1, g, trunc).unwrap();
    Planted {
        field,
        curve,
        straight,
    }
}
