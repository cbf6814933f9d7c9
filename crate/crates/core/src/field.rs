//! Linear parts in Jordan form and the vector fields built on them.

use crate::algebra::{ExponentVec, Scalar, TruncSeries, Valuation};
use crate::error::{Error, Result};
use crate::spectral::EigenData;

/// Square matrix in Jordan normal form: a diagonal plus superdiagonal 0/1
/// flags. A set flag links entry `i` to entry `i + 1` inside one block.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanMatrix {
    diag: Vec<Scalar>,
    chain: Vec<bool>,
}

impl JordanMatrix {
    /// `chain[i]` is the superdiagonal entry `(i, i + 1)`.
    pub fn new(diag: Vec<Scalar>, chain: Vec<bool>) -> Result<Self> {
        if diag.is_empty() {
            if !chain.is_empty() {
                return Err(Error::NotJordanForm("chain flags on an empty matrix".into()));
            }
            return Ok(JordanMatrix { diag, chain });
        }
        if chain.len() != diag.len() - 1 {
            return Err(Error::NotJordanForm(format!(
                "{} superdiagonal flags for dimension {}",
                chain.len(),
                diag.len()
            )));
        }
        for (i, &linked) in chain.iter().enumerate() {
            if linked && diag[i] != diag[i + 1] {
                return Err(Error::NotJordanForm(format!(
                    "block joins unequal eigenvalues {} and {}",
                    diag[i],
                    diag[i + 1]
                )));
            }
        }
        Ok(JordanMatrix { diag, chain })
    }

    pub fn diagonal(diag: Vec<Scalar>) -> Self {
        let chain = vec![false; diag.len().saturating_sub(1)];
        JordanMatrix { diag, chain }
    }

    /// Validates a dense matrix and extracts its Jordan structure.
    pub fn from_dense(rows: &[Vec<Scalar>]) -> Result<Self> {
        let n = rows.len();
        let mut diag = Vec::with_capacity(n);
        let mut chain = Vec::with_capacity(n.saturating_sub(1));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotJordanForm(format!("row {} has length {}", i, row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if j == i {
                    diag.push(v.clone());
                } else if j == i + 1 {
                    if *v == Scalar::one() {
                        chain.push(true);
                    } else if v.is_zero() {
                        chain.push(false);
                    } else {
                        return Err(Error::NotJordanForm(format!(
                            "superdiagonal entry ({}, {}) is {}",
                            i, j, v
                        )));
                    }
                } else if !v.is_zero() {
                    return Err(Error::NotJordanForm(format!("entry ({}, {}) is {}", i, j, v)));
                }
            }
        }
        JordanMatrix::new(diag, chain)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn eigenvalues(&self) -> &[Scalar] {
        &self.diag
    }

    pub fn chain(&self) -> &[bool] {
        &self.chain
    }

    pub fn is_linked(&self, i: usize) -> bool {
        self.chain.get(i).copied().unwrap_or(false)
    }

    pub fn is_diagonal(&self) -> bool {
        !self.chain.iter().any(|&c| c)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            self.diag[i].clone()
                        } else if j == i + 1 && self.chain[i] {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `M v` for a vector of series.
    pub fn apply(&self, v: &[TruncSeries]) -> Result<Vec<TruncSeries>> {
        (0..self.dim())
            .map(|i| {
                let mut out = v[i].scale(&self.diag[i]);
                if self.is_linked(i) {
                    out = out.add(&v[i + 1])?;
                }
                Ok(out)
            })
            .collect()
    }

    /// Solves `M z = w` by back substitution.
    pub fn solve(&self, w: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.dim();
        let mut z = vec![Scalar::zero(); n];
        for i in (0..n).rev() {
            let mut rhs = w[i].clone();
            if self.is_linked(i) {
                rhs -= &z[i + 1];
            }
            z[i] = divide(&rhs, &self.diag[i])?;
        }
        Ok(z)
    }
}

fn divide(num: &Scalar, den: &Scalar) -> Result<Scalar> {
    if num.is_zero() {
        return Ok(Scalar::zero());
    }
    match den.sign() {
        crate::algebra::SignQuery::Zero => Err(Error::SingularB),
        crate::algebra::SignQuery::Undecided => Err(Error::PrecisionExhausted {
            bits: den.precision().unwrap_or(0),
        }),
        _ => Ok(num.checked_div(den).expect("nonzero divisor")),
    }
}

/// `x1' = f1(x)`, `y' = B y + g(x)` with `x = (x1, y)` and `f = (f1, g)`
/// free of constant and linear terms.
///
/// Variable 0 is `x1`; variables `1..n` are `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    b: JordanMatrix,
    f1: TruncSeries,
    g: Vec<TruncSeries>,
    trunc: usize,
    straightened: bool,
}

impl VectorField {
    pub fn new(b: JordanMatrix, f1: TruncSeries, g: Vec<TruncSeries>, trunc: usize) -> Result<Self> {
        let n = b.dim() + 1;
        if g.len() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: b.dim(),
                found: g.len(),
            });
        }
        for s in std::iter::once(&f1).chain(&g) {
            if s.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.nvars(),
                });
            }
            if s.trunc() < trunc {
                return Err(Error::TruncationBudget {
                    requested: trunc,
                    available: s.trunc(),
                });
            }
            if let Valuation::Finite(v) = s.valuation() {
                if v < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "nonlinear part has a term of degree {}",
                        v
                    )));
                }
            }
        }
        let f1 = f1.truncate(trunc);
        let g: Vec<TruncSeries> = g.iter().map(|s| s.truncate(trunc)).collect();
        let tail: Vec<usize> = (1..n).collect();
        let straightened = std::iter::once(&f1)
            .chain(&g)
            .all(|s| s.restrict_zero(&tail).is_zero());
        Ok(VectorField {
            b,
            f1,
            g,
            trunc,
            straightened,
        })
    }

    pub fn dim(&self) -> usize {
        self.b.dim() + 1
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn tail_matrix(&self) -> &JordanMatrix {
        &self.b
    }

    pub fn f1(&self) -> &TruncSeries {
        &self.f1
    }

    pub fn g(&self) -> &[TruncSeries] {
        &self.g
    }

    /// Whether `f1` and `g` vanish identically on `y = 0`.
    pub fn is_straightened(&self) -> bool {
        self.straightened
    }

    /// Eigenvalues `(0, λ2, ..., λn)`.
    pub fn eigen_data(&self) -> EigenData {
        let mut v = vec![Scalar::zero()];
        v.extend(self.b.eigenvalues().iter().cloned());
        EigenData::new(v)
    }

    pub fn tail_eigenvalues(&self) -> &[Scalar] {
        self.b.eigenvalues()
    }

    /// The linear series `(B y)_i`, one per tail component.
    pub fn linear_tail(&self) -> Vec<TruncSeries> {
        let n = self.dim();
        let ys: Vec<TruncSeries> = (1..n).map(|i| TruncSeries::var(n, self.trunc, i)).collect();
        self.b.apply(&ys).expect("matching dimensions")
    }

    /// All `n` right-hand sides, linear part included.
    pub fn components(&self) -> Vec<TruncSeries> {
        let mut out = vec![self.f1.clone()];
        for (lin, g) in self.linear_tail().iter().zip(&self.g) {
            out.push(lin.add(g).expect("matching dimensions"));
        }
        out
    }

    /// Whether every coefficient is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.b.eigenvalues().iter().all(Scalar::is_exact)
            && self.f1.is_exact()
            && self.g.iter().all(TruncSeries::is_exact)
    }

    /// First pure-`x1` term of `f1` or `g`, if the field is not straightened.
    pub fn axis_obstruction(&self) -> Option<(usize, ExponentVec)> {
        let tail: Vec<usize> = (1..self.dim()).collect();
        std::iter::once(&self.f1)
            .chain(&self.g)
            .enumerate()
            .find_map(|(i, s)| {
                s.restrict_zero(&tail)
                    .terms()
                    .next()
                    .map(|(e, _)| (i, e.clone()))
            })
    }
}
