use std::fmt;

/// Exponent vector of a monomial `x1^e1 ... xn^en`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVec(Vec<u32>);

impl ExponentVec {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVec(exps)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVec(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn add(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - e_i`, if the exponent of variable `i` is positive.
    pub fn lower(&self, i: usize) -> Option<ExponentVec> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(ExponentVec(v))
    }

    pub fn raise(&self, i: usize) -> ExponentVec {
        let mut v = self.0.clone();
        v[i] += 1;
        ExponentVec(v)
    }

    /// Sum of exponents over the variables `from..`.
    pub fn tail_degree(&self, from: usize) -> usize {
        self.0[from..].iter().map(|&e| e as usize).sum()
    }

    pub fn with(&self, i: usize, e: u32) -> ExponentVec {
        let mut v = self.0.clone();
        v[i] = e;
        ExponentVec(v)
    }

    /// All exponent vectors in `n` variables of total degree `d`, in
    /// ascending lexicographic order.
    pub fn all_of_degree(n: usize, d: usize) -> Vec<ExponentVec> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVec>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(ExponentVec(cur.clone()));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(ExponentVec(Vec::new()));
            }
            return out;
        }
        rec(n, d as u32, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// Number of monomials of degree `d` in `n` variables.
    pub fn count_of_degree(n: usize, d: usize) -> usize {
        if n == 0 {
            return usize::from(d == 0);
        }
        // C(d + n - 1, n - 1)
        let k = n - 1;
        let mut num: u128 = 1;
        for i in 0..k {
            num = num * (d + k - i) as u128 / (i + 1) as u128;
        }
        num as usize
    }
}

impl From<Vec<u32>> for ExponentVec {
    fn from(v: Vec<u32>) -> Self {
        ExponentVec(v)
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}
