//! The line-oriented system file format.
//!
//! ```text
//! system
//! vars 2
//! lambda 0 -1
//! jordan 0 | -1
//! f1 = 1 x1^1 x2^1
//! f2 = 1 x1^1 x2^1
//! options backend=auto N=12 precision=256
//! ```
//!
//! `lambda` entries are rationals `p/q` or `zeta(K=k)` / `-zeta(K=k)`.
//! In the `jordan` line blocks are separated by `|` and an entry `v:1`
//! carries a superdiagonal one to the next entry of its block. The `jordan`
//! line may be omitted for a diagonal linear part. Text after `#` is a
//! comment.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Backend, ExponentVec, Scalar, TruncSeries, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::field::{JordanMatrix, VectorField};
use crate::smalldiv::{liouville_zeta, LiouvilleSchedule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenToken {
    Rational(BigRational),
    Zeta { terms: usize, negated: bool },
}

impl EigenToken {
    pub fn to_scalar(&self, precision: u32) -> Result<Scalar> {
        match self {
            EigenToken::Rational(q) => Ok(Scalar::rational(q.clone())),
            EigenToken::Zeta { terms, negated } => {
                let z = liouville_zeta(&LiouvilleSchedule::new(), *terms)?.scalar(precision);
                Ok(if *negated { -z } else { z })
            }
        }
    }
}

impl std::fmt::Display for EigenToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EigenToken::Rational(q) => write!(f, "{}", q),
            EigenToken::Zeta { terms, negated } => {
                write!(f, "{}zeta(K={})", if *negated { "-" } else { "" }, terms)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendChoice {
    Auto,
    Exact,
    Certified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemOptions {
    pub backend: BackendChoice,
    pub trunc: usize,
    pub precision: u32,
}

impl Default for SystemOptions {
    fn default() -> Self {
        SystemOptions {
            backend: BackendChoice::Auto,
            trunc: 12,
            precision: DEFAULT_PRECISION,
        }
    }
}

pub type Terms = Vec<(ExponentVec, BigRational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub nvars: usize,
    pub lambda: Vec<EigenToken>,
    /// `chain[i]`: superdiagonal one at `(i, i + 1)` of the full matrix.
    pub chain: Vec<bool>,
    /// Nonlinear part of each component, in canonical order.
    pub components: Vec<Terms>,
    pub options: SystemOptions,
}

fn canonical(mut terms: Terms) -> Terms {
    terms.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    let mut out: Terms = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc += c,
            _ => out.push((e, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

struct Cursor<'a> {
    line: usize,
    tokens: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in text.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push((s, &text[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push((s, &text[s..]));
        }
        let tokens = tokens
            .into_iter()
            .map(|(b, t)| (text[..b].chars().count() + 1, t))
            .collect();
        Cursor { line, tokens, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let t = self.tokens.get(self.pos).copied();
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.tokens.get(self.pos).copied()
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |(c, t)| c + t.chars().count())
    }

    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let col = self.end_column();
        self.next().ok_or_else(|| self.err(col, format!("expected {}", what)))
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some((c, t)) => Err(self.err(c, format!("unexpected token '{}'", t))),
            None => Ok(()),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() || d.is_negative() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn parse_eigen(s: &str) -> Option<EigenToken> {
    let (negated, body) = match s.strip_prefix('-') {
        Some(rest) if rest.starts_with("zeta") => (true, rest),
        _ => (false, s),
    };
    if let Some(inner) = body.strip_prefix("zeta(K=").and_then(|r| r.strip_suffix(')')) {
        let terms: usize = inner.parse().ok()?;
        return Some(EigenToken::Zeta { terms, negated });
    }
    parse_rational(s).map(EigenToken::Rational)
}

fn parse_usize(cur: &Cursor, col: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| cur.err(col, format!("expected a nonnegative integer, found '{}'", s)))
}

fn parse_terms(cur: &mut Cursor, nvars: usize) -> Result<Terms> {
    let mut terms = Vec::new();
    loop {
        let (col, tok) = cur.expect("a coefficient")?;
        let c = parse_rational(tok)
            .ok_or_else(|| cur.err(col, format!("invalid coefficient '{}'", tok)))?;
        let mut exps = vec![0u32; nvars];
        while let Some((vcol, v)) = cur.peek() {
            if v == "+" {
                break;
            }
            cur.next();
            let (name, e) = v.split_once('^').unwrap_or((v, "1"));
            let idx = name
                .strip_prefix('x')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= nvars)
                .ok_or_else(|| cur.err(vcol, format!("unknown variable '{}'", name)))?;
            let e: u32 = e
                .parse()
                .map_err(|_| cur.err(vcol, format!("invalid exponent in '{}'", v)))?;
            exps[idx - 1] += e;
        }
        let e = ExponentVec::new(exps);
        if !c.is_zero() && e.degree() < 2 {
            return Err(Error::ValuationError {
                line: cur.line,
                degree: e.degree(),
            });
        }
        terms.push((e, c));
        match cur.next() {
            None => break,
            Some((_, "+")) => continue,
            Some((c, t)) => return Err(cur.err(c, format!("expected '+', found '{}'", t))),
        }
    }
    Ok(canonical(terms))
}

fn parse_jordan(cur: &mut Cursor, lambda: &[EigenToken]) -> Result<Vec<bool>> {
    let mut diag = Vec::new();
    let mut chain = Vec::new();
    let mut expect_entry = true;
    let mut open_link = false;
    while let Some((col, tok)) = cur.next() {
        if tok == "|" {
            if expect_entry || open_link {
                return Err(cur.err(col, "empty block or dangling ':1' before '|'"));
            }
            expect_entry = true;
            continue;
        }
        if !diag.is_empty() {
            chain.push(open_link);
        }
        if !expect_entry && !open_link {
            return Err(cur.err(col, "entries of one block must be linked with ':1'"));
        }
        let (value, link) = match tok.strip_suffix(":1") {
            Some(v) => (v, true),
            None => (tok, false),
        };
        let v = parse_eigen(value).ok_or_else(|| cur.err(col, format!("invalid entry '{}'", tok)))?;
        diag.push((col, v));
        open_link = link;
        expect_entry = false;
    }
    if open_link {
        return Err(Error::NotJordanForm("last entry carries a ':1' link".into()));
    }
    if diag.len() != lambda.len() {
        return Err(cur.err(
            cur.end_column(),
            format!("jordan has {} entries, expected {}", diag.len(), lambda.len()),
        ));
    }
    for (i, ((_, v), l)) in diag.iter().zip(lambda).enumerate() {
        if v != l {
            return Err(Error::NotJordanForm(format!(
                "diagonal entry {} is {} but lambda lists {}",
                i + 1,
                v,
                l
            )));
        }
    }
    for (i, &c) in chain.iter().enumerate() {
        if c && lambda[i] != lambda[i + 1] {
            return Err(Error::NotJordanForm(format!(
                "block links unequal eigenvalues {} and {}",
                lambda[i],
                lambda[i + 1]
            )));
        }
    }
    Ok(chain)
}

fn parse_options(cur: &mut Cursor, opts: &mut SystemOptions) -> Result<()> {
    while let Some((col, tok)) = cur.next() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| cur.err(col, format!("expected key=value, found '{}'", tok)))?;
        match k {
            "backend" => {
                opts.backend = match v {
                    "auto" => BackendChoice::Auto,
                    "exact" => BackendChoice::Exact,
                    "certified" => BackendChoice::Certified,
                    _ => return Err(cur.err(col, format!("unknown backend '{}'", v))),
                }
            }
            "N" => opts.trunc = parse_usize(cur, col, v)?,
            "precision" => {
                let p = parse_usize(cur, col, v)?;
                if p < 2 || p > u32::MAX as usize {
                    return Err(cur.err(col, "precision out of range"));
                }
                opts.precision = p as u32;
            }
            _ => return Err(cur.err(col, format!("unknown option '{}'", k))),
        }
    }
    Ok(())
}

pub fn parse_system(text: &str) -> Result<SystemFile> {
    let mut seen_header = false;
    let mut nvars: Option<usize> = None;
    let mut lambda: Option<Vec<EigenToken>> = None;
    let mut chain: Option<Vec<bool>> = None;
    let mut components: Vec<Option<Terms>> = Vec::new();
    let mut options = SystemOptions::default();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(line, body);
        let Some((col, kw)) = cur.next() else {
            continue;
        };
        if !seen_header {
            if kw != "system" {
                return Err(cur.err(col, "file must start with 'system'"));
            }
            seen_header = true;
            cur.finish()?;
            continue;
        }
        let need_vars = |cur: &Cursor| nvars.ok_or_else(|| cur.err(col, "'vars' must come first"));
        match kw {
            "vars" => {
                if nvars.is_some() {
                    return Err(cur.err(col, "duplicate 'vars'"));
                }
                let (c, t) = cur.expect("variable count")?;
                let n = parse_usize(&cur, c, t)?;
                if n == 0 {
                    return Err(cur.err(c, "need at least one variable"));
                }
                nvars = Some(n);
                components = vec![None; n];
                cur.finish()?;
            }
            "lambda" => {
                let n = need_vars(&cur)?;
                let mut vals = Vec::with_capacity(n);
                while let Some((c, t)) = cur.next() {
                    vals.push(
                        parse_eigen(t).ok_or_else(|| cur.err(c, format!("invalid eigenvalue '{}'", t)))?,
                    );
                }
                if vals.len() != n {
                    return Err(cur.err(
                        cur.end_column(),
                        format!("lambda has {} entries, expected {}", vals.len(), n),
                    ));
                }
                lambda = Some(vals);
            }
            "jordan" => {
                let lam = lambda
                    .as_ref()
                    .ok_or_else(|| cur.err(col, "'lambda' must come before 'jordan'"))?;
                chain = Some(parse_jordan(&mut cur, lam)?);
            }
            "options" => parse_options(&mut cur, &mut options)?,
            _ if kw.starts_with('f') => {
                let n = need_vars(&cur)?;
                let idx = kw[1..]
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k >= 1 && k <= n)
                    .ok_or_else(|| cur.err(col, format!("unknown component '{}'", kw)))?;
                match cur.next() {
                    Some((_, "=")) => {}
                    Some((c, t)) => return Err(cur.err(c, format!("expected '=', found '{}'", t))),
                    None => return Err(cur.err(cur.end_column(), "expected '='")),
                }
                if components[idx - 1].is_some() {
                    return Err(cur.err(col, format!("duplicate component '{}'", kw)));
                }
                components[idx - 1] = Some(parse_terms(&mut cur, n)?);
            }
            _ => return Err(cur.err(col, format!("unknown keyword '{}'", kw))),
        }
    }
    let eof = |m: &str| Error::Syntax {
        line: last_line + 1,
        column: 1,
        message: m.into(),
    };
    if !seen_header {
        return Err(eof("missing 'system' header"));
    }
    let nvars = nvars.ok_or_else(|| eof("missing 'vars'"))?;
    let lambda = lambda.ok_or_else(|| eof("missing 'lambda'"))?;
    let chain = chain.unwrap_or_else(|| vec![false; nvars - 1]);
    Ok(SystemFile {
        nvars,
        lambda,
        chain,
        components: components.into_iter().map(Option::unwrap_or_default).collect(),
        options,
    })
}

fn write_terms(out: &mut String, terms: &Terms) {
    if terms.is_empty() {
        out.push('0');
        return;
    }
    for (k, (e, c)) in terms.iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        write!(out, "{}", c).unwrap();
        for (i, p) in e.iter().enumerate() {
            if p > 0 {
                write!(out, " x{}^{}", i + 1, p).unwrap();
            }
        }
    }
}

impl SystemFile {
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("system\n");
        writeln!(out, "vars {}", self.nvars).unwrap();
        out.push_str("lambda");
        for l in &self.lambda {
            write!(out, " {}", l).unwrap();
        }
        out.push_str("\njordan");
        for (i, l) in self.lambda.iter().enumerate() {
            if i > 0 && !self.chain[i - 1] {
                out.push_str(" |");
            }
            write!(out, " {}", l).unwrap();
            if self.chain.get(i).copied().unwrap_or(false) {
                out.push_str(":1");
            }
        }
        out.push('\n');
        for (i, terms) in self.components.iter().enumerate() {
            write!(out, "f{} = ", i + 1).unwrap();
            write_terms(&mut out, terms);
            out.push('\n');
        }
        let backend = match self.options.backend {
            BackendChoice::Auto => "auto",
            BackendChoice::Exact => "exact",
            BackendChoice::Certified => "certified",
        };
        writeln!(
            out,
            "options backend={} N={} precision={}",
            backend, self.options.trunc, self.options.precision
        )
        .unwrap();
        out
    }

    pub fn has_zeta(&self) -> bool {
        self.lambda.iter().any(|l| matches!(l, EigenToken::Zeta { .. }))
    }

    /// `auto` picks certified arithmetic exactly when an eigenvalue is a
    /// `zeta` token.
    pub fn backend(&self) -> Result<Backend> {
        let certified = Backend::CertifiedReal {
            precision: self.options.precision,
        };
        match self.options.backend {
            BackendChoice::Certified => Ok(certified),
            BackendChoice::Auto if self.has_zeta() => Ok(certified),
            BackendChoice::Auto => Ok(Backend::ExactRational),
            BackendChoice::Exact if self.has_zeta() => Err(Error::InvalidArgument(
                "exact backend requested for an irrational eigenvalue".into(),
            )),
            BackendChoice::Exact => Ok(Backend::ExactRational),
        }
    }

    pub fn eigenvalues(&self, precision: u32) -> Result<Vec<Scalar>> {
        self.lambda.iter().map(|l| l.to_scalar(precision)).collect()
    }

    /// Builds the field with linear part `0 ⊕ B`, truncated at `N`.
    pub fn vector_field(&self, precision: u32) -> Result<VectorField> {
        if self.lambda[0] != EigenToken::Rational(BigRational::zero()) {
            return Err(Error::InvalidArgument("the first eigenvalue must be 0".into()));
        }
        if self.chain.first().copied().unwrap_or(false) {
            return Err(Error::InvalidArgument(
                "the zero eigenvalue must form its own 1x1 block".into(),
            ));
        }
        let lam = self.eigenvalues(precision)?;
        let b = JordanMatrix::new(lam[1..].to_vec(), self.chain.get(1..).unwrap_or(&[]).to_vec())?;
        let n = self.options.trunc;
        let series: Vec<TruncSeries> = self
            .components
            .iter()
            .map(|terms| {
                TruncSeries::from_terms(
                    self.nvars,
                    n,
                    terms.iter().map(|(e, c)| (e.clone(), Scalar::rational(c.clone()))),
                )
            })
            .collect();
        VectorField::new(b, series[0].clone(), series[1..].to_vec(), n)
    }

    /// Same eigenvalues and options, nonlinear part taken from `vf`.
    pub fn with_field(&self, vf: &VectorField) -> Result<SystemFile> {
        let mut comps = Vec::with_capacity(self.nvars);
        for s in std::iter::once(vf.f1()).chain(vf.g()) {
            let mut terms = Terms::new();
            for (e, c) in s.terms() {
                let q = c.as_rational().ok_or_else(|| {
                    Error::InvalidArgument("only exact coefficients can be written to a system file".into())
                })?;
                terms.push((e.clone(), q.clone()));
            }
            comps.push(canonical(terms));
        }
        let mut out = self.clone();
        out.components = comps;
        out.options.trunc = vf.trunc();
        Ok(out)
    }
}

/// `p/q` for exact values, `mid +/- rad` in dyadic notation for balls.
pub fn format_scalar(c: &Scalar) -> String {
    match c {
        Scalar::Exact(q) if q.denom().is_one() => q.numer().to_string(),
        Scalar::Exact(q) => format!("{}/{}", q.numer(), q.denom()),
        Scalar::Real(b) => b.to_string(),
    }
}
