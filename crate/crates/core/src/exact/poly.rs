use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::{monomials_up_to, MultiIndex};
use super::rational::{fmt_q, qi, Q};
use crate::error::{Error, Result};

/// Sparse polynomial over the rationals in coordinates `x1..xn`.
///
/// Terms are kept in a `BTreeMap` keyed by graded-lex monomial order and
/// zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, Q>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic on polynomials of the same dimension.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        Self::monomial(n, MultiIndex::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Q::one())
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(n, MultiIndex::unit(n, i), Q::one())
    }

    pub fn monomial(n: usize, m: MultiIndex, c: Q) -> Self {
        let mut p = Self::zero(n);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Q)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * x^m` in place.
    pub fn add_term(&mut self, m: MultiIndex, c: Q) {
        debug_assert_eq!(m.dim(), self.n);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&MultiIndex::zero(self.n))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Partial derivative along the 0-based coordinate `i`.
    pub fn diff(&self, i: usize) -> Self {
        assert!(i < self.n, "coordinate {i} out of range for dimension {}", self.n);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.get(i);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2 = m2.checked_sub(&MultiIndex::unit(self.n, i)).unwrap();
            out.add_term(m2, c * qi(e as i64));
        }
        out
    }

    /// `d^beta p`.
    pub fn diff_multi(&self, beta: &MultiIndex) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some(rest) = m.checked_sub(beta) {
                let mut factor = 1u64;
                for i in 0..self.n {
                    for k in 0..beta.get(i) {
                        factor *= (m.get(i) - k) as u64;
                    }
                }
                out.add_term(rest, c * Q::from_integer(factor.into()));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.n);
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-expands `p(x)` as a polynomial in `y = x - base`.
    pub fn recentered(&self, base: &[Q]) -> Self {
        if base.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let d = self.degree().unwrap_or(0);
        let mut out = Self::zero(self.n);
        for alpha in monomials_up_to(self.n, d) {
            let c = self.diff_multi(&alpha).eval(base) / Q::from_integer(alpha.factorial().into());
            out.add_term(alpha, c);
        }
        out
    }

    /// Drops every term of total degree above `k`.
    pub fn truncated(&self, k: u32) -> Self {
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated to total degree `<= k`; only pairs that survive the
    /// truncation are multiplied.
    pub fn mul_truncated(&self, other: &Self, k: u32) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = Self::zero(self.n);
        let rhs: Vec<(&MultiIndex, &Q, u32)> =
            other.terms.iter().map(|(m, c)| (m, c, m.degree())).collect();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > k {
                break;
            }
            for (mb, cb, db) in &rhs {
                if da + db > k {
                    break;
                }
                out.add_term(ma.add(mb), ca * *cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Checked partial derivative using the 1-based coordinate numbering of `x1..xn`.
pub fn poly_diff(p: &MultiPoly, i: usize) -> Result<MultiPoly> {
    if i == 0 || i > p.n {
        return Err(Error::IndexOutOfRange { index: i, n: p.n });
    }
    Ok(p.diff(i - 1))
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = MultiPoly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &'a MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_monomial(m: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

/// Highest graded-lex term first, e.g. `x1^2 - 2/3*x2*x3`. The output is
/// accepted back by the task-file polynomial parser.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = fmt_monomial(m);
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), mono)?;
            }
        }
        Ok(())
    }
}
