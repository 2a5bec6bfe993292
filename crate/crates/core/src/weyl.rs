//! Polynomial-coefficient differential operators on flat `R^n` (the Weyl
//! algebra) in normal order: every operator is stored uniquely as
//! `sum_beta c_beta(x) d^beta` with coefficients to the left.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{MultiIndex, MultiPoly, Q};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    n: usize,
    terms: BTreeMap<MultiIndex, MultiPoly>,
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::multiplication(MultiPoly::one(n))
    }

    /// The order-0 operator `f -> p f`.
    pub fn multiplication(p: MultiPoly) -> Self {
        let n = p.dim();
        let mut op = Self::zero(n);
        op.add_term(MultiIndex::zero(n), p);
        op
    }

    /// `d/dx_{i+1}` (0-based `i`).
    pub fn partial(n: usize, i: usize) -> Self {
        let mut op = Self::zero(n);
        op.add_term(MultiIndex::unit(n, i), MultiPoly::one(n));
        op
    }

    /// `c(x) d^beta`.
    pub fn term(beta: MultiIndex, c: MultiPoly) -> Self {
        let mut op = Self::zero(c.dim());
        op.add_term(beta, c);
        op
    }

    /// The vector field `V^a d_a` as an operator.
    pub fn vector_field(v: &[MultiPoly]) -> Self {
        let n = v.len();
        let mut op = Self::zero(n);
        for (a, c) in v.iter().enumerate() {
            op.add_term(MultiIndex::unit(n, a), c.clone());
        }
        op
    }

    pub fn add_term(&mut self, beta: MultiIndex, c: MultiPoly) {
        assert_eq!(c.dim(), self.n, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(beta) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Highest derivative order present; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Highest coefficient degree present.
    pub fn coefficient_degree(&self) -> u32 {
        self.terms.values().filter_map(MultiPoly::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, beta: &MultiIndex) -> MultiPoly {
        self.terms.get(beta).cloned().unwrap_or_else(|| MultiPoly::zero(self.n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        DiffOp {
            n: self.n,
            terms: self.terms.iter().map(|(b, p)| (b.clone(), p.scale(c))).collect(),
        }
    }

    /// Left multiplication `p * self`.
    pub fn left_mul(&self, p: &MultiPoly) -> Self {
        let mut op = Self::zero(self.n);
        for (b, c) in &self.terms {
            op.add_term(b.clone(), p * c);
        }
        op
    }

    fn check_dim(&self, other_n: usize) -> Result<()> {
        if self.n != other_n {
            return Err(Error::DimensionMismatch(self.n, other_n));
        }
        Ok(())
    }

    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(f.dim())?;
        let mut out = MultiPoly::zero(self.n);
        for (beta, c) in &self.terms {
            out = &out + &(c * &f.diff_multi(beta));
        }
        Ok(out)
    }

    /// Normal-ordered product `self ∘ other` by the Leibniz rule
    /// `(a d^α)(b d^β) = a Σ_{γ≤α} binom(α,γ) (d^γ b) d^{α-γ+β}`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_dim(other.n)?;
        let mut acc: BTreeMap<MultiIndex, MultiPoly> = BTreeMap::new();
        for (alpha, a) in &self.terms {
            let subs = alpha.sub_indices();
            for (beta, b) in &other.terms {
                for gamma in &subs {
                    let db = b.diff_multi(gamma);
                    if db.is_zero() {
                        continue;
                    }
                    let k = alpha.binomial(gamma);
                    let coef = (a * &db).scale(&Q::from_integer(k.into()));
                    let idx = alpha.checked_sub(gamma).unwrap().add(beta);
                    let slot = acc.entry(idx).or_insert_with(|| MultiPoly::zero(self.n));
                    *slot = &*slot + &coef;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(DiffOp { n: self.n, terms: acc })
    }

    /// `[self, other] = self∘other - other∘self`.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        Ok(&self.compose(other)? - &other.compose(self)?)
    }
}

pub fn op_apply(d: &DiffOp, f: &MultiPoly) -> Result<MultiPoly> {
    d.apply(f)
}

pub fn op_compose(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    a.compose(b)
}

pub fn op_commutator(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    a.commutator(b)
}

pub fn op_is_zero(a: &DiffOp) -> bool {
    a.is_zero()
}

/// `Σ_i d_i^2` on `R^n`.
pub fn laplacian(n: usize) -> DiffOp {
    assert!(n >= 1, "laplacian needs n >= 1");
    let mut op = DiffOp::zero(n);
    for i in 0..n {
        let mut beta = MultiIndex::zero(n);
        beta = beta.with_incremented(i).with_incremented(i);
        op.add_term(beta, MultiPoly::one(n));
    }
    op
}

/// The Euler operator `x^a d_a`.
pub fn euler_operator(n: usize) -> DiffOp {
    DiffOp::vector_field(&(0..n).map(|i| MultiPoly::var(n, i)).collect::<Vec<_>>())
}

impl<'a> Add<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &'a DiffOp) -> DiffOp {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &'a DiffOp) -> DiffOp {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            n: self.n,
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }
}

fn fmt_derivative(beta: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (i, &e) in beta.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("d{}", i + 1)),
            _ => parts.push(format!("d{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

/// Highest derivative first; e.g. `(x1^2 - x2^2)*d1 + 2*x1*x2*d2 + x1`.
impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (beta, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let d = fmt_derivative(beta);
            let cs = c.to_string();
            if d.is_empty() {
                if c.len() > 1 {
                    write!(f, "({cs})")?;
                } else {
                    write!(f, "{cs}")?;
                }
            } else if cs == "1" {
                write!(f, "{d}")?;
            } else if c.len() > 1 || cs.starts_with('-') {
                write!(f, "({cs})*{d}")?;
            } else {
                write!(f, "{cs}*{d}")?;
            }
        }
        Ok(())
    }
}
