use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::MultiIndex;
use super::poly::MultiPoly;
use super::rational::{binomial_q, fmt_q, qi, Q};
use crate::error::{Error, Result};

/// Truncated Taylor expansion of a function at a rational base point.
///
/// The coefficients are stored as a polynomial in the local coordinates
/// `y = x - base`, with every monomial of total degree above `order`
/// dropped. `order` is the order up to which the coefficients are known to
/// be exact: products take the minimum of their inputs and each derivative
/// costs one order.
#[derive(Clone, Debug)]
pub struct Jet {
    base: Arc<[Q]>,
    order: u32,
    poly: MultiPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary jet arithmetic.
pub fn jet_arith(a: &Jet, b: &Jet, op: JetOp) -> Result<Jet> {
    a.check_compatible(b)?;
    Ok(match op {
        JetOp::Add => a + b,
        JetOp::Sub => a - b,
        JetOp::Mul => a * b,
        JetOp::Div => a.try_div(b)?,
    })
}

impl Jet {
    /// Taylor coefficients of `p` at `base`, truncated at `order`.
    pub fn from_poly(p: &MultiPoly, base: &[Q], order: u32) -> Self {
        assert_eq!(p.dim(), base.len());
        Jet {
            base: base.into(),
            order,
            poly: p.recentered(base).truncated(order),
        }
    }

    /// Like [`Jet::from_poly`] with the base point at the origin.
    pub fn at_origin(p: &MultiPoly, order: u32) -> Self {
        let base = vec![Q::zero(); p.dim()];
        Self::from_poly(p, &base, order)
    }

    pub fn constant(base: &[Q], order: u32, c: Q) -> Self {
        Jet {
            base: base.into(),
            order,
            poly: MultiPoly::constant(base.len(), c),
        }
    }

    /// Builds a jet directly from local-coordinate coefficients.
    pub fn from_local(local: MultiPoly, base: &[Q], order: u32) -> Self {
        assert_eq!(local.dim(), base.len());
        Jet { base: base.into(), order, poly: local.truncated(order) }
    }

    pub fn zero_like(&self) -> Self {
        Jet {
            base: self.base.clone(),
            order: self.order,
            poly: MultiPoly::zero(self.dim()),
        }
    }

    pub fn constant_like(&self, c: Q) -> Self {
        Jet {
            base: self.base.clone(),
            order: self.order,
            poly: MultiPoly::constant(self.dim(), c),
        }
    }

    /// The local coordinate `y_i = x_i - base_i` as a jet.
    pub fn coordinate_like(&self, i: usize) -> Self {
        Jet {
            base: self.base.clone(),
            order: self.order,
            poly: MultiPoly::var(self.dim(), i).truncated(self.order),
        }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn base(&self) -> &[Q] {
        &self.base
    }

    /// Coefficients in local coordinates `y = x - base`.
    pub fn local(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn coeff(&self, m: &MultiIndex) -> Q {
        self.poly.coeff(m)
    }

    /// Value at the base point.
    pub fn value(&self) -> Q {
        self.poly.constant_term()
    }

    /// Zero to the valid order.
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Forgets every coefficient above `order` (no-op if already lower).
    pub fn truncate(&self, order: u32) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            base: self.base.clone(),
            order,
            poly: self.poly.truncated(order),
        }
    }

    pub fn same_base(&self, other: &Jet) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || self.base == other.base
    }

    pub fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        if !self.same_base(other) {
            return Err(Error::BasePointMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Jet {
            base: self.base.clone(),
            order: self.order,
            poly: self.poly.scale(c),
        }
    }

    /// Partial derivative along the 0-based coordinate `i`; costs one order.
    pub fn diff(&self, i: usize) -> Result<Self> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, n: self.dim() });
        }
        if self.order == 0 {
            return Err(Error::OrderExhausted);
        }
        Ok(Jet {
            base: self.base.clone(),
            order: self.order - 1,
            poly: self.poly.diff(i),
        })
    }

    /// `sum_k coeffs(k) * u^k` truncated, where `u` has zero value.
    fn series(u: &Jet, coeffs: impl Fn(u32) -> Q) -> Jet {
        let k_max = u.order;
        let mut acc = u.constant_like(coeffs(0));
        let mut power = u.constant_like(Q::one());
        for k in 1..=k_max {
            power = &power * u;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power.scale(&coeffs(k));
        }
        acc
    }

    /// Multiplicative inverse via the truncated geometric series.
    pub fn inverse(&self) -> Result<Jet> {
        let c = self.value();
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c_inv = c.recip();
        let u = &self.scale(&c_inv) - &self.constant_like(Q::one());
        let geo = Self::series(&u, |k| if k % 2 == 0 { Q::one() } else { -Q::one() });
        Ok(geo.scale(&c_inv))
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self * &other.inverse()?)
    }

    /// `self^w` for rational `w`, defined for jets with value exactly 1 so
    /// that the binomial series has rational coefficients.
    pub fn pow_rational(&self, w: &Q) -> Result<Jet> {
        let c = self.value();
        if !c.is_one() {
            return Err(Error::NotNormalized(fmt_q(&c)));
        }
        if w.is_zero() {
            return Ok(self.constant_like(Q::one()));
        }
        let u = self - &self.constant_like(Q::one());
        Ok(Self::series(&u, |k| binomial_q(w, k)))
    }

    /// Integer power, allowed for any value at the base point.
    pub fn powi(&self, e: i32) -> Result<Jet> {
        let mut acc = self.constant_like(Q::one());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * self;
        }
        if e < 0 {
            acc.inverse()
        } else {
            Ok(acc)
        }
    }

    /// `exp(self)` for jets vanishing at the base point.
    pub fn exp(&self) -> Result<Jet> {
        let c = self.value();
        if !c.is_zero() {
            return Err(Error::Precondition(format!(
                "exp needs a jet vanishing at the base point, got value {}",
                fmt_q(&c)
            )));
        }
        let mut fact = Q::one();
        let facts: Vec<Q> = (0..=self.order)
            .map(|k| {
                if k > 0 {
                    fact = &fact * qi(k as i64);
                }
                fact.recip()
            })
            .collect();
        Ok(Self::series(self, |k| facts[k as usize].clone()))
    }
}

impl PartialEq for Jet {
    /// Equal base point, valid order and coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.same_base(other) && self.order == other.order && self.poly == other.poly
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, rhs: &'a Jet) -> Jet {
        debug_assert!(self.same_base(rhs), "jets at different base points");
        let order = self.order.min(rhs.order);
        Jet {
            base: self.base.clone(),
            order,
            poly: (&self.poly + &rhs.poly).truncated(order),
        }
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, rhs: &'a Jet) -> Jet {
        debug_assert!(self.same_base(rhs), "jets at different base points");
        let order = self.order.min(rhs.order);
        Jet {
            base: self.base.clone(),
            order,
            poly: (&self.poly - &rhs.poly).truncated(order),
        }
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, rhs: &'a Jet) -> Jet {
        debug_assert!(self.same_base(rhs), "jets at different base points");
        let order = self.order.min(rhs.order);
        Jet {
            base: self.base.clone(),
            order,
            poly: self.poly.mul_truncated(&rhs.poly, order),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            base: self.base.clone(),
            order: self.order,
            poly: -&self.poly,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $f(self, rhs: Jet) -> Jet {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Jet> for Jet {
            type Output = Jet;
            fn $f(self, rhs: &'a Jet) -> Jet {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Jet> for &'a Jet {
            type Output = Jet;
            fn $f(self, rhs: Jet) -> Jet {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.poly, self.order + 1)
    }
}
