use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent tuple `(e1, .., en)`, used both for monomials `x^e` and for
/// derivative multi-indices `d^e`.
///
/// Ordered graded-lexicographically: total degree first, then exponents
/// compared left to right (so `x1 > x2 > .. > xn` within a degree).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(SmallVec<[u16; 6]>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// The unit index `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if some exponent would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = SmallVec::with_capacity(self.dim());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn with_incremented(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    /// Every `gamma <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(SmallVec::new())];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for prefix in &out {
                for k in 0..=e {
                    let mut m = prefix.clone();
                    m.0.push(k);
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }

    /// Product of componentwise binomials `binom(self, gamma)`.
    pub fn binomial(&self, gamma: &Self) -> u64 {
        self.0
            .iter()
            .zip(&gamma.0)
            .map(|(&a, &g)| binom(a as u64, g as u64))
            .product()
    }

    /// `self! = prod e_i!`
    pub fn factorial(&self) -> u64 {
        self.0.iter().map(|&e| (1..=e as u64).product::<u64>()).product()
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All exponent tuples of total degree exactly `d` in `n` variables, in
/// ascending graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, d: u16, prefix: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(MultiIndex::from_exponents(prefix));
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![MultiIndex::zero(0)] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(n, d as u16, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All exponent tuples of total degree `<= d`, ascending graded-lex.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<MultiIndex> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomials() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_up_to(4, 6).len(), 210);
        assert_eq!(monomials_of_degree(5, 5).len(), 126);
    }

    #[test]
    fn graded_lex_order() {
        let ms = monomials_of_degree(3, 1);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ms.last().unwrap(), &MultiIndex::unit(3, 0));
        let a = MultiIndex::from_exponents(&[0, 0, 2]);
        let b = MultiIndex::from_exponents(&[1, 0, 0]);
        assert!(a > b);
    }

    #[test]
    fn sub_indices_and_binomial() {
        let a = MultiIndex::from_exponents(&[2, 1]);
        let subs = a.sub_indices();
        assert_eq!(subs.len(), 6);
        let total: u64 = subs.iter().map(|g| a.binomial(g)).sum();
        assert_eq!(total, 8);
        assert_eq!(a.factorial(), 2);
    }
}
