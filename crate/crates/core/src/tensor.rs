//! Weighted tensor fields with dense component storage.


use crate::error::{Error, Result};
use crate::exact::{fmt_q, Jet, MultiPoly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    None,
    Symmetric,
    SymmetricTraceFree,
    Skew,
}

/// A tensor field on an `n`-dimensional patch: index slots, symmetry tag,
/// conformal weight `w` (components rescale as `Ω^w` under `ĝ = Ω² g`) and
/// the `n^rank` components in row-major index order.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField<C> {
    n: usize,
    slots: Vec<Slot>,
    symmetry: Symmetry,
    weight: Q,
    comps: Vec<C>,
}

pub type PolyField = TensorField<MultiPoly>;
pub type JetField = TensorField<Jet>;

/// Every index tuple in `0..n` of length `rank`, row-major.
pub fn index_tuples(n: usize, rank: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

impl<C: Clone> TensorField<C> {
    pub fn new(n: usize, slots: Vec<Slot>, symmetry: Symmetry, weight: Q, comps: Vec<C>) -> Result<Self> {
        let expect = n.pow(slots.len() as u32);
        if comps.len() != expect {
            return Err(Error::WrongTensorType(format!(
                "expected {expect} components, got {}",
                comps.len()
            )));
        }
        Ok(TensorField { n, slots, symmetry, weight, comps })
    }

    pub fn from_fn(
        n: usize,
        slots: Vec<Slot>,
        symmetry: Symmetry,
        weight: Q,
        mut f: impl FnMut(&[usize]) -> C,
    ) -> Self {
        let comps = index_tuples(n, slots.len()).iter().map(|ix| f(ix)).collect();
        TensorField { n, slots, symmetry, weight, comps }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn weight(&self) -> &Q {
        &self.weight
    }

    pub fn with_weight(mut self, w: Q) -> Self {
        self.weight = w;
        self
    }

    pub fn with_symmetry(mut self, s: Symmetry) -> Self {
        self.symmetry = s;
        self
    }

    pub fn comps(&self) -> &[C] {
        &self.comps
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, idx: &[usize]) -> &C {
        &self.comps[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], c: C) {
        let o = self.offset(idx);
        self.comps[o] = c;
    }

    pub fn map<D: Clone>(&self, f: impl FnMut(&C) -> D) -> TensorField<D> {
        TensorField {
            n: self.n,
            slots: self.slots.clone(),
            symmetry: self.symmetry,
            weight: self.weight.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Requires exactly these slots (and, if given, this symmetry tag).
    pub fn expect_shape(&self, slots: &[Slot], symmetry: Option<Symmetry>) -> Result<()> {
        if self.slots != slots {
            return Err(Error::WrongTensorType(format!(
                "expected slots {:?}, got {:?}",
                slots, self.slots
            )));
        }
        if let Some(s) = symmetry {
            if self.symmetry != s {
                return Err(Error::WrongTensorType(format!(
                    "expected symmetry {:?}, got {:?}",
                    s, self.symmetry
                )));
            }
        }
        Ok(())
    }

    pub fn expect_weight(&self, w: &Q) -> Result<()> {
        if &self.weight != w {
            return Err(Error::WrongWeight { expected: fmt_q(w), got: fmt_q(&self.weight) });
        }
        Ok(())
    }
}

impl<C: Clone + PartialEq> TensorField<C> {
    /// Rank-2 components are symmetric (or skew, via `neg`) as tagged.
    pub fn respects_symmetry(&self, neg: impl Fn(&C) -> C) -> bool {
        if self.rank() != 2 {
            return matches!(self.symmetry, Symmetry::None);
        }
        let n = self.n;
        let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
        match self.symmetry {
            Symmetry::None => true,
            Symmetry::Symmetric | Symmetry::SymmetricTraceFree => {
                pairs.into_iter().all(|(a, b)| self.get(&[a, b]) == self.get(&[b, a]))
            }
            Symmetry::Skew => pairs.into_iter().all(|(a, b)| *self.get(&[a, b]) == neg(self.get(&[b, a]))),
        }
    }
}

impl PolyField {
    pub fn scalar(p: MultiPoly, weight: Q) -> Self {
        let n = p.dim();
        TensorField { n, slots: vec![], symmetry: Symmetry::None, weight, comps: vec![p] }
    }

    /// Contravariant vector field `V^a`.
    pub fn vector(v: Vec<MultiPoly>, weight: Q) -> Self {
        let n = v.len();
        TensorField { n, slots: vec![Slot::Up], symmetry: Symmetry::None, weight, comps: v }
    }

    /// Contravariant valence-2 field from an `n x n` array of components.
    pub fn contravariant2(rows: Vec<Vec<MultiPoly>>, symmetry: Symmetry, weight: Q) -> Result<Self> {
        let n = rows.len();
        let comps: Vec<MultiPoly> = rows.into_iter().flatten().collect();
        let t = Self::new(n, vec![Slot::Up, Slot::Up], symmetry, weight, comps)?;
        t.validate()?;
        Ok(t)
    }

    pub fn zero(n: usize, slots: Vec<Slot>, symmetry: Symmetry, weight: Q) -> Self {
        Self::from_fn(n, slots, symmetry, weight, |_| MultiPoly::zero(n))
    }

    /// Euclidean trace of a rank-2 field.
    pub fn euclidean_trace(&self) -> MultiPoly {
        assert_eq!(self.rank(), 2);
        (0..self.n).fold(MultiPoly::zero(self.n), |acc, a| &acc + self.get(&[a, a]))
    }

    /// Checks the symmetry tag (and the trace-free condition, with the flat
    /// metric, for `SymmetricTraceFree`).
    pub fn validate(&self) -> Result<()> {
        if !self.respects_symmetry(|c| -c) {
            return Err(Error::WrongTensorType(format!(
                "components do not respect the {:?} tag",
                self.symmetry
            )));
        }
        if self.symmetry == Symmetry::SymmetricTraceFree && !self.euclidean_trace().is_zero() {
            return Err(Error::WrongTensorType("tensor tagged trace-free has nonzero trace".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(MultiPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            *a = &*a + b;
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Taylor jets of every component.
    pub fn to_jets(&self, base: &[Q], order: u32) -> JetField {
        self.map(|p| Jet::from_poly(p, base, order))
    }
}

impl JetField {
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Jet::is_zero)
    }

    /// Minimum valid order over all components.
    pub fn valid_order(&self) -> u32 {
        self.comps.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            *a = &*a - b;
        }
        out
    }

    pub fn scale_by(&self, c: &Jet) -> Self {
        self.map(|j| j * c)
    }

    pub fn truncate(&self, order: u32) -> Self {
        self.map(|j| j.truncate(order))
    }

    /// Number of components that are nonzero to valid order.
    pub fn nonzero_count(&self) -> usize {
        self.comps.iter().filter(|j| !j.is_zero()).count()
    }

    pub fn scalar_jet(j: Jet, weight: Q) -> Self {
        let n = j.dim();
        TensorField { n, slots: vec![], symmetry: Symmetry::None, weight, comps: vec![j] }
    }
}

impl<C: Clone> TensorField<C> {
    /// The single component of a rank-0 field.
    pub fn as_scalar(&self) -> &C {
        assert!(self.slots.is_empty(), "not a scalar field");
        &self.comps[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qi;

    #[test]
    fn tuples_are_row_major() {
        let t = index_tuples(2, 2);
        assert_eq!(t, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(index_tuples(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn symmetric_validation() {
        let x = |i| MultiPoly::var(2, i);
        let ok = PolyField::contravariant2(
            vec![vec![x(0), x(1)], vec![x(1), -x(0)]],
            Symmetry::SymmetricTraceFree,
            qi(0),
        );
        assert!(ok.is_ok());
        let not_tf = PolyField::contravariant2(
            vec![vec![x(0), x(1)], vec![x(1), x(0)]],
            Symmetry::SymmetricTraceFree,
            qi(0),
        );
        assert!(not_tf.is_err());
        let not_sym = PolyField::contravariant2(vec![vec![x(0), x(1)], vec![x(0), x(0)]], Symmetry::Symmetric, qi(0));
        assert!(not_sym.is_err());
        let skew = PolyField::contravariant2(
            vec![vec![MultiPoly::zero(2), x(1)], vec![-x(1), MultiPoly::zero(2)]],
            Symmetry::Skew,
            qi(0),
        );
        assert!(skew.is_ok());
    }

    #[test]
    fn wrong_component_count() {
        assert!(PolyField::new(3, vec![Slot::Up], Symmetry::None, qi(0), vec![]).is_err());
    }
}
