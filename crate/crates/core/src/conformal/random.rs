use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::{monomials_up_to, q, qi, Jet, MultiPoly, Q};
use crate::tensor::{JetField, Slot, Symmetry};

use super::geometry::{tracefree_part, MetricJet};
use super::transform::ConformalFactor;

/// Seeded generator of random test data at the origin, with coefficients
/// drawn from `{-3..3}/{1..3}`.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
    order: u32,
    base: Vec<Q>,
}

impl Sampler {
    pub fn new(n: usize, order: u32, seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), n, order, base: vec![qi(0); n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn base(&self) -> &[Q] {
        &self.base
    }

    pub fn coefficient(&mut self) -> Q {
        let num = self.rng.gen_range(-3..=3);
        let den = self.rng.gen_range(1..=3);
        q(num, den)
    }

    fn nonzero_coefficient(&mut self) -> Q {
        loop {
            let c = self.coefficient();
            if c != qi(0) {
                return c;
            }
        }
    }

    /// Polynomial with `terms` random monomials of degree in `lo..=hi`.
    pub fn poly(&mut self, lo: u32, hi: u32, terms: usize) -> MultiPoly {
        let pool: Vec<_> = monomials_up_to(self.n, hi).into_iter().filter(|m| m.degree() >= lo).collect();
        let mut p = MultiPoly::zero(self.n);
        for _ in 0..terms {
            let m = pool[self.rng.gen_range(0..pool.len())].clone();
            let c = self.nonzero_coefficient();
            p = &p + &MultiPoly::monomial(self.n, m, c);
        }
        p
    }

    fn jet(&self, p: &MultiPoly) -> Jet {
        Jet::from_poly(p, &self.base, self.order)
    }

    /// `δ_ab` plus a symmetric perturbation vanishing at the origin.
    pub fn metric(&mut self) -> Result<MetricJet> {
        let n = self.n;
        let mut rows = vec![vec![MultiPoly::zero(n); n]; n];
        for a in 0..n {
            for b in a..n {
                let mut p = self.poly(1, 2, 2);
                if a == b {
                    p = &p + &MultiPoly::constant(n, qi(1));
                }
                rows[a][b] = p.clone();
                rows[b][a] = p;
            }
        }
        MetricJet::from_polys(&rows, &self.base, self.order)
    }

    /// `Ω = 1 + (terms of degree 1..=2)`.
    pub fn conformal_factor(&mut self) -> Result<ConformalFactor> {
        let p = &MultiPoly::constant(self.n, qi(1)) + &self.poly(1, 2, 3);
        ConformalFactor::new(self.jet(&p))
    }

    /// Density with value 1 at the origin.
    pub fn normalized_scalar(&mut self, w: Q) -> JetField {
        let p = &MultiPoly::constant(self.n, qi(1)) + &self.poly(1, 3, 3);
        JetField::scalar_jet(self.jet(&p), w)
    }

    /// Random field with the given slots; every component is independent.
    pub fn field(&mut self, slots: Vec<Slot>, w: Q) -> JetField {
        let n = self.n;
        let count = n.pow(slots.len() as u32);
        let comps: Vec<Jet> = (0..count).map(|_| {
            let p = self.poly(0, 3, 3);
            self.jet(&p)
        }).collect();
        JetField::new(n, slots, Symmetry::None, w, comps).expect("component count matches")
    }

    pub fn scalar(&mut self, w: Q) -> JetField {
        self.field(vec![], w)
    }

    pub fn vector(&mut self, w: Q) -> JetField {
        self.field(vec![Slot::Up], w)
    }

    pub fn oneform(&mut self, w: Q) -> JetField {
        self.field(vec![Slot::Down], w)
    }

    /// Symmetric contravariant field, trace-free with respect to `g`.
    pub fn tracefree(&mut self, w: Q, g: &MetricJet) -> JetField {
        let n = self.n;
        let mut v = JetField::from_fn(n, vec![Slot::Up, Slot::Up], Symmetry::Symmetric, w, |_| g.zero());
        for a in 0..n {
            for b in a..n {
                let p = self.poly(0, 3, 3);
                let j = self.jet(&p);
                v.set(&[a, b], j.clone());
                v.set(&[b, a], j);
            }
        }
        tracefree_part(g, &v)
    }
}
