use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{q, qi, Jet, MultiPoly, Q};
use crate::tensor::{index_tuples, JetField, Slot, Symmetry};

/// Riemannian metric given by jets `g_ab` at a common base point, together
/// with its inverse `g^ab`.
#[derive(Clone, Debug)]
pub struct MetricJet {
    n: usize,
    g: Vec<Jet>,
    inv: Vec<Jet>,
}

fn invert(n: usize, m: &[Jet]) -> Result<Vec<Jet>> {
    let mut a: Vec<Vec<Jet>> = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
    let mut b: Vec<Vec<Jet>> = (0..n)
        .map(|i| (0..n).map(|j| m[0].constant_like(if i == j { Q::one() } else { Q::zero() })).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].value().is_zero()).ok_or(Error::SingularMetric)?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].inverse()?;
        for j in 0..n {
            a[c][j] = &a[c][j] * &inv;
            b[c][j] = &b[c][j] * &inv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &(&f * &a[c][j]);
                b[r][j] = &b[r][j] - &(&f * &b[c][j]);
            }
        }
    }
    Ok(b.into_iter().flatten().collect())
}

impl MetricJet {
    /// `rows[a][b] = g_ab`; must be symmetric and invertible at the base.
    pub fn new(rows: Vec<Vec<Jet>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::WrongTensorType("metric must be square".into()));
        }
        for a in 0..n {
            for b in 0..n {
                rows[a][b].check_compatible(&rows[0][0])?;
                if rows[a][b] != rows[b][a] {
                    return Err(Error::WrongTensorType("metric must be symmetric".into()));
                }
            }
        }
        let g: Vec<Jet> = rows.into_iter().flatten().collect();
        let inv = invert(n, &g)?;
        Ok(MetricJet { n, g, inv })
    }

    pub fn from_polys(rows: &[Vec<MultiPoly>], base: &[Q], order: u32) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|p| Jet::from_poly(p, base, order)).collect())
                .collect(),
        )
    }

    /// Euclidean metric `δ_ab`.
    pub fn flat(n: usize, base: &[Q], order: u32) -> Self {
        let rows: Vec<Vec<MultiPoly>> = (0..n)
            .map(|a| (0..n).map(|b| MultiPoly::constant(n, if a == b { qi(1) } else { qi(0) })).collect())
            .collect();
        Self::from_polys(&rows, base, order).expect("identity is invertible")
    }

    /// `factor * g_ab`.
    pub fn scaled(&self, factor: &Jet) -> Result<Self> {
        Self::new(
            (0..self.n)
                .map(|a| (0..self.n).map(|b| factor * self.g(a, b)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn g(&self, a: usize, b: usize) -> &Jet {
        &self.g[a * self.n + b]
    }

    pub fn inv(&self, a: usize, b: usize) -> &Jet {
        &self.inv[a * self.n + b]
    }

    pub fn base(&self) -> &[Q] {
        self.g[0].base()
    }

    pub fn order(&self) -> u32 {
        self.g.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn zero(&self) -> Jet {
        self.g[0].constant_like(Q::zero()).truncate(self.order())
    }

    pub fn constant(&self, c: Q) -> Jet {
        self.g[0].constant_like(c).truncate(self.order())
    }

    /// `g_ab` as a covariant tensor field of weight 2.
    pub fn as_field(&self) -> JetField {
        JetField::from_fn(self.n, vec![Slot::Down, Slot::Down], Symmetry::Symmetric, qi(2), |ix| {
            self.g(ix[0], ix[1]).clone()
        })
    }
}

/// Levi-Civita connection and curvature of a metric jet, computed once and
/// shared read-only.
///
/// Conventions: `Γ^c_ab = ½ g^cd (∂_a g_bd + ∂_b g_ad - ∂_d g_ab)`,
/// `R^e_bcd = ∂_c Γ^e_db - ∂_d Γ^e_cb + Γ^e_cf Γ^f_db - Γ^e_df Γ^f_cb`,
/// `R_abcd = g_ae R^e_bcd`, `R_bd = g^ac R_abcd`, `R = g^bd R_bd`, so the
/// round sphere has positive scalar curvature.
#[derive(Clone, Debug)]
pub struct GeometryCache {
    pub metric: MetricJet,
    christoffel: Vec<Jet>,
    pub riemann: JetField,
    pub ricci: JetField,
    pub scalar: Jet,
    pub phi: JetField,
}

impl GeometryCache {
    pub fn new(metric: MetricJet) -> Result<Self> {
        let n = metric.dim();
        if n < 3 {
            return Err(Error::Precondition(format!("curvature pipeline needs n >= 3, got {n}")));
        }
        if metric.order() < 2 {
            return Err(Error::OrderExhausted);
        }
        let dg: Vec<Jet> = index_tuples(n, 3)
            .iter()
            .map(|ix| metric.g(ix[1], ix[2]).diff(ix[0]))
            .collect::<Result<_>>()?;
        let dg = |c: usize, a: usize, b: usize| &dg[(c * n + a) * n + b];
        let half = q(1, 2);
        let first_kind: Vec<Jet> = index_tuples(n, 3)
            .iter()
            .map(|ix| {
                let (d, a, b) = (ix[0], ix[1], ix[2]);
                (&(dg(a, b, d) + dg(b, a, d)) - dg(d, a, b)).scale(&half)
            })
            .collect();
        let christoffel: Vec<Jet> = index_tuples(n, 3)
            .iter()
            .map(|ix| {
                let (c, a, b) = (ix[0], ix[1], ix[2]);
                (0..n).fold(metric.zero(), |acc, d| &acc + &(metric.inv(c, d) * &first_kind[(d * n + a) * n + b]))
            })
            .collect();
        let gam = |c: usize, a: usize, b: usize| &christoffel[(c * n + a) * n + b];

        // R^e_bcd for c < d, then antisymmetry.
        let mut up = vec![metric.zero().truncate(metric.order() - 2); n * n * n * n];
        let at = |e: usize, b: usize, c: usize, d: usize| ((e * n + b) * n + c) * n + d;
        for e in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in c + 1..n {
                        let mut r = &gam(e, d, b).diff(c)? - &gam(e, c, b).diff(d)?;
                        for f in 0..n {
                            r = &r + &(gam(e, c, f) * gam(f, d, b));
                            r = &r - &(gam(e, d, f) * gam(f, c, b));
                        }
                        up[at(e, b, d, c)] = -&r;
                        up[at(e, b, c, d)] = r;
                    }
                }
            }
        }
        let riemann = JetField::from_fn(n, vec![Slot::Down; 4], Symmetry::None, qi(2), |ix| {
            let (a, b, c, d) = (ix[0], ix[1], ix[2], ix[3]);
            (0..n).fold(metric.zero(), |acc, e| &acc + &(metric.g(a, e) * &up[at(e, b, c, d)]))
        });
        let ricci = JetField::from_fn(n, vec![Slot::Down, Slot::Down], Symmetry::Symmetric, qi(0), |ix| {
            let (b, d) = (ix[0], ix[1]);
            (0..n).fold(metric.zero(), |acc, c| &acc + &up[at(c, b, c, d)])
        });
        let scalar = index_tuples(n, 2)
            .iter()
            .fold(metric.zero(), |acc, ix| &acc + &(metric.inv(ix[0], ix[1]) * ricci.get(ix)));
        let inv_n = q(1, n as i64);
        let inv_n2 = q(1, n as i64 - 2);
        let phi = JetField::from_fn(n, vec![Slot::Down, Slot::Down], Symmetry::Symmetric, qi(0), |ix| {
            let trace = (&scalar * metric.g(ix[0], ix[1])).scale(&inv_n);
            (ricci.get(ix) - &trace).scale(&inv_n2)
        });
        Ok(GeometryCache { metric, christoffel, riemann, ricci, scalar, phi })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// `Γ^c_ab`.
    pub fn christoffel(&self, c: usize, a: usize, b: usize) -> &Jet {
        let n = self.dim();
        &self.christoffel[(c * n + a) * n + b]
    }
}

/// Convenience constructor mirroring the operation name.
pub fn geometry_cache(g: MetricJet) -> Result<GeometryCache> {
    GeometryCache::new(g)
}

/// Levi-Civita covariant derivative; the new covariant slot comes first.
/// Density weights ride along untouched because the metric trivialization
/// of the density bundle is parallel.
pub fn cov_deriv(cache: &GeometryCache, t: &JetField) -> Result<JetField> {
    let n = cache.dim();
    if t.dim() != n {
        return Err(Error::DimensionMismatch(n, t.dim()));
    }
    if t.valid_order() == 0 {
        return Err(Error::OrderExhausted);
    }
    let rank = t.rank();
    let mut slots = vec![Slot::Down];
    slots.extend_from_slice(t.slots());
    let mut err = None;
    let out = JetField::from_fn(n, slots, Symmetry::None, t.weight().clone(), |ix| {
        let a = ix[0];
        let rest = &ix[1..];
        let mut v = match t.get(rest).diff(a) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                return cache.metric.zero();
            }
        };
        for i in 0..rank {
            let mut jx = rest.to_vec();
            for d in 0..n {
                jx[i] = d;
                match t.slots()[i] {
                    Slot::Up => v = &v + &(cache.christoffel(rest[i], a, d) * t.get(&jx)),
                    Slot::Down => v = &v - &(cache.christoffel(d, a, rest[i]) * t.get(&jx)),
                }
            }
        }
        v
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Contracts slot `i` against slot `j` (one up, one down).
pub fn contract(t: &JetField, i: usize, j: usize) -> Result<JetField> {
    let (i, j) = (i.min(j), i.max(j));
    if i == j || t.slots()[i] == t.slots()[j] {
        return Err(Error::WrongTensorType("contraction needs one up and one down slot".into()));
    }
    let n = t.dim();
    let slots: Vec<Slot> = t
        .slots()
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i && *k != j)
        .map(|(_, s)| *s)
        .collect();
    let zero = t.comps()[0].zero_like();
    Ok(JetField::from_fn(n, slots, Symmetry::None, t.weight().clone(), |ix| {
        (0..n).fold(zero.clone(), |acc, d| {
            let mut full = ix.to_vec();
            full.insert(i, d);
            full.insert(j, d);
            &acc + t.get(&full)
        })
    }))
}

/// Full pairing `Σ s^{ix} t_{ix}` of two fields with opposite slots.
pub fn pair(s: &JetField, t: &JetField) -> Result<Jet> {
    if s.rank() != t.rank() || s.slots().iter().zip(t.slots()).any(|(a, b)| a == b) {
        return Err(Error::WrongTensorType("pairing needs opposite slots".into()));
    }
    let zero = s.comps()[0].zero_like();
    Ok(s.comps().iter().zip(t.comps()).fold(zero, |acc, (a, b)| &acc + &(a * b)))
}

/// Lowers (`Up -> Down`) or raises slot `i` with the metric.
pub fn move_index(metric: &MetricJet, t: &JetField, i: usize) -> JetField {
    let n = t.dim();
    let mut slots = t.slots().to_vec();
    let to = match slots[i] {
        Slot::Up => Slot::Down,
        Slot::Down => Slot::Up,
    };
    slots[i] = to;
    JetField::from_fn(n, slots, Symmetry::None, t.weight().clone(), |ix| {
        (0..n).fold(metric.zero(), |acc, d| {
            let mut jx = ix.to_vec();
            jx[i] = d;
            let m = match to {
                Slot::Down => metric.g(ix[i], d),
                Slot::Up => metric.inv(ix[i], d),
            };
            &acc + &(m * t.get(&jx))
        })
    })
}

/// Laplacian `g^ab ∇_a ∇_b f` of a scalar density.
pub fn laplacian(cache: &GeometryCache, f: &JetField) -> Result<Jet> {
    let hess = cov_deriv(cache, &cov_deriv(cache, f)?)?;
    let n = cache.dim();
    Ok(index_tuples(n, 2)
        .iter()
        .fold(cache.metric.zero(), |acc, ix| &acc + &(cache.metric.inv(ix[0], ix[1]) * hess.get(ix))))
}

/// Divergence over the derivative slot and the first upper slot.
pub fn divergence(cache: &GeometryCache, t: &JetField) -> Result<JetField> {
    if t.slots().first() != Some(&Slot::Up) {
        return Err(Error::WrongTensorType("divergence needs a leading upper slot".into()));
    }
    contract(&cov_deriv(cache, t)?, 0, 1)
}

/// Trace-free part of a contravariant symmetric rank-2 field.
pub fn tracefree_part(metric: &MetricJet, v: &JetField) -> JetField {
    let n = metric.dim();
    let tr = index_tuples(n, 2)
        .iter()
        .fold(metric.zero(), |acc, ix| &acc + &(metric.g(ix[0], ix[1]) * v.get(ix)));
    let tr = tr.scale(&q(1, n as i64));
    JetField::from_fn(n, vec![Slot::Up, Slot::Up], Symmetry::SymmetricTraceFree, v.weight().clone(), |ix| {
        v.get(ix) - &(&tr * metric.inv(ix[0], ix[1]))
    })
}

/// `g_ab V^ab`.
pub fn metric_trace(metric: &MetricJet, v: &JetField) -> Jet {
    index_tuples(metric.dim(), 2)
        .iter()
        .fold(metric.zero(), |acc, ix| &acc + &(metric.g(ix[0], ix[1]) * v.get(ix)))
}
