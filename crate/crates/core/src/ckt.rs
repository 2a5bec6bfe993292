//! Conformal Killing fields and valence-2 conformal Killing tensors on flat
//! `R^n`: explicit parametrization, the defining equations, and an exact
//! bounded-degree solver.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{monomials_of_degree, q, qi, MultiIndex, MultiPoly, SparseSystem, Q};
use crate::tensor::{index_tuples, PolyField, Slot, Symmetry};

/// Parameters `(s, m, λ, r)` of a flat conformal Killing field: translation,
/// rotation (`m` skew), dilation and special conformal part.
#[derive(Clone, Debug, PartialEq)]
pub struct CKParameters {
    pub s: Vec<Q>,
    pub m: Vec<Vec<Q>>,
    pub lambda: Q,
    pub r: Vec<Q>,
}

impl CKParameters {
    pub fn zero(n: usize) -> Self {
        CKParameters {
            s: vec![Q::zero(); n],
            m: vec![vec![Q::zero(); n]; n],
            lambda: Q::zero(),
            r: vec![Q::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.s.len()
    }

    /// One parameter set per basis direction: `s = e_i`, `m = e_i∧e_j`
    /// (`i<j`), `λ = 1`, `r = e_i`; `(n+1)(n+2)/2` in total.
    pub fn unit_basis(n: usize) -> Vec<CKParameters> {
        let mut out = Vec::new();
        for i in 0..n {
            let mut p = Self::zero(n);
            p.s[i] = qi(1);
            out.push(p);
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut p = Self::zero(n);
                p.m[i][j] = qi(1);
                p.m[j][i] = qi(-1);
                out.push(p);
            }
        }
        let mut p = Self::zero(n);
        p.lambda = qi(1);
        out.push(p);
        for i in 0..n {
            let mut p = Self::zero(n);
            p.r[i] = qi(1);
            out.push(p);
        }
        out
    }
}

/// `V^a = -s^a - m^a_b x^b + λ x^a + (r·x) x^a - ½ (x·x) r^a`, weight 0.
pub fn ckv_from_parameters(n: usize, params: &CKParameters) -> Result<PolyField> {
    if params.dim() != n || params.r.len() != n || params.m.len() != n || params.m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(n, params.dim()));
    }
    for a in 0..n {
        for b in 0..n {
            if params.m[a][b] != -params.m[b][a].clone() {
                return Err(Error::NotSkew);
            }
        }
    }
    let x = |i| MultiPoly::var(n, i);
    let rx = (0..n).fold(MultiPoly::zero(n), |acc, b| &acc + &x(b).scale(&params.r[b]));
    let xx = (0..n).fold(MultiPoly::zero(n), |acc, b| &acc + &(&x(b) * &x(b)));
    let comps = (0..n)
        .map(|a| {
            let mut v = MultiPoly::constant(n, -params.s[a].clone());
            for b in 0..n {
                v = &v - &x(b).scale(&params.m[a][b]);
            }
            v = &v + &x(a).scale(&params.lambda);
            v = &v + &(&rx * &x(a));
            &v - &xx.scale(&(&params.r[a] * q(1, 2)))
        })
        .collect();
    Ok(PolyField::vector(comps, Q::zero()))
}

fn divergence(v: &PolyField) -> MultiPoly {
    let n = v.dim();
    (0..n).fold(MultiPoly::zero(n), |acc, a| &acc + &v.get(&[a]).diff(a))
}

/// Left side minus right side of the conformal Killing equation of the
/// given valence, as a covariant symmetric field (all indices are Euclidean).
///
/// Valence 1: `∂_a V_b + ∂_b V_a - (2/n) δ_ab ∂^c V_c`.
/// Valence 2: `∂_a V_bc + ∂_b V_ca + ∂_c V_ab
///             - 2/(n+2) (δ_ab ∂^d V_cd + δ_bc ∂^d V_ad + δ_ca ∂^d V_bd)`.
pub fn conformal_killing_residual(v: &PolyField, valence: usize) -> Result<PolyField> {
    let n = v.dim();
    match valence {
        1 => {
            v.expect_shape(&[Slot::Up], None)?;
            let div = divergence(v).scale(&q(2, n as i64));
            Ok(PolyField::from_fn(n, vec![Slot::Down, Slot::Down], Symmetry::Symmetric, qi(0), |ix| {
                let (a, b) = (ix[0], ix[1]);
                let mut r = v.get(&[b]).diff(a) + v.get(&[a]).diff(b);
                if a == b {
                    r = &r - &div;
                }
                r
            }))
        }
        2 => {
            v.expect_shape(&[Slot::Up, Slot::Up], Some(Symmetry::SymmetricTraceFree))?;
            v.validate()?;
            let divs: Vec<MultiPoly> = (0..n)
                .map(|c| (0..n).fold(MultiPoly::zero(n), |acc, d| &acc + &v.get(&[c, d]).diff(d)))
                .collect();
            let k = q(2, n as i64 + 2);
            Ok(PolyField::from_fn(n, vec![Slot::Down; 3], Symmetry::None, qi(0), |ix| {
                let (a, b, c) = (ix[0], ix[1], ix[2]);
                let mut r = &(&v.get(&[b, c]).diff(a) + &v.get(&[c, a]).diff(b)) + &v.get(&[a, b]).diff(c);
                let mut tr = MultiPoly::zero(n);
                if a == b {
                    tr = &tr + &divs[c];
                }
                if b == c {
                    tr = &tr + &divs[a];
                }
                if c == a {
                    tr = &tr + &divs[b];
                }
                r = &r - &tr.scale(&k);
                r
            }))
        }
        _ => Err(Error::WrongTensorType(format!("unsupported valence {valence}"))),
    }
}

/// Dimension of the space of conformal Killing fields (valence 1) or
/// trace-free conformal Killing tensors (valence 2) on `R^n`, `n >= 3`.
pub fn expected_dimension(n: usize, valence: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "dimension formulas need n >= 3 (conformal symmetry is infinite-dimensional for n = {n})"
        )));
    }
    let n = n as u64;
    match valence {
        1 => Ok((n + 1) * (n + 2) / 2),
        2 => Ok((n - 1) * (n + 2) * (n + 3) * (n + 4) / 12),
        _ => Err(Error::WrongTensorType(format!("unsupported valence {valence}"))),
    }
}

/// Independent component slots of the unknown field.
///
/// Valence 2 stores the `n(n+1)/2 - 1` entries `(a, b)`, `a <= b`, except
/// `(n-1, n-1)`, which is fixed by tracelessness.
fn unknown_slots(n: usize, valence: usize) -> Vec<(usize, usize)> {
    match valence {
        1 => (0..n).map(|a| (a, a)).collect(),
        _ => (0..n)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !(a == n - 1 && b == n - 1))
            .collect(),
    }
}

fn unit_field(n: usize, valence: usize, slot: (usize, usize), mono: &MultiIndex) -> PolyField {
    let p = MultiPoly::monomial(n, mono.clone(), qi(1));
    if valence == 1 {
        let mut comps = vec![MultiPoly::zero(n); n];
        comps[slot.0] = p;
        return PolyField::vector(comps, qi(0));
    }
    let mut t = PolyField::zero(n, vec![Slot::Up, Slot::Up], Symmetry::SymmetricTraceFree, qi(0));
    let (a, b) = slot;
    if a == b {
        t.set(&[a, a], p.clone());
        t.set(&[n - 1, n - 1], -p);
    } else {
        t.set(&[a, b], p.clone());
        t.set(&[b, a], p);
    }
    t
}

fn residual_rows(n: usize, valence: usize) -> Vec<Vec<usize>> {
    index_tuples(n, valence + 1)
        .into_iter()
        .filter(|ix| ix.windows(2).all(|w| w[0] <= w[1]))
        .collect()
}

/// Homogeneous solutions of exact degree `d`. The equations have constant
/// coefficients and lower the degree by one, so degrees decouple.
fn solve_degree(n: usize, valence: usize, d: u32) -> Vec<PolyField> {
    let monos = monomials_of_degree(n, d);
    let slots = unknown_slots(n, valence);
    let units: Vec<PolyField> = monos
        .iter()
        .flat_map(|m| slots.iter().map(move |&s| (s, m)))
        .map(|(s, m)| unit_field(n, valence, s, m))
        .collect();
    if d == 0 {
        // Constants always solve the first-order system.
        return units;
    }
    let rows_ix = residual_rows(n, valence);
    let columns: Vec<Vec<(usize, MultiIndex, Q)>> = units
        .par_iter()
        .map(|u| {
            let r = conformal_killing_residual(u, valence).expect("unit fields are well formed");
            let mut out = Vec::new();
            for (k, ix) in rows_ix.iter().enumerate() {
                for (m, c) in r.get(ix).terms() {
                    out.push((k, m.clone(), c.clone()));
                }
            }
            out
        })
        .collect();
    let mut rows: BTreeMap<(MultiIndex, usize), Vec<(usize, Q)>> = BTreeMap::new();
    for (j, col) in columns.into_iter().enumerate() {
        for (k, m, c) in col {
            rows.entry((m, k)).or_default().push((j, c));
        }
    }
    let mut sys = SparseSystem::new(units.len());
    for (_, entries) in rows {
        sys.add_row(entries);
    }
    sys.nullspace()
        .into_iter()
        .map(|v| {
            let mut acc = PolyField::zero(units[0].dim(), units[0].slots().to_vec(), units[0].symmetry(), qi(0));
            for (c, u) in v.iter().zip(&units) {
                if !c.is_zero() {
                    acc = acc.add(&u.scale(c));
                }
            }
            acc
        })
        .collect()
}

/// Exact basis of polynomial solutions of degree `<= max_degree`, ordered by
/// degree and then by reduced-echelon position.
pub fn solve_conformal_killing(n: usize, valence: usize, max_degree: u32) -> Result<Vec<PolyField>> {
    if !(valence == 1 || valence == 2) {
        return Err(Error::WrongTensorType(format!("unsupported valence {valence}")));
    }
    if n < 2 {
        return Err(Error::Precondition("solver needs n >= 2".into()));
    }
    Ok((0..=max_degree).flat_map(|d| solve_degree(n, valence, d)).collect())
}
