//! First- and second-order symmetries of the flat Laplacian and the algebra
//! they generate, verified exactly in Weyl-algebra normal form.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ckt::conformal_killing_residual;
use crate::error::{Error, Result};
use crate::exact::{monomials_up_to, q, qi, MultiIndex, MultiPoly, SparseSystem, Q};
use crate::tensor::{index_tuples, PolyField, Slot, Symmetry};
use crate::weyl::{laplacian, DiffOp};

/// An intertwining check `L∘D = δ∘L` with its computed residual.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryPair {
    pub d: DiffOp,
    pub delta: DiffOp,
    /// `L∘D - δ∘L` in normal form, exactly as computed.
    pub residual: DiffOp,
}

impl SymmetryPair {
    pub fn verified(&self) -> bool {
        self.residual.is_zero()
    }
}

fn divergence(v: &PolyField) -> MultiPoly {
    let n = v.dim();
    (0..n).fold(MultiPoly::zero(n), |acc, a| &acc + &v.get(&[a]).diff(a))
}

fn expect_vector(v: &PolyField, n: usize) -> Result<()> {
    v.expect_shape(&[Slot::Up], None)?;
    if v.dim() != n {
        return Err(Error::DimensionMismatch(n, v.dim()));
    }
    Ok(())
}

fn expect_tracefree2(v: &PolyField, n: usize) -> Result<()> {
    v.expect_shape(&[Slot::Up, Slot::Up], Some(Symmetry::SymmetricTraceFree))?;
    if v.dim() != n {
        return Err(Error::DimensionMismatch(n, v.dim()));
    }
    v.validate()
}

/// `f -> V^a ∂_a f + c (∂_a V^a) f`.
pub fn first_order_operator(v: &PolyField, c: &Q) -> Result<DiffOp> {
    expect_vector(v, v.dim())?;
    let vf = DiffOp::vector_field(v.comps());
    Ok(&vf + &DiffOp::multiplication(divergence(v).scale(c)))
}

/// `f -> V^a ∂_a f - (w/n)(∂_a V^a) f`; at `w = 1 - n/2` this is the
/// first-order Laplacian symmetry `D_V`.
pub fn build_first_order(v: &PolyField, n: usize, w: &Q) -> Result<DiffOp> {
    expect_vector(v, n)?;
    first_order_operator(v, &(-w / qi(n as i64)))
}

/// `f -> V^ab ∂_a∂_b f + c1 (∂_a V^ab) ∂_b f + c0 (∂_a∂_b V^ab) f`.
pub fn second_order_operator(v: &PolyField, c1: &Q, c0: &Q) -> Result<DiffOp> {
    let n = v.dim();
    let mut op = DiffOp::zero(n);
    let mut div = vec![MultiPoly::zero(n); n];
    for ix in index_tuples(n, 2) {
        let (a, b) = (ix[0], ix[1]);
        let beta = MultiIndex::zero(n).with_incremented(a).with_incremented(b);
        op.add_term(beta, v.get(&[a, b]).clone());
        div[b] = &div[b] + &v.get(&[a, b]).diff(a);
    }
    let mut ddiv = MultiPoly::zero(n);
    for (b, p) in div.iter().enumerate() {
        op.add_term(MultiIndex::unit(n, b), p.scale(c1));
        ddiv = &ddiv + &p.diff(b);
    }
    op.add_term(MultiIndex::zero(n), ddiv.scale(c0));
    Ok(op)
}

/// Second-order symmetry `D_V` of the flat Laplacian for a trace-free
/// symmetric `V^ab`.
pub fn build_second_order(v: &PolyField, n: usize) -> Result<DiffOp> {
    expect_tracefree2(v, n)?;
    let ni = n as i64;
    second_order_operator(v, &q(ni, ni + 2), &q((ni - 2) * ni, 4 * (ni + 1) * (ni + 2)))
}

/// The companion operator `δ_V` on the target side of the Laplacian.
///
/// Order 1: `V^a ∂_a + (n+2)/(2n) (∂_a V^a)`.
/// Order 2 (flat): `V^ab ∂_a∂_b + (n+4)/(n+2) (∂_a V^ab) ∂_b + (n+4)/(4(n+1)) (∂_a∂_b V^ab)`.
pub fn build_delta(order: usize, v: &PolyField, n: usize) -> Result<DiffOp> {
    let ni = n as i64;
    match order {
        1 => {
            expect_vector(v, n)?;
            first_order_operator(v, &q(ni + 2, 2 * ni))
        }
        2 => {
            expect_tracefree2(v, n)?;
            second_order_operator(v, &q(ni + 4, ni + 2), &q(ni + 4, 4 * (ni + 1)))
        }
        _ => Err(Error::WrongTensorType(format!("no companion operator of order {order}"))),
    }
}

pub fn check_intertwine(l: &DiffOp, d: &DiffOp, delta: &DiffOp) -> Result<SymmetryPair> {
    let residual = &l.compose(d)? - &delta.compose(l)?;
    Ok(SymmetryPair { d: d.clone(), delta: delta.clone(), residual })
}

/// Solves `δ∘L = L∘D` for `δ` with derivative order `<= max_order` and
/// coefficient degree `<= max_degree`. Since the Weyl algebra has no zero
/// divisors the solution, when it exists, is unique.
pub fn find_delta(l: &DiffOp, d: &DiffOp, max_order: u32, max_degree: u32) -> Result<Option<DiffOp>> {
    let n = l.dim();
    if d.dim() != n {
        return Err(Error::DimensionMismatch(n, d.dim()));
    }
    let target = l.compose(d)?;
    let unknowns: Vec<(MultiIndex, MultiIndex)> = monomials_up_to(n, max_order)
        .into_iter()
        .flat_map(|b| monomials_up_to(n, max_degree).into_iter().map(move |m| (b.clone(), m)))
        .collect();
    let cols = unknowns.len() + 1;
    let mut rows: BTreeMap<(MultiIndex, MultiIndex), Vec<(usize, Q)>> = BTreeMap::new();
    for (j, (beta, m)) in unknowns.iter().enumerate() {
        let unit = DiffOp::term(beta.clone(), MultiPoly::monomial(n, m.clone(), Q::one()));
        for (b, c) in unit.compose(l)?.terms() {
            for (mm, v) in c.terms() {
                rows.entry((b.clone(), mm.clone())).or_default().push((j, v.clone()));
            }
        }
    }
    for (b, c) in target.terms() {
        for (mm, v) in c.terms() {
            rows.entry((b.clone(), mm.clone())).or_default().push((cols - 1, -v.clone()));
        }
    }
    let mut sys = SparseSystem::new(cols);
    for (_, r) in rows {
        sys.add_row(r);
    }
    let Some(x) = sys.solve_augmented() else { return Ok(None) };
    let mut delta = DiffOp::zero(n);
    for ((beta, m), c) in unknowns.into_iter().zip(x) {
        if !c.is_zero() {
            delta.add_term(beta, MultiPoly::monomial(n, m, c));
        }
    }
    // The affine solve ignores rows that reduce to 0 = 0; confirm directly.
    if !(&delta.compose(l)? - &target).is_zero() {
        return Ok(None);
    }
    Ok(Some(delta))
}

/// The eleven first-order symmetries of the Laplacian on `R^3`, written out
/// term by term in coordinates `(x, y, z) = (x1, x2, x3)`.
pub fn flat_r3_generators() -> Vec<(&'static str, DiffOp)> {
    let n = 3;
    let x = |i| MultiPoly::var(n, i);
    let vf = |v: [MultiPoly; 3]| DiffOp::vector_field(&v);
    let sq = |i| &x(i) * &x(i);
    let z = || MultiPoly::zero(n);
    let conformal = |i: usize| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let mut v = [z(), z(), z()];
        v[i] = &(&sq(i) - &sq(j)) - &sq(k);
        v[j] = (&x(i) * &x(j)).scale(&qi(2));
        v[k] = (&x(i) * &x(k)).scale(&qi(2));
        &vf(v) + &DiffOp::multiplication(x(i))
    };
    vec![
        ("f", DiffOp::identity(n)),
        ("df/dx", DiffOp::partial(n, 0)),
        ("df/dy", DiffOp::partial(n, 1)),
        ("df/dz", DiffOp::partial(n, 2)),
        ("x df/dx + y df/dy + z df/dz", vf([x(0), x(1), x(2)])),
        ("x df/dy - y df/dx", vf([-x(1), x(0), z()])),
        ("(x^2-y^2-z^2) df/dx + 2xy df/dy + 2xz df/dz + x f", conformal(0)),
        ("y df/dz - z df/dy", vf([z(), -x(2), x(1)])),
        ("(y^2-z^2-x^2) df/dy + 2yz df/dz + 2yx df/dx + y f", conformal(1)),
        ("z df/dx - x df/dz", vf([x(2), z(), -x(0)])),
        ("(z^2-x^2-y^2) df/dz + 2zx df/dx + 2zy df/dy + z f", conformal(2)),
    ]
}

/// `V⊙W`, `[V,W]` and `⟨V,W⟩` for a pair of vector fields.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraOps {
    pub sym_product: PolyField,
    pub bracket: PolyField,
    pub inner: MultiPoly,
}

/// Euclidean `V·W`.
pub fn dot(v: &PolyField, w: &PolyField) -> MultiPoly {
    let n = v.dim();
    (0..n).fold(MultiPoly::zero(n), |acc, a| &acc + &(v.get(&[a]) * w.get(&[a])))
}

/// Standard Lie bracket `[V,W]^a = V^b ∂_b W^a - W^b ∂_b V^a`.
pub fn lie_bracket(v: &PolyField, w: &PolyField) -> PolyField {
    let n = v.dim();
    let comps = (0..n)
        .map(|a| {
            (0..n).fold(MultiPoly::zero(n), |acc, b| {
                &(&acc + &(v.get(&[b]) * &w.get(&[a]).diff(b))) - &(w.get(&[b]) * &v.get(&[a]).diff(b))
            })
        })
        .collect();
    PolyField::vector(comps, qi(0))
}

/// `(V⊙W)^ab = ½V^aW^b + ½V^bW^a - (1/n) δ^ab V·W`.
pub fn symmetric_tracefree_product(v: &PolyField, w: &PolyField) -> PolyField {
    let n = v.dim();
    let vw = dot(v, w).scale(&q(1, n as i64));
    PolyField::from_fn(n, vec![Slot::Up, Slot::Up], Symmetry::SymmetricTraceFree, qi(0), |ix| {
        let (a, b) = (ix[0], ix[1]);
        let mut p = (&(v.get(&[a]) * w.get(&[b])) + &(v.get(&[b]) * w.get(&[a]))).scale(&q(1, 2));
        if a == b {
            p = &p - &vw;
        }
        p
    })
}

/// Flat `⟨V,W⟩ = (n+2)(∂_bV^a)(∂_aW^b) - (n+2)/n (∂V)(∂W)
///              - (n+2)/n V·∇(∂W) - (n+2)/n W·∇(∂V) + Δ(V·W)`.
pub fn flat_inner(v: &PolyField, w: &PolyField) -> MultiPoly {
    let n = v.dim();
    let k = qi(n as i64 + 2);
    let kn = q(n as i64 + 2, n as i64);
    let (dv, dw) = (divergence(v), divergence(w));
    let mut acc = MultiPoly::zero(n);
    for a in 0..n {
        for b in 0..n {
            acc = &acc + &(&v.get(&[a]).diff(b) * &w.get(&[b]).diff(a)).scale(&k);
        }
    }
    acc = &acc - &(&dv * &dw).scale(&kn);
    for a in 0..n {
        acc = &acc - &(v.get(&[a]) * &dw.diff(a)).scale(&kn);
        acc = &acc - &(w.get(&[a]) * &dv.diff(a)).scale(&kn);
    }
    &acc + &laplacian(n).apply(&dot(v, w)).expect("same dimension")
}

pub fn algebra_ops(v: &PolyField, w: &PolyField, n: usize) -> Result<AlgebraOps> {
    expect_vector(v, n)?;
    expect_vector(w, n)?;
    Ok(AlgebraOps {
        sym_product: symmetric_tracefree_product(v, w),
        bracket: lie_bracket(v, w),
        inner: flat_inner(v, w),
    })
}

fn require_conformal_killing(v: &PolyField) -> Result<()> {
    if !conformal_killing_residual(v, 1)?.is_zero() {
        return Err(Error::NotConformalKilling);
    }
    Ok(())
}

/// `D_V D_W - D_{V⊙W} - ½ D_{[V,W]} + (n-2)/(4n(n+1)) ⟨V,W⟩ - (1/n)(V·W)Δ`.
pub fn composition_identity_residual(v: &PolyField, w: &PolyField, n: usize) -> Result<DiffOp> {
    expect_vector(v, n)?;
    expect_vector(w, n)?;
    require_conformal_killing(v)?;
    require_conformal_killing(w)?;
    let ni = n as i64;
    let wt = q(2 - ni, 2);
    let ops = algebra_ops(v, w, n)?;
    let dvdw = build_first_order(v, n, &wt)?.compose(&build_first_order(w, n, &wt)?)?;
    let second = build_second_order(&ops.sym_product, n)?;
    let bracket = build_first_order(&ops.bracket, n, &wt)?.scale(&q(1, 2));
    let inner = DiffOp::multiplication(ops.inner.scale(&q(ni - 2, 4 * ni * (ni + 1))));
    let trace = laplacian(n).left_mul(&dot(v, w).scale(&q(1, ni)));
    let r = &(&(&dvdw - &second) - &bracket) + &inner;
    Ok(&r - &trace)
}

/// `[D_V, D_W] - D_{[V,W]}` for first-order operators of weight `w`.
pub fn bracket_identity_residual(v: &PolyField, w_field: &PolyField, n: usize, w: &Q) -> Result<DiffOp> {
    let dv = build_first_order(v, n, w)?;
    let dw = build_first_order(w_field, n, w)?;
    let db = build_first_order(&lie_bracket(v, w_field), n, w)?;
    Ok(&dv.commutator(&dw)? - &db)
}

/// Lie derivative of a covariant tensor field, written with the flat
/// derivative shifted by a symmetric connection difference `Γ_ab^c`
/// (slots `[Down, Down, Up]`):
/// `(L_V φ)_{b..} = V^a ∇_a φ_{b..} + Σ_i (∇_{b_i} V^a) φ_{..a..}`.
pub fn lie_derivative(v: &PolyField, phi: &PolyField, gamma: Option<&PolyField>) -> Result<PolyField> {
    let n = v.dim();
    expect_vector(v, n)?;
    if phi.slots().iter().any(|s| *s != Slot::Down) {
        return Err(Error::WrongTensorType("lie_derivative expects a covariant field".into()));
    }
    if let Some(g) = gamma {
        g.expect_shape(&[Slot::Down, Slot::Down, Slot::Up], None)?;
        for ix in index_tuples(n, 3) {
            if g.get(&ix) != g.get(&[ix[1], ix[0], ix[2]]) {
                return Err(Error::AsymmetricConnection);
            }
        }
    }
    let gam = |a: usize, b: usize, c: usize| -> MultiPoly {
        gamma.map_or_else(|| MultiPoly::zero(n), |g| g.get(&[a, b, c]).clone())
    };
    // ∇_a V^c
    let nabla_v = |a: usize, c: usize| -> MultiPoly {
        (0..n).fold(v.get(&[c]).diff(a), |acc, b| &acc + &(&gam(a, b, c) * v.get(&[b])))
    };
    let k = phi.rank();
    let nabla_phi = |a: usize, ix: &[usize]| -> MultiPoly {
        let mut out = phi.get(ix).diff(a);
        for i in 0..k {
            for d in 0..n {
                let mut jx = ix.to_vec();
                jx[i] = d;
                out = &out - &(&gam(a, ix[i], d) * phi.get(&jx));
            }
        }
        out
    };
    Ok(PolyField::from_fn(n, phi.slots().to_vec(), phi.symmetry(), phi.weight().clone(), |ix| {
        let mut out = MultiPoly::zero(n);
        for a in 0..n {
            out = &out + &(v.get(&[a]) * &nabla_phi(a, ix));
        }
        for i in 0..k {
            for a in 0..n {
                let mut jx = ix.to_vec();
                jx[i] = a;
                out = &out + &(&nabla_v(ix[i], a) * phi.get(&jx));
            }
        }
        out
    }))
}

/// Lie derivative of a top-degree form `h ε`, expressed on the coefficient:
/// `L_V h = V^a ∂_a h + (∂_a V^a) h`.
pub fn lie_derivative_top_form(v: &PolyField, h: &MultiPoly) -> Result<MultiPoly> {
    expect_vector(v, v.dim())?;
    Ok(first_order_operator(v, &Q::one())?.apply(h)?)
}

/// The flat volume form `ε_{b..e}` (Levi-Civita symbol) scaled by `h`.
pub fn volume_form(h: &MultiPoly) -> PolyField {
    let n = h.dim();
    PolyField::from_fn(n, vec![Slot::Down; n], Symmetry::None, qi(0), |ix| {
        match permutation_sign(ix) {
            0 => MultiPoly::zero(n),
            s => h.scale(&qi(s)),
        }
    })
}

fn permutation_sign(ix: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..ix.len() {
        for j in i + 1..ix.len() {
            if ix[i] == ix[j] {
                return 0;
            }
            if ix[i] > ix[j] {
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ckt::{ckv_from_parameters, CKParameters};
    use crate::weyl::euler_operator;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn euler(n: usize) -> PolyField {
        PolyField::vector((0..n).map(|i| x(n, i)).collect(), qi(0))
    }

    fn rotation3() -> PolyField {
        PolyField::vector(vec![-x(3, 1), x(3, 0), MultiPoly::zero(3)], qi(0))
    }

    fn translation(n: usize, i: usize) -> PolyField {
        let mut c = vec![MultiPoly::zero(n); n];
        c[i] = MultiPoly::one(n);
        PolyField::vector(c, qi(0))
    }

    fn inversion3() -> PolyField {
        let mut p = CKParameters::zero(3);
        p.r[0] = qi(2);
        ckv_from_parameters(3, &p).unwrap()
    }

    #[test]
    fn first_order_examples() {
        let d = build_first_order(&inversion3(), 3, &q(-1, 2)).unwrap();
        let expect = &DiffOp::vector_field(inversion3().comps()) + &DiffOp::multiplication(x(3, 0));
        assert_eq!(d, expect);
        let mut t = PolyField::vector(vec![MultiPoly::constant(3, qi(-1)), MultiPoly::zero(3), MultiPoly::zero(3)], qi(0));
        assert_eq!(build_first_order(&t, 3, &q(-1, 2)).unwrap(), DiffOp::partial(3, 0).scale(&qi(-1)));
        let e = build_first_order(&euler(3), 3, &q(-1, 2)).unwrap();
        assert_eq!(e, &euler_operator(3) + &DiffOp::identity(3).scale(&q(1, 2)));
        t = t.with_symmetry(Symmetry::None);
        assert!(build_first_order(&t, 3, &qi(0)).is_ok());
        assert!(build_first_order(&symmetric_tracefree_product(&t, &t), 3, &qi(0)).is_err());
    }

    #[test]
    fn delta_examples() {
        let t = translation(3, 0);
        assert_eq!(build_delta(1, &t, 3).unwrap(), DiffOp::partial(3, 0));
        assert_eq!(
            build_delta(1, &euler(3), 3).unwrap(),
            &euler_operator(3) + &DiffOp::identity(3).scale(&q(5, 2))
        );
        let c = symmetric_tracefree_product(&t, &translation(3, 1));
        let d2 = build_delta(2, &c, 3).unwrap();
        assert_eq!(d2, second_order_operator(&c, &qi(0), &qi(0)).unwrap());
        assert_eq!(d2.order(), 2);
        assert!(build_delta(2, &t, 3).is_err());
        assert!(build_delta(3, &t, 3).is_err());
    }

    #[test]
    fn constant_second_order_operator() {
        let c = symmetric_tracefree_product(&translation(3, 0), &translation(3, 2));
        let op = build_second_order(&c, 3).unwrap();
        assert_eq!(op.coefficient_degree(), 0);
        assert_eq!(op.coeff(&MultiIndex::from_exponents(&[1, 0, 1])), MultiPoly::one(3));
    }

    #[test]
    fn intertwine_examples() {
        let l = laplacian(3);
        assert!(check_intertwine(&l, &DiffOp::partial(3, 0), &DiffOp::partial(3, 0)).unwrap().verified());
        let m = DiffOp::multiplication(x(3, 0));
        let pair = check_intertwine(&l, &m, &m).unwrap();
        assert_eq!(pair.residual, DiffOp::partial(3, 0).scale(&qi(2)));
        let v = inversion3();
        let pair = check_intertwine(
            &l,
            &build_first_order(&v, 3, &q(-1, 2)).unwrap(),
            &build_delta(1, &v, 3).unwrap(),
        )
        .unwrap();
        assert!(pair.verified());
    }

    #[test]
    fn find_delta_examples() {
        let l = laplacian(3);
        let rot = DiffOp::vector_field(rotation3().comps());
        assert_eq!(find_delta(&l, &rot, 1, 1).unwrap(), Some(rot.clone()));
        let v = inversion3();
        let d = build_first_order(&v, 3, &q(-1, 2)).unwrap();
        let expect = &DiffOp::vector_field(v.comps()) + &DiffOp::multiplication(x(3, 0).scale(&qi(5)));
        assert_eq!(find_delta(&l, &d, 1, 2).unwrap(), Some(expect));
        let m = DiffOp::multiplication(x(3, 0));
        assert_eq!(find_delta(&l, &m, 2, 3).unwrap(), None);
    }

    #[test]
    fn algebra_examples() {
        let e1 = translation(3, 0);
        let ops = algebra_ops(&e1, &e1, 3).unwrap();
        let diag = [q(2, 3), q(-1, 3), q(-1, 3)];
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { MultiPoly::constant(3, diag[a].clone()) } else { MultiPoly::zero(3) };
                assert_eq!(ops.sym_product.get(&[a, b]), &expect);
            }
        }
        assert!(ops.bracket.is_zero());
        assert!(ops.inner.is_zero());

        let rot = algebra_ops(&rotation3(), &rotation3(), 3).unwrap();
        assert_eq!(rot.inner, MultiPoly::constant(3, qi(-6)));

        let b = lie_bracket(&euler(3), &e1);
        assert_eq!(b.get(&[0]), &MultiPoly::constant(3, qi(-1)));
        assert!(b.get(&[1]).is_zero() && b.get(&[2]).is_zero());
    }

    #[test]
    fn composition_identity_small_cases() {
        let e1 = translation(3, 0);
        assert!(composition_identity_residual(&e1, &e1, 3).unwrap().is_zero());
        assert!(composition_identity_residual(&rotation3(), &rotation3(), 3).unwrap().is_zero());
        assert!(composition_identity_residual(&inversion3(), &euler(3), 3).unwrap().is_zero());
        let bad = PolyField::vector(vec![&x(3, 0) * &x(3, 0), MultiPoly::zero(3), MultiPoly::zero(3)], qi(0));
        assert_eq!(composition_identity_residual(&bad, &e1, 3), Err(Error::NotConformalKilling));
    }

    #[test]
    fn bracket_identity_small_cases() {
        let w = q(-1, 2);
        assert!(bracket_identity_residual(&translation(3, 0), &translation(3, 1), 3, &w).unwrap().is_zero());
        assert!(bracket_identity_residual(&euler(3), &translation(3, 2), 3, &w).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let n = 3;
        let delta = PolyField::from_fn(n, vec![Slot::Down, Slot::Down], Symmetry::Symmetric, qi(0), |ix| {
            if ix[0] == ix[1] { MultiPoly::one(n) } else { MultiPoly::zero(n) }
        });
        let l = lie_derivative(&euler(n), &delta, None).unwrap();
        assert_eq!(l, delta.scale(&qi(2)));
        assert!(lie_derivative(&rotation3(), &delta, None).unwrap().is_zero());

        let mut gamma = PolyField::zero(n, vec![Slot::Down, Slot::Down, Slot::Up], Symmetry::None, qi(0));
        gamma.set(&[0, 1, 2], x(n, 0));
        assert_eq!(lie_derivative(&euler(n), &delta, Some(&gamma)), Err(Error::AsymmetricConnection));
        gamma.set(&[1, 0, 2], x(n, 0));
        assert_eq!(lie_derivative(&inversion3(), &delta, Some(&gamma)).unwrap(), lie_derivative(&inversion3(), &delta, None).unwrap());
    }

    #[test]
    fn top_form_lie_derivative() {
        let h = &x(3, 0) * &x(3, 2) + MultiPoly::one(3);
        let v = inversion3();
        let full = lie_derivative(&v, &volume_form(&h), None).unwrap();
        let reduced = lie_derivative_top_form(&v, &h).unwrap();
        assert_eq!(full, volume_form(&reduced));
    }
}
