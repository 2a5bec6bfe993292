use num_traits::Zero;

use super::*;
use crate::exact::{q, qi, Jet, MultiPoly, Q};
use crate::tensor::{index_tuples, JetField, PolyField, Slot, Symmetry};

const K: u32 = 6;

fn origin(n: usize) -> Vec<Q> {
    vec![qi(0); n]
}

fn x(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

fn conformally_flat(n: usize, factor: &Jet) -> MetricJet {
    MetricJet::flat(n, &origin(n), K).scaled(factor).unwrap()
}

#[test]
fn flat_metric_has_no_curvature() {
    let c = GeometryCache::new(MetricJet::flat(3, &origin(3), K)).unwrap();
    assert!(c.riemann.is_zero() && c.ricci.is_zero() && c.phi.is_zero());
    assert!(c.scalar.is_zero());
    assert!((0..27).all(|i| c.christoffel(i / 9, (i / 3) % 3, i % 3).is_zero()));
}

#[test]
fn exponential_metric_scalar_curvature() {
    // g = e^{2 x1} δ has R = -(n-1)(n-2) e^{-2 x1}.
    for n in [3usize, 4] {
        let two_x = Jet::at_origin(&x(n, 0).scale(&qi(2)), K);
        let c = GeometryCache::new(conformally_flat(n, &two_x.exp().unwrap())).unwrap();
        let expected = (-two_x).exp().unwrap().scale(&qi(-((n as i64 - 1) * (n as i64 - 2))));
        assert_eq!(c.scalar.value(), qi(-((n as i64 - 1) * (n as i64 - 2))));
        assert_eq!(c.scalar, expected.truncate(c.scalar.order()));
    }
}

fn sphere_metric(n: usize) -> MetricJet {
    let r2 = (0..n).fold(MultiPoly::zero(n), |acc, i| &acc + &(&x(n, i) * &x(n, i)));
    let s = &MultiPoly::constant(n, qi(1)) + &r2.scale(&q(1, 4));
    let factor = Jet::at_origin(&s, K).powi(-2).unwrap();
    conformally_flat(n, &factor)
}

#[test]
fn round_sphere_has_constant_curvature() {
    let c = GeometryCache::new(sphere_metric(3)).unwrap();
    assert_eq!(c.scalar, c.metric.constant(qi(6)).truncate(c.scalar.order()));
    let one = JetField::scalar_jet(c.metric.constant(qi(1)), q(-1, 2));
    let y = yamabe_apply(&c, &one).unwrap();
    assert_eq!(y.weight(), &q(-5, 2));
    assert_eq!(*y.as_scalar(), c.metric.constant(q(-3, 4)).truncate(y.as_scalar().order()));
}

#[test]
fn inverse_metric_is_inverse() {
    let g = Sampler::new(3, K, 4).metric().unwrap();
    for a in 0..3 {
        for c in 0..3 {
            let s = (0..3).fold(g.zero(), |acc, b| &acc + &(g.inv(a, b) * g.g(b, c)));
            assert_eq!(s, g.constant(qi((a == c) as i64)));
        }
    }
}

#[test]
fn riemann_symmetries_and_bianchi() {
    for (n, seed) in [(3usize, 1u64), (3, 2), (4, 3)] {
        let c = GeometryCache::new(Sampler::new(n, 5, seed).metric().unwrap()).unwrap();
        assert!(!c.riemann.is_zero());
        let r = |a, b, cc, d| c.riemann.get(&[a, b, cc, d]).clone();
        for ix in index_tuples(n, 4) {
            let (a, b, cc, d) = (ix[0], ix[1], ix[2], ix[3]);
            assert_eq!(r(a, b, cc, d), -r(b, a, cc, d));
            assert_eq!(r(a, b, cc, d), -r(a, b, d, cc));
            assert_eq!(r(a, b, cc, d), r(cc, d, a, b));
            assert!((&(&r(a, b, cc, d) + &r(a, cc, d, b)) + &r(a, d, b, cc)).is_zero());
        }
    }
}

#[test]
fn covariant_derivative_of_metric_vanishes() {
    let c = GeometryCache::new(Sampler::new(3, 4, 7).metric().unwrap()).unwrap();
    assert!(cov_deriv(&c, &c.metric.as_field()).unwrap().is_zero());
}

#[test]
fn density_derivative_ignores_weight() {
    let mut s = Sampler::new(3, 4, 8);
    let c = GeometryCache::new(s.metric().unwrap()).unwrap();
    let f = s.scalar(q(7, 2));
    let d = cov_deriv(&c, &f).unwrap();
    for a in 0..3 {
        assert_eq!(*d.get(&[a]), f.as_scalar().diff(a).unwrap());
    }
}

#[test]
fn rescaling_rejects_unnormalized_factor() {
    let two = Jet::at_origin(&(&MultiPoly::constant(3, qi(2)) + &x(3, 0)), K);
    assert!(matches!(ConformalFactor::new(two), Err(crate::Error::NotNormalized(_))));
}

#[test]
fn transform_of_constant_density() {
    let n = 3;
    let om = ConformalFactor::new(Jet::at_origin(&(&MultiPoly::constant(n, qi(1)) + &x(n, 0)), K)).unwrap();
    let one = JetField::scalar_jet(Jet::at_origin(&MultiPoly::constant(n, qi(1)), K), qi(-3));
    let t = transform_field(&one, &om).unwrap();
    assert_eq!(*t.as_scalar(), om.omega().powi(-3).unwrap());
}

#[test]
fn curvature_laws_hold_for_random_rescaling() {
    for seed in 0..2 {
        let mut s = Sampler::new(3, K, seed);
        let g = s.metric().unwrap();
        let om = s.conformal_factor().unwrap();
        let r = curvature_transform_residual(&g, &om).unwrap();
        assert!(r.is_zero(), "seed {seed}");
        assert!(r.valid_order() >= 2);
    }
}

#[test]
fn exponential_rescaling_of_flat_space() {
    let n = 3;
    let om = ConformalFactor::new(Jet::at_origin(&x(n, 0), K).exp().unwrap()).unwrap();
    let r = curvature_transform_residual(&MetricJet::flat(n, &origin(n), K), &om).unwrap();
    assert!(r.is_zero());
}

#[test]
fn connection_change_for_mixed_tensor() {
    let mut s = Sampler::new(3, 5, 11);
    let g = s.metric().unwrap();
    let om = s.conformal_factor().unwrap();
    let t = s.field(vec![Slot::Up, Slot::Down], q(3, 2));
    let r = connection_change_residual(&g, &om, &t).unwrap();
    assert!(r.is_zero());
    let phi = s.oneform(qi(-1));
    assert!(connection_change_residual(&g, &om, &phi).unwrap().is_zero());
}

#[test]
fn wrong_connection_difference_is_detected() {
    let mut s = Sampler::new(3, 5, 12);
    let g = s.metric().unwrap();
    let om = s.conformal_factor().unwrap();
    let t = s.vector(qi(1));
    let good = predicted_connection_difference(&g, &om);
    assert!(connection_change_residual_with(&g, &om, &good, &t).unwrap().is_zero());
    let half = good.map(|j| j.scale(&q(1, 2)));
    assert!(!connection_change_residual_with(&g, &om, &half, &t).unwrap().is_zero());
}

#[test]
fn yamabe_is_invariant() {
    let mut s = Sampler::new(3, K, 21);
    let g = s.metric().unwrap();
    let om = s.conformal_factor().unwrap();
    let f = s.scalar(q(-1, 2));
    let rep = invariance_check(PairingId::Yamabe, &g, &om, &[&f], None).unwrap();
    assert!(rep.verified(), "{}", rep.summary());
    assert_eq!(rep.valid_order, 4);
}

#[test]
fn yamabe_rejects_wrong_weight() {
    let mut s = Sampler::new(3, K, 21);
    let c = GeometryCache::new(s.metric().unwrap()).unwrap();
    assert!(matches!(yamabe_apply(&c, &s.scalar(qi(0))), Err(crate::Error::WrongWeight { .. })));
}

#[test]
fn first_pairing_invariance() {
    let mut s = Sampler::new(3, K, 31);
    let g = s.metric().unwrap();
    let om = s.conformal_factor().unwrap();
    let v = s.vector(q(1, 2));
    let f = s.scalar(q(-3, 2));
    let rep = invariance_check(PairingId::First, &g, &om, &[&v, &f], None).unwrap();
    assert!(rep.verified(), "{}", rep.summary());
    assert!(rep.valid_order >= 3);
    let bad = RescaledPair::new(&g, om).unwrap().check_perturbed(PairingId::First, &[&v, &f], 1).unwrap();
    assert_eq!(bad.verdict, Verdict::NonzeroResidual);
}

#[test]
fn first_pairing_at_zero_weight_is_a_multiple() {
    let mut s = Sampler::new(3, 5, 32);
    let c = GeometryCache::new(s.metric().unwrap()).unwrap();
    let v = s.vector(qi(0));
    let f = s.scalar(q(2, 3));
    let p = pairing_first(&c, &v, &f).unwrap();
    let e = first_example(&c, &v, &f).unwrap();
    assert_eq!(*p.as_scalar(), e.as_scalar().scale(&qi(3)));
}

#[test]
fn second_pairing_at_zero_weight_is_a_multiple() {
    let mut s = Sampler::new(3, K, 33);
    let g = s.metric().unwrap();
    let c = GeometryCache::new(g.clone()).unwrap();
    let v = s.tracefree(qi(0), &g);
    let f = s.scalar(q(-5, 2));
    let p = pairing_second(&c, &v, &f).unwrap();
    let e = second_example(&c, &v, &f).unwrap();
    assert_eq!(*p.as_scalar(), e.as_scalar().scale(&qi(20)));
}

#[test]
fn second_pairing_invariance_and_curved_symmetry() {
    let n = 3;
    let mut s = Sampler::new(n, K, 34);
    let g = s.metric().unwrap();
    let om = s.conformal_factor().unwrap();
    let pair_ = RescaledPair::new(&g, om).unwrap();
    let v = s.tracefree(qi(0), &g);
    let f = s.scalar(q(-1, 2));
    let rep = pair_.check(PairingId::Second, &[&v, &f], None).unwrap();
    assert!(rep.verified(), "{}", rep.summary());
    let rep = pair_.check(PairingId::CurvedSymmetry, &[&v, &f], None).unwrap();
    assert!(rep.verified(), "{}", rep.summary());
    let h = s.scalar(q(-5, 2));
    let rep = pair_.check(PairingId::CurvedDelta, &[&v, &h], None).unwrap();
    assert!(rep.verified(), "{}", rep.summary());
    // D_V and δ_V are second_example at w = 1-n/2 and w = -1-n/2.
    let c = &pair_.cache;
    assert_eq!(curved_second_symmetry(c, &v, &f).unwrap().as_scalar(), second_example(c, &v, &f).unwrap().as_scalar());
    assert_eq!(curved_second_delta(c, &v, &h).unwrap().as_scalar(), second_example(c, &v, &h).unwrap().as_scalar());
}

#[test]
fn oneform_pairing_and_special_operators() {
    let n = 3;
    let mut s = Sampler::new(n, K, 41);
    let g = s.metric().unwrap();
    let om = s.conformal_factor().unwrap();
    let p = RescaledPair::new(&g, om).unwrap();
    let v = s.tracefree(q(1, 2), &g);
    let phi = s.oneform(qi(-1));
    assert!(p.check(PairingId::OneForm, &[&v, &phi], None).unwrap().verified());
    for op in SpecialOp::ALL {
        let w = op.weight(n);
        let input = match op.id().input_slots()[0].len() {
            0 => s.scalar(w),
            1 => s.vector(w),
            _ => s.tracefree(w, &g),
        };
        let rep = p.check(op.id(), &[&input], None).unwrap();
        assert!(rep.verified(), "{}", rep.summary());
        let off = input.clone().with_weight(input.weight() + q(1, 2));
        assert!(matches!(special_weight_operator(&p.cache, op, &off), Err(crate::Error::WrongWeight { .. })));
    }
}

#[test]
fn special_hessian_on_flat_space() {
    let n = 3;
    let c = GeometryCache::new(MetricJet::flat(n, &origin(n), K)).unwrap();
    let f = JetField::scalar_jet(Jet::at_origin(&(&x(n, 0) * &x(n, 1)), K), qi(1));
    let h = special_weight_operator(&c, SpecialOp::TracefreeHessian, &f).unwrap();
    assert_eq!(h.get(&[0, 1]).value(), qi(1));
    assert!(h.get(&[0, 0]).is_zero());
    let grad = special_weight_operator(&c, SpecialOp::Gradient, &JetField::scalar_jet(c.metric.constant(qi(5)), qi(0)));
    assert!(grad.unwrap().is_zero());
}

#[test]
fn factorization_identity() {
    let n = 3;
    let mut s = Sampler::new(n, K, 51);
    let g = s.metric().unwrap();
    let c = GeometryCache::new(g.clone()).unwrap();
    for (v, w) in [(qi(0), qi(2)), (q(1, 2), qi(-1)), (qi(-1), q(1, 2))] {
        let vt = s.tracefree(v, &g);
        let f = s.normalized_scalar(w);
        let r = factorization_identity_residual(&c, &vt, &f).unwrap();
        assert!(r.is_zero());
    }
    let f0 = s.normalized_scalar(qi(0));
    let vt = s.tracefree(qi(0), &g);
    assert!(factorization_identity_residual(&c, &vt, &f0).is_err());
}

#[test]
fn factorization_on_flat_space_with_constant_tensor() {
    let n = 3;
    let c = GeometryCache::new(MetricJet::flat(n, &origin(n), K)).unwrap();
    let v = PolyField::contravariant2(
        vec![
            vec![MultiPoly::constant(n, qi(1)), MultiPoly::constant(n, qi(2)), MultiPoly::zero(n)],
            vec![MultiPoly::constant(n, qi(2)), MultiPoly::constant(n, qi(-1)), MultiPoly::zero(n)],
            vec![MultiPoly::zero(n), MultiPoly::zero(n), MultiPoly::zero(n)],
        ],
        Symmetry::SymmetricTraceFree,
        qi(0),
    )
    .unwrap()
    .to_jets(&origin(n), K);
    let f = JetField::scalar_jet(Jet::at_origin(&(&MultiPoly::constant(n, qi(1)) + &x(n, 0)), K), qi(2));
    assert!(factorization_identity_residual(&c, &v, &f).unwrap().is_zero());
}

#[test]
fn inner_product_on_flat_rotations() {
    let n = 3;
    let c = GeometryCache::new(MetricJet::flat(n, &origin(n), K)).unwrap();
    let rot = PolyField::vector(vec![-x(n, 1), x(n, 0), MultiPoly::zero(n)], qi(0)).to_jets(&origin(n), K);
    let r = inner_product_curved(&c, &rot, &rot).unwrap();
    assert_eq!(*r.as_scalar(), c.metric.constant(qi(-6)).truncate(r.as_scalar().order()));
    let tr = PolyField::vector(vec![MultiPoly::constant(n, qi(1)), MultiPoly::zero(n), MultiPoly::zero(n)], qi(0))
        .to_jets(&origin(n), K);
    assert!(inner_product_curved(&c, &tr, &tr).unwrap().is_zero());
}

#[test]
fn constant_rescaling_bookkeeping() {
    assert!(constant_rescaling_consistent(PairingId::Yamabe, 3, &[q(-1, 2)], &q(-5, 2)));
    assert!(!constant_rescaling_consistent(PairingId::Yamabe, 3, &[q(-1, 2)], &q(-1, 2)));
    assert!(constant_rescaling_consistent(PairingId::InnerCurved, 4, &[qi(0), qi(0)], &qi(0)));
}

#[test]
fn trivial_rescaling_gives_zero_residual() {
    let mut s = Sampler::new(3, 5, 61);
    let g = s.metric().unwrap();
    let one = ConformalFactor::new(g.constant(qi(1))).unwrap();
    assert!(rescale(&g, &one).unwrap().g(0, 1) == g.g(0, 1));
    let v = s.vector(qi(3));
    let f = s.scalar(qi(-2));
    let rep = invariance_check(PairingId::First, &g, &one, &[&v, &f], Some(&qi(7))).unwrap();
    assert!(rep.residual.is_zero());
    assert!(!rep.scaling_consistent);
}

#[test]
fn flat_experiment_vanishes() {
    let rep = run_yamabe_ckt_experiment(3, 5, 5, 3).unwrap();
    assert!(rep.flat_all_zero(), "{:?}", rep.lines());
    assert!(rep.curved.iter().any(|r| r.transport_weight.is_zero()));
}

#[test]
fn inner_product_weight_is_unique() {
    let mut s = Sampler::new(3, K, 71);
    let g = s.metric().unwrap();
    let om = s.conformal_factor().unwrap();
    let p = RescaledPair::new(&g, om).unwrap();
    let v = s.vector(qi(0));
    let w = s.vector(qi(0));
    let grid: Vec<Q> = (-8..=8).map(|k| q(k, 2)).collect();
    let hits = p.infer_output_weight(PairingId::InnerCurved, &[&v, &w], &grid).unwrap();
    assert_eq!(hits, vec![qi(0)]);
    assert!(constant_rescaling_consistent(PairingId::InnerCurved, 3, &[qi(0), qi(0)], &hits[0]));
}

#[test]
fn conformally_flat_experiment_at_weight_zero() {
    // Both sides are built from invariant operators when V is not rescaled.
    let rep = run_yamabe_ckt_experiment(3, 9, 6, 4).unwrap();
    assert!(rep.flat_all_zero());
    assert!(rep.curved.iter().filter(|r| r.transport_weight.is_zero()).all(|r| r.residual_zero));
    assert_eq!(rep.lines().len(), rep.flat.len() + rep.curved.len());
}
