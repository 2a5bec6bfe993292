use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{q, qi, Jet, Q};
use crate::tensor::{index_tuples, JetField, Slot, Symmetry};

use super::geometry::{contract, cov_deriv, laplacian, move_index, pair, GeometryCache};

/// Every differential operator and pairing the curved engine knows how to
/// evaluate. Each one is a fixed linear combination of terms, so a list of
/// coefficients (defaults from [`default_coefficients`]) pins it down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairingId {
    /// `c0 V^a ∇_a f + c1 (∇_a V^a) f`.
    First,
    /// `c0 V^ab ∇_a ∇_b f + c1 (∇_a V^ab) ∇_b f + c2 (∇_a ∇_b V^ab) f + c3 Φ_ab V^ab f`.
    Second,
    /// `c0 V^ab ∇_a φ_b + c1 (∇_a V^ab) φ_b`.
    OneForm,
    /// `c0 Δf + c1 R f`.
    Yamabe,
    /// `c0 V^a ∇_a f + c1 (∇_a V^a) f` at `v = 0`.
    FirstExample,
    /// Same shape as `Second` with `R_ab` instead of `Φ_ab`.
    SecondExample,
    /// `f ↦ ∇_a f`.
    Gradient,
    /// `V ↦ ∇_a V^a`.
    Divergence,
    /// `f ↦ c0 ∇_a ∇_b f + c1 (Δf) g_ab + c2 Φ_ab f`.
    TracefreeHessian,
    /// `V ↦ c0 ∇_a ∇_b V^ab + c1 Φ_ab V^ab`.
    DoubleDivergence,
    /// `V ↦ ∇_b V^ab`.
    TensorDivergence,
    /// Curvature-corrected bilinear form on vector fields.
    InnerCurved,
    /// Second-order Laplacian symmetry `D_V` on a curved background.
    CurvedSymmetry,
    /// Its partner `δ_V`, acting on densities of weight `-1-n/2`.
    CurvedDelta,
}

impl PairingId {
    pub const ALL: [PairingId; 14] = [
        PairingId::First,
        PairingId::Second,
        PairingId::OneForm,
        PairingId::Yamabe,
        PairingId::FirstExample,
        PairingId::SecondExample,
        PairingId::Gradient,
        PairingId::Divergence,
        PairingId::TracefreeHessian,
        PairingId::DoubleDivergence,
        PairingId::TensorDivergence,
        PairingId::InnerCurved,
        PairingId::CurvedSymmetry,
        PairingId::CurvedDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairingId::First => "first",
            PairingId::Second => "second",
            PairingId::OneForm => "oneform",
            PairingId::Yamabe => "yamabe",
            PairingId::FirstExample => "first-example",
            PairingId::SecondExample => "second-example",
            PairingId::Gradient => "gradient",
            PairingId::Divergence => "divergence",
            PairingId::TracefreeHessian => "tracefree-hessian",
            PairingId::DoubleDivergence => "double-divergence",
            PairingId::TensorDivergence => "tensor-divergence",
            PairingId::InnerCurved => "inner",
            PairingId::CurvedSymmetry => "curved-symmetry",
            PairingId::CurvedDelta => "curved-delta",
        }
    }

    /// Slots expected of each input, in order.
    pub fn input_slots(self) -> Vec<Vec<Slot>> {
        use Slot::*;
        match self {
            PairingId::First | PairingId::FirstExample => vec![vec![Up], vec![]],
            PairingId::Second | PairingId::SecondExample | PairingId::CurvedSymmetry | PairingId::CurvedDelta => {
                vec![vec![Up, Up], vec![]]
            }
            PairingId::OneForm => vec![vec![Up, Up], vec![Down]],
            PairingId::Yamabe | PairingId::Gradient | PairingId::TracefreeHessian => vec![vec![]],
            PairingId::Divergence => vec![vec![Up]],
            PairingId::DoubleDivergence | PairingId::TensorDivergence => vec![vec![Up, Up]],
            PairingId::InnerCurved => vec![vec![Up], vec![Up]],
        }
    }

    /// Input weights the operator is only defined (or only invariant) at.
    pub fn required_weights(self, n: usize) -> Vec<Option<Q>> {
        let nq = qi(n as i64);
        let half = q(n as i64, 2);
        match self {
            PairingId::FirstExample => vec![Some(Q::zero()), None],
            PairingId::Yamabe => vec![Some(Q::one() - &half)],
            PairingId::Gradient => vec![Some(Q::zero())],
            PairingId::Divergence => vec![Some(-nq)],
            PairingId::TracefreeHessian => vec![Some(Q::one())],
            PairingId::DoubleDivergence => vec![Some(-nq - Q::one())],
            PairingId::TensorDivergence => vec![Some(-nq - qi(2))],
            PairingId::InnerCurved => vec![Some(Q::zero()), Some(Q::zero())],
            PairingId::CurvedSymmetry => vec![Some(Q::zero()), Some(Q::one() - &half)],
            PairingId::CurvedDelta => vec![Some(Q::zero()), Some(-Q::one() - &half)],
            _ => self.input_slots().iter().map(|_| None).collect(),
        }
    }

    /// Declared output weight for the given input weights, or `None` when it
    /// has to be inferred.
    pub fn output_weight(self, n: usize, weights: &[Q]) -> Option<Q> {
        let half = q(n as i64, 2);
        match self {
            PairingId::InnerCurved => None,
            PairingId::Yamabe => Some(-Q::one() - half),
            PairingId::CurvedSymmetry => Some(Q::one() - half),
            PairingId::CurvedDelta => Some(-Q::one() - half),
            _ => Some(weights.iter().cloned().sum()),
        }
    }

    /// Conformal weight of every term, counting `+2` per metric and `-2`
    /// per inverse metric on top of the input weights. A constant rescaling
    /// `Ω = c` multiplies each term by `c` to that power.
    pub fn term_weights(self, n: usize, weights: &[Q]) -> Vec<Q> {
        let s: Q = weights.iter().cloned().sum();
        let _ = n;
        let count = match self {
            PairingId::First | PairingId::FirstExample | PairingId::OneForm => 2,
            PairingId::Second | PairingId::SecondExample | PairingId::CurvedSymmetry | PairingId::CurvedDelta => 4,
            PairingId::Gradient | PairingId::Divergence | PairingId::TensorDivergence => 1,
            PairingId::TracefreeHessian => {
                // ∇∇f, Δf·g (g^{-1} then g), Φf
                return vec![s.clone(), s.clone() - qi(2) + qi(2), s];
            }
            PairingId::DoubleDivergence => 2,
            PairingId::Yamabe => return vec![s.clone() - qi(2), s - qi(2)],
            PairingId::InnerCurved => {
                // ∇V∇W, divV divW, V∇divW, W∇divV: no metric.
                // Δ(g V W): g^{-1} and g. R_ab V W: none. R g V W: g^{-1}g^{-1} in R, one g.
                return vec![
                    s.clone(),
                    s.clone(),
                    s.clone(),
                    s.clone(),
                    s.clone() + qi(2) - qi(2),
                    s.clone(),
                    s.clone() - qi(2) + qi(2),
                ];
            }
        };
        vec![s; count]
    }
}

impl fmt::Display for PairingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairingId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PairingId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown pairing `{s}`")))
    }
}

/// The coefficients that make each operator conformally invariant.
pub fn default_coefficients(id: PairingId, n: usize, weights: &[Q]) -> Vec<Q> {
    let nq = qi(n as i64);
    let one = Q::one();
    let w_at = |i: usize| weights.get(i).cloned().unwrap_or_else(Q::zero);
    match id {
        PairingId::First => {
            let (v, w) = (w_at(0), w_at(1));
            vec![v + &nq, -w]
        }
        PairingId::FirstExample => {
            let w = w_at(1);
            vec![one, -w / &nq]
        }
        PairingId::Second => {
            let (v, w) = (w_at(0), w_at(1));
            let a = &nq + &v;
            vec![
                (&a + qi(2)) * (&a + &one),
                qi(-2) * (&w - &one) * (&a + &one),
                &w * (&w - &one),
                &w * (&a + &w) * (&a + qi(2)),
            ]
        }
        PairingId::SecondExample => {
            let w = w_at(1);
            vec![
                one.clone(),
                qi(-2) * (&w - &one) / (&nq + qi(2)),
                &w * (&w - &one) / ((&nq + &one) * (&nq + qi(2))),
                &w * (&nq + &w) / ((&nq + &one) * (&nq - qi(2))),
            ]
        }
        PairingId::OneForm => {
            let (v, w) = (w_at(0), w_at(1));
            vec![&nq + &v + qi(2), -(w - qi(2))]
        }
        PairingId::Yamabe => vec![one.clone(), -(&nq - qi(2)) / (qi(4) * (&nq - &one))],
        PairingId::Gradient | PairingId::Divergence | PairingId::TensorDivergence => vec![one],
        PairingId::TracefreeHessian => vec![one.clone(), -one.clone() / &nq, one],
        PairingId::DoubleDivergence => vec![one.clone(), one],
        PairingId::InnerCurved => {
            let k = &nq + qi(2);
            let kn = &k / &nq;
            vec![
                k.clone(),
                -kn.clone(),
                -kn.clone(),
                -kn,
                one,
                qi(-2) * &k / (&nq - qi(2)),
                qi(2) * &nq / ((&nq - Q::one()) * (&nq - qi(2))),
            ]
        }
        PairingId::CurvedSymmetry => vec![
            one,
            &nq / (&nq + qi(2)),
            (&nq - qi(2)) * &nq / (qi(4) * (&nq + Q::one()) * (&nq + qi(2))),
            -(&nq + qi(2)) / (qi(4) * (&nq + Q::one())),
        ],
        PairingId::CurvedDelta => vec![
            one,
            (&nq + qi(4)) / (&nq + qi(2)),
            (&nq + qi(4)) / (qi(4) * (&nq + Q::one())),
            -(&nq + qi(2)) / (qi(4) * (&nq + Q::one())),
        ],
    }
}

fn check_inputs(id: PairingId, n: usize, inputs: &[&JetField]) -> Result<()> {
    let slots = id.input_slots();
    if inputs.len() != slots.len() {
        return Err(Error::WrongTensorType(format!(
            "{id} takes {} inputs, got {}",
            slots.len(),
            inputs.len()
        )));
    }
    for ((t, s), w) in inputs.iter().zip(&slots).zip(id.required_weights(n)) {
        if t.dim() != n {
            return Err(Error::DimensionMismatch(n, t.dim()));
        }
        t.expect_shape(s, None)?;
        if let Some(w) = w {
            t.expect_weight(&w)?;
        }
    }
    Ok(())
}

fn scalar(j: Jet, w: Q) -> JetField {
    JetField::scalar_jet(j, w)
}

fn combine(terms: &[Jet], coeffs: &[Q]) -> Jet {
    let mut it = terms.iter().zip(coeffs);
    let (t0, c0) = it.next().expect("at least one term");
    it.fold(t0.scale(c0), |acc, (t, c)| &acc + &t.scale(c))
}

/// `∇_a V^ab` of a contravariant rank-2 field, as a vector.
fn div2(cache: &GeometryCache, v: &JetField) -> Result<JetField> {
    contract(&cov_deriv(cache, v)?, 0, 1)
}

/// Evaluates `id` with explicit coefficients. Output weight is taken from
/// [`PairingId::output_weight`] (zero when undeclared).
pub fn evaluate(cache: &GeometryCache, id: PairingId, coeffs: &[Q], inputs: &[&JetField]) -> Result<JetField> {
    let n = cache.dim();
    check_inputs(id, n, inputs)?;
    let expected = default_coefficients(id, n, &[]).len();
    if coeffs.len() != expected {
        return Err(Error::Precondition(format!("{id} takes {expected} coefficients, got {}", coeffs.len())));
    }
    let weights: Vec<Q> = inputs.iter().map(|t| t.weight().clone()).collect();
    let lambda = id.output_weight(n, &weights).unwrap_or_else(Q::zero);
    match id {
        PairingId::First | PairingId::FirstExample => {
            let (v, f) = (inputs[0], inputs[1]);
            let t0 = pair(v, &cov_deriv(cache, f)?)?;
            let t1 = contract(&cov_deriv(cache, v)?, 0, 1)?.as_scalar() * f.as_scalar();
            Ok(scalar(combine(&[t0, t1], coeffs), lambda))
        }
        PairingId::Second | PairingId::SecondExample | PairingId::CurvedSymmetry | PairingId::CurvedDelta => {
            let (v, f) = (inputs[0], inputs[1]);
            let df = cov_deriv(cache, f)?;
            let t0 = pair(v, &cov_deriv(cache, &df)?)?;
            let dv = div2(cache, v)?;
            let t1 = pair(&dv, &df)?;
            let ddv = contract(&cov_deriv(cache, &dv)?, 0, 1)?;
            let t2 = ddv.as_scalar() * f.as_scalar();
            let curv = if id == PairingId::Second { &cache.phi } else { &cache.ricci };
            let t3 = &pair(v, curv)? * f.as_scalar();
            Ok(scalar(combine(&[t0, t1, t2, t3], coeffs), lambda))
        }
        PairingId::OneForm => {
            let (v, phi) = (inputs[0], inputs[1]);
            let t0 = pair(v, &cov_deriv(cache, phi)?)?;
            let t1 = pair(&div2(cache, v)?, phi)?;
            Ok(scalar(combine(&[t0, t1], coeffs), lambda))
        }
        PairingId::Yamabe => {
            let f = inputs[0];
            let t0 = laplacian(cache, f)?;
            let t1 = &cache.scalar * f.as_scalar();
            Ok(scalar(combine(&[t0, t1], coeffs), lambda))
        }
        PairingId::Gradient => Ok(cov_deriv(cache, inputs[0])?.scale_by(&cache.metric.constant(coeffs[0].clone()))),
        PairingId::Divergence => {
            let d = contract(&cov_deriv(cache, inputs[0])?, 0, 1)?;
            Ok(scalar(d.as_scalar().scale(&coeffs[0]), lambda))
        }
        PairingId::TensorDivergence => {
            let v = inputs[0];
            let d = cov_deriv(cache, v)?;
            // ∇_b V^ab: derivative slot against the second upper slot.
            let d = contract(&d, 0, 2)?;
            Ok(d.map(|j| j.scale(&coeffs[0])).with_weight(lambda))
        }
        PairingId::TracefreeHessian => {
            let f = inputs[0];
            let hess = cov_deriv(cache, &cov_deriv(cache, f)?)?;
            let lap = laplacian(cache, f)?;
            let g = &cache.metric;
            Ok(JetField::from_fn(n, vec![Slot::Down, Slot::Down], Symmetry::Symmetric, lambda, |ix| {
                let terms = [hess.get(ix).clone(), &lap * g.g(ix[0], ix[1]), cache.phi.get(ix) * f.as_scalar()];
                combine(&terms, coeffs)
            }))
        }
        PairingId::DoubleDivergence => {
            let v = inputs[0];
            let dv = div2(cache, v)?;
            let t0 = contract(&cov_deriv(cache, &dv)?, 0, 1)?.as_scalar().clone();
            let t1 = pair(v, &cache.phi)?;
            Ok(scalar(combine(&[t0, t1], coeffs), lambda))
        }
        PairingId::InnerCurved => {
            let (v, w) = (inputs[0], inputs[1]);
            let g = &cache.metric;
            let nv = cov_deriv(cache, v)?;
            let nw = cov_deriv(cache, w)?;
            let t0 = index_tuples(n, 2)
                .iter()
                .fold(g.zero(), |acc, ix| &acc + &(nv.get(&[ix[1], ix[0]]) * nw.get(&[ix[0], ix[1]])));
            let dv = contract(&nv, 0, 1)?;
            let dw = contract(&nw, 0, 1)?;
            let t1 = dv.as_scalar() * dw.as_scalar();
            let t2 = pair(v, &cov_deriv(cache, &dw)?)?;
            let t3 = pair(w, &cov_deriv(cache, &dv)?)?;
            let v_low = move_index(g, v, 0);
            let vw = pair(&v_low, w)?;
            let t4 = laplacian(cache, &scalar(vw.clone(), Q::zero()))?;
            let t5 = index_tuples(n, 2).iter().fold(g.zero(), |acc, ix| {
                &acc + &(cache.ricci.get(ix) * &(v.get(&[ix[0]]) * w.get(&[ix[1]])))
            });
            let t6 = &cache.scalar * &vw;
            Ok(scalar(combine(&[t0, t1, t2, t3, t4, t5, t6], coeffs), lambda))
        }
    }
}

/// Evaluates `id` with its invariant coefficients.
pub fn evaluate_default(cache: &GeometryCache, id: PairingId, inputs: &[&JetField]) -> Result<JetField> {
    let weights: Vec<Q> = inputs.iter().map(|t| t.weight().clone()).collect();
    evaluate(cache, id, &default_coefficients(id, cache.dim(), &weights), inputs)
}

pub fn yamabe_apply(cache: &GeometryCache, f: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::Yamabe, &[f])
}

/// `(v+n) V^a ∇_a f - w (∇_a V^a) f`.
pub fn pairing_first(cache: &GeometryCache, v: &JetField, f: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::First, &[v, f])
}

pub fn pairing_second(cache: &GeometryCache, v: &JetField, f: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::Second, &[v, f])
}

pub fn pairing_oneform(cache: &GeometryCache, v: &JetField, phi: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::OneForm, &[v, phi])
}

/// `V^a ∇_a f - (w/n)(∇_a V^a) f` for weight-0 `V`.
pub fn first_example(cache: &GeometryCache, v: &JetField, f: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::FirstExample, &[v, f])
}

pub fn second_example(cache: &GeometryCache, v: &JetField, f: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::SecondExample, &[v, f])
}

pub fn curved_second_symmetry(cache: &GeometryCache, v: &JetField, f: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::CurvedSymmetry, &[v, f])
}

pub fn curved_second_delta(cache: &GeometryCache, v: &JetField, h: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::CurvedDelta, &[v, h])
}

pub fn inner_product_curved(cache: &GeometryCache, v: &JetField, w: &JetField) -> Result<JetField> {
    evaluate_default(cache, PairingId::InnerCurved, &[v, w])
}

/// The five operators that appear when a weight makes one side of a
/// pairing drop out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialOp {
    Gradient,
    Divergence,
    TracefreeHessian,
    DoubleDivergence,
    TensorDivergence,
}

impl SpecialOp {
    pub const ALL: [SpecialOp; 5] = [
        SpecialOp::Gradient,
        SpecialOp::Divergence,
        SpecialOp::TracefreeHessian,
        SpecialOp::DoubleDivergence,
        SpecialOp::TensorDivergence,
    ];

    pub fn id(self) -> PairingId {
        match self {
            SpecialOp::Gradient => PairingId::Gradient,
            SpecialOp::Divergence => PairingId::Divergence,
            SpecialOp::TracefreeHessian => PairingId::TracefreeHessian,
            SpecialOp::DoubleDivergence => PairingId::DoubleDivergence,
            SpecialOp::TensorDivergence => PairingId::TensorDivergence,
        }
    }

    /// The only input weight at which the operator is invariant.
    pub fn weight(self, n: usize) -> Q {
        self.id().required_weights(n)[0].clone().expect("special weights are fixed")
    }
}

pub fn special_weight_operator(cache: &GeometryCache, op: SpecialOp, input: &JetField) -> Result<JetField> {
    evaluate_default(cache, op.id(), &[input])
}

/// Rebuilds the second-order pairing from the double-divergence and the
/// tensor-divergence operators applied to `f`-power rescalings of `V`, and
/// returns composite minus pairing.
pub fn factorization_identity_residual(cache: &GeometryCache, v: &JetField, f: &JetField) -> Result<JetField> {
    let n = cache.dim();
    check_inputs(PairingId::Second, n, &[v, f])?;
    let (vw, w) = (v.weight().clone(), f.weight().clone());
    if w.is_zero() {
        return Err(Error::Precondition("factorization needs w != 0".into()));
    }
    let fj = f.as_scalar();
    if !fj.value().is_one() {
        return Err(Error::NotNormalized(crate::exact::fmt_q(&fj.value())));
    }
    let nq = qi(n as i64);
    let a = &nq + &vw;
    let fpow = |e: Q| fj.pow_rational(&(e / &w));

    let dd_weight = -&nq - Q::one();
    let scaled = v.scale_by(&fpow(-(&a + Q::one()))?).with_weight(dd_weight);
    let t1 = special_weight_operator(cache, SpecialOp::DoubleDivergence, &scaled)?;

    let td_weight = -&nq - qi(2);
    let scaled = v.scale_by(&fpow(-(&a + qi(2)))?).with_weight(td_weight);
    let x = special_weight_operator(cache, SpecialOp::TensorDivergence, &scaled)?;
    let y = x.scale_by(&fpow(qi(2))?).with_weight(-&nq);
    let t2 = special_weight_operator(cache, SpecialOp::Divergence, &y)?;

    let c1 = &w * (&a + qi(2)) * (&a + &w);
    let c2 = &w * (&a + Q::one()) * (&a + Q::one() + &w);
    let composite = &(t1.as_scalar() * &fpow(&a + Q::one() + &w)?).scale(&c1)
        - &(t2.as_scalar() * &fpow(&a + &w)?).scale(&c2);
    let p = pairing_second(cache, v, f)?;
    Ok(scalar(&composite - p.as_scalar(), p.weight().clone()))
}
