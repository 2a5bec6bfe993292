use num_traits::Zero;

use crate::ckt::solve_conformal_killing;
use crate::error::Result;
use crate::exact::{fmt_q, q, qi, Jet, Q};
use crate::symmetry::symmetric_tracefree_product;
use crate::tensor::{JetField, PolyField};

use super::geometry::{GeometryCache, MetricJet};
use super::pairings::{curved_second_delta, curved_second_symmetry, yamabe_apply};
use super::random::Sampler;
use super::transform::{rescale, ConformalFactor};

/// `Y(D_V f) - δ_V(Y f)` on the background of `cache`.
pub fn yamabe_symmetry_residual(cache: &GeometryCache, v: &JetField, f: &JetField) -> Result<Jet> {
    let dvf = curved_second_symmetry(cache, v, f)?;
    let lhs = yamabe_apply(cache, &dvf)?;
    let yf = yamabe_apply(cache, f)?;
    let rhs = curved_second_delta(cache, v, &yf)?;
    Ok(lhs.as_scalar() - rhs.as_scalar())
}

/// Runs the commutation test on `ĝ = Ω² g` with `V` transported as
/// `V̂ = Ω^v V`.
pub fn yamabe_ckt_experiment(
    g: &MetricJet,
    omega: &ConformalFactor,
    v: &JetField,
    transport_weight: &Q,
    f: &JetField,
) -> Result<Jet> {
    let hat = GeometryCache::new(rescale(g, omega)?)?;
    let vt = v.scale_by(&omega.power(transport_weight)?).with_weight(Q::zero());
    yamabe_symmetry_residual(&hat, &vt, f)
}

#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub label: String,
    pub transport_weight: Q,
    pub residual_zero: bool,
    pub nonzero_coefficients: usize,
    pub valid_order: u32,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub n: usize,
    pub seed: u64,
    pub order: u32,
    /// Flat background; all rows must vanish.
    pub flat: Vec<ExperimentRow>,
    /// Conformally flat curved background, swept over transport weights.
    pub curved: Vec<ExperimentRow>,
}

impl ExperimentReport {
    pub fn flat_all_zero(&self) -> bool {
        self.flat.iter().all(|r| r.residual_zero)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (tag, rows) in [("flat", &self.flat), ("curved", &self.curved)] {
            for r in rows {
                out.push(format!(
                    "{tag} {} v={} order={} {}",
                    r.label,
                    fmt_q(&r.transport_weight),
                    r.valid_order,
                    if r.residual_zero { "zero".to_string() } else { format!("nonzero({})", r.nonzero_coefficients) }
                ));
            }
        }
        out
    }
}

/// Grid of transport weights swept by the experiment.
pub fn transport_weights() -> Vec<Q> {
    vec![qi(-1), q(-1, 2), qi(0), q(1, 2), qi(1)]
}

fn row(label: String, w: Q, r: &Jet) -> ExperimentRow {
    ExperimentRow {
        label,
        transport_weight: w,
        residual_zero: r.is_zero(),
        nonzero_coefficients: r.local().len(),
        valid_order: r.order(),
    }
}

/// Samples `samples` flat conformal Killing tensors (plus squares `V⊙V` of
/// two conformal Killing fields) and reports the commutation residual on the
/// flat background and on a random conformally flat one.
pub fn run_yamabe_ckt_experiment(n: usize, seed: u64, order: u32, samples: usize) -> Result<ExperimentReport> {
    let mut s = Sampler::new(n, order, seed);
    let base = s.base().to_vec();
    let flat = MetricJet::flat(n, &base, order);
    let omega = s.conformal_factor()?;
    let f = s.scalar(qi(1) - q(n as i64, 2));

    let tensors = solve_conformal_killing(n, 2, 2)?;
    let fields = solve_conformal_killing(n, 1, 2)?;
    let stride = (tensors.len() / samples.max(1)).max(1);
    let mut cases: Vec<(String, PolyField)> = tensors
        .iter()
        .enumerate()
        .step_by(stride)
        .take(samples)
        .map(|(i, t)| (format!("ckt[{i}]"), t.clone()))
        .collect();
    for i in [fields.len() - 1, fields.len() / 2] {
        cases.push((format!("sq[{i}]"), symmetric_tracefree_product(&fields[i], &fields[i])));
    }

    let flat_cache = GeometryCache::new(flat.clone())?;
    let hat = GeometryCache::new(rescale(&flat, &omega)?)?;
    let mut report = ExperimentReport { n, seed, order, flat: Vec::new(), curved: Vec::new() };
    for (label, t) in &cases {
        let v = t.to_jets(&base, order).with_weight(Q::zero());
        let r = yamabe_symmetry_residual(&flat_cache, &v, &f)?;
        report.flat.push(row(label.clone(), Q::zero(), &r));
        for w in transport_weights() {
            let vt = v.scale_by(&omega.power(&w)?).with_weight(Q::zero());
            let r = yamabe_symmetry_residual(&hat, &vt, &f)?;
            report.curved.push(row(label.clone(), w, &r));
        }
    }
    Ok(report)
}
