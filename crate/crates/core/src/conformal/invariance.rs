use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{fmt_q, Q};
use crate::tensor::JetField;

use super::geometry::{GeometryCache, MetricJet};
use super::pairings::{default_coefficients, evaluate, PairingId};
use super::transform::{rescale, transform_field, ConformalFactor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    VerifiedToOrder(u32),
    NonzeroResidual,
}

/// Outcome of comparing `P_ĝ(T̂…)` with `Ω^λ P_g(T…)`.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub pairing: PairingId,
    pub weights: Vec<Q>,
    pub output_weight: Q,
    pub coefficients: Vec<Q>,
    pub residual: JetField,
    pub valid_order: u32,
    pub verdict: Verdict,
    /// Every term picks up the same power of a constant rescaling.
    pub scaling_consistent: bool,
    pub seed: Option<u64>,
}

impl InvarianceReport {
    pub fn verified(&self) -> bool {
        matches!(self.verdict, Verdict::VerifiedToOrder(_)) && self.scaling_consistent
    }

    pub fn summary(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(fmt_q).collect();
        let verdict = match &self.verdict {
            Verdict::VerifiedToOrder(k) => format!("verified to order {k}"),
            Verdict::NonzeroResidual => format!("nonzero residual in {} component(s)", self.residual.nonzero_count()),
        };
        format!(
            "{} weights=({}) out={}: {}{}",
            self.pairing,
            ws.join(","),
            fmt_q(&self.output_weight),
            verdict,
            if self.scaling_consistent { "" } else { "; constant rescaling mismatch" }
        )
    }
}

/// Formal constant-rescaling check: under `Ω = c` every term of the
/// pairing scales as `c^{term weight}`, so all term weights must equal `λ`.
pub fn constant_rescaling_consistent(id: PairingId, n: usize, weights: &[Q], lambda: &Q) -> bool {
    id.term_weights(n, weights).iter().all(|t| t == lambda)
}

/// Conformal rescaling of a background computed once: `g`, `ĝ = Ω² g` and
/// both geometry caches.
#[derive(Clone, Debug)]
pub struct RescaledPair {
    pub cache: GeometryCache,
    pub hat: GeometryCache,
    pub omega: ConformalFactor,
}

impl RescaledPair {
    pub fn new(g: &MetricJet, omega: ConformalFactor) -> Result<Self> {
        let hat = GeometryCache::new(rescale(g, &omega)?)?;
        let cache = GeometryCache::new(g.clone())?;
        Ok(RescaledPair { cache, hat, omega })
    }

    /// Invariance residual with explicit coefficients and output weight.
    pub fn check_with(
        &self,
        id: PairingId,
        coeffs: &[Q],
        inputs: &[&JetField],
        lambda: &Q,
    ) -> Result<InvarianceReport> {
        let transformed: Vec<JetField> = inputs.iter().map(|t| transform_field(t, &self.omega)).collect::<Result<_>>()?;
        let refs: Vec<&JetField> = transformed.iter().collect();
        let p = evaluate(&self.cache, id, coeffs, inputs)?;
        let p_hat = evaluate(&self.hat, id, coeffs, &refs)?;
        let residual = p_hat.sub(&p.scale_by(&self.omega.power(lambda)?));
        let valid_order = residual.valid_order();
        let verdict = if residual.is_zero() { Verdict::VerifiedToOrder(valid_order) } else { Verdict::NonzeroResidual };
        let weights: Vec<Q> = inputs.iter().map(|t| t.weight().clone()).collect();
        let scaling_consistent = constant_rescaling_consistent(id, self.cache.dim(), &weights, lambda);
        Ok(InvarianceReport {
            pairing: id,
            weights,
            output_weight: lambda.clone(),
            coefficients: coeffs.to_vec(),
            residual,
            valid_order,
            verdict,
            scaling_consistent,
            seed: None,
        })
    }

    /// Invariance residual with the invariant coefficients; `lambda`
    /// overrides the declared output weight (and is required when none is
    /// declared).
    pub fn check(&self, id: PairingId, inputs: &[&JetField], lambda: Option<&Q>) -> Result<InvarianceReport> {
        let n = self.cache.dim();
        let weights: Vec<Q> = inputs.iter().map(|t| t.weight().clone()).collect();
        let lambda = match lambda {
            Some(l) => l.clone(),
            None => id
                .output_weight(n, &weights)
                .ok_or_else(|| Error::Precondition(format!("{id} has no declared output weight")))?,
        };
        self.check_with(id, &default_coefficients(id, n, &weights), inputs, &lambda)
    }

    /// Same as [`check`](Self::check) with coefficient `index` shifted by `+1`.
    pub fn check_perturbed(&self, id: PairingId, inputs: &[&JetField], index: usize) -> Result<InvarianceReport> {
        let n = self.cache.dim();
        let weights: Vec<Q> = inputs.iter().map(|t| t.weight().clone()).collect();
        let mut coeffs = default_coefficients(id, n, &weights);
        let c = coeffs
            .get_mut(index)
            .ok_or_else(|| Error::Precondition(format!("{id} has no coefficient {index}")))?;
        *c += Q::from_integer(1.into());
        let lambda = id.output_weight(n, &weights).unwrap_or_else(Q::zero);
        self.check_with(id, &coeffs, inputs, &lambda)
    }

    /// Every candidate `λ` for which the residual vanishes.
    pub fn infer_output_weight(&self, id: PairingId, inputs: &[&JetField], candidates: &[Q]) -> Result<Vec<Q>> {
        let mut hits = Vec::new();
        for l in candidates {
            if self.check(id, inputs, Some(l))?.residual.is_zero() {
                hits.push(l.clone());
            }
        }
        Ok(hits)
    }
}

/// One-shot form: builds both caches, then compares.
pub fn invariance_check(
    id: PairingId,
    g: &MetricJet,
    omega: &ConformalFactor,
    inputs: &[&JetField],
    lambda: Option<&Q>,
) -> Result<InvarianceReport> {
    RescaledPair::new(g, omega.clone())?.check(id, inputs, lambda)
}
