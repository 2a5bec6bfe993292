//! Curved backgrounds in exact jet arithmetic: curvature of a metric,
//! conformal rescaling laws, the Yamabe operator and invariant pairings.

mod experiment;
mod geometry;
mod invariance;
mod pairings;
mod random;
mod transform;

pub use experiment::{
    run_yamabe_ckt_experiment, transport_weights, yamabe_ckt_experiment, yamabe_symmetry_residual, ExperimentReport,
    ExperimentRow,
};
pub use geometry::{
    contract, cov_deriv, divergence, geometry_cache, laplacian, metric_trace, move_index, pair, tracefree_part,
    GeometryCache, MetricJet,
};
pub use invariance::{constant_rescaling_consistent, invariance_check, InvarianceReport, RescaledPair, Verdict};
pub use pairings::{
    curved_second_delta, curved_second_symmetry, default_coefficients, evaluate, evaluate_default,
    factorization_identity_residual, first_example, inner_product_curved, pairing_first, pairing_oneform,
    pairing_second, second_example, special_weight_operator, yamabe_apply, PairingId, SpecialOp,
};
pub use random::Sampler;
pub use transform::{
    connection_change_residual, connection_change_residual_with, connection_difference, curvature_transform_residual,
    predicted_connection_difference, rescale, transform_field, xi_tensor, ConformalFactor, CurvatureResiduals,
};

#[cfg(test)]
mod tests;
