use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{fmt_q, q, qi, Jet, Q};
use crate::tensor::{index_tuples, JetField, Slot, Symmetry};

use super::geometry::{cov_deriv, GeometryCache, MetricJet};

/// Positive conformal factor `Ω`, normalized by `Ω(p) = 1`, for the
/// rescaling `ĝ = Ω² g`.
#[derive(Clone, Debug)]
pub struct ConformalFactor {
    omega: Jet,
    upsilon: Vec<Jet>,
}

impl ConformalFactor {
    pub fn new(omega: Jet) -> Result<Self> {
        if !omega.value().is_one() {
            return Err(Error::NotNormalized(fmt_q(&omega.value())));
        }
        if omega.order() == 0 {
            return Err(Error::OrderExhausted);
        }
        let inv = omega.inverse()?;
        let upsilon = (0..omega.dim())
            .map(|a| Ok(&omega.diff(a)? * &inv))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConformalFactor { omega, upsilon })
    }

    pub fn omega(&self) -> &Jet {
        &self.omega
    }

    /// `Υ_a = ∂_a log Ω`.
    pub fn upsilon(&self, a: usize) -> &Jet {
        &self.upsilon[a]
    }

    /// `Ω^w`.
    pub fn power(&self, w: &Q) -> Result<Jet> {
        self.omega.pow_rational(w)
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    /// `Υ_a` as a covariant weight-0 field.
    pub fn upsilon_field(&self) -> JetField {
        JetField::from_fn(self.dim(), vec![Slot::Down], Symmetry::None, qi(0), |ix| self.upsilon[ix[0]].clone())
    }
}

/// `ĝ = Ω² g`.
pub fn rescale(g: &MetricJet, omega: &ConformalFactor) -> Result<MetricJet> {
    if g.dim() != omega.dim() {
        return Err(Error::DimensionMismatch(g.dim(), omega.dim()));
    }
    let o = omega.omega();
    g.scaled(&(o * o))
}

/// `T̂ = Ω^w T` for a field of weight `w`.
pub fn transform_field(t: &JetField, omega: &ConformalFactor) -> Result<JetField> {
    Ok(t.scale_by(&omega.power(t.weight())?))
}

/// Difference tensor `Γ̂^c_ab - Γ^c_ab` read off from the two caches.
pub fn connection_difference(cache: &GeometryCache, hat: &GeometryCache) -> JetField {
    let n = cache.dim();
    JetField::from_fn(n, vec![Slot::Down, Slot::Down, Slot::Up], Symmetry::None, qi(0), |ix| {
        hat.christoffel(ix[2], ix[0], ix[1]) - cache.christoffel(ix[2], ix[0], ix[1])
    })
}

/// Predicted difference tensor `Υ_a δ_b^c + Υ_b δ_a^c - g_ab Υ^c`.
pub fn predicted_connection_difference(g: &MetricJet, omega: &ConformalFactor) -> JetField {
    let n = g.dim();
    let up: Vec<Jet> = (0..n)
        .map(|c| (0..n).fold(g.zero(), |acc, d| &acc + &(g.inv(c, d) * omega.upsilon(d))))
        .collect();
    JetField::from_fn(n, vec![Slot::Down, Slot::Down, Slot::Up], Symmetry::None, qi(0), |ix| {
        let (a, b, c) = (ix[0], ix[1], ix[2]);
        let mut v = -(g.g(a, b) * &up[c]);
        if b == c {
            v = &v + omega.upsilon(a);
        }
        if a == c {
            v = &v + omega.upsilon(b);
        }
        v
    })
}

/// Weighted change of connection for an arbitrary tensor density:
/// `∇̂_a T̂ - Ω^w (∇_a T + w Υ_a T + Σ_up Γ T - Σ_down Γ T)`, which vanishes
/// identically when `Γ` is the conformal difference tensor.
pub fn connection_change_residual(
    g: &MetricJet,
    omega: &ConformalFactor,
    t: &JetField,
) -> Result<JetField> {
    let cache = GeometryCache::new(g.clone())?;
    let hat = GeometryCache::new(rescale(g, omega)?)?;
    let diff = predicted_connection_difference(g, omega);
    let actual = connection_difference(&cache, &hat);
    if actual.sub(&diff).nonzero_count() != 0 {
        return Err(Error::AsymmetricConnection);
    }
    connection_change_with(&cache, &hat, omega, &diff, t)
}

fn connection_change_with(
    cache: &GeometryCache,
    hat: &GeometryCache,
    omega: &ConformalFactor,
    gamma: &JetField,
    t: &JetField,
) -> Result<JetField> {
    let n = cache.dim();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if gamma.get(&[a, b, c]) != gamma.get(&[b, a, c]) {
                    return Err(Error::AsymmetricConnection);
                }
            }
        }
    }
    let w = t.weight().clone();
    let lhs = cov_deriv(hat, &transform_field(t, omega)?)?;
    let nabla = cov_deriv(cache, t)?;
    let rank = t.rank();
    let predicted = JetField::from_fn(n, nabla.slots().to_vec(), Symmetry::None, w.clone(), |ix| {
        let a = ix[0];
        let rest = &ix[1..];
        let mut v = nabla.get(ix) + &(omega.upsilon(a) * t.get(rest)).scale(&w);
        for i in 0..rank {
            let mut jx = rest.to_vec();
            for d in 0..n {
                jx[i] = d;
                match t.slots()[i] {
                    Slot::Up => v = &v + &(gamma.get(&[a, d, rest[i]]) * t.get(&jx)),
                    Slot::Down => v = &v - &(gamma.get(&[a, rest[i], d]) * t.get(&jx)),
                }
            }
        }
        v
    });
    Ok(lhs.sub(&predicted.scale_by(&omega.power(&w)?)))
}

/// Residuals of the curvature transformation laws under `ĝ = Ω² g`.
#[derive(Clone, Debug)]
pub struct CurvatureResiduals {
    /// `R̂_abcd - Ω² (R_abcd - Ξ_ac g_bd + Ξ_bc g_ad - Ξ_bd g_ac + Ξ_ad g_bc)`.
    pub riemann: JetField,
    /// `R̂ - Ω^{-2} (R - 2(n-1)(∇^a Υ_a + (n/2 - 1) Υ^a Υ_a))`.
    pub scalar: Jet,
}

impl CurvatureResiduals {
    pub fn is_zero(&self) -> bool {
        self.riemann.is_zero() && self.scalar.is_zero()
    }

    pub fn valid_order(&self) -> u32 {
        self.riemann.valid_order().min(self.scalar.order())
    }
}

/// `Ξ_ab = ∇_a Υ_b - Υ_a Υ_b + ½ Υ^c Υ_c g_ab`.
pub fn xi_tensor(cache: &GeometryCache, omega: &ConformalFactor) -> Result<JetField> {
    let g = &cache.metric;
    let n = g.dim();
    let nu = cov_deriv(cache, &omega.upsilon_field())?;
    let sq = upsilon_square(g, omega);
    let half = q(1, 2);
    Ok(JetField::from_fn(n, vec![Slot::Down, Slot::Down], Symmetry::None, qi(0), |ix| {
        let (a, b) = (ix[0], ix[1]);
        &(nu.get(ix) - &(omega.upsilon(a) * omega.upsilon(b))) + &(&sq * g.g(a, b)).scale(&half)
    }))
}

fn upsilon_square(g: &MetricJet, omega: &ConformalFactor) -> Jet {
    index_tuples(g.dim(), 2)
        .iter()
        .fold(g.zero(), |acc, ix| &acc + &(g.inv(ix[0], ix[1]) * &(omega.upsilon(ix[0]) * omega.upsilon(ix[1]))))
}

pub fn curvature_transform_residual(g: &MetricJet, omega: &ConformalFactor) -> Result<CurvatureResiduals> {
    let n = g.dim();
    let cache = GeometryCache::new(g.clone())?;
    let hat = GeometryCache::new(rescale(g, omega)?)?;
    let xi = xi_tensor(&cache, omega)?;
    let o2 = omega.omega() * omega.omega();
    let riemann = JetField::from_fn(n, vec![Slot::Down; 4], Symmetry::None, qi(2), |ix| {
        let (a, b, c, d) = (ix[0], ix[1], ix[2], ix[3]);
        let mut pred = cache.riemann.get(ix).clone();
        pred = &pred - &(xi.get(&[a, c]) * g.g(b, d));
        pred = &pred + &(xi.get(&[b, c]) * g.g(a, d));
        pred = &pred - &(xi.get(&[b, d]) * g.g(a, c));
        pred = &pred + &(xi.get(&[a, d]) * g.g(b, c));
        hat.riemann.get(ix) - &(&o2 * &pred)
    });
    let nu = cov_deriv(&cache, &omega.upsilon_field())?;
    let div = index_tuples(n, 2)
        .iter()
        .fold(g.zero(), |acc, ix| &acc + &(g.inv(ix[0], ix[1]) * nu.get(ix)));
    let sq = upsilon_square(g, omega);
    let bracket = &div + &sq.scale(&(q(n as i64, 2) - Q::one()));
    let pred = &cache.scalar - &bracket.scale(&qi(2 * (n as i64 - 1)));
    let scalar = &hat.scalar - &(&pred * &omega.power(&qi(-2))?);
    Ok(CurvatureResiduals { riemann, scalar })
}

/// Residual of the connection-change law with an arbitrary symmetric
/// difference tensor supplied by the caller (slots `[Down, Down, Up]`).
pub fn connection_change_residual_with(
    g: &MetricJet,
    omega: &ConformalFactor,
    gamma: &JetField,
    t: &JetField,
) -> Result<JetField> {
    gamma.expect_shape(&[Slot::Down, Slot::Down, Slot::Up], None)?;
    let cache = GeometryCache::new(g.clone())?;
    let hat = GeometryCache::new(rescale(g, omega)?)?;
    connection_change_with(&cache, &hat, omega, gamma, t)
}
