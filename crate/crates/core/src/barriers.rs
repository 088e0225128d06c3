//! Closed-form stationary profiles and time-dependent sub/supersolutions,
//! their residuals under the discrete operator, and the quenching and
//! positivity bounds they generate through comparison.
//!
//! The basic building blocks are the power profile
//! v_{q,C}(x) = C|x−x₀|^{2/(1−q)}, the stationary profile
//! u_{β,m,C}(x) = C^{1/m}|x−x₀|^{2/(m+β)} (the case q = −β/m), and the
//! extinction ODE solutions y, z with y′ + λy^q = 0. U = [v + yᵐ]^{1/m}
//! supersolves the strong-absorption equation with μ = 2λ when C ≤ K_{N,q,λ};
//! W = [u_{β,m,C}ᵐ + zᵐ]^{1/m} subsolves the singular equation when the
//! internal λ is 1/2 and C ≥ K_{N,q,1/2}.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::{laplacian_of_power, Domain, Field, Grid, GridError};
use crate::params::{general_barrier_constant, ModelParams, ParamError};

/// Errors from barrier construction.
#[derive(Debug, Clone, PartialEq)]
pub enum BarrierError {
    Param(ParamError),
    Grid(GridError),
    /// The coefficient violates the side condition that makes the barrier a
    /// sub- or supersolution (C ≤ K for U, C ≥ K with λ = 1/2 for W).
    CoefficientOutOfRange { c: f64, k: f64 },
    /// x₀ must sit at the ball center or at an interval endpoint.
    UnsupportedCenter,
}

impl fmt::Display for BarrierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarrierError::Param(e) => write!(f, "{e}"),
            BarrierError::Grid(e) => write!(f, "{e}"),
            BarrierError::CoefficientOutOfRange { c, k } => {
                write!(f, "coefficient {c} violates the threshold K = {k}")
            }
            BarrierError::UnsupportedCenter => {
                write!(f, "x0 must be the ball center or an interval endpoint")
            }
        }
    }
}

impl core::error::Error for BarrierError {}

impl From<ParamError> for BarrierError {
    fn from(e: ParamError) -> Self {
        BarrierError::Param(e)
    }
}

impl From<GridError> for BarrierError {
    fn from(e: GridError) -> Self {
        BarrierError::Grid(e)
    }
}

/// An explicit barrier profile. `x0` is the center in the grid coordinate
/// (radius 0 for balls, an endpoint or interior point for intervals).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierSpec {
    /// v_{q,C}(x) = C|x−x₀|^{2/(1−q)}, q < 1.
    VProfile { q: f64, c: f64, x0: f64 },
    /// u_{β,m,C}(x) = C^{1/m}|x−x₀|^{2/(m+β)}.
    UStationary { c: f64, x0: f64 },
    /// y(t) = [θ^{1−q} − λ(1−q)(t−t₀)]₊^{1/(1−q)}.
    YOde { q: f64, theta: f64, lambda: f64, t0: f64 },
    /// z(t) = [θ^{(m+β)/m} − λ(m+β)/m (t−t₀)]₊^{m/(m+β)}.
    ZOde { theta: f64, lambda: f64, t0: f64 },
    /// U(t,x) = [v_{q,C}(x) + y(t)ᵐ]^{1/m}; supersolution for μ = 2λ when
    /// C ≤ K_{N,q,λ}.
    USuper { q: f64, c: f64, theta: f64, lambda: f64, t0: f64, x0: f64 },
    /// W(t,x) = [u_{β,m,C}(x)ᵐ + z(t)ᵐ]^{1/m} with the internal λ pinned to
    /// 1/2; subsolution of the singular equation when C ≥ K_{N,q,1/2}.
    WSub { c: f64, theta: f64, t0: f64, x0: f64 },
}

impl BarrierSpec {
    /// Validates the side conditions that the comparison arguments need.
    pub fn validate(&self, params: &ModelParams) -> Result<(), BarrierError> {
        match *self {
            BarrierSpec::VProfile { q, c, .. } => {
                if !(q < 1.0) || !(c > 0.0) {
                    return Err(BarrierError::Param(ParamError::InvalidParameter(
                        "need q < 1 and C > 0",
                    )));
                }
            }
            BarrierSpec::UStationary { c, .. } => {
                if !(c > 0.0) {
                    return Err(BarrierError::Param(ParamError::InvalidParameter("C > 0")));
                }
            }
            BarrierSpec::YOde { q, theta, lambda, t0 } => {
                if !(q < 1.0) || theta < 0.0 || !(lambda > 0.0) || t0 < 0.0 {
                    return Err(BarrierError::Param(ParamError::InvalidParameter(
                        "need q < 1, theta >= 0, lambda > 0, t0 >= 0",
                    )));
                }
            }
            BarrierSpec::ZOde { theta, lambda, t0 } => {
                if theta < 0.0 || !(lambda > 0.0) || t0 < 0.0 {
                    return Err(BarrierError::Param(ParamError::InvalidParameter(
                        "need theta >= 0, lambda > 0, t0 >= 0",
                    )));
                }
            }
            BarrierSpec::USuper { q, c, theta, lambda, t0, .. } => {
                if !(q < 1.0) || !(c > 0.0) || theta < 0.0 || !(lambda > 0.0) || t0 < 0.0 {
                    return Err(BarrierError::Param(ParamError::InvalidParameter(
                        "need q < 1, C > 0, theta >= 0, lambda > 0, t0 >= 0",
                    )));
                }
                let k = general_barrier_constant(params.n_dim(), q, lambda)?;
                if c > k {
                    return Err(BarrierError::CoefficientOutOfRange { c, k });
                }
            }
            BarrierSpec::WSub { c, theta, t0, .. } => {
                if !(c > 0.0) || theta < 0.0 || t0 < 0.0 {
                    return Err(BarrierError::Param(ParamError::InvalidParameter(
                        "need C > 0, theta >= 0, t0 >= 0",
                    )));
                }
                let q = -params.beta() / params.m();
                let k = general_barrier_constant(params.n_dim(), q, 0.5)?;
                if c < k {
                    return Err(BarrierError::CoefficientOutOfRange { c, k });
                }
            }
        }
        Ok(())
    }

    /// Closed-form value at (t, x).
    pub fn eval(&self, t: f64, x: f64, params: &ModelParams) -> f64 {
        let m = params.m();
        let beta = params.beta();
        match *self {
            BarrierSpec::VProfile { q, c, x0 } => c * (x - x0).abs().powf(2.0 / (1.0 - q)),
            BarrierSpec::UStationary { c, x0 } => {
                c.powf(1.0 / m) * (x - x0).abs().powf(2.0 / (m + beta))
            }
            BarrierSpec::YOde { q, theta, lambda, t0 } => {
                y_ode(q, theta, lambda, t0, t)
            }
            BarrierSpec::ZOde { theta, lambda, t0 } => {
                let p = (m + beta) / m;
                let core = theta.powf(p) - lambda * p * (t - t0);
                core.max(0.0).powf(1.0 / p)
            }
            BarrierSpec::USuper { q, c, theta, lambda, t0, x0 } => {
                let v = c * (x - x0).abs().powf(2.0 / (1.0 - q));
                let y = y_ode(q, theta, lambda, t0, t);
                (v + y.powf(m)).powf(1.0 / m)
            }
            BarrierSpec::WSub { c, theta, t0, x0 } => {
                let um = c * (x - x0).abs().powf(2.0 * m / (m + beta));
                let p = (m + beta) / m;
                let z = (theta.powf(p) - 0.5 * p * (t - t0)).max(0.0).powf(1.0 / p);
                (um + z.powf(m)).powf(1.0 / m)
            }
        }
    }

    /// Samples the barrier at time `t` on every node of `grid`.
    pub fn sample(&self, t: f64, grid: &Arc<Grid>, params: &ModelParams) -> Result<Field, GridError> {
        let values: Vec<f64> = grid
            .node_coords()
            .iter()
            .map(|&x| self.eval(t, x, params).max(0.0))
            .collect();
        Field::new(grid.clone(), values, t)
    }
}

fn y_ode(q: f64, theta: f64, lambda: f64, t0: f64, t: f64) -> f64 {
    let p = 1.0 - q;
    let core = theta.powf(p) - lambda * p * (t - t0);
    core.max(0.0).powf(1.0 / p)
}

/// Residual report of the stationary profile under the discrete operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryResidual {
    /// λC^{−β/m} − 2m(N(m+β)−2β)·C/(m+β)²; zero exactly at C = K.
    pub analytic_coeff: f64,
    /// sup over interior nodes outside the collar of
    /// |−L_h(uᵐ) + λu^{−β} − analytic_coeff·r^{−2β/(m+β)}|.
    pub discrete_sup_residual: f64,
}

/// The analytic residual coefficient of the stationary profile.
pub fn stationary_coeff(params: &ModelParams, c: f64) -> f64 {
    let (m, beta, n) = (params.m(), params.beta(), params.n_dim() as f64);
    params.lambda() * c.powf(-beta / m)
        - 2.0 * m * (n * (m + beta) - 2.0 * beta) * c / ((m + beta) * (m + beta))
}

/// Evaluates the stationary profile's residual on `grid`, excluding nodes
/// within `collar` of the singular center (default 3h when `None`). The
/// profile center must be the ball center or an interval endpoint.
pub fn stationary_residual(
    c: f64,
    x0: f64,
    grid: &Arc<Grid>,
    params: &ModelParams,
    collar: Option<f64>,
) -> Result<StationaryResidual, BarrierError> {
    if !(c > 0.0) {
        return Err(BarrierError::Param(ParamError::InvalidParameter("C > 0")));
    }
    match grid.domain() {
        Domain::Ball { .. } => {
            if x0 != 0.0 {
                return Err(BarrierError::UnsupportedCenter);
            }
        }
        Domain::Interval { a, b } => {
            if x0 != a && x0 != b {
                return Err(BarrierError::UnsupportedCenter);
            }
        }
    }
    let (m, beta) = (params.m(), params.beta());
    let lam = params.lambda();
    let spec = BarrierSpec::UStationary { c, x0 };
    let profile = spec.sample(0.0, grid, params)?;
    let lap = laplacian_of_power(&profile, m);
    let coeff = stationary_coeff(params, c);
    let collar = collar.unwrap_or(3.0 * grid.h());
    let mut sup = 0.0f64;
    for i in grid.evolving_range() {
        let r = (grid.node_coords()[i] - x0).abs();
        if r <= collar {
            continue;
        }
        let u = profile.values()[i];
        let resid =
            -lap.values()[i] + lam * u.powf(-beta) - coeff * r.powf(-2.0 * beta / (m + beta));
        sup = sup.max(resid.abs());
    }
    Ok(StationaryResidual { analytic_coeff: coeff, discrete_sup_residual: sup })
}

/// Pointwise sign of −L_h(uᵐ) + λu^{−β} at the interior nodes away from the
/// center (where the profile vanishes and the χ convention applies).
/// Returns (all positive, all negative).
pub fn stationary_sign_check(
    c: f64,
    x0: f64,
    grid: &Arc<Grid>,
    params: &ModelParams,
) -> Result<(bool, bool), BarrierError> {
    let spec = BarrierSpec::UStationary { c, x0 };
    let profile = spec.sample(0.0, grid, params)?;
    let lap = laplacian_of_power(&profile, params.m());
    let lam = params.lambda();
    let beta = params.beta();
    let mut all_pos = true;
    let mut all_neg = true;
    for i in grid.evolving_range() {
        if (grid.node_coords()[i] - x0).abs() == 0.0 {
            continue;
        }
        let val = -lap.values()[i] + lam * profile.values()[i].powf(-beta);
        if val <= 0.0 {
            all_pos = false;
        }
        if val >= 0.0 {
            all_neg = false;
        }
    }
    Ok((all_pos, all_neg))
}

/// Barrier-derived upper bound for the complete quenching time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchBound {
    /// t₀ + θ^{1−q}/(λ(1−q)) with θ = sup u₀.
    pub tau_barrier: f64,
    /// λ = sup_u0^{−(q+β)}/2, the barrier decay rate.
    pub lambda_used: f64,
    /// μ = 2λ, the strong-absorption coefficient dominated by u^{−β} on
    /// (0, sup u₀].
    pub mu_used: f64,
}

/// The U-barrier quenching bound: u^{−β} ≥ μ u^q on (0, M] with
/// μ = M^{−(q+β)}, so the solution is dominated by the extinction ODE with
/// rate λ = μ/2. Requires q ∈ (0, 1) and sup_u0 > 0 (θ = 0 returns t₀).
pub fn quench_bounds(params: &ModelParams, sup_u0: f64, q: f64) -> Result<QuenchBound, ParamError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(ParamError::InvalidParameter("q must be in (0, 1)"));
    }
    if sup_u0 < 0.0 {
        return Err(ParamError::InvalidParameter("sup_u0 must be >= 0"));
    }
    if sup_u0 == 0.0 {
        return Ok(QuenchBound { tau_barrier: 0.0, lambda_used: f64::INFINITY, mu_used: f64::INFINITY });
    }
    let lambda = sup_u0.powf(-(q + params.beta())) / 2.0;
    let tau = sup_u0.powf(1.0 - q) / (lambda * (1.0 - q));
    Ok(QuenchBound { tau_barrier: tau, lambda_used: lambda, mu_used: 2.0 * lambda })
}

/// Positivity horizon 2m θ^{(m+β)/m}/(m+β): solutions dominating the W
/// barrier with this θ stay strictly positive below this time.
pub fn positivity_bound(params: &ModelParams, theta: f64) -> f64 {
    let (m, beta) = (params.m(), params.beta());
    2.0 * m * theta.powf((m + beta) / m) / (m + beta)
}

/// The two printed thresholds for the dead-core radius around x₀, which use
/// different exponent notations for the same quantity; `required` keeps the
/// weaker (larger) of the two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeadCoreRadii {
    /// K^{−2/(1−q)} with q = −β/m.
    pub reciprocal_variant: f64,
    /// K^{−(m+β)/(2m)}.
    pub profile_variant: f64,
    pub required: f64,
}

/// Minimal boundary distance of x₀ for the local dead-core comparison.
pub fn dead_core_radius(params: &ModelParams) -> Result<DeadCoreRadii, ParamError> {
    let k = params.stationary_constant()?;
    let (m, beta) = (params.m(), params.beta());
    let q = -beta / m;
    let reciprocal_variant = k.powf(-2.0 / (1.0 - q));
    let profile_variant = k.powf(-(m + beta) / (2.0 * m));
    Ok(DeadCoreRadii {
        reciprocal_variant,
        profile_variant,
        required: reciprocal_variant.max(profile_variant),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Domain, Grid};

    fn params_15() -> ModelParams {
        ModelParams::unit_lambda(1.0, 0.5, 2).unwrap()
    }

    #[test]
    fn y_ode_values() {
        let p = ModelParams::unit_lambda(1.0, 1.0, 2).unwrap();
        let y = BarrierSpec::YOde { q: 0.0, theta: 1.0, lambda: 1.0, t0: 0.0 };
        assert!((y.eval(0.5, 0.0, &p) - 0.5).abs() < 1e-15);
        assert_eq!(y.eval(1.0, 0.0, &p), 0.0);
        assert_eq!(y.eval(2.0, 0.0, &p), 0.0);
    }

    #[test]
    fn stationary_profile_value() {
        let p = ModelParams::unit_lambda(1.0, 1.0, 2).unwrap();
        let u = BarrierSpec::UStationary { c: 1.0, x0: 0.0 };
        assert!((u.eval(0.0, 1.0, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn usuper_at_center_is_theta() {
        let p = ModelParams::unit_lambda(1.0, 0.5, 2).unwrap();
        let u = BarrierSpec::USuper { q: 0.5, c: 0.001, theta: 1.0, lambda: 1.0, t0: 0.0, x0: 0.0 };
        assert!((u.eval(0.0, 0.0, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn usuper_coefficient_validation() {
        let p = ModelParams::unit_lambda(1.0, 0.5, 2).unwrap();
        let k = general_barrier_constant(2, 0.5, 1.0).unwrap();
        let ok = BarrierSpec::USuper { q: 0.5, c: k * 0.9, theta: 1.0, lambda: 1.0, t0: 0.0, x0: 0.0 };
        assert!(ok.validate(&p).is_ok());
        let bad = BarrierSpec::USuper { q: 0.5, c: k * 1.1, theta: 1.0, lambda: 1.0, t0: 0.0, x0: 0.0 };
        assert!(matches!(bad.validate(&p), Err(BarrierError::CoefficientOutOfRange { .. })));
    }

    #[test]
    fn wsub_coefficient_validation() {
        let p = params_15();
        let q = -p.beta() / p.m();
        let k = general_barrier_constant(2, q, 0.5).unwrap();
        let ok = BarrierSpec::WSub { c: k * 1.5, theta: 0.5, t0: 0.0, x0: 0.0 };
        assert!(ok.validate(&p).is_ok());
        let bad = BarrierSpec::WSub { c: k * 0.5, theta: 0.5, t0: 0.0, x0: 0.0 };
        assert!(matches!(bad.validate(&p), Err(BarrierError::CoefficientOutOfRange { .. })));
    }

    #[test]
    fn stationary_residual_zero_coeff_at_k() {
        let p = params_15();
        let k = p.stationary_constant().unwrap();
        assert!(stationary_coeff(&p, k).abs() < 1e-14);
        assert!(stationary_coeff(&p, k / 2.0) > 0.0);
        assert!(stationary_coeff(&p, 2.0 * k) < 0.0);
    }

    #[test]
    fn stationary_residual_refines() {
        let p = params_15();
        let k = p.stationary_constant().unwrap();
        let collar = 3.0 / 64.0;
        let mut sups = Vec::new();
        for n in [64usize, 128, 256] {
            let g = Grid::uniform(Domain::Ball { radius: 1.0, n_dim: 2 }, n).unwrap();
            let r = stationary_residual(k, 0.0, &g, &p, Some(collar)).unwrap();
            assert!(r.analytic_coeff.abs() < 1e-14);
            sups.push(r.discrete_sup_residual);
        }
        assert!(sups[0] > sups[1] && sups[1] > sups[2], "{sups:?}");
    }

    #[test]
    fn stationary_signs() {
        let p = params_15();
        let k = p.stationary_constant().unwrap();
        let g = Grid::uniform(Domain::Ball { radius: 1.0, n_dim: 2 }, 128).unwrap();
        let (pos, _) = stationary_sign_check(k / 2.0, 0.0, &g, &p).unwrap();
        assert!(pos);
        let (_, neg) = stationary_sign_check(2.0 * k, 0.0, &g, &p).unwrap();
        assert!(neg);
    }

    #[test]
    fn residual_rejects_offset_center() {
        let p = params_15();
        let g = Grid::uniform(Domain::Ball { radius: 1.0, n_dim: 2 }, 32).unwrap();
        assert!(matches!(
            stationary_residual(1.0, 0.5, &g, &p, None),
            Err(BarrierError::UnsupportedCenter)
        ));
    }

    #[test]
    fn quench_bound_values() {
        let p = params_15();
        let qb = quench_bounds(&p, 1.0, 0.5).unwrap();
        assert!((qb.lambda_used - 0.5).abs() < 1e-15);
        assert!((qb.tau_barrier - 4.0).abs() < 1e-12);

        let zero = quench_bounds(&p, 0.0, 0.5).unwrap();
        assert_eq!(zero.tau_barrier, 0.0);
    }

    #[test]
    fn quench_bound_scaling_in_sup() {
        // Doubling sup multiplies tau by 2^{1+beta}.
        let p = params_15();
        let q = 0.5;
        let a = quench_bounds(&p, 0.7, q).unwrap();
        let b = quench_bounds(&p, 1.4, q).unwrap();
        let expected = 2.0f64.powf(1.0 + p.beta()) * a.tau_barrier;
        assert!((b.tau_barrier - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn positivity_bound_values() {
        let p1 = ModelParams::unit_lambda(1.0, 1.0, 2).unwrap();
        assert_eq!(positivity_bound(&p1, 0.0), 0.0);
        assert!((positivity_bound(&p1, 1.0) - 1.0).abs() < 1e-15);
        let p2 = params_15();
        assert!((positivity_bound(&p2, 0.5) - 0.471_404_520_791_031_7).abs() < 1e-12);
    }

    #[test]
    fn y_ode_matches_adaptive_integrator() {
        // Independent oracle: RK4 with adaptive halving on y' = -lambda y^q.
        let (q, theta, lambda, t0) = (0.35, 0.8, 1.3, 0.1);
        let p = params_15();
        let spec = BarrierSpec::YOde { q, theta, lambda, t0 };
        let f = |y: f64| -lambda * y.max(0.0).powf(q);
        let extinction = t0 + theta.powf(1.0 - q) / (lambda * (1.0 - q));
        let mut t = t0;
        let mut y = theta;
        let t_stop = extinction - 1e-3;
        let mut h = 1e-6;
        while t < t_stop {
            h = h.min(t_stop - t);
            let full = rk4(y, h, f);
            let half = rk4(rk4(y, h / 2.0, f), h / 2.0, f);
            if (full - half).abs() < 1e-12 {
                y = half;
                t += h;
                h *= 1.5;
            } else {
                h *= 0.5;
            }
        }
        let closed = spec.eval(t, 0.0, &p);
        assert!((closed - y).abs() < 1e-8, "closed {closed} vs integrated {y}");
    }

    fn rk4(y: f64, h: f64, f: impl Fn(f64) -> f64) -> f64 {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    }

    #[test]
    fn dead_core_radii_ordering() {
        let p = ModelParams::unit_lambda(1.0, 0.5, 1).unwrap();
        let r = dead_core_radius(&p).unwrap();
        assert!(r.required >= r.reciprocal_variant && r.required >= r.profile_variant);
    }
}
