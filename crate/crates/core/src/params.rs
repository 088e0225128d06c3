//! Equation parameters, regime classification, and explicit constants.
//!
//! The equation ∂ₜu − Δuᵐ + λu^{−β}χ_{u>0} = 0 is governed by the tuple
//! (m, β, N, λ). Several of the provable estimates only hold on parameter
//! windows; [`ModelParams::classify`] evaluates all of them, and the
//! remaining functions evaluate the explicit constants that appear in the
//! gradient estimates and in the stationary profiles.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

/// Errors from parameter validation and constant evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    /// A field violates the basic invariants (m ≥ 1, β > 0, N ≥ 1, λ > 0).
    InvalidParameter(&'static str),
    /// β sits outside the open window where Δ_{m,N} − (β+1−m)² > 0, so the
    /// denominator of the universal gradient constant vanishes or turns
    /// negative.
    BetaOutsideWindow,
    /// The universal gradient constant requires β + m ≤ 2.
    RegimeNotApplicable,
    /// N(m+β) − 2β ≤ 0 (or the general-q analogue): the stationary constant
    /// degenerates, which happens e.g. for N = 1 with β ≥ m.
    DegenerateConstant,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            ParamError::BetaOutsideWindow => write!(f, "beta outside the admissible open window"),
            ParamError::RegimeNotApplicable => write!(f, "regime requires beta + m <= 2"),
            ParamError::DegenerateConstant => write!(f, "stationary constant degenerates"),
        }
    }
}

impl core::error::Error for ParamError {}

/// The tuple (m, β, N, λ): diffusion exponent, absorption exponent, space
/// dimension, and absorption scale. Validated at construction; all
/// operations on it are pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    m: f64,
    beta: f64,
    n_dim: u32,
    lambda: f64,
}

impl ModelParams {
    /// Validates and builds the parameter set.
    ///
    /// Requires m ≥ 1, β > 0, N ≥ 1, λ > 0. Values m > 2 are only accepted
    /// for N = 1 (the diffusion-dominated 1D branch); for N ≥ 2 every
    /// proved estimate already requires m < 1 + 1/√(N−1) ≤ 2.
    pub fn new(m: f64, beta: f64, n_dim: u32, lambda: f64) -> Result<Self, ParamError> {
        if !m.is_finite() || m < 1.0 {
            return Err(ParamError::InvalidParameter("m must be finite and >= 1"));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(ParamError::InvalidParameter("beta must be finite and > 0"));
        }
        if n_dim < 1 {
            return Err(ParamError::InvalidParameter("n_dim must be >= 1"));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(ParamError::InvalidParameter("lambda must be finite and > 0"));
        }
        if m > 2.0 && n_dim >= 2 {
            return Err(ParamError::InvalidParameter(
                "m > 2 is only supported for n_dim = 1",
            ));
        }
        Ok(Self { m, beta, n_dim, lambda })
    }

    /// Same as [`ModelParams::new`] with λ = 1.
    pub fn unit_lambda(m: f64, beta: f64, n_dim: u32) -> Result<Self, ParamError> {
        Self::new(m, beta, n_dim, 1.0)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_dim(&self) -> u32 {
        self.n_dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// γ = 2/(m+β); the gradient estimates control ∇u^{1/γ}.
    pub fn gamma(&self) -> f64 {
        2.0 / (self.m + self.beta)
    }

    /// Δ_{m,N} = 1 − (N−1)(m−1)².
    pub fn delta_mn(&self) -> f64 {
        1.0 - (self.n_dim as f64 - 1.0) * (self.m - 1.0) * (self.m - 1.0)
    }

    /// Evaluates every hypothesis window for these parameters.
    pub fn classify(&self) -> RegimeReport {
        let (m, beta, n) = (self.m, self.beta, self.n_dim as f64);
        let delta = self.delta_mn();
        let m_n_window = if self.n_dim == 1 {
            true
        } else {
            m < 1.0 + 1.0 / (n - 1.0).sqrt()
        };
        let beta_in_window = if delta > 0.0 {
            let sqrt_d = delta.sqrt();
            let lo = (m - 1.0 - sqrt_d).max(0.0);
            let hi = m - 1.0 + sqrt_d;
            beta > lo && beta < hi
        } else {
            false
        };
        RegimeReport {
            absorption_dominates: m < 2.0 + beta,
            delta_mn: delta,
            m_n_window,
            beta_in_window,
            universal_bound_applicable: beta_in_window && beta + m <= 2.0,
            diffusion_dominates_1d: self.n_dim == 1 && m >= beta + 2.0,
            beta_lt_m: beta < m,
        }
    }

    /// The universal gradient constant
    /// (m+β)√(2+β−m) / √(2m(Δ_{m,N} − (β+1−m)²)) that bounds
    /// ‖∇u^{(m+β)/2}‖_∞ whenever the initial slope already sits below it.
    pub fn universal_gradient_constant(&self) -> Result<f64, ParamError> {
        let (m, beta) = (self.m, self.beta);
        if beta + m > 2.0 {
            return Err(ParamError::RegimeNotApplicable);
        }
        let gap = self.delta_mn() - (beta + 1.0 - m) * (beta + 1.0 - m);
        if gap <= 0.0 {
            return Err(ParamError::BetaOutsideWindow);
        }
        Ok((m + beta) * (2.0 + beta - m).sqrt() / (2.0 * m * gap).sqrt())
    }

    /// K_{N,m,β,λ} = [λ(m+β)² / (2m(N(m+β)−2β))]^{m/(m+β)}: the coefficient
    /// for which C^{1/m}|x−x₀|^{2/(m+β)} solves −Δuᵐ + λu^{−β} = 0 exactly.
    pub fn stationary_constant(&self) -> Result<f64, ParamError> {
        let (m, beta, n) = (self.m, self.beta, self.n_dim as f64);
        let den = 2.0 * m * (n * (m + beta) - 2.0 * beta);
        if den <= 0.0 {
            return Err(ParamError::DegenerateConstant);
        }
        let base = self.lambda * (m + beta) * (m + beta) / den;
        Ok(base.powf(m / (m + beta)))
    }

    /// The λ that renormalizes the stationary constant to K = 1, so that
    /// the profile |x−x₀|^{2/(m+β)} has boundary trace uᵐ = 1 on the unit
    /// ball.
    pub fn lambda_for_unit_stationary(&self) -> Result<f64, ParamError> {
        let (m, beta, n) = (self.m, self.beta, self.n_dim as f64);
        let den = 2.0 * m * (n * (m + beta) - 2.0 * beta);
        if den <= 0.0 {
            return Err(ParamError::DegenerateConstant);
        }
        Ok(den / ((m + beta) * (m + beta)))
    }
}

/// K_{N,q,λ} = [λ(1−q)² / (2(N(1−q)+2q))]^{1/(1−q)} for the general profile
/// C|x−x₀|^{2/(1−q)} against −Δv + λv^q. Substituting q = −β/m recovers
/// [`ModelParams::stationary_constant`].
pub fn general_barrier_constant(n_dim: u32, q: f64, lambda: f64) -> Result<f64, ParamError> {
    if !(q < 1.0) {
        return Err(ParamError::InvalidParameter("q must be < 1"));
    }
    if n_dim < 1 {
        return Err(ParamError::InvalidParameter("n_dim must be >= 1"));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(ParamError::InvalidParameter("lambda must be finite and > 0"));
    }
    let n = n_dim as f64;
    let den = 2.0 * (n * (1.0 - q) + 2.0 * q);
    if den <= 0.0 {
        return Err(ParamError::DegenerateConstant);
    }
    Ok((lambda * (1.0 - q) * (1.0 - q) / den).powf(1.0 / (1.0 - q)))
}

/// Where the parameters sit relative to every hypothesis window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    /// 1 ≤ m < 2+β: the absorption dominates the nonlinear diffusion.
    pub absorption_dominates: bool,
    /// Δ_{m,N} = 1 − (N−1)(m−1)²; equals 1 whenever m = 1.
    pub delta_mn: f64,
    /// m < 1 + 1/√(N−1); vacuously true for N = 1.
    pub m_n_window: bool,
    /// β ∈ ((m−1−√Δ)₊, m−1+√Δ), open on both ends.
    pub beta_in_window: bool,
    /// The universal sup bound on ∇u^{(m+β)/2} applies: window + β+m ≤ 2.
    pub universal_bound_applicable: bool,
    /// N = 1 and m ≥ β+2: the 1D diffusion-dominated branch.
    pub diffusion_dominates_1d: bool,
    /// β < m.
    pub beta_lt_m: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ModelParams::new(0.9, 0.5, 1, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1, 1.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, 0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, 1, 0.0).is_err());
        assert!(ModelParams::new(2.5, 0.5, 2, 1.0).is_err());
        assert!(ModelParams::new(2.5, 0.6, 1, 1.0).is_ok());
    }

    #[test]
    fn classify_m1_gives_delta_one_for_every_dimension() {
        let p = ModelParams::unit_lambda(1.0, 0.5, 5).unwrap();
        let rep = p.classify();
        assert_eq!(rep.delta_mn, 1.0);
        assert!(rep.m_n_window);
        assert!(rep.beta_in_window);
        assert!(rep.absorption_dominates);
    }

    #[test]
    fn classify_window_arithmetic() {
        // Delta = 1 - (2-1)(0.5)^2 = 0.75, window (0, 0.5 + sqrt(0.75))
        let p = ModelParams::unit_lambda(1.5, 0.6, 2).unwrap();
        let rep = p.classify();
        assert!((rep.delta_mn - 0.75).abs() < 1e-15);
        assert!(rep.beta_in_window);
        assert!(rep.absorption_dominates);
        assert!(rep.m_n_window);
    }

    #[test]
    fn classify_diffusion_dominated_1d() {
        let p = ModelParams::unit_lambda(3.0, 0.5, 1).unwrap();
        let rep = p.classify();
        assert!(rep.diffusion_dominates_1d);
        assert!(!rep.absorption_dominates);
    }

    #[test]
    fn universal_constant_matches_formula() {
        let p = ModelParams::unit_lambda(1.0, 0.5, 2).unwrap();
        assert!((p.universal_gradient_constant().unwrap() - 1.5).abs() < 1e-12);

        let p = ModelParams::unit_lambda(1.0, 0.8, 2).unwrap();
        let c = p.universal_gradient_constant().unwrap();
        assert!((c - 2.846_049_894_151_542).abs() < 1e-12);
    }

    #[test]
    fn universal_constant_rejects_window_boundary() {
        // beta = 1 sits at the closed end of the window for m = 1, N = 2:
        // (beta+1-m)^2 = 1 = Delta, so the denominator vanishes.
        let p = ModelParams::unit_lambda(1.0, 1.0, 2).unwrap();
        assert_eq!(p.universal_gradient_constant(), Err(ParamError::BetaOutsideWindow));
    }

    #[test]
    fn universal_constant_requires_small_beta_plus_m() {
        let p = ModelParams::unit_lambda(1.2, 0.9, 1).unwrap();
        assert_eq!(p.universal_gradient_constant(), Err(ParamError::RegimeNotApplicable));
    }

    #[test]
    fn stationary_constant_values() {
        let p = ModelParams::new(1.0, 1.0, 2, 1.0).unwrap();
        assert!((p.stationary_constant().unwrap() - 1.0).abs() < 1e-15);

        let p = ModelParams::new(1.0, 0.5, 2, 1.0).unwrap();
        assert!((p.stationary_constant().unwrap() - 0.681_420_222_312_052_3).abs() < 1e-12);

        let p = ModelParams::new(1.0, 1.0, 1, 1.0).unwrap();
        assert_eq!(p.stationary_constant(), Err(ParamError::DegenerateConstant));
    }

    #[test]
    fn general_constant_values_and_consistency() {
        assert!((general_barrier_constant(1, 0.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((general_barrier_constant(2, -1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);

        // q = -beta/m must recover the stationary constant.
        let p = ModelParams::new(1.0, 1.0, 2, 1.0).unwrap();
        let k = p.stationary_constant().unwrap();
        let kg = general_barrier_constant(2, -1.0, 1.0).unwrap();
        assert!((k - kg).abs() < 1e-14);
    }

    #[test]
    fn lambda_renormalization_gives_unit_constant() {
        let p = ModelParams::unit_lambda(1.0, 0.5, 2).unwrap();
        let lam = p.lambda_for_unit_stationary().unwrap();
        assert!((lam - 16.0 / 9.0).abs() < 1e-14);
        let renorm = ModelParams::new(1.0, 0.5, 2, lam).unwrap();
        assert!((renorm.stationary_constant().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn universal_constant_monotone_in_beta_for_m1() {
        // On (0, 1) for m = 1, N = 2 the constant increases with beta.
        let mut prev = 0.0;
        for i in 1..20 {
            let beta = i as f64 * 0.05;
            let p = ModelParams::unit_lambda(1.0, beta, 2).unwrap();
            let c = p.universal_gradient_constant().unwrap();
            assert!(c > prev, "not monotone at beta = {beta}");
            prev = c;
        }
    }

    proptest! {
        #[test]
        fn classify_is_pure(m in 1.0f64..1.9, beta in 0.05f64..2.0, n in 1u32..5) {
            if let Ok(p) = ModelParams::unit_lambda(m, beta, n) {
                let a = p.classify();
                let b = p.classify();
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn stationary_constant_lambda_scaling(
            m in 1.0f64..1.8, beta in 0.05f64..1.5, lam in 0.1f64..10.0
        ) {
            let p1 = ModelParams::new(m, beta, 2, lam);
            let p2 = ModelParams::new(m, beta, 2, 2.0 * lam);
            if let (Ok(p1), Ok(p2)) = (p1, p2) {
                if let (Ok(k1), Ok(k2)) = (p1.stationary_constant(), p2.stationary_constant()) {
                    let expected = 2.0f64.powf(m / (m + beta)) * k1;
                    prop_assert!((k2 - expected).abs() <= 1e-12 * expected.abs().max(1.0));
                }
            }
        }

        #[test]
        fn beta_window_implies_positive_gap(m in 1.0f64..1.9, beta in 0.05f64..2.5, n in 1u32..5) {
            if let Ok(p) = ModelParams::unit_lambda(m, beta, n) {
                let rep = p.classify();
                if rep.beta_in_window {
                    prop_assert!(rep.delta_mn > (beta + 1.0 - m).powi(2));
                }
            }
        }
    }
}
