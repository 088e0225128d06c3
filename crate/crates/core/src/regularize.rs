//! The globally Lipschitz regularization g_ε of the singular absorption
//! s^{−β}, and the truncations T_δ, S_δ used by the gradient-convergence
//! metric.
//!
//! g_ε(s) = s^{−β} ψ(s/ε) with a smoothstep ψ that vanishes below 1 and
//! equals 1 above 2, so g_ε(s) = 0 for s ≤ ε and g_ε(s) = s^{−β} for
//! s ≥ 2ε. Smaller ε means a larger absorption: g_{ε₁} ≥ g_{ε₂} pointwise
//! for ε₁ < ε₂.

#[allow(unused_imports)]
use num_traits::Float;

/// C² smoothstep: 0 on (−∞, 1], 1 on [2, ∞), the quintic p(t) = t³(10−15t+6t²)
/// shifted to (1, 2) in between.
pub fn psi(s: f64) -> f64 {
    if s <= 1.0 {
        0.0
    } else if s >= 2.0 {
        1.0
    } else {
        let t = s - 1.0;
        t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// dψ/ds; 30t²(1−t)² on the transition.
pub fn psi_prime(s: f64) -> f64 {
    if s <= 1.0 || s >= 2.0 {
        0.0
    } else {
        let t = s - 1.0;
        30.0 * t * t * (1.0 - t) * (1.0 - t)
    }
}

/// The regularized absorption g_ε for a fixed (ε, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedAbsorption {
    eps: f64,
    beta: f64,
}

impl RegularizedAbsorption {
    /// Requires ε > 0 and β > 0.
    pub fn new(eps: f64, beta: f64) -> Option<Self> {
        (eps > 0.0 && eps.is_finite() && beta > 0.0 && beta.is_finite())
            .then_some(Self { eps, beta })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// g_ε(s) = s^{−β} ψ(s/ε) for s > 0, and 0 at s = 0 (the χ_{u>0}
    /// normalization).
    pub fn g(&self, s: f64) -> f64 {
        if s <= self.eps {
            return 0.0;
        }
        if s >= 2.0 * self.eps {
            return s.powf(-self.beta);
        }
        s.powf(-self.beta) * psi(s / self.eps)
    }

    /// dg_ε/ds where defined; used by the implicit transition solve.
    pub fn g_prime(&self, s: f64) -> f64 {
        if s <= self.eps {
            return 0.0;
        }
        if s >= 2.0 * self.eps {
            return -self.beta * s.powf(-self.beta - 1.0);
        }
        -self.beta * s.powf(-self.beta - 1.0) * psi(s / self.eps)
            + s.powf(-self.beta) * psi_prime(s / self.eps) / self.eps
    }

    /// Closed-form bound on the absorption potential
    /// G_ε(r) = m ∫₀^r s^{m−1} g_ε(s) ds ≤ m r^{m−β}/(m−β), valid for β < m.
    pub fn potential_bound(&self, m: f64, r: f64) -> f64 {
        m * r.powf(m - self.beta) / (m - self.beta)
    }
}

/// T_δ clamps to ±δ; S_δ is its antiderivative from 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub t_delta: f64,
    pub s_delta: f64,
}

/// Evaluates T_δ(s) and S_δ(s) for δ > 0.
pub fn truncations(delta: f64, s: f64) -> Truncation {
    debug_assert!(delta > 0.0);
    let t_delta = s.clamp(-delta, delta);
    let a = s.abs();
    let s_delta = if a < delta {
        0.5 * s * s
    } else {
        0.5 * delta * delta + delta * (a - delta)
    };
    Truncation { t_delta, s_delta }
}
