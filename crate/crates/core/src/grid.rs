//! Spatial discretization: 1D intervals and radially symmetric balls on
//! uniform node-centered grids, with the discrete differential operators
//! and norms used everywhere else.
//!
//! The Laplacian is assembled in flux (finite-volume) form,
//!
//! ```text
//! (L v)_i = [ A_{i+1/2} (v_{i+1}−v_i)/h − A_{i−1/2} (v_i−v_{i−1})/h ] / w_i,
//! ```
//!
//! with face areas A = r^{N−1} and exact cell volumes w_i = ∫ r^{N−1} dr.
//! This form is self-adjoint with respect to the volume weights, which makes
//! the discrete L¹_ζ accounting exact, and at r = 0 it reduces to the
//! symmetric form 2N(v₁−v₀)/h².

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

/// Errors from grid construction and grid-bound operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridError {
    /// Domain bounds are inverted, empty, or not finite.
    InvalidDomain,
    /// Too few cells for the requested operation (tridiagonal solves need
    /// at least 2).
    SingularSystem,
    /// Field values must be finite and nonnegative.
    InvalidFieldValues,
    /// Two fields or a field and a weight live on different grids.
    GridMismatch,
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::InvalidDomain => write!(f, "invalid domain"),
            GridError::SingularSystem => write!(f, "grid too coarse: singular system"),
            GridError::InvalidFieldValues => write!(f, "field values must be finite and >= 0"),
            GridError::GridMismatch => write!(f, "operands live on different grids"),
        }
    }
}

impl core::error::Error for GridError {}

/// The spatial domain: an interval (a, b) or a ball of radius R in N
/// dimensions reduced to its radial coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Ball { radius: f64, n_dim: u32 },
}

impl Domain {
    fn span(&self) -> f64 {
        match self {
            Domain::Interval { a, b } => b - a,
            Domain::Ball { radius, .. } => *radius,
        }
    }

    /// Spatial dimension carried by the domain (1 for intervals).
    pub fn n_dim(&self) -> u32 {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Ball { n_dim, .. } => *n_dim,
        }
    }
}

/// A uniform node-centered grid over a [`Domain`].
///
/// Nodes are x_i = a + i·h (interval) or r_i = i·h (ball), i = 0..=n_cells.
/// For intervals both end nodes are boundary nodes; for balls only the
/// outer node is (r = 0 is the symmetry axis and evolves).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    domain: Domain,
    n_cells: usize,
    h: f64,
    nodes: Vec<f64>,
    /// Exact cell volumes ∫ r^{N−1} dr over each node's cell.
    weights: Vec<f64>,
    /// Face areas r_{i−1/2}^{N−1}; entry i is the face between nodes i−1
    /// and i, i = 1..=n_cells.
    faces: Vec<f64>,
}

impl Grid {
    pub fn uniform(domain: Domain, n_cells: usize) -> Result<Arc<Self>, GridError> {
        match domain {
            Domain::Interval { a, b } => {
                if !(a.is_finite() && b.is_finite() && b > a) {
                    return Err(GridError::InvalidDomain);
                }
            }
            Domain::Ball { radius, n_dim } => {
                if !(radius.is_finite() && radius > 0.0) || n_dim < 1 {
                    return Err(GridError::InvalidDomain);
                }
            }
        }
        if n_cells < 2 {
            return Err(GridError::SingularSystem);
        }
        let h = domain.span() / n_cells as f64;
        let n = n_cells;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut weights = Vec::with_capacity(n + 1);
        let mut faces = vec![0.0; n + 1];
        match domain {
            Domain::Interval { a, .. } => {
                for i in 0..=n {
                    nodes.push(a + i as f64 * h);
                    let full = if i == 0 || i == n { 0.5 * h } else { h };
                    weights.push(full);
                }
                for f in faces.iter_mut().skip(1) {
                    *f = 1.0;
                }
            }
            Domain::Ball { radius, n_dim } => {
                let nd = n_dim as f64;
                for i in 0..=n {
                    let r = i as f64 * h;
                    nodes.push(r);
                    let lo = (r - 0.5 * h).max(0.0);
                    let hi = (r + 0.5 * h).min(radius);
                    weights.push((hi.powi(n_dim as i32) - lo.powi(n_dim as i32)) / nd);
                }
                for (i, f) in faces.iter_mut().enumerate().skip(1) {
                    let rf = (i as f64 - 0.5) * h;
                    *f = rf.powi(n_dim as i32 - 1);
                }
            }
        }
        Ok(Arc::new(Self { domain, n_cells, h, nodes, weights, faces }))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node_coords(&self) -> &[f64] {
        &self.nodes
    }

    /// Exact volume of each node's cell (r^{N−1} dr measure).
    pub fn volume_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Face areas; entry i is the face between nodes i−1 and i.
    pub fn face_areas(&self) -> &[f64] {
        &self.faces
    }

    /// Total measure of the domain in the volume weights.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        match self.domain {
            Domain::Interval { .. } => i == 0 || i == self.n_cells,
            Domain::Ball { .. } => i == self.n_cells,
        }
    }

    /// Index range of non-boundary nodes (includes r = 0 for balls).
    pub fn evolving_range(&self) -> core::ops::Range<usize> {
        match self.domain {
            Domain::Interval { .. } => 1..self.n_cells,
            Domain::Ball { .. } => 0..self.n_cells,
        }
    }

    /// Distance of node i to the Dirichlet boundary.
    pub fn boundary_distance(&self, i: usize) -> f64 {
        match self.domain {
            Domain::Interval { a, b } => (self.nodes[i] - a).min(b - self.nodes[i]),
            Domain::Ball { radius, .. } => radius - self.nodes[i],
        }
    }
}

/// A grid-sampled nonnegative field u(t, ·).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
    time: f64,
}

impl Field {
    /// Builds a field, validating finiteness and nonnegativity.
    pub fn new(grid: Arc<Grid>, values: Vec<f64>, time: f64) -> Result<Self, GridError> {
        if values.len() != grid.n_nodes() {
            return Err(GridError::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(GridError::InvalidFieldValues);
        }
        Ok(Self { grid, values, time })
    }

    /// Samples `f` at every node coordinate, clamping tiny negatives to 0.
    pub fn from_fn(grid: Arc<Grid>, time: f64, mut f: impl FnMut(f64) -> f64) -> Result<Self, GridError> {
        let values: Vec<f64> = grid.node_coords().iter().map(|&x| f(x).max(0.0)).collect();
        Self::new(grid, values, time)
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.n_nodes();
        Self { grid, values: vec![0.0; n], time: 0.0 }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

/// The weight ζ solving −Δζ = 1, ζ = 0 on the boundary; equivalent to the
/// boundary distance up to two-sided constants.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    grid: Arc<Grid>,
    zeta: Vec<f64>,
}

impl WeightField {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.zeta
    }

    /// min and max of ζ(x)/δ(x) over non-boundary nodes: the two-sided
    /// comparison constants against the boundary distance.
    pub fn distance_comparison(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in self.grid.evolving_range() {
            let d = self.grid.boundary_distance(i);
            if d > 0.0 {
                let ratio = self.zeta[i] / d;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
        (lo, hi)
    }
}

/// Applies the discrete Laplacian to u^exponent. Boundary entries of the
/// output are 0; the field's own boundary values act as Dirichlet data.
pub fn laplacian_of_power(field: &Field, exponent: f64) -> Field {
    let grid = field.grid();
    let n = grid.n_cells();
    let h = grid.h();
    let u = field.values();
    let pow = |v: f64| -> f64 {
        if exponent == 1.0 {
            v
        } else if exponent == 2.0 {
            v * v
        } else {
            v.powf(exponent)
        }
    };
    let v: Vec<f64> = u.iter().map(|&x| pow(x)).collect();
    let mut out = vec![0.0; n + 1];
    let faces = grid.face_areas();
    let w = grid.volume_weights();
    match grid.domain() {
        Domain::Interval { .. } => {
            let h2 = h * h;
            for i in 1..n {
                out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
            }
        }
        Domain::Ball { .. } => {
            out[0] = faces[1] * (v[1] - v[0]) / (h * w[0]);
            for i in 1..n {
                let flux_hi = faces[i + 1] * (v[i + 1] - v[i]) / h;
                let flux_lo = faces[i] * (v[i] - v[i - 1]) / h;
                out[i] = (flux_hi - flux_lo) / w[i];
            }
        }
    }
    Field { grid: grid.clone(), values: out, time: field.time() }
}

/// Solves −Δζ = 1 with ζ = 0 on the boundary by a direct tridiagonal solve.
pub fn solve_zeta(grid: &Arc<Grid>) -> Result<WeightField, GridError> {
    let n = grid.n_cells();
    if n < 2 {
        return Err(GridError::SingularSystem);
    }
    let h = grid.h();
    let faces = grid.face_areas();
    let w = grid.volume_weights();
    // Unknowns: evolving nodes. -Laplacian row i: diag = (A_i + A_{i+1})/(h w_i),
    // off-diagonals -A/(h w_i); for the ball's r = 0 row only the upper face.
    let range = grid.evolving_range();
    let lo = range.start;
    let m = range.end - lo;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![1.0; m];
    for (k, i) in range.clone().enumerate() {
        let a_lo = if i == 0 { 0.0 } else { faces[i] };
        let a_hi = faces[i + 1];
        let scale = 1.0 / (h * w[i]);
        diag[k] = (a_lo + a_hi) * scale;
        if k > 0 {
            sub[k] = -a_lo * scale;
        }
        if k + 1 < m {
            sup[k] = -a_hi * scale;
        }
    }
    // Thomas algorithm.
    for k in 1..m {
        let f = sub[k] / diag[k - 1];
        diag[k] -= f * sup[k - 1];
        rhs[k] -= f * rhs[k - 1];
    }
    rhs[m - 1] /= diag[m - 1];
    for k in (0..m - 1).rev() {
        rhs[k] = (rhs[k] - sup[k] * rhs[k + 1]) / diag[k];
    }
    let mut zeta = vec![0.0; n + 1];
    for (k, i) in range.enumerate() {
        zeta[i] = rhs[k];
    }
    Ok(WeightField { grid: grid.clone(), zeta })
}

/// Norm bundle of a field snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub sup: f64,
    pub l1: f64,
    /// L^q norm at the requested q.
    pub lq: f64,
    /// ∫ u ζ, present when a weight was supplied.
    pub l1_zeta: Option<f64>,
}

/// Midpoint-rule norms with the radial volume element; `q` must be ≥ 1.
pub fn norms(field: &Field, weight: Option<&WeightField>, q: f64) -> Result<Norms, GridError> {
    if q < 1.0 {
        return Err(GridError::InvalidFieldValues);
    }
    if let Some(wf) = weight {
        if !Arc::ptr_eq(wf.grid(), field.grid()) && wf.grid().as_ref() != field.grid().as_ref() {
            return Err(GridError::GridMismatch);
        }
    }
    let w = field.grid().volume_weights();
    let u = field.values();
    let mut l1 = 0.0;
    let mut lq_acc = 0.0;
    for i in 0..u.len() {
        l1 += u[i] * w[i];
        lq_acc += u[i].powf(q) * w[i];
    }
    let l1_zeta = weight.map(|wf| {
        let z = wf.values();
        u.iter().zip(z).zip(w).map(|((&ui, &zi), &wi)| ui * zi * wi).sum()
    });
    Ok(Norms { sup: field.sup(), l1, lq: lq_acc.powf(1.0 / q), l1_zeta })
}

/// max over adjacent node pairs of |u_i^e − u_{i+1}^e| / h: a one-sided
/// discrete stand-in for ‖∇u^e‖_∞. One-sided differences cannot
/// asymptotically under-report a Lipschitz constant.
pub fn gradient_power_sup(field: &Field, exponent: f64) -> f64 {
    let u = field.values();
    let h = field.grid().h();
    let mut best = 0.0f64;
    let mut prev = u[0].powf(exponent);
    for &ui in &u[1..] {
        let cur = ui.powf(exponent);
        best = best.max((cur - prev).abs() / h);
        prev = cur;
    }
    best
}

/// ∫ |∇(a − b)|² over the domain by face-midpoint quadrature.
pub fn grad_diff_energy(a: &Field, b: &Field) -> Result<f64, GridError> {
    if a.grid().as_ref() != b.grid().as_ref() {
        return Err(GridError::GridMismatch);
    }
    let grid = a.grid();
    let h = grid.h();
    let faces = grid.face_areas();
    let (ua, ub) = (a.values(), b.values());
    let mut acc = 0.0;
    for i in 1..grid.n_nodes() {
        let d = (ua[i] - ub[i]) - (ua[i - 1] - ub[i - 1]);
        acc += faces[i] * (d / h) * (d / h) * h;
    }
    Ok(acc)
}
