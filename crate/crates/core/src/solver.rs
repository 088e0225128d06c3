//! Time integration of the regularized problems: explicit and Lie-split
//! schemes, diagnostics, and the ε,η ↓ 0 / R ↑ ∞ limit ladders with
//! monotonicity verification.
//!
//! The degenerate diffusion is stepped explicitly on v = uᵐ under the CFL
//! restriction dt ≤ cfl · h² / (2 N m (sup u)^{m−1}). The absorption
//! substep of the split scheme integrates u′ = −λ g_ε(u) exactly per node:
//! in closed form u ← [u^{1+β} − (1+β)λ dt]₊^{1/(1+β)} while g_ε = s^{−β},
//! and by one safeguarded implicit solve inside the cutoff transition.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::{self, Domain, Field, Grid, GridError, WeightField};
use crate::params::ModelParams;
use crate::regularize::RegularizedAbsorption;

/// Boundary condition of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// u = η on the boundary, initial data lifted to u₀ + η.
    LiftedEta,
    /// uᵐ = 1 on the boundary.
    Unit,
    /// u = 0 on the boundary (reached as the limit of the lifted family).
    Zero,
    /// Whole-space problem truncated to a ball with u₀·χ_{B_R} and u = 0 at
    /// r = R; the R ladder runs through [`sweep_limit`].
    Cauchy,
}

/// Time stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Forward Euler on both terms at the same state, absorption clamped
    /// at zero. Keeps discrete stationary balances exact.
    Explicit,
    /// Forward Euler diffusion substep, then the exact absorption flow.
    LieSplit,
}

/// How dt is chosen along a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtPolicy {
    /// Recompute the CFL bound from the current sup each step.
    Adaptive,
    /// Freeze dt from the initial data; sup only decays, so the initial
    /// bound stays valid. Ladder sweeps use this so every rung sees the
    /// identical step sequence.
    FixedFromInitial,
}

/// Everything the continuous problem leaves to the numerics.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub eps: f64,
    pub eta: f64,
    pub boundary_mode: BoundaryMode,
    pub scheme: Scheme,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub quench_tol: f64,
    pub support_tol: f64,
    pub max_steps: u64,
    /// Diagnostics cadence; a record is emitted every `record_dt`.
    pub record_dt: f64,
    /// Times at which full field snapshots are stored (sorted).
    pub snapshot_times: Vec<f64>,
    /// q of the L^q diagnostic norm.
    pub diag_q: f64,
    pub dt_policy: DtPolicy,
    /// Disable to run pure absorption (ODE per node).
    pub diffusion: bool,
    /// Disable to run pure degenerate diffusion.
    pub absorption: bool,
}

impl SimConfig {
    pub fn new(eps: f64, t_end: f64) -> Self {
        Self {
            eps,
            eta: 0.0,
            boundary_mode: BoundaryMode::Zero,
            scheme: Scheme::LieSplit,
            t_end,
            cfl_safety: 0.25,
            quench_tol: 1e-10,
            support_tol: 1e-10,
            max_steps: u64::MAX,
            record_dt: t_end / 200.0,
            snapshot_times: Vec::new(),
            diag_q: 2.0,
            dt_policy: DtPolicy::Adaptive,
            diffusion: true,
            absorption: true,
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(SolverError::InvalidConfig("eps must be > 0"));
        }
        if self.eta < 0.0 || !self.eta.is_finite() {
            return Err(SolverError::InvalidConfig("eta must be >= 0"));
        }
        if self.boundary_mode == BoundaryMode::LiftedEta && self.eta > self.eps {
            return Err(SolverError::InvalidConfig("lifted mode needs eta <= eps"));
        }
        if !(self.t_end > 0.0) {
            return Err(SolverError::InvalidConfig("t_end must be > 0"));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(SolverError::InvalidConfig("cfl_safety must be in (0, 1]"));
        }
        if !(self.record_dt > 0.0) {
            return Err(SolverError::InvalidConfig("record_dt must be > 0"));
        }
        if self.diag_q < 1.0 {
            return Err(SolverError::InvalidConfig("diag_q must be >= 1"));
        }
        Ok(())
    }

    /// Dirichlet value carried by the boundary nodes.
    pub fn boundary_value(&self, params: &ModelParams) -> f64 {
        match self.boundary_mode {
            BoundaryMode::LiftedEta => self.eta,
            BoundaryMode::Unit => 1.0f64.powf(1.0 / params.m()),
            BoundaryMode::Zero | BoundaryMode::Cauchy => 0.0,
        }
    }
}

/// Solver failures.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    InvalidConfig(&'static str),
    Grid(GridError),
    /// dt exceeds the diffusion stability bound.
    CflViolation { dt: f64, bound: f64 },
    /// The implicit transition-region solve failed to converge.
    NewtonDivergence,
    MaxStepsExceeded,
    /// A ladder rung rose above its predecessor beyond the tolerance.
    MonotonicityViolation { t: f64, x: f64, gap: f64 },
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::InvalidConfig(w) => write!(f, "invalid config: {w}"),
            SolverError::Grid(e) => write!(f, "grid error: {e}"),
            SolverError::CflViolation { dt, bound } => {
                write!(f, "dt = {dt} exceeds the CFL bound {bound}")
            }
            SolverError::NewtonDivergence => write!(f, "transition-region solve diverged"),
            SolverError::MaxStepsExceeded => write!(f, "max_steps exceeded"),
            SolverError::MonotonicityViolation { t, x, gap } => {
                write!(f, "ladder monotonicity violated at t = {t}, x = {x}: gap {gap}")
            }
        }
    }
}

impl core::error::Error for SolverError {}

impl From<GridError> for SolverError {
    fn from(e: GridError) -> Self {
        SolverError::Grid(e)
    }
}

/// One diagnostics row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagRecord {
    pub t: f64,
    pub sup_u: f64,
    pub min_u_interior: f64,
    pub l1: f64,
    pub l1_zeta: f64,
    pub lq: f64,
    /// One-sided sup of the discrete ∇u^{(m+β)/2}.
    pub grad_gamma_sup: f64,
    pub support_measure: f64,
    /// Cumulative ζ-weighted mass removed by the absorption term.
    pub absorbed_mass_cum: f64,
}

/// Per-run diagnostics series.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsSeries {
    pub q: f64,
    pub records: Vec<DiagRecord>,
}

/// Output of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub snapshots: Vec<Field>,
    pub series: DiagnosticsSeries,
    pub quench_time: Option<f64>,
    pub steps_taken: u64,
}

#[inline]
fn pow_m(x: f64, m: f64) -> f64 {
    if m == 1.0 {
        x
    } else if m == 2.0 {
        x * x
    } else {
        x.powf(m)
    }
}

/// x^a for a = 1 + β; hot path, so common exponents are special-cased.
#[inline]
fn pow_a(x: f64, a: f64) -> f64 {
    if a == 1.5 {
        x * x.sqrt()
    } else if a == 2.0 {
        x * x
    } else {
        x.powf(a)
    }
}

/// x^(1/a).
#[inline]
fn pow_inv_a(x: f64, a: f64) -> f64 {
    if a == 1.5 {
        (x * x).cbrt()
    } else if a == 2.0 {
        x.sqrt()
    } else {
        x.powf(1.0 / a)
    }
}

#[inline]
fn g_pure(x: f64, beta: f64) -> f64 {
    if beta == 0.5 {
        1.0 / x.sqrt()
    } else {
        x.powf(-beta)
    }
}

/// Exact flow of u′ = −λ g_ε(u) over `dt` starting from `u`.
fn absorb_exact(
    u: f64,
    lam: f64,
    dt: f64,
    reg: &RegularizedAbsorption,
) -> Result<f64, SolverError> {
    let eps = reg.eps();
    let beta = reg.beta();
    if u <= eps || dt <= 0.0 {
        return Ok(u);
    }
    let a = 1.0 + beta;
    let mut u_cur = u;
    let mut t_left = dt;
    if u_cur >= 2.0 * eps {
        let pow_u = pow_a(u_cur, a);
        let floor = pow_a(2.0 * eps, a);
        let need = a * lam * t_left;
        if pow_u - need >= floor {
            return Ok(pow_inv_a(pow_u - need, a));
        }
        // The flow crosses into the cutoff transition mid-step.
        let t_to_floor = (pow_u - floor) / (a * lam);
        u_cur = 2.0 * eps;
        t_left -= t_to_floor;
    }
    // Transition region (ε, 2ε]: backward Euler, safeguarded Newton.
    let c = t_left * lam;
    let target = u_cur;
    let mut lo = eps;
    let mut hi = target;
    if hi <= lo {
        return Ok(target.min(hi));
    }
    let mut w = 0.5 * (lo + hi);
    for _ in 0..50 {
        let f = w + c * reg.g(w) - target;
        if f.abs() <= 1e-14 * target.max(1.0) {
            return Ok(w);
        }
        if f > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        if hi - lo <= 1e-15 * hi.max(1e-300) {
            return Ok(0.5 * (lo + hi));
        }
        let fp = 1.0 + c * reg.g_prime(w);
        let newton = w - f / fp;
        w = if fp > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    if hi - lo <= 1e-9 * hi.max(1e-300) {
        return Ok(0.5 * (lo + hi));
    }
    Err(SolverError::NewtonDivergence)
}

/// CFL-stable dt for the diffusion substep at the given field sup.
pub fn cfl_dt(grid: &Grid, params: &ModelParams, config: &SimConfig, sup: f64) -> f64 {
    let nd = grid.domain().n_dim() as f64;
    let h = grid.h();
    let m = params.m();
    let scale = if m == 1.0 { 1.0 } else { sup.max(1e-300).powf(m - 1.0) };
    config.cfl_safety * h * h / (2.0 * nd * m * scale)
}

struct StepBuffers {
    power: Vec<f64>,
    lap: Vec<f64>,
}

impl StepBuffers {
    fn new(n: usize) -> Self {
        Self { power: vec![0.0; n], lap: vec![0.0; n] }
    }
}

/// One explicit or split step on the raw value slice. The caller guarantees
/// the CFL bound; boundary entries of `u` carry the Dirichlet data and are
/// left untouched. Returns the total mass removed by absorption, weighted
/// by `zeta_w[i] = ζ_i·w_i`.
fn step_values(
    u: &mut [f64],
    grid: &Grid,
    params: &ModelParams,
    config: &SimConfig,
    reg: &RegularizedAbsorption,
    dt: f64,
    zeta_w: &[f64],
    buf: &mut StepBuffers,
) -> Result<f64, SolverError> {
    let n = grid.n_cells();
    let m = params.m();
    let lam = params.lambda();
    let beta = params.beta();
    let eps = reg.eps();
    let h = grid.h();
    let faces = grid.face_areas();
    let w = grid.volume_weights();
    let range = grid.evolving_range();
    let is_ball = matches!(grid.domain(), Domain::Ball { .. });

    if config.diffusion {
        for i in 0..=n {
            buf.power[i] = pow_m(u[i], m);
        }
        let v = &buf.power;
        if is_ball {
            buf.lap[0] = faces[1] * (v[1] - v[0]) / (h * w[0]);
        }
        let h2 = h * h;
        for i in 1..n {
            buf.lap[i] = if is_ball {
                (faces[i + 1] * (v[i + 1] - v[i]) - faces[i] * (v[i] - v[i - 1])) / (h * w[i])
            } else {
                (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2
            };
        }
    } else {
        buf.lap[..=n].fill(0.0);
    }

    let mut absorbed = 0.0;
    match config.scheme {
        Scheme::Explicit => {
            for i in range {
                let mid = (u[i] + dt * buf.lap[i]).max(0.0);
                let next = if config.absorption && u[i] > eps {
                    let g = if u[i] >= 2.0 * eps {
                        g_pure(u[i], beta)
                    } else {
                        reg.g(u[i])
                    };
                    (mid - dt * lam * g).max(0.0)
                } else {
                    mid
                };
                absorbed += (mid - next) * zeta_w[i];
                u[i] = next;
            }
        }
        Scheme::LieSplit => {
            if config.absorption {
                for i in range {
                    let mid = (u[i] + dt * buf.lap[i]).max(0.0);
                    let next = absorb_exact(mid, lam, dt, reg)?;
                    absorbed += (mid - next) * zeta_w[i];
                    u[i] = next;
                }
            } else {
                for i in range {
                    u[i] = (u[i] + dt * buf.lap[i]).max(0.0);
                }
            }
        }
    }
    Ok(absorbed)
}

/// One validated step; errors with [`SolverError::CflViolation`] when `dt`
/// exceeds the stability bound.
pub fn step(
    field: &Field,
    config: &SimConfig,
    params: &ModelParams,
    dt: f64,
) -> Result<Field, SolverError> {
    config.validate()?;
    let bound = cfl_dt(field.grid(), params, config, field.sup());
    if config.diffusion && dt > bound * (1.0 + 1e-12) {
        return Err(SolverError::CflViolation { dt, bound });
    }
    let reg = RegularizedAbsorption::new(config.eps, params.beta())
        .ok_or(SolverError::InvalidConfig("eps/beta must be positive"))?;
    let mut out = field.clone();
    let grid = out.grid().clone();
    let zeros = vec![0.0; grid.n_nodes()];
    let mut buf = StepBuffers::new(grid.n_nodes());
    step_values(out.values_mut(), &grid, params, config, &reg, dt, &zeros, &mut buf)?;
    out.set_time(field.time() + dt);
    Ok(out)
}

fn support_measure(u: &[f64], w: &[f64], tol: f64) -> f64 {
    u.iter().zip(w).filter(|(ui, _)| **ui > tol).map(|(_, wi)| wi).sum()
}

fn make_record(
    t: f64,
    u: &[f64],
    grid: &Grid,
    zeta: &WeightField,
    config: &SimConfig,
    gamma_inv: f64,
    absorbed: f64,
) -> DiagRecord {
    let w = grid.volume_weights();
    let z = zeta.values();
    let mut sup = 0.0f64;
    let mut l1 = 0.0;
    let mut l1_zeta = 0.0;
    let mut lq = 0.0;
    for i in 0..u.len() {
        sup = sup.max(u[i]);
        l1 += u[i] * w[i];
        l1_zeta += u[i] * z[i] * w[i];
        lq += u[i].powf(config.diag_q) * w[i];
    }
    let mut min_int = f64::INFINITY;
    for i in grid.evolving_range() {
        min_int = min_int.min(u[i]);
    }
    let h = grid.h();
    let mut grad = 0.0f64;
    let mut prev = u[0].powf(gamma_inv);
    for &ui in &u[1..] {
        let cur = ui.powf(gamma_inv);
        grad = grad.max((cur - prev).abs() / h);
        prev = cur;
    }
    DiagRecord {
        t,
        sup_u: sup,
        min_u_interior: min_int,
        l1,
        l1_zeta,
        lq: lq.powf(1.0 / config.diag_q),
        grad_gamma_sup: grad,
        support_measure: support_measure(u, w, config.support_tol),
        absorbed_mass_cum: absorbed,
    }
}

/// Integrates the regularized problem from `u0` to `t_end`.
///
/// The initial field is lifted by η in [`BoundaryMode::LiftedEta`];
/// diagnostics are recorded every `record_dt` and snapshots at the
/// configured times. `quench_time` is the first time the sup drops to the
/// quench tolerance.
pub fn run(u0: &Field, config: &SimConfig, params: &ModelParams) -> Result<RunResult, SolverError> {
    config.validate()?;
    run_with_dt(u0, config, params, None)
}

fn run_with_dt(
    u0: &Field,
    config: &SimConfig,
    params: &ModelParams,
    forced_dt: Option<f64>,
) -> Result<RunResult, SolverError> {
    let grid = u0.grid().clone();
    let reg = RegularizedAbsorption::new(config.eps, params.beta())
        .ok_or(SolverError::InvalidConfig("eps/beta must be positive"))?;
    let ub = config.boundary_value(params);
    if config.boundary_mode == BoundaryMode::LiftedEta && config.eta > 0.0 {
        let sup0 = u0.sup();
        if config.eta > sup0 {
            return Err(SolverError::InvalidConfig("lifted mode needs eta <= sup u0"));
        }
    }

    let mut u: Vec<f64> = u0.values().to_vec();
    if config.boundary_mode == BoundaryMode::LiftedEta {
        for v in u.iter_mut() {
            *v += config.eta;
        }
    }
    let n = grid.n_cells();
    match grid.domain() {
        Domain::Interval { .. } => {
            u[0] = ub;
            u[n] = ub;
        }
        Domain::Ball { .. } => u[n] = ub,
    }

    let zeta = grid::solve_zeta(&grid)?;
    let zeta_w: Vec<f64> = zeta
        .values()
        .iter()
        .zip(grid.volume_weights())
        .map(|(z, w)| z * w)
        .collect();
    let gamma_inv = 1.0 / params.gamma();

    let sup_init = u.iter().cloned().fold(0.0, f64::max);
    let fixed_dt = match (forced_dt, config.dt_policy) {
        (Some(dt), _) => Some(dt),
        (None, DtPolicy::FixedFromInitial) => Some(cfl_dt(&grid, params, config, sup_init)),
        (None, DtPolicy::Adaptive) => None,
    };

    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut buf = StepBuffers::new(grid.n_nodes());
    let mut t = 0.0f64;
    let mut absorbed_cum = 0.0f64;
    let mut steps = 0u64;
    let mut quench_time = None;
    let mut next_record = 0.0f64;
    let mut snap_idx = 0usize;
    let eps_t = 1e-12 * config.t_end;

    let mut sup_now = sup_init;
    if sup_now <= config.quench_tol {
        quench_time = Some(0.0);
    }

    loop {
        if t >= next_record - eps_t {
            records.push(make_record(t, &u, &grid, &zeta, config, gamma_inv, absorbed_cum));
            next_record += config.record_dt;
        }
        while snap_idx < config.snapshot_times.len()
            && t >= config.snapshot_times[snap_idx] - eps_t
        {
            let mut f = Field::new(grid.clone(), u.clone(), t)?;
            f.set_time(t);
            snapshots.push(f);
            snap_idx += 1;
        }
        if t >= config.t_end - eps_t {
            break;
        }
        if steps >= config.max_steps {
            return Err(SolverError::MaxStepsExceeded);
        }

        let mut dt = match fixed_dt {
            Some(dt) => dt,
            None => {
                if config.diffusion {
                    cfl_dt(&grid, params, config, sup_now)
                } else {
                    config.record_dt.min(config.t_end / 1000.0)
                }
            }
        };
        // Land exactly on the next event (record, snapshot, end).
        let mut next_event = next_record.min(config.t_end);
        if snap_idx < config.snapshot_times.len() {
            next_event = next_event.min(config.snapshot_times[snap_idx]);
        }
        if t + dt > next_event - eps_t {
            dt = next_event - t;
        }
        if dt <= 0.0 {
            dt = eps_t.max(1e-300);
        }

        absorbed_cum +=
            step_values(&mut u, &grid, params, config, &reg, dt, &zeta_w, &mut buf)?;
        t += dt;
        steps += 1;

        sup_now = u.iter().cloned().fold(0.0, f64::max);
        if quench_time.is_none() && sup_now <= config.quench_tol {
            quench_time = Some(t);
        }
    }

    let series = DiagnosticsSeries { q: config.diag_q, records };
    Ok(RunResult { snapshots, series, quench_time, steps_taken: steps })
}

/// One rung of a limit ladder: a regularization level, and for Cauchy
/// sweeps the truncation radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRung {
    pub eps: f64,
    pub eta: f64,
    pub radius: Option<f64>,
}

impl SweepRung {
    pub fn regularization(eps: f64, eta: f64) -> Self {
        Self { eps, eta, radius: None }
    }

    pub fn truncation(eps: f64, radius: f64) -> Self {
        Self { eps, eta: 0.0, radius: Some(radius) }
    }
}

/// Ladder output: the per-rung results plus the monotonicity bookkeeping.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub runs: Vec<RunResult>,
    /// Worst (largest) L¹ distance between consecutive rungs over the
    /// shared snapshot times.
    pub l1_gaps: Vec<f64>,
    /// Largest ordering violation observed (≤ mono_tol by construction).
    pub worst_violation: f64,
}

/// Runs every rung with an identical grid and dt policy and verifies the
/// pointwise ordering: later rungs (smaller ε, smaller η, or smaller R on
/// the shared region) must not exceed earlier ones beyond `mono_tol`.
///
/// For Cauchy ladders `u0` lives on the largest-radius grid and each rung
/// restricts it to u₀·χ_{B_R}.
pub fn sweep_limit(
    u0: &Field,
    base: &SimConfig,
    params: &ModelParams,
    ladder: &[SweepRung],
    mono_tol: f64,
) -> Result<SweepOutcome, SolverError> {
    base.validate()?;
    if ladder.is_empty() {
        return Err(SolverError::InvalidConfig("empty ladder"));
    }
    let cauchy = base.boundary_mode == BoundaryMode::Cauchy;
    for pair in ladder.windows(2) {
        if cauchy {
            let (ra, rb) = (pair[0].radius, pair[1].radius);
            match (ra, rb) {
                (Some(ra), Some(rb)) if rb > ra => {}
                _ => return Err(SolverError::InvalidConfig("cauchy ladder needs increasing radii")),
            }
        } else if pair[1].eps >= pair[0].eps {
            return Err(SolverError::InvalidConfig("ladder needs strictly decreasing eps"));
        }
    }
    for rung in ladder {
        if rung.eta > rung.eps {
            return Err(SolverError::InvalidConfig("rung needs eta <= eps"));
        }
    }

    // Shared dt from the first rung (largest eps/eta, so largest sup).
    let sup_shared = u0.sup() + ladder[0].eta;
    let dt_shared = cfl_dt(u0.grid(), params, base, sup_shared);

    let mut runs: Vec<RunResult> = Vec::with_capacity(ladder.len());
    let mut grids: Vec<Arc<Grid>> = Vec::with_capacity(ladder.len());
    for rung in ladder {
        let mut cfg = base.clone();
        cfg.eps = rung.eps;
        cfg.eta = rung.eta;
        let (field, grid) = if cauchy {
            let radius = rung.radius.ok_or(SolverError::InvalidConfig("cauchy rung needs radius"))?;
            let h = u0.grid().h();
            let n_cells = (radius / h).round() as usize;
            let nd = u0.grid().domain().n_dim();
            let grid = Grid::uniform(Domain::Ball { radius: n_cells as f64 * h, n_dim: nd }, n_cells)?;
            let mut vals = vec![0.0; grid.n_nodes()];
            for i in 0..grid.n_nodes().min(u0.values().len()) {
                vals[i] = u0.values()[i];
            }
            vals[n_cells] = 0.0;
            (Field::new(grid.clone(), vals, 0.0)?, grid)
        } else {
            (u0.clone(), u0.grid().clone())
        };
        let result = run_with_dt(&field, &cfg, params, Some(dt_shared))?;
        runs.push(result);
        grids.push(grid);
    }

    // Pointwise ordering and L1 gaps across consecutive rungs at the shared
    // snapshot times.
    let mut l1_gaps = Vec::new();
    let mut worst = 0.0f64;
    for k in 1..runs.len() {
        let (prev, cur) = (&runs[k - 1], &runs[k]);
        let n_snap = prev.snapshots.len().min(cur.snapshots.len());
        let mut gap_max = 0.0f64;
        for s in 0..n_snap {
            let (fa, fb) = (&prev.snapshots[s], &cur.snapshots[s]);
            // Compare on the evolving nodes of the smaller (current for
            // regularization ladders: same grid; previous for cauchy).
            let (small_grid, ua, ub) = if cauchy {
                (&grids[k - 1], fa.values(), fb.values())
            } else {
                (&grids[k], fa.values(), fb.values())
            };
            let w = small_grid.volume_weights();
            let mut l1 = 0.0;
            for i in small_grid.evolving_range() {
                // For eps ladders u_cur (smaller eps) must sit below u_prev;
                // for cauchy ladders u_prev (smaller R) must sit below u_cur.
                let gap = if cauchy { ua[i] - ub[i] } else { ub[i] - ua[i] };
                if gap > worst {
                    worst = gap;
                }
                if gap > mono_tol {
                    return Err(SolverError::MonotonicityViolation {
                        t: fa.time(),
                        x: small_grid.node_coords()[i],
                        gap,
                    });
                }
                l1 += (ua[i] - ub[i]).abs() * w[i];
            }
            gap_max = gap_max.max(l1);
        }
        l1_gaps.push(gap_max);
    }

    Ok(SweepOutcome { runs, l1_gaps, worst_violation: worst })
}
