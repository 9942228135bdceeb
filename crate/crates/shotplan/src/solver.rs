//! Alternating placement solver: the segment weight `eta` and the altitude
//! `z` are optimized in turn, each over a convex restriction of the exact
//! constraint set built from tangent lower bounds at the current point.
//!
//! Each single-variable subproblem has a convex feasible set (an interval
//! containing the current point) and either a monotone objective (`eta`:
//! push right) or a projection objective (`z`: clamp the BS altitude into
//! the interval), so interval-endpoint bisection solves it exactly. Because
//! the tangent bounds under-estimate the exact residuals, every iterate
//! stays feasible for the original constraints and the objective never
//! increases.

use crate::problem::{self, ReducedPoint, Scenario};
use crate::geometry::Placement;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    /// The vertical starting point already violates the constraints; the
    /// problem has no feasible placement.
    #[error("no feasible placement: the vertical anchor point violates the constraint set")]
    Infeasible,
    /// A subproblem's expansion point violates its own surrogate
    /// constraints; does not occur from a feasible iterate.
    #[error("subproblem infeasible at its expansion point")]
    SubproblemInfeasible,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Stop when the objective changes by less than this (m^2).
    pub precision: f64,
    pub max_iters: usize,
    /// Relative width at which endpoint bisection stops.
    pub bisect_tol: f64,
    /// Slack allowed when checking exact feasibility.
    pub feasibility_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            precision: 1e-4,
            max_iters: 100,
            bisect_tol: 1e-9,
            feasibility_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationStatus {
    Converged,
    MaxIters,
    Infeasible,
}

/// One outer-iteration snapshot.
#[derive(Debug, Clone, Copy)]
pub struct IterationRecord {
    pub iteration: usize,
    pub eta: f64,
    pub z: f64,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub point: ReducedPoint,
    pub placement: Placement,
    pub resolution: f64,
    pub rate: f64,
    pub delay: f64,
    pub trace: Vec<IterationRecord>,
    pub status: TerminationStatus,
}

// Slack used inside surrogate predicates; absorbs round-off at the tangent
// point without affecting exact feasibility (the surrogates under-estimate).
const SURROGATE_TOL: f64 = 1e-11;

/// Tangent lower bound of the log-resolution residual in `eta`, expanded at
/// `eta_hat` with `z` fixed. Equals the exact residual at `eta = eta_hat`.
pub fn surrogate_resolution_eta(eta: f64, eta_hat: f64, z: f64, s: &Scenario) -> f64 {
    let d2 = s.d_gb * s.d_gb;
    let c = &s.consts;
    let log_arg = z * z - eta * eta * d2 / (c.b1 * c.b1);
    if log_arg <= 0.0 || z <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let anchor = z * z + eta_hat * eta_hat * d2;
    2.0 * log_arg.ln()
        - 1.5 * anchor.ln()
        - 1.5 * d2 / anchor * (eta * eta - eta_hat * eta_hat)
        - 3.0 * z.ln()
        - (s.i_min / c.a).ln()
}

/// Tangent lower bound of the containment residual in `eta` at `eta_hat`.
pub fn surrogate_containment_eta(eta: f64, eta_hat: f64, z: f64, s: &Scenario) -> f64 {
    let d = s.d_gb;
    let d2 = d * d;
    let c = &s.consts;
    let lhs = z * z + eta_hat * eta_hat * d2 + 2.0 * eta_hat * (eta - eta_hat) * d2;
    let lateral = (c.b2 * c.b2 * z * z + (1.0 + c.b2 * c.b2) * eta * eta * d2).sqrt();
    lhs - s.gt.r0 * (c.b1 * z + eta * d).max(lateral)
}

/// Tangent lower bound of the log-resolution residual in `z` at `z_hat`.
pub fn surrogate_resolution_z(z: f64, z_hat: f64, eta: f64, s: &Scenario) -> f64 {
    let d2 = s.d_gb * s.d_gb;
    let c = &s.consts;
    let rho2 = eta * eta * d2;
    let log_arg = z * z - rho2 / (c.b1 * c.b1);
    if log_arg <= 0.0 || z <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let anchor = z_hat * z_hat + rho2;
    2.0 * log_arg.ln()
        - 1.5 * anchor.ln()
        - 1.5 / anchor * (z * z - z_hat * z_hat)
        - 3.0 * z_hat.ln()
        - 3.0 / z_hat * (z - z_hat)
        - (s.i_min / c.a).ln()
}

/// Tangent lower bound of the containment residual in `z` at `z_hat`.
pub fn surrogate_containment_z(z: f64, z_hat: f64, eta: f64, s: &Scenario) -> f64 {
    let d = s.d_gb;
    let rho2 = eta * eta * d * d;
    let c = &s.consts;
    let lhs = z_hat * z_hat + 2.0 * z_hat * (z - z_hat) + rho2;
    let lateral = (c.b2 * c.b2 * z * z + (1.0 + c.b2 * c.b2) * rho2).sqrt();
    lhs - s.gt.r0 * (c.b1 * z + eta * d).max(lateral)
}

fn eta_surrogates_ok(eta: f64, eta_hat: f64, z: f64, s: &Scenario) -> bool {
    eta <= 1.0 + SURROGATE_TOL
        && s.consts.b1 * z - eta * s.d_gb >= -SURROGATE_TOL
        && surrogate_resolution_eta(eta, eta_hat, z, s) >= -SURROGATE_TOL
        && surrogate_containment_eta(eta, eta_hat, z, s) >= -SURROGATE_TOL
}

fn z_surrogates_ok(z: f64, z_hat: f64, eta: f64, s: &Scenario) -> bool {
    z > 0.0
        && s.consts.b1 * z - eta * s.d_gb >= -SURROGATE_TOL
        && surrogate_resolution_z(z, z_hat, eta, s) >= -SURROGATE_TOL
        && surrogate_containment_z(z, z_hat, eta, s) >= -SURROGATE_TOL
}

// Largest x in [lo, hi] with pred(x) true, assuming pred(lo) and a single
// true-to-false transition.
fn bisect_right(pred: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    if pred(hi) {
        return hi;
    }
    while hi - lo > rel_tol * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

// Smallest x in [lo, hi] with pred(x) true, assuming pred(hi) and a single
// false-to-true transition.
fn bisect_left(pred: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    if pred(lo) {
        return lo;
    }
    while hi - lo > rel_tol * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

// Largest exactly-feasible `eta` at fixed `z`, reachable only through the
// exact constraints. The exact containment constraint is quadratic in `eta`
// and can carve an infeasible gap with a second feasible branch beyond it;
// the linearized step can never cross that gap, so after the surrogate step
// the iterate is pushed to the exact resolution/angle frontier whenever that
// frontier is exactly feasible. This keeps every invariant of the surrogate
// step (exact feasibility, non-increasing objective) while escaping the
// disconnected branch.
fn exact_eta_frontier(eta_lo: f64, z: f64, s: &Scenario, cfg: &SolverConfig) -> Option<f64> {
    let d = s.d_gb;
    // Stay strictly inside the angle limit (same margin as the geometry).
    let cap = ((s.consts.b1 * z - 1e-8 * z) / d).min(1.0);
    let res = |e: f64| problem::residuals(&ReducedPoint { eta: e, z }, s).resolution_log;
    if cap <= eta_lo || res(eta_lo) < 0.0 {
        return None;
    }
    // The resolution residual is strictly decreasing in eta.
    let eta_res = if res(cap) >= 0.0 {
        cap
    } else {
        bisect_right(|e| res(e) >= 0.0, eta_lo, cap, cfg.bisect_tol)
    };
    let point = ReducedPoint { eta: eta_res, z };
    (eta_res > eta_lo && problem::feasible(&point, s, 0.0)).then_some(eta_res)
}

/// Pushes `eta` as far toward the BS as the constraints allow, with `z`
/// fixed: first over the convex surrogate restriction, then along the exact
/// constraint frontier. The result is never below the expansion point.
pub fn solve_eta_subproblem(
    eta_hat: f64,
    z: f64,
    s: &Scenario,
    cfg: &SolverConfig,
) -> Result<f64, SolverError> {
    if !eta_surrogates_ok(eta_hat, eta_hat, z, s) {
        return Err(SolverError::SubproblemInfeasible);
    }
    let hi = if s.d_gb > 0.0 {
        (s.consts.b1 * z / s.d_gb).min(1.0)
    } else {
        return Ok(eta_hat);
    };
    let pred = |e: f64| eta_surrogates_ok(e, eta_hat, z, s);
    let eta = bisect_right(pred, eta_hat, hi.max(eta_hat), cfg.bisect_tol);
    // Only when the linearized step makes no progress (stuck at the near
    // containment root) is the exact frontier probed.
    if eta - eta_hat < 1e-6 {
        return Ok(exact_eta_frontier(eta, z, s, cfg).unwrap_or(eta));
    }
    Ok(eta)
}

/// Projects the BS altitude onto the surrogate-feasible altitude interval
/// around `z_hat`, with `eta` fixed.
pub fn solve_z_subproblem(
    eta: f64,
    z_hat: f64,
    s: &Scenario,
    cfg: &SolverConfig,
) -> Result<f64, SolverError> {
    if !z_surrogates_ok(z_hat, z_hat, eta, s) {
        return Err(SolverError::SubproblemInfeasible);
    }
    let pred = |z: f64| z_surrogates_ok(z, z_hat, eta, s);
    let z_lo = bisect_left(&pred, 1e-9 * z_hat.max(1.0), z_hat, cfg.bisect_tol);
    // Feasibility is lost for large z (the quadratic tangent term dominates);
    // double until outside, then bisect.
    let mut hi = 2.0 * z_hat;
    while pred(hi) && hi < 1e15 {
        hi *= 2.0;
    }
    let z_hi = bisect_right(&pred, z_hat, hi, cfg.bisect_tol);
    Ok(s.bs.z_b.clamp(z_lo, z_hi))
}

/// Feasible starting altitude directly over the target, or `None` when even
/// the vertical anchor cannot meet the constraints.
pub fn initial_point(s: &Scenario, cfg: &SolverConfig) -> Option<ReducedPoint> {
    let c = &s.consts;
    let z0 = (c.a / s.i_min)
        .sqrt()
        .max((1.0 + 1e-6) * s.gt.r0 * c.b1.max(c.b2));
    let r = ReducedPoint { eta: 0.0, z: z0 };
    problem::feasible(&r, s, cfg.feasibility_tol).then_some(r)
}

/// Runs the full alternating solve.
pub fn bcd_solve(s: &Scenario, cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    let mut point = initial_point(s, cfg).ok_or(SolverError::Infeasible)?;
    let mut objective = problem::reduced_objective(&point, s);
    let mut trace = vec![IterationRecord {
        iteration: 0,
        eta: point.eta,
        z: point.z,
        objective,
    }];
    let mut status = TerminationStatus::MaxIters;
    for iteration in 1..=cfg.max_iters {
        if s.d_gb > 0.0 {
            point.eta = solve_eta_subproblem(point.eta, point.z, s, cfg)?;
        }
        point.z = solve_z_subproblem(point.eta, point.z, s, cfg)?;
        let new_objective = problem::reduced_objective(&point, s);
        trace.push(IterationRecord {
            iteration,
            eta: point.eta,
            z: point.z,
            objective: new_objective,
        });
        let converged = (objective - new_objective).abs() < cfg.precision;
        objective = new_objective;
        if converged {
            status = TerminationStatus::Converged;
            break;
        }
    }
    let placement = problem::embed(&point, s);
    let metrics = s
        .evaluate(&placement)
        .expect("final iterate is strictly feasible");
    Ok(SolveResult {
        point,
        placement,
        resolution: metrics.resolution,
        rate: metrics.rate,
        delay: metrics.delay,
        trace,
        status,
    })
}
