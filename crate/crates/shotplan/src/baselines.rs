//! Reference schemes: the conventional vertical-photography placement and
//! brute-force grid searches used both as benchmark baselines and as
//! near-global oracles for the alternating solver.
//!
//! Grid nodes are scored by the exact delay model under the exact original
//! constraints, so agreement with the solver is a genuine model-level
//! cross-check. Node evaluation is data-parallel (rayon) when the
//! `parallel` feature is enabled; results are deterministic either way,
//! with ties broken by lowest delay, then lowest altitude, then lowest
//! horizontal coordinates.

use crate::geometry::Placement;
use crate::problem::Scenario;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("no feasible placement for this scheme")]
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Hover directly over the target at the altitude that meets the
    /// resolution requirement exactly.
    Vertical,
    /// Grid search over the BS-target vertical plane.
    Es2d,
    /// Full 3D grid search over a box around the BS and the target.
    Es3d,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    pub scheme: Scheme,
    pub placement: Placement,
    pub resolution: f64,
    pub rate: f64,
    pub delay: f64,
    /// Number of grid nodes examined.
    pub evaluations: u64,
}

/// Feasibility slack used when screening grid nodes.
const GRID_TOL: f64 = 1e-9;

/// Default altitude ceiling for the searches; always brackets the vertical
/// anchor altitude.
pub fn default_z_max(s: &Scenario) -> f64 {
    let c = &s.consts;
    1.5 * (c.a / s.i_min).sqrt().max(s.gt.r0 * c.b1.max(c.b2))
}

/// Vertical-photography scheme: `q = w_g`, `z = sqrt(a / i_min)`, which
/// achieves the required resolution exactly.
pub fn vertical_baseline(s: &Scenario) -> Result<BaselineResult, BaselineError> {
    let c = &s.consts;
    let z = (c.a / s.i_min).sqrt();
    // Containment forces z >= r0 * max(b1, b2); above that altitude the
    // vertical resolution falls below the requirement.
    if z < s.gt.r0 * c.b1.max(c.b2) {
        return Err(BaselineError::Infeasible);
    }
    let placement = Placement { q: s.gt.w_g, z };
    let m = s.evaluate(&placement).ok_or(BaselineError::Infeasible)?;
    Ok(BaselineResult {
        scheme: Scheme::Vertical,
        placement,
        resolution: m.resolution,
        rate: m.rate,
        delay: m.delay,
        evaluations: 1,
    })
}

// Candidate ordering key: delay, then altitude, then horizontal coords.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    delay: f64,
    placement: Placement,
    resolution: f64,
    rate: f64,
}

impl Candidate {
    fn key(&self) -> [f64; 4] {
        [self.delay, self.placement.z, self.placement.q[0], self.placement.q[1]]
    }
}

fn better(a: Candidate, b: Candidate) -> Candidate {
    // Keys never contain NaN: only feasible nodes become candidates.
    if a.key() < b.key() {
        a
    } else {
        b
    }
}

fn score(s: &Scenario, p: Placement) -> Option<Candidate> {
    if !s.placement_feasible(&p, GRID_TOL) {
        return None;
    }
    let m = s.evaluate(&p)?;
    Some(Candidate {
        delay: m.delay,
        placement: p,
        resolution: m.resolution,
        rate: m.rate,
    })
}

fn fold_columns<F>(n_cols: usize, per_column: F) -> Option<Candidate>
where
    F: Fn(usize) -> Option<Candidate> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n_cols)
            .into_par_iter()
            .filter_map(per_column)
            .reduce_with(better)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_cols).filter_map(per_column).reduce(better)
    }
}

/// Exhaustive search restricted to the vertical plane through the BS and
/// the target, the plane that must contain the optimum.
pub fn exhaustive_search_2d(s: &Scenario, step: f64) -> Result<BaselineResult, BaselineError> {
    assert!(step > 0.0, "grid step must be positive");
    let z_max = default_z_max(s);
    let n_x = (s.d_gb / step).floor() as usize + 1;
    let n_z = (z_max / step).floor() as usize;
    let ground_dir = if s.d_gb > 0.0 {
        [
            (s.bs.w_b[0] - s.gt.w_g[0]) / s.d_gb,
            (s.bs.w_b[1] - s.gt.w_g[1]) / s.d_gb,
        ]
    } else {
        [0.0, 0.0]
    };
    let best = fold_columns(n_x, |i| {
        let x_h = (i as f64 * step).min(s.d_gb);
        let q = [
            s.gt.w_g[0] + x_h * ground_dir[0],
            s.gt.w_g[1] + x_h * ground_dir[1],
        ];
        (1..=n_z)
            .filter_map(|j| score(s, Placement { q, z: j as f64 * step }))
            .reduce(better)
    });
    let c = best.ok_or(BaselineError::Infeasible)?;
    Ok(BaselineResult {
        scheme: Scheme::Es2d,
        placement: c.placement,
        resolution: c.resolution,
        rate: c.rate,
        delay: c.delay,
        evaluations: (n_x * n_z) as u64,
    })
}

/// Full 3D grid search over the bounding box of the BS and the target,
/// expanded horizontally by the altitude ceiling.
pub fn exhaustive_search_3d(s: &Scenario, step: f64) -> Result<BaselineResult, BaselineError> {
    assert!(step > 0.0, "grid step must be positive");
    let z_max = default_z_max(s);
    let x_lo = s.bs.w_b[0].min(s.gt.w_g[0]) - z_max;
    let x_hi = s.bs.w_b[0].max(s.gt.w_g[0]) + z_max;
    let y_lo = s.bs.w_b[1].min(s.gt.w_g[1]) - z_max;
    let y_hi = s.bs.w_b[1].max(s.gt.w_g[1]) + z_max;
    let n_x = ((x_hi - x_lo) / step).floor() as usize + 1;
    let n_y = ((y_hi - y_lo) / step).floor() as usize + 1;
    let n_z = (z_max / step).floor() as usize;
    let best = fold_columns(n_x, |i| {
        let x = x_lo + i as f64 * step;
        (0..n_y)
            .flat_map(|j| {
                let y = y_lo + j as f64 * step;
                (1..=n_z).map(move |k| Placement { q: [x, y], z: k as f64 * step })
            })
            .filter_map(|p| score(s, p))
            .reduce(better)
    });
    let c = best.ok_or(BaselineError::Infeasible)?;
    Ok(BaselineResult {
        scheme: Scheme::Es3d,
        placement: c.placement,
        resolution: c.resolution,
        rate: c.rate,
        delay: c.delay,
        evaluations: (n_x * n_y * n_z) as u64,
    })
}

/// Perpendicular distance from a horizontal point to the BS-target segment.
pub fn distance_to_segment(q: [f64; 2], s: &Scenario) -> f64 {
    let a = s.gt.w_g;
    let b = s.bs.w_b;
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return ((q[0] - a[0]).powi(2) + (q[1] - a[1]).powi(2)).sqrt();
    }
    let t = (((q[0] - a[0]) * ab[0] + (q[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    let px = a[0] + t * ab[0];
    let py = a[1] + t * ab[1];
    ((q[0] - px).powi(2) + (q[1] - py).powi(2)).sqrt()
}
