//! Scheme-comparison sweeps and CSV emission.
//!
//! Each sweep cell runs the three schemes (alternating solver, 2D
//! exhaustive search, vertical baseline) on one scenario variant and emits
//! one row per scheme. Cells are independent and run in parallel when the
//! `parallel` feature is enabled; rows come out in a fixed order and with
//! fixed float formatting, so the CSV is byte-deterministic.

use crate::baselines;
use crate::config::RunConfig;
use crate::problem::Scenario;
use crate::solver::{self, SolverConfig};
use std::io::{self, Write};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const CSV_HEADER: &str = "scheme,gamma0,i_min,d_gb,eta,x,y,z,resolution,rate_bps,delay_s,iterations,status";

pub const SCHEME_BCD: &str = "proposed-BCD";
pub const SCHEME_ES: &str = "proposed-ES";
pub const SCHEME_CONVENTIONAL: &str = "conventional";

/// One output line of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub scheme: &'static str,
    pub gamma0: f64,
    pub i_min: f64,
    pub d_gb: f64,
    pub eta: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub resolution: f64,
    pub rate_bps: f64,
    pub delay_s: f64,
    pub iterations: u64,
    pub status: &'static str,
}

// 9 significant digits, fixed scientific notation.
fn fmt9(v: f64) -> String {
    format!("{v:.8e}")
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scheme,
            fmt9(self.gamma0),
            fmt9(self.i_min),
            fmt9(self.d_gb),
            fmt9(self.eta),
            fmt9(self.x),
            fmt9(self.y),
            fmt9(self.z),
            fmt9(self.resolution),
            fmt9(self.rate_bps),
            fmt9(self.delay_s),
            self.iterations,
            self.status
        )
    }

    fn infeasible(scheme: &'static str, s: &Scenario) -> Self {
        Self {
            scheme,
            gamma0: s.link.gamma0,
            i_min: s.i_min,
            d_gb: s.d_gb,
            eta: 0.0,
            x: 0.0,
            y: 0.0,
            z: 0.0,
            resolution: 0.0,
            rate_bps: 0.0,
            delay_s: 0.0,
            iterations: 0,
            status: "infeasible",
        }
    }
}

fn eta_of_placement(q: [f64; 2], s: &Scenario) -> f64 {
    if s.d_gb == 0.0 {
        return 0.0;
    }
    let dx = q[0] - s.gt.w_g[0];
    let dy = q[1] - s.gt.w_g[1];
    (dx * dx + dy * dy).sqrt() / s.d_gb
}

/// Runs all three schemes on one scenario.
pub fn scheme_rows(s: &Scenario, solver_cfg: &SolverConfig, es_step: f64) -> [SweepRow; 3] {
    let bcd = match solver::bcd_solve(s, solver_cfg) {
        Ok(r) => SweepRow {
            scheme: SCHEME_BCD,
            gamma0: s.link.gamma0,
            i_min: s.i_min,
            d_gb: s.d_gb,
            eta: r.point.eta,
            x: r.placement.q[0],
            y: r.placement.q[1],
            z: r.placement.z,
            resolution: r.resolution,
            rate_bps: r.rate,
            delay_s: r.delay,
            iterations: (r.trace.len() - 1) as u64,
            status: "ok",
        },
        Err(_) => SweepRow::infeasible(SCHEME_BCD, s),
    };
    let es = match baselines::exhaustive_search_2d(s, es_step) {
        Ok(r) => SweepRow {
            scheme: SCHEME_ES,
            gamma0: s.link.gamma0,
            i_min: s.i_min,
            d_gb: s.d_gb,
            eta: eta_of_placement(r.placement.q, s),
            x: r.placement.q[0],
            y: r.placement.q[1],
            z: r.placement.z,
            resolution: r.resolution,
            rate_bps: r.rate,
            delay_s: r.delay,
            iterations: r.evaluations,
            status: "ok",
        },
        Err(_) => SweepRow::infeasible(SCHEME_ES, s),
    };
    let conventional = match baselines::vertical_baseline(s) {
        Ok(r) => SweepRow {
            scheme: SCHEME_CONVENTIONAL,
            gamma0: s.link.gamma0,
            i_min: s.i_min,
            d_gb: s.d_gb,
            eta: 0.0,
            x: r.placement.q[0],
            y: r.placement.q[1],
            z: r.placement.z,
            resolution: r.resolution,
            rate_bps: r.rate,
            delay_s: r.delay,
            iterations: 1,
            status: "ok",
        },
        Err(_) => SweepRow::infeasible(SCHEME_CONVENTIONAL, s),
    };
    [bcd, es, conventional]
}

fn run_cells(cells: Vec<Scenario>, solver_cfg: &SolverConfig, es_step: f64) -> Vec<SweepRow> {
    #[cfg(feature = "parallel")]
    let per_cell: Vec<[SweepRow; 3]> = cells
        .par_iter()
        .map(|s| scheme_rows(s, solver_cfg, es_step))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let per_cell: Vec<[SweepRow; 3]> = cells
        .iter()
        .map(|s| scheme_rows(s, solver_cfg, es_step))
        .collect();
    per_cell.into_iter().flatten().collect()
}

/// Delay-versus-resolution sweep: every `gamma0` in the axis crossed with
/// every resolution requirement.
pub fn sweep_resolution(cfg: &RunConfig) -> Vec<SweepRow> {
    let base = &cfg.scenario;
    let mut cells = Vec::new();
    for &gamma0 in &cfg.sweep.gamma0 {
        for &i_min in &cfg.sweep.i_min {
            let mut link = base.link;
            link.gamma0 = gamma0;
            if let Ok(s) = Scenario::new(base.bs, base.gt, base.cam, link, i_min, base.alpha) {
                cells.push(s);
            }
        }
    }
    run_cells(cells, &cfg.solver, cfg.es_step)
}

/// Delay-versus-distance sweep: the target slides along its original
/// bearing from the BS; camera, BS, and link stay fixed.
pub fn sweep_distance(cfg: &RunConfig) -> Vec<SweepRow> {
    let base = &cfg.scenario;
    let bearing = if base.d_gb > 0.0 {
        [
            (base.gt.w_g[0] - base.bs.w_b[0]) / base.d_gb,
            (base.gt.w_g[1] - base.bs.w_b[1]) / base.d_gb,
        ]
    } else {
        [1.0, 0.0]
    };
    let mut cells = Vec::new();
    for &i_min in &cfg.sweep.i_min_distance {
        for &d_gb in &cfg.sweep.d_gb {
            let mut gt = base.gt;
            gt.w_g = [
                base.bs.w_b[0] + d_gb * bearing[0],
                base.bs.w_b[1] + d_gb * bearing[1],
            ];
            if let Ok(s) = Scenario::new(base.bs, gt, base.cam, base.link, i_min, base.alpha) {
                cells.push(s);
            }
        }
    }
    run_cells(cells, &cfg.solver, cfg.es_step)
}

/// The three schemes on the configured scenario itself.
pub fn compare(cfg: &RunConfig) -> Vec<SweepRow> {
    scheme_rows(&cfg.scenario, &cfg.solver, cfg.es_step).to_vec()
}

/// Writes rows as CSV with the fixed header, `\n` line endings.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        out.write_all(row.csv_line().as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
