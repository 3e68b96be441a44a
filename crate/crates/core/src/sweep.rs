//! Two-level parameter sweep over `⟨ω|χ₁⟩` on synthetic spectra.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PhaseWalkError, Result};
use crate::graph::Family;
use crate::schedule::{synthesize, total_iterations, ScheduleOptions};
use crate::spectrum::Spectrum;
use crate::subdivision::subdivide;

/// Squared overlaps below this are treated as exactly zero at the grid ends.
const ZERO_WEIGHT: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub overlap_chi1: f64,
    pub depth: usize,
    pub p: Vec<f64>,
    /// `(Π p_k - 1) / 2`.
    pub n_iter: f64,
    pub n_queries: usize,
    pub success: f64,
}

/// Single sweep point: eigenvalue 2 carries `⟨ω|χ₁⟩`, eigenvalue 1 the rest of
/// the nonuniform weight, so level 1 flips eigenvalue 1 and level 2 flips 2.
pub fn sweep_point(n: usize, overlap_chi1: f64, opts: &ScheduleOptions) -> Result<SweepRow> {
    let a_sq = 1.0 / n as f64;
    let mut flip_sq = 1.0 - a_sq - overlap_chi1 * overlap_chi1;
    if flip_sq.abs() < ZERO_WEIGHT {
        flip_sq = 0.0;
    }
    if flip_sq < 0.0 {
        return Err(PhaseWalkError::InvalidParameter(format!("overlap {overlap_chi1} exceeds sqrt(1 - 1/N)")));
    }
    let spec = Spectrum::synthetic(&[0, 1, 2], &[a_sq.sqrt(), flip_sq.sqrt(), overlap_chi1], n)?;
    let sub = subdivide(&spec)?;
    let schedule = synthesize(&sub, &Family::Custom, opts)?;
    let p = schedule.p_values();
    Ok(SweepRow {
        overlap_chi1,
        depth: sub.depth(),
        n_iter: total_iterations(&p),
        p,
        n_queries: schedule.n_queries,
        success: schedule.predicted_success,
    })
}

/// Evaluates `grid` evenly spaced points of `⟨ω|χ₁⟩ ∈ [0, sqrt(1 - 1/N)]`,
/// with the exact level-1 power. Rows come back in grid order.
pub fn sweep_d2(n: usize, grid: usize) -> Result<Vec<SweepRow>> {
    if n < 4 {
        return Err(PhaseWalkError::InvalidParameter(format!("sweep needs N >= 4, got {n}")));
    }
    if grid < 2 {
        return Err(PhaseWalkError::InvalidParameter(format!("sweep needs at least 2 grid points, got {grid}")));
    }
    let top = (1.0 - 1.0 / n as f64).sqrt();
    let opts = ScheduleOptions { exact_u1: Some(true), ..ScheduleOptions::default() };
    (0..grid)
        .into_par_iter()
        .map(|i| {
            let c = if i + 1 == grid { top } else { top * i as f64 / (grid - 1) as f64 };
            sweep_point(n, c, &opts)
        })
        .collect()
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("overlap_chi1,depth,p1,p2,n_iter,n_queries,success\n");
    for r in rows {
        let p2 = r.p.get(1).map_or(String::new(), |x| x.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.overlap_chi1, r.depth, r.p[0], p2, r.n_iter, r.n_queries, r.success
        ));
    }
    out
}
