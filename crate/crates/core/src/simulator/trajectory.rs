use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::ReducedModel;
use super::propagate::{BasisTag, Propagator};
use crate::error::{PhaseWalkError, Result};
use crate::graph::Graph;
use crate::schedule::PhaseWalkSchedule;

/// Trajectories hold at most this many samples under the default stride.
pub const MAX_DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub query_index: usize,
    /// Amplitudes over the active basis, each as `[re, im]`.
    pub amplitudes: Vec<Complex64>,
    pub prob_marked: f64,
    pub prob_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub basis: BasisTag,
    pub n_queries: usize,
    pub samples: Vec<Sample>,
    pub final_success: f64,
}

pub fn default_stride(n_queries: usize) -> usize {
    if n_queries <= MAX_DEFAULT_SAMPLES {
        1
    } else {
        n_queries.div_ceil(MAX_DEFAULT_SAMPLES)
    }
}

/// Runs the unrolled schedule from `|s⟩`, recording query 0, every
/// `stride`-th query, and the final state.
pub fn run_schedule_on(prop: &Propagator, schedule: &PhaseWalkSchedule, stride: usize) -> Result<Trajectory> {
    if prop.n_vertices() != schedule.n_vertices {
        return Err(PhaseWalkError::ModelScheduleMismatch(format!(
            "model describes {} vertices, schedule was built for {}",
            prop.n_vertices(),
            schedule.n_vertices
        )));
    }
    if stride == 0 {
        return Err(PhaseWalkError::InvalidParameter("sample stride must be positive".into()));
    }
    let sample = |query_index: usize, c: &nalgebra::DVector<Complex64>| Sample {
        query_index,
        amplitudes: prop.eigen_to_vertex(c).iter().copied().collect(),
        prob_marked: prop.prob_marked_eigen(c),
        prob_s: prop.prob_s_eigen(c),
    };
    let mut c = prop.initial_eigen();
    let mut samples = vec![sample(0, &c)];
    let n = schedule.unrolled.len();
    for (i, step) in schedule.unrolled.iter().enumerate() {
        prop.step_eigen(&mut c, step);
        let q = i + 1;
        if q % stride == 0 || q == n {
            samples.push(sample(q, &c));
        }
    }
    let final_success = samples.last().map_or(0.0, |s| s.prob_marked);
    Ok(Trajectory { basis: prop.basis().clone(), n_queries: n, samples, final_success })
}

/// Runs on a reduced model with the default stride.
pub fn run_schedule(model: &ReducedModel, schedule: &PhaseWalkSchedule) -> Result<Trajectory> {
    run_schedule_on(&Propagator::from_model(model), schedule, default_stride(schedule.n_queries))
}

/// Runs on the full vertex space with a dense eigendecomposition.
pub fn run_schedule_dense(g: &Graph, marked: usize, cap: usize, schedule: &PhaseWalkSchedule, stride: usize) -> Result<Trajectory> {
    run_schedule_on(&Propagator::from_graph(g, marked, cap)?, schedule, stride)
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        let width = self.samples.first().map_or(0, |s| s.amplitudes.len());
        let mut out = String::from("query,prob_marked,prob_s");
        for j in 0..width {
            write!(out, ",amp_re_{j},amp_im_{j}").unwrap();
        }
        out.push('\n');
        for s in &self.samples {
            write!(out, "{},{},{}", s.query_index, s.prob_marked, s.prob_s).unwrap();
            for a in &s.amplitudes {
                write!(out, ",{},{}", a.re, a.im).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn prob_marked_series(&self) -> Vec<(usize, f64)> {
        self.samples.iter().map(|s| (s.query_index, s.prob_marked)).collect()
    }
}
