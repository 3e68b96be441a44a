//! State-vector simulation of phase-walk schedules on reduced models or full graphs.

mod analytic;
mod lanczos;
mod model;
mod propagate;
mod trajectory;

pub use analytic::{
    analytic_iterate_matrix, eigenphase, level_basis, omega_coords, omega_prev_coords, rotation_power,
};
pub use lanczos::{lanczos_reduce, LANCZOS_BREAKDOWN_TOL};
pub use model::{reduced_model_closed_form, BasisLabel, ReducedModel};
pub use propagate::{apply_oracle, distance_up_to_phase, BasisTag, Propagator, StateVector, EIGEN_SNAP_TOL};
pub use trajectory::{
    default_stride, run_schedule, run_schedule_dense, run_schedule_on, Sample, Trajectory, MAX_DEFAULT_SAMPLES,
};

use crate::error::Result;
use crate::graph::{Family, Graph};

/// Default Krylov dimension limit for graphs without a closed-form reduction.
pub const DEFAULT_LANCZOS_DIM: usize = 256;

/// Closed-form class model when the family is known, Lanczos otherwise.
pub fn model_for(g: &Graph, marked: usize) -> Result<ReducedModel> {
    match g.family() {
        Family::Custom => lanczos_reduce(g, marked, DEFAULT_LANCZOS_DIM),
        fam if g.is_vertex_transitive() => reduced_model_closed_form(fam),
        _ => lanczos_reduce(g, marked, DEFAULT_LANCZOS_DIM),
    }
}
