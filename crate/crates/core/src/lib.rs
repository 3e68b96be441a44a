//! Alternating phase-walk spatial search on periodic graphs.
//!
//! The pipeline runs graph → integral spectrum → GCD eigenvalue subdivision →
//! rounded phase-walk schedule → state-vector simulation:
//!
//! ```
//! use phasewalk_core::{build_johnson2, spectrum_for, subdivide, synthesize, model_for, run_schedule};
//! use phasewalk_core::{ScheduleOptions, SpectrumOptions};
//!
//! let g = build_johnson2(40).unwrap();
//! let spec = spectrum_for(&g, 0, &SpectrumOptions::default()).unwrap();
//! let sub = subdivide(&spec).unwrap();
//! let schedule = synthesize(&sub, g.family(), &ScheduleOptions::default()).unwrap();
//! let traj = run_schedule(&model_for(&g, 0).unwrap(), &schedule).unwrap();
//! assert!(traj.final_success > 0.5);
//! ```

pub mod acceptance;
pub mod error;
pub mod graph;
pub mod schedule;
pub mod simulator;
pub mod spectrum;
pub mod subdivision;
pub mod sweep;

pub use error::{PhaseWalkError, Result};
pub use graph::{
    build_complete, build_complete_square, build_family, build_hypercube, build_johnson2, build_rook, build_square,
    cartesian_product, parse_edge_list, read_edge_list, Family, Graph,
};
pub use schedule::{
    exact_u1_params, iteration_counts, synthesize, total_iterations, worst_case_iterations, ExactU1Mode,
    OuterRounding, PhaseWalkSchedule, ScheduleOptions, Step,
};
pub use simulator::{
    lanczos_reduce, model_for, reduced_model_closed_form, run_schedule, run_schedule_on, Propagator,
    ReducedModel, StateVector, Trajectory,
};
pub use spectrum::{closed_form_spectrum, numeric_spectrum, spectrum_for, Spectrum, SpectrumOptions};
pub use subdivision::{integral_depth, subdivide, EigenvalueSubdivision};
pub use sweep::{sweep_d2, SweepRow};
