//! Shared fixtures for the pipeline benchmarks.

use phasewalk_core::{
    closed_form_spectrum, subdivide, synthesize, EigenvalueSubdivision, Family, PhaseWalkSchedule, ScheduleOptions,
};

/// Families covering depths 1, 2 and 3 with the closed-form pipeline.
pub fn families() -> Vec<(&'static str, Family)> {
    vec![
        ("johnson2_258", Family::Johnson2 { n: 258 }),
        ("rook_8x512", Family::Rook { n1: 8, n2: 512 }),
        ("hypercube_12", Family::Hypercube { m: 12 }),
        (
            "complete16_square",
            Family::CartesianProduct { left: Box::new(Family::Complete { n: 16 }), right: Box::new(Family::Square) },
        ),
    ]
}

pub fn subdivision(family: &Family) -> EigenvalueSubdivision {
    subdivide(&closed_form_spectrum(family, 0).expect("closed form")).expect("periodic")
}

pub fn schedule(family: &Family) -> PhaseWalkSchedule {
    synthesize(&subdivision(family), family, &ScheduleOptions::default()).expect("schedule")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for (name, f) in families() {
            assert!(schedule(&f).n_queries > 0, "{name}");
        }
    }
}
