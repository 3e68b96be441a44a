//! Phase-walk schedule synthesis.
//!
//! The search applies `U_1^{r_1} U_2^{r_2} ... U_d^{r_d} |s⟩` with nested iterates
//! `U_1 = U_w(t_1) U_f(π)` and `U_k = U_w(t_k) U_{k-1}^{p_{k-1}}`. Real-valued
//! powers are rounded to integers; for level 1 the power `U_1^{p_1}` can instead
//! be realized exactly with generalized oracle phases.
//!
//! A schedule is unrolled into [`Step`]s. Each step is one oracle query
//! `U_f(phase)` followed by the walk `U_w(walk_time)`; consecutive walks at the
//! end of a nested block are merged into the preceding step.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{PhaseWalkError, Result};
use crate::graph::Family;
use crate::simulator::{run_schedule_on, Propagator, ReducedModel};
use crate::subdivision::EigenvalueSubdivision;

/// Slack allowed on trigonometric arguments before declaring a domain error.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Distance from one half within which an outer exponent counts as a tie.
pub const HALF_TIE_TOL: f64 = 1e-9;

fn checked_unit(x: f64, context: &'static str) -> Result<f64> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(PhaseWalkError::NumericalDomain { context, value: x });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// `p_k = π / (2 arccos(⟨ω|χ̄_k⟩ / sqrt(⟨ω|s⟩² + ⟨ω|χ_{k-1}⟩²)))` for `k = 1..=d`.
pub fn iteration_counts(sub: &EigenvalueSubdivision) -> Result<Vec<f64>> {
    let s_sq = sub.overlap_s * sub.overlap_s;
    sub.levels
        .iter()
        .map(|lvl| {
            let x = lvl.overlap_flip / (s_sq + lvl.overlap_prev * lvl.overlap_prev).sqrt();
            let x = checked_unit(x, "iteration count arccos")?;
            Ok(PI / (2.0 * x.acos()))
        })
        .collect()
}

/// `N_iter = (Π p_k - 1) / 2`.
pub fn total_iterations(p: &[f64]) -> f64 {
    0.5 * (p.iter().product::<f64>() - 1.0)
}

/// Query count at the equal-`p` extremum for an `N`-vertex graph of depth `d`.
pub fn worst_case_iterations(n: usize, d: u32) -> f64 {
    let x = (1.0 - (n as f64).powf(-1.0 / d as f64)).sqrt();
    0.5 * (-1.0 + (PI / 2.0).powi(d as i32) / x.acos().powi(d as i32))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuterRounding {
    /// Nearest integer, exact halves rounded down.
    #[default]
    HalfDown,
    /// Nearest integer, exact halves rounded up.
    HalfUp,
}

/// Rounds an outer exponent `(p_k - 1) / 2`.
pub fn round_outer(x: f64, mode: OuterRounding) -> u64 {
    let floor = x.floor();
    let frac = x - floor;
    let up = match mode {
        OuterRounding::HalfDown => frac > 0.5 + HALF_TIE_TOL,
        OuterRounding::HalfUp => frac >= 0.5 - HALF_TIE_TOL,
    };
    (floor as u64) + up as u64
}

/// Rounds an inner power `p_k` half-up.
pub fn round_inner(x: f64) -> u64 {
    (x + 0.5).floor() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ExactU1Mode {
    /// `U_1(θ)^{p1'}` with `U_1(θ) = U_w(t_1) U_f(-θ) U_w(t_1) U_f(θ)`.
    Parametrized { p1_prime: u64, theta: f64 },
    /// `U_w(t_1) U_f(θ) U_w(t_1) U_f(φ) U_w(t_1) U_f(θ)`.
    ThreePhase { theta: f64, phi: f64 },
}

impl ExactU1Mode {
    pub fn queries(&self) -> u64 {
        match self {
            ExactU1Mode::Parametrized { p1_prime, .. } => 2 * p1_prime,
            ExactU1Mode::ThreePhase { .. } => 3,
        }
    }

    /// The query sequence realizing `U_1^{p_1}` for first walk time `t1`.
    pub fn steps(&self, t1: f64) -> Vec<Step> {
        match *self {
            ExactU1Mode::Parametrized { p1_prime, theta } => (0..p1_prime)
                .flat_map(|_| [Step::new(t1, theta), Step::new(t1, -theta)])
                .collect(),
            ExactU1Mode::ThreePhase { theta, phi } => {
                vec![Step::new(t1, theta), Step::new(t1, phi), Step::new(t1, theta)]
            }
        }
    }
}

pub fn exact_u1_params(p1: f64) -> Result<ExactU1Mode> {
    if p1.is_nan() || p1 < 1.0 - DOMAIN_SLACK {
        return Err(PhaseWalkError::NumericalDomain { context: "exact U1 requires p1 >= 1", value: p1 });
    }
    if p1 >= 2.0 {
        let p1_prime = (p1 / 2.0 - HALF_TIE_TOL).ceil().max(1.0);
        let arg = (PI / (2.0 * p1_prime)).sin() / (PI / p1).sin();
        let arg = checked_unit(arg, "parametrized exact U1 arcsin")?;
        Ok(ExactU1Mode::Parametrized { p1_prime: p1_prime as u64, theta: 2.0 * arg.asin() })
    } else {
        let p1 = p1.max(1.0);
        let arg = checked_unit(0.5 / (PI / (2.0 * p1)).sin(), "three-phase exact U1 arcsin")?;
        let theta = 2.0 * arg.asin();
        let phi = -2.0 * ((theta / 2.0).tan() / (PI / p1).cos()).atan();
        Ok(ExactU1Mode::ThreePhase { theta, phi })
    }
}

/// One oracle query followed by a walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Step {
    pub walk_time: f64,
    pub phase: f64,
}

impl Step {
    pub fn new(walk_time: f64, phase: f64) -> Self {
        Step { walk_time, phase }
    }
}

impl From<(f64, f64)> for Step {
    fn from((walk_time, phase): (f64, f64)) -> Self {
        Step { walk_time, phase }
    }
}

impl From<Step> for (f64, f64) {
    fn from(s: Step) -> Self {
        (s.walk_time, s.phase)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSchedule {
    #[serde(rename = "t")]
    pub walk_time: f64,
    pub p: f64,
    /// `r_k`, the rounded outer exponent.
    pub outer: u64,
    /// Rounded `p_k`, used where `U_k^{p_k}` is nested inside `U_{k+1}`.
    pub inner: Option<u64>,
    /// Unrounded `(p_k - 1) / 2`.
    pub outer_exact: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleOptions {
    /// `None` engages the exact `U_1^{p_1}` realization only for depth 2.
    pub exact_u1: Option<bool>,
    pub outer_rounding: OuterRounding,
    /// Append the two-query finisher on `K_n □ Q_2`, `n ≡ 0 mod 8`.
    pub finisher: bool,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        ScheduleOptions { exact_u1: None, outer_rounding: OuterRounding::HalfDown, finisher: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseWalkSchedule {
    pub levels: Vec<LevelSchedule>,
    pub exact_u1: Option<ExactU1Mode>,
    pub finisher: Option<Vec<Step>>,
    pub unrolled: Vec<Step>,
    pub n_queries: usize,
    pub predicted_success: f64,
    pub period: f64,
    pub n_vertices: usize,
    pub outer_rounding: OuterRounding,
}

impl PhaseWalkSchedule {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn p_values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.p).collect()
    }

    /// Oracle queries implied by the structured form alone.
    pub fn structured_query_count(&self) -> u64 {
        let mut total = 0;
        let mut cost = 1u64;
        for (idx, lvl) in self.levels.iter().enumerate() {
            if idx > 0 {
                cost = match (idx, self.exact_u1) {
                    (1, Some(mode)) => mode.queries(),
                    _ => self.levels[idx - 1].inner.expect("nested level has an inner count") * cost,
                };
            }
            total += lvl.outer * cost;
        }
        total + self.finisher.as_ref().map_or(0, |f| f.len() as u64)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn merge_walk(step: &mut Step, t: f64, period: f64) {
    let mut total = step.walk_time + t;
    if total > period {
        total -= period * (total / period).floor();
        if total <= 0.0 {
            total = period;
        }
    }
    step.walk_time = total;
}

/// Builds unrolled iterates from the structured form.
struct Unroller<'a> {
    times: &'a [f64],
    inner: Vec<u64>,
    exact: Option<ExactU1Mode>,
    period: f64,
}

impl Unroller<'_> {
    /// One application of `U_k`, `k` counted from 1.
    fn iterate(&self, k: usize) -> Vec<Step> {
        let mut steps = if k == 1 {
            vec![Step::new(0.0, PI)]
        } else if let (2, Some(mode)) = (k, self.exact) {
            mode.steps(self.times[0])
        } else {
            let block = self.iterate(k - 1);
            let reps = self.inner[k - 2] as usize;
            let mut out = Vec::with_capacity(block.len() * reps);
            for _ in 0..reps {
                out.extend_from_slice(&block);
            }
            out
        };
        let last = steps.last_mut().expect("iterate is never empty");
        merge_walk(last, self.times[k - 1], self.period);
        steps
    }
}

/// Step sequence for a single application of `U_k`, with the given real
/// iteration counts and an optional exact level-1 realization.
pub fn iterate_steps(
    sub: &EigenvalueSubdivision,
    p: &[f64],
    k: usize,
    exact: Option<ExactU1Mode>,
) -> Vec<Step> {
    let times = sub.walk_times();
    let unroller = Unroller { times: &times, inner: p.iter().map(|&x| round_inner(x)).collect(), exact, period: sub.period };
    unroller.iterate(k)
}

pub fn synthesize(sub: &EigenvalueSubdivision, family: &Family, opts: &ScheduleOptions) -> Result<PhaseWalkSchedule> {
    let d = sub.depth();
    let p = iteration_counts(sub)?;
    let times = sub.walk_times();
    let levels: Vec<LevelSchedule> = p
        .iter()
        .zip(&times)
        .enumerate()
        .map(|(idx, (&pk, &t))| LevelSchedule {
            walk_time: t,
            p: pk,
            outer: round_outer((pk - 1.0) / 2.0, opts.outer_rounding),
            inner: (idx + 1 < d).then(|| round_inner(pk)),
            outer_exact: (pk - 1.0) / 2.0,
        })
        .collect();

    let use_exact = opts.exact_u1.unwrap_or(d == 2) && d >= 2;
    let exact = if use_exact { Some(exact_u1_params(p[0])?) } else { None };

    let finisher = match family.complete_square_n() {
        Some(n) if opts.finisher && n % 8 == 0 && d >= 2 => {
            let mut second = Step::new(times[0], PI / 2.0);
            merge_walk(&mut second, times[1], sub.period);
            Some(vec![Step::new(times[0], -PI / 2.0), second])
        }
        _ => None,
    };

    let unroller = Unroller { times: &times, inner: levels.iter().map(|l| round_inner(l.p)).collect(), exact, period: sub.period };
    let mut unrolled = Vec::new();
    for k in (1..=d).rev() {
        let outer = levels[k - 1].outer as usize;
        if outer == 0 {
            continue;
        }
        let block = unroller.iterate(k);
        for _ in 0..outer {
            unrolled.extend_from_slice(&block);
        }
    }
    if let Some(f) = &finisher {
        unrolled.extend_from_slice(f);
    }

    let mut schedule = PhaseWalkSchedule {
        levels,
        exact_u1: exact,
        finisher,
        n_queries: unrolled.len(),
        unrolled,
        predicted_success: 0.0,
        period: sub.period,
        n_vertices: sub.n_vertices,
        outer_rounding: opts.outer_rounding,
    };
    let model = ReducedModel::from_subdivision(sub);
    let propagator = Propagator::from_model(&model);
    schedule.predicted_success = run_schedule_on(&propagator, &schedule, usize::MAX)?.final_success;
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::closed_form_spectrum;
    use crate::subdivision::subdivide;
    use proptest::prelude::*;

    fn sub_for(fam: &Family) -> EigenvalueSubdivision {
        subdivide(&closed_form_spectrum(fam, 0).unwrap()).unwrap()
    }

    #[test]
    fn complete_iteration_count() {
        let p = iteration_counts(&sub_for(&Family::Complete { n: 4 })).unwrap();
        assert!((p[0] - 3.0).abs() < 1e-12);
        let p = iteration_counts(&sub_for(&Family::Complete { n: 1024 })).unwrap();
        let expected = PI / (2.0 * (1023.0f64 / 1024.0).sqrt().acos());
        assert!((p[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn johnson_256_counts_match_closed_forms() {
        let p = iteration_counts(&sub_for(&Family::Johnson2 { n: 256 })).unwrap();
        let p1 = PI / (2.0 * (253.0f64 / 255.0).sqrt().acos());
        let p2 = PI / (2.0 * (255.0f64 / 256.0).sqrt().acos());
        assert!((p[0] - p1).abs() < 1e-9);
        assert!((p[1] - p2).abs() < 1e-9);
    }

    #[test]
    fn complete_square_counts_are_two() {
        for n in [8, 16, 24, 64] {
            let fam = crate::graph::build_complete_square(n).unwrap().family().clone();
            let p = iteration_counts(&sub_for(&fam)).unwrap();
            assert!((p[0] - 2.0).abs() < 1e-12 && (p[1] - 2.0).abs() < 1e-12, "n = {n}: {p:?}");
            let p3 = PI / (2.0 * (1.0 - 1.0 / n as f64).sqrt().acos());
            assert!((p[2] - p3).abs() < 1e-9);
        }
    }

    #[test]
    fn total_iteration_identities() {
        assert_eq!(total_iterations(&[3.0]), 1.0);
        let p = [4.3470, 35.535, 2.5];
        let nested: f64 = (0..p.len())
            .map(|k| 0.5 * (p[k] - 1.0) * p[..k].iter().product::<f64>())
            .sum();
        assert!((nested - total_iterations(&p)).abs() < 1e-9);

        let cs = crate::graph::build_complete_square(16).unwrap().family().clone();
        let p = iteration_counts(&sub_for(&cs)).unwrap();
        let expected = 0.5 * (2.0 * 2.0 * p[2] - 1.0);
        assert!((total_iterations(&p) - expected).abs() < 1e-12);
    }

    #[test]
    fn worst_case_values() {
        let n = 1_000_000;
        let grover = worst_case_iterations(n, 1);
        assert!((grover / (PI / 4.0 * (n as f64).sqrt()) - 1.0).abs() < 1e-3);
        let w = worst_case_iterations(4096, 2);
        assert!((w - 78.04).abs() < 0.01, "{w}");
        let mut prev = 0.0;
        for d in 1..4 {
            for n in (16..100_000).step_by(997) {
                let v = worst_case_iterations(n, d);
                if n > 16 {
                    assert!(v > prev);
                }
                prev = v;
            }
        }
    }

    #[test]
    fn rounding_rules() {
        assert_eq!(round_outer(0.5, OuterRounding::HalfDown), 0);
        assert_eq!(round_outer(0.5 + 1e-13, OuterRounding::HalfDown), 0);
        assert_eq!(round_outer(0.5, OuterRounding::HalfUp), 1);
        assert_eq!(round_outer(24.62, OuterRounding::HalfDown), 25);
        assert_eq!(round_outer(2.3, OuterRounding::HalfUp), 2);
        assert_eq!(round_inner(2.5), 3);
        assert_eq!(round_inner(4.347), 4);
        assert_eq!(round_inner(2.0000000000000004), 2);
    }

    #[test]
    fn exact_u1_modes() {
        match exact_u1_params(2.0).unwrap() {
            ExactU1Mode::Parametrized { p1_prime, theta } => {
                assert_eq!(p1_prime, 1);
                assert!((theta - PI).abs() < 1e-7);
            }
            m => panic!("{m:?}"),
        }
        let p1 = PI / (2.0 * (2.0f64 / 257.0).sqrt().acos());
        assert!(p1 > 1.0 && p1 < 2.0);
        match exact_u1_params(p1).unwrap() {
            ExactU1Mode::ThreePhase { theta, phi } => assert!(theta.is_finite() && phi.is_finite()),
            m => panic!("{m:?}"),
        }
        match exact_u1_params(4.3470).unwrap() {
            ExactU1Mode::Parametrized { p1_prime, theta } => {
                assert_eq!(p1_prime, 3);
                let expected = 2.0 * ((PI / 6.0).sin() / (PI / 4.3470).sin()).asin();
                assert!((theta - expected).abs() < 1e-14);
            }
            m => panic!("{m:?}"),
        }
        assert!(exact_u1_params(0.5).is_err());
        // three-phase angles stay real on the whole [1, 2) range
        for i in 0..1000 {
            let p1 = 1.0 + i as f64 / 1000.0;
            assert!(matches!(exact_u1_params(p1).unwrap(), ExactU1Mode::ThreePhase { .. }));
        }
    }

    #[test]
    fn exact_u1_cost_bound() {
        for i in 0..=100_000 {
            let p1 = 2.0 + i as f64 * (1e4 - 2.0) / 100_000.0;
            let p1_prime = (p1 / 2.0 - HALF_TIE_TOL).ceil() as u64;
            assert!(2 * p1_prime <= 2 * round_inner(p1) + 2);
        }
    }

    #[test]
    fn grover_schedule_on_complete() {
        let fam = Family::Complete { n: 1024 };
        let sched = synthesize(&sub_for(&fam), &fam, &ScheduleOptions::default()).unwrap();
        assert_eq!(sched.n_queries, 25);
        assert!(sched.unrolled.iter().all(|s| s.phase == PI && (s.walk_time - PI / 1024.0).abs() < 1e-15));
        assert!(sched.predicted_success >= 1.0 - 1.0 / 1024.0);
        assert!(sched.exact_u1.is_none());
    }

    #[test]
    fn complete_square_schedule_shape() {
        let fam = crate::graph::build_complete_square(16).unwrap().family().clone();
        let sub = sub_for(&fam);
        let sched = synthesize(&sub, &fam, &ScheduleOptions::default()).unwrap();
        assert_eq!(sched.levels[0].outer, 0);
        assert_eq!(sched.levels[1].outer, 0);
        let fin = sched.finisher.as_ref().unwrap();
        assert_eq!(fin.len(), 2);
        assert_eq!(fin[0], Step::new(PI / 2.0, -PI / 2.0));
        assert_eq!(fin[1], Step::new(PI / 2.0 + PI / 4.0, PI / 2.0));
        assert_eq!(sched.n_queries as u64, sched.structured_query_count());

        // no finisher off the n ≡ 0 mod 8 residue class
        let fam12 = crate::graph::build_complete_square(12).unwrap().family().clone();
        let s12 = synthesize(&sub_for(&fam12), &fam12, &ScheduleOptions::default()).unwrap();
        assert!(s12.finisher.is_none());
    }

    #[test]
    fn query_bookkeeping_and_step_invariants() {
        let cs = crate::graph::build_complete_square(24).unwrap().family().clone();
        let fams = [
            Family::Johnson2 { n: 256 },
            Family::Johnson2 { n: 257 },
            Family::Johnson2 { n: 258 },
            Family::Rook { n1: 8, n2: 512 },
            Family::Hypercube { m: 10 },
            cs,
        ];
        for fam in fams {
            let sub = sub_for(&fam);
            for exact in [None, Some(true), Some(false)] {
                for outer_rounding in [OuterRounding::HalfDown, OuterRounding::HalfUp] {
                    let opts = ScheduleOptions { exact_u1: exact, outer_rounding, finisher: true };
                    let s = synthesize(&sub, &fam, &opts).unwrap();
                    assert_eq!(s.unrolled.len() as u64, s.structured_query_count(), "{fam}");
                    assert_eq!(s.unrolled.len(), s.n_queries);
                    for step in &s.unrolled {
                        assert!(step.walk_time > 0.0 && step.walk_time <= s.period + 1e-12);
                        assert!(step.phase > -2.0 * PI && step.phase <= 2.0 * PI);
                    }
                    assert!(s.levels.iter().all(|l| l.p >= 1.0));
                }
            }
        }
    }

    #[test]
    fn default_exact_u1_only_at_depth_two() {
        let j = Family::Johnson2 { n: 257 };
        let s = synthesize(&sub_for(&j), &j, &ScheduleOptions::default()).unwrap();
        assert!(matches!(s.exact_u1, Some(ExactU1Mode::ThreePhase { .. })));
        let q = Family::Hypercube { m: 10 };
        let s = synthesize(&sub_for(&q), &q, &ScheduleOptions::default()).unwrap();
        assert_eq!(s.depth(), 4);
        assert!(s.exact_u1.is_none());
    }

    #[test]
    fn json_shape_and_round_trip() {
        let fam = Family::Rook { n1: 8, n2: 512 };
        let s = synthesize(&sub_for(&fam), &fam, &ScheduleOptions::default()).unwrap();
        let text = s.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["levels", "exact_u1", "finisher", "unrolled", "n_queries"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["levels"][0].get("t").is_some());
        assert!(v["unrolled"][0].is_array());
        assert_eq!(v["exact_u1"]["mode"], "parametrized");
        assert_eq!(PhaseWalkSchedule::from_json(&text).unwrap(), s);
    }

    fn family() -> impl Strategy<Value = Family> {
        prop_oneof![
            (3usize..400).prop_map(|n| Family::Complete { n }),
            (4usize..400).prop_map(|n| Family::Johnson2 { n }),
            (2usize..12, 2usize..80).prop_map(|(n1, n2)| Family::Rook { n1, n2 }),
            (1u32..12).prop_map(|m| Family::Hypercube { m }),
        ]
    }

    proptest! {
        #[test]
        fn query_counts_are_consistent(fam in family()) {
            let s = synthesize(&sub_for(&fam), &fam, &ScheduleOptions::default()).unwrap();
            prop_assert_eq!(s.n_queries, s.unrolled.len());
            prop_assert_eq!(s.n_queries as u64, s.structured_query_count());
            prop_assert!((0.0..=1.0 + 1e-12).contains(&s.predicted_success));
            prop_assert!(s.levels.iter().all(|l| l.p >= 1.0));
        }

        #[test]
        fn outer_rounding_is_nearest(x in 0.0f64..1e6) {
            for mode in [OuterRounding::HalfDown, OuterRounding::HalfUp] {
                let r = round_outer(x, mode) as f64;
                prop_assert!((r - x).abs() <= 0.5 + 1e-9);
            }
            let frac = x - x.floor();
            if (frac - 0.5).abs() > 1e-6 {
                prop_assert_eq!(round_outer(x, OuterRounding::HalfDown), round_outer(x, OuterRounding::HalfUp));
            }
        }
    }
}
