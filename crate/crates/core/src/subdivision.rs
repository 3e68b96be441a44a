//! The GCD eigenvalue ladder.
//!
//! Starting from the coupled nonzero eigenvalues `Λ₀`, each level picks the walk
//! time `t_k = π / gcd(Λ_{k-1})`. Every `λ ∈ Λ_{k-1}` is then an integer multiple
//! of the gcd; even multiples acquire phase `+1` under `e^{-i t_k λ}` and stay in
//! `Λ_k`, odd multiples acquire `-1` and move to `Λ̄_k`. The ladder stops at
//! `Λ_d = ∅`. All set arithmetic is exact on scaled integers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{PhaseWalkError, Result};
use crate::spectrum::{check_periodicity, Spectrum};

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_of(values: &[u64]) -> u64 {
    values.iter().fold(0, |acc, &v| gcd(acc, v))
}

/// One split of the ladder, on integers only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSplit {
    pub gcd: u64,
    /// `Λ_k`: even multiples of the gcd.
    pub keep: Vec<u64>,
    /// `Λ̄_k`: odd multiples of the gcd.
    pub flip: Vec<u64>,
}

/// Runs the subdivision on a set of positive integers.
pub fn subdivide_integers(values: &[u64]) -> Result<Vec<IntegerSplit>> {
    if values.is_empty() {
        return Err(PhaseWalkError::DegenerateGraph("no nonzero eigenvalues to subdivide".into()));
    }
    if values.contains(&0) {
        return Err(PhaseWalkError::InvalidParameter("subdivision input must be positive".into()));
    }
    let mut current: Vec<u64> = values.to_vec();
    current.sort_unstable();
    current.dedup();
    let mut splits = Vec::new();
    while !current.is_empty() {
        let g = gcd_of(&current);
        let (keep, flip): (Vec<u64>, Vec<u64>) = current.iter().partition(|&&l| (l / g).is_multiple_of(2));
        debug_assert!(!flip.is_empty());
        current = keep.clone();
        splits.push(IntegerSplit { gcd: g, keep, flip });
    }
    Ok(splits)
}

/// Number of distinct 2-adic valuations in a set of positive integers.
pub fn integral_depth(values: &[u64]) -> usize {
    let mut vals: Vec<u32> = values.iter().filter(|&&v| v > 0).map(|v| v.trailing_zeros()).collect();
    vals.sort_unstable();
    vals.dedup();
    vals.len()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionLevel {
    /// `t_k = π·scale / gcd`.
    pub walk_time: f64,
    pub gcd: u64,
    /// `Λ_k` (scaled).
    pub keep: Vec<u64>,
    /// `Λ̄_k` (scaled).
    pub flip: Vec<u64>,
    /// `⟨ω|χ_{k-1}⟩`.
    pub overlap_prev: f64,
    /// `⟨ω|χ_k⟩`.
    pub overlap_keep: f64,
    /// `⟨ω|χ̄_k⟩`.
    pub overlap_flip: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueSubdivision {
    pub levels: Vec<SubdivisionLevel>,
    /// `⟨ω|s⟩`.
    pub overlap_s: f64,
    pub n_vertices: usize,
    pub scale: u64,
    /// A valid period of the walk.
    pub period: f64,
    /// The coupled eigenvalues `Λ₀` with their overlaps.
    pub support: Vec<(u64, f64)>,
    /// Nonzero eigenvalues dropped for having no marked-vertex weight.
    pub decoupled: Vec<u64>,
}

impl EigenvalueSubdivision {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &SubdivisionLevel {
        &self.levels[k - 1]
    }

    pub fn walk_times(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.walk_time).collect()
    }

    /// `⟨ω|χ₀⟩`.
    pub fn overlap_chi0(&self) -> f64 {
        self.levels.first().map_or(0.0, |l| l.overlap_prev)
    }

    fn overlap_of(&self, set: &[u64]) -> f64 {
        self.support.iter().filter(|(l, _)| set.contains(l)).fold(0.0, |acc, (_, o)| acc + o * o).sqrt()
    }
}

pub fn subdivide(spec: &Spectrum) -> Result<EigenvalueSubdivision> {
    let support = spec.coupled_nonzero();
    if support.is_empty() {
        return Err(PhaseWalkError::DegenerateGraph(format!(
            "{}-vertex graph has no nonzero eigenvalue coupled to the marked vertex",
            spec.n_vertices
        )));
    }
    let values: Vec<u64> = support.iter().map(|(l, _)| *l).collect();
    let splits = subdivide_integers(&values)?;
    let mut sub = EigenvalueSubdivision {
        levels: Vec::with_capacity(splits.len()),
        overlap_s: spec.overlap_s(),
        n_vertices: spec.n_vertices,
        scale: spec.scale,
        period: check_periodicity(spec),
        support,
        decoupled: spec.decoupled_nonzero(),
    };
    let mut prev = values;
    for split in splits {
        let level = SubdivisionLevel {
            walk_time: PI * spec.scale as f64 / split.gcd as f64,
            gcd: split.gcd,
            overlap_prev: sub.overlap_of(&prev),
            overlap_keep: sub.overlap_of(&split.keep),
            overlap_flip: sub.overlap_of(&split.flip),
            keep: split.keep.clone(),
            flip: split.flip,
        };
        prev = split.keep;
        sub.levels.push(level);
    }
    Ok(sub)
}
