//! Laplacian spectra with marked-vertex overlaps.
//!
//! Eigenvalues are stored as exact integers after multiplication by `scale`;
//! the true eigenvalue is `eigenvalues[i] / scale`. Each eigenvalue carries the
//! norm of the projection of the marked vertex onto its eigenspace, which is
//! basis-independent and nonnegative.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{PhaseWalkError, Result};
use crate::graph::{Family, Graph};

/// Eigenspaces whose marked-vertex projection norm is at most this are
/// treated as decoupled from the search dynamics.
pub const OVERLAP_CUTOFF: f64 = 1e-9;

/// Relative tolerance for merging numerically degenerate eigenvalues.
pub const DEGENERACY_TOL: f64 = 1e-6;

/// Relative tolerance for accepting a scaled eigenvalue as an integer.
pub const INTEGRALITY_TOL: f64 = 1e-6;

pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    ClosedForm,
    Numeric,
    /// Built directly from overlaps, without an underlying graph.
    Synthetic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Sorted distinct eigenvalues, multiplied by `scale`.
    pub eigenvalues: Vec<u64>,
    pub multiplicities: Vec<usize>,
    /// Marked-vertex projection norm per eigenspace.
    pub overlaps: Vec<f64>,
    pub scale: u64,
    pub source: SpectrumSource,
    pub n_vertices: usize,
    pub marked_vertex: usize,
}

impl Spectrum {
    /// Spectrum assembled from `(scaled eigenvalue, multiplicity, squared overlap)` triples.
    fn from_parts(parts: Vec<(u64, usize, f64)>, scale: u64, source: SpectrumSource, n: usize, marked: usize) -> Self {
        let mut merged: BTreeMap<u64, (usize, f64)> = BTreeMap::new();
        for (lambda, mult, overlap_sq) in parts {
            if mult == 0 {
                continue;
            }
            let entry = merged.entry(lambda).or_insert((0, 0.0));
            entry.0 += mult;
            entry.1 += overlap_sq;
        }
        Spectrum {
            eigenvalues: merged.keys().copied().collect(),
            multiplicities: merged.values().map(|v| v.0).collect(),
            overlaps: merged.values().map(|v| v.1.sqrt()).collect(),
            scale,
            source,
            n_vertices: n,
            marked_vertex: marked,
        }
    }

    /// A spectrum given only by eigenvalues and overlaps, as used for parameter
    /// sweeps. Multiplicities are recorded as 1.
    pub fn synthetic(eigenvalues: &[u64], overlaps: &[f64], n_vertices: usize) -> Result<Self> {
        if eigenvalues.len() != overlaps.len() {
            return Err(PhaseWalkError::InvalidParameter("eigenvalue/overlap length mismatch".into()));
        }
        if overlaps.iter().any(|&o| o.is_nan() || o < 0.0) {
            return Err(PhaseWalkError::InvalidParameter("overlaps must be nonnegative".into()));
        }
        let parts = eigenvalues.iter().zip(overlaps).map(|(&l, &o)| (l, 1, o * o)).collect();
        let spec = Self::from_parts(parts, 1, SpectrumSource::Synthetic, n_vertices, 0);
        if spec.eigenvalues.first() != Some(&0) {
            return Err(PhaseWalkError::InvalidParameter("spectrum must contain eigenvalue 0".into()));
        }
        Ok(spec)
    }

    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i] as f64 / self.scale as f64
    }

    /// `⟨ω|s⟩`, the overlap with the zero eigenspace.
    pub fn overlap_s(&self) -> f64 {
        match self.eigenvalues.first() {
            Some(0) => self.overlaps[0],
            _ => 0.0,
        }
    }

    /// Nonzero eigenvalues whose eigenspace couples to the marked vertex,
    /// paired with their overlaps. This is the set the subdivision starts from.
    pub fn coupled_nonzero(&self) -> Vec<(u64, f64)> {
        self.eigenvalues
            .iter()
            .zip(&self.overlaps)
            .filter(|(&l, &o)| l > 0 && o > OVERLAP_CUTOFF)
            .map(|(&l, &o)| (l, o))
            .collect()
    }

    /// Nonzero eigenvalues left out of the subdivision because the marked
    /// vertex has no weight in their eigenspace.
    pub fn decoupled_nonzero(&self) -> Vec<u64> {
        self.eigenvalues
            .iter()
            .zip(&self.overlaps)
            .filter(|(&l, &o)| l > 0 && o <= OVERLAP_CUTOFF)
            .map(|(&l, _)| l)
            .collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn overlap_norm_sq(&self) -> f64 {
        self.overlaps.iter().map(|o| o * o).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `(eigenvalue, multiplicity, squared overlap)`.
type Part = (u64, usize, f64);

/// Spectral parts for a family; all closed-form
/// families are vertex-transitive so the overlaps do not depend on the marked vertex.
fn closed_form_parts(family: &Family) -> Result<(Vec<Part>, usize)> {
    Ok(match family {
        Family::Complete { n } => {
            let n = *n;
            if n == 0 {
                return Err(PhaseWalkError::EmptyGraph("K_0".into()));
            }
            let nf = n as f64;
            (vec![(0, 1, 1.0 / nf), (n as u64, n - 1, (nf - 1.0) / nf)], n)
        }
        Family::Johnson2 { n } => {
            let n = *n;
            if n < 2 {
                return Err(PhaseWalkError::InvalidParameter(format!("J({n},2)")));
            }
            if n == 2 {
                return Ok((vec![(0, 1, 1.0)], 1));
            }
            let big_n = n * (n - 1) / 2;
            let nf = n as f64;
            let parts = vec![
                (0, 1, 1.0 / big_n as f64),
                (n as u64, n - 1, 2.0 / nf),
                (2 * (n as u64 - 1), n * (n - 3) / 2, (nf - 3.0) / (nf - 1.0)),
            ];
            (parts, big_n)
        }
        Family::Rook { n1, n2 } => closed_form_parts(&Family::CartesianProduct {
            left: Box::new(Family::Complete { n: *n1 }),
            right: Box::new(Family::Complete { n: *n2 }),
        })?,
        Family::Hypercube { m } => {
            let m = *m as u64;
            let n = 1u64 << m;
            let parts =
                (0..=m).map(|j| (2 * j, binomial(m, j) as usize, binomial(m, j) as f64 / n as f64)).collect();
            (parts, n as usize)
        }
        Family::Square => closed_form_parts(&Family::Hypercube { m: 2 })?,
        Family::CartesianProduct { left, right } => {
            let (lp, ln) = closed_form_parts(left)?;
            let (rp, rn) = closed_form_parts(right)?;
            let mut parts = Vec::with_capacity(lp.len() * rp.len());
            for &(la, ma, oa) in &lp {
                for &(lb, mb, ob) in &rp {
                    parts.push((la + lb, ma * mb, oa * ob));
                }
            }
            (parts, ln * rn)
        }
        Family::Custom => return Err(PhaseWalkError::UnsupportedFamily(family.to_string())),
    })
}

/// Exact spectrum for the supported families.
pub fn closed_form_spectrum(family: &Family, marked_vertex: usize) -> Result<Spectrum> {
    let (parts, n) = closed_form_parts(family)?;
    if marked_vertex >= n {
        return Err(PhaseWalkError::InvalidParameter(format!("marked vertex {marked_vertex} out of range 0..{n}")));
    }
    Ok(Spectrum::from_parts(parts, 1, SpectrumSource::ClosedForm, n, marked_vertex))
}

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    pub dense_cap: usize,
    /// Largest denominator accepted when rationalizing eigenvalues. Laplacians of
    /// unweighted graphs have integer characteristic polynomials, so any rational
    /// eigenvalue is an integer and the default of 1 loses nothing.
    pub max_denominator: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { dense_cap: DEFAULT_DENSE_CAP, max_denominator: 1 }
    }
}

/// Best rational approximation `p/q` with `q <= max_den`, via continued fractions.
pub fn rationalize(x: f64, max_den: u64) -> (i64, u64) {
    let (mut h_prev, mut h) = (1i64, x.floor() as i64);
    let (mut k_prev, mut k) = (0u64, 1u64);
    let mut frac = x - x.floor();
    while frac.abs() > 1e-12 {
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a > 1e12 {
            break;
        }
        let a = a as u64;
        let k_next = match a.checked_mul(k).and_then(|v| v.checked_add(k_prev)) {
            Some(v) if v <= max_den => v,
            _ => break,
        };
        let h_next = a as i64 * h + h_prev;
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
        frac = inv - inv.floor();
    }
    (h, k)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd_u64(b, a % b) }
}

/// Dense eigendecomposition fallback, for any graph under the size cap.
pub fn numeric_spectrum(g: &Graph, marked_vertex: usize, opts: &SpectrumOptions) -> Result<Spectrum> {
    let n = g.n_vertices();
    if n > opts.dense_cap {
        return Err(PhaseWalkError::Size { n, cap: opts.dense_cap });
    }
    if marked_vertex >= n {
        return Err(PhaseWalkError::InvalidParameter(format!("marked vertex {marked_vertex} out of range 0..{n}")));
    }
    let eig = SymmetricEigen::new(g.laplacian_dense());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    // (mean eigenvalue, multiplicity, squared overlap)
    let mut clusters: Vec<(f64, usize, f64)> = Vec::new();
    let mut anchor = f64::NAN;
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        let w = eig.eigenvectors[(marked_vertex, i)].powi(2);
        match clusters.last_mut() {
            Some(last) if (lambda - anchor).abs() <= DEGENERACY_TOL * anchor.abs().max(1.0) => {
                last.0 += lambda;
                last.1 += 1;
                last.2 += w;
            }
            _ => {
                anchor = lambda;
                clusters.push((lambda, 1, w));
            }
        }
    }
    for c in &mut clusters {
        c.0 /= c.1 as f64;
    }
    if clusters[0].0.abs() > DEGENERACY_TOL {
        return Err(PhaseWalkError::Reduction(format!("smallest Laplacian eigenvalue {} is not zero", clusters[0].0)));
    }
    if clusters[0].1 > 1 {
        return Err(PhaseWalkError::Disconnected(clusters[0].1));
    }

    let mut scale = 1u64;
    for c in clusters.iter().skip(1) {
        let (_, q) = rationalize(c.0, opts.max_denominator);
        scale = scale / gcd_u64(scale, q) * q;
        if scale > opts.max_denominator {
            return Err(PhaseWalkError::Periodicity { eigenvalue: c.0, scale });
        }
    }
    let mut parts = vec![(0u64, clusters[0].1, clusters[0].2)];
    for c in clusters.iter().skip(1) {
        let scaled = c.0 * scale as f64;
        let rounded = scaled.round();
        if rounded < 1.0 || (scaled - rounded).abs() > INTEGRALITY_TOL * rounded.max(1.0) {
            return Err(PhaseWalkError::Periodicity { eigenvalue: c.0, scale });
        }
        parts.push((rounded as u64, c.1, c.2));
    }
    Ok(Spectrum::from_parts(parts, scale, SpectrumSource::Numeric, n, marked_vertex))
}

/// Closed form when the family has one, dense numerics otherwise.
pub fn spectrum_for(g: &Graph, marked_vertex: usize, opts: &SpectrumOptions) -> Result<Spectrum> {
    match closed_form_spectrum(g.family(), marked_vertex) {
        Err(PhaseWalkError::UnsupportedFamily(_)) => numeric_spectrum(g, marked_vertex, opts),
        other => other,
    }
}

/// A valid (not necessarily minimal) period `τ = 2π·scale / gcd(Λ₀)` over all
/// nonzero eigenvalues. The single-vertex graph reports `2π`.
pub fn check_periodicity(spec: &Spectrum) -> f64 {
    let g = spec.eigenvalues.iter().filter(|&&l| l > 0).fold(0u64, |acc, &l| gcd_u64(acc, l));
    if g == 0 {
        2.0 * PI
    } else {
        2.0 * PI * spec.scale as f64 / g as f64
    }
}
