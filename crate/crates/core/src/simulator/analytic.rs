//! Closed-form level iterates on the three-dimensional space `{|s⟩, |χ_k⟩, |χ̄_k⟩}`.
//!
//! With `|ω_{k-1}⟩` written in that basis, `U_k` acts as the walk phase
//! `diag(1, 1, -1)` composed with the reflection `I - 2|ω_{k-1}⟩⟨ω_{k-1}|`,
//! a rotation by `λ^{(k)}` about an axis orthogonal to `|χ̄_k⟩`.

use std::f64::consts::PI;

use nalgebra::{DVector, Matrix3, Vector3};

use super::propagate::Propagator;
use crate::subdivision::EigenvalueSubdivision;

/// `|ω_{k-1}⟩`: normalized projection of `|ω⟩` onto `span{|s⟩, |χ_{k-1}⟩}`.
pub fn omega_prev_coords(sub: &EigenvalueSubdivision, k: usize) -> Vector3<f64> {
    let lvl = sub.level(k);
    Vector3::new(sub.overlap_s, lvl.overlap_keep, lvl.overlap_flip).normalize()
}

/// `|ω_k⟩`: normalized projection of `|ω⟩` onto `span{|s⟩, |χ_k⟩}`.
pub fn omega_coords(sub: &EigenvalueSubdivision, k: usize) -> Vector3<f64> {
    Vector3::new(sub.overlap_s, sub.level(k).overlap_keep, 0.0).normalize()
}

/// The rotation angle `λ^{(k)}`; equals `π / p_k`.
pub fn eigenphase(sub: &EigenvalueSubdivision, k: usize) -> f64 {
    2.0 * omega_prev_coords(sub, k)[2].clamp(-1.0, 1.0).acos()
}

pub fn analytic_iterate_matrix(k: usize, sub: &EigenvalueSubdivision) -> Matrix3<f64> {
    let w = omega_prev_coords(sub, k);
    let walk = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
    walk * (Matrix3::identity() - 2.0 * w * w.transpose())
}

/// Real power of a proper rotation by Rodrigues' formula. At a half-turn the
/// axis orientation is chosen arbitrarily, which only matters for non-integer `p`.
pub fn rotation_power(r: &Matrix3<f64>, p: f64) -> Matrix3<f64> {
    let cos_a = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    let angle = cos_a.acos();
    if angle < 1e-14 {
        return Matrix3::identity();
    }
    let skew = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
    let axis = if skew.norm() > 1e-8 {
        skew.normalize()
    } else {
        let sym = (r + Matrix3::identity()) / 2.0;
        let j = (0..3).max_by(|&a, &b| sym[(a, a)].total_cmp(&sym[(b, b)])).unwrap();
        sym.column(j).normalize()
    };
    let angle = if skew.norm() > 1e-8 { angle } else { PI };
    let k = Matrix3::new(0.0, -axis[2], axis[1], axis[2], 0.0, -axis[0], -axis[1], axis[0], 0.0);
    let theta = p * angle;
    Matrix3::identity() + theta.sin() * k + (1.0 - theta.cos()) * (k * k)
}

/// `|s⟩`, `|χ_k⟩`, `|χ̄_k⟩` in the propagator's active basis, each paired with its
/// coordinate index. Empty directions (`|χ_d⟩`) are omitted.
pub fn level_basis(prop: &Propagator, sub: &EigenvalueSubdivision, k: usize) -> Vec<(usize, DVector<f64>)> {
    let lvl = sub.level(k);
    let mut out = vec![(0, prop.s_vector().clone())];
    for (idx, set) in [(1, &lvl.keep), (2, &lvl.flip)] {
        let v = prop.projection(set, sub.scale);
        let norm = v.norm();
        if norm > 1e-9 {
            out.push((idx, v / norm));
        }
    }
    out
}
