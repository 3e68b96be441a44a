//! Krylov reduction `K(L, |ω⟩)` by Lanczos with full reorthogonalization.

use nalgebra::{DMatrix, DVector};

use super::model::{BasisLabel, ReducedModel};
use crate::error::{PhaseWalkError, Result};
use crate::graph::Graph;

/// Relative residual below which the Krylov space is taken as invariant.
pub const LANCZOS_BREAKDOWN_TOL: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Reduces the walk on `g` to the Krylov space of the marked vertex. Basis
/// vectors are signed so that `|s⟩` has nonnegative coordinates.
pub fn lanczos_reduce(g: &Graph, marked: usize, max_dim: usize) -> Result<ReducedModel> {
    let n = g.n_vertices();
    if marked >= n {
        return Err(PhaseWalkError::InvalidParameter(format!("marked vertex {marked} out of range 0..{n}")));
    }
    if max_dim < 2 && n > 1 {
        return Err(PhaseWalkError::InvalidParameter("max_dim must be at least 2".into()));
    }
    if !g.is_connected() {
        return Err(PhaseWalkError::Reduction("graph is disconnected".into()));
    }

    let mut q0 = vec![0.0; n];
    q0[marked] = 1.0;
    let mut basis: Vec<Vec<f64>> = vec![q0];
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut scale = 1.0f64;
    loop {
        let j = basis.len() - 1;
        let mut lq = vec![0.0; n];
        g.apply_laplacian(&basis[j], &mut lq);
        let mut w = lq.clone();
        images.push(lq);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        scale = scale.max(dot(&basis[j], &images[j]).abs());
        let beta = dot(&w, &w).sqrt();
        if beta <= LANCZOS_BREAKDOWN_TOL * scale {
            break;
        }
        if basis.len() == max_dim {
            return Err(PhaseWalkError::Reduction(format!(
                "no invariant subspace within {max_dim} dimensions (residual {beta:e})"
            )));
        }
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(w);
    }

    let dim = basis.len();
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let mut s: Vec<f64> = basis.iter().map(|q| q.iter().sum::<f64>() * inv_sqrt_n).collect();
    let signs: Vec<f64> = s.iter().map(|&x| if x < 0.0 { -1.0 } else { 1.0 }).collect();
    s.iter_mut().zip(&signs).for_each(|(x, sg)| *x *= sg);
    let s = DVector::from_vec(s);
    if (s.norm() - 1.0).abs() > 1e-8 {
        return Err(PhaseWalkError::Reduction(format!("uniform vector not captured (norm {})", s.norm())));
    }

    let mut t = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for k in i.saturating_sub(1)..(i + 2).min(dim) {
            let v = 0.5 * (dot(&basis[i], &images[k]) + dot(&basis[k], &images[i]));
            t[(i, k)] = signs[i] * signs[k] * v;
        }
    }
    let mut marked_vec = DVector::zeros(dim);
    marked_vec[0] = 1.0;
    let labels = (0..dim).map(|j| BasisLabel { label: format!("q{j}"), size: None }).collect();
    Ok(ReducedModel { laplacian: t, marked: marked_vec, s, basis: labels, n_vertices: n })
}
