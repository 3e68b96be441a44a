use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{PhaseWalkError, Result};
use crate::graph::Family;
use crate::subdivision::EigenvalueSubdivision;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisLabel {
    pub label: String,
    /// Number of vertices in the superposition class, when the basis vector is one.
    pub size: Option<u64>,
}

/// Search dynamics restricted to a small invariant subspace containing `|ω⟩` and `|s⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedModel {
    pub laplacian: DMatrix<f64>,
    /// `|ω⟩` in this basis: `e_0` for class and Lanczos bases.
    pub marked: DVector<f64>,
    pub s: DVector<f64>,
    pub basis: Vec<BasisLabel>,
    pub n_vertices: usize,
}

impl ReducedModel {
    pub fn dimension(&self) -> usize {
        self.laplacian.nrows()
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.label.clone()).collect()
    }

    /// Eigenbasis model built from the coupled spectrum: basis `|s⟩` followed by
    /// the normalized projections of `|ω⟩` onto each coupled eigenspace.
    pub fn from_subdivision(sub: &EigenvalueSubdivision) -> Self {
        let dim = sub.support.len() + 1;
        let mut diag = vec![0.0];
        diag.extend(sub.support.iter().map(|(l, _)| *l as f64 / sub.scale as f64));
        let mut marked: Vec<f64> = vec![sub.overlap_s];
        marked.extend(sub.support.iter().map(|(_, o)| *o));
        let mut marked = DVector::from_vec(marked);
        marked.normalize_mut();
        let mut basis = vec![BasisLabel { label: "s".into(), size: None }];
        basis.extend(sub.support.iter().map(|(l, _)| BasisLabel {
            label: if sub.scale == 1 { format!("b[{l}]") } else { format!("b[{l}/{}]", sub.scale) },
            size: None,
        }));
        let mut s = DVector::zeros(dim);
        s[0] = 1.0;
        ReducedModel {
            laplacian: DMatrix::from_diagonal(&DVector::from_vec(diag)),
            marked,
            s,
            basis,
            n_vertices: sub.n_vertices,
        }
    }
}

/// Class Laplacian and labelled classes for a family.
fn class_model(family: &Family) -> Result<(DMatrix<f64>, Vec<BasisLabel>)> {
    let class = |label: &str, size: u64| BasisLabel { label: label.to_string(), size: Some(size) };
    Ok(match family {
        Family::Complete { n } => {
            let n = *n;
            if n == 0 {
                return Err(PhaseWalkError::EmptyGraph("K_0".into()));
            }
            if n == 1 {
                (DMatrix::zeros(1, 1), vec![class("{0}", 1)])
            } else {
                let m = (n - 1) as f64;
                let l = DMatrix::from_row_slice(2, 2, &[m, -m.sqrt(), -m.sqrt(), 1.0]);
                (l, vec![class("{0}", 1), class("rest", n as u64 - 1)])
            }
        }
        Family::Johnson2 { n } => {
            let n = *n;
            match n {
                0 | 1 => return Err(PhaseWalkError::InvalidParameter(format!("J({n},2)"))),
                2 => (DMatrix::zeros(1, 1), vec![class("{0,1}", 1)]),
                3 => class_model(&Family::Complete { n: 3 }).map(|(l, _)| {
                    (l, vec![class("{0,1}", 1), class("one common", 2)])
                })?,
                _ => {
                    let nf = n as f64;
                    let a = (2.0 * (nf - 2.0)).sqrt();
                    let b = 2.0 * (nf - 3.0).sqrt();
                    let l = DMatrix::from_row_slice(
                        3,
                        3,
                        &[2.0 * (nf - 2.0), -a, 0.0, -a, nf - 2.0, -b, 0.0, -b, 4.0],
                    );
                    let n = n as u64;
                    (l, vec![class("{0,1}", 1), class("one common", 2 * (n - 2)), class("disjoint", (n - 2) * (n - 3) / 2)])
                }
            }
        }
        Family::Rook { n1, n2 } => class_model(&Family::CartesianProduct {
            left: Box::new(Family::Complete { n: *n1 }),
            right: Box::new(Family::Complete { n: *n2 }),
        })?,
        Family::Hypercube { m } => {
            let m = *m as usize;
            let mut l = DMatrix::zeros(m + 1, m + 1);
            let mut labels = Vec::with_capacity(m + 1);
            let mut size = 1u64;
            for j in 0..=m {
                l[(j, j)] = m as f64;
                if j < m {
                    let off = -(((j + 1) * (m - j)) as f64).sqrt();
                    l[(j, j + 1)] = off;
                    l[(j + 1, j)] = off;
                }
                labels.push(class(&format!("weight {j}"), size));
                size = size * (m - j) as u64 / (j as u64 + 1);
            }
            (l, labels)
        }
        Family::Square => {
            let (l, _) = class_model(&Family::Hypercube { m: 2 })?;
            (l, vec![class("{0}", 1), class("{1,2}", 2), class("{3}", 1)])
        }
        Family::CartesianProduct { left, right } => {
            let (la, ca) = class_model(left)?;
            let (lb, cb) = class_model(right)?;
            let ia = DMatrix::<f64>::identity(la.nrows(), la.nrows());
            let ib = DMatrix::<f64>::identity(lb.nrows(), lb.nrows());
            let l = la.kronecker(&ib) + ia.kronecker(&lb);
            let mut labels = Vec::with_capacity(ca.len() * cb.len());
            for a in &ca {
                for b in &cb {
                    labels.push(BasisLabel {
                        label: format!("({}) x ({})", a.label, b.label),
                        size: a.size.zip(b.size).map(|(x, y)| x * y),
                    });
                }
            }
            (l, labels)
        }
        Family::Custom => return Err(PhaseWalkError::UnsupportedFamily(family.to_string())),
    })
}

/// Closed-form reduced basis of superposition classes; `|ω⟩` is class 0.
pub fn reduced_model_closed_form(family: &Family) -> Result<ReducedModel> {
    let (laplacian, basis) = class_model(family)?;
    let n: u64 = basis.iter().map(|b| b.size.unwrap_or(0)).sum();
    let s = DVector::from_iterator(basis.len(), basis.iter().map(|b| (b.size.unwrap_or(0) as f64 / n as f64).sqrt()));
    let mut marked = DVector::zeros(basis.len());
    marked[0] = 1.0;
    Ok(ReducedModel { laplacian, marked, s, basis, n_vertices: n as usize })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn sorted_eigs(m: &DMatrix<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn johnson5_matrix() {
        let m = reduced_model_closed_form(&Family::Johnson2 { n: 5 }).unwrap();
        let r6 = 6f64.sqrt();
        let r8 = 8f64.sqrt();
        let expected = DMatrix::from_row_slice(3, 3, &[6.0, -r6, 0.0, -r6, 3.0, -r8, 0.0, -r8, 4.0]);
        assert!((m.laplacian - expected).abs().max() < 1e-15);
        assert_eq!(m.n_vertices, 10);
        assert!((m.marked.dot(&m.s) - 1.0 / 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn johnson_reduced_eigenvalues() {
        for n in 5..=50 {
            let m = reduced_model_closed_form(&Family::Johnson2 { n }).unwrap();
            let e = sorted_eigs(&m.laplacian);
            let expected = [0.0, n as f64, 2.0 * (n as f64 - 1.0)];
            for (a, b) in e.iter().zip(expected) {
                assert!((a - b).abs() < 1e-10, "n = {n}: {e:?}");
            }
        }
    }

    #[test]
    fn rook_is_kronecker_sum_of_complete_blocks() {
        let m = reduced_model_closed_form(&Family::Rook { n1: 3, n2: 27 }).unwrap();
        assert_eq!(m.dimension(), 4);
        assert_eq!(m.n_vertices, 81);
        let e = sorted_eigs(&m.laplacian);
        for (a, b) in e.iter().zip([0.0, 3.0, 27.0, 30.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((m.s.norm() - 1.0).abs() < 1e-15);
        assert!(m.s.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn complete_square_has_six_classes() {
        let fam = crate::graph::build_complete_square(16).unwrap().family().clone();
        let m = reduced_model_closed_form(&fam).unwrap();
        assert_eq!(m.dimension(), 6);
        assert_eq!(m.n_vertices, 64);
        let e = sorted_eigs(&m.laplacian);
        for (a, b) in e.iter().zip([0.0, 2.0, 4.0, 16.0, 18.0, 20.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn small_and_unsupported() {
        assert_eq!(reduced_model_closed_form(&Family::Johnson2 { n: 2 }).unwrap().dimension(), 1);
        assert_eq!(reduced_model_closed_form(&Family::Johnson2 { n: 3 }).unwrap().dimension(), 2);
        assert_eq!(reduced_model_closed_form(&Family::Hypercube { m: 6 }).unwrap().n_vertices, 64);
        assert!(matches!(reduced_model_closed_form(&Family::Custom), Err(PhaseWalkError::UnsupportedFamily(_))));
    }
}
