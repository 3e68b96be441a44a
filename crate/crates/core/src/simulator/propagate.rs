use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::ReducedModel;
use crate::error::{PhaseWalkError, Result};
use crate::graph::Graph;
use crate::schedule::Step;

/// Relative distance under which a computed eigenvalue is snapped to an integer.
pub const EIGEN_SNAP_TOL: f64 = 1e-9;

/// Tolerance on eigenvalue matching when building spectral projections.
const SET_MATCH_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisTag {
    Full,
    Reduced { labels: Vec<String> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: DVector<Complex64>,
    pub basis: BasisTag,
}

impl StateVector {
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }
}

/// `U_f(θ)` on a basis component: multiplies amplitude `marked` by `e^{-iθ}`.
pub fn apply_oracle(state: &mut StateVector, theta: f64, marked: usize) {
    state.amplitudes[marked] *= Complex64::cis(-theta);
}

/// Walk and oracle on a fixed active basis, using the Laplacian eigendecomposition.
#[derive(Clone, Debug)]
pub struct Propagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    marked: DVector<f64>,
    s: DVector<f64>,
    marked_eig: DVector<f64>,
    s_eig: DVector<f64>,
    basis: BasisTag,
    n_vertices: usize,
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= EIGEN_SNAP_TOL * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

fn split(v: &DVector<Complex64>) -> (DVector<f64>, DVector<f64>) {
    (v.map(|c| c.re), v.map(|c| c.im))
}

fn join(re: DVector<f64>, im: DVector<f64>) -> DVector<Complex64> {
    re.zip_map(&im, Complex64::new)
}

impl Propagator {
    fn new(laplacian: DMatrix<f64>, marked: DVector<f64>, s: DVector<f64>, basis: BasisTag, n_vertices: usize) -> Self {
        let eig = SymmetricEigen::new(laplacian);
        let eigenvalues = eig.eigenvalues.map(snap);
        let eigenvectors = eig.eigenvectors;
        let marked_eig = eigenvectors.tr_mul(&marked);
        let s_eig = eigenvectors.tr_mul(&s);
        Propagator { eigenvalues, eigenvectors, marked, s, marked_eig, s_eig, basis, n_vertices }
    }

    pub fn from_model(model: &ReducedModel) -> Self {
        Self::new(
            model.laplacian.clone(),
            model.marked.clone(),
            model.s.clone(),
            BasisTag::Reduced { labels: model.labels() },
            model.n_vertices,
        )
    }

    /// Dense propagator over the vertex basis; refuses graphs above `cap` vertices.
    pub fn from_graph(g: &Graph, marked: usize, cap: usize) -> Result<Self> {
        let n = g.n_vertices();
        if n > cap {
            return Err(PhaseWalkError::Size { n, cap });
        }
        if marked >= n {
            return Err(PhaseWalkError::InvalidParameter(format!("marked vertex {marked} out of range 0..{n}")));
        }
        let mut m = DVector::zeros(n);
        m[marked] = 1.0;
        let s = DVector::from_element(n, 1.0 / (n as f64).sqrt());
        Ok(Self::new(g.laplacian_dense(), m, s, BasisTag::Full, n))
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn basis(&self) -> &BasisTag {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn marked_vector(&self) -> &DVector<f64> {
        &self.marked
    }

    pub fn s_vector(&self) -> &DVector<f64> {
        &self.s
    }

    pub fn state(&self, v: &DVector<f64>) -> StateVector {
        StateVector { amplitudes: v.map(Complex64::from), basis: self.basis.clone() }
    }

    pub fn initial_state(&self) -> StateVector {
        self.state(&self.s)
    }

    pub(crate) fn to_eigen(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let (re, im) = split(v);
        join(self.eigenvectors.tr_mul(&re), self.eigenvectors.tr_mul(&im))
    }

    pub(crate) fn eigen_to_vertex(&self, c: &DVector<Complex64>) -> DVector<Complex64> {
        let (re, im) = split(c);
        join(&self.eigenvectors * re, &self.eigenvectors * im)
    }

    pub(crate) fn initial_eigen(&self) -> DVector<Complex64> {
        self.s_eig.map(Complex64::from)
    }

    pub(crate) fn walk_eigen(&self, c: &mut DVector<Complex64>, t: f64) {
        for (x, &l) in c.iter_mut().zip(self.eigenvalues.iter()) {
            *x *= Complex64::cis(-t * l);
        }
    }

    /// Rank-one update `c += (e^{-iθ} - 1)⟨ω|c⟩ |ω⟩` in eigen coordinates.
    pub(crate) fn oracle_eigen(&self, c: &mut DVector<Complex64>, theta: f64) {
        let overlap: Complex64 = self.marked_eig.iter().zip(c.iter()).map(|(&m, &x)| x * m).sum();
        let factor = (Complex64::cis(-theta) - 1.0) * overlap;
        for (x, &m) in c.iter_mut().zip(self.marked_eig.iter()) {
            *x += factor * m;
        }
    }

    pub(crate) fn step_eigen(&self, c: &mut DVector<Complex64>, step: &Step) {
        self.oracle_eigen(c, step.phase);
        self.walk_eigen(c, step.walk_time);
    }

    pub(crate) fn prob_marked_eigen(&self, c: &DVector<Complex64>) -> f64 {
        self.marked_eig.iter().zip(c.iter()).map(|(&m, &x)| x * m).sum::<Complex64>().norm_sqr()
    }

    pub(crate) fn prob_s_eigen(&self, c: &DVector<Complex64>) -> f64 {
        self.s_eig.iter().zip(c.iter()).map(|(&m, &x)| x * m).sum::<Complex64>().norm_sqr()
    }

    /// `e^{-itL}` applied to the state.
    pub fn apply_walk(&self, state: &mut StateVector, t: f64) {
        let mut c = self.to_eigen(&state.amplitudes);
        self.walk_eigen(&mut c, t);
        state.amplitudes = self.eigen_to_vertex(&c);
    }

    /// `e^{-iθ|ω⟩⟨ω|}` applied to the state.
    pub fn apply_oracle(&self, state: &mut StateVector, theta: f64) {
        let overlap: Complex64 = self.marked.iter().zip(state.amplitudes.iter()).map(|(&m, &x)| x * m).sum();
        let factor = (Complex64::cis(-theta) - 1.0) * overlap;
        for (x, &m) in state.amplitudes.iter_mut().zip(self.marked.iter()) {
            *x += factor * m;
        }
    }

    pub fn evolve(&self, state: &mut StateVector, steps: &[Step]) {
        let mut c = self.to_eigen(&state.amplitudes);
        for step in steps {
            self.step_eigen(&mut c, step);
        }
        state.amplitudes = self.eigen_to_vertex(&c);
    }

    pub fn prob_marked(&self, state: &StateVector) -> f64 {
        self.marked.iter().zip(state.amplitudes.iter()).map(|(&m, &x)| x * m).sum::<Complex64>().norm_sqr()
    }

    pub fn prob_s(&self, state: &StateVector) -> f64 {
        self.s.iter().zip(state.amplitudes.iter()).map(|(&m, &x)| x * m).sum::<Complex64>().norm_sqr()
    }

    /// Projection of `|ω⟩` onto the eigenspaces whose eigenvalue times `scale`
    /// lies in `set`. Not normalized.
    pub fn projection(&self, set: &[u64], scale: u64) -> DVector<f64> {
        let mut out = DVector::zeros(self.dimension());
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let scaled = l * scale as f64;
            if set.iter().any(|&x| (scaled - x as f64).abs() <= SET_MATCH_TOL * (x as f64).max(1.0)) {
                out.axpy(self.marked_eig[j], &self.eigenvectors.column(j), 1.0);
            }
        }
        out
    }

    /// Matrix `⟨b_i|U|b_j⟩` of the step sequence `U` on the given orthonormal vectors.
    pub fn subspace_operator(&self, basis: &[DVector<f64>], steps: &[Step]) -> DMatrix<Complex64> {
        let k = basis.len();
        let mut out = DMatrix::zeros(k, k);
        for (j, bj) in basis.iter().enumerate() {
            let mut c = self.to_eigen(&bj.map(Complex64::from));
            for step in steps {
                self.step_eigen(&mut c, step);
            }
            let image = self.eigen_to_vertex(&c);
            for (i, bi) in basis.iter().enumerate() {
                out[(i, j)] = bi.iter().zip(image.iter()).map(|(&b, &x)| x * b).sum();
            }
        }
        out
    }
}

/// Largest entrywise distance between `a` and `b` after removing a common
/// global phase, ignoring entries listed in `skip`.
pub fn distance_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, skip: &[(usize, usize)]) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut best = (0usize, 0usize);
    let mut best_mod = -1.0;
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            if !skip.contains(&(i, j)) && b[(i, j)].norm() > best_mod {
                best_mod = b[(i, j)].norm();
                best = (i, j);
            }
        }
    }
    let ratio = a[best] / b[best];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { Complex64::new(1.0, 0.0) };
    let mut worst: f64 = 0.0;
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            if !skip.contains(&(i, j)) {
                worst = worst.max((a[(i, j)] - phase * b[(i, j)]).norm());
            }
        }
    }
    worst
}
