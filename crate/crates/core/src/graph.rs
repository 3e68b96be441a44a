//! Graph families used by the search framework, stored as sorted adjacency lists.
//!
//! Vertex labels are canonical per family so that vertex 0 is always the
//! conventional marked vertex:
//!
//! * `Complete{n}`: vertices `0..n`.
//! * `Johnson2{n}`: the 2-subsets of `{0, .., n-1}` in lexicographic order, so
//!   vertex 0 is `{0, 1}`.
//! * `Hypercube{m}` / `Square`: bitstrings read as integers; vertex 3 of the
//!   square is opposite vertex 0.
//! * products (including `Rook`): row-major, `(i, j) -> i * n_right + j`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{PhaseWalkError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Complete { n: usize },
    Johnson2 { n: usize },
    Rook { n1: usize, n2: usize },
    Hypercube { m: u32 },
    Square,
    CartesianProduct { left: Box<Family>, right: Box<Family> },
    Custom,
}

impl Family {
    /// Returns `n` when this family is `K_n □ Q_2`.
    pub fn complete_square_n(&self) -> Option<usize> {
        match self {
            Family::CartesianProduct { left, right } => match (left.as_ref(), right.as_ref()) {
                (Family::Complete { n }, Family::Square | Family::Hypercube { m: 2 }) => Some(*n),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Complete { n } => write!(f, "K_{n}"),
            Family::Johnson2 { n } => write!(f, "J({n},2)"),
            Family::Rook { n1, n2 } => write!(f, "Rook({n1}x{n2})"),
            Family::Hypercube { m } => write!(f, "Q_{m}"),
            Family::Square => write!(f, "Q_2"),
            Family::CartesianProduct { left, right } => write!(f, "{left} □ {right}"),
            Family::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    n_vertices: usize,
    adjacency: Vec<Vec<usize>>,
    family: Family,
    vertex_transitive: bool,
}

impl Graph {
    fn from_adjacency(mut adjacency: Vec<Vec<usize>>, family: Family, vertex_transitive: bool) -> Self {
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Graph { n_vertices: adjacency.len(), adjacency, family, vertex_transitive }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_vertex_transitive(&self) -> bool {
        self.vertex_transitive
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency.iter().all(|row| row.len() == d).then_some(d)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return false;
        }
        let mut seen = vec![false; self.n_vertices];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n_vertices
    }

    /// Dense adjacency matrix. Only call this under a size cap.
    pub fn adjacency_dense(&self) -> DMatrix<f64> {
        let n = self.n_vertices;
        let mut a = DMatrix::zeros(n, n);
        for (u, row) in self.adjacency.iter().enumerate() {
            for &v in row {
                a[(u, v)] = 1.0;
            }
        }
        a
    }

    /// Dense Laplacian `L = D - A`. Only call this under a size cap.
    pub fn laplacian_dense(&self) -> DMatrix<f64> {
        let mut l = -self.adjacency_dense();
        for v in 0..self.n_vertices {
            l[(v, v)] = self.degree(v) as f64;
        }
        l
    }

    /// Sparse product `out = L x`.
    pub fn apply_laplacian(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n_vertices);
        assert_eq!(out.len(), self.n_vertices);
        for (v, row) in self.adjacency.iter().enumerate() {
            let neighbor_sum: f64 = row.iter().map(|&w| x[w]).sum();
            out[v] = row.len() as f64 * x[v] - neighbor_sum;
        }
    }
}

pub fn build_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(PhaseWalkError::EmptyGraph("complete graph needs n >= 1".into()));
    }
    let adjacency = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
    Ok(Graph::from_adjacency(adjacency, Family::Complete { n }, true))
}

/// Index of the 2-subset `{i, j}` (`i < j`) in lexicographic order over `{0, .., n-1}`.
pub fn johnson2_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn build_johnson2(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(PhaseWalkError::InvalidParameter(format!("J(n,2) needs n >= 2, got {n}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let key = |a: usize, b: usize| if a < b { johnson2_index(a, b, n) } else { johnson2_index(b, a, n) };
    let adjacency = pairs
        .iter()
        .map(|&(i, j)| {
            let mut row = Vec::with_capacity(2 * (n - 2));
            for x in (0..n).filter(|&x| x != i && x != j) {
                row.push(key(i, x));
                row.push(key(j, x));
            }
            row
        })
        .collect();
    Ok(Graph::from_adjacency(adjacency, Family::Johnson2 { n }, true))
}

pub fn build_rook(n1: usize, n2: usize) -> Result<Graph> {
    if n1 == 0 || n2 == 0 {
        return Err(PhaseWalkError::EmptyGraph(format!("rook board {n1}x{n2} has a zero dimension")));
    }
    let mut g = cartesian_product(&build_complete(n1)?, &build_complete(n2)?)?;
    g.family = Family::Rook { n1, n2 };
    Ok(g)
}

pub fn build_hypercube(m: u32) -> Result<Graph> {
    if m == 0 {
        return Err(PhaseWalkError::InvalidParameter("hypercube dimension must be >= 1".into()));
    }
    if m > 26 {
        return Err(PhaseWalkError::InvalidParameter(format!("hypercube dimension {m} is too large")));
    }
    let n = 1usize << m;
    let adjacency = (0..n).map(|v| (0..m).map(|b| v ^ (1 << b)).collect()).collect();
    Ok(Graph::from_adjacency(adjacency, Family::Hypercube { m }, true))
}

/// The 4-cycle `Q_2`, labelled so that vertex 3 is opposite vertex 0.
pub fn build_square() -> Graph {
    let mut g = build_hypercube(2).expect("Q_2 is valid");
    g.family = Family::Square;
    g
}

/// `K_n □ Q_2`.
pub fn build_complete_square(n: usize) -> Result<Graph> {
    cartesian_product(&build_complete(n)?, &build_square())
}

/// Materializes a named family. Custom graphs have no generator.
pub fn build_family(family: &Family) -> Result<Graph> {
    match family {
        Family::Complete { n } => build_complete(*n),
        Family::Johnson2 { n } => build_johnson2(*n),
        Family::Rook { n1, n2 } => build_rook(*n1, *n2),
        Family::Hypercube { m } => build_hypercube(*m),
        Family::Square => Ok(build_square()),
        Family::CartesianProduct { left, right } => cartesian_product(&build_family(left)?, &build_family(right)?),
        Family::Custom => Err(PhaseWalkError::UnsupportedFamily(family.to_string())),
    }
}

/// Cartesian product `G □ H` with row-major labels `(i, j) -> i * N_H + j`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    if g.n_vertices == 0 || h.n_vertices == 0 {
        return Err(PhaseWalkError::EmptyGraph("cartesian product of an empty graph".into()));
    }
    let nh = h.n_vertices;
    let mut adjacency = Vec::with_capacity(g.n_vertices * nh);
    for i in 0..g.n_vertices {
        for j in 0..nh {
            let mut row = Vec::with_capacity(g.degree(i) + h.degree(j));
            row.extend(g.neighbors(i).iter().map(|&i2| i2 * nh + j));
            row.extend(h.neighbors(j).iter().map(|&j2| i * nh + j2));
            adjacency.push(row);
        }
    }
    let family = Family::CartesianProduct { left: Box::new(g.family.clone()), right: Box::new(h.family.clone()) };
    Ok(Graph::from_adjacency(adjacency, family, g.vertex_transitive && h.vertex_transitive))
}

/// Parses an undirected edge list: one `u v` pair per line, 0-indexed.
/// Blank lines and lines starting with `#` are skipped. Duplicate edges and
/// self-loops are rejected. The vertex count is one more than the largest index.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut max_vertex = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(PhaseWalkError::EdgeList {
                line: line_no,
                message: format!("expected two vertex indices, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| PhaseWalkError::EdgeList {
                line: line_no,
                message: format!("invalid vertex index {s:?}"),
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u == v {
            return Err(PhaseWalkError::EdgeList { line: line_no, message: format!("self-loop at vertex {u}") });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(PhaseWalkError::EdgeList { line: line_no, message: format!("duplicate edge {u} {v}") });
        }
        max_vertex = max_vertex.max(Some(u.max(v)));
        edges.push((u, v));
    }
    let n = max_vertex.map(|m| m + 1).ok_or_else(|| PhaseWalkError::EmptyGraph("edge list has no edges".into()))?;
    let mut adjacency = vec![Vec::new(); n];
    for (u, v) in edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    Ok(Graph::from_adjacency(adjacency, Family::Custom, false))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_symmetric_loopless(g: &Graph) {
        for u in 0..g.n_vertices() {
            assert!(!g.has_edge(u, u));
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u), "asymmetric edge {u}-{v}");
            }
        }
    }

    #[test]
    fn complete_graph_shapes() {
        let k1 = build_complete(1).unwrap();
        assert_eq!(k1.n_vertices(), 1);
        assert_eq!(k1.laplacian_dense(), DMatrix::from_element(1, 1, 0.0));

        let k = build_complete(1024).unwrap();
        assert_eq!(k.n_vertices(), 1024);
        assert_eq!(k.regular_degree(), Some(1023));
        assert!(matches!(build_complete(0), Err(PhaseWalkError::EmptyGraph(_))));
    }

    #[test]
    fn complete_laplacian_is_scaled_projector() {
        let n = 6;
        let l = build_complete(n).unwrap().laplacian_dense();
        let expected = DMatrix::<f64>::identity(n, n) * n as f64 - DMatrix::from_element(n, n, 1.0);
        assert_eq!(l, expected);
    }

    #[test]
    fn johnson_graph_shapes() {
        let j5 = build_johnson2(5).unwrap();
        assert_eq!(j5.n_vertices(), 10);
        assert_eq!(j5.regular_degree(), Some(6));
        assert_symmetric_loopless(&j5);

        let j2 = build_johnson2(2).unwrap();
        assert_eq!(j2.n_vertices(), 1);
        assert_eq!(j2.n_edges(), 0);
        assert!(build_johnson2(1).is_err());

        let j26 = build_johnson2(26).unwrap();
        assert_eq!(j26.n_vertices(), 325);
        assert_eq!(j26.regular_degree(), Some(48));
    }

    #[test]
    fn johnson_labels_are_lexicographic() {
        let n = 7;
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(johnson2_index(i, j, n), idx);
                idx += 1;
            }
        }
        // {0,1} is adjacent to {0,2} and {1,2} but not {2,3}
        let g = build_johnson2(n).unwrap();
        assert!(g.has_edge(0, johnson2_index(0, 2, n)));
        assert!(g.has_edge(0, johnson2_index(1, 2, n)));
        assert!(!g.has_edge(0, johnson2_index(2, 3, n)));
    }

    #[test]
    fn rook_and_products() {
        let r = build_rook(2, 8).unwrap();
        assert_eq!(r.n_vertices(), 16);
        assert_eq!(r.regular_degree(), Some(8));
        assert!(build_rook(0, 3).is_err());

        let degenerate = build_rook(1, 5).unwrap();
        let k5 = build_complete(5).unwrap();
        assert_eq!(degenerate.adjacency_dense(), k5.adjacency_dense());

        let prod = cartesian_product(&build_complete(3).unwrap(), &build_complete(4).unwrap()).unwrap();
        assert_eq!(prod.adjacency_dense(), build_rook(3, 4).unwrap().adjacency_dense());

        let cs = build_complete_square(8).unwrap();
        assert_eq!(cs.n_vertices(), 32);
        assert_eq!(cs.family().complete_square_n(), Some(8));
        assert!(cs.is_vertex_transitive());
        assert_symmetric_loopless(&cs);
    }

    #[test]
    fn product_with_k1_is_identity() {
        let h = build_johnson2(5).unwrap();
        let p = cartesian_product(&build_complete(1).unwrap(), &h).unwrap();
        assert_eq!(p.adjacency_dense(), h.adjacency_dense());
    }

    #[test]
    fn product_laplacian_is_kronecker_sum() {
        let g = build_johnson2(4).unwrap();
        let h = build_hypercube(2).unwrap();
        let p = cartesian_product(&g, &h).unwrap();
        let (lg, lh) = (g.laplacian_dense(), h.laplacian_dense());
        let ig = DMatrix::<f64>::identity(lg.nrows(), lg.nrows());
        let ih = DMatrix::<f64>::identity(lh.nrows(), lh.nrows());
        let kron_sum = lg.kronecker(&ih) + ig.kronecker(&lh);
        assert_eq!(p.laplacian_dense(), kron_sum);
    }

    #[test]
    fn hypercube_shapes() {
        let q1 = build_hypercube(1).unwrap();
        assert_eq!(q1.adjacency_dense(), build_complete(2).unwrap().adjacency_dense());
        let sq = build_square();
        assert_eq!(sq.n_vertices(), 4);
        assert!(sq.has_edge(0, 1) && sq.has_edge(0, 2) && !sq.has_edge(0, 3));
        assert_eq!(build_hypercube(5).unwrap().regular_degree(), Some(5));
    }

    #[test]
    fn laplacian_rows_sum_to_zero_and_sparse_matches_dense() {
        let g = build_rook(3, 5).unwrap();
        let l = g.laplacian_dense();
        for r in 0..l.nrows() {
            assert_eq!(l.row(r).sum(), 0.0);
        }
        let x: Vec<f64> = (0..g.n_vertices()).map(|i| (i as f64).sin()).collect();
        let mut out = vec![0.0; x.len()];
        g.apply_laplacian(&x, &mut out);
        let dense = &l * nalgebra::DVector::from_vec(x);
        for (a, b) in out.iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn edge_list_parsing() {
        let g = parse_edge_list("0 1\n1 2\n\n# comment\n2 0\n").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(*g.family(), Family::Custom);
        assert!(!g.is_vertex_transitive());
        assert_eq!(g.regular_degree(), Some(2));

        let dup = parse_edge_list("0 1\n1 0\n").unwrap_err();
        assert!(matches!(dup, PhaseWalkError::EdgeList { line: 2, .. }));
        let loop_err = parse_edge_list("0 1\n2 2\n").unwrap_err();
        assert!(matches!(loop_err, PhaseWalkError::EdgeList { line: 2, .. }));
        assert!(parse_edge_list("0 x\n").is_err());
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert!(parse_edge_list("\n").is_err());
    }

    #[test]
    fn connectivity() {
        assert!(build_johnson2(6).unwrap().is_connected());
        assert!(!parse_edge_list("0 1\n2 3\n").unwrap().is_connected());
    }

    #[test]
    fn build_family_round_trips() {
        for g in [build_johnson2(7).unwrap(), build_rook(2, 5).unwrap(), build_complete_square(8).unwrap(), build_hypercube(4).unwrap()] {
            let h = build_family(g.family()).unwrap();
            assert_eq!(h.n_vertices(), g.n_vertices());
            assert_eq!(h.n_edges(), g.n_edges());
            assert_eq!(h.family(), g.family());
        }
        assert!(build_family(&Family::Custom).is_err());
    }
}
