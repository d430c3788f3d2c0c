//! Graph representation, file ingestion, symmetric normalization, edge
//! splitting for link prediction, and synthetic SBM generation.

use crate::error::{Error, Result};
use crate::rng::new_rng;
use crate::sparse::CsrMatrix;
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::HashSet;
use std::fs;
use std::path::Path;

/// Immutable undirected graph with optional node features and ground-truth
/// community labels. Adjacency entries lie in [0,1] with a zero diagonal;
/// each undirected edge is stored twice (both orientations).
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: CsrMatrix,
    features: Option<Array2<f64>>,
    labels: Option<Vec<usize>>,
}

/// Weighted node degrees d_i = Σ_j A_ij.
#[derive(Debug, Clone)]
pub struct DegreeVector(Vec<f64>);

impl DegreeVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Σ_i d_i; equals 2m for binary graphs.
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Symmetric message passing operator `(D+I)^(-1/2) (A+I) (D+I)^(-1/2)`.
///
/// Distinct from [`Graph`] on purpose: normalization consumes an adjacency
/// matrix and cannot be applied twice.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: CsrMatrix,
}

impl Operator {
    pub fn n(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.mat
    }

    /// `op · m` for a dense right-hand side.
    pub fn apply(&self, m: &Array2<f64>) -> Array2<f64> {
        self.mat.mul_dense(m)
    }
}

/// Train graph plus positive/negative validation and test node pairs.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    pub train_graph: Graph,
    pub val_pos: Vec<(usize, usize)>,
    pub val_neg: Vec<(usize, usize)>,
    pub test_pos: Vec<(usize, usize)>,
    pub test_neg: Vec<(usize, usize)>,
}

impl Graph {
    /// Canonical constructor from unique undirected edges `(i, j, w)` with
    /// `i < j`, `w` in [0,1].
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize, f64)],
        features: Option<Array2<f64>>,
        labels: Option<Vec<usize>>,
    ) -> Result<Graph> {
        let mut trip = Vec::with_capacity(edges.len() * 2);
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::Ingestion(format!(
                    "edge ({i},{j}) out of bounds for n={n}"
                )));
            }
            if i == j {
                return Err(Error::Ingestion(format!("self-loop on node {i}")));
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::Ingestion(format!("weight {w} outside [0,1]")));
            }
            trip.push((i, j, w));
            trip.push((j, i, w));
        }
        if let Some(f) = &features {
            if f.nrows() != n {
                return Err(Error::Shape(format!(
                    "feature matrix has {} rows, expected {n}",
                    f.nrows()
                )));
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Shape(format!(
                    "label vector has {} entries, expected {n}",
                    l.len()
                )));
            }
        }
        let adj = CsrMatrix::from_triplets(n, n, trip);
        if adj.nnz() != edges.len() * 2 {
            return Err(Error::Ingestion("duplicate edges in input".into()));
        }
        Ok(Graph {
            n,
            m: edges.len(),
            adj,
            features,
            labels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges, each counted once.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adj
    }

    pub fn features(&self) -> Option<&Array2<f64>> {
        self.features.as_ref()
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn with_features(mut self, features: Array2<f64>) -> Result<Graph> {
        if features.nrows() != self.n {
            return Err(Error::Shape(format!(
                "feature matrix has {} rows, expected {}",
                features.nrows(),
                self.n
            )));
        }
        self.features = Some(features);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(Error::Shape(format!(
                "label vector has {} entries, expected {}",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn degree_vector(&self) -> DegreeVector {
        DegreeVector(self.adj.row_sums())
    }

    /// Total edge weight (equals m for binary graphs).
    pub fn edge_weight_total(&self) -> f64 {
        self.adj.values_sum() / 2.0
    }

    /// Undirected edges `(i, j, w)` with `i < j`, in sorted order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.adj.iter().filter(|&(i, j, _)| i < j).collect()
    }
}

/// Reads a whitespace-separated edge list with 0-based ids.
///
/// Duplicate and reversed edges are deduplicated (the last weight wins) and
/// self-loops are dropped. `n` is `1 + max id` unless a `# n=<int>` header
/// overrides it. Without the `weighted` flag a third column is ignored and
/// every edge has weight 1.
pub fn load_edge_list(path: impl AsRef<Path>, weighted: bool) -> Result<Graph> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::io(pstr.clone(), e))?;

    let mut n_header: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_id = 0usize;
    let mut any_node = false;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("n=") {
                let n: usize = v.trim().parse().map_err(|_| Error::Parse {
                    path: pstr.clone(),
                    line: lineno,
                    msg: format!("invalid header node count '{v}'"),
                })?;
                n_header = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                path: pstr.clone(),
                line: lineno,
                msg: format!("expected 'src dst [weight]', got {} fields", fields.len()),
            });
        }
        let src: usize = fields[0].parse().map_err(|_| Error::Parse {
            path: pstr.clone(),
            line: lineno,
            msg: format!("invalid node id '{}'", fields[0]),
        })?;
        let dst: usize = fields[1].parse().map_err(|_| Error::Parse {
            path: pstr.clone(),
            line: lineno,
            msg: format!("invalid node id '{}'", fields[1]),
        })?;
        let mut w = 1.0;
        if weighted && fields.len() == 3 {
            let raw: f64 = fields[2].parse().map_err(|_| Error::Parse {
                path: pstr.clone(),
                line: lineno,
                msg: format!("invalid weight '{}'", fields[2]),
            })?;
            // clamp within tolerance, reject beyond it
            if !(-1e-9..=1.0 + 1e-9).contains(&raw) || raw.is_nan() {
                return Err(Error::Range {
                    path: pstr.clone(),
                    line: lineno,
                    value: raw,
                    expected: "[0, 1]".into(),
                });
            }
            w = raw.clamp(0.0, 1.0);
        }
        any_node = true;
        max_id = max_id.max(src).max(dst);
        if src == dst {
            continue;
        }
        let (a, b) = if src < dst { (src, dst) } else { (dst, src) };
        edges.push((a, b, w));
    }

    // last occurrence of a pair wins
    let mut dedup: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(edges.len());
    for &(a, b, w) in edges.iter().rev() {
        if seen.insert((a, b)) {
            dedup.push((a, b, w));
        }
    }
    dedup.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));

    let n_data = if any_node { max_id + 1 } else { 0 };
    let n = match n_header {
        Some(h) if h < n_data => {
            return Err(Error::Ingestion(format!(
                "header n={h} smaller than max node id {}",
                n_data - 1
            )));
        }
        Some(h) => h,
        None => n_data,
    };
    Graph::from_edges(n, &dedup, None, None)
}

/// Reads one `node<TAB>label` line per node; arbitrary string labels are
/// mapped to dense ids in order of first appearance.
pub fn load_labels(path: impl AsRef<Path>, n: usize) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::io(pstr.clone(), e))?;

    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut ids: Vec<String> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                path: pstr.clone(),
                line: lineno,
                msg: format!("expected 'node label', got {} fields", fields.len()),
            });
        }
        let node: usize = fields[0].parse().map_err(|_| Error::Parse {
            path: pstr.clone(),
            line: lineno,
            msg: format!("invalid node id '{}'", fields[0]),
        })?;
        if node >= n {
            return Err(Error::Ingestion(format!(
                "node id {node} out of bounds for n={n}"
            )));
        }
        if labels[node].is_some() {
            return Err(Error::Ingestion(format!("node {node} labeled twice")));
        }
        let id = match ids.iter().position(|s| s == fields[1]) {
            Some(k) => k,
            None => {
                ids.push(fields[1].to_string());
                ids.len() - 1
            }
        };
        labels[node] = Some(id);
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::Ingestion(format!("node {i} has no label"))))
        .collect()
}

/// Symmetric normalization `(D+I)^(-1/2) (A+I) (D+I)^(-1/2)` of a symmetric
/// nonnegative zero-diagonal matrix.
///
/// Every eigenvalue of the result lies in (-1, 1]; on each connected
/// component the vector with entries sqrt(d_i + 1) is an eigenvector with
/// eigenvalue 1. Isolated nodes reduce to a single diagonal entry 1.
pub fn symmetric_normalize(a: &CsrMatrix) -> Operator {
    let n = a.n_rows();
    debug_assert!(a.is_symmetric(1e-12), "normalization needs a symmetric input");
    let d = a.row_sums();
    let scale: Vec<f64> = d.iter().map(|&di| 1.0 / (di + 1.0).sqrt()).collect();
    let mut trip: Vec<(usize, usize, f64)> = Vec::with_capacity(a.nnz() + n);
    for (i, j, v) in a.iter() {
        debug_assert_ne!(i, j, "normalization input must have a zero diagonal");
        trip.push((i, j, v * scale[i] * scale[j]));
    }
    for (i, s) in scale.iter().enumerate() {
        trip.push((i, i, s * s));
    }
    Operator {
        mat: CsrMatrix::from_triplets(n, n, trip),
    }
}

/// Masks edges into validation/test sets for link prediction.
///
/// Positive pairs are sampled uniformly from the edge set; negative pairs by
/// rejection sampling against all original edges. The train graph keeps all
/// `n` nodes, possibly isolated. Deterministic under `seed`.
pub fn split_edges(g: &Graph, val_frac: f64, test_frac: f64, seed: u64) -> Result<EdgeSplit> {
    if !(0.0..1.0).contains(&(val_frac + test_frac)) || val_frac < 0.0 || test_frac < 0.0 {
        return Err(Error::parameter(
            "val_frac/test_frac",
            "fractions must be nonnegative and sum below 1",
        ));
    }
    if g.m() < 20 && val_frac + test_frac > 0.0 {
        return Err(Error::Split(format!(
            "graph has {} edges; at least 20 are required for masking",
            g.m()
        )));
    }

    let mut rng = new_rng(seed);
    let mut edges = g.edges();
    let m = edges.len();
    let n_val = (val_frac * m as f64).round() as usize;
    let n_test = (test_frac * m as f64).round() as usize;

    edges.shuffle(&mut rng);
    let val_pos: Vec<(usize, usize)> = edges[..n_val].iter().map(|&(i, j, _)| (i, j)).collect();
    let test_pos: Vec<(usize, usize)> =
        edges[n_val..n_val + n_test].iter().map(|&(i, j, _)| (i, j)).collect();
    let mut train_edges: Vec<(usize, usize, f64)> = edges[n_val + n_test..].to_vec();
    train_edges.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));

    // negatives: distinct non-edges of the ORIGINAL graph, no self-pairs
    let n = g.n();
    let needed = n_val + n_test;
    let possible = n * (n - 1) / 2 - m;
    if possible < needed {
        return Err(Error::Split(format!(
            "cannot sample {needed} negative pairs: only {possible} non-edges exist"
        )));
    }
    let edge_set: HashSet<(usize, usize)> = g.edges().iter().map(|&(i, j, _)| (i, j)).collect();
    let mut negatives: Vec<(usize, usize)> = Vec::with_capacity(needed);
    let mut neg_seen: HashSet<(usize, usize)> = HashSet::with_capacity(needed);
    let mut attempts: usize = 0;
    let max_attempts = 1000 + 1000 * needed;
    while negatives.len() < needed {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Split(
                "negative sampling did not converge; graph too dense".into(),
            ));
        }
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let pair = (i.min(j), i.max(j));
        if edge_set.contains(&pair) || !neg_seen.insert(pair) {
            continue;
        }
        negatives.push(pair);
    }
    let val_neg = negatives[..n_val].to_vec();
    let test_neg = negatives[n_val..].to_vec();

    let train_graph = Graph::from_edges(
        n,
        &train_edges,
        g.features.clone(),
        g.labels.clone(),
    )?;
    Ok(EdgeSplit {
        train_graph,
        val_pos,
        val_neg,
        test_pos,
        test_neg,
    })
}

/// Samples a stochastic block model graph with `k` planted communities of
/// `n_per_community` nodes each; node pairs inside a community are connected
/// with probability `p_intra`, across communities with `p_inter`.
pub fn generate_sbm(
    k: usize,
    n_per_community: usize,
    p_intra: f64,
    p_inter: f64,
    seed: u64,
) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p_intra) || !(0.0..=1.0).contains(&p_inter) || p_inter >= p_intra {
        return Err(Error::parameter(
            "p/q",
            "probabilities must satisfy 0 <= q < p <= 1",
        ));
    }
    if k == 0 || n_per_community == 0 {
        return Err(Error::parameter("k/n_k", "must be positive"));
    }
    let n = k
        .checked_mul(n_per_community)
        .filter(|&n| n <= (1usize << 40))
        .ok_or_else(|| Error::parameter("k*n_k", "node count overflow"))?;

    let mut rng = new_rng(seed);
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();

    // intra-community pairs, row by row
    for c in 0..k {
        let base = c * n_per_community;
        for i in 0..n_per_community {
            for j in sample_indices(&mut rng, p_intra, n_per_community - i - 1) {
                edges.push((base + i, base + i + 1 + j, 1.0));
            }
        }
    }
    // inter-community pairs
    if p_inter > 0.0 {
        for c1 in 0..k {
            for c2 in (c1 + 1)..k {
                let b1 = c1 * n_per_community;
                let b2 = c2 * n_per_community;
                for i in 0..n_per_community {
                    for j in sample_indices(&mut rng, p_inter, n_per_community) {
                        edges.push((b1 + i, b2 + j, 1.0));
                    }
                }
            }
        }
    }

    let labels: Vec<usize> = (0..n).map(|i| i / n_per_community).collect();
    Graph::from_edges(n, &edges, None, Some(labels))
}

/// Indices in `0..len` where independent Bernoulli(p) trials succeed, via
/// geometric skipping.
fn sample_indices(rng: &mut impl Rng, p: f64, len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if len == 0 || p <= 0.0 {
        return out;
    }
    if p >= 1.0 {
        out.extend(0..len);
        return out;
    }
    let log1mp = (1.0 - p).ln();
    let mut cur: usize = 0;
    loop {
        let u: f64 = rng.random();
        let skips = ((1.0 - u).ln() / log1mp).floor();
        if !skips.is_finite() || skips >= (len - cur) as f64 {
            return out;
        }
        cur += skips as usize;
        out.push(cur);
        cur += 1;
        if cur >= len {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn dense_normalize(a: &Array2<f64>) -> Array2<f64> {
        let n = a.nrows();
        let mut out = Array2::<f64>::zeros((n, n));
        let d: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
        for i in 0..n {
            for j in 0..n {
                let aij = a[(i, j)] + if i == j { 1.0 } else { 0.0 };
                out[(i, j)] = aij / ((d[i] + 1.0).sqrt() * (d[j] + 1.0).sqrt());
            }
        }
        out
    }

    #[test]
    fn load_path_graph() {
        let f = write_tmp("0 1\n1 2\n");
        let g = load_edge_list(f.path(), false).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.adjacency().nnz(), 4);
    }

    #[test]
    fn load_dedups_and_drops_self_loops() {
        let f = write_tmp("0 1\n1 0\n0 0\n");
        let g = load_edge_list(f.path(), false).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn load_header_fixes_n() {
        let f = write_tmp("# n=5\n0 1\n");
        let g = load_edge_list(f.path(), false).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn load_rejects_malformed_line() {
        let f = write_tmp("0 1\nnot an edge\n");
        let err = load_edge_list(f.path(), false).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_rejects_out_of_range_weight() {
        let f = write_tmp("0 1 1.5\n");
        let err = load_edge_list(f.path(), true).unwrap_err();
        assert!(matches!(err, Error::Range { line: 1, .. }));
        // within clamping tolerance is fine
        let f = write_tmp("0 1 1.0000000001\n");
        let g = load_edge_list(f.path(), true).unwrap();
        assert_eq!(g.adjacency().get(0, 1), 1.0);
    }

    #[test]
    fn labels_dense_relabeling() {
        let f = write_tmp("0 a\n1 b\n2 a\n");
        let labels = load_labels(f.path(), 3).unwrap();
        assert_eq!(labels, vec![0, 1, 0]);
    }

    #[test]
    fn labels_missing_node_is_error() {
        let f = write_tmp("0 a\n1 b\n2 a\n3 b\n4 a\n");
        let err = load_labels(f.path(), 6).unwrap_err();
        assert!(matches!(err, Error::Ingestion(_)));
    }

    #[test]
    fn labels_duplicate_node_is_error() {
        let f = write_tmp("0 a\n0 b\n1 a\n");
        assert!(load_labels(f.path(), 2).is_err());
    }

    #[test]
    fn normalize_triangle_is_constant_third() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)], None, None).unwrap();
        let op = symmetric_normalize(g.adjacency());
        for i in 0..3 {
            for j in 0..3 {
                assert!((op.matrix().get(i, j) - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn normalize_single_edge_is_constant_half() {
        let g = Graph::from_edges(2, &[(0, 1, 1.0)], None, None).unwrap();
        let op = symmetric_normalize(g.adjacency());
        for i in 0..2 {
            for j in 0..2 {
                assert!((op.matrix().get(i, j) - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn normalize_star_matches_dense_reference() {
        // star with center 0 and leaves 1..3
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], None, None).unwrap();
        let op = symmetric_normalize(g.adjacency());
        let dense = dense_normalize(&g.adjacency().to_dense());
        for i in 0..4 {
            for j in 0..4 {
                assert!((op.matrix().get(i, j) - dense[(i, j)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn normalize_handles_isolated_nodes() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0)], None, None).unwrap();
        let op = symmetric_normalize(g.adjacency());
        assert_eq!(op.matrix().get(2, 2), 1.0);
        assert_eq!(op.matrix().row(2).0.len(), 1);
    }

    #[test]
    fn normalize_unit_eigenvector_per_component() {
        let g = generate_sbm(3, 8, 0.8, 0.0, 5).unwrap();
        let op = symmetric_normalize(g.adjacency());
        let d = g.degree_vector();
        let v = ndarray::Array1::from_iter(d.values().iter().map(|&x| (x + 1.0).sqrt()));
        let out = op.matrix().mul_vec(&v);
        let worst = out
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-10, "worst residual {worst}");
    }

    #[test]
    fn split_counts_and_disjointness() {
        let g = generate_sbm(2, 50, 0.2, 0.05, 1).unwrap();
        let m = g.m();
        let split = split_edges(&g, 0.05, 0.10, 7).unwrap();
        assert_eq!(split.val_pos.len(), ((m as f64) * 0.05).round() as usize);
        assert_eq!(split.test_pos.len(), ((m as f64) * 0.10).round() as usize);
        assert_eq!(split.val_neg.len(), split.val_pos.len());
        assert_eq!(split.test_neg.len(), split.test_pos.len());
        assert_eq!(
            split.train_graph.m() + split.val_pos.len() + split.test_pos.len(),
            m
        );
        assert_eq!(split.train_graph.n(), g.n());

        let orig: HashSet<(usize, usize)> = g.edges().iter().map(|&(i, j, _)| (i, j)).collect();
        let train: HashSet<(usize, usize)> =
            split.train_graph.edges().iter().map(|&(i, j, _)| (i, j)).collect();
        for &(i, j) in split.val_pos.iter().chain(&split.test_pos) {
            assert!(i < j);
            assert!(orig.contains(&(i, j)));
            assert!(!train.contains(&(i, j)));
        }
        let mut neg_seen = HashSet::new();
        for &(i, j) in split.val_neg.iter().chain(&split.test_neg) {
            assert!(i < j);
            assert!(!orig.contains(&(i, j)));
            assert!(neg_seen.insert((i, j)));
        }
        // union of train edges and masked positives is the original edge set
        let mut union = train.clone();
        union.extend(split.val_pos.iter().copied());
        union.extend(split.test_pos.iter().copied());
        assert_eq!(union, orig);
    }

    #[test]
    fn split_zero_fractions_is_identity() {
        let g = generate_sbm(2, 10, 0.4, 0.1, 3).unwrap();
        let split = split_edges(&g, 0.0, 0.0, 1).unwrap();
        assert_eq!(split.train_graph.m(), g.m());
        assert!(split.val_pos.is_empty() && split.test_pos.is_empty());
        assert!(split.val_neg.is_empty() && split.test_neg.is_empty());
    }

    #[test]
    fn split_seeds_change_masks_not_sizes() {
        let g = generate_sbm(2, 50, 0.2, 0.05, 1).unwrap();
        let s1 = split_edges(&g, 0.05, 0.10, 1).unwrap();
        let s2 = split_edges(&g, 0.05, 0.10, 2).unwrap();
        let s1b = split_edges(&g, 0.05, 0.10, 1).unwrap();
        assert_eq!(s1.val_pos.len(), s2.val_pos.len());
        assert_ne!(s1.test_pos, s2.test_pos);
        assert_eq!(s1.test_pos, s1b.test_pos);
        assert_eq!(s1.test_neg, s1b.test_neg);
    }

    #[test]
    fn sbm_degenerate_probabilities() {
        let g = generate_sbm(3, 4, 1.0, 0.0, 9).unwrap();
        assert_eq!(g.n(), 12);
        // three disjoint K4s
        assert_eq!(g.m(), 3 * 6);
        let labels = g.labels().unwrap();
        for (i, j, _) in g.edges() {
            assert_eq!(labels[i], labels[j]);
        }
    }

    #[test]
    fn sbm_edge_count_within_four_sigma() {
        // closed-form mean and variance of the sum of independent Bernoullis
        let (k, nk, p, q) = (10usize, 100usize, 0.05, 0.002);
        let intra_pairs = (k * nk * (nk - 1) / 2) as f64;
        let inter_pairs = (k * (k - 1) / 2 * nk * nk) as f64;
        let mean = intra_pairs * p + inter_pairs * q;
        let var = intra_pairs * p * (1.0 - p) + inter_pairs * q * (1.0 - q);
        let g = generate_sbm(k, nk, p, q, 12345).unwrap();
        let dev = (g.m() as f64 - mean).abs();
        assert!(
            dev <= 4.0 * var.sqrt(),
            "m={} mean={mean} sigma={}",
            g.m(),
            var.sqrt()
        );
    }

    #[test]
    fn sbm_deterministic_under_seed() {
        let g1 = generate_sbm(3, 20, 0.2, 0.01, 77).unwrap();
        let g2 = generate_sbm(3, 20, 0.2, 0.01, 77).unwrap();
        assert_eq!(g1.edges(), g2.edges());
    }

    #[test]
    fn sbm_rejects_bad_probabilities() {
        assert!(generate_sbm(2, 5, 0.1, 0.1, 0).is_err());
        assert!(generate_sbm(2, 5, 0.1, 0.2, 0).is_err());
    }
}
