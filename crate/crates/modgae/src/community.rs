//! Modularity, Louvain clustering, and the community-preserving message
//! passing operator.
//!
//! The operator pipeline is: cluster the (train) graph with Louvain, expand
//! the partition into the block-complete membership matrix `A_c = M·Mᵀ − I`,
//! sparsify each block to an s-regular subgraph, and normalize
//! `A + λ·A_c^(s)` into a message passing operator.

use crate::error::{Error, Result};
use crate::graph::{symmetric_normalize, Graph, Operator};
use crate::rng::new_rng;
use crate::sparse::CsrMatrix;
use rand::seq::SliceRandom;

/// Assignment of every node to exactly one community.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assign: Vec<usize>,
    k: usize,
    sizes: Vec<usize>,
}

impl Partition {
    /// Builds a partition from raw per-node community ids, renumbering them
    /// densely in order of first appearance.
    pub fn from_assignments(raw: &[usize]) -> Result<Partition> {
        if raw.is_empty() {
            return Err(Error::parameter("assignments", "empty node set"));
        }
        let mut remap: std::collections::HashMap<usize, usize> = Default::default();
        let mut assign = Vec::with_capacity(raw.len());
        for &c in raw {
            let next = remap.len();
            let id = *remap.entry(c).or_insert(next);
            assign.push(id);
        }
        let k = remap.len();
        let mut sizes = vec![0usize; k];
        for &c in &assign {
            sizes[c] += 1;
        }
        Ok(Partition { assign, k, sizes })
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Partition {
        Partition {
            assign: (0..n).collect(),
            k: n,
            sizes: vec![1; n],
        }
    }

    /// All nodes in one community.
    pub fn single_community(n: usize) -> Partition {
        Partition {
            assign: vec![0; n],
            k: 1,
            sizes: vec![n],
        }
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assign
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assign[node]
    }

    /// Nodes of each community, sorted.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (node, &c) in self.assign.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

/// Block-complete community membership matrix `A_c = M·Mᵀ − I` (0/1 entries,
/// zero diagonal).
#[derive(Debug, Clone)]
pub struct MembershipMatrix {
    matrix: CsrMatrix,
    partition: Partition,
}

impl MembershipMatrix {
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }
}

/// s-regular sparsification of the membership matrix: inside every community
/// larger than `s + 1` nodes, each node keeps exactly `s` within-community
/// neighbors (one node gets `s + 1` when exact regularity is impossible,
/// i.e. both `s` and the community size are odd). Smaller communities stay
/// complete blocks. Sampled once, then fixed for the whole training run.
#[derive(Debug, Clone)]
pub struct SparsifiedMembership {
    matrix: CsrMatrix,
    s: usize,
}

impl SparsifiedMembership {
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// An all-zero sparsification, for operators that carry no community
    /// term (λ = 0).
    pub fn empty(n: usize, s: usize) -> SparsifiedMembership {
        SparsifiedMembership {
            matrix: CsrMatrix::zeros(n, n),
            s,
        }
    }
}

/// Modularity of a partition:
/// `Q = (1/2m)·Σ_ij [A_ij − d_i·d_j/2m]·δ(i,j)`, in [-1/2, 1].
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.n() != g.n() {
        return Err(Error::Shape(format!(
            "partition covers {} nodes, graph has {}",
            p.n(),
            g.n()
        )));
    }
    let w2 = g.adjacency().values_sum();
    if w2 <= 0.0 {
        return Err(Error::UndefinedModularity(
            "graph has no edges (m = 0)".into(),
        ));
    }
    let d = g.degree_vector();
    let mut intra = vec![0.0f64; p.k()];
    for (i, j, v) in g.adjacency().iter() {
        if p.community_of(i) == p.community_of(j) {
            intra[p.community_of(i)] += v;
        }
    }
    let mut deg_tot = vec![0.0f64; p.k()];
    for (node, &c) in p.assignments().iter().enumerate() {
        deg_tot[c] += d.values()[node];
    }
    let q = (0..p.k())
        .map(|c| intra[c] / w2 - (deg_tot[c] / w2).powi(2))
        .sum();
    Ok(q)
}

/// Louvain output: the partition plus the modularity trace recorded after
/// each phase-1 sweep.
#[derive(Debug, Clone)]
pub struct LouvainResult {
    pub partition: Partition,
    pub modularity: f64,
    pub sweep_modularity: Vec<f64>,
}

/// Greedy two-phase modularity maximization. Nodes are scanned in a
/// seed-shuffled order each sweep; among equal best gains the lowest
/// community id wins. The community count is selected automatically.
pub fn louvain(g: &Graph, seed: u64) -> Result<Partition> {
    Ok(louvain_with_trace(g, seed)?.partition)
}

pub fn louvain_with_trace(g: &Graph, seed: u64) -> Result<LouvainResult> {
    if g.adjacency().values_sum() <= 0.0 {
        return Err(Error::UndefinedModularity(
            "graph has no edges (m = 0)".into(),
        ));
    }
    // a single move must gain more than this to be applied
    const MOVE_GAIN_TOL: f64 = 1e-12;
    // a full phase pair must gain more than this to continue
    const PHASE_GAIN_TOL: f64 = 1e-10;

    let mut rng = new_rng(seed);
    let mut level = LevelGraph::from_graph(g);
    // current super-node of every original node
    let mut node_to_super: Vec<usize> = (0..g.n()).collect();
    let mut sweep_modularity: Vec<f64> = Vec::new();
    let mut q_before_phase = level.singleton_modularity();

    loop {
        let phase = level.local_moves(&mut rng, MOVE_GAIN_TOL);
        sweep_modularity.extend(phase.sweep_modularity.iter().copied());
        if !phase.moved_any || phase.modularity - q_before_phase <= PHASE_GAIN_TOL {
            let raw: Vec<usize> = node_to_super.iter().map(|&s| phase.assign[s]).collect();
            let partition = Partition::from_assignments(&raw)?;
            return Ok(LouvainResult {
                partition,
                modularity: phase.modularity,
                sweep_modularity,
            });
        }
        let (next, remap) = level.aggregate(&phase.assign);
        for slot in node_to_super.iter_mut() {
            *slot = remap[phase.assign[*slot]];
        }
        level = next;
        q_before_phase = phase.modularity;
    }
}

struct PhaseOutcome {
    assign: Vec<usize>,
    modularity: f64,
    sweep_modularity: Vec<f64>,
    moved_any: bool,
}

/// Working representation for Louvain: weighted graph with explicit
/// self-loop weights (created by aggregation).
struct LevelGraph {
    /// neighbors[i] = (j, w) with j != i, both directions stored
    neighbors: Vec<Vec<(usize, f64)>>,
    /// loop weight s_i, counted once (contributes 2·s_i to the degree)
    self_weight: Vec<f64>,
    /// k_i = Σ_j w_ij + 2·s_i
    degree: Vec<f64>,
    /// Σ_i k_i; invariant across aggregation levels
    total: f64,
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> LevelGraph {
        let n = g.n();
        let mut neighbors = vec![Vec::new(); n];
        for (i, j, v) in g.adjacency().iter() {
            neighbors[i].push((j, v));
        }
        let degree: Vec<f64> = g.degree_vector().values().to_vec();
        let total: f64 = degree.iter().sum();
        LevelGraph {
            neighbors,
            self_weight: vec![0.0; n],
            degree,
            total,
        }
    }

    fn n(&self) -> usize {
        self.neighbors.len()
    }

    fn singleton_modularity(&self) -> f64 {
        let w2 = self.total;
        (0..self.n())
            .map(|i| 2.0 * self.self_weight[i] / w2 - (self.degree[i] / w2).powi(2))
            .sum()
    }

    /// Phase 1: sweep nodes until no single move gains more than `gain_tol`.
    fn local_moves(&self, rng: &mut rand_chacha::ChaCha8Rng, gain_tol: f64) -> PhaseOutcome {
        let n = self.n();
        let w2 = self.total;
        let mut assign: Vec<usize> = (0..n).collect();
        let mut comm_degree: Vec<f64> = self.degree.clone();
        // Σ over ordered pairs inside each community (self-loops counted twice)
        let mut comm_internal: Vec<f64> = self.self_weight.iter().map(|s| 2.0 * s).collect();

        let q_of = |comm_degree: &[f64], comm_internal: &[f64]| -> f64 {
            comm_internal
                .iter()
                .zip(comm_degree)
                .map(|(&int, &deg)| int / w2 - (deg / w2).powi(2))
                .sum()
        };

        let mut order: Vec<usize> = (0..n).collect();
        let mut sweep_modularity = Vec::new();
        let mut moved_any = false;
        // scratch: edge weight from the current node into each community
        let mut weight_to: Vec<f64> = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();

        loop {
            order.shuffle(rng);
            let mut moved_this_sweep = false;
            for &node in &order {
                let deg = self.degree[node];
                let home = assign[node];

                touched.clear();
                for &(nbr, w) in &self.neighbors[node] {
                    let c = assign[nbr];
                    if weight_to[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    weight_to[c] += w;
                }
                if !touched.contains(&home) {
                    touched.push(home);
                }

                // detach node from its community
                comm_degree[home] -= deg;
                comm_internal[home] -= 2.0 * weight_to[home] + 2.0 * self.self_weight[node];

                // insertion score, up to terms shared by all candidates;
                // the Q change of a move home -> c is 2·(score(c) − score(home))
                let score = |c: usize| weight_to[c] / w2 - deg * comm_degree[c] / (w2 * w2);
                // ascending id order so exact ties keep the lowest community id
                touched.sort_unstable();
                let home_score = score(home);
                let mut best_c = home;
                let mut best_score = home_score;
                for &c in &touched {
                    if c != home {
                        let s = score(c);
                        if s > best_score {
                            best_c = c;
                            best_score = s;
                        }
                    }
                }
                if best_c != home && 2.0 * (best_score - home_score) <= gain_tol {
                    best_c = home;
                }

                comm_degree[best_c] += deg;
                comm_internal[best_c] += 2.0 * weight_to[best_c] + 2.0 * self.self_weight[node];
                assign[node] = best_c;
                if best_c != home {
                    moved_this_sweep = true;
                    moved_any = true;
                }

                for &c in &touched {
                    weight_to[c] = 0.0;
                }
            }
            sweep_modularity.push(q_of(&comm_degree, &comm_internal));
            if !moved_this_sweep {
                break;
            }
        }
        let modularity = *sweep_modularity.last().unwrap();
        PhaseOutcome {
            assign,
            modularity,
            sweep_modularity,
            moved_any,
        }
    }

    /// Phase 2: one super-node per occupied community. Returns the new graph
    /// and the mapping from old community id to new node id.
    fn aggregate(&self, assign: &[usize]) -> (LevelGraph, Vec<usize>) {
        let n = self.n();
        let mut remap = vec![usize::MAX; n];
        let mut next = 0usize;
        for v in 0..n {
            let c = assign[v];
            if remap[c] == usize::MAX {
                remap[c] = next;
                next += 1;
            }
        }
        let k = next;
        let mut self_weight = vec![0.0f64; k];
        let mut cross: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for v in 0..n {
            let cv = remap[assign[v]];
            self_weight[cv] += self.self_weight[v];
            for &(u, w) in &self.neighbors[v] {
                let cu = remap[assign[u]];
                if cu == cv {
                    // each undirected intra-community edge is visited from
                    // both endpoints and becomes loop weight w
                    self_weight[cv] += w / 2.0;
                } else {
                    *cross[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        let neighbors: Vec<Vec<(usize, f64)>> =
            cross.into_iter().map(|m| m.into_iter().collect()).collect();
        let degree: Vec<f64> = (0..k)
            .map(|c| neighbors[c].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_weight[c])
            .collect();
        (
            LevelGraph {
                neighbors,
                self_weight,
                degree,
                total: self.total,
            },
            remap,
        )
    }
}

/// Expands a partition into the block-complete membership matrix.
pub fn membership_matrix(p: &Partition) -> MembershipMatrix {
    let mut trip = Vec::new();
    for members in p.members() {
        for (a, &i) in members.iter().enumerate() {
            for &j in members.iter().skip(a + 1) {
                trip.push((i, j, 1.0));
                trip.push((j, i, 1.0));
            }
        }
    }
    MembershipMatrix {
        matrix: CsrMatrix::from_triplets(p.n(), p.n(), trip),
        partition: p.clone(),
    }
}

/// Whether an exactly s-regular block exists for a community of `size`
/// nodes (complete blocks count as regular).
pub fn regular_block_feasible(size: usize, s: usize) -> bool {
    s >= size.saturating_sub(1) || size % 2 == 0 || s % 2 == 0
}

/// Samples the s-regular sparsification of a partition's membership matrix.
///
/// Each community is laid out on a ring after a seeded shuffle of its
/// members: ring edges at distances 1..=s/2, plus a matching of diametric
/// chords when `s` is odd. Communities with `size <= s + 1` stay complete.
/// When both `s` and the size are odd, exact regularity is impossible and
/// exactly one node receives degree `s + 1`.
pub fn sparsify(p: &Partition, s: usize, seed: u64) -> Result<SparsifiedMembership> {
    if s == 0 {
        return Err(Error::parameter("s", "sparsification degree must be >= 1"));
    }
    let mut rng = new_rng(seed);
    let mut trip = Vec::new();
    fn push(trip: &mut Vec<(usize, usize, f64)>, i: usize, j: usize) {
        trip.push((i, j, 1.0));
        trip.push((j, i, 1.0));
    }

    for mut members in p.members() {
        let size = members.len();
        if size <= 1 {
            continue;
        }
        if s >= size - 1 {
            for a in 0..size {
                for b in (a + 1)..size {
                    push(&mut trip, members[a], members[b]);
                }
            }
            continue;
        }
        members.shuffle(&mut rng);
        let half = s / 2;
        for i in 0..size {
            for dist in 1..=half {
                push(&mut trip, members[i], members[(i + dist) % size]);
            }
        }
        if s % 2 == 1 {
            if size % 2 == 0 {
                for i in 0..size / 2 {
                    push(&mut trip, members[i], members[i + size / 2]);
                }
            } else {
                // near-regular fallback: one node is covered twice
                let d = (size - 1) / 2;
                for t in 0..=d {
                    push(&mut trip, members[t], members[t + d]);
                }
            }
        }
    }
    Ok(SparsifiedMembership {
        matrix: CsrMatrix::from_triplets(p.n(), p.n(), trip),
        s,
    })
}

/// Normalizes `A + λ·A_c^(s)` into a message passing operator. With λ = 0 the
/// result is exactly the normalization of `A` alone.
pub fn build_operator(a: &CsrMatrix, ac_s: &SparsifiedMembership, lambda: f64) -> Result<Operator> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::parameter("lambda", "must be finite and >= 0"));
    }
    if ac_s.matrix().n_rows() != a.n_rows() {
        return Err(Error::Shape(format!(
            "adjacency is {}x{} but membership is {}x{}",
            a.n_rows(),
            a.n_cols(),
            ac_s.matrix().n_rows(),
            ac_s.matrix().n_cols()
        )));
    }
    if lambda == 0.0 {
        return Ok(symmetric_normalize(a));
    }
    Ok(symmetric_normalize(&a.add_scaled(ac_s.matrix(), lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_sbm;

    pub(crate) fn two_triangles() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
            ],
            None,
            None,
        )
        .unwrap()
    }

    /// Brute-force double sum straight from the definition.
    fn modularity_oracle(g: &Graph, p: &Partition) -> f64 {
        let n = g.n();
        let a = g.adjacency().to_dense();
        let d: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
        let w2: f64 = d.iter().sum();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                if p.community_of(i) == p.community_of(j) {
                    q += a[(i, j)] - d[i] * d[j] / w2;
                }
            }
        }
        q / w2
    }

    #[test]
    fn modularity_single_community_is_zero() {
        let g = two_triangles();
        let q = modularity(&g, &Partition::single_community(6)).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn modularity_four_cycle_singletons() {
        let g = Graph::from_edges(
            4,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)],
            None,
            None,
        )
        .unwrap();
        let q = modularity(&g, &Partition::singletons(4)).unwrap();
        assert!((q + 0.25).abs() < 1e-15);
    }

    #[test]
    fn modularity_two_triangles_ground_truth() {
        let g = two_triangles();
        let p = Partition::from_assignments(&[0, 0, 0, 1, 1, 1]).unwrap();
        let q = modularity(&g, &p).unwrap();
        assert!((q - modularity_oracle(&g, &p)).abs() < 1e-12);
        assert!((q - 0.5).abs() < 1e-15);
    }

    #[test]
    fn modularity_matches_oracle_on_random_pairs() {
        for seed in 0..20u64 {
            let g = generate_sbm(3, 5 + (seed as usize % 4), 0.7, 0.2, seed).unwrap();
            let mut rng = new_rng(seed ^ 0xabc);
            let raw: Vec<usize> = (0..g.n())
                .map(|_| rand::Rng::random_range(&mut rng, 0..4))
                .collect();
            let p = Partition::from_assignments(&raw).unwrap();
            let q = modularity(&g, &p).unwrap();
            let oracle = modularity_oracle(&g, &p);
            assert!(
                (q - oracle).abs() < 1e-12,
                "seed {seed}: {q} vs oracle {oracle}"
            );
            assert!((-0.5..=1.0).contains(&q));
        }
    }

    #[test]
    fn modularity_empty_graph_is_error() {
        let g = Graph::from_edges(3, &[], None, None).unwrap();
        assert!(matches!(
            modularity(&g, &Partition::singletons(3)),
            Err(Error::UndefinedModularity(_))
        ));
    }

    #[test]
    fn louvain_recovers_two_triangles() {
        let g = two_triangles();
        let res = louvain_with_trace(&g, 3).unwrap();
        assert_eq!(res.partition.k(), 2);
        assert_eq!(res.partition.sizes(), &[3, 3]);
        assert!((res.modularity - 0.5).abs() < 1e-12);
        assert_eq!(res.partition.community_of(0), res.partition.community_of(2));
        assert_ne!(res.partition.community_of(0), res.partition.community_of(3));
    }

    #[test]
    fn louvain_complete_graph_single_community() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((i, j, 1.0));
            }
        }
        let g = Graph::from_edges(5, &edges, None, None).unwrap();
        let res = louvain_with_trace(&g, 1).unwrap();
        assert_eq!(res.partition.k(), 1);
        assert!(res.modularity.abs() < 1e-12);
    }

    #[test]
    fn louvain_sweep_modularity_non_decreasing() {
        for seed in 0..5u64 {
            let g = generate_sbm(4, 12, 0.5, 0.02, seed).unwrap();
            let res = louvain_with_trace(&g, seed).unwrap();
            for w in res.sweep_modularity.windows(2) {
                assert!(
                    w[1] >= w[0] - 1e-9,
                    "sweep trace decreased: {:?}",
                    res.sweep_modularity
                );
            }
            let q = modularity(&g, &res.partition).unwrap();
            assert!((q - res.modularity).abs() < 1e-9);
            assert!(q >= 0.0);
        }
    }

    #[test]
    fn louvain_separates_planted_blocks() {
        for seed in 0..10u64 {
            let g = generate_sbm(2, 50, 0.3, 0.01, seed).unwrap();
            let p = louvain(&g, seed).unwrap();
            let labels = g.labels().unwrap();
            // pair-level agreement; the metrics module asserts the ARI form
            let mut agree = 0usize;
            let mut total = 0usize;
            for i in 0..g.n() {
                for j in (i + 1)..g.n() {
                    total += 1;
                    let same_true = labels[i] == labels[j];
                    let same_pred = p.community_of(i) == p.community_of(j);
                    if same_true == same_pred {
                        agree += 1;
                    }
                }
            }
            assert!(
                agree as f64 / total as f64 > 0.95,
                "seed {seed}: pair agreement {}",
                agree as f64 / total as f64
            );
        }
    }

    #[test]
    fn louvain_deterministic_under_seed() {
        let g = generate_sbm(3, 30, 0.2, 0.02, 9).unwrap();
        let p1 = louvain(&g, 5).unwrap();
        let p2 = louvain(&g, 5).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn membership_matrix_small_cases() {
        let p = Partition::from_assignments(&[0, 0, 1]).unwrap();
        let m = membership_matrix(&p);
        let dense = m.matrix().to_dense();
        let expect = ndarray::array![[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
        assert_eq!(dense, expect);

        let p = Partition::singletons(4);
        assert_eq!(membership_matrix(&p).matrix().nnz(), 0);

        let p = Partition::single_community(3);
        let m = membership_matrix(&p).matrix().to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn membership_nnz_matches_block_sizes() {
        let p = Partition::from_assignments(&[0, 1, 0, 2, 1, 0, 2, 2, 2]).unwrap();
        let m = membership_matrix(&p);
        let expect: usize = p.sizes().iter().map(|&nk| nk * (nk - 1)).sum();
        assert_eq!(m.matrix().nnz(), expect);
        for (i, j, _) in m.matrix().iter() {
            assert_eq!(p.community_of(i), p.community_of(j));
        }
    }

    #[test]
    fn sparsify_clamps_small_communities() {
        let p = Partition::from_assignments(&[0, 0, 0, 1, 1, 1]).unwrap();
        let ac = membership_matrix(&p);
        let sp = sparsify(&p, 2, 1).unwrap();
        assert_eq!(sp.matrix().to_dense(), ac.matrix().to_dense());
    }

    #[test]
    fn sparsify_regular_degrees() {
        let p = Partition::from_assignments(&[0; 6]).unwrap();
        let sp = sparsify(&p, 2, 42).unwrap();
        for (i, &d) in sp.matrix().row_sums().iter().enumerate() {
            assert_eq!(d, 2.0, "node {i}");
        }
        let p = Partition::from_assignments(&[0; 8]).unwrap();
        let sp = sparsify(&p, 3, 42).unwrap();
        for &d in sp.matrix().row_sums().iter() {
            assert_eq!(d, 3.0);
        }
    }

    #[test]
    fn sparsify_near_regular_fallback() {
        // s=1 with an odd community of 5: degrees {1,1,1,1,2}
        let p = Partition::from_assignments(&[0; 5]).unwrap();
        let sp = sparsify(&p, 1, 7).unwrap();
        let mut degs: Vec<i64> = sp.matrix().row_sums().iter().map(|&d| d as i64).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn sparsify_support_and_determinism() {
        let p =
            Partition::from_assignments(&[0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]).unwrap();
        let ac = membership_matrix(&p);
        let s1 = sparsify(&p, 2, 11).unwrap();
        let s2 = sparsify(&p, 2, 11).unwrap();
        assert_eq!(s1.matrix(), s2.matrix());
        assert!(s1.matrix().is_symmetric(0.0));
        for (i, j, v) in s1.matrix().iter() {
            assert_eq!(v, 1.0);
            assert!(
                ac.matrix().get(i, j) == 1.0,
                "support escaped A_c at ({i},{j})"
            );
        }
    }

    #[test]
    fn build_operator_lambda_zero_reduces_exactly() {
        let g = generate_sbm(2, 10, 0.4, 0.05, 3).unwrap();
        let p = louvain(&g, 1).unwrap();
        let sp = sparsify(&p, 2, 2).unwrap();
        let op0 = build_operator(g.adjacency(), &sp, 0.0).unwrap();
        let plain = symmetric_normalize(g.adjacency());
        assert_eq!(op0, plain);
    }

    #[test]
    fn build_operator_pure_membership_blocks() {
        // A = 0, λ = 1 on triangle blocks: constant 1/3 blocks
        let p = Partition::from_assignments(&[0, 0, 0, 1, 1, 1]).unwrap();
        let sp = sparsify(&p, 2, 1).unwrap();
        let zero = CsrMatrix::zeros(6, 6);
        let op = build_operator(&zero, &sp, 1.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((op.matrix().get(i, j) - 1.0 / 3.0).abs() < 1e-15);
                assert!((op.matrix().get(3 + i, 3 + j) - 1.0 / 3.0).abs() < 1e-15);
                assert_eq!(op.matrix().get(i, 3 + j), 0.0);
            }
        }
    }

    #[test]
    fn build_operator_matches_dense_reference() {
        let g = generate_sbm(2, 10, 0.3, 0.1, 8).unwrap();
        let p = louvain(&g, 4).unwrap();
        let sp = sparsify(&p, 2, 5).unwrap();
        let lambda = 0.5;
        let op = build_operator(g.adjacency(), &sp, lambda).unwrap();

        let sum = g.adjacency().to_dense() + sp.matrix().to_dense().mapv(|v| lambda * v);
        let n = g.n();
        let d: Vec<f64> = (0..n).map(|i| sum.row(i).sum()).collect();
        for i in 0..n {
            for j in 0..n {
                let aij = sum[(i, j)] + if i == j { 1.0 } else { 0.0 };
                let expect = aij / ((d[i] + 1.0) * (d[j] + 1.0)).sqrt();
                assert!(
                    (op.matrix().get(i, j) - expect).abs() < 1e-13,
                    "({i},{j}): {} vs {expect}",
                    op.matrix().get(i, j)
                );
            }
        }
    }

    #[test]
    fn build_operator_rejects_negative_lambda() {
        let sp = SparsifiedMembership::empty(3, 1);
        let a = CsrMatrix::zeros(3, 3);
        assert!(matches!(
            build_operator(&a, &sp, -0.1),
            Err(Error::Parameter { .. })
        ));
    }
}
