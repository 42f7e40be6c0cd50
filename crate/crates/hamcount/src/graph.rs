//! Weighted digraphs, undirected graphs, density profiles and instance
//! generators. Vertices are 1-based everywhere a user can see them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::LogMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(u32, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    BadWeight(u32, u32, f64),
    #[error("degree floor ceil(alpha*n) = {floor} exceeds n-1 = {max}")]
    AlphaTooLarge { floor: u32, max: u32 },
    #[error("alpha must lie in (0, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: u32, got: u32 },
}

/// Directed edge with a positive weight; endpoints are 1-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub tail: u32,
    pub head: u32,
    pub weight: f64,
}

/// Simple weighted digraph: no self-loops, no parallel edges, all weights
/// positive. Edges are kept sorted by (tail, head) so that output and edge
/// lookups are deterministic. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDigraph {
    n: u32,
    edges: Vec<Edge>,
}

impl WeightedDigraph {
    pub fn new(n: u32, edges: Vec<(u32, u32, f64)>) -> Result<Self, GraphError> {
        let mut list = Vec::with_capacity(edges.len());
        for (tail, head, weight) in edges {
            if tail < 1 || tail > n {
                return Err(GraphError::VertexOutOfRange(tail, n));
            }
            if head < 1 || head > n {
                return Err(GraphError::VertexOutOfRange(head, n));
            }
            if tail == head {
                return Err(GraphError::SelfLoop(tail));
            }
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(GraphError::BadWeight(tail, head, weight));
            }
            list.push(Edge { tail, head, weight });
        }
        list.sort_by_key(|e| (e.tail, e.head));
        for w in list.windows(2) {
            if w[0].tail == w[1].tail && w[0].head == w[1].head {
                return Err(GraphError::DuplicateEdge(w[0].tail, w[0].head));
            }
        }
        Ok(Self { n, edges: list })
    }

    /// Complete digraph on `n` vertices, all weights 1.
    pub fn complete(n: u32) -> Self {
        let mut edges = Vec::with_capacity((n as usize) * (n as usize - 1));
        for t in 1..=n {
            for h in 1..=n {
                if t != h {
                    edges.push(Edge {
                        tail: t,
                        head: h,
                        weight: 1.0,
                    });
                }
            }
        }
        Self { n, edges }
    }

    /// Directed cycle 1 -> 2 -> ... -> n -> 1, all weights 1.
    pub fn directed_cycle(n: u32) -> Self {
        let mut edges: Vec<Edge> = (1..=n)
            .map(|t| Edge {
                tail: t,
                head: if t == n { 1 } else { t + 1 },
                weight: 1.0,
            })
            .collect();
        edges.sort_by_key(|e| (e.tail, e.head));
        Self { n, edges }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, tail: u32, head: u32) -> bool {
        self.edges
            .binary_search_by_key(&(tail, head), |e| (e.tail, e.head))
            .is_ok()
    }

    /// Adjacency matrix in log space: entry (i, j) holds ln w_ij for an edge
    /// (i, j), a structural zero otherwise. The diagonal is always zero
    /// because self-loops are excluded.
    pub fn adjacency_matrix(&self) -> LogMatrix {
        let n = self.n as usize;
        let mut m = LogMatrix::zeros(n);
        for e in &self.edges {
            m.set_log(
                e.tail as usize - 1,
                e.head as usize - 1,
                e.weight.ln(),
            );
        }
        m
    }

    /// In/out degree profile and the density ratio alpha = Δ/n.
    pub fn density(&self) -> DensityProfile {
        let n = self.n as usize;
        let mut indegree = vec![0u32; n];
        let mut outdegree = vec![0u32; n];
        for e in &self.edges {
            outdegree[e.tail as usize - 1] += 1;
            indegree[e.head as usize - 1] += 1;
        }
        let per_vertex_min: Vec<u32> = indegree
            .iter()
            .zip(&outdegree)
            .map(|(&i, &o)| i.min(o))
            .collect();
        let min_degree = per_vertex_min.iter().copied().min().unwrap_or(0);
        DensityProfile {
            alpha: f64::from(min_degree) / f64::from(self.n),
            indegree,
            outdegree,
            per_vertex_min,
            min_degree,
        }
    }
}

/// Per-vertex degree data: indegree Δ⁻(i), outdegree Δ⁺(i), their minimum
/// Δ(i), the global minimum Δ and alpha = Δ/n.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub indegree: Vec<u32>,
    pub outdegree: Vec<u32>,
    pub per_vertex_min: Vec<u32>,
    pub min_degree: u32,
    pub alpha: f64,
}

/// Simple undirected graph; edges are unordered pairs stored with the
/// smaller endpoint first.
#[derive(Clone, Debug, PartialEq)]
pub struct UndirectedGraph {
    n: u32,
    edges: Vec<(u32, u32)>,
}

impl UndirectedGraph {
    pub fn new(n: u32, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        let mut list = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a < 1 || a > n {
                return Err(GraphError::VertexOutOfRange(a, n));
            }
            if b < 1 || b > n {
                return Err(GraphError::VertexOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(Self { n, edges: list })
    }

    /// Complete undirected graph on `n` vertices.
    pub fn complete(n: u32) -> Self {
        let mut edges = Vec::new();
        for a in 1..=n {
            for b in (a + 1)..=n {
                edges.push((a, b));
            }
        }
        Self { n, edges }
    }

    /// Cycle 1 - 2 - ... - n - 1.
    pub fn cycle(n: u32) -> Self {
        let mut edges: Vec<(u32, u32)> = (1..n).map(|a| (a, a + 1)).collect();
        edges.push((1, n));
        edges.sort_unstable();
        Self { n, edges }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }
}

/// Symmetric digraph of an undirected graph: each edge {i, j} becomes the
/// two directed edges (i, j) and (j, i), all weights 1. Requires n ≥ 3.
pub fn symmetric_lift(g: &UndirectedGraph) -> Result<WeightedDigraph, GraphError> {
    if g.n < 3 {
        return Err(GraphError::OrderTooSmall { min: 3, got: g.n });
    }
    let mut edges = Vec::with_capacity(2 * g.edges.len());
    for &(a, b) in &g.edges {
        edges.push(Edge {
            tail: a,
            head: b,
            weight: 1.0,
        });
        edges.push(Edge {
            tail: b,
            head: a,
            weight: 1.0,
        });
    }
    edges.sort_by_key(|e| (e.tail, e.head));
    Ok(WeightedDigraph { n: g.n, edges })
}

/// Random unweighted digraph in which every vertex keeps indegree and
/// outdegree at least ceil(alpha * n). Starts from the complete digraph and
/// removes edges in a seeded random order while both endpoints stay above
/// the floor; deterministic for a fixed seed.
pub fn gen_dense_digraph(n: u32, alpha: f64, seed: u64) -> Result<WeightedDigraph, GraphError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(GraphError::AlphaOutOfRange(alpha));
    }
    if n < 2 {
        return Err(GraphError::OrderTooSmall { min: 2, got: n });
    }
    let floor = (alpha * f64::from(n)).ceil() as u32;
    if floor > n - 1 {
        return Err(GraphError::AlphaTooLarge { floor, max: n - 1 });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<(u32, u32)> = Vec::with_capacity((n as usize) * (n as usize - 1));
    for t in 1..=n {
        for h in 1..=n {
            if t != h {
                all.push((t, h));
            }
        }
    }
    all.shuffle(&mut rng);

    let nn = n as usize;
    let mut outdeg = vec![n - 1; nn];
    let mut indeg = vec![n - 1; nn];
    let mut removed = vec![false; nn * nn];
    for &(t, h) in &all {
        let (ti, hi) = (t as usize - 1, h as usize - 1);
        if outdeg[ti] > floor && indeg[hi] > floor {
            outdeg[ti] -= 1;
            indeg[hi] -= 1;
            removed[ti * nn + hi] = true;
        }
    }

    let mut edges = Vec::new();
    for t in 1..=n {
        for h in 1..=n {
            if t != h && !removed[(t as usize - 1) * nn + (h as usize - 1)] {
                edges.push(Edge {
                    tail: t,
                    head: h,
                    weight: 1.0,
                });
            }
        }
    }
    Ok(WeightedDigraph { n, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_of_directed_cycle() {
        let g = WeightedDigraph::new(3, vec![(1, 2, 1.0), (2, 3, 1.0), (3, 1, 1.0)]).unwrap();
        let a = g.adjacency_matrix();
        assert_eq!(a.count_nonzero(), 3);
        assert_eq!(a.log_entry(0, 1), 0.0);
        assert_eq!(a.log_entry(1, 2), 0.0);
        assert_eq!(a.log_entry(2, 0), 0.0);
        assert!(a.is_zero(0, 0) && a.is_zero(1, 1) && a.is_zero(2, 2));
    }

    #[test]
    fn adjacency_of_empty_and_complete() {
        let g = WeightedDigraph::new(2, vec![]).unwrap();
        assert_eq!(g.adjacency_matrix().count_nonzero(), 0);
        let k3 = WeightedDigraph::complete(3);
        let a = k3.adjacency_matrix();
        assert_eq!(a.count_nonzero(), 6);
        for i in 0..3 {
            assert!(a.is_zero(i, i));
        }
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert_eq!(
            WeightedDigraph::new(3, vec![(1, 1, 1.0)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            WeightedDigraph::new(3, vec![(1, 2, 0.0)]),
            Err(GraphError::BadWeight(1, 2, 0.0))
        );
        assert_eq!(
            WeightedDigraph::new(3, vec![(1, 2, 1.0), (1, 2, 2.0)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            WeightedDigraph::new(3, vec![(1, 4, 1.0)]),
            Err(GraphError::VertexOutOfRange(4, 3))
        );
    }

    #[test]
    fn density_examples() {
        let k4 = WeightedDigraph::complete(4);
        let d = k4.density();
        assert_eq!(d.min_degree, 3);
        assert!((d.alpha - 0.75).abs() < 1e-15);

        let c3 = WeightedDigraph::directed_cycle(3);
        let d = c3.density();
        assert_eq!(d.min_degree, 1);
        assert!((d.alpha - 1.0 / 3.0).abs() < 1e-15);

        let empty = WeightedDigraph::new(3, vec![]).unwrap();
        let d = empty.density();
        assert_eq!(d.min_degree, 0);
        assert_eq!(d.alpha, 0.0);
    }

    #[test]
    fn generator_respects_degree_floor() {
        let g = gen_dense_digraph(10, 0.8, 7).unwrap();
        assert!(g.density().min_degree >= 8);
    }

    #[test]
    fn generator_rejects_unreachable_floor() {
        assert_eq!(
            gen_dense_digraph(4, 1.0, 1),
            Err(GraphError::AlphaTooLarge { floor: 4, max: 3 })
        );
    }

    #[test]
    fn generator_is_deterministic() {
        let a = gen_dense_digraph(6, 0.5, 3).unwrap();
        let b = gen_dense_digraph(6, 0.5, 3).unwrap();
        assert_eq!(a, b);
        let c = gen_dense_digraph(6, 0.5, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn symmetric_lift_doubles_edges() {
        let tri = UndirectedGraph::complete(3);
        let d = symmetric_lift(&tri).unwrap();
        assert_eq!(d.edge_count(), 6);

        let path = UndirectedGraph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let d = symmetric_lift(&path).unwrap();
        assert_eq!(d.edge_count(), 4);
        assert!(d.has_edge(2, 1) && d.has_edge(1, 2));

        let tiny = UndirectedGraph::new(2, vec![(1, 2)]).unwrap();
        assert!(symmetric_lift(&tiny).is_err());
    }
}
