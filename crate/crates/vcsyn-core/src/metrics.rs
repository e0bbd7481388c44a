//! Per-firm social-capital indicators on the syndication network.
//!
//! Weighted degree and Burt constraint use edge weights; closeness and
//! betweenness use unweighted hop-count shortest paths. Closeness is the
//! harmonic variant so disconnected networks stay well defined, with
//! unreachable pairs contributing zero.

use std::collections::VecDeque;

use thiserror::Error;

use crate::network::SyndicationGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("SINGLE_NODE: closeness needs at least two nodes")]
    SingleNode,
    #[error("TOO_SMALL: betweenness needs at least three nodes")]
    TooSmall,
    #[error("ISOLATE_PRESENT: constraint requires every node to have degree >= 1")]
    IsolatePresent,
}

/// One value per node, aligned to the graph's lexicographic node order.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeVector {
    pub label: String,
    pub values: Vec<f64>,
    pub scaled: bool,
}

impl NodeVector {
    pub fn new(label: &str, values: Vec<f64>) -> Self {
        NodeVector {
            label: label.to_string(),
            values,
            scaled: false,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Node strength: sum of incident edge weights.
pub fn weighted_degree(g: &SyndicationGraph) -> NodeVector {
    let values = (0..g.node_count())
        .map(|i| g.neighbors(i).iter().map(|&(_, w)| w as f64).sum())
        .collect();
    NodeVector::new("weighted_degree", values)
}

fn bfs_distances(g: &SyndicationGraph, source: usize, dist: &mut [i64]) {
    dist.fill(-1);
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in g.neighbors(v) {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Harmonic closeness: mean reciprocal hop distance to the other nodes,
/// with 1/inf = 0 for unreachable pairs.
pub fn closeness(g: &SyndicationGraph) -> Result<NodeVector, MetricError> {
    let n = g.node_count();
    if n < 2 {
        return Err(MetricError::SingleNode);
    }
    let mut values = vec![0.0; n];
    let mut dist = vec![-1i64; n];
    for i in 0..n {
        bfs_distances(g, i, &mut dist);
        let sum: f64 = dist
            .iter()
            .enumerate()
            .filter(|&(j, &d)| j != i && d > 0)
            .map(|(_, &d)| 1.0 / d as f64)
            .sum();
        values[i] = sum / (n - 1) as f64;
    }
    Ok(NodeVector::new("closeness", values))
}

/// Betweenness centrality by Brandes' single-source accumulation over
/// unweighted shortest paths, normalized by (n-1)(n-2)/2 with each
/// unordered pair counted once.
///
/// The source loop runs in node order and the accumulation is a plain
/// ordered sum, so results are bitwise reproducible.
pub fn betweenness(g: &SyndicationGraph) -> Result<NodeVector, MetricError> {
    let n = g.node_count();
    if n < 3 {
        return Err(MetricError::TooSmall);
    }
    let mut raw = vec![0.0f64; n];
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue: VecDeque<usize> = VecDeque::new();

    for s in 0..n {
        stack.clear();
        for p in &mut pred {
            p.clear();
        }
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &(w, _) in g.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            let coeff = (1.0 + delta[w]) / sigma[w];
            for &v in &pred[w] {
                delta[v] += sigma[v] * coeff;
            }
            if w != s {
                raw[w] += delta[w];
            }
        }
    }

    // The source loop visits each unordered pair from both endpoints, so the
    // raw sums are 2 * sum_{s<t} sigma_st(i)/sigma_st.
    let norm = ((n - 1) * (n - 2)) as f64;
    let values = raw.into_iter().map(|b| b / norm).collect();
    Ok(NodeVector::new("betweenness", values))
}

/// Burt's constraint with tie proportions p_ij = w_ij / strength(i):
/// c(i) = sum_{j in N(i)} (p_ij + sum_q p_iq * p_qj)^2.
pub fn constraint(g: &SyndicationGraph) -> Result<NodeVector, MetricError> {
    let n = g.node_count();
    if (0..n).any(|i| g.degree(i) == 0) {
        return Err(MetricError::IsolatePresent);
    }
    let strength: Vec<f64> = (0..n)
        .map(|i| g.neighbors(i).iter().map(|&(_, w)| w as f64).sum())
        .collect();
    let p = |i: usize, j: usize| -> f64 {
        match g.weight(i, j) {
            Some(w) => w as f64 / strength[i],
            None => 0.0,
        }
    };
    let mut values = vec![0.0; n];
    for i in 0..n {
        let mut total = 0.0;
        for &(j, w_ij) in g.neighbors(i) {
            let direct = w_ij as f64 / strength[i];
            let indirect: f64 = g
                .neighbors(i)
                .iter()
                .filter(|&&(q, _)| q != j)
                .map(|&(q, w_iq)| (w_iq as f64 / strength[i]) * p(q, j))
                .sum();
            let term = direct + indirect;
            total += term * term;
        }
        values[i] = total;
    }
    Ok(NodeVector::new("structural_hole", values))
}

/// Column-wise min-max rescale to [0,1]; a constant column maps to all zeros.
pub fn scale_minmax(v: &NodeVector) -> NodeVector {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in &v.values {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let values = if v.values.is_empty() || lo == hi {
        vec![0.0; v.values.len()]
    } else {
        let span = hi - lo;
        v.values.iter().map(|&x| (x - lo) / span).collect()
    };
    NodeVector {
        label: v.label.clone(),
        values,
        scaled: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Mode;
    use approx::assert_abs_diff_eq;

    fn graph(n: usize, edges: &[(usize, usize, u32)]) -> SyndicationGraph {
        let nodes: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
        SyndicationGraph::from_edges(Mode::SameRound, nodes, edges)
    }

    fn path3() -> SyndicationGraph {
        graph(3, &[(0, 1, 1), (1, 2, 1)])
    }

    fn triangle() -> SyndicationGraph {
        graph(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)])
    }

    #[test]
    fn degree_of_unit_triangle() {
        assert_eq!(weighted_degree(&triangle()).values, vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn degree_uses_weights() {
        let g = graph(2, &[(0, 1, 3)]);
        assert_eq!(weighted_degree(&g).values, vec![3.0, 3.0]);
    }

    #[test]
    fn degree_of_path() {
        assert_eq!(weighted_degree(&path3()).values, vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn closeness_of_path() {
        let v = closeness(&path3()).unwrap();
        assert_abs_diff_eq!(v.values[0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(v.values[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.values[2], 0.75, epsilon = 1e-15);
    }

    #[test]
    fn closeness_of_complete_graph_is_one() {
        let g = graph(
            4,
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
        );
        for v in closeness(&g).unwrap().values {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn closeness_ignores_unreachable_pairs() {
        let g = graph(4, &[(0, 1, 1), (2, 3, 1)]);
        for v in closeness(&g).unwrap().values {
            assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn closeness_rejects_single_node() {
        let g = graph(1, &[]);
        assert_eq!(closeness(&g).unwrap_err(), MetricError::SingleNode);
    }

    #[test]
    fn betweenness_of_path_centers_on_middle() {
        let v = betweenness(&path3()).unwrap();
        assert_eq!(v.values, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn betweenness_of_complete_graph_is_zero() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((i, j, 1));
            }
        }
        let g = graph(5, &edges);
        assert_eq!(betweenness(&g).unwrap().values, vec![0.0; 5]);
    }

    #[test]
    fn betweenness_rejects_tiny_graphs() {
        let g = graph(2, &[(0, 1, 1)]);
        assert_eq!(betweenness(&g).unwrap_err(), MetricError::TooSmall);
    }

    #[test]
    fn betweenness_splits_between_equal_paths() {
        // 4-cycle: every node sits on one of the two shortest paths of the
        // opposite pair, carrying half of it.
        let g = graph(4, &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]);
        let v = betweenness(&g).unwrap();
        for x in v.values {
            assert_abs_diff_eq!(x, 0.5 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn constraint_of_dyad_is_one() {
        let g = graph(2, &[(0, 1, 1)]);
        assert_eq!(constraint(&g).unwrap().values, vec![1.0, 1.0]);
    }

    #[test]
    fn constraint_of_unit_triangle() {
        for v in constraint(&triangle()).unwrap().values {
            assert_abs_diff_eq!(v, 1.125, epsilon = 1e-15);
        }
    }

    #[test]
    fn constraint_of_star() {
        let g = graph(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
        let v = constraint(&g).unwrap();
        assert_abs_diff_eq!(v.values[0], 1.0 / 3.0, epsilon = 1e-15);
        for leaf in 1..4 {
            assert_abs_diff_eq!(v.values[leaf], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn constraint_rejects_isolates() {
        let g = graph(3, &[(0, 1, 1)]);
        assert_eq!(constraint(&g).unwrap_err(), MetricError::IsolatePresent);
    }

    #[test]
    fn minmax_maps_to_unit_interval() {
        let v = scale_minmax(&NodeVector::new("x", vec![1.0, 2.0, 3.0]));
        assert_eq!(v.values, vec![0.0, 0.5, 1.0]);
        assert!(v.scaled);
    }

    #[test]
    fn minmax_of_constant_vector_is_zero() {
        let v = scale_minmax(&NodeVector::new("x", vec![5.0, 5.0]));
        assert_eq!(v.values, vec![0.0, 0.0]);
    }

    #[test]
    fn minmax_is_idempotent_on_unit_range() {
        let v = NodeVector::new("x", vec![0.0, 0.25, 1.0]);
        assert_eq!(scale_minmax(&scale_minmax(&v)).values, v.values);
    }
}
