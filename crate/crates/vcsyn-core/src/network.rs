//! Co-investment network construction.
//!
//! Investment events form a two-node (bipartite) graph between VC firms and
//! event nodes. Under same-round semantics an event node is a
//! (company, round) pair; under different-round semantics it is a company.
//! Projecting onto the firm side yields the undirected, weighted syndication
//! network: two firms are tied iff they share at least one event node, and
//! the edge weight counts the distinct shared event nodes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::ingest::EventLog;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    SameRound,
    DifferentRound,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::SameRound => "same_round",
            Mode::DifferentRound => "different_round",
        }
    }

    /// Accepts both the CLI spelling (`same-round`) and the file spelling
    /// (`same_round`).
    pub fn parse(s: &str) -> Option<Mode> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "same_round" => Some(Mode::SameRound),
            "different_round" => Some(Mode::DifferentRound),
            _ => None,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Event-node key: a company plus, in same-round mode, the financing round.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EventKey {
    pub company: String,
    pub round: Option<String>,
}

/// Two-node investment graph. Edges only connect a firm to an event node,
/// so two-colorability holds by construction; the incidence sets deduplicate
/// repeat investments by one firm into the same event.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    pub mode: Mode,
    pub vc_nodes: BTreeSet<String>,
    pub incidence: BTreeMap<EventKey, BTreeSet<String>>,
}

impl BipartiteGraph {
    pub fn event_nodes(&self) -> impl Iterator<Item = &EventKey> {
        self.incidence.keys()
    }

    pub fn edge_count(&self) -> usize {
        self.incidence.values().map(|s| s.len()).sum()
    }
}

pub fn build_bipartite(log: &EventLog, mode: Mode) -> BipartiteGraph {
    let mut incidence: BTreeMap<EventKey, BTreeSet<String>> = BTreeMap::new();
    let mut vc_nodes = BTreeSet::new();
    for ev in &log.investments {
        let key = match mode {
            Mode::SameRound => EventKey {
                company: ev.company_id.clone(),
                round: Some(ev.round_id.clone()),
            },
            Mode::DifferentRound => EventKey {
                company: ev.company_id.clone(),
                round: None,
            },
        };
        incidence.entry(key).or_default().insert(ev.vc_id.clone());
        vc_nodes.insert(ev.vc_id.clone());
    }
    BipartiteGraph {
        mode,
        vc_nodes,
        incidence,
    }
}

/// Undirected weighted one-mode graph over VC firms.
///
/// Nodes are ordered lexicographically by id so every downstream vector is
/// deterministic. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SyndicationGraph {
    pub mode: Mode,
    nodes: Vec<String>,
    /// Per node: (neighbor index, weight), sorted by neighbor index.
    adj: Vec<Vec<(usize, u32)>>,
}

impl SyndicationGraph {
    /// Build from node ids and weighted undirected edges given as index
    /// pairs. Self-loops and duplicate pairs are rejected by panic; callers
    /// construct edges from deduplicated sets.
    pub fn from_edges(mode: Mode, mut nodes: Vec<String>, edges: &[(usize, usize, u32)]) -> Self {
        let order: Vec<usize> = {
            let mut idx: Vec<usize> = (0..nodes.len()).collect();
            idx.sort_by(|&a, &b| nodes[a].cmp(&nodes[b]));
            idx
        };
        let mut rank = vec![0usize; nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        nodes.sort();

        let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); nodes.len()];
        for &(a, b, w) in edges {
            assert!(a != b, "self-loop");
            assert!(w >= 1, "zero edge weight");
            let (ra, rb) = (rank[a], rank[b]);
            adj[ra].push((rb, w));
            adj[rb].push((ra, w));
        }
        for list in &mut adj {
            list.sort_unstable();
            for pair in list.windows(2) {
                assert!(pair[0].0 != pair[1].0, "duplicate edge");
            }
        }
        SyndicationGraph { mode, nodes, adj }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(id)).ok()
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, u32)] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<u32> {
        self.adj[i]
            .binary_search_by_key(&j, |&(n, _)| n)
            .ok()
            .map(|pos| self.adj[i][pos].1)
    }

    /// Undirected edges with `i < j`, in index order.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &(j, w) in list {
                if i < j {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// Edge-list export: one `vc_id_a,vc_id_b,weight` line per edge with
    /// `vc_id_a < vc_id_b`, lines sorted lexicographically.
    pub fn edge_list_csv(&self) -> String {
        let mut out = String::from("vc_id_a,vc_id_b,weight\n");
        for (i, j, w) in self.edges() {
            out.push_str(&format!("{},{},{}\n", self.nodes[i], self.nodes[j], w));
        }
        out
    }

    /// Reload a graph from an edge-list export. Only firms incident to an
    /// edge appear, so every node has degree >= 1.
    pub fn from_edge_list_csv(mode: Mode, text: &str) -> Result<SyndicationGraph, String> {
        let mut weights: BTreeMap<(String, String), u32> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 || line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("edge list line {}: expected 3 fields", lineno + 1));
            }
            let w: u32 = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("edge list line {}: bad weight", lineno + 1))?;
            let (a, b) = (parts[0].trim().to_string(), parts[1].trim().to_string());
            if a == b {
                return Err(format!("edge list line {}: self-loop", lineno + 1));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if weights.insert(key, w).is_some() {
                return Err(format!("edge list line {}: duplicate edge", lineno + 1));
            }
        }
        let mut nodes: BTreeSet<String> = BTreeSet::new();
        for (a, b) in weights.keys() {
            nodes.insert(a.clone());
            nodes.insert(b.clone());
        }
        let nodes: Vec<String> = nodes.into_iter().collect();
        let index: BTreeMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let edges: Vec<(usize, usize, u32)> = weights
            .iter()
            .map(|((a, b), &w)| (index[a.as_str()], index[b.as_str()], w))
            .collect();
        Ok(SyndicationGraph::from_edges(mode, nodes, &edges))
    }
}

/// One-mode projection: firms tied iff they share an event node, weight =
/// number of distinct shared event nodes.
pub fn project(bipartite: &BipartiteGraph) -> SyndicationGraph {
    let nodes: Vec<String> = bipartite.vc_nodes.iter().cloned().collect();
    let index: BTreeMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let mut weights: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for investors in bipartite.incidence.values() {
        let ids: Vec<usize> = investors.iter().map(|vc| index[vc.as_str()]).collect();
        for (a, &i) in ids.iter().enumerate() {
            for &j in &ids[a + 1..] {
                let key = if i < j { (i, j) } else { (j, i) };
                *weights.entry(key).or_insert(0) += 1;
            }
        }
    }
    let edges: Vec<(usize, usize, u32)> = weights
        .into_iter()
        .map(|((i, j), w)| (i, j, w))
        .collect();
    SyndicationGraph::from_edges(bipartite.mode, nodes, &edges)
}

/// Drop nodes with no edges; edge set and relative node order are unchanged.
pub fn remove_isolates(g: &SyndicationGraph) -> SyndicationGraph {
    let keep: Vec<usize> = (0..g.node_count()).filter(|&i| g.degree(i) > 0).collect();
    let mut remap = vec![usize::MAX; g.node_count()];
    for (new, &old) in keep.iter().enumerate() {
        remap[old] = new;
    }
    let nodes: Vec<String> = keep.iter().map(|&i| g.nodes[i].clone()).collect();
    let edges: Vec<(usize, usize, u32)> = g
        .edges()
        .into_iter()
        .map(|(i, j, w)| (remap[i], remap[j], w))
        .collect();
    SyndicationGraph::from_edges(g.mode, nodes, &edges)
}

/// Connected components as sorted node-index sets, ordered by their smallest
/// member.
pub fn components(g: &SyndicationGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &(w, _) in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Seeded sparse random graph used by benchmarks and scale tests: `n_nodes`
/// labeled nodes, `n_edges` distinct unit-to-5-weight edges.
pub fn synthetic_graph(n_nodes: usize, n_edges: usize, seed: u64) -> SyndicationGraph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<String> = (0..n_nodes).map(|i| format!("VC{:05}", i)).collect();
    let mut picked: BTreeSet<(usize, usize)> = BTreeSet::new();
    while picked.len() < n_edges {
        let a = rng.random_range(0..n_nodes);
        let b = rng.random_range(0..n_nodes);
        if a == b {
            continue;
        }
        picked.insert(if a < b { (a, b) } else { (b, a) });
    }
    let edges: Vec<(usize, usize, u32)> = picked
        .into_iter()
        .map(|(a, b)| (a, b, rng.random_range(1..=5)))
        .collect();
    SyndicationGraph::from_edges(Mode::SameRound, nodes, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_event_log, parse_investments, ColumnMap, Parsed};

    fn log_from_rows(rows: &[(&str, &str, &str)]) -> EventLog {
        let mut text = String::from("vc_id,company_id,round_id,date,amount\n");
        for (vc, co, rd) in rows {
            text.push_str(&format!("{vc},{co},{rd},2010-01-01,100\n"));
        }
        let parsed = parse_investments(text.as_bytes(), &ColumnMap::default()).unwrap();
        build_event_log(parsed, Parsed::default())
    }

    fn three_firm_log() -> EventLog {
        log_from_rows(&[("A", "C1", "R1"), ("B", "C1", "R1"), ("C", "C1", "R2")])
    }

    #[test]
    fn same_round_bipartite_has_event_node_per_round() {
        let g = build_bipartite(&three_firm_log(), Mode::SameRound);
        let keys: Vec<&EventKey> = g.event_nodes().collect();
        assert_eq!(keys.len(), 2);
        assert_eq!(
            g.incidence[&EventKey {
                company: "C1".into(),
                round: Some("R1".into())
            }],
            BTreeSet::from(["A".to_string(), "B".to_string()])
        );
        assert_eq!(
            g.incidence[&EventKey {
                company: "C1".into(),
                round: Some("R2".into())
            }],
            BTreeSet::from(["C".to_string()])
        );
    }

    #[test]
    fn different_round_bipartite_collapses_rounds() {
        let g = build_bipartite(&three_firm_log(), Mode::DifferentRound);
        let keys: Vec<&EventKey> = g.event_nodes().collect();
        assert_eq!(keys.len(), 1);
        assert_eq!(
            g.incidence[&EventKey {
                company: "C1".into(),
                round: None
            }],
            BTreeSet::from(["A".to_string(), "B".to_string(), "C".to_string()])
        );
    }

    #[test]
    fn empty_log_gives_empty_graphs() {
        let log = EventLog::default();
        let b = build_bipartite(&log, Mode::SameRound);
        assert!(b.vc_nodes.is_empty());
        assert_eq!(b.edge_count(), 0);
        let g = project(&b);
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn same_round_projection_is_single_edge() {
        let g = project(&build_bipartite(&three_firm_log(), Mode::SameRound));
        assert_eq!(g.nodes(), &["A", "B", "C"]);
        assert_eq!(g.edges(), vec![(0, 1, 1)]);
    }

    #[test]
    fn different_round_projection_is_triangle() {
        let g = project(&build_bipartite(&three_firm_log(), Mode::DifferentRound));
        assert_eq!(g.edges(), vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)]);
    }

    #[test]
    fn weight_counts_distinct_shared_events() {
        let log = log_from_rows(&[
            ("A", "C1", "R1"),
            ("B", "C1", "R1"),
            ("A", "C2", "R1"),
            ("B", "C2", "R1"),
            ("A", "C3", "R2"),
            ("B", "C3", "R2"),
        ]);
        let g = project(&build_bipartite(&log, Mode::SameRound));
        assert_eq!(g.edges(), vec![(0, 1, 3)]);
    }

    #[test]
    fn repeat_investment_in_same_event_counts_once() {
        // A invests twice in (C1, R1) via two round rows that dedup upstream;
        // incidence still lists A once.
        let log = log_from_rows(&[("A", "C1", "R1"), ("A", "C1", "R1"), ("B", "C1", "R1")]);
        let g = project(&build_bipartite(&log, Mode::SameRound));
        assert_eq!(g.edges(), vec![(0, 1, 1)]);
    }

    #[test]
    fn remove_isolates_keeps_connected_nodes_in_order() {
        let g = project(&build_bipartite(&three_firm_log(), Mode::SameRound));
        let pruned = remove_isolates(&g);
        assert_eq!(pruned.nodes(), &["A", "B"]);
        assert_eq!(pruned.edges(), vec![(0, 1, 1)]);
        assert!((0..pruned.node_count()).all(|i| pruned.degree(i) >= 1));
    }

    #[test]
    fn remove_isolates_on_edgeless_graph_empties_it() {
        let nodes: Vec<String> = (0..5).map(|i| format!("N{i}")).collect();
        let g = SyndicationGraph::from_edges(Mode::SameRound, nodes, &[]);
        assert_eq!(remove_isolates(&g).node_count(), 0);
    }

    #[test]
    fn remove_isolates_is_identity_on_connected_graph() {
        let g = project(&build_bipartite(&three_firm_log(), Mode::DifferentRound));
        assert_eq!(remove_isolates(&g), g);
    }

    #[test]
    fn components_partition_nodes() {
        let nodes: Vec<String> = ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect();
        let g = SyndicationGraph::from_edges(Mode::SameRound, nodes, &[(0, 1, 1), (2, 3, 1)]);
        assert_eq!(components(&g), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn triangle_is_one_component() {
        let g = project(&build_bipartite(&three_firm_log(), Mode::DifferentRound));
        assert_eq!(components(&g), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn edge_list_round_trips() {
        let g = project(&build_bipartite(&three_firm_log(), Mode::DifferentRound));
        let csv = g.edge_list_csv();
        assert_eq!(csv, "vc_id_a,vc_id_b,weight\nA,B,1\nA,C,1\nB,C,1\n");
        let back = SyndicationGraph::from_edge_list_csv(Mode::DifferentRound, &csv).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn projection_ignores_row_order() {
        let rows = [("A", "C1", "R1"), ("B", "C1", "R1"), ("C", "C1", "R2")];
        let mut rev = rows;
        rev.reverse();
        let a = project(&build_bipartite(&log_from_rows(&rows), Mode::SameRound));
        let b = project(&build_bipartite(&log_from_rows(&rev), Mode::SameRound));
        assert_eq!(a, b);
    }

    #[test]
    fn synthetic_graph_is_reproducible() {
        let a = synthetic_graph(50, 120, 7);
        let b = synthetic_graph(50, 120, 7);
        assert_eq!(a, b);
        assert_eq!(a.edge_count(), 120);
    }
}
