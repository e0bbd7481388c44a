//! The per-firm indicator matrix feeding model estimation.
//!
//! Rows are firms present in the post-isolate-removal network that also have
//! at least one exit; columns are the four social-capital indicators followed
//! by the six performance indicators, in canonical order.

use std::collections::BTreeMap;

use crate::metrics::{scale_minmax, NodeVector};
use crate::network::SyndicationGraph;
use crate::perfstats::PerformanceRow;

/// Canonical column keys, in table order.
pub const SC_KEYS: [&str; 4] = ["weighted_degree", "closeness", "betweenness", "structural_hole"];
pub const PERF_KEYS: [&str; 6] = [
    "investment_total",
    "ipo_proportion",
    "weighted_book_return",
    "weighted_irr",
    "investment_exited",
    "exit_ratio",
];

/// Row label used in rendered tables for a canonical column key.
pub fn display_label(key: &str) -> &'static str {
    match key {
        "weighted_degree" => "Weighted degree",
        "closeness" => "Closeness",
        "betweenness" => "Betweenness",
        "structural_hole" => "Structural hole",
        "investment_total" => "Investment (total)",
        "ipo_proportion" => "IPO proportion",
        "weighted_book_return" => "Weighted book return",
        "weighted_irr" => "Weighted IRR",
        "investment_exited" => "Investment exited",
        "exit_ratio" => "Exit ratio",
        _ => "?",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    MinMax,
    None,
}

impl Scaling {
    pub fn parse(s: &str) -> Option<Scaling> {
        match s.trim().to_ascii_lowercase().as_str() {
            "minmax" => Some(Scaling::MinMax),
            "none" => Some(Scaling::None),
            _ => None,
        }
    }
}

/// Direction of the structural-hole indicator: raw Burt constraint, or its
/// complement 1 - constraint for readers who want holes to score high.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShForm {
    Constraint,
    OneMinusConstraint,
}

impl ShForm {
    pub fn parse(s: &str) -> Option<ShForm> {
        match s.trim().to_ascii_lowercase().as_str() {
            "constraint" => Some(ShForm::Constraint),
            "complement" | "one-minus-constraint" => Some(ShForm::OneMinusConstraint),
            _ => None,
        }
    }

    pub fn apply(&self, constraint: &NodeVector) -> NodeVector {
        match self {
            ShForm::Constraint => constraint.clone(),
            ShForm::OneMinusConstraint => NodeVector {
                label: constraint.label.clone(),
                values: constraint.values.iter().map(|c| 1.0 - c).collect(),
                scaled: constraint.scaled,
            },
        }
    }
}

/// Column-major matrix of indicator values with row (firm) labels.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMatrix {
    pub firms: Vec<String>,
    pub labels: Vec<String>,
    /// columns[c][r]: value of indicator c for firm r.
    pub columns: Vec<Vec<f64>>,
    pub scaling: Scaling,
}

impl IndicatorMatrix {
    pub fn n_rows(&self) -> usize {
        self.firms.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, label: &str) -> Option<&[f64]> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.columns[i].as_slice())
    }

    /// Min-max rescale every column to [0,1]; constant columns map to zero.
    pub fn rescaled_minmax(&self) -> IndicatorMatrix {
        let columns = self
            .labels
            .iter()
            .zip(&self.columns)
            .map(|(label, col)| {
                scale_minmax(&NodeVector::new(label, col.clone())).values
            })
            .collect();
        IndicatorMatrix {
            firms: self.firms.clone(),
            labels: self.labels.clone(),
            columns,
            scaling: Scaling::MinMax,
        }
    }

    pub fn labeled_columns(&self) -> Vec<(String, Vec<f64>)> {
        self.labels
            .iter()
            .cloned()
            .zip(self.columns.iter().cloned())
            .collect()
    }

    /// Render as csv: vc_id column plus one column per indicator, floats in
    /// shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vc_id");
        for label in &self.labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for r in 0..self.n_rows() {
            out.push_str(&self.firms[r]);
            for col in &self.columns {
                out.push(',');
                out.push_str(&col[r].to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parse the `to_csv` form back; every non-id column must be numeric.
    pub fn from_csv(text: &str, scaling: Scaling) -> Result<IndicatorMatrix, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty table")?;
        let mut fields = header.split(',');
        if fields.next() != Some("vc_id") {
            return Err("first column must be vc_id".into());
        }
        let labels: Vec<String> = fields.map(|s| s.to_string()).collect();
        if labels.is_empty() {
            return Err("no indicator columns".into());
        }
        let mut firms = Vec::new();
        let mut columns: Vec<Vec<f64>> = vec![Vec::new(); labels.len()];
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != labels.len() + 1 {
                return Err(format!("line {}: wrong field count", lineno + 2));
            }
            firms.push(parts[0].to_string());
            for (c, raw) in parts[1..].iter().enumerate() {
                let v: f64 = raw
                    .parse()
                    .map_err(|_| format!("line {}: bad number `{raw}`", lineno + 2))?;
                columns[c].push(v);
            }
        }
        Ok(IndicatorMatrix {
            firms,
            labels,
            columns,
            scaling,
        })
    }
}

/// Join the four metric vectors (aligned to `graph` node order) with the
/// performance rows into the ten-column matrix, restricted to firms having
/// both, then apply the configured scaling.
pub fn assemble_matrix(
    graph: &SyndicationGraph,
    metric_vectors: &[NodeVector; 4],
    perf_rows: &[PerformanceRow],
    scaling: Scaling,
) -> IndicatorMatrix {
    let perf_by_firm: BTreeMap<&str, &PerformanceRow> =
        perf_rows.iter().map(|r| (r.vc_id.as_str(), r)).collect();

    let mut firms = Vec::new();
    let mut rows: Vec<[f64; 10]> = Vec::new();
    for (i, firm) in graph.nodes().iter().enumerate() {
        let Some(perf) = perf_by_firm.get(firm.as_str()) else {
            continue;
        };
        firms.push(firm.clone());
        rows.push([
            metric_vectors[0].values[i],
            metric_vectors[1].values[i],
            metric_vectors[2].values[i],
            metric_vectors[3].values[i],
            perf.investment_total,
            perf.ipo_proportion,
            perf.weighted_book_return,
            perf.weighted_irr,
            perf.investment_exited,
            perf.exit_ratio,
        ]);
    }

    let labels: Vec<String> = SC_KEYS
        .iter()
        .chain(PERF_KEYS.iter())
        .map(|s| s.to_string())
        .collect();
    let columns: Vec<Vec<f64>> = (0..10).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    let raw = IndicatorMatrix {
        firms,
        labels,
        columns,
        scaling: Scaling::None,
    };
    match scaling {
        Scaling::MinMax => raw.rescaled_minmax(),
        Scaling::None => raw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Mode;

    fn perf_row(vc: &str, base: f64) -> PerformanceRow {
        PerformanceRow {
            vc_id: vc.to_string(),
            investment_total: base,
            ipo_proportion: 0.5,
            weighted_book_return: 1.5,
            weighted_irr: 0.1,
            investment_exited: base / 2.0,
            exit_ratio: 0.5,
        }
    }

    #[test]
    fn assembles_only_firms_with_both_sides() {
        let nodes: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        let g = SyndicationGraph::from_edges(
            Mode::SameRound,
            nodes,
            &[(0, 1, 1), (1, 2, 1)],
        );
        let vecs = [
            NodeVector::new("weighted_degree", vec![1.0, 2.0, 1.0]),
            NodeVector::new("closeness", vec![0.75, 1.0, 0.75]),
            NodeVector::new("betweenness", vec![0.0, 1.0, 0.0]),
            NodeVector::new("structural_hole", vec![1.0, 0.5, 1.0]),
        ];
        let perf = vec![perf_row("A", 100.0), perf_row("C", 300.0)];
        let m = assemble_matrix(&g, &vecs, &perf, Scaling::None);
        assert_eq!(m.firms, vec!["A".to_string(), "C".to_string()]);
        assert_eq!(m.n_cols(), 10);
        assert_eq!(m.column("weighted_degree").unwrap(), &[1.0, 1.0]);
        assert_eq!(m.column("investment_total").unwrap(), &[100.0, 300.0]);
    }

    #[test]
    fn minmax_scaling_bounds_columns() {
        let m = IndicatorMatrix {
            firms: vec!["A".into(), "B".into(), "C".into()],
            labels: vec!["x".into()],
            columns: vec![vec![2.0, 6.0, 4.0]],
            scaling: Scaling::None,
        };
        let s = m.rescaled_minmax();
        assert_eq!(s.columns[0], vec![0.0, 1.0, 0.5]);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let m = IndicatorMatrix {
            firms: vec!["A".into(), "B".into()],
            labels: vec!["x".into(), "y".into()],
            columns: vec![vec![0.1, 1.0 / 3.0], vec![2.5e-7, 4.0]],
            scaling: Scaling::None,
        };
        let back = IndicatorMatrix::from_csv(&m.to_csv(), Scaling::None).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn complement_form_flips_constraint() {
        let c = NodeVector::new("structural_hole", vec![0.25, 1.0]);
        let flipped = ShForm::OneMinusConstraint.apply(&c);
        assert_eq!(flipped.values, vec![0.75, 0.0]);
        assert_eq!(ShForm::Constraint.apply(&c).values, c.values);
    }
}
