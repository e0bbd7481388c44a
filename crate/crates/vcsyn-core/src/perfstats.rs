//! Per-firm financial-performance indicators and descriptive statistics.
//!
//! Exits are linked to invested principal by (vc, company); a firm enters
//! the sample only if it has at least one exit. Multiple exits of one pair
//! aggregate: exit amounts sum, book return and IRR average within the pair.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ingest::{EventLog, ExitType};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("EMPTY_COLUMN: descriptive statistics need at least one value")]
    EmptyColumn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceRow {
    pub vc_id: String,
    /// Sum of all the firm's investment amounts, exited or not.
    pub investment_total: f64,
    /// Share of total exit proceeds realized through IPOs.
    pub ipo_proportion: f64,
    /// Book return averaged over exited positions, weighted by principal.
    pub weighted_book_return: f64,
    pub weighted_irr: f64,
    /// Invested principal in companies that reached an exit.
    pub investment_exited: f64,
    /// investment_exited / investment_total.
    pub exit_ratio: f64,
}

/// Rows for every firm with at least one exit, plus the count of firms
/// excluded for having none.
#[derive(Debug, Clone)]
pub struct PerformanceResult {
    pub rows: Vec<PerformanceRow>,
    pub no_exits: usize,
}

/// Compute the six indicators for each listed firm, in input order.
pub fn performance_indicators(log: &EventLog, firms: &[String]) -> PerformanceResult {
    // principal per (vc, company)
    let mut principal: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut totals: BTreeMap<&str, f64> = BTreeMap::new();
    for ev in &log.investments {
        *principal
            .entry((ev.vc_id.as_str(), ev.company_id.as_str()))
            .or_insert(0.0) += ev.amount;
        *totals.entry(ev.vc_id.as_str()).or_insert(0.0) += ev.amount;
    }

    // per (vc, company): summed exit amounts, mean book return / irr
    struct PairExit {
        exit_amount: f64,
        ipo_amount: f64,
        book_return_sum: f64,
        irr_sum: f64,
        count: usize,
    }
    let mut pair_exits: BTreeMap<(&str, &str), PairExit> = BTreeMap::new();
    for ex in &log.exits {
        let entry = pair_exits
            .entry((ex.vc_id.as_str(), ex.company_id.as_str()))
            .or_insert(PairExit {
                exit_amount: 0.0,
                ipo_amount: 0.0,
                book_return_sum: 0.0,
                irr_sum: 0.0,
                count: 0,
            });
        entry.exit_amount += ex.exit_amount;
        if ex.exit_type == ExitType::Ipo {
            entry.ipo_amount += ex.exit_amount;
        }
        entry.book_return_sum += ex.book_return;
        entry.irr_sum += ex.irr;
        entry.count += 1;
    }

    let mut rows = Vec::new();
    let mut no_exits = 0usize;
    for vc in firms {
        let vc = vc.as_str();
        let exited: Vec<(&(&str, &str), &PairExit)> = pair_exits
            .range((vc, "")..)
            .take_while(|((v, _), _)| *v == vc)
            .map(|(k, p)| (k, p))
            .collect();
        if exited.is_empty() {
            no_exits += 1;
            continue;
        }

        let investment_total = totals.get(vc).copied().unwrap_or(0.0);
        let mut investment_exited = 0.0;
        let mut exit_amount_total = 0.0;
        let mut ipo_amount_total = 0.0;
        let mut weighted_br_num = 0.0;
        let mut weighted_irr_num = 0.0;
        let mut plain_br_sum = 0.0;
        let mut plain_irr_sum = 0.0;
        for (&(v, c), pair) in &exited {
            let prin = principal.get(&(v, c)).copied().unwrap_or(0.0);
            let book_return = pair.book_return_sum / pair.count as f64;
            let irr = pair.irr_sum / pair.count as f64;
            investment_exited += prin;
            exit_amount_total += pair.exit_amount;
            ipo_amount_total += pair.ipo_amount;
            weighted_br_num += book_return * prin;
            weighted_irr_num += irr * prin;
            plain_br_sum += book_return;
            plain_irr_sum += irr;
        }
        let positions = exited.len() as f64;
        // Zero exited principal degrades to an unweighted mean, keeping the
        // convex-combination property.
        let (weighted_book_return, weighted_irr) = if investment_exited > 0.0 {
            (
                weighted_br_num / investment_exited,
                weighted_irr_num / investment_exited,
            )
        } else {
            (plain_br_sum / positions, plain_irr_sum / positions)
        };
        let ipo_proportion = if exit_amount_total > 0.0 {
            ipo_amount_total / exit_amount_total
        } else {
            0.0
        };
        let exit_ratio = if investment_total > 0.0 {
            investment_exited / investment_total
        } else {
            0.0
        };

        rows.push(PerformanceRow {
            vc_id: vc.to_string(),
            investment_total,
            ipo_proportion,
            weighted_book_return,
            weighted_irr,
            investment_exited,
            exit_ratio,
        });
    }
    PerformanceResult { rows, no_exits }
}

/// Summary statistics of one indicator column, Table-3 style.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptiveRow {
    pub label: String,
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub q1: f64,
    pub q3: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DescriptiveTable {
    pub rows: Vec<DescriptiveRow>,
}

/// Quantile by linear interpolation between order statistics at zero-based
/// position p*(n-1); `sorted` must be ascending.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Mean, median, sample standard deviation (n-1 divisor), min, max, and
/// interpolated quartiles for each labeled column.
pub fn describe(columns: &[(String, Vec<f64>)]) -> Result<DescriptiveTable, StatsError> {
    let mut rows = Vec::with_capacity(columns.len());
    for (label, values) in columns {
        if values.is_empty() {
            return Err(StatsError::EmptyColumn);
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std_dev = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        rows.push(DescriptiveRow {
            label: label.clone(),
            mean,
            median: quantile_sorted(&sorted, 0.5),
            std_dev,
            min: sorted[0],
            max: sorted[n - 1],
            q1: quantile_sorted(&sorted, 0.25),
            q3: quantile_sorted(&sorted, 0.75),
        });
    }
    Ok(DescriptiveTable { rows })
}
