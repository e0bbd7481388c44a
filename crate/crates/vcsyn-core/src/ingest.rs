//! Event-log ingestion: parsing, validation, and cross-linking.
//!
//! Two comma-delimited UTF-8 files with header rows feed the pipeline:
//!
//! ```text
//! investments: vc_id,company_id,round_id,date,amount
//! exits:       vc_id,company_id,exit_type,exit_amount,book_return,irr,date
//! ```
//!
//! Only an unreadable stream or a missing header column is fatal. A
//! malformed row is rejected with a per-reason tally so that
//! `retained + rejected == raw` holds per file.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("unreadable input stream: {0}")]
    Stream(#[from] csv::Error),
    #[error("missing required column `{column}` in header row")]
    MissingColumn { column: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Why a row (or derived record) was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RejectReason {
    /// Required identifier field empty or row too short.
    MissingField,
    /// Date not in `YYYY-MM-DD` form.
    BadDate,
    /// Numeric field unparseable or non-finite.
    BadNumber,
    /// Amount, exit amount, or book return below zero.
    NegativeAmount,
    /// Row could not be decoded at all (bad UTF-8, broken quoting).
    MalformedRow,
    /// Extra investment row collapsed into an existing (vc, company, round) triple.
    DuplicateMerged,
    /// Exit with no matching (vc, company) investment.
    OrphanExit,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::MissingField => "MISSING_FIELD",
            RejectReason::BadDate => "BAD_DATE",
            RejectReason::BadNumber => "BAD_NUMBER",
            RejectReason::NegativeAmount => "NEGATIVE_AMOUNT",
            RejectReason::MalformedRow => "MALFORMED_ROW",
            RejectReason::DuplicateMerged => "DUPLICATE_MERGED",
            RejectReason::OrphanExit => "ORPHAN_EXIT",
        }
    }
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvestmentEvent {
    pub vc_id: String,
    pub company_id: String,
    pub round_id: String,
    pub date: NaiveDate,
    pub amount: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitType {
    Ipo,
    Ma,
    Buyback,
    Other,
}

impl ExitType {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExitType::Ipo => "IPO",
            ExitType::Ma => "MA",
            ExitType::Buyback => "BUYBACK",
            ExitType::Other => "OTHER",
        }
    }

    /// Case-insensitive label match; anything unrecognized maps to `Other`.
    pub fn parse(label: &str) -> ExitType {
        match label.trim().to_ascii_uppercase().as_str() {
            "IPO" => ExitType::Ipo,
            "MA" => ExitType::Ma,
            "BUYBACK" => ExitType::Buyback,
            _ => ExitType::Other,
        }
    }
}

impl std::fmt::Display for ExitType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExitEvent {
    pub vc_id: String,
    pub company_id: String,
    pub exit_type: ExitType,
    pub exit_amount: f64,
    pub book_return: f64,
    pub irr: f64,
    pub date: NaiveDate,
}

/// Header names used to locate fields; override to ingest files with
/// non-canonical headers.
#[derive(Debug, Clone)]
pub struct ColumnMap {
    pub vc_id: String,
    pub company_id: String,
    pub round_id: String,
    pub date: String,
    pub amount: String,
    pub exit_type: String,
    pub exit_amount: String,
    pub book_return: String,
    pub irr: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            vc_id: "vc_id".into(),
            company_id: "company_id".into(),
            round_id: "round_id".into(),
            date: "date".into(),
            amount: "amount".into(),
            exit_type: "exit_type".into(),
            exit_amount: "exit_amount".into(),
            book_return: "book_return".into(),
            irr: "irr".into(),
        }
    }
}

/// Parse outcome: retained events plus per-reason rejection tallies.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub events: Vec<T>,
    pub rejected: BTreeMap<RejectReason, usize>,
    pub raw_rows: usize,
}

impl<T> Default for Parsed<T> {
    fn default() -> Self {
        Parsed {
            events: Vec::new(),
            rejected: BTreeMap::new(),
            raw_rows: 0,
        }
    }
}

impl<T> Parsed<T> {
    fn reject(&mut self, reason: RejectReason) {
        *self.rejected.entry(reason).or_insert(0) += 1;
    }

    pub fn rejected_total(&self) -> usize {
        self.rejected.values().sum()
    }
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize, IngestError> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| IngestError::MissingColumn {
            column: name.to_string(),
        })
}

fn field<'r>(record: &'r csv::StringRecord, idx: usize) -> Option<&'r str> {
    match record.get(idx).map(str::trim) {
        None | Some("") => None,
        Some(s) => Some(s),
    }
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

fn parse_finite(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn parse_investments<R: Read>(
    source: R,
    schema: &ColumnMap,
) -> Result<Parsed<InvestmentEvent>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let c_vc = column_index(&headers, &schema.vc_id)?;
    let c_co = column_index(&headers, &schema.company_id)?;
    let c_rd = column_index(&headers, &schema.round_id)?;
    let c_date = column_index(&headers, &schema.date)?;
    let c_amt = column_index(&headers, &schema.amount)?;

    let mut out = Parsed::default();
    for record in reader.records() {
        out.raw_rows += 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    return Err(e.into());
                }
                out.reject(RejectReason::MalformedRow);
                continue;
            }
        };
        let ids = (field(&record, c_vc), field(&record, c_co), field(&record, c_rd));
        let (vc, co, rd) = match ids {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                out.reject(RejectReason::MissingField);
                continue;
            }
        };
        let date = match field(&record, c_date).and_then(parse_date) {
            Some(d) => d,
            None => {
                out.reject(RejectReason::BadDate);
                continue;
            }
        };
        let amount = match field(&record, c_amt).and_then(parse_finite) {
            Some(a) => a,
            None => {
                out.reject(RejectReason::BadNumber);
                continue;
            }
        };
        if amount < 0.0 {
            out.reject(RejectReason::NegativeAmount);
            continue;
        }
        out.events.push(InvestmentEvent {
            vc_id: vc.to_string(),
            company_id: co.to_string(),
            round_id: rd.to_string(),
            date,
            amount,
        });
    }
    Ok(out)
}

pub fn parse_exits<R: Read>(
    source: R,
    schema: &ColumnMap,
) -> Result<Parsed<ExitEvent>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let c_vc = column_index(&headers, &schema.vc_id)?;
    let c_co = column_index(&headers, &schema.company_id)?;
    let c_ty = column_index(&headers, &schema.exit_type)?;
    let c_amt = column_index(&headers, &schema.exit_amount)?;
    let c_br = column_index(&headers, &schema.book_return)?;
    let c_irr = column_index(&headers, &schema.irr)?;
    let c_date = column_index(&headers, &schema.date)?;

    let mut out = Parsed::default();
    for record in reader.records() {
        out.raw_rows += 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    return Err(e.into());
                }
                out.reject(RejectReason::MalformedRow);
                continue;
            }
        };
        let (vc, co) = match (field(&record, c_vc), field(&record, c_co)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                out.reject(RejectReason::MissingField);
                continue;
            }
        };
        let exit_type = match field(&record, c_ty) {
            Some(s) => ExitType::parse(s),
            None => {
                out.reject(RejectReason::MissingField);
                continue;
            }
        };
        let nums = (
            field(&record, c_amt).and_then(parse_finite),
            field(&record, c_br).and_then(parse_finite),
            field(&record, c_irr).and_then(parse_finite),
        );
        let (exit_amount, book_return, irr) = match nums {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                out.reject(RejectReason::BadNumber);
                continue;
            }
        };
        if exit_amount < 0.0 || book_return < 0.0 {
            out.reject(RejectReason::NegativeAmount);
            continue;
        }
        let date = match field(&record, c_date).and_then(parse_date) {
            Some(d) => d,
            None => {
                out.reject(RejectReason::BadDate);
                continue;
            }
        };
        out.events.push(ExitEvent {
            vc_id: vc.to_string(),
            company_id: co.to_string(),
            exit_type,
            exit_amount,
            book_return,
            irr,
            date,
        });
    }
    Ok(out)
}

/// Validated, cross-linked registry of investment and exit events.
///
/// Immutable after construction; safe to share read-only across threads.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventLog {
    /// Unique (vc, company, round) triples, sorted by that key.
    pub investments: Vec<InvestmentEvent>,
    /// Exits with a matching investment, in deterministic order.
    pub exits: Vec<ExitEvent>,
    pub firms: BTreeSet<String>,
    pub companies: BTreeSet<String>,
    pub rejected_counts: BTreeMap<RejectReason, usize>,
    pub raw_investment_rows: usize,
    pub raw_exit_rows: usize,
}

/// Collapse duplicates, drop orphan exits, and populate the registries.
///
/// Investment rows sharing a (vc, company, round) triple are tranches of one
/// round: they merge into a single event with summed amount and the earliest
/// date. Exits without a matching (vc, company) investment are dropped and
/// tallied under `ORPHAN_EXIT`.
pub fn build_event_log(
    investments: Parsed<InvestmentEvent>,
    exits: Parsed<ExitEvent>,
) -> EventLog {
    let raw_investment_rows = investments.raw_rows;
    let raw_exit_rows = exits.raw_rows;

    let mut rejected = investments.rejected;
    for (reason, n) in exits.rejected {
        *rejected.entry(reason).or_insert(0) += n;
    }

    let mut merged: BTreeMap<(String, String, String), InvestmentEvent> = BTreeMap::new();
    let mut merged_rows = 0usize;
    for ev in investments.events {
        let key = (ev.vc_id.clone(), ev.company_id.clone(), ev.round_id.clone());
        match merged.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(ev);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let existing = slot.get_mut();
                existing.amount += ev.amount;
                existing.date = existing.date.min(ev.date);
                merged_rows += 1;
            }
        }
    }
    if merged_rows > 0 {
        *rejected.entry(RejectReason::DuplicateMerged).or_insert(0) += merged_rows;
    }

    let invested_pairs: BTreeSet<(&str, &str)> = merged
        .values()
        .map(|ev| (ev.vc_id.as_str(), ev.company_id.as_str()))
        .collect();

    let mut kept_exits = Vec::with_capacity(exits.events.len());
    let mut orphans = 0usize;
    for ex in exits.events {
        if invested_pairs.contains(&(ex.vc_id.as_str(), ex.company_id.as_str())) {
            kept_exits.push(ex);
        } else {
            orphans += 1;
        }
    }
    drop(invested_pairs);
    if orphans > 0 {
        *rejected.entry(RejectReason::OrphanExit).or_insert(0) += orphans;
    }
    kept_exits.sort_by(|a, b| {
        (&a.vc_id, &a.company_id, a.date, a.exit_type)
            .cmp(&(&b.vc_id, &b.company_id, b.date, b.exit_type))
            .then(a.exit_amount.total_cmp(&b.exit_amount))
            .then(a.book_return.total_cmp(&b.book_return))
            .then(a.irr.total_cmp(&b.irr))
    });

    let investments: Vec<InvestmentEvent> = merged.into_values().collect();
    let firms = investments.iter().map(|e| e.vc_id.clone()).collect();
    let companies = investments.iter().map(|e| e.company_id.clone()).collect();

    EventLog {
        investments,
        exits: kept_exits,
        firms,
        companies,
        rejected_counts: rejected,
        raw_investment_rows,
        raw_exit_rows,
    }
}

impl EventLog {
    /// Parse both files with the default schema and cross-link them.
    pub fn from_files(
        investments_path: &Path,
        exits_path: &Path,
    ) -> Result<EventLog, IngestError> {
        let schema = ColumnMap::default();
        let open = |path: &Path| {
            std::fs::File::open(path).map_err(|source| IngestError::Io {
                path: path.display().to_string(),
                source,
            })
        };
        let inv = parse_investments(open(investments_path)?, &schema)?;
        let ex = parse_exits(open(exits_path)?, &schema)?;
        Ok(build_event_log(inv, ex))
    }

    pub fn retained_rows(&self) -> usize {
        self.investments.len() + self.exits.len()
    }

    pub fn raw_rows(&self) -> usize {
        self.raw_investment_rows + self.raw_exit_rows
    }

    /// Canonical serialized form of the retained investments, re-parseable
    /// with the default schema. Rebuilding from it yields the same events.
    pub fn investments_csv(&self) -> String {
        let mut out = String::from("vc_id,company_id,round_id,date,amount\n");
        for ev in &self.investments {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                ev.vc_id,
                ev.company_id,
                ev.round_id,
                ev.date.format("%Y-%m-%d"),
                ev.amount
            ));
        }
        out
    }

    pub fn exits_csv(&self) -> String {
        let mut out = String::from("vc_id,company_id,exit_type,exit_amount,book_return,irr,date\n");
        for ex in &self.exits {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                ex.vc_id,
                ex.company_id,
                ex.exit_type,
                ex.exit_amount,
                ex.book_return,
                ex.irr,
                ex.date.format("%Y-%m-%d")
            ));
        }
        out
    }

    /// Rejection tallies as a two-column csv for inspection.
    pub fn rejections_csv(&self) -> String {
        let mut out = String::from("reason,count\n");
        for (reason, n) in &self.rejected_counts {
            out.push_str(&format!("{},{}\n", reason, n));
        }
        out
    }

    /// Event content equality, ignoring rejection bookkeeping. A log rebuilt
    /// from its own serialized form matches under this comparison.
    pub fn same_events(&self, other: &EventLog) -> bool {
        self.investments == other.investments
            && self.exits == other.exits
            && self.firms == other.firms
            && self.companies == other.companies
    }
}
