//! Analysis pipeline for venture-capital syndication networks.
//!
//! The crate turns raw investment/exit event logs into co-investment
//! networks, computes per-firm social-capital and financial-performance
//! indicators, and estimates a two-latent-variable covariance-structure
//! model (Social Capital, Performance) by maximum likelihood.
//!
//! Stages, in pipeline order:
//!
//! 1. [`ingest`] — parse and validate the two event files into an [`EventLog`].
//! 2. [`network`] — build the firm/event bipartite graph and project it to
//!    the one-mode [`SyndicationGraph`] (same-round or different-round).
//! 3. [`metrics`] — weighted degree, harmonic closeness, betweenness, and
//!    Burt constraint on the projected network.
//! 4. [`perfstats`] — six financial-performance indicators per firm plus
//!    descriptive statistics.
//! 5. [`sem`] — maximum-likelihood fit of the latent-variable model for
//!    model variants 1–4.
//! 6. [`pipeline`] — end-to-end orchestration and report rendering.

pub mod indicators;
pub mod ingest;
pub mod metrics;
pub mod network;
pub mod perfstats;
pub mod pipeline;
pub mod report;
pub mod sem;
pub mod synth;

pub use indicators::{IndicatorMatrix, Scaling, ShForm};
pub use ingest::{EventLog, ExitEvent, ExitType, IngestError, InvestmentEvent, RejectReason};
pub use metrics::{MetricError, NodeVector};
pub use network::{BipartiteGraph, Mode, SyndicationGraph};
pub use perfstats::{DescriptiveTable, PerformanceRow, StatsError};
pub use sem::{ModelSpec, SemError, SemFit, SemParams};
pub use synth::SynthConfig;
