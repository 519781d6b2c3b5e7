//! Monte-Carlo experiments. Every sample draws from its own random stream, so
//! outputs depend only on the configuration, never on the thread count.

mod averaging;
mod diagnostics;
mod edge;
mod esd;
mod exchange;
pub mod output;
mod zgrid;

pub use averaging::{averaging_identity_probe, averaging_record, averaging_table, AveragingRecord, AveragingReport};
pub use diagnostics::{
    collect_diagnostics, diagnostics_table, loop_summaries, scan_summaries, DiagnosticRecord,
    DiagnosticsConfig, LoopSummary, PointQuantities, ScanSummary,
};
pub use edge::{edge_fluctuations, edge_table, EdgeReport, EdgeSample};
pub use esd::{esd_experiment, esd_table, EsdReport, HistogramBin, ESD_BINS};
pub use exchange::{exchange_experiment, exchange_table, Statistic};
pub use zgrid::{ZRecipe, ZScale};
