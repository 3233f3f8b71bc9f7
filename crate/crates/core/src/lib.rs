//! Synergy analysis of firm populations in three categorical dimensions:
//! geography, organization size, and technology class.
//!
//! The central quantity is the signed three-way mutual information
//! (transmission) over a contingency tensor of firm counts. Negative values
//! indicate synergy: a reduction of uncertainty that exists only in the
//! three-way configuration. The crate also decomposes the national value into
//! within-region contributions plus a between-region residual, classifies raw
//! firm attributes into the categorical schemes the tensor is built from,
//! ingests CSV extracts, and renders sorted contribution tables in millibits.

pub mod correlate;
pub mod decompose;
pub mod entropy;
pub mod error;
pub mod ingest;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod synth;
pub mod taxonomy;

pub use correlate::{rank_correlations, RankCorrelation};
pub use decompose::{
    apply_group_floor, assemble_report, decompose, delta_contribution, share_above_group,
    CategorizedRecord, GroupContribution, GroupPartition, SynergyReport,
};
pub use entropy::{entropy, Axis, Codebook, ContingencyTensor, Distribution, InformationValue};
pub use error::{Error, Result};
pub use ingest::{
    dataset_profile, filter_window, parse_records, ColumnSchema, DatasetProfile, FirmRecord,
    IngestIssue, IssueReason,
};
pub use pipeline::{
    run_pipeline, AnalysisConfig, AuditBlock, GroupingLevel, OutputFormat, PipelineOutcome,
    SectorFilter,
};
pub use taxonomy::{GeoHierarchy, SectorClass, SectorLabel, SectorScheme, SizeClassScheme};
