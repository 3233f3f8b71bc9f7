//! End-to-end pipeline: ingest -> classify -> tensor -> decompose -> render.
//!
//! The geography axis of the tensor is always the city (level 3); the
//! grouping key is the coarser province (level 1) or prefecture (level 2).
//! Unknown or unresolvable cities are excluded from the analysis and counted
//! in the audit block, mirroring partial geographic coverage at the finer
//! administrative levels. All outputs are deterministic functions of the
//! input bytes and the configuration, regardless of worker-thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Read;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, CategorizedRecord, SynergyReport};
use crate::error::{Error, Result};
use crate::ingest::{self, ColumnSchema, FirmRecord, IssueReason};
use crate::report::{export_region_values, render_table, TableStyle};
use crate::taxonomy::{tech_category, GeoHierarchy, SectorClass, SectorScheme, SizeClassScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupingLevel {
    Province,
    Prefecture,
}

impl GroupingLevel {
    pub fn from_number(level: u8) -> Result<GroupingLevel> {
        match level {
            1 => Ok(GroupingLevel::Province),
            2 => Ok(GroupingLevel::Prefecture),
            other => Err(Error::Config(format!(
                "grouping level must be 1 (province) or 2 (prefecture), got {other}; \
                 level 3 would equal the tensor's geography axis"
            ))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            GroupingLevel::Province => 1,
            GroupingLevel::Prefecture => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorFilter {
    #[default]
    All,
    /// High-tech plus medium-high-tech manufacturing.
    HighMediumTech,
    Kis,
    HighTechServices,
}

impl SectorFilter {
    pub fn matches(self, label: crate::taxonomy::SectorLabel) -> bool {
        match self {
            SectorFilter::All => true,
            SectorFilter::HighMediumTech => matches!(
                label.class,
                SectorClass::HighTechManufacturing | SectorClass::MediumHighTechManufacturing
            ),
            SectorFilter::Kis => label.class == SectorClass::KnowledgeIntensiveServices,
            SectorFilter::HighTechServices => label.high_tech_services,
        }
    }
}

impl fmt::Display for SectorFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SectorFilter::All => "all",
            SectorFilter::HighMediumTech => "high-medium-tech",
            SectorFilter::Kis => "kis",
            SectorFilter::HighTechServices => "high-tech-services",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub inputs: Vec<PathBuf>,
    pub schema: Option<PathBuf>,
    pub years: RangeInclusive<i32>,
    pub level: GroupingLevel,
    /// Technology-axis granularity: NACE codes truncated to 2-4 digits.
    pub digits: usize,
    pub sector: SectorFilter,
    /// Groups with fewer records than this are dropped before the
    /// decomposition; 1 means no floor.
    pub min_group_size: u64,
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// Worker threads for per-group transmissions; `None` uses the rayon
    /// default. Not part of the audit echo because it cannot change results.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl AnalysisConfig {
    pub fn new(inputs: Vec<PathBuf>, out_dir: PathBuf) -> AnalysisConfig {
        AnalysisConfig {
            inputs,
            schema: None,
            years: ingest::YEAR_WINDOW,
            level: GroupingLevel::Province,
            digits: 2,
            sector: SectorFilter::All,
            min_group_size: 1,
            out_dir,
            formats: vec![OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json],
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Config("no input files".into()));
        }
        if !(2..=4).contains(&self.digits) {
            return Err(Error::Config(format!(
                "technology digits must be 2-4, got {}",
                self.digits
            )));
        }
        if self.years.is_empty() {
            return Err(Error::Config("empty year range".into()));
        }
        if self.formats.is_empty() {
            return Err(Error::Config("no output formats selected".into()));
        }
        Ok(())
    }

    fn filter_description(&self) -> String {
        format!(
            "sector={} years={}-{} level={} digits={}",
            self.sector,
            self.years.start(),
            self.years.end(),
            self.level.number(),
            self.digits
        )
    }
}

/// Counts that reconcile every parsed row: analyzed + excluded = parsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditBlock {
    pub parsed_rows: u64,
    pub n_used: u64,
    pub exclusions: BTreeMap<String, u64>,
    pub config: AnalysisConfig,
}

impl AuditBlock {
    pub fn excluded_total(&self) -> u64 {
        self.exclusions.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub report: SynergyReport,
    pub audit: AuditBlock,
    pub written: Vec<PathBuf>,
}

pub const EXCLUSION_YEAR_WINDOW: &str = "outside year window";
pub const EXCLUSION_SECTOR_FILTER: &str = "outside sector filter";
pub const EXCLUSION_GROUP_FLOOR: &str = "below minimum group size";
pub const EXCLUSION_TECH_DIGITS: &str = "nace shorter than technology granularity";

/// Run the full analysis and write the requested artifacts into the
/// configured output directory.
pub fn run_pipeline(config: &AnalysisConfig) -> Result<PipelineOutcome> {
    config.validate()?;
    let schema = match &config.schema {
        Some(path) => ColumnSchema::from_path(path)?,
        None => ColumnSchema::canonical(),
    };

    let mut records: Vec<FirmRecord> = Vec::new();
    let mut parsed_rows = 0u64;
    let mut exclusions: BTreeMap<String, u64> = BTreeMap::new();
    for input in &config.inputs {
        let file = fs::File::open(input)?;
        let (file_records, issues) = ingest::parse_records(file, &schema)?;
        parsed_rows += (file_records.len() + issues.len()) as u64;
        for issue in &issues {
            *exclusions.entry(issue.reason.to_string()).or_insert(0) += 1;
        }
        records.extend(file_records);
    }

    let (records, dropped_by_year) = ingest::filter_window(records, &config.years);
    if dropped_by_year > 0 {
        *exclusions.entry(EXCLUSION_YEAR_WINDOW.to_string()).or_insert(0) += dropped_by_year;
    }

    let categorized = categorize(records, config, &mut exclusions)?;
    let (categorized, dropped_by_floor) =
        crate::decompose::apply_group_floor(categorized, config.min_group_size);
    if dropped_by_floor > 0 {
        *exclusions
            .entry(EXCLUSION_GROUP_FLOOR.to_string())
            .or_insert(0) += dropped_by_floor;
    }
    if categorized.is_empty() {
        return Err(Error::EmptyPostFilter);
    }

    let report = run_decomposition(&categorized, config)?;
    let audit = AuditBlock {
        parsed_rows,
        n_used: categorized.len() as u64,
        exclusions,
        config: config.clone(),
    };
    debug_assert_eq!(audit.n_used + audit.excluded_total(), audit.parsed_rows);

    let written = write_outputs(&report, &audit, config)?;
    Ok(PipelineOutcome {
        report,
        audit,
        written,
    })
}

/// Classify records into (group, city, size class, tech category) tuples,
/// counting every exclusion.
fn categorize(
    records: Vec<FirmRecord>,
    config: &AnalysisConfig,
    exclusions: &mut BTreeMap<String, u64>,
) -> Result<Vec<CategorizedRecord>> {
    let sizes = SizeClassScheme::bundled();
    let sectors = SectorScheme::bundled();
    let geo = GeoHierarchy::bundled();

    let mut exclude = |reason: &str| {
        *exclusions.entry(reason.to_string()).or_insert(0) += 1;
    };

    let mut categorized = Vec::with_capacity(records.len());
    for record in &records {
        let sector = sectors
            .classify_sector(&record.nace)
            .expect("stored NACE codes are valid");
        if !config.sector.matches(sector) {
            exclude(EXCLUSION_SECTOR_FILTER);
            continue;
        }
        let city = geo
            .normalize_city(&record.city_raw)
            .expect("stored city names are non-empty");
        let group = if city.known {
            geo.resolve_geo(&city.name, config.level.number())?
        } else {
            None
        };
        let Some(group) = group else {
            exclude(&IssueReason::UnresolvedGeography.to_string());
            continue;
        };
        let size = sizes
            .size_class(record.employees.map(|e| e as i64))
            .expect("stored employee counts are non-negative")
            .to_string();
        let tech = tech_category(&record.nace, config.digits)?;
        categorized.push(CategorizedRecord {
            group,
            geo: city.name,
            size,
            tech,
        });
    }
    Ok(categorized)
}

fn run_decomposition(
    categorized: &[CategorizedRecord],
    config: &AnalysisConfig,
) -> Result<SynergyReport> {
    let description = config.filter_description();
    match config.threads {
        None => decompose(categorized, &description),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
            pool.install(|| decompose(categorized, &description))
        }
    }
}

fn write_outputs(
    report: &SynergyReport,
    audit: &AuditBlock,
    config: &AnalysisConfig,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&config.out_dir)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<()> {
        let path = config.out_dir.join(name);
        fs::write(&path, contents)?;
        written.push(path);
        Ok(())
    };

    for format in &config.formats {
        match format {
            OutputFormat::Text => emit("report.txt", render_table(report, TableStyle::Text))?,
            OutputFormat::Csv => emit("report.csv", render_table(report, TableStyle::Csv))?,
            OutputFormat::Json => emit("report.json", render_table(report, TableStyle::Json))?,
        }
    }
    emit(
        &format!("regions_level{}.csv", config.level.number()),
        export_region_values(report, config.level.number()),
    )?;
    let mut audit_json = serde_json::to_string_pretty(audit)?;
    audit_json.push('\n');
    emit("audit.json", audit_json)?;
    Ok(written)
}

/// Read a labeled (label, value) series for `correlate`: two-column CSV,
/// with or without a header row.
pub fn read_series<R: Read>(reader: R) -> Result<Vec<(String, f64)>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(reader);
    let mut series = Vec::new();
    for (i, row) in csv_reader.records().enumerate() {
        let row = row?;
        if row.len() < 2 {
            return Err(Error::Validation(format!(
                "series row {} needs label and value",
                i + 1
            )));
        }
        let label = row.get(0).unwrap_or("").trim().to_string();
        let value_text = row.get(1).unwrap_or("").trim();
        match value_text.parse::<f64>() {
            Ok(value) => series.push((label, value)),
            // tolerate a single header row
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(Error::Validation(format!(
                    "series row {}: bad value {value_text:?}",
                    i + 1
                )))
            }
        }
    }
    if series.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(series)
}
