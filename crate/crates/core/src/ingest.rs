//! CSV ingestion of firm-record extracts: schema mapping, field validation,
//! year filtering, and dataset profiling with exclusion accounting.
//!
//! Parsing is conservative: every data row either becomes exactly one
//! `FirmRecord` or exactly one `IngestIssue`, so `records + issues` always
//! equals the number of parsed rows.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::ops::RangeInclusive;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxonomy::{normalize_nace, GeoHierarchy, SizeClassScheme};

/// Years outside this window are treated as corrupt fields.
pub const YEAR_WINDOW: RangeInclusive<i32> = 1990..=2030;

/// One firm observation. A firm present in several years contributes one
/// record per year; records are never deduplicated, which affects N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirmRecord {
    pub firm_id: String,
    pub year: i32,
    pub city_raw: String,
    /// Dot-stripped, validated 2-4 digit NACE code.
    pub nace: String,
    pub employees: Option<u64>,
}

/// Why a row was excluded. Every excluded row has exactly one primary reason.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IssueReason {
    MissingCity,
    InvalidNace,
    NegativeEmployees,
    UnparseableRow,
    UnresolvedGeography,
}

impl fmt::Display for IssueReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            IssueReason::MissingCity => "missing city",
            IssueReason::InvalidNace => "invalid NACE",
            IssueReason::NegativeEmployees => "negative employees",
            IssueReason::UnparseableRow => "unparseable row",
            IssueReason::UnresolvedGeography => "unresolved geography",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestIssue {
    /// 1-based data-row number (the header is row 0).
    pub row: u64,
    pub field: String,
    pub reason: IssueReason,
}

/// Maps the five logical fields to the column headers of a concrete extract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub firm_id: String,
    pub year: String,
    pub city: String,
    pub nace: String,
    pub employees: String,
}

impl ColumnSchema {
    /// Canonical headers, used when no schema file is supplied and by the
    /// synthetic generator.
    pub fn canonical() -> ColumnSchema {
        ColumnSchema {
            firm_id: "firm_id".into(),
            year: "year".into(),
            city: "city".into(),
            nace: "nace".into(),
            employees: "employees".into(),
        }
    }

    /// Load a schema file: tab-separated `logical_field <TAB> header` lines,
    /// `#` comments allowed. All five logical fields must be mapped.
    pub fn from_path(path: &Path) -> Result<ColumnSchema> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_impl(&text, path)
    }

    fn from_str_impl(text: &str, origin: &Path) -> Result<ColumnSchema> {
        let mut map: BTreeMap<&str, String> = BTreeMap::new();
        for (lineno, line) in crate::taxonomy::data_lines(text) {
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::Scheme {
                    path: origin.to_path_buf(),
                    message: format!("line {lineno}: expected logical_field, header"),
                });
            }
            map.insert(
                match fields[0] {
                    f @ ("firm_id" | "year" | "city" | "nace" | "employees") => f,
                    other => {
                        return Err(Error::Scheme {
                            path: origin.to_path_buf(),
                            message: format!("line {lineno}: unknown logical field {other:?}"),
                        })
                    }
                },
                fields[1].to_string(),
            );
        }
        let get = |key: &str| -> Result<String> {
            map.get(key).cloned().ok_or_else(|| Error::Scheme {
                path: origin.to_path_buf(),
                message: format!("logical field {key:?} is not mapped"),
            })
        };
        Ok(ColumnSchema {
            firm_id: get("firm_id")?,
            year: get("year")?,
            city: get("city")?,
            nace: get("nace")?,
            employees: get("employees")?,
        })
    }
}

struct ColumnIndexes {
    firm_id: usize,
    year: usize,
    city: usize,
    nace: usize,
    employees: usize,
}

impl ColumnIndexes {
    fn resolve(headers: &csv::StringRecord, schema: &ColumnSchema) -> Result<ColumnIndexes> {
        let find = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::Config(format!("required column {name:?} not in header")))
        };
        Ok(ColumnIndexes {
            firm_id: find(&schema.firm_id)?,
            year: find(&schema.year)?,
            city: find(&schema.city)?,
            nace: find(&schema.nace)?,
            employees: find(&schema.employees)?,
        })
    }
}

/// Parse a firm CSV stream. Rows that fail validation become issues; record
/// order follows the input. A missing required column is a fatal
/// configuration error.
pub fn parse_records<R: Read>(
    reader: R,
    schema: &ColumnSchema,
) -> Result<(Vec<FirmRecord>, Vec<IngestIssue>)> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let columns = ColumnIndexes::resolve(&headers, schema)?;

    let mut records = Vec::new();
    let mut issues = Vec::new();
    for (i, row) in csv_reader.records().enumerate() {
        let row_number = (i + 1) as u64;
        let row = match row {
            Ok(row) => row,
            Err(_) => {
                issues.push(IngestIssue {
                    row: row_number,
                    field: "(row)".into(),
                    reason: IssueReason::UnparseableRow,
                });
                continue;
            }
        };
        match parse_row(&row, &columns, row_number) {
            Ok(record) => records.push(record),
            Err(issue) => issues.push(issue),
        }
    }
    Ok((records, issues))
}

fn parse_row(
    row: &csv::StringRecord,
    columns: &ColumnIndexes,
    row_number: u64,
) -> std::result::Result<FirmRecord, IngestIssue> {
    let issue = |field: &str, reason: IssueReason| IngestIssue {
        row: row_number,
        field: field.into(),
        reason,
    };
    let field = |idx: usize| row.get(idx).unwrap_or("").trim();

    let year: i32 = field(columns.year)
        .parse()
        .map_err(|_| issue("year", IssueReason::UnparseableRow))?;
    if !YEAR_WINDOW.contains(&year) {
        return Err(issue("year", IssueReason::UnparseableRow));
    }

    let city_raw = field(columns.city);
    if city_raw.is_empty() {
        return Err(issue("city", IssueReason::MissingCity));
    }

    let nace = normalize_nace(field(columns.nace))
        .map_err(|_| issue("nace", IssueReason::InvalidNace))?;

    let employees = match field(columns.employees) {
        "" | "n.a." | "na" | "NA" | "N/A" | "n/a" | "-" => None,
        text => match text.parse::<i64>() {
            Ok(n) if n < 0 => return Err(issue("employees", IssueReason::NegativeEmployees)),
            Ok(n) => Some(n as u64),
            Err(_) => return Err(issue("employees", IssueReason::UnparseableRow)),
        },
    };

    Ok(FirmRecord {
        firm_id: field(columns.firm_id).to_string(),
        year,
        city_raw: city_raw.to_string(),
        nace,
        employees,
    })
}

/// Keep records whose year lies in the inclusive range; the second value is
/// the number of records dropped.
pub fn filter_window(
    records: Vec<FirmRecord>,
    years: &RangeInclusive<i32>,
) -> (Vec<FirmRecord>, u64) {
    let before = records.len();
    let kept: Vec<FirmRecord> = records
        .into_iter()
        .filter(|r| years.contains(&r.year))
        .collect();
    let dropped = (before - kept.len()) as u64;
    (kept, dropped)
}

/// Histograms over the included records plus exclusion counts from the
/// ingest issues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub included: u64,
    pub by_year: BTreeMap<i32, u64>,
    /// All size classes in scheme order, zero counts included.
    pub by_size_class: Vec<(String, u64)>,
    /// Province histogram; cities that cannot be resolved land in
    /// the "(unresolved)" bucket so the histogram still sums to `included`.
    pub by_province: BTreeMap<String, u64>,
    pub exclusions: BTreeMap<String, u64>,
}

pub const UNRESOLVED_BUCKET: &str = "(unresolved)";

pub fn dataset_profile(
    records: &[FirmRecord],
    issues: &[IngestIssue],
    sizes: &SizeClassScheme,
    geo: &GeoHierarchy,
) -> DatasetProfile {
    let mut by_year = BTreeMap::new();
    let mut by_size: BTreeMap<&str, u64> = BTreeMap::new();
    let mut by_province = BTreeMap::new();
    for record in records {
        *by_year.entry(record.year).or_insert(0) += 1;
        let class = sizes
            .size_class(record.employees.map(|e| e as i64))
            .expect("stored employee counts are non-negative");
        *by_size.entry(class).or_insert(0) += 1;
        let province = geo
            .normalize_city(&record.city_raw)
            .ok()
            .filter(|n| n.known)
            .and_then(|n| geo.resolve_geo(&n.name, 1).expect("level 1 is valid"))
            .unwrap_or_else(|| UNRESOLVED_BUCKET.to_string());
        *by_province.entry(province).or_insert(0) += 1;
    }
    let by_size_class = sizes
        .labels()
        .into_iter()
        .map(|label| (label.to_string(), by_size.get(label).copied().unwrap_or(0)))
        .collect();
    let mut exclusions = BTreeMap::new();
    for issue in issues {
        *exclusions.entry(issue.reason.to_string()).or_insert(0) += 1;
    }
    DatasetProfile {
        included: records.len() as u64,
        by_year,
        by_size_class,
        by_province,
        exclusions,
    }
}

impl DatasetProfile {
    pub fn excluded_total(&self) -> u64 {
        self.exclusions.values().sum()
    }

    /// Percentage of `count` against the included total, or 0 when empty.
    pub fn percent(&self, count: u64) -> f64 {
        if self.included == 0 {
            0.0
        } else {
            100.0 * count as f64 / self.included as f64
        }
    }
}

/// Render issues as CSV (row, field, reason).
pub fn issues_to_csv(issues: &[IngestIssue]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["row", "field", "reason"]).expect("csv");
    for issue in issues {
        w.write_record([
            issue.row.to_string(),
            issue.field.clone(),
            issue.reason.to_string(),
        ])
        .expect("csv");
    }
    String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
}

/// Render a profile as CSV with one-decimal percentages, section by section.
pub fn profile_to_csv(profile: &DatasetProfile) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["section", "key", "count", "percent"]).expect("csv");
    {
        let mut write = |section: &str, key: &str, count: u64, pct: Option<f64>| {
            w.write_record([
                section,
                key,
                &count.to_string(),
                &pct.map(|p| format!("{p:.1}")).unwrap_or_default(),
            ])
            .expect("csv");
        };
        write("total", "included", profile.included, None);
        for (reason, count) in &profile.exclusions {
            write("excluded", reason, *count, None);
        }
        for (year, count) in &profile.by_year {
            write("year", &year.to_string(), *count, Some(profile.percent(*count)));
        }
        for (label, count) in &profile.by_size_class {
            write("size_class", label, *count, Some(profile.percent(*count)));
        }
        for (province, count) in &profile.by_province {
            write("province", province, *count, Some(profile.percent(*count)));
        }
    }
    String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
}
