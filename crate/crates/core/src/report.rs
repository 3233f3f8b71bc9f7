//! Rendering of synergy reports: sorted contribution tables in millibits
//! (two decimals in text and CSV, full precision in JSON) and the
//! choropleth-ready region-value export.

use serde::{Deserialize, Serialize};

use crate::decompose::SynergyReport;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableStyle {
    Text,
    Csv,
    Json,
}

/// Two-decimal rendering that never prints "-0.00".
pub fn format_millibits(value: f64) -> String {
    let rounded = (value * 100.0).round() / 100.0 + 0.0;
    format!("{rounded:.2}")
}

/// Render the report. Groups are already sorted by ascending contribution;
/// the bottom rows carry the summed contributions, the pooled total, and the
/// between-group residual, in that order.
pub fn render_table(report: &SynergyReport, style: TableStyle) -> String {
    match style {
        TableStyle::Text => render_text(report),
        TableStyle::Csv => render_csv(report),
        TableStyle::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// Inverse of the JSON style of [`render_table`].
pub fn parse_report_json(text: &str) -> Result<SynergyReport> {
    Ok(serde_json::from_str(text)?)
}

fn render_text(report: &SynergyReport) -> String {
    let label_width = report
        .groups
        .iter()
        .map(|g| g.label.len())
        .chain([24])
        .max()
        .unwrap();
    let mut out = String::new();
    out.push_str(&format!("filter: {}\n", report.filter_description));
    out.push_str(&format!(
        "{:<label_width$}  {:>10}  {:>14}  {:>12}\n",
        "group", "n", "T_G (mbit)", "dT (mbit)"
    ));
    for group in &report.groups {
        out.push_str(&format!(
            "{:<label_width$}  {:>10}  {:>14}  {:>12}\n",
            group.label,
            group.n,
            format_millibits(group.t_g.millibits()),
            format_millibits(group.delta_t.millibits())
        ));
    }
    out.push_str(&format!(
        "{:<label_width$}  {:>10}  {:>14}  {:>12}\n",
        "sum of contributions",
        "",
        "",
        format_millibits(report.sum_delta_t.millibits())
    ));
    out.push_str(&format!(
        "{:<label_width$}  {:>10}  {:>14}  {:>12}\n",
        "total",
        report.n_total,
        "",
        format_millibits(report.total_t.millibits())
    ));
    out.push_str(&format!(
        "{:<label_width$}  {:>10}  {:>14}  {:>12}\n",
        "T0 (between groups)",
        "",
        "",
        format_millibits(report.t0.millibits())
    ));
    if let Some(share) = report.share_above_group {
        out.push_str(&format!("share above groups: {share:.1}%\n"));
    }
    out
}

fn render_csv(report: &SynergyReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["group", "n", "t_g_mbit", "delta_t_mbit"])
        .expect("csv");
    for group in &report.groups {
        w.write_record([
            group.label.clone(),
            group.n.to_string(),
            format_millibits(group.t_g.millibits()),
            format_millibits(group.delta_t.millibits()),
        ])
        .expect("csv");
    }
    w.write_record([
        "(sum of contributions)".to_string(),
        String::new(),
        String::new(),
        format_millibits(report.sum_delta_t.millibits()),
    ])
    .expect("csv");
    w.write_record([
        "(total)".to_string(),
        report.n_total.to_string(),
        String::new(),
        format_millibits(report.total_t.millibits()),
    ])
    .expect("csv");
    w.write_record([
        "(t0 between groups)".to_string(),
        String::new(),
        String::new(),
        format_millibits(report.t0.millibits()),
    ])
    .expect("csv");
    String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
}

/// Region-value CSV keyed by canonical region label, joinable to the
/// attribute table of any shapefile or GeoJSON of the same level. One row per
/// group plus summary rows for the total and the residual.
pub fn export_region_values(report: &SynergyReport, level: u8) -> String {
    let sum_delta = report.sum_delta_t.millibits();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "region",
        "level",
        "n",
        "t_g_mbit",
        "delta_t_mbit",
        "share_of_contributions_pct",
    ])
    .expect("csv");
    for group in &report.groups {
        let share = if sum_delta != 0.0 {
            format_millibits(100.0 * group.delta_t.millibits() / sum_delta)
        } else {
            String::new()
        };
        w.write_record([
            group.label.clone(),
            level.to_string(),
            group.n.to_string(),
            format_millibits(group.t_g.millibits()),
            format_millibits(group.delta_t.millibits()),
            share,
        ])
        .expect("csv");
    }
    w.write_record([
        "(total)".to_string(),
        level.to_string(),
        report.n_total.to_string(),
        String::new(),
        format_millibits(report.total_t.millibits()),
        String::new(),
    ])
    .expect("csv");
    w.write_record([
        "(t0 between groups)".to_string(),
        level.to_string(),
        String::new(),
        String::new(),
        format_millibits(report.t0.millibits()),
        String::new(),
    ])
    .expect("csv");
    String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
}
