//! Categorical schemes for firm attributes: employee-count size classes,
//! NACE Rev. 2 sector classes, and the geographic hierarchy with city-name
//! standardization.
//!
//! All three schemes ship as plain-text tab-separated data files (with `#`
//! comments) bundled into the binary, so alternative national classifications
//! can be swapped in without code changes. Schemes are immutable after load
//! and safe to share across threads.

mod geo;
mod sector;
mod size;

pub use geo::{GeoHierarchy, NormalizedCity};
pub use sector::{normalize_nace, tech_category, SectorClass, SectorLabel, SectorScheme};
pub use size::SizeClassScheme;

/// Iterate the data lines of a TSV scheme file, skipping blanks and `#`
/// comments. Yields (1-based line number, line).
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')))
        .filter(|(_, line)| {
            let t = line.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}
