//! Python bindings for the synergy analysis library.
//!
//! Exposes the core operations over plain Python types: entropy and
//! transmission over (geo, size, tech) triples, the grouped decomposition,
//! the taxonomy lookups, rank correlations, and the synthetic generator.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use synergy_core::decompose::CategorizedRecord;
use synergy_core::entropy::{self, Axis, ContingencyTensor, Distribution};
use synergy_core::synth::{generate_dataset, records_to_csv_string, PopulationSpec};
use synergy_core::taxonomy::{GeoHierarchy, SectorScheme, SizeClassScheme};
use synergy_core::{correlate, oracle};

fn value_error(error: synergy_core::Error) -> PyErr {
    PyValueError::new_err(error.to_string())
}

fn parse_axis(name: &str) -> PyResult<Axis> {
    match name.to_ascii_lowercase().as_str() {
        "geo" | "g" | "geography" => Ok(Axis::Geo),
        "org" | "o" | "size" => Ok(Axis::Org),
        "tech" | "t" | "technology" => Ok(Axis::Tech),
        other => Err(PyValueError::new_err(format!(
            "unknown axis {other:?}; use geo, org or tech"
        ))),
    }
}

fn tensor_from(triples: &[(String, String, String)]) -> PyResult<ContingencyTensor> {
    ContingencyTensor::from_triples(
        triples
            .iter()
            .map(|(g, o, t)| (g.as_str(), o.as_str(), t.as_str())),
    )
    .map_err(value_error)
}

/// Shannon entropy of a probability distribution, in bits.
#[pyfunction]
fn shannon_entropy(probabilities: Vec<f64>) -> PyResult<f64> {
    let d = Distribution::new(probabilities).map_err(value_error)?;
    Ok(entropy::entropy(&d).bits())
}

/// Mutual information between two axes of the (geo, size, tech) triples,
/// in bits.
#[pyfunction]
fn transmission2(
    triples: Vec<(String, String, String)>,
    axis_a: &str,
    axis_b: &str,
) -> PyResult<f64> {
    let tensor = tensor_from(&triples)?;
    tensor
        .transmission2((parse_axis(axis_a)?, parse_axis(axis_b)?))
        .map(|v| v.bits())
        .map_err(value_error)
}

/// Signed three-way transmission in bits; negative values indicate synergy.
#[pyfunction]
fn transmission3(triples: Vec<(String, String, String)>) -> PyResult<f64> {
    let tensor = tensor_from(&triples)?;
    tensor.transmission3().map(|v| v.bits()).map_err(value_error)
}

/// Expected within-slice transmission of a pair given the third axis.
#[pyfunction]
fn conditional_transmission2(
    triples: Vec<(String, String, String)>,
    axis_a: &str,
    axis_b: &str,
    given: &str,
) -> PyResult<f64> {
    let tensor = tensor_from(&triples)?;
    tensor
        .conditional_transmission2((parse_axis(axis_a)?, parse_axis(axis_b)?), parse_axis(given)?)
        .map(|v| v.bits())
        .map_err(value_error)
}

/// Brute-force three-way transmission from per-term frequency maps; exists
/// as an independent check on `transmission3`.
#[pyfunction]
fn oracle_transmission3(triples: Vec<(String, String, String)>) -> PyResult<f64> {
    oracle::oracle_transmission3(
        triples
            .iter()
            .map(|(g, o, t)| (g.as_str(), o.as_str(), t.as_str())),
    )
    .map_err(value_error)
}

/// Decompose grouped (group, geo, size, tech) records. Returns a dict with
/// total/sum/residual in millibits and the sorted per-group contributions.
#[pyfunction]
#[pyo3(signature = (records, filter_description = ""))]
fn decompose<'py>(
    py: Python<'py>,
    records: Vec<(String, String, String, String)>,
    filter_description: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let records: Vec<CategorizedRecord> = records
        .into_iter()
        .map(|(group, geo, size, tech)| CategorizedRecord {
            group,
            geo,
            size,
            tech,
        })
        .collect();
    let report =
        synergy_core::decompose::decompose(&records, filter_description).map_err(value_error)?;

    let out = PyDict::new(py);
    out.set_item("total_t_mbit", report.total_t.millibits())?;
    out.set_item("n_total", report.n_total)?;
    out.set_item("sum_delta_t_mbit", report.sum_delta_t.millibits())?;
    out.set_item("t0_mbit", report.t0.millibits())?;
    out.set_item("share_above_group_pct", report.share_above_group)?;
    out.set_item("filter_description", report.filter_description)?;
    let groups = PyList::empty(py);
    for group in &report.groups {
        let g = PyDict::new(py);
        g.set_item("label", &group.label)?;
        g.set_item("n", group.n)?;
        g.set_item("t_g_mbit", group.t_g.millibits())?;
        g.set_item("delta_t_mbit", group.delta_t.millibits())?;
        groups.append(g)?;
    }
    out.set_item("groups", groups)?;
    Ok(out)
}

/// Size-class label for an employee count (None and 0/1 share the first
/// class).
#[pyfunction]
#[pyo3(signature = (employees))]
fn size_class(employees: Option<i64>) -> PyResult<String> {
    SizeClassScheme::bundled()
        .size_class(employees)
        .map(String::from)
        .map_err(value_error)
}

/// Sector class of a NACE code, plus the high-tech-services flag.
#[pyfunction]
fn classify_sector(nace: &str) -> PyResult<(String, bool)> {
    let label = SectorScheme::bundled()
        .classify_sector(nace)
        .map_err(value_error)?;
    Ok((label.class.to_string(), label.high_tech_services))
}

/// Truncate a NACE code to the technology-axis granularity.
#[pyfunction]
fn tech_category(nace: &str, digits: usize) -> PyResult<String> {
    synergy_core::taxonomy::tech_category(nace, digits).map_err(value_error)
}

/// Standardize a raw city name; the second element is False for names the
/// hierarchy does not know.
#[pyfunction]
fn normalize_city(raw: &str) -> PyResult<(String, bool)> {
    let n = GeoHierarchy::bundled()
        .normalize_city(raw)
        .map_err(value_error)?;
    Ok((n.name, n.known))
}

/// Region label of a canonical city at level 1 (province), 2 (prefecture)
/// or 3 (the city itself); None when unresolvable at that level.
#[pyfunction]
fn resolve_geo(city: &str, level: u8) -> PyResult<Option<String>> {
    GeoHierarchy::bundled()
        .resolve_geo(city, level)
        .map_err(value_error)
}

/// (pearson, spearman) over the label intersection of two (label, value)
/// series; Spearman uses mid-ranks for ties.
#[pyfunction]
fn rank_correlations(
    a: Vec<(String, f64)>,
    b: Vec<(String, f64)>,
) -> PyResult<(f64, f64)> {
    let c = correlate::rank_correlations(&a, &b).map_err(value_error)?;
    Ok((c.pearson, c.spearman))
}

/// Generate a synthetic firm CSV (the layout ingestion reads) from a TOML
/// population spec.
#[pyfunction]
fn generate_csv(spec_toml: &str) -> PyResult<String> {
    let spec = PopulationSpec::from_toml_str(spec_toml).map_err(value_error)?;
    let records = generate_dataset(&spec).map_err(value_error)?;
    records_to_csv_string(&records).map_err(value_error)
}

#[pymodule]
fn synergy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(transmission2, m)?)?;
    m.add_function(wrap_pyfunction!(transmission3, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_transmission2, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_transmission3, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(size_class, m)?)?;
    m.add_function(wrap_pyfunction!(classify_sector, m)?)?;
    m.add_function(wrap_pyfunction!(tech_category, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_city, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_geo, m)?)?;
    m.add_function(wrap_pyfunction!(rank_correlations, m)?)?;
    m.add_function(wrap_pyfunction!(generate_csv, m)?)?;
    Ok(())
}
