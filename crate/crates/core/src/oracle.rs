//! Independent brute-force evaluation of the three-way transmission.
//!
//! This module deliberately shares no tensor or entropy code with
//! [`crate::entropy`]: each of the seven entropy terms is computed from its
//! own frequency map built directly from the raw record list. It exists so
//! the tensor path can be checked against a second, structurally different
//! derivation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

// Separator that cannot occur in category labels read from CSV fields.
const SEP: char = '\u{1f}';

/// Three-way transmission in bits, derived term by term from frequency maps.
pub fn oracle_transmission3<'a, I>(records: I) -> Result<f64>
where
    I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
{
    let records: Vec<(&str, &str, &str)> = records.into_iter().collect();
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = records.len() as f64;

    let h_g = freq_entropy(records.iter().map(|r| r.0.to_string()), n);
    let h_o = freq_entropy(records.iter().map(|r| r.1.to_string()), n);
    let h_t = freq_entropy(records.iter().map(|r| r.2.to_string()), n);
    let h_go = freq_entropy(records.iter().map(|r| join2(r.0, r.1)), n);
    let h_gt = freq_entropy(records.iter().map(|r| join2(r.0, r.2)), n);
    let h_ot = freq_entropy(records.iter().map(|r| join2(r.1, r.2)), n);
    let h_got = freq_entropy(
        records.iter().map(|r| format!("{}{SEP}{}{SEP}{}", r.0, r.1, r.2)),
        n,
    );

    Ok(h_g + h_o + h_t - h_go - h_gt - h_ot + h_got)
}

fn join2(a: &str, b: &str) -> String {
    format!("{a}{SEP}{b}")
}

fn freq_entropy(keys: impl Iterator<Item = String>, n: f64) -> f64 {
    let mut freq: BTreeMap<String, u64> = BTreeMap::new();
    for key in keys {
        *freq.entry(key).or_insert(0) += 1;
    }
    let mut h = 0.0;
    for &count in freq.values() {
        let p = count as f64 / n;
        h -= p * p.log2();
    }
    h
}
