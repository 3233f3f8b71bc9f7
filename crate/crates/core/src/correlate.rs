//! Pearson and Spearman correlations between labeled value series, for
//! comparing synergy contributions against external regional indicators.
//!
//! Series are joined on their labels; Spearman uses mid-ranks for ties.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankCorrelation {
    pub pearson: f64,
    pub spearman: f64,
    /// Number of labels common to both series.
    pub n: usize,
}

/// Correlate two labeled series over the intersection of their labels.
///
/// Errors when fewer than 3 labels are shared or a series has zero variance
/// on the intersection.
pub fn rank_correlations(a: &[(String, f64)], b: &[(String, f64)]) -> Result<RankCorrelation> {
    for (label, value) in a.iter().chain(b) {
        if !value.is_finite() {
            return Err(Error::Validation(format!(
                "non-finite value for label {label:?}"
            )));
        }
    }
    let b_by_label: HashMap<&str, f64> = b.iter().map(|(l, v)| (l.as_str(), *v)).collect();
    // intersect, then sort by label so the pairing order is reproducible
    let mut paired: Vec<(&str, f64, f64)> = a
        .iter()
        .filter_map(|(label, va)| {
            b_by_label
                .get(label.as_str())
                .map(|vb| (label.as_str(), *va, *vb))
        })
        .collect();
    paired.sort_by(|x, y| x.0.cmp(y.0));
    paired.dedup_by(|x, y| x.0 == y.0);
    if paired.len() < 3 {
        return Err(Error::Validation(format!(
            "series share only {} labels; need at least 3",
            paired.len()
        )));
    }
    let xs: Vec<f64> = paired.iter().map(|p| p.1).collect();
    let ys: Vec<f64> = paired.iter().map(|p| p.2).collect();
    Ok(RankCorrelation {
        pearson: pearson(&xs, &ys)?,
        spearman: pearson(&midranks(&xs), &midranks(&ys))?,
        n: paired.len(),
    })
}

/// Plain product-moment correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mean_x: f64 = xs.iter().sum::<f64>() / n;
    let mean_y: f64 = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::Validation(
            "correlation undefined for a constant series".into(),
        ));
    }
    Ok(cov / (var_x * var_y).sqrt())
}

/// 1-based ranks with ties assigned the mean rank of their run.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end+1 share their mean
        let rank = (start + 1 + end + 1) as f64 / 2.0;
        for &idx in &order[start..=end] {
            ranks[idx] = rank;
        }
        start = end + 1;
    }
    ranks
}
